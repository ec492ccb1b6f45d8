use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use elliptic_cli::catalog;
use elliptic_cli::manifest::{check_config, family_choice, parse_manifest, Format, Manifest, Params, Source};
use elliptic_cli::pipeline::{self, render, CliError};
use elliptic_core::Side;

#[derive(Parser)]
#[command(name = "elliptic", version, about = "Contact structures on elliptic 3-manifolds S3/G")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Close the generators and print the group file.
    Construct(GroupArgs),
    /// Classify G into one of the seven cases.
    Classify(GroupArgs),
    /// Homology, framing and contact verdicts.
    Report(GroupArgs),
    /// Numerical checks of the contact geometry.
    Verify(GroupArgs),
    /// Every free group up to a given order.
    Catalog(CatalogArgs),
}

#[derive(Args)]
struct GroupArgs {
    /// JSON manifest; other flags override its settings.
    #[arg(long)]
    manifest: Option<PathBuf>,
    #[arg(long, conflicts_with = "manifest")]
    family: Option<String>,
    #[arg(long, requires = "family")]
    side: Option<Side>,
    #[arg(long, requires = "family")]
    m: Option<u32>,
    #[arg(long, requires = "family")]
    n: Option<u32>,
    #[arg(long, requires = "family")]
    k: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct CatalogArgs {
    #[arg(long, default_value_t = 240)]
    max_order: u64,
    /// Directory for catalog.csv and catalog.json; stdout if absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Accepted for uniformity with the other commands; the catalog is exact
    /// and draws no samples.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

fn io_err(path: &std::path::Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn load(args: &GroupArgs) -> Result<Manifest, CliError> {
    let mut m = if let Some(path) = &args.manifest {
        let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
        parse_manifest(&text)?
    } else if let Some(name) = &args.family {
        let params = Params { m: args.m, n: args.n, k: args.k };
        let choice = family_choice(name, args.side, &params)?;
        Manifest {
            source: Source::Family(choice),
            seed: 42,
            samples: 1000,
            tol: 1e-9,
            format: None,
            out: None,
        }
    } else {
        return Err(CliError::Manifest(elliptic_cli::manifest::ManifestError::Validation(
            "one of --manifest or --family is required".to_string(),
        )));
    };
    m.seed = args.seed.unwrap_or(m.seed);
    m.samples = args.samples.unwrap_or(m.samples);
    m.tol = args.tol.unwrap_or(m.tol);
    m.format = args.format.or(m.format);
    m.out = args.out.clone().or(m.out);
    check_config(m.samples, m.tol)?;
    Ok(m)
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Catalog(a) => {
            let rows = catalog::build_catalog(a.max_order, a.threads)?;
            match &a.out {
                Some(dir) => catalog::write_catalog(&rows, dir),
                None => emit(&catalog::render(&rows, a.format)?, None),
            }
        }
        Command::Construct(a) => {
            let m = load(&a)?;
            emit(&render(&pipeline::run_construct(&m)?, m.format.unwrap_or_default())?, m.out.as_ref())
        }
        Command::Classify(a) => {
            let m = load(&a)?;
            emit(&render(&pipeline::run_classify(&m)?, m.format.unwrap_or_default())?, m.out.as_ref())
        }
        Command::Report(a) => {
            let m = load(&a)?;
            emit(&render(&pipeline::run_report(&m)?, m.format.unwrap_or_default())?, m.out.as_ref())
        }
        Command::Verify(a) => {
            let m = load(&a)?;
            emit(&render(&pipeline::run_verify(&m)?, m.format.unwrap_or_default())?, m.out.as_ref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
