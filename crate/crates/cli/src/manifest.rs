//! Run manifests: which group to build and how to verify and emit it.

use std::path::PathBuf;

use elliptic_core::{Error, FamilySpec, Side, SpinPair};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub k: Option<u32>,
}

/// A named family with the side its named factor acts on. For diagonal
/// families the builder's native placement is right; `left` means the
/// orientation-reversed group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyChoice {
    pub spec: FamilySpec,
    pub swap: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Family(FamilyChoice),
    Generators { conductor: u32, generators: Vec<SpinPair> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub source: Source,
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Raw {
    family: Option<String>,
    side: Option<Side>,
    #[serde(default)]
    params: Params,
    conductor: Option<u32>,
    generators: Option<Vec<SpinPair>>,
    seed: Option<u64>,
    samples: Option<usize>,
    tol: Option<f64>,
    format: Option<Format>,
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManifestError {
    Parse(String),
    Validation(String),
}

impl std::fmt::Display for ManifestError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ManifestError::Parse(s) => write!(f, "parse error: {s}"),
            ManifestError::Validation(s) => write!(f, "validation error: {s}"),
        }
    }
}

impl std::error::Error for ManifestError {}

fn need(v: Option<u32>, name: &str, family: &str) -> Result<u32, ManifestError> {
    v.ok_or_else(|| ManifestError::Validation(format!("{family} requires parameter {name}")))
}

/// Builds the family spec for `name`. Polyhedral and quaternionic families
/// take an optional coprime cyclic factor `m` on the other side.
pub fn family_choice(name: &str, side: Option<Side>, p: &Params) -> Result<FamilyChoice, ManifestError> {
    let one_sided = side.unwrap_or(Side::Left);
    let unexpected = |allowed: &[&str]| -> Result<(), ManifestError> {
        for (key, v) in [("m", p.m), ("n", p.n), ("k", p.k)] {
            if v.is_some() && !allowed.contains(&key) {
                return Err(ManifestError::Validation(format!("{name} does not take parameter {key}")));
            }
        }
        Ok(())
    };
    let with_cyclic = |base: FamilySpec| match p.m {
        Some(m) if m != 1 => FamilySpec::ProductWithCyclic { base: Box::new(base), m },
        _ => base,
    };
    let (spec, swap) = match name.to_ascii_lowercase().as_str() {
        "cyclic" => {
            unexpected(&["n"])?;
            (FamilySpec::Cyclic { n: need(p.n, "n", name)?, side: one_sided }, false)
        }
        "quaternionic" => {
            unexpected(&["n", "m"])?;
            (with_cyclic(FamilySpec::Quaternionic { n: need(p.n, "n", name)?, side: one_sided }), false)
        }
        "bint" => {
            unexpected(&["m"])?;
            (with_cyclic(FamilySpec::BinT { side: one_sided }), false)
        }
        "bino" => {
            unexpected(&["m"])?;
            (with_cyclic(FamilySpec::BinO { side: one_sided }), false)
        }
        "bini" => {
            unexpected(&["m"])?;
            (with_cyclic(FamilySpec::BinI { side: one_sided }), false)
        }
        "diagonalq" => (
            FamilySpec::DiagonalQ { m: p.m.unwrap_or(1), n: need(p.n, "n", name)?, k: p.k.unwrap_or(3) },
            side == Some(Side::Left),
        ),
        "diagonalt" => {
            unexpected(&["m", "k"])?;
            (FamilySpec::DiagonalT { m: p.m.unwrap_or(1), k: p.k.unwrap_or(2) }, side == Some(Side::Left))
        }
        _ => {
            return Err(ManifestError::Validation(format!(
                "unknown family {name:?}; expected Cyclic, Quaternionic, BinT, BinO, BinI, DiagonalQ or DiagonalT"
            )))
        }
    };
    spec.validate().map_err(|e| match e {
        Error::ConstraintViolated(s) => ManifestError::Validation(s),
        other => ManifestError::Validation(other.to_string()),
    })?;
    Ok(FamilyChoice { spec, swap })
}

pub fn parse_manifest(text: &str) -> Result<Manifest, ManifestError> {
    let raw: Raw = serde_json::from_str(text).map_err(|e| ManifestError::Parse(e.to_string()))?;
    let source = match (raw.family, raw.generators) {
        (Some(_), Some(_)) => {
            return Err(ManifestError::Validation("give either family or generators, not both".into()))
        }
        (None, None) => return Err(ManifestError::Validation("one of family or generators is required".into())),
        (Some(name), None) => {
            if raw.conductor.is_some() {
                return Err(ManifestError::Validation("conductor only applies to raw generators".into()));
            }
            Source::Family(family_choice(&name, raw.side, &raw.params)?)
        }
        (None, Some(generators)) => {
            if raw.side.is_some() || raw.params != Params::default() {
                return Err(ManifestError::Validation("side and params only apply to families".into()));
            }
            let conductor = match raw.conductor {
                Some(c) => c,
                None => generators
                    .first()
                    .map(SpinPair::conductor)
                    .ok_or_else(|| ManifestError::Validation("empty generator list needs a conductor".into()))?,
            };
            if let Some(g) = generators.iter().find(|g| g.conductor() != conductor) {
                return Err(ManifestError::Validation(format!(
                    "generator conductor {} differs from {conductor}",
                    g.conductor()
                )));
            }
            Source::Generators { conductor, generators }
        }
    };
    let m = Manifest {
        source,
        seed: raw.seed.unwrap_or(42),
        samples: raw.samples.unwrap_or(1000),
        tol: raw.tol.unwrap_or(1e-9),
        format: raw.format,
        out: raw.out,
    };
    check_config(m.samples, m.tol)?;
    Ok(m)
}

pub fn check_config(samples: usize, tol: f64) -> Result<(), ManifestError> {
    if samples == 0 {
        return Err(ManifestError::Validation("samples must be positive".into()));
    }
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(ManifestError::Validation("tol must be positive".into()));
    }
    Ok(())
}
