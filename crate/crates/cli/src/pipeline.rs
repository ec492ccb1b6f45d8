//! construct -> is_free -> classify -> contact verdicts -> framing, and verify.

use elliptic_core::numeric::report::{run_verification, VerificationReport, VerifyConfig};
use elliptic_core::oracle::both_orientations_possible;
use elliptic_core::{
    classify, contact_verdicts, validate_constraints, ClassificationResult, ContactReport, Error, GroupFile,
    SpinGroup,
};
use serde::Serialize;
use serde_json::Value;

use crate::manifest::{Format, Manifest, ManifestError, Source};

#[derive(Debug)]
pub enum CliError {
    Manifest(ManifestError),
    Core(Error),
    Io(String),
}

impl CliError {
    /// 1 parse/validation, 2 mathematical domain, 3 closure cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Manifest(_) | CliError::Io(_) => 1,
            CliError::Core(e) => match e {
                Error::CapExceeded { .. } => 3,
                Error::NotFreeAction { .. }
                | Error::NotElliptic(_)
                | Error::Unrecognized(_)
                | Error::NotAMember(_)
                | Error::NotARotation(_)
                | Error::DegenerateFrame(_) => 2,
                Error::Parse(_)
                | Error::ConstraintViolated(_)
                | Error::ConductorMismatch { .. }
                | Error::NotUnit { .. }
                | Error::NotADivisor { .. }
                | Error::DivisionByZero { .. } => 1,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Manifest(e) => write!(f, "{e}"),
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<ManifestError> for CliError {
    fn from(e: ManifestError) -> Self {
        CliError::Manifest(e)
    }
}

pub fn label(source: &Source) -> String {
    match source {
        Source::Family(c) if c.swap => format!("{} reversed", c.spec),
        Source::Family(c) => c.spec.to_string(),
        Source::Generators { conductor, generators } => {
            format!("generators({} over Q(zeta_{conductor}))", generators.len())
        }
    }
}

pub fn build(source: &Source) -> Result<SpinGroup, CliError> {
    match source {
        Source::Family(c) => {
            let g = c.spec.build()?;
            Ok(if c.swap { g.swap_orientation() } else { g })
        }
        Source::Generators { conductor, generators } => Ok(SpinGroup::closure(*conductor, generators)?),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConstructOutput {
    pub family: String,
    pub order: usize,
    pub group: GroupFile,
}

pub fn run_construct(m: &Manifest) -> Result<ConstructOutput, CliError> {
    let g = build(&m.source)?;
    Ok(ConstructOutput { family: label(&m.source), order: g.order(), group: GroupFile::from_group(&g, true) })
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassifyOutput {
    pub family: String,
    pub order: usize,
    pub classification: ClassificationResult,
    pub constraint_violations: Vec<String>,
}

pub fn run_classify(m: &Manifest) -> Result<ClassifyOutput, CliError> {
    let g = build(&m.source)?;
    let c = classify(&g)?;
    Ok(ClassifyOutput {
        family: label(&m.source),
        order: g.order(),
        constraint_violations: validate_constraints(&c),
        classification: c,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub family: String,
    pub order: usize,
    pub conductor: u32,
    pub classification: ClassificationResult,
    pub constraint_violations: Vec<String>,
    pub both_orientations_possible: bool,
    pub contact: ContactReport,
}

pub fn report_group(family: String, g: &SpinGroup) -> Result<Report, CliError> {
    let c = classify(g)?;
    let contact = contact_verdicts(g)?;
    Ok(Report {
        family,
        order: g.order(),
        conductor: g.conductor(),
        constraint_violations: validate_constraints(&c),
        both_orientations_possible: both_orientations_possible(&c),
        classification: c,
        contact,
    })
}

pub fn run_report(m: &Manifest) -> Result<Report, CliError> {
    let g = build(&m.source)?;
    report_group(label(&m.source), &g)
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyOutput {
    pub family: String,
    pub order: usize,
    #[serde(flatten)]
    pub report: VerificationReport,
}

pub fn run_verify(m: &Manifest) -> Result<VerifyOutput, CliError> {
    let g = build(&m.source)?;
    let cfg = VerifyConfig { seed: m.seed, samples: m.samples, tol: m.tol };
    Ok(VerifyOutput { family: label(&m.source), order: g.order(), report: run_verification(&g, &cfg) })
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                flatten(&key(k), x, out);
            }
        }
        Value::Array(xs) if xs.iter().any(|x| x.is_object() || x.is_array()) => {
            for (i, x) in xs.iter().enumerate() {
                flatten(&key(&i.to_string()), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Null => out.push((prefix.to_string(), "-".to_string())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// JSON (pretty, normative), text (one `key: value` per line) or a
/// two-line CSV of the flattened fields.
pub fn render<T: Serialize>(value: &T, format: Format) -> Result<String, CliError> {
    let v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&v).map_err(|e| CliError::Io(e.to_string()))?;
            s.push('\n');
            Ok(s)
        }
        Format::Text => {
            let mut rows = Vec::new();
            flatten("", &v, &mut rows);
            Ok(rows.into_iter().map(|(k, x)| format!("{k}: {x}\n")).collect())
        }
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", &v, &mut rows);
            let header: Vec<&str> = rows.iter().map(|r| r.0.as_str()).collect();
            render_rows_csv(&header, &[rows.iter().map(|r| r.1.clone()).collect()])
        }
    }
}

pub fn render_rows_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let io = |e: csv::Error| CliError::Io(e.to_string());
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).map_err(io)?;
    for r in rows {
        w.write_record(r).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}
