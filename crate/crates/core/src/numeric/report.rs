//! The verification suite run by `verify`, and its JSON report.

use serde::{Deserialize, Serialize};

use super::adjoint::{adjoint_matrix, adjoint_preimages};
use super::contact::{contact_condition, invariance_check};
use super::fixed_point::{fixed_point_oracle, FIXED_POINT_TOL};
use super::framing::{conjugation_pullback_check, framing_transition_check};
use super::sampling::{random_unit_quaternions, sample_s3_stream};
use super::{pair_from_exact, Quat};
use crate::spin::SpinGroup;

pub const CONTACT_MARGIN: f64 = 1e-3;
pub const ADJOINT_SIGN_TOL: f64 = 1e-12;
pub const ADJOINT_HOM_TOL: f64 = 1e-10;
pub const PREIMAGE_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub passed: bool,
    pub worst_residual: f64,
    pub witness: Option<usize>,
}

impl CheckOutcome {
    pub fn from_residuals(residuals: impl IntoIterator<Item = f64>, tol: f64) -> Self {
        let mut worst = 0.0f64;
        let mut witness = None;
        for (i, r) in residuals.into_iter().enumerate() {
            if !(r <= tol) && witness.is_none() {
                witness = Some(i);
            }
            worst = worst.max(r);
        }
        Self { passed: witness.is_none(), worst_residual: worst, witness }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub seed: u64,
    pub count: usize,
    pub tol: f64,
    pub passed: bool,
    pub worst_residual: f64,
    pub witness: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub checks: Vec<CheckRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub samples: usize,
    pub tol: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { seed: 42, samples: 1000, tol: 1e-9 }
    }
}

struct Recorder {
    seed: u64,
    checks: Vec<CheckRecord>,
}

impl Recorder {
    fn push(&mut self, name: &str, count: usize, tol: f64, out: CheckOutcome, witness: impl Fn(usize) -> String) {
        self.checks.push(CheckRecord {
            name: name.to_string(),
            seed: self.seed,
            count,
            tol,
            passed: out.passed,
            worst_residual: out.worst_residual,
            witness: out.witness.map(witness),
            detail: None,
        });
    }
}

/// Runs every numeric check against `g`. Each check draws from its own
/// substream of `cfg.seed`, so results do not depend on evaluation order.
pub fn run_verification(g: &SpinGroup, cfg: &VerifyConfig) -> VerificationReport {
    let mut rec = Recorder { seed: cfg.seed, checks: Vec::new() };
    let n = cfg.samples;
    let pts = sample_s3_stream(n, cfg.seed, 0);
    let fmt_pt = |i: usize| format!("sample {i} at {:?}", pts[i].coords());

    // contact_condition is 2 for the standard form in this frame
    let values: Vec<f64> = pts.iter().map(|p| contact_condition(p).unwrap_or(f64::NAN)).collect();
    let mut out = CheckOutcome::from_residuals(values.iter().map(|&c| if c > CONTACT_MARGIN { 0.0 } else { 1.0 }), 0.5);
    out.worst_residual = values.iter().map(|c| (c - 2.0).abs()).fold(0.0, f64::max);
    rec.push("contact_condition", n, CONTACT_MARGIN, out, fmt_pt);

    // numeric invariance agrees with the exact S1 u jS1 test on every element
    let elements = g.elements();
    let mut worst = 0.0f64;
    let mut bad = None;
    let mut broken = Vec::new();
    for (idx, e) in elements.iter().enumerate() {
        let (l, r) = pair_from_exact(e);
        let expected = e.right().in_circle_or_j_circle();
        let got = invariance_check(&l, &r, &pts, cfg.tol).map(|o| (o.invariant, o.worst_defect));
        if let Ok((false, defect)) = got {
            broken.push((idx, defect));
        }
        match got {
            Ok((inv, defect)) if inv == expected => {
                if expected {
                    worst = worst.max(defect);
                }
            }
            _ => {
                bad.get_or_insert(idx);
            }
        }
    }
    let out = CheckOutcome { passed: bad.is_none(), worst_residual: worst, witness: bad };
    rec.push("invariance", elements.len(), cfg.tol, out, |i| format!("element {}", elements[i]));
    if let Some(&(first, defect)) = broken.first() {
        rec.checks.last_mut().expect("just pushed").detail = Some(format!(
            "{} of {} elements break invariance; first {} with defect {defect:.3}",
            broken.len(),
            elements.len(),
            elements[first]
        ));
    }

    // fixed-point oracle against the exact real-part criterion
    let mut bad = None;
    for (idx, e) in elements.iter().enumerate() {
        let (l, r) = pair_from_exact(e);
        if fixed_point_oracle(&l, &r).is_some() != e.fixes_a_point() {
            bad.get_or_insert(idx);
        }
    }
    let out = CheckOutcome { passed: bad.is_none(), worst_residual: 0.0, witness: bad };
    rec.push("fixed_point_agreement", elements.len(), FIXED_POINT_TOL, out, |i| format!("element {}", elements[i]));

    let qs = random_unit_quaternions(n, cfg.seed, 2);
    let fmt_q = |i: usize| format!("q = {:?}", qs[i].coords.as_slice());
    let out = CheckOutcome::from_residuals(
        qs.iter().map(|q| (adjoint_matrix(q) - adjoint_matrix(&-q)).abs().max()),
        ADJOINT_SIGN_TOL,
    );
    rec.push("adjoint_sign", n, ADJOINT_SIGN_TOL, out, fmt_q);
    let out = CheckOutcome::from_residuals(
        qs.iter().zip(qs.iter().cycle().skip(1)).map(|(p, q)| {
            (adjoint_matrix(&(p * q)) - adjoint_matrix(p) * adjoint_matrix(q)).abs().max()
        }),
        ADJOINT_HOM_TOL,
    );
    rec.push("adjoint_homomorphism", n, ADJOINT_HOM_TOL, out, fmt_q);

    let rots = random_unit_quaternions(n, cfg.seed, 3);
    let out = CheckOutcome::from_residuals(rots.iter().map(|q| preimage_residual(q)), PREIMAGE_TOL);
    rec.push("adjoint_preimages", n, PREIMAGE_TOL, out, |i| format!("rotation of {:?}", rots[i].coords.as_slice()));

    let gs = random_unit_quaternions(n, cfg.seed, 4);
    let fmt_g = |i: usize| format!("g = {:?}", gs[i].coords.as_slice());
    rec.push("framing_transition", n, cfg.tol, framing_transition_check(&gs, cfg.tol), fmt_g);
    rec.push("conjugation_pullback", n, cfg.tol, conjugation_pullback_check(&gs, cfg.tol), fmt_g);

    VerificationReport { passed: rec.checks.iter().all(|c| c.passed), checks: rec.checks }
}

/// Ad-residual of the reconstructed preimages of Ad(q); infinite unless there
/// are exactly two distinct preimages, one of them ±q.
fn preimage_residual(q: &Quat) -> f64 {
    let r = adjoint_matrix(q);
    match adjoint_preimages(&r) {
        Ok([a, b]) if (a - b).norm() > 1.0 => {
            let fwd = (adjoint_matrix(&a) - r).abs().max().max((adjoint_matrix(&b) - r).abs().max());
            let lift = (a - q).norm().min((a + q).norm());
            fwd.max(lift)
        }
        _ => f64::INFINITY,
    }
}
