//! Enumeration of every free group up to a given order, one row per group.

use std::collections::BTreeMap;
use std::path::Path;

use elliptic_core::{
    classify, contact_verdicts, validate_constraints, Case, EulerVerdict, Existence, FamilySpec, Side,
};
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::manifest::{FamilyChoice, Format};
use crate::pipeline::{render_rows_csv, CliError};

/// Named factor on the left throughout; diagonal families are reversed from
/// their native right placement to match.
pub fn enumerate(max_order: u64) -> Vec<FamilyChoice> {
    let mut out = Vec::new();
    let plain = |spec| FamilyChoice { spec, swap: false };
    let with_m = |base: FamilySpec, m: u64| {
        if m == 1 {
            base
        } else {
            FamilySpec::ProductWithCyclic { base: Box::new(base), m: m as u32 }
        }
    };
    for n in 1..=max_order {
        out.push(plain(FamilySpec::Cyclic { n: n as u32, side: Side::Left }));
    }
    for n in 2..=max_order / 4 {
        for m in (1..=max_order / (4 * n)).step_by(2) {
            if m.gcd(&(4 * n)) == 1 {
                out.push(plain(with_m(FamilySpec::Quaternionic { n: n as u32, side: Side::Left }, m)));
            }
        }
    }
    let polyhedral: [(u64, u64, fn() -> FamilySpec); 3] = [
        (24, 6, || FamilySpec::BinT { side: Side::Left }),
        (48, 6, || FamilySpec::BinO { side: Side::Left }),
        (120, 30, || FamilySpec::BinI { side: Side::Left }),
    ];
    for (order, bad, base) in polyhedral {
        for m in 1..=max_order / order {
            if m.gcd(&bad) == 1 {
                out.push(plain(with_m(base(), m)));
            }
        }
    }
    for k in 3..64u32 {
        let pk = 1u64 << k;
        if pk * 3 > max_order {
            break;
        }
        for n in (3..=max_order / pk).step_by(2) {
            for m in (1..=max_order / (pk * n)).step_by(2) {
                if m.gcd(&n) == 1 {
                    out.push(FamilyChoice {
                        spec: FamilySpec::DiagonalQ { m: m as u32, n: n as u32, k },
                        swap: true,
                    });
                }
            }
        }
    }
    for k in 2..64u32 {
        let base = 8 * 3u64.pow(k);
        if base > max_order {
            break;
        }
        for m in (1..=max_order / base).step_by(2) {
            if m % 3 != 0 {
                out.push(FamilyChoice { spec: FamilySpec::DiagonalT { m: m as u32, k }, swap: true });
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CatalogRow {
    pub family: String,
    pub order: u64,
    pub case: Case,
    pub n: u64,
    pub m: u64,
    pub k: u32,
    pub h1: String,
    pub modulus: u64,
    /// Framing class in the positive orientation; `None` when undetermined.
    pub framing: Option<u64>,
    pub framing_reversed: Option<u64>,
    pub plus: Existence,
    pub minus: Existence,
    pub euler: EulerVerdict,
    pub swapped: bool,
}

impl CatalogRow {
    fn key(&self) -> (u64, Case, u64, u64, u32) {
        (self.order, self.case, self.n, self.m, self.k)
    }
}

pub fn row(choice: &FamilyChoice) -> Result<CatalogRow, CliError> {
    let g = choice.spec.build()?;
    let g = if choice.swap { g.swap_orientation() } else { g };
    let c = classify(&g)?;
    let violations = validate_constraints(&c);
    if !violations.is_empty() {
        return Err(CliError::Core(elliptic_core::Error::ConstraintViolated(format!(
            "{}: {}",
            choice.spec,
            violations.join("; ")
        ))));
    }
    let r = contact_verdicts(&g)?;
    let reversed = contact_verdicts(&g.swap_orientation())?;
    if reversed.plus_orientation != r.minus_orientation || reversed.minus_orientation != r.plus_orientation {
        return Err(CliError::Core(elliptic_core::Error::NotElliptic(format!(
            "{}: verdicts do not exchange under orientation reversal",
            choice.spec
        ))));
    }
    Ok(CatalogRow {
        family: crate::pipeline::label(&crate::manifest::Source::Family(choice.clone())),
        order: g.order() as u64,
        case: c.case,
        n: c.n,
        m: c.m,
        k: c.k,
        h1: r.h1.to_string(),
        modulus: r.framing.plus.modulus,
        framing: r.framing.plus.value,
        framing_reversed: r.framing.minus.value,
        plus: r.plus_orientation.verdict,
        minus: r.minus_orientation.verdict,
        euler: r.euler_trivial_coorientable,
        swapped: c.swapped,
    })
}

/// All rows up to `max_order`, deduplicated by (order, case, n, m, k) and
/// sorted by that key. The result does not depend on `threads`.
pub fn build_catalog(max_order: u64, threads: usize) -> Result<Vec<CatalogRow>, CliError> {
    let choices = enumerate(max_order);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| CliError::Io(e.to_string()))?;
    let rows: Vec<CatalogRow> =
        pool.install(|| choices.par_iter().map(row).collect::<Result<Vec<_>, _>>())?;
    let mut unique = BTreeMap::new();
    for r in rows {
        unique.entry(r.key()).or_insert(r);
    }
    Ok(unique.into_values().collect())
}

fn csv_cell(x: Option<u64>) -> String {
    x.map_or_else(|| "∅".to_string(), |v| v.to_string())
}

pub fn to_csv(rows: &[CatalogRow]) -> Result<String, CliError> {
    let header = [
        "family", "order", "case", "n", "m", "k", "h1", "modulus", "framing", "framing_reversed", "plus",
        "minus", "euler", "swapped",
    ];
    let body = rows
        .iter()
        .map(|r| {
            vec![
                r.family.clone(),
                r.order.to_string(),
                r.case.to_string(),
                r.n.to_string(),
                r.m.to_string(),
                r.k.to_string(),
                r.h1.clone(),
                r.modulus.to_string(),
                csv_cell(r.framing),
                csv_cell(r.framing_reversed),
                format!("{:?}", r.plus),
                format!("{:?}", r.minus),
                format!("{:?}", r.euler),
                r.swapped.to_string(),
            ]
        })
        .collect::<Vec<_>>();
    render_rows_csv(&header, &body)
}

pub fn to_json(rows: &[CatalogRow]) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(rows).map_err(|e| CliError::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn to_text(rows: &[CatalogRow]) -> String {
    rows.iter()
        .map(|r| {
            format!(
                "{:<40} |G|={:<4} {:?} n={} m={} k={} H1={} framing={}/{} plus={:?} minus={:?} euler={:?}\n",
                r.family,
                r.order,
                r.case,
                r.n,
                r.m,
                r.k,
                r.h1,
                csv_cell(r.framing),
                r.modulus,
                r.plus,
                r.minus,
                r.euler
            )
        })
        .collect()
}

/// Writes catalog.csv and catalog.json into `dir`.
pub fn write_catalog(rows: &[CatalogRow], dir: &Path) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    std::fs::create_dir_all(dir).map_err(io)?;
    std::fs::write(dir.join("catalog.csv"), to_csv(rows)?).map_err(io)?;
    std::fs::write(dir.join("catalog.json"), to_json(rows)?).map_err(io)?;
    Ok(())
}

pub fn render(rows: &[CatalogRow], format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => to_json(rows),
        Format::Csv => to_csv(rows),
        Format::Text => Ok(to_text(rows)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_catalog() {
        let rows = build_catalog(24, 1).unwrap();
        assert_eq!(rows.iter().filter(|r| r.case == Case::Cy).count(), 24);
        let t = rows.iter().find(|r| r.case == Case::T).unwrap();
        assert_eq!((t.order, t.h1.as_str(), t.framing, t.modulus), (24, "Z/3", Some(0), 24));
        assert!(rows.iter().any(|r| r.case == Case::Q2 && r.order == 24));
        assert!(rows.windows(2).all(|w| w[0].key() < w[1].key()));
    }
}
