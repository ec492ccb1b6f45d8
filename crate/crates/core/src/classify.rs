//! Sorting a free group into one of the seven cases of the Hopf classification.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{recognize, FreeVerdict, GroupTag, Side, SpinGroup};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Case {
    /// G cyclic.
    Cy,
    /// Q_4n times a cyclic group of coprime order.
    Qt,
    /// Binary tetrahedral times coprime cyclic.
    T,
    /// Binary octahedral times coprime cyclic.
    O,
    /// Binary icosahedral times coprime cyclic.
    I,
    /// Index-2 diagonal subgroup of C_(2^k m) x Q_4n.
    Q2,
    /// Index-3 diagonal subgroup of C_(2 3^k m) x T.
    T2,
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Case, parameters and the projection data they were read from.
///
/// The cyclic factor is reported on the left; `swapped` records whether the
/// input had it on the right. For cyclic G the larger projection counts as
/// the left one. `left_order` and `right_order` are the orders
/// of the projections as subgroups of S3, after the same normalization.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub case: Case,
    pub n: u64,
    pub m: u64,
    pub k: u32,
    pub swapped: bool,
    pub index: u64,
    #[serde(rename = "left", with = "tag_string")]
    pub left_tag: GroupTag,
    #[serde(rename = "right", with = "tag_string")]
    pub right_tag: GroupTag,
    pub left_order: u64,
    pub right_order: u64,
}

mod tag_string {
    use super::GroupTag;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(t: &GroupTag, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(t)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<GroupTag, D::Error> {
        let s = String::deserialize(d)?;
        parse_tag(&s).ok_or_else(|| serde::de::Error::custom(format!("unknown group tag {s:?}")))
    }

    fn parse_tag(s: &str) -> Option<GroupTag> {
        let arg = |p: &str| s.strip_prefix(p)?.strip_suffix(')')?.parse().ok();
        match s {
            "Trivial" => Some(GroupTag::Trivial),
            "BinaryTetrahedral" => Some(GroupTag::BinaryTetrahedral),
            "BinaryOctahedral" => Some(GroupTag::BinaryOctahedral),
            "BinaryIcosahedral" => Some(GroupTag::BinaryIcosahedral),
            _ => arg("Cyclic(")
                .map(GroupTag::Cyclic)
                .or_else(|| arg("Quaternionic(").map(GroupTag::Quaternionic)),
        }
    }
}

fn v3(mut x: u64) -> u32 {
    let mut k = 0;
    while x > 0 && x % 3 == 0 {
        x /= 3;
        k += 1;
    }
    k
}

pub fn classify(g: &SpinGroup) -> Result<ClassificationResult> {
    if let FreeVerdict::NotFree { witness } = g.is_free() {
        return Err(Error::NotFreeAction { witness: witness.to_string() });
    }
    let not_elliptic = |e: Error| Error::NotElliptic(e.to_string());
    let lt = recognize(&g.project(Side::Left)).map_err(not_elliptic)?;
    let rt = recognize(&g.project(Side::Right)).map_err(not_elliptic)?;
    let lo = g.component_order(Side::Left) as u64;
    let ro = g.component_order(Side::Right) as u64;
    let pairs = g.pair_count() as u64;
    if (lo * ro) % pairs != 0 {
        return Err(Error::NotElliptic(format!("projection orders {lo}, {ro} do not fit {pairs} pairs")));
    }
    let index = lo * ro / pairs;

    if lt.is_abelian() && rt.is_abelian() {
        if !g.is_cyclic() {
            return Err(Error::NotElliptic("both projections abelian but G is not cyclic".into()));
        }
        let swapped = lo < ro;
        let ((left_tag, left_order), (right_tag, right_order)) =
            if swapped { ((rt, ro), (lt, lo)) } else { ((lt, lo), (rt, ro)) };
        return Ok(ClassificationResult {
            case: Case::Cy,
            n: g.order() as u64,
            m: 1,
            k: 0,
            swapped,
            index,
            left_tag,
            right_tag,
            left_order,
            right_order,
        });
    }
    if !lt.is_abelian() && !rt.is_abelian() {
        return Err(Error::NotElliptic(format!("both projections nonabelian: {lt}, {rt}")));
    }
    let swapped = !lt.is_abelian();
    let ((left_tag, left_order), (right_tag, right_order)) =
        if swapped { ((rt, ro), (lt, lo)) } else { ((lt, lo), (rt, ro)) };
    let cyc = left_order / 2;
    let (case, n, m, k) = match (right_tag, index) {
        (GroupTag::Quaternionic(n), 1) => (Case::Qt, n, cyc, 0),
        (GroupTag::BinaryTetrahedral, 1) => (Case::T, 0, cyc, 1),
        (GroupTag::BinaryOctahedral, 1) => (Case::O, 0, cyc, 0),
        (GroupTag::BinaryIcosahedral, 1) => (Case::I, 0, cyc, 0),
        (GroupTag::Quaternionic(n), 2) => {
            let k = (2 * cyc).trailing_zeros();
            (Case::Q2, n, 2 * cyc >> k, k)
        }
        (GroupTag::BinaryTetrahedral, 3) => {
            let k = v3(cyc);
            (Case::T2, 0, cyc / 3u64.pow(k), k)
        }
        (t, d) => return Err(Error::NotElliptic(format!("{t} with index {d} matches no case"))),
    };
    Ok(ClassificationResult { case, n, m, k, swapped, index, left_tag, right_tag, left_order, right_order })
}

/// Violated parity, coprimality and index conditions of the matched case.
pub fn validate_constraints(res: &ClassificationResult) -> Vec<String> {
    let mut v = Vec::new();
    let coprime = |order: u64, name: &str, v: &mut Vec<String>| {
        if res.m.gcd(&order) != 1 {
            v.push(format!("cyclic order must be coprime to |{name}|={order}"));
        }
    };
    let expected_index = match res.case {
        Case::Cy => None,
        Case::Qt | Case::T | Case::O | Case::I => Some(1),
        Case::Q2 => Some(2),
        Case::T2 => Some(3),
    };
    match res.case {
        Case::Cy => {}
        Case::Qt => {
            if res.n < 2 {
                v.push("n must be at least 2".to_string());
            }
            coprime(4 * res.n, "Q", &mut v);
        }
        Case::T => coprime(24, "T", &mut v),
        Case::O => coprime(48, "O", &mut v),
        Case::I => coprime(120, "I", &mut v),
        Case::Q2 => {
            if res.m % 2 == 0 {
                v.push("m must be odd".to_string());
            }
            if res.n % 2 == 0 {
                v.push("n must be odd".to_string());
            }
            if res.k < 3 {
                v.push("k must be at least 3".to_string());
            }
            if res.m.gcd(&res.n) != 1 {
                v.push("n and m must be relatively prime".to_string());
            }
        }
        Case::T2 => {
            if res.m % 2 == 0 {
                v.push("m must be odd".to_string());
            }
            if res.k < 2 {
                v.push("k must be at least 2".to_string());
            }
        }
    }
    if let Some(d) = expected_index {
        if res.index != d {
            v.push(format!("index must be {d}"));
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;
    use crate::quaternion::UnitQuaternion;
    use crate::spin::SpinPair;

    fn result(case: Case, n: u64, m: u64, k: u32, index: u64) -> ClassificationResult {
        ClassificationResult {
            case,
            n,
            m,
            k,
            swapped: false,
            index,
            left_tag: GroupTag::Cyclic(2 * m),
            right_tag: GroupTag::Trivial,
            left_order: 2 * m,
            right_order: 2,
        }
    }

    #[test]
    fn cyclic_five() {
        let g = SpinGroup::closure(
            20,
            &[SpinPair::one_sided(UnitQuaternion::root_of_unity(5, 20).unwrap(), Side::Left)],
        )
        .unwrap();
        let r = classify(&g).unwrap();
        assert_eq!(r.case, Case::Cy);
        assert_eq!(r.n, 5);
        assert!(!r.swapped);
        assert!(classify(&g.swap_orientation()).unwrap().swapped);
    }

    #[test]
    fn icosahedral_left_is_swapped() {
        let r = classify(&FamilySpec::BinI { side: Side::Left }.build().unwrap()).unwrap();
        assert_eq!(r.case, Case::I);
        assert!(r.swapped);
        assert_eq!(r.m, 1);
        assert_eq!(r.right_tag, GroupTag::BinaryIcosahedral);
    }

    #[test]
    fn diagonal_q() {
        let r = classify(&FamilySpec::DiagonalQ { m: 5, n: 3, k: 3 }.build().unwrap()).unwrap();
        assert_eq!((r.case, r.index, r.m, r.n, r.k, r.swapped), (Case::Q2, 2, 5, 3, 3, false));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["left"], "Cyclic(40)");
        assert_eq!(json["right"], "Quaternionic(3)");
        let back: ClassificationResult = serde_json::from_value(json).unwrap();
        assert_eq!(back, r);
    }

    #[test]
    fn not_free_rejected() {
        let i = UnitQuaternion::i(4).unwrap();
        let g = SpinGroup::closure(4, &[SpinPair::new(i.clone(), i).unwrap()]).unwrap();
        assert!(matches!(classify(&g), Err(Error::NotFreeAction { .. })));
    }

    #[test]
    fn constraint_examples() {
        assert!(validate_constraints(&result(Case::Qt, 2, 3, 0, 1)).is_empty());
        assert_eq!(validate_constraints(&result(Case::Q2, 3, 2, 3, 2)), vec!["m must be odd"]);
        assert_eq!(
            validate_constraints(&result(Case::T, 0, 3, 1, 1)),
            vec!["cyclic order must be coprime to |T|=24"]
        );
    }
}
