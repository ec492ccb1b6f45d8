//! Homology, framing and contact-structure verdicts for S3/G.

use serde::{Deserialize, Serialize};

use crate::classify::{classify, Case, ClassificationResult};
use crate::error::{Error, Result};
use crate::spin::{recognize, FreeVerdict, GroupTag, Side, SpinGroup};
use crate::table::AbelianGroup;

fn require_free(g: &SpinGroup) -> Result<()> {
    match g.is_free() {
        FreeVerdict::Free => Ok(()),
        FreeVerdict::NotFree { witness } => Err(Error::NotFreeAction { witness: witness.to_string() }),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Invariants {
    pub h1: AbelianGroup,
    pub mod2_rank: usize,
    pub h2_order: u64,
}

/// H1(S3/G) = G/[G,G], its mod-2 rank, and |H2| = |H1|.
pub fn h1_invariants(g: &SpinGroup) -> Result<H1Invariants> {
    require_free(g)?;
    let h1 = g.abelianization();
    Ok(H1Invariants { mod2_rank: h1.mod2_rank(), h2_order: h1.order(), h1 })
}

/// |G| when H1(M; Z/2) vanishes, |G|/2 otherwise.
pub fn framing_modulus(g: &SpinGroup) -> Result<u64> {
    let h = h1_invariants(g)?;
    let order = g.order() as u64;
    Ok(if h.mod2_rank == 0 { order } else { order / 2 })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FramingVerdict {
    pub modulus: u64,
    /// Residue mod `modulus`, or `None` when undetermined.
    pub value: Option<u64>,
    pub provenance: String,
}

/// Equivariant framing class: 0 for groups acting on the left only,
/// 1 for groups acting on the right only, otherwise undetermined.
pub fn framing_invariant(g: &SpinGroup) -> Result<FramingVerdict> {
    let modulus = framing_modulus(g)?;
    let (value, provenance) = if g.side_is_sign(Side::Right) {
        (Some(0), "G acts by left multiplication; the left-invariant framing descends")
    } else if g.side_is_sign(Side::Left) {
        (Some(1 % modulus), "G acts by right multiplication; the right-invariant framing descends")
    } else {
        (None, "both projections nontrivial; no general formula")
    };
    Ok(FramingVerdict { modulus, value, provenance: provenance.to_string() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Existence {
    Exists,
    NotExists,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationVerdict {
    pub verdict: Existence,
    pub provenance: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EulerVerdict {
    Yes,
    No,
    PartialCyclic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedFraming {
    pub plus: FramingVerdict,
    pub minus: FramingVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContactReport {
    pub plus_orientation: OrientationVerdict,
    pub minus_orientation: OrientationVerdict,
    pub euler_trivial_coorientable: EulerVerdict,
    pub h1: AbelianGroup,
    pub h1_mod2_rank: usize,
    pub h2_order: u64,
    pub coorientable_forced: bool,
    pub order4_element_exists: bool,
    pub framing: OrientedFraming,
}

/// Universally tight positive structure for the given orientation: exists iff
/// the right projection is cyclic or quaternionic (conjugate into S1 u jS1).
fn orientation_verdict(g: &SpinGroup) -> Result<OrientationVerdict> {
    let right = recognize(&g.project(Side::Right)).map_err(|e| Error::NotElliptic(e.to_string()))?;
    let (verdict, provenance) = match right {
        GroupTag::Trivial => (
            Existence::Exists,
            "right projection = Trivial: G acts complex linearly and preserves V".to_string(),
        ),
        GroupTag::Cyclic(n) => (
            Existence::Exists,
            format!("right projection = Cyclic({n}), conjugate into S1: complex linear action preserves V"),
        ),
        GroupTag::Quaternionic(n) => (
            Existence::Exists,
            format!("right projection = Quaternionic({n}), conjugate into S1 u jS1: V is preserved up to sign"),
        ),
        GroupTag::BinaryTetrahedral | GroupTag::BinaryOctahedral => (
            Existence::NotExists,
            format!("right projection = {right}: no universally tight positive structure (order-4 cover argument)"),
        ),
        GroupTag::BinaryIcosahedral => (
            Existence::NotExists,
            "right projection = BinaryIcosahedral: no universally tight positive structure (framing obstruction)"
                .to_string(),
        ),
    };
    Ok(OrientationVerdict { verdict, provenance })
}

pub fn contact_verdicts(g: &SpinGroup) -> Result<ContactReport> {
    classify(g)?;
    let h = h1_invariants(g)?;
    let swapped = g.swap_orientation();
    Ok(ContactReport {
        plus_orientation: orientation_verdict(g)?,
        minus_orientation: orientation_verdict(&swapped)?,
        euler_trivial_coorientable: euler_trivial_verdict(g)?,
        coorientable_forced: h.mod2_rank == 0,
        order4_element_exists: g.has_element_of_order(4).is_some(),
        framing: OrientedFraming { plus: framing_invariant(g)?, minus: framing_invariant(&swapped)? },
        h1_mod2_rank: h.mod2_rank,
        h2_order: h.h2_order,
        h1: h.h1,
    })
}

/// Whether S3/G carries a co-orientable quotient structure with trivial
/// Euler class: yes iff G acts on the left only, except for cyclic G where
/// only a partial answer is given.
pub fn euler_trivial_verdict(g: &SpinGroup) -> Result<EulerVerdict> {
    require_free(g)?;
    Ok(if g.is_cyclic() {
        EulerVerdict::PartialCyclic
    } else if g.side_is_sign(Side::Right) {
        EulerVerdict::Yes
    } else {
        EulerVerdict::No
    })
}

/// True for the cases whose quotients carry universally tight structures in
/// both orientations.
pub fn both_orientations_possible(iso: &ClassificationResult) -> bool {
    matches!(iso.case, Case::Cy | Case::Qt | Case::Q2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::FamilySpec;

    fn build(s: FamilySpec) -> SpinGroup {
        s.build().unwrap()
    }

    #[test]
    fn poincare_sphere() {
        let g = build(FamilySpec::BinI { side: Side::Left });
        let h = h1_invariants(&g).unwrap();
        assert!(h.h1.is_trivial());
        assert_eq!((h.mod2_rank, h.h2_order), (0, 1));
        assert_eq!(framing_modulus(&g).unwrap(), 120);
        let r = contact_verdicts(&g).unwrap();
        assert_eq!(r.plus_orientation.verdict, Existence::Exists);
        assert_eq!(r.minus_orientation.verdict, Existence::NotExists);
        assert_eq!(r.framing.plus.value, Some(0));
        assert_eq!(r.framing.minus.value, Some(1));
        assert_eq!(r.euler_trivial_coorientable, EulerVerdict::Yes);
        assert!(r.coorientable_forced);
        assert!(r.order4_element_exists);
    }

    #[test]
    fn quaternion_eight() {
        let g = build(FamilySpec::Quaternionic { n: 2, side: Side::Left });
        let h = h1_invariants(&g).unwrap();
        assert_eq!(h.h1.invariant_factors(), &[2, 2]);
        assert_eq!((h.mod2_rank, h.h2_order), (2, 4));
        assert_eq!(framing_modulus(&g).unwrap(), 4);
    }

    #[test]
    fn tetrahedral_right() {
        let g = build(FamilySpec::BinT { side: Side::Right });
        let h = h1_invariants(&g).unwrap();
        assert_eq!(h.h1.invariant_factors(), &[3]);
        assert_eq!(euler_trivial_verdict(&g).unwrap(), EulerVerdict::No);
        assert_eq!(framing_invariant(&g).unwrap().value, Some(1));
        let tc5 = build(FamilySpec::ProductWithCyclic { base: Box::new(FamilySpec::BinT { side: Side::Right }), m: 5 });
        let r = contact_verdicts(&tc5).unwrap();
        assert_eq!(r.plus_orientation.verdict, Existence::NotExists);
        assert_eq!(r.minus_orientation.verdict, Existence::Exists);
        assert!(r.plus_orientation.provenance.contains("BinaryTetrahedral"));
    }

    #[test]
    fn cyclic_five() {
        let g = build(FamilySpec::Cyclic { n: 5, side: Side::Left });
        assert_eq!(framing_modulus(&g).unwrap(), 5);
        assert_eq!(euler_trivial_verdict(&g).unwrap(), EulerVerdict::PartialCyclic);
        let r = contact_verdicts(&g).unwrap();
        assert_eq!(r.plus_orientation.verdict, Existence::Exists);
        assert_eq!(r.minus_orientation.verdict, Existence::Exists);
    }

    #[test]
    fn diagonal_framing_undetermined() {
        let g = build(FamilySpec::DiagonalQ { m: 1, n: 3, k: 3 });
        assert_eq!(framing_invariant(&g).unwrap().value, None);
        let iso = classify(&g).unwrap();
        assert!(both_orientations_possible(&iso));
    }
}
