//! Builders for the standard families of free linear actions on S3.

use std::fmt;
use std::sync::OnceLock;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::UnitQuaternion;
use crate::spin::{Side, SpinGroup, SpinPair, DEFAULT_CAP};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "PascalCase")]
pub enum FamilySpec {
    Cyclic { n: u32, side: Side },
    Quaternionic { n: u32, side: Side },
    BinT { side: Side },
    BinO { side: Side },
    BinI { side: Side },
    /// `base` (Quaternionic or binary polyhedral) times a cyclic group of
    /// order `m` on the opposite side.
    ProductWithCyclic { base: Box<FamilySpec>, m: u32 },
    /// Index-2 subgroup of C_(2^k m) x Q_4n generated by (z_(2^k m), j) and (1, z_2n).
    DiagonalQ { m: u32, n: u32, k: u32 },
    /// Index-3 subgroup of C_2(3^k m) x T generated by (z_(3^k m), h), (1, i), (1, j).
    DiagonalT { m: u32, k: u32 },
}

impl FamilySpec {
    /// Order of the named one-sided group as a subgroup of S3.
    fn polyhedral_order(&self) -> Option<u64> {
        match self {
            FamilySpec::Quaternionic { n, .. } => Some(4 * u64::from(*n)),
            FamilySpec::BinT { .. } => Some(24),
            FamilySpec::BinO { .. } => Some(48),
            FamilySpec::BinI { .. } => Some(120),
            _ => None,
        }
    }

    fn side(&self) -> Option<Side> {
        match self {
            FamilySpec::Cyclic { side, .. }
            | FamilySpec::Quaternionic { side, .. }
            | FamilySpec::BinT { side }
            | FamilySpec::BinO { side }
            | FamilySpec::BinI { side } => Some(*side),
            _ => None,
        }
    }

    /// Every violated parameter constraint, in a fixed order.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        match self {
            FamilySpec::Cyclic { n, .. } => {
                if *n == 0 {
                    v.push("n must be at least 1".to_string());
                }
            }
            FamilySpec::Quaternionic { n, .. } => {
                if *n < 2 {
                    v.push("n must be at least 2".to_string());
                }
            }
            FamilySpec::BinT { .. } | FamilySpec::BinO { .. } | FamilySpec::BinI { .. } => {}
            FamilySpec::ProductWithCyclic { base, m } => match base.polyhedral_order() {
                None => v.push("base must be Quaternionic, BinT, BinO or BinI".to_string()),
                Some(order) => {
                    v.extend(base.violations());
                    if *m == 0 {
                        v.push("m must be at least 1".to_string());
                    } else if u64::from(*m).gcd(&order) != 1 {
                        v.push(format!("cyclic order must be coprime to the order {order} of the base group"));
                    }
                }
            },
            FamilySpec::DiagonalQ { m, n, k } => {
                if m % 2 == 0 {
                    v.push("m must be odd".to_string());
                }
                if n % 2 == 0 {
                    v.push("n must be odd".to_string());
                } else if *n < 3 {
                    v.push("n must be at least 3".to_string());
                }
                if *k < 3 {
                    v.push("k must be at least 3".to_string());
                }
                if m.gcd(n) != 1 {
                    v.push("n and m must be relatively prime".to_string());
                }
            }
            FamilySpec::DiagonalT { m, k } => {
                if m % 2 == 0 {
                    v.push("m must be odd".to_string());
                } else if m % 3 == 0 {
                    v.push("m must not be divisible by 3".to_string());
                }
                if *k < 2 {
                    v.push("k must be at least 2".to_string());
                }
            }
        }
        v
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::ConstraintViolated(v.join("; ")))
        }
    }

    /// Orders of the roots of unity the generators need.
    fn root_orders(&self) -> Vec<u64> {
        match self {
            FamilySpec::Cyclic { n, .. } => vec![u64::from(*n)],
            FamilySpec::Quaternionic { n, .. } => vec![2 * u64::from(*n)],
            FamilySpec::BinT { .. } => vec![4],
            FamilySpec::BinO { .. } => vec![8],
            FamilySpec::BinI { .. } => vec![20],
            FamilySpec::ProductWithCyclic { base, m } => {
                let mut o = base.root_orders();
                o.push(u64::from(*m));
                o
            }
            FamilySpec::DiagonalQ { m, n, k } => vec![2u64.pow(*k) * u64::from(*m), 2 * u64::from(*n)],
            FamilySpec::DiagonalT { m, k } => vec![3u64.pow(*k) * u64::from(*m), 4],
        }
    }

    /// lcm of 4 and every root-of-unity order used by the generators; 8 enters
    /// only with octahedral and 20 only with icosahedral factors.
    pub fn conductor(&self) -> Result<u32> {
        let n = self.root_orders().into_iter().fold(4u64, |acc, o| acc.lcm(&o.max(1)));
        u32::try_from(n).map_err(|_| Error::ConstraintViolated(format!("conductor {n} is too large")))
    }

    /// |G| predicted from the parameters.
    pub fn expected_order(&self) -> u64 {
        match self {
            FamilySpec::Cyclic { n, .. } => u64::from(*n),
            FamilySpec::ProductWithCyclic { base, m } => base.expected_order() * u64::from(*m),
            FamilySpec::DiagonalQ { m, n, k } => 2u64.pow(*k) * u64::from(*m) * u64::from(*n),
            FamilySpec::DiagonalT { m, k } => 8 * 3u64.pow(*k) * u64::from(*m),
            other => other.polyhedral_order().unwrap_or(0),
        }
    }

    /// Generators in Q(zeta_conductor).
    pub fn generators(&self, conductor: u32) -> Result<Vec<SpinPair>> {
        let zeta = |n: u64| UnitQuaternion::root_of_unity(n as u32, conductor);
        let j = UnitQuaternion::j(conductor);
        let place = |q: UnitQuaternion, side: Side| SpinPair::one_sided(q, side);
        Ok(match self {
            FamilySpec::Cyclic { n, side } => vec![place(zeta(u64::from(*n))?, *side)],
            FamilySpec::Quaternionic { n, side } => {
                vec![place(zeta(2 * u64::from(*n))?, *side), place(j, *side)]
            }
            FamilySpec::BinT { side } => tetrahedral(conductor)?.into_iter().map(|q| place(q, *side)).collect(),
            FamilySpec::BinO { side } => {
                let mut g = tetrahedral(conductor)?;
                g.push(UnitQuaternion::octahedral_unit(conductor)?);
                g.into_iter().map(|q| place(q, *side)).collect()
            }
            FamilySpec::BinI { side } => icosahedral(conductor)?.into_iter().map(|q| place(q, *side)).collect(),
            FamilySpec::ProductWithCyclic { base, m } => {
                let side = base.side().unwrap_or(Side::Left);
                let mut g = base.generators(conductor)?;
                g.push(place(zeta(u64::from(*m))?, side.other()));
                g
            }
            FamilySpec::DiagonalQ { m, n, k } => vec![
                SpinPair::new(zeta(2u64.pow(*k) * u64::from(*m))?, j)?,
                place(zeta(2 * u64::from(*n))?, Side::Right),
            ],
            FamilySpec::DiagonalT { m, k } => vec![
                SpinPair::new(zeta(3u64.pow(*k) * u64::from(*m))?, UnitQuaternion::hurwitz(conductor)?)?,
                place(UnitQuaternion::i(conductor)?, Side::Right),
                place(j, Side::Right),
            ],
        })
    }

    /// Validates, closes the generators and checks the diagonal index.
    pub fn build(&self) -> Result<SpinGroup> {
        self.build_with_cap(DEFAULT_CAP)
    }

    pub fn build_with_cap(&self, cap: usize) -> Result<SpinGroup> {
        self.validate()?;
        let conductor = self.conductor()?;
        let g = SpinGroup::closure_with_cap(conductor, &self.generators(conductor)?, cap)?;
        let want = match self {
            FamilySpec::DiagonalQ { .. } => Some(2),
            FamilySpec::DiagonalT { .. } => Some(3),
            _ => None,
        };
        if let Some(d) = want {
            let l = g.component_order(Side::Left);
            let r = g.component_order(Side::Right);
            if l * r != d * g.pair_count() {
                return Err(Error::ConstraintViolated(format!(
                    "expected index {d} in the product of projections, got {l}*{r}/{}",
                    g.pair_count()
                )));
            }
        }
        Ok(g)
    }

    /// Short identifier used in reports and catalogs.
    pub fn id(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilySpec::Cyclic { n, side } => write!(f, "Cyclic({n},{side})"),
            FamilySpec::Quaternionic { n, side } => write!(f, "Quaternionic({n},{side})"),
            FamilySpec::BinT { side } => write!(f, "BinT({side})"),
            FamilySpec::BinO { side } => write!(f, "BinO({side})"),
            FamilySpec::BinI { side } => write!(f, "BinI({side})"),
            FamilySpec::ProductWithCyclic { base, m } => write!(f, "{base}xC{m}"),
            FamilySpec::DiagonalQ { m, n, k } => write!(f, "DiagonalQ(m={m},n={n},k={k})"),
            FamilySpec::DiagonalT { m, k } => write!(f, "DiagonalT(m={m},k={k})"),
        }
    }
}

/// i, j and the Hurwitz unit (1+i+j+k)/2.
fn tetrahedral(conductor: u32) -> Result<Vec<UnitQuaternion>> {
    Ok(vec![
        UnitQuaternion::i(conductor)?,
        UnitQuaternion::j(conductor),
        UnitQuaternion::hurwitz(conductor)?,
    ])
}

/// The Hurwitz unit and the icosian (tau + tau^-1 i + j)/2, with i adjoined
/// if those two alone do not close to 120 elements.
fn icosahedral(conductor: u32) -> Result<Vec<UnitQuaternion>> {
    let mut g = vec![UnitQuaternion::hurwitz(conductor)?, UnitQuaternion::icosian(conductor)?];
    if icosian_pair_needs_fallback() {
        g.push(UnitQuaternion::i(conductor)?);
    }
    Ok(g)
}

/// Whether the two-generator icosian set falls short of the binary
/// icosahedral group. Computed once in the smallest admissible field.
pub fn icosian_pair_needs_fallback() -> bool {
    static FLAG: OnceLock<bool> = OnceLock::new();
    *FLAG.get_or_init(|| {
        let gens: Vec<SpinPair> = [UnitQuaternion::hurwitz(20), UnitQuaternion::icosian(20)]
            .into_iter()
            .map(|q| SpinPair::one_sided(q.expect("20 is divisible by 4 and 5"), Side::Left))
            .collect();
        match SpinGroup::closure(20, &gens) {
            Ok(g) => g.order() != 120,
            Err(_) => true,
        }
    })
}
