//! Unit quaternions over Q(zeta_N), written q = w1 + j w2 with complex w1, w2.
//!
//! With q = w + xi + yj + zk this encoding gives w1 = w + xi and
//! w2 = y - zi, and the product rule
//! (a + jb)(c + jd) = (ac - conj(b) d) + j(conj(a) d + bc).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::FieldElement;
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct UnitQuaternion {
    w1: FieldElement,
    w2: FieldElement,
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn need_divisor(divisor: u32, conductor: u32) -> Result<()> {
    if conductor % divisor == 0 {
        Ok(())
    } else {
        Err(Error::NotADivisor { divisor, target: conductor })
    }
}

impl UnitQuaternion {
    /// Checked constructor: both parts share a conductor and the norm is exactly one.
    pub fn new(w1: FieldElement, w2: FieldElement) -> Result<Self> {
        if w1.conductor() != w2.conductor() {
            return Err(Error::ConductorMismatch { left: w1.conductor(), right: w2.conductor() });
        }
        let q = Self { w1, w2 };
        let n = q.norm_sq();
        if !n.is_one() {
            return Err(Error::NotUnit { norm: n.to_string() });
        }
        Ok(q)
    }

    pub(crate) fn new_unchecked(w1: FieldElement, w2: FieldElement) -> Self {
        debug_assert_eq!(w1.conductor(), w2.conductor());
        Self { w1, w2 }
    }

    pub fn w1(&self) -> &FieldElement {
        &self.w1
    }

    pub fn w2(&self) -> &FieldElement {
        &self.w2
    }

    pub fn conductor(&self) -> u32 {
        self.w1.conductor()
    }

    pub fn one(conductor: u32) -> Self {
        Self::new_unchecked(FieldElement::one(conductor), FieldElement::zero(conductor))
    }

    pub fn minus_one(conductor: u32) -> Self {
        Self::new_unchecked(FieldElement::from_integer(conductor, -1), FieldElement::zero(conductor))
    }

    pub fn i(conductor: u32) -> Result<Self> {
        need_divisor(4, conductor)?;
        Ok(Self::new_unchecked(
            FieldElement::zeta_power(conductor, i64::from(conductor / 4)),
            FieldElement::zero(conductor),
        ))
    }

    pub fn j(conductor: u32) -> Self {
        Self::new_unchecked(FieldElement::zero(conductor), FieldElement::one(conductor))
    }

    pub fn k(conductor: u32) -> Result<Self> {
        Ok(&Self::i(conductor)? * &Self::j(conductor))
    }

    /// w + xi + yj + zk from its four real coordinates (which must lie in the field).
    pub fn from_coords(
        conductor: u32,
        w: &FieldElement,
        x: &FieldElement,
        y: &FieldElement,
        z: &FieldElement,
    ) -> Result<Self> {
        need_divisor(4, conductor)?;
        let i = FieldElement::zeta_power(conductor, i64::from(conductor / 4));
        let w1 = w.try_add(&x.try_mul(&i)?)?;
        let w2 = y.try_sub(&z.try_mul(&i)?)?;
        Self::new(w1, w2)
    }

    /// The Hurwitz unit (1 + i + j + k)/2.
    pub fn hurwitz(conductor: u32) -> Result<Self> {
        need_divisor(4, conductor)?;
        let h = FieldElement::from_rational(conductor, &half());
        Self::from_coords(conductor, &h, &h, &h, &h)
    }

    /// (1 + i)/sqrt 2, i.e. w1 = zeta_8.
    pub fn octahedral_unit(conductor: u32) -> Result<Self> {
        need_divisor(8, conductor)?;
        Ok(Self::new_unchecked(
            FieldElement::zeta_power(conductor, i64::from(conductor / 8)),
            FieldElement::zero(conductor),
        ))
    }

    /// sqrt 5 as the quadratic Gauss sum z5 - z5^2 - z5^3 + z5^4, embedded in Q(zeta_N).
    pub fn sqrt5(conductor: u32) -> Result<FieldElement> {
        need_divisor(5, conductor)?;
        let z = |e: i64| FieldElement::zeta_power(5, e);
        let g = &(&(&z(1) - &z(2)) - &z(3)) + &z(4);
        g.embed(conductor)
    }

    /// The icosian (tau + tau^-1 i + j)/2 with tau the golden ratio.
    pub fn icosian(conductor: u32) -> Result<Self> {
        need_divisor(20, conductor)?;
        let h = half();
        let one = FieldElement::one(conductor);
        let tau = one.try_add(&Self::sqrt5(conductor)?)?.scale(&h);
        let tau_inv = tau.try_sub(&one)?;
        let zero = FieldElement::zero(conductor);
        Self::from_coords(conductor, &tau.scale(&h), &tau_inv.scale(&h), &one.scale(&h), &zero)
    }

    /// The quaternion w1 = zeta_N^(N/n), w2 = 0 of multiplicative order n.
    pub fn root_of_unity(n: u32, conductor: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::NotADivisor { divisor: 0, target: conductor });
        }
        need_divisor(n, conductor)?;
        Ok(Self::new_unchecked(
            FieldElement::zeta_power(conductor, i64::from(conductor / n)),
            FieldElement::zero(conductor),
        ))
    }

    pub fn norm_sq(&self) -> FieldElement {
        &(&self.w1 * &self.w1.conj()) + &(&self.w2 * &self.w2.conj())
    }

    /// Product via the complex-pair rule.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.conductor() != other.conductor() {
            return Err(Error::ConductorMismatch { left: self.conductor(), right: other.conductor() });
        }
        let (a, b) = (&self.w1, &self.w2);
        let (c, d) = (&other.w1, &other.w2);
        if a.is_one() && b.is_zero() {
            return Ok(other.clone());
        }
        if c.is_one() && d.is_zero() {
            return Ok(self.clone());
        }
        let n = self.conductor();
        let mut w1 = a * c;
        let mut w2 = FieldElement::zero(n);
        if !b.is_zero() {
            if !d.is_zero() {
                w1 = &w1 - &(&b.conj() * d);
            }
            w2 = b * c;
        }
        if !d.is_zero() && !a.is_zero() {
            w2 = &w2 + &(&a.conj() * d);
        }
        Ok(Self::new_unchecked(w1, w2))
    }

    /// q-bar = conj(w1) - j w2.
    pub fn conj(&self) -> Self {
        Self::new_unchecked(self.w1.conj(), -&self.w2)
    }

    pub fn neg(&self) -> Self {
        Self::new_unchecked(-&self.w1, -&self.w2)
    }

    /// The coefficient of 1, (w1 + conj(w1))/2.
    pub fn real_part(&self) -> FieldElement {
        (&self.w1 + &self.w1.conj()).scale(&half())
    }

    pub fn is_one(&self) -> bool {
        self.w2.is_zero() && self.w1.is_one()
    }

    /// True for +1 and -1.
    pub fn is_sign(&self) -> bool {
        self.w2.is_zero()
            && self
                .w1
                .as_rational()
                .is_some_and(|r| r.abs().is_one())
    }

    /// True if the quaternion lies in S1 (w2 = 0) or j S1 (w1 = 0).
    pub fn in_circle_or_j_circle(&self) -> bool {
        self.w1.is_zero() || self.w2.is_zero()
    }

    pub fn embed(&self, target: u32) -> Result<Self> {
        Ok(Self::new_unchecked(self.w1.embed(target)?, self.w2.embed(target)?))
    }

    /// Hamilton coordinates (w, x, y, z) in double precision.
    pub fn to_f64(&self) -> [f64; 4] {
        let (a, b) = self.w1.to_complex();
        let (c, d) = self.w2.to_complex();
        [a, b, c, -d]
    }

    /// Real-coordinate decomposition w + xi + yj + zk, computed exactly
    /// after adjoining i if necessary.
    pub fn coords(&self) -> Result<[FieldElement; 4]> {
        let n = self.conductor();
        let q = if n % 4 == 0 { self.clone() } else { self.embed(n.lcm(&4))? };
        let m = q.conductor();
        let i = FieldElement::zeta_power(m, i64::from(m / 4));
        let h = half();
        let re = |z: &FieldElement| (z + &z.conj()).scale(&h);
        // (z - conj z)/(2i) = -(i/2)(z - conj z)
        let im = |z: &FieldElement| -&(&(z - &z.conj()) * &i).scale(&h);
        Ok([re(&q.w1), im(&q.w1), re(&q.w2), -&im(&q.w2)])
    }
}

impl std::ops::Mul<&UnitQuaternion> for &UnitQuaternion {
    type Output = UnitQuaternion;
    fn mul(self, rhs: &UnitQuaternion) -> UnitQuaternion {
        self.try_mul(rhs).expect("quaternion operands must share a conductor")
    }
}

impl<'de> Deserialize<'de> for UnitQuaternion {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            w1: FieldElement,
            w2: FieldElement,
        }
        let r = Repr::deserialize(d)?;
        UnitQuaternion::new(r.w1, r.w2).map_err(serde::de::Error::custom)
    }
}

fn fmt_term(f: &mut fmt::Formatter<'_>, c: &BigRational, unit: &str, first: &mut bool) -> fmt::Result {
    if c.is_zero() {
        return Ok(());
    }
    let neg = c.is_negative();
    let mag = c.abs();
    if *first {
        if neg {
            write!(f, "-")?;
        }
    } else {
        write!(f, " {} ", if neg { "-" } else { "+" })?;
    }
    *first = false;
    if unit.is_empty() {
        write!(f, "{mag}")
    } else if mag.is_one() {
        write!(f, "{unit}")
    } else {
        write!(f, "{mag}{unit}")
    }
}

impl fmt::Display for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Ok(cs) = self.coords() {
            let rats: Option<Vec<BigRational>> = cs.iter().map(FieldElement::as_rational).collect();
            if let Some(r) = rats {
                let mut first = true;
                for (c, u) in r.iter().zip(["", "i", "j", "k"]) {
                    fmt_term(f, c, u, &mut first)?;
                }
                if first {
                    write!(f, "0")?;
                }
                return Ok(());
            }
        }
        write!(f, "({}) + j({}) [N={}]", self.w1, self.w2, self.conductor())
    }
}

impl fmt::Debug for UnitQuaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UnitQuaternion({self})")
    }
}
