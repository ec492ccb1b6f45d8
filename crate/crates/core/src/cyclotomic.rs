//! Exact arithmetic in cyclotomic fields Q(zeta_N).
//!
//! Elements are stored in the power basis {1, z, ..., z^(d-1)} with
//! d = deg(Phi_N), as integer numerators over one positive common
//! denominator. After every operation the representation is reduced
//! modulo Phi_N and the numerators and denominator are made coprime, so
//! two elements are equal exactly when their stored data are equal.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Integer polynomial, coefficients from the constant term upwards.
pub type IntPoly = Vec<BigInt>;

fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn trim(p: &mut IntPoly) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
}

/// Long division of `num` by a monic `den`; panics if the remainder is not zero.
fn div_exact_monic(num: &IntPoly, den: &IntPoly) -> IntPoly {
    let mut rem = num.clone();
    let dd = den.len() - 1;
    if rem.len() <= dd {
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for t in (dd..rem.len()).rev() {
        let c = std::mem::take(&mut rem[t]);
        if c.is_zero() {
            continue;
        }
        for (i, d) in den.iter().enumerate().take(dd) {
            if !d.is_zero() {
                rem[t - dd + i] -= &c * d;
            }
        }
        quot[t - dd] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    trim(&mut quot);
    quot
}

/// The N-th cyclotomic polynomial, obtained by dividing x^N - 1 by Phi_d
/// for every proper divisor d of N.
pub fn cyclotomic_polynomial(n: u32) -> IntPoly {
    assert!(n >= 1, "cyclotomic_polynomial needs N >= 1");
    let mut memo: HashMap<u32, IntPoly> = HashMap::new();
    for d in divisors(n) {
        let mut p = vec![BigInt::zero(); d as usize + 1];
        p[0] = BigInt::from(-1);
        p[d as usize] = BigInt::one();
        for e in divisors(d) {
            if e < d {
                p = div_exact_monic(&p, &memo[&e]);
            }
        }
        memo.insert(d, p);
    }
    memo.remove(&n).expect("n is its own divisor")
}

/// Per-conductor data shared by all elements of Q(zeta_N).
pub struct CyclotomicField {
    conductor: u32,
    degree: usize,
    phi: IntPoly,
    /// Nonzero coefficients of Phi_N below the leading term.
    tail: Vec<(usize, BigInt)>,
    tail_small: Vec<(usize, i128)>,
    /// Reduced representative of z^e for e in 0..N, sparse.
    powers: Vec<Vec<(usize, BigInt)>>,
    powers_small: Option<Vec<Vec<(usize, i128)>>>,
    /// (cos, sin) of 2 pi k / N.
    unit_circle: Vec<(f64, f64)>,
}

impl fmt::Debug for CyclotomicField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.conductor)
    }
}

impl CyclotomicField {
    fn build(n: u32) -> Self {
        let phi = cyclotomic_polynomial(n);
        let degree = phi.len() - 1;
        let tail: Vec<(usize, BigInt)> = phi[..degree]
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i, c.clone()))
            .collect();

        let mut powers = Vec::with_capacity(n as usize);
        let mut cur = vec![BigInt::zero(); degree];
        cur[0] = BigInt::one();
        for _ in 0..n {
            powers.push(sparse(&cur));
            let top = cur.pop().expect("degree >= 1");
            cur.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (i, c) in &tail {
                    cur[*i] -= &top * c;
                }
            }
        }

        let unit_circle = (0..n)
            .map(|k| {
                let t = 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(n);
                (t.cos(), t.sin())
            })
            .collect();

        let tail_small = tail
            .iter()
            .map(|(i, c)| (*i, c.to_i128().expect("cyclotomic coefficients are small")))
            .collect();
        let powers_small = powers
            .iter()
            .map(|p| p.iter().map(|(i, c)| Some((*i, c.to_i128()?))).collect::<Option<Vec<_>>>())
            .collect();
        Self { conductor: n, degree, phi, tail, tail_small, powers, powers_small, unit_circle }
    }

    /// Shared context for Q(zeta_N); built once per conductor.
    pub fn get(n: u32) -> Arc<Self> {
        static CACHE: OnceLock<Mutex<HashMap<u32, Arc<CyclotomicField>>>> = OnceLock::new();
        assert!(n >= 1, "conductor must be positive");
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(f) = cache.lock().expect("field cache poisoned").get(&n) {
            return Arc::clone(f);
        }
        let built = Arc::new(Self::build(n));
        let mut guard = cache.lock().expect("field cache poisoned");
        Arc::clone(guard.entry(n).or_insert(built))
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.phi
    }

    /// Reduces a polynomial of any length modulo Phi_N, in place.
    fn reduce(&self, mut p: IntPoly) -> IntPoly {
        let d = self.degree;
        // For even N, z^(N/2) = -1 folds the top half down cheaply.
        if self.conductor % 2 == 0 {
            let half = self.conductor as usize / 2;
            for t in (half..p.len()).rev() {
                let c = std::mem::take(&mut p[t]);
                if (t / half) % 2 == 1 {
                    p[t % half] -= c;
                } else {
                    p[t % half] += c;
                }
            }
            p.truncate(half.max(d));
        }
        for t in (d..p.len()).rev() {
            let c = std::mem::take(&mut p[t]);
            if c.is_zero() {
                continue;
            }
            for (i, coeff) in &self.tail {
                p[t - d + i] -= &c * coeff;
            }
        }
        p.resize(d, BigInt::zero());
        p
    }

    /// Product modulo Phi_N in machine integers; `None` on overflow.
    fn mul_small(&self, a: &[i64], b: &[i64]) -> Option<Vec<i128>> {
        let d = self.degree;
        let bound = |v: &[i64]| v.iter().map(|c| c.unsigned_abs()).max().unwrap_or(0);
        let word = bound(a).checked_mul(bound(b)).and_then(|m| m.checked_mul(d as u64)).is_some_and(|m| m < 1 << 63);
        let nz = |v: &[i64]| -> Vec<(usize, i64)> {
            v.iter().enumerate().filter(|(_, c)| **c != 0).map(|(i, c)| (i, *c)).collect()
        };
        let (a, b) = (nz(a), nz(b));
        let mut out = if word {
            // no partial sum can overflow an i64
            let mut acc = vec![0i64; 2 * d - 1];
            for &(i, x) in &a {
                for &(j, y) in &b {
                    acc[i + j] += x * y;
                }
            }
            acc.into_iter().map(i128::from).collect()
        } else {
            let mut acc = vec![0i128; 2 * d - 1];
            for &(i, x) in &a {
                for &(j, y) in &b {
                    acc[i + j] = acc[i + j].checked_add(i128::from(x) * i128::from(y))?;
                }
            }
            acc
        };
        if self.conductor % 2 == 0 {
            let half = self.conductor as usize / 2;
            for t in (half..out.len()).rev() {
                let c = std::mem::take(&mut out[t]);
                let c = if (t / half) % 2 == 1 { c.checked_neg()? } else { c };
                out[t % half] = out[t % half].checked_add(c)?;
            }
            out.truncate(half.max(d));
        }
        for t in (d..out.len()).rev() {
            let c = std::mem::take(&mut out[t]);
            if c == 0 {
                continue;
            }
            for &(i, coeff) in &self.tail_small {
                out[t - d + i] = out[t - d + i].checked_sub(c.checked_mul(coeff)?)?;
            }
        }
        out.truncate(d);
        Some(out)
    }
}

fn sparse(v: &[BigInt]) -> Vec<(usize, BigInt)> {
    v.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(i, c)| (i, c.clone()))
        .collect()
}

/// Arithmetic operation selector for [`field_arith`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Numerators and denominator; `Small` whenever every value fits in an i64,
/// so the representation stays canonical.
#[derive(Clone, PartialEq, Eq)]
enum Repr {
    Small { num: Vec<i64>, den: i64 },
    Big { num: Vec<BigInt>, den: BigInt },
}

/// An exact element of Q(zeta_N).
#[derive(Clone)]
pub struct FieldElement {
    field: Arc<CyclotomicField>,
    repr: Repr,
}

fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl FieldElement {
    /// Normalizes and stores big numerators over a big denominator.
    fn from_raw(field: Arc<CyclotomicField>, mut num: Vec<BigInt>, mut den: BigInt) -> Self {
        debug_assert_eq!(num.len(), field.degree);
        if den.is_negative() {
            den = -den;
            for c in &mut num {
                *c = -std::mem::take(c);
            }
        }
        if num.iter().all(Zero::is_zero) {
            den = BigInt::one();
        } else {
            let mut g = den.clone();
            for c in &num {
                if g.is_one() {
                    break;
                }
                if !c.is_zero() {
                    g = g.gcd(c);
                }
            }
            if !g.is_one() {
                den /= &g;
                for c in &mut num {
                    if !c.is_zero() {
                        *c /= &g;
                    }
                }
            }
        }
        let small = den
            .to_i64()
            .and_then(|d| Some((num.iter().map(ToPrimitive::to_i64).collect::<Option<Vec<_>>>()?, d)));
        let repr = match small {
            Some((num, den)) => Repr::Small { num, den },
            None => Repr::Big { num, den },
        };
        Self { field, repr }
    }

    fn from_word(field: Arc<CyclotomicField>, mut num: Vec<i64>, mut den: i64) -> Self {
        if num.iter().all(|c| *c == 0) {
            den = 1;
        } else if den != 1 {
            let mut g = den;
            for &c in &num {
                if g == 1 {
                    break;
                }
                if c != 0 {
                    g = g.gcd(&c);
                }
            }
            if g != 1 {
                den /= g;
                for c in &mut num {
                    *c /= g;
                }
            }
        }
        Self { field, repr: Repr::Small { num, den } }
    }

    /// Same as [`Self::from_raw`] for machine-size data; `den` must be positive.
    fn from_wide(field: Arc<CyclotomicField>, mut num: Vec<i128>, mut den: i128) -> Self {
        debug_assert!(den > 0);
        let fits = |c: i128| i64::try_from(c).is_ok();
        if fits(den) && num.iter().all(|&c| fits(c)) {
            let num = num.iter().map(|&c| c as i64).collect();
            return Self::from_word(field, num, den as i64);
        }
        if num.iter().all(|c| *c == 0) {
            den = 1;
        } else if den != 1 {
            let mut g = den;
            for &c in &num {
                if g == 1 {
                    break;
                }
                if c != 0 {
                    g = gcd_i128(g, c);
                }
            }
            if g != 1 {
                den /= g;
                for c in &mut num {
                    *c /= g;
                }
            }
        }
        let small = (fits(den) && num.iter().all(|&c| fits(c))).then(|| (num.iter().map(|&c| c as i64).collect(), den as i64));
        let repr = match small {
            Some((num, den)) => Repr::Small { num, den },
            None => Repr::Big { num: num.into_iter().map(BigInt::from).collect(), den: BigInt::from(den) },
        };
        Self { field, repr }
    }

    fn big_num(&self) -> Cow<'_, [BigInt]> {
        match &self.repr {
            Repr::Small { num, .. } => Cow::Owned(num.iter().map(|&c| BigInt::from(c)).collect()),
            Repr::Big { num, .. } => Cow::Borrowed(num),
        }
    }

    fn big_den(&self) -> BigInt {
        match &self.repr {
            Repr::Small { den, .. } => BigInt::from(*den),
            Repr::Big { den, .. } => den.clone(),
        }
    }

    fn den_f64(&self) -> f64 {
        match &self.repr {
            Repr::Small { den, .. } => *den as f64,
            Repr::Big { den, .. } => den.to_f64().unwrap_or(f64::INFINITY),
        }
    }

    /// Nonzero numerators as floats, with their exponents.
    fn float_terms(&self) -> Vec<(usize, f64)> {
        match &self.repr {
            Repr::Small { num, .. } => {
                num.iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, c)| (k, *c as f64)).collect()
            }
            Repr::Big { num, .. } => num
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.to_f64().unwrap_or(f64::INFINITY)))
                .collect(),
        }
    }

    pub fn zero(conductor: u32) -> Self {
        let field = CyclotomicField::get(conductor);
        let num = vec![0; field.degree];
        Self { field, repr: Repr::Small { num, den: 1 } }
    }

    pub fn one(conductor: u32) -> Self {
        Self::from_integer(conductor, 1)
    }

    pub fn from_integer(conductor: u32, v: i64) -> Self {
        Self::from_rational(conductor, &BigRational::from_integer(BigInt::from(v)))
    }

    pub fn from_rational(conductor: u32, v: &BigRational) -> Self {
        let field = CyclotomicField::get(conductor);
        let mut num = vec![BigInt::zero(); field.degree];
        num[0] = v.numer().clone();
        Self::from_raw(field, num, v.denom().clone())
    }

    /// z^e for any integer exponent (taken modulo N).
    pub fn zeta_power(conductor: u32, e: i64) -> Self {
        let field = CyclotomicField::get(conductor);
        let idx = e.rem_euclid(i64::from(conductor)) as usize;
        let mut num = vec![BigInt::zero(); field.degree];
        for (i, c) in &field.powers[idx] {
            num[*i] = c.clone();
        }
        Self::from_raw(field, num, BigInt::one())
    }

    /// A primitive N-th root of unity z = exp(2 pi i / N).
    pub fn zeta(conductor: u32) -> Self {
        Self::zeta_power(conductor, 1)
    }

    /// Builds an element from its power-basis coordinates.
    pub fn from_coeffs(conductor: u32, coeffs: &[BigRational]) -> Result<Self> {
        let field = CyclotomicField::get(conductor);
        if coeffs.len() != field.degree {
            return Err(Error::Parse(format!(
                "Q(zeta_{conductor}) has degree {}, got {} coefficients",
                field.degree,
                coeffs.len()
            )));
        }
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        Ok(Self::from_raw(field, num, den))
    }

    pub fn coeffs(&self) -> Vec<BigRational> {
        let den = self.big_den();
        self.big_num()
            .iter()
            .map(|c| BigRational::new(c.clone(), den.clone()))
            .collect()
    }

    pub fn conductor(&self) -> u32 {
        self.field.conductor
    }

    pub fn degree(&self) -> usize {
        self.field.degree
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Small { num, .. } => num.iter().all(|c| *c == 0),
            Repr::Big { num, .. } => num.iter().all(Zero::is_zero),
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.repr {
            Repr::Small { num, den } => *den == 1 && num[0] == 1 && num[1..].iter().all(|c| *c == 0),
            Repr::Big { .. } => false,
        }
    }

    /// The rational value if the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        let rational = match &self.repr {
            Repr::Small { num, .. } => num[1..].iter().all(|c| *c == 0),
            Repr::Big { num, .. } => num[1..].iter().all(Zero::is_zero),
        };
        rational.then(|| BigRational::new(self.big_num()[0].clone(), self.big_den()))
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.field.conductor == other.field.conductor {
            Ok(())
        } else {
            Err(Error::ConductorMismatch {
                left: self.field.conductor,
                right: other.field.conductor,
            })
        }
    }

    fn combine_small(&self, other: &Self, sign: i128) -> Option<Self> {
        let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) = (&self.repr, &other.repr) else {
            return None;
        };
        let (da, db) = (i128::from(*da), i128::from(*db));
        let l = da / gcd_i128(da, db) * db;
        let (fa, fb) = (l / da, l / db);
        let mut num = Vec::with_capacity(a.len());
        for (&x, &y) in a.iter().zip(b) {
            num.push((i128::from(x).checked_mul(fa)?).checked_add(sign * i128::from(y).checked_mul(fb)?)?);
        }
        Some(Self::from_wide(Arc::clone(&self.field), num, l))
    }

    fn combine(&self, other: &Self, sign: i32) -> Self {
        if let Some(e) = self.combine_small(other, i128::from(sign)) {
            return e;
        }
        let (an, ad) = (self.big_num(), self.big_den());
        let (bn, bd) = (other.big_num(), other.big_den());
        let l = ad.lcm(&bd);
        let fa = &l / &ad;
        let fb = &l / &bd;
        let num = an
            .iter()
            .zip(bn.iter())
            .map(|(a, b)| {
                let x = a * &fa;
                let y = b * &fb;
                if sign > 0 {
                    x + y
                } else {
                    x - y
                }
            })
            .collect();
        Self::from_raw(Arc::clone(&self.field), num, l)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.combine(other, 1))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(self.combine(other, -1))
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.conductor()));
        }
        if self.is_one() {
            return Ok(other.clone());
        }
        if other.is_one() {
            return Ok(self.clone());
        }
        if let (Repr::Small { num: a, den: da }, Repr::Small { num: b, den: db }) = (&self.repr, &other.repr) {
            if let Some(num) = self.field.mul_small(a, b) {
                let den = i128::from(*da) * i128::from(*db);
                return Ok(Self::from_wide(Arc::clone(&self.field), num, den));
            }
        }
        let d = self.field.degree;
        let (an, bn) = (self.big_num(), other.big_num());
        let a: Vec<(usize, &BigInt)> = an.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let b: Vec<(usize, &BigInt)> = bn.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        let mut out = vec![BigInt::zero(); 2 * d - 1];
        for (i, x) in &a {
            for (j, y) in &b {
                out[i + j] += *x * *y;
            }
        }
        let num = self.field.reduce(out);
        Ok(Self::from_raw(Arc::clone(&self.field), num, self.big_den() * other.big_den()))
    }

    /// Multiplicative inverse through the extended Euclidean algorithm
    /// against Phi_N.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero { conductor: self.conductor() });
        }
        let to_q = |p: &[BigInt]| -> Vec<BigRational> {
            p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
        };
        let mut r0 = to_q(&self.field.phi);
        let mut r1 = to_q(&self.big_num());
        qtrim(&mut r1);
        let mut s0: Vec<BigRational> = vec![BigRational::zero()];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        while !(r1.len() == 1 && r1[0].is_zero()) {
            let (q, r) = qdivmod(&r0, &r1);
            let s2 = qsub(&s0, &qmul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r0 is a nonzero constant because Phi_N is irreducible.
        debug_assert_eq!(r0.len(), 1);
        let c = r0[0].clone();
        let mut coeffs: Vec<BigRational> = s0.iter().map(|x| x / &c).collect();
        coeffs.resize(self.field.degree.max(coeffs.len()), BigRational::zero());
        let den = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let num: Vec<BigInt> = coeffs.iter().map(|c| c.numer() * (&den / c.denom())).collect();
        let num = self.field.reduce(num);
        // the stored numerator carries the original denominator
        let inv_poly = Self::from_raw(Arc::clone(&self.field), num, den);
        Ok(inv_poly.scale(&BigRational::from_integer(self.big_den())))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        self.try_mul(&other.inv()?)
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        let num = self.big_num().iter().map(|c| c * r.numer()).collect();
        Self::from_raw(Arc::clone(&self.field), num, self.big_den() * r.denom())
    }

    fn conj_small(&self) -> Option<Self> {
        let (Repr::Small { num: src, den }, Some(powers)) = (&self.repr, &self.field.powers_small) else {
            return None;
        };
        let n = self.field.conductor as usize;
        let mut num = vec![0i128; self.field.degree];
        for (k, &c) in src.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for &(i, p) in &powers[(n - k) % n] {
                num[i] = num[i].checked_add(i128::from(c).checked_mul(p)?)?;
            }
        }
        Some(Self::from_wide(Arc::clone(&self.field), num, i128::from(*den)))
    }

    /// Complex conjugation, the automorphism z -> z^(N-1).
    pub fn conj(&self) -> Self {
        if let Some(e) = self.conj_small() {
            return e;
        }
        let n = self.field.conductor as usize;
        let mut num = vec![BigInt::zero(); self.field.degree];
        for (k, c) in self.big_num().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, p) in &self.field.powers[(n - k) % n] {
                num[*i] += c * p;
            }
        }
        Self::from_raw(Arc::clone(&self.field), num, self.big_den())
    }

    /// Image under Q(zeta_M) -> Q(zeta_N), zeta_M -> zeta_N^(N/M).
    pub fn embed(&self, target: u32) -> Result<Self> {
        let m = self.conductor();
        if target == 0 || target % m != 0 {
            return Err(Error::NotADivisor { divisor: m, target });
        }
        let field = CyclotomicField::get(target);
        let step = (target / m) as usize;
        let mut num = vec![BigInt::zero(); field.degree];
        for (k, c) in self.big_num().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, p) in &field.powers[(k * step) % target as usize] {
                num[*i] += c * p;
            }
        }
        Ok(Self::from_raw(field, num, self.big_den()))
    }

    /// Value at zeta_N = exp(2 pi i / N) as (re, im).
    pub fn to_complex(&self) -> (f64, f64) {
        let den = self.den_f64();
        let (mut re, mut im) = (0.0, 0.0);
        for (k, c) in self.float_terms() {
            let v = c / den;
            let (cs, sn) = self.field.unit_circle[k];
            re += v * cs;
            im += v * sn;
        }
        (re, im)
    }

    /// Upper bound on the absolute error of [`Self::to_complex`].
    pub fn float_error_bound(&self) -> f64 {
        let den = self.den_f64();
        let l1: f64 = self.float_terms().iter().map(|(_, c)| c.abs() / den).sum();
        1e-14 * (1.0 + l1)
    }
}

/// Binary field arithmetic with conductor and zero-division checks.
pub fn field_arith(a: &FieldElement, b: &FieldElement, op: FieldOp) -> Result<FieldElement> {
    match op {
        FieldOp::Add => a.try_add(b),
        FieldOp::Sub => a.try_sub(b),
        FieldOp::Mul => a.try_mul(b),
        FieldOp::Div => a.try_div(b),
    }
}

fn qtrim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    if p.is_empty() {
        p.push(BigRational::zero());
    }
}

fn qsub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let zero = BigRational::zero();
    let mut out: Vec<BigRational> = (0..n)
        .map(|i| a.get(i).unwrap_or(&zero) - b.get(i).unwrap_or(&zero))
        .collect();
    qtrim(&mut out);
    out
}

fn qmul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    qtrim(&mut out);
    out
}

fn qdivmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = a.to_vec();
    qtrim(&mut rem);
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for t in (db..rem.len()).rev() {
        let c = &rem[t] / &lead;
        if c.is_zero() {
            continue;
        }
        for (i, y) in b.iter().enumerate() {
            rem[t - db + i] -= &c * y;
        }
        quot[t - db] = c;
    }
    rem.truncate(db.max(1));
    qtrim(&mut rem);
    qtrim(&mut quot);
    (quot, rem)
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor
            && self.repr == other.repr
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        // Mixes the low digits of the first few nonzero coefficients into
        // one word; equal elements agree on it.
        let mix = |acc: u64, i: usize, low: u64| {
            (acc.rotate_left(5) ^ (i as u64) ^ low.rotate_left(17)).wrapping_mul(0x9E37_79B9_7F4A_7C15)
        };
        let low = |x: &BigInt| {
            let d = x.iter_u64_digits().next().unwrap_or(0);
            if x.is_negative() { !d } else { d }
        };
        let mut acc = u64::from(self.field.conductor);
        match &self.repr {
            Repr::Small { num, den } => {
                acc ^= *den as u64;
                for (i, c) in num.iter().enumerate().filter(|(_, c)| **c != 0).take(8) {
                    acc = mix(acc, i, *c as u64);
                }
            }
            Repr::Big { num, den } => {
                acc ^= low(den);
                for (i, c) in num.iter().enumerate().filter(|(_, c)| !c.is_zero()).take(8) {
                    acc = mix(acc, i, low(c));
                }
            }
        }
        state.write_u64(acc);
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("cyclotomic operands must share a conductor")
            }
        }
    };
}

binop!(Add, add, try_add);
binop!(Sub, sub, try_sub);
binop!(Mul, mul, try_mul);

impl std::ops::Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        if let Repr::Small { num, den } = &self.repr {
            if !num.contains(&i64::MIN) {
                let num = num.iter().map(|c| -c).collect();
                return FieldElement { field: Arc::clone(&self.field), repr: Repr::Small { num, den: *den } };
            }
        }
        let num = self.big_num().iter().map(|c| -c).collect();
        FieldElement::from_raw(Arc::clone(&self.field), num, self.big_den())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldElement[N={}]({})", self.conductor(), self)
    }
}

impl fmt::Display for FieldElement {
    /// Polynomial in `z` = zeta_N.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{mag}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{mag}*")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn json_int(v: &BigInt) -> serde_json::Number {
    serde_json::Number::from_str(&v.to_string()).expect("decimal integer is a JSON number")
}

fn parse_int<E: serde::de::Error>(n: &serde_json::Number) -> std::result::Result<BigInt, E> {
    BigInt::from_str(&n.to_string())
        .map_err(|_| E::custom(format!("expected a decimal integer, got {n}")))
}

impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            conductor: u32,
            coeffs: Vec<(serde_json::Number, serde_json::Number)>,
        }
        let coeffs = self
            .coeffs()
            .iter()
            .map(|c| (json_int(c.numer()), json_int(c.denom())))
            .collect();
        Repr { conductor: self.conductor(), coeffs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for FieldElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Repr {
            conductor: u32,
            coeffs: Vec<(serde_json::Number, serde_json::Number)>,
        }
        let r = Repr::deserialize(d)?;
        if r.conductor == 0 {
            return Err(D::Error::custom("conductor must be positive"));
        }
        let mut coeffs = Vec::with_capacity(r.coeffs.len());
        for (n, q) in &r.coeffs {
            let num = parse_int::<D::Error>(n)?;
            let den = parse_int::<D::Error>(q)?;
            if den.is_zero() {
                return Err(D::Error::custom("zero denominator"));
            }
            coeffs.push(BigRational::new(num, den));
        }
        FieldElement::from_coeffs(r.conductor, &coeffs).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> IntPoly {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    /// Coefficients of prod (x - e^{2 pi i k/N}) over primitive k, rounded.
    fn numeric_cyclotomic(n: u32) -> Vec<i64> {
        let mut poly: Vec<(f64, f64)> = vec![(1.0, 0.0)];
        for k in 1..=n {
            if num_integer::gcd(k, n) != 1 {
                continue;
            }
            let t = 2.0 * std::f64::consts::PI * f64::from(k) / f64::from(n);
            let (rr, ri) = (t.cos(), t.sin());
            let mut next = vec![(0.0, 0.0); poly.len() + 1];
            for (i, &(a, b)) in poly.iter().enumerate() {
                next[i + 1].0 += a;
                next[i + 1].1 += b;
                next[i].0 -= a * rr - b * ri;
                next[i].1 -= a * ri + b * rr;
            }
            poly = next;
        }
        poly.iter().map(|(a, _)| a.round() as i64).collect()
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(cyclotomic_polynomial(1), ints(&[-1, 1]));
        assert_eq!(cyclotomic_polynomial(4), ints(&[1, 0, 1]));
        assert_eq!(cyclotomic_polynomial(6), ints(&[1, -1, 1]));
    }

    #[test]
    fn phi_40_matches_root_product() {
        // frozen from the root-product oracle: x^16 - x^12 + x^8 - x^4 + 1
        let mut expected = vec![0i64; 17];
        for (i, c) in [(0, 1), (4, -1), (8, 1), (12, -1), (16, 1)] {
            expected[i] = c;
        }
        assert_eq!(numeric_cyclotomic(40), expected);
        assert_eq!(cyclotomic_polynomial(40), ints(&expected));
    }

    #[test]
    fn phi_agrees_with_root_product_oracle() {
        for n in 1..=60u32 {
            assert_eq!(cyclotomic_polynomial(n), ints(&numeric_cyclotomic(n)), "N = {n}");
        }
        // first conductor with a coefficient of absolute value 2
        assert!(cyclotomic_polynomial(105).contains(&BigInt::from(-2)));
    }

    #[test]
    fn zeta_4_squared_is_minus_one() {
        let z = FieldElement::zeta(4);
        assert_eq!(&z * &z, FieldElement::from_integer(4, -1));
    }

    #[test]
    fn gauss_sum_squares_to_five() {
        let z = |e| FieldElement::zeta_power(5, e);
        let g = &(&(&z(1) - &z(2)) - &z(3)) + &z(4);
        assert_eq!(&g * &g, FieldElement::from_integer(5, 5));
        assert!(g.to_complex().0 > 0.0);
    }

    #[test]
    fn sqrt_two_in_q_zeta_8() {
        let s = &FieldElement::zeta_power(8, 1) + &FieldElement::zeta_power(8, 7);
        assert_eq!(&s * &s, FieldElement::from_integer(8, 2));
    }

    #[test]
    fn zeta_has_exact_order_n() {
        for n in [1u32, 2, 3, 5, 8, 12, 20, 40] {
            let z = FieldElement::zeta(n);
            let one = FieldElement::one(n);
            let mut p = z.clone();
            for m in 1..n {
                assert_ne!(p, one, "zeta_{n}^{m} = 1");
                p = &p * &z;
            }
            assert_eq!(p, one);
        }
    }

    #[test]
    fn division_and_inverse() {
        let n = 20;
        let a = &FieldElement::zeta_power(n, 3) + &FieldElement::from_rational(n, &q(3, 7));
        let b = &FieldElement::zeta_power(n, 11) - &FieldElement::zeta_power(n, 2);
        let c = field_arith(&a, &b, FieldOp::Div).unwrap();
        assert_eq!(&c * &b, a);
        assert_eq!(&b.inv().unwrap() * &b, FieldElement::one(n));
        assert_eq!(
            field_arith(&a, &FieldElement::zero(n), FieldOp::Div),
            Err(Error::DivisionByZero { conductor: 20 })
        );
    }

    #[test]
    fn conductor_mismatch_is_reported() {
        let a = FieldElement::one(4);
        let b = FieldElement::one(8);
        assert_eq!(
            field_arith(&a, &b, FieldOp::Add),
            Err(Error::ConductorMismatch { left: 4, right: 8 })
        );
    }

    #[test]
    fn embedding_examples() {
        assert_eq!(FieldElement::zeta(4).embed(8).unwrap(), FieldElement::zeta_power(8, 2));
        let r = FieldElement::from_rational(5, &q(3, 2));
        assert_eq!(r.embed(40).unwrap(), FieldElement::from_rational(40, &q(3, 2)));
        let z5 = FieldElement::zeta(5).embed(40).unwrap();
        assert_eq!(z5, FieldElement::zeta_power(40, 8));
        // Phi_5 vanishes at the image
        let mut acc = FieldElement::zero(40);
        let mut p = FieldElement::one(40);
        for _ in 0..5 {
            acc = &acc + &p;
            p = &p * &z5;
        }
        assert!(acc.is_zero());
        assert_eq!(p, FieldElement::one(40));
        assert_eq!(
            FieldElement::zeta(3).embed(8),
            Err(Error::NotADivisor { divisor: 3, target: 8 })
        );
    }

    #[test]
    fn conjugation_is_inverse_on_roots_of_unity() {
        for n in [5u32, 12, 20, 21] {
            for e in 0..n as i64 {
                let z = FieldElement::zeta_power(n, e);
                assert_eq!(z.conj(), FieldElement::zeta_power(n, -e));
                assert_eq!(&z * &z.conj(), FieldElement::one(n));
            }
        }
    }

    #[test]
    fn float_value_matches_definition() {
        let z = FieldElement::zeta_power(12, 5);
        let (re, im) = z.to_complex();
        let t = 2.0 * std::f64::consts::PI * 5.0 / 12.0;
        assert!((re - t.cos()).abs() < 1e-13 && (im - t.sin()).abs() < 1e-13);
    }

    #[test]
    fn json_round_trip_keeps_big_integers() {
        let big = BigRational::new(
            BigInt::from_str("123456789012345678901234567890").unwrap(),
            BigInt::from(11),
        );
        let a = &FieldElement::from_rational(8, &big) + &FieldElement::zeta_power(8, 3);
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.contains("123456789012345678901234567890"));
        let back: FieldElement = serde_json::from_str(&text).unwrap();
        assert_eq!(back, a);
    }

    #[test]
    fn json_rejects_wrong_length() {
        let bad = r#"{"conductor": 8, "coeffs": [[1, 1]]}"#;
        assert!(serde_json::from_str::<FieldElement>(bad).is_err());
    }
}
