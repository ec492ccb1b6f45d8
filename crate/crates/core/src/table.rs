//! Finite groups given by a full multiplication table.
//!
//! Element 0 is always the identity. Everything exact about a closed
//! [`SpinGroup`](crate::spin::SpinGroup) beyond the quaternion data itself
//! (orders, commutators, quotients, abelian invariants) is computed here
//! with integer lookups only.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone)]
pub struct CayleyTable {
    n: usize,
    mul: Vec<u32>,
    inv: Vec<u32>,
}

impl CayleyTable {
    /// `mul[a * n + b]` is the index of `a * b`; index 0 must be the identity.
    pub fn from_raw(n: usize, mul: Vec<u32>) -> Self {
        assert_eq!(mul.len(), n * n, "table must be n x n");
        debug_assert!((0..n).all(|x| mul[x] as usize == x && mul[x * n] as usize == x));
        let mut inv = vec![u32::MAX; n];
        for a in 0..n {
            if inv[a] != u32::MAX {
                continue;
            }
            let row = &mul[a * n..(a + 1) * n];
            let b = row.iter().position(|&v| v == 0).expect("every element has an inverse");
            inv[a] = b as u32;
            inv[b] = a as u32;
        }
        Self { n, mul, inv }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.n + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut p = a;
        let mut k = 1;
        while p != 0 {
            p = self.mul(p, a);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n as u32).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn is_cyclic(&self) -> bool {
        (0..self.n as u32).any(|a| self.element_order(a) == self.n)
    }

    /// Subgroup generated by `gens`, in breadth-first order from the identity.
    pub fn subgroup_generated(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        let mut out = vec![0u32];
        seen[0] = true;
        let mut head = 0;
        while head < out.len() {
            let x = out[head];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            head += 1;
        }
        out
    }

    /// The commutator subgroup, closed from the set of all commutators.
    pub fn derived_subgroup(&self) -> Vec<u32> {
        let mut is_comm = vec![false; self.n];
        for a in 0..self.n as u32 {
            for b in 0..a {
                is_comm[self.commutator(a, b) as usize] = true;
            }
        }
        let comms: Vec<u32> = (1..self.n as u32).filter(|&c| is_comm[c as usize]).collect();
        self.subgroup_generated(&comms)
    }

    /// Coset labels and the quotient table for a normal subgroup.
    pub fn quotient(&self, normal: &[u32]) -> (Vec<u32>, CayleyTable) {
        let mut label = vec![u32::MAX; self.n];
        let mut reps = Vec::new();
        for a in 0..self.n as u32 {
            if label[a as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(a);
            for &k in normal {
                label[self.mul(a, k) as usize] = c;
            }
        }
        let q = reps.len();
        let mut mul = vec![0u32; q * q];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mul[i * q + j] = label[self.mul(a, b) as usize];
            }
        }
        (label, CayleyTable::from_raw(q, mul))
    }

    pub fn abelianization(&self) -> AbelianGroup {
        let derived = self.derived_subgroup();
        let (_, q) = self.quotient(&derived);
        q.abelian_invariants()
    }

    /// Invariant factors of an abelian table: p-primary parts from the
    /// counts of elements of order dividing p^e, then merged.
    pub fn abelian_invariants(&self) -> AbelianGroup {
        debug_assert!(self.is_abelian());
        let orders: Vec<usize> = (0..self.n as u32).map(|a| self.element_order(a)).collect();
        let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for (p, a) in factorize(self.n as u64) {
            // t[e] = log_p #{x : x^(p^e) = 1}
            let mut logs = vec![0u32];
            let mut pe = 1u64;
            for _ in 0..a {
                pe *= p;
                let count = orders.iter().filter(|&&o| pe % o as u64 == 0).count() as u64;
                logs.push(ilog(count, p));
            }
            // conjugate partition: d[e] = #{parts >= e}
            let d: Vec<u32> = (1..logs.len()).map(|e| logs[e] - logs[e - 1]).collect();
            let parts = d.first().copied().unwrap_or(0);
            let exps: Vec<u32> = (1..=parts)
                .map(|i| d.iter().filter(|&&de| de >= i).count() as u32)
                .collect();
            primary.insert(p, exps);
        }
        AbelianGroup::from_primary(&primary)
    }
}

fn ilog(mut v: u64, p: u64) -> u32 {
    let mut k = 0;
    while v > 1 {
        debug_assert_eq!(v % p, 0);
        v /= p;
        k += 1;
    }
    k
}

/// Prime factorization as (prime, exponent) pairs in increasing order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut a = 0;
        while n % p == 0 {
            n /= p;
            a += 1;
        }
        if a > 0 {
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A finite abelian group by invariant factors d1 | d2 | ... (each >= 2).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AbelianGroup {
    invariant_factors: Vec<u64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        Self::default()
    }

    /// Checks the divisibility chain.
    pub fn new(invariant_factors: Vec<u64>) -> Option<Self> {
        let ok = invariant_factors.iter().all(|&d| d >= 2)
            && invariant_factors.windows(2).all(|w| w[1] % w[0] == 0);
        ok.then_some(Self { invariant_factors })
    }

    /// Merges p-primary exponent lists (largest first) into invariant factors.
    fn from_primary(primary: &BTreeMap<u64, Vec<u32>>) -> Self {
        let len = primary.values().map(Vec::len).max().unwrap_or(0);
        let mut factors: Vec<u64> = (0..len)
            .map(|i| {
                primary
                    .iter()
                    .map(|(&p, exps)| exps.get(i).map_or(1, |&e| p.pow(e)))
                    .product()
            })
            .collect();
        factors.reverse();
        Self { invariant_factors: factors }
    }

    pub fn invariant_factors(&self) -> &[u64] {
        &self.invariant_factors
    }

    pub fn order(&self) -> u64 {
        self.invariant_factors.iter().product()
    }

    pub fn is_trivial(&self) -> bool {
        self.invariant_factors.is_empty()
    }

    /// Dimension of the group tensored with Z/2.
    pub fn mod2_rank(&self) -> usize {
        self.invariant_factors.iter().filter(|&&d| d % 2 == 0).count()
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.invariant_factors.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.invariant_factors.iter().map(|d| format!("Z/{d}")).collect();
        write!(f, "{}", parts.join(" x "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cyclic_product(orders: &[u64]) -> CayleyTable {
        let n: u64 = orders.iter().product();
        let n = n as usize;
        let digits = |mut x: usize| -> Vec<u64> {
            orders
                .iter()
                .map(|&o| {
                    let d = (x as u64) % o;
                    x /= o as usize;
                    d
                })
                .collect()
        };
        let encode = |v: &[u64]| -> usize {
            let mut x = 0u64;
            for (d, &o) in v.iter().zip(orders).rev() {
                x = x * o + d;
            }
            x as usize
        };
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            for b in 0..n {
                let (da, db) = (digits(a), digits(b));
                let s: Vec<u64> = da.iter().zip(&db).zip(orders).map(|((x, y), o)| (x + y) % o).collect();
                mul[a * n + b] = encode(&s) as u32;
            }
        }
        CayleyTable::from_raw(n, mul)
    }

    /// Q8 from the integer unit quaternions, independent of the field code.
    fn q8() -> CayleyTable {
        let units: Vec<[i32; 4]> = vec![
            [1, 0, 0, 0], [-1, 0, 0, 0], [0, 1, 0, 0], [0, -1, 0, 0],
            [0, 0, 1, 0], [0, 0, -1, 0], [0, 0, 0, 1], [0, 0, 0, -1],
        ];
        let hm = |a: [i32; 4], b: [i32; 4]| -> [i32; 4] {
            [
                a[0] * b[0] - a[1] * b[1] - a[2] * b[2] - a[3] * b[3],
                a[0] * b[1] + a[1] * b[0] + a[2] * b[3] - a[3] * b[2],
                a[0] * b[2] - a[1] * b[3] + a[2] * b[0] + a[3] * b[1],
                a[0] * b[3] + a[1] * b[2] - a[2] * b[1] + a[3] * b[0],
            ]
        };
        let mut mul = vec![0u32; 64];
        for (i, &a) in units.iter().enumerate() {
            for (j, &b) in units.iter().enumerate() {
                let p = hm(a, b);
                mul[i * 8 + j] = units.iter().position(|&u| u == p).unwrap() as u32;
            }
        }
        CayleyTable::from_raw(8, mul)
    }

    /// Smith form of diag(orders) by repeated gcd/lcm exchange.
    fn diagonal_smith(orders: &[u64]) -> Vec<u64> {
        let mut v = orders.to_vec();
        for i in 0..v.len() {
            for j in i + 1..v.len() {
                let g = num_integer::gcd(v[i], v[j]);
                let l = v[i] / g * v[j];
                v[i] = g;
                v[j] = l;
            }
        }
        v.into_iter().filter(|&d| d > 1).collect()
    }

    #[test]
    fn q8_abelianization_is_klein_four() {
        let t = q8();
        assert!(!t.is_abelian());
        assert_eq!(t.derived_subgroup().len(), 2);
        assert_eq!(t.abelianization().invariant_factors(), &[2, 2]);
        assert_eq!(t.abelianization().mod2_rank(), 2);
    }

    #[test]
    fn known_products() {
        assert_eq!(cyclic_product(&[2, 6]).abelian_invariants().invariant_factors(), &[2, 6]);
        assert_eq!(cyclic_product(&[4, 6]).abelian_invariants().invariant_factors(), &[2, 12]);
        assert_eq!(cyclic_product(&[3, 5]).abelian_invariants().invariant_factors(), &[15]);
        assert!(cyclic_product(&[1]).abelian_invariants().is_trivial());
        assert!(cyclic_product(&[12]).is_cyclic());
        assert!(!cyclic_product(&[2, 2]).is_cyclic());
    }

    #[test]
    fn display() {
        assert_eq!(AbelianGroup::new(vec![2, 2]).unwrap().to_string(), "Z/2 x Z/2");
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
        assert!(AbelianGroup::new(vec![2, 3]).is_none());
    }

    proptest! {
        #[test]
        fn invariants_match_diagonal_smith_form(orders in prop::collection::vec(1u64..7, 1..4)) {
            let t = cyclic_product(&orders);
            let ab = t.abelian_invariants();
            let expected = diagonal_smith(&orders);
            prop_assert_eq!(ab.invariant_factors(), expected.as_slice());
            prop_assert_eq!(ab.order(), orders.iter().product::<u64>());
            prop_assert_eq!(t.abelianization(), ab);
        }
    }
}
