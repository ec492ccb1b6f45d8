//! Finite subgroups of Spin(4) = S3 x S3 acting on S3 by x -> l x conj(r).

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quaternion::UnitQuaternion;
use crate::table::{AbelianGroup, CayleyTable};

pub const DEFAULT_CAP: usize = 2400;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "left",
            Side::Right => "right",
        })
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "left" | "l" => Ok(Side::Left),
            "right" | "r" => Ok(Side::Right),
            _ => Err(Error::Parse(format!("unknown side {s:?}"))),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SpinPair {
    left: UnitQuaternion,
    right: UnitQuaternion,
}

impl SpinPair {
    pub fn new(left: UnitQuaternion, right: UnitQuaternion) -> Result<Self> {
        if left.conductor() != right.conductor() {
            return Err(Error::ConductorMismatch { left: left.conductor(), right: right.conductor() });
        }
        Ok(Self { left, right })
    }

    /// `q` on `side`, 1 on the other.
    pub fn one_sided(q: UnitQuaternion, side: Side) -> Self {
        let one = UnitQuaternion::one(q.conductor());
        match side {
            Side::Left => Self { left: q, right: one },
            Side::Right => Self { left: one, right: q },
        }
    }

    pub fn identity(conductor: u32) -> Self {
        Self { left: UnitQuaternion::one(conductor), right: UnitQuaternion::one(conductor) }
    }

    pub fn minus_identity(conductor: u32) -> Self {
        Self { left: UnitQuaternion::minus_one(conductor), right: UnitQuaternion::minus_one(conductor) }
    }

    pub fn left(&self) -> &UnitQuaternion {
        &self.left
    }

    pub fn right(&self) -> &UnitQuaternion {
        &self.right
    }

    pub fn component(&self, side: Side) -> &UnitQuaternion {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn conductor(&self) -> u32 {
        self.left.conductor()
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        Ok(Self { left: self.left.try_mul(&other.left)?, right: self.right.try_mul(&other.right)? })
    }

    pub fn inverse(&self) -> Self {
        Self { left: self.left.conj(), right: self.right.conj() }
    }

    pub fn neg(&self) -> Self {
        Self { left: self.left.neg(), right: self.right.neg() }
    }

    pub fn swap(&self) -> Self {
        Self { left: self.right.clone(), right: self.left.clone() }
    }

    /// True for (1,1) and (-1,-1), the pairs acting trivially on S3.
    pub fn acts_trivially(&self) -> bool {
        self.left == self.right && self.left.is_sign()
    }

    pub fn embed(&self, target: u32) -> Result<Self> {
        Ok(Self { left: self.left.embed(target)?, right: self.right.embed(target)? })
    }

    /// c g c^-1.
    pub fn conjugate_by(&self, c: &SpinPair) -> Result<Self> {
        c.try_mul(self)?.try_mul(&c.inverse())
    }

    /// Exact test for a fixed point on S3: l and r have equal real parts.
    /// True for the pairs acting trivially as well.
    pub fn fixes_a_point(&self) -> bool {
        let (l, r) = (self.left.w1(), self.right.w1());
        let diff = (l.to_complex().0 - r.to_complex().0).abs();
        if diff > 2.0 * (l.float_error_bound() + r.float_error_bound()) + 1e-12 {
            return false;
        }
        self.left.real_part() == self.right.real_part()
    }

    /// Hamilton coordinates of both components in double precision.
    pub fn to_f64(&self) -> ([f64; 4], [f64; 4]) {
        (self.left.to_f64(), self.right.to_f64())
    }
}

impl fmt::Display for SpinPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

impl fmt::Debug for SpinPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SpinPair{self}")
    }
}

impl<'de> Deserialize<'de> for SpinPair {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Raw {
            left: UnitQuaternion,
            right: UnitQuaternion,
        }
        let r = Raw::deserialize(d)?;
        SpinPair::new(r.left, r.right).map_err(serde::de::Error::custom)
    }
}

/// x -> l x conj(r).
pub fn act(g: &SpinPair, x: &UnitQuaternion) -> Result<UnitQuaternion> {
    g.left.try_mul(x)?.try_mul(&g.right.conj())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FreeVerdict {
    Free,
    NotFree { witness: SpinPair },
}

impl FreeVerdict {
    pub fn is_free(&self) -> bool {
        matches!(self, FreeVerdict::Free)
    }
}

#[derive(Debug)]
struct SignQuotient {
    class_of: Vec<u32>,
    reps: Vec<u32>,
    table: CayleyTable,
}

/// A closed finite subgroup G~ of S3 x S3 containing (-1,-1).
///
/// The group acting on S3 is G = G~/{(1,1),(-1,-1)}; `order()` is |G|.
#[derive(Debug, Clone)]
pub struct SpinGroup {
    conductor: u32,
    generators: Vec<SpinPair>,
    elements: Arc<Vec<SpinPair>>,
    index: Arc<OnceLock<HashMap<SpinPair, u32>>>,
    table: Arc<CayleyTable>,
    minus: u32,
    quotient: OnceLock<Arc<SignQuotient>>,
    free: OnceLock<FreeVerdict>,
    projections: [OnceLock<Arc<SpinGroup>>; 2],
}

impl SpinGroup {
    pub fn closure(conductor: u32, generators: &[SpinPair]) -> Result<Self> {
        Self::closure_with_cap(conductor, generators, DEFAULT_CAP)
    }

    /// Breadth-first closure under right multiplication by the generators
    /// and (-1,-1). The full multiplication table is then filled in from the
    /// recorded right-multiplication maps without further quaternion products.
    pub fn closure_with_cap(conductor: u32, generators: &[SpinPair], cap: usize) -> Result<Self> {
        for g in generators {
            if g.conductor() != conductor {
                return Err(Error::ConductorMismatch { left: conductor, right: g.conductor() });
            }
        }
        let minus_identity = SpinPair::minus_identity(conductor);
        let mut steps: Vec<SpinPair> = Vec::new();
        for g in generators.iter().cloned().chain([minus_identity.clone()]) {
            if !(g.left.is_one() && g.right.is_one()) && !steps.contains(&g) {
                steps.push(g);
            }
        }
        let mut elements = vec![SpinPair::identity(conductor)];
        let mut index: HashMap<SpinPair, u32> = HashMap::new();
        index.insert(elements[0].clone(), 0);
        let mut parent: Vec<(u32, u32)> = vec![(0, 0)];
        let mut rmul: Vec<Vec<u32>> = vec![Vec::new(); steps.len()];
        let mut head = 0;
        while head < elements.len() {
            for (si, s) in steps.iter().enumerate() {
                let p = if *s == minus_identity { elements[head].neg() } else { elements[head].try_mul(s)? };
                let idx = match index.get(&p) {
                    Some(&i) => i,
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        let i = elements.len() as u32;
                        index.insert(p.clone(), i);
                        elements.push(p);
                        parent.push((head as u32, si as u32));
                        i
                    }
                };
                rmul[si].push(idx);
            }
            head += 1;
        }
        let n = elements.len();
        let mut mul = vec![0u32; n * n];
        for a in 0..n {
            let row = &mut mul[a * n..(a + 1) * n];
            row[0] = a as u32;
            for b in 1..n {
                let (p, s) = parent[b];
                row[b] = rmul[s as usize][row[p as usize] as usize];
            }
        }
        let table = CayleyTable::from_raw(n, mul);
        let minus = index[&SpinPair::minus_identity(conductor)];
        Ok(Self {
            conductor,
            generators: generators.to_vec(),
            elements: Arc::new(elements),
            index: Arc::new(OnceLock::from(index)),
            table: Arc::new(table),
            minus,
            quotient: OnceLock::new(),
            free: OnceLock::new(),
            projections: Default::default(),
        })
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn generators(&self) -> &[SpinPair] {
        &self.generators
    }

    /// All pairs of G~, identity first.
    pub fn elements(&self) -> &[SpinPair] {
        &self.elements
    }

    /// |G|, the order of the group acting on S3.
    pub fn order(&self) -> usize {
        self.elements.len() / 2
    }

    /// |G~| = 2|G|.
    pub fn pair_count(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, g: &SpinPair) -> Option<u32> {
        self.index().get(g).copied()
    }

    pub fn contains(&self, g: &SpinPair) -> bool {
        self.index().contains_key(g)
    }

    pub fn pair_table(&self) -> &CayleyTable {
        &self.table
    }

    fn sign_quotient(&self) -> &SignQuotient {
        self.quotient.get_or_init(|| {
            let n = self.elements.len();
            let mut class_of = vec![u32::MAX; n];
            let mut reps = Vec::with_capacity(n / 2);
            for a in 0..n as u32 {
                if class_of[a as usize] == u32::MAX {
                    let c = reps.len() as u32;
                    reps.push(a);
                    class_of[a as usize] = c;
                    class_of[self.table.mul(a, self.minus) as usize] = c;
                }
            }
            let q = reps.len();
            let mut mul = vec![0u32; q * q];
            for (i, &a) in reps.iter().enumerate() {
                for (j, &b) in reps.iter().enumerate() {
                    mul[i * q + j] = class_of[self.table.mul(a, b) as usize];
                }
            }
            Arc::new(SignQuotient { class_of, reps, table: CayleyTable::from_raw(q, mul) })
        })
    }

    /// Multiplication table of G = G~/±.
    pub fn quotient_table(&self) -> &CayleyTable {
        &self.sign_quotient().table
    }

    /// Order of g in G (so (-1,-1) has order 1).
    pub fn element_order(&self, g: &SpinPair) -> Result<usize> {
        let i = self.index_of(g).ok_or_else(|| Error::NotAMember(g.to_string()))?;
        let q = self.sign_quotient();
        Ok(q.table.element_order(q.class_of[i as usize]))
    }

    /// A pair whose image in G has order exactly `k`.
    pub fn has_element_of_order(&self, k: usize) -> Option<SpinPair> {
        let q = self.sign_quotient();
        (0..q.reps.len() as u32)
            .find(|&c| q.table.element_order(c) == k)
            .map(|c| self.elements[q.reps[c as usize] as usize].clone())
    }

    pub fn is_cyclic(&self) -> bool {
        self.quotient_table().is_cyclic()
    }

    pub fn is_abelian(&self) -> bool {
        self.quotient_table().is_abelian()
    }

    /// H1 of the quotient manifold: G/[G,G].
    pub fn abelianization(&self) -> AbelianGroup {
        self.quotient_table().abelianization()
    }

    /// Exact freeness test: (l, r) has a fixed point on S3 iff l and r are
    /// conjugate in S3, i.e. have equal real parts. A floating-point
    /// comparison with a rigorous error bound settles most pairs.
    pub fn is_free(&self) -> FreeVerdict {
        self.free
            .get_or_init(|| {
                for (i, g) in self.elements.iter().enumerate() {
                    if i == 0 || i as u32 == self.minus {
                        continue;
                    }
                    if g.fixes_a_point() {
                        return FreeVerdict::NotFree { witness: g.clone() };
                    }
                }
                FreeVerdict::Free
            })
            .clone()
    }

    fn index(&self) -> &HashMap<SpinPair, u32> {
        self.index
            .get_or_init(|| self.elements.iter().cloned().enumerate().map(|(i, g)| (g, i as u32)).collect())
    }

    /// Distinct components on `side` as a table-labelled subgroup of S3.
    fn component_classes(&self, side: Side) -> (Vec<u32>, Vec<u32>) {
        // Two elements share a component iff they differ by the kernel
        // {g : component(g) = 1}, so the classes are its cosets.
        let kernel: Vec<u32> = (0..self.elements.len() as u32)
            .filter(|&i| self.elements[i as usize].component(side).is_one())
            .collect();
        let mut class_of = vec![u32::MAX; self.elements.len()];
        let mut reps = Vec::new();
        for g in 0..self.elements.len() as u32 {
            if class_of[g as usize] != u32::MAX {
                continue;
            }
            let c = reps.len() as u32;
            reps.push(g);
            for &k in &kernel {
                class_of[self.table.mul(g, k) as usize] = c;
            }
        }
        (class_of, reps)
    }

    /// Order of the subgroup of S3 formed by the components on `side`.
    pub fn component_order(&self, side: Side) -> usize {
        self.component_classes(side).1.len()
    }

    /// True if every component on `side` is +1 or -1.
    pub fn side_is_sign(&self, side: Side) -> bool {
        self.elements.iter().all(|g| g.component(side).is_sign())
    }

    /// The one-sided group {(s, ±1)} (or {(±1, s)}) where s runs over the
    /// components on `side`. Built through the projection homomorphism.
    pub fn project(&self, side: Side) -> SpinGroup {
        let slot = &self.projections[matches!(side, Side::Right) as usize];
        SpinGroup::clone(slot.get_or_init(|| Arc::new(self.build_projection(side))))
    }

    fn build_projection(&self, side: Side) -> SpinGroup {
        let (class_of, reps) = self.component_classes(side);
        let s = reps.len();
        let n = 2 * s;
        let mut mul = vec![0u32; n * n];
        for c1 in 0..s {
            for c2 in 0..s {
                let c = class_of[self.table.mul(reps[c1], reps[c2]) as usize];
                for s1 in 0..2 {
                    for s2 in 0..2 {
                        mul[(2 * c1 + s1) * n + 2 * c2 + s2] = 2 * c + (s1 ^ s2) as u32;
                    }
                }
            }
        }
        let minus_one = UnitQuaternion::minus_one(self.conductor);
        let mut elements = Vec::with_capacity(n);
        for &r in &reps {
            let q = self.elements[r as usize].component(side).clone();
            let sign = match side {
                Side::Left => SpinPair { left: q.clone(), right: UnitQuaternion::one(self.conductor) },
                Side::Right => SpinPair { left: UnitQuaternion::one(self.conductor), right: q.clone() },
            };
            let neg = match side {
                Side::Left => SpinPair { left: q, right: minus_one.clone() },
                Side::Right => SpinPair { left: minus_one.clone(), right: q },
            };
            elements.push(sign);
            elements.push(neg);
        }
        let minus_identity = SpinPair::minus_identity(self.conductor);
        let minus = elements.iter().position(|g| *g == minus_identity).expect("-1 is a component") as u32;
        let mut generators: Vec<SpinPair> = Vec::new();
        for g in &self.generators {
            let p = SpinPair::one_sided(g.component(side).clone(), side);
            if !p.acts_trivially() && !generators.contains(&p) {
                generators.push(p);
            }
        }
        SpinGroup {
            conductor: self.conductor,
            generators,
            elements: Arc::new(elements),
            index: Arc::new(OnceLock::new()),
            table: Arc::new(CayleyTable::from_raw(n, mul)),
            minus,
            quotient: OnceLock::new(),
            free: OnceLock::new(),
            projections: Default::default(),
        }
    }

    /// The group with left and right exchanged (orientation reversal of S3).
    pub fn swap_orientation(&self) -> SpinGroup {
        let elements: Vec<SpinPair> = self.elements.iter().map(SpinPair::swap).collect();
        let free = OnceLock::new();
        if let Some(v) = self.free.get() {
            let _ = free.set(match v {
                FreeVerdict::Free => FreeVerdict::Free,
                FreeVerdict::NotFree { witness } => FreeVerdict::NotFree { witness: witness.swap() },
            });
        }
        SpinGroup {
            conductor: self.conductor,
            generators: self.generators.iter().map(SpinPair::swap).collect(),
            elements: Arc::new(elements),
            index: Arc::new(OnceLock::new()),
            table: self.table.clone(),
            minus: self.minus,
            quotient: self.quotient.clone(),
            free,
            projections: Default::default(),
        }
    }

    /// c G c^-1, closed from the conjugated generators.
    pub fn conjugate(&self, c: &SpinPair) -> Result<SpinGroup> {
        let gens = self
            .generators
            .iter()
            .map(|g| g.conjugate_by(c))
            .collect::<Result<Vec<_>>>()?;
        SpinGroup::closure(self.conductor, &gens)
    }

    /// Multiplication table of the component subgroup on `side`.
    fn component_table(&self, side: Side) -> CayleyTable {
        let (class_of, reps) = self.component_classes(side);
        let s = reps.len();
        let mut mul = vec![0u32; s * s];
        for (i, &a) in reps.iter().enumerate() {
            for (j, &b) in reps.iter().enumerate() {
                mul[i * s + j] = class_of[self.table.mul(a, b) as usize];
            }
        }
        CayleyTable::from_raw(s, mul)
    }
}

/// Isomorphism type of a subgroup S of S3 containing -1.
///
/// `Cyclic(n)` has order n; `Quaternionic(n)` is the dicyclic group of
/// order 4n; the binary polyhedral groups have orders 24, 48, 120.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupTag {
    Trivial,
    Cyclic(u64),
    Quaternionic(u64),
    BinaryTetrahedral,
    BinaryOctahedral,
    BinaryIcosahedral,
}

impl GroupTag {
    /// Order as a subgroup of S3 ({±1} for `Trivial`).
    pub fn order(&self) -> u64 {
        match *self {
            GroupTag::Trivial => 2,
            GroupTag::Cyclic(n) => n,
            GroupTag::Quaternionic(n) => 4 * n,
            GroupTag::BinaryTetrahedral => 24,
            GroupTag::BinaryOctahedral => 48,
            GroupTag::BinaryIcosahedral => 120,
        }
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self, GroupTag::Trivial | GroupTag::Cyclic(_))
    }

    pub fn is_polyhedral(&self) -> bool {
        matches!(
            self,
            GroupTag::BinaryTetrahedral | GroupTag::BinaryOctahedral | GroupTag::BinaryIcosahedral
        )
    }
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Trivial => write!(f, "Trivial"),
            GroupTag::Cyclic(n) => write!(f, "Cyclic({n})"),
            GroupTag::Quaternionic(n) => write!(f, "Quaternionic({n})"),
            GroupTag::BinaryTetrahedral => write!(f, "BinaryTetrahedral"),
            GroupTag::BinaryOctahedral => write!(f, "BinaryOctahedral"),
            GroupTag::BinaryIcosahedral => write!(f, "BinaryIcosahedral"),
        }
    }
}

/// Identifies the nontrivial factor of a group that is {±1} on one side.
/// The tag describes the subgroup S of S3 on the other side.
pub fn recognize(h: &SpinGroup) -> Result<GroupTag> {
    let side = if h.side_is_sign(Side::Right) {
        Side::Left
    } else if h.side_is_sign(Side::Left) {
        Side::Right
    } else {
        return Err(Error::Unrecognized("both components are nontrivial".into()));
    };
    let s = h.component_table(side);
    let n = s.order() as u64;
    if n <= 2 {
        return Ok(GroupTag::Trivial);
    }
    let ab = s.abelianization();
    if ab.order() == n {
        return if s.is_cyclic() {
            Ok(GroupTag::Cyclic(n))
        } else {
            Err(Error::Unrecognized(format!("abelian group {ab} is not cyclic")))
        };
    }
    let q = n / 4;
    match (n, ab.invariant_factors()) {
        (24, [3]) => Ok(GroupTag::BinaryTetrahedral),
        (48, [2]) => Ok(GroupTag::BinaryOctahedral),
        (120, []) => Ok(GroupTag::BinaryIcosahedral),
        (_, [4]) if n % 4 == 0 && q % 2 == 1 => Ok(GroupTag::Quaternionic(q)),
        (_, [2, 2]) if n % 4 == 0 && q % 2 == 0 => Ok(GroupTag::Quaternionic(q)),
        _ => Err(Error::Unrecognized(format!("order {n} with abelianization {ab}"))),
    }
}

/// On-disk form of a group: conductor, generators, optional cached elements.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupFile {
    pub conductor: u32,
    pub generators: Vec<SpinPair>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<SpinPair>>,
}

impl GroupFile {
    pub fn from_group(g: &SpinGroup, with_elements: bool) -> Self {
        Self {
            conductor: g.conductor(),
            generators: g.generators().to_vec(),
            elements: with_elements.then(|| g.elements().to_vec()),
        }
    }

    /// Re-closes the generators and checks any cached elements against the result.
    pub fn load(&self) -> Result<SpinGroup> {
        let g = SpinGroup::closure(self.conductor, &self.generators)?;
        if let Some(cached) = &self.elements {
            if cached.len() != g.pair_count() {
                return Err(Error::Parse(format!(
                    "cached element list has {} pairs, closure has {}",
                    cached.len(),
                    g.pair_count()
                )));
            }
            if let Some(bad) = cached.iter().find(|e| !g.contains(e)) {
                return Err(Error::NotAMember(bad.to_string()));
            }
        }
        Ok(g)
    }
}
