//! Excellent orders, quadrant graphs, and the compatibility predicates for
//! sets, multiplicity maps and coverings.
//!
//! Compatibility is evaluated over every prime of the order tuple. A prime
//! of the tuple that divides no element of `M` still contributes the fibre
//! `K = {0}`, which is compatible only when its order has `0` on top.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::arith::{self, split_p};
use crate::cyclo::PsiMap;
use crate::error::{Error, Result};
use crate::weights::WeightSystem;

/// A strict total order on `{0, ..., s}` determined by `S = {k : k > 0}`:
/// it agrees with `>` on `S ∪ {0}`, with `<` on the complement, and puts
/// all of `S ∪ {0}` above the rest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "OrderRepr", into = "OrderRepr")]
pub struct ExcellentOrder {
    s: u32,
    above_zero: BTreeSet<u32>,
    /// elements from the maximum down
    chain: Vec<u32>,
    /// `rank[k]` is the position of `k` in `chain`
    rank: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct OrderRepr {
    s: u32,
    #[serde(rename = "S")]
    set: Vec<u32>,
}

impl TryFrom<OrderRepr> for ExcellentOrder {
    type Error = Error;
    fn try_from(r: OrderRepr) -> Result<Self> {
        ExcellentOrder::new(r.s, r.set)
    }
}

impl From<ExcellentOrder> for OrderRepr {
    fn from(o: ExcellentOrder) -> Self {
        OrderRepr {
            s: o.s,
            set: o.above_zero.iter().rev().copied().collect(),
        }
    }
}

impl ExcellentOrder {
    pub fn new<I: IntoIterator<Item = u32>>(s: u32, set: I) -> Result<Self> {
        let above_zero: BTreeSet<u32> = set.into_iter().collect();
        if let Some(&bad) = above_zero.iter().find(|&&k| k == 0 || k > s) {
            return Err(Error::InvalidInput(format!(
                "S must be a subset of 1..={s}, got {bad}"
            )));
        }
        let mut chain: Vec<u32> = above_zero.iter().rev().copied().collect();
        chain.push(0);
        chain.extend((1..=s).filter(|k| !above_zero.contains(k)));
        let mut rank = vec![0; s as usize + 1];
        for (i, &k) in chain.iter().enumerate() {
            rank[k as usize] = i;
        }
        Ok(Self {
            s,
            above_zero,
            chain,
            rank,
        })
    }

    /// The trivial order on `{0}`.
    pub fn trivial() -> Self {
        Self::new(0, []).expect("valid")
    }

    pub fn bound(&self) -> u32 {
        self.s
    }

    pub fn above_zero(&self) -> &BTreeSet<u32> {
        &self.above_zero
    }

    /// `{0..s}` listed from the maximum down.
    pub fn chain(&self) -> &[u32] {
        &self.chain
    }

    /// `Greater` iff `a ≻ b`.
    pub fn compare(&self, a: u32, b: u32) -> Result<Ordering> {
        if a > self.s || b > self.s {
            return Err(Error::InvalidInput(format!(
                "elements must lie in 0..={}, got {a} and {b}",
                self.s
            )));
        }
        Ok(self.precedes(a, b))
    }

    #[inline]
    fn precedes(&self, a: u32, b: u32) -> Ordering {
        self.rank[b as usize].cmp(&self.rank[a as usize])
    }

    /// The maximal element `s⁺`.
    pub fn max_element(&self) -> u32 {
        self.chain[0]
    }

    /// `s = max(s1, s2)`, `S = S1 △ S2`.
    pub fn tensor(&self, other: &Self) -> Self {
        let set = self
            .above_zero
            .symmetric_difference(&other.above_zero)
            .copied();
        Self::new(self.s.max(other.s), set).expect("symmetric difference stays in range")
    }

    /// `K` is the full range or `{k : k ≻ k_K}` for some bound, i.e. a
    /// prefix of the descending chain.
    pub fn subset_compatible(&self, k: &BTreeSet<u32>) -> bool {
        k.len() <= self.chain.len()
            && k.iter().all(|&x| x <= self.s)
            && self.chain[..k.len()].iter().all(|x| k.contains(x))
    }
}

/// Excellent orders indexed by prime; absent primes are read as the trivial
/// order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "BTreeMap<u64, ExcellentOrder>", try_from = "BTreeMap<u64, ExcellentOrder>")]
pub struct OrderTuple {
    orders: BTreeMap<u64, ExcellentOrder>,
}

impl TryFrom<BTreeMap<u64, ExcellentOrder>> for OrderTuple {
    type Error = Error;

    fn try_from(map: BTreeMap<u64, ExcellentOrder>) -> Result<Self> {
        Self::from_orders(map)
    }
}

impl From<OrderTuple> for BTreeMap<u64, ExcellentOrder> {
    fn from(t: OrderTuple) -> Self {
        t.orders
    }
}

impl OrderTuple {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, p: u64, o: ExcellentOrder) -> Result<()> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        self.orders.insert(p, o);
        Ok(())
    }

    pub fn from_orders<I: IntoIterator<Item = (u64, ExcellentOrder)>>(it: I) -> Result<Self> {
        let mut t = Self::new();
        for (p, o) in it {
            t.insert(p, o)?;
        }
        Ok(t)
    }

    pub fn get(&self, p: u64) -> Option<&ExcellentOrder> {
        self.orders.get(&p)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.orders.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u64, &ExcellentOrder)> {
        self.orders.iter().map(|(&p, o)| (p, o))
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    /// `v_V = prod p^{s⁺(≻_p)}`.
    pub fn center(&self) -> Result<u64> {
        self.orders.iter().try_fold(1u64, |acc, (&p, o)| {
            p.checked_pow(o.max_element())
                .and_then(|x| acc.checked_mul(x))
                .ok_or(Error::Overflow("quadrant center"))
        })
    }

    /// Whether `m` lies in the quadrant `V`.
    pub fn in_quadrant(&self, m: u64) -> bool {
        let Ok(f) = arith::factorize(m) else {
            return false;
        };
        f.factors()
            .iter()
            .all(|&(p, e)| self.orders.get(&p).is_some_and(|o| e <= o.bound()))
    }

    /// Primes of `set` that the tuple does not cover.
    fn check_covered<I: IntoIterator<Item = u64>>(&self, set: I) -> Result<()> {
        for m in set {
            if m == 0 {
                return Err(Error::InvalidInput("elements must be >= 1".into()));
            }
            for p in arith::factorize(m)?.primes() {
                if !self.orders.contains_key(&p) {
                    return Err(Error::MissingPrime(p));
                }
            }
        }
        Ok(())
    }
}

/// Prime-wise tensor product; a prime missing on one side pairs with the
/// trivial order.
pub fn tensor_tuple(a: &OrderTuple, b: &OrderTuple) -> OrderTuple {
    let trivial = ExcellentOrder::trivial();
    let primes: BTreeSet<u64> = a.primes().chain(b.primes()).collect();
    OrderTuple {
        orders: primes
            .into_iter()
            .map(|p| {
                let x = a.get(p).unwrap_or(&trivial);
                let y = b.get(p).unwrap_or(&trivial);
                (p, x.tensor(y))
            })
            .collect(),
    }
}

/// Directed graph on the quadrant with fibre edges ordered by the excellent
/// orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadrantGraph {
    pub vertices: BTreeSet<u64>,
    /// `(m_a, m_b, p)` with `pi_p(m_a) = pi_p(m_b)` and `v_p(m_a) ≻_p v_p(m_b)`
    pub edges: Vec<(u64, u64, u64)>,
    pub center: u64,
}

impl QuadrantGraph {
    pub fn new(t: &OrderTuple) -> Result<Self> {
        let mut vertices = BTreeSet::from([1u64]);
        for (&p, o) in &t.orders {
            let mut next = BTreeSet::new();
            for &m in &vertices {
                let mut x = m;
                for k in 0..=o.bound() {
                    if k > 0 {
                        x = x.checked_mul(p).ok_or(Error::Overflow("quadrant vertex"))?;
                    }
                    next.insert(x);
                }
            }
            vertices = next;
        }
        let mut edges = Vec::new();
        for (&p, o) in &t.orders {
            let mut fibres: BTreeMap<u64, Vec<(u64, u32)>> = BTreeMap::new();
            for &m in &vertices {
                let (rest, e) = split_p(p, m);
                fibres.entry(rest).or_default().push((m, e));
            }
            for fibre in fibres.values() {
                for &(a, ea) in fibre {
                    for &(b, eb) in fibre {
                        if o.precedes(ea, eb) == Ordering::Greater {
                            edges.push((a, b, p));
                        }
                    }
                }
            }
        }
        Ok(Self {
            vertices,
            edges,
            center: t.center()?,
        })
    }

    /// Every edge ending in `m` starts in `m`; `m` is taken inside `V`.
    pub fn closed_under_predecessors(&self, m: &BTreeSet<u64>) -> bool {
        self.edges
            .iter()
            .all(|(a, b, _)| !m.contains(b) || m.contains(a))
    }

    /// `m` contains the center, every vertex of `m` is reachable from it
    /// inside `m`, and `m` contains every vertex of any path ending in `m`;
    /// `m` is taken inside `V`.
    pub fn rooted_and_path_closed(&self, m: &BTreeSet<u64>) -> bool {
        if !m.contains(&self.center) {
            return false;
        }
        let mut reached = BTreeSet::from([self.center]);
        let mut queue = VecDeque::from([self.center]);
        while let Some(x) = queue.pop_front() {
            for &(a, b, _) in &self.edges {
                if a == x && m.contains(&b) && reached.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        reached.len() == m.len() && self.ancestors(m).is_subset(m)
    }

    /// Vertices with a path to some vertex of `targets`, the targets included.
    fn ancestors(&self, targets: &BTreeSet<u64>) -> BTreeSet<u64> {
        let mut seen = targets.clone();
        let mut queue: VecDeque<u64> = targets.iter().copied().collect();
        while let Some(x) = queue.pop_front() {
            for &(a, b, _) in &self.edges {
                if b == x && seen.insert(a) {
                    queue.push_back(a);
                }
            }
        }
        seen
    }
}

/// Compatibility of a finite set with an order tuple: `M ⊆ V` and every
/// fibre `K_{M,p,m_0}` is a prefix of the chain of `≻_p`.
pub fn set_compatible(m: &BTreeSet<u64>, t: &OrderTuple) -> Result<bool> {
    nonempty(m)?;
    t.check_covered(m.iter().copied())?;
    if !m.iter().all(|&x| t.in_quadrant(x)) {
        return Ok(false);
    }
    for (p, o) in t.iter() {
        let mut fibres: BTreeMap<u64, BTreeSet<u32>> = BTreeMap::new();
        for &x in m {
            let (rest, e) = split_p(p, x);
            fibres.entry(rest).or_default().insert(e);
        }
        if !fibres.values().all(|k| o.subset_compatible(k)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The same predicate through the quadrant graph: every edge ending in `M`
/// starts in `M`.
pub fn set_compatible_via_graph(m: &BTreeSet<u64>, t: &OrderTuple) -> Result<bool> {
    nonempty(m)?;
    t.check_covered(m.iter().copied())?;
    if !m.iter().all(|&x| t.in_quadrant(x)) {
        return Ok(false);
    }
    Ok(QuadrantGraph::new(t)?.closed_under_predecessors(m))
}

/// The same predicate through paths: `M` contains the center, every vertex of
/// `M` is reachable from it inside `M`, and `M` contains every vertex of any
/// path whose target lies in `M`.
pub fn set_compatible_via_paths(m: &BTreeSet<u64>, t: &OrderTuple) -> Result<bool> {
    nonempty(m)?;
    t.check_covered(m.iter().copied())?;
    if !m.iter().all(|&x| t.in_quadrant(x)) {
        return Ok(false);
    }
    Ok(QuadrantGraph::new(t)?.rooted_and_path_closed(m))
}

fn nonempty(m: &BTreeSet<u64>) -> Result<()> {
    if m.is_empty() {
        Err(Error::InvalidInput("the set M must be nonempty".into()))
    } else {
        Ok(())
    }
}

/// `supp ψ ⊆ V` and `ψ(m_a) >= ψ(m_b)` along every edge of the quadrant.
pub fn map_compatible(psi: &PsiMap, t: &OrderTuple) -> Result<bool> {
    let mult = psi.multiplicities()?;
    t.check_covered(mult.keys().copied())?;
    if !mult.keys().all(|&x| t.in_quadrant(x)) {
        return Ok(false);
    }
    let value = |x: u64| mult.get(&x).copied().unwrap_or(0);
    // edges ending outside the support hold trivially
    for (&target, &level) in &mult {
        for (p, o) in t.iter() {
            let (rest, e) = split_p(p, target);
            let mut pk = 1u64;
            for k in 0..=o.bound() {
                if k > 0 {
                    pk = pk.checked_mul(p).ok_or(Error::Overflow("quadrant vertex"))?;
                }
                if o.precedes(k, e) == Ordering::Greater {
                    let source = rest.checked_mul(pk).ok_or(Error::Overflow("quadrant vertex"))?;
                    if value(source) < level {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// A tuple of finite nonempty sets; `ψ(m)` counts the members containing `m`.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct Covering {
    pub members: Vec<BTreeSet<u64>>,
}

impl Covering {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// The covered multiplicity map.
    pub fn psi(&self) -> PsiMap {
        let mut counts: BTreeMap<u64, u64> = BTreeMap::new();
        for m in self.members.iter().flatten() {
            *counts.entry(*m).or_default() += 1;
        }
        PsiMap::from_multiplicities(counts).expect("members hold positive integers")
    }
}

/// `M_j = {m : ψ(m) >= j}` for `j = 1..=l_ψ`.
pub fn standard_covering(psi: &PsiMap) -> Result<Covering> {
    let mult = psi.multiplicities()?;
    let top = mult.values().copied().max().unwrap_or(0);
    let members = (1..=top)
        .map(|j| mult.iter().filter(|(_, &e)| e >= j).map(|(&m, _)| m).collect())
        .collect();
    Ok(Covering { members })
}

pub fn covering_compatible(c: &Covering, t: &OrderTuple) -> Result<bool> {
    for m in &c.members {
        if !set_compatible(m, t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The orders attached to a (C2) weight system: for each prime `p` of the
/// support of `ψ_w`, `s = max v_p(m)` and `S = {k : |{j : p^k | t_j}| odd}`.
pub fn weight_orders(ws: &WeightSystem) -> Result<OrderTuple> {
    if !ws.check_c2() {
        return Err(Error::Precondition(format!("{ws} does not satisfy (C2)")));
    }
    let support: Vec<u64> = ws.psi_w().support().collect();
    let ts: Vec<u64> = ws.st_pairs().pairs.iter().map(|&(_, t)| t).collect();
    let mut primes = BTreeSet::new();
    for &m in &support {
        primes.extend(arith::factorize(m)?.primes());
    }
    let mut tuple = OrderTuple::new();
    for p in primes {
        let s = support
            .iter()
            .map(|&m| arith::valuation(p, m))
            .max()
            .unwrap_or(0);
        let set = (1..=s).filter(|&k| {
            let pk = p.pow(k);
            ts.iter().filter(|&&t| t % pk == 0).count() % 2 == 1
        });
        tuple.insert(p, ExcellentOrder::new(s, set)?)?;
    }
    Ok(tuple)
}
