//! The prime-power divisor graph `(M, E(M))`, its `p`-planes, the
//! conditions (S_p), (T_p), (I) and (II), and Orlik block data.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::arith::{self, euler_phi, prime_power, valuation};
use crate::cyclo::{char_poly, PsiMap};
use crate::error::{Error, Result};
use crate::orders::{set_compatible, standard_covering, OrderTuple};
use crate::poly::IntPolynomial;
use crate::weights::WeightSystem;

/// An edge `from -> to` with `from / to = p^k`, `k >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct PEdge {
    pub from: u64,
    pub to: u64,
    pub p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MGraph {
    vertices: Vec<u64>,
    edges: Vec<PEdge>,
}

pub fn build_graph(m: &BTreeSet<u64>) -> Result<MGraph> {
    if m.is_empty() {
        return Err(Error::InvalidInput("the set M must be nonempty".into()));
    }
    if m.contains(&0) {
        return Err(Error::InvalidInput("elements must be >= 1".into()));
    }
    let vertices: Vec<u64> = m.iter().copied().collect();
    let mut edges = Vec::new();
    for &a in &vertices {
        for &b in &vertices {
            if a > b && a % b == 0 {
                if let Some((p, _)) = prime_power(a / b) {
                    edges.push(PEdge { from: a, to: b, p });
                }
            }
        }
    }
    edges.sort();
    Ok(MGraph { vertices, edges })
}

impl MGraph {
    pub fn vertices(&self) -> &[u64] {
        &self.vertices
    }

    pub fn edges(&self) -> &[PEdge] {
        &self.edges
    }

    /// Undirected components of the graph restricted to the kept edges,
    /// each sorted, listed by smallest element.
    fn components(&self, keep: impl Fn(&PEdge) -> bool) -> Vec<BTreeSet<u64>> {
        let index: BTreeMap<u64, usize> =
            self.vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut parent: Vec<usize> = (0..self.vertices.len()).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for e in self.edges.iter().filter(|e| keep(e)) {
            let (a, b) = (root(&mut parent, index[&e.from]), root(&mut parent, index[&e.to]));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        let mut groups: BTreeMap<usize, BTreeSet<u64>> = BTreeMap::new();
        for (i, &v) in self.vertices.iter().enumerate() {
            let r = root(&mut parent, i);
            groups.entry(r).or_default().insert(v);
        }
        let mut out: Vec<_> = groups.into_values().collect();
        out.sort_by_key(|c| *c.first().expect("components are nonempty"));
        out
    }

    pub fn connected_components(&self) -> Vec<BTreeSet<u64>> {
        self.components(|_| true)
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().len() == 1
    }

    pub fn p_planes(&self, p: u64) -> Vec<BTreeSet<u64>> {
        self.components(|e| e.p != p)
    }

    fn p_targets(&self, p: u64) -> BTreeSet<u64> {
        self.edges.iter().filter(|e| e.p == p).map(|e| e.to).collect()
    }

    pub fn highest_p_planes(&self, p: u64) -> Vec<BTreeSet<u64>> {
        let targets = self.p_targets(p);
        self.p_planes(p)
            .into_iter()
            .filter(|plane| plane.is_disjoint(&targets))
            .collect()
    }

    pub fn highest_p_edges(&self, p: u64) -> Vec<PEdge> {
        let targets = self.p_targets(p);
        self.edges
            .iter()
            .filter(|e| e.p == p && !targets.contains(&e.from))
            .copied()
            .collect()
    }

    pub fn check_tp(&self, p: u64) -> bool {
        self.highest_p_planes(p).len() == 1
    }

    pub fn check_sp(&self, p: u64) -> bool {
        let highest: BTreeSet<PEdge> = self.highest_p_edges(p).into_iter().collect();
        self.components(|e| !highest.contains(e)).len() <= 2
    }

    /// Primes dividing some vertex.
    pub fn primes(&self) -> BTreeSet<u64> {
        self.vertices
            .iter()
            .flat_map(|&m| arith::factorize(m).expect("vertices are positive").primes().collect::<Vec<_>>())
            .collect()
    }

    /// The first failing clause of condition (I), if any.
    pub fn condition_i_failure(&self) -> Option<String> {
        if !self.is_connected() {
            return Some("connected".into());
        }
        if !self.check_sp(2) {
            return Some("S_2".into());
        }
        self.primes()
            .into_iter()
            .filter(|&p| p >= 3)
            .find(|&p| !self.check_tp(p))
            .map(|p| format!("T_p:{p}"))
    }

    pub fn check_condition_i(&self) -> bool {
        self.condition_i_failure().is_none()
    }

    pub fn check_condition_ii(&self) -> bool {
        let comps = self.connected_components();
        if comps.len() != 2 {
            return false;
        }
        let ok_part = |c: &BTreeSet<u64>| -> bool {
            let g = build_graph(c).expect("component is nonempty");
            g.edges.iter().all(|e| e.p != 2)
                && g.primes().into_iter().filter(|&p| p >= 3).all(|p| g.check_tp(p))
        };
        if !comps.iter().all(ok_part) {
            return false;
        }
        let max_v = |c: &BTreeSet<u64>, p: u64| c.iter().map(|&m| valuation(p, m)).max().unwrap_or(0);
        // gcd(lcm M1, lcm M2) in {1, 2}: no shared odd prime and at most one shared 2
        let (g0, g1) = (build_graph(&comps[0]).unwrap(), build_graph(&comps[1]).unwrap());
        let (p0, p1) = (g0.primes(), g1.primes());
        if p0.intersection(&p1).any(|&p| p != 2) {
            return false;
        }
        if max_v(&comps[0], 2).min(max_v(&comps[1], 2)) > 1 {
            return false;
        }
        let (a, b) = (max_v(&comps[0], 2), max_v(&comps[1], 2));
        (a <= 1 && b > a) || (b <= 1 && a > b)
    }

    pub fn verdict(&self) -> BlockVerdict {
        let failing = self.condition_i_failure();
        BlockVerdict {
            set: self.vertices.clone(),
            connected: self.is_connected(),
            condition_i: failing.is_none(),
            failing_condition: failing,
            condition_ii: self.check_condition_ii(),
        }
    }
}

/// Summary of the conditions for one set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BlockVerdict {
    #[serde(rename = "M")]
    pub set: Vec<u64>,
    pub connected: bool,
    pub failing_condition: Option<String>,
    #[serde(rename = "condition_I")]
    pub condition_i: bool,
    #[serde(rename = "condition_II")]
    pub condition_ii: bool,
}

/// Rank and characteristic polynomial of the Orlik block of `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrlikBlockSpec {
    pub set: BTreeSet<u64>,
    pub rank: u64,
    pub charpoly: IntPolynomial,
}

pub fn orlik_block(m: &BTreeSet<u64>) -> Result<OrlikBlockSpec> {
    if m.is_empty() || m.contains(&0) {
        return Err(Error::InvalidInput("M must be a nonempty set of positive integers".into()));
    }
    let mut rank = 0u64;
    for &x in m {
        rank = rank
            .checked_add(euler_phi(x)?)
            .ok_or(Error::Overflow("block rank"))?;
    }
    let psi = PsiMap::from_multiplicities(m.iter().map(|&x| (x, 1)))?;
    Ok(OrlikBlockSpec {
        set: m.clone(),
        rank,
        charpoly: char_poly(&psi)?,
    })
}

/// Every member of the standard covering of `ψ_w` satisfies condition (I).
pub fn verify_covering_condition_i(ws: &WeightSystem) -> Result<bool> {
    if !ws.check_c2() {
        return Err(Error::Precondition(format!("{ws} does not satisfy (C2)")));
    }
    let mut members = standard_covering(&ws.psi_w())?.members;
    // the members are nested, so equal ones are adjacent
    members.dedup();
    for m in &members {
        if !build_graph(m)?.check_condition_i() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A set compatible with an order tuple is connected, satisfies (S_p) for
/// every prime and satisfies condition (I).
pub fn verify_compatible_set_condition_i(m: &BTreeSet<u64>, t: &OrderTuple) -> Result<bool> {
    if !set_compatible(m, t)? {
        return Err(Error::Precondition("M is not compatible with the orders".into()));
    }
    let g = build_graph(m)?;
    // a prime dividing no element contributes no edges, so (S_p) reduces to connectivity
    Ok(g.is_connected()
        && g.primes().into_iter().all(|p| g.check_sp(p))
        && g.check_condition_i())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::orders::ExcellentOrder;
    use proptest::prelude::*;

    fn set(xs: &[u64]) -> BTreeSet<u64> {
        xs.iter().copied().collect()
    }

    fn graph(xs: &[u64]) -> MGraph {
        build_graph(&set(xs)).unwrap()
    }

    fn e(from: u64, to: u64, p: u64) -> PEdge {
        PEdge { from, to, p }
    }

    #[test]
    fn graphs() {
        assert_eq!(graph(&[1, 2, 4]).edges(), &[e(2, 1, 2), e(4, 1, 2), e(4, 2, 2)]);
        assert!(graph(&[2, 3]).edges().is_empty());
        assert!(graph(&[6]).edges().is_empty());
        assert_eq!(graph(&[1, 3, 6]).edges(), &[e(3, 1, 3), e(6, 3, 2)]);
        assert!(build_graph(&set(&[])).is_err());
        assert!(build_graph(&set(&[0, 1])).is_err());
    }

    #[test]
    fn planes() {
        let g = graph(&[1, 2, 4]);
        assert_eq!(g.p_planes(2), vec![set(&[1]), set(&[2]), set(&[4])]);
        assert_eq!(g.p_planes(3), vec![set(&[1, 2, 4])]);
        assert_eq!(graph(&[2, 3]).p_planes(2), vec![set(&[2]), set(&[3])]);
        assert_eq!(g.highest_p_planes(2), vec![set(&[4])]);
        assert_eq!(g.highest_p_edges(2), vec![e(4, 1, 2), e(4, 2, 2)]);
        assert_eq!(g.highest_p_planes(3), vec![set(&[1, 2, 4])]);
        assert_eq!(graph(&[2, 3]).highest_p_planes(3), vec![set(&[2]), set(&[3])]);
    }

    #[test]
    fn t_and_s() {
        let g = graph(&[1, 2, 4]);
        assert!(g.check_tp(2) && g.check_sp(2));
        let g = graph(&[2, 3]);
        for p in [2, 3, 5] {
            assert!(!g.check_tp(p));
        }
        let g = graph(&[6]);
        for p in [2, 3, 5] {
            assert!(g.check_tp(p) && g.check_sp(p));
        }
    }

    #[test]
    fn conditions() {
        assert!(graph(&[1, 2, 4]).check_condition_i());
        assert!(!graph(&[2, 3]).check_condition_i());
        assert!(graph(&[2, 3]).check_condition_ii());
        assert!(!graph(&[1, 2, 4]).check_condition_ii());
        assert!(!graph(&[3, 4, 8]).check_condition_ii());
        // both parts carry 2^2
        assert!(!graph(&[4, 12 * 5]).check_condition_ii());
        // shared odd prime
        assert!(!graph(&[3, 10 * 3 * 7]).check_condition_ii());
        assert!(graph(&[1, 3, 9]).check_condition_i());
        assert_eq!(graph(&[2, 3]).verdict().failing_condition.as_deref(), Some("connected"));
    }

    #[test]
    fn verdict_json() {
        let s = serde_json::to_string(&graph(&[1, 2, 4]).verdict()).unwrap();
        assert_eq!(
            s,
            r#"{"M":[1,2,4],"connected":true,"failing_condition":null,"condition_I":true,"condition_II":false}"#
        );
    }

    #[test]
    fn orlik_blocks() {
        let b = orlik_block(&set(&[1])).unwrap();
        assert_eq!((b.rank, b.charpoly.to_string()), (1, "t - 1".to_string()));
        let b = orlik_block(&set(&[1, 2, 3])).unwrap();
        assert_eq!(b.rank, 4);
        // (t-1)(t+1)(t^2+t+1) = t^4 + t^3 - t - 1
        assert_eq!(b.charpoly.to_string(), "t^4 + t^3 - t - 1");
        let b = orlik_block(&set(&[3])).unwrap();
        assert_eq!((b.rank, b.charpoly.to_string()), (2, "t^2 + t + 1".to_string()));
        assert!(orlik_block(&set(&[])).is_err());
    }

    #[test]
    fn condition_i_checks() {
        assert!(verify_covering_condition_i(&WeightSystem::new(vec![1], 3).unwrap()).unwrap());
        let t1 = WeightSystem::new(vec![27, 16, 10, 1], 81).unwrap();
        assert!(matches!(verify_covering_condition_i(&t1), Err(Error::Precondition(_))));
        let t = OrderTuple::from_orders([(3, ExcellentOrder::new(1, [1]).unwrap())]).unwrap();
        assert!(verify_compatible_set_condition_i(&set(&[1, 3]), &t).unwrap());
        assert!(matches!(verify_compatible_set_condition_i(&set(&[1]), &t), Err(Error::Precondition(_))));
    }

    #[test]
    fn conditions_are_exclusive() {
        // (I) needs a connected graph and (II) exactly two components
        for bits in 1u32..(1 << 12) {
            let m: BTreeSet<u64> = (1..=12u64).filter(|i| bits >> (i - 1) & 1 == 1).collect();
            let g = build_graph(&m).unwrap();
            assert!(!(g.check_condition_i() && g.check_condition_ii()), "{m:?}");
        }
    }

    proptest! {
        #[test]
        fn s_p_implies_t_p_when_connected(m in prop::collection::btree_set(1u64..200, 1..8)) {
            let g = build_graph(&m).unwrap();
            if g.is_connected() {
                for p in [2u64, 3, 5, 7, 11, 13] {
                    if g.check_sp(p) {
                        prop_assert!(g.check_tp(p));
                    }
                }
            }
        }
    }
}
