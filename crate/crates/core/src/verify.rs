//! Seeded randomized and exhaustive invariant suites over every module.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith;
use crate::blocks::{build_graph, orlik_block, verify_compatible_set_condition_i, verify_covering_condition_i};
use crate::census::{verify_sweep, EngineConfig, SearchSpec, SweepCheck};
use crate::cyclo::{char_poly, rat, tensor_psi, CycloElement, PsiMap};
use crate::error::{Error, Result};
use crate::orders::{
    covering_compatible, map_compatible, set_compatible, set_compatible_via_graph, set_compatible_via_paths,
    standard_covering, tensor_tuple, weight_orders, ExcellentOrder,
    OrderTuple, QuadrantGraph,
};
use crate::poly::IntPolynomial;
use crate::weights::WeightSystem;

const MAX_REPORTED: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Cyclo,
    Orders,
    Blocks,
    Weights,
    Sweeps,
    All,
}

impl Suite {
    pub fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "cyclo" => Self::Cyclo,
            "orders" => Self::Orders,
            "blocks" => Self::Blocks,
            "weights" => Self::Weights,
            "sweeps" => Self::Sweeps,
            "all" => Self::All,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub name: String,
    pub cases: u64,
    pub violations: u64,
    /// the first few counterexamples
    pub examples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub properties: Vec<PropertyReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.violations == 0)
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }
}

struct Recorder {
    current: PropertyReport,
}

impl Recorder {
    fn new(name: &str) -> Self {
        Self {
            current: PropertyReport {
                name: name.to_string(),
                cases: 0,
                violations: 0,
                examples: Vec::new(),
            },
        }
    }

    fn check(&mut self, ok: bool, case: impl FnOnce() -> String) {
        self.current.cases += 1;
        if !ok {
            self.current.violations += 1;
            if self.current.examples.len() < MAX_REPORTED {
                self.current.examples.push(case());
            }
        }
    }

    fn finish(self) -> PropertyReport {
        self.current
    }
}

pub fn run_suite(suite: Suite, seed: u64) -> Result<VerifyReport> {
    let mut properties = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let all = suite == Suite::All;
    if all || suite == Suite::Cyclo {
        properties.extend(cyclo_suite(&mut rng)?);
    }
    if all || suite == Suite::Weights {
        properties.extend(weights_suite(&mut rng)?);
    }
    if all || suite == Suite::Orders {
        properties.extend(orders_suite(&mut rng)?);
    }
    if all || suite == Suite::Blocks {
        properties.extend(blocks_suite(&mut rng)?);
    }
    if all || suite == Suite::Sweeps {
        properties.extend(sweeps_suite()?);
    }
    Ok(VerifyReport { seed, properties })
}

fn random_element(rng: &mut ChaCha8Rng) -> CycloElement {
    // indices divide 360 so that d_chi stays small
    let divs = arith::divisors(360).expect("positive");
    let terms = (0..rng.gen_range(0..5)).map(|_| {
        let n = *divs.choose(rng).expect("nonempty");
        (n, rat(rng.gen_range(-6..=6), rng.gen_range(1..=4)))
    });
    CycloElement::from_terms(terms.collect::<Vec<_>>()).expect("indices are positive")
}

fn random_psi(rng: &mut ChaCha8Rng, max_m: u64, max_mult: u64) -> PsiMap {
    let terms: Vec<(u64, u64)> = (0..rng.gen_range(1..5))
        .map(|_| (rng.gen_range(1..=max_m), rng.gen_range(1..=max_mult)))
        .collect();
    let mut acc: BTreeMap<u64, u64> = BTreeMap::new();
    for (m, e) in terms {
        *acc.entry(m).or_default() += e;
    }
    PsiMap::from_multiplicities(acc).expect("positive multiplicities")
}

fn cyclo_suite(rng: &mut ChaCha8Rng) -> Result<Vec<PropertyReport>> {
    let mut basis = Recorder::new("cyclo.basis_round_trip");
    let mut lefschetz = Recorder::new("cyclo.lefschetz_round_trip");
    let mut hom = Recorder::new("cyclo.trace_degree_lefschetz_homomorphisms");
    let mut charpoly = Recorder::new("cyclo.charpoly_product");
    let mut tensor = Recorder::new("cyclo.tensor_degree_multiplies");
    for _ in 0..300 {
        let x = random_element(rng);
        let y = random_element(rng);
        basis.check(CycloElement::from_psi(&x.to_psi()) == x, || format!("{x:?}"));
        let d = x.d_chi()?;
        let values: BTreeMap<u64, BigRational> = arith::divisors(d)?
            .into_iter()
            .map(|k| (k, x.lefschetz(k)))
            .collect();
        lefschetz.check(CycloElement::from_lefschetz(&values, d)? == x, || format!("{x:?}"));
        let sum = &x + &y;
        let prod = &x * &y;
        let mut ok = sum.trace() == x.trace() + y.trace()
            && prod.trace() == x.trace() * y.trace()
            && sum.degree() == x.degree() + y.degree()
            && prod.degree() == x.degree() * y.degree();
        for k in 1..=12u64 {
            ok &= prod.lefschetz(k) == x.lefschetz(k) * y.lefschetz(k)
                && sum.lefschetz(k) == x.lefschetz(k) + y.lefschetz(k);
        }
        hom.check(ok, || format!("{x:?} and {y:?}"));

        let p = random_psi(rng, 30, 3);
        let q = random_psi(rng, 30, 3);
        let (fp, fq) = (char_poly(&p)?, char_poly(&q)?);
        let mut merged = p.multiplicities()?;
        for (m, e) in q.multiplicities()? {
            *merged.entry(m).or_default() += e;
        }
        let fpq = char_poly(&PsiMap::from_multiplicities(merged)?)?;
        charpoly.check(fp.mul(&fq) == fpq, || format!("{p:?} and {q:?}"));
        let deg = |f: &IntPolynomial| f.degree().unwrap_or(0) as u64;
        let t = tensor_psi(&p, &q)?;
        tensor.check(
            t.is_nonneg_integral() && psi_degree(&t)? == deg(&fp) * deg(&fq),
            || format!("{p:?} and {q:?}"),
        );
    }
    Ok(vec![
        basis.finish(),
        lefschetz.finish(),
        hom.finish(),
        charpoly.finish(),
        tensor.finish(),
    ])
}

/// `sum_m psi(m) phi(m)`.
fn psi_degree(p: &PsiMap) -> Result<u64> {
    p.multiplicities()?
        .into_iter()
        .try_fold(0u64, |acc, (m, e)| Ok(acc + e * arith::euler_phi(m)?))
}

fn random_weights(rng: &mut ChaCha8Rng, max_n: usize, max_d: u64) -> WeightSystem {
    let n = rng.gen_range(1..=max_n);
    let d = rng.gen_range(2..=max_d);
    let v = (0..n).map(|_| rng.gen_range(1..d)).collect();
    WeightSystem::new(v, d).expect("weights below d")
}

/// Rejection-samples a (C2) system.
fn random_c2(rng: &mut ChaCha8Rng, max_n: usize, max_d: u64) -> WeightSystem {
    loop {
        let ws = random_weights(rng, max_n, max_d).reduce();
        if ws.check_c2() {
            return ws;
        }
    }
}

fn weights_suite(rng: &mut ChaCha8Rng) -> Result<Vec<PropertyReport>> {
    let mut closed = Recorder::new("weights.lefschetz_closed_form");
    let mut implies = Recorder::new("weights.c2_implies_c2bar");
    let mut integral = Recorder::new("weights.c2bar_iff_rho_integral");
    let mut milnor = Recorder::new("weights.degree_equals_milnor");
    let mut sigma = Recorder::new("weights.sigma_matches_divisor");
    let mut fast = Recorder::new("weights.psi_value_matches_divisor");
    for _ in 0..400 {
        let ws = random_weights(rng, 4, 40);
        let div = ws.divisor();
        let mut ok = true;
        for k in arith::divisors(ws.d_w())? {
            ok &= ws.lefschetz_closed_form(k)? == div.lefschetz(k);
        }
        closed.check(ok, || ws.to_string());
        let c2bar = ws.check_c2bar();
        implies.check(!ws.check_c2() || c2bar, || ws.to_string());
        integral.check(c2bar == ws.rho_is_integral(), || ws.to_string());
        let psi = ws.psi_w();
        let mut same = true;
        for m in arith::divisors(ws.d_w())? {
            same &= ws.psi_value(m) == psi.get(m);
        }
        fast.check(same, || ws.to_string());
        if c2bar {
            let mu = ws.milnor_number();
            let total = BigRational::from_integer(ws.rho()?.total().into());
            milnor.check(div.degree() == mu && total == mu, || ws.to_string());
            sigma.check(ws.sigma_vs_divisor()?, || ws.to_string());
        }
    }
    Ok(vec![
        closed.finish(),
        implies.finish(),
        integral.finish(),
        milnor.finish(),
        sigma.finish(),
        fast.finish(),
    ])
}

/// Every order tuple over the primes 2, 3, 5 whose quadrant has at most
/// `max_vertices` vertices, up to relabeling the primes (`s_2 >= s_3 >= s_5`).
fn small_tuples(max_vertices: u32) -> Vec<OrderTuple> {
    fn orders(s: u32) -> Vec<ExcellentOrder> {
        (0u32..1 << s)
            .map(|bits| {
                ExcellentOrder::new(s, (1..=s).filter(|k| bits >> (k - 1) & 1 == 1)).expect("in range")
            })
            .collect()
    }
    let mut out = vec![OrderTuple::new()];
    for (p, prev) in [(2u64, None), (3, Some(2u64)), (5, Some(3))] {
        let mut next = Vec::new();
        for t in &out {
            let size: u32 = t.iter().map(|(_, o)| o.bound() + 1).product();
            let cap = match prev {
                None => max_vertices,
                Some(q) => t.get(q).map_or(0, |o| o.bound()),
            };
            next.push(t.clone());
            for s in 1..=cap {
                if size * (s + 1) > max_vertices {
                    break;
                }
                for o in orders(s) {
                    let mut u = t.clone();
                    u.insert(p, o).expect("prime");
                    next.push(u);
                }
            }
        }
        out = next;
    }
    out
}

/// A random tuple over 2, 3, 5 whose quadrant size lies in `lo..=hi`.
fn random_tuple(rng: &mut ChaCha8Rng, lo: u32, hi: u32) -> OrderTuple {
    loop {
        let mut t = OrderTuple::new();
        let mut size = 1;
        for p in [2u64, 3, 5] {
            let s = rng.gen_range(0..=hi / size - 1);
            let set: Vec<u32> = (1..=s).filter(|_| rng.gen_bool(0.5)).collect();
            t.insert(p, ExcellentOrder::new(s, set).expect("in range")).expect("prime");
            size *= s + 1;
        }
        if (lo..=hi).contains(&size) {
            return t;
        }
    }
}

fn subsets(v: &[u64], bits: u32) -> BTreeSet<u64> {
    v.iter()
        .enumerate()
        .filter(|(i, _)| bits >> i & 1 == 1)
        .map(|(_, &x)| x)
        .collect()
}

fn orders_suite(rng: &mut ChaCha8Rng) -> Result<Vec<PropertyReport>> {
    let mut three_way = Recorder::new("orders.set_compatibility_three_way");
    let mut map_vs_cover = Recorder::new("orders.map_vs_standard_covering");
    let mut condition_i = Recorder::new("orders.compatible_sets_satisfy_condition_i");
    let mut tensor = Recorder::new("orders.tensor_preserves_compatibility");
    let mut weight = Recorder::new("orders.psi_w_compatible_with_weight_orders");

    for t in small_tuples(12) {
        let g = QuadrantGraph::new(&t)?;
        let verts: Vec<u64> = g.vertices.iter().copied().collect();
        for bits in 1u32..(1 << verts.len()) {
            let m = subsets(&verts, bits);
            let a = set_compatible(&m, &t)?;
            let b = g.closed_under_predecessors(&m);
            let c = g.rooted_and_path_closed(&m);
            // the validating wrappers on a deterministic sample
            if bits % 61 == 0 {
                let ok = set_compatible_via_graph(&m, &t)? == b && set_compatible_via_paths(&m, &t)? == c;
                three_way.check(ok, || format!("wrappers, M = {m:?}, t = {}", json(&t)));
            }
            three_way.check(a == b && b == c, || format!("M = {m:?}, t = {}", json(&t)));
            if a {
                condition_i.check(verify_compatible_set_condition_i(&m, &t)?, || {
                    format!("M = {m:?}, t = {}", json(&t))
                });
            }
        }
        // multiplicity maps: exhaustive over {0,1,2}^V for small quadrants
        if verts.len() <= 6 {
            for code in 1..3u32.pow(verts.len() as u32) {
                let mut c = code;
                let mut mult = BTreeMap::new();
                for &v in &verts {
                    if c % 3 > 0 {
                        mult.insert(v, u64::from(c % 3));
                    }
                    c /= 3;
                }
                let psi = PsiMap::from_multiplicities(mult)?;
                let direct = map_compatible(&psi, &t)?;
                let cover = covering_compatible(&standard_covering(&psi)?, &t)?;
                map_vs_cover.check(direct == cover, || format!("psi = {psi:?}, t = {}", json(&t)));
            }
        } else {
            for _ in 0..50 {
                let mut mult = BTreeMap::new();
                for &v in &verts {
                    if rng.gen_bool(0.5) {
                        mult.insert(v, rng.gen_range(1..=4u64));
                    }
                }
                let psi = PsiMap::from_multiplicities(mult)?;
                let direct = map_compatible(&psi, &t)?;
                let cover = covering_compatible(&standard_covering(&psi)?, &t)?;
                map_vs_cover.check(direct == cover, || format!("psi = {psi:?}, t = {}", json(&t)));
            }
        }
    }

    // random compatible sets in quadrants with 13 to 24 vertices
    for _ in 0..300 {
        let t = &random_tuple(rng, 13, 24);
        let g = QuadrantGraph::new(t)?;
        let verts: Vec<u64> = g.vertices.iter().copied().collect();
        // grow a compatible set by closing a random seed under predecessors
        let seed: BTreeSet<u64> = verts.iter().filter(|_| rng.gen_bool(0.2)).copied().collect();
        let mut m = seed;
        m.insert(g.center);
        loop {
            let before = m.len();
            for &(a, b, _) in &g.edges {
                if m.contains(&b) {
                    m.insert(a);
                }
            }
            if m.len() == before {
                break;
            }
        }
        let ok = set_compatible(&m, t)? && verify_compatible_set_condition_i(&m, t)?;
        condition_i.check(ok, || format!("M = {m:?}, t = {}", json(t)));
    }

    let mut pool = Vec::new();
    while pool.len() < 40 {
        pool.push(random_c2(rng, 3, 60));
    }
    for ws in &pool {
        weight.check(map_compatible(&ws.psi_w(), &weight_orders(ws)?)?, || ws.to_string());
    }
    for _ in 0..250 {
        let a = pool.choose(rng).expect("nonempty");
        let b = pool.choose(rng).expect("nonempty");
        let psi = tensor_psi(&a.psi_w(), &b.psi_w())?;
        let t = tensor_tuple(&weight_orders(a)?, &weight_orders(b)?);
        tensor.check(map_compatible(&psi, &t)?, || format!("{a} with {b}"));
    }
    Ok(vec![
        three_way.finish(),
        map_vs_cover.finish(),
        condition_i.finish(),
        weight.finish(),
        tensor.finish(),
    ])
}

fn json(t: &OrderTuple) -> String {
    serde_json::to_string(t).expect("serializable")
}

fn blocks_suite(rng: &mut ChaCha8Rng) -> Result<Vec<PropertyReport>> {
    let mut st = Recorder::new("blocks.s_p_implies_t_p_when_connected");
    let mut excl = Recorder::new("blocks.conditions_exclusive");
    let mut chain = Recorder::new("blocks.covering_members_satisfy_condition_i");
    let mut product = Recorder::new("blocks.covering_charpoly_product");
    for _ in 0..600 {
        let m: BTreeSet<u64> = (0..rng.gen_range(1..8)).map(|_| rng.gen_range(1..=200)).collect();
        let g = build_graph(&m)?;
        excl.check(!(g.check_condition_i() && g.check_condition_ii()), || format!("{m:?}"));
        if g.is_connected() {
            let ok = g.primes().iter().all(|&p| !g.check_sp(p) || g.check_tp(p));
            st.check(ok, || format!("{m:?}"));
        }
    }
    for _ in 0..120 {
        let ws = random_c2(rng, 4, 60);
        chain.check(verify_covering_condition_i(&ws)?, || ws.to_string());
        let psi = ws.psi_w();
        let mut f = IntPolynomial::one();
        for member in standard_covering(&psi)?.members {
            f = f.mul(&orlik_block(&member)?.charpoly);
        }
        let mu = ws.milnor_number();
        let ok = f == char_poly(&psi)?
            && BigRational::from_integer((f.degree().unwrap_or(0) as i64).into()) == mu;
        product.check(ok, || ws.to_string());
    }
    Ok(vec![st.finish(), excl.finish(), chain.finish(), product.finish()])
}

fn sweeps_suite() -> Result<Vec<PropertyReport>> {
    let checks = [
        SweepCheck::OrdersCompatible,
        SweepCheck::CoveringConditionI,
        SweepCheck::PsiNonneg,
        SweepCheck::SigmaVsDivisor,
    ];
    let mut totals: BTreeMap<&'static str, PropertyReport> = BTreeMap::new();
    for n in 1..=4 {
        let report = verify_sweep(&SearchSpec::new(n, 100)?, &checks, &EngineConfig::new())?;
        for c in report.checks {
            let entry = totals.entry(c.check.name()).or_insert_with(|| PropertyReport {
                name: format!("sweeps.{}", c.check.name()),
                cases: 0,
                violations: 0,
                examples: Vec::new(),
            });
            entry.cases += c.applicable;
            entry.violations += c.violations.len() as u64;
            for v in c.violations {
                if entry.examples.len() < MAX_REPORTED {
                    entry.examples.push(v);
                }
            }
        }
    }
    checks
        .iter()
        .map(|c| totals.remove(c.name()).ok_or_else(|| Error::ContractViolation("missing sweep".into())))
        .collect::<Result<_>>()
}
