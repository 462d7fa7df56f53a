//! Exhaustive enumeration of reduced weight systems
//! `d/2 > v_1 >= ... >= v_n >= 1`, `gcd(v_1, ..., v_n, d) = 1`, in
//! lexicographic order of `(d, v_1, ..., v_n)`.
//!
//! Work is split by `d`. Each degree is scanned independently (optionally on
//! a rayon pool) and merged in ascending order, so the running index `L` and
//! the emitted row stream do not depend on the worker count.

use std::cmp::Ordering;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use num_integer::Integer;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

use crate::blocks::verify_covering_condition_i;
use crate::error::{Error, Result};
use crate::orders::{map_compatible, weight_orders};
use crate::semigroup::subset_gcds;
use crate::weights::{a_tuple_from_counts, WeightSystem, MAX_VARIABLES};

/// Largest degree accepted by the engine.
pub const MAX_DEGREE: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchSpec {
    pub n: usize,
    pub d_max: u64,
}

impl SearchSpec {
    pub fn new(n: usize, d_max: u64) -> Result<Self> {
        if n == 0 || d_max < 2 {
            return Err(Error::InvalidInput("need n >= 1 and d_max >= 2".into()));
        }
        if n > MAX_VARIABLES || d_max > MAX_DEGREE {
            return Err(Error::Resource(format!(
                "n = {n}, d_max = {d_max} exceeds the limits n <= {MAX_VARIABLES}, d_max <= {MAX_DEGREE}"
            )));
        }
        Ok(Self { n, d_max })
    }
}

/// One (C2-bar) weight system of the census.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CensusRow {
    pub weights: Vec<u64>,
    pub d: u64,
    pub mu: u64,
    /// 1-based position among the (C2-bar) systems of the run
    #[serde(rename = "L")]
    pub index: u64,
    pub a_tuple: Option<[u8; 6]>,
    pub c2bar: bool,
    pub c2: bool,
    /// `psi_w(d_w) > 0`
    pub saito_strong: bool,
    /// `psi_w(d_w) > 0` or `psi_w(d_w / 2) > 0`
    pub saito_weak: bool,
    pub psi_dw_zero: bool,
}

impl CensusRow {
    pub fn weight_system(&self) -> WeightSystem {
        WeightSystem::new(self.weights.clone(), self.d).expect("census rows are valid")
    }

    pub fn to_csv(&self) -> String {
        let mut s = self.d.to_string();
        for v in &self.weights {
            write!(s, ",{v}").unwrap();
        }
        write!(s, ",{},{},{},{}", self.mu, self.index, self.c2bar, self.c2).unwrap();
        match self.a_tuple {
            Some(a) => a.iter().for_each(|x| write!(s, ",{x}").unwrap()),
            None => s.push_str(",,,,,,"),
        }
        write!(s, ",{},{}", self.saito_strong, self.saito_weak).unwrap();
        s
    }
}

pub fn csv_header(n: usize) -> String {
    let mut s = "d".to_string();
    for i in 1..=n {
        write!(s, ",v_{i}").unwrap();
    }
    s.push_str(",mu,L,c2bar,c2,a_1,a_2,a_3,a_4,a_5,a_6,saito_strong,saito_weak");
    s
}

/// The full row for `(v; d)` if it satisfies (C2-bar), with `index = 0`.
pub fn evaluate(v: &[u64], d: u64) -> Result<Option<CensusRow>> {
    let ws = WeightSystem::new(v.to_vec(), d)?;
    if !ws.check_c2bar() {
        return Ok(None);
    }
    let counts = ws.semigroup_counts(&ws.semigroups());
    let c2 = counts
        .iter()
        .enumerate()
        .skip(1)
        .all(|(mask, &c)| c >= mask.count_ones() as usize);
    let mu = ws
        .milnor_number()
        .to_integer()
        .to_u64()
        .ok_or(Error::Overflow("Milnor number"))?;
    let (top, half) = ws.saito_signs();
    Ok(Some(CensusRow {
        weights: v.to_vec(),
        d,
        mu,
        index: 0,
        a_tuple: (v.len() == 4).then(|| a_tuple_from_counts(&counts)),
        c2bar: true,
        c2,
        saito_strong: top == Ordering::Greater,
        saito_weak: top == Ordering::Greater || half == Some(Ordering::Greater),
        psi_dw_zero: top == Ordering::Equal,
    }))
}

#[derive(Debug, Clone, Default)]
pub struct EngineConfig {
    /// 0 uses every available core, 1 runs on the calling thread
    pub workers: usize,
    /// disable to test every tuple of the universe against (C2-bar)
    pub prune: bool,
    /// directory holding one shard per degree
    pub checkpoint: Option<PathBuf>,
    /// reuse shards already present in `checkpoint`
    pub resume: bool,
    /// fraction of pruned prefixes re-scanned without pruning, with its seed
    pub audit: Option<(f64, u64)>,
    pub time_budget: Option<Duration>,
}

impl EngineConfig {
    pub fn new() -> Self {
        Self {
            workers: 1,
            prune: true,
            ..Self::default()
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Summary {
    pub spec: SearchSpec,
    pub count_c2bar: u64,
    pub count_c2bar_not_c2: u64,
    /// tuples tested at the last level of the search
    pub visited: u64,
    pub shards_computed: u64,
    pub shards_resumed: u64,
    pub elapsed: Duration,
}

impl Summary {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "spec": self.spec,
            "counts": {
                "c2bar": self.count_c2bar,
                "c2bar_not_c2": self.count_c2bar_not_c2,
                "visited": self.visited,
            },
            "elapsed": self.elapsed.as_secs_f64(),
            "shards": {
                "computed": self.shards_computed,
                "resumed": self.shards_resumed,
            },
        })
    }
}

/// Rows of one degree with indices local to that degree.
#[derive(Debug, Clone)]
struct Shard {
    visited: u64,
    rows: Vec<CensusRow>,
    resumed: bool,
}

/// Scans every degree of `spec`, handing rows to `sink` in census order.
pub fn enumerate<F>(spec: &SearchSpec, config: &EngineConfig, mut sink: F) -> Result<Summary>
where
    F: FnMut(&CensusRow) -> Result<()>,
{
    let start = Instant::now();
    if let Some(dir) = &config.checkpoint {
        fs::create_dir_all(dir)?;
    }
    let mut summary = Summary {
        spec: *spec,
        count_c2bar: 0,
        count_c2bar_not_c2: 0,
        visited: 0,
        shards_computed: 0,
        shards_resumed: 0,
        elapsed: Duration::ZERO,
    };
    let degrees: Vec<u64> = (2..=spec.d_max).collect();
    let pool = WorkerPool::new(config.workers)?;
    let chunk = pool.chunk_size();
    for batch in degrees.chunks(chunk) {
        if let Some(budget) = config.time_budget {
            if start.elapsed() > budget {
                return Err(Error::Resource(format!(
                    "time budget exhausted before d = {}; {} degrees finished{}",
                    batch[0],
                    summary.shards_computed + summary.shards_resumed,
                    match &config.checkpoint {
                        Some(dir) => format!(", shards kept in {}", dir.display()),
                        None => String::new(),
                    }
                )));
            }
        }
        let shards = pool.map(batch, |d| load_or_scan(spec.n, d, config))?;
        for shard in shards {
            summary.visited += shard.visited;
            if shard.resumed {
                summary.shards_resumed += 1;
            } else {
                summary.shards_computed += 1;
            }
            for mut row in shard.rows {
                summary.count_c2bar += 1;
                row.index = summary.count_c2bar;
                if !row.c2 {
                    summary.count_c2bar_not_c2 += 1;
                }
                sink(&row)?;
            }
        }
    }
    summary.elapsed = start.elapsed();
    Ok(summary)
}

enum WorkerPool {
    Sequential,
    #[cfg(feature = "parallel")]
    Rayon(rayon::ThreadPool),
}

impl WorkerPool {
    #[cfg(feature = "parallel")]
    fn new(workers: usize) -> Result<Self> {
        if workers == 1 {
            return Ok(Self::Sequential);
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map(Self::Rayon)
            .map_err(|e| Error::Resource(format!("cannot start worker pool: {e}")))
    }

    #[cfg(not(feature = "parallel"))]
    fn new(_workers: usize) -> Result<Self> {
        Ok(Self::Sequential)
    }

    fn chunk_size(&self) -> usize {
        match self {
            Self::Sequential => 1,
            #[cfg(feature = "parallel")]
            Self::Rayon(pool) => 4 * pool.current_num_threads(),
        }
    }

    fn map<F>(&self, items: &[u64], f: F) -> Result<Vec<Shard>>
    where
        F: Fn(u64) -> Result<Shard> + Sync,
    {
        match self {
            Self::Sequential => items.iter().map(|&d| f(d)).collect(),
            #[cfg(feature = "parallel")]
            Self::Rayon(pool) => {
                use rayon::prelude::*;
                pool.install(|| items.par_iter().map(|&d| f(d)).collect())
            }
        }
    }
}

fn shard_path(dir: &Path, n: usize, d: u64) -> PathBuf {
    dir.join(format!("n{n}-d{d:07}.csv"))
}

fn load_or_scan(n: usize, d: u64, config: &EngineConfig) -> Result<Shard> {
    let path = config.checkpoint.as_deref().map(|dir| shard_path(dir, n, d));
    if let (Some(path), true) = (&path, config.resume) {
        if path.exists() {
            return read_shard(path, n, d);
        }
    }
    let shard = DegreeScan::new(n, d, config).run()?;
    if let Some(path) = &path {
        write_shard(path, n, &shard)?;
    }
    Ok(shard)
}

fn write_shard(path: &Path, n: usize, shard: &Shard) -> Result<()> {
    let mut text = format!("# visited={}\n{}\n", shard.visited, csv_header(n));
    for row in &shard.rows {
        text.push_str(&row.to_csv());
        text.push('\n');
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, text)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Re-derives every stored row from its weights and rejects the shard if
/// any stored field disagrees.
fn read_shard(path: &Path, n: usize, d: u64) -> Result<Shard> {
    let text = fs::read_to_string(path)?;
    let corrupt = |why: &str| Error::ContractViolation(format!("shard {}: {why}", path.display()));
    let mut lines = text.lines();
    let visited = lines
        .next()
        .and_then(|l| l.strip_prefix("# visited="))
        .and_then(|x| x.parse().ok())
        .ok_or_else(|| corrupt("missing visited count"))?;
    if lines.next() != Some(csv_header(n).as_str()) {
        return Err(corrupt("unexpected header"));
    }
    let mut rows = Vec::new();
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() < n + 1 || fields[0].parse::<u64>().ok() != Some(d) {
            return Err(corrupt("row for a different degree"));
        }
        let v: Vec<u64> = fields[1..=n]
            .iter()
            .map(|x| x.parse())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| corrupt("bad weight"))?;
        let mut row = evaluate(&v, d)?.ok_or_else(|| corrupt("row fails (C2-bar)"))?;
        row.index = rows.len() as u64 + 1;
        if row.to_csv() != line {
            return Err(corrupt("stored fields differ from recomputation"));
        }
        rows.push(row);
    }
    Ok(Shard {
        visited,
        rows,
        resumed: true,
    })
}

/// Divisibility `x | d - y` for `1 <= x, y < d/2`, tabulated for small `d`.
struct DivTable {
    d: u64,
    width: usize,
    table: Vec<bool>,
}

impl DivTable {
    const MAX_TABULATED: u64 = 2048;

    fn new(d: u64, half: u64) -> Self {
        if half > Self::MAX_TABULATED {
            return Self {
                d,
                width: 0,
                table: Vec::new(),
            };
        }
        let width = half as usize + 1;
        let mut table = vec![false; width * width];
        for x in 1..width {
            for y in 1..width {
                table[x * width + y] = (d - y as u64).is_multiple_of(x as u64);
            }
        }
        Self { d, width, table }
    }

    #[inline]
    fn divides(&self, x: u64, y: u64) -> bool {
        if self.width == 0 {
            (self.d - y).is_multiple_of(x)
        } else {
            self.table[x as usize * self.width + y as usize]
        }
    }
}

struct DegreeScan {
    n: usize,
    d: u64,
    half: u64,
    div: DivTable,
    prune: bool,
    audit: Option<(f64, ChaCha8Rng)>,
    rows: Vec<CensusRow>,
    visited: u64,
}

impl DegreeScan {
    fn new(n: usize, d: u64, config: &EngineConfig) -> Self {
        let half = (d - 1) / 2;
        Self {
            n,
            d,
            half,
            div: DivTable::new(d, half),
            prune: config.prune,
            audit: config
                .audit
                .map(|(rate, seed)| (rate, ChaCha8Rng::seed_from_u64(seed ^ d.wrapping_mul(0x9e37_79b9_7f4a_7c15)))),
            rows: Vec::new(),
            visited: 0,
        }
    }

    fn run(mut self) -> Result<Shard> {
        if self.half >= 1 {
            let mut v = [0u64; MAX_VARIABLES];
            self.descend(0, &mut v, 0, self.d)?;
        }
        for (i, row) in self.rows.iter_mut().enumerate() {
            row.index = i as u64 + 1;
        }
        Ok(Shard {
            visited: self.visited,
            rows: self.rows,
            resumed: false,
        })
    }

    /// `sat` marks chosen indices `j` that already divide some `d - v_k`.
    fn descend(&mut self, depth: usize, v: &mut [u64; MAX_VARIABLES], sat: u32, g: u64) -> Result<()> {
        let upper = if depth == 0 { self.half } else { v[depth - 1] };
        if depth + 1 == self.n {
            return self.last_level(v, sat, g, upper);
        }
        for x in 1..=upper {
            v[depth] = x;
            let mut next = sat;
            let mut own = self.d.is_multiple_of(x);
            for (j, &vj) in v[..depth].iter().enumerate() {
                if self.div.divides(vj, x) {
                    next |= 1 << j;
                }
                own = own || self.div.divides(x, vj);
            }
            if own {
                next |= 1 << depth;
            }
            self.descend(depth + 1, v, next, g.gcd(&x))?;
        }
        Ok(())
    }

    fn last_level(&mut self, v: &mut [u64; MAX_VARIABLES], sat: u32, g: u64, upper: u64) -> Result<()> {
        let last = self.n - 1;
        if !self.prune {
            for x in 1..=upper {
                self.visited += 1;
                v[last] = x;
                if g.gcd(&x) == 1 {
                    self.accept(&v[..self.n])?;
                }
            }
            return Ok(());
        }
        let survivors = self.pruned_candidates(v, sat, g, upper);
        let sampled = match &mut self.audit {
            Some((rate, rng)) => rng.gen_bool(*rate),
            None => false,
        };
        if sampled {
            self.audit_prefix(v, g, upper, &survivors)?;
        }
        for x in survivors {
            v[last] = x;
            self.accept(&v[..self.n])?;
        }
        Ok(())
    }

    /// Values of `v_n` passing reducedness and every singleton (C2-bar) test,
    /// ascending.
    fn pruned_candidates(&mut self, v: &[u64; MAX_VARIABLES], sat: u32, g: u64, upper: u64) -> Vec<u64> {
        let last = self.n - 1;
        let unsat: Vec<usize> = (0..last).filter(|&j| sat >> j & 1 == 0).collect();
        let d = self.d;
        let passes = |x: u64, div: &DivTable| {
            g.gcd(&x) == 1
                && unsat.iter().all(|&j| div.divides(v[j], x))
                && (d.is_multiple_of(x) || (0..last).any(|k| div.divides(x, v[k])))
        };
        let mut out = Vec::new();
        match unsat.first() {
            // an unsatisfied v_j forces v_n = d (mod v_j); the largest such
            // modulus gives the sparsest progression
            Some(&j) => {
                let step = v[j];
                let mut x = match d % step {
                    0 => step,
                    r => r,
                };
                while x <= upper {
                    self.visited += 1;
                    if passes(x, &self.div) {
                        out.push(x);
                    }
                    x += step;
                }
            }
            None => {
                for x in 1..=upper {
                    self.visited += 1;
                    if passes(x, &self.div) {
                        out.push(x);
                    }
                }
            }
        }
        out
    }

    /// Checks that no value of `v_n` outside `survivors` satisfies (C2-bar).
    fn audit_prefix(&self, v: &[u64; MAX_VARIABLES], g: u64, upper: u64, survivors: &[u64]) -> Result<()> {
        let last = self.n - 1;
        let mut w = v[..self.n].to_vec();
        for x in 1..=upper {
            if g.gcd(&x) != 1 || survivors.contains(&x) {
                continue;
            }
            w[last] = x;
            if c2bar_by_gcds(&w, self.d) {
                return Err(Error::ContractViolation(format!(
                    "pruning dropped ({:?}; {}) which satisfies (C2-bar)",
                    w, self.d
                )));
            }
        }
        Ok(())
    }

    fn accept(&mut self, v: &[u64]) -> Result<()> {
        if !c2bar_by_gcds(v, self.d) {
            return Ok(());
        }
        if let Some(row) = evaluate(v, self.d)? {
            self.rows.push(row);
        }
        Ok(())
    }
}

fn c2bar_by_gcds(v: &[u64], d: u64) -> bool {
    let gcds = subset_gcds(v);
    (1..gcds.len()).all(|mask| {
        let g = gcds[mask];
        v.iter().filter(|&&x| (d - x).is_multiple_of(g)).count() >= mask.count_ones() as usize
    })
}

/// Systems with `n = 4`, `d <= 200` that satisfy (C2-bar) but not (C2).
pub fn table1(config: &EngineConfig) -> Result<(Vec<CensusRow>, Summary)> {
    let spec = SearchSpec::new(4, 200)?;
    let mut rows = Vec::new();
    let summary = enumerate(&spec, config, |r| {
        if !r.c2 {
            rows.push(r.clone());
        }
        Ok(())
    })?;
    Ok((rows, summary))
}

/// Systems with `n = 5`, `d <= 200` that satisfy (C2-bar) and have
/// `psi_w(d_w) = 0`.
pub fn table2(config: &EngineConfig) -> Result<(Vec<CensusRow>, Summary)> {
    let spec = SearchSpec::new(5, 200)?;
    let mut rows = Vec::new();
    let summary = enumerate(&spec, config, |r| {
        if r.psi_dw_zero {
            rows.push(r.clone());
        }
        Ok(())
    })?;
    Ok((rows, summary))
}

/// `v_1..v_4,d,mu,L,a_1..a_6`, one line per row after a header.
pub fn table1_csv(rows: &[CensusRow]) -> String {
    let mut s = String::from("v_1,v_2,v_3,v_4,d,mu,L,a_1,a_2,a_3,a_4,a_5,a_6\n");
    for r in rows {
        let a = r.a_tuple.unwrap_or_default();
        let cols: Vec<String> = r
            .weights
            .iter()
            .chain([r.d, r.mu, r.index].iter())
            .map(u64::to_string)
            .chain(a.iter().map(u8::to_string))
            .collect();
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

/// `v_1..v_5,d,mu,L`, one line per row after a header.
pub fn table2_csv(rows: &[CensusRow]) -> String {
    let mut s = String::from("v_1,v_2,v_3,v_4,v_5,d,mu,L\n");
    for r in rows {
        let cols: Vec<String> = r
            .weights
            .iter()
            .chain([r.d, r.mu, r.index].iter())
            .map(u64::to_string)
            .collect();
        s.push_str(&cols.join(","));
        s.push('\n');
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepCheck {
    /// `psi_w` is compatible with the orders of the weight system
    OrdersCompatible,
    /// every standard-covering member satisfies condition (I)
    CoveringConditionI,
    /// `psi_w` is nonnegative-integer valued and `rho` has nonnegative coefficients
    PsiNonneg,
    /// `rho` has nonnegative coefficients, for (C2-bar) systems failing (C2)
    RhoNonneg,
    /// the exponents of `rho` reproduce `psi_w`
    SigmaVsDivisor,
}

impl SweepCheck {
    pub const ALL: [SweepCheck; 5] = [
        Self::OrdersCompatible,
        Self::CoveringConditionI,
        Self::PsiNonneg,
        Self::RhoNonneg,
        Self::SigmaVsDivisor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::OrdersCompatible => "orders_compatible",
            Self::CoveringConditionI => "covering_condition_i",
            Self::PsiNonneg => "psi_nonneg",
            Self::RhoNonneg => "rho_nonneg",
            Self::SigmaVsDivisor => "sigma_vs_divisor",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }

    fn applies(self, row: &CensusRow) -> bool {
        match self {
            Self::RhoNonneg => !row.c2,
            _ => row.c2,
        }
    }

    fn holds(self, ws: &WeightSystem) -> Result<bool> {
        Ok(match self {
            Self::OrdersCompatible => map_compatible(&ws.psi_w(), &weight_orders(ws)?)?,
            Self::CoveringConditionI => verify_covering_condition_i(ws)?,
            Self::PsiNonneg => ws.psi_w().is_nonneg_integral() && ws.rho()?.is_nonnegative(),
            Self::RhoNonneg => ws.rho()?.is_nonnegative(),
            Self::SigmaVsDivisor => ws.sigma_vs_divisor()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: SweepCheck,
    pub applicable: u64,
    pub violations: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub spec: SearchSpec,
    pub systems: u64,
    pub checks: Vec<CheckReport>,
}

impl SweepReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.violations.is_empty())
    }
}

/// Runs the checks on every census row inside each check's domain.
pub fn verify_sweep(spec: &SearchSpec, checks: &[SweepCheck], config: &EngineConfig) -> Result<SweepReport> {
    let mut reports: Vec<CheckReport> = checks
        .iter()
        .map(|&check| CheckReport {
            check,
            applicable: 0,
            violations: Vec::new(),
        })
        .collect();
    let mut systems = 0;
    enumerate(spec, config, |row| {
        systems += 1;
        let ws = row.weight_system();
        for r in &mut reports {
            if r.check.applies(row) {
                r.applicable += 1;
                if !r.check.holds(&ws)? {
                    r.violations.push(ws.to_string());
                }
            }
        }
        Ok(())
    })?;
    Ok(SweepReport {
        spec: *spec,
        systems,
        checks: reports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn collect(spec: SearchSpec, config: &EngineConfig) -> (Vec<CensusRow>, Summary) {
        let mut rows = Vec::new();
        let s = enumerate(&spec, config, |r| {
            rows.push(r.clone());
            Ok(())
        })
        .unwrap();
        (rows, s)
    }

    /// Brute force over the universe with the definitions only.
    fn oracle(n: usize, d_max: u64) -> Vec<(Vec<u64>, u64)> {
        fn rec(n: usize, d: u64, v: &mut Vec<u64>, out: &mut Vec<(Vec<u64>, u64)>) {
            if v.len() == n {
                let ws = WeightSystem::new(v.clone(), d).unwrap();
                if ws.is_reduced() && ws.check_c2bar() {
                    out.push((v.clone(), d));
                }
                return;
            }
            let upper = v.last().copied().unwrap_or((d - 1) / 2);
            for x in 1..=upper {
                v.push(x);
                rec(n, d, v, out);
                v.pop();
            }
        }
        let mut out = Vec::new();
        for d in 2..=d_max {
            rec(n, d, &mut Vec::new(), &mut out);
        }
        out
    }

    #[test]
    fn matches_brute_force() {
        for (n, d_max) in [(1, 60), (2, 60), (3, 50), (4, 36)] {
            let (rows, summary) = collect(SearchSpec::new(n, d_max).unwrap(), &EngineConfig::new());
            let got: Vec<(Vec<u64>, u64)> = rows.iter().map(|r| (r.weights.clone(), r.d)).collect();
            assert_eq!(got, oracle(n, d_max), "n = {n}");
            assert_eq!(summary.count_c2bar as usize, rows.len());
            for (i, r) in rows.iter().enumerate() {
                assert_eq!(r.index, i as u64 + 1);
            }
        }
    }

    #[test]
    fn unpruned_scan_agrees() {
        let spec = SearchSpec::new(4, 40).unwrap();
        let (a, sa) = collect(spec, &EngineConfig::new());
        let mut config = EngineConfig::new();
        config.prune = false;
        let (b, sb) = collect(spec, &config);
        assert_eq!(a, b);
        assert!(sa.visited < sb.visited);
    }

    #[test]
    fn audit_finds_nothing() {
        let mut config = EngineConfig::new();
        config.audit = Some((0.5, 11));
        collect(SearchSpec::new(4, 60).unwrap(), &config);
    }

    #[test]
    fn row_fields() {
        let r = evaluate(&[27, 16, 10, 1], 81).unwrap().unwrap();
        assert_eq!((r.mu, r.c2, r.a_tuple), (4615, false, Some([2, 2, 4, 1, 4, 4])));
        assert!(evaluate(&[2, 2], 5).unwrap().is_none());
        let r = evaluate(&[1], 3).unwrap().unwrap();
        assert!(r.c2 && r.saito_strong && r.saito_weak && r.a_tuple.is_none());
        assert_eq!(csv_header(2), "d,v_1,v_2,mu,L,c2bar,c2,a_1,a_2,a_3,a_4,a_5,a_6,saito_strong,saito_weak");
        assert_eq!(r.to_csv(), "3,1,2,0,true,true,,,,,,,true,true");
    }

    #[test]
    fn workers_do_not_change_output() {
        let spec = SearchSpec::new(3, 80).unwrap();
        let (a, _) = collect(spec, &EngineConfig::new());
        let (b, _) = collect(spec, &EngineConfig::new().with_workers(3));
        assert_eq!(a, b);
    }

    #[test]
    fn checkpoints_resume() {
        let dir = tempfile::tempdir().unwrap();
        let spec = SearchSpec::new(3, 40).unwrap();
        let mut config = EngineConfig::new();
        config.checkpoint = Some(dir.path().to_path_buf());
        let (a, sa) = collect(spec, &config);
        assert_eq!(sa.shards_computed, 39);
        config.resume = true;
        let (b, sb) = collect(spec, &config);
        assert_eq!(a, b);
        assert_eq!((sb.shards_resumed, sb.visited), (39, sa.visited));

        let path = shard_path(dir.path(), 3, 40);
        let text = fs::read_to_string(&path).unwrap();
        fs::write(&path, text.replace(",true,", ",false,")).unwrap();
        assert!(matches!(
            enumerate(&spec, &config, |_| Ok(())),
            Err(Error::ContractViolation(_))
        ));
    }

    #[test]
    fn time_budget_aborts() {
        let mut config = EngineConfig::new();
        config.time_budget = Some(Duration::ZERO);
        let spec = SearchSpec::new(4, 100).unwrap();
        std::thread::sleep(Duration::from_millis(2));
        assert!(matches!(enumerate(&spec, &config, |_| Ok(())), Err(Error::Resource(_))));
    }

    #[test]
    fn spec_limits() {
        assert!(matches!(SearchSpec::new(13, 100), Err(Error::Resource(_))));
        assert!(matches!(SearchSpec::new(4, 2_000_000), Err(Error::Resource(_))));
        assert!(matches!(SearchSpec::new(0, 100), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn small_sweep() {
        let spec = SearchSpec::new(3, 40).unwrap();
        let r = verify_sweep(&spec, &SweepCheck::ALL, &EngineConfig::new()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.checks[0].applicable > 0);
    }
}
