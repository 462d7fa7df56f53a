//! Weight systems `(v_1, ..., v_n; d)`, the conditions (C2) and (C2-bar),
//! the divisor `D_w`, the Poincaré-type quotient `rho`, exponents and
//! Milnor numbers.
//!
//! Condition checks, the divisor and `rho` are computed on the system as
//! given; non-reduced input is accepted and callers reduce explicitly.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::cyclo::{rat_int, CycloElement, PsiMap};
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::semigroup::{subset_gcds, Reachable, SubsetSemigroups};

/// Number of variables above which analysis is refused.
pub const MAX_VARIABLES: usize = 12;

/// Integer weight system `(v_1, ..., v_n; d)` with `1 <= v_i < d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct WeightSystem {
    v: Vec<u64>,
    d: u64,
}

/// Coprime pairs `s_i / t_i = v_i / d` and `d_w = lcm(t_i)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReducedWeights {
    pub pairs: Vec<(u64, u64)>,
    pub d_w: u64,
}

/// The map `sigma` with `rho = sum_alpha sigma(alpha) t^{d alpha}`,
/// keyed by `alpha` in lowest terms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SigmaMap {
    sigma: BTreeMap<Ratio<u64>, i64>,
}

impl SigmaMap {
    pub fn get(&self, alpha: Ratio<u64>) -> i64 {
        self.sigma.get(&alpha).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Ratio<u64>, i64)> + '_ {
        self.sigma.iter().map(|(&a, &s)| (a, s))
    }

    pub fn len(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.sigma.values().all(|&s| s >= 0)
    }

    /// `sum_alpha sigma(alpha)`, which is `rho(1)`.
    pub fn total(&self) -> i64 {
        self.sigma.values().sum()
    }

    /// `(numerator, denominator, multiplicity)` triples, ascending in alpha.
    pub fn exponents(&self) -> Vec<(u64, u64, i64)> {
        self.sigma
            .iter()
            .map(|(a, &s)| (*a.numer(), *a.denom(), s))
            .collect()
    }
}

impl WeightSystem {
    pub fn new(v: Vec<u64>, d: u64) -> Result<Self> {
        if v.is_empty() {
            return Err(Error::InvalidInput("a weight system needs n >= 1 weights".into()));
        }
        if let Some(&bad) = v.iter().find(|&&x| x == 0 || x >= d) {
            return Err(Error::InvalidInput(format!(
                "weights must satisfy 1 <= v_i < d = {d}, got {bad}"
            )));
        }
        Ok(Self { v, d })
    }

    /// Builds the reduced integer system from normalized weights `s_i / t_i`.
    pub fn from_normalized(fracs: &[(u64, u64)]) -> Result<Self> {
        if fracs.iter().any(|&(s, t)| s == 0 || t == 0 || s >= t) {
            return Err(Error::InvalidInput(
                "normalized weights must lie strictly between 0 and 1".into(),
            ));
        }
        let lowest: Vec<(u64, u64)> = fracs.iter().map(|&(s, t)| (s / s.gcd(&t), t / s.gcd(&t))).collect();
        let d = arith::lcm_all(lowest.iter().map(|&(_, t)| t))?;
        let v = lowest.iter().map(|&(s, t)| s * (d / t)).collect();
        Ok(Self::new(v, d)?.reduce())
    }

    pub fn n(&self) -> usize {
        self.v.len()
    }

    pub fn weights(&self) -> &[u64] {
        &self.v
    }

    pub fn degree(&self) -> u64 {
        self.d
    }

    pub fn is_reduced(&self) -> bool {
        arith::gcd_all(self.v.iter().copied()).gcd(&self.d) == 1
    }

    /// Divides through by `gcd(v_1, ..., v_n, d)`.
    pub fn reduce(&self) -> Self {
        let g = arith::gcd_all(self.v.iter().copied()).gcd(&self.d);
        Self {
            v: self.v.iter().map(|x| x / g).collect(),
            d: self.d / g,
        }
    }

    /// Normalized weights `w_i = v_i / d`.
    pub fn normalize(&self) -> Vec<Ratio<u64>> {
        self.v.iter().map(|&x| Ratio::new(x, self.d)).collect()
    }

    /// Proportional by a positive rational.
    pub fn equivalent(&self, other: &Self) -> bool {
        self.n() == other.n()
            && self
                .v
                .iter()
                .zip(&other.v)
                .all(|(&a, &b)| u128::from(a) * u128::from(other.d) == u128::from(b) * u128::from(self.d))
    }

    pub fn st_pairs(&self) -> ReducedWeights {
        let pairs: Vec<(u64, u64)> = self
            .v
            .iter()
            .map(|&x| {
                let g = x.gcd(&self.d);
                (x / g, self.d / g)
            })
            .collect();
        // every t_i divides d, so the lcm cannot overflow
        let d_w = arith::lcm_all(pairs.iter().map(|&(_, t)| t)).expect("t_i | d");
        ReducedWeights { pairs, d_w }
    }

    pub fn d_w(&self) -> u64 {
        self.st_pairs().d_w
    }

    /// `M(k) = { j : t_j | k }` as 0-based indices.
    pub fn m_set(&self, k: u64) -> Vec<usize> {
        self.st_pairs()
            .pairs
            .iter()
            .enumerate()
            .filter(|(_, &(_, t))| k.is_multiple_of(t))
            .map(|(j, _)| j)
            .collect()
    }

    /// `mu(k) = prod_{j in M(k)} (d - v_j) / v_j`; the empty product is 1.
    pub fn mu_k(&self, k: u64) -> BigRational {
        self.m_set(k)
            .into_iter()
            .map(|j| self.factor(j))
            .fold(BigRational::one(), |a, b| a * b)
    }

    fn factor(&self, j: usize) -> BigRational {
        BigRational::new((self.d - self.v[j]).into(), self.v[j].into())
    }

    /// Milnor number `prod_j (d - v_j) / v_j`.
    pub fn milnor_number(&self) -> BigRational {
        (0..self.n())
            .map(|j| self.factor(j))
            .fold(BigRational::one(), |a, b| a * b)
    }

    fn mask_of(&self, subset: &[usize]) -> Result<usize> {
        if subset.is_empty() {
            return Err(Error::InvalidInput("the index set J must be nonempty".into()));
        }
        subset.iter().try_fold(0usize, |m, &j| {
            if j >= self.n() {
                Err(Error::InvalidInput(format!("index {j} out of range for n = {}", self.n())))
            } else {
                Ok(m | (1 << j))
            }
        })
    }

    /// Whether `k` is a nonnegative combination of `{v_j : j in J}`
    /// (0-based indices).
    pub fn semigroup_member(&self, subset: &[usize], k: u64) -> Result<bool> {
        let mask = self.mask_of(subset)?;
        let gens: Vec<u64> = (0..self.n())
            .filter(|j| mask >> j & 1 == 1)
            .map(|j| self.v[j])
            .collect();
        Ok(Reachable::with_generators(k, &gens).contains(k))
    }

    /// Semigroups of every subset of the weights, up to `d`.
    pub fn semigroups(&self) -> SubsetSemigroups {
        SubsetSemigroups::new(&self.v, self.d)
    }

    /// `|{k : d - v_k in SG(J)}|` for every mask `J`.
    pub(crate) fn semigroup_counts(&self, table: &SubsetSemigroups) -> Vec<usize> {
        (0..1usize << self.n())
            .map(|mask| {
                self.v
                    .iter()
                    .filter(|&&vk| table.get(mask).contains(self.d - vk))
                    .count()
            })
            .collect()
    }

    /// Condition (C2): every nonempty `J` has at least `|J|` indices `k`
    /// with `d - v_k in SG(J)`.
    pub fn check_c2(&self) -> bool {
        self.c2_with(&self.semigroups())
    }

    pub(crate) fn c2_with(&self, table: &SubsetSemigroups) -> bool {
        let counts = self.semigroup_counts(table);
        (1..1usize << self.n()).all(|mask| counts[mask] >= mask.count_ones() as usize)
    }

    /// Condition (C2-bar) in its (GCD) form: `gcd(v_j : j in J)` divides at
    /// least `|J|` of the numbers `d - v_k`.
    pub fn check_c2bar(&self) -> bool {
        let gcds = subset_gcds(&self.v);
        (1..1usize << self.n()).all(|mask| {
            let g = gcds[mask];
            let hits = self.v.iter().filter(|&&vk| (self.d - vk).is_multiple_of(g)).count();
            hits >= mask.count_ones() as usize
        })
    }

    /// For `n = 4`: the counts `a_i = |{k : d - v_k in SG(J_i)}|` for
    /// `J = {1,2},{1,3},{1,4},{2,3},{2,4},{3,4}`.
    pub fn a_tuple(&self) -> Result<[u8; 6]> {
        if self.n() != 4 {
            return Err(Error::InvalidInput(format!(
                "the a-tuple is defined for n = 4, got n = {}",
                self.n()
            )));
        }
        Ok(a_tuple_from_counts(&self.semigroup_counts(&self.semigroups())))
    }

    /// `D_w = prod_j (Lambda_{t_j} / s_j - Lambda_1)`.
    pub fn divisor(&self) -> CycloElement {
        self.st_pairs()
            .pairs
            .iter()
            .fold(CycloElement::one(), |acc, &(s, t)| {
                let f = &CycloElement::lambda_unchecked(t)
                    .scale(&BigRational::new(1.into(), s.into()))
                    - &CycloElement::one();
                &acc * &f
            })
    }

    /// `psi_w`, the `Psi`-coordinates of `D_w`.
    pub fn psi_w(&self) -> PsiMap {
        self.divisor().to_psi()
    }

    /// `L_k(D_w) = (-1)^{n - |M(k)|} mu(k)`, for `k >= 1`.
    pub fn lefschetz_closed_form(&self, k: u64) -> Result<BigRational> {
        if k == 0 {
            return Err(Error::InvalidInput("closed form needs k >= 1".into()));
        }
        let m = self.m_set(k).len();
        let sign = if (self.n() - m).is_multiple_of(2) { 1 } else { -1 };
        Ok(self.mu_k(k) * rat_int(sign))
    }

    /// A modulus `m` whose cyclotomic factor occurs more often in the
    /// denominator `prod (t^{v_j} - 1)` than in the numerator
    /// `prod (t^{d - v_j} - 1)`; `None` when `rho` is a polynomial.
    pub fn rho_witness(&self) -> Option<u64> {
        let mut candidates: Vec<u64> = self
            .v
            .iter()
            .flat_map(|&x| arith::divisors(x).expect("v_j >= 1"))
            .collect();
        candidates.sort_unstable();
        candidates.dedup();
        candidates.into_iter().find(|&m| {
            let den = self.v.iter().filter(|&&x| x % m == 0).count();
            let num = self.v.iter().filter(|&&x| (self.d - x).is_multiple_of(m)).count();
            num < den
        })
    }

    pub fn rho_is_integral(&self) -> bool {
        self.rho_witness().is_none()
    }

    /// `rho = t^{sum v_j} prod_j (t^{d - v_j} - 1) / (t^{v_j} - 1)` as a map
    /// from exponents `alpha` (with `t^{d alpha}`) to coefficients.
    pub fn rho(&self) -> Result<SigmaMap> {
        if let Some(m) = self.rho_witness() {
            return Err(Error::NotIntegral(m));
        }
        let poly = self.rho_quotient()?;
        let shift: u64 = self.v.iter().sum();
        let mut sigma = BTreeMap::new();
        for (i, c) in poly.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = c.to_i64().ok_or(Error::Overflow("rho coefficient"))?;
            sigma.insert(Ratio::new(shift + i as u64, self.d), c);
        }
        Ok(SigmaMap { sigma })
    }

    fn rho_quotient(&self) -> Result<IntPolynomial> {
        let mut p = IntPolynomial::one();
        for &x in &self.v {
            p.mul_x_pow_minus_one((self.d - x) as usize);
        }
        for &x in &self.v {
            p = p.div_x_pow_minus_one(x as usize)?;
        }
        Ok(p)
    }

    /// Rebuilds `psi` from the exponents by grouping `sigma(alpha)` by the
    /// order of `exp(2 pi i alpha)` and compares it with `psi_w`.
    pub fn sigma_vs_divisor(&self) -> Result<bool> {
        if !self.check_c2bar() {
            return Err(Error::Precondition(format!("{self} does not satisfy (C2-bar)")));
        }
        let sigma = self.rho()?;
        // coefficient of each unit root, keyed by (a mod b, b) with gcd(a, b) = 1
        let mut roots: BTreeMap<(u64, u64), i64> = BTreeMap::new();
        for (alpha, s) in sigma.iter() {
            let (a, b) = (*alpha.numer(), *alpha.denom());
            *roots.entry((a % b, b)).or_default() += s;
        }
        let mut orders: Vec<u64> = roots.keys().map(|&(_, b)| b).collect();
        orders.sort_unstable();
        orders.dedup();
        let mut rebuilt = BTreeMap::new();
        for b in orders {
            let mut values = (0..b.max(1))
                .filter(|r| r.gcd(&b) == 1)
                .map(|r| roots.get(&(r % b, b)).copied().unwrap_or(0));
            let first = values.next().unwrap_or(0);
            if values.any(|x| x != first) {
                // not constant on primitive roots: not a Psi-combination
                return Ok(false);
            }
            if first != 0 {
                rebuilt.insert(b, BigRational::from_integer(first.into()));
            }
        }
        Ok(PsiMap::from_terms(rebuilt)? == self.psi_w())
    }

    /// `psi_w(m)` from the subset expansion
    /// `D_w = sum_T (-1)^{n-|T|} (prod_{j in T} d/v_j) / lcm(t_T) Lambda_{lcm(t_T)}`.
    pub fn psi_value(&self, m: u64) -> BigRational {
        let st = self.st_pairs();
        let n = self.n();
        let mut lcms = vec![1u64; 1 << n];
        for mask in 1usize..(1 << n) {
            let low = mask.trailing_zeros() as usize;
            lcms[mask] = lcms[mask & (mask - 1)].lcm(&st.pairs[low].1);
        }
        if let Some(v) = self.psi_value_i128(m, st.d_w, &lcms) {
            return v;
        }
        let mut sum = BigRational::zero();
        for (mask, &l) in lcms.iter().enumerate() {
            if m == 0 || l % m != 0 {
                continue;
            }
            let mut term = BigRational::new(1.into(), l.into());
            for j in 0..n {
                if mask >> j & 1 == 1 {
                    term *= BigRational::new(self.d.into(), self.v[j].into());
                }
            }
            if (n - mask.count_ones() as usize) % 2 == 1 {
                term = -term;
            }
            sum += term;
        }
        sum
    }

    fn psi_value_i128(&self, m: u64, d_w: u64, lcms: &[u64]) -> Option<BigRational> {
        // common denominator d_w * prod v_j
        let n = self.n();
        let d = i128::from(self.d);
        let mut num: i128 = 0;
        for (mask, &l) in lcms.iter().enumerate() {
            if m == 0 || l % m != 0 {
                continue;
            }
            let mut term = i128::from(d_w / l);
            for j in 0..n {
                let f = if mask >> j & 1 == 1 { d } else { i128::from(self.v[j]) };
                term = term.checked_mul(f)?;
            }
            if (n - mask.count_ones() as usize) % 2 == 1 {
                term = -term;
            }
            num = num.checked_add(term)?;
        }
        let den = self
            .v
            .iter()
            .try_fold(i128::from(d_w), |acc, &x| acc.checked_mul(i128::from(x)))?;
        Some(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Sign of `psi_w(d_w)` and, when `d_w` is even, of `psi_w(d_w / 2)`.
    pub fn saito_signs(&self) -> (Ordering, Option<Ordering>) {
        let d_w = self.d_w();
        let sign = |q: BigRational| q.numer().sign_cmp();
        let top = sign(self.psi_value(d_w));
        let half = d_w.is_multiple_of(2).then(|| sign(self.psi_value(d_w / 2)));
        (top, half)
    }

    fn require_c2(&self) -> Result<()> {
        if self.check_c2() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{self} does not satisfy (C2)")))
        }
    }

    /// `psi_w(d_w) > 0`.
    pub fn saito_strong(&self) -> Result<bool> {
        self.require_c2()?;
        Ok(self.saito_signs().0 == Ordering::Greater)
    }

    /// `psi_w(d_w) > 0` or `psi_w(d_w / 2) > 0`.
    pub fn saito_weak(&self) -> Result<bool> {
        self.require_c2()?;
        let (top, half) = self.saito_signs();
        Ok(top == Ordering::Greater || half == Some(Ordering::Greater))
    }
}

trait SignCmp {
    fn sign_cmp(&self) -> Ordering;
}

impl SignCmp for BigInt {
    fn sign_cmp(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }
}

pub(crate) fn a_tuple_from_counts(counts: &[usize]) -> [u8; 6] {
    const PAIRS: [usize; 6] = [0b0011, 0b0101, 0b1001, 0b0110, 0b1010, 0b1100];
    PAIRS.map(|mask| counts[mask] as u8)
}

/// Weight system of the Thom–Sebastiani sum: both systems rescaled to the
/// common degree `lcm(d_1, d_2)`, weights concatenated.
pub fn concat(a: &WeightSystem, b: &WeightSystem) -> Result<WeightSystem> {
    let d = arith::checked_lcm(a.d, b.d)?;
    let v = a
        .v
        .iter()
        .map(|x| x * (d / a.d))
        .chain(b.v.iter().map(|x| x * (d / b.d)))
        .collect();
    WeightSystem::new(v, d)
}

impl fmt::Display for WeightSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v: Vec<String> = self.v.iter().map(u64::to_string).collect();
        write!(f, "({};{})", v.join(","), self.d)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::rat;

    fn ws(v: &[u64], d: u64) -> WeightSystem {
        WeightSystem::new(v.to_vec(), d).unwrap()
    }

    /// (C2) straight from the definition: a set K of size |J| with every
    /// d - v_k reachable, searched over all subsets K.
    fn c2_by_definition(w: &WeightSystem) -> bool {
        let n = w.n();
        (1usize..1 << n).all(|jm| {
            let gens: Vec<u64> = (0..n).filter(|j| jm >> j & 1 == 1).map(|j| w.v[j]).collect();
            (1usize..1 << n).any(|km| {
                km.count_ones() == jm.count_ones()
                    && (0..n).filter(|k| km >> k & 1 == 1).all(|k| {
                        let target = w.d - w.v[k];
                        member_brute(&gens, target)
                    })
            })
        })
    }

    fn member_brute(gens: &[u64], k: u64) -> bool {
        match gens.split_first() {
            None => k == 0,
            Some((&g, rest)) => (0..=k / g).any(|a| member_brute(rest, k - a * g)),
        }
    }

    #[test]
    fn construction() {
        assert!(WeightSystem::new(vec![], 3).is_err());
        assert!(WeightSystem::new(vec![3], 3).is_err());
        assert!(WeightSystem::new(vec![0, 1], 3).is_err());
        assert_eq!(
            WeightSystem::from_normalized(&[(1, 4), (3, 20), (17, 40)]).unwrap(),
            ws(&[10, 6, 17], 40)
        );
        assert_eq!(WeightSystem::from_normalized(&[(2, 6), (3, 6)]).unwrap(), ws(&[2, 3], 6));
    }

    #[test]
    fn reduction_and_equivalence() {
        assert_eq!(ws(&[2, 2], 4).reduce(), ws(&[1, 1], 2));
        let t1 = ws(&[27, 16, 10, 1], 81);
        assert!(t1.is_reduced());
        assert_eq!(t1.reduce(), t1);
        assert!(ws(&[1, 1], 2).equivalent(&ws(&[3, 3], 6)));
        assert!(!ws(&[1, 1], 2).equivalent(&ws(&[1, 2], 6)));
        assert_eq!(ws(&[2, 3], 6).normalize(), vec![Ratio::new(1, 3), Ratio::new(1, 2)]);
    }

    #[test]
    fn st_pair_examples() {
        let r = ws(&[1], 3).st_pairs();
        assert_eq!((r.pairs, r.d_w), (vec![(1, 3)], 3));
        let r = ws(&[3, 2], 9).st_pairs();
        assert_eq!((r.pairs, r.d_w), (vec![(1, 3), (2, 9)], 9));
        let r = ws(&[1, 1], 2).st_pairs();
        assert_eq!((r.pairs, r.d_w), (vec![(1, 2), (1, 2)], 2));
    }

    #[test]
    fn m_sets_and_mu() {
        let a2 = ws(&[1], 3);
        assert_eq!(a2.m_set(3), vec![0]);
        assert_eq!(a2.mu_k(3), rat_int(2));
        assert!(a2.m_set(1).is_empty());
        assert_eq!(a2.mu_k(1), rat_int(1));
        let w = ws(&[27, 16, 10, 1], 81);
        let dw = w.d_w();
        for k in 1..500 {
            assert_eq!(w.m_set(k), w.m_set(k.gcd(&dw)));
            assert_eq!(w.mu_k(k), w.mu_k(k.gcd(&dw)));
        }
    }

    #[test]
    fn semigroup_examples() {
        let w = ws(&[16, 10], 81);
        assert!(!w.semigroup_member(&[0, 1], 54).unwrap());
        assert!(w.semigroup_member(&[0, 1], 80).unwrap());
        assert!(w.semigroup_member(&[1], 0).unwrap());
        assert!(w.semigroup_member(&[], 3).is_err());
        assert!(w.semigroup_member(&[2], 3).is_err());
    }

    #[test]
    fn condition_examples() {
        assert!(ws(&[1, 1], 2).check_c2());
        assert!(!ws(&[27, 16, 10, 1], 81).check_c2());
        assert!(!ws(&[58, 33, 24, 1], 265).check_c2());
        assert!(ws(&[27, 16, 10, 1], 81).check_c2bar());
        assert!(ws(&[58, 33, 24, 1], 265).check_c2bar());
        assert!(!ws(&[2, 2], 5).check_c2bar());
    }

    #[test]
    fn c2_matches_definition() {
        for d in 2..=24u64 {
            for a in 1..d {
                for b in 1..=a {
                    for c in 1..=b {
                        let w = ws(&[a, b, c], d);
                        assert_eq!(w.check_c2(), c2_by_definition(&w), "{w}");
                        if w.check_c2() {
                            assert!(w.check_c2bar());
                        }
                    }
                }
            }
        }
    }

    /// `(Z^J)_m` is nonempty: some integer combination of `v_J` equals `m`.
    /// The coefficients of all but the last weight may be taken mod that weight.
    fn integer_point(vs: &[u64], m: u64) -> bool {
        let (&last, rest) = vs.split_last().unwrap();
        let mut x = vec![0u64; rest.len()];
        loop {
            let sum: u64 = rest.iter().zip(&x).map(|(v, c)| v * c).sum();
            if (m as i64 - sum as i64).rem_euclid(last as i64) == 0 {
                return true;
            }
            let Some(i) = x.iter().position(|&c| c + 1 < last) else { return false };
            x[i] += 1;
            x[..i].iter_mut().for_each(|c| *c = 0);
        }
    }

    #[test]
    fn c2bar_matches_definition() {
        for d in 2..=30u64 {
            for a in 1..d {
                for b in 1..=a {
                    for c in 1..=b {
                        let w = ws(&[a, b, c], d);
                        let by_definition = (1..8usize).all(|mask| {
                            let vj: Vec<u64> = (0..3).filter(|i| mask >> i & 1 == 1).map(|i| w.v[i]).collect();
                            let hits = w.v.iter().filter(|&&vk| integer_point(&vj, d - vk)).count();
                            hits >= vj.len()
                        });
                        assert_eq!(w.check_c2bar(), by_definition, "{w}");
                    }
                }
            }
        }
    }

    #[test]
    fn a_tuples() {
        assert_eq!(ws(&[27, 16, 10, 1], 81).a_tuple().unwrap(), [2, 2, 4, 1, 4, 4]);
        assert_eq!(ws(&[49, 22, 15, 12], 147).a_tuple().unwrap(), [2, 2, 2, 3, 1, 2]);
        assert!(ws(&[1, 1], 2).a_tuple().is_err());
    }

    #[test]
    fn divisors_of_weight_systems() {
        assert_eq!(
            ws(&[1], 3).divisor(),
            &CycloElement::lambda(3).unwrap() - &CycloElement::one()
        );
        assert_eq!(ws(&[1], 3).divisor(), CycloElement::psi_element(3).unwrap());
        assert_eq!(ws(&[1, 1], 2).divisor(), CycloElement::one());
        assert_eq!(ws(&[27, 16, 10, 1], 81).divisor().degree(), rat_int(4615));
    }

    #[test]
    fn closed_form_lefschetz() {
        let a2 = ws(&[1], 3);
        assert_eq!(a2.lefschetz_closed_form(1).unwrap(), rat_int(-1));
        assert_eq!(a2.lefschetz_closed_form(3).unwrap(), rat_int(2));
        assert_eq!(CycloElement::psi_element(3).unwrap().lefschetz(1), rat_int(-1));
        for w in [ws(&[27, 16, 10, 1], 81), ws(&[6, 4, 3], 14), ws(&[5, 7], 20)] {
            let dw = w.d_w();
            let div = w.divisor();
            for k in 1..=3 * dw {
                let cf = w.lefschetz_closed_form(k).unwrap();
                assert_eq!(cf, div.lefschetz(k), "{w} k={k}");
                assert_eq!(cf, w.lefschetz_closed_form(k.gcd(&dw)).unwrap());
            }
        }
        assert!(a2.lefschetz_closed_form(0).is_err());
    }

    #[test]
    fn rho_examples() {
        let s = ws(&[1], 3).rho().unwrap();
        assert_eq!(
            s.exponents(),
            vec![(1, 3, 1), (2, 3, 1)]
        );
        assert!(ws(&[27, 16, 10, 1], 81).rho_is_integral());
        assert!(!ws(&[2, 2], 5).rho_is_integral());
        assert_eq!(ws(&[2, 2], 5).rho(), Err(Error::NotIntegral(2)));
        let w = ws(&[27, 16, 10, 1], 81);
        let s = w.rho().unwrap();
        assert_eq!(s.total(), 4615);
        assert!(s.is_nonnegative());
    }

    #[test]
    fn sigma_matches_divisor() {
        assert!(ws(&[1], 3).sigma_vs_divisor().unwrap());
        assert!(ws(&[1, 1], 2).sigma_vs_divisor().unwrap());
        assert!(ws(&[27, 16, 10, 1], 81).sigma_vs_divisor().unwrap());
        assert!(ws(&[2, 2], 5).sigma_vs_divisor().is_err());
    }

    #[test]
    fn milnor_numbers() {
        assert_eq!(ws(&[27, 16, 10, 1], 81).milnor_number(), rat_int(4615));
        assert_eq!(ws(&[58, 33, 24, 1], 265).milnor_number(), rat_int(66516));
        assert_eq!(ws(&[55, 51, 30, 18, 10], 120).milnor_number(), rat_int(299));
        assert_eq!(ws(&[2, 2], 5).milnor_number(), rat(9, 4));
    }

    #[test]
    fn thom_sebastiani() {
        let a1 = ws(&[1], 2);
        let s = concat(&a1, &a1).unwrap();
        assert_eq!(s, ws(&[1, 1], 2));
        assert_eq!(s.divisor(), CycloElement::one());
        assert_eq!(concat(&ws(&[1], 3), &a1).unwrap(), ws(&[2, 3], 6));
    }

    #[test]
    fn saito_predicates() {
        let a2 = ws(&[1], 3);
        assert_eq!(a2.psi_w().get(3), rat_int(1));
        assert!(a2.saito_strong().unwrap());
        assert!(!ws(&[55, 51, 30, 18, 10], 120).saito_strong().unwrap());
        assert!(!ws(&[85, 81, 60, 18, 10], 180).saito_strong().unwrap());
        assert!(ws(&[27, 16, 10, 1], 81).saito_strong().is_err());
    }

    #[test]
    fn psi_value_agrees_with_divisor() {
        for w in [ws(&[27, 16, 10, 1], 81), ws(&[55, 51, 30, 18, 10], 120), ws(&[2, 2], 5)] {
            let psi = w.psi_w();
            for m in arith::divisors(w.d_w()).unwrap() {
                assert_eq!(w.psi_value(m), psi.get(m), "{w} m={m}");
            }
        }
    }
}
