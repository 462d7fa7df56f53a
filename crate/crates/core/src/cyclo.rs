//! The subring of `Q[mu(C)]` spanned by the divisors `Lambda_n = div(t^n - 1)`.
//!
//! Elements are stored in the `Lambda` basis (`chi` coordinates), where the
//! product is the monomial rule `Lambda_m * Lambda_n = gcd(m,n) Lambda_lcm(m,n)`.
//! The `Psi_m = div(Phi_m)` coordinates are a view computed on demand; products
//! of `Psi` elements always route through the `Lambda` basis.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith;
use crate::error::{Error, Result};
use crate::poly::IntPolynomial;

/// Shorthand for an exact rational `num/den`.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn rat_int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn insert_term(map: &mut BTreeMap<u64, BigRational>, key: u64, c: BigRational) {
    if c.is_zero() {
        return;
    }
    let entry = map.entry(key).or_insert_with(BigRational::zero);
    *entry += c;
    if entry.is_zero() {
        map.remove(&key);
    }
}

fn nonzero(n: u64) -> Result<()> {
    if n == 0 {
        Err(Error::InvalidInput("basis index must be >= 1".into()))
    } else {
        Ok(())
    }
}

/// A finite rational combination `sum_n chi(n) Lambda_n`.
/// Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycloElement {
    chi: BTreeMap<u64, BigRational>,
}

/// Multiplicities `psi(m)` of `b = sum_m psi(m) Psi_m`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PsiMap {
    psi: BTreeMap<u64, BigRational>,
}

impl CycloElement {
    pub fn zero() -> Self {
        Self::default()
    }

    /// `Lambda_1 = [1]`, the unit.
    pub fn one() -> Self {
        Self::lambda_unchecked(1)
    }

    pub fn lambda(n: u64) -> Result<Self> {
        nonzero(n)?;
        Ok(Self::lambda_unchecked(n))
    }

    pub(crate) fn lambda_unchecked(n: u64) -> Self {
        let mut chi = BTreeMap::new();
        chi.insert(n, BigRational::one());
        Self { chi }
    }

    /// `Psi_m = sum_{n | m} mu(m/n) Lambda_n`.
    pub fn psi_element(m: u64) -> Result<Self> {
        let mut out = Self::zero();
        for n in arith::divisors(m)? {
            let mu = arith::moebius(m / n)?;
            insert_term(&mut out.chi, n, rat_int(mu));
        }
        Ok(out)
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, BigRational)>>(terms: I) -> Result<Self> {
        let mut out = Self::zero();
        for (n, c) in terms {
            nonzero(n)?;
            insert_term(&mut out.chi, n, c);
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.chi.is_empty()
    }

    pub fn coeff(&self, n: u64) -> BigRational {
        self.chi.get(&n).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.chi.iter().map(|(&n, c)| (n, c))
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.chi.keys().copied()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        Self {
            chi: self.chi.iter().map(|(&n, c)| (n, c * q)).collect(),
        }
    }

    /// `tr(b) = chi(1)`, since `tr Lambda_m` vanishes for `m >= 2`.
    pub fn trace(&self) -> BigRational {
        self.coeff(1)
    }

    /// `deg(b) = sum_n n chi(n)`.
    pub fn degree(&self) -> BigRational {
        self.lefschetz(0)
    }

    /// `L_k(b) = sum_{n | k} n chi(n)`; every `n` divides `k = 0`.
    pub fn lefschetz(&self, k: u64) -> BigRational {
        let mut sum = BigRational::zero();
        for (&n, c) in &self.chi {
            if k.is_multiple_of(n) {
                sum += c * BigRational::from_integer(n.into());
            }
        }
        sum
    }

    /// `d_chi = lcm(supp chi)`; 1 for the zero element.
    pub fn d_chi(&self) -> Result<u64> {
        arith::lcm_all(self.chi.keys().copied())
    }

    /// `psi(m) = sum_{m | n} chi(n)`.
    pub fn to_psi(&self) -> PsiMap {
        let mut psi = BTreeMap::new();
        for (&n, c) in &self.chi {
            for m in arith::divisors(n).expect("support indices are >= 1") {
                insert_term(&mut psi, m, c.clone());
            }
        }
        PsiMap { psi }
    }

    pub fn from_psi(p: &PsiMap) -> Self {
        let mut out = Self::zero();
        for (&m, c) in &p.psi {
            for n in arith::divisors(m).expect("support indices are >= 1") {
                let mu = arith::moebius(m / n).expect("n divides m");
                if mu != 0 {
                    insert_term(&mut out.chi, n, c * rat_int(mu));
                }
            }
        }
        out
    }

    /// Reconstructs the element from `L_k` for every `k | d` via
    /// `n chi(n) = sum_{k | n} L_k mu(n/k)`.
    pub fn from_lefschetz(values: &BTreeMap<u64, BigRational>, d: u64) -> Result<Self> {
        let divs = arith::divisors(d)?;
        for &k in values.keys() {
            if k == 0 || !d.is_multiple_of(k) {
                return Err(Error::InvalidInput(format!(
                    "Lefschetz index {k} does not divide {d}"
                )));
            }
        }
        let lookup = |k: u64| {
            values
                .get(&k)
                .ok_or_else(|| Error::InvalidInput(format!("missing Lefschetz number L_{k}")))
        };
        let mut out = Self::zero();
        for &n in &divs {
            let mut acc = BigRational::zero();
            for k in arith::divisors(n)? {
                let mu = arith::moebius(n / k)?;
                if mu != 0 {
                    acc += lookup(k)? * rat_int(mu);
                }
            }
            insert_term(&mut out.chi, n, acc / BigRational::from_integer(n.into()));
        }
        for &k in &divs {
            if &out.lefschetz(k) != lookup(k)? {
                return Err(Error::ContractViolation(format!(
                    "reconstructed element disagrees at L_{k}"
                )));
            }
        }
        Ok(out)
    }
}

impl Add for &CycloElement {
    type Output = CycloElement;
    fn add(self, rhs: &CycloElement) -> CycloElement {
        let mut out = self.clone();
        for (&n, c) in &rhs.chi {
            insert_term(&mut out.chi, n, c.clone());
        }
        out
    }
}

impl Neg for &CycloElement {
    type Output = CycloElement;
    fn neg(self) -> CycloElement {
        CycloElement {
            chi: self.chi.iter().map(|(&n, c)| (n, -c)).collect(),
        }
    }
}

impl Sub for &CycloElement {
    type Output = CycloElement;
    fn sub(self, rhs: &CycloElement) -> CycloElement {
        self + &(-rhs)
    }
}

impl Mul for &CycloElement {
    type Output = CycloElement;
    fn mul(self, rhs: &CycloElement) -> CycloElement {
        let mut out = CycloElement::zero();
        for (&m, a) in &self.chi {
            for (&n, b) in &rhs.chi {
                let g = m.gcd(&n);
                let l = m / g * n;
                insert_term(&mut out.chi, l, a * b * BigRational::from_integer(g.into()));
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for CycloElement {
            type Output = CycloElement;
            fn $f(self, rhs: CycloElement) -> CycloElement {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl PsiMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_multiplicities<I: IntoIterator<Item = (u64, u64)>>(it: I) -> Result<Self> {
        let mut psi = BTreeMap::new();
        for (m, e) in it {
            nonzero(m)?;
            insert_term(&mut psi, m, BigRational::from_integer(e.into()));
        }
        Ok(Self { psi })
    }

    pub fn from_terms<I: IntoIterator<Item = (u64, BigRational)>>(it: I) -> Result<Self> {
        let mut psi = BTreeMap::new();
        for (m, c) in it {
            nonzero(m)?;
            insert_term(&mut psi, m, c);
        }
        Ok(Self { psi })
    }

    pub fn get(&self, m: u64) -> BigRational {
        self.psi.get(&m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.psi.iter().map(|(&m, c)| (m, c))
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.psi.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    pub fn is_nonneg_integral(&self) -> bool {
        self.psi.values().all(|c| c.is_integer() && !c.is_negative())
    }

    /// The multiplicities as natural numbers; fails on negative or
    /// fractional values.
    pub fn multiplicities(&self) -> Result<BTreeMap<u64, u64>> {
        self.psi
            .iter()
            .map(|(&m, c)| {
                if !c.is_integer() || c.is_negative() {
                    return Err(Error::InvalidInput(format!(
                        "multiplicity psi({m}) = {c} is not a natural number"
                    )));
                }
                c.to_integer()
                    .to_u64()
                    .map(|e| (m, e))
                    .ok_or(Error::Overflow("multiplicity"))
            })
            .collect()
    }

    /// `l_psi = max psi(m)`; 0 for the empty map.
    pub fn max_multiplicity(&self) -> Result<u64> {
        Ok(self.multiplicities()?.values().copied().max().unwrap_or(0))
    }
}

/// Multiplicity map of the tensor product `f (x) g` of polynomials whose
/// divisors are given by `p1`, `p2`.
pub fn tensor_psi(p1: &PsiMap, p2: &PsiMap) -> Result<PsiMap> {
    p1.multiplicities()?;
    p2.multiplicities()?;
    let prod = &CycloElement::from_psi(p1) * &CycloElement::from_psi(p2);
    let out = prod.to_psi();
    debug_assert!(out.is_nonneg_integral());
    Ok(out)
}

/// `prod_m Phi_m^{psi(m)}` expanded over the integers.
///
/// Uses `prod_m Phi_m^{psi(m)} = prod_n (t^n - 1)^{chi(n)}` with the integer
/// exponents `chi(n) = sum_{n | m} psi(m) mu(m/n)`.
pub fn char_poly(p: &PsiMap) -> Result<IntPolynomial> {
    p.multiplicities()?;
    let chi = CycloElement::from_psi(p);
    let exps = chi
        .terms()
        .map(|(n, c)| {
            c.to_integer()
                .to_i64()
                .map(|e| (n, e))
                .ok_or(Error::Overflow("char_poly exponent"))
        })
        .collect::<Result<Vec<_>>>()?;
    IntPolynomial::from_binomial_exponents(exps)
}

/// JSON integer: a number when it fits in `i64`, a decimal string otherwise.
#[derive(Debug, Clone, PartialEq)]
struct JsonInt(BigInt);

impl Serialize for JsonInt {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self.0.to_i64() {
            Some(v) => s.serialize_i64(v),
            None => s.serialize_str(&self.0.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for JsonInt {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Num(i64),
            Str(String),
        }
        match Raw::deserialize(d)? {
            Raw::Num(v) => Ok(JsonInt(v.into())),
            Raw::Str(s) => s
                .parse()
                .map(JsonInt)
                .map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct BasisCoeffs {
    basis: String,
    coeffs: Vec<(u64, JsonInt, JsonInt)>,
}

impl BasisCoeffs {
    fn new(basis: &str, map: &BTreeMap<u64, BigRational>) -> Self {
        Self {
            basis: basis.into(),
            coeffs: map
                .iter()
                .map(|(&n, c)| (n, JsonInt(c.numer().clone()), JsonInt(c.denom().clone())))
                .collect(),
        }
    }

    fn into_map(self, expect: &str) -> std::result::Result<BTreeMap<u64, BigRational>, String> {
        if self.basis != expect {
            return Err(format!("expected basis {expect:?}, got {:?}", self.basis));
        }
        let mut map = BTreeMap::new();
        for (n, num, den) in self.coeffs {
            if n == 0 || den.0.is_zero() {
                return Err(format!("invalid coefficient entry for index {n}"));
            }
            insert_term(&mut map, n, BigRational::new(num.0, den.0));
        }
        Ok(map)
    }
}

impl Serialize for CycloElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BasisCoeffs::new("lambda", &self.chi).serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycloElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let chi = BasisCoeffs::deserialize(d)?
            .into_map("lambda")
            .map_err(serde::de::Error::custom)?;
        Ok(Self { chi })
    }
}

impl Serialize for PsiMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        BasisCoeffs::new("psi", &self.psi).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PsiMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let psi = BasisCoeffs::deserialize(d)?
            .into_map("psi")
            .map_err(serde::de::Error::custom)?;
        Ok(Self { psi })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lam(n: u64) -> CycloElement {
        CycloElement::lambda(n).unwrap()
    }

    fn elem(terms: &[(u64, i64)]) -> CycloElement {
        CycloElement::from_terms(terms.iter().map(|&(n, c)| (n, rat_int(c)))).unwrap()
    }

    fn psi(terms: &[(u64, u64)]) -> PsiMap {
        PsiMap::from_multiplicities(terms.iter().copied()).unwrap()
    }

    #[test]
    fn lambda_and_psi_elements() {
        assert_eq!(lam(1), CycloElement::one());
        assert_eq!(lam(6).degree(), rat_int(6));
        assert!(CycloElement::lambda(0).is_err());
        assert_eq!(CycloElement::psi_element(1).unwrap(), lam(1));
        assert_eq!(
            CycloElement::psi_element(6).unwrap(),
            elem(&[(6, 1), (3, -1), (2, -1), (1, 1)])
        );
        assert_eq!(CycloElement::psi_element(4).unwrap(), elem(&[(4, 1), (2, -1)]));
    }

    #[test]
    fn linear_structure() {
        assert!((&lam(2) + &lam(2).scale(&rat_int(-1))).is_zero());
        assert_eq!(&lam(3) + &lam(1), elem(&[(3, 1), (1, 1)]));
        let half = lam(9).scale(&rat(1, 2));
        assert_eq!(half.coeff(9), rat(1, 2));
    }

    #[test]
    fn products() {
        assert_eq!(&lam(2) * &lam(3), lam(6));
        assert_eq!(&lam(2) * &lam(2), elem(&[(2, 2)]));
        let a = &lam(2) - &lam(1);
        assert_eq!(&a * &a, lam(1));
    }

    #[test]
    fn traces_and_degrees() {
        let psi6 = CycloElement::psi_element(6).unwrap();
        assert_eq!(psi6.trace(), rat_int(1));
        assert_eq!(lam(5).trace(), rat_int(0));
        assert_eq!(psi6.degree(), rat_int(2));
        for m in 1..=200u64 {
            let pm = CycloElement::psi_element(m).unwrap();
            assert_eq!(pm.trace(), rat_int(arith::moebius(m).unwrap()));
            assert_eq!(pm.degree(), rat_int(arith::euler_phi(m).unwrap() as i64));
        }
    }

    #[test]
    fn lefschetz_examples() {
        assert_eq!(lam(3).lefschetz(3), rat_int(3));
        assert_eq!(lam(3).lefschetz(1), rat_int(0));
        for k in 0..20 {
            assert_eq!(lam(1).lefschetz(k), rat_int(1));
        }
        assert_eq!(lam(12).lefschetz(0), lam(12).degree());
    }

    #[test]
    fn psi_views() {
        assert_eq!(lam(6).to_psi(), psi(&[(1, 1), (2, 1), (3, 1), (6, 1)]));
        let a = &lam(2) - &lam(1);
        assert_eq!((&a * &a).to_psi(), psi(&[(1, 1)]));
        // Lambda_n = sum_{m | n} Psi_m
        for n in 1..=360u64 {
            let sum = arith::divisors(n)
                .unwrap()
                .into_iter()
                .fold(CycloElement::zero(), |acc, m| {
                    &acc + &CycloElement::psi_element(m).unwrap()
                });
            assert_eq!(sum, lam(n), "n = {n}");
        }
    }

    #[test]
    fn lefschetz_reconstruction() {
        let mut vals = BTreeMap::new();
        vals.insert(1, rat_int(0));
        vals.insert(3, rat_int(3));
        let b = CycloElement::from_lefschetz(&vals, 3).unwrap();
        assert_eq!(b, lam(3));

        let ones: BTreeMap<u64, BigRational> = arith::divisors(60)
            .unwrap()
            .into_iter()
            .map(|k| (k, rat_int(1)))
            .collect();
        assert_eq!(CycloElement::from_lefschetz(&ones, 60).unwrap(), lam(1));

        vals.remove(&1);
        assert!(CycloElement::from_lefschetz(&vals, 3).is_err());
        vals.insert(2, rat_int(0));
        assert!(CycloElement::from_lefschetz(&vals, 3).is_err());
    }

    #[test]
    fn tensor_examples() {
        assert_eq!(tensor_psi(&psi(&[(2, 1)]), &psi(&[(3, 1)])).unwrap(), psi(&[(6, 1)]));
        let p = psi(&[(4, 2), (6, 1), (9, 3)]);
        assert_eq!(tensor_psi(&p, &psi(&[(1, 1)])).unwrap(), p);
        // (t+1) tensor (t+1) has the single eigenvalue 1
        assert_eq!(tensor_psi(&psi(&[(2, 1)]), &psi(&[(2, 1)])).unwrap(), psi(&[(1, 1)]));
        let bad = PsiMap::from_terms([(2, rat(1, 2))]).unwrap();
        assert!(tensor_psi(&bad, &p).is_err());
    }

    #[test]
    fn characteristic_polynomials() {
        let cp = |p: &PsiMap| char_poly(p).unwrap();
        assert_eq!(cp(&psi(&[(1, 1)])), IntPolynomial::from_coeffs([-1, 1]));
        assert_eq!(cp(&psi(&[(3, 1)])), IntPolynomial::from_coeffs([1, 1, 1]));
        assert_eq!(cp(&psi(&[(1, 1), (2, 1)])), IntPolynomial::from_coeffs([-1, 0, 1]));
        let p = psi(&[(1, 3), (4, 2), (15, 1)]);
        let direct = [(1u64, 3u32), (4, 2), (15, 1)]
            .iter()
            .fold(IntPolynomial::one(), |acc, &(m, e)| {
                (0..e).fold(acc, |a, _| a.mul(&crate::poly::cyclotomic(m).unwrap()))
            });
        assert_eq!(cp(&p), direct);
        assert_eq!(cp(&p).degree(), Some(3 + 2 * 2 + 8));
        assert!(char_poly(&PsiMap::from_terms([(2, rat_int(-1))]).unwrap()).is_err());
    }

    #[test]
    fn json_round_trip() {
        let b = elem(&[(1, 1), (6, -2)]).scale(&rat(1, 3));
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, r#"{"basis":"lambda","coeffs":[[1,1,3],[6,-2,3]]}"#);
        let back: CycloElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, b);
        let p = psi(&[(3, 2)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"basis":"psi","coeffs":[[3,2,1]]}"#);
        assert!(serde_json::from_str::<CycloElement>(&s).is_err());
    }
}
