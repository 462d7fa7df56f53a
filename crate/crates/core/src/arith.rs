//! Elementary number theory on `u64`: Möbius function, Euler's totient,
//! `p`-adic valuations and divisor lists.
//!
//! Factorization is trial division against a prime table that is built once
//! on first use and shared read-only afterwards.

use std::sync::OnceLock;

use num_integer::Integer;

use crate::error::{Error, Result};

/// Upper bound of the cached prime table.
pub const PRIME_TABLE_BOUND: u64 = 10_000;

fn prime_table() -> &'static [u64] {
    static TABLE: OnceLock<Vec<u64>> = OnceLock::new();
    TABLE.get_or_init(|| sieve(PRIME_TABLE_BOUND))
}

fn sieve(bound: u64) -> Vec<u64> {
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

fn nonzero(m: u64, what: &str) -> Result<()> {
    if m == 0 {
        Err(Error::InvalidInput(format!("{what} requires m >= 1, got 0")))
    } else {
        Ok(())
    }
}

/// Prime factorization `m = prod p^e`, primes ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimeFactorization {
    factors: Vec<(u64, u32)>,
}

impl PrimeFactorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    /// Reconstructs the factored integer.
    pub fn value(&self) -> u64 {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }
}

/// Factors `m >= 1` by trial division.
pub fn factorize(m: u64) -> Result<PrimeFactorization> {
    nonzero(m, "factorize")?;
    let mut rest = m;
    let mut factors = Vec::new();
    let mut push = |p: u64, rest: &mut u64| {
        let mut e = 0;
        while (*rest).is_multiple_of(p) {
            *rest /= p;
            e += 1;
        }
        if e > 0 {
            factors.push((p, e));
        }
    };
    for &p in prime_table() {
        if p * p > rest {
            break;
        }
        push(p, &mut rest);
    }
    // beyond the table: odd trial divisors
    let mut q = PRIME_TABLE_BOUND + 1;
    while q.checked_mul(q).is_some_and(|qq| qq <= rest) {
        push(q, &mut rest);
        q += 2;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    Ok(PrimeFactorization { factors })
}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p <= PRIME_TABLE_BOUND {
        return prime_table().binary_search(&p).is_ok();
    }
    matches!(factorize(p), Ok(f) if f.factors == [(p, 1)])
}

/// If `m = p^k` with `k >= 1`, returns `(p, k)`.
pub fn prime_power(m: u64) -> Option<(u64, u32)> {
    if m < 2 {
        return None;
    }
    let f = factorize(m).ok()?;
    match f.factors.as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Möbius function.
pub fn moebius(m: u64) -> Result<i64> {
    let f = factorize(m)?;
    Ok(if f.is_squarefree() {
        if f.factors.len() % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        0
    })
}

/// Euler's totient.
pub fn euler_phi(m: u64) -> Result<u64> {
    let f = factorize(m)?;
    Ok(f
        .factors
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product())
}

/// Exact `p`-adic valuation of `m`.
pub fn v_p(p: u64, m: u64) -> Result<u32> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    nonzero(m, "v_p")?;
    Ok(valuation(p, m))
}

/// `m / p^{v_p(m)}`.
pub fn pi_p(p: u64, m: u64) -> Result<u64> {
    let e = v_p(p, m)?;
    Ok(m / p.pow(e))
}

/// Valuation without input checks; `p >= 2`, `m >= 1`.
#[inline]
pub(crate) fn valuation(p: u64, mut m: u64) -> u32 {
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    e
}

/// Splits `m` into `(p^{v_p(m)}, v_p(m))` removed: returns `(pi_p(m), v_p(m))`.
#[inline]
pub(crate) fn split_p(p: u64, mut m: u64) -> (u64, u32) {
    let mut e = 0;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m, e)
}

/// All positive divisors of `m`, ascending.
pub fn divisors(m: u64) -> Result<Vec<u64>> {
    let f = factorize(m)?;
    let mut divs = vec![1u64];
    for &(p, e) in f.factors() {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    Ok(divs)
}

/// Least common multiple with overflow detection.
pub fn checked_lcm(a: u64, b: u64) -> Result<u64> {
    if a == 0 || b == 0 {
        return Ok(0);
    }
    (a / a.gcd(&b))
        .checked_mul(b)
        .ok_or(Error::Overflow("lcm"))
}

/// lcm of a sequence; the empty lcm is 1.
pub fn lcm_all<I: IntoIterator<Item = u64>>(it: I) -> Result<u64> {
    it.into_iter().try_fold(1u64, checked_lcm)
}

pub fn gcd_all<I: IntoIterator<Item = u64>>(it: I) -> u64 {
    it.into_iter().fold(0u64, |g, x| g.gcd(&x))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi_by_count(m: u64) -> u64 {
        (1..=m).filter(|k| k.gcd(&m) == 1).count() as u64
    }

    fn divisors_by_scan(m: u64) -> Vec<u64> {
        (1..=m).filter(|k| m.is_multiple_of(*k)).collect()
    }

    /// Möbius values from a linear sieve, independent of `factorize`.
    fn moebius_sieve(bound: usize) -> Vec<i64> {
        let mut mu = vec![1i64; bound + 1];
        let mut is_comp = vec![false; bound + 1];
        for p in 2..=bound {
            if is_comp[p] {
                continue;
            }
            for j in (p..=bound).step_by(p) {
                if j > p {
                    is_comp[j] = true;
                }
                mu[j] = -mu[j];
            }
            let pp = p * p;
            for j in (pp..=bound).step_by(pp) {
                mu[j] = 0;
            }
        }
        mu
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(moebius(1).unwrap(), 1);
        assert_eq!(moebius(4).unwrap(), 0);
        assert_eq!(moebius(30).unwrap(), -1);
        assert!(moebius(0).is_err());
    }

    #[test]
    fn moebius_matches_sieve() {
        let mu = moebius_sieve(3000);
        for m in 1..=3000u64 {
            assert_eq!(moebius(m).unwrap(), mu[m as usize], "m = {m}");
        }
    }

    #[test]
    fn phi_examples() {
        assert_eq!(euler_phi(1).unwrap(), 1);
        assert_eq!(euler_phi(12).unwrap(), 4);
        assert_eq!(euler_phi(7).unwrap(), 6);
        assert!(euler_phi(0).is_err());
        for m in 1..=500 {
            assert_eq!(euler_phi(m).unwrap(), phi_by_count(m));
        }
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(v_p(2, 40).unwrap(), 3);
        assert_eq!(pi_p(2, 40).unwrap(), 5);
        assert_eq!(v_p(3, 8).unwrap(), 0);
        assert_eq!(pi_p(3, 8).unwrap(), 8);
        assert_eq!(v_p(5, 25).unwrap(), 2);
        assert_eq!(pi_p(5, 25).unwrap(), 1);
        assert_eq!(v_p(4, 16), Err(Error::NotPrime(4)));
        assert!(v_p(2, 0).is_err());
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(1).unwrap(), vec![1]);
        assert_eq!(divisors(12).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(7).unwrap(), vec![1, 7]);
        for m in 1..=400 {
            assert_eq!(divisors(m).unwrap(), divisors_by_scan(m));
        }
    }

    #[test]
    fn divisor_sums() {
        for m in 1..=10_000u64 {
            let divs = divisors(m).unwrap();
            let mu_sum: i64 = divs.iter().map(|&d| moebius(d).unwrap()).sum();
            assert_eq!(mu_sum, i64::from(m == 1));
            let phi_sum: u64 = divs.iter().map(|&d| euler_phi(d).unwrap()).sum();
            assert_eq!(phi_sum, m);
        }
    }

    #[test]
    fn large_factorization() {
        let m = 10_007u64 * 10_009;
        assert_eq!(factorize(m).unwrap().factors(), &[(10_007, 1), (10_009, 1)]);
        assert!(is_prime(10_007));
        assert_eq!(prime_power(243), Some((3, 5)));
        assert_eq!(prime_power(12), None);
        assert_eq!(checked_lcm(u64::MAX, 2), Err(Error::Overflow("lcm")));
    }

    proptest::proptest! {
        #[test]
        fn pi_times_power_restores(pi in 0usize..25, m in 1u64..1_000_000) {
            let p = prime_table()[pi];
            let e = v_p(p, m).unwrap();
            let rest = pi_p(p, m).unwrap();
            proptest::prop_assert_eq!(rest * p.pow(e), m);
            proptest::prop_assert_eq!(rest.gcd(&p), 1);
            proptest::prop_assert_eq!(factorize(m).unwrap().value(), m);
        }
    }
}
