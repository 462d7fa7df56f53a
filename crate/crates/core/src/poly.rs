//! Dense integer polynomials, lowest degree first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith;
use crate::error::{Error, Result};

/// Integer polynomial with dense coefficients, lowest degree first.
/// The leading coefficient is nonzero unless the polynomial is zero.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    pub fn from_coeffs<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let mut p = Self {
            coeffs: coeffs.into_iter().map(Into::into).collect(),
        };
        p.trim();
        p
    }

    pub fn monomial<T: Into<BigInt>>(c: T, deg: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c.into();
        Self::from_coeffs(coeffs)
    }

    /// `t^n - 1`.
    pub fn x_pow_minus_one(n: usize) -> Self {
        let mut p = Self::monomial(1, n);
        p.coeffs[0] -= 1;
        p.trim();
        p
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(out)
    }

    /// Multiplies in place by `t^n - 1`.
    pub fn mul_x_pow_minus_one(&mut self, n: usize) {
        if self.is_zero() {
            return;
        }
        let len = self.coeffs.len();
        self.coeffs.resize(len + n, BigInt::zero());
        for i in (0..len + n).rev() {
            let shifted = if i >= n {
                self.coeffs[i - n].clone()
            } else {
                BigInt::zero()
            };
            self.coeffs[i] = shifted - &self.coeffs[i];
        }
        self.trim();
    }

    /// Exact division by `t^n - 1`; fails if a remainder would be left.
    pub fn div_x_pow_minus_one(&self, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidInput("division by t^0 - 1 = 0".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let deg = self.coeffs.len() - 1;
        if deg < n {
            return Err(Error::ContractViolation(format!(
                "t^{n} - 1 does not divide a polynomial of degree {deg}"
            )));
        }
        // p_i = q_{i-n} - q_i
        let qlen = deg - n + 1;
        let mut q: Vec<BigInt> = Vec::with_capacity(qlen);
        for i in 0..qlen {
            let prev = if i >= n { q[i - n].clone() } else { BigInt::zero() };
            q.push(prev - &self.coeffs[i]);
        }
        for i in qlen..=deg {
            let expect = if i >= n && i - n < qlen {
                q[i - n].clone()
            } else {
                BigInt::zero()
            };
            if self.coeffs[i] != expect {
                return Err(Error::ContractViolation(format!(
                    "t^{n} - 1 does not divide the polynomial exactly"
                )));
            }
        }
        Ok(Self::from_coeffs(q))
    }

    /// Exact long division; requires the divisor's leading coefficient to
    /// divide every intermediate leading coefficient and a zero remainder.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self> {
        let Some(dlead) = divisor.leading() else {
            return Err(Error::InvalidInput("division by the zero polynomial".into()));
        };
        let mut rem = self.coeffs.clone();
        let dd = divisor.coeffs.len() - 1;
        if rem.len() < divisor.coeffs.len() {
            return if self.is_zero() {
                Ok(Self::zero())
            } else {
                Err(Error::ContractViolation("nonzero remainder".into()))
            };
        }
        let mut q = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(dlead);
            if !r.is_zero() {
                return Err(Error::ContractViolation("non-integral quotient".into()));
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[i + j] -= &c * b;
            }
            q[i] = c;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::ContractViolation("nonzero remainder".into()));
        }
        Ok(Self::from_coeffs(q))
    }

    /// Evaluates at an integer point.
    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Product `prod_n (t^n - 1)^{e(n)}`, exact when the result is a
    /// polynomial. Positive exponents are applied before negative ones.
    pub fn from_binomial_exponents<I>(exps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (u64, i64)>,
    {
        let exps: Vec<(u64, i64)> = exps.into_iter().collect();
        let mut p = Self::one();
        for &(n, e) in exps.iter().filter(|(_, e)| *e > 0) {
            for _ in 0..e {
                p.mul_x_pow_minus_one(n as usize);
            }
        }
        for &(n, e) in exps.iter().filter(|(_, e)| *e < 0) {
            for _ in 0..(-e) {
                p = p.div_x_pow_minus_one(n as usize)?;
            }
        }
        Ok(p)
    }
}

/// The `m`-th cyclotomic polynomial, computed from
/// `Phi_m = prod_{n | m} (t^n - 1)^{mu(m/n)}` by exact division.
pub fn cyclotomic(m: u64) -> Result<IntPolynomial> {
    let exps = arith::divisors(m)?
        .into_iter()
        .map(|n| Ok((n, arith::moebius(m / n)?)))
        .collect::<Result<Vec<_>>>()?;
    IntPolynomial::from_binomial_exponents(exps)
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = abs.is_one();
            match i {
                0 => write!(f, "{abs}")?,
                1 if unit => write!(f, "t")?,
                1 => write!(f, "{abs}*t")?,
                _ if unit => write!(f, "t^{i}")?,
                _ => write!(f, "{abs}*t^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_coeffs(c.iter().copied())
    }

    #[test]
    fn small_cyclotomics() {
        assert_eq!(cyclotomic(1).unwrap(), p(&[-1, 1]));
        assert_eq!(cyclotomic(2).unwrap(), p(&[1, 1]));
        assert_eq!(cyclotomic(3).unwrap(), p(&[1, 1, 1]));
        assert_eq!(cyclotomic(4).unwrap(), p(&[1, 0, 1]));
        assert_eq!(cyclotomic(6).unwrap(), p(&[1, -1, 1]));
        assert_eq!(cyclotomic(12).unwrap(), p(&[1, 0, -1, 0, 1]));
        // Phi_105 is the first with a coefficient of absolute value 2
        let c105 = cyclotomic(105).unwrap();
        assert_eq!(c105.degree(), Some(48));
        assert!(c105.coeffs().iter().any(|c| *c == BigInt::from(-2)));
    }

    #[test]
    fn product_of_cyclotomics_is_binomial() {
        for n in 1..=60u64 {
            let mut prod = IntPolynomial::one();
            for m in arith::divisors(n).unwrap() {
                prod = prod.mul(&cyclotomic(m).unwrap());
            }
            assert_eq!(prod, IntPolynomial::x_pow_minus_one(n as usize));
        }
    }

    #[test]
    fn binomial_division() {
        let mut q = p(&[3, 0, -2, 5]);
        q.mul_x_pow_minus_one(4);
        assert_eq!(q.div_x_pow_minus_one(4).unwrap(), p(&[3, 0, -2, 5]));
        assert!(p(&[1, 1, 1]).div_x_pow_minus_one(2).is_err());
        let g = p(&[1, 2, 1]);
        assert_eq!(g.div_exact(&p(&[1, 1])).unwrap(), p(&[1, 1]));
        assert!(g.div_exact(&p(&[2, 1])).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[1, 1, 1]).to_string(), "t^2 + t + 1");
        assert_eq!(p(&[-1, 0, 1]).to_string(), "t^2 - 1");
        assert_eq!(p(&[0, -3]).to_string(), "-3*t");
    }
}
