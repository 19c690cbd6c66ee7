//! Dense integer polynomials in one variable.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Which indeterminate a polynomial is written in. Metadata only.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Variable {
    T,
    S,
}

impl Variable {
    pub fn symbol(self) -> &'static str {
        match self {
            Variable::T => "T",
            Variable::S => "S",
        }
    }
}

/// `coeffs[k]` is the coefficient of `X^k`; the highest stored coefficient is
/// nonzero unless the polynomial is zero (empty vector).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
    var: Variable,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>, var: Variable) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        IntPolynomial { coeffs, var }
    }

    pub fn from_i64(coeffs: &[i64], var: Variable) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect(), var)
    }

    pub fn zero(var: Variable) -> Self {
        IntPolynomial { coeffs: Vec::new(), var }
    }

    pub fn constant(c: BigInt, var: Variable) -> Self {
        Self::new(vec![c], var)
    }

    /// `c * X^k`
    pub fn monomial(c: BigInt, k: usize, var: Variable) -> Self {
        let mut coeffs = vec![BigInt::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs, var)
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    pub fn with_var(mut self, var: Variable) -> Self {
        self.var = var;
        self
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Largest `k` with `X^k` dividing the polynomial; `None` for zero.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// gcd of the coefficients (nonnegative; zero for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect(), self.var)
    }

    /// Shift by `X^k`.
    pub fn shl(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPolynomial { coeffs, var: self.var }
    }

    pub fn truncate(&self, len: usize) -> Self {
        Self::new(self.coeffs.iter().take(len).cloned().collect(), self.var)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// Composition `self(other(X))`, Horner style.
    pub fn compose(&self, other: &IntPolynomial) -> IntPolynomial {
        let mut acc = IntPolynomial::zero(other.var);
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * other) + &IntPolynomial::constant(c.clone(), other.var);
        }
        acc
    }

    /// Exact quotient `self / divisor`; errors if the division leaves a
    /// remainder or a non-integral coefficient.
    pub fn div_exact(&self, divisor: &IntPolynomial) -> Result<IntPolynomial> {
        let dd = divisor
            .degree()
            .ok_or_else(|| Error::InvalidParameter("division by the zero polynomial".into()))?;
        if self.is_zero() {
            return Ok(IntPolynomial::zero(self.var));
        }
        let lead = divisor.leading().expect("nonzero divisor");
        let mut rem = self.coeffs.clone();
        let n = rem.len();
        if n <= dd {
            return Err(Error::InvalidParameter("inexact polynomial division".into()));
        }
        let mut quot = vec![BigInt::zero(); n - dd];
        for i in (0..n - dd).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InvalidParameter("inexact polynomial division".into()));
            }
            for (j, d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    rem[i + j] -= &q * d;
                }
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InvalidParameter("inexact polynomial division".into()));
        }
        Ok(IntPolynomial::new(quot, self.var))
    }

    /// `(1 + X)^k` by the binomial theorem.
    pub fn one_plus_x_pow(k: usize, var: Variable) -> IntPolynomial {
        let mut coeffs = Vec::with_capacity(k + 1);
        let mut c = BigInt::one();
        coeffs.push(c.clone());
        for j in 1..=k {
            c = c * BigInt::from(k - j + 1) / BigInt::from(j);
            coeffs.push(c.clone());
        }
        IntPolynomial::new(coeffs, var)
    }

    /// Parse text such as `9*S^1 + 6*S^2 + 1*S^3`, `S^3 - 2*S`, or `4`.
    pub fn parse(text: &str, var: Variable) -> Result<IntPolynomial> {
        let terms = crate::groupring::parse_terms(text, var.symbol())?;
        let mut out = IntPolynomial::zero(var);
        for (coef, exp) in terms {
            let k = usize::try_from(&exp).map_err(|_| {
                Error::Parse(format!("negative or oversized exponent {exp} in a polynomial"))
            })?;
            out = &out + &IntPolynomial::monomial(coef, k, var);
        }
        Ok(out)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sym = self.var.symbol();
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| (c.clone(), BigInt::from(k)));
        crate::groupring::write_terms(f, terms, sym)
    }
}

impl<'a> Add<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|k| match (self.coeffs.get(k), rhs.coeffs.get(k)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        IntPolynomial::new(coeffs, self.var)
    }
}

impl<'a> Sub<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial { coeffs: self.coeffs.iter().map(|c| -c).collect(), var: self.var }
    }
}

impl<'a> Mul<&'a IntPolynomial> for &'a IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero(self.var);
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        IntPolynomial::new(coeffs, self.var)
    }
}

/// Minimum `ord_p` over the coefficients and the least index attaining it.
pub(crate) fn lambda_mu_of_coeffs(coeffs: &[BigInt], p: u64) -> Option<(u64, u64)> {
    let mut best: Option<(u64, u64)> = None;
    for (k, c) in coeffs.iter().enumerate() {
        if let Some(v) = crate::arith::valuation(c, p) {
            if best.map_or(true, |(_, m)| v < m) {
                best = Some((k as u64, v));
            }
        }
    }
    best
}
