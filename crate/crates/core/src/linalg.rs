//! Fraction-free Gaussian elimination over integral domains.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Result;
use crate::poly::{IntPolynomial, Variable};

/// The ring operations Bareiss elimination needs.
pub trait BareissRing: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn mul_elem(&self, rhs: &Self) -> Self;
    fn sub_elem(&self, rhs: &Self) -> Self;
    fn neg_elem(&self) -> Self;
    /// Exact quotient; the divisor is known to divide.
    fn div_exact_elem(&self, rhs: &Self) -> Result<Self>;
}

impl BareissRing for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn sub_elem(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_exact_elem(&self, rhs: &Self) -> Result<Self> {
        debug_assert!((self % rhs).is_zero());
        Ok(self / rhs)
    }
}

impl BareissRing for IntPolynomial {
    fn zero_like(&self) -> Self {
        IntPolynomial::zero(self.var())
    }
    fn one_like(&self) -> Self {
        IntPolynomial::constant(BigInt::one(), self.var())
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn mul_elem(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn sub_elem(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn neg_elem(&self) -> Self {
        -self
    }
    fn div_exact_elem(&self, rhs: &Self) -> Result<Self> {
        self.div_exact(rhs)
    }
}

/// Determinant of a square matrix by Bareiss elimination. Every
/// intermediate division is exact, so no fractions appear. The empty matrix
/// has determinant `one`.
pub fn bareiss_det<R: BareissRing>(mut m: Vec<Vec<R>>, one: R) -> Result<R> {
    let n = m.len();
    if n == 0 {
        return Ok(one);
    }
    debug_assert!(m.iter().all(|row| row.len() == n));
    let mut negate = false;
    let mut prev = one;
    for k in 0..n - 1 {
        if m[k][k].is_zero_elem() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero_elem()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return Ok(prev.zero_like()),
            }
        }
        let (top, bottom) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in bottom.iter_mut() {
            let factor = row[k].clone();
            for j in k + 1..n {
                let lhs = row[j].mul_elem(pivot);
                let num = if factor.is_zero_elem() { lhs } else { lhs.sub_elem(&factor.mul_elem(&pivot_row[j])) };
                row[j] = num.div_exact_elem(&prev)?;
            }
            row[k] = factor.zero_like();
        }
        prev = pivot.clone();
    }
    let det = m[n - 1][n - 1].clone();
    Ok(if negate { det.neg_elem() } else { det })
}

pub fn det_bigint(m: Vec<Vec<BigInt>>) -> BigInt {
    bareiss_det(m, BigInt::one()).expect("integer Bareiss divisions are exact")
}

pub fn det_polynomial(m: Vec<Vec<IntPolynomial>>, var: Variable) -> Result<IntPolynomial> {
    bareiss_det(m, IntPolynomial::constant(BigInt::one(), var))
}

/// Determinant by cofactor expansion along the first row. Exponential; for
/// cross-checking small cases only.
pub fn det_cofactor(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut acc = BigInt::zero();
    for j in 0..n {
        if m[0][j].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BigInt>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = &m[0][j] * det_cofactor(&minor);
        if j % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    acc
}
