//! The integral group ring `Z[Γ]` of an infinite cyclic group with generator
//! `γ`, i.e. Laurent polynomials in `γ`, together with the identification
//! `γ = 1 + T` and the Iwasawa invariants read off from it.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::valuation;
use crate::error::{Error, Result};
use crate::poly::{lambda_mu_of_coeffs, IntPolynomial, Variable};

/// A finitely supported integer combination `Σ c_a γ^a`. Zero coefficients
/// are never stored, so structural equality is ring equality.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    terms: BTreeMap<BigInt, BigInt>,
}

/// Iwasawa invariants of a tower (or of a single element, with `nu` unset).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IwasawaInvariants {
    pub lambda: u64,
    pub mu: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu: Option<i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub mu_l: BTreeMap<u64, u64>,
}

impl IwasawaInvariants {
    pub fn new(lambda: u64, mu: u64) -> Self {
        IwasawaInvariants { lambda, mu, ..Default::default() }
    }
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(BigInt::one(), BigInt::zero())
    }

    /// `c γ^a`
    pub fn monomial(c: BigInt, a: BigInt) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(a, c);
        }
        GroupRingElement { terms }
    }

    /// `γ^a`
    pub fn gamma_pow(a: impl Into<BigInt>) -> Self {
        Self::monomial(BigInt::one(), a.into())
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::monomial(c.into(), BigInt::zero())
    }

    /// Build from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I, A, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (A, C)>,
        A: Into<BigInt>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (a, c) in terms {
            out.add_term(a.into(), c.into());
        }
        out
    }

    fn add_term(&mut self, a: BigInt, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(a) {
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += c;
                if slot.get().is_zero() {
                    slot.remove();
                }
            }
            Entry::Vacant(slot) => {
                slot.insert(c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &BigInt)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: &BigInt) -> BigInt {
        self.terms.get(a).cloned().unwrap_or_default()
    }

    pub fn min_exponent(&self) -> Option<&BigInt> {
        self.terms.keys().next()
    }

    pub fn max_exponent(&self) -> Option<&BigInt> {
        self.terms.keys().next_back()
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        GroupRingElement { terms: self.terms.iter().map(|(a, x)| (a.clone(), x * c)).collect() }
    }

    /// Multiply by the unit `γ^k`.
    pub fn shift(&self, k: &BigInt) -> Self {
        GroupRingElement { terms: self.terms.iter().map(|(a, x)| (a + k, x.clone())).collect() }
    }

    /// The involution inverting every group element.
    pub fn iota(&self) -> Self {
        GroupRingElement { terms: self.terms.iter().map(|(a, c)| (-a, c.clone())).collect() }
    }

    /// Sum of the coefficients.
    pub fn augmentation(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// gcd of all coefficients (zero for the zero element).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Write `x = γ^m · P(γ - 1)` and return `(P(T), m)`, where `m` is the least
    /// exponent present or 0, whichever is smaller. Elements of `Z[γ]` keep
    /// their own `T`-expansion.
    pub fn to_t_polynomial(&self) -> Result<(IntPolynomial, BigInt)> {
        let m = self.min_exponent().ok_or(Error::ZeroElement)?.clone().min(BigInt::zero());
        let top = self.max_exponent().expect("nonzero") - &m;
        let top = top
            .to_usize()
            .ok_or_else(|| Error::Overflow(format!("exponent span {top} too large")))?;
        // Horner in (1 + T) over the dense exponent range.
        let one_plus_t = IntPolynomial::from_i64(&[1, 1], Variable::T);
        let mut acc = IntPolynomial::zero(Variable::T);
        for j in (0..=top).rev() {
            acc = &acc * &one_plus_t;
            let c = self.coeff(&(&m + BigInt::from(j)));
            if !c.is_zero() {
                acc = &acc + &IntPolynomial::constant(c, Variable::T);
            }
        }
        Ok((acc, m))
    }

    /// Inverse of [`to_t_polynomial`](Self::to_t_polynomial): `γ^shift · P(γ - 1)`.
    pub fn from_t_polynomial(poly: &IntPolynomial, shift: &BigInt) -> Self {
        let gamma_minus_one = GroupRingElement::from_terms([(1, 1), (0, -1)]);
        let mut acc = GroupRingElement::zero();
        for c in poly.coeffs().iter().rev() {
            acc = &(&acc * &gamma_minus_one) + &GroupRingElement::from_int(c.clone());
        }
        acc.shift(shift)
    }

    /// `(λ, μ)` of the element viewed in `Z_p[[T]]`.
    pub fn iwasawa_invariants(&self, p: u64) -> Result<(u64, u64)> {
        let (poly, _) = self.to_t_polynomial()?;
        Ok(lambda_mu_of_coeffs(poly.coeffs(), p).expect("nonzero polynomial"))
    }

    /// Largest `e` with every coefficient divisible by `l^e`.
    pub fn mu_l(&self, l: u64) -> Result<u64> {
        if self.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(valuation(&self.content(), l).expect("nonzero content"))
    }
}

impl<'a> Add<&'a GroupRingElement> for &'a GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (a, c) in &rhs.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a GroupRingElement> for &'a GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, rhs: &GroupRingElement) -> GroupRingElement {
        self + &(-rhs)
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        GroupRingElement { terms: self.terms.iter().map(|(a, c)| (a.clone(), -c)).collect() }
    }
}

impl<'a> Mul<&'a GroupRingElement> for &'a GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, rhs: &GroupRingElement) -> GroupRingElement {
        let mut acc: BTreeMap<BigInt, BigInt> = BTreeMap::new();
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                *acc.entry(a + b).or_insert_with(BigInt::zero) += x * y;
            }
        }
        acc.retain(|_, c| !c.is_zero());
        GroupRingElement { terms: acc }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr<GroupRingElement> for GroupRingElement {
            type Output = GroupRingElement;
            fn $m(self, rhs: GroupRingElement) -> GroupRingElement {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        -&self
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms.iter().map(|(a, c)| (c.clone(), a.clone())), "g")
    }
}

impl FromStr for GroupRingElement {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(GroupRingElement::from_terms(
            parse_terms(s, "g")?.into_iter().map(|(c, a)| (a, c)),
        ))
    }
}

/// Shared renderer: `-1*g^-1 + 2 - 1*g^1`. Terms arrive as
/// `(coefficient, exponent)` sorted by exponent; exponent 0 prints bare.
pub(crate) fn write_terms(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (BigInt, BigInt)>,
    sym: &str,
) -> fmt::Result {
    let mut first = true;
    for (c, a) in terms {
        let body_coeff = if first {
            c.clone()
        } else {
            f.write_str(if c.is_negative() { " - " } else { " + " })?;
            c.abs()
        };
        if a.is_zero() {
            write!(f, "{body_coeff}")?;
        } else {
            write!(f, "{body_coeff}*{sym}^{a}")?;
        }
        first = false;
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// Parse a signed sum of terms `c`, `c*X^a`, `X^a`, `c*X`, `X` into
/// `(coefficient, exponent)` pairs. Whitespace is ignored. For the group-ring
/// symbol `g`, `γ` is accepted as an alias.
pub(crate) fn parse_terms(text: &str, sym: &str) -> Result<Vec<(BigInt, BigInt)>> {
    let cleaned: String = text
        .chars()
        .filter(|c| !c.is_whitespace())
        .collect::<String>()
        .replace('γ', "g");
    let chars: Vec<char> = cleaned.chars().collect();
    let sym: Vec<char> = sym.chars().collect();
    if chars.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let err = |pos: usize, what: &str| Error::Parse(format!("{what} at column {}", pos + 1));
    let mut out = Vec::new();
    let mut i = 0;
    let read_int = |i: &mut usize| -> Option<BigInt> {
        let start = *i;
        while *i < chars.len() && chars[*i].is_ascii_digit() {
            *i += 1;
        }
        (start < *i).then(|| chars[start..*i].iter().collect::<String>().parse().unwrap())
    };
    let at_sym = |i: usize| chars[i..].starts_with(&sym);
    while i < chars.len() {
        let mut sign = BigInt::one();
        if !out.is_empty() || chars[i] == '-' || chars[i] == '+' {
            match chars.get(i) {
                Some('+') => i += 1,
                Some('-') => {
                    sign = -sign;
                    i += 1
                }
                _ => return Err(err(i, "expected '+' or '-'")),
            }
        }
        if i >= chars.len() {
            return Err(err(i, "dangling sign"));
        }
        let coeff = read_int(&mut i);
        let has_var = if coeff.is_some() {
            if chars.get(i) == Some(&'*') {
                i += 1;
                if i >= chars.len() || !at_sym(i) {
                    return Err(err(i, "expected variable after '*'"));
                }
                true
            } else {
                false
            }
        } else if i < chars.len() && at_sym(i) {
            true
        } else {
            return Err(err(i, "expected a number or variable"));
        };
        let mut exp = BigInt::zero();
        if has_var {
            i += sym.len();
            exp = BigInt::one();
            if chars.get(i) == Some(&'^') {
                i += 1;
                let neg = chars.get(i) == Some(&'-');
                if neg {
                    i += 1;
                }
                let e = read_int(&mut i).ok_or_else(|| err(i, "expected exponent"))?;
                exp = if neg { -e } else { e };
            }
        }
        out.push((sign * coeff.unwrap_or_else(BigInt::one), exp));
    }
    Ok(out)
}
