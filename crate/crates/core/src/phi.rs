//! The change of variable `S = T + ι(T)`.
//!
//! For `h` in `Z[[T]]` the element `h + ι(h)` is `ι`-invariant and therefore a
//! power series in `S`; `Φ(h)` is that series. `Φ` is additive, sends
//! `T·Z[T]` isomorphically onto `S·Z[S]`, and reads off the invariants of
//! `h + ι(h)` as `λ = 2 λ_S(Φ(h))`, `μ = μ_S(Φ(h))`.

use std::collections::BTreeMap;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::is_prime;
use crate::error::{Error, Result};
use crate::groupring::GroupRingElement;
use crate::poly::{lambda_mu_of_coeffs, IntPolynomial, Variable};

/// Grow-only tables of `Φ(T^k)` and `Φ((1+T)^k - 1)`.
#[derive(Debug, Default)]
pub struct PhiBasisCache {
    basis_t: RwLock<Vec<IntPolynomial>>,
    basis_cyc: RwLock<Vec<IntPolynomial>>,
}

fn s_poly(c: &[i64]) -> IntPolynomial {
    IntPolynomial::from_i64(c, Variable::S)
}

impl PhiBasisCache {
    pub fn new() -> Self {
        Self::default()
    }

    /// Process-wide cache.
    pub fn shared() -> &'static PhiBasisCache {
        static CACHE: OnceLock<PhiBasisCache> = OnceLock::new();
        CACHE.get_or_init(PhiBasisCache::new)
    }

    /// `Φ(T^k)`: `2`, `S`, then `S·(g_{k-1} + g_{k-2})`.
    pub fn basis_t(&self, k: usize) -> IntPolynomial {
        if let Some(p) = self.basis_t.read().unwrap().get(k) {
            return p.clone();
        }
        let mut table = self.basis_t.write().unwrap();
        let s = s_poly(&[0, 1]);
        while table.len() <= k {
            let next = match table.len() {
                0 => s_poly(&[2]),
                1 => s.clone(),
                n => &s * &(&table[n - 1] + &table[n - 2]),
            };
            table.push(next);
        }
        table[k].clone()
    }

    /// `Φ((1+T)^k - 1)`: `0`, `S`, then `(S+2)·g_{k-1} - g_{k-2} + 2S`.
    pub fn basis_cyc(&self, k: usize) -> IntPolynomial {
        if let Some(p) = self.basis_cyc.read().unwrap().get(k) {
            return p.clone();
        }
        let mut table = self.basis_cyc.write().unwrap();
        let s_plus_2 = s_poly(&[2, 1]);
        let two_s = s_poly(&[0, 2]);
        while table.len() <= k {
            let next = match table.len() {
                0 => IntPolynomial::zero(Variable::S),
                1 => s_poly(&[0, 1]),
                n => &(&(&s_plus_2 * &table[n - 1]) - &table[n - 2]) + &two_s,
            };
            table.push(next);
        }
        table[k].clone()
    }
}

pub fn phi_basis_t(k: usize) -> IntPolynomial {
    PhiBasisCache::shared().basis_t(k)
}

pub fn phi_basis_cyc(k: usize) -> IntPolynomial {
    PhiBasisCache::shared().basis_cyc(k)
}

fn exponent_index(a: &BigInt) -> Result<usize> {
    a.abs()
        .to_usize()
        .ok_or_else(|| Error::Overflow(format!("exponent {a} too large for the Φ basis")))
}

/// `Φ(h)` for `h` of augmentation zero.
///
/// Writes `h = Σ c_a (γ^a - 1)` and sums `c_a · Φ((1+T)^{|a|} - 1)`; the sign of
/// `a` is irrelevant because `Φ ∘ ι = Φ`.
pub fn phi_forward(h: &GroupRingElement) -> Result<IntPolynomial> {
    if !h.augmentation().is_zero() {
        return Err(Error::NotAugmentationZero);
    }
    let cache = PhiBasisCache::shared();
    let mut out = IntPolynomial::zero(Variable::S);
    for (a, c) in h.terms() {
        if a.is_zero() {
            continue;
        }
        out = &out + &cache.basis_cyc(exponent_index(a)?).scale(c);
    }
    Ok(out)
}

/// Coordinates `c_k` (index `k`, `c_0 = 0`) of the unique `h = Σ_{k≥1} c_k (γ^k - 1)`
/// with `Φ(h) = g`, by back-substitution against the monic basis.
pub fn phi_inverse_coords(g: &IntPolynomial) -> Result<Vec<BigInt>> {
    if !g.coeff(0).is_zero() {
        return Err(Error::NotAugmentationZero);
    }
    let cache = PhiBasisCache::shared();
    let Some(deg) = g.degree() else {
        return Ok(vec![BigInt::zero()]);
    };
    let mut rest = g.clone().with_var(Variable::S);
    let mut coords = vec![BigInt::zero(); deg + 1];
    for k in (1..=deg).rev() {
        let c = rest.coeff(k);
        if c.is_zero() {
            continue;
        }
        rest = &rest - &cache.basis_cyc(k).scale(&c);
        coords[k] = c;
    }
    debug_assert!(rest.is_zero());
    Ok(coords)
}

/// The unique `h ∈ T·Z[T]` with `Φ(h) = g`.
pub fn phi_inverse(g: &IntPolynomial) -> Result<GroupRingElement> {
    let coords = phi_inverse_coords(g)?;
    let mut terms = Vec::new();
    for (k, c) in coords.into_iter().enumerate().skip(1) {
        if !c.is_zero() {
            terms.push((BigInt::from(k), c.clone()));
            terms.push((BigInt::zero(), -c));
        }
    }
    Ok(GroupRingElement::from_terms(terms))
}

/// `(λ_S, μ_S)` of a polynomial in `S`.
pub fn invariants_via_phi(g: &IntPolynomial, p: u64) -> Result<(u64, u64)> {
    lambda_mu_of_coeffs(g.coeffs(), p).ok_or(Error::ZeroElement)
}

/// Outcome bucket of one random draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SampleBucket {
    /// `μ_S = 0` and `λ_S = λ'` with `1 ≤ λ' ≤ cap`.
    Lambda(u64),
    /// `λ_S` beyond the cap, or `μ_S > 0`.
    Overflow,
}

/// Empirical distribution of `λ_S(Φ(h))` for random `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct LambdaSample {
    pub p: u64,
    pub cap: u64,
    pub trials: u64,
    pub counts: BTreeMap<SampleBucket, u64>,
    /// Draws with `μ_S > 0` (a subset of the overflow bucket).
    pub mu_positive: u64,
}

impl LambdaSample {
    pub fn frequency(&self, bucket: SampleBucket) -> f64 {
        self.counts.get(&bucket).copied().unwrap_or(0) as f64 / self.trials as f64
    }

    pub fn frequencies(&self) -> BTreeMap<SampleBucket, f64> {
        self.counts.keys().map(|&b| (b, self.frequency(b))).collect()
    }

    pub fn mu_positive_frequency(&self) -> f64 {
        self.mu_positive as f64 / self.trials as f64
    }

    /// `(1/p^{λ'-1})(1 - 1/p)`.
    pub fn expected_frequency(p: u64, lambda_prime: u64) -> f64 {
        let p = p as f64;
        p.powi(1 - lambda_prime as i32) * (1.0 - 1.0 / p)
    }
}

/// Draw `trials` elements `h = Σ_{k=1}^{degree} a_k T^k` with `a_k` uniform in
/// `[0, p^precision)` and tabulate `λ_S(Φ(h))`.
pub fn sample_lambda_distribution(
    p: u64,
    lambda_prime_max: u64,
    trials: u64,
    degree: usize,
    precision: u32,
    seed: u64,
) -> Result<LambdaSample> {
    let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
    if !is_prime(p) {
        return bad("p must be prime");
    }
    if trials == 0 {
        return bad("trials must be at least 1");
    }
    if lambda_prime_max == 0 || (degree as u64) < lambda_prime_max {
        return bad("need 1 <= lambda-prime-max <= degree");
    }
    if precision < 2 {
        return bad("precision must be at least 2");
    }
    let modulus = match p.checked_pow(precision) {
        Some(m) if m < 1 << 62 => m,
        _ => return bad("p^precision must stay below 2^62"),
    };
    let m_big = BigInt::from(modulus);
    let reduce = |c: &BigInt| -> u64 {
        let r = c % &m_big;
        let r = if r.is_negative() { r + &m_big } else { r };
        r.to_u64().expect("reduced")
    };
    // basis[k][j] = coefficient of S^j in Φ(T^k), mod p^R.
    let basis: Vec<Vec<u64>> = (0..=degree)
        .map(|k| phi_basis_t(k).coeffs().iter().map(reduce).collect())
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = BTreeMap::new();
    let mut mu_positive = 0;
    let mut g = vec![0u64; degree + 1];
    for _ in 0..trials {
        g.iter_mut().for_each(|c| *c = 0);
        for row in basis.iter().skip(1) {
            let a = rng.gen_range(0..modulus);
            if a == 0 {
                continue;
            }
            for (j, b) in row.iter().enumerate() {
                g[j] = ((g[j] as u128 + a as u128 * *b as u128) % modulus as u128) as u64;
            }
        }
        let bucket = match g.iter().position(|&c| c % p != 0) {
            Some(k) if (k as u64) <= lambda_prime_max => SampleBucket::Lambda(k as u64),
            Some(_) => SampleBucket::Overflow,
            None => {
                mu_positive += 1;
                SampleBucket::Overflow
            }
        };
        *counts.entry(bucket).or_insert(0) += 1;
    }
    Ok(LambdaSample { p, cap: lambda_prime_max, trials, counts, mu_positive })
}
