//! Voltage graphs realizing prescribed Iwasawa invariants.
//!
//! Every construction is certified: the result's predicted invariants are
//! recomputed from its Laplacian and compared with the request.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factor_small, is_prime, pow_big, valuation};
use crate::error::{Error, Result};
use crate::graphs::VoltageGraph;
use crate::groupring::{GroupRingElement, IwasawaInvariants};
use crate::laplacian::{predicted_invariants, PredictOptions};
use crate::phi::phi_inverse_coords;
use crate::poly::{IntPolynomial, Variable};

/// Refuse to materialize graphs with more edges than this.
pub const MAX_EDGES: u64 = 1 << 20;

/// The three conditions on `h = Σ_a c_a γ^a` for it to be `h_α` of a bouquet
/// with connected tower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Condition {
    /// (a) the augmentation is zero.
    AugmentationZero,
    /// (b) every coefficient of `γ^a` with `a ≠ 0` is `≤ 0`.
    NonPositiveOffConstant,
    /// (c) some `γ^a` with `p ∤ a` has a nonzero coefficient.
    ExponentPrimeToP,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::AugmentationZero => "(a) augmentation is not zero",
            Condition::NonPositiveOffConstant => "(b) a coefficient of γ^a with a ≠ 0 is positive",
            Condition::ExponentPrimeToP => "(c) every exponent with nonzero coefficient is divisible by p",
        })
    }
}

/// The violated conditions, in order; empty iff admissible.
pub fn admissibility_violations(h: &GroupRingElement, p: u64) -> Vec<Condition> {
    let mut out = Vec::new();
    if !h.augmentation().is_zero() {
        out.push(Condition::AugmentationZero);
    }
    if h.terms().any(|(a, c)| !a.is_zero() && c.is_positive()) {
        out.push(Condition::NonPositiveOffConstant);
    }
    let pb = BigInt::from(p);
    if !h.terms().any(|(a, _)| !(a % &pb).is_zero()) {
        out.push(Condition::ExponentPrimeToP);
    }
    out
}

pub fn is_admissible(h: &GroupRingElement, p: u64) -> bool {
    admissibility_violations(h, p).is_empty()
}

/// The bouquet whose `h_α` is `h`: `-c_a` loops of voltage `a` for each
/// `a ≠ 0`, larger voltages first.
pub fn bouquet_for(h: &GroupRingElement, p: u64) -> Result<VoltageGraph> {
    let violations = admissibility_violations(h, p);
    if !violations.is_empty() {
        let list: Vec<String> = violations.iter().map(ToString::to_string).collect();
        return Err(Error::InvalidTarget(format!("not admissible: {}", list.join("; "))));
    }
    VoltageGraph::bouquet(p, &loop_voltages(&loop_counts_of(h))?)
}

/// `h_α = Σ_loops (1 − γ^{a})`.
pub fn h_alpha(loop_voltages: &[BigInt]) -> GroupRingElement {
    let mut h = GroupRingElement::zero();
    for a in loop_voltages {
        h = &h + &(&GroupRingElement::one() - &GroupRingElement::gamma_pow(a.clone()));
    }
    h
}

fn loop_counts_of(h: &GroupRingElement) -> BTreeMap<BigInt, BigInt> {
    h.terms().filter(|(a, _)| !a.is_zero()).map(|(a, c)| (a.clone(), -c)).collect()
}

fn loop_voltages(counts: &BTreeMap<BigInt, BigInt>) -> Result<Vec<BigInt>> {
    let total: BigInt = counts.values().sum();
    if total > BigInt::from(MAX_EDGES) {
        return Err(Error::Overflow(format!("{total} loops exceed the limit of {MAX_EDGES}")));
    }
    let mut out = Vec::new();
    for (a, c) in counts.iter().rev() {
        let c = c.to_usize().expect("bounded above");
        out.extend(std::iter::repeat(a.clone()).take(c));
    }
    Ok(out)
}

/// A certified voltage graph with the data it was built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Construction {
    pub graph: VoltageGraph,
    /// `k ↦ c_k`, the number of loops of voltage `k` at `v`.
    pub loop_counts: BTreeMap<BigInt, BigInt>,
    /// Edges `v → w` of voltage 0 (ramified constructions only).
    pub connecting_edges: u64,
    /// Sign `σ` of the target `σ p^μ S^{λ'}`.
    pub sign: i8,
    /// Whether the `p^{μ+1}(1 − γ)` repair was applied.
    pub repaired: bool,
    /// Prime factorization of the content of `Z_α` by trial division, with
    /// the unfactored cofactor; set by the `μ_l` construction.
    pub content_factors: Option<(Vec<(u64, u32)>, BigUint)>,
    pub predicted: IwasawaInvariants,
}

impl Construction {
    pub fn loop_total(&self) -> BigInt {
        self.loop_counts.values().sum()
    }

    pub fn h(&self) -> GroupRingElement {
        let mut terms: Vec<(BigInt, BigInt)> = Vec::new();
        for (k, c) in &self.loop_counts {
            terms.push((k.clone(), -c));
            terms.push((BigInt::zero(), c.clone()));
        }
        GroupRingElement::from_terms(terms)
    }
}

struct Candidate {
    counts: BTreeMap<BigInt, BigInt>,
    sign: i8,
    repaired: bool,
}

impl Candidate {
    fn total(&self) -> BigInt {
        self.counts.values().sum()
    }
}

/// Loop counts from `g = σ p^μ S^{λ'}`: `c_k = −[coordinate of γ^k − 1 in Φ^{-1}(g)]`,
/// reduced into `[0, p^{μ+1})`, plus `p^{μ+1}` loops of voltage 1 when no
/// remaining voltage is prime to `p`.
fn candidate(p: u64, lambda_prime: u64, mu: u64, sign: i8) -> Result<Candidate> {
    let modulus = pow_big(p, exp_u32(mu)? + 1);
    let lp = usize::try_from(lambda_prime).map_err(|_| Error::InvalidTarget("λ too large".into()))?;
    let g = IntPolynomial::monomial(pow_big(p, exp_u32(mu)?) * BigInt::from(sign), lp, Variable::S);
    let coords = phi_inverse_coords(&g)?;
    let mut counts = BTreeMap::new();
    for (k, x) in coords.iter().enumerate().skip(1) {
        let c = (-x).mod_floor(&modulus);
        if !c.is_zero() {
            counts.insert(BigInt::from(k), c);
        }
    }
    let pb = BigInt::from(p);
    let mut repaired = false;
    if !counts.keys().any(|k| !(k % &pb).is_zero()) {
        *counts.entry(BigInt::one()).or_insert_with(BigInt::zero) += &modulus;
        repaired = true;
    }
    Ok(Candidate { counts, sign, repaired })
}

fn pick(p: u64, lambda_prime: u64, mu: u64, minimize: bool) -> Result<Candidate> {
    let plus = candidate(p, lambda_prime, mu, 1)?;
    if !minimize {
        return Ok(plus);
    }
    let minus = candidate(p, lambda_prime, mu, -1)?;
    Ok(if minus.total() < plus.total() { minus } else { plus })
}

fn validate_p(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::InvalidTarget(format!("p = {p} is not prime")))
    }
}

fn certify(graph: &VoltageGraph, opts: &PredictOptions, lambda: u64, mu: u64) -> Result<IwasawaInvariants> {
    let predicted = predicted_invariants(graph, opts)?;
    if predicted.lambda != lambda || predicted.mu != mu {
        return Err(Error::CertificationFailed(format!(
            "built graph has (λ, μ) = ({}, {}), wanted ({lambda}, {mu})",
            predicted.lambda, predicted.mu
        )));
    }
    Ok(predicted)
}

/// A bouquet whose tower has invariants `(λ, μ)`; `λ` must be odd. With
/// `minimize`, both signs `σ = ±1` are tried and the one with fewer loops
/// wins (ties go to `σ = +1`).
pub fn construct_unramified(p: u64, lambda: u64, mu: u64, minimize: bool) -> Result<Construction> {
    validate_p(p)?;
    if lambda % 2 == 0 {
        return Err(Error::InvalidTarget(format!(
            "λ = {lambda} is even; an unramified tower over a bouquet has odd λ (use a ramified construction)"
        )));
    }
    let c = pick(p, (lambda + 1) / 2, mu, minimize)?;
    let graph = VoltageGraph::bouquet(p, &loop_voltages(&c.counts)?)?;
    let predicted = certify(&graph, &PredictOptions::default(), lambda, mu)?;
    Ok(Construction {
        graph,
        loop_counts: c.counts,
        connecting_edges: 0,
        sign: c.sign,
        repaired: c.repaired,
        content_factors: None,
        predicted,
    })
}

/// Unramified `v` with loops and a totally ramified `w` joined by `c` edges of
/// voltage 0; `λ` must be even. `λ = 0` uses no loops and `c = p^μ`;
/// otherwise the loops are those of the unramified construction for
/// `λ' = λ/2` and `c = p^{μ+1}`.
pub fn construct_ramified(p: u64, lambda: u64, mu: u64) -> Result<Construction> {
    validate_p(p)?;
    if lambda % 2 == 1 {
        return Err(Error::InvalidTarget(format!("λ = {lambda} is odd; this construction realizes even λ")));
    }
    let lambda_prime = lambda / 2;
    let (cand, c_exp) = if lambda_prime == 0 {
        (Candidate { counts: BTreeMap::new(), sign: 1, repaired: false }, mu)
    } else {
        (pick(p, lambda_prime, mu, true)?, mu + 1)
    };
    let connecting = p
        .checked_pow(exp_u32(c_exp)?)
        .filter(|&c| c <= MAX_EDGES)
        .ok_or_else(|| Error::Overflow(format!("{p}^{c_exp} connecting edges exceed the limit")))?;
    let graph = VoltageGraph::two_vertex_ramified(p, &loop_voltages(&cand.counts)?, connecting as usize)?;
    let predicted = certify(&graph, &PredictOptions::default(), lambda, mu)?;
    Ok(Construction {
        graph,
        loop_counts: cand.counts,
        connecting_edges: connecting,
        sign: cand.sign,
        repaired: cand.repaired,
        content_factors: None,
        predicted,
    })
}

/// A bouquet with invariants `(λ, μ_p)` and `μ_l = targets[l]` for each listed
/// prime `l ≠ p`. Primes outside the target map are left as they are; the
/// content factorization of `Z_α` is reported so every incidental `μ_l` is
/// visible.
pub fn construct_with_mu_l(
    p: u64,
    lambda: u64,
    mu_p: u64,
    targets: &BTreeMap<u64, u64>,
) -> Result<Construction> {
    validate_p(p)?;
    for &l in targets.keys() {
        if !is_prime(l) || l == p {
            return Err(Error::InvalidTarget(format!("μ_l target for {l}: must be a prime other than p")));
        }
    }
    let base = construct_unramified(p, lambda, mu_p, true)?;
    let content = base.loop_counts.values().fold(BigInt::zero(), |g, c| g.gcd(c));
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for (&l, &t) in targets {
        let e = valuation(&content, l).expect("nonzero content");
        let factor = pow_big(l, exp_u32(t.abs_diff(e))?);
        if t >= e {
            num *= factor;
        } else {
            den *= factor;
        }
    }
    let mut counts: BTreeMap<BigInt, BigInt> =
        base.loop_counts.iter().map(|(k, c)| (k.clone(), c * &num / &den)).collect();

    let mut repair = pow_big(p, exp_u32(mu_p + 1)?);
    for (&l, &t) in targets {
        repair *= pow_big(l, exp_u32(t + 1)?);
    }
    let opts = PredictOptions { mu_l_primes: targets.keys().copied().collect(), ..Default::default() };
    let pb = BigInt::from(p);
    let mut repaired = base.repaired;
    for attempt in 0..=2 {
        if counts.keys().any(|k| !(k % &pb).is_zero()) {
            let graph = VoltageGraph::bouquet(p, &loop_voltages(&counts)?)?;
            let predicted = predicted_invariants(&graph, &opts)?;
            let hits = predicted.lambda == lambda
                && predicted.mu == mu_p
                && targets.iter().all(|(l, t)| predicted.mu_l.get(l) == Some(t));
            if hits {
                let z = crate::laplacian::z_alpha(&graph)?;
                return Ok(Construction {
                    graph,
                    loop_counts: counts,
                    connecting_edges: 0,
                    sign: base.sign,
                    repaired,
                    content_factors: Some(content_factorization(&z, FACTOR_BOUND)),
                    predicted,
                });
            }
        }
        if attempt == 2 {
            break;
        }
        *counts.entry(BigInt::one()).or_insert_with(BigInt::zero) += &repair;
        repaired = true;
    }
    Err(Error::RepairFailed(format!(
        "targets (λ={lambda}, μ_p={mu_p}, μ_l={targets:?}) still violated after repairing with {repair}(1 − γ)"
    )))
}

/// Trial-division bound for reported content factorizations.
pub const FACTOR_BOUND: u64 = 1_000_000;

fn exp_u32(e: u64) -> Result<u32> {
    u32::try_from(e).map_err(|_| Error::InvalidTarget(format!("exponent {e} too large")))
}

/// Factorization of the content of `Z_α` by trial division up to `bound`,
/// with the unfactored cofactor.
pub fn content_factorization(z: &GroupRingElement, bound: u64) -> (Vec<(u64, u32)>, BigUint) {
    factor_small(z.content().magnitude(), bound)
}
