//! Exact spanning-tree counts of derived graphs and the fit of
//! `ord_p κ_n = μ p^n + λ n + ν` to their `p`-adic valuations.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod_prime, mul_mod, valuation, word_primes};
use crate::error::{Error, Result};
use crate::graphs::{derived_graph, tower_is_connected, MultiGraph, VoltageGraph};
use crate::groupring::IwasawaInvariants;
use crate::laplacian::{predicted_invariants, PredictOptions};
use crate::linalg::det_bigint;

/// Order above which determinants switch from BigInt Bareiss to
/// multi-modular elimination.
pub const DEFAULT_CRT_THRESHOLD: usize = 64;

/// Reduced Laplacian (last row and column removed) with loops dropped.
pub fn kirchhoff_minor(g: &MultiGraph) -> Vec<Vec<i64>> {
    let n = g.vertex_count();
    let mut m = vec![vec![0i64; n]; n];
    for e in g.edges().iter().filter(|e| !e.is_loop()) {
        m[e.from][e.from] += 1;
        m[e.to][e.to] += 1;
        m[e.from][e.to] -= 1;
        m[e.to][e.from] -= 1;
    }
    m.truncate(n.saturating_sub(1));
    for row in &mut m {
        row.truncate(n - 1);
    }
    m
}

/// Number of spanning trees (0 for a disconnected graph).
pub fn spanning_tree_count(g: &MultiGraph) -> Result<BigUint> {
    spanning_tree_count_with(g, DEFAULT_CRT_THRESHOLD)
}

pub fn spanning_tree_count_with(g: &MultiGraph, crt_threshold: usize) -> Result<BigUint> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let minor = kirchhoff_minor(g);
    let det = if minor.len() <= crt_threshold { det_exact(&minor) } else { det_multimodular(&minor) };
    det.to_biguint().ok_or_else(|| Error::CertificationFailed("negative tree count".into()))
}

pub fn det_exact(m: &[Vec<i64>]) -> BigInt {
    det_bigint(m.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

/// `log2` of the Hadamard bound `Π_i ‖row_i‖`.
fn hadamard_log2(m: &[Vec<i64>]) -> f64 {
    m.iter()
        .map(|row| {
            let s: f64 = row.iter().map(|&x| (x as f64) * (x as f64)).sum();
            if s == 0.0 { 0.0 } else { 0.5 * s.log2() }
        })
        .sum()
}

/// Determinant from residues modulo enough 62-bit primes to exceed twice the
/// Hadamard bound, recombined by CRT into the symmetric range.
pub fn det_multimodular(m: &[Vec<i64>]) -> BigInt {
    if m.is_empty() {
        return BigInt::one();
    }
    // Primes exceed 2^61; one extra bit covers the sign, one more the float slack.
    let bits = hadamard_log2(m).ceil() as usize + 2;
    let count = bits / 61 + 1;
    let primes = word_primes(count);
    let residues: Vec<u64> = primes.par_iter().map(|&q| det_mod(m, q)).collect();
    let mut value = BigInt::zero();
    let mut modulus = BigInt::one();
    for (&q, &r) in primes.iter().zip(&residues) {
        let qb = BigInt::from(q);
        let cur = (&value % &qb + &qb) % &qb;
        let cur = cur.to_u64().expect("reduced");
        let diff = (r + q - cur) % q;
        let m_inv = inv_mod_prime((&modulus % &qb).to_u64().expect("reduced"), q);
        let t = mul_mod(diff, m_inv, q);
        value += &modulus * BigInt::from(t);
        modulus *= qb;
    }
    let half = &modulus >> 1;
    if value > half {
        value -= modulus;
    }
    value
}

/// Determinant modulo a prime by Gaussian elimination, skipping zero entries
/// of the pivot row and column.
pub fn det_mod(m: &[Vec<i64>], q: u64) -> u64 {
    let n = m.len();
    let qi = q as i128;
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|row| row.iter().map(|&x| ((x as i128).rem_euclid(qi)) as u64).collect())
        .collect();
    let mut det = 1u64;
    let mut cols = Vec::with_capacity(n);
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else {
            return 0;
        };
        if piv != k {
            a.swap(k, piv);
            det = (q - det) % q;
        }
        let pk = a[k][k];
        det = mul_mod(det, pk, q);
        let inv = inv_mod_prime(pk, q);
        cols.clear();
        cols.extend((k + 1..n).filter(|&j| a[k][j] != 0));
        let (top, bottom) = a.split_at_mut(k + 1);
        let pivot_row = &top[k];
        for row in bottom.iter_mut() {
            if row[k] == 0 {
                continue;
            }
            let f = mul_mod(row[k], inv, q);
            for &j in &cols {
                let sub = mul_mod(f, pivot_row[j], q);
                row[j] = if row[j] >= sub { row[j] - sub } else { row[j] + q - sub };
            }
            row[k] = 0;
        }
    }
    det
}

/// Largest `k` with `p^k ≤ 2^62`, and `p^k`.
fn word_prime_power(p: u64) -> (u32, u64) {
    let mut k = 0;
    let mut q = 1u64;
    while let Some(next) = q.checked_mul(p).filter(|&x| x <= 1 << 62) {
        q = next;
        k += 1;
    }
    (k, q)
}

/// Inverse of a unit modulo `q`.
fn inv_mod(a: u64, q: u64) -> u64 {
    let g = (a as i128).extended_gcd(&(q as i128));
    debug_assert_eq!(g.gcd, 1);
    g.x.rem_euclid(q as i128) as u64
}

/// `ord_p det m` by elimination over `Z/p^k` with `p^k` near `2^62`.
///
/// Pivots are entries of least valuation in the remaining block, so every
/// multiplier is `p`-integral and the Schur complements stay exact modulo
/// `p^k`. `None` when the block vanishes modulo `p^k` before elimination
/// ends, i.e. the valuation is at least `k` (or the determinant is zero).
pub fn det_valuation(m: &[Vec<i64>], p: u64) -> Option<u64> {
    let n = m.len();
    let (k, q) = word_prime_power(p);
    let qi = q as i128;
    let mut a: Vec<Vec<u64>> = m
        .iter()
        .map(|row| row.iter().map(|&x| ((x as i128).rem_euclid(qi)) as u64).collect())
        .collect();
    let val = |x: u64| -> u32 {
        let (mut x, mut v) = (x, 0);
        while x % p == 0 {
            x /= p;
            v += 1;
        }
        v
    };
    let mut total = 0u64;
    let mut cols = Vec::with_capacity(n);
    for c in 0..n {
        // A unit in the current column is the common case and needs no search.
        let (r, pc, v) = match (c..n).find(|&i| a[i][c] % p != 0) {
            Some(r) => (r, c, 0),
            None => {
                let mut best: Option<(usize, usize, u32)> = None;
                'scan: for (i, row) in a.iter().enumerate().skip(c) {
                    for (j, &x) in row.iter().enumerate().skip(c) {
                        if x != 0 {
                            let v = val(x);
                            if best.is_none_or(|b| v < b.2) {
                                best = Some((i, j, v));
                                // Other columns may still hold units.
                                if v == 0 {
                                    break 'scan;
                                }
                            }
                        }
                    }
                }
                best?
            }
        };
        if v >= k {
            return None;
        }
        a.swap(c, r);
        if pc != c {
            for row in a.iter_mut() {
                row.swap(c, pc);
            }
        }
        total += v as u64;
        let pv = p.pow(v);
        let inv = inv_mod(a[c][c] / pv, q);
        cols.clear();
        cols.extend((c + 1..n).filter(|&j| a[c][j] != 0));
        let (top, bottom) = a.split_at_mut(c + 1);
        let pivot_row = &top[c];
        for row in bottom.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            // row[c] / p^v is only meaningful mod p^{k-v}; pivot-row entries
            // carry p^v, so each product is exact mod p^k.
            let f = mul_mod(row[c] / pv, inv, q);
            for &j in &cols {
                let sub = mul_mod(f, pivot_row[j], q);
                row[j] = if row[j] >= sub { row[j] - sub } else { row[j] + q - sub };
            }
            row[c] = 0;
        }
    }
    Some(total)
}

/// `ord_p κ(g)` without forming `κ` when the valuation fits in a word-sized
/// prime power; falls back to the exact count otherwise. `None` if `κ = 0`.
pub fn tree_count_valuation(g: &MultiGraph, p: u64) -> Result<Option<u64>> {
    if g.vertex_count() == 0 {
        return Err(Error::EmptyGraph);
    }
    let minor = kirchhoff_minor(g);
    if let Some(v) = det_valuation(&minor, p) {
        return Ok(Some(v));
    }
    let kappa = spanning_tree_count(g)?;
    Ok(valuation(&BigInt::from_biguint(Sign::Plus, kappa), p))
}

/// `(n, ord_p κ_n)` for `n = 0..=up_to`.
pub fn valuation_sequence(vg: &VoltageGraph, up_to: u32) -> Result<Vec<(u32, u64)>> {
    let conn = tower_is_connected(vg, up_to)?;
    if let Some(level) = conn.first_failure {
        return Err(Error::DisconnectedTower { level });
    }
    (0..=up_to)
        .into_par_iter()
        .map(|n| {
            let d = derived_graph(vg, n)?;
            let v = tree_count_valuation(&d.graph, vg.p())?.ok_or(Error::DisconnectedTower { level: n })?;
            Ok((n, v))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaRow {
    pub n: u32,
    #[serde(with = "biguint_string")]
    pub kappa: BigUint,
    pub ord_p: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KappaSequence {
    pub p: u64,
    pub rows: Vec<KappaRow>,
}

impl KappaSequence {
    pub fn ords(&self) -> Vec<u64> {
        self.rows.iter().map(|r| r.ord_p).collect()
    }
}

mod biguint_string {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(serde::de::Error::custom)
    }
}

/// `κ_n` and `ord_p κ_n` for `n = 0..=up_to`, levels computed in parallel.
pub fn kappa_sequence(vg: &VoltageGraph, up_to: u32) -> Result<KappaSequence> {
    let conn = tower_is_connected(vg, up_to)?;
    if let Some(level) = conn.first_failure {
        return Err(Error::DisconnectedTower { level });
    }
    let rows = (0..=up_to)
        .into_par_iter()
        .map(|n| {
            let d = derived_graph(vg, n)?;
            let kappa = spanning_tree_count(&d.graph)?;
            let ord_p = valuation(&BigInt::from_biguint(Sign::Plus, kappa.clone()), vg.p())
                .ok_or(Error::DisconnectedTower { level: n })?;
            Ok(KappaRow { n, kappa, ord_p })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(KappaSequence { p: vg.p(), rows })
}

/// Result of fitting `ord_p κ_n = μ p^n + λ n + ν` on a tail `n ≥ n0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fit {
    pub lambda: u64,
    pub mu: u64,
    pub nu: i64,
    /// First level from which every row obeys the formula.
    pub n0: u32,
    /// Number of rows (from the top) obeying the formula.
    pub support: usize,
}

fn law(p: &BigInt, lambda: &BigInt, mu: &BigInt, nu: &BigInt, n: u32) -> BigInt {
    mu * num_traits::pow(p.clone(), n as usize) + lambda * BigInt::from(n) + nu
}

fn to_fit(lambda: &BigInt, mu: &BigInt, nu: &BigInt, n0: u32, support: usize) -> Result<Fit> {
    let conv = |x: &BigInt, what: &str| x.to_u64().ok_or_else(|| Error::NonIntegralFit(format!("{what} = {x} out of range")));
    Ok(Fit {
        lambda: conv(lambda, "λ")?,
        mu: conv(mu, "μ")?,
        nu: nu.to_i64().ok_or_else(|| Error::NonIntegralFit(format!("ν = {nu} out of range")))?,
        n0,
        support,
    })
}

/// Fit the invariants to `(n, ord_p κ_n)` rows (at least four, consecutive
/// levels not required).
///
/// The last three rows determine `(λ, μ, ν)` uniquely over Q. When that
/// solution is a nonnegative integer pair it is accepted, and `n0` is the
/// first level of the maximal suffix obeying it. Otherwise the last two rows
/// are tried alone: with `d = o_N − o_{N−1}` and `k = p^N − p^{N−1}`, the
/// only nonnegative solutions are `λ = d − μ k`, so `d < k` forces `μ = 0`.
pub fn fit_invariants(seq: &KappaSequence) -> Result<Fit> {
    let rows: Vec<(u32, u64)> = seq.rows.iter().map(|r| (r.n, r.ord_p)).collect();
    fit_valuations(seq.p, &rows)
}

/// [`fit_invariants`] on bare `(n, ord_p κ_n)` rows.
pub fn fit_valuations(p: u64, rows: &[(u32, u64)]) -> Result<Fit> {
    if rows.len() < 4 {
        return Err(Error::InvalidParameter("fitting needs at least four levels".into()));
    }
    let p = BigInt::from(p);
    let pt = |i: usize| (rows[i].0, BigInt::from(rows[i].1));
    let last = rows.len() - 1;

    if let Some((lambda, mu, nu)) = solve_three(&p, [pt(last - 2), pt(last - 1), pt(last)]) {
        if !lambda.is_negative() && !mu.is_negative() {
            let support = rows
                .iter()
                .rev()
                .take_while(|&&(n, o)| law(&p, &lambda, &mu, &nu, n) == BigInt::from(o))
                .count();
            return to_fit(&lambda, &mu, &nu, rows[rows.len() - support].0, support);
        }
    }

    let (n1, o1) = pt(last - 1);
    let (n2, o2) = pt(last);
    let d = &o2 - &o1;
    let k = num_traits::pow(p.clone(), n2 as usize) - num_traits::pow(p.clone(), n1 as usize);
    let dn = BigInt::from(n2 - n1);
    if d.is_negative() {
        return Err(Error::InconsistentTail(format!("ord_p κ decreases from level {n1} to {n2}")));
    }
    if d < k && (&d % &dn).is_zero() {
        let lambda = &d / &dn;
        let nu = &o2 - &lambda * BigInt::from(n2);
        let mu = BigInt::zero();
        return to_fit(&lambda, &mu, &nu, n1, 2);
    }
    Err(Error::NonIntegralFit(format!(
        "last three levels give no nonnegative integral (λ, μ) and the last two do not determine one uniquely (rows end {:?})",
        rows.iter().rev().take(4).map(|r| r.1).collect::<Vec<_>>()
    )))
}

/// Solve `μ p^n + λ n + ν = o` at three levels by Cramer's rule; `None` if the
/// solution is not integral.
fn solve_three(p: &BigInt, pts: [(u32, BigInt); 3]) -> Option<(BigInt, BigInt, BigInt)> {
    let rows: Vec<[BigInt; 3]> = pts
        .iter()
        .map(|(n, _)| [BigInt::from(*n), num_traits::pow(p.clone(), *n as usize), BigInt::one()])
        .collect();
    let rhs: Vec<&BigInt> = pts.iter().map(|(_, o)| o).collect();
    let det3 = |m: &[[BigInt; 3]]| {
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    };
    let d = det3(&rows);
    if d.is_zero() {
        return None;
    }
    let replaced = |col: usize| {
        let mut m = rows.clone();
        for (i, row) in m.iter_mut().enumerate() {
            row[col] = rhs[i].clone();
        }
        det3(&m)
    };
    let mut out = Vec::with_capacity(3);
    for col in 0..3 {
        let (q, r) = replaced(col).div_rem(&d);
        if !r.is_zero() {
            return None;
        }
        out.push(q);
    }
    let nu = out.pop()?;
    let mu = out.pop()?;
    let lambda = out.pop()?;
    Some((lambda, mu, nu))
}

/// Predicted invariants next to the fitted ones for the same graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub rows: Vec<KappaRow>,
    pub predicted: IwasawaInvariants,
    pub fitted: Option<Fit>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_error: Option<String>,
    pub pass: bool,
}

/// Count trees through level `up_to` (at least 3, so four rows), fit, and
/// compare with the Laplacian prediction on `λ` and `μ`.
pub fn verify(vg: &VoltageGraph, up_to: u32) -> Result<VerifyReport> {
    if up_to < 3 {
        return Err(Error::InvalidParameter("verification needs levels 0..=3 at least".into()));
    }
    let seq = kappa_sequence(vg, up_to)?;
    let predicted = predicted_invariants(vg, &PredictOptions::default())?;
    let (fitted, fit_error) = match fit_invariants(&seq) {
        Ok(f) => (Some(f), None),
        Err(e) => (None, Some(e.to_string())),
    };
    let pass = fitted.as_ref().is_some_and(|f| f.lambda == predicted.lambda && f.mu == predicted.mu);
    Ok(VerifyReport { rows: seq.rows, predicted, fitted, fit_error, pass })
}
