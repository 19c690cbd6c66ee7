//! The group-ring Laplacian `L = D − A_α` of a voltage graph and the
//! Iwasawa invariants it predicts.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{is_prime, valuation};
use crate::error::{Error, Result};
use crate::graphs::{tower_is_connected, Ramification, VoltageGraph};
use crate::groupring::{GroupRingElement, IwasawaInvariants};
use crate::linalg::det_polynomial;
use crate::phi::phi_forward;
use crate::poly::{lambda_mu_of_coeffs, IntPolynomial, Variable};

/// Square matrix over `Z[Γ]`, rows and columns indexed by base vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupRingMatrix {
    pub index: Vec<String>,
    pub entries: Vec<Vec<GroupRingElement>>,
}

impl GroupRingMatrix {
    pub fn order(&self) -> usize {
        self.index.len()
    }

    pub fn principal_submatrix(&self, keep: &[usize]) -> GroupRingMatrix {
        GroupRingMatrix {
            index: keep.iter().map(|&i| self.index[i].clone()).collect(),
            entries: keep.iter().map(|&i| keep.iter().map(|&j| self.entries[i][j].clone()).collect()).collect(),
        }
    }

    pub fn iota(&self) -> GroupRingMatrix {
        GroupRingMatrix {
            index: self.index.clone(),
            entries: self.entries.iter().map(|row| row.iter().map(GroupRingElement::iota).collect()).collect(),
        }
    }

    /// Exact determinant. Each row is multiplied by a power of `γ` so that
    /// all entries lie in `Z[γ] ≅ Z[T]`, the determinant is taken there by
    /// Bareiss elimination, and the row shifts are undone.
    pub fn determinant(&self) -> Result<GroupRingElement> {
        let mut total_shift = BigInt::zero();
        let mut rows = Vec::with_capacity(self.order());
        for row in &self.entries {
            let low = row
                .iter()
                .filter_map(GroupRingElement::min_exponent)
                .min()
                .cloned()
                .unwrap_or_default()
                .min(BigInt::zero());
            total_shift += &low;
            let lifted = -&low;
            let mut out = Vec::with_capacity(row.len());
            for x in row {
                out.push(if x.is_zero() {
                    IntPolynomial::zero(Variable::T)
                } else {
                    let (poly, m) = x.shift(&lifted).to_t_polynomial()?;
                    debug_assert!(m.is_zero());
                    poly
                });
            }
            rows.push(out);
        }
        let det = det_polynomial(rows, Variable::T)?;
        Ok(GroupRingElement::from_t_polynomial(&det, &total_shift))
    }
}

/// `L[v][v] = Σ_{s(e)=v} 1` and `L[v][w] −= Σ_{s(e)=v, t(e)=w} γ^{a(e)}`, summed
/// over darts, so a loop of voltage `a` contributes `2 − γ^a − γ^{-a}`.
pub fn laplacian_matrix(vg: &VoltageGraph) -> GroupRingMatrix {
    let g = vg.graph();
    let n = g.vertex_count();
    let mut entries = vec![vec![GroupRingElement::zero(); n]; n];
    let mut add = |i: usize, j: usize, x: GroupRingElement| {
        entries[i][j] = &entries[i][j] + &x;
    };
    for (k, e) in g.edges().iter().enumerate() {
        let a = vg.voltage(k);
        for (s, t, exp) in [(e.from, e.to, a.clone()), (e.to, e.from, -a)] {
            add(s, s, GroupRingElement::one());
            add(s, t, GroupRingElement::monomial(-BigInt::one(), exp));
        }
    }
    GroupRingMatrix { index: g.vertices().to_vec(), entries }
}

fn unramified_indices(vg: &VoltageGraph) -> Vec<usize> {
    vg.ramification()
        .iter()
        .enumerate()
        .filter(|(_, r)| **r == Ramification::Unramified)
        .map(|(i, _)| i)
        .collect()
}

/// `Z_α = det L` for an unramified voltage graph.
pub fn z_alpha(vg: &VoltageGraph) -> Result<GroupRingElement> {
    if !vg.is_unramified() {
        return Err(Error::InvalidParameter("z_alpha needs an unramified voltage graph; use z_alpha_ramified".into()));
    }
    laplacian_matrix(vg).determinant()
}

/// `Z_{α,I}`: determinant of the principal submatrix on the unramified
/// vertices (1 when every vertex is ramified). Equals `Z_α` when nothing
/// ramifies.
pub fn z_alpha_ramified(vg: &VoltageGraph) -> Result<GroupRingElement> {
    laplacian_matrix(vg).principal_submatrix(&unramified_indices(vg)).determinant()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictOptions {
    /// Levels `0..=sanity_level` must be connected unless a shortcut proves
    /// connectivity for the whole tower.
    pub sanity_level: u32,
    /// Primes `l ≠ p` for which `μ_l` is reported.
    pub mu_l_primes: Vec<u64>,
}

impl Default for PredictOptions {
    fn default() -> Self {
        PredictOptions { sanity_level: 2, mu_l_primes: Vec::new() }
    }
}

/// `λ = λ(Z) − 1 + Σ_{ramified v} p^{d_v}` and `μ = μ(Z)` with `Z = Z_{α,I}`.
pub fn predicted_invariants(vg: &VoltageGraph, opts: &PredictOptions) -> Result<IwasawaInvariants> {
    let conn = tower_is_connected(vg, opts.sanity_level)?;
    if let Some(level) = conn.first_failure {
        return Err(Error::DisconnectedTower { level });
    }
    for &l in &opts.mu_l_primes {
        if !is_prime(l) || l == vg.p() {
            return Err(Error::InvalidParameter(format!("mu_l prime {l} must be a prime other than p")));
        }
    }
    let z = z_alpha_ramified(vg)?;
    if z.is_zero() {
        return Err(Error::SingularLaplacian);
    }
    let (lz, mu) = z.iwasawa_invariants(vg.p())?;
    let mut ramified_sum: u64 = 0;
    for r in vg.ramification() {
        if let Ramification::Depth(d) = r {
            let term = vg
                .p()
                .checked_pow(*d)
                .ok_or_else(|| Error::Overflow(format!("p^{d} exceeds 64 bits")))?;
            ramified_sum = ramified_sum.checked_add(term).ok_or_else(|| Error::Overflow("ramification sum".into()))?;
        }
    }
    let lambda = (lz + ramified_sum)
        .checked_sub(1)
        .ok_or_else(|| Error::InvalidParameter("λ(Z) = 0 on an unramified graph".into()))?;
    let mut inv = IwasawaInvariants::new(lambda, mu);
    for &l in &opts.mu_l_primes {
        inv.mu_l.insert(l, z.mu_l(l)?);
    }
    Ok(inv)
}

/// Shortcut for two shapes, avoiding any expansion in `T`:
///
/// * an unramified bouquet, where `Z_α = Φ(h_α)` written in `S = T²/(1+T)`,
///   giving `λ = 2 λ_S − 1`, `μ = μ_S`;
/// * an unramified `v` and a totally ramified `w`, where
///   `Z_{α,I} = Φ(h_α) + c` with `h_α` from the loops at `v` and `c` the
///   number of `v`–`w` edges, giving `λ = 2 λ_S`, `μ = μ_S`.
pub fn bouquet_invariants_fast(vg: &VoltageGraph) -> Result<IwasawaInvariants> {
    let g = vg.graph();
    let p = BigInt::from(vg.p());
    let (v, ramified) = match (vg.ramification(), g.vertex_count()) {
        ([Ramification::Unramified], 1) => (0, false),
        ([Ramification::Unramified, Ramification::Depth(0)], 2) => (0, true),
        ([Ramification::Depth(0), Ramification::Unramified], 2) => (1, true),
        _ => {
            return Err(Error::UnsupportedShape(
                "fast path needs an unramified bouquet or an unramified vertex beside a totally ramified one".into(),
            ))
        }
    };
    let mut h = GroupRingElement::zero();
    let mut loops_prime_to_p = false;
    let mut c = 0u64;
    for (k, e) in g.edges().iter().enumerate() {
        if e.is_loop() && e.from == v {
            let a = vg.voltage(k);
            loops_prime_to_p |= !(a % &p).is_zero();
            h = &h + &(&GroupRingElement::one() - &GroupRingElement::gamma_pow(a.clone()));
        } else if !e.is_loop() {
            c += 1;
        }
    }
    if ramified && c == 0 {
        return Err(Error::DisconnectedTower { level: 0 });
    }
    if !ramified && !loops_prime_to_p {
        return Err(Error::DisconnectedTower { level: 1 });
    }
    let mut s = phi_forward(&h)?;
    if ramified {
        s = &s + &IntPolynomial::constant(BigInt::from(c), Variable::S);
    }
    let (ls, mu) = lambda_mu_of_coeffs(s.coeffs(), vg.p()).ok_or(Error::SingularLaplacian)?;
    let lambda = if ramified { 2 * ls } else { 2 * ls - 1 };
    Ok(IwasawaInvariants::new(lambda, mu))
}

/// `ord_l` of the content of `Z_{α,I}`.
pub fn content_valuation(vg: &VoltageGraph, l: u64) -> Result<u64> {
    let z = z_alpha_ramified(vg)?;
    valuation(&z.content(), l).ok_or(Error::SingularLaplacian)
}
