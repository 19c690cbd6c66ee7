//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use iwagraph_core::graphs::{Edge, MultiGraph, Ramification, VoltageGraph};
use iwagraph_core::{GroupRingElement, IntPolynomial, Variable};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;
use rand::Rng;

pub fn build_graph(nv: usize, edges: &[(usize, usize)]) -> MultiGraph {
    let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
    let ids: Vec<String> = (0..edges.len()).map(|i| format!("e{i}")).collect();
    let triples: Vec<(&str, &str, &str)> = edges
        .iter()
        .zip(&ids)
        .map(|(&(a, b), id)| (id.as_str(), names[a].as_str(), names[b].as_str()))
        .collect();
    MultiGraph::new(&names, &triples).expect("well-formed random graph")
}

pub fn build_voltage_graph(p: u64, nv: usize, edges: &[(usize, usize, i64)], ram: &[Ramification]) -> VoltageGraph {
    let topo: Vec<(usize, usize)> = edges.iter().map(|&(a, b, _)| (a, b)).collect();
    VoltageGraph::new(
        build_graph(nv, &topo),
        p,
        edges.iter().map(|&(_, _, a)| BigInt::from(a)).collect(),
        ram.to_vec(),
    )
    .expect("valid voltage graph")
}

fn ramification(allow_ramified: bool) -> BoxedStrategy<Ramification> {
    if allow_ramified {
        prop_oneof![3 => Just(Ramification::Unramified), 1 => (0u32..=2).prop_map(Ramification::Depth)].boxed()
    } else {
        Just(Ramification::Unramified).boxed()
    }
}

/// Voltage graphs with `p ∈ {2,3,5}`, `|voltage| ≤ p^3`.
pub fn voltage_graph(max_vertices: usize, max_edges: usize, allow_ramified: bool) -> impl Strategy<Value = VoltageGraph> {
    (prop::sample::select(vec![2u64, 3, 5]), 1..=max_vertices).prop_flat_map(move |(p, nv)| {
        let bound = (p * p * p) as i64;
        let edges = prop::collection::vec((0..nv, 0..nv, -bound..=bound), 1..=max_edges);
        let ram = prop::collection::vec(ramification(allow_ramified), nv);
        (Just(p), Just(nv), edges, ram).prop_map(|(p, nv, e, r)| build_voltage_graph(p, nv, &e, &r))
    })
}

/// Bouquets and unramified/totally-ramified pairs.
pub fn special_shape() -> impl Strategy<Value = VoltageGraph> {
    (prop::sample::select(vec![2u64, 3, 5]), any::<bool>()).prop_flat_map(|(p, ramified)| {
        let bound = (p * p * p) as i64;
        let loops = prop::collection::vec(-bound..=bound, 1..=5);
        let c = 1usize..=4;
        (Just(p), Just(ramified), loops, c).prop_map(|(p, ramified, loops, c)| {
            if ramified {
                VoltageGraph::two_vertex_ramified(p, &loops, c).unwrap()
            } else {
                VoltageGraph::bouquet(p, &loops).unwrap()
            }
        })
    })
}

/// Unramified voltage graph drawn from `rng`, matching the acceptance ranges.
pub fn random_unramified(rng: &mut impl Rng, max_vertices: usize, max_edges: usize) -> VoltageGraph {
    let p = [2u64, 3, 5][rng.gen_range(0..3)];
    let nv = rng.gen_range(1..=max_vertices);
    let ne = rng.gen_range(1..=max_edges);
    let bound = (p * p * p) as i64;
    let edges: Vec<(usize, usize, i64)> =
        (0..ne).map(|_| (rng.gen_range(0..nv), rng.gen_range(0..nv), rng.gen_range(-bound..=bound))).collect();
    build_voltage_graph(p, nv, &edges, &vec![Ramification::Unramified; nv])
}

pub fn random_multigraph(rng: &mut impl Rng, max_vertices: usize, max_edges: usize) -> MultiGraph {
    let nv = rng.gen_range(1..=max_vertices);
    let ne = rng.gen_range(0..=max_edges);
    let edges: Vec<(usize, usize)> = (0..ne).map(|_| (rng.gen_range(0..nv), rng.gen_range(0..nv))).collect();
    build_graph(nv, &edges)
}

/// Spanning trees by enumerating every `(|V|−1)`-subset of non-loop edges.
pub fn brute_force_tree_count(g: &MultiGraph) -> u64 {
    let n = g.vertex_count();
    let edges: Vec<&Edge> = g.edges().iter().filter(|e| !e.is_loop()).collect();
    if n == 1 {
        return 1;
    }
    let m = edges.len();
    let mut count = 0;
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            parent[x] = r;
            r
        }
        let mut acyclic = true;
        for (i, e) in edges.iter().enumerate() {
            if mask & (1 << i) != 0 {
                let (a, b) = (find(&mut parent, e.from), find(&mut parent, e.to));
                if a == b {
                    acyclic = false;
                    break;
                }
                parent[a] = b;
            }
        }
        if acyclic {
            count += 1;
        }
    }
    count
}

/// `2 T_k(S/2 + 1) − 2` from the Chebyshev recurrence `T_k = 2X T_{k−1} − T_{k−2}`
/// in `X`, then substituting `X = (S+2)/2` with exact halving.
pub fn chebyshev_shifted(k: usize) -> IntPolynomial {
    let x = IntPolynomial::from_i64(&[0, 1], Variable::T);
    let two_x = IntPolynomial::from_i64(&[0, 2], Variable::T);
    let (mut prev, mut cur) = (IntPolynomial::from_i64(&[1], Variable::T), x);
    if k == 0 {
        cur = prev.clone();
    } else {
        for _ in 1..k {
            let next = &(&two_x * &cur) - &prev;
            prev = cur;
            cur = next;
        }
    }
    // 2 Σ t_j ((S+2)/2)^j = Σ (t_j / 2^{j-1}) (S+2)^j
    let s_plus_2 = IntPolynomial::from_i64(&[2, 1], Variable::S);
    let mut acc = IntPolynomial::zero(Variable::S);
    let mut power = IntPolynomial::from_i64(&[1], Variable::S);
    for (j, t) in cur.coeffs().iter().enumerate() {
        let scaled = if j == 0 {
            t * BigInt::from(2)
        } else {
            let d = num_traits::pow(BigInt::from(2), j - 1);
            assert!((t % &d).is_zero(), "T_k coefficient not divisible by 2^(j-1)");
            t / d
        };
        acc = &acc + &power.scale(&scaled);
        power = &power * &s_plus_2;
    }
    &acc - &IntPolynomial::from_i64(&[2], Variable::S)
}

/// `(1+T)^a mod T^n` for any integer `a`, by generalized binomial coefficients.
pub fn one_plus_t_pow_series(a: &BigInt, n: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(n);
    let mut c = BigInt::one();
    for j in 0..n {
        out.push(c.clone());
        c = c * (a - BigInt::from(j)) / BigInt::from(j + 1);
    }
    out
}

pub fn series_mul(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            out[i + j] += x * y;
        }
    }
    out
}

/// Power series of a group-ring element in `T`, truncated mod `T^n`.
pub fn group_ring_series(x: &GroupRingElement, n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (a, c) in x.terms() {
        for (j, b) in one_plus_t_pow_series(a, n).into_iter().enumerate() {
            out[j] += c * b;
        }
    }
    out
}

/// `g(s(T)) mod T^n` for a polynomial `g` and a series `s`.
pub fn compose_series(g: &IntPolynomial, s: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for c in g.coeffs().iter().rev() {
        out = series_mul(&out, s, n);
        out[0] += c;
    }
    out
}

pub fn group_ring_element() -> impl Strategy<Value = GroupRingElement> {
    prop::collection::vec((-20i64..=20, -1_000_000i64..=1_000_000), 0..8)
        .prop_map(|terms| GroupRingElement::from_terms(terms))
}

/// `h = Σ_{k=1}^{deg} c_k (γ^k − 1)`.
pub fn augmentation_zero(max_degree: usize, coeff: i64) -> impl Strategy<Value = GroupRingElement> {
    prop::collection::vec(-coeff..=coeff, 1..=max_degree).prop_map(|cs| {
        let mut terms = Vec::new();
        for (i, c) in cs.into_iter().enumerate() {
            terms.push((i as i64 + 1, c));
            terms.push((0, -c));
        }
        GroupRingElement::from_terms(terms)
    })
}
