mod common;

use common::*;
use iwagraph_core::arith::valuation;
use iwagraph_core::fixtures::{figure, FIGURES};
use iwagraph_core::graphs::{
    derived_graph, tower_is_connected, tower_is_connected_exhaustive, MultiGraph, Ramification, VoltageGraph,
};
use iwagraph_core::laplacian::{bouquet_invariants_fast, laplacian_matrix, z_alpha_ramified};
use iwagraph_core::linalg::{det_bigint, det_cofactor};
use iwagraph_core::phi::{phi_basis_cyc, phi_forward, phi_inverse};
use iwagraph_core::treecount::{det_exact, det_multimodular, det_valuation, kirchhoff_minor, spanning_tree_count};
use iwagraph_core::{predicted_invariants, GroupRingElement, PredictOptions};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_laws(x in group_ring_element(), y in group_ring_element(), z in group_ring_element()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert_eq!(&x + &y, &y + &x);
        prop_assert!((&x - &x).is_zero());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn iota_is_a_ring_involution(x in group_ring_element(), y in group_ring_element()) {
        prop_assert_eq!((&x + &y).iota(), &x.iota() + &y.iota());
        prop_assert_eq!((&x * &y).iota(), &x.iota() * &y.iota());
        prop_assert_eq!(x.iota().iota(), x);
    }

    #[test]
    fn divisibility_transfers_to_t_polynomial(
        x in group_ring_element(),
        a in prop::sample::select(vec![2i64, 3, 4, 9]),
        scale in any::<bool>(),
    ) {
        prop_assume!(!x.is_zero());
        let x = if scale { x.scale(&BigInt::from(a)) } else { x };
        let a = BigInt::from(a);
        let (poly, _) = x.to_t_polynomial().unwrap();
        let in_ring = x.terms().all(|(_, c)| (c % &a).is_zero());
        let in_poly = poly.coeffs().iter().all(|c| (c % &a).is_zero());
        prop_assert_eq!(in_ring, in_poly);
    }

    #[test]
    fn invariants_ignore_units(
        x in group_ring_element(),
        k in -15i64..=15,
        negate in any::<bool>(),
        p in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        prop_assume!(!x.is_zero());
        let unit = GroupRingElement::from_terms([(k, if negate { -1 } else { 1 })]);
        prop_assert_eq!((&unit * &x).iwasawa_invariants(p).unwrap(), x.iwasawa_invariants(p).unwrap());
    }

    #[test]
    fn mu_l_scales_with_integers(
        x in group_ring_element(),
        m in prop::sample::select(vec![-12i64, -7, 2, 3, 5, 8, 18, 45, 125]),
        l in prop::sample::select(vec![2u64, 3, 5, 7]),
    ) {
        prop_assume!(!x.is_zero());
        let scaled = x.scale(&BigInt::from(m));
        prop_assert_eq!(
            scaled.mu_l(l).unwrap(),
            x.mu_l(l).unwrap() + valuation(&BigInt::from(m), l).unwrap()
        );
    }
}

#[test]
fn chebyshev_identity_up_to_64() {
    for k in 0..=64 {
        assert_eq!(phi_basis_cyc(k), chebyshev_shifted(k), "k = {k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn phi_round_trip(h in augmentation_zero(40, 1000)) {
        let g = phi_forward(&h).unwrap();
        prop_assert_eq!(phi_inverse(&g).unwrap(), h);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn phi_matches_series_substitution(h in augmentation_zero(12, 50)) {
        let deg = h.max_exponent().map(|a| a.magnitude().clone()).unwrap_or_default();
        let n = usize::try_from(&deg).unwrap() * 2 + 5;
        let one = BigInt::from(1);
        // S = T + ι(T) = (1+T) + (1+T)^{-1} − 2
        let mut s = one_plus_t_pow_series(&one, n);
        for (i, c) in one_plus_t_pow_series(&-&one, n).into_iter().enumerate() {
            s[i] += c;
        }
        s[0] -= BigInt::from(2);
        let lhs = compose_series(&phi_forward(&h).unwrap(), &s, n);
        let rhs = group_ring_series(&(&h + &h.iota()), n);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn symmetric_part_has_even_order_and_lambda(
        h in augmentation_zero(15, 200),
        p in prop::sample::select(vec![2u64, 3, 5]),
    ) {
        let f = &h + &h.iota();
        prop_assume!(!f.is_zero());
        let (poly, _) = f.to_t_polynomial().unwrap();
        prop_assert_eq!(poly.order().unwrap() % 2, 0);
        prop_assert_eq!(f.iwasawa_invariants(p).unwrap().0 % 2, 0);
    }

    #[test]
    fn phi_preserves_content(h in augmentation_zero(15, 500)) {
        prop_assume!(!h.is_zero());
        let g = phi_forward(&h).unwrap();
        prop_assert_eq!(g.content(), h.content());
        for l in [2u64, 3, 5, 7, 11] {
            prop_assert_eq!(valuation(&g.content(), l), Some(h.mu_l(l).unwrap()));
        }
    }
}

fn check_counts_and_degrees(vg: &VoltageGraph, n: u32) {
    let d = derived_graph(vg, n).unwrap();
    let p = vg.p() as usize;
    let base = vg.graph();
    assert_eq!(d.graph.edge_count(), p.pow(n) * base.edge_count());
    let expect_v: usize = (0..base.vertex_count()).map(|v| vg.fiber_size(v, n).unwrap() as usize).sum();
    assert_eq!(d.graph.vertex_count(), expect_v);
    let mut fiber_degree = vec![0usize; base.vertex_count()];
    for (i, &(v, _)) in d.vertex_labels.iter().enumerate() {
        fiber_degree[v] += d.graph.dart_degree(i);
        if vg.ramification()[v] == Ramification::Unramified {
            assert_eq!(d.graph.dart_degree(i), base.dart_degree(v));
        }
    }
    for v in 0..base.vertex_count() {
        assert_eq!(fiber_degree[v], p.pow(n) * base.dart_degree(v));
    }
}

#[test]
fn fixture_counts_degrees_and_projections() {
    for f in FIGURES {
        let vg = figure(f).unwrap();
        for n in 0..=4 {
            check_counts_and_degrees(&vg, n);
        }
        for n in 1..=4 {
            let upper = derived_graph(&vg, n).unwrap();
            let lower = derived_graph(&vg, n - 1).unwrap();
            let base = derived_graph(&vg, 0).unwrap();
            let (vmap, emap) = upper.projection_to(&lower, &vg).unwrap();
            let (vdown, _) = lower.projection_to(&base, &vg).unwrap();
            let (vdirect, _) = upper.projection_to(&base, &vg).unwrap();
            for (i, e) in upper.graph.edges().iter().enumerate() {
                let img = &lower.graph.edges()[emap[i]];
                assert_eq!((vmap[e.from], vmap[e.to]), (img.from, img.to), "fig{f} n={n}");
            }
            for (i, &j) in vmap.iter().enumerate() {
                assert_eq!(vdown[j], vdirect[i]);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn random_counts_and_degrees(vg in voltage_graph(3, 5, true), n in 0u32..=3) {
        check_counts_and_degrees(&vg, n);
    }

    #[test]
    fn connectivity_shortcuts_agree_with_search(vg in voltage_graph(3, 5, true)) {
        let fast = tower_is_connected(&vg, 3).unwrap();
        let slow = tower_is_connected_exhaustive(&vg, 3).unwrap();
        prop_assert_eq!(fast.connected, slow.connected);
        prop_assert_eq!(fast.first_failure, slow.first_failure);
    }

    #[test]
    fn determinant_is_iota_symmetric(vg in voltage_graph(3, 5, true)) {
        let z = z_alpha_ramified(&vg).unwrap();
        prop_assert_eq!(z.iota(), z.clone());
        let l = laplacian_matrix(&vg);
        prop_assert_eq!(l.iota().determinant().unwrap(), l.determinant().unwrap());
    }

    #[test]
    fn determinant_lambda_is_even(vg in voltage_graph(3, 5, true), p in prop::sample::select(vec![2u64, 3, 5])) {
        let z = z_alpha_ramified(&vg).unwrap();
        prop_assume!(!z.is_zero());
        prop_assert_eq!(z.iwasawa_invariants(p).unwrap().0 % 2, 0);
    }

    #[test]
    fn fast_path_matches_general(vg in special_shape()) {
        let general = predicted_invariants(&vg, &PredictOptions::default());
        let fast = bouquet_invariants_fast(&vg);
        match (general, fast) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a, b),
            (Err(a), Err(b)) => prop_assert_eq!(a, b),
            (a, b) => prop_assert!(false, "general {a:?} vs fast {b:?}"),
        }
    }

    #[test]
    fn submatrix_order_does_not_matter(vg in voltage_graph(3, 5, true), seed in any::<u64>()) {
        let l = laplacian_matrix(&vg);
        let mut keep: Vec<usize> = (0..l.order()).filter(|&i| vg.ramification()[i] == Ramification::Unramified).collect();
        let original = l.principal_submatrix(&keep).determinant().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for i in (1..keep.len()).rev() {
            keep.swap(i, rng.gen_range(0..=i));
        }
        prop_assert_eq!(l.principal_submatrix(&keep).determinant().unwrap(), original);
    }

    #[test]
    fn bareiss_matches_cofactor(n in 0usize..=3, entries in prop::collection::vec(-50i64..=50, 9)) {
        let m: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from(entries[i * 3 + j])).collect()).collect();
        prop_assert_eq!(det_bigint(m.clone()), det_cofactor(&m));
    }

    #[test]
    fn loops_never_change_the_count(seed in any::<u64>(), extra in 1usize..4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_multigraph(&mut rng, 6, 8);
        let mut names: Vec<(String, String, String)> = g
            .edges()
            .iter()
            .map(|e| (e.id.clone(), g.vertices()[e.from].clone(), g.vertices()[e.to].clone()))
            .collect();
        for i in 0..extra {
            let v = g.vertices()[rng.gen_range(0..g.vertex_count())].clone();
            names.push((format!("loop{i}"), v.clone(), v));
        }
        let triples: Vec<(&str, &str, &str)> = names.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
        let vertices: Vec<&str> = g.vertices().iter().map(String::as_str).collect();
        let with_loops = MultiGraph::new(&vertices, &triples).unwrap();
        prop_assert_eq!(spanning_tree_count(&with_loops).unwrap(), spanning_tree_count(&g).unwrap());
    }
}

#[test]
fn fast_path_on_fixtures() {
    for f in FIGURES {
        let vg = figure(f).unwrap();
        assert_eq!(
            bouquet_invariants_fast(&vg).unwrap(),
            predicted_invariants(&vg, &PredictOptions::default()).unwrap(),
            "fig{f}"
        );
    }
}

#[test]
fn matrix_tree_matches_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..300 {
        let g = random_multigraph(&mut rng, 6, 8);
        assert_eq!(spanning_tree_count(&g).unwrap(), brute_force_tree_count(&g).into(), "{g:?}");
    }
}

#[test]
fn cofactor_choice_does_not_matter() {
    for f in FIGURES {
        let d = derived_graph(&figure(f).unwrap(), 2).unwrap();
        let n = d.graph.vertex_count();
        let mut full = vec![vec![0i64; n]; n];
        for e in d.graph.edges().iter().filter(|e| !e.is_loop()) {
            full[e.from][e.from] += 1;
            full[e.to][e.to] += 1;
            full[e.from][e.to] -= 1;
            full[e.to][e.from] -= 1;
        }
        let reference = det_exact(&kirchhoff_minor(&d.graph));
        for drop in 0..n {
            let minor: Vec<Vec<i64>> = full
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != drop)
                .map(|(_, row)| row.iter().enumerate().filter(|(j, _)| *j != drop).map(|(_, x)| *x).collect())
                .collect();
            assert_eq!(det_exact(&minor), reference, "fig{f} drop {drop}");
        }
    }
}

#[test]
fn padic_valuation_matches_exact_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..400 {
        let vg = random_unramified(&mut rng, 3, 5);
        for n in 0..=3 {
            let minor = kirchhoff_minor(&derived_graph(&vg, n).unwrap().graph);
            let det = if minor.len() <= 64 { det_exact(&minor) } else { det_multimodular(&minor) };
            let exact = valuation(&det, vg.p());
            if exact.is_some() {
                assert_eq!(det_valuation(&minor, vg.p()), exact, "p={} voltages {:?} n={n}", vg.p(), vg.voltages());
            }
        }
    }
}

#[test]
fn multimodular_matches_bareiss_on_mid_sized_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..50 {
        let n = rng.gen_range(30..=80);
        let m = rng.gen_range(n..=3 * n);
        let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
        edges.extend((n - 1..m).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))));
        let g = build_graph(n, &edges);
        let minor = kirchhoff_minor(&g);
        let exact = det_exact(&minor);
        assert!(exact.is_positive());
        assert_eq!(det_multimodular(&minor), exact);
    }
}

fn ord_l_sequence(vg: &VoltageGraph, l: u64, up_to: u32) -> Vec<i64> {
    (0..=up_to)
        .map(|n| {
            let k = spanning_tree_count(&derived_graph(vg, n).unwrap().graph).unwrap();
            valuation(&BigInt::from(k), l).unwrap() as i64
        })
        .collect()
}

#[test]
fn ord_l_growth_matches_predicted_mu_l() {
    // ord_l(κ_n) = μ_l p^n + ν_l on the tail; see the μ_l acceptance check
    // for why the base is p and not l.
    let cases: [(u64, u64, u64, u64); 4] = [(3, 1, 2, 1), (3, 3, 2, 2), (2, 3, 3, 1), (2, 1, 5, 1)];
    for (p, lambda, l, e) in cases {
        let targets = std::collections::BTreeMap::from([(l, e)]);
        let c = iwagraph_core::construct_with_mu_l(p, lambda, 0, &targets).unwrap();
        let mu = c.predicted.mu_l[&l] as i64;
        assert!(mu >= e as i64);
        let ords = ord_l_sequence(&c.graph, l, 4);
        let nu = ords[4] - mu * (p as i64).pow(4);
        for n in 2..=4 {
            assert_eq!(ords[n], mu * (p as i64).pow(n as u32) + nu, "p={p} λ={lambda} l={l} ords={ords:?}");
        }
    }
    // With μ_l = 0 the valuation stays far below any p^n-rate growth.
    for f in FIGURES {
        let vg = figure(f).unwrap();
        let p = vg.p();
        let primes: Vec<u64> = [2u64, 3, 5, 7].into_iter().filter(|&l| l != p).collect();
        let opts = PredictOptions { mu_l_primes: primes.clone(), ..Default::default() };
        let inv = predicted_invariants(&vg, &opts).unwrap();
        for &l in &primes {
            if inv.mu_l[&l] == 0 {
                let ords = ord_l_sequence(&vg, l, 4);
                assert!(ords[4] - ords[3] < (p as i64).pow(3), "fig{f} l={l} ords={ords:?}");
            }
        }
    }
}

#[test]
fn zero_voltage_bouquet_has_singular_laplacian() {
    for f in FIGURES {
        assert!(!z_alpha_ramified(&figure(f).unwrap()).unwrap().is_zero());
    }
    let dead = VoltageGraph::bouquet(3, &[0]).unwrap();
    assert!(z_alpha_ramified(&dead).unwrap().is_zero());
}
