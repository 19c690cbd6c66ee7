//! Inputs shared by the benchmarks.

use iwagraph_core::fixtures::figure;
use iwagraph_core::treecount::kirchhoff_minor;
use iwagraph_core::{derived_graph, GroupRingElement};

/// Kirchhoff minor of the level-`n` graph over reference graph `fig`.
pub fn derived_minor(fig: u32, n: u32) -> Vec<Vec<i64>> {
    let vg = figure(fig).expect("reference graph");
    kirchhoff_minor(&derived_graph(&vg, n).expect("derived graph").graph)
}

/// `Σ_{k=1}^{degree} c_k (γ^k − 1)` with deterministic small coefficients.
pub fn augmentation_zero(degree: i64) -> GroupRingElement {
    GroupRingElement::from_terms((1..=degree).flat_map(|k| {
        let c = (k * 7919) % 23 - 11;
        [(k, c), (0, -c)]
    }))
}
