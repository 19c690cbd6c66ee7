//! The reference voltage graphs used throughout the tests and examples,
//! keyed by figure number 2 through 10.

use crate::error::{Error, Result};
use crate::graphs::VoltageGraph;

pub const FIGURES: [u32; 9] = [2, 3, 4, 5, 6, 7, 8, 9, 10];

pub fn figure(n: u32) -> Result<VoltageGraph> {
    match n {
        2 => VoltageGraph::bouquet(3, &[1]),
        3 => VoltageGraph::bouquet(2, &[2, 1, 1]),
        4 => VoltageGraph::bouquet(3, &[2, 2, 1]),
        5 => VoltageGraph::bouquet(2, &[3, 1]),
        6 => VoltageGraph::bouquet(3, &[3, 1, 1, 1]),
        7 => VoltageGraph::two_vertex_ramified::<i64>(3, &[], 3),
        8 => VoltageGraph::two_vertex_ramified(3, &[1], 3),
        9 => VoltageGraph::two_vertex_ramified(3, &[2, 2, 1], 3),
        10 => VoltageGraph::two_vertex_ramified(3, &[3, 1, 1, 1], 3),
        _ => Err(Error::InvalidParameter(format!("no reference graph numbered {n}"))),
    }
}

/// Stable name used for fixture files, e.g. `fig7`.
pub fn figure_name(n: u32) -> String {
    format!("fig{n}")
}

/// `(λ, μ)` each reference graph realizes.
pub fn figure_invariants(n: u32) -> Option<(u64, u64)> {
    Some(match n {
        2 => (1, 0),
        3 | 4 => (3, 0),
        5 | 6 => (5, 0),
        7 => (0, 1),
        8 => (2, 0),
        9 => (4, 0),
        10 => (6, 0),
        _ => return None,
    })
}
