//! Z_p-coverings of finite multigraphs with prescribed Iwasawa invariants.
//!
//! The crate builds voltage graphs realizing a requested pair `(λ, μ)`
//! (and `μ_l` for finitely many primes `l ≠ p`), predicts the invariants of
//! their towers from the group-ring Laplacian, and checks the prediction by
//! counting spanning trees of the derived graphs exactly.

pub mod arith;
pub mod constructor;
pub mod error;
pub mod fixtures;
pub mod graph_json;
pub mod graphs;
pub mod groupring;
pub mod laplacian;
pub mod linalg;
pub mod phi;
pub mod poly;
pub mod treecount;

pub use constructor::{construct_ramified, construct_unramified, construct_with_mu_l, Construction};
pub use error::{Error, Result};
pub use graphs::{derived_graph, DerivedGraph, MultiGraph, Ramification, VoltageGraph};
pub use groupring::{GroupRingElement, IwasawaInvariants};
pub use laplacian::{predicted_invariants, PredictOptions};
pub use poly::{IntPolynomial, Variable};
pub use treecount::{fit_invariants, kappa_sequence, spanning_tree_count, Fit, KappaSequence, VerifyReport};
