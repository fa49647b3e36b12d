//! Clique chromatic number of random graphs.
//!
//! The crate bundles everything needed to study clique colorings of
//! binomial random graphs at desk scale:
//!
//! * [`graph`]: bitset graphs, seeded `G(n, p)` sampling, neighborhood queries.
//! * [`clique`]: maximal clique enumeration, maximality tests, extension and
//!   constrained search inside a vertex class.
//! * [`coloring`]: colorings, clique-coloring validity and exact solvers.
//! * [`params`]: the parameter schedule, inequality system, `Λ`/`Π` calculus,
//!   Janson exponents and predicted leading-order bounds.
//! * [`lower`]: the lower-bound certification pipeline.
//! * [`upper`]: the explicit upper-bound coloring procedures and repair.
//! * [`harness`]: config-driven Monte-Carlo sweeps and comparison tables.
//!
//! Vertices are 0-based in the API and 1-based in every text format.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bitset;
pub mod clique;
pub mod coloring;
pub mod error;
pub mod graph;
pub mod harness;
pub mod lower;
pub mod params;
pub mod upper;

pub use bitset::VertexSet;
pub use clique::Clique;
pub use coloring::Coloring;
pub use error::{Error, Result};
pub use graph::Graph;
pub use params::ParamSchedule;
