//! Spectral-partitioning approximation for Max Cut and Maximum Colored Cut.
//!
//! An instance is a [`ColoredGraph`]: weighted edges, each colored red or
//! blue. A bipartition makes a red edge *good* when it is cut and a blue edge
//! good when it is not cut; the goal is to maximize the good weight. Max Cut
//! is the all-red special case.
//!
//! The solver ([`solver::solve`]) repeatedly:
//!
//! 1. computes the leading vector of `D^{-1/2} M D^{-1/2}` by power iteration
//!    ([`spectral`]),
//! 2. sweeps every threshold of that vector to obtain the tripartition
//!    `(V+, V0, V-)` with the best recoverable ratio ([`rounding`]),
//! 3. falls back to a half cut when that ratio drops below 1/2, and otherwise
//!    recurses on the undecided set `V0`, gluing the result back in the better
//!    of the two orientations.
//!
//! [`guarantee`] evaluates the analysis curves (`f`, `F`, `G`, `H`) and
//! reproduces the 0.614247 worst-case ratio; [`oracle`] is an exhaustive
//! solver used to check the guarantee on small instances.

pub mod cli;
pub mod error;
pub mod graph;
pub mod guarantee;
pub mod oracle;
pub mod rounding;
pub mod solver;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{ColoredGraph, Edge, EdgeColor, VertexSet};
pub use rounding::{PartitionStats, Tripartition};
pub use solver::{SolveParams, SolveReport};
pub use spectral::SpectralResult;
