//! Chip-firing games and divisor theory on strongly connected multidigraphs.
//!
//! * [`graph`]: multidigraphs, degree data, Laplacian, text format.
//! * [`lattice`]: exact Laplacian image lattice, class representatives.
//! * [`engine`]: legal games, termination, `dist`, rank.
//! * [`arcset`]: feedback/turnback arc sets, acyclic orientations.
//! * [`riemann_roch`]: Riemann–Roch decision and identity checks.
//! * [`generate`] and [`sweep`]: seeded random graphs and property sweeps.

pub mod arcset;
pub mod chips;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod lattice;
pub mod riemann_roch;
pub mod sweep;

pub use chips::ChipDistribution;
pub use engine::{ChipEngine, GameTrace, Outcome, Termination};
pub use error::{Error, Result};
pub use graph::{parse_graph, ArcSubset, LaplacianMatrix, MultiDigraph};
pub use lattice::LaplacianLattice;
pub use riemann_roch::{DivisorTheory, MntClass, RrFailure, RrReport};
