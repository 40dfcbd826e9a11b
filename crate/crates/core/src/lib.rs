//! Distributed graph coloring with palettes sized by arboricity, on a
//! synchronous round-based message-passing simulator.
//!
//! The crate provides:
//!
//! - [`graph`]: simple undirected graphs, arboricity bounds, and the
//!   sequential greedy oracle used as a correctness baseline;
//! - [`generate`]: seeded generators with a declared arboricity bound;
//! - [`sim`]: the round-based engine every distributed algorithm runs on,
//!   with message and payload-size accounting;
//! - [`hpartition`]: distributed peeling into low-degree layers and the
//!   induced acyclic low out-degree orientation;
//! - [`linial`]: explicit cover-free families and the out-neighbor variant of
//!   the one-round color reduction, plus the two-step `O(alpha^2)` baseline;
//! - [`higharb`] / [`lowarb`]: the randomized pipelines for the high- and
//!   low-arboricity regimes;
//! - [`verify`]: independent checkers that only ever look at
//!   `(Graph, ColoringState)` pairs.

pub mod coloring;
pub mod error;
pub mod generate;
pub mod graph;
pub mod higharb;
pub mod hpartition;
pub mod linial;
pub mod lowarb;
pub mod pipeline;
pub mod sim;
pub mod util;
pub mod verify;

pub use coloring::{ColoringState, PaletteBlock};
pub use error::{Error, Result};
pub use generate::{Family, GenSpec};
pub use graph::{ArboricityEstimate, Graph};
pub use hpartition::{HPartition, Orientation};
pub use pipeline::{PipelineResult, PipelineSummary, StageStat};
pub use sim::{NodeProgram, RngStream, RoundStats, RunOutcome};
pub use verify::{VerificationReport, VerifyConfig};
