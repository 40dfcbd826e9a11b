//! Experiment harness around `arbcolor-core`: graph generation, single runs
//! with verification reports, parameter sweeps to CSV, and standalone
//! coloring verification.

pub mod commands;
pub mod config;
pub mod dispatch;

pub use commands::{cmd_generate, cmd_run, cmd_sweep, cmd_verify, load_graph};
pub use config::{Algo, GraphSource, RunConfig, SweepConfig};
pub use dispatch::{run_algorithm, RunOptions};
