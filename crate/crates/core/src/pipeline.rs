//! Stage accounting shared by the coloring pipelines, plus residual-subgraph
//! plumbing.

use serde::{Deserialize, Serialize};

use crate::coloring::ColoringState;
use crate::graph::Graph;
use crate::hpartition::Orientation;
use crate::sim::RoundStats;

/// One pipeline stage: which palette span it consumed, what it cost, and what
/// was left uncolored afterwards.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StageStat {
    pub stage: String,
    pub palette_offset: u32,
    pub palette_size: u32,
    pub rounds: usize,
    pub messages: u64,
    pub max_payload_bits: u64,
    /// Uncolored nodes remaining after this stage.
    pub residual_nodes: usize,
    /// Max out-degree among uncolored nodes under the stage orientation.
    pub residual_out_degree: u32,
}

/// Full result of one coloring pipeline run.
#[derive(Clone, Debug)]
pub struct PipelineResult {
    pub coloring: ColoringState,
    pub stats: RoundStats,
    pub stages: Vec<StageStat>,
    pub fallback_events: u32,
}

/// The JSON summary emitted for a run: palette totals, round counts, and the
/// per-stage breakdown.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineSummary {
    pub colors_used: usize,
    pub palette_span: u32,
    pub rounds: usize,
    pub messages: u64,
    pub max_payload_bits: u64,
    pub stage_breakdown: Vec<StageStat>,
    pub fallback_events: u32,
}

impl PipelineResult {
    pub fn summary(&self) -> PipelineSummary {
        PipelineSummary {
            colors_used: crate::verify::count_colors(&self.coloring).distinct,
            palette_span: self.coloring.palette_span(),
            rounds: self.stats.rounds,
            messages: self.stats.messages,
            max_payload_bits: self.stats.max_payload_bits,
            stage_breakdown: self.stages.clone(),
            fallback_events: self.fallback_events,
        }
    }
}

/// Subgraph induced by the uncolored nodes, with the mapping back to the
/// original ids and the stage orientation restricted alongside.
pub struct Residual {
    pub graph: Graph,
    pub map: Vec<u32>,
    pub orientation: Orientation,
}

pub fn residual_of(g: &Graph, orientation: &Orientation, coloring: &ColoringState) -> Residual {
    let keep = coloring.uncolored_nodes();
    let (graph, map) = g.induced_subgraph(&keep);
    let orientation = orientation.restrict(&keep);
    Residual {
        graph,
        map,
        orientation,
    }
}
