//! Shared coloring state plus the layer-scheduled random proposal program.
//!
//! All randomized partial-coloring stages in this crate follow one protocol:
//! layers are processed from the top layer down on a fixed round calendar,
//! and in its window each uncolored node repeatedly proposes random colors
//! from the stage palette. A proposal succeeds unless some out-neighbor
//! proposed the same color this iteration or some neighbor committed it
//! earlier; a node that succeeds announces its color once and halts.
//! Proposal conflicts are asymmetric (only the out-endpoint backs off, which
//! is what the progress bound counts); committed colors block both endpoints.
//! Palettes of distinct sweeps are disjoint, so stages never conflict across
//! palette blocks.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hpartition::{HPartition, Orientation};
use crate::sim::{self, InitCtx, NodeProgram, RoundCtx, RoundStats};
use crate::util::{ceil_log2, BitSet};

/// Contiguous range of color ids handed to one stage (or one sweep of one
/// stage). Blocks of distinct stages never overlap.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteBlock {
    pub stage: String,
    pub offset: u32,
    pub size: u32,
}

impl PaletteBlock {
    pub fn contains(&self, color: u32) -> bool {
        color >= self.offset && color < self.offset + self.size
    }
}

/// Per-node optional color plus the palette blocks the colors were drawn
/// from. `None` marks a node that is still uncolored.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ColoringState {
    pub colors: Vec<Option<u32>>,
    pub blocks: Vec<PaletteBlock>,
}

impl ColoringState {
    pub fn uncolored(n: usize) -> Self {
        ColoringState {
            colors: vec![None; n],
            blocks: Vec::new(),
        }
    }

    pub fn colored_count(&self) -> usize {
        self.colors.iter().filter(|c| c.is_some()).count()
    }

    /// Total size of the color space consumed: the sum of the (disjoint)
    /// palette block sizes. This is the "number of colors" in the
    /// c-coloring sense, independent of how many are actually touched.
    pub fn palette_span(&self) -> u32 {
        self.blocks.iter().map(|b| b.size).sum()
    }

    pub fn uncolored_nodes(&self) -> Vec<u32> {
        self.colors
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.is_none().then_some(v as u32))
            .collect()
    }

    /// Writes stage-local colors (indices within `[0, block span)`) back into
    /// this coloring through the stage's node mapping.
    pub fn merge_stage(&mut self, map: &[u32], offset: u32, stage_colors: &[Option<u32>]) {
        for (local, &orig) in map.iter().enumerate() {
            if let Some(c) = stage_colors[local] {
                debug_assert!(self.colors[orig as usize].is_none());
                self.colors[orig as usize] = Some(offset + c);
            }
        }
    }
}

#[derive(Clone)]
pub struct ProposalMsg {
    proposals: SmallVec<[u32; 8]>,
    committed: Option<u32>,
}

/// Stage parameters: `sweeps` fresh palettes of `palette` colors each,
/// `iters_per_layer` proposal iterations inside each layer window, and
/// `proposals` independent color draws per iteration.
#[derive(Clone, Copy, Debug)]
pub struct ProposalParams {
    pub sweeps: u32,
    pub iters_per_layer: u32,
    pub palette: u32,
    pub proposals: u32,
}

impl ProposalParams {
    pub fn total_palette(&self) -> u32 {
        self.sweeps * self.palette
    }

    /// Window rounds plus the final flush round in which the last iteration
    /// is evaluated.
    pub fn round_bound(&self, calendar: u32) -> usize {
        (self.sweeps * calendar * self.iters_per_layer) as usize + 1
    }
}

/// The layer-scheduled proposal program. Colors it outputs are stage-local:
/// `sweep * palette + drawn index`.
pub struct ProposalColoring {
    layers: Arc<Vec<u32>>,
    /// Calendar size: the partition's a-priori layer bound, so the schedule
    /// is a function of global knowledge only. Layers beyond the measured
    /// count give empty (message-free) windows.
    calendar: u32,
    orientation: Arc<Orientation>,
    params: ProposalParams,
}

impl ProposalColoring {
    pub fn new(hp: &HPartition, orientation: Arc<Orientation>, params: ProposalParams) -> Self {
        assert!(params.sweeps >= 1 && params.iters_per_layer >= 1);
        assert!(params.palette >= 1 && params.proposals >= 1);
        ProposalColoring {
            layers: Arc::new(hp.layers.clone()),
            calendar: hp.size_bound.max(hp.ell).max(1),
            orientation,
            params,
        }
    }

    /// Layer active in round `r`, with its sweep index; `None` once the
    /// calendar is exhausted.
    fn slot(&self, round: usize) -> Option<(u32, u32)> {
        let w = self.params.iters_per_layer as usize;
        let block = (round - 1) / w;
        let sweep = block as u32 / self.calendar;
        if sweep >= self.params.sweeps {
            return None;
        }
        let active_layer = self.calendar - (block as u32 % self.calendar);
        Some((sweep, active_layer))
    }
}

pub struct ProposalState {
    /// Proposals sent last round, awaiting evaluation against the inbox.
    outstanding: SmallVec<[u32; 8]>,
    /// Stage colors committed by out-neighbors.
    blocked: BitSet,
    /// Last round in which this node may propose; failing its evaluation one
    /// round later means the node stays uncolored.
    last_proposal_round: usize,
}

impl NodeProgram for ProposalColoring {
    type State = ProposalState;
    type Message = ProposalMsg;
    /// `Some(color)` = committed stage color, `None` = left uncolored.
    type Output = Option<u32>;

    fn init(&self, ctx: &InitCtx<'_>) -> ProposalState {
        let layer = self.layers[ctx.node as usize];
        let w = self.params.iters_per_layer;
        let last_block = (self.params.sweeps - 1) * self.calendar + (self.calendar - layer);
        ProposalState {
            outstanding: SmallVec::new(),
            blocked: BitSet::with_capacity(self.params.total_palette() as usize),
            last_proposal_round: ((last_block + 1) * w) as usize,
        }
    }

    fn on_round(
        &self,
        st: &mut ProposalState,
        ctx: &mut RoundCtx<'_, ProposalMsg>,
    ) -> Option<Option<u32>> {
        let out = self.orientation.out_neighbors(ctx.node);
        // Commits block in both directions: once any neighbor owns a color,
        // taking it would be improper no matter which way the edge points.
        for (_, msg) in ctx.inbox() {
            if let Some(c) = msg.committed {
                st.blocked.insert(c);
            }
        }
        // Evaluate last round's proposals: out-neighbor proposals from the
        // same iteration block transiently.
        if !st.outstanding.is_empty() {
            let mut transient: SmallVec<[u32; 16]> = SmallVec::new();
            for (from, msg) in ctx.inbox() {
                if msg.proposals.is_empty() || out.binary_search(from).is_err() {
                    continue;
                }
                for &p in &msg.proposals {
                    if st.blocked.insert(p) {
                        transient.push(p);
                    }
                }
            }
            let choice = st
                .outstanding
                .iter()
                .copied()
                .find(|&p| !st.blocked.contains(p));
            for p in transient {
                st.blocked.remove(p);
            }
            st.outstanding.clear();
            if let Some(c) = choice {
                ctx.broadcast(ProposalMsg {
                    proposals: SmallVec::new(),
                    committed: Some(c),
                });
                return Some(Some(c));
            }
        }
        if ctx.round > st.last_proposal_round {
            return Some(None);
        }
        if let Some((sweep, active_layer)) = self.slot(ctx.round) {
            if self.layers[ctx.node as usize] == active_layer {
                let base = sweep * self.params.palette;
                for _ in 0..self.params.proposals {
                    st.outstanding.push(base + ctx.rng().below(self.params.palette));
                }
                ctx.broadcast(ProposalMsg {
                    proposals: st.outstanding.clone(),
                    committed: None,
                });
            }
        }
        None
    }

    fn payload_bits(&self, msg: &ProposalMsg) -> u64 {
        let color_bits = ceil_log2(self.params.palette as u64) as u64;
        let committed_bits = match msg.committed {
            Some(_) => 1 + ceil_log2(self.params.total_palette() as u64) as u64,
            None => 1,
        };
        msg.proposals.len() as u64 * color_bits + committed_bits
    }
}

/// Runs one proposal stage on `g` (typically a residual subgraph) and returns
/// the stage-local colors per node. The returned stats include the final
/// flush round. The calendar always terminates on its own; a tighter
/// caller-supplied `round_limit` surfaces as a non-termination error.
pub fn run_proposal_stage(
    g: &Graph,
    hp: &HPartition,
    orientation: &Arc<Orientation>,
    params: ProposalParams,
    seed: u64,
    round_limit: usize,
) -> Result<(Vec<Option<u32>>, RoundStats)> {
    if g.n() == 0 {
        return Ok((Vec::new(), RoundStats::default()));
    }
    let program = ProposalColoring::new(hp, Arc::clone(orientation), params);
    let bound = params.round_bound(program.calendar).min(round_limit);
    let outcome = sim::run(g, &program, seed, bound);
    if !outcome.completed {
        return Err(Error::NonTermination {
            limit: round_limit,
            unhalted: outcome.outputs.iter().filter(|o| o.is_none()).count(),
        });
    }
    let colors = outcome
        .outputs
        .into_iter()
        .map(|o| o.flatten())
        .collect();
    Ok((colors, outcome.stats))
}
