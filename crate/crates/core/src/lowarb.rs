//! Low-arboricity coloring: an `O(alpha log alpha)`-palette randomized
//! partial coloring (or its `(2+eps)alpha` trade-off variant), followed by a
//! deterministic wait-for-out-neighbors finisher on the residual, which with
//! high probability contains no long directed path.

use std::sync::Arc;

use crate::coloring::{ColoringState, PaletteBlock, ProposalParams, run_proposal_stage};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hpartition::{compute_h_partition, orient_from_partition, HPartition, Orientation};
use crate::pipeline::{residual_of, PipelineResult, StageStat};
use crate::sim::{self, InitCtx, NodeProgram, RoundCtx, RoundStats};
use crate::util::{ceil_log2, BitSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowArbVariant {
    /// `d * ⌈log2 d⌉` palette, 4 iterations per layer, multiple proposals.
    LogAlpha,
    /// `⌈(2+eps) * alpha⌉` palette, one proposal, `O(log d)` iterations.
    Tradeoff,
}

/// Resolved stage parameters for one low-arb run.
#[derive(Clone, Copy, Debug)]
pub struct LowArbConfig {
    pub variant: LowArbVariant,
    pub epsilon: f64,
    /// Degree bound of the H-partition the stage runs on.
    pub d: u32,
    /// Peeling parameter realizing that bound.
    pub hp_epsilon: f64,
    pub iters_per_layer: u32,
    pub palette: u32,
    pub proposals: u32,
}

/// Derives the per-variant palette and iteration formulas.
///
/// For the log-alpha variant the proposal count is `⌊⌈log2 d⌉ / 2⌋`, which
/// keeps the blocked colors at or below half the `d * ⌈log2 d⌉` palette; for
/// `d <= 4` a single proposal and a palette of at least `2d` stand in.
pub fn low_arb_config(variant: LowArbVariant, alpha: usize, epsilon: f64) -> LowArbConfig {
    match variant {
        LowArbVariant::LogAlpha => {
            let d = (3 * alpha) as u32;
            let log_d = ceil_log2(d.max(2) as u64);
            let (palette, proposals) = if d <= 4 {
                ((d * log_d).max(2 * d).max(2), 1)
            } else {
                (d * log_d, (log_d / 2).max(1))
            };
            LowArbConfig {
                variant,
                epsilon,
                d,
                hp_epsilon: 1.0,
                iters_per_layer: 4,
                palette,
                proposals,
            }
        }
        LowArbVariant::Tradeoff => {
            let d = ((2.0 + epsilon / 2.0) * alpha as f64).floor() as u32;
            let palette = ((2.0 + epsilon) * alpha as f64).ceil() as u32;
            let log_d = ceil_log2(d.max(2) as u64);
            let iters = (2.0 * (2.0 + epsilon) / epsilon).ceil() as u32 * log_d;
            LowArbConfig {
                variant,
                epsilon,
                d,
                hp_epsilon: epsilon / 2.0,
                iters_per_layer: iters.max(1),
                palette,
                proposals: 1,
            }
        }
    }
}

impl LowArbConfig {
    /// Colors never blocked in one iteration: the lemma's free-color floor.
    pub fn free_color_floor(&self) -> u32 {
        self.palette - (self.d * self.proposals).min(self.palette)
    }
}

pub struct LowArbPartial {
    pub stage_colors: Vec<Option<u32>>,
    pub hp: HPartition,
    pub orientation: Arc<Orientation>,
    pub peel_stats: RoundStats,
    pub color_stats: RoundStats,
}

/// The randomized partial stage: computes the H-partition realizing the
/// variant's degree bound, orients, and runs the layer-scheduled proposal
/// program. Uncolored leftovers are a legitimate outcome.
pub fn low_arb_partial(
    g: &Graph,
    alpha: usize,
    cfg: &LowArbConfig,
    seed: u64,
    round_limit: usize,
) -> Result<LowArbPartial> {
    let (hp, peel_stats) = compute_h_partition(g, alpha, cfg.hp_epsilon)?;
    debug_assert_eq!(hp.d, cfg.d);
    let orientation = Arc::new(orient_from_partition(g, &hp));
    let params = ProposalParams {
        sweeps: 1,
        iters_per_layer: cfg.iters_per_layer,
        palette: cfg.palette,
        proposals: cfg.proposals,
    };
    let (stage_colors, color_stats) =
        run_proposal_stage(g, &hp, &orientation, params, seed, round_limit)?;
    Ok(LowArbPartial {
        stage_colors,
        hp,
        orientation,
        peel_stats,
        color_stats,
    })
}

/// Exact longest directed path (edge count) in an oriented residual, by
/// dynamic programming over a topological order. Detects cycles, which would
/// mean the upstream orientation was broken.
pub fn longest_residual_path(orientation: &Orientation) -> Result<usize> {
    let n = orientation.out.len();
    if n == 0 {
        return Ok(0);
    }
    let mut in_lists: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (v, outs) in orientation.out.iter().enumerate() {
        for &u in outs {
            in_lists[u as usize].push(v as u32);
        }
    }
    let mut pending: Vec<usize> = orientation.out.iter().map(Vec::len).collect();
    let mut queue: Vec<u32> = (0..n as u32).filter(|&v| pending[v as usize] == 0).collect();
    let mut len = vec![0usize; n];
    let mut processed = 0;
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        processed += 1;
        for &w in &in_lists[v as usize] {
            len[w as usize] = len[w as usize].max(len[v as usize] + 1);
            pending[w as usize] -= 1;
            if pending[w as usize] == 0 {
                queue.push(w);
            }
        }
    }
    if processed != n {
        return Err(Error::ResidualCycle);
    }
    Ok(len.into_iter().max().unwrap_or(0))
}

#[derive(Clone)]
struct FinishMsg(u32);

/// Wait-for-out-neighbors deterministic coloring. A node with `k` uncolored
/// out-neighbors waits for all `k` commits, drops those colors from its
/// `d + 1`-color block, and takes the smallest remaining one.
struct FinisherProgram {
    orientation: Arc<Orientation>,
    palette: u32,
}

struct FinisherState {
    waiting: usize,
    blocked: BitSet,
}

impl NodeProgram for FinisherProgram {
    type State = FinisherState;
    type Message = FinishMsg;
    /// `Err(node)` reports a palette exhausted by more than `d` commits.
    type Output = std::result::Result<u32, u32>;

    fn init(&self, ctx: &InitCtx<'_>) -> FinisherState {
        FinisherState {
            waiting: self.orientation.out_neighbors(ctx.node).len(),
            blocked: BitSet::with_capacity(self.palette as usize),
        }
    }

    fn on_round(
        &self,
        st: &mut FinisherState,
        ctx: &mut RoundCtx<'_, FinishMsg>,
    ) -> Option<Self::Output> {
        let out = self.orientation.out_neighbors(ctx.node);
        for (from, FinishMsg(c)) in ctx.inbox() {
            if out.binary_search(from).is_ok() {
                st.blocked.insert(*c);
                st.waiting -= 1;
            }
        }
        if st.waiting == 0 {
            return match st.blocked.first_absent_below(self.palette) {
                Some(c) => {
                    ctx.broadcast(FinishMsg(c));
                    Some(Ok(c))
                }
                None => Some(Err(ctx.node)),
            };
        }
        None
    }

    fn payload_bits(&self, _msg: &FinishMsg) -> u64 {
        ceil_log2(self.palette as u64) as u64
    }
}

/// Colors every node of the residual from a fresh `d + 1`-color block in
/// (longest residual path) + 1 rounds.
pub fn deterministic_finish(
    residual: &Graph,
    orientation: &Arc<Orientation>,
    d: u32,
    round_limit: usize,
) -> Result<(Vec<u32>, RoundStats)> {
    if residual.n() == 0 {
        return Ok((Vec::new(), RoundStats::default()));
    }
    let palette = d + 1;
    let program = FinisherProgram {
        orientation: Arc::clone(orientation),
        palette,
    };
    let outcome = sim::run(
        residual,
        &program,
        0,
        (residual.n() + 1).min(round_limit),
    );
    if !outcome.completed {
        return Err(Error::NonTermination {
            limit: round_limit,
            unhalted: outcome.outputs.iter().filter(|o| o.is_none()).count(),
        });
    }
    let mut colors = Vec::with_capacity(residual.n());
    for out in outcome.outputs {
        match out.unwrap() {
            Ok(c) => colors.push(c),
            Err(node) => {
                return Err(Error::FinisherPaletteExhausted { node, palette });
            }
        }
    }
    Ok((colors, outcome.stats))
}

/// The full low-arb pipeline: partition, randomized partial coloring, then
/// the deterministic finisher on the residual. Total palette:
/// `palette + d + 1` with disjoint blocks.
pub fn color_low_arb(
    g: &Graph,
    alpha: usize,
    variant: LowArbVariant,
    epsilon: f64,
    seed: u64,
    round_limit: usize,
) -> Result<PipelineResult> {
    let cfg = low_arb_config(variant, alpha, epsilon);
    let partial = low_arb_partial(g, alpha, &cfg, seed, round_limit)?;

    let mut coloring = ColoringState::uncolored(g.n());
    let identity: Vec<u32> = (0..g.n() as u32).collect();
    coloring.merge_stage(&identity, 0, &partial.stage_colors);
    coloring.blocks.push(PaletteBlock {
        stage: "low-arb-partial".into(),
        offset: 0,
        size: cfg.palette,
    });

    let residual = residual_of(g, &partial.orientation, &coloring);
    let residual_out = residual.orientation.max_out_degree();
    let mut stats = RoundStats::default();
    stats.absorb(&partial.peel_stats);
    stats.absorb(&partial.color_stats);
    let mut stages = vec![
        StageStat {
            stage: "hpartition".into(),
            palette_offset: 0,
            palette_size: 0,
            rounds: partial.peel_stats.rounds,
            messages: partial.peel_stats.messages,
            max_payload_bits: partial.peel_stats.max_payload_bits,
            residual_nodes: g.n(),
            residual_out_degree: partial.orientation.max_out_degree(),
        },
        StageStat {
            stage: "low-arb-partial".into(),
            palette_offset: 0,
            palette_size: cfg.palette,
            rounds: partial.color_stats.rounds,
            messages: partial.color_stats.messages,
            max_payload_bits: partial.color_stats.max_payload_bits,
            residual_nodes: residual.graph.n(),
            residual_out_degree: residual_out,
        },
    ];

    let (finish_colors, finish_stats) = deterministic_finish(
        &residual.graph,
        &Arc::new(residual.orientation),
        cfg.d,
        round_limit,
    )?;
    let finish_offset = cfg.palette;
    coloring.merge_stage(
        &residual.map,
        finish_offset,
        &finish_colors.iter().map(|&c| Some(c)).collect::<Vec<_>>(),
    );
    coloring.blocks.push(PaletteBlock {
        stage: "finisher".into(),
        offset: finish_offset,
        size: cfg.d + 1,
    });
    stats.absorb(&finish_stats);
    stages.push(StageStat {
        stage: "finisher".into(),
        palette_offset: finish_offset,
        palette_size: cfg.d + 1,
        rounds: finish_stats.rounds,
        messages: finish_stats.messages,
        max_payload_bits: finish_stats.max_payload_bits,
        residual_nodes: 0,
        residual_out_degree: 0,
    });

    Ok(PipelineResult {
        coloring,
        stats,
        stages,
        fallback_events: 0,
    })
}
