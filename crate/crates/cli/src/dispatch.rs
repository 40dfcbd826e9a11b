//! Maps an algorithm choice onto the core pipelines. Auto-dispatch follows
//! the arboricity-versus-log-n rule: the high-arboricity pipeline when
//! `alpha >= threshold * log2 n`, the low-arboricity one otherwise; the
//! `O(alpha)` branch is the step-2-plus-recursion composition.

use arbcolor_core::error::Error;
use arbcolor_core::graph::{greedy_degeneracy_coloring, Graph};
use arbcolor_core::higharb::{color_high_arb, color_step2_recurse, Finisher, HighArbParams};
use arbcolor_core::linial::color_baseline;
use arbcolor_core::lowarb::{color_low_arb, LowArbVariant};
use arbcolor_core::pipeline::{PipelineResult, StageStat};
use arbcolor_core::sim::RoundStats;

use crate::config::Algo;

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    pub epsilon: f64,
    pub round_limit: usize,
    pub dispatch_threshold: f64,
    pub degree_guard: f64,
    pub finisher: Finisher,
}

pub fn run_algorithm(
    g: &Graph,
    alpha: usize,
    algo: Algo,
    opts: &RunOptions,
    seed: u64,
) -> Result<PipelineResult, Error> {
    let high_params = HighArbParams {
        epsilon: opts.epsilon,
        finisher: opts.finisher,
        alpha_threshold: opts.dispatch_threshold,
        degree_guard: opts.degree_guard,
        round_limit: opts.round_limit,
    };
    match algo {
        Algo::GreedyOracle => {
            let coloring = greedy_degeneracy_coloring(g, alpha)?;
            let palette = coloring.blocks[0].size;
            Ok(PipelineResult {
                coloring,
                stats: RoundStats::default(),
                stages: vec![StageStat {
                    stage: "greedy-oracle".into(),
                    palette_offset: 0,
                    palette_size: palette,
                    rounds: 0,
                    messages: 0,
                    max_payload_bits: 0,
                    residual_nodes: 0,
                    residual_out_degree: 0,
                }],
                fallback_events: 0,
            })
        }
        Algo::HpartitionLinialBaseline => color_baseline(g, alpha, opts.epsilon),
        Algo::HighArb | Algo::AutoDispatch => color_high_arb(g, alpha, &high_params, seed),
        Algo::LowArbLogalpha => color_low_arb(
            g,
            alpha,
            LowArbVariant::LogAlpha,
            opts.epsilon,
            seed,
            opts.round_limit,
        ),
        Algo::LowArbTradeoff => color_low_arb(
            g,
            alpha,
            LowArbVariant::Tradeoff,
            opts.epsilon,
            seed,
            opts.round_limit,
        ),
        Algo::Step2Recurse => color_step2_recurse(g, alpha, &high_params, seed),
    }
}
