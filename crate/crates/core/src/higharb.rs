//! The high-arboricity pipeline: a first partial coloring over a
//! `(2 + 2eps/3) * alpha` palette that collapses the residual arboricity by a
//! constant-times-epsilon factor, then a tetration-scheduled sequence of
//! two-iteration phases whose degree bounds fall as `d / (2↑↑i)`, and finally
//! a finisher on the `O(log n)`-degree leftover. Phase degree claims are
//! Chernoff-regime statements; below the explicit expected-degree guard they
//! are measured, not asserted, and a failed recomputation falls back to a
//! fresh standard partition rather than aborting.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coloring::{run_proposal_stage, ColoringState, PaletteBlock, ProposalParams};
use crate::error::Result;
use crate::graph::Graph;
use crate::hpartition::{
    compute_h_partition, orient_from_partition, peel_partition, validate_h_partition, HPartition,
    Orientation,
};
use crate::lowarb::{color_low_arb, LowArbVariant};
use crate::linial::linial_color_loop;
use crate::pipeline::{residual_of, PipelineResult, Residual, StageStat};
use crate::sim::RoundStats;
use crate::util::ceil_div;

/// `2 ↑↑ i`, saturating at `2^63`: 1, 2, 4, 16, 65536, ...
pub fn tetration2(i: u32) -> u64 {
    let mut v: u64 = 1;
    for _ in 0..i {
        if v >= 63 {
            return 1 << 63;
        }
        v = 1 << v;
    }
    v
}

/// `base ↑↑ i` in floating point, saturating at `f64::MAX`.
pub fn tetration(base: f64, i: u32) -> f64 {
    let mut v = 1.0f64;
    for _ in 0..i {
        if v > 1024.0 {
            return f64::MAX;
        }
        v = base.powf(v);
    }
    v
}

/// One phase of the second partial coloring: degree bound `d_i`, per-sweep
/// palette `q_i`, and proposals per node `f_i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PhaseStep {
    pub i: u32,
    pub d_i: u32,
    pub q_i: u32,
    pub f_i: u32,
}

/// `d_i = ⌈d / 2↑↑i⌉`, `q_i = ⌊12d / 2^i⌋`, `f_i = ⌊q_i / (2 d_i)⌋`.
/// With these roundings `f_i * d_i <= q_i / 2` always holds, and the two-sweep
/// palette total over all phases telescopes to at most `48 d` exactly.
pub fn phase_schedule(d: u32, i: u32) -> PhaseStep {
    let d_i = ceil_div(d as u64, tetration2(i)).max(1) as u32;
    let q_i = ((12 * d as u64) >> i.min(63)) as u32;
    let f_i = q_i / (2 * d_i);
    PhaseStep { i, d_i, q_i, f_i }
}

/// All phases that keep a usable proposal count, a strictly falling degree
/// bound, and (unless `degree_guard` is lowered) an expected residual degree
/// inside the concentration regime `d_i >= degree_guard * ln n`.
pub fn full_schedule(d: u32, n: usize, degree_guard: f64) -> Vec<PhaseStep> {
    let mut steps = Vec::new();
    let floor = degree_guard * (n.max(2) as f64).ln();
    let mut prev_d = u32::MAX;
    for i in 0.. {
        let step = phase_schedule(d, i);
        if step.f_i < 1 || step.q_i < 1 || step.d_i >= prev_d {
            break;
        }
        if (step.d_i as f64) < floor {
            break;
        }
        prev_d = step.d_i;
        steps.push(step);
    }
    steps
}

/// Iteration count for the first partial coloring with inner parameter
/// `eps = epsilon / 3`: `⌈(1+eps)/eps⌉ * log2(300/eps)`, rounded up.
pub fn first_partial_iterations(eps: f64) -> u32 {
    let per_unit = ((1.0 + eps) / eps).ceil();
    (per_unit * (300.0 / eps).log2()).ceil() as u32
}

/// First partial coloring: one proposal per iteration from a
/// `⌈(2 + 2eps/3) * alpha⌉` palette, layers processed top-down on the
/// epsilon/3-partition. Returns the stage colors and the palette size.
pub fn first_partial_coloring(
    g: &Graph,
    hp: &HPartition,
    orientation: &Arc<Orientation>,
    alpha: usize,
    epsilon: f64,
    seed: u64,
    round_limit: usize,
) -> Result<(Vec<Option<u32>>, u32, RoundStats)> {
    let eps = epsilon / 3.0;
    let palette = ((2.0 + 2.0 * eps) * alpha as f64).ceil() as u32;
    let params = ProposalParams {
        sweeps: 1,
        iters_per_layer: first_partial_iterations(eps),
        palette,
        proposals: 1,
    };
    let (colors, stats) = run_proposal_stage(g, hp, orientation, params, seed, round_limit)?;
    Ok((colors, palette, stats))
}

/// One phase of the second partial coloring: two sweeps over the layers, one
/// iteration per layer per sweep, each sweep with a fresh `q_i` palette and
/// `f_i` proposals per node. Uses `2 q_i` colors total.
pub fn second_partial_coloring_phase(
    residual: &Graph,
    hp: &HPartition,
    orientation: &Arc<Orientation>,
    step: &PhaseStep,
    seed: u64,
    round_limit: usize,
) -> Result<(Vec<Option<u32>>, RoundStats)> {
    let params = ProposalParams {
        sweeps: 2,
        iters_per_layer: 1,
        palette: step.q_i,
        proposals: step.f_i.max(1),
    };
    run_proposal_stage(residual, hp, orientation, params, seed, round_limit)
}

/// Renumbers layer indices to `1..=ell'` preserving order, dropping gaps left
/// by fully colored layers.
pub fn compact_layers(layers: &[u32]) -> (Vec<u32>, u32) {
    let mut present: Vec<u32> = layers.to_vec();
    present.sort_unstable();
    present.dedup();
    if present.is_empty() {
        return (Vec::new(), 1);
    }
    let compacted = layers
        .iter()
        .map(|l| (present.binary_search(l).unwrap() + 1) as u32)
        .collect();
    (compacted, present.len() as u32)
}

pub struct RecomputeOutcome {
    pub hp: HPartition,
    pub stats: RoundStats,
    pub fell_back: bool,
}

/// Partition for phase `i + 1`: peels the residual with the epsilon choice
/// `16 * (1.98↑↑(i+2)) / (2↑↑(i+1))` applied to the previous phase's degree
/// guarantee `d / (1.98↑↑(i+2) * 20)`, which lands the degree at or below
/// `⌈d / 2↑↑(i+1)⌉`. If the measured residual degree is inconsistent with
/// the guarantee (the low-probability event) or peeling stalls, falls back to
/// a standard epsilon = 1 partition built from the measured degree.
pub fn recompute_h_partition(
    residual: &Graph,
    d: u32,
    next_phase: u32,
    measured_out_degree: u32,
) -> Result<RecomputeOutcome> {
    let i = next_phase - 1;
    let expected_in = d as f64 / (tetration(1.98, i + 2) * 20.0);
    let d_next = ceil_div(d as u64, tetration2(next_phase)) as u32;
    let consistent = (measured_out_degree as f64) <= expected_in.ceil();
    if consistent {
        let eps = 16.0 * tetration(1.98, i + 2) / tetration2(next_phase) as f64;
        let threshold = (((2.0 + eps) * expected_in).floor() as u32).min(d_next).max(1);
        let step_limit = HPartition::layer_bound(residual.n(), eps.min(1e9));
        if let Ok((hp, stats)) = peel_partition(residual, threshold, eps, step_limit) {
            return Ok(RecomputeOutcome {
                hp,
                stats,
                fell_back: false,
            });
        }
    }
    let alpha_fb = measured_out_degree as usize + 1;
    let (hp, stats) = compute_h_partition(residual, alpha_fb, 1.0)?;
    Ok(RecomputeOutcome {
        hp,
        stats,
        fell_back: true,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Finisher {
    /// Low-arb pipeline on the residual: `O(log n * log log n)` extra colors.
    LowArb,
    /// Cover-free reduction loop on the residual: `O(log^2 n)` extra colors,
    /// the cheaper wrap-up once alpha is at least `log^2 n`.
    Linial,
}

#[derive(Clone, Copy, Debug)]
pub struct HighArbParams {
    pub epsilon: f64,
    pub finisher: Finisher,
    /// Dispatch bound: below `alpha_threshold * log2 n` the low-arb pipeline
    /// runs instead.
    pub alpha_threshold: f64,
    /// Concentration-regime guard multiplier on `ln n` for the phase loop.
    pub degree_guard: f64,
    pub round_limit: usize,
}

impl Default for HighArbParams {
    fn default() -> Self {
        HighArbParams {
            epsilon: 1.0,
            finisher: Finisher::LowArb,
            alpha_threshold: 40.0,
            degree_guard: 40.0,
            round_limit: usize::MAX,
        }
    }
}

fn stage_stat(
    stage: &str,
    offset: u32,
    size: u32,
    stats: &RoundStats,
    residual_nodes: usize,
    residual_out: u32,
) -> StageStat {
    StageStat {
        stage: stage.to_string(),
        palette_offset: offset,
        palette_size: size,
        rounds: stats.rounds,
        messages: stats.messages,
        max_payload_bits: stats.max_payload_bits,
        residual_nodes,
        residual_out_degree: residual_out,
    }
}

/// Merges a sub-pipeline computed on a residual back into the outer run,
/// shifting its palette blocks past `offset`. Returns the palette span used.
fn absorb_sub_result(
    coloring: &mut ColoringState,
    stages: &mut Vec<StageStat>,
    stats: &mut RoundStats,
    map: &[u32],
    offset: u32,
    prefix: &str,
    sub: PipelineResult,
) -> u32 {
    let mut span = 0;
    for block in &sub.coloring.blocks {
        coloring.blocks.push(PaletteBlock {
            stage: format!("{prefix}/{}", block.stage),
            offset: offset + block.offset,
            size: block.size,
        });
        span = span.max(block.offset + block.size);
    }
    coloring.merge_stage(map, offset, &sub.coloring.colors);
    for st in sub.stages {
        stages.push(StageStat {
            stage: format!("{prefix}/{}", st.stage),
            palette_offset: if st.palette_size == 0 { 0 } else { offset + st.palette_offset },
            ..st
        });
    }
    stats.absorb(&sub.stats);
    span
}

struct Step2Outcome {
    residual: Residual,
    next_offset: u32,
    fallback_events: u32,
    phases_run: u32,
}

/// Runs the phase loop starting from an entry partition over `residual`.
#[allow(clippy::too_many_arguments)]
fn run_phase_loop(
    g: &Graph,
    coloring: &mut ColoringState,
    stages: &mut Vec<StageStat>,
    stats: &mut RoundStats,
    mut residual: Residual,
    mut hp: HPartition,
    d_base: u32,
    params: &HighArbParams,
    seed: u64,
    mut offset: u32,
) -> Result<Step2Outcome> {
    let schedule = full_schedule(d_base, g.n(), params.degree_guard);
    let mut fallback_events = 0u32;
    let mut phases_run = 0u32;
    let mut idx = 0usize;
    let max_executions = (2 * schedule.len() + 4) as u32;
    while idx < schedule.len() && residual.graph.n() > 0 && phases_run < max_executions {
        let step = schedule[idx];
        // The entry partition must actually satisfy the phase degree bound.
        if !validate_h_partition(&residual.graph, &hp).is_empty() {
            let measured = residual.orientation.max_out_degree();
            let (fb, fb_stats) =
                compute_h_partition(&residual.graph, measured as usize + 1, 1.0)?;
            stats.absorb(&fb_stats);
            fallback_events += 1;
            // Re-enter at the largest phase whose bound the fallback meets;
            // if none is consistent, the finisher takes the residual.
            let fb_d = fb.d;
            let Some(reentry) = schedule.iter().rposition(|s| s.d_i >= fb_d) else {
                break;
            };
            idx = reentry;
            hp = fb;
            residual.orientation = orient_from_partition(&residual.graph, &hp);
            phases_run += 1;
            continue;
        }
        let orientation = Arc::new(orient_from_partition(&residual.graph, &hp));
        let (stage_colors, phase_stats) = second_partial_coloring_phase(
            &residual.graph,
            &hp,
            &orientation,
            &step,
            seed ^ (0x9e37_79b9 + step.i as u64),
            params.round_limit,
        )?;
        coloring.merge_stage(&residual.map, offset, &stage_colors);
        for sweep in 0..2u32 {
            coloring.blocks.push(PaletteBlock {
                stage: format!("phase{}/sweep{}", step.i, sweep),
                offset: offset + sweep * step.q_i,
                size: step.q_i,
            });
        }
        let old_map = residual.map.clone();
        let keep_local: Vec<u32> = stage_colors
            .iter()
            .enumerate()
            .filter_map(|(v, c)| c.is_none().then_some(v as u32))
            .collect();
        let (next_graph, local_map) = residual.graph.induced_subgraph(&keep_local);
        let next_orientation = orientation.restrict(&keep_local);
        let next_map: Vec<u32> = local_map.iter().map(|&l| old_map[l as usize]).collect();
        let measured = next_orientation.max_out_degree();
        stages.push(stage_stat(
            &format!("phase{}", step.i),
            offset,
            2 * step.q_i,
            &phase_stats,
            next_graph.n(),
            measured,
        ));
        stats.absorb(&phase_stats);
        offset += 2 * step.q_i;
        residual = Residual {
            graph: next_graph,
            map: next_map,
            orientation: next_orientation,
        };
        phases_run += 1;
        idx += 1;
        if idx >= schedule.len() || residual.graph.n() == 0 {
            break;
        }
        let rec = recompute_h_partition(
            &residual.graph,
            d_base,
            schedule[idx].i,
            residual.orientation.max_out_degree(),
        )?;
        stats.absorb(&rec.stats);
        if rec.fell_back {
            fallback_events += 1;
            let fb_d = rec.hp.d;
            let Some(reentry) = schedule.iter().rposition(|s| s.d_i >= fb_d) else {
                break;
            };
            idx = reentry;
        }
        hp = rec.hp;
        residual.orientation = orient_from_partition(&residual.graph, &hp);
    }
    Ok(Step2Outcome {
        residual,
        next_offset: offset,
        fallback_events,
        phases_run,
    })
}

#[allow(clippy::too_many_arguments)]
fn finish_residual(
    coloring: &mut ColoringState,
    stages: &mut Vec<StageStat>,
    stats: &mut RoundStats,
    residual: Residual,
    finisher: Finisher,
    offset: u32,
    round_limit: usize,
    seed: u64,
) -> Result<()> {
    if residual.graph.n() == 0 {
        return Ok(());
    }
    let alpha_fin = residual.orientation.max_out_degree() as usize + 1;
    match finisher {
        Finisher::LowArb => {
            let sub = color_low_arb(
                &residual.graph,
                alpha_fin,
                LowArbVariant::LogAlpha,
                1.0,
                seed ^ 0x00f1_4153,
                round_limit,
            )?;
            absorb_sub_result(coloring, stages, stats, &residual.map, offset, "finisher", sub);
        }
        Finisher::Linial => {
            let (hp, peel_stats) = compute_h_partition(&residual.graph, alpha_fin, 1.0)?;
            stats.absorb(&peel_stats);
            stages.push(stage_stat(
                "finisher/hpartition",
                0,
                0,
                &peel_stats,
                residual.graph.n(),
                0,
            ));
            let or = Arc::new(orient_from_partition(&residual.graph, &hp));
            let loop_result = linial_color_loop(&residual.graph, &or, hp.d)?;
            stats.absorb(&loop_result.stats);
            let span = loop_result.color_space as u32;
            coloring.merge_stage(
                &residual.map,
                offset,
                &loop_result.colors.iter().map(|&c| Some(c)).collect::<Vec<_>>(),
            );
            coloring.blocks.push(PaletteBlock {
                stage: "finisher/linial".into(),
                offset,
                size: span,
            });
            stages.push(stage_stat(
                "finisher/linial",
                offset,
                span,
                &loop_result.stats,
                0,
                0,
            ));
        }
    }
    Ok(())
}

/// The full high-arboricity pipeline. Below the dispatch threshold the
/// low-arb pipeline runs instead (recorded as its own stage prefix).
pub fn color_high_arb(
    g: &Graph,
    alpha: usize,
    params: &HighArbParams,
    seed: u64,
) -> Result<PipelineResult> {
    let n = g.n();
    let log_n = (n.max(2) as f64).log2();
    if (alpha as f64) < params.alpha_threshold * log_n {
        let mut sub = color_low_arb(
            g,
            alpha,
            LowArbVariant::LogAlpha,
            params.epsilon,
            seed,
            params.round_limit,
        )?;
        for st in &mut sub.stages {
            st.stage = format!("dispatch-low-arb/{}", st.stage);
        }
        return Ok(sub);
    }

    let mut coloring = ColoringState::uncolored(n);
    let mut stages: Vec<StageStat> = Vec::new();
    let mut stats = RoundStats::default();
    let eps = params.epsilon / 3.0;

    // Step 1 on the epsilon/3 partition of the whole graph.
    let (hp0, peel0) = compute_h_partition(g, alpha, eps)?;
    stats.absorb(&peel0);
    let or0 = Arc::new(orient_from_partition(g, &hp0));
    stages.push(stage_stat("hpartition", 0, 0, &peel0, n, or0.max_out_degree()));
    let (step1_colors, step1_palette, step1_stats) =
        first_partial_coloring(g, &hp0, &or0, alpha, params.epsilon, seed, params.round_limit)?;
    let identity: Vec<u32> = (0..n as u32).collect();
    coloring.merge_stage(&identity, 0, &step1_colors);
    coloring.blocks.push(PaletteBlock {
        stage: "step1".into(),
        offset: 0,
        size: step1_palette,
    });
    let residual1 = residual_of(g, &or0, &coloring);
    stages.push(stage_stat(
        "step1",
        0,
        step1_palette,
        &step1_stats,
        residual1.graph.n(),
        residual1.orientation.max_out_degree(),
    ));
    stats.absorb(&step1_stats);
    let mut offset = step1_palette;
    let mut fallback_events = 0u32;

    // Step 2: enter the phase loop on the inherited (restricted, compacted)
    // partition; the schedule base is the residual degree bound
    // `⌈epsilon/144 * alpha⌉` unless the measured residual exceeds it.
    let final_residual = if residual1.graph.n() > 0 {
        let claimed = ((params.epsilon / 144.0) * alpha as f64).ceil().max(1.0) as u32;
        let measured = residual1.orientation.max_out_degree();
        let d_base;
        let entry_hp;
        let keep = coloring.uncolored_nodes();
        if measured <= claimed {
            let restricted: Vec<u32> = keep
                .iter()
                .map(|&v| hp0.layers[v as usize])
                .collect();
            let (layers, ell) = compact_layers(&restricted);
            d_base = claimed;
            entry_hp = HPartition {
                epsilon: eps,
                d: claimed,
                ell,
                layers,
                // Phase 0 keeps the step-1 partition's calendar.
                size_bound: hp0.size_bound,
            };
        } else {
            fallback_events += 1;
            let (fb, fb_stats) =
                compute_h_partition(&residual1.graph, measured as usize + 1, 1.0)?;
            stats.absorb(&fb_stats);
            d_base = fb.d;
            entry_hp = fb;
        }
        let entry_orientation = orient_from_partition(&residual1.graph, &entry_hp);
        let entry = Residual {
            graph: residual1.graph,
            map: residual1.map,
            orientation: entry_orientation,
        };
        let outcome = run_phase_loop(
            g,
            &mut coloring,
            &mut stages,
            &mut stats,
            entry,
            entry_hp,
            d_base,
            params,
            seed,
            offset,
        )?;
        offset = outcome.next_offset;
        fallback_events += outcome.fallback_events;
        outcome.residual
    } else {
        residual1
    };

    finish_residual(
        &mut coloring,
        &mut stages,
        &mut stats,
        final_residual,
        params.finisher,
        offset,
        params.round_limit,
        seed,
    )?;

    Ok(PipelineResult {
        coloring,
        stats,
        stages,
        fallback_events,
    })
}

/// The `O(alpha)`-palette composition: skip step 1, repeatedly apply the
/// phase schedule to the residual (each level re-partitioned at epsilon = 1),
/// and finish with the low-arb pipeline once the schedule empties.
pub fn color_step2_recurse(
    g: &Graph,
    alpha: usize,
    params: &HighArbParams,
    seed: u64,
) -> Result<PipelineResult> {
    let mut coloring = ColoringState::uncolored(g.n());
    let mut stages: Vec<StageStat> = Vec::new();
    let mut stats = RoundStats::default();
    let mut fallback_events = 0u32;
    let mut offset = 0u32;

    let identity: Vec<u32> = (0..g.n() as u32).collect();
    let (hp, peel_stats) = compute_h_partition(g, alpha, 1.0)?;
    stats.absorb(&peel_stats);
    let orientation = orient_from_partition(g, &hp);
    let mut residual = Residual {
        graph: g.clone(),
        map: identity,
        orientation,
    };
    let mut entry_hp = hp;
    let max_levels = (g.n().max(4) as f64).log2().log2().ceil() as u32 + 4;
    for _level in 0..max_levels {
        if residual.graph.n() == 0 {
            break;
        }
        let d_base = entry_hp.d;
        if full_schedule(d_base, g.n(), params.degree_guard).is_empty() {
            break;
        }
        let outcome = run_phase_loop(
            g,
            &mut coloring,
            &mut stages,
            &mut stats,
            residual,
            entry_hp,
            d_base,
            params,
            seed,
            offset,
        )?;
        offset = outcome.next_offset;
        fallback_events += outcome.fallback_events;
        residual = outcome.residual;
        if residual.graph.n() == 0 || outcome.phases_run == 0 {
            break;
        }
        let alpha_next = residual.orientation.max_out_degree() as usize + 1;
        let (hp_next, peel_next) = compute_h_partition(&residual.graph, alpha_next, 1.0)?;
        stats.absorb(&peel_next);
        residual.orientation = orient_from_partition(&residual.graph, &hp_next);
        entry_hp = hp_next;
    }

    finish_residual(
        &mut coloring,
        &mut stages,
        &mut stats,
        residual,
        Finisher::LowArb,
        offset,
        params.round_limit,
        seed,
    )?;

    Ok(PipelineResult {
        coloring,
        stats,
        stages,
        fallback_events,
    })
}
