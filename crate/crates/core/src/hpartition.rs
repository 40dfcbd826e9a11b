//! H-partitions and the induced acyclic low out-degree orientation.
//!
//! An H-partition with degree `d` layers the nodes `H_1..H_ell` so that every
//! node in layer `j` has at most `d` neighbors in layers `>= j`. It is
//! computed distributively by iterative peeling: any node whose residual
//! degree is at most the threshold joins the current layer. Orienting
//! cross-layer edges toward the higher layer and same-layer edges toward the
//! higher id then gives an acyclic orientation with out-degree at most `d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::sim::{self, InitCtx, NodeProgram, RoundCtx, RoundStats};
use crate::util::ceil_log2;

/// Layer assignment per node (1-based), with the degree bound `d` it was
/// peeled under and the parameter used.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HPartition {
    pub epsilon: f64,
    pub d: u32,
    /// Measured layer count (largest index actually assigned).
    pub ell: u32,
    pub layers: Vec<u32>,
    /// A-priori size bound from `(n, epsilon)`; stage calendars are sized by
    /// this, not by the measured `ell`, since only the bound is global
    /// knowledge.
    #[serde(skip, default)]
    pub size_bound: u32,
}

impl HPartition {
    /// Upper bound on the layer count from the peeling progress argument:
    /// each step absorbs an `epsilon / (2 + epsilon)` fraction of what is
    /// left, so at most `⌈log_{(2+eps)/2} n⌉` steps run.
    pub fn layer_bound(n: usize, epsilon: f64) -> u32 {
        if n <= 1 {
            return 1;
        }
        let base = (2.0 + epsilon) / 2.0;
        (((n as f64).ln() / base.ln()).ceil() as u32).max(1)
    }

    pub fn layer_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.ell as usize + 1];
        for &l in &self.layers {
            sizes[l as usize] += 1;
        }
        sizes
    }
}

/// Per-node out-neighbor lists covering every edge exactly once.
#[derive(Clone, Debug)]
pub struct Orientation {
    pub out: Vec<Vec<u32>>,
    pub d_out: u32,
}

impl Orientation {
    #[inline]
    pub fn out_neighbors(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }

    pub fn max_out_degree(&self) -> u32 {
        self.d_out
    }

    /// Restriction to an induced subgraph given by a sorted keep list, with
    /// nodes relabeled to `0..keep.len()`.
    pub fn restrict(&self, keep: &[u32]) -> Orientation {
        let mut old_to_new = vec![u32::MAX; self.out.len()];
        for (new, &old) in keep.iter().enumerate() {
            old_to_new[old as usize] = new as u32;
        }
        let mut out = Vec::with_capacity(keep.len());
        let mut d_out = 0;
        for &old in keep {
            let list: Vec<u32> = self.out[old as usize]
                .iter()
                .filter_map(|&nb| {
                    let mapped = old_to_new[nb as usize];
                    (mapped != u32::MAX).then_some(mapped)
                })
                .collect();
            d_out = d_out.max(list.len() as u32);
            out.push(list);
        }
        Orientation { out, d_out }
    }
}

enum PeelMsg {
    Degree(u32),
    Joined,
}

impl Clone for PeelMsg {
    fn clone(&self) -> Self {
        match self {
            PeelMsg::Degree(d) => PeelMsg::Degree(*d),
            PeelMsg::Joined => PeelMsg::Joined,
        }
    }
}

/// Iterative peeling as a node program. Each peeling step costs exactly two
/// rounds: every still-unpeeled node announces its residual degree, then the
/// qualifying nodes announce that they join the current layer and halt with
/// the layer index as their output.
struct PeelProgram {
    threshold: u32,
    n: usize,
}

struct PeelState {
    residual_degree: u32,
}

impl NodeProgram for PeelProgram {
    type State = PeelState;
    type Message = PeelMsg;
    type Output = u32;

    fn init(&self, ctx: &InitCtx<'_>) -> PeelState {
        PeelState {
            residual_degree: ctx.neighbors.len() as u32,
        }
    }

    fn on_round(&self, state: &mut PeelState, ctx: &mut RoundCtx<'_, PeelMsg>) -> Option<u32> {
        let step = (ctx.round as u32).div_ceil(2);
        if ctx.round % 2 == 1 {
            // Degree-exchange round; join announcements from the previous
            // step arrive here.
            let joined = ctx
                .inbox()
                .iter()
                .filter(|(_, m)| matches!(m, PeelMsg::Joined))
                .count() as u32;
            state.residual_degree -= joined;
            ctx.broadcast(PeelMsg::Degree(state.residual_degree));
            None
        } else if state.residual_degree <= self.threshold {
            ctx.broadcast(PeelMsg::Joined);
            Some(step)
        } else {
            None
        }
    }

    fn payload_bits(&self, msg: &PeelMsg) -> u64 {
        match msg {
            PeelMsg::Degree(_) => ceil_log2(self.n as u64 + 1) as u64,
            PeelMsg::Joined => 1,
        }
    }
}

/// Raw peeling under an explicit degree threshold. `step_limit` bounds the
/// number of peeling steps before the run is declared stalled.
pub(crate) fn peel_partition(
    g: &Graph,
    threshold: u32,
    epsilon: f64,
    step_limit: u32,
) -> Result<(HPartition, RoundStats)> {
    if g.n() == 0 {
        return Ok((
            HPartition {
                epsilon,
                d: threshold,
                ell: 1,
                layers: Vec::new(),
                size_bound: 1,
            },
            RoundStats::default(),
        ));
    }
    let program = PeelProgram {
        threshold,
        n: g.n(),
    };
    let outcome = sim::run(g, &program, 0, 2 * step_limit as usize + 2);
    if !outcome.completed {
        let remaining = outcome.outputs.iter().filter(|o| o.is_none()).count();
        let layers = outcome
            .outputs
            .iter()
            .flatten()
            .copied()
            .max()
            .unwrap_or(0);
        return Err(Error::InvalidAlpha { layers, remaining });
    }
    let layers: Vec<u32> = outcome.outputs.into_iter().map(Option::unwrap).collect();
    let ell = layers.iter().copied().max().unwrap_or(1);
    Ok((
        HPartition {
            epsilon,
            d: threshold,
            ell,
            layers,
            size_bound: HPartition::layer_bound(g.n(), epsilon),
        },
        outcome.stats,
    ))
}

/// Computes an H-partition with degree `d = ⌊(2 + epsilon) * alpha⌋` and at
/// most `⌈log_{(2+eps)/2} n⌉` layers, in two simulator rounds per peeling
/// step. Fails with `InvalidAlpha` if peeling stalls, which happens exactly
/// when `alpha` understates the arboricity badly enough.
pub fn compute_h_partition(
    g: &Graph,
    alpha: usize,
    epsilon: f64,
) -> Result<(HPartition, RoundStats)> {
    assert!(alpha >= 1, "alpha must be at least 1");
    assert!(epsilon > 0.0, "epsilon must be positive");
    let threshold = ((2.0 + epsilon) * alpha as f64).floor() as u32;
    // One step of slack over the analysis bound covers the case where the
    // shrink factor lands exactly on an integer power.
    let step_limit = HPartition::layer_bound(g.n(), epsilon) + 1;
    peel_partition(g, threshold, epsilon, step_limit)
}

/// Orients cross-layer edges toward the higher layer and same-layer edges
/// toward the higher id. Out-degree is bounded by the partition degree, and
/// `(layer, id)` strictly increases along out-edges, so the result is acyclic.
pub fn orient_from_partition(g: &Graph, hp: &HPartition) -> Orientation {
    let mut out = Vec::with_capacity(g.n());
    let mut d_out = 0;
    for v in 0..g.n() as u32 {
        let lv = hp.layers[v as usize];
        let list: Vec<u32> = g
            .neighbors(v)
            .iter()
            .copied()
            .filter(|&u| {
                let lu = hp.layers[u as usize];
                lu > lv || (lu == lv && u > v)
            })
            .collect();
        d_out = d_out.max(list.len() as u32);
        out.push(list);
    }
    Orientation { out, d_out }
}

/// Nodes violating the per-node layer-degree invariant (or carrying a layer
/// index outside `1..=ell`). Empty means the partition is valid.
pub fn validate_h_partition(g: &Graph, hp: &HPartition) -> Vec<u32> {
    let mut bad = Vec::new();
    for v in 0..g.n() as u32 {
        let lv = hp.layers[v as usize];
        if lv < 1 || lv > hp.ell {
            bad.push(v);
            continue;
        }
        let same_or_higher = g
            .neighbors(v)
            .iter()
            .filter(|&&u| hp.layers[u as usize] >= lv)
            .count();
        if same_or_higher > hp.d as usize {
            bad.push(v);
        }
    }
    bad
}
