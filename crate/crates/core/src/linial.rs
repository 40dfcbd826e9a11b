//! Cover-free families and the out-neighbor variant of Linial's one-round
//! color reduction.
//!
//! A delta-cover-free family is a family of sets in which no member is
//! contained in the union of any delta others. Handing set `S_c` to every
//! node of color `c` lets each node pick, in a single round, an element of
//! its set not covered by its out-neighbors' sets; the picked elements form a
//! proper coloring over the ground set. Iterating with shrinking families
//! drives an n-coloring down to `O(d_out^2)` colors in `log* n`-ish rounds.
//!
//! Construction: sets are graphs of degree-`<= t` polynomials over `F_q`,
//! evaluated on a fixed set of `s = delta*t + 1` field points, inside the
//! `q * s` ground set. Two distinct polynomials agree on at most `t` points,
//! so `delta` other sets cover at most `delta * t < s` elements of a set.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::coloring::{ColoringState, PaletteBlock};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hpartition::{compute_h_partition, orient_from_partition, Orientation};
use crate::pipeline::{PipelineResult, StageStat};
use crate::sim::{self, InitCtx, NodeProgram, RoundCtx, RoundStats};
use crate::util::{ceil_log2, next_prime_at_least, BitSet};

/// An explicit delta-cover-free family of `k` sets of size `s = delta*t + 1`
/// over a ground set of size `q * s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverFreeFamily {
    pub delta: u32,
    pub k: u64,
    pub ground: u64,
    /// Field size (prime).
    pub q: u64,
    /// Polynomial degree bound.
    pub t: u32,
    /// Evaluation points per set.
    pub s: u32,
}

/// Smallest x with `x^e >= k`.
fn int_root_ceil(k: u64, e: u32) -> u64 {
    if k <= 1 {
        return 1;
    }
    let mut x = (k as f64).powf(1.0 / e as f64).floor() as u64;
    x = x.saturating_sub(1).max(1);
    while x.checked_pow(e).is_some_and(|p| p < k) {
        x += 1;
    }
    x
}

/// Builds a delta-cover-free family holding at least `k` sets, choosing the
/// polynomial degree that minimizes the ground size.
pub fn build_cover_free_family(delta: u32, k: u64) -> Result<CoverFreeFamily> {
    if delta < 1 || k < 1 {
        return Err(Error::BadFamilyParams { delta, k });
    }
    let mut best: Option<CoverFreeFamily> = None;
    for t in 1..=64u32 {
        let s = delta as u64 * t as u64 + 1;
        if let Some(b) = &best {
            if s * s >= b.ground {
                break; // ground >= s^2 from here on, no improvement possible
            }
        }
        let q = next_prime_at_least(s.max(int_root_ceil(k, t + 1)));
        let ground = q * s;
        if best.as_ref().is_none_or(|b| ground < b.ground) {
            best = Some(CoverFreeFamily {
                delta,
                k,
                ground,
                q,
                t,
                s: s as u32,
            });
        }
    }
    Ok(best.expect("t = 1 always yields a candidate"))
}

impl CoverFreeFamily {
    /// Number of distinct sets the construction can hand out (`>= k`).
    pub fn capacity(&self) -> u64 {
        self.q.saturating_pow(self.t + 1)
    }

    /// The `idx`-th set, as ground elements. The polynomial coefficients are
    /// the base-`q` digits of `idx`; element `i` is `(x_i, p(x_i))` encoded
    /// as `i * q + p(i)`.
    pub fn set(&self, idx: u64) -> Vec<u32> {
        debug_assert!(idx < self.capacity());
        let mut coeffs = [0u64; 65];
        let mut c = idx;
        for coeff in coeffs.iter_mut().take(self.t as usize + 1) {
            *coeff = c % self.q;
            c /= self.q;
        }
        (0..self.s as u64)
            .map(|x| {
                let mut val = 0u64;
                for &a in coeffs[..self.t as usize + 1].iter().rev() {
                    val = (val * x + a) % self.q;
                }
                (x * self.q + val) as u32
            })
            .collect()
    }

    /// Exhaustive cover-freeness check: no set among the first `k` is
    /// contained in the union of any `delta` others. Exponential in `delta`;
    /// meant for small families.
    pub fn check_cover_free_exhaustive(&self) -> bool {
        let k = self.k as usize;
        let words = (self.ground as usize).div_ceil(64);
        let sets: Vec<Vec<u64>> = (0..k)
            .map(|i| {
                let mut bits = vec![0u64; words];
                for e in self.set(i as u64) {
                    bits[e as usize / 64] |= 1 << (e % 64);
                }
                bits
            })
            .collect();
        let covered = |target: &[u64], chosen: &[usize]| -> bool {
            (0..words).all(|w| {
                let union = chosen.iter().fold(0u64, |acc, &j| acc | sets[j][w]);
                target[w] & !union == 0
            })
        };
        // Enumerate every delta-subset of the other sets per target.
        fn rec(
            sets: &[Vec<u64>],
            target: usize,
            start: usize,
            left: u32,
            chosen: &mut Vec<usize>,
            covered: &dyn Fn(&[u64], &[usize]) -> bool,
        ) -> bool {
            if left == 0 {
                return covered(&sets[target], chosen);
            }
            for j in start..sets.len() {
                if j == target {
                    continue;
                }
                chosen.push(j);
                if rec(sets, target, j + 1, left - 1, chosen, covered) {
                    chosen.pop();
                    return true;
                }
                chosen.pop();
            }
            false
        }
        for target in 0..k {
            let mut chosen = Vec::new();
            if rec(&sets, target, 0, self.delta.min(k as u32 - 1), &mut chosen, &covered) {
                return false;
            }
        }
        true
    }
}

/// The family sequence the reduction loop walks: start from an n-coloring and
/// shrink until the ground size stops improving.
pub fn reduction_schedule(delta: u32, n: u64) -> Result<Vec<CoverFreeFamily>> {
    let mut schedule = Vec::new();
    let mut k = n;
    loop {
        let fam = build_cover_free_family(delta, k)?;
        if fam.ground >= k {
            break;
        }
        k = fam.ground;
        schedule.push(fam);
        if schedule.len() > 128 {
            break;
        }
    }
    Ok(schedule)
}

#[derive(Clone)]
struct ColorMsg(u32);

#[derive(Clone, Debug)]
pub struct ReduceFailure {
    pub node: u32,
    pub error: &'static str,
    pub color: u32,
}

/// Applies a fixed sequence of one-round color reductions. Each node tracks
/// its out-neighbors' current colors; one reduction costs exactly one round.
struct ColorReduceProgram {
    orientation: Arc<Orientation>,
    schedule: Arc<Vec<CoverFreeFamily>>,
    initial: Option<Arc<Vec<u32>>>,
    max_ground: u64,
}

struct ReduceState {
    color: u32,
    out_colors: Vec<u32>,
    covered: BitSet,
}

impl NodeProgram for ColorReduceProgram {
    type State = ReduceState;
    type Message = ColorMsg;
    type Output = std::result::Result<u32, ReduceFailure>;

    fn init(&self, ctx: &InitCtx<'_>) -> ReduceState {
        let color_of = |v: u32| match &self.initial {
            Some(colors) => colors[v as usize],
            None => v,
        };
        let out = self.orientation.out_neighbors(ctx.node);
        ReduceState {
            color: color_of(ctx.node),
            out_colors: out.iter().map(|&u| color_of(u)).collect(),
            covered: BitSet::with_capacity(self.max_ground as usize),
        }
    }

    fn on_round(
        &self,
        st: &mut ReduceState,
        ctx: &mut RoundCtx<'_, ColorMsg>,
    ) -> Option<Self::Output> {
        let fam = &self.schedule[ctx.round - 1];
        let out = self.orientation.out_neighbors(ctx.node);
        for (from, ColorMsg(c)) in ctx.inbox() {
            if let Ok(pos) = out.binary_search(from) {
                st.out_colors[pos] = *c;
            }
        }
        if st.color as u64 >= fam.capacity() {
            return Some(Err(ReduceFailure {
                node: ctx.node,
                error: "color outside family range",
                color: st.color,
            }));
        }
        let mut marked: Vec<u32> = Vec::new();
        for &c in &st.out_colors {
            if c as u64 >= fam.capacity() {
                return Some(Err(ReduceFailure {
                    node: ctx.node,
                    error: "out-neighbor color outside family range",
                    color: c,
                }));
            }
            for e in fam.set(c as u64) {
                if st.covered.insert(e) {
                    marked.push(e);
                }
            }
        }
        let pick = fam
            .set(st.color as u64)
            .into_iter()
            .find(|&e| !st.covered.contains(e));
        for e in marked {
            st.covered.remove(e);
        }
        let new_color = match pick {
            Some(e) => e,
            None => {
                return Some(Err(ReduceFailure {
                    node: ctx.node,
                    error: "set fully covered; delta below out-degree",
                    color: st.color,
                }))
            }
        };
        st.color = new_color;
        ctx.broadcast(ColorMsg(new_color));
        if ctx.round == self.schedule.len() {
            Some(Ok(new_color))
        } else {
            None
        }
    }

    fn payload_bits(&self, msg: &ColorMsg) -> u64 {
        ceil_log2((msg.0 as u64 + 1).max(2)) as u64
    }
}

fn run_reductions(
    g: &Graph,
    orientation: &Arc<Orientation>,
    schedule: Arc<Vec<CoverFreeFamily>>,
    initial: Option<Arc<Vec<u32>>>,
) -> Result<(Vec<u32>, RoundStats)> {
    if g.n() == 0 || schedule.is_empty() {
        let colors = match &initial {
            Some(c) => c.to_vec(),
            None => (0..g.n() as u32).collect(),
        };
        return Ok((colors, RoundStats::default()));
    }
    let max_ground = schedule.iter().map(|f| f.ground).max().unwrap_or(1);
    let rounds = schedule.len();
    let program = ColorReduceProgram {
        orientation: Arc::clone(orientation),
        schedule,
        initial,
        max_ground,
    };
    let outcome = sim::run(g, &program, 0, rounds + 1);
    if !outcome.completed {
        return Err(Error::NonTermination {
            limit: rounds + 1,
            unhalted: outcome.outputs.iter().filter(|o| o.is_none()).count(),
        });
    }
    let mut colors = Vec::with_capacity(g.n());
    for out in outcome.outputs {
        match out.expect("reduction schedule halts every node") {
            Ok(c) => colors.push(c),
            Err(f) => {
                return Err(Error::CoverFreeViolated {
                    node: f.node,
                    set_size: f.color,
                })
            }
        }
    }
    Ok((colors, outcome.stats))
}

/// One cover-free reduction round on an explicit input coloring. Exactly one
/// simulator round; requires `family.delta >= max out-degree` and every input
/// color below the family capacity.
pub fn linial_reduce_once(
    g: &Graph,
    orientation: &Arc<Orientation>,
    coloring: &[u32],
    family: &CoverFreeFamily,
) -> Result<(Vec<u32>, RoundStats)> {
    run_reductions(
        g,
        orientation,
        Arc::new(vec![family.clone()]),
        Some(Arc::new(coloring.to_vec())),
    )
}

pub struct ColorLoopResult {
    pub colors: Vec<u32>,
    /// Size of the final color space (the last family's ground set, or n if
    /// no reduction was applicable).
    pub color_space: u64,
    pub iterations: usize,
    pub stats: RoundStats,
}

/// Iterated reduction from the id coloring down to the construction's
/// fixpoint, `O(d_out^2)` colors. `delta` must bound the orientation's
/// out-degree; `delta = 0` (edgeless residual) collapses to a single color.
pub fn linial_color_loop(
    g: &Graph,
    orientation: &Arc<Orientation>,
    delta: u32,
) -> Result<ColorLoopResult> {
    if delta == 0 {
        return Ok(ColorLoopResult {
            colors: vec![0; g.n()],
            color_space: 1,
            iterations: 1,
            stats: RoundStats::default(),
        });
    }
    let schedule = Arc::new(reduction_schedule(delta, g.n() as u64)?);
    let iterations = schedule.len();
    let color_space = schedule.last().map_or(g.n() as u64, |f| f.ground);
    let (colors, stats) = run_reductions(g, orientation, schedule, None)?;
    Ok(ColorLoopResult {
        colors,
        color_space,
        iterations,
        stats,
    })
}

/// The two-step baseline: H-partition plus orientation, then the reduction
/// loop on node ids. Produces an `O(alpha^2)`-size palette.
pub fn color_baseline(g: &Graph, alpha: usize, epsilon: f64) -> Result<PipelineResult> {
    let mut stats = RoundStats::default();
    let (hp, peel_stats) = compute_h_partition(g, alpha, epsilon)?;
    stats.absorb(&peel_stats);
    let orientation = Arc::new(orient_from_partition(g, &hp));
    let loop_result = linial_color_loop(g, &orientation, hp.d)?;
    stats.absorb(&loop_result.stats);
    let coloring = ColoringState {
        colors: loop_result.colors.into_iter().map(Some).collect(),
        blocks: vec![PaletteBlock {
            stage: "linial".into(),
            offset: 0,
            size: loop_result.color_space as u32,
        }],
    };
    let stages = vec![
        StageStat {
            stage: "hpartition".into(),
            palette_offset: 0,
            palette_size: 0,
            rounds: peel_stats.rounds,
            messages: peel_stats.messages,
            max_payload_bits: peel_stats.max_payload_bits,
            residual_nodes: g.n(),
            residual_out_degree: orientation.max_out_degree(),
        },
        StageStat {
            stage: "linial".into(),
            palette_offset: 0,
            palette_size: loop_result.color_space as u32,
            rounds: loop_result.stats.rounds,
            messages: loop_result.stats.messages,
            max_payload_bits: loop_result.stats.max_payload_bits,
            residual_nodes: 0,
            residual_out_degree: 0,
        },
    ];
    Ok(PipelineResult {
        coloring,
        stats,
        stages,
        fallback_events: 0,
    })
}
