//! Synchronous round-based message-passing engine. Per round every live node
//! reads the messages sent to it in the previous round, updates its state,
//! and queues messages for the next round; a node halts by returning its
//! final output. All algorithms in this crate run as [`NodeProgram`]s here.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::graph::Graph;

pub type NodeId = u32;

/// Counted per-node random stream. Streams for distinct node labels are
/// independent substreams of the same root seed, so a run is reproducible
/// from `(seed, node label, draw index)` alone.
pub struct RngStream {
    rng: ChaCha8Rng,
    draws: u64,
}

impl RngStream {
    pub fn for_node(root: u64, node_label: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(root);
        rng.set_stream(node_label.wrapping_add(1));
        RngStream { rng, draws: 0 }
    }

    /// Uniform draw from `0..bound` (`bound >= 1`).
    #[inline]
    pub fn below(&mut self, bound: u32) -> u32 {
        self.draws += 1;
        self.rng.gen_range(0..bound)
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.draws += 1;
        self.rng.gen()
    }

    pub fn draws(&self) -> u64 {
        self.draws
    }
}

/// Execution counters for one simulator run. `max_payload_bits` measures the
/// largest single payload at the information level: each transmitted integer
/// counts as the bit width of its value range, list overhead ignored.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct RoundStats {
    pub rounds: usize,
    pub messages: u64,
    pub max_payload_bits: u64,
    #[serde(skip)]
    pub active_per_round: Vec<usize>,
}

impl RoundStats {
    pub fn absorb(&mut self, other: &RoundStats) {
        self.rounds += other.rounds;
        self.messages += other.messages;
        self.max_payload_bits = self.max_payload_bits.max(other.max_payload_bits);
        self.active_per_round.extend_from_slice(&other.active_per_round);
    }
}

/// What the engine hands a node when it is created.
pub struct InitCtx<'a> {
    pub node: NodeId,
    pub n: usize,
    pub neighbors: &'a [NodeId],
}

pub(crate) enum OutMsg<M> {
    Silent,
    Broadcast(M),
    Directed(Vec<(NodeId, M)>),
}

/// Per-round view for a node: the previous round's inbox, its own random
/// stream, and an outbox. Messages queued here are visible to neighbors in
/// the next round only.
pub struct RoundCtx<'a, M> {
    pub node: NodeId,
    pub round: usize,
    inbox: &'a [(NodeId, M)],
    rng: &'a mut RngStream,
    out: &'a mut OutMsg<M>,
}

impl<'a, M> RoundCtx<'a, M> {
    #[inline]
    pub fn inbox(&self) -> &[(NodeId, M)] {
        self.inbox
    }

    #[inline]
    pub fn rng(&mut self) -> &mut RngStream {
        self.rng
    }

    /// Queue the same message for every neighbor.
    pub fn broadcast(&mut self, msg: M) {
        *self.out = OutMsg::Broadcast(msg);
    }

    /// Queue a message for one specific neighbor.
    pub fn send(&mut self, to: NodeId, msg: M) {
        match self.out {
            OutMsg::Directed(list) => list.push((to, msg)),
            _ => *self.out = OutMsg::Directed(vec![(to, msg)]),
        }
    }
}

/// A distributed algorithm, instantiated once per run. The struct itself
/// carries the global knowledge nodes start with (n, arboricity, epsilon,
/// schedule constants); `init` derives each node's local state and `on_round`
/// advances it. Returning `Some(output)` halts the node after this round's
/// messages go out; a halted node never speaks again and its output is final.
pub trait NodeProgram {
    type State;
    type Message: Clone;
    type Output;

    fn init(&self, ctx: &InitCtx<'_>) -> Self::State;

    fn on_round(
        &self,
        state: &mut Self::State,
        ctx: &mut RoundCtx<'_, Self::Message>,
    ) -> Option<Self::Output>;

    /// Information content of one payload, for CONGEST accounting.
    fn payload_bits(&self, msg: &Self::Message) -> u64;
}

/// Result of a run: per-node outputs (`None` for nodes that never halted),
/// counters, and whether every node halted within the round limit.
#[derive(Clone, Debug)]
pub struct RunOutcome<O> {
    pub outputs: Vec<Option<O>>,
    pub stats: RoundStats,
    pub completed: bool,
}

pub fn run<P: NodeProgram>(
    g: &Graph,
    program: &P,
    seed: u64,
    round_limit: usize,
) -> RunOutcome<P::Output> {
    run_labeled(g, program, seed, round_limit, |v| v as u64)
}

/// Like [`run`], but with an explicit node -> rng-substream labeling. Used to
/// check that relabeling nodes together with their random streams permutes
/// the outputs and nothing else.
pub fn run_labeled<P: NodeProgram>(
    g: &Graph,
    program: &P,
    seed: u64,
    round_limit: usize,
    stream_label: impl Fn(NodeId) -> u64,
) -> RunOutcome<P::Output> {
    let n = g.n();
    let mut states: Vec<P::State> = (0..n)
        .map(|v| {
            program.init(&InitCtx {
                node: v as NodeId,
                n,
                neighbors: g.neighbors(v as NodeId),
            })
        })
        .collect();
    let mut rngs: Vec<RngStream> = (0..n)
        .map(|v| RngStream::for_node(seed, stream_label(v as NodeId)))
        .collect();
    let mut halted = vec![false; n];
    let mut outputs: Vec<Option<P::Output>> = (0..n).map(|_| None).collect();
    let mut inboxes: Vec<Vec<(NodeId, P::Message)>> = vec![Vec::new(); n];
    let mut next_inboxes: Vec<Vec<(NodeId, P::Message)>> = vec![Vec::new(); n];
    let mut stats = RoundStats::default();
    let mut live = n;

    while live > 0 && stats.rounds < round_limit {
        stats.rounds += 1;
        stats.active_per_round.push(live);
        let round = stats.rounds;
        for v in 0..n {
            if halted[v] {
                continue;
            }
            let mut out = OutMsg::Silent;
            let done = {
                let mut ctx = RoundCtx {
                    node: v as NodeId,
                    round,
                    inbox: &inboxes[v],
                    rng: &mut rngs[v],
                    out: &mut out,
                };
                program.on_round(&mut states[v], &mut ctx)
            };
            match out {
                OutMsg::Silent => {}
                OutMsg::Broadcast(msg) => {
                    let nbs = g.neighbors(v as NodeId);
                    stats.messages += nbs.len() as u64;
                    stats.max_payload_bits = stats.max_payload_bits.max(program.payload_bits(&msg));
                    for &nb in nbs {
                        if !halted[nb as usize] {
                            next_inboxes[nb as usize].push((v as NodeId, msg.clone()));
                        }
                    }
                }
                OutMsg::Directed(list) => {
                    for (to, msg) in list {
                        stats.messages += 1;
                        stats.max_payload_bits =
                            stats.max_payload_bits.max(program.payload_bits(&msg));
                        if !halted[to as usize] {
                            next_inboxes[to as usize].push((v as NodeId, msg));
                        }
                    }
                }
            }
            if let Some(o) = done {
                outputs[v] = Some(o);
                halted[v] = true;
                live -= 1;
            }
        }
        for inbox in inboxes.iter_mut() {
            inbox.clear();
        }
        std::mem::swap(&mut inboxes, &mut next_inboxes);
    }

    RunOutcome {
        outputs,
        stats,
        completed: live == 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::util::ceil_log2;

    /// Broadcast own id once, then halt with the smallest id heard (or own).
    struct BroadcastOnce;

    impl NodeProgram for BroadcastOnce {
        type State = ();
        type Message = u32;
        type Output = u32;

        fn init(&self, _ctx: &InitCtx<'_>) {}

        fn on_round(&self, _state: &mut (), ctx: &mut RoundCtx<'_, u32>) -> Option<u32> {
            ctx.broadcast(ctx.node);
            Some(ctx.node)
        }

        fn payload_bits(&self, _msg: &u32) -> u64 {
            ceil_log2(4) as u64
        }
    }

    fn k4() -> Graph {
        Graph::from_edge_list(&[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], 4).unwrap()
    }

    #[test]
    fn immediate_halt_on_singleton() {
        let g = Graph::from_edge_list(&[], 1).unwrap();
        let out = run(&g, &BroadcastOnce, 1, 10);
        assert!(out.completed);
        assert!(out.stats.rounds <= 1);
        assert_eq!(out.outputs[0], Some(0));
    }

    #[test]
    fn broadcast_once_on_k4_counts_directed_edges() {
        let out = run(&k4(), &BroadcastOnce, 1, 10);
        assert!(out.completed);
        assert_eq!(out.stats.rounds, 1);
        assert_eq!(out.stats.messages, 12);
    }

    /// Collects the first round in which any message arrives.
    struct ArrivalProbe;

    impl NodeProgram for ArrivalProbe {
        type State = Option<usize>;
        type Message = ();
        type Output = usize;

        fn init(&self, _ctx: &InitCtx<'_>) -> Option<usize> {
            None
        }

        fn on_round(&self, state: &mut Option<usize>, ctx: &mut RoundCtx<'_, ()>) -> Option<usize> {
            if !ctx.inbox().is_empty() && state.is_none() {
                *state = Some(ctx.round);
            }
            if ctx.round == 1 {
                ctx.broadcast(());
            }
            if ctx.round == 3 {
                return Some(state.unwrap_or(0));
            }
            None
        }

        fn payload_bits(&self, _msg: &()) -> u64 {
            1
        }
    }

    #[test]
    fn payload_sent_in_round_r_arrives_in_round_r_plus_one() {
        let g = Graph::from_edge_list(&[(0, 1)], 2).unwrap();
        let out = run(&g, &ArrivalProbe, 1, 10);
        assert_eq!(out.outputs, vec![Some(2), Some(2)]);
    }

    /// Never halts; used to exercise the round limit.
    struct Spinner;

    impl NodeProgram for Spinner {
        type State = ();
        type Message = ();
        type Output = ();

        fn init(&self, _ctx: &InitCtx<'_>) {}

        fn on_round(&self, _state: &mut (), _ctx: &mut RoundCtx<'_, ()>) -> Option<()> {
            None
        }

        fn payload_bits(&self, _msg: &()) -> u64 {
            0
        }
    }

    #[test]
    fn round_limit_reports_non_termination() {
        let out = run(&k4(), &Spinner, 1, 5);
        assert!(!out.completed);
        assert_eq!(out.stats.rounds, 5);
        assert!(out.outputs.iter().all(Option::is_none));
        assert_eq!(out.stats.active_per_round, vec![4; 5]);
    }

    #[test]
    fn round_stats_json_exposes_exactly_the_wire_fields() {
        let stats = RoundStats {
            rounds: 3,
            messages: 12,
            max_payload_bits: 9,
            active_per_round: vec![4, 4, 1],
        };
        let json: serde_json::Value = serde_json::to_value(&stats).unwrap();
        let keys: Vec<&str> = json.as_object().unwrap().keys().map(String::as_str).collect();
        assert_eq!(keys, vec!["max_payload_bits", "messages", "rounds"]);
    }

    #[test]
    fn rng_streams_reproducible_and_counted() {
        let mut a = RngStream::for_node(7, 3);
        let draws: Vec<u64> = (0..5).map(|_| a.next_u64()).collect();
        assert_eq!(a.draws(), 5);
        let mut b = RngStream::for_node(7, 3);
        let again: Vec<u64> = (0..5).map(|_| b.next_u64()).collect();
        assert_eq!(draws, again);
        let mut c = RngStream::for_node(7, 4);
        let other: Vec<u64> = (0..5).map(|_| c.next_u64()).collect();
        assert_ne!(draws, other);
    }
}
