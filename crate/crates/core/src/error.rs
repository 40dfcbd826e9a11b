use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("edge ({u}, {v}) references a node id out of range (n = {n})")]
    IdOutOfRange { u: u32, v: u32, n: usize },

    #[error("edge list parse error at line {line}: {msg}")]
    EdgeListParse { line: usize, msg: String },

    #[error("exact arboricity enumeration refuses n = {n} (limit {limit})")]
    GraphTooLargeForExact { n: usize, limit: usize },

    #[error(
        "declared arboricity {declared} too small: node {node} kept {later_neighbors} \
         later neighbors (> 2*alpha - 1)"
    )]
    DeclaredAlphaTooSmall {
        declared: usize,
        node: u32,
        later_neighbors: usize,
    },

    #[error("peeling stalled after {layers} layers with {remaining} nodes left; declared arboricity too small")]
    InvalidAlpha { layers: u32, remaining: usize },

    #[error("simulation hit the round limit {limit} with {unhalted} nodes still running")]
    NonTermination { limit: usize, unhalted: usize },

    #[error("cover-free family requires delta >= 1 and k >= 1 (got delta = {delta}, k = {k})")]
    BadFamilyParams { delta: u32, k: u64 },

    #[error("color reduction at node {node}: all {set_size} set elements covered; family delta smaller than the out-degree")]
    CoverFreeViolated { node: u32, set_size: u32 },

    #[error("color reduction expects colors below {k}, node {node} carries {color}")]
    ColorOutOfFamilyRange { node: u32, color: u32, k: u64 },

    #[error("finisher palette of {palette} colors exhausted at node {node}; residual out-degree exceeds the bound")]
    FinisherPaletteExhausted { node: u32, palette: u32 },

    #[error("orientation restricted to the residual contains a directed cycle")]
    ResidualCycle,

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
