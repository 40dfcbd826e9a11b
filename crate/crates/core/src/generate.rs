//! Seeded graph generators with a declared arboricity bound.
//!
//! The forest-union family realizes the forest-decomposition formulation
//! directly: the union of `alpha` edge-disjoint spanning trees has arboricity
//! at most `alpha` (merging parallel edges only shrinks edge sets). Disjoint
//! cliques on `2*alpha` nodes are the tightness instance: arboricity exactly
//! `alpha`, chromatic number `2*alpha`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    ForestUnion,
    DisjointCliques,
    RandomTree,
    Grid,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::ForestUnion => "forest-union",
            Family::DisjointCliques => "disjoint-cliques",
            Family::RandomTree => "random-tree",
            Family::Grid => "grid",
        }
    }
}

/// A generator request. Identical specs yield bit-identical graphs.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub family: Family,
    pub n: usize,
    pub alpha: usize,
    pub seed: u64,
}

impl GenSpec {
    /// The arboricity bound the generator guarantees for its output.
    pub fn declared_alpha(&self) -> usize {
        match self.family {
            Family::ForestUnion => self.alpha,
            Family::DisjointCliques => self.alpha,
            Family::RandomTree => 1,
            Family::Grid => grid_dims(self.n).map_or(1, |(r, c)| if r > 1 && c > 1 { 2 } else { 1 }),
        }
    }
}

pub fn generate(spec: &GenSpec) -> Result<Graph> {
    match spec.family {
        Family::ForestUnion => union_of_random_forests(spec.n, spec.alpha, spec.seed),
        Family::DisjointCliques => disjoint_cliques(spec.n, spec.alpha),
        Family::RandomTree => union_of_random_forests(spec.n, 1, spec.seed),
        Family::Grid => grid(spec.n),
    }
}

/// Decodes a Prüfer sequence into the edge list of the labeled tree on
/// `seq.len() + 2` nodes.
fn tree_from_prufer(seq: &[u32], n: usize) -> Vec<(u32, u32)> {
    debug_assert_eq!(seq.len() + 2, n);
    let mut degree = vec![1u32; n];
    for &v in seq {
        degree[v as usize] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    // `ptr` scans for leaves in increasing order; `leaf` tracks the current
    // smallest leaf, which may fall below `ptr` when a removal creates one.
    // Node n-1 is never consumed inside the loop and closes the tree.
    let mut ptr = 0usize;
    while degree[ptr] != 1 {
        ptr += 1;
    }
    let mut leaf = ptr;
    for &v in seq {
        edges.push((leaf as u32, v));
        degree[v as usize] -= 1;
        if degree[v as usize] == 1 && (v as usize) < ptr {
            leaf = v as usize;
        } else {
            ptr += 1;
            while degree[ptr] != 1 {
                ptr += 1;
            }
            leaf = ptr;
        }
    }
    edges.push((leaf as u32, n as u32 - 1));
    edges
}

/// Union of `alpha` independent uniformly random spanning trees (via random
/// Prüfer sequences), parallel edges merged. Arboricity at most `alpha`.
pub fn union_of_random_forests(n: usize, alpha: usize, seed: u64) -> Result<Graph> {
    assert!(n >= 2 && alpha >= 1);
    let mut edges = Vec::with_capacity(alpha * (n - 1));
    for layer in 0..alpha as u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(layer);
        if n == 2 {
            edges.push((0, 1));
            continue;
        }
        let seq: Vec<u32> = (0..n - 2).map(|_| rng.gen_range(0..n as u32)).collect();
        edges.extend(tree_from_prufer(&seq, n));
    }
    Graph::from_edge_list(&edges, n)
}

/// `⌊n / (2 * alpha)⌋` cliques on `2 * alpha` nodes each; remainder nodes
/// stay isolated. Arboricity exactly `alpha`, chromatic number `2 * alpha`.
pub fn disjoint_cliques(n: usize, alpha: usize) -> Result<Graph> {
    assert!(alpha >= 1 && n >= 2 * alpha);
    let size = 2 * alpha;
    let cliques = n / size;
    let mut edges = Vec::new();
    for c in 0..cliques {
        let base = (c * size) as u32;
        for i in 0..size as u32 {
            for j in (i + 1)..size as u32 {
                edges.push((base + i, base + j));
            }
        }
    }
    Graph::from_edge_list(&edges, n)
}

fn grid_dims(n: usize) -> Option<(usize, usize)> {
    if n == 0 {
        return None;
    }
    let rows = (n as f64).sqrt().floor() as usize;
    let rows = rows.max(1);
    let cols = n.div_ceil(rows);
    Some((rows, cols))
}

/// Near-square grid on `n` nodes laid out row-major; trailing cells are
/// simply absent. Arboricity at most 2.
pub fn grid(n: usize) -> Result<Graph> {
    assert!(n >= 1);
    let (rows, cols) = grid_dims(n).unwrap();
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if v >= n {
                continue;
            }
            let right = v + 1;
            if c + 1 < cols && right < n {
                edges.push((v as u32, right as u32));
            }
            let down = v + cols;
            if r + 1 < rows && down < n {
                edges.push((v as u32, down as u32));
            }
        }
    }
    Graph::from_edge_list(&edges, n)
}
