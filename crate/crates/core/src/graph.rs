//! Simple undirected graphs as symmetric adjacency lists, plus the arboricity
//! bounds and the sequential greedy oracle the distributed algorithms are
//! checked against.

use std::collections::BinaryHeap;
use std::cmp::Reverse;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::coloring::{ColoringState, PaletteBlock};
use crate::error::{Error, Result};
use crate::util::ceil_div;

/// Undirected simple graph on nodes `0..n`. Adjacency lists are sorted,
/// deduplicated, self-loop free, and symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    adj: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges and self-loops are
    /// dropped; ids `>= n` are rejected.
    pub fn from_edge_list(edges: &[(u32, u32)], n: usize) -> Result<Graph> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u as usize >= n || v as usize >= n {
                return Err(Error::IdOutOfRange { u, v, n });
            }
            if u == v {
                continue;
            }
            adj[u as usize].push(v);
            adj[v as usize].push(u);
        }
        let mut m = 0;
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
            m += list.len();
        }
        Ok(Graph { n, m: m / 2, adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: u32) -> usize {
        self.adj[v as usize].len()
    }

    #[inline]
    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.adj[v as usize]
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Each undirected edge once, as `(u, v)` with `u < v`, in sorted order.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as u32;
            list.iter().copied().filter(move |&v| u < v).map(move |v| (u, v))
        })
    }

    /// Subgraph induced by `keep` (sorted, deduplicated node ids). Returns the
    /// relabeled graph and the mapping from new ids back to the originals.
    /// The relabeling is monotone, so id-based tie-breaks are preserved.
    pub fn induced_subgraph(&self, keep: &[u32]) -> (Graph, Vec<u32>) {
        debug_assert!(keep.windows(2).all(|w| w[0] < w[1]));
        let mut old_to_new = vec![u32::MAX; self.n];
        for (new, &old) in keep.iter().enumerate() {
            old_to_new[old as usize] = new as u32;
        }
        let mut adj = Vec::with_capacity(keep.len());
        let mut m = 0;
        for &old in keep {
            let list: Vec<u32> = self                .adj[old as usize]
                .iter()
                .filter_map(|&nb| {
                    let mapped = old_to_new[nb as usize];
                    (mapped != u32::MAX).then_some(mapped)
                })
                .collect();
            m += list.len();
            adj.push(list);
        }
        (
            Graph {
                n: keep.len(),
                m: m / 2,
                adj,
            },
            keep.to_vec(),
        )
    }

    /// Canonical edge-list text: `n m` on the first line, then one `u v` pair
    /// per line with `u < v`, ascending. `#` starts a comment.
    pub fn to_edge_list_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.m);
        for (u, v) in self.edges() {
            let _ = writeln!(out, "{} {}", u, v);
        }
        out
    }

    pub fn from_edge_list_text(text: &str) -> Result<Graph> {
        let mut header: Option<(usize, usize)> = None;
        let mut edges = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut it = line.split_whitespace();
            let a = it.next();
            let b = it.next();
            let (a, b) = match (a, b, it.next()) {
                (Some(a), Some(b), None) => (a, b),
                _ => {
                    return Err(Error::EdgeListParse {
                        line: idx + 1,
                        msg: "expected exactly two integers".into(),
                    })
                }
            };
            let parse = |s: &str| -> Result<u64> {
                s.parse().map_err(|_| Error::EdgeListParse {
                    line: idx + 1,
                    msg: format!("not an integer: {s:?}"),
                })
            };
            let (a, b) = (parse(a)?, parse(b)?);
            if header.is_none() {
                header = Some((a as usize, b as usize));
            } else {
                edges.push((a as u32, b as u32));
            }
        }
        let (n, m) = header.ok_or(Error::EdgeListParse {
            line: 0,
            msg: "missing `n m` header".into(),
        })?;
        let g = Graph::from_edge_list(&edges, n)?;
        if g.m() != m {
            return Err(Error::EdgeListParse {
                line: 0,
                msg: format!("header claims {m} edges, parsed {}", g.m()),
            });
        }
        Ok(g)
    }
}

/// Arboricity bounds for a graph: a cheap density lower bound, the
/// generator-declared upper bound, and (on tiny graphs) the exact value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArboricityEstimate {
    pub lower: usize,
    pub declared: usize,
    pub exact: Option<usize>,
}

pub const EXACT_ARBORICITY_LIMIT: usize = 16;

/// `⌈m / (n-1)⌉` over the whole graph: a lower bound on the maximum density
/// ratio over all subgraphs, hence on the arboricity. Defined as 0 for n < 2.
pub fn density_lower_bound(g: &Graph) -> usize {
    if g.n() < 2 {
        return 0;
    }
    ceil_div(g.m() as u64, g.n() as u64 - 1) as usize
}

/// Exact arboricity by enumerating every vertex subset with at least two
/// nodes and maximizing `⌈edges / (nodes-1)⌉`. Exponential; refuses n > 16.
pub fn exact_arboricity_bruteforce(g: &Graph) -> Result<usize> {
    let n = g.n();
    if n > EXACT_ARBORICITY_LIMIT {
        return Err(Error::GraphTooLargeForExact {
            n,
            limit: EXACT_ARBORICITY_LIMIT,
        });
    }
    let mut nb_mask = vec![0u32; n];
    for (v, mask) in nb_mask.iter_mut().enumerate() {
        for &u in g.neighbors(v as u32) {
            *mask |= 1 << u;
        }
    }
    let mut best = 0usize;
    for mask in 1u32..(1 << n) {
        let count = mask.count_ones();
        if count < 2 {
            continue;
        }
        let mut edges = 0u32;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            edges += (nb_mask[v] & mask).count_ones();
        }
        edges /= 2;
        best = best.max(ceil_div(edges as u64, count as u64 - 1) as usize);
    }
    Ok(best)
}

pub fn arboricity_estimate(g: &Graph, declared: usize) -> ArboricityEstimate {
    ArboricityEstimate {
        lower: density_lower_bound(g),
        declared,
        exact: exact_arboricity_bruteforce(g).ok(),
    }
}

/// Degeneracy ordering by min-degree peeling (lowest id wins ties), returned
/// in removal order. Each node keeps at most `2*alpha - 1` later neighbors;
/// if some node exceeds that, the declared arboricity was too small.
pub fn degeneracy_ordering(g: &Graph, declared_alpha: usize) -> Result<Vec<u32>> {
    let n = g.n();
    let cap = 2 * declared_alpha;
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v as u32)).collect();
    let mut removed = vec![false; n];
    let mut heap: BinaryHeap<Reverse<(usize, u32)>> = (0..n)
        .map(|v| Reverse((deg[v], v as u32)))
        .collect();
    let mut order = Vec::with_capacity(n);
    while let Some(Reverse((d, v))) = heap.pop() {
        if removed[v as usize] || d != deg[v as usize] {
            continue; // stale entry
        }
        if d >= cap {
            return Err(Error::DeclaredAlphaTooSmall {
                declared: declared_alpha,
                node: v,
                later_neighbors: d,
            });
        }
        removed[v as usize] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if !removed[u as usize] {
                deg[u as usize] -= 1;
                heap.push(Reverse((deg[u as usize], u)));
            }
        }
    }
    Ok(order)
}

/// Sequential greedy oracle: color the degeneracy ordering from back to
/// front, each node taking the smallest color unused by its later neighbors.
/// Uses at most `2 * declared_alpha` colors.
pub fn greedy_degeneracy_coloring(g: &Graph, declared_alpha: usize) -> Result<ColoringState> {
    let order = degeneracy_ordering(g, declared_alpha)?;
    let n = g.n();
    let palette = (2 * declared_alpha.max(1)) as u32;
    let mut pos = vec![0usize; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    let mut colors: Vec<Option<u32>> = vec![None; n];
    let mut used = vec![false; palette as usize + 1];
    for &v in order.iter().rev() {
        let mut touched = Vec::new();
        for &u in g.neighbors(v) {
            if pos[u as usize] > pos[v as usize] {
                let c = colors[u as usize].expect("later neighbor already colored") as usize;
                used[c] = true;
                touched.push(c);
            }
        }
        let c = (0..).find(|&c| !used[c as usize]).unwrap();
        debug_assert!(c < palette);
        colors[v as usize] = Some(c);
        for t in touched {
            used[t] = false;
        }
    }
    Ok(ColoringState {
        colors,
        blocks: vec![PaletteBlock {
            stage: "greedy".into(),
            offset: 0,
            size: palette,
        }],
    })
}
