//! Bipartite graphs, maximum matchings and Ore deficiency witnesses.
//!
//! Vertices are 0-based indices on each side. The left side carries the
//! order of its indices, which is how time graphs encode the order of time.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }
}

/// Bipartite graph with sorted, duplicate-free adjacency lists on both sides.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteGraph {
    left_adj: Vec<Vec<usize>>,
    right_adj: Vec<Vec<usize>>,
}

impl BipartiteGraph {
    pub fn empty(left_count: usize, right_count: usize) -> Self {
        Self {
            left_adj: vec![Vec::new(); left_count],
            right_adj: vec![Vec::new(); right_count],
        }
    }

    /// Builds a graph from `(left, right)` pairs. Repeated edges collapse.
    pub fn from_edges(left_count: usize, right_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(left_count, right_count);
        for &(l, r) in edges {
            if l >= left_count || r >= right_count {
                return Err(Error::OutOfRange(format!(
                    "edge ({l}, {r}) outside a {left_count}x{right_count} graph"
                )));
            }
            g.left_adj[l].push(r);
            g.right_adj[r].push(l);
        }
        for list in g.left_adj.iter_mut().chain(g.right_adj.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        Ok(g)
    }

    pub fn left_count(&self) -> usize {
        self.left_adj.len()
    }

    pub fn right_count(&self) -> usize {
        self.right_adj.len()
    }

    pub fn count(&self, side: Side) -> usize {
        match side {
            Side::Left => self.left_count(),
            Side::Right => self.right_count(),
        }
    }

    /// Neighbours of vertex `v` on `side`, ascending.
    pub fn adjacent(&self, side: Side, v: usize) -> &[usize] {
        match side {
            Side::Left => &self.left_adj[v],
            Side::Right => &self.right_adj[v],
        }
    }

    pub fn has_edge(&self, left: usize, right: usize) -> bool {
        self.left_adj
            .get(left)
            .is_some_and(|adj| adj.binary_search(&right).is_ok())
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left_adj
            .iter()
            .enumerate()
            .flat_map(|(l, adj)| adj.iter().map(move |&r| (l, r)))
    }

    pub fn edge_count(&self) -> usize {
        self.left_adj.iter().map(Vec::len).sum()
    }

    /// Same graph with the sides swapped.
    pub fn transposed(&self) -> Self {
        Self {
            left_adj: self.right_adj.clone(),
            right_adj: self.left_adj.clone(),
        }
    }
}

/// `γ(C)`: the union of the neighbourhoods of the vertices `c` on `side`,
/// ascending.
pub fn neighborhood(g: &BipartiteGraph, side: Side, c: &[usize]) -> Result<Vec<usize>> {
    let other = g.count(side.other());
    let mut hit = vec![false; other];
    for &v in c {
        if v >= g.count(side) {
            return Err(Error::OutOfRange(format!("vertex {v} on {side:?} side")));
        }
        for &w in g.adjacent(side, v) {
            hit[w] = true;
        }
    }
    Ok((0..other).filter(|&w| hit[w]).collect())
}

/// Vertex-disjoint set of edges, sorted by left endpoint.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matching {
    pub pairs: Vec<(usize, usize)>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.pairs.len()
    }

    /// True iff every pair is an edge of `g` and no vertex is used twice.
    pub fn is_valid_for(&self, g: &BipartiteGraph) -> bool {
        let mut left_used = vec![false; g.left_count()];
        let mut right_used = vec![false; g.right_count()];
        self.pairs.iter().all(|&(l, r)| {
            g.has_edge(l, r)
                && !std::mem::replace(&mut left_used[l], true)
                && !std::mem::replace(&mut right_used[r], true)
        })
    }
}

const FREE: usize = usize::MAX;

struct HopcroftKarp<'a> {
    g: &'a BipartiteGraph,
    mate_left: Vec<usize>,
    mate_right: Vec<usize>,
    dist: Vec<usize>,
}

impl HopcroftKarp<'_> {
    /// Layers the left vertices by alternating distance from the free ones.
    /// Returns whether some free right vertex is reachable.
    fn bfs(&mut self) -> bool {
        let mut queue = VecDeque::new();
        for (l, &mate) in self.mate_left.iter().enumerate() {
            if mate == FREE {
                self.dist[l] = 0;
                queue.push_back(l);
            } else {
                self.dist[l] = FREE;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &self.g.left_adj[l] {
                match self.mate_right[r] {
                    FREE => found = true,
                    next if self.dist[next] == FREE => {
                        self.dist[next] = self.dist[l] + 1;
                        queue.push_back(next);
                    }
                    _ => {}
                }
            }
        }
        found
    }

    fn dfs(&mut self, l: usize) -> bool {
        for i in 0..self.g.left_adj[l].len() {
            let r = self.g.left_adj[l][i];
            let next = self.mate_right[r];
            let advance = next == FREE || (self.dist[next] == self.dist[l] + 1 && self.dfs(next));
            if advance {
                self.mate_left[l] = r;
                self.mate_right[r] = l;
                return true;
            }
        }
        self.dist[l] = FREE;
        false
    }
}

/// Maximum-cardinality matching by Hopcroft–Karp. Vertices are scanned in
/// ascending order, so the result is deterministic.
pub fn max_matching(g: &BipartiteGraph) -> Matching {
    let mut hk = HopcroftKarp {
        g,
        mate_left: vec![FREE; g.left_count()],
        mate_right: vec![FREE; g.right_count()],
        dist: vec![FREE; g.left_count()],
    };
    while hk.bfs() {
        for l in 0..g.left_count() {
            if hk.mate_left[l] == FREE {
                hk.dfs(l);
            }
        }
    }
    Matching {
        pairs: hk
            .mate_left
            .iter()
            .enumerate()
            .filter(|&(_, &r)| r != FREE)
            .map(|(l, &r)| (l, r))
            .collect(),
    }
}

/// A subset `C` of side `B` together with `|B − C| + |γ(C)|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeficiencyWitness {
    pub side: Side,
    pub subset: Vec<usize>,
    pub value: usize,
}

/// `|B − C| + |γ(C)|` for `C ⊆ B = side`.
pub fn deficiency_value(g: &BipartiteGraph, side: Side, c: &[usize]) -> Result<usize> {
    let gamma = neighborhood(g, side, c)?;
    Ok(g.count(side) - c.len() + gamma.len())
}

/// Subset `C` of `side` minimising `|B − C| + |γ(C)|`; the minimum equals
/// the maximum matching size.
///
/// `C` is the set of `B`-vertices reachable by alternating paths from the
/// `B`-vertices a maximum matching leaves uncovered.
pub fn deficiency_witness(g: &BipartiteGraph, side: Side) -> DeficiencyWitness {
    let mut witness = match side {
        Side::Right => right_side_witness(g),
        Side::Left => right_side_witness(&g.transposed()),
    };
    witness.side = side;
    witness
}

fn right_side_witness(g: &BipartiteGraph) -> DeficiencyWitness {
    let m = max_matching(g);
    let mut mate_left = vec![FREE; g.left_count()];
    let mut mate_right = vec![FREE; g.right_count()];
    for &(l, r) in &m.pairs {
        mate_left[l] = r;
        mate_right[r] = l;
    }
    let mut reached_right = vec![false; g.right_count()];
    let mut reached_left = vec![false; g.left_count()];
    let mut queue: VecDeque<usize> = (0..g.right_count()).filter(|&r| mate_right[r] == FREE).collect();
    for &r in &queue {
        reached_right[r] = true;
    }
    while let Some(r) = queue.pop_front() {
        for &l in &g.right_adj[r] {
            if std::mem::replace(&mut reached_left[l], true) {
                continue;
            }
            // An unmatched left vertex here would close an augmenting path.
            let back = mate_left[l];
            debug_assert_ne!(back, FREE);
            if !std::mem::replace(&mut reached_right[back], true) {
                queue.push_back(back);
            }
        }
    }
    let subset: Vec<usize> = (0..g.right_count()).filter(|&r| reached_right[r]).collect();
    let value = g.right_count() - subset.len() + reached_left.iter().filter(|&&x| x).count();
    debug_assert_eq!(value, m.size());
    DeficiencyWitness {
        side: Side::Right,
        subset,
        value,
    }
}
