//! Dense bitset graphs and the checks run on them: strong regularity,
//! common-neighbour censuses, maximal cliques, isomorphism, graph6.

mod census;
mod cliques;
mod graph6;
mod iso;
mod srg;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use census::{common_neighbors, triple_census, TripleCensus, TripleSource};
pub use cliques::{is_maximal_clique, maximal_cliques, CliqueCensus, CliqueOptions};
pub use graph6::{decode_graph6, encode_graph6, Graph6Error};
pub use iso::{is_isomorphic, verify_mapping, IsoCertificate, IsoOptions, IsoVerdict};
pub use srg::{check_srg, srg_spectrum, Eigenvalue, SpectrumError, SpectrumReport, SrgFailure, SrgParams};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("adjacency is not symmetric at ({0}, {1})")]
    Asymmetric(usize, usize),
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("vertex {0} out of range")]
    OutOfRange(usize),
}

/// Simple undirected graph stored as one bitset row per vertex.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    words: usize,
    rows: Vec<u64>,
    labels: Option<Vec<u32>>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n = {}, m = {})", self.n, self.edge_count())
    }
}

/// Serializable vertex -> point map.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexLabels(pub Vec<u32>);

impl Graph {
    pub fn empty(n: usize) -> Graph {
        let words = n.div_ceil(64).max(1);
        Graph { n, words, rows: vec![0; n * words], labels: None }
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        let mut g = Graph::empty(n);
        for &(a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::OutOfRange(a.max(b)));
            }
            if a == b {
                return Err(GraphError::Loop(a));
            }
            g.add_edge(a, b);
        }
        Ok(g)
    }

    /// Number of vertices.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Words per row.
    pub fn words(&self) -> usize {
        self.words
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[u64] {
        &self.rows[i * self.words..(i + 1) * self.words]
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.rows[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn set_bit(&mut self, i: usize, j: usize, on: bool) {
        let w = &mut self.rows[i * self.words + j / 64];
        if on {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        self.set_bit(i, j, true);
        self.set_bit(j, i, true);
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) {
        self.set_bit(i, j, false);
        self.set_bit(j, i, false);
    }

    pub fn toggle_edge(&mut self, i: usize, j: usize) {
        let on = !self.has_edge(i, j);
        self.set_bit(i, j, on);
        self.set_bit(j, i, on);
    }

    pub fn degree(&self, i: usize) -> usize {
        popcount(self.row(i)) as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|i| self.degree(i)).collect()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).sum::<usize>() / 2
    }

    pub fn neighbors(&self, i: usize) -> BitIter<'_> {
        BitIter::new(self.row(i))
    }

    pub fn labels(&self) -> Option<&[u32]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Vec<u32>) {
        assert_eq!(labels.len(), self.n, "one label per vertex");
        self.labels = Some(labels);
    }

    pub fn without_labels(mut self) -> Graph {
        self.labels = None;
        self
    }

    /// Vertex whose label is `label`.
    pub fn vertex_of_label(&self, label: u32) -> Option<usize> {
        self.labels.as_ref()?.binary_search(&label).ok()
    }

    /// Same adjacency, ignoring labels.
    pub fn same_edges(&self, other: &Graph) -> bool {
        self.n == other.n && self.rows == other.rows
    }

    /// First asymmetric or reflexive entry, if any.
    pub fn validate(&self) -> Result<(), GraphError> {
        for i in 0..self.n {
            if self.has_edge(i, i) {
                return Err(GraphError::Loop(i));
            }
            for j in self.neighbors(i) {
                if !self.has_edge(j, i) {
                    return Err(GraphError::Asymmetric(i, j));
                }
            }
        }
        Ok(())
    }

    /// `G^sigma` where vertex `i` becomes `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n);
        for i in 0..self.n {
            for j in self.neighbors(i) {
                g.set_bit(perm[i], perm[j], true);
            }
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![0u64; self.words];
        let mut frontier = vec![0u64; self.words];
        seen[0] |= 1;
        frontier[0] |= 1;
        loop {
            let mut next = vec![0u64; self.words];
            for v in BitIter::new(&frontier) {
                for (x, &r) in next.iter_mut().zip(self.row(v)) {
                    *x |= r;
                }
            }
            let mut grew = false;
            for (x, s) in next.iter_mut().zip(seen.iter_mut()) {
                *x &= !*s;
                *s |= *x;
                grew |= *x != 0;
            }
            if !grew {
                break;
            }
            frontier = next;
        }
        popcount(&seen) as usize == self.n
    }

    /// Symmetric difference of edge sets, as pairs `(i, j)` with `i < j`.
    pub fn edge_difference(&self, other: &Graph) -> Vec<(usize, usize)> {
        assert_eq!(self.n, other.n);
        let mut out = Vec::new();
        for i in 0..self.n {
            let (a, b) = (self.row(i), other.row(i));
            for (w, (&x, &y)) in a.iter().zip(b).enumerate() {
                let mut d = x ^ y;
                while d != 0 {
                    let j = w * 64 + d.trailing_zeros() as usize;
                    d &= d - 1;
                    if j > i {
                        out.push((i, j));
                    }
                }
            }
        }
        out
    }
}

/// Builds a graph from a symmetric, irreflexive predicate, evaluated on every
/// ordered pair so that asymmetry is caught.
pub fn build_graph(n: usize, adjacent: impl Fn(usize, usize) -> bool + Sync) -> Result<Graph, GraphError> {
    let mut g = Graph::empty(n);
    let words = g.words;
    g.rows.par_chunks_mut(words).enumerate().try_for_each(|(i, row)| {
        if n > 0 && adjacent(i, i) {
            return Err(GraphError::Loop(i));
        }
        for j in 0..n {
            if j != i && adjacent(i, j) {
                row[j / 64] |= 1 << (j % 64);
            }
        }
        Ok(())
    })?;
    g.validate()?;
    Ok(g)
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> u32 {
    words.iter().map(|w| w.count_ones()).sum()
}

#[inline]
pub(crate) fn and_popcount(a: &[u64], b: &[u64]) -> u32 {
    a.iter().zip(b).map(|(x, y)| (x & y).count_ones()).sum()
}

/// Iterator over the set bits of a bitset.
pub struct BitIter<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl<'a> BitIter<'a> {
    pub fn new(words: &'a [u64]) -> BitIter<'a> {
        BitIter { words, idx: 0, cur: words.first().copied().unwrap_or(0) }
    }
}

impl Iterator for BitIter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        while self.cur == 0 {
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
        let bit = self.cur.trailing_zeros() as usize;
        self.cur &= self.cur - 1;
        Some(self.idx * 64 + bit)
    }
}
