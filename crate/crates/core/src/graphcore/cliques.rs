use std::collections::{BTreeMap, BTreeSet};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{and_popcount, popcount, BitIter, Graph};

#[derive(Clone, Debug, Default)]
pub struct CliqueOptions {
    /// record only these sizes (all maximal cliques are still enumerated)
    pub sizes: Option<BTreeSet<usize>>,
    /// witnesses kept per size, in discovery order
    pub witnesses_per_size: usize,
    pub deadline: Option<Instant>,
}

/// Maximal cliques counted by size.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueCensus {
    pub counts: BTreeMap<usize, u64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub witnesses: BTreeMap<usize, Vec<Vec<usize>>>,
    /// false if the deadline stopped the search
    pub complete: bool,
}

impl CliqueCensus {
    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

struct Search<'a> {
    g: &'a Graph,
    opts: &'a CliqueOptions,
    census: CliqueCensus,
    r: Vec<usize>,
    nodes: u64,
}

/// Enumerates maximal cliques by Bron-Kerbosch with Tomita pivoting.
pub fn maximal_cliques(g: &Graph, opts: &CliqueOptions) -> CliqueCensus {
    let words = g.words();
    let mut p = vec![0u64; words];
    for v in 0..g.n() {
        p[v / 64] |= 1 << (v % 64);
    }
    let x = vec![0u64; words];
    let mut s = Search {
        g,
        opts,
        census: CliqueCensus { counts: BTreeMap::new(), witnesses: BTreeMap::new(), complete: true },
        r: Vec::new(),
        nodes: 0,
    };
    s.expand(p, x);
    log::debug!("clique search visited {} nodes", s.nodes);
    s.census
}

impl Search<'_> {
    fn expand(&mut self, mut p: Vec<u64>, mut x: Vec<u64>) {
        self.nodes += 1;
        if self.nodes % (1 << 20) == 0 {
            log::info!("clique search: {} nodes, {} cliques so far", self.nodes, self.census.total());
            if self.opts.deadline.is_some_and(|d| Instant::now() > d) {
                self.census.complete = false;
            }
        }
        if !self.census.complete {
            return;
        }
        if p.iter().all(|&w| w == 0) {
            if x.iter().all(|&w| w == 0) {
                self.record();
            }
            return;
        }
        // pivot maximizing |P ∩ N(u)| over u in P ∪ X
        let mut best = usize::MAX;
        let mut best_count = 0;
        for u in BitIter::new(&p).chain(BitIter::new(&x)) {
            let c = and_popcount(&p, self.g.row(u));
            if best == usize::MAX || c > best_count {
                best = u;
                best_count = c;
            }
        }
        let candidates: Vec<usize> = {
            let nu = self.g.row(best);
            let diff: Vec<u64> = p.iter().zip(nu).map(|(&a, &b)| a & !b).collect();
            BitIter::new(&diff).collect()
        };
        for v in candidates {
            let nv = self.g.row(v);
            let p2: Vec<u64> = p.iter().zip(nv).map(|(&a, &b)| a & b).collect();
            let x2: Vec<u64> = x.iter().zip(nv).map(|(&a, &b)| a & b).collect();
            self.r.push(v);
            self.expand(p2, x2);
            self.r.pop();
            p[v / 64] &= !(1 << (v % 64));
            x[v / 64] |= 1 << (v % 64);
        }
    }

    fn record(&mut self) {
        let size = self.r.len();
        if self.opts.sizes.as_ref().is_some_and(|s| !s.contains(&size)) {
            return;
        }
        *self.census.counts.entry(size).or_insert(0) += 1;
        let w = self.census.witnesses.entry(size).or_default();
        if w.len() < self.opts.witnesses_per_size {
            let mut c = self.r.clone();
            c.sort_unstable();
            debug_assert!(is_maximal_clique(self.g, &c));
            w.push(c);
        }
        if w.is_empty() {
            self.census.witnesses.remove(&size);
        }
    }
}

/// Pairwise adjacent and not extendable by any outside vertex.
pub fn is_maximal_clique(g: &Graph, set: &[usize]) -> bool {
    for (i, &a) in set.iter().enumerate() {
        for &b in &set[i + 1..] {
            if a == b || !g.has_edge(a, b) {
                return false;
            }
        }
    }
    if set.is_empty() {
        return g.n() == 0;
    }
    let mut common = g.row(set[0]).to_vec();
    for &v in &set[1..] {
        for (c, &r) in common.iter_mut().zip(g.row(v)) {
            *c &= r;
        }
    }
    popcount(&common) == 0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_has_one_maximal_clique() {
        let c = maximal_cliques(&Graph::complete(5), &CliqueOptions::default());
        assert_eq!(c.counts, BTreeMap::from([(5, 1)]));
    }

    #[test]
    fn cycle_cliques_are_edges() {
        let c = maximal_cliques(&Graph::cycle(7), &CliqueOptions { witnesses_per_size: 3, ..Default::default() });
        assert_eq!(c.counts, BTreeMap::from([(2, 7)]));
        assert_eq!(c.witnesses[&2].len(), 3);
        for w in &c.witnesses[&2] {
            assert!(is_maximal_clique(&Graph::cycle(7), w));
        }
    }

    #[test]
    fn brute_force_agreement_on_a_small_graph() {
        // complement of C_8 plus a chord pattern
        let mut g = Graph::complete(8);
        for i in 0..8 {
            g.remove_edge(i, (i + 1) % 8);
        }
        g.remove_edge(0, 4);
        let census = maximal_cliques(&g, &CliqueOptions::default());
        let mut brute: BTreeMap<usize, u64> = BTreeMap::new();
        for mask in 1u32..256 {
            let set: Vec<usize> = (0..8).filter(|i| mask >> i & 1 == 1).collect();
            if is_maximal_clique(&g, &set) {
                *brute.entry(set.len()).or_insert(0) += 1;
            }
        }
        assert_eq!(census.counts, brute);
    }

    #[test]
    fn size_filter() {
        let mut g = Graph::complete(4);
        g.remove_edge(0, 1);
        let opts = CliqueOptions { sizes: Some(BTreeSet::from([3])), ..Default::default() };
        assert_eq!(maximal_cliques(&g, &opts).counts, BTreeMap::from([(3, 2)]));
    }
}
