use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{and_popcount, popcount, BitIter, Graph};

/// Common neighbours of a nonempty vertex set, as a count and a bitset.
pub fn common_neighbors(g: &Graph, set: &[usize]) -> (usize, Vec<u64>) {
    assert!(!set.is_empty(), "vertex set must be nonempty");
    let mut acc = g.row(set[0]).to_vec();
    for &v in &set[1..] {
        for (x, &r) in acc.iter_mut().zip(g.row(v)) {
            *x &= r;
        }
    }
    (popcount(&acc) as usize, acc)
}

/// Which triples a census looks at.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TripleSource {
    /// every triangle `a < b < c`
    AllAdjacent,
    /// `count` triangles drawn uniformly from (vertex, neighbour, common
    /// neighbour) walks
    Sampled { count: u64, seed: u64 },
    Explicit(Vec<[usize; 3]>),
}

/// Common-neighbour counts of vertex triples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleCensus {
    pub mode: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub triples: u64,
    pub histogram: BTreeMap<u64, u64>,
    /// one triple per value: the lexicographically least for full censuses,
    /// the first seen otherwise
    pub witnesses: BTreeMap<u64, [usize; 3]>,
}

impl TripleCensus {
    pub fn value_set(&self) -> BTreeSet<u64> {
        self.histogram.keys().copied().collect()
    }
}

struct Tally {
    counts: Vec<u64>,
    witness: Vec<Option<[usize; 3]>>,
    total: u64,
}

impl Tally {
    fn new(n: usize) -> Tally {
        Tally { counts: vec![0; n + 1], witness: vec![None; n + 1], total: 0 }
    }

    #[inline]
    fn add(&mut self, value: usize, t: [usize; 3]) {
        self.counts[value] += 1;
        self.total += 1;
        // callers feed triples in ascending order within one tally
        if self.witness[value].is_none() {
            self.witness[value] = Some(t);
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        self.total += other.total;
        for (v, c) in other.counts.into_iter().enumerate() {
            self.counts[v] += c;
        }
        for (v, w) in other.witness.into_iter().enumerate() {
            if let Some(w) = w {
                match &mut self.witness[v] {
                    Some(cur) if *cur <= w => {}
                    slot => *slot = Some(w),
                }
            }
        }
        self
    }

    fn finish(self, mode: &str, seed: Option<u64>) -> TripleCensus {
        let mut histogram = BTreeMap::new();
        let mut witnesses = BTreeMap::new();
        for (v, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                histogram.insert(v as u64, c);
                if let Some(w) = self.witness[v] {
                    witnesses.insert(v as u64, w);
                }
            }
        }
        TripleCensus { mode: mode.to_string(), seed, triples: self.total, histogram, witnesses }
    }
}

/// Frequencies of `|N(a) ∩ N(b) ∩ N(c)|` over the chosen triples.
pub fn triple_census(g: &Graph, source: &TripleSource) -> TripleCensus {
    let n = g.n();
    match source {
        TripleSource::AllAdjacent => {
            let tally = (0..n)
                .into_par_iter()
                .fold(
                    || Tally::new(n),
                    |mut t, a| {
                        census_from(g, a, &mut t);
                        t
                    },
                )
                .reduce(|| Tally::new(n), Tally::merge);
            tally.finish("all_adjacent", None)
        }
        TripleSource::Sampled { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut t = Tally::new(n);
            let mut ab = vec![0u64; g.words()];
            let mut drawn = 0;
            // bounded so that a graph without triangles cannot loop forever
            let mut attempts = 0u64;
            while drawn < *count && attempts < count.saturating_mul(64).max(64) && n > 0 {
                attempts += 1;
                let a = rng.random_range(0..n);
                let da = g.degree(a);
                if da == 0 {
                    continue;
                }
                let b = nth_bit(g.row(a), rng.random_range(0..da));
                for ((x, &ra), &rb) in ab.iter_mut().zip(g.row(a)).zip(g.row(b)) {
                    *x = ra & rb;
                }
                let dab = popcount(&ab) as usize;
                if dab == 0 {
                    continue;
                }
                let c = nth_bit(&ab, rng.random_range(0..dab));
                let value = and_popcount(&ab, g.row(c)) as usize;
                let mut tri = [a, b, c];
                tri.sort_unstable();
                t.add(value, tri);
                drawn += 1;
            }
            t.finish("sampled", Some(*seed))
        }
        TripleSource::Explicit(list) => {
            let mut t = Tally::new(n);
            for &[a, b, c] in list {
                let (value, _) = common_neighbors(g, &[a, b, c]);
                let mut tri = [a, b, c];
                tri.sort_unstable();
                t.add(value, tri);
            }
            t.finish("explicit", None)
        }
    }
}

/// All triangles whose least vertex is `a`.
fn census_from(g: &Graph, a: usize, t: &mut Tally) {
    let words = g.words();
    let ra = g.row(a);
    let mut ab = vec![0u64; words];
    for b in BitIter::new(ra).filter(|&b| b > a) {
        for ((x, &p), &r) in ab.iter_mut().zip(ra).zip(g.row(b)) {
            *x = p & r;
        }
        // c > b only
        let mut w = b / 64;
        let mut cur = ab[w] & (!0u64).checked_shl((b % 64) as u32 + 1).unwrap_or(0);
        loop {
            while cur != 0 {
                let c = w * 64 + cur.trailing_zeros() as usize;
                cur &= cur - 1;
                let value = and_popcount(&ab, g.row(c)) as usize;
                t.add(value, [a, b, c]);
            }
            w += 1;
            if w >= words {
                break;
            }
            cur = ab[w];
        }
    }
}

fn nth_bit(words: &[u64], k: usize) -> usize {
    BitIter::new(words).nth(k).expect("k < popcount")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((i, i + 5));
            edges.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &edges).unwrap()
    }

    #[test]
    fn common_neighbours_of_singletons_and_pairs() {
        let g = Graph::complete(6);
        assert_eq!(common_neighbors(&g, &[2]).0, 5);
        assert_eq!(common_neighbors(&g, &[2, 3]).0, 4);
    }

    #[test]
    fn triangle() {
        let c = triple_census(&Graph::complete(3), &TripleSource::AllAdjacent);
        assert_eq!(c.histogram, BTreeMap::from([(0, 1)]));
        assert_eq!(c.witnesses[&0], [0, 1, 2]);
    }

    #[test]
    fn complete_graph_census_and_triangle_count() {
        let g = Graph::complete(70);
        let c = triple_census(&g, &TripleSource::AllAdjacent);
        assert_eq!(c.triples, 70 * 69 * 68 / 6);
        assert_eq!(c.value_set(), BTreeSet::from([67]));
    }

    #[test]
    fn triangle_free_graph_has_empty_census() {
        let g = petersen();
        assert_eq!(triple_census(&g, &TripleSource::AllAdjacent).triples, 0);
        let s = triple_census(&g, &TripleSource::Sampled { count: 10, seed: 1 });
        assert_eq!(s.triples, 0);
    }

    #[test]
    fn sampling_is_reproducible_and_within_the_full_census() {
        let mut g = Graph::complete(12);
        for (a, b) in [(0, 1), (2, 3), (4, 9), (5, 11)] {
            g.remove_edge(a, b);
        }
        let full = triple_census(&g, &TripleSource::AllAdjacent);
        let s1 = triple_census(&g, &TripleSource::Sampled { count: 200, seed: 7 });
        let s2 = triple_census(&g, &TripleSource::Sampled { count: 200, seed: 7 });
        assert_eq!(s1, s2);
        assert_eq!(s1.triples, 200);
        assert!(s1.value_set().is_subset(&full.value_set()));
        for (v, t) in &full.witnesses {
            assert_eq!(common_neighbors(&g, t).0 as u64, *v);
        }
    }

    #[test]
    fn explicit_triples() {
        let g = Graph::complete(5);
        let c = triple_census(&g, &TripleSource::Explicit(vec![[4, 0, 2]]));
        assert_eq!(c.witnesses[&2], [0, 2, 4]);
    }
}
