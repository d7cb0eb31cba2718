use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::census::{triple_census, TripleSource};
use super::{and_popcount, BitIter, Graph};

#[derive(Clone, Debug)]
pub struct IsoOptions {
    pub deadline: Option<Instant>,
    /// search-tree node cap
    pub max_nodes: u64,
    /// vertex count up to which per-vertex triangle profiles are computed
    pub profile_limit: usize,
}

impl Default for IsoOptions {
    fn default() -> IsoOptions {
        IsoOptions { deadline: None, max_nodes: 5_000_000, profile_limit: 1500 }
    }
}

/// Why two graphs are not isomorphic. Each variant can be re-checked from the
/// graphs alone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum IsoCertificate {
    VertexCount { left: usize, right: usize },
    EdgeCount { left: usize, right: usize },
    DegreeSequence { degree: usize, left: usize, right: usize },
    /// frequency of a triangle common-neighbour value
    TripleHistogram { value: u64, left: u64, right: u64 },
    /// number of vertices carrying a given triangle profile
    /// (value -> triangles through the vertex with that value)
    VertexProfile { profile: Vec<(u64, u64)>, left: usize, right: usize },
    /// colour classes diverge after this many refinement rounds
    Refinement { round: usize, left_classes: usize, right_classes: usize },
    /// the individualization-refinement search found no bijection
    ExhaustedSearch { nodes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum IsoVerdict {
    /// `mapping[v]` is the image in the second graph of vertex `v`
    Isomorphic { mapping: Vec<usize>, nodes: u64 },
    NonIsomorphic { certificate: IsoCertificate },
    Undecided { reason: String, nodes: u64 },
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> Option<bool> {
        match self {
            IsoVerdict::Isomorphic { .. } => Some(true),
            IsoVerdict::NonIsomorphic { .. } => Some(false),
            IsoVerdict::Undecided { .. } => None,
        }
    }
}

/// Decides isomorphism: invariants first, then individualization-refinement
/// backtracking. A returned mapping has been checked edge by edge.
pub fn is_isomorphic(g1: &Graph, g2: &Graph, opts: &IsoOptions) -> IsoVerdict {
    let non = |certificate| IsoVerdict::NonIsomorphic { certificate };
    let n = g1.n();
    if n != g2.n() {
        return non(IsoCertificate::VertexCount { left: n, right: g2.n() });
    }
    let (m1, m2) = (g1.edge_count(), g2.edge_count());
    if m1 != m2 {
        return non(IsoCertificate::EdgeCount { left: m1, right: m2 });
    }
    if let Some(c) = compare_degrees(g1, g2) {
        return non(c);
    }
    if g1.same_edges(g2) {
        return IsoVerdict::Isomorphic { mapping: (0..n).collect(), nodes: 0 };
    }
    let mut colours = vec![0u32; 2 * n];
    for v in 0..n {
        colours[v] = g1.degree(v) as u32;
        colours[n + v] = g2.degree(v) as u32;
    }
    if n <= opts.profile_limit {
        let c1 = triple_census(g1, &TripleSource::AllAdjacent);
        let c2 = triple_census(g2, &TripleSource::AllAdjacent);
        for value in c1.histogram.keys().chain(c2.histogram.keys()) {
            let (l, r) = (c1.histogram.get(value).copied().unwrap_or(0), c2.histogram.get(value).copied().unwrap_or(0));
            if l != r {
                return non(IsoCertificate::TripleHistogram { value: *value, left: l, right: r });
            }
        }
        let p1 = vertex_profiles(g1);
        let p2 = vertex_profiles(g2);
        let mut index: BTreeMap<&Vec<(u64, u64)>, [usize; 2]> = BTreeMap::new();
        for p in &p1 {
            index.entry(p).or_default()[0] += 1;
        }
        for p in &p2 {
            index.entry(p).or_default()[1] += 1;
        }
        if let Some((p, c)) = index.iter().find(|(_, c)| c[0] != c[1]) {
            return non(IsoCertificate::VertexProfile { profile: (*p).clone(), left: c[0], right: c[1] });
        }
        let ids: BTreeMap<&Vec<(u64, u64)>, u32> = index.keys().enumerate().map(|(i, p)| (*p, i as u32)).collect();
        for v in 0..n {
            colours[v] = ids[&p1[v]];
            colours[n + v] = ids[&p2[v]];
        }
    }
    let mut search = Search { g1, g2, n, nodes: 0, opts, aborted: None };
    let refined = match search.refine(colours) {
        Ok(c) => c,
        Err(round) => {
            return non(IsoCertificate::Refinement { round: round.0, left_classes: round.1, right_classes: round.2 });
        }
    };
    match search.descend(refined) {
        Some(mapping) => IsoVerdict::Isomorphic { mapping, nodes: search.nodes },
        None => match search.aborted {
            Some(reason) => IsoVerdict::Undecided { reason, nodes: search.nodes },
            None => non(IsoCertificate::ExhaustedSearch { nodes: search.nodes }),
        },
    }
}

fn compare_degrees(g1: &Graph, g2: &Graph) -> Option<IsoCertificate> {
    let mut h: BTreeMap<usize, [usize; 2]> = BTreeMap::new();
    for v in 0..g1.n() {
        h.entry(g1.degree(v)).or_default()[0] += 1;
        h.entry(g2.degree(v)).or_default()[1] += 1;
    }
    h.into_iter()
        .find(|(_, c)| c[0] != c[1])
        .map(|(degree, c)| IsoCertificate::DegreeSequence { degree, left: c[0], right: c[1] })
}

/// For every vertex, how many triangles through it have each common-neighbour
/// count.
pub(crate) fn vertex_profiles(g: &Graph) -> Vec<Vec<(u64, u64)>> {
    let n = g.n();
    let mut maps: Vec<BTreeMap<u64, u64>> = vec![BTreeMap::new(); n];
    let mut ab = vec![0u64; g.words()];
    for a in 0..n {
        for b in g.neighbors(a).filter(|&b| b > a) {
            for ((x, &p), &r) in ab.iter_mut().zip(g.row(a)).zip(g.row(b)) {
                *x = p & r;
            }
            for c in BitIter::new(&ab).filter(|&c| c > b) {
                let value = and_popcount(&ab, g.row(c)) as u64;
                for v in [a, b, c] {
                    *maps[v].entry(value).or_insert(0) += 1;
                }
            }
        }
    }
    maps.into_iter().map(|m| m.into_iter().collect()).collect()
}

struct Search<'a> {
    g1: &'a Graph,
    g2: &'a Graph,
    n: usize,
    nodes: u64,
    opts: &'a IsoOptions,
    aborted: Option<String>,
}

impl Search<'_> {
    /// Joint colour refinement on the disjoint union. Colour ids are ranks
    /// of sorted signatures, so they mean the same thing on both sides.
    /// On divergence returns (round, classes left, classes right).
    fn refine(&self, mut colours: Vec<u32>) -> Result<Vec<u32>, (usize, usize, usize)> {
        let n = self.n;
        let mut classes = count_classes(&colours);
        let mut round = 0;
        loop {
            let k = classes;
            let mut cnt = vec![0u32; k];
            let mut sigs: Vec<(Vec<u32>, usize)> = Vec::with_capacity(2 * n);
            for v in 0..2 * n {
                let (g, local) = if v < n { (self.g1, v) } else { (self.g2, v - n) };
                let off = if v < n { 0 } else { n };
                let mut touched = Vec::new();
                for u in g.neighbors(local) {
                    let c = colours[off + u] as usize;
                    if cnt[c] == 0 {
                        touched.push(c as u32);
                    }
                    cnt[c] += 1;
                }
                touched.sort_unstable();
                let mut sig = Vec::with_capacity(1 + 2 * touched.len());
                sig.push(colours[v]);
                for c in touched {
                    sig.push(c);
                    sig.push(cnt[c as usize]);
                    cnt[c as usize] = 0;
                }
                sigs.push((sig, v));
            }
            sigs.sort_unstable();
            let mut next = vec![0u32; 2 * n];
            let mut id = 0u32;
            let mut hist: Vec<[usize; 2]> = Vec::new();
            for i in 0..sigs.len() {
                if i > 0 && sigs[i].0 != sigs[i - 1].0 {
                    id += 1;
                }
                if hist.len() <= id as usize {
                    hist.push([0, 0]);
                }
                let v = sigs[i].1;
                next[v] = id;
                hist[id as usize][usize::from(v >= n)] += 1;
            }
            round += 1;
            if hist.iter().any(|h| h[0] != h[1]) {
                let left = hist.iter().filter(|h| h[0] > 0).count();
                let right = hist.iter().filter(|h| h[1] > 0).count();
                return Err((round, left, right));
            }
            let new_classes = id as usize + 1;
            colours = next;
            if new_classes == classes {
                return Ok(colours);
            }
            classes = new_classes;
        }
    }

    fn descend(&mut self, colours: Vec<u32>) -> Option<Vec<usize>> {
        self.nodes += 1;
        if self.nodes >= self.opts.max_nodes {
            self.aborted.get_or_insert_with(|| format!("node budget of {} exhausted", self.opts.max_nodes));
        }
        if self.nodes % 256 == 0 && self.opts.deadline.is_some_and(|d| Instant::now() > d) {
            self.aborted.get_or_insert_with(|| "deadline reached".to_string());
        }
        if self.aborted.is_some() {
            return None;
        }
        let n = self.n;
        let classes = count_classes(&colours);
        if classes == n {
            let mut by_colour = vec![0usize; n];
            for v in 0..n {
                by_colour[colours[n + v] as usize] = v;
            }
            let mapping: Vec<usize> = (0..n).map(|v| by_colour[colours[v] as usize]).collect();
            return verify_mapping(self.g1, self.g2, &mapping).then_some(mapping);
        }
        // target: smallest non-singleton class, lowest colour on ties
        let mut size = vec![0usize; classes];
        for &c in &colours[..n] {
            size[c as usize] += 1;
        }
        let target = (0..classes).filter(|&c| size[c] > 1).min_by_key(|&c| (size[c], c))? as u32;
        let v = (0..n).find(|&v| colours[v] == target)?;
        let candidates: Vec<usize> = (0..n).filter(|&w| colours[n + w] == target).collect();
        for w in candidates {
            let mut c = colours.clone();
            c[v] = classes as u32;
            c[n + w] = classes as u32;
            if let Ok(refined) = self.refine(c) {
                if let Some(m) = self.descend(refined) {
                    return Some(m);
                }
            }
            if self.aborted.is_some() {
                return None;
            }
        }
        None
    }
}

fn count_classes(colours: &[u32]) -> usize {
    colours.iter().copied().max().map_or(0, |m| m as usize + 1)
}

/// Edge-by-edge check that `mapping` is an isomorphism from `g1` to `g2`.
pub fn verify_mapping(g1: &Graph, g2: &Graph, mapping: &[usize]) -> bool {
    let n = g1.n();
    if g2.n() != n || mapping.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &m in mapping {
        if m >= n || seen[m] {
            return false;
        }
        seen[m] = true;
    }
    (0..n).all(|v| (0..n).all(|u| g1.has_edge(v, u) == g2.has_edge(mapping[v], mapping[u])))
}
