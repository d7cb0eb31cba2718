//! Certificates that two graphs are not isomorphic, found by comparing
//! triple values, maximal clique counts and colour refinement.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphcore::{
    and_popcount, common_neighbors, is_isomorphic, is_maximal_clique, maximal_cliques, triple_census, BitIter,
    CliqueCensus, CliqueOptions, Graph, IsoCertificate, IsoOptions, IsoVerdict, TripleCensus, TripleSource,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Invariant {
    Triples,
    Cliques,
    Refinement,
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Invariant::Triples => "triples",
            Invariant::Cliques => "cliques",
            Invariant::Refinement => "refinement",
        })
    }
}

impl FromStr for Invariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Invariant, String> {
        match s {
            "triples" => Ok(Invariant::Triples),
            "cliques" => Ok(Invariant::Cliques),
            "refinement" => Ok(Invariant::Refinement),
            _ => Err(format!("unknown invariant {s:?} (expected triples, cliques or refinement)")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct DistinguishOptions {
    pub order: Vec<Invariant>,
    /// graphs up to this many vertices get full triple censuses straight away
    pub exhaustive_limit: usize,
    /// a full census of one graph is attempted only below this many
    /// (estimated) triangles
    pub full_census_limit: u64,
    /// sampled triangles per graph
    pub sample: u64,
    pub seed: u64,
    /// vertices, ranked by changed edges, whose triangles are all inspected
    pub targeted_vertices: usize,
    /// clique enumeration is skipped above this many vertices
    pub clique_limit: usize,
    pub profile_limit: usize,
    /// triangles `(graph, [a, b, c])` whose values are tried first
    pub hints: Vec<(u8, [usize; 3])>,
    pub deadline: Option<Instant>,
    /// run every step even after a certificate was found
    pub all: bool,
}

impl Default for DistinguishOptions {
    fn default() -> DistinguishOptions {
        DistinguishOptions {
            order: vec![Invariant::Triples, Invariant::Cliques, Invariant::Refinement],
            exhaustive_limit: 200,
            full_census_limit: 3_000_000_000,
            sample: 20_000,
            seed: 1,
            targeted_vertices: 4,
            clique_limit: 150,
            profile_limit: 1500,
            hints: Vec::new(),
            deadline: None,
            all: false,
        }
    }
}

/// Evidence of non-isomorphism. Graphs are numbered 0 (left) and 1 (right).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "invariant", rename_all = "snake_case")]
pub enum Certificate {
    VertexCount { left: usize, right: usize },
    /// `triple` is a triangle of `graph` whose common neighbourhood has
    /// `value` vertices; no triangle of the other graph has that value
    TripleValue { graph: u8, triple: [usize; 3], value: u64, other_values: Vec<u64>, other_triangles: u64 },
    /// both graphs have the value, with different frequencies
    TripleFrequency { value: u64, left: u64, right: u64 },
    /// numbers of maximal cliques of `size` differ
    CliqueCount { size: usize, left: u64, right: u64, witness: Option<(u8, Vec<usize>)> },
    Refinement { certificate: IsoCertificate },
}

impl Certificate {
    pub fn invariant(&self) -> Invariant {
        match self {
            Certificate::VertexCount { .. } | Certificate::TripleValue { .. } | Certificate::TripleFrequency { .. } => {
                Invariant::Triples
            }
            Certificate::CliqueCount { .. } => Invariant::Cliques,
            Certificate::Refinement { .. } => Invariant::Refinement,
        }
    }

    /// Re-derives the certificate from the graphs. Triple certificates redo a
    /// full census of the graph(s) concerned.
    pub fn validate(&self, g1: &Graph, g2: &Graph) -> Result<(), CertificateError> {
        let gs = [g1, g2];
        let fail = |msg: String| Err(CertificateError::Invalid(msg));
        match self {
            Certificate::VertexCount { left, right } => {
                if g1.n() != *left || g2.n() != *right || left == right {
                    return fail(format!("vertex counts are {} and {}", g1.n(), g2.n()));
                }
            }
            Certificate::TripleValue { graph, triple, value, other_values, other_triangles } => {
                let g = gs.get(*graph as usize).ok_or(CertificateError::Invalid(format!("no graph {graph}")))?;
                let other = gs[1 - *graph as usize];
                let [a, b, c] = *triple;
                if [a, b, c].iter().any(|&v| v >= g.n()) || !(g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c)) {
                    return fail(format!("{triple:?} is not a triangle"));
                }
                let got = common_neighbors(g, &[a, b, c]).0 as u64;
                if got != *value {
                    return fail(format!("{triple:?} has {got} common neighbours, not {value}"));
                }
                let census = triple_census(other, &TripleSource::AllAdjacent);
                let values: Vec<u64> = census.value_set().into_iter().collect();
                if census.histogram.contains_key(value) || &values != other_values || census.triples != *other_triangles {
                    return fail(format!("other graph has values {values:?} over {} triangles", census.triples));
                }
            }
            Certificate::TripleFrequency { value, left, right } => {
                let l = triple_census(g1, &TripleSource::AllAdjacent).histogram.get(value).copied().unwrap_or(0);
                let r = triple_census(g2, &TripleSource::AllAdjacent).histogram.get(value).copied().unwrap_or(0);
                if l != *left || r != *right || l == r {
                    return fail(format!("value {value} occurs {l} and {r} times"));
                }
            }
            Certificate::CliqueCount { size, left, right, witness } => {
                let opts = CliqueOptions { sizes: Some([*size].into()), ..Default::default() };
                let l = maximal_cliques(g1, &opts).counts.get(size).copied().unwrap_or(0);
                let r = maximal_cliques(g2, &opts).counts.get(size).copied().unwrap_or(0);
                if l != *left || r != *right || l == r {
                    return fail(format!("{l} and {r} maximal cliques of size {size}"));
                }
                if let Some((graph, set)) = witness {
                    let g = gs.get(*graph as usize).ok_or(CertificateError::Invalid(format!("no graph {graph}")))?;
                    if set.len() != *size || set.iter().any(|&v| v >= g.n()) || !is_maximal_clique(g, set) {
                        return fail(format!("{set:?} is not a maximal clique of size {size}"));
                    }
                }
            }
            Certificate::Refinement { certificate } => {
                let opts = IsoOptions { deadline: None, max_nodes: 0, profile_limit: usize::MAX };
                match is_isomorphic(g1, g2, &opts) {
                    IsoVerdict::NonIsomorphic { .. } => {}
                    v => return fail(format!("invariants do not separate the graphs: {v:?}")),
                }
                if matches!(certificate, IsoCertificate::ExhaustedSearch { .. }) {
                    return fail("an exhausted search is not a checkable certificate".into());
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CertificateError {
    #[error("certificate does not hold: {0}")]
    Invalid(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum StepOutcome {
    Distinguished,
    Inconclusive { reason: String },
    /// not run because an earlier step already decided
    Skipped,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StepReport {
    pub invariant: Invariant,
    #[serde(flatten)]
    pub outcome: StepOutcome,
    /// wall time; None once moved elsewhere so reports stay reproducible
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DistinguishReport {
    pub certificates: Vec<Certificate>,
    pub steps: Vec<StepReport>,
}

impl DistinguishReport {
    pub fn distinguished(&self) -> bool {
        !self.certificates.is_empty()
    }
}

/// Tries each invariant in `opts.order` until one separates the graphs (or
/// all of them, with `opts.all`).
pub fn distinguish(g1: &Graph, g2: &Graph, opts: &DistinguishOptions) -> DistinguishReport {
    let mut report = DistinguishReport { certificates: Vec::new(), steps: Vec::new() };
    for &inv in &opts.order {
        if report.distinguished() && !opts.all {
            report.steps.push(StepReport { invariant: inv, outcome: StepOutcome::Skipped, ms: None });
            continue;
        }
        let start = Instant::now();
        let result = if opts.deadline.is_some_and(|d| Instant::now() > d) {
            Err("deadline passed".to_string())
        } else {
            match inv {
                Invariant::Triples => triples_step(g1, g2, opts),
                Invariant::Cliques => cliques_step(g1, g2, opts),
                Invariant::Refinement => refinement_step(g1, g2, opts),
            }
        };
        let ms = start.elapsed().as_millis() as u64;
        let outcome = match result {
            Ok(cert) => {
                log::info!("{inv}: {cert:?}");
                report.certificates.push(cert);
                StepOutcome::Distinguished
            }
            Err(reason) => {
                log::info!("{inv}: {reason}");
                StepOutcome::Inconclusive { reason }
            }
        };
        report.steps.push(StepReport { invariant: inv, outcome, ms: Some(ms) });
    }
    report
}

fn estimated_triangles(g: &Graph) -> u64 {
    if g.n() == 0 {
        return 0;
    }
    let sum: u64 = (0..g.n())
        .into_par_iter()
        .map(|a| BitIter::new(g.row(a)).map(|b| and_popcount(g.row(a), g.row(b)) as u64).sum::<u64>())
        .sum();
    sum / 6
}

/// Values of all triangles through `v`, with one witness each.
fn triangles_through(g: &Graph, v: usize) -> BTreeMap<u64, [usize; 3]> {
    let rv = g.row(v);
    BitIter::new(rv)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|b| {
            let ab: Vec<u64> = rv.iter().zip(g.row(b)).map(|(x, y)| x & y).collect();
            let mut out = BTreeMap::new();
            for c in BitIter::new(&ab).filter(|&c| c > b) {
                let value = and_popcount(&ab, g.row(c)) as u64;
                let mut t = [v, b, c];
                t.sort_unstable();
                out.entry(value).or_insert(t);
            }
            out
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, t) in b {
                a.entry(k).and_modify(|w: &mut [usize; 3]| *w = (*w).min(t)).or_insert(t);
            }
            a
        })
}

fn value_certificate(graph: u8, triple: [usize; 3], value: u64, other: &TripleCensus) -> Certificate {
    Certificate::TripleValue {
        graph,
        triple,
        value,
        other_values: other.value_set().into_iter().collect(),
        other_triangles: other.triples,
    }
}

fn compare_full(a: &TripleCensus, b: &TripleCensus) -> Result<Certificate, String> {
    let cs = [a, b];
    for (i, c) in cs.iter().enumerate() {
        let other = cs[1 - i];
        if let Some((&v, &t)) = c.witnesses.iter().find(|(v, _)| !other.histogram.contains_key(v)) {
            return Ok(value_certificate(i as u8, t, v, other));
        }
    }
    let keys: BTreeSet<u64> = a.histogram.keys().chain(b.histogram.keys()).copied().collect();
    for v in keys {
        let (l, r) = (a.histogram.get(&v).copied().unwrap_or(0), b.histogram.get(&v).copied().unwrap_or(0));
        if l != r {
            return Ok(Certificate::TripleFrequency { value: v, left: l, right: r });
        }
    }
    Err("triple histograms agree".into())
}

fn triples_step(g1: &Graph, g2: &Graph, opts: &DistinguishOptions) -> Result<Certificate, String> {
    if g1.n() != g2.n() {
        return Ok(Certificate::VertexCount { left: g1.n(), right: g2.n() });
    }
    let gs = [g1, g2];
    if g1.n() <= opts.exhaustive_limit {
        let full = [triple_census(g1, &TripleSource::AllAdjacent), triple_census(g2, &TripleSource::AllAdjacent)];
        return compare_full(&full[0], &full[1]);
    }

    // candidate values from samples and from the triangles through the
    // vertices whose neighbourhoods changed most
    let mut candidates: [BTreeMap<u64, [usize; 3]>; 2] = Default::default();
    for (i, g) in gs.iter().enumerate() {
        let s = triple_census(g, &TripleSource::Sampled { count: opts.sample, seed: opts.seed + i as u64 });
        candidates[i].extend(s.witnesses);
    }
    let mut changed = vec![0usize; g1.n()];
    for (a, b) in g1.edge_difference(g2) {
        changed[a] += 1;
        changed[b] += 1;
    }
    let mut ranked: Vec<usize> = (0..g1.n()).filter(|&v| changed[v] > 0).collect();
    ranked.sort_by_key(|&v| (std::cmp::Reverse(changed[v]), v));
    for &v in ranked.iter().take(opts.targeted_vertices) {
        for (i, g) in gs.iter().enumerate() {
            for (value, t) in triangles_through(g, v) {
                candidates[i].entry(value).or_insert(t);
            }
        }
    }
    let mut hinted: [Vec<u64>; 2] = Default::default();
    for &(i, [a, b, c]) in &opts.hints {
        let Some(g) = gs.get(i as usize) else { continue };
        if [a, b, c].iter().all(|&v| v < g.n()) && g.has_edge(a, b) && g.has_edge(a, c) && g.has_edge(b, c) {
            let value = common_neighbors(g, &[a, b, c]).0 as u64;
            let mut t = [a, b, c];
            t.sort_unstable();
            candidates[i as usize].insert(value, t);
            hinted[i as usize].push(value);
        }
    }
    let extra = |i: usize| -> Vec<(u64, [usize; 3])> {
        let mut out: Vec<(u64, [usize; 3])> =
            candidates[i].iter().filter(|(v, _)| !candidates[1 - i].contains_key(v)).map(|(&v, &t)| (v, t)).collect();
        out.sort_by_key(|(v, _)| !hinted[i].contains(v));
        out
    };
    let extras = [extra(0), extra(1)];
    log::debug!("candidate values only in left {:?}, only in right {:?}", extras[0], extras[1]);

    let mut full: [Option<TripleCensus>; 2] = [None, None];
    let mut order = [0usize, 1];
    // census the graph that has to be searched for fewer foreign values
    order.sort_by_key(|&i| (extras[i].is_empty(), extras[1 - i].len()));
    for i in order {
        if extras[i].is_empty() {
            continue;
        }
        let other = 1 - i;
        if opts.deadline.is_some_and(|d| Instant::now() > d) {
            return Err("deadline passed before a full census".into());
        }
        let est = estimated_triangles(gs[other]);
        if est > opts.full_census_limit {
            return Err(format!("values {:?} seen only in graph {i}; graph {other} too large to census ({est} triangles)", extras[i]));
        }
        let census = triple_census(gs[other], &TripleSource::AllAdjacent);
        if let Some(&(v, t)) = extras[i].iter().find(|(v, _)| !census.histogram.contains_key(v)) {
            return Ok(value_certificate(i as u8, t, v, &census));
        }
        full[other] = Some(census);
    }
    if full.iter().any(Option::is_some) {
        for i in 0..2 {
            if full[i].is_none() && estimated_triangles(gs[i]) <= opts.full_census_limit {
                full[i] = Some(triple_census(gs[i], &TripleSource::AllAdjacent));
            }
        }
        if let [Some(a), Some(b)] = &full {
            return compare_full(a, b);
        }
    }
    Err("no triple value separates the graphs in the samples".into())
}

fn cliques_step(g1: &Graph, g2: &Graph, opts: &DistinguishOptions) -> Result<Certificate, String> {
    if g1.n().max(g2.n()) > opts.clique_limit {
        return Err(format!("more than {} vertices", opts.clique_limit));
    }
    let copts = CliqueOptions { sizes: None, witnesses_per_size: 1, deadline: opts.deadline };
    let c: [CliqueCensus; 2] = [maximal_cliques(g1, &copts), maximal_cliques(g2, &copts)];
    if !(c[0].complete && c[1].complete) {
        return Err("clique enumeration stopped by the deadline".into());
    }
    let sizes: BTreeSet<usize> = c[0].counts.keys().chain(c[1].counts.keys()).copied().collect();
    for size in sizes.into_iter().rev() {
        let [l, r] = [0, 1].map(|i| c[i].counts.get(&size).copied().unwrap_or(0));
        if l != r {
            let more = if l > r { 0 } else { 1 };
            let witness = c[more].witnesses.get(&size).and_then(|w| w.first()).map(|w| (more as u8, w.clone()));
            return Ok(Certificate::CliqueCount { size, left: l, right: r, witness });
        }
    }
    Err("maximal clique counts agree".into())
}

fn refinement_step(g1: &Graph, g2: &Graph, opts: &DistinguishOptions) -> Result<Certificate, String> {
    let iso = IsoOptions { deadline: opts.deadline, max_nodes: 0, profile_limit: opts.profile_limit };
    match is_isomorphic(g1, g2, &iso) {
        IsoVerdict::NonIsomorphic { certificate } if !matches!(certificate, IsoCertificate::ExhaustedSearch { .. }) => {
            Ok(Certificate::Refinement { certificate })
        }
        v => Err(format!("refinement does not separate the graphs: {v:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let mut e = Vec::new();
        for i in 0..5 {
            e.push((i, (i + 1) % 5));
            e.push((i, i + 5));
            e.push((i + 5, (i + 2) % 5 + 5));
        }
        Graph::from_edges(10, &e).unwrap()
    }

    #[test]
    fn identical_graphs_are_not_separated() {
        let g = petersen();
        let r = distinguish(&g, &g, &DistinguishOptions { all: true, ..Default::default() });
        assert!(!r.distinguished());
        assert_eq!(r.steps.len(), 3);
    }

    #[test]
    fn triangle_values_separate_k4_from_k4_minus_an_edge() {
        // K4 triangles have 1 common neighbour, those of K4 - e have 0
        let k4 = Graph::complete(4);
        let mut other = Graph::complete(4);
        other.remove_edge(2, 3);
        let r = distinguish(&k4, &other, &DistinguishOptions::default());
        assert!(r.distinguished());
        let c = &r.certificates[0];
        assert_eq!(c.invariant(), Invariant::Triples);
        c.validate(&k4, &other).unwrap();
        assert!(c.validate(&other, &k4).is_err());
    }

    #[test]
    fn clique_certificate_round_trips() {
        let a = Graph::cycle(6);
        let b = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        let opts = DistinguishOptions { order: vec![Invariant::Cliques], ..Default::default() };
        let r = distinguish(&a, &b, &opts);
        let c = r.certificates.first().expect("clique counts differ");
        c.validate(&a, &b).unwrap();
        let json = serde_json::to_string(c).unwrap();
        assert_eq!(&serde_json::from_str::<Certificate>(&json).unwrap(), c);
    }
}
