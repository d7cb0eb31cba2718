//! Switching NU(n + 1, q^2) along two tangent lines through a point of the
//! variety, which gives strongly regular graphs with the same parameters.

use std::collections::{BTreeSet, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::constructions::{build_nu_on, ConstructionError};
use crate::gf::Elem;
use crate::graphcore::{and_popcount, Graph};
use crate::projgeom::linalg::{self, Matrix};
use crate::projgeom::{baer_subline, GeomError, HermitianGeometry, PlaneSection, Space, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// the plane of the two lines meets the variety in a Hermitian pencil
    Pencil,
    /// the plane meets the variety in a line
    Line,
}

impl Variant {
    pub fn section(self) -> PlaneSection {
        match self {
            Variant::Pencil => PlaneSection::Pencil,
            Variant::Line => PlaneSection::Line,
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Variant, String> {
        match s {
            "pencil" => Ok(Variant::Pencil),
            "line" => Ok(Variant::Line),
            other => Err(format!("unknown variant '{other}' (expected pencil or line)")),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SwitchError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("switching needs n >= 4, got n = {0}")]
    DimensionTooSmall(usize),
    #[error("no pair of tangent lines at the chosen point spans a plane of type {0:?}")]
    NoConfiguration(Variant),
    #[error("configuration does not fit this geometry: {0}")]
    BadConfig(String),
    #[error("graph vertex labels do not match the geometry")]
    Labels,
    #[error("|{set}| = {found}, expected {expected}")]
    SizeMismatch { set: &'static str, expected: usize, found: usize },
    #[error("vertex {vertex} of {set} is not in the polar hyperplane of P")]
    NotInPolar { set: &'static str, vertex: usize },
    #[error("{set} differs from its geometric description at vertex {vertex}")]
    GeometricMismatch { set: &'static str, vertex: usize },
    #[error("switching hypothesis fails: {0}")]
    Hypothesis(WqhViolation),
}

/// Point `P` of the variety, the two tangent lines through it and the
/// plane they span. Point indices refer to PG(n, q^2).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchingConfig {
    pub n: usize,
    pub q: u32,
    /// Gram matrix as field indices; absent for the identity form
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Matrix>,
    pub variant: Variant,
    pub p: u32,
    /// `l_i` = points of the i-th line other than `P`, ascending
    pub l1: Vec<u32>,
    pub l2: Vec<u32>,
    /// number of points of the variety in the plane
    pub section_size: usize,
}

/// Tangent lines at `p`, each as its points other than `p`, ordered by
/// least point.
fn tangent_lines_at(h: &HermitianGeometry, p: usize) -> Vec<Vec<u32>> {
    let space = h.space();
    let polar = space.subspace_points(&h.polar_of_point(p));
    let mut out = Vec::new();
    for &x in &polar {
        if x as usize == p {
            continue;
        }
        let pts = space.line_points(p, x as usize);
        let rest: Vec<u32> = pts.into_iter().filter(|&y| y as usize != p).collect();
        if rest[0] != x {
            continue;
        }
        if rest.iter().all(|&y| !h.is_absolute(y as usize)) {
            out.push(rest);
        }
    }
    out
}

/// Lowest-index point of the variety, then the lexicographically first pair
/// of tangent lines there whose plane has the requested section.
pub fn choose_config(h: &HermitianGeometry, variant: Variant) -> Result<SwitchingConfig, SwitchError> {
    let n = h.n();
    if n < 4 {
        return Err(SwitchError::DimensionTooSmall(n));
    }
    let p = h.point_set()[0] as usize;
    let lines = tangent_lines_at(h, p);
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let plane = Subspace::span(h.space(), &[p, lines[i][0] as usize, lines[j][0] as usize]);
            if h.classify_plane_section(&plane)? == variant.section() {
                return Ok(SwitchingConfig {
                    n,
                    q: h.q(),
                    gram: custom_gram(h),
                    variant,
                    p: p as u32,
                    l1: lines[i].clone(),
                    l2: lines[j].clone(),
                    section_size: h.section_size(&plane),
                });
            }
        }
    }
    Err(SwitchError::NoConfiguration(variant))
}

fn custom_gram(h: &HermitianGeometry) -> Option<Matrix> {
    (*h.gram() != linalg::identity(h.space().dim())).then(|| h.gram().clone())
}

impl SwitchingConfig {
    /// The geometry this configuration lives in.
    pub fn geometry(&self) -> Result<HermitianGeometry, SwitchError> {
        let space = std::sync::Arc::new(Space::new(self.n, self.q)?);
        Ok(HermitianGeometry::new(space, self.gram.clone())?)
    }

    /// Re-derives the configuration's geometric claims.
    pub fn check(&self, h: &HermitianGeometry) -> Result<(), SwitchError> {
        let bad = |m: &str| Err(SwitchError::BadConfig(m.to_string()));
        if self.n != h.n() || self.q != h.q() || self.gram != custom_gram(h) {
            return bad("dimension, order or form differ");
        }
        let space = h.space();
        let p = self.p as usize;
        if p >= space.num_points() || !h.is_absolute(p) {
            return bad("P is not a point of the variety");
        }
        for l in [&self.l1, &self.l2] {
            let Some(&first) = l.first() else { return bad("empty line") };
            if first as usize >= space.num_points() {
                return bad("point index out of range");
            }
            let expect: Vec<u32> = space.line_points(p, first as usize).into_iter().filter(|&x| x != self.p).collect();
            if &expect != l {
                return bad("line points do not form a line through P");
            }
            if l.iter().any(|&x| h.is_absolute(x as usize)) {
                return bad("line is not tangent at P");
            }
        }
        if self.l1 == self.l2 {
            return bad("the two lines coincide");
        }
        let plane = Subspace::span(space, &[p, self.l1[0] as usize, self.l2[0] as usize]);
        if h.classify_plane_section(&plane)? != self.variant.section() {
            return bad("plane section does not match the variant");
        }
        Ok(())
    }
}

/// The vertex sets of the switching, as ascending vertex indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchingSets {
    pub l1: Vec<u32>,
    pub l2: Vec<u32>,
    pub a: Vec<u32>,
    pub a1: Vec<u32>,
    pub a2: Vec<u32>,
    /// `|D|`; D itself is everything outside `l1 ∪ l2`
    pub d_size: usize,
}

impl SwitchingSets {
    /// The same sets with A1 and A2 exchanged, which undo a switch.
    pub fn exchanged(&self) -> SwitchingSets {
        SwitchingSets { a1: self.a2.clone(), a2: self.a1.clone(), ..self.clone() }
    }
}

/// Expected `(|A|, |A1|)` in PG(4, q^2).
pub fn expected_sizes(q: usize, variant: Variant) -> (usize, usize) {
    match variant {
        Variant::Pencil => (q * q * (q + 1) * (q + 1), q * q * (q + 1) * (q * q - q - 2)),
        Variant::Line => (2 * q * q * (q * q - 1), q * q * q * (q * q - q - 1)),
    }
}

fn vertices_of(g: &Graph, points: &[u32]) -> Result<Vec<u32>, SwitchError> {
    let mut v = points
        .iter()
        .map(|&p| g.vertex_of_label(p).map(|x| x as u32).ok_or(SwitchError::Labels))
        .collect::<Result<Vec<_>, _>>()?;
    v.sort_unstable();
    Ok(v)
}

fn mask(words: usize, set: &[u32]) -> Vec<u64> {
    let mut m = vec![0u64; words];
    for &v in set {
        m[v as usize / 64] |= 1 << (v % 64);
    }
    m
}

fn common(g: &Graph, set: &[u32]) -> Vec<u64> {
    let mut acc = vec![!0u64; g.words()];
    for &v in set {
        for (a, &r) in acc.iter_mut().zip(g.row(v as usize)) {
            *a &= r;
        }
    }
    acc
}

fn members(bits: &[u64], n: usize) -> Vec<u32> {
    (0..n).filter(|&v| bits[v / 64] >> (v % 64) & 1 == 1).map(|v| v as u32).collect()
}

/// Computes A, A1, A2 by intersecting neighbourhoods in `g` (which must be
/// the NU graph of `h`, labelled by point), then checks them against the
/// polar hyperplane of P, against the planes through each line, and in
/// PG(4, q^2) against the closed-form sizes.
pub fn compute_sets(g: &Graph, h: &HermitianGeometry, cfg: &SwitchingConfig) -> Result<SwitchingSets, SwitchError> {
    let sets = neighbourhood_sets(g, cfg)?;
    check_sets(g, h, cfg, &sets)?;
    Ok(sets)
}

/// The sets from neighbourhood intersections alone, without any check.
pub fn neighbourhood_sets(g: &Graph, cfg: &SwitchingConfig) -> Result<SwitchingSets, SwitchError> {
    let n = g.n();
    let l1 = vertices_of(g, &cfg.l1)?;
    let l2 = vertices_of(g, &cfg.l2)?;
    let c1 = common(g, &l1);
    let c2 = common(g, &l2);
    let (m1, m2) = (mask(g.words(), &l1), mask(g.words(), &l2));
    let a_bits: Vec<u64> = c1.iter().zip(&c2).map(|(x, y)| x & y).collect();
    let a1_bits: Vec<u64> = c1.iter().zip(&a_bits).zip(&m2).map(|((c, a), l)| c & !a & !l).collect();
    let a2_bits: Vec<u64> = c2.iter().zip(&a_bits).zip(&m1).map(|((c, a), l)| c & !a & !l).collect();
    let sets = SwitchingSets {
        a: members(&a_bits, n),
        a1: members(&a1_bits, n),
        a2: members(&a2_bits, n),
        d_size: n - l1.len() - l2.len(),
        l1,
        l2,
    };
    Ok(sets)
}

fn check_sets(g: &Graph, h: &HermitianGeometry, cfg: &SwitchingConfig, sets: &SwitchingSets) -> Result<(), SwitchError> {
    let n = g.n();
    let labels = g.labels().ok_or(SwitchError::Labels)?;
    let polar = h.polar_of_point(cfg.p as usize);
    for (name, set) in [("A", &sets.a), ("A1", &sets.a1), ("A2", &sets.a2)] {
        if let Some(&v) = set.iter().find(|&&v| !polar.contains_point(h.space(), labels[v as usize] as usize)) {
            return Err(SwitchError::NotInPolar { set: name, vertex: v as usize });
        }
    }
    let g1 = geometric_common(h, cfg.p as usize, &cfg.l1);
    let g2 = geometric_common(h, cfg.p as usize, &cfg.l2);
    let in_set = |s: &BTreeSet<u32>, v: u32| s.contains(&labels[v as usize]);
    for v in 0..n as u32 {
        let (x1, x2) = (in_set(&g1, v), in_set(&g2, v));
        let in_l1 = sets.l1.binary_search(&v).is_ok();
        let in_l2 = sets.l2.binary_search(&v).is_ok();
        let geo_a = x1 && x2;
        let geo_a1 = x1 && !geo_a && !in_l2;
        let geo_a2 = x2 && !geo_a && !in_l1;
        for (name, geo, set) in [("A", geo_a, &sets.a), ("A1", geo_a1, &sets.a1), ("A2", geo_a2, &sets.a2)] {
            if geo != set.binary_search(&v).is_ok() {
                return Err(SwitchError::GeometricMismatch { set: name, vertex: v as usize });
            }
        }
    }
    if cfg.n == 4 {
        let (ea, ea1) = expected_sizes(cfg.q as usize, cfg.variant);
        for (name, expected, found) in
            [("A", ea, sets.a.len()), ("A1", ea1, sets.a1.len()), ("A2", ea1, sets.a2.len())]
        {
            if expected != found {
                return Err(SwitchError::SizeMismatch { set: name, expected, found });
            }
        }
    } else {
        log::info!(
            "n = {}: |A| = {}, |A1| = {}, |A2| = {} (no closed form to compare)",
            cfg.n,
            sets.a.len(),
            sets.a1.len(),
            sets.a2.len()
        );
    }
    Ok(())
}

/// Points adjacent to every point of `l` other than P, read off the
/// geometry: the off-variety points of the planes through the line that
/// meet the variety in a line, minus the line itself.
fn geometric_common(h: &HermitianGeometry, p: usize, l: &[u32]) -> BTreeSet<u32> {
    let space = h.space();
    let f = space.field();
    let line = Subspace::span(space, &[p, l[0] as usize]);
    let mut seen: HashMap<Vec<Vec<Elem>>, bool> = HashMap::new();
    let mut out = BTreeSet::new();
    for x in 0..space.num_points() {
        if h.is_absolute(x) || line.contains_point(space, x) {
            continue;
        }
        let plane = line.join(f, &Subspace::point(space, x));
        let good = *seen
            .entry(plane.rows().to_vec())
            .or_insert_with(|| h.plane_section_by_size(h.section_size(&plane)) == Ok(PlaneSection::Line));
        if good {
            out.insert(x as u32);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WqhViolation {
    /// the induced subgraph on a part is not regular, or the two lines
    /// differ in size or degree
    Induced { part: String },
    /// x in D meets l1 and l2 in different numbers without being switched
    Dichotomy { vertex: usize, in_l1: usize, in_l2: usize },
    /// x is switched but its neighbourhood in l1 ∪ l2 is not l1 or l2
    Switched { vertex: usize, in_l1: usize, in_l2: usize },
}

impl std::fmt::Display for WqhViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WqhViolation::Induced { part } => write!(f, "induced subgraph on {part} is not as required"),
            WqhViolation::Dichotomy { vertex, in_l1, in_l2 } => {
                write!(f, "vertex {vertex} has {in_l1} neighbours in l1 and {in_l2} in l2")
            }
            WqhViolation::Switched { vertex, in_l1, in_l2 } => {
                write!(f, "switched vertex {vertex} has {in_l1} neighbours in l1 and {in_l2} in l2")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WqhReport {
    /// degree inside each of l1, l2 (both are cliques)
    pub line_degree: usize,
    /// degree inside l1 ∪ l2
    pub union_degree: usize,
    /// observed values of |N(x) ∩ l_i| over unswitched x in D
    pub unswitched_values: BTreeSet<usize>,
    /// {0, 1, q^2}, the set usually given for these counts, kept for comparison
    pub stated_values: BTreeSet<usize>,
    /// switched vertices (A1 ∪ A2) and their counts in (l1, l2)
    pub a1_counts: Option<(usize, usize)>,
    pub a2_counts: Option<(usize, usize)>,
}

/// Checks every hypothesis of Wang-Qiu-Hu switching for the given sets.
pub fn verify_wqh_hypotheses(g: &Graph, sets: &SwitchingSets, q: u32) -> Result<WqhReport, SwitchError> {
    let words = g.words();
    let (m1, m2) = (mask(words, &sets.l1), mask(words, &sets.l2));
    let m12: Vec<u64> = m1.iter().zip(&m2).map(|(a, b)| a | b).collect();
    let fail = |v| Err(SwitchError::Hypothesis(v));
    let induced = |set: &[u32], m: &[u64]| -> Option<usize> {
        let degs: BTreeSet<usize> = set.iter().map(|&v| and_popcount(g.row(v as usize), m) as usize).collect();
        (degs.len() == 1).then(|| *degs.iter().next().unwrap())
    };
    let (Some(d1), Some(d2)) = (induced(&sets.l1, &m1), induced(&sets.l2, &m2)) else {
        return fail(WqhViolation::Induced { part: "l1 or l2".into() });
    };
    if d1 != d2 || sets.l1.len() != sets.l2.len() {
        return fail(WqhViolation::Induced { part: "l1 versus l2".into() });
    }
    let union: Vec<u32> = sets.l1.iter().chain(&sets.l2).copied().collect();
    let Some(du) = induced(&union, &m12) else {
        return fail(WqhViolation::Induced { part: "l1 ∪ l2".into() });
    };
    let size = sets.l1.len();
    let (sa1, sa2): (BTreeSet<u32>, BTreeSet<u32>) =
        (sets.a1.iter().copied().collect(), sets.a2.iter().copied().collect());
    let outcome: Vec<(usize, usize, usize, u8)> = (0..g.n())
        .into_par_iter()
        .filter(|v| m12[v / 64] >> (v % 64) & 1 == 0)
        .map(|v| {
            let row = g.row(v);
            let c1 = and_popcount(row, &m1) as usize;
            let c2 = and_popcount(row, &m2) as usize;
            let tag = if sa1.contains(&(v as u32)) {
                1
            } else if sa2.contains(&(v as u32)) {
                2
            } else {
                0
            };
            (v, c1, c2, tag)
        })
        .collect();
    let mut unswitched = BTreeSet::new();
    let (mut a1c, mut a2c) = (None, None);
    for (v, c1, c2, tag) in outcome {
        let whole = (c1 == size && c2 == 0) || (c1 == 0 && c2 == size);
        match tag {
            0 if whole => return fail(WqhViolation::Dichotomy { vertex: v, in_l1: c1, in_l2: c2 }),
            0 if c1 != c2 => return fail(WqhViolation::Dichotomy { vertex: v, in_l1: c1, in_l2: c2 }),
            0 => {
                unswitched.insert(c1);
            }
            1 if !(c1 == size && c2 == 0) => {
                return fail(WqhViolation::Switched { vertex: v, in_l1: c1, in_l2: c2 })
            }
            2 if !(c1 == 0 && c2 == size) => {
                return fail(WqhViolation::Switched { vertex: v, in_l1: c1, in_l2: c2 })
            }
            1 => a1c = Some((c1, c2)),
            _ => a2c = Some((c1, c2)),
        }
    }
    let q = q as usize;
    Ok(WqhReport {
        line_degree: d1,
        union_degree: du,
        unswitched_values: unswitched,
        stated_values: BTreeSet::from([0, 1, q * q]),
        a1_counts: a1c,
        a2_counts: a2c,
    })
}

/// Toggles every pair between `l1 ∪ l2` and `A1 ∪ A2`: l1 trades A1 for A2
/// and l2 trades A2 for A1. Switching the result with `sets.exchanged()`
/// restores the graph.
pub fn apply_switch(g: &Graph, sets: &SwitchingSets) -> Result<Graph, SwitchError> {
    let mut out = g.clone();
    for (side, own, other) in [(&sets.l1, &sets.a1, &sets.a2), (&sets.l2, &sets.a2, &sets.a1)] {
        for &u in side {
            for &x in own.iter().chain(other) {
                let expect = own.binary_search(&x).is_ok();
                if g.has_edge(u as usize, x as usize) != expect {
                    return Err(SwitchError::Hypothesis(WqhViolation::Switched {
                        vertex: x as usize,
                        in_l1: usize::MAX,
                        in_l2: usize::MAX,
                    }));
                }
                out.toggle_edge(u as usize, x as usize);
            }
        }
    }
    Ok(out)
}

/// Everything produced on the way to a switched graph.
#[derive(Debug)]
pub struct Switched {
    pub base: Graph,
    pub graph: Graph,
    pub config: SwitchingConfig,
    pub sets: SwitchingSets,
    pub report: WqhReport,
}

/// G'_n (pencil) or G''_n (line) from NU(n + 1, q^2).
pub fn build_switched(n: usize, q: u32, variant: Variant) -> Result<Switched, SwitchError> {
    if n < 4 {
        return Err(SwitchError::DimensionTooSmall(n));
    }
    let h = HermitianGeometry::standard(n, q)?;
    let config = choose_config(&h, variant)?;
    switch_with(&h, config)
}

/// Runs the pipeline for a given (for example replayed) configuration.
pub fn switch_with(h: &HermitianGeometry, config: SwitchingConfig) -> Result<Switched, SwitchError> {
    config.check(h)?;
    let base = build_nu_on(h)?;
    let sets = compute_sets(&base, h, &config)?;
    let report = verify_wqh_hypotheses(&base, &sets, h.q())?;
    let mut graph = apply_switch(&base, &sets)?;
    if let Some(l) = base.labels() {
        graph.set_labels(l.to_vec());
    }
    Ok(Switched { base, graph, config, sets, report })
}

/// A triangle `u, u1, u2` with `u` in l1 and `u1, u2` in A on a line `t`
/// through `u`, tangent at `T`, inside the polar of P but not inside the
/// plane of the two lines, and (pencil case) `T` off the Baer subline
/// through the three.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchTriple {
    /// vertex indices
    pub u: usize,
    pub u1: usize,
    pub u2: usize,
    /// tangency point of t
    pub t_point: u32,
    pub t_meets_a: usize,
    pub t_meets_a1: usize,
    pub t_meets_a2: usize,
}

/// First such triple in index order. PG(4, q^2) only.
pub fn find_switch_triple(
    g: &Graph,
    h: &HermitianGeometry,
    cfg: &SwitchingConfig,
    sets: &SwitchingSets,
) -> Result<Option<SwitchTriple>, SwitchError> {
    Ok(switch_triples(g, h, cfg, sets, 1)?.pop())
}

/// Up to `limit` such triples, taking every `u` in l1 in turn.
pub fn switch_triples(
    g: &Graph,
    h: &HermitianGeometry,
    cfg: &SwitchingConfig,
    sets: &SwitchingSets,
    limit: usize,
) -> Result<Vec<SwitchTriple>, SwitchError> {
    let space = h.space();
    let labels = g.labels().ok_or(SwitchError::Labels)?;
    let polar = space.subspace_points(&h.polar_of_point(cfg.p as usize));
    let pi = Subspace::span(space, &[cfg.p as usize, cfg.l1[0] as usize, cfg.l2[0] as usize]);
    let in_a = |pt: u32| g.vertex_of_label(pt).filter(|v| sets.a.binary_search(&(*v as u32)).is_ok());
    let count_in = |pts: &[u32], set: &[u32]| {
        pts.iter().filter_map(|&p| g.vertex_of_label(p)).filter(|v| set.binary_search(&(*v as u32)).is_ok()).count()
    };
    let mut out = Vec::new();
    for &u_pt in &cfg.l1 {
        let u_pt = u_pt as usize;
        let u = g.vertex_of_label(u_pt as u32).ok_or(SwitchError::Labels)?;
        let mut done = BTreeSet::new();
        for &x in &polar {
            // lines of the plane through u would also qualify in the line
            // case, but there every point of t off l2 and the variety is in A
            if done.contains(&x) || pi.contains_point(space, x as usize) {
                continue;
            }
            let t = space.line_points(u_pt, x as usize);
            done.extend(t.iter().copied());
            let on_h: Vec<u32> = t.iter().copied().filter(|&y| h.is_absolute(y as usize)).collect();
            if on_h.len() != 1 || !t.iter().all(|&y| polar.binary_search(&y).is_ok()) {
                continue;
            }
            let tp = on_h[0];
            let a_on_t: Vec<usize> = t.iter().filter_map(|&y| in_a(y)).collect();
            for i in 0..a_on_t.len() {
                for j in i + 1..a_on_t.len() {
                    let (v1, v2) = (a_on_t[i], a_on_t[j]);
                    let b = baer_subline(space, u_pt, labels[v1] as usize, labels[v2] as usize)?;
                    if cfg.variant == Variant::Pencil && b.contains(tp as usize) {
                        continue;
                    }
                    out.push(SwitchTriple {
                        u,
                        u1: v1,
                        u2: v2,
                        t_point: tp,
                        t_meets_a: a_on_t.len(),
                        t_meets_a1: count_in(&t, &sets.a1),
                        t_meets_a2: count_in(&t, &sets.a2),
                    });
                    if out.len() >= limit {
                        return Ok(out);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{check_srg, SrgParams};

    #[test]
    fn configurations_at_q2() {
        let h = HermitianGeometry::standard(4, 2).unwrap();
        let c = choose_config(&h, Variant::Pencil).unwrap();
        assert_eq!(c.section_size, 13);
        assert_eq!(c.l1.len(), 4);
        c.check(&h).unwrap();
        let c = choose_config(&h, Variant::Line).unwrap();
        assert_eq!(c.section_size, 5);
        let h3 = HermitianGeometry::standard(3, 2).unwrap();
        assert_eq!(choose_config(&h3, Variant::Line).unwrap_err(), SwitchError::DimensionTooSmall(3));
    }

    #[test]
    fn line_variant_at_q2() {
        let s = build_switched(4, 2, Variant::Line).unwrap();
        assert_eq!((s.sets.a.len(), s.sets.a1.len(), s.sets.a2.len()), (24, 8, 8));
        assert_eq!(s.report.a1_counts, Some((4, 0)));
        assert_eq!(check_srg(&s.graph), Ok(SrgParams::new(176, 135, 102, 108)));
        assert_eq!(s.graph.edge_difference(&s.base).len(), 4 * 4 * 8);
        let back = apply_switch(&s.graph, &s.sets.exchanged());
        assert!(back.unwrap().same_edges(&s.base));
    }

    #[test]
    fn pencil_variant_at_q2_changes_nothing() {
        let s = build_switched(4, 2, Variant::Pencil).unwrap();
        assert_eq!((s.sets.a.len(), s.sets.a1.len()), (36, 0));
        assert!(s.graph.same_edges(&s.base));
    }

    #[test]
    fn perturbed_sets_are_rejected() {
        let s = build_switched(4, 2, Variant::Line).unwrap();
        let mut bad = s.sets.clone();
        let moved = bad.a1.remove(0);
        bad.a.push(moved);
        bad.a.sort_unstable();
        let err = verify_wqh_hypotheses(&s.base, &bad, 2).unwrap_err();
        assert!(matches!(
            err,
            SwitchError::Hypothesis(WqhViolation::Dichotomy { vertex, .. }) if vertex == moved as usize
        ));
    }

    #[test]
    fn config_json_round_trip() {
        let h = HermitianGeometry::standard(4, 2).unwrap();
        let c = choose_config(&h, Variant::Line).unwrap();
        let back: SwitchingConfig = serde_json::from_str(&serde_json::to_string(&c).unwrap()).unwrap();
        assert_eq!(back, c);
        let mut broken = c.clone();
        broken.l2 = broken.l1.clone();
        assert!(matches!(broken.check(&h), Err(SwitchError::BadConfig(_))));
    }
}
