use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::unital::{build_gamma_u, Unital, UnitalKind};
use super::ConstructionError;
use crate::gf::Elem;
use crate::graphcore::BitIter;

/// Four points off a unital, no three collinear, whose six joining lines are
/// all tangent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnanConfig {
    /// ascending point indices
    pub points: [u32; 4],
    /// joining lines in pair order 01, 02, 03, 12, 13, 23
    pub lines: [u32; 6],
}

impl OnanConfig {
    /// Checks the defining conditions against `u`.
    pub fn check(u: &Unital, points: [u32; 4]) -> Option<OnanConfig> {
        let plane = u.plane();
        let mut pts = points;
        pts.sort_unstable();
        if pts.windows(2).any(|w| w[0] == w[1]) || pts.iter().any(|&p| u.contains(p as usize)) {
            return None;
        }
        let mut lines = [0u32; 6];
        let mut k = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                let l = plane.line_through(pts[i] as usize, pts[j] as usize);
                if !u.is_tangent(l) {
                    return None;
                }
                lines[k] = l as u32;
                k += 1;
            }
        }
        for (a, b, c) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            if plane.collinear(pts[a] as usize, pts[b] as usize, pts[c] as usize) {
                return None;
            }
        }
        Some(OnanConfig { points: pts, lines })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "route", rename_all = "snake_case")]
pub enum OnanRoute {
    /// found through the six-line family, with these field indices
    WitnessFamily { lambda1: u8, lambda2: u8 },
    Exhaustive,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OnanSearch {
    pub config: Option<OnanConfig>,
    pub route: OnanRoute,
    /// (lambda1, lambda2) pairs solving the compatibility equation, if the
    /// family applies to this unital
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_solutions: Option<usize>,
    /// how many of those produced a valid configuration
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family_valid: Option<usize>,
}

/// Candidates from the explicit six-line family. Applies to Buekenhout-Metz
/// unitals in the alternative frame with odd q and alpha != 0; empty
/// otherwise. Each entry is `(lambda1, lambda2, configuration if valid)`.
pub fn witness_family_candidates(u: &Unital) -> Vec<(Elem, Elem, Option<OnanConfig>)> {
    let UnitalKind::BuekenhoutMetzAlt { alpha, beta } = u.kind else {
        return Vec::new();
    };
    let space = u.plane().space();
    let f = space.field();
    if f.characteristic() == 2 || alpha == 0 {
        return Vec::new();
    }
    let (a, b) = (Elem(alpha), Elem(beta));
    let aq = f.conj(a);
    let na = f.norm(a);
    let c0 = f.sub(na, f.norm(b));
    // x_lambda = -(alpha^q + lambda - beta) / (alpha^(q+1) - (lambda - beta)^(q+1))
    let x_of = |l: Elem| -> Option<Elem> {
        let den = f.sub(na, f.norm(f.sub(l, b)));
        (!den.is_zero()).then(|| f.neg(f.div(f.sub(f.add(aq, l), b), den)))
    };
    let mut out = Vec::new();
    let sub = f.subfield();
    for &l1 in sub {
        for &l2 in sub {
            if l1 >= l2 {
                continue;
            }
            let t1 = f.mul(f.norm(f.sub(f.add(l1, aq), b)), f.sub(c0, f.mul(l2, l2)));
            let t2 = f.mul(f.norm(f.sub(f.add(l2, aq), b)), f.sub(c0, f.mul(l1, l1)));
            if !f.add(t1, t2).is_zero() {
                continue;
            }
            let config = match (x_of(l1), x_of(l2)) {
                (Some(x1), Some(x2)) => family_config(u, x1, x2),
                _ => None,
            };
            out.push((l1, l2, config));
        }
    }
    out
}

/// The four points lying on three of the six lines
/// `[0,0,1], [0,-2 x1 x2, x1+x2], [x_i,-x_i,1], [-x_i,-x_i,1]`.
fn family_config(u: &Unital, x1: Elem, x2: Elem) -> Option<OnanConfig> {
    let space = u.plane().space();
    let f = space.field();
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let vecs = [
        [z, z, o],
        [z, f.neg(f.mul(f.from_int(2), f.mul(x1, x2))), f.add(x1, x2)],
        [x1, f.neg(x1), o],
        [x2, f.neg(x2), o],
        [f.neg(x1), f.neg(x1), o],
        [f.neg(x2), f.neg(x2), o],
    ];
    let mut lines = Vec::with_capacity(6);
    for v in &vecs {
        lines.push(space.index_of(v)?);
    }
    let mut sorted = lines.clone();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != 6 {
        return None;
    }
    let plane = u.plane();
    let mut on: BTreeMap<usize, usize> = BTreeMap::new();
    for i in 0..6 {
        for j in i + 1..6 {
            *on.entry(plane.meet(lines[i], lines[j])).or_insert(0) += 1;
        }
    }
    // a point on three of the lines is met by three pairs
    let pts: Vec<u32> = on.into_iter().filter(|&(_, c)| c == 3).map(|(p, _)| p as u32).collect();
    let pts: [u32; 4] = pts.try_into().ok()?;
    let cfg = OnanConfig::check(u, pts)?;
    let mut got = cfg.lines.to_vec();
    got.sort_unstable();
    (got == sorted.iter().map(|&l| l as u32).collect::<Vec<_>>()).then_some(cfg)
}

/// Finds a dual O'Nan configuration: first through the six-line family when
/// it applies, then by exhaustive search, whose witness is the
/// lexicographically least 4-set of point indices.
pub fn find_dual_onan(u: &Unital) -> Result<OnanSearch, ConstructionError> {
    let family = witness_family_candidates(u);
    let applies = matches!(&u.kind, UnitalKind::BuekenhoutMetzAlt { alpha, .. } if *alpha != 0)
        && u.plane().space().field().characteristic() != 2;
    let (solutions, valid) = (family.len(), family.iter().filter(|c| c.2.is_some()).count());
    let stats = |s: &mut OnanSearch| {
        if applies {
            s.family_solutions = Some(solutions);
            s.family_valid = Some(valid);
        }
    };
    if let Some((l1, l2, Some(cfg))) = family.iter().find(|c| c.2.is_some()).cloned() {
        let mut s = OnanSearch {
            config: Some(cfg),
            route: OnanRoute::WitnessFamily { lambda1: l1.0, lambda2: l2.0 },
            family_solutions: None,
            family_valid: None,
        };
        stats(&mut s);
        return Ok(s);
    }
    let g = build_gamma_u(u)?;
    let labels = g.labels().expect("gamma_u sets labels").to_vec();
    let plane = u.plane();
    let words = g.words();
    let mut found = None;
    'outer: for a in 0..g.n() {
        for b in g.neighbors(a).filter(|&b| b > a) {
            let ab: Vec<u64> = g.row(a).iter().zip(g.row(b)).map(|(x, y)| x & y).collect();
            let (pa, pb) = (labels[a] as usize, labels[b] as usize);
            for c in BitIter::new(&ab).filter(|&c| c > b) {
                let pc = labels[c] as usize;
                if plane.collinear(pa, pb, pc) {
                    continue;
                }
                let mut abc = vec![0u64; words];
                for (x, (&y, &r)) in abc.iter_mut().zip(ab.iter().zip(g.row(c))) {
                    *x = y & r;
                }
                for d in BitIter::new(&abc).filter(|&d| d > c) {
                    let pts = [labels[a], labels[b], labels[c], labels[d]];
                    if let Some(cfg) = OnanConfig::check(u, pts) {
                        found = Some(cfg);
                        break 'outer;
                    }
                }
            }
        }
    }
    let mut s = OnanSearch { config: found, route: OnanRoute::Exhaustive, family_solutions: None, family_valid: None };
    stats(&mut s);
    Ok(s)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::constructions::{build_unital_bm, build_unital_bm_alt, build_unital_classical, standard_plane, BmParams};

    #[test]
    fn classical_unitals_have_none() {
        for q in [2, 3] {
            let u = build_unital_classical(standard_plane(q).unwrap()).unwrap();
            let s = find_dual_onan(&u).unwrap();
            assert_eq!(s.config, None);
            assert_eq!(s.route, OnanRoute::Exhaustive);
        }
    }

    #[test]
    fn nonclassical_bm_has_one() {
        let plane = standard_plane(3).unwrap();
        let p = BmParams::all_valid(plane.space().field()).into_iter().find(|p| !p.alpha.is_zero()).unwrap();
        let u = build_unital_bm(Arc::clone(&plane), p).unwrap();
        let cfg = find_dual_onan(&u).unwrap().config.unwrap();
        assert_eq!(OnanConfig::check(&u, cfg.points), Some(cfg));
        let alt = build_unital_bm_alt(plane, p).unwrap();
        assert!(find_dual_onan(&alt).unwrap().config.is_some());
    }
}
