use std::collections::BTreeSet;

use super::{GeomError, Space, Subspace};
use crate::gf::Elem;

/// The `q + 1` points of a Baer subline, sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BaerSubline {
    pub points: Vec<u32>,
}

impl BaerSubline {
    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&(p as u32)).is_ok()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The unique Baer subline through three distinct collinear points.
pub fn baer_subline(space: &Space, p1: usize, p2: usize, p3: usize) -> Result<BaerSubline, GeomError> {
    if p1 == p2 || p1 == p3 || p2 == p3 {
        return Err(GeomError::NotDistinct);
    }
    let f = space.field();
    let line = Subspace::span(space, &[p1, p2]);
    if !line.contains_point(space, p3) {
        return Err(GeomError::NotCollinear);
    }
    let (a, b, c) = (space.point(p1), space.point(p2), space.point(p3));
    // c = x a + y b with x, y nonzero; solve on a coordinate where a, b are
    // independent (2x2 minor).
    let (i, j) = independent_pair(f, a, b).ok_or(GeomError::NotDistinct)?;
    let det = f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
    let x = f.div(f.sub(f.mul(c[i], b[j]), f.mul(c[j], b[i])), det);
    let y = f.div(f.sub(f.mul(a[i], c[j]), f.mul(a[j], c[i])), det);
    // P3 ~ P1 + (y / x) P2
    let scale = f.div(y, x);
    let mut points = vec![p2 as u32];
    let mut v = vec![Elem::ZERO; a.len()];
    for &t in f.subfield() {
        let coef = f.mul(t, scale);
        for k in 0..v.len() {
            v[k] = f.add(a[k], f.mul(coef, b[k]));
        }
        points.push(space.index_of(&v).expect("nonzero combination") as u32);
    }
    points.sort_unstable();
    Ok(BaerSubline { points })
}

fn independent_pair(f: &crate::gf::Field, a: &[Elem], b: &[Elem]) -> Option<(usize, usize)> {
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if !f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i])).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

/// All `q(q^2 + 1)` Baer sublines of the line through `a` and `b`, sorted.
pub fn baer_sublines_of_line(space: &Space, a: usize, b: usize) -> Result<Vec<BaerSubline>, GeomError> {
    if a == b {
        return Err(GeomError::NotDistinct);
    }
    let pts = space.line_points(a, b);
    let mut seen = BTreeSet::new();
    for (x, &p) in pts.iter().enumerate() {
        for (y, &r) in pts.iter().enumerate().skip(x + 1) {
            for &s in &pts[y + 1..] {
                seen.insert(baer_subline(space, p as usize, r as usize, s as usize)?);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q2_subline_is_the_triple() {
        let s = Space::new(2, 2).unwrap();
        let pts = s.line_points(0, 1);
        let sub = baer_subline(&s, pts[0] as usize, pts[2] as usize, pts[4] as usize).unwrap();
        assert_eq!(sub.points, vec![pts[0], pts[2], pts[4]]);
    }

    #[test]
    fn q3_subline_is_order_invariant() {
        let s = Space::new(2, 3).unwrap();
        let pts = s.line_points(3, 40);
        let (a, b, c) = (pts[1] as usize, pts[4] as usize, pts[7] as usize);
        let base = baer_subline(&s, a, b, c).unwrap();
        assert_eq!(base.len(), 4);
        for (x, y, z) in [(a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            assert_eq!(baer_subline(&s, x, y, z).unwrap(), base);
        }
    }

    #[test]
    fn triples_of_a_q3_line_are_partitioned_by_sublines() {
        let s = Space::new(3, 3).unwrap();
        let pts = s.line_points(0, 100);
        let subs = baer_sublines_of_line(&s, 0, 100).unwrap();
        assert_eq!(subs.len(), 30);
        let mut hits = 0;
        for (i, &a) in pts.iter().enumerate() {
            for (j, &b) in pts.iter().enumerate().skip(i + 1) {
                for &c in &pts[j + 1..] {
                    let n = subs
                        .iter()
                        .filter(|sub| sub.contains(a as usize) && sub.contains(b as usize) && sub.contains(c as usize))
                        .count();
                    assert_eq!(n, 1);
                    hits += 1;
                }
            }
        }
        assert_eq!(hits, 120);
    }

    #[test]
    fn subline_counts_for_other_orders() {
        for (q, expected) in [(2, 10), (4, 68)] {
            let s = Space::new(2, q).unwrap();
            assert_eq!(baer_sublines_of_line(&s, 0, 1).unwrap().len(), expected);
        }
    }

    #[test]
    fn closure_regenerates_the_same_subline() {
        let s = Space::new(2, 4).unwrap();
        let pts = s.line_points(2, 30);
        let sub = baer_subline(&s, pts[0] as usize, pts[5] as usize, pts[11] as usize).unwrap();
        let p = &sub.points;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                for k in j + 1..p.len() {
                    assert_eq!(baer_subline(&s, p[i] as usize, p[j] as usize, p[k] as usize).unwrap(), sub);
                }
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        let s = Space::new(2, 2).unwrap();
        assert_eq!(baer_subline(&s, 0, 0, 1), Err(GeomError::NotDistinct));
        let line = s.line_points(0, 1);
        let off = (0..21u32).find(|p| !line.contains(p)).unwrap() as usize;
        assert_eq!(baer_subline(&s, 0, 1, off), Err(GeomError::NotCollinear));
    }
}
