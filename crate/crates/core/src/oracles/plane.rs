//! Lemmas about Hermitian curves of PG(2, q^2).

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rand::Rng;

use super::{flag, frame_pair, obs, Frame, Obs, OracleError, Outcome, Run, Selection};
use crate::gf::{Elem, Field};
use crate::projgeom::linalg::{self, Matrix};
use crate::projgeom::{baer_subline, baer_sublines_of_line, hermitian_curve_catalogue, Pencil, PlaneIncidence, Subspace};

/// `X1^q X2 + X1 X2^q + X3^(q+1)`.
fn tangent_form() -> Matrix {
    let (o, z) = (Elem::ONE, Elem::ZERO);
    vec![vec![z, o, z], vec![o, z, z], vec![z, z, o]]
}

struct PlaneFrame {
    frame: Frame,
    inc: Arc<PlaneIncidence>,
    /// absolute points per line
    line_abs: Vec<u32>,
}

impl PlaneFrame {
    fn new(frame: Frame, inc: Arc<PlaneIncidence>) -> PlaneFrame {
        let line_abs = (0..inc.num_lines())
            .map(|l| inc.line_points(l).iter().filter(|&&p| frame.h.is_absolute(p as usize)).count() as u32)
            .collect();
        PlaneFrame { frame, inc, line_abs }
    }

    fn abs(&self, p: usize) -> bool {
        self.frame.h.is_absolute(p)
    }

    fn tangent(&self, a: usize, b: usize) -> bool {
        self.line_abs[self.inc.line_through(a, b)] == 1
    }

    fn is_tangent_line(&self, l: usize) -> bool {
        self.line_abs[l] == 1
    }

    fn tangent_point(&self, l: usize) -> usize {
        *self.inc.line_points(l).iter().find(|&&p| self.abs(p as usize)).expect("tangent line") as usize
    }

    fn np(&self) -> usize {
        self.inc.num_points()
    }
}

fn plane_frames(run: &mut Run, gram: Option<Matrix>) -> Result<[PlaneFrame; 2], OracleError> {
    let [a, b] = frame_pair(run, 2, gram)?;
    let inc = Arc::new(PlaneIncidence::new(a.h.space_arc())?);
    Ok([PlaneFrame::new(a, Arc::clone(&inc)), PlaneFrame::new(b, inc)])
}

/// Evaluates the same configurations in both frames.
fn both(
    run: &Run,
    frames: &[PlaneFrame; 2],
    sel: &Selection<Vec<u32>>,
    observe: impl Fn(&PlaneFrame, &[u32]) -> Result<Vec<Obs>, OracleError> + Sync,
) -> Result<Outcome, OracleError> {
    let mut out = Outcome { frames: Vec::new(), traces: Vec::new(), shared: true };
    for pf in frames {
        let (report, trace) = run.evaluate(pf.frame.kind, sel, |c| observe(pf, c))?;
        out.frames.push(report);
        out.traces.push(trace);
    }
    Ok(out)
}

fn triples_of(v: &[u32], out: &mut Vec<Vec<u32>>, prefix: &[u32]) {
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            for k in j + 1..v.len() {
                let mut c = prefix.to_vec();
                c.extend([v[i], v[j], v[k]]);
                out.push(c);
            }
        }
    }
}

/// Three points of a tangent line other than its point of contact: `q` or no
/// common tangent-neighbours off the line, as the tangency point lies off or
/// on their Baer subline.
pub(super) fn hermcurve1(run: &mut Run) -> Result<Outcome, OracleError> {
    let frames = plane_frames(run, Some(tangent_form()))?;
    let f0 = &frames[0];
    let mut all = Vec::new();
    for l in (0..f0.inc.num_lines()).filter(|&l| f0.is_tangent_line(l)) {
        let t = f0.tangent_point(l) as u32;
        let others: Vec<u32> = f0.inc.line_points(l).iter().copied().filter(|&p| p != t).collect();
        triples_of(&others, &mut all, &[]);
    }
    let sel = run.choose(all);
    let q = run.qq();
    both(run, &frames, &sel, |pf, c| {
        let p = pf.frame.pts(c);
        let l = pf.inc.line_through(p[0], p[1]);
        let t = pf.tangent_point(l);
        let s = baer_subline(pf.frame.space(), p[0], p[1], p[2])?;
        let count = (0..pf.np())
            .filter(|&x| !pf.abs(x) && !pf.inc.on_line(x, l) && p.iter().all(|&pi| pf.tangent(x, pi)))
            .count();
        Ok(vec![if s.contains(t) { obs("t_in_s", 0, count) } else { obs("t_not_in_s", q, count) }])
    })
}

/// Two tangent lines `t, t'` through `R`: the points of `t'` off the curve
/// and other than `R` match the Baer sublines of `t` through `R` avoiding the
/// tangency point one to one.
pub(super) fn hermcurve0(run: &mut Run) -> Result<Outcome, OracleError> {
    let frames = plane_frames(run, Some(tangent_form()))?;
    let f0 = &frames[0];
    let mut all = Vec::new();
    for l in (0..f0.inc.num_lines()).filter(|&l| f0.is_tangent_line(l)) {
        let t = f0.tangent_point(l) as u32;
        for &r in f0.inc.line_points(l).iter().filter(|&&p| p != t) {
            for &l2 in f0.inc.lines_through(r as usize) {
                if l2 as usize != l && f0.is_tangent_line(l2 as usize) {
                    all.push(vec![r, t, f0.tangent_point(l2 as usize) as u32]);
                }
            }
        }
    }
    let sel = run.choose(all);
    let q = run.qq();
    both(run, &frames, &sel, |pf, c| {
        let [r, t, t2] = [pf.frame.pt(c[0]), pf.frame.pt(c[1]), pf.frame.pt(c[2])];
        let subs = baer_sublines_of_line(pf.frame.space(), r, t)?;
        let avoiding = subs.iter().filter(|s| !s.contains(t)).count();
        let cands: Vec<_> = subs.iter().filter(|s| s.contains(r) && !s.contains(t)).collect();
        let line2 = pf.inc.line_through(r, t2);
        let mut unique = 0;
        let mut chosen = BTreeSet::new();
        for &p in pf.inc.line_points(line2) {
            let p = p as usize;
            if p == r || p == t2 {
                continue;
            }
            let matching: Vec<usize> = (0..cands.len())
                .filter(|&i| cands[i].points.iter().all(|&x| pf.tangent(p, x as usize)))
                .collect();
            if matching.len() == 1 {
                unique += 1;
                chosen.insert(matching[0]);
            }
        }
        Ok(vec![
            obs("sublines_avoiding_t", q * q * (q - 1), avoiding),
            obs("sublines_through_r", q * q - 1, cands.len()),
            obs("points_with_unique_subline", q * q - 1, unique),
            obs("distinct_sublines", q * q - 1, chosen.len()),
        ])
    })
}

/// The two points `R = (c, 1, d)` of the closed form, in proof coordinates.
fn closed_form_points(pf: &PlaneFrame, u1: usize, u2: usize, u3: usize) -> Option<[usize; 2]> {
    let space = pf.frame.space();
    let f = space.field();
    let coord = |p: usize, i: usize, j: usize| {
        let v = space.point(p);
        f.div(v[i], v[j])
    };
    let (x1, x2) = (coord(u1, 0, 2), coord(u2, 0, 2));
    let (a, _b) = (coord(u3, 0, 1), coord(u3, 2, 1));
    let c = |x: Elem| f.conj(x);
    let den = f.sub(f.mul(c(x1), x2), f.mul(x1, c(x2)));
    if den.is_zero() {
        return None;
    }
    let d = f.div(f.sub(f.mul(f.norm(x1), c(x2)), f.mul(c(x1), f.norm(x2))), den);
    let sol = |xi: Elem| {
        let num = f.add(f.mul(f.mul(a, c(xi)), f.sub(x2, x1)), f.mul(f.mul(c(a), xi), f.sub(c(x2), c(x1))));
        f.div(num, den)
    };
    let r1 = space.index_of(&[sol(x1), Elem::ONE, d])?;
    let r2 = space.index_of(&[sol(x2), Elem::ONE, d])?;
    Some([r1, r2])
}

/// `u, u1, u2` on a tangent line `t` with `T` off their Baer subline, and
/// `u'` with `uu'` secant and `u'u1`, `u'u2` tangent: exactly two points see
/// all four along tangents, and they lie on `u'u1`, `u'u2`.
pub(super) fn hermcurve_minus1(run: &mut Run) -> Result<Outcome, OracleError> {
    let frames = plane_frames(run, Some(tangent_form()))?;
    let f0 = &frames[0];
    let space = f0.frame.space();
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let big_t = space.index_of(&[o, z, z]).unwrap();
    let u = space.index_of(&[z, z, o]).unwrap();
    let t = f0.inc.line_through(big_t, u);
    let rest: Vec<usize> =
        f0.inc.line_points(t).iter().map(|&p| p as usize).filter(|&p| p != big_t && p != u).collect();
    let q = run.qq();
    let mut all = Vec::new();
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let (u1, u2) = (rest[i], rest[j]);
            if baer_subline(space, u, u1, u2)?.contains(big_t) {
                continue;
            }
            for w in 0..f0.np() {
                if f0.abs(w) || f0.inc.on_line(w, t) {
                    continue;
                }
                let secant = f0.line_abs[f0.inc.line_through(u, w)] as u64 == q + 1;
                if secant && f0.tangent(w, u1) && f0.tangent(w, u2) {
                    all.push(vec![u as u32, u1 as u32, u2 as u32, w as u32]);
                }
            }
        }
    }
    let sel = run.choose(all);
    let standard = &frames[0];
    both(run, &frames, &sel, |pf, c| {
        let p = pf.frame.pts(c);
        let t = pf.inc.line_through(p[0], p[1]);
        let rs: Vec<usize> = (0..pf.np())
            .filter(|&x| !pf.abs(x) && !pf.inc.on_line(x, t) && p.iter().all(|&y| pf.tangent(x, y)))
            .collect();
        let meets: BTreeSet<usize> =
            rs.iter().map(|&r| pf.inc.meet(pf.inc.line_through(r, p[3]), t)).collect();
        let closed = closed_form_points(standard, c[1] as usize, c[2] as usize, c[3] as usize).map(|[a, b]| {
            let mut v = vec![pf.frame.pt(a as u32), pf.frame.pt(b as u32)];
            v.sort_unstable();
            v
        });
        Ok(vec![
            obs("points_r", 2, rs.len()),
            flag("meets_t_in_u1_u2", meets == BTreeSet::from([p[1], p[2]])),
            flag("closed_form", closed.as_deref() == Some(&rs[..])),
        ])
    })
}

/// Non-collinear triples off a line, drawn without repetition.
fn sample_triples(
    run: &mut Run,
    pool: &[u32],
    mut valid: impl FnMut(u32, u32, u32) -> bool,
    prefix: &[u32],
) -> Selection<Vec<u32>> {
    let n = pool.len() as u64;
    let total = n * n.saturating_sub(1) * n.saturating_sub(2) / 6;
    if total <= 200_000 {
        let mut all = Vec::new();
        for i in 0..pool.len() {
            for j in i + 1..pool.len() {
                for k in j + 1..pool.len() {
                    if valid(pool[i], pool[j], pool[k]) {
                        let mut c = prefix.to_vec();
                        c.extend([pool[i], pool[j], pool[k]]);
                        all.push(c);
                    }
                }
            }
        }
        return run.choose(all);
    }
    let mut seen = BTreeSet::new();
    let mut items = Vec::new();
    let mut attempts = 0;
    while items.len() < run.budget && attempts < 100 * run.budget {
        attempts += 1;
        let mut t = [0u32; 3];
        for x in &mut t {
            *x = pool[run.rng.random_range(0..pool.len())];
        }
        t.sort_unstable();
        if t[0] == t[1] || t[1] == t[2] || !valid(t[0], t[1], t[2]) || !seen.insert(t) {
            continue;
        }
        let mut c = prefix.to_vec();
        c.extend(t);
        items.push(c);
    }
    Selection { items, enumerated: total, sampled: true }
}

fn pencil_contains_all(p: &Pencil, pts: &[usize]) -> bool {
    pts.iter().all(|&x| p.contains(x))
}

/// Three non-collinear points off a line `l`: `q^2 + 2q` Hermitian pencils
/// contain them and meet `l` in one point.
pub(super) fn hermcurve2(run: &mut Run) -> Result<Outcome, OracleError> {
    let frames = plane_frames(run, Some(tangent_form()))?;
    let f0 = &frames[0];
    let space = f0.frame.space();
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let (a, b) = (space.index_of(&[o, z, z]).unwrap(), space.index_of(&[z, o, z]).unwrap());
    let l = f0.inc.line_through(a, b);
    let pool: Vec<u32> = (0..f0.np() as u32).filter(|&p| !f0.inc.on_line(p as usize, l)).collect();
    let inc = Arc::clone(&f0.inc);
    let sel = sample_triples(run, &pool, |x, y, w| !inc.collinear(x as usize, y as usize, w as usize), &[a as u32, b as u32]);
    let pencils = f0.inc.pencils();
    let q = run.qq();
    both(run, &frames, &sel, |pf, c| {
        let p = pf.frame.pts(c);
        let l = pf.inc.line_through(p[0], p[1]);
        let on_l = pf.inc.line_points(l);
        let count = pencils
            .iter()
            .filter(|pen| pencil_contains_all(pen, &p[2..]))
            .filter(|pen| on_l.iter().filter(|&&x| pen.contains(x as usize)).count() == 1)
            .count();
        Ok(vec![obs("pencils", q * q + 2 * q, count)])
    })
}

/// Tangent-neighbour lists of the points off the curve.
fn tangent_neighbours(pf: &PlaneFrame) -> Vec<Vec<u32>> {
    (0..pf.np())
        .map(|p| {
            if pf.abs(p) {
                return Vec::new();
            }
            (0..pf.np() as u32).filter(|&x| x as usize != p && !pf.abs(x as usize) && pf.tangent(p, x as usize)).collect()
        })
        .collect()
}

/// Triangles of points off the curve with tangent sides, in proof
/// coordinates.
fn tangent_triangles(pf: &PlaneFrame) -> Vec<Vec<u32>> {
    let nb = tangent_neighbours(pf);
    let mut all = Vec::new();
    for a in 0..pf.np() {
        for &b in nb[a].iter().filter(|&&b| b as usize > a) {
            for &c in nb[b as usize].iter().filter(|&&c| c > b) {
                if nb[a].binary_search(&c).is_ok() && !pf.inc.collinear(a, b as usize, c as usize) {
                    all.push(vec![a as u32, b, c]);
                }
            }
        }
    }
    all
}

/// A tangent-sided triangle off the curve lies on exactly `3q` Hermitian
/// pencils meeting the curve in `q + 1` points.
pub(super) fn hermcurve3(run: &mut Run) -> Result<Outcome, OracleError> {
    let frames = plane_frames(run, Some(tangent_form()))?;
    let sel = run.choose(tangent_triangles(&frames[0]));
    let pencils = frames[0].inc.pencils();
    let q = run.qq();
    both(run, &frames, &sel, |pf, c| {
        let p = pf.frame.pts(c);
        let count = pencils
            .iter()
            .filter(|pen| pencil_contains_all(pen, &p))
            .filter(|pen| pen.points.iter().filter(|&&x| pf.abs(x as usize)).count() as u64 == q + 1)
            .count();
        Ok(vec![obs("pencils", 3 * q, count)])
    })
}

/// The two families of second curves from the proof: `lambda X3^(q+1)`
/// (meeting in `q + 1` points) and `lambda X1^(q+1)` (meeting in one).
fn second_curve(family: u32, lambda: Elem) -> Matrix {
    let mut g = tangent_form();
    if family == 1 {
        g[2][2] = lambda;
    } else {
        g[0][0] = lambda;
    }
    g
}

/// Two curves meeting in 1 or `q + 1` points: a unique line `l` carries the
/// intersection on both, both polarities send `l` to the same point, and for
/// `P` on the first curve only, `P^perp` and `P^perp'` meet on `l`.
pub(super) fn hermcurve4(run: &mut Run) -> Result<Outcome, OracleError> {
    let frames = plane_frames(run, Some(tangent_form()))?;
    let f = frames[0].frame.space().field();
    let mut all = Vec::new();
    for &lambda in f.subfield() {
        if lambda.is_zero() {
            continue;
        }
        if lambda != Elem::ONE {
            all.push(vec![1, lambda.0 as u32]);
        }
        all.push(vec![2, lambda.0 as u32]);
    }
    let sel = run.choose(all);
    let q = run.qq();
    both(run, &frames, &sel, |pf, c| {
        let h = &pf.frame.h;
        let h2 = pf.frame.image_of(&second_curve(c[0], Elem(c[1] as u8)))?;
        let space = pf.frame.space();
        let common: Vec<u32> = h.point_set().iter().copied().filter(|&p| h2.is_absolute(p as usize)).collect();
        let lines: Vec<usize> = (0..pf.inc.num_lines())
            .filter(|&l| {
                let pts = pf.inc.line_points(l);
                let on1: Vec<u32> = pts.iter().copied().filter(|&p| h.is_absolute(p as usize)).collect();
                let on2: Vec<u32> = pts.iter().copied().filter(|&p| h2.is_absolute(p as usize)).collect();
                on1 == common && on2 == common
            })
            .collect();
        let mut out = vec![
            if c[0] == 1 { obs("intersection_q_plus_1", q + 1, common.len()) } else { obs("intersection_1", 1, common.len()) },
            obs("lines", 1, lines.len()),
        ];
        if let [l] = lines[..] {
            let pts = pf.inc.line_points(l);
            let line = Subspace::span(space, &[pts[0] as usize, pts[1] as usize]);
            let (p1, p2) = (h.polar(&line).as_point(space), h2.polar(&line).as_point(space));
            out.push(flag("common_pole", p1.is_some() && p1 == p2));
            let off = h
                .point_set()
                .iter()
                .filter(|&&p| !h2.is_absolute(p as usize))
                .filter(|&&p| {
                    let z = h.polar_of_point(p as usize).meet(space.field(), &h2.polar_of_point(p as usize));
                    !z.as_point(space).is_some_and(|z| pf.inc.on_line(z, l))
                })
                .count();
            out.push(obs("polar_meets_off_line", 0, off));
        }
        Ok(out)
    })
}

/// `X1^(q+1) + X2^(q+1) + X3^(q+1) - alpha X1 X2^q - ... - X2^q X3`.
fn alpha_form(f: &Field, alpha: Elem) -> Matrix {
    let (o, m) = (Elem::ONE, f.neg(Elem::ONE));
    vec![vec![o, f.neg(alpha), m], vec![f.neg(f.conj(alpha)), o, m], vec![m, m, o]]
}

/// Number of lines `l` through the first common point with
/// `l ∩ H = l ∩ H' = H ∩ H'`.
fn common_lines(inc: &PlaneIncidence, common: &[usize], on1: impl Fn(usize) -> bool, on2: impl Fn(usize) -> bool) -> usize {
    let Some(&first) = common.first() else { return 0 };
    inc.lines_through(first)
        .iter()
        .filter(|&&l| {
            let pts = inc.line_points(l as usize);
            let mut a: Vec<usize> = pts.iter().map(|&x| x as usize).filter(|&x| on1(x)).collect();
            let mut b: Vec<usize> = pts.iter().map(|&x| x as usize).filter(|&x| on2(x)).collect();
            a.sort_unstable();
            b.sort_unstable();
            a == common && b == common
        })
        .count()
}

/// Tangent-sided triangle `P1, P2, P3` off the curve: `q^2 - q + 1`
/// non-degenerate curves through the three points meet it in 1 or `q + 1`
/// points cut out by a common line. Curves through the coordinate points have zero diagonal; they are
/// enumerated by their off-diagonal entries and deduplicated by point set.
pub(super) fn hermcurve5(run: &mut Run) -> Result<Outcome, OracleError> {
    let frames = plane_frames(run, None)?;
    let space = frames[0].frame.space();
    let f = space.field();
    let minus_one = f.neg(Elem::ONE);
    let all: Vec<Vec<u32>> =
        f.elements().filter(|&a| f.norm(a) == Elem::ONE && a != minus_one).map(|a| vec![a.0 as u32]).collect();
    let sel = run.choose(all);
    let q = run.qq();
    let catalogue = if q <= 3 { Some(hermitian_curve_catalogue(space)?) } else { None };
    let (o, z) = (Elem::ONE, Elem::ZERO);
    let basis: Vec<usize> =
        [[o, z, z], [z, o, z], [z, z, o]].iter().map(|v| space.index_of(v).unwrap()).collect();
    // y1 y2^q, y1 y3^q, y2 y3^q for every point
    let products: Vec<[Elem; 3]> = space
        .enumerate_points()
        .map(|y| [f.mul(y[0], f.conj(y[1])), f.mul(y[0], f.conj(y[2])), f.mul(y[1], f.conj(y[2]))])
        .collect();
    let nonzero: Vec<Elem> = f.nonzero().collect();
    let np = space.num_points();
    both(run, &frames, &sel, |pf, c| {
        let fr = &pf.frame;
        let h = fr.image_of(&alpha_form(f, Elem(c[0] as u8)))?;
        let p: Vec<usize> = basis.iter().map(|&b| fr.pt(b as u32)).collect();
        let pre = p.iter().all(|&x| !h.is_absolute(x))
            && h.is_tangent(p[0], p[1])
            && h.is_tangent(p[0], p[2])
            && h.is_tangent(p[1], p[2])
            && !pf.inc.collinear(p[0], p[1], p[2]);
        // coordinates y relative to the rows of B = (P1; P2; P3)
        let b: Matrix = p.iter().map(|&x| space.point(x).to_vec()).collect();
        let on_h: Vec<bool> = space
            .enumerate_points()
            .map(|y| {
                let x: Vec<Elem> =
                    (0..3).map(|j| (0..3).fold(z, |acc, i| f.add(acc, f.mul(y[i], b[i][j])))).collect();
                h.is_absolute(space.index_of(&x).unwrap())
            })
            .collect();
        let words = np.div_ceil(64);
        let mut found: HashMap<Vec<u64>, u64> = HashMap::new();
        for &a12 in &nonzero {
            for &a13 in &nonzero {
                for &a23 in &nonzero {
                    let g = vec![vec![z, a12, a13], vec![f.conj(a12), z, a23], vec![f.conj(a13), f.conj(a23), z]];
                    if linalg::det(f, &g).is_zero() {
                        continue;
                    }
                    let mut mask = vec![0u64; words];
                    let mut meet = 0u64;
                    for (i, w) in products.iter().enumerate() {
                        let v = f.add(
                            f.add(f.trace(f.mul(a12, w[0])), f.trace(f.mul(a13, w[1]))),
                            f.trace(f.mul(a23, w[2])),
                        );
                        if v.is_zero() {
                            mask[i / 64] |= 1 << (i % 64);
                            meet += on_h[i] as u64;
                        }
                    }
                    if meet == 1 || meet == q + 1 {
                        *found.entry(mask).or_insert(0) += 1;
                    }
                }
            }
        }
        let in_mask = |m: &[u64], i: usize| m[i / 64] >> (i % 64) & 1 == 1;
        found.retain(|m, _| {
            let common: Vec<usize> = (0..np).filter(|&i| in_mask(m, i) && on_h[i]).collect();
            common_lines(&pf.inc, &common, |i| on_h[i], |i| in_mask(m, i)) == 1
        });
        let bad_multiplicity = found.values().filter(|&&m| m != q - 1).count();
        let mut out = vec![
            flag("triangle", pre),
            obs("curves", q * q - q + 1, found.len()),
            obs("classes_not_of_size_q_minus_1", 0, bad_multiplicity),
        ];
        if let Some(cat) = &catalogue {
            let count = cat
                .curves
                .iter()
                .filter(|cv| p.iter().all(|&x| cv.contains(x)))
                .filter(|cv| {
                    let common: Vec<usize> =
                        cv.points.iter().map(|&x| x as usize).filter(|&x| h.is_absolute(x)).collect();
                    let m = common.len() as u64;
                    (m == 1 || m == q + 1) && common_lines(&pf.inc, &common, |x| h.is_absolute(x), |x| cv.contains(x)) == 1
                })
                .count();
            out.push(obs("catalogue_curves", q * q - q + 1, count));
        }
        Ok(out)
    })
}

#[cfg(test)]
mod tests {
    use super::super::{verify_lemma, LemmaId, LemmaStatus, VerifyOptions};

    #[test]
    fn plane_lemmas_at_q2() {
        for id in [
            LemmaId::Hermcurve1,
            LemmaId::Hermcurve0,
            LemmaId::HermcurveMinus1,
            LemmaId::Hermcurve2,
            LemmaId::Hermcurve3,
            LemmaId::Hermcurve4,
            LemmaId::Hermcurve5,
        ] {
            let r = verify_lemma(id, 2, &VerifyOptions { sample_budget: Some(60), ..Default::default() }).unwrap();
            assert_eq!(r.status, LemmaStatus::Pass, "{}", serde_json::to_string_pretty(&r).unwrap());
        }
    }

    #[test]
    fn hermcurve3_count_at_q2() {
        let r = verify_lemma(LemmaId::Hermcurve3, 2, &VerifyOptions::default()).unwrap();
        for frame in &r.frames {
            assert_eq!(frame.cases[0].expected, 6);
            assert_eq!(frame.cases[0].observed.keys().collect::<Vec<_>>(), vec![&6]);
        }
    }
}
