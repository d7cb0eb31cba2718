use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::baer::baer_sublines_of_line;
use super::linalg::{self, Matrix};
use super::{GeomError, Space, Subspace};
use crate::gf::Elem;

const PAIR_TABLE_MAX_POINTS: usize = 1000;

/// Point-line incidence of PG(2, q^2). Line `[a, b, c]` gets the index of
/// the point `(a, b, c)`, so both share one numbering.
pub struct PlaneIncidence {
    space: Arc<Space>,
    line_pts: Vec<Vec<u32>>,
    pt_lines: Vec<Vec<u32>>,
    pair_line: Option<Vec<u32>>,
}

impl std::fmt::Debug for PlaneIncidence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PlaneIncidence({:?})", self.space)
    }
}

impl PlaneIncidence {
    pub fn new(space: Arc<Space>) -> Result<PlaneIncidence, GeomError> {
        if space.n() != 2 {
            return Err(GeomError::BadDimension(space.n()));
        }
        let np = space.num_points();
        let f = space.field();
        let mut line_pts = vec![Vec::with_capacity(space.order() + 1); np];
        let mut pt_lines = vec![Vec::with_capacity(space.order() + 1); np];
        for l in 0..np {
            let lc = space.point(l);
            for p in 0..np {
                if linalg::dot(f, lc, space.point(p)).is_zero() {
                    line_pts[l].push(p as u32);
                    pt_lines[p].push(l as u32);
                }
            }
        }
        let mut inc = PlaneIncidence { space, line_pts, pt_lines, pair_line: None };
        if np <= PAIR_TABLE_MAX_POINTS {
            let mut table = vec![u32::MAX; np * np];
            for (l, pts) in inc.line_pts.iter().enumerate() {
                for &a in pts {
                    for &b in pts {
                        if a != b {
                            table[a as usize * np + b as usize] = l as u32;
                        }
                    }
                }
            }
            inc.pair_line = Some(table);
        }
        Ok(inc)
    }

    pub fn standard(q: u32) -> Result<PlaneIncidence, GeomError> {
        PlaneIncidence::new(Arc::new(Space::new(2, q)?))
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn space_arc(&self) -> Arc<Space> {
        Arc::clone(&self.space)
    }

    pub fn q(&self) -> u32 {
        self.space.q()
    }

    pub fn num_points(&self) -> usize {
        self.line_pts.len()
    }

    pub fn num_lines(&self) -> usize {
        self.line_pts.len()
    }

    /// Points on line `l`, ascending.
    pub fn line_points(&self, l: usize) -> &[u32] {
        &self.line_pts[l]
    }

    /// Lines through point `p`, ascending.
    pub fn lines_through(&self, p: usize) -> &[u32] {
        &self.pt_lines[p]
    }

    pub fn on_line(&self, p: usize, l: usize) -> bool {
        self.line_pts[l].binary_search(&(p as u32)).is_ok()
    }

    /// Line joining two distinct points.
    pub fn line_through(&self, a: usize, b: usize) -> usize {
        debug_assert_ne!(a, b);
        if let Some(t) = &self.pair_line {
            return t[a * self.num_points() + b] as usize;
        }
        self.join(a, b)
    }

    fn join(&self, a: usize, b: usize) -> usize {
        let c = linalg::cross(self.space.field(), self.space.point(a), self.space.point(b));
        self.space.index_of(&c).expect("distinct points")
    }

    /// Common point of two distinct lines.
    pub fn meet(&self, l: usize, m: usize) -> usize {
        self.join(l, m)
    }

    pub fn collinear(&self, a: usize, b: usize, c: usize) -> bool {
        a == b || self.on_line(c, self.line_through(a, b))
    }

    /// All Hermitian pencils: a vertex together with a Baer subpencil of the
    /// lines through it. The lines through `V` have dual coordinates on the
    /// line `[V]`, so subpencils are Baer sublines there.
    pub fn pencils(&self) -> Vec<Pencil> {
        (0..self.num_points()).into_par_iter().flat_map_iter(|v| self.pencils_at(v)).collect()
    }

    /// Hermitian pencils with vertex `v`.
    pub fn pencils_at(&self, v: usize) -> Vec<Pencil> {
        let through = self.lines_through(v);
        let subs = baer_sublines_of_line(&self.space, through[0] as usize, through[1] as usize)
            .expect("two distinct lines");
        subs.into_iter().map(|sub| self.pencil_from_lines(v, sub.points)).collect()
    }

    fn pencil_from_lines(&self, vertex: usize, lines: Vec<u32>) -> Pencil {
        let mut points = vec![vertex as u32];
        for &l in &lines {
            points.extend(self.line_pts[l as usize].iter().copied().filter(|&p| p as usize != vertex));
        }
        points.sort_unstable();
        Pencil { vertex: vertex as u32, lines, points }
    }
}

/// A Hermitian pencil of lines in PG(2, q^2).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Pencil {
    pub vertex: u32,
    /// the `q + 1` lines, ascending
    pub lines: Vec<u32>,
    /// the `q^3 + q^2 + 1` points, ascending
    pub points: Vec<u32>,
}

impl Pencil {
    pub fn contains(&self, p: usize) -> bool {
        self.points.binary_search(&(p as u32)).is_ok()
    }

    pub fn has_line(&self, l: usize) -> bool {
        self.lines.binary_search(&(l as u32)).is_ok()
    }
}

/// A plane of PG(n, q^2) identified with PG(2, q^2) through its RREF basis.
pub struct LocalPlane {
    plane: Subspace,
    local: Arc<PlaneIncidence>,
    to_global: Vec<u32>,
}

impl LocalPlane {
    pub fn new(space: &Space, plane: Subspace, local: Arc<PlaneIncidence>) -> Result<LocalPlane, GeomError> {
        if plane.rank() != 3 {
            return Err(GeomError::WrongDimension { expected: 2, got: plane.dim() });
        }
        let f = space.field();
        let rows = plane.rows();
        let mut v = vec![Elem::ZERO; space.dim()];
        // a normalized local vector yields a normalized global vector, since
        // the rows are in echelon form
        let to_global = local
            .space()
            .enumerate_points()
            .map(|c| {
                for (k, x) in v.iter_mut().enumerate() {
                    *x = (0..3).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(c[j], rows[j][k])));
                }
                space.index_of_normalized(&v) as u32
            })
            .collect();
        Ok(LocalPlane { plane, local, to_global })
    }

    /// Builds the local PG(2, q^2) on the fly.
    pub fn standalone(space: &Space, plane: Subspace) -> Result<LocalPlane, GeomError> {
        let local = Arc::new(PlaneIncidence::new(Arc::new(Space::over(space.field_arc(), 2)?))?);
        LocalPlane::new(space, plane, local)
    }

    pub fn plane(&self) -> &Subspace {
        &self.plane
    }

    pub fn incidence(&self) -> &PlaneIncidence {
        &self.local
    }

    pub fn global(&self, local: usize) -> usize {
        self.to_global[local] as usize
    }

    pub fn globals(&self) -> &[u32] {
        &self.to_global
    }

    /// Local index of a global point, or `None` if it is off the plane.
    pub fn local(&self, space: &Space, global: usize) -> Option<usize> {
        if !self.plane.contains_point(space, global) {
            return None;
        }
        let v = space.point(global);
        let c: Vec<Elem> = self.plane.pivots().iter().map(|&pc| v[pc]).collect();
        Some(self.local.space().index_of_normalized(&c))
    }
}

/// One non-degenerate Hermitian curve of PG(2, q^2).
#[derive(Clone, Debug)]
pub struct Curve {
    /// a Gram matrix defining the curve (one of `q - 1` proportional ones)
    pub gram: Matrix,
    pub points: Vec<u16>,
    mask: Vec<u64>,
}

impl Curve {
    pub fn contains(&self, p: usize) -> bool {
        self.mask[p / 64] >> (p % 64) & 1 == 1
    }

    pub fn mask(&self) -> &[u64] {
        &self.mask
    }
}

/// Every non-degenerate Hermitian curve of PG(2, q^2), deduplicated by point
/// set.
#[derive(Debug)]
pub struct CurveCatalogue {
    pub curves: Vec<Curve>,
    /// number of Hermitian Gram matrices found per curve (always `q - 1`)
    pub multiplicity: usize,
}

/// Enumerates all `q^9` Hermitian 3x3 matrices and keeps the nonsingular
/// ones. Limited to `q <= 4`.
pub fn hermitian_curve_catalogue(space: &Space) -> Result<CurveCatalogue, GeomError> {
    if space.n() != 2 {
        return Err(GeomError::BadDimension(space.n()));
    }
    let q = space.q();
    if q > 4 {
        return Err(GeomError::TooLarge { n: 2, order: space.order() });
    }
    let f = space.field();
    let sub: Vec<Elem> = f.subfield().to_vec();
    let all: Vec<Elem> = f.elements().collect();
    let np = space.num_points();
    let words = np.div_ceil(64);
    let norms: Vec<[Elem; 3]> = space
        .enumerate_points()
        .map(|x| [f.norm(x[0]), f.norm(x[1]), f.norm(x[2])])
        .collect();
    let found: Vec<(Vec<u64>, Matrix)> = all
        .par_iter()
        .flat_map_iter(|&a01| {
            let mut out = Vec::new();
            for &a02 in &all {
                for &a12 in &all {
                    for &d0 in &sub {
                        for &d1 in &sub {
                            for &d2 in &sub {
                                let g = vec![
                                    vec![d0, a01, a02],
                                    vec![f.conj(a01), d1, a12],
                                    vec![f.conj(a02), f.conj(a12), d2],
                                ];
                                if linalg::det(f, &g).is_zero() {
                                    continue;
                                }
                                let mut mask = vec![0u64; words];
                                for (p, x) in space.enumerate_points().enumerate() {
                                    // h(x, x) = sum d_i N(x_i) + Tr(a01 x0 x1^q) + ...
                                    let mut v = f.add(
                                        f.add(f.mul(d0, norms[p][0]), f.mul(d1, norms[p][1])),
                                        f.mul(d2, norms[p][2]),
                                    );
                                    v = f.add(v, f.trace(f.mul(a01, f.mul(x[0], f.conj(x[1])))));
                                    v = f.add(v, f.trace(f.mul(a02, f.mul(x[0], f.conj(x[2])))));
                                    v = f.add(v, f.trace(f.mul(a12, f.mul(x[1], f.conj(x[2])))));
                                    if v.is_zero() {
                                        mask[p / 64] |= 1 << (p % 64);
                                    }
                                }
                                out.push((mask, g));
                            }
                        }
                    }
                }
            }
            out
        })
        .collect();
    let mut index: HashMap<Vec<u64>, usize> = HashMap::new();
    let mut curves: Vec<Curve> = Vec::new();
    let mut counts: Vec<usize> = Vec::new();
    for (mask, gram) in found {
        match index.get(&mask) {
            Some(&i) => counts[i] += 1,
            None => {
                index.insert(mask.clone(), curves.len());
                let points = (0..np).filter(|&p| mask[p / 64] >> (p % 64) & 1 == 1).map(|p| p as u16).collect();
                curves.push(Curve { gram, points, mask });
                counts.push(1);
            }
        }
    }
    let multiplicity = counts.first().copied().unwrap_or(0);
    if counts.iter().any(|&c| c != multiplicity) {
        return Err(GeomError::NotHermitian);
    }
    curves.sort_by(|a, b| a.points.cmp(&b.points));
    Ok(CurveCatalogue { curves, multiplicity })
}

/// Hermitian pencils inside a plane of PG(n, q^2), as sorted global point
/// sets, keeping those accepted by `keep`.
pub fn hermitian_pencils_of_plane(
    space: &Space,
    plane: &Subspace,
    keep: impl Fn(&[u32]) -> bool + Sync,
) -> Result<Vec<Vec<u32>>, GeomError> {
    let local = LocalPlane::standalone(space, plane.clone())?;
    let mut out: Vec<Vec<u32>> = local
        .incidence()
        .pencils()
        .into_iter()
        .map(|pen| {
            let mut g: Vec<u32> = pen.points.iter().map(|&p| local.global(p as usize) as u32).collect();
            g.sort_unstable();
            g
        })
        .filter(|g| keep(g))
        .collect();
    out.sort();
    Ok(out)
}
