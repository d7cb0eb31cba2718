//! Projective spaces PG(n, q^2), their subspaces, Hermitian varieties and
//! Baer substructures.
//!
//! Points are interned: every normalized coordinate vector (first nonzero
//! coordinate equal to one) gets an index, assigned in lexicographic order of
//! the coordinates' field indices. Everything downstream works with these
//! indices.

mod baer;
mod hermitian;
pub mod linalg;
mod plane;

use std::sync::Arc;

use thiserror::Error;

use crate::gf::{prime_power, Elem, Field, GfError};

pub use baer::{baer_subline, baer_sublines_of_line, BaerSubline};
pub use hermitian::{hermitian_point_count, HermitianGeometry, LineClass, PlaneSection};
pub use plane::{
    hermitian_curve_catalogue, hermitian_pencils_of_plane, CurveCatalogue, LocalPlane, Pencil, PlaneIncidence,
};

/// Subfield orders `q` for which PG(n, q^2) is supported.
pub const SUPPORTED_Q: [u32; 6] = [2, 3, 4, 5, 8, 9];

const LOOKUP_CAP: usize = 1 << 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeomError {
    #[error("unsupported subfield order q = {0}")]
    UnsupportedQ(u32),
    #[error("PG({n}, {order}) is too large to intern")]
    TooLarge { n: usize, order: usize },
    #[error("dimension n = {0} is out of range")]
    BadDimension(usize),
    #[error("Gram matrix is not Hermitian")]
    NotHermitian,
    #[error("Gram matrix is singular")]
    Singular,
    #[error("points are not distinct")]
    NotDistinct,
    #[error("points are not collinear")]
    NotCollinear,
    #[error("expected a {expected}-dimensional subspace, got dimension {got}")]
    WrongDimension { expected: isize, got: isize },
    #[error("plane section of size {size} contradicts its polar line class {polar:?}")]
    InconsistentSection { size: usize, polar: LineClass },
    #[error("plane section of unexpected size {0}")]
    UnexpectedSection(usize),
    #[error("line meets the variety in {0} points")]
    BadLineSection(usize),
    #[error(transparent)]
    Field(#[from] GfError),
}

/// The point set of PG(n, q^2).
pub struct Space {
    field: Arc<Field>,
    n: usize,
    q: u32,
    coords: Vec<Elem>,
    lookup: Vec<u32>,
}

impl std::fmt::Debug for Space {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "PG({}, {})", self.n, self.order())
    }
}

impl Space {
    pub fn new(n: usize, q: u32) -> Result<Space, GeomError> {
        if !SUPPORTED_Q.contains(&q) {
            return Err(GeomError::UnsupportedQ(q));
        }
        if n == 0 {
            return Err(GeomError::BadDimension(n));
        }
        let (p, e) = prime_power(q).ok_or(GeomError::UnsupportedQ(q))?;
        let field = Field::new(p, 2 * e)?;
        Space::over(Arc::new(field), n)
    }

    /// PG(n, F) for a field that is a quadratic extension.
    pub fn over(field: Arc<Field>, n: usize) -> Result<Space, GeomError> {
        let order = field.order();
        let q = field.subfield_order().ok_or(GfError::NotQuadratic { order })?;
        let total = order
            .checked_pow(n as u32 + 1)
            .filter(|&t| t <= LOOKUP_CAP)
            .ok_or(GeomError::TooLarge { n, order })?;
        let dim = n + 1;
        let mut lookup = vec![u32::MAX; total];
        let mut coords = Vec::new();
        let mut v = vec![Elem::ZERO; dim];
        let mut count = 0u32;
        for code in 1..total {
            let mut rest = code;
            for i in (0..dim).rev() {
                v[i] = Elem((rest % order) as u8);
                rest /= order;
            }
            if v.iter().find(|x| !x.is_zero()) == Some(&Elem::ONE) {
                lookup[code] = count;
                coords.extend_from_slice(&v);
                count += 1;
            }
        }
        Ok(Space { field, n, q, coords, lookup })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<Field> {
        Arc::clone(&self.field)
    }

    /// Projective dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Vector length `n + 1`.
    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Subfield order `q`.
    pub fn q(&self) -> u32 {
        self.q
    }

    /// Field order `q^2`.
    pub fn order(&self) -> usize {
        self.field.order()
    }

    pub fn num_points(&self) -> usize {
        self.coords.len() / self.dim()
    }

    /// `(Q^(k) - 1) / (Q - 1)` points in a projective space of dimension `k - 1`.
    pub fn points_in_dim(&self, projective_dim: usize) -> usize {
        let order = self.order();
        (order.pow(projective_dim as u32 + 1) - 1) / (order - 1)
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[Elem] {
        let d = self.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    /// Index of an already normalized vector.
    #[inline]
    pub fn index_of_normalized(&self, v: &[Elem]) -> usize {
        let order = self.order();
        let code = v.iter().fold(0usize, |acc, x| acc * order + x.index());
        let idx = self.lookup[code];
        debug_assert!(idx != u32::MAX, "vector {v:?} is not normalized");
        idx as usize
    }

    /// Scales `v` so its first nonzero coordinate is one. Returns `false` for
    /// the zero vector.
    pub fn normalize(&self, v: &mut [Elem]) -> bool {
        let Some(lead) = v.iter().copied().find(|x| !x.is_zero()) else {
            return false;
        };
        if lead != Elem::ONE {
            let inv = self.field.inv(lead).unwrap();
            for x in v.iter_mut() {
                *x = self.field.mul(*x, inv);
            }
        }
        true
    }

    /// Index of the point spanned by a nonzero vector.
    pub fn index_of(&self, v: &[Elem]) -> Option<usize> {
        let mut w = v.to_vec();
        self.normalize(&mut w).then(|| self.index_of_normalized(&w))
    }

    /// Indices of the points of a subspace, ascending.
    pub fn subspace_points(&self, s: &Subspace) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.points_in_dim(s.rank().saturating_sub(1)));
        self.for_each_subspace_point(&s.rows, |i| out.push(i as u32));
        out.sort_unstable();
        out
    }

    /// Calls `f` for every point of the span of RREF `rows`.
    fn for_each_subspace_point(&self, rows: &[Vec<Elem>], mut f: impl FnMut(usize)) {
        let k = rows.len();
        let d = self.dim();
        let order = self.order();
        let fld = &self.field;
        let mut v = vec![Elem::ZERO; d];
        let mut t = vec![0usize; k];
        for lead in 0..k {
            // combinations r_lead + sum_{j > lead} t_j r_j
            let tail = k - lead - 1;
            let combos = order.pow(tail as u32);
            for c in 0..combos {
                let mut rest = c;
                for j in 0..tail {
                    t[j] = rest % order;
                    rest /= order;
                }
                v.copy_from_slice(&rows[lead]);
                for j in 0..tail {
                    if t[j] != 0 {
                        let coef = Elem(t[j] as u8);
                        for (x, &y) in v.iter_mut().zip(&rows[lead + 1 + j]) {
                            *x = fld.add(*x, fld.mul(coef, y));
                        }
                    }
                }
                f(self.index_of_normalized(&v));
            }
        }
    }

    /// Enumerates every subspace of vector dimension `k` (projective
    /// dimension `k - 1`) in a fixed order, as an RREF basis.
    pub fn for_each_subspace(&self, k: usize, mut f: impl FnMut(&Subspace)) {
        let d = self.dim();
        if k == 0 || k > d {
            return;
        }
        let order = self.order();
        let mut pivots: Vec<usize> = (0..k).collect();
        loop {
            // free positions: row i, columns > pivots[i] that are not pivots
            let free: Vec<(usize, usize)> = (0..k)
                .flat_map(|i| {
                    let piv = &pivots;
                    (piv[i] + 1..d).filter(move |c| !piv.contains(c)).map(move |c| (i, c))
                })
                .collect();
            let combos = order.pow(free.len() as u32);
            let mut rows = vec![vec![Elem::ZERO; d]; k];
            for c in 0..combos {
                for (i, row) in rows.iter_mut().enumerate() {
                    row.iter_mut().for_each(|x| *x = Elem::ZERO);
                    row[pivots[i]] = Elem::ONE;
                }
                let mut rest = c;
                for &(i, col) in &free {
                    rows[i][col] = Elem((rest % order) as u8);
                    rest /= order;
                }
                let s = Subspace { rows: rows.clone(), pivots: pivots.clone() };
                f(&s);
            }
            // next pivot combination
            let mut i = k;
            loop {
                if i == 0 {
                    return;
                }
                i -= 1;
                if pivots[i] < d - k + i {
                    pivots[i] += 1;
                    for j in i + 1..k {
                        pivots[j] = pivots[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }

    /// Calls `f` with the point indices of every line.
    pub fn for_each_line(&self, mut f: impl FnMut(&[u32])) {
        let mut buf = Vec::with_capacity(self.order() + 1);
        self.for_each_subspace(2, |s| {
            buf.clear();
            self.for_each_subspace_point(&s.rows, |i| buf.push(i as u32));
            f(&buf);
        });
    }

    /// Points of the line through two distinct points, ascending.
    pub fn line_points(&self, a: usize, b: usize) -> Vec<u32> {
        self.subspace_points(&Subspace::span(self, &[a, b]))
    }

    pub fn enumerate_points(&self) -> impl Iterator<Item = &[Elem]> {
        self.coords.chunks(self.dim())
    }
}

/// A subspace stored as a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn from_vectors(field: &Field, vectors: Vec<Vec<Elem>>) -> Subspace {
        let (rows, pivots) = linalg::rref(field, vectors);
        Subspace { rows, pivots }
    }

    pub fn span(space: &Space, points: &[usize]) -> Subspace {
        Subspace::from_vectors(space.field(), points.iter().map(|&p| space.point(p).to_vec()).collect())
    }

    pub fn point(space: &Space, p: usize) -> Subspace {
        Subspace::span(space, &[p])
    }

    pub fn whole(space: &Space) -> Subspace {
        Subspace::from_vectors(space.field(), linalg::identity(space.dim()))
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Vector dimension.
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Projective dimension (`-1` for the empty subspace).
    pub fn dim(&self) -> isize {
        self.rows.len() as isize - 1
    }

    pub fn contains_vec(&self, field: &Field, v: &[Elem]) -> bool {
        let mut w = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            let c = w[pc];
            if !c.is_zero() {
                for (x, &y) in w.iter_mut().zip(row) {
                    *x = field.sub(*x, field.mul(c, y));
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    pub fn contains_point(&self, space: &Space, p: usize) -> bool {
        self.contains_vec(space.field(), space.point(p))
    }

    pub fn join(&self, field: &Field, other: &Subspace) -> Subspace {
        let mut v = self.rows.clone();
        v.extend(other.rows.iter().cloned());
        Subspace::from_vectors(field, v)
    }

    /// Orthogonal complement under the standard bilinear dot product.
    pub fn annihilator(&self, field: &Field, dim: usize) -> Subspace {
        Subspace::from_vectors(field, linalg::null_space(field, &self.rows, dim))
    }

    pub fn meet(&self, field: &Field, other: &Subspace) -> Subspace {
        let dim = self.rows.first().or(other.rows.first()).map_or(0, Vec::len);
        if self.rows.is_empty() || other.rows.is_empty() {
            return Subspace { rows: Vec::new(), pivots: Vec::new() };
        }
        let a = self.annihilator(field, dim);
        let b = other.annihilator(field, dim);
        a.join(field, &b).annihilator(field, dim)
    }

    /// The single point of a rank-1 subspace.
    pub fn as_point(&self, space: &Space) -> Option<usize> {
        (self.rank() == 1).then(|| space.index_of_normalized(&self.rows[0]))
    }
}
