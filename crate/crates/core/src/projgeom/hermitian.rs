use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::linalg::{self, Matrix};
use super::{GeomError, Space, Subspace};
use crate::gf::{Elem, Field};

/// How a line meets a non-degenerate Hermitian variety.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LineClass {
    /// one point
    Tangent,
    /// `q + 1` points (a Baer subline)
    Secant,
    /// `q^2 + 1` points, the line lies on the variety
    Generator,
}

/// How a plane of PG(4, q^2) meets H(4, q^2).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaneSection {
    /// `q^2 + 1` points
    Line,
    /// `q^3 + q^2 + 1` points
    Pencil,
    /// `q^3 + 1` points
    HermitianCurve,
}

/// A non-degenerate Hermitian variety `h(x, x) = 0` with
/// `h(x, y) = sum_ij x_i G_ij y_j^q`.
pub struct HermitianGeometry {
    space: Arc<Space>,
    gram: Matrix,
    identity_gram: bool,
    absolute: Vec<bool>,
    points: Vec<u32>,
}

impl std::fmt::Debug for HermitianGeometry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "H({}, {}) with {} points", self.space.n(), self.space.order(), self.points.len())
    }
}

/// `(q^(n+1) + (-1)^n)(q^n - (-1)^n) / (q^2 - 1)`.
pub fn hermitian_point_count(n: usize, q: u32) -> usize {
    let q = q as i128;
    let sign: i128 = if n % 2 == 0 { 1 } else { -1 };
    ((q.pow(n as u32 + 1) + sign) * (q.pow(n as u32) - sign) / (q * q - 1)) as usize
}

impl HermitianGeometry {
    /// Builds the variety for `gram`, or for the identity matrix
    /// (`X_1^(q+1) + ... + X_(n+1)^(q+1)`) when `gram` is `None`.
    pub fn new(space: Arc<Space>, gram: Option<Matrix>) -> Result<HermitianGeometry, GeomError> {
        let d = space.dim();
        let f = space.field();
        let gram = gram.unwrap_or_else(|| linalg::identity(d));
        if gram.len() != d || gram.iter().any(|r| r.len() != d) {
            return Err(GeomError::NotHermitian);
        }
        for i in 0..d {
            for j in 0..d {
                if gram[j][i] != f.conj(gram[i][j]) {
                    return Err(GeomError::NotHermitian);
                }
            }
        }
        if linalg::det(f, &gram).is_zero() {
            return Err(GeomError::Singular);
        }
        let identity_gram = gram == linalg::identity(d);
        let mut h = HermitianGeometry { space, gram, identity_gram, absolute: Vec::new(), points: Vec::new() };
        let np = h.space.num_points();
        h.absolute = (0..np).map(|i| h.value(h.space.point(i)).is_zero()).collect();
        h.points = (0..np as u32).filter(|&i| h.absolute[i as usize]).collect();
        Ok(h)
    }

    /// PG(n, q^2) with the identity form.
    pub fn standard(n: usize, q: u32) -> Result<HermitianGeometry, GeomError> {
        HermitianGeometry::new(Arc::new(Space::new(n, q)?), None)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn space_arc(&self) -> Arc<Space> {
        Arc::clone(&self.space)
    }

    pub fn field(&self) -> &Field {
        self.space.field()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn q(&self) -> u32 {
        self.space.q()
    }

    /// Absolute points, ascending.
    pub fn point_set(&self) -> &[u32] {
        &self.points
    }

    #[inline]
    pub fn is_absolute(&self, p: usize) -> bool {
        self.absolute[p]
    }

    pub fn absolute_flags(&self) -> &[bool] {
        &self.absolute
    }

    #[inline]
    pub fn form(&self, x: &[Elem], y: &[Elem]) -> Elem {
        let f = self.field();
        if self.identity_gram {
            return x.iter().zip(y).fold(Elem::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, f.conj(b))));
        }
        let mut acc = Elem::ZERO;
        for (i, &xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                let g = self.gram[i][j];
                if !g.is_zero() && !yj.is_zero() {
                    acc = f.add(acc, f.mul(f.mul(xi, g), f.conj(yj)));
                }
            }
        }
        acc
    }

    #[inline]
    pub fn value(&self, x: &[Elem]) -> Elem {
        self.form(x, x)
    }

    /// Number of absolute points on the line spanned by vectors `a`, `b`.
    pub fn line_count(&self, a: &[Elem], b: &[Elem]) -> usize {
        let f = self.field();
        let haa = self.form(a, a);
        let hab = self.form(a, b);
        let hbb = self.form(b, b);
        count_line_zeros(f, haa, hab, hbb)
    }

    pub fn line_count_points(&self, a: usize, b: usize) -> usize {
        self.line_count(self.space.point(a), self.space.point(b))
    }

    pub fn classify_count(&self, count: usize) -> Result<LineClass, GeomError> {
        let q = self.q() as usize;
        match count {
            1 => Ok(LineClass::Tangent),
            c if c == q + 1 => Ok(LineClass::Secant),
            c if c == q * q + 1 => Ok(LineClass::Generator),
            c => Err(GeomError::BadLineSection(c)),
        }
    }

    /// Class of the line through two distinct points.
    pub fn classify_line(&self, a: usize, b: usize) -> Result<LineClass, GeomError> {
        if a == b {
            return Err(GeomError::NotDistinct);
        }
        self.classify_count(self.line_count_points(a, b))
    }

    /// Class of a line given as a rank-2 subspace.
    pub fn classify_line_subspace(&self, line: &Subspace) -> Result<LineClass, GeomError> {
        if line.rank() != 2 {
            return Err(GeomError::WrongDimension { expected: 1, got: line.dim() });
        }
        self.classify_count(self.line_count(&line.rows()[0], &line.rows()[1]))
    }

    pub fn is_tangent(&self, a: usize, b: usize) -> bool {
        self.line_count_points(a, b) == 1
    }

    /// Number of absolute points in a subspace.
    pub fn section_size(&self, s: &Subspace) -> usize {
        self.space.subspace_points(s).iter().filter(|&&p| self.absolute[p as usize]).count()
    }

    /// `S^perp = { y : h(s, y) = 0 for all s in S }`.
    pub fn polar(&self, s: &Subspace) -> Subspace {
        let f = self.field();
        let d = self.space.dim();
        // h(s, y) = sum_j (sum_i s_i G_ij) y_j^q; apply x -> x^q to get a
        // linear condition on y.
        let rows: Matrix = s
            .rows()
            .iter()
            .map(|sv| {
                (0..d)
                    .map(|j| {
                        let c = (0..d).fold(Elem::ZERO, |acc, i| f.add(acc, f.mul(sv[i], self.gram[i][j])));
                        f.conj(c)
                    })
                    .collect()
            })
            .collect();
        Subspace::from_vectors(f, linalg::null_space(f, &rows, d))
    }

    pub fn polar_of_point(&self, p: usize) -> Subspace {
        self.polar(&Subspace::point(&self.space, p))
    }

    /// Plane section of H(n, q^2). In PG(4, q^2) it is cross-checked against
    /// the polar line.
    pub fn classify_plane_section(&self, plane: &Subspace) -> Result<PlaneSection, GeomError> {
        if self.n() < 2 {
            return Err(GeomError::BadDimension(self.n()));
        }
        if plane.rank() != 3 {
            return Err(GeomError::WrongDimension { expected: 2, got: plane.dim() });
        }
        let size = self.section_size(plane);
        if self.n() != 4 {
            return self.plane_section_by_size(size);
        }
        let polar = self.classify_line_subspace(&self.polar(plane))?;
        let section = self.plane_section_by_size(size)?;
        let consistent = matches!(
            (section, polar),
            (PlaneSection::Line, LineClass::Generator)
                | (PlaneSection::Pencil, LineClass::Tangent)
                | (PlaneSection::HermitianCurve, LineClass::Secant)
        );
        if consistent {
            Ok(section)
        } else {
            Err(GeomError::InconsistentSection { size, polar })
        }
    }

    /// Classifies a plane section from its size alone.
    pub fn plane_section_by_size(&self, size: usize) -> Result<PlaneSection, GeomError> {
        let q = self.q() as usize;
        match size {
            s if s == q * q + 1 => Ok(PlaneSection::Line),
            s if s == q * q * q + q * q + 1 => Ok(PlaneSection::Pencil),
            s if s == q * q * q + 1 => Ok(PlaneSection::HermitianCurve),
            s => Err(GeomError::UnexpectedSection(s)),
        }
    }
}

/// Zeros of `h(a + t b)` over `t`, plus `b` itself, on the line `<a, b>`.
#[inline]
pub(crate) fn count_line_zeros(f: &Field, haa: Elem, hab: Elem, hbb: Elem) -> usize {
    let hba = f.conj(hab);
    let mut count = usize::from(hbb.is_zero());
    for t in f.elements() {
        let v = f.add(
            f.add(haa, f.mul(f.conj(t), hab)),
            f.add(f.mul(t, hba), f.mul(f.norm(t), hbb)),
        );
        if v.is_zero() {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_counts_match_closed_form() {
        for (n, q) in [(2, 2), (2, 3), (2, 4), (2, 5), (3, 2), (3, 3), (4, 2), (4, 3), (5, 2)] {
            let h = HermitianGeometry::standard(n, q).unwrap();
            assert_eq!(h.point_set().len(), hermitian_point_count(n, q), "H({n},{q}^2)");
        }
        assert_eq!(hermitian_point_count(2, 2), 9);
        assert_eq!(hermitian_point_count(4, 2), 165);
        assert_eq!(hermitian_point_count(3, 3), 280);
    }

    #[test]
    fn rejects_bad_grams() {
        let space = Arc::new(Space::new(2, 2).unwrap());
        let f = space.field();
        let w = f.gen_pow(1);
        let mut g = linalg::identity(3);
        g[0][1] = w;
        g[1][0] = w; // should be w^2
        assert!(matches!(HermitianGeometry::new(Arc::clone(&space), Some(g)), Err(GeomError::NotHermitian)));
        let mut g = linalg::identity(3);
        g[2][2] = Elem::ZERO;
        assert!(matches!(HermitianGeometry::new(space, Some(g)), Err(GeomError::Singular)));
    }

    #[test]
    fn plane_lines_split_into_tangents_and_secants() {
        let h = HermitianGeometry::standard(2, 2).unwrap();
        let (mut tangent, mut secant) = (0, 0);
        h.space().for_each_line(|pts| {
            let c = pts.iter().filter(|&&p| h.is_absolute(p as usize)).count();
            match h.classify_count(c).unwrap() {
                LineClass::Tangent => tangent += 1,
                LineClass::Secant => secant += 1,
                LineClass::Generator => panic!("no generators in a plane"),
            }
        });
        assert_eq!((tangent, secant), (9, 12));
    }

    #[test]
    fn algebraic_line_count_matches_enumeration() {
        let h = HermitianGeometry::standard(3, 2).unwrap();
        h.space().for_each_line(|pts| {
            let c = pts.iter().filter(|&&p| h.is_absolute(p as usize)).count();
            assert_eq!(h.line_count_points(pts[0] as usize, pts[3] as usize), c);
        });
    }

    #[test]
    fn polarity_is_an_involution_and_detects_absolute_points() {
        let h = HermitianGeometry::standard(3, 2).unwrap();
        let s = h.space();
        for p in 0..s.num_points() {
            let hp = h.polar_of_point(p);
            assert_eq!(hp.dim(), 2);
            assert_eq!(h.polar(&hp).as_point(s), Some(p));
            assert_eq!(hp.contains_point(s, p), h.is_absolute(p));
        }
    }

    #[test]
    fn tangent_lines_through_an_external_point() {
        // n = 4, q = 2: through P off H the tangent lines meet H in the
        // points of polar(P) on H, which form an H(3, 4) of 45 points.
        let h = HermitianGeometry::standard(4, 2).unwrap();
        let s = h.space();
        let p = (0..s.num_points()).find(|&i| !h.is_absolute(i)).unwrap();
        let mut touch = Vec::new();
        for x in 0..s.num_points() {
            if x != p && h.is_tangent(p, x) && h.is_absolute(x) {
                touch.push(x);
            }
        }
        assert_eq!(touch.len(), 45);
        let polar = h.polar_of_point(p);
        assert_eq!(h.section_size(&polar), 45);
        assert!(touch.iter().all(|&x| polar.contains_point(s, x)));
    }

    #[test]
    fn plane_census_in_pg_4_4() {
        let h = HermitianGeometry::standard(4, 2).unwrap();
        let mut census = std::collections::BTreeMap::new();
        h.space().for_each_subspace(3, |plane| {
            let sec = h.classify_plane_section(plane).unwrap();
            *census.entry((sec, h.section_size(plane))).or_insert(0) += 1;
        });
        let sizes: Vec<usize> = census.keys().map(|k| k.1).collect();
        assert_eq!(sizes.len(), 3);
        for s in sizes {
            assert!([5, 13, 9].contains(&s));
        }
    }

    #[test]
    fn polar_of_secant_plane_is_secant_line() {
        let h = HermitianGeometry::standard(4, 2).unwrap();
        let mut checked = 0;
        h.space().for_each_subspace(3, |plane| {
            if checked < 50 && h.section_size(plane) == 9 {
                let polar = h.polar(plane);
                assert_eq!(polar.dim(), 1);
                assert_eq!(h.section_size(&polar), 3);
                checked += 1;
            }
        });
        assert_eq!(checked, 50);
    }
}
