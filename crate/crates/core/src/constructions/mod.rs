//! The graphs built from Hermitian varieties and unitals.

mod onan;
mod unital;

use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::gf::Elem;
use crate::graphcore::{Graph, GraphError};
use crate::projgeom::{GeomError, HermitianGeometry, Space};

pub use onan::{find_dual_onan, witness_family_candidates, OnanConfig, OnanRoute, OnanSearch};
pub use unital::{
    build_gamma_u, build_unital_bm, build_unital_bm_alt, build_unital_bt, build_unital_classical, dual_unital,
    parse_unital_text, unital_text, validate_unital, BmParams, BmViolation, Unital, UnitalKind, UnitalStats,
    UnitalViolation,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("dimension n = {0} is not supported here")]
    BadDimension(usize),
    #[error("invalid Buekenhout-Metz parameters: {0}")]
    BadBmParams(BmViolation),
    #[error("Buekenhout-Tits unitals need q = 2^m with m odd and m > 1, got q = {0}")]
    BadTitsOrder(u32),
    #[error("not a unital: {0}")]
    NotUnital(UnitalViolation),
    #[error("unital file, line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// NU(n + 1, q^2) for the standard variety `X_0^(q+1) + ... + X_n^(q+1)`.
pub fn build_nu(n: usize, q: u32) -> Result<Graph, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::BadDimension(n));
    }
    let h = HermitianGeometry::standard(n, q)?;
    build_nu_on(&h)
}

/// NU graph of an arbitrary non-degenerate variety: vertices are the
/// non-absolute points in index order (labels hold the point indices), edges
/// join points whose line is tangent.
pub fn build_nu_on(h: &HermitianGeometry) -> Result<Graph, ConstructionError> {
    let space: &Space = h.space();
    let f = h.field();
    let d = space.dim();
    let verts: Vec<u32> =
        (0..space.num_points() as u32).filter(|&p| !h.is_absolute(p as usize)).collect();
    // h(a, b) = a . w_b with w_b = G conj(b); the line ab is tangent iff
    // its 2x2 Gram matrix is singular, i.e. h(a,a) h(b,b) = N(h(a,b)), the
    // diagonal being nonzero off the variety.
    let gram = h.gram();
    let w: Vec<Vec<Elem>> = verts
        .par_iter()
        .map(|&b| {
            let bv = space.point(b as usize);
            (0..d)
                .map(|i| (0..d).fold(Elem::ZERO, |acc, j| f.add(acc, f.mul(gram[i][j], f.conj(bv[j])))))
                .collect()
        })
        .collect();
    let diag: Vec<Elem> = verts
        .iter()
        .zip(&w)
        .map(|(&a, wa)| dot(f, space.point(a as usize), wa))
        .collect();
    let mut g = crate::graphcore::build_graph(verts.len(), |i, j| {
        if i == j {
            return false;
        }
        let hab = dot(f, space.point(verts[i] as usize), &w[j]);
        f.mul(diag[i], diag[j]) == f.norm(hab)
    })?;
    g.set_labels(verts);
    Ok(g)
}

#[inline]
fn dot(f: &crate::gf::Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

/// Shared handle used when several constructions work in one plane.
pub fn standard_plane(q: u32) -> Result<Arc<crate::projgeom::PlaneIncidence>, ConstructionError> {
    Ok(Arc::new(crate::projgeom::PlaneIncidence::standard(q)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::{check_srg, SrgParams};

    #[test]
    fn small_nu_graphs_are_strongly_regular() {
        for (n, q) in [(2, 2), (2, 3), (3, 2), (4, 2)] {
            let g = build_nu(n, q).unwrap();
            assert_eq!(check_srg(&g), Ok(SrgParams::nu(n as u32, q as u64)), "n = {n}, q = {q}");
        }
    }

    #[test]
    fn adjacency_agrees_with_line_counts() {
        let h = HermitianGeometry::standard(3, 2).unwrap();
        let g = build_nu_on(&h).unwrap();
        let labels = g.labels().unwrap();
        for i in (0..g.n()).step_by(3) {
            for j in i + 1..g.n() {
                assert_eq!(g.has_edge(i, j), h.is_tangent(labels[i] as usize, labels[j] as usize));
            }
        }
    }

    #[test]
    fn dimension_one_is_rejected() {
        assert_eq!(build_nu(1, 2).unwrap_err(), ConstructionError::BadDimension(1));
    }
}
