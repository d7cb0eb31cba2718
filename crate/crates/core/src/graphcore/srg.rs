use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{and_popcount, Graph};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SrgParams {
    pub v: u64,
    pub k: u64,
    pub lambda: u64,
    pub mu: u64,
}

impl SrgParams {
    pub fn new(v: u64, k: u64, lambda: u64, mu: u64) -> SrgParams {
        SrgParams { v, k, lambda, mu }
    }

    /// `k (k - lambda - 1) = (v - k - 1) mu`.
    pub fn is_feasible(&self) -> bool {
        self.k > self.lambda
            && self.v > self.k
            && self.k * (self.k - self.lambda - 1) == (self.v - self.k - 1) * self.mu
    }

    /// Parameters of NU(n + 1, q^2).
    pub fn nu(n: u32, q: u64) -> SrgParams {
        if n == 2 {
            return SrgParams::unital(q);
        }
        let eps: i64 = if n % 2 == 1 { 1 } else { -1 };
        let qi = q as i64;
        let p = |e: u32| qi.pow(e);
        let v = p(n) * (p(n + 1) - eps) / (qi + 1);
        let k = (p(n) + eps) * (p(n - 1) - eps);
        let lambda = p(2 * n - 3) * (qi + 1) - eps * p(n - 1) * (qi - 1) - 2;
        let mu = p(n - 2) * (qi + 1) * (p(n - 1) - eps);
        SrgParams::new(v as u64, k as u64, lambda as u64, mu as u64)
    }

    /// Parameters of the graph of a unital of PG(2, q^2).
    pub fn unital(q: u64) -> SrgParams {
        SrgParams::new(q * q * (q * q - q + 1), (q + 1) * (q * q - 1), 2 * (q * q - 1), (q + 1) * (q + 1))
    }
}

impl fmt::Display for SrgParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.v, self.k, self.lambda, self.mu)
    }
}

/// Why a graph is not strongly regular.
#[derive(Clone, Debug, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SrgFailure {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has no edges or no non-edges")]
    Degenerate,
    #[error("vertex {vertex} has degree {degree}, expected {expected}")]
    Irregular { vertex: usize, degree: u64, expected: u64 },
    #[error("adjacent pair ({u}, {v}) has {count} common neighbours, expected {expected}")]
    Lambda { u: usize, v: usize, count: u64, expected: u64 },
    #[error("non-adjacent pair ({u}, {v}) has {count} common neighbours, expected {expected}")]
    Mu { u: usize, v: usize, count: u64, expected: u64 },
}

/// Exact strong-regularity check over all pairs. On failure the witness is
/// the lexicographically first offending pair.
pub fn check_srg(g: &Graph) -> Result<SrgParams, SrgFailure> {
    let n = g.n();
    if n < 2 {
        return Err(SrgFailure::Degenerate);
    }
    let k = g.degree(0) as u64;
    if let Some(vertex) = (0..n).find(|&i| g.degree(i) as u64 != k) {
        return Err(SrgFailure::Irregular { vertex, degree: g.degree(vertex) as u64, expected: k });
    }
    if k == 0 || k as usize == n - 1 {
        return Err(SrgFailure::Degenerate);
    }
    if !g.is_connected() {
        return Err(SrgFailure::Disconnected);
    }
    let first_edge = g.neighbors(0).next().expect("k > 0");
    let first_non = (1..n).find(|&j| !g.has_edge(0, j)).expect("k < n - 1");
    let lambda = and_popcount(g.row(0), g.row(first_edge)) as u64;
    let mu = and_popcount(g.row(0), g.row(first_non)) as u64;
    let failure = (0..n)
        .into_par_iter()
        .map(|u| {
            for v in u + 1..n {
                let c = and_popcount(g.row(u), g.row(v)) as u64;
                if g.has_edge(u, v) {
                    if c != lambda {
                        return Some(SrgFailure::Lambda { u, v, count: c, expected: lambda });
                    }
                } else if c != mu {
                    return Some(SrgFailure::Mu { u, v, count: c, expected: mu });
                }
            }
            None
        })
        .find_first(|r| r.is_some())
        .flatten();
    match failure {
        Some(f) => Err(f),
        None => Ok(SrgParams::new(n as u64, k, lambda, mu)),
    }
}

/// An eigenvalue `(num + coeff * sqrt(disc)) / 2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenvalue {
    pub num: i64,
    pub coeff: i64,
    pub disc: i64,
}

impl Eigenvalue {
    pub fn integer(x: i64) -> Eigenvalue {
        Eigenvalue { num: 2 * x, coeff: 0, disc: 0 }
    }

    pub fn as_integer(&self) -> Option<i64> {
        (self.coeff == 0 && self.num % 2 == 0).then_some(self.num / 2)
    }

    pub fn to_f64(&self) -> f64 {
        (self.num as f64 + self.coeff as f64 * (self.disc as f64).sqrt()) / 2.0
    }
}

impl fmt::Display for Eigenvalue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.as_integer() {
            Some(x) => write!(f, "{x}"),
            None => {
                let sign = if self.coeff < 0 { '-' } else { '+' };
                let c = self.coeff.abs();
                if c == 1 {
                    write!(f, "({}{}sqrt({}))/2", self.num, sign, self.disc)
                } else {
                    write!(f, "({}{}{}sqrt({}))/2", self.num, sign, c, self.disc)
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub k: i64,
    pub r: Eigenvalue,
    pub s: Eigenvalue,
    pub f: u64,
    pub g: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SpectrumError {
    #[error("parameters {0} violate k(k - lambda - 1) = (v - k - 1) mu")]
    Infeasible(SrgParams),
    #[error("parameters {0} give non-integral multiplicities")]
    NonIntegral(SrgParams),
}

/// Eigenvalues and multiplicities determined by the parameters.
pub fn srg_spectrum(p: SrgParams) -> Result<SpectrumReport, SpectrumError> {
    if !p.is_feasible() || p.mu == 0 {
        return Err(SpectrumError::Infeasible(p));
    }
    let (v, k, l, m) = (p.v as i64, p.k as i64, p.lambda as i64, p.mu as i64);
    let d = (l - m) * (l - m) + 4 * (k - m);
    let root = isqrt(d);
    if root * root == d {
        if root == 0 {
            return Err(SpectrumError::NonIntegral(p));
        }
        let r2 = l - m + root;
        let s2 = l - m - root;
        // f (r - s) = -k - s (v - 1), all doubled
        let num = -2 * k - s2 * (v - 1);
        if r2 % 2 != 0 || s2 % 2 != 0 || num % (2 * root) != 0 {
            return Err(SpectrumError::NonIntegral(p));
        }
        let f = num / (2 * root);
        let g = v - 1 - f;
        if f < 0 || g < 0 {
            return Err(SpectrumError::NonIntegral(p));
        }
        return Ok(SpectrumReport {
            k,
            r: Eigenvalue::integer(r2 / 2),
            s: Eigenvalue::integer(s2 / 2),
            f: f as u64,
            g: g as u64,
        });
    }
    // irrational eigenvalues force f = g (conference graph)
    if 2 * k + (v - 1) * (l - m) != 0 || (v - 1) % 2 != 0 {
        return Err(SpectrumError::NonIntegral(p));
    }
    let half = ((v - 1) / 2) as u64;
    Ok(SpectrumReport {
        k,
        r: Eigenvalue { num: l - m, coeff: 1, disc: d },
        s: Eigenvalue { num: l - m, coeff: -1, disc: d },
        f: half,
        g: half,
    })
}

fn isqrt(x: i64) -> i64 {
    let mut r = (x as f64).sqrt() as i64;
    while r * r > x {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= x {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_formulas() {
        assert_eq!(SrgParams::nu(2, 2), SrgParams::new(12, 9, 6, 9));
        assert_eq!(SrgParams::nu(2, 3), SrgParams::new(63, 32, 16, 16));
        assert_eq!(SrgParams::nu(4, 2), SrgParams::new(176, 135, 102, 108));
        assert_eq!(SrgParams::nu(4, 3), SrgParams::new(4941, 2240, 1024, 1008));
        assert_eq!(SrgParams::nu(5, 2), SrgParams::new(672, 495, 366, 360));
        assert_eq!(SrgParams::unital(8), SrgParams::new(3648, 567, 126, 81));
        for (n, q) in [(2, 2), (2, 3), (3, 2), (4, 2), (4, 3), (5, 2)] {
            assert!(SrgParams::nu(n, q).is_feasible());
        }
    }

    #[test]
    fn spectra() {
        let s = srg_spectrum(SrgParams::new(12, 9, 6, 9)).unwrap();
        assert_eq!((s.r.as_integer(), s.f, s.s.as_integer(), s.g), (Some(0), 8, Some(-3), 3));
        let s = srg_spectrum(SrgParams::new(176, 135, 102, 108)).unwrap();
        assert_eq!((s.r.as_integer(), s.s.as_integer()), (Some(3), Some(-9)));
        let c5 = srg_spectrum(SrgParams::new(5, 2, 0, 1)).unwrap();
        assert_eq!((c5.f, c5.g), (2, 2));
        assert_eq!(c5.r.to_string(), "(-1+sqrt(5))/2");
        assert!((c5.r.to_f64() - 0.618).abs() < 1e-3);
    }

    #[test]
    fn trace_condition_holds() {
        for p in [SrgParams::nu(2, 3), SrgParams::nu(4, 3), SrgParams::nu(5, 2), SrgParams::unital(8)] {
            let s = srg_spectrum(p).unwrap();
            let r = s.r.as_integer().unwrap();
            let t = s.s.as_integer().unwrap();
            assert_eq!(1 + s.f + s.g, p.v);
            assert_eq!(s.k + s.f as i64 * r + s.g as i64 * t, 0);
        }
    }

    #[test]
    fn infeasible_parameters() {
        assert!(matches!(srg_spectrum(SrgParams::new(10, 3, 1, 1)), Err(SpectrumError::Infeasible(_))));
    }

    #[test]
    fn check_srg_on_small_graphs() {
        assert_eq!(check_srg(&Graph::cycle(5)), Ok(SrgParams::new(5, 2, 0, 1)));
        assert!(matches!(check_srg(&Graph::cycle(6)), Err(SrgFailure::Mu { u: 0, v: 3, .. })));
        assert_eq!(check_srg(&Graph::complete(4)), Err(SrgFailure::Degenerate));
        let two_triangles = Graph::from_edges(6, &[(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        assert_eq!(check_srg(&two_triangles), Err(SrgFailure::Disconnected));
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(matches!(check_srg(&path), Err(SrgFailure::Irregular { vertex: 1, .. })));
    }
}
