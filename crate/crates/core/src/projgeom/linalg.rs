//! Dense linear algebra over a small finite field.

use crate::gf::{Elem, Field};

pub type Matrix = Vec<Vec<Elem>>;

/// Reduced row-echelon form. Zero rows are dropped; returns the pivot columns.
pub fn rref(f: &Field, mut rows: Matrix) -> (Matrix, Vec<usize>) {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c];
                for j in 0..ncols {
                    let t = f.mul(factor, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], t);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(f: &Field, rows: &[Vec<Elem>]) -> usize {
    rref(f, rows.to_vec()).0.len()
}

/// Basis of `{x : r . x = 0 for every row r}`, in reduced row-echelon form.
pub fn null_space(f: &Field, rows: &[Vec<Elem>], ncols: usize) -> Matrix {
    let (red, pivots) = rref(f, rows.to_vec());
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let basis: Matrix = free
        .iter()
        .map(|&fc| {
            let mut v = vec![Elem::ZERO; ncols];
            v[fc] = Elem::ONE;
            for (row, &pc) in red.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect();
    rref(f, basis).0
}

pub fn det(f: &Field, m: &[Vec<Elem>]) -> Elem {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Elem::ONE;
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Elem::ZERO;
        };
        if pr != c {
            a.swap(pr, c);
            d = f.neg(d);
        }
        d = f.mul(d, a[c][c]);
        let inv = f.inv(a[c][c]).unwrap();
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = f.mul(a[i][c], inv);
            for j in c..n {
                let t = f.mul(factor, a[c][j]);
                a[i][j] = f.sub(a[i][j], t);
            }
        }
    }
    d
}

pub fn invert(f: &Field, m: &[Vec<Elem>]) -> Option<Matrix> {
    let n = m.len();
    let aug: Matrix = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }));
            r
        })
        .collect();
    let (red, pivots) = rref(f, aug);
    if red.len() < n || pivots[..n] != (0..n).collect::<Vec<_>>()[..] {
        return None;
    }
    Some(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn transpose(m: &[Vec<Elem>]) -> Matrix {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len()).map(|j| m.iter().map(|r| r[j]).collect()).collect()
}

pub fn mat_mul(f: &Field, a: &[Vec<Elem>], b: &[Vec<Elem>]) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(Elem::ZERO, |acc, k| f.add(acc, f.mul(row[k], b[k][j]))))
                .collect()
        })
        .collect()
}

/// `M v` for a column vector `v`.
pub fn mat_vec(f: &Field, m: &[Vec<Elem>], v: &[Elem]) -> Vec<Elem> {
    m.iter().map(|row| dot(f, row, v)).collect()
}

#[inline]
pub fn dot(f: &Field, a: &[Elem], b: &[Elem]) -> Elem {
    a.iter().zip(b).fold(Elem::ZERO, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
}

pub fn identity(n: usize) -> Matrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { Elem::ONE } else { Elem::ZERO }).collect()).collect()
}

/// Entrywise `x -> x^q`.
pub fn conj_matrix(f: &Field, m: &[Vec<Elem>]) -> Matrix {
    m.iter().map(|r| r.iter().map(|&x| f.conj(x)).collect()).collect()
}

/// Cross product of two vectors of length 3.
pub fn cross(f: &Field, a: &[Elem], b: &[Elem]) -> [Elem; 3] {
    let c = |i: usize, j: usize| f.sub(f.mul(a[i], b[j]), f.mul(a[j], b[i]));
    [c(1, 2), c(2, 0), c(0, 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn null_space_is_orthogonal_and_complementary() {
        let f = Field::quadratic(3).unwrap();
        let rows = vec![
            vec![Elem(1), Elem(3), Elem(0), Elem(5)],
            vec![Elem(2), Elem(2), Elem(7), Elem(0)],
        ];
        let ns = null_space(&f, &rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                assert_eq!(dot(&f, r, v), Elem::ZERO);
            }
        }
    }

    #[test]
    fn inverse_and_determinant_agree() {
        let f = Field::quadratic(2).unwrap();
        let m = vec![
            vec![Elem(1), Elem(2), Elem(0)],
            vec![Elem(0), Elem(1), Elem(3)],
            vec![Elem(2), Elem(0), Elem(1)],
        ];
        let inv = invert(&f, &m);
        assert_eq!(inv.is_some(), !det(&f, &m).is_zero());
        if let Some(inv) = inv {
            assert_eq!(mat_mul(&f, &m, &inv), identity(3));
        }
        let singular = vec![vec![Elem(1), Elem(2)], vec![Elem(1), Elem(2)]];
        assert!(invert(&f, &singular).is_none());
        assert_eq!(det(&f, &singular), Elem::ZERO);
    }
}
