//! Exact dense linear algebra over the integers and rationals.
//!
//! Matrices are row-major `Vec<Vec<_>>`. Everything here is sized for the
//! handful-of-rows systems that appear in plane and simplex computations.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rat;

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<Rat>>;

pub fn int_identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

pub fn to_rat_matrix(m: &IntMatrix) -> RatMatrix {
    m.iter()
        .map(|r| r.iter().map(|v| Rat::from_integer(v.clone())).collect())
        .collect()
}

pub fn transpose<T: Clone>(m: &[Vec<T>]) -> Vec<Vec<T>> {
    if m.is_empty() {
        return Vec::new();
    }
    (0..m[0].len())
        .map(|j| m.iter().map(|r| r[j].clone()).collect())
        .collect()
}

pub fn int_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let inner = b.len();
    let cols = if inner == 0 { 0 } else { b[0].len() };
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).fold(BigInt::zero(), |acc, k| acc + &row[k] * &b[k][j]))
                .collect()
        })
        .collect()
}

/// Determinant by fraction-carrying Gaussian elimination.
pub fn det(m: &RatMatrix) -> Rat {
    let n = m.len();
    if n == 0 {
        return Rat::one();
    }
    let mut a = m.clone();
    let mut result = Rat::one();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Rat::zero();
        };
        if p != col {
            a.swap(p, col);
            result = -result;
        }
        let pivot = a[col][col].clone();
        result *= &pivot;
        for r in col + 1..n {
            if a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &pivot;
            for c in col..n {
                let t = &f * &a[col][c];
                a[r][c] -= t;
            }
        }
    }
    result
}

pub fn int_det(m: &IntMatrix) -> BigInt {
    det(&to_rat_matrix(m)).to_integer()
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(m: &mut RatMatrix) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(p, r);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for k in 0..cols {
                    let t = &f * &m[r][k];
                    m[i][k] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Basis of the right nullspace, one vector per free column.
pub fn nullspace(m: &RatMatrix, cols: usize) -> Vec<Vec<Rat>> {
    let mut a = m.clone();
    let piv = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !piv.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); cols];
            v[f] = Rat::one();
            for (r, &p) in piv.iter().enumerate() {
                v[p] = -a[r][f].clone();
            }
            v
        })
        .collect()
}

pub fn rank(m: &RatMatrix) -> usize {
    let mut a = m.clone();
    rref(&mut a).len()
}

/// Unique solution of a square system, `None` when singular.
pub fn solve(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv.iter().any(|&c| c >= n) {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n].clone()).collect())
}

/// Some solution of a possibly rectangular system, with the dimension of the solution space.
pub fn solve_any(a: &RatMatrix, b: &[Rat]) -> Option<(Vec<Rat>, usize)> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    let mut aug: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, v)| {
            let mut r = row.clone();
            r.push(v.clone());
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.contains(&cols) {
        return None;
    }
    let mut x = vec![Rat::zero(); cols];
    for (r, &c) in piv.iter().enumerate() {
        x[c] = aug[r][cols].clone();
    }
    Some((x, cols - piv.len()))
}

pub fn inverse(a: &RatMatrix) -> Option<RatMatrix> {
    let n = a.len();
    let mut aug: RatMatrix = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }));
            r
        })
        .collect();
    let piv = rref(&mut aug);
    if piv.len() < n || piv[n - 1] >= n {
        return None;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// `u * a * v == d` with `u`, `v` unimodular and `d` in Smith normal form.
#[derive(Debug, Clone)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        let k = self.d.len().min(self.d.first().map_or(0, |r| r.len()));
        (0..k).map(|i| self.d[i][i].clone()).filter(|x| !x.is_zero()).collect()
    }
}

pub fn smith(a: &IntMatrix) -> Smith {
    let m = a.len();
    let n = if m == 0 { 0 } else { a[0].len() };
    let mut d = a.clone();
    let mut u = int_identity(m);
    let mut v = int_identity(n);

    fn swap_cols(x: &mut IntMatrix, i: usize, j: usize) {
        for row in x.iter_mut() {
            row.swap(i, j);
        }
    }
    fn add_row(x: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
        let s = x[src].clone();
        for (a, b) in x[dst].iter_mut().zip(s.iter()) {
            *a += f * b;
        }
    }
    fn add_col(x: &mut IntMatrix, dst: usize, src: usize, f: &BigInt) {
        for row in x.iter_mut() {
            let s = row[src].clone();
            row[dst] += f * s;
        }
    }

    for t in 0..m.min(n) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    if d[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            d.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut d, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..m {
                let q = &d[i][t] / &d[t][t];
                if !q.is_zero() {
                    add_row(&mut d, i, t, &-q.clone());
                    add_row(&mut u, i, t, &-q);
                }
                if !d[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                let q = &d[t][j] / &d[t][t];
                if !q.is_zero() {
                    add_col(&mut d, j, t, &-q.clone());
                    add_col(&mut v, j, t, &-q);
                }
                if !d[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            let p = d[t][t].clone();
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !d[i][j].is_multiple_of(&p)));
            match offender {
                Some(i) => {
                    add_row(&mut d, t, i, &BigInt::one());
                    add_row(&mut u, t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if t < m && t < n && d[t][t].is_negative() {
            for x in d[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    Smith { u, d, v }
}

pub fn int_inverse_unimodular(a: &IntMatrix) -> IntMatrix {
    let inv = inverse(&to_rat_matrix(a)).expect("unimodular matrix is invertible");
    inv.into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| {
                    assert!(x.is_integer(), "matrix is not unimodular");
                    x.to_integer()
                })
                .collect()
        })
        .collect()
}

/// Column Hermite normal form of a full-column-rank integer matrix: lower echelon,
/// positive pivots, entries left of a pivot reduced into `[0, pivot)`.
pub fn column_hnf(a: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let d = if n == 0 { 0 } else { a[0].len() };
    let mut h = a.clone();
    let mut k = 0;
    for i in 0..n {
        if k == d {
            break;
        }
        loop {
            let nz: Vec<usize> = (k..d).filter(|&j| !h[i][j].is_zero()).collect();
            if nz.is_empty() {
                break;
            }
            let p = *nz.iter().min_by_key(|&&j| h[i][j].abs()).unwrap();
            for row in h.iter_mut() {
                row.swap(k, p);
            }
            let mut done = true;
            for j in k + 1..d {
                let q = &h[i][j] / &h[i][k];
                if !q.is_zero() {
                    for row in h.iter_mut() {
                        let s = row[k].clone();
                        row[j] -= &q * s;
                    }
                }
                if !h[i][j].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if h[i][k].is_zero() {
            continue;
        }
        if h[i][k].is_negative() {
            for row in h.iter_mut() {
                row[k] = -row[k].clone();
            }
        }
        let p = h[i][k].clone();
        for j in 0..k {
            let q = h[i][j].div_floor(&p);
            if !q.is_zero() {
                for row in h.iter_mut() {
                    let s = row[k].clone();
                    row[j] -= &q * s;
                }
            }
        }
        k += 1;
    }
    h
}

/// Row Hermite normal form (transpose of [`column_hnf`]).
pub fn row_hnf(a: &IntMatrix) -> IntMatrix {
    transpose(&column_hnf(&transpose(a)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn im(rows: &[&[i64]]) -> IntMatrix {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn determinant() {
        let m: RatMatrix = vec![vec![int(2), int(1)], vec![int(7), int(4)]];
        assert_eq!(det(&m), int(1));
        let s: RatMatrix = vec![vec![int(1), int(2)], vec![int(2), int(4)]];
        assert_eq!(det(&s), int(0));
    }

    #[test]
    fn smith_reconstructs() {
        let a = im(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith(&a);
        assert_eq!(int_mul(&int_mul(&s.u, &a), &s.v), s.d);
        let f = s.invariant_factors();
        assert_eq!(f, vec![BigInt::from(2), BigInt::from(6), BigInt::from(12)]);
        assert_eq!(int_det(&s.u).abs(), BigInt::one());
        assert_eq!(int_det(&s.v).abs(), BigInt::one());
    }

    #[test]
    fn hnf_is_canonical() {
        let a = im(&[&[2, 3], &[4, 5], &[6, 7]]);
        let b = im(&[&[5, 3], &[9, 5], &[13, 7]]);
        assert_eq!(column_hnf(&a), column_hnf(&b));
    }

    #[test]
    fn solve_square() {
        let a: RatMatrix = vec![vec![int(1), int(1)], vec![int(1), int(-1)]];
        let x = solve(&a, &[int(3), int(1)]).unwrap();
        assert_eq!(x, vec![int(2), int(1)]);
        let s: RatMatrix = vec![vec![int(1), int(1)], vec![int(2), int(2)]];
        assert!(solve(&s, &[int(1), int(2)]).is_none());
    }
}
