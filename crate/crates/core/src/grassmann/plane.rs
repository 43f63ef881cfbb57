use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::dvector::{wedge_of_columns, wedge_with_vector, DVector, ExactDVector, FloatDVector};
use super::{binomial, multi_indices, GrassmannError};
use crate::linalg::{column_hnf, int_inverse_unimodular, nullspace, rank, row_hnf, smith, IntMatrix, RatMatrix};
use crate::rational::{lcm_of_denominators, primitive_part, to_f64, Rat};

/// Exact identity of an oriented rational plane: its primitive integer class vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PlaneKey {
    pub n: usize,
    pub d: usize,
    pub w: Vec<BigInt>,
}

impl PlaneKey {
    /// Primitive key of a nonzero rational d-vector.
    pub fn from_dvector(v: &ExactDVector) -> Self {
        let l = lcm_of_denominators(v.coords.iter());
        let ints: Vec<BigInt> = v.coords.iter().map(|c| (c * Rat::from_integer(l.clone())).to_integer()).collect();
        PlaneKey { n: v.n, d: v.d, w: primitive_part(&ints).0 }
    }

    pub fn from_ints(n: usize, d: usize, w: &[i64]) -> Self {
        let ints: Vec<BigInt> = w.iter().map(|&x| BigInt::from(x)).collect();
        PlaneKey { n, d, w: primitive_part(&ints).0 }
    }

    pub fn coordinate(n: usize, d: usize) -> Self {
        let mut w = vec![BigInt::zero(); binomial(n, d)];
        w[0] = BigInt::from(1);
        PlaneKey { n, d, w }
    }

    pub fn reversed(&self) -> Self {
        PlaneKey { n: self.n, d: self.d, w: self.w.iter().map(|x| -x).collect() }
    }

    /// Sign normalized so the first nonzero entry is positive.
    pub fn unoriented(&self) -> Self {
        match self.w.iter().find(|x| !x.is_zero()) {
            Some(x) if x.is_negative() => self.reversed(),
            _ => self.clone(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.w.iter().map(|x| to_f64(&Rat::from_integer(x.clone())).powi(2)).sum::<f64>().sqrt()
    }

    pub fn omega(&self) -> FloatDVector {
        let r = self.norm();
        DVector {
            n: self.n,
            d: self.d,
            coords: self.w.iter().map(|x| to_f64(&Rat::from_integer(x.clone())) / r).collect(),
        }
    }

    pub fn exact(&self) -> ExactDVector {
        DVector { n: self.n, d: self.d, coords: self.w.iter().map(|x| Rat::from_integer(x.clone())).collect() }
    }

    /// Coordinate on the `e_1 ∧ … ∧ e_d` slot.
    pub fn leading(&self) -> &BigInt {
        &self.w[0]
    }

    pub fn dot(&self, other: &PlaneKey) -> BigInt {
        self.w.iter().zip(&other.w).map(|(a, b)| a * b).sum()
    }

    pub fn to_plane(&self) -> Result<RationalPlane, GrassmannError> {
        RationalPlane::from_wedge(&self.exact())
    }
}

impl fmt::Display for PlaneKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.w.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Oriented rational d-plane with its lattice data.
#[derive(Debug, Clone)]
pub struct RationalPlane {
    pub n: usize,
    pub d: usize,
    /// `n × d`, columns an oriented basis of the lattice `P ∩ Z^n`.
    pub basis: IntMatrix,
    pub w: Vec<BigInt>,
    /// `(n-d) × n`, kernel equal to the plane and surjective onto `Z^{n-d}`.
    pub kernel: IntMatrix,
    pub omega: Vec<f64>,
}

impl PartialEq for RationalPlane {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.d == other.d && self.w == other.w
    }
}

impl Eq for RationalPlane {}

impl RationalPlane {
    pub fn from_basis(b: &RatMatrix) -> Result<Self, GrassmannError> {
        let n = b.len();
        let d = b.first().map_or(0, |r| r.len());
        if d == 0 || d > n || b.iter().any(|r| r.len() != d) {
            return Err(GrassmannError::DimensionMismatch(format!("basis of shape {n}x{d}")));
        }
        let r = rank(b);
        if r != d {
            return Err(GrassmannError::RankDeficient { rank: r, expected: d });
        }
        let l = lcm_of_denominators(b.iter().flatten());
        let lr = Rat::from_integer(l);
        let bi: IntMatrix = b.iter().map(|row| row.iter().map(|x| (x * &lr).to_integer()).collect()).collect();
        let target = wedge_of_columns(&crate::linalg::to_rat_matrix(&bi))?;

        let s = smith(&bi);
        let uinv = int_inverse_unimodular(&s.u);
        let lattice: IntMatrix = uinv.iter().map(|row| row[..d].to_vec()).collect();
        let mut basis = column_hnf(&lattice);
        let w0 = int_wedge(&basis);
        let agree: Rat = w0.iter().zip(&target.coords).map(|(a, t)| Rat::from_integer(a.clone()) * t).sum();
        if agree.is_negative() {
            for row in basis.iter_mut() {
                row[d - 1] = -row[d - 1].clone();
            }
        }
        let w = int_wedge(&basis);
        let kernel = if d == n { Vec::new() } else { row_hnf(&s.u[d..].to_vec()) };
        let norm = w.iter().map(|x| to_f64(&Rat::from_integer(x.clone())).powi(2)).sum::<f64>().sqrt();
        let omega = w.iter().map(|x| to_f64(&Rat::from_integer(x.clone())) / norm).collect();
        Ok(RationalPlane { n, d, basis, w, kernel, omega })
    }

    pub fn from_int_basis(b: &IntMatrix) -> Result<Self, GrassmannError> {
        Self::from_basis(&crate::linalg::to_rat_matrix(b))
    }

    /// Plane spanned by a simple d-vector, oriented like it.
    pub fn from_wedge(v: &ExactDVector) -> Result<Self, GrassmannError> {
        let (n, d) = (v.n, v.d);
        if v.is_zero() {
            return Err(GrassmannError::NotSimple);
        }
        // the plane is the kernel of x ↦ x ∧ v
        let rows = multi_indices(n, d + 1).len();
        let mut m: RatMatrix = vec![Vec::with_capacity(n); rows];
        for j in 0..n {
            let mut e = vec![Rat::zero(); n];
            e[j] = Rat::from_integer(BigInt::from(1));
            let col = wedge_with_vector(&e, v);
            for (r, c) in col.coords.into_iter().enumerate() {
                m[r].push(c);
            }
        }
        let ns = if rows == 0 {
            (0..n)
                .map(|j| (0..n).map(|i| Rat::from_integer(BigInt::from((i == j) as i64))).collect())
                .collect()
        } else {
            nullspace(&m, n)
        };
        if ns.len() != d {
            return Err(GrassmannError::NotSimple);
        }
        let b: RatMatrix = (0..n).map(|i| ns.iter().map(|col| col[i].clone()).collect()).collect();
        let mut plane = Self::from_basis(&b)?;
        let key = PlaneKey::from_dvector(v);
        if plane.w != key.w {
            if plane.w.iter().zip(&key.w).all(|(a, b)| *a == -b) {
                plane = plane.reversed();
            } else {
                return Err(GrassmannError::NotSimple);
            }
        }
        Ok(plane)
    }

    pub fn coordinate(n: usize, d: usize) -> Self {
        let b: IntMatrix = (0..n)
            .map(|i| (0..d).map(|j| BigInt::from((i == j) as i64)).collect())
            .collect();
        Self::from_int_basis(&b).expect("coordinate basis has full rank")
    }

    pub fn reversed(&self) -> Self {
        let mut basis = self.basis.clone();
        for row in basis.iter_mut() {
            row[self.d - 1] = -row[self.d - 1].clone();
        }
        RationalPlane {
            n: self.n,
            d: self.d,
            basis,
            w: self.w.iter().map(|x| -x).collect(),
            kernel: self.kernel.clone(),
            omega: self.omega.iter().map(|x| -x).collect(),
        }
    }

    pub fn key(&self) -> PlaneKey {
        PlaneKey { n: self.n, d: self.d, w: self.w.clone() }
    }

    pub fn w_exact(&self) -> ExactDVector {
        self.key().exact()
    }

    pub fn w_norm(&self) -> f64 {
        self.key().norm()
    }

    /// Lattice basis vector `j` as rationals.
    pub fn basis_vector(&self, j: usize) -> Vec<Rat> {
        self.basis.iter().map(|row| Rat::from_integer(row[j].clone())).collect()
    }

    /// `kernel · x`.
    pub fn kernel_apply(&self, x: &[Rat]) -> Vec<Rat> {
        self.kernel
            .iter()
            .map(|row| row.iter().zip(x).map(|(k, v)| Rat::from_integer(k.clone()) * v).sum())
            .collect()
    }
}

impl fmt::Display for RationalPlane {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.key().fmt(f)
    }
}

fn int_wedge(b: &IntMatrix) -> Vec<BigInt> {
    wedge_of_columns(&crate::linalg::to_rat_matrix(b))
        .expect("well-shaped")
        .coords
        .into_iter()
        .map(|x| x.to_integer())
        .collect()
}

pub fn plane_from_basis(b: &RatMatrix) -> Result<RationalPlane, GrassmannError> {
    RationalPlane::from_basis(b)
}

/// Positive pairing of class vectors, i.e. positive projection onto `P0`.
pub fn is_positively_oriented(p: &RationalPlane, p0: &RationalPlane) -> bool {
    p.key().dot(&p0.key()).is_positive()
}
