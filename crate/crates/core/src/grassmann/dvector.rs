use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use super::{binomial, multi_index_position, multi_indices, GrassmannError};
use crate::linalg::{det, RatMatrix};
use crate::rational::{to_f64, Rat};

/// Element of the `d`-th exterior power of `R^n`, coordinates in lexicographic multi-index order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DVector<T> {
    pub n: usize,
    pub d: usize,
    pub coords: Vec<T>,
}

pub type ExactDVector = DVector<Rat>;
pub type FloatDVector = DVector<f64>;

impl<T: Clone> DVector<T> {
    pub fn get(&self, idx: &[usize]) -> &T {
        &self.coords[multi_index_position(self.n, idx)]
    }

    pub fn entries(&self) -> impl Iterator<Item = (Vec<usize>, &T)> {
        multi_indices(self.n, self.d).into_iter().zip(self.coords.iter())
    }
}

impl ExactDVector {
    pub fn zero(n: usize, d: usize) -> Self {
        DVector { n, d, coords: vec![Rat::zero(); binomial(n, d)] }
    }

    pub fn unit(n: usize, idx: &[usize]) -> Self {
        let mut v = Self::zero(n, idx.len());
        v.coords[multi_index_position(n, idx)] = Rat::one();
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scaled(&self, s: &Rat) -> Self {
        DVector { n: self.n, d: self.d, coords: self.coords.iter().map(|c| c * s).collect() }
    }

    pub fn to_float(&self) -> FloatDVector {
        DVector { n: self.n, d: self.d, coords: self.coords.iter().map(to_f64).collect() }
    }

    pub fn norm(&self) -> f64 {
        self.to_float().norm()
    }
}

impl FloatDVector {
    pub fn norm(&self) -> f64 {
        self.coords.iter().map(|c| c * c).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum()
    }

    pub fn normalized(&self) -> Self {
        let r = self.norm();
        DVector { n: self.n, d: self.d, coords: self.coords.iter().map(|c| c / r).collect() }
    }
}

impl Add for &ExactDVector {
    type Output = ExactDVector;
    fn add(self, rhs: Self) -> ExactDVector {
        assert_eq!((self.n, self.d), (rhs.n, rhs.d), "grade mismatch");
        DVector {
            n: self.n,
            d: self.d,
            coords: self.coords.iter().zip(&rhs.coords).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ExactDVector {
    type Output = ExactDVector;
    fn sub(self, rhs: Self) -> ExactDVector {
        self + &(-rhs)
    }
}

impl Neg for &ExactDVector {
    type Output = ExactDVector;
    fn neg(self) -> ExactDVector {
        DVector { n: self.n, d: self.d, coords: self.coords.iter().map(|c| -c).collect() }
    }
}

/// `w_1 ∧ … ∧ w_d` for the columns of an `n × d` matrix.
pub fn wedge_of_columns(b: &RatMatrix) -> Result<ExactDVector, GrassmannError> {
    let n = b.len();
    let d = b.first().map_or(0, |r| r.len());
    if b.iter().any(|r| r.len() != d) {
        return Err(GrassmannError::DimensionMismatch("ragged matrix".into()));
    }
    if d > n {
        return Err(GrassmannError::DimensionMismatch(format!("{d} columns in R^{n}")));
    }
    let coords = multi_indices(n, d)
        .iter()
        .map(|idx| {
            let minor: RatMatrix = idx.iter().map(|&i| b[i].clone()).collect();
            det(&minor)
        })
        .collect();
    Ok(DVector { n, d, coords })
}

/// Wedge of the columns of `[I_d; X]` for an `(n-d) × d` matrix `X`.
pub fn minors_map(x: &RatMatrix, d: usize) -> ExactDVector {
    let mut b: RatMatrix = (0..d)
        .map(|i| (0..d).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    b.extend(x.iter().cloned());
    wedge_of_columns(&b).expect("stacked matrix has consistent shape")
}

/// `x ∧ w` for a vector `x` and a d-vector `w`.
pub fn wedge_with_vector(x: &[Rat], w: &ExactDVector) -> ExactDVector {
    let n = w.n;
    let mut out = ExactDVector::zero(n, w.d + 1);
    for (pos, big) in multi_indices(n, w.d + 1).iter().enumerate() {
        let mut acc = Rat::zero();
        for (k, &j) in big.iter().enumerate() {
            if x[j].is_zero() {
                continue;
            }
            let rest: Vec<usize> = big.iter().copied().filter(|&i| i != j).collect();
            let term = &x[j] * w.get(&rest);
            if k % 2 == 0 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        out.coords[pos] = acc;
    }
    out
}
