//! Exterior-power vectors, oriented rational planes and atomic measures on the
//! oriented Grassmannian.

mod dvector;
mod measure;
mod metric;
mod plane;

pub use dvector::{minors_map, wedge_of_columns, wedge_with_vector, DVector, ExactDVector, FloatDVector};
pub use measure::{Atom, FloatMeasure, GrassmannMeasure, MeasureJson, AtomJson, FloatMeasureJson};
pub use metric::{tv_distance, wasserstein_distance, wasserstein_weighted, weighted_directions, WeightedDirection};
pub use plane::{is_positively_oriented, plane_from_basis, PlaneKey, RationalPlane};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrassmannError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("basis has rank {rank}, expected {expected}")]
    RankDeficient { rank: usize, expected: usize },
    #[error("atom scale must be positive, got {0}")]
    NonPositiveScale(String),
    #[error("total masses differ: {0} vs {1}")]
    MassMismatch(f64, f64),
    #[error("d-vector is not simple")]
    NotSimple,
    #[error("malformed measure: {0}")]
    Parse(String),
}

impl GrassmannError {
    pub fn kind(&self) -> &'static str {
        match self {
            GrassmannError::DimensionMismatch(_) => "DimensionMismatch",
            GrassmannError::RankDeficient { .. } => "RankDeficientError",
            GrassmannError::NonPositiveScale(_) => "NonPositiveScale",
            GrassmannError::MassMismatch(..) => "MassMismatch",
            GrassmannError::NotSimple => "NotSimple",
            GrassmannError::Parse(_) => "ParseError",
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Strictly increasing multi-indices of length `d` from `0..n`, in lexicographic order.
pub fn multi_indices(n: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(binomial(n, d));
    let mut cur: Vec<usize> = (0..d).collect();
    if d > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        let mut i = d;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < n - d + i {
                cur[i] += 1;
                for j in i + 1..d {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Position of an increasing multi-index in [`multi_indices`] order.
pub fn multi_index_position(n: usize, idx: &[usize]) -> usize {
    let d = idx.len();
    let mut pos = 0;
    let mut prev = 0;
    for (k, &i) in idx.iter().enumerate() {
        for skipped in prev..i {
            pos += binomial(n - skipped - 1, d - k - 1);
        }
        prev = i + 1;
    }
    pos
}

pub fn format_multi_index(idx: &[usize]) -> String {
    let digits: Vec<String> = idx.iter().map(|i| (i + 1).to_string()).collect();
    format!("e{}", digits.join(""))
}
