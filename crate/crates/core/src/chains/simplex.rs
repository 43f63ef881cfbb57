use num_traits::{Signed, Zero};

use super::{ChainError, Point};
use crate::grassmann::{wedge_of_columns, ExactDVector, PlaneKey};
use crate::linalg::{det, rank, RatMatrix};
use crate::rational::to_f64;

/// Ordered affinely independent vertices; the order carries the orientation.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OrientedSimplex {
    pub vertices: Vec<Point>,
}

impl OrientedSimplex {
    pub fn new(vertices: Vec<Point>) -> Result<Self, ChainError> {
        let s = OrientedSimplex { vertices };
        let n = s.ambient();
        if s.vertices.iter().any(|v| v.len() != n) {
            return Err(ChainError::DimensionMismatch("vertices of different lengths".into()));
        }
        if s.dim() > n || !s.is_nondegenerate() {
            return Err(ChainError::DegenerateSimplex);
        }
        Ok(s)
    }

    pub fn ambient(&self) -> usize {
        self.vertices.first().map_or(0, Vec::len)
    }

    pub fn dim(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    /// `n × d`, columns `v_i - v_0`.
    pub fn edge_matrix(&self) -> RatMatrix {
        edge_matrix(&self.vertices)
    }

    pub fn is_nondegenerate(&self) -> bool {
        let d = self.dim();
        d == 0 || rank(&self.edge_matrix()) == d
    }

    pub fn wedge(&self) -> ExactDVector {
        wedge_of_columns(&self.edge_matrix()).expect("consistent shape")
    }

    /// Oriented tangent plane key; `None` for points.
    pub fn plane_key(&self) -> Option<PlaneKey> {
        if self.dim() == 0 {
            return None;
        }
        Some(PlaneKey::from_dvector(&self.wedge()))
    }

    pub fn volume(&self) -> f64 {
        simplex_volume(&self.vertices)
    }

    pub fn vertices_f64(&self) -> Vec<Vec<f64>> {
        self.vertices.iter().map(|v| v.iter().map(to_f64).collect()).collect()
    }
}

pub(crate) fn edge_matrix(vertices: &[Point]) -> RatMatrix {
    let n = vertices[0].len();
    let d = vertices.len() - 1;
    (0..n)
        .map(|i| (1..=d).map(|j| &vertices[j][i] - &vertices[0][i]).collect())
        .collect()
}

/// `sqrt(det(E^T E)) / d!`.
pub(crate) fn simplex_volume(vertices: &[Point]) -> f64 {
    let d = vertices.len() - 1;
    if d == 0 {
        return 1.0;
    }
    let e = edge_matrix(vertices);
    let n = e.len();
    let gram: RatMatrix = (0..d)
        .map(|a| (0..d).map(|b| (0..n).map(|i| &e[i][a] * &e[i][b]).sum()).collect())
        .collect();
    let g = to_f64(&det(&gram)).max(0.0);
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    g.sqrt() / fact
}

/// Sign of a permutation given as the sequence of original positions.
pub(crate) fn permutation_sign(perm: &[usize]) -> i32 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

/// Sorts vertices lexicographically and reports the parity of the reordering.
pub(crate) fn sort_with_sign(vertices: Vec<Point>) -> (Vec<Point>, i32) {
    let mut idx: Vec<usize> = (0..vertices.len()).collect();
    idx.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
    let sign = permutation_sign(&idx);
    let mut slots: Vec<Option<Point>> = vertices.into_iter().map(Some).collect();
    let sorted = idx.iter().map(|&i| slots[i].take().expect("each index once")).collect();
    (sorted, sign)
}

/// Sign of the full-dimensional determinant of edge vectors, in given coordinates.
pub(crate) fn orientation_sign(vertices: &[Point]) -> i32 {
    let e = edge_matrix(vertices);
    let dt = det(&e);
    if dt.is_zero() {
        0
    } else if dt.is_positive() {
        1
    } else {
        -1
    }
}
