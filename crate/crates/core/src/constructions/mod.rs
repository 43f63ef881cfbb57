//! Grid constructions of cycles, fillings and positively oriented multigraphs,
//! Q-valued extraction, and the dyadic tiling operator.

mod cycle;
mod filling;
mod multigraph;
mod qvalued;
mod shrink;

pub use cycle::build_cycle;
pub use filling::{build_filling, prism};
pub use multigraph::build_multigraph;
pub use qvalued::{extract_qvalued, QValuedPL, Sheet};
pub use shrink::tile_shrink;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::chains::{ChainError, PolyChain, Point};
use crate::grassmann::{GrassmannError, GrassmannMeasure};
use crate::linalg::det;
use crate::rational::Rat;
use crate::torus::{parallelepiped, TorusError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConstructionError {
    #[error("class does not match the coordinate plane: {0}")]
    NonMatchingClass(String),
    #[error("atom is not positively oriented: {0}")]
    Orientation(String),
    #[error("constructed cell fails the positivity test: {0}")]
    PositivityPostcondition(String),
    #[error("cell is not positively oriented: {0}")]
    NegativeCell(String),
    #[error("fibers do not carry a constant integer multiplicity: {0}")]
    NonIntegralAfterScaling(String),
    #[error("boundary is not the unit cube boundary: {0}")]
    BoundaryMismatch(String),
    #[error("invalid grid parameters: {0}")]
    InvalidParameters(String),
    #[error("unsupported dimensions: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Torus(#[from] TorusError),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
}

impl ConstructionError {
    pub fn kind(&self) -> &'static str {
        match self {
            ConstructionError::NonMatchingClass(_) => "NonMatchingClassError",
            ConstructionError::Orientation(_) => "OrientationError",
            ConstructionError::PositivityPostcondition(_) => "PositivityPostconditionError",
            ConstructionError::NegativeCell(_) => "NegativeCellError",
            ConstructionError::NonIntegralAfterScaling(_) => "NonIntegralAfterScaling",
            ConstructionError::BoundaryMismatch(_) => "BoundaryMismatchError",
            ConstructionError::InvalidParameters(_) => "InvalidParametersError",
            ConstructionError::Unsupported(_) => "UnsupportedError",
            ConstructionError::Torus(e) => e.kind(),
            ConstructionError::Chain(e) => e.kind(),
            ConstructionError::Grassmann(e) => e.kind(),
        }
    }
}

/// Sidecar report of a construction run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub tv_error: f64,
    pub mass: f64,
    pub boundary_check: bool,
    pub c_constant: f64,
    pub positivity: Option<bool>,
    pub prime: u64,
}

#[derive(Debug, Clone)]
pub struct Construction {
    pub chain: PolyChain,
    pub report: Report,
}

/// Sign of the `e_{1…d}`-coordinate of a cell's edge wedge.
pub fn p0_orientation(vertices: &[Point]) -> i32 {
    let d = vertices.len() - 1;
    let m: Vec<Vec<Rat>> =
        (0..d).map(|i| (1..=d).map(|j| &vertices[j][i] - &vertices[0][i]).collect()).collect();
    let v = det(&m);
    if v.is_zero() {
        0
    } else if v > Rat::zero() {
        1
    } else {
        -1
    }
}

/// Every cell carries a positive multiple of a positively oriented simplex.
pub fn is_positively_oriented_chain(t: &PolyChain) -> bool {
    t.cells().all(|(v, c)| {
        let s = p0_orientation(v);
        s != 0 && (s > 0) == (*c > Rat::zero())
    })
}

/// `[0,1]^d × {0}` in `R^n`, oriented by `e_1 ∧ … ∧ e_d`.
pub fn unit_cube_chain(n: usize, d: usize) -> PolyChain {
    let vecs: Vec<Vec<Rat>> =
        (0..d).map(|j| (0..n).map(|i| if i == j { Rat::one() } else { Rat::zero() }).collect()).collect();
    parallelepiped(&vec![Rat::zero(); n], &vecs)
}

/// Exact `∂T = ∂[unit d-cube]`.
pub fn has_unit_cube_boundary(t: &PolyChain) -> bool {
    t.d >= 1 && t.boundary().geometric_eq(&unit_cube_chain(t.n, t.d).boundary())
}

/// The oriented coordinate plane's class vector is `Σ s_i W_i`.
pub(crate) fn check_coordinate_class(mu: &GrassmannMeasure) -> Result<(), ConstructionError> {
    let class = mu.barycenter_exact();
    let ok = class.entries().all(|(idx, v)| {
        let want = if idx.iter().copied().eq(0..mu.d) { Rat::one() } else { Rat::zero() };
        *v == want
    });
    if ok {
        Ok(())
    } else {
        let shown: Vec<String> = class.entries().map(|(_, v)| crate::rational::format_rat(v)).collect();
        Err(ConstructionError::NonMatchingClass(format!("Σ s_i W_i = ({})", shown.join(", "))))
    }
}

/// Odometer over `lo..hi` per coordinate.
pub(crate) fn grid(ranges: &[(i64, i64)]) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for &(a, b) in ranges {
        out = out.into_iter().flat_map(|p| (a..b).map(move |x| [p.clone(), vec![x]].concat())).collect();
    }
    out
}

pub(crate) fn int_point(v: &[i64]) -> Point {
    v.iter().map(|&x| Rat::from_integer(x.into())).collect()
}
