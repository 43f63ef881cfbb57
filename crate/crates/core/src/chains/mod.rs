//! Polyhedral chains with rational vertices and coefficients.

mod chain;
mod export;
mod hausdorff;
mod polytope;
mod quadrature;
mod refine;
mod simplex;
mod slice;

pub use chain::{cell_key, CellJson, ChainJson, PolyChain};
pub use export::{to_obj, to_svg};
pub use hausdorff::{hausdorff_distance, hausdorff_points, sample_box, sample_chain};
pub use polytope::{HalfSpace, Polytope};
pub use quadrature::{rule, varifold_pair, Rule};
pub use simplex::OrientedSimplex;
pub use slice::{slice_fiber, AffineFlat};

pub(crate) use polytope::next_combination;
pub(crate) use simplex::permutation_sign;

use thiserror::Error;

use crate::rational::Rat;

pub type Point = Vec<Rat>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("simplex vertices are affinely dependent")]
    DegenerateSimplex,
    #[error("non-transverse intersection: {0}")]
    Transversality(String),
    #[error("affine map is singular")]
    SingularMap,
    #[error("chain is empty")]
    EmptyChain,
    #[error("malformed chain: {0}")]
    Parse(String),
}

impl ChainError {
    pub fn kind(&self) -> &'static str {
        match self {
            ChainError::DimensionMismatch(_) => "DimensionMismatch",
            ChainError::DegenerateSimplex => "DegenerateSimplex",
            ChainError::Transversality(_) => "TransversalityError",
            ChainError::SingularMap => "SingularMap",
            ChainError::EmptyChain => "EmptyChain",
            ChainError::Parse(_) => "ParseError",
        }
    }
}
