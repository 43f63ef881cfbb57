//! Periodic plane families on the flat torus and their fillings.

mod family;
mod fill;
mod periodic;
mod tile;

pub use family::{generic_offset, half_parallelepiped, parallelepiped, subtorus_chain, PlaneFamily};
pub use fill::{fill_cycle, fill_measure, CycleTerm, FilledTorus, PeriodicCycle, DEFAULT_PRIME};
pub use periodic::{lift_into, AxisBox, PeriodicChain};
pub use tile::{check_transverse, split_tile, tile_constant, tile_fundamental};

pub(crate) use family::next_prime;

use thiserror::Error;

use crate::chains::ChainError;
use crate::grassmann::GrassmannError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TorusError {
    #[error("cycle class is not zero: {0}")]
    NonZeroClass(String),
    #[error("offsets are not generic: {0}")]
    DegenerateOffset(String),
    #[error("non-transverse domain: {0}")]
    Transversality(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
}

impl TorusError {
    pub fn kind(&self) -> &'static str {
        match self {
            TorusError::NonZeroClass(_) => "NonZeroClassError",
            TorusError::DegenerateOffset(_) => "DegenerateOffsetError",
            TorusError::Transversality(_) => "TransversalityError",
            TorusError::Chain(e) => e.kind(),
            TorusError::Grassmann(e) => e.kind(),
        }
    }
}
