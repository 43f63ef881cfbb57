//! Anisotropic energies, the filling-energy linear program and polyconvexity-gap witnesses,
//! rational approximation of Grassmannian measures and the multigraph counterexample.

mod approx;
mod counterexample;
mod filling;
mod functional;
mod integrand;
pub mod lp;

pub use approx::rational_approx;
pub use counterexample::{counterexample_multigraph, Counterexample, CounterexampleConfig};
pub use filling::{filling_energy_lp, filling_lp_directions, lp_report, strict_gap_witness, FillingLp};
pub use functional::{energy_chain, energy_graph_chain, energy_multigraph};
pub use integrand::{
    graph_wedge, integrand_from_json, Area, Bridge, ExpressionIntegrand, FnIntegrand, GraphIntegrand, Integrand,
    NormIntegrand, SlopeExpression, TableIntegrand,
};

use thiserror::Error;

use crate::constructions::ConstructionError;
use crate::grassmann::GrassmannError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnergyError {
    #[error("bad integrand: {0}")]
    Integrand(String),
    #[error("cell is not a graph over the base plane: {0}")]
    NonGraphCell(String),
    #[error("linear program is infeasible: {0}")]
    Infeasible(String),
    #[error("nonnegative correction inside the cone failed: {0}")]
    ConeInfeasible(String),
    #[error("energy gap not certified within the cell budget: {0}")]
    GapTooSmall(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Grassmann(#[from] GrassmannError),
}

impl EnergyError {
    pub fn kind(&self) -> &'static str {
        match self {
            EnergyError::Integrand(_) => "IntegrandError",
            EnergyError::NonGraphCell(_) => "NonGraphCellError",
            EnergyError::Infeasible(_) => "InfeasibleError",
            EnergyError::ConeInfeasible(_) => "ConeInfeasible",
            EnergyError::GapTooSmall(_) => "GapTooSmall",
            EnergyError::InvalidInput(_) => "InvalidInputError",
            EnergyError::Construction(e) => e.kind(),
            EnergyError::Grassmann(e) => e.kind(),
        }
    }
}
