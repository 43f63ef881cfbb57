use num_traits::{One, Pow};

use super::{grid, int_point, Construction, ConstructionError, Report};
use crate::chains::{PolyChain, Polytope};
use crate::grassmann::{tv_distance, GrassmannMeasure};
use crate::rational::Rat;
use crate::torus::{fill_measure, tile_constant, tile_fundamental};

/// `A_N = N^{−(n−d)} (ρ_N)_♯ Σ_{v ∈ {0..N−1}^n} (S_F + v)` for a measure of zero class.
///
/// The report's `c_constant` is `2n · mass(Q̃ ∩ ∂F)`, so `tv_error ≤ c/N`.
pub fn build_cycle(mu: &GrassmannMeasure, size: u32, prime: u64) -> Result<Construction, ConstructionError> {
    if size == 0 {
        return Err(ConstructionError::InvalidParameters("N must be positive".into()));
    }
    let (n, d) = (mu.n, mu.d);
    if mu.is_empty() {
        return Ok(Construction {
            chain: PolyChain::zero(n, d),
            report: Report { tv_error: 0.0, mass: 0.0, boundary_check: true, c_constant: 0.0, positivity: None, prime },
        });
    }
    let cube = Polytope::unit_cube(n);
    let filled = fill_measure(mu, prime, &cube)?;
    let tile = tile_fundamental(&filled.filling, &cube)?;
    let c = tile_constant(&tile, &cube);

    let mut sum = PolyChain::zero(n, d);
    for v in grid(&vec![(0, size as i64); n]) {
        sum.add_chain(&tile.translated(&int_point(&v)));
    }
    let big = Rat::from_integer(size.into());
    let chain = sum.refined().dilated(&(Rat::one() / &big)).scaled(&(Rat::one() / big.pow((n - d) as u32)));

    let report = Report {
        tv_error: tv_distance(&chain.gaussian_image(), &mu.to_float()),
        mass: chain.mass(),
        boundary_check: d == 0 || chain.boundary().refined().is_empty(),
        c_constant: c,
        positivity: None,
        prime: filled.prime,
    };
    Ok(Construction { chain, report })
}
