use num_bigint::BigInt;
use num_traits::One;

use super::{grid, has_unit_cube_boundary, ConstructionError};
use crate::chains::PolyChain;
use crate::rational::Rat;

/// `τ_i(B)`: the `2^{id}` translates `2^{−i}B + 2^{−i}k`, `k ∈ {0..2^i−1}^d` along the first `d` axes.
pub fn tile_shrink(b: &PolyChain, i: u32) -> Result<PolyChain, ConstructionError> {
    if !has_unit_cube_boundary(b) {
        return Err(ConstructionError::BoundaryMismatch("τ_i needs ∂B = ∂[unit d-cube]".into()));
    }
    if i == 0 {
        return Ok(b.clone());
    }
    let (n, d) = (b.n, b.d);
    let step = Rat::one() / Rat::from_integer(BigInt::from(2u32).pow(i));
    let small = b.dilated(&step);
    let count = 1i64 << i;
    let mut out = PolyChain::zero(n, d);
    for k in grid(&vec![(0, count); d]) {
        let mut t = vec![Rat::from_integer(0.into()); n];
        for (j, kj) in k.iter().enumerate() {
            t[j] = &step * Rat::from_integer((*kj).into());
        }
        out.add_chain(&small.translated(&t));
    }
    Ok(out.refined())
}
