use num_traits::{One, Pow, Zero};

use super::{check_coordinate_class, grid, has_unit_cube_boundary, int_point, Construction, ConstructionError, Report};
use crate::chains::{PolyChain, Point, Polytope};
use crate::grassmann::{tv_distance, GrassmannMeasure, RationalPlane};
use crate::rational::{floor, Rat};
use crate::torus::{fill_measure, parallelepiped, tile_constant, tile_fundamental};

/// Straight prism `{x + t·h : x ∈ Z, t ∈ [0,1]}` with `∂P(Z) = (Z + h) − Z − P(∂Z)`.
pub fn prism(z: &PolyChain, h: &[Rat]) -> PolyChain {
    let mut out = PolyChain::zero(z.n, z.d + 1);
    for (v, c) in z.cells() {
        let w: Vec<Point> = v.iter().map(|p| p.iter().zip(h).map(|(a, b)| a + b).collect()).collect();
        for j in 0..v.len() {
            let mut cell: Vec<Point> = v[..=j].to_vec();
            cell.extend_from_slice(&w[j..]);
            let coeff = if j % 2 == 0 { c.clone() } else { -c.clone() };
            out.add_oriented(cell, coeff);
        }
    }
    out
}

/// Filling of `∂[unit d-cube]` whose Gaussian image approximates `mu`.
///
/// `mu` is augmented by one unit of the reversed coordinate plane, filled on the torus and
/// tiled over `[0,N]^d × [0,M]^{n−d}`. The reversed planes are then removed and each
/// removed plane's boundary is joined to `∂[0,N]^d` by a vertical prism. The result is
/// rescaled by `1/N` and divided by the number of removed planes.
pub fn build_filling(mu: &GrassmannMeasure, size: u32, height: u32, prime: u64) -> Result<Construction, ConstructionError> {
    if height < 2 || size < height {
        return Err(ConstructionError::InvalidParameters(format!("need N ≥ M ≥ 2, got N={size}, M={height}")));
    }
    let (n, d) = (mu.n, mu.d);
    if d == 0 || d >= n {
        return Err(ConstructionError::Unsupported(format!("filling needs 0 < d < n, got d={d}, n={n}")));
    }
    check_coordinate_class(mu)?;
    let reversed = RationalPlane::coordinate(n, d).reversed();
    let mut augmented = mu.clone();
    augmented.add(reversed.clone(), Rat::one())?;

    let cube = Polytope::unit_cube(n);
    let filled = fill_measure(&augmented, prime, &cube)?;
    let tile = tile_fundamental(&filled.filling, &cube)?;

    let mut ranges = vec![(0, size as i64); d];
    ranges.extend(vec![(0, height as i64); n - d]);
    let mut b = PolyChain::zero(n, d);
    for v in grid(&ranges) {
        b.add_chain(&tile.translated(&int_point(&v)));
    }

    let family = filled
        .cycle
        .terms
        .iter()
        .find(|t| t.family.plane.key() == reversed.key())
        .expect("augmented family present");
    let base_heights: Vec<Rat> =
        family.family.offset[d..].iter().map(|o| o - Rat::from_integer(floor(o))).collect();
    debug_assert!(base_heights.iter().all(|h| !h.is_zero()));

    let big = Rat::from_integer(size.into());
    let side: Vec<Vec<Rat>> =
        (0..d).map(|j| (0..n).map(|i| if i == j { big.clone() } else { Rat::zero() }).collect()).collect();
    let square = parallelepiped(&vec![Rat::zero(); n], &side);
    let rim = square.boundary();
    let mut planes = 0u64;
    for k in grid(&vec![(0, height as i64); n - d]) {
        let mut h = vec![Rat::zero(); n];
        for (j, kj) in k.iter().enumerate() {
            h[d + j] = &base_heights[j] + Rat::from_integer((*kj).into());
        }
        b.add_chain(&square.translated(&h));
        b.add_chain(&prism(&rim, &h).negated());
        planes += 1;
    }

    let chain = b
        .refined()
        .dilated(&(Rat::one() / &big))
        .scaled(&(Rat::one() / Rat::from_integer(planes.into())));
    debug_assert_eq!(Rat::from_integer(planes.into()), Rat::from_integer(height.into()).pow((n - d) as u32));
    let report = Report {
        tv_error: tv_distance(&chain.gaussian_image(), &mu.to_float()),
        mass: chain.mass(),
        boundary_check: has_unit_cube_boundary(&chain),
        c_constant: tile_constant(&tile, &cube),
        positivity: None,
        prime: filled.prime,
    };
    Ok(Construction { chain, report })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::varifold_pair;
    use crate::rational::{int, rat};
    use crate::torus::DEFAULT_PRIME;

    fn cross() -> GrassmannMeasure {
        let mut mu = GrassmannMeasure::new(2, 1);
        for w in [[1, 1], [1, -1]] {
            mu.add_basis(&vec![vec![int(w[0])], vec![int(w[1])]], rat(1, 2)).unwrap();
        }
        mu
    }

    #[test]
    fn prism_boundary_formula() {
        let mut tri = PolyChain::zero(3, 2);
        tri.add_oriented(vec![vec![int(0), int(0), int(0)], vec![int(2), int(0), int(0)], vec![int(0), int(1), int(0)]], int(1));
        let h = vec![rat(1, 3), int(0), int(1)];
        let p = prism(&tri, &h);
        let want = tri.translated(&h).minus(&tri).minus(&prism(&tri.boundary(), &h));
        assert!(p.boundary().geometric_eq(&want));
        assert!((p.mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn segment_filling_has_exact_boundary() {
        let out = build_filling(&cross(), 3, 2, DEFAULT_PRIME).unwrap();
        assert!(out.report.boundary_check);
        let mut want = PolyChain::zero(2, 0);
        want.add_oriented(vec![vec![int(1), int(0)]], int(1));
        want.add_oriented(vec![vec![int(0), int(0)]], int(-1));
        assert_eq!(out.chain.boundary().refined(), want);
        let (lo, hi) = out.chain.bbox().unwrap();
        assert!(lo.iter().all(|x| *x >= int(0)) && hi[0] <= int(1) && hi[1] <= rat(2, 3));
    }

    #[test]
    fn filling_error_shrinks_with_the_grid() {
        let a = build_filling(&cross(), 3, 2, DEFAULT_PRIME).unwrap();
        let b = build_filling(&cross(), 8, 3, DEFAULT_PRIME).unwrap();
        assert!(b.report.tv_error < a.report.tv_error);
        let target = cross().total_mass();
        let one = |_: &[f64], _: &crate::grassmann::PlaneKey| 1.0;
        let ra = (varifold_pair(&a.chain, &one, 2) - target).abs();
        let rb = (varifold_pair(&b.chain, &one, 2) - target).abs();
        assert!(rb < ra);
    }

    #[test]
    fn coordinate_plane_in_three_space() {
        // the reversed copy is filled by one translation prism
        let mu = GrassmannMeasure::single(RationalPlane::coordinate(3, 2), int(1)).unwrap();
        let out = build_filling(&mu, 2, 2, DEFAULT_PRIME).unwrap();
        assert!(out.report.boundary_check);
        let g = out.chain.gaussian_image();
        let flat = g.mass_of(&RationalPlane::coordinate(3, 2).key());
        assert!((flat - 1.0).abs() < 1e-12, "flat mass {flat}");
    }

    #[test]
    fn errors() {
        let mut mu = GrassmannMeasure::new(2, 1);
        mu.add_basis(&vec![vec![int(1)], vec![int(1)]], int(1)).unwrap();
        assert_eq!(build_filling(&mu, 4, 2, DEFAULT_PRIME).unwrap_err().kind(), "NonMatchingClassError");
        assert_eq!(build_filling(&cross(), 2, 3, DEFAULT_PRIME).unwrap_err().kind(), "InvalidParametersError");
    }
}
