use std::collections::BTreeMap;

use num_traits::{One, Zero};

use super::{
    check_coordinate_class, grid, has_unit_cube_boundary, is_positively_oriented_chain, p0_orientation, Construction,
    ConstructionError, Report,
};
use crate::chains::{PolyChain, Point, Polytope};
use crate::grassmann::{is_positively_oriented, tv_distance, GrassmannMeasure, RationalPlane};
use crate::linalg::RatMatrix;
use crate::rational::{floor, to_f64, Rat};
use crate::torus::{fill_measure, next_prime, split_tile, tile_fundamental};

const PRIME_ATTEMPTS: usize = 8;

/// A positively oriented chain with `∂B = ∂[0,1]` whose Gaussian image approximates `mu`.
///
/// Supported for lines in the plane. The tiles sit on the sheared grid `K(J_N × J_M^{n−1})` with
/// `K(x) = (x_1 + x_n, x_2, …, x_n)`, so every facet of the tiled region is a graph over the
/// first axis. Reversed coordinate lines are cancelled by plateau graphs, and negatively
/// oriented boundary cells by graphs running along the facets of the region, taken with
/// the largest boundary multiplicity `c`. Everything is pinned to `(±H, 0)`, `H = N + 3M`,
/// rescaled to the unit interval and divided by the number `α` of graphs.
pub fn build_multigraph(mu: &GrassmannMeasure, size: u32, height: u32, prime: u64) -> Result<Construction, ConstructionError> {
    if height < 2 || size < height {
        return Err(ConstructionError::InvalidParameters(format!("need N ≥ M ≥ 2, got N={size}, M={height}")));
    }
    if (mu.n, mu.d) != (2, 1) {
        // for n ≥ 3 every facet of the tiled region contains vertical directions
        return Err(ConstructionError::Unsupported(format!("multigraphs need d = 1, n = 2, got d={}, n={}", mu.d, mu.n)));
    }
    check_coordinate_class(mu)?;
    let p0 = RationalPlane::coordinate(mu.n, 1);
    if let Some(a) = mu.atoms().find(|a| !is_positively_oriented(&a.plane, &p0)) {
        return Err(ConstructionError::Orientation(a.plane.key().to_string()));
    }
    let mut p = prime;
    let mut last = None;
    for _ in 0..PRIME_ATTEMPTS {
        match attempt(mu, size as i64, height as i64, p) {
            Err(e @ ConstructionError::PositivityPostcondition(_)) => last = Some(e),
            other => return other,
        }
        p = next_prime(p);
    }
    Err(last.expect("at least one attempt"))
}

fn shear(n: usize) -> RatMatrix {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j || (i == 0 && j == n - 1) { Rat::one() } else { Rat::zero() }).collect())
        .collect()
}

fn apply(k: &RatMatrix, u: &[i64]) -> Point {
    k.iter().map(|row| row.iter().zip(u).map(|(a, &b)| a * Rat::from_integer(b.into())).sum()).collect()
}

fn polyline(points: &[Point], coeff: &Rat, out: &mut PolyChain) {
    for w in points.windows(2) {
        out.add_oriented(vec![w[0].clone(), w[1].clone()], coeff.clone());
    }
}

fn attempt(mu: &GrassmannMeasure, size: i64, height: i64, prime: u64) -> Result<Construction, ConstructionError> {
    let n = mu.n;
    let k = shear(n);
    let f = Polytope::unit_cube(n).linear_image(&k);
    let reversed = RationalPlane::coordinate(n, 1).reversed();
    let mut augmented = mu.clone();
    augmented.add(reversed.clone(), Rat::one())?;
    let filled = fill_measure(&augmented, prime, &f)?;
    let tile = tile_fundamental(&filled.filling, &f)?;

    let mut ranges = vec![(-size, size + 1)];
    ranges.extend(vec![(-height, height + 1); n - 1]);
    let mut a0 = PolyChain::zero(n, 1);
    for u in grid(&ranges) {
        a0.add_chain(&tile.translated(&apply(&k, &u)));
    }
    let a0 = a0.refined();

    let mut lo = vec![Rat::from_integer((-size).into())];
    lo.extend(vec![Rat::from_integer((-height).into()); n - 1]);
    let mut hi = vec![Rat::from_integer((size + 1).into())];
    hi.extend(vec![Rat::from_integer((height + 1).into()); n - 1]);
    let region = Polytope::axis_box(&lo, &hi).linear_image(&k);
    let (_, facet) = split_tile(&a0, &region);
    let c = facet.max_abs_coefficient();

    let reach = Rat::from_integer((size + 3 * height).into());
    let plateau = Rat::from_integer((size + 2 * height).into());
    let anchor = |s: &Rat| -> Point {
        let mut p = vec![Rat::zero(); n];
        p[0] = s.clone();
        p
    };
    let mut b0 = a0.clone();

    // plateaus through the reversed coordinate lines inside the region
    let family = filled.cycle.terms.iter().find(|t| t.family.plane.key() == reversed.key()).expect("augmented family");
    let base: Vec<Rat> = family.family.offset[1..].iter().map(|o| o - Rat::from_integer(floor(o))).collect();
    let mut plateaus = 0i64;
    for j in grid(&vec![(-height, height + 1); n - 1]) {
        let h: Vec<Rat> = base.iter().zip(&j).map(|(b, &x)| b + Rat::from_integer(x.into())).collect();
        let at = |x: Rat| -> Point { std::iter::once(x).chain(h.iter().cloned()).collect() };
        polyline(&[anchor(&-&reach), at(-&plateau), at(plateau.clone()), anchor(&reach)], &Rat::one(), &mut b0);
        plateaus += 1;
    }

    // graphs along the facets through every negatively oriented boundary cell
    let mut by_facet: BTreeMap<usize, Vec<(Point, Point)>> = BTreeMap::new();
    for (v, coeff) in facet.cells() {
        let s = p0_orientation(v);
        if s == 0 {
            return Err(ConstructionError::PositivityPostcondition("boundary cell orthogonal to the base line".into()));
        }
        if (s > 0) == (*coeff > Rat::zero()) {
            continue;
        }
        let idx = region
            .halfspaces
            .iter()
            .position(|h| v.iter().all(|p| h.slack(p).is_zero()))
            .expect("facet cell lies in a facet");
        by_facet.entry(idx).or_default().push((v[0].clone(), v[1].clone()));
    }
    let mut covers = 0i64;
    for cells in by_facet.values_mut() {
        cells.sort();
        let mut paths: Vec<Vec<Point>> = Vec::new();
        for (a, b) in cells.iter() {
            let slot = paths.iter_mut().find(|path| {
                let e = path.last().expect("nonempty path");
                e[0] < a[0] || e == a
            });
            match slot {
                Some(path) => {
                    if path.last() != Some(a) {
                        path.push(a.clone());
                    }
                    path.push(b.clone());
                }
                None => paths.push(vec![a.clone(), b.clone()]),
            }
        }
        for path in paths {
            let mut full = vec![anchor(&-&reach)];
            full.extend(path);
            full.push(anchor(&reach));
            polyline(&full, &c, &mut b0);
            covers += 1;
        }
    }

    let b0 = b0.refined();
    if !is_positively_oriented_chain(&b0) {
        return Err(ConstructionError::PositivityPostcondition(format!("prime {}", filled.prime)));
    }
    let alpha = Rat::from_integer(plateaus.into()) + &c * Rat::from_integer(covers.into());
    let chain = b0
        .translated(&anchor(&reach))
        .dilated(&(Rat::one() / (&reach + &reach)))
        .scaled(&(Rat::one() / &alpha));
    let report = Report {
        tv_error: tv_distance(&chain.gaussian_image(), &mu.to_float()),
        mass: chain.mass(),
        boundary_check: has_unit_cube_boundary(&chain),
        c_constant: to_f64(&c),
        positivity: Some(true),
        prime: filled.prime,
    };
    Ok(Construction { chain, report })
}
