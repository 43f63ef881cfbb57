use num_traits::{One, Signed, Zero};

use super::chain::PolyChain;
use super::{ChainError, Point};
use crate::linalg::{det, solve, solve_any, RatMatrix};
use crate::rational::Rat;

/// Oriented affine flat `point + span(directions)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineFlat {
    pub point: Point,
    /// `n × k`, columns orienting the flat.
    pub directions: RatMatrix,
}

impl AffineFlat {
    /// `{x : x_i = c_i for i < d}` oriented by `e_{d+1}, …, e_n`.
    pub fn vertical_fiber(n: usize, base: &[Rat]) -> Self {
        let d = base.len();
        let mut point = vec![Rat::zero(); n];
        point[..d].clone_from_slice(base);
        let directions = (0..n)
            .map(|i| (0..n - d).map(|j| if i == d + j { Rat::one() } else { Rat::zero() }).collect())
            .collect();
        AffineFlat { point, directions }
    }
}

/// Signed intersection points of a d-chain with a complementary flat.
///
/// A point carries the cell coefficient times the sign of `det[cell edges | flat directions]`.
pub fn slice_fiber(t: &PolyChain, flat: &AffineFlat) -> Result<PolyChain, ChainError> {
    let n = t.n;
    let k = flat.directions.first().map_or(0, |r| r.len());
    if flat.directions.len() != n || t.d + k != n || flat.point.len() != n {
        return Err(ChainError::DimensionMismatch(format!("a {k}-flat cannot slice a {}-chain in R^{n}", t.d)));
    }
    let mut out = PolyChain::zero(n, 0);
    for (v, c) in t.cells() {
        let d = t.d;
        // v0 + Σ λ_i (v_i - v0) = p + Σ s_j a_j
        let m: RatMatrix = (0..n)
            .map(|r| {
                let mut row: Vec<Rat> = (1..=d).map(|i| &v[i][r] - &v[0][r]).collect();
                row.extend(flat.directions[r].iter().map(|x| -x));
                row
            })
            .collect();
        let rhs: Vec<Rat> = (0..n).map(|r| &flat.point[r] - &v[0][r]).collect();
        let Some(sol) = solve(&m, &rhs) else {
            // spans meet in a positive-dimensional set: treated as contact
            if solve_any(&m, &rhs).is_some() {
                return Err(ChainError::Transversality("flat is not transverse to a cell's span".into()));
            }
            continue;
        };
        let lam: Vec<Rat> = sol[..d].to_vec();
        let lam0 = Rat::one() - lam.iter().sum::<Rat>();
        let all: Vec<&Rat> = std::iter::once(&lam0).chain(lam.iter()).collect();
        if all.iter().any(|x| x.is_negative()) {
            continue;
        }
        if all.iter().any(|x| x.is_zero()) {
            return Err(ChainError::Transversality("flat meets the boundary of a cell".into()));
        }
        let point: Point = (0..n)
            .map(|r| &v[0][r] + lam.iter().enumerate().map(|(i, l)| l * (&v[i + 1][r] - &v[0][r])).sum::<Rat>())
            .collect();
        let orient: RatMatrix = (0..n)
            .map(|r| {
                let mut row: Vec<Rat> = (1..=d).map(|i| &v[i][r] - &v[0][r]).collect();
                row.extend(flat.directions[r].iter().cloned());
                row
            })
            .collect();
        let sign = det(&orient);
        let coeff = if sign.is_positive() { c.clone() } else { -c.clone() };
        out.add_sorted(vec![point], coeff);
    }
    Ok(out)
}
