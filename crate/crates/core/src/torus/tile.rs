use std::collections::BTreeSet;

use num_traits::{One, Signed, Zero};

use super::periodic::{lift_into, AxisBox, PeriodicChain};
use super::TorusError;
use crate::chains::{next_combination, HalfSpace, PolyChain, Point, Polytope};
use crate::linalg::{rank, solve_any, RatMatrix};
use crate::rational::Rat;

/// `S_F = ∂(Q̃ ⌞ F)`, refined.
pub fn tile_fundamental(q: &PeriodicChain, f: &Polytope) -> Result<PolyChain, TorusError> {
    if q.is_empty() {
        return Ok(PolyChain::zero(q.n(), q.d().saturating_sub(1)));
    }
    let (lo, hi) = f.bbox().ok_or_else(|| TorusError::Transversality("empty domain".into()))?;
    let lifted = lift_into(q.representatives(), &AxisBox::new(lo, hi));
    check_transverse(&lifted, f)?;
    Ok(lifted.restrict(f).boundary().refined())
}

/// Splits a tile into the cells crossing the interior of `f` and those lying in a facet.
pub fn split_tile(s: &PolyChain, f: &Polytope) -> (PolyChain, PolyChain) {
    let on_facet = |v: &[Point]| f.halfspaces.iter().any(|h| v.iter().all(|p| h.slack(p).is_zero()));
    (s.filtered(|v, _| !on_facet(v)), s.filtered(|v, _| on_facet(v)))
}

/// `2n · mass(Q̃ ∩ ∂F)`, read off the facet part of the tile.
pub fn tile_constant(s: &PolyChain, f: &Polytope) -> f64 {
    2.0 * s.n as f64 * split_tile(s, f).1.mass()
}

/// Exact check that no `k`-face of a cell meets a codimension-`(k+1)` face flat of `f`.
pub fn check_transverse(cells: &PolyChain, f: &Polytope) -> Result<(), TorusError> {
    let n = f.n;
    let mut faces: BTreeSet<Vec<Point>> = BTreeSet::new();
    for (v, _) in cells.cells() {
        for size in 1..=v.len().min(n) {
            let mut idx: Vec<usize> = (0..size).collect();
            loop {
                faces.insert(idx.iter().map(|&i| v[i].clone()).collect());
                if !next_combination(&mut idx, v.len()) {
                    break;
                }
            }
        }
    }
    let flats = flat_sets(f);
    for face in &faces {
        let k = face.len() - 1;
        for set in &flats[k] {
            let hs: Vec<&HalfSpace> = set.iter().map(|&i| &f.halfspaces[i]).collect();
            if meets(face, &hs) {
                return Err(TorusError::Transversality(format!(
                    "a {k}-face meets a codimension-{} face of the domain",
                    k + 1
                )));
            }
        }
    }
    Ok(())
}

/// Sets of `k+1` facets with independent normals, indexed by `k`.
fn flat_sets(f: &Polytope) -> Vec<Vec<Vec<usize>>> {
    let m = f.halfspaces.len();
    (0..f.n)
        .map(|k| {
            let mut out = Vec::new();
            if k + 1 > m {
                return out;
            }
            let mut idx: Vec<usize> = (0..=k).collect();
            loop {
                let rows: RatMatrix = idx.iter().map(|&i| f.halfspaces[i].a.clone()).collect();
                if rank(&rows) == k + 1 {
                    out.push(idx.clone());
                }
                if !next_combination(&mut idx, m) {
                    break;
                }
            }
            out
        })
        .collect()
}

/// Whether the simplex `face` meets `{x : a·x = b for every listed halfspace}`.
fn meets(face: &[Point], hs: &[&HalfSpace]) -> bool {
    let slacks: Vec<Vec<Rat>> = hs.iter().map(|h| face.iter().map(|p| h.slack(p)).collect()).collect();
    if slacks.iter().any(|s| s.iter().all(Signed::is_positive) || s.iter().all(Signed::is_negative)) {
        return false;
    }
    // λ ≥ 0, Σλ = 1, Σ λ_i slack_h(p_i) = 0; some basic feasible solution exists if any does
    let k1 = face.len();
    let mut support: Vec<usize> = Vec::new();
    for mask in 1u32..(1 << k1) {
        support.clear();
        support.extend((0..k1).filter(|i| mask & (1 << i) != 0));
        let mut a: RatMatrix = vec![support.iter().map(|_| Rat::one()).collect()];
        a.extend(slacks.iter().map(|s| support.iter().map(|&i| s[i].clone()).collect()));
        let mut rhs = vec![Rat::zero(); a.len()];
        rhs[0] = Rat::one();
        if let Some((x, 0)) = solve_any(&a, &rhs) {
            if x.iter().all(|l| !l.is_negative()) {
                return true;
            }
        }
    }
    false
}
