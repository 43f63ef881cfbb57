use num_traits::{Signed, Zero};

use super::filling::filling_lp_directions;
use super::lp::LpStatus;
use super::EnergyError;
use crate::grassmann::{
    binomial, is_positively_oriented, multi_indices, wasserstein_weighted, DVector, ExactDVector, GrassmannMeasure,
    RationalPlane, WeightedDirection,
};
use crate::linalg::solve_any;
use crate::rational::{simplest_rational_within, to_f64, Rat};

const REFINEMENTS: usize = 40;
const SCALE_TOL: f64 = 1e-13;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn exact_dot(a: &ExactDVector, b: &ExactDVector) -> Rat {
    a.coords.iter().zip(&b.coords).map(|(x, y)| x * y).sum()
}

/// Rational d-vector within `delta` of `omega`'s direction, relative to its largest entry.
fn snap_vector(n: usize, d: usize, omega: &[f64], delta: f64) -> ExactDVector {
    let big = omega.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    DVector { n, d, coords: omega.iter().map(|x| simplest_rational_within(x / big, delta)).collect() }
}

fn relative_rational(x: f64) -> Rat {
    simplest_rational_within(x, SCALE_TOL * x.abs())
}

/// Exact-form measure close to `input` whose class is a rational multiple of the input's.
///
/// Each atom is snapped to a nearby rational plane. The class is then corrected exactly,
/// by signed atoms on coordinate planes in general, or, when `cone` is given, by nonnegative
/// atoms on integer shears of `cone` so that the support stays positively oriented and the
/// class becomes a positive multiple of `ω_{cone}`. A final rational factor restores the
/// total mass. The snapping tolerance is halved until the transport distance is below `eps`.
pub fn rational_approx(
    input: &[WeightedDirection],
    n: usize,
    d: usize,
    eps: f64,
    cone: Option<&RationalPlane>,
) -> Result<GrassmannMeasure, EnergyError> {
    let len = binomial(n, d);
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(EnergyError::InvalidInput(format!("eps must be positive, got {eps}")));
    }
    let mut atoms = Vec::with_capacity(input.len());
    for a in input {
        let r = a.omega.iter().map(|x| x * x).sum::<f64>().sqrt();
        if a.omega.len() != len || !(r > 0.0 && r.is_finite()) || !(a.mass > 0.0 && a.mass.is_finite()) {
            return Err(EnergyError::InvalidInput(format!("bad atom {:?} with mass {}", a.omega, a.mass)));
        }
        atoms.push(WeightedDirection { omega: a.omega.iter().map(|x| x / r).collect(), mass: a.mass });
    }
    let total: f64 = atoms.iter().map(|a| a.mass).sum();
    let mut bary = vec![0.0; len];
    for a in &atoms {
        for (b, w) in bary.iter_mut().zip(&a.omega) {
            *b += a.mass * w;
        }
    }
    if let Some(p0) = cone {
        if (p0.n, p0.d) != (n, d) {
            return Err(EnergyError::InvalidInput(format!("cone plane {p0} is not in Gr({d}, {n})")));
        }
        let w0 = p0.key().omega().coords;
        if atoms.iter().any(|a| dot(&a.omega, &w0) <= 0.0) {
            return Err(EnergyError::ConeInfeasible("input support is not positively oriented".into()));
        }
        let along = dot(&bary, &w0);
        let off: f64 = bary.iter().zip(&w0).map(|(b, w)| (b - along * w).powi(2)).sum::<f64>().sqrt();
        if off > 1e-9 * total.max(1.0) {
            return Err(EnergyError::ConeInfeasible(format!("input class is off the cone axis by {off:e}")));
        }
    }
    if atoms.is_empty() {
        return Ok(GrassmannMeasure::new(n, d));
    }

    let mut delta = eps / (8.0 * (len as f64).sqrt());
    let mut last = String::new();
    for _ in 0..REFINEMENTS {
        let attempt = match cone {
            Some(p0) => positive_attempt(&atoms, n, d, delta, p0),
            None => signed_attempt(&atoms, &bary, n, d, delta, total),
        };
        match attempt {
            Ok(mu) => {
                let m0 = mu.total_mass();
                let mu = mu.scaled(&relative_rational(total / m0));
                let out: Vec<WeightedDirection> = mu
                    .atoms()
                    .map(|a| WeightedDirection { omega: a.plane.key().omega().coords, mass: a.mass() })
                    .collect();
                let w = wasserstein_weighted(&atoms, &out)?;
                if w < eps {
                    return Ok(mu);
                }
                last = format!("transport distance {w:e} at tolerance {delta:e}");
            }
            Err(EnergyError::ConeInfeasible(why)) => last = why,
            Err(e) => return Err(e),
        }
        delta /= 2.0;
    }
    match cone {
        Some(_) => Err(EnergyError::ConeInfeasible(last)),
        None => Err(EnergyError::InvalidInput(format!("no approximation within {eps}: {last}"))),
    }
}

fn snapped(atoms: &[WeightedDirection], n: usize, d: usize, delta: f64) -> Result<GrassmannMeasure, EnergyError> {
    let mut mu = GrassmannMeasure::new(n, d);
    for a in atoms {
        let plane = RationalPlane::from_wedge(&snap_vector(n, d, &a.omega, delta))?;
        let s = relative_rational(a.mass / plane.w_norm());
        mu.add(plane, s)?;
    }
    Ok(mu)
}

fn coordinate_line(n: usize, d: usize, slot: usize, positive: bool) -> Result<RationalPlane, EnergyError> {
    let coords = (0..binomial(n, d)).map(|i| if i == slot { Rat::from_integer((if positive { 1 } else { -1 }).into()) } else { Rat::zero() });
    Ok(RationalPlane::from_wedge(&DVector { n, d, coords: coords.collect() })?)
}

fn signed_attempt(
    atoms: &[WeightedDirection],
    bary: &[f64],
    n: usize,
    d: usize,
    delta: f64,
    total: f64,
) -> Result<GrassmannMeasure, EnergyError> {
    let mut mu = snapped(atoms, n, d, delta)?;
    let s = mu.barycenter_exact();
    let size = bary.iter().map(|x| x * x).sum::<f64>().sqrt();
    let residual: Vec<Rat> = if size <= 1e-12 * total {
        s.coords.iter().map(|x| -x).collect()
    } else {
        let target = snap_vector(n, d, bary, delta);
        let lambda = exact_dot(&s, &target) / exact_dot(&target, &target);
        target.coords.iter().zip(&s.coords).map(|(t, x)| &lambda * t - x).collect()
    };
    for (slot, r) in residual.iter().enumerate() {
        if !r.is_zero() {
            mu.add(coordinate_line(n, d, slot, r.is_positive())?, r.abs())?;
        }
    }
    Ok(mu)
}

/// Integer shears `b_i ↦ b_i ± e_k` of a lattice basis of `p0`, positively oriented.
fn shears(p0: &RationalPlane) -> Vec<RationalPlane> {
    let mut out: Vec<RationalPlane> = Vec::new();
    for i in 0..p0.d {
        for k in 0..p0.n {
            for sgn in [1i64, -1] {
                let mut b: Vec<Vec<Rat>> = (0..p0.d).map(|j| p0.basis_vector(j)).collect();
                b[i][k] += Rat::from_integer(sgn.into());
                let cols: Vec<Vec<Rat>> = (0..p0.n).map(|r| b.iter().map(|v| v[r].clone()).collect()).collect();
                if let Ok(q) = RationalPlane::from_basis(&cols) {
                    if is_positively_oriented(&q, p0) && q.key() != p0.key() && !out.iter().any(|o| o.key() == q.key()) {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

fn positive_attempt(
    atoms: &[WeightedDirection],
    n: usize,
    d: usize,
    delta: f64,
    p0: &RationalPlane,
) -> Result<GrassmannMeasure, EnergyError> {
    let mut mu = snapped(atoms, n, d, delta)?;
    if let Some(a) = mu.atoms().find(|a| !is_positively_oriented(&a.plane, p0)) {
        return Err(EnergyError::ConeInfeasible(format!("snapped atom {} left the cone", a.plane)));
    }
    let s = mu.barycenter_exact();
    let w0 = p0.w_exact();
    let lambda = exact_dot(&s, &w0) / exact_dot(&w0, &w0);
    if s.coords.iter().zip(&w0.coords).all(|(x, w)| *x == &lambda * w) {
        return Ok(mu);
    }
    // Σ c_j W_{Q_j} − λ W0 = −S with c, λ ≥ 0, cheapest in correction mass
    let qs = shears(p0);
    let mut cols: Vec<ExactDVector> = qs.iter().map(|q| q.w_exact()).collect();
    cols.push(w0.scaled(&Rat::from_integer((-1).into())));
    let mut costs: Vec<f64> = qs.iter().map(|q| q.w_norm()).collect();
    costs.push(0.0);
    let dirs: Vec<Vec<f64>> = cols.iter().map(|c| c.coords.iter().map(to_f64).collect()).collect();
    let rhs: Vec<f64> = s.coords.iter().map(|x| -to_f64(x)).collect();
    let sol = filling_lp_directions(&costs, &dirs, &rhs);
    if sol.status != LpStatus::Optimal {
        return Err(EnergyError::ConeInfeasible(format!("correction program is {:?}", sol.status)));
    }
    let used: Vec<usize> = (0..cols.len()).filter(|&j| sol.x[j] > 1e-12).collect();
    let a: Vec<Vec<Rat>> = (0..multi_indices(n, d).len()).map(|r| used.iter().map(|&j| cols[j].coords[r].clone()).collect()).collect();
    let b: Vec<Rat> = s.coords.iter().map(|x| -x).collect();
    let (c, _) = solve_any(&a, &b).ok_or_else(|| EnergyError::ConeInfeasible("exact correction is singular".into()))?;
    if c.iter().any(|x| x.is_negative()) {
        return Err(EnergyError::ConeInfeasible("exact correction has a negative weight".into()));
    }
    for (&j, cj) in used.iter().zip(&c) {
        if j < qs.len() && !cj.is_zero() {
            mu.add(qs[j].clone(), cj.clone())?;
        }
    }
    Ok(mu)
}
