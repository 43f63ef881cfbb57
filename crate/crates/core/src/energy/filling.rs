use std::collections::BTreeSet;

use serde_json::{json, Value};

use super::integrand::Integrand;
use super::lp::{lp_solve, LpProblem, LpSolution, LpStatus};
use super::EnergyError;
use crate::grassmann::{FloatMeasure, PlaneKey, RationalPlane};

const OPTIMALITY_SLACK: f64 = 1e-10;
const GAP_TOL: f64 = 1e-9;
const SUPPORT_EPS: f64 = 1e-13;

/// Result of the filling-energy program over a finite candidate set.
#[derive(Debug, Clone)]
pub struct FillingLp {
    pub value: f64,
    /// `Ψ(P0)`.
    pub reference: f64,
    pub mu_star: FloatMeasure,
    pub solution: LpSolution,
    pub candidates: Vec<PlaneKey>,
}

/// `min Σ cost_i x_i  s.t.  Σ x_i dir_i = target, x ≥ 0`.
pub fn filling_lp_directions(costs: &[f64], dirs: &[Vec<f64>], target: &[f64]) -> LpSolution {
    let rows = target.len();
    let a_eq: Vec<Vec<f64>> = (0..rows).map(|r| dirs.iter().map(|w| w[r]).collect()).collect();
    lp_solve(&LpProblem { cost: costs.to_vec(), a_eq, b_eq: target.to_vec() })
}

fn distinct(p0: &RationalPlane, candidates: &[RationalPlane]) -> Result<Vec<PlaneKey>, EnergyError> {
    let mut seen = BTreeSet::new();
    let mut keys = Vec::with_capacity(candidates.len());
    for c in candidates {
        if (c.n, c.d) != (p0.n, p0.d) {
            return Err(EnergyError::InvalidInput(format!("candidate {c} is not in Gr({}, {})", p0.d, p0.n)));
        }
        if seen.insert(c.key()) {
            keys.push(c.key());
        }
    }
    Ok(keys)
}

/// `inf { ∫Ψ dμ : ∫ω dμ = ω_{P0} }` over measures supported on the candidates.
pub fn filling_energy_lp<I: Integrand + ?Sized>(
    psi: &I,
    p0: &RationalPlane,
    candidates: &[RationalPlane],
) -> Result<FillingLp, EnergyError> {
    let keys = distinct(p0, candidates)?;
    let dirs: Vec<Vec<f64>> = keys.iter().map(|k| k.omega().coords).collect();
    let costs: Vec<f64> = keys.iter().map(|k| psi.eval_key(k)).collect();
    if let Some(c) = costs.iter().find(|c| !(c.is_finite() && **c > 0.0)) {
        return Err(EnergyError::Integrand(format!("integrand value {c} is not positive")));
    }
    let target = p0.key().omega().coords;
    let solution = filling_lp_directions(&costs, &dirs, &target);
    if solution.status != LpStatus::Optimal {
        return Err(EnergyError::Infeasible(format!("status {:?} over {} candidates", solution.status, keys.len())));
    }
    let mu_star = support(&keys, &solution.x, p0);
    Ok(FillingLp { value: solution.value, reference: psi.eval_key(&p0.key()), mu_star, solution, candidates: keys })
}

fn support(keys: &[PlaneKey], x: &[f64], p0: &RationalPlane) -> FloatMeasure {
    let mut mu = FloatMeasure::new(p0.n, p0.d);
    for (k, v) in keys.iter().zip(x) {
        if *v > SUPPORT_EPS {
            mu.add(k.clone(), *v);
        }
    }
    mu
}

/// A minimizer other than `δ_{P0}`, if the candidates admit one.
///
/// Below `Ψ(P0)` the optimal measure itself is returned. At equality a second program
/// minimizes the `P0` mass among optimal measures.
pub fn strict_gap_witness<I: Integrand + ?Sized>(
    psi: &I,
    p0: &RationalPlane,
    candidates: &[RationalPlane],
) -> Result<Option<FloatMeasure>, EnergyError> {
    let lp = filling_energy_lp(psi, p0, candidates)?;
    if lp.value < lp.reference - GAP_TOL {
        return Ok(Some(lp.mu_star));
    }
    let Some(at) = lp.candidates.iter().position(|k| *k == p0.key()) else {
        return Ok(Some(lp.mu_star));
    };
    let k = lp.candidates.len();
    let mut cost = vec![0.0; k + 1];
    cost[at] = 1.0;
    let mut a_eq: Vec<Vec<f64>> = Vec::new();
    let target = p0.key().omega().coords;
    let dirs: Vec<Vec<f64>> = lp.candidates.iter().map(|c| c.omega().coords).collect();
    for r in 0..target.len() {
        let mut row: Vec<f64> = dirs.iter().map(|w| w[r]).collect();
        row.push(0.0);
        a_eq.push(row);
    }
    let mut energy_row: Vec<f64> = lp.candidates.iter().map(|c| psi.eval_key(c)).collect();
    energy_row.push(1.0);
    a_eq.push(energy_row);
    let mut b_eq = target;
    b_eq.push(lp.value + OPTIMALITY_SLACK);
    let second = lp_solve(&LpProblem { cost, a_eq, b_eq });
    if second.status != LpStatus::Optimal || second.value >= 1.0 - GAP_TOL {
        return Ok(None);
    }
    Ok(Some(support(&lp.candidates, &second.x[..k], p0)))
}

/// JSON report of a filling-energy run.
pub fn lp_report(lp: &FillingLp, witness: Option<&FloatMeasure>) -> Value {
    let basis: Vec<String> =
        lp.solution.basis.iter().filter(|&&j| j < lp.candidates.len()).map(|&j| lp.candidates[j].to_string()).collect();
    let atoms = |mu: &FloatMeasure| -> Value {
        Value::Array(mu.atoms.iter().map(|(k, m)| json!({ "plane": k.to_string(), "mass": m })).collect())
    };
    json!({
        "value": lp.value,
        "reference": lp.reference,
        "gap": lp.reference - lp.value,
        "status": lp.solution.status,
        "candidates": lp.candidates.len(),
        "basis": basis,
        "residuals": {
            "primal": lp.solution.primal_residual,
            "slackness": lp.solution.slackness_residual,
        },
        "mu_star": atoms(&lp.mu_star),
        "witness": witness.map(atoms),
        "scope": "finite candidate set: a value below the reference certifies a polyconvexity gap, equality certifies nothing beyond these candidates",
    })
}
