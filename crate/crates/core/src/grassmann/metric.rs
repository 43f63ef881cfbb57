use super::measure::FloatMeasure;
use super::GrassmannError;
use crate::energy::lp::{lp_solve, LpProblem, LpStatus};

/// Unit d-vector with a mass, the common currency of the transport metric.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDirection {
    pub omega: Vec<f64>,
    pub mass: f64,
}

pub fn tv_distance(mu: &FloatMeasure, nu: &FloatMeasure) -> f64 {
    let mut total = 0.0;
    for (k, m) in &mu.atoms {
        total += (m - nu.mass_of(k)).abs();
    }
    for (k, m) in &nu.atoms {
        if !mu.atoms.contains_key(k) {
            total += m.abs();
        }
    }
    total
}

fn chordal(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

pub fn weighted_directions(mu: &FloatMeasure) -> Vec<WeightedDirection> {
    mu.atoms
        .iter()
        .map(|(k, m)| WeightedDirection { omega: k.omega().coords, mass: *m })
        .collect()
}

pub fn wasserstein_distance(mu: &FloatMeasure, nu: &FloatMeasure) -> Result<f64, GrassmannError> {
    wasserstein_weighted(&weighted_directions(mu), &weighted_directions(nu))
}

/// Optimal transport cost between measures of equal mass under the chordal ground metric.
pub fn wasserstein_weighted(mu: &[WeightedDirection], nu: &[WeightedDirection]) -> Result<f64, GrassmannError> {
    let ma: f64 = mu.iter().map(|a| a.mass).sum();
    let mb: f64 = nu.iter().map(|a| a.mass).sum();
    if (ma - mb).abs() > 1e-9 * ma.abs().max(1.0) {
        return Err(GrassmannError::MassMismatch(ma, mb));
    }
    if mu.is_empty() || ma == 0.0 {
        return Ok(0.0);
    }
    let (k, l) = (mu.len(), nu.len());
    let mut cost = Vec::with_capacity(k * l);
    for a in mu {
        for b in nu {
            cost.push(chordal(&a.omega, &b.omega));
        }
    }
    let mut a_eq = Vec::with_capacity(k + l);
    let mut b_eq = Vec::with_capacity(k + l);
    for i in 0..k {
        let mut row = vec![0.0; k * l];
        row[i * l..(i + 1) * l].fill(1.0);
        a_eq.push(row);
        b_eq.push(mu[i].mass / ma);
    }
    for j in 0..l {
        let mut row = vec![0.0; k * l];
        for i in 0..k {
            row[i * l + j] = 1.0;
        }
        a_eq.push(row);
        b_eq.push(nu[j].mass / mb);
    }
    let sol = lp_solve(&LpProblem { cost, a_eq, b_eq });
    debug_assert_eq!(sol.status, LpStatus::Optimal);
    Ok(sol.value.max(0.0) * ma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmann::PlaneKey;

    fn fm(entries: &[(&[i64], f64)]) -> FloatMeasure {
        let mut m = FloatMeasure::new(2, 1);
        for (w, mass) in entries {
            m.add(PlaneKey::from_ints(2, 1, w), *mass);
        }
        m
    }

    #[test]
    fn tv_cases() {
        let a = fm(&[(&[1, 0], 1.0)]);
        let b = fm(&[(&[0, 1], 2.5)]);
        assert_eq!(tv_distance(&a, &a), 0.0);
        assert!((tv_distance(&a, &b) - 3.5).abs() < 1e-15);
        let c = fm(&[(&[1, 0], 0.25)]);
        assert!((tv_distance(&a, &c) - 0.75).abs() < 1e-15);
    }

    #[test]
    fn transport_single_arc() {
        let a = fm(&[(&[1, 0], 1.0)]);
        let b = fm(&[(&[1, 1], 1.0)]);
        let expected = chordal(&[1.0, 0.0], &[0.5f64.sqrt(), 0.5f64.sqrt()]);
        assert!((wasserstein_distance(&a, &b).unwrap() - expected).abs() < 1e-12);
        assert_eq!(wasserstein_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn transport_half_split() {
        let a = fm(&[(&[1, 0], 1.0)]);
        let b = fm(&[(&[1, 0], 0.5), (&[0, 1], 0.5)]);
        let expected = 0.5 * 2f64.sqrt();
        assert!((wasserstein_distance(&a, &b).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn transport_rejects_mass_mismatch() {
        let a = fm(&[(&[1, 0], 1.0)]);
        let b = fm(&[(&[1, 0], 2.0)]);
        assert!(wasserstein_distance(&a, &b).is_err());
    }
}
