use super::approx::rational_approx;
use super::functional::energy_multigraph;
use super::integrand::GraphIntegrand;
use super::EnergyError;
use crate::constructions::{build_multigraph, extract_qvalued, QValuedPL};
use crate::grassmann::{is_positively_oriented, weighted_directions, FloatMeasure, GrassmannMeasure, RationalPlane};
use crate::torus::DEFAULT_PRIME;

#[derive(Debug, Clone)]
pub struct CounterexampleConfig {
    /// Grid sizes `(N, M)` tried in order.
    pub sizes: Vec<(u32, u32)>,
    /// Largest multigraph, in cells, that may be built.
    pub cell_budget: usize,
    pub prime: u64,
    /// The run stops once the relative margin reaches this fraction of the LP gap.
    pub margin_fraction: f64,
}

impl Default for CounterexampleConfig {
    fn default() -> Self {
        CounterexampleConfig {
            sizes: vec![(4, 2), (6, 2), (9, 3), (12, 3), (16, 4), (20, 4), (25, 5), (32, 5)],
            cell_budget: 200_000,
            prime: DEFAULT_PRIME,
            margin_fraction: 0.5,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Counterexample {
    pub u: QValuedPL,
    pub q: u64,
    /// `F_ψ(u)`.
    pub energy: f64,
    /// `Q · F_ψ(0)`.
    pub reference: f64,
    /// `1 − energy / reference`.
    pub margin: f64,
    /// `Ψ(P0) − ∫Ψ dμ` for the witness.
    pub gap: f64,
    pub size: (u32, u32),
    pub tv_error: f64,
    pub measure: GrassmannMeasure,
}

/// `Ψ(ω) = ψ(slope) · ω_0` for a line with `ω_0 > 0`.
fn line_integrand<G: GraphIntegrand + ?Sized>(psi: &G, omega: &[f64]) -> f64 {
    let x: Vec<f64> = omega[1..].iter().map(|w| w / omega[0]).collect();
    psi.eval_slope(&x) * omega[0]
}

/// A `Q`-valued piecewise affine map on `[0,1]` with zero boundary values beating `Q` copies
/// of the zero map, built from a strict LP witness.
///
/// The witness is made exact with a positively oriented rational approximation, rescaled to
/// the coordinate class, realized as a multigraph on successive grids and extracted. The
/// first grid whose margin reaches the configured fraction of the gap is returned.
pub fn counterexample_multigraph<G: GraphIntegrand + ?Sized>(
    psi: &G,
    witness: &FloatMeasure,
    eps: f64,
    config: &CounterexampleConfig,
) -> Result<Counterexample, EnergyError> {
    let (n, d) = (witness.n, witness.d);
    if (n, d) != (2, 1) {
        return Err(EnergyError::InvalidInput(format!("multigraph witnesses need d = 1, n = 2, got d={d}, n={n}")));
    }
    let p0 = RationalPlane::coordinate(n, d);
    for k in witness.atoms.keys() {
        if !is_positively_oriented(&k.to_plane()?, &p0) {
            return Err(EnergyError::InvalidInput(format!("witness atom {k} is not positively oriented")));
        }
    }
    let flat = psi.eval_slope(&vec![0.0; n - 1]);
    let spent: f64 = witness.atoms.iter().map(|(k, m)| m * line_integrand(psi, &k.omega().coords)).sum();
    let gap = flat - spent;
    if gap <= 0.0 {
        return Err(EnergyError::InvalidInput(format!("witness energy {spent} does not beat the flat value {flat}")));
    }

    let approx = rational_approx(&weighted_directions(witness), n, d, eps, Some(&p0))?;
    let class = approx.barycenter_exact();
    let measure = approx.scaled(&class.coords[0].recip());

    let target = config.margin_fraction * gap / flat;
    let mut best: Option<Counterexample> = None;
    for &(size, height) in &config.sizes {
        let built = build_multigraph(&measure, size, height, config.prime)?;
        if built.chain.len() > config.cell_budget {
            break;
        }
        let (q, u) = extract_qvalued(&built.chain)?;
        let energy = energy_multigraph(psi, &u);
        let reference = q as f64 * flat;
        let found = Counterexample {
            margin: 1.0 - energy / reference,
            u,
            q,
            energy,
            reference,
            gap,
            size: (size, height),
            tv_error: built.report.tv_error,
            measure: measure.clone(),
        };
        let done = found.margin >= target;
        best = Some(found);
        if done {
            return Ok(best.expect("just set"));
        }
    }
    Err(EnergyError::GapTooSmall(match best {
        Some(b) => format!(
            "margin {:.6} at N={}, M={} is below {:.6} = {} of the gap {:.6}",
            b.margin, b.size.0, b.size.1, target, config.margin_fraction, gap
        ),
        None => "no grid fits the cell budget".into(),
    }))
}
