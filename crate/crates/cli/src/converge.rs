use std::fmt::Write;
use std::time::Instant;

use polychain::chains::{hausdorff_distance, sample_box, varifold_pair};
use polychain::constructions::{build_cycle, build_filling, build_multigraph};
use polychain::energy::{energy_chain, Integrand};
use polychain::grassmann::{GrassmannMeasure, PlaneKey};

use crate::inputs::default_height;
use crate::{Common, Construction, Failure};

pub const HEADER: &str =
    "N,M,tv_error,mass,energy,hausdorff,residual_one,residual_x1,residual_x1_squared,tv_decreasing,hausdorff_decreasing,wall_ms";

/// `∫_0^1 f(x_1) dx_1` for the three test functions.
const MOMENTS: [f64; 3] = [1.0, 0.5, 1.0 / 3.0];

fn test_function(k: usize) -> impl Fn(&[f64], &PlaneKey) -> f64 {
    move |x: &[f64], _: &PlaneKey| x[0].powi(k as i32)
}

/// One row per size. Every column but the last is a deterministic function of the inputs;
/// `wall_ms` is the only timing column.
pub fn convergence_csv<I: Integrand + ?Sized>(
    mu: &GrassmannMeasure,
    kind: Construction,
    sizes: &[(u32, Option<u32>)],
    psi: &I,
    common: &Common,
) -> Result<String, Failure> {
    let (n, d) = (mu.n, mu.d);
    let mut out = String::new();
    writeln!(out, "{HEADER}").expect("string write");
    let mut last: Option<(f64, f64)> = None;
    for &(size, height) in sizes {
        let start = Instant::now();
        let m = height.unwrap_or_else(|| default_height(size));
        let built = match kind {
            Construction::Cycle => build_cycle(mu, size, common.offset_seed),
            Construction::Fill => build_filling(mu, size, m, common.offset_seed),
            Construction::Multigraph => build_multigraph(mu, size, m, common.offset_seed),
        }
        .map_err(|e| Failure::input(e.kind(), e.to_string()))?;
        let chain = &built.chain;

        let h = 1.0 / (8.0 * size as f64);
        let hi: Vec<f64> = match kind {
            Construction::Cycle => vec![1.0; n],
            _ => (0..n).map(|i| if i < d { 1.0 } else { 0.0 }).collect(),
        };
        let reference = sample_box(&vec![0.0; n], &hi, h);
        let hausdorff = hausdorff_distance(chain, &reference, h).unwrap_or(f64::NAN);
        let total = mu.total_mass();
        let residuals: Vec<f64> = (0..3)
            .map(|k| (varifold_pair(chain, &test_function(k), common.quad_order) - total * MOMENTS[k]).abs())
            .collect();
        let energy = energy_chain(psi, chain);
        let tv = built.report.tv_error;
        let (tv_dec, h_dec) = match last {
            Some((t0, h0)) => (tv < t0, hausdorff < h0),
            None => (true, true),
        };
        last = Some((tv, hausdorff));
        let m_col = if kind == Construction::Cycle { String::new() } else { m.to_string() };
        writeln!(
            out,
            "{size},{m_col},{tv},{},{energy},{hausdorff},{},{},{},{tv_dec},{h_dec},{}",
            built.report.mass,
            residuals[0],
            residuals[1],
            residuals[2],
            start.elapsed().as_millis()
        )
        .expect("string write");
    }
    Ok(out)
}
