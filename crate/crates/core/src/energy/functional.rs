use super::integrand::{GraphIntegrand, Integrand};
use super::EnergyError;
use crate::chains::PolyChain;
use crate::constructions::QValuedPL;
use crate::rational::to_f64;

/// `∫ Ψ dγ_T`.
pub fn energy_chain<I: Integrand + ?Sized>(psi: &I, t: &PolyChain) -> f64 {
    t.gaussian_image().atoms.iter().map(|(k, m)| m * psi.eval_key(k)).sum()
}

/// `Σ_intervals width · Σ_sheets ψ(slope)`.
pub fn energy_multigraph<G: GraphIntegrand + ?Sized>(psi: &G, u: &QValuedPL) -> f64 {
    let mut total = 0.0;
    for ((a, b), sheets) in u.pieces() {
        let width = b - a;
        let w = to_f64(&width);
        for s in sheets {
            let x: Vec<f64> = s.slope(&width).iter().map(to_f64).collect();
            total += w * psi.eval_slope(&x);
        }
    }
    total
}

/// `Σ |θ| · area(projection) · ψ(X)` over the cells of a positively oriented chain, where
/// each cell is the graph of `x ↦ Xx` over its projection to the first `d` coordinates.
pub fn energy_graph_chain<G: GraphIntegrand + ?Sized>(psi: &G, t: &PolyChain) -> Result<f64, EnergyError> {
    let (n, d) = (t.n, t.d);
    let fact: f64 = (1..=d).map(|k| k as f64).product();
    let mut total = 0.0;
    for (v, c) in t.cells() {
        let edges: Vec<Vec<f64>> = (1..=d).map(|j| (0..n).map(|i| to_f64(&(&v[j][i] - &v[0][i]))).collect()).collect();
        // A = top d×d block (columns are edges), X = bottom · A⁻¹
        let a: Vec<Vec<f64>> = (0..d).map(|i| edges.iter().map(|e| e[i]).collect()).collect();
        let det = det_f(&a);
        let sign = det * to_f64(c);
        if det.abs() < 1e-300 || sign <= 0.0 {
            return Err(EnergyError::NonGraphCell(format!("projection determinant {det}, coefficient {}", to_f64(c))));
        }
        let inv = inverse_f(&a);
        let mut x = Vec::with_capacity((n - d) * d);
        for r in d..n {
            for j in 0..d {
                x.push((0..d).map(|k| edges[k][r] * inv[k][j]).sum());
            }
        }
        total += to_f64(c).abs() * det.abs() / fact * psi.eval_slope(&x);
    }
    Ok(total)
}

fn det_f(a: &[Vec<f64>]) -> f64 {
    match a.len() {
        0 => 1.0,
        1 => a[0][0],
        2 => a[0][0] * a[1][1] - a[0][1] * a[1][0],
        k => (0..k)
            .map(|j| {
                let minor: Vec<Vec<f64>> =
                    a[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| *v).collect()).collect();
                let s = if j % 2 == 0 { 1.0 } else { -1.0 };
                s * a[0][j] * det_f(&minor)
            })
            .sum(),
    }
}

fn inverse_f(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let k = a.len();
    let det = det_f(a);
    // adjugate; d is tiny
    (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let minor: Vec<Vec<f64>> = (0..k)
                        .filter(|&r| r != j)
                        .map(|r| (0..k).filter(|&c| c != i).map(|c| a[r][c]).collect())
                        .collect();
                    let s = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
                    s * det_f(&minor) / det
                })
                .collect()
        })
        .collect()
}
