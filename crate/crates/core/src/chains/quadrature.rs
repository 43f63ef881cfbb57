//! Symmetric simplex quadrature of order at most three, in barycentric form.

use super::chain::PolyChain;
use super::simplex::{simplex_volume, OrientedSimplex};
use crate::grassmann::PlaneKey;
use crate::rational::to_f64;

/// Barycentric nodes with weights summing to one.
#[derive(Debug, Clone)]
pub struct Rule {
    pub nodes: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
}

fn permutations_of(base: &[f64]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = Vec::new();
    let mut idx: Vec<usize> = (0..base.len()).collect();
    loop {
        let p: Vec<f64> = idx.iter().map(|&i| base[i]).collect();
        if !out.contains(&p) {
            out.push(p);
        }
        // next lexicographic permutation of indices
        let Some(i) = (0..idx.len().saturating_sub(1)).rev().find(|&i| idx[i] < idx[i + 1]) else {
            return out;
        };
        let j = (i + 1..idx.len()).rev().find(|&j| idx[j] > idx[i]).expect("successor exists");
        idx.swap(i, j);
        idx[i + 1..].reverse();
    }
}

fn symmetric(orbits: &[(&[f64], f64)]) -> Rule {
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (base, w) in orbits {
        for p in permutations_of(base) {
            nodes.push(p);
            weights.push(*w);
        }
    }
    Rule { nodes, weights }
}

/// Rule on the `d`-simplex exact for polynomials of degree `order` (clamped to 1..=3).
pub fn rule(d: usize, order: usize) -> Rule {
    let order = order.clamp(1, 3);
    match (d, order) {
        (0, _) => Rule { nodes: vec![vec![1.0]], weights: vec![1.0] },
        (1, 1) => symmetric(&[(&[0.5, 0.5], 1.0)]),
        (1, _) => {
            let g = 0.5 / 3f64.sqrt();
            symmetric(&[(&[0.5 + g, 0.5 - g], 0.5)])
        }
        (2, 1) => symmetric(&[(&[1.0 / 3.0; 3], 1.0)]),
        (2, 2) => symmetric(&[(&[2.0 / 3.0, 1.0 / 6.0, 1.0 / 6.0], 1.0 / 3.0)]),
        (2, _) => symmetric(&[(&[0.659027622374092, 0.231933368553031, 0.109039009072877], 1.0 / 6.0)]),
        (3, 1) => symmetric(&[(&[0.25; 4], 1.0)]),
        (3, 2) => {
            let (a, b) = (0.5854101966249685, 0.1381966011250105);
            symmetric(&[(&[a, b, b, b], 0.25)])
        }
        (3, _) => symmetric(&[(&[0.25; 4], -0.8), (&[0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0], 0.45)]),
        _ => {
            // centroid rule in higher dimension
            let c = 1.0 / (d + 1) as f64;
            Rule { nodes: vec![vec![c; d + 1]], weights: vec![1.0] }
        }
    }
}

/// `Σ |θ| ∫_cell f(x, unoriented plane)` by per-simplex quadrature.
pub fn varifold_pair(t: &PolyChain, f: &dyn Fn(&[f64], &PlaneKey) -> f64, order: usize) -> f64 {
    let r = rule(t.d, order);
    let mut total = 0.0;
    for (v, c) in t.cells() {
        let s = OrientedSimplex { vertices: v.clone() };
        let key = match s.plane_key() {
            Some(k) => k.unoriented(),
            None => PlaneKey { n: t.n, d: 0, w: vec![1.into()] },
        };
        let pts = s.vertices_f64();
        let vol = simplex_volume(v);
        let mut acc = 0.0;
        for (node, w) in r.nodes.iter().zip(&r.weights) {
            let x: Vec<f64> = (0..t.n).map(|i| node.iter().zip(&pts).map(|(l, p)| l * p[i]).sum()).collect();
            acc += w * f(&x, &key);
        }
        total += to_f64(c).abs() * vol * acc;
    }
    total
}
