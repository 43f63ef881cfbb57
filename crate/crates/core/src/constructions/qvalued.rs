use std::collections::BTreeSet;

use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};

use super::{p0_orientation, ConstructionError};
use crate::chains::{PolyChain, Point};
use crate::rational::{format_rat, lcm_of_denominators, to_f64, Rat};

/// One affine sheet over a domain interval, given by its values at the two ends.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Sheet {
    pub left: Vec<Rat>,
    pub right: Vec<Rat>,
}

impl Sheet {
    pub fn slope(&self, width: &Rat) -> Vec<Rat> {
        self.left.iter().zip(&self.right).map(|(a, b)| (b - a) / width).collect()
    }
}

/// Piecewise affine `Q`-valued map `[a, b] → A_Q(R^{n−1})`.
///
/// `sheets[k]` lists the `Q` sheets over `[breakpoints[k], breakpoints[k+1]]` in increasing
/// lexicographic order; no two sheets cross inside an interval.
#[derive(Debug, Clone, PartialEq)]
pub struct QValuedPL {
    pub n: usize,
    pub q: u64,
    pub domain: (Rat, Rat),
    pub breakpoints: Vec<Rat>,
    pub sheets: Vec<Vec<Sheet>>,
    pub lipschitz: f64,
}

impl QValuedPL {
    /// `Q` copies of the zero map on `[0,1]`.
    pub fn zero(n: usize, q: u64) -> Self {
        let flat = Sheet { left: vec![Rat::zero(); n - 1], right: vec![Rat::zero(); n - 1] };
        QValuedPL {
            n,
            q,
            domain: (Rat::zero(), Rat::one()),
            breakpoints: vec![Rat::zero(), Rat::one()],
            sheets: vec![vec![flat; q as usize]],
            lipschitz: 0.0,
        }
    }

    /// Intervals with their sheets.
    pub fn pieces(&self) -> impl Iterator<Item = ((&Rat, &Rat), &[Sheet])> {
        self.breakpoints.windows(2).zip(&self.sheets).map(|(w, s)| ((&w[0], &w[1]), s.as_slice()))
    }

    /// The integral graph chain `[Λ_u]`, one unit segment per sheet and interval.
    pub fn graph_chain(&self) -> PolyChain {
        let mut out = PolyChain::zero(self.n, 1);
        for ((a, b), sheets) in self.pieces() {
            for s in sheets {
                let p: Point = std::iter::once(a.clone()).chain(s.left.iter().cloned()).collect();
                let q: Point = std::iter::once(b.clone()).chain(s.right.iter().cloned()).collect();
                out.add_oriented(vec![p, q], Rat::one());
            }
        }
        out
    }

    /// Sheet values at a breakpoint seen from the interval on the given side, as a sorted multiset.
    pub fn values_at(&self, k: usize, from_left: bool) -> Vec<Vec<Rat>> {
        let mut v: Vec<Vec<Rat>> = if from_left {
            self.sheets[k - 1].iter().map(|s| s.right.clone()).collect()
        } else {
            self.sheets[k].iter().map(|s| s.left.clone()).collect()
        };
        v.sort();
        v
    }

    pub fn to_json(&self) -> Value {
        let vec = |v: &[Rat]| v.iter().map(format_rat).collect::<Vec<_>>();
        json!({
            "n": self.n,
            "q": self.q,
            "domain": [format_rat(&self.domain.0), format_rat(&self.domain.1)],
            "breakpoints": vec(&self.breakpoints),
            "sheets": self.sheets.iter().map(|ss| ss.iter().map(|s| json!({
                "left": vec(&s.left),
                "right": vec(&s.right),
            })).collect::<Vec<_>>()).collect::<Vec<_>>(),
            "lipschitz": self.lipschitz,
        })
    }
}

struct Piece {
    start: Point,
    end: Point,
    mult: u64,
}

impl Piece {
    fn at(&self, x: &Rat) -> Vec<Rat> {
        let t = (x - &self.start[0]) / (&self.end[0] - &self.start[0]);
        self.start[1..].iter().zip(&self.end[1..]).map(|(a, b)| a + &t * (b - a)).collect()
    }
}

/// Active pieces over each interval of `xs`.
fn sweep(pieces: &[Piece], xs: &[Rat]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&i, &j| pieces[i].start[0].cmp(&pieces[j].start[0]));
    let mut next = 0;
    let mut active: Vec<usize> = Vec::new();
    xs.windows(2)
        .map(|w| {
            active.retain(|&i| pieces[i].end[0] > w[0]);
            while next < order.len() && pieces[order[next]].start[0] <= w[0] {
                if pieces[order[next]].end[0] > w[0] {
                    active.push(order[next]);
                }
                next += 1;
            }
            active.clone()
        })
        .collect()
}

/// Writes a positively oriented 1-chain `B` with `∂B = ∂[0,1]` as `Q^{−1}[Λ_u]`.
///
/// `Q` is the least common denominator of the coefficients. Breakpoints are the vertex
/// abscissae together with every crossing of two sheets, so the sorted sheets are affine
/// on each interval.
pub fn extract_qvalued(b: &PolyChain) -> Result<(u64, QValuedPL), ConstructionError> {
    if b.d != 1 || b.n < 2 {
        return Err(ConstructionError::Unsupported(format!("extraction needs d = 1 < n, got d={}, n={}", b.d, b.n)));
    }
    if b.is_empty() {
        return Err(ConstructionError::NonIntegralAfterScaling("empty chain".into()));
    }
    let scale = Rat::from_integer(lcm_of_denominators(b.cells().map(|(_, c)| c)));
    let q = scale
        .to_integer()
        .to_u64()
        .ok_or_else(|| ConstructionError::NonIntegralAfterScaling("denominator exceeds u64".into()))?;
    let mut pieces = Vec::with_capacity(b.len());
    for (v, c) in b.cells() {
        if p0_orientation(v) <= 0 || *c <= Rat::zero() {
            return Err(ConstructionError::NegativeCell(format!(
                "coefficient {} on [{}, {}]",
                format_rat(c),
                format_rat(&v[0][0]),
                format_rat(&v[1][0])
            )));
        }
        let m = (c * &scale).to_integer().to_u64().expect("positive integral multiplicity");
        pieces.push(Piece { start: v[0].clone(), end: v[1].clone(), mult: m });
    }

    let mut xs: BTreeSet<Rat> = pieces.iter().flat_map(|p| [p.start[0].clone(), p.end[0].clone()]).collect();
    let coarse: Vec<Rat> = xs.iter().cloned().collect();
    for (w, act) in coarse.windows(2).zip(sweep(&pieces, &coarse)) {
        let vals: Vec<(Vec<Rat>, Vec<Rat>)> = act.iter().map(|&i| (pieces[i].at(&w[0]), pieces[i].at(&w[1]))).collect();
        for i in 0..vals.len() {
            for j in i + 1..vals.len() {
                let (li, ri) = &vals[i];
                let (lj, rj) = &vals[j];
                // first coordinate in which the two affine maps differ
                let Some(k) = (0..li.len()).find(|&k| li[k] != lj[k] || ri[k] != rj[k]) else { continue };
                let dl = &li[k] - &lj[k];
                let dr = &ri[k] - &rj[k];
                if (dl > Rat::zero() && dr < Rat::zero()) || (dl < Rat::zero() && dr > Rat::zero()) {
                    xs.insert(&w[0] + (&w[1] - &w[0]) * &dl / (&dl - &dr));
                }
            }
        }
    }

    let breakpoints: Vec<Rat> = xs.into_iter().collect();
    let mut sheets = Vec::with_capacity(breakpoints.len() - 1);
    let mut lipschitz: f64 = 0.0;
    for (w, act) in breakpoints.windows(2).zip(sweep(&pieces, &breakpoints)) {
        let total: u64 = act.iter().map(|&i| pieces[i].mult).sum();
        if total != q {
            return Err(ConstructionError::NonIntegralAfterScaling(format!(
                "fiber over ({}, {}) carries {total} sheets, expected {q}",
                format_rat(&w[0]),
                format_rat(&w[1])
            )));
        }
        let mut here: Vec<Sheet> = Vec::with_capacity(q as usize);
        for &i in &act {
            let s = Sheet { left: pieces[i].at(&w[0]), right: pieces[i].at(&w[1]) };
            let width = &w[1] - &w[0];
            let slope: f64 = s.slope(&width).iter().map(|x| to_f64(x).powi(2)).sum::<f64>().sqrt();
            lipschitz = lipschitz.max(slope);
            for _ in 0..pieces[i].mult {
                here.push(s.clone());
            }
        }
        here.sort();
        sheets.push(here);
    }
    let domain = (breakpoints[0].clone(), breakpoints[breakpoints.len() - 1].clone());
    Ok((q, QValuedPL { n: b.n, q, domain, breakpoints, sheets, lipschitz }))
}
