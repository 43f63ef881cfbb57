use std::collections::HashMap;

use super::chain::PolyChain;
use super::ChainError;

/// Points of `supp T` with spacing at most `h` along every cell.
pub fn sample_chain(t: &PolyChain, h: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    for (s, _) in t.simplices() {
        let pts = s.vertices_f64();
        let diam = pts
            .iter()
            .flat_map(|a| pts.iter().map(move |b| dist(a, b)))
            .fold(0.0, f64::max);
        let k = ((diam / h).ceil() as usize).max(1);
        let d = s.dim();
        for_each_composition(k, d + 1, &mut |c| {
            let x: Vec<f64> = (0..t.n)
                .map(|i| c.iter().zip(&pts).map(|(&ci, p)| ci as f64 / k as f64 * p[i]).sum())
                .collect();
            out.push(x);
        });
    }
    out
}

fn for_each_composition(total: usize, parts: usize, f: &mut dyn FnMut(&[usize])) {
    fn rec(rem: usize, parts: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if parts == 1 {
            cur.push(rem);
            f(cur);
            cur.pop();
            return;
        }
        for i in 0..=rem {
            cur.push(i);
            rec(rem - i, parts - 1, cur, f);
            cur.pop();
        }
    }
    rec(total, parts, &mut Vec::new(), f);
}

/// Grid of spacing at most `h` over an axis box.
pub fn sample_box(lo: &[f64], hi: &[f64], h: f64) -> Vec<Vec<f64>> {
    let counts: Vec<usize> = lo.iter().zip(hi).map(|(a, b)| (((b - a) / h).ceil() as usize).max(1)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; lo.len()];
    loop {
        out.push(
            idx.iter()
                .enumerate()
                .map(|(i, &k)| lo[i] + (hi[i] - lo[i]) * k as f64 / counts[i] as f64)
                .collect(),
        );
        let mut i = 0;
        loop {
            if i == idx.len() {
                return out;
            }
            idx[i] += 1;
            if idx[i] <= counts[i] {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum::<f64>().sqrt()
}

struct Buckets<'a> {
    h: f64,
    all: &'a [Vec<f64>],
    lo: Vec<f64>,
    hi: Vec<f64>,
    cells: HashMap<Vec<i64>, Vec<&'a [f64]>>,
}

impl<'a> Buckets<'a> {
    fn new(points: &'a [Vec<f64>], h: f64) -> Self {
        let n = points.first().map_or(0, Vec::len);
        let mut lo = vec![f64::INFINITY; n];
        let mut hi = vec![f64::NEG_INFINITY; n];
        let mut cells: HashMap<Vec<i64>, Vec<&'a [f64]>> = HashMap::new();
        for p in points {
            for i in 0..n {
                lo[i] = lo[i].min(p[i]);
                hi[i] = hi[i].max(p[i]);
            }
            cells.entry(Self::cell_of(p, h)).or_default().push(p);
        }
        Buckets { h, all: points, lo, hi, cells }
    }

    fn cell_of(p: &[f64], h: f64) -> Vec<i64> {
        p.iter().map(|x| (x / h).floor() as i64).collect()
    }

    fn brute(&self, q: &[f64], best: f64) -> f64 {
        self.all.iter().map(|p| dist(p, q)).fold(best, f64::min)
    }

    fn nearest(&self, q: &[f64]) -> f64 {
        let n = q.len();
        let c = Self::cell_of(q, self.h);
        let to_box: f64 = (0..n)
            .map(|i| (self.lo[i] - q[i]).max(q[i] - self.hi[i]).max(0.0).powi(2))
            .sum::<f64>()
            .sqrt();
        // rings whose cells lie entirely closer than the bounding box are empty
        let mut r = ((to_box / (self.h * (n as f64).sqrt())).floor() as i64 - 1).max(0);
        let mut best = f64::INFINITY;
        let mut visited = 0usize;
        loop {
            // every point outside the rings searched so far is at least r*h away
            if best <= r as f64 * self.h {
                return best;
            }
            let shell = shell_size(n, r);
            if visited + shell > self.all.len() {
                return self.brute(q, best);
            }
            visited += shell;
            ring(&c, r, &mut |cell| {
                if let Some(pts) = self.cells.get(cell) {
                    for p in pts {
                        best = best.min(dist(p, q));
                    }
                }
            });
            r += 1;
        }
    }
}

fn shell_size(n: usize, r: i64) -> usize {
    if r == 0 {
        return 1;
    }
    let outer = (2 * r + 1) as usize;
    let inner = (2 * r - 1) as usize;
    outer.saturating_pow(n as u32) - inner.saturating_pow(n as u32)
}

/// Cells at Chebyshev distance exactly `r` from `c`.
fn ring(c: &[i64], r: i64, f: &mut dyn FnMut(&Vec<i64>)) {
    let n = c.len();
    if r == 0 {
        f(&c.to_vec());
        return;
    }
    // pin the first coordinate reaching |offset| = r; earlier ones stay strictly inside
    let mut cell = c.to_vec();
    for pin in 0..n {
        for side in [-r, r] {
            let mut off: Vec<i64> = (0..n).map(|j| if j < pin { -r + 1 } else { -r }).collect();
            off[pin] = side;
            loop {
                for j in 0..n {
                    cell[j] = c[j] + off[j];
                }
                f(&cell);
                let mut j = 0;
                loop {
                    if j == n {
                        break;
                    }
                    if j == pin {
                        j += 1;
                        continue;
                    }
                    let top = if j < pin { r - 1 } else { r };
                    off[j] += 1;
                    if off[j] <= top {
                        break;
                    }
                    off[j] = if j < pin { -r + 1 } else { -r };
                    j += 1;
                }
                if j == n {
                    break;
                }
            }
        }
    }
}

/// Symmetric Hausdorff distance between point clouds.
pub fn hausdorff_points(a: &[Vec<f64>], b: &[Vec<f64>], h: f64) -> f64 {
    let ba = Buckets::new(a, h);
    let bb = Buckets::new(b, h);
    let ab = a.iter().map(|p| bb.nearest(p)).fold(0.0, f64::max);
    let ba_ = b.iter().map(|p| ba.nearest(p)).fold(0.0, f64::max);
    ab.max(ba_)
}

/// Hausdorff distance between `supp T` and a reference sample, accurate to about `2h`.
pub fn hausdorff_distance(t: &PolyChain, reference: &[Vec<f64>], h: f64) -> Result<f64, ChainError> {
    if t.is_empty() || reference.is_empty() {
        return Err(ChainError::EmptyChain);
    }
    assert!(h > 0.0, "resolution must be positive");
    Ok(hausdorff_points(&sample_chain(t, h), reference, h))
}
