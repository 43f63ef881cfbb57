use num_bigint::BigInt;
use num_traits::Zero;

use super::family::{generic_offset, half_parallelepiped, next_prime, parallelepiped, to_rat_vec, PlaneFamily};
use super::periodic::{lift_into, AxisBox, PeriodicChain};
use super::tile::check_transverse;
use super::TorusError;
use crate::chains::{PolyChain, Point, Polytope};
use crate::grassmann::GrassmannMeasure;
use crate::rational::{format_rat, Rat};

pub const DEFAULT_PRIME: u64 = 101;
const PRIME_ATTEMPTS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleTerm {
    pub family: PlaneFamily,
    pub scale: Rat,
}

/// `Σ scale_i · [family_i]` on the torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicCycle {
    pub n: usize,
    pub d: usize,
    pub terms: Vec<CycleTerm>,
}

impl PeriodicCycle {
    pub fn new(n: usize, d: usize) -> Self {
        PeriodicCycle { n, d, terms: Vec::new() }
    }

    pub fn push(&mut self, family: PlaneFamily, scale: Rat) {
        assert_eq!((family.plane.n, family.plane.d), (self.n, self.d), "family grade");
        self.terms.push(CycleTerm { family, scale });
    }

    /// `Σ scale_i W_i`.
    pub fn class(&self) -> Vec<Rat> {
        let len = self.terms.first().map_or(0, |t| t.family.plane.w.len());
        let mut acc = vec![Rat::zero(); len];
        for t in &self.terms {
            for (a, w) in acc.iter_mut().zip(&t.family.plane.w) {
                *a += &t.scale * Rat::from_integer(w.clone());
            }
        }
        acc
    }

    pub fn chain(&self) -> PeriodicChain {
        let mut c = PolyChain::zero(self.n, self.d);
        for t in &self.terms {
            c.add_scaled(&t.family.fundamental_cell(), &t.scale);
        }
        PeriodicChain::from_chain(&c)
    }

    fn check_offsets(&self) -> Result<(), TorusError> {
        for (i, a) in self.terms.iter().enumerate() {
            for b in &self.terms[i + 1..] {
                if a.family.shares_planes_with(&b.family) {
                    return Err(TorusError::DegenerateOffset(format!(
                        "families {} and {} share a plane",
                        a.family.plane, b.family.plane
                    )));
                }
            }
        }
        Ok(())
    }
}

/// Periodic `(d+1)`-chain `Q` with `∂Q = S`, for a cycle of exact class zero.
///
/// Each family is first translated to `basepoint` by a parallelepiped prism; every
/// lattice basis vector is then split coordinate by coordinate, each split bounded
/// by a half parallelepiped. The coordinate remainders cancel because the class is zero.
pub fn fill_cycle(cycle: &PeriodicCycle, basepoint: &[Rat]) -> Result<PeriodicChain, TorusError> {
    if let Some(x) = cycle.class().iter().find(|x| !x.is_zero()) {
        return Err(TorusError::NonZeroClass(format!("class coordinate {} is not zero", format_rat(x))));
    }
    cycle.check_offsets()?;
    let b: Point = basepoint.to_vec();
    let mut q = PolyChain::zero(cycle.n, cycle.d + 1);
    for t in &cycle.terms {
        let basis = t.family.lattice_basis();
        let shift: Vec<Rat> = t.family.offset.iter().zip(&b).map(|(v, p)| v - p).collect();
        let mut vecs = vec![shift];
        vecs.extend(basis.iter().map(|u| to_rat_vec(u)));
        q.add_scaled(&parallelepiped(&b, &vecs), &t.scale);
        straighten(&b, basis, &t.scale, &mut q);
    }
    Ok(PeriodicChain::from_chain(&q))
}

fn straighten(base: &Point, vecs: Vec<Vec<BigInt>>, s: &Rat, out: &mut PolyChain) {
    for j in 0..vecs.len() {
        let nz: Vec<usize> = (0..vecs[j].len()).filter(|&i| !vecs[j][i].is_zero()).collect();
        if nz.len() < 2 {
            continue;
        }
        let k = *nz.last().expect("nonempty");
        let mut w = vec![BigInt::zero(); vecs[j].len()];
        w[k] = vecs[j][k].clone();
        let a: Vec<BigInt> = vecs[j].iter().zip(&w).map(|(x, y)| x - y).collect();
        let mut expanded: Vec<Vec<Rat>> = vecs.iter().map(|v| to_rat_vec(v)).collect();
        expanded[j] = to_rat_vec(&a);
        expanded.insert(j + 1, to_rat_vec(&w));
        let h = half_parallelepiped(base, &expanded, j, j + 1);
        let coeff = if j % 2 == 0 { -s.clone() } else { s.clone() };
        out.add_scaled(&h, &coeff);
        let mut with_a = vecs.clone();
        with_a[j] = a;
        straighten(base, with_a, s, out);
        let mut with_w = vecs;
        with_w[j] = w;
        straighten(base, with_w, s, out);
        return;
    }
}

/// A measure realised as a periodic cycle together with its filling.
#[derive(Debug, Clone)]
pub struct FilledTorus {
    pub cycle: PeriodicCycle,
    pub basepoint: Point,
    pub prime: u64,
    pub filling: PeriodicChain,
}

impl FilledTorus {
    /// Exact per-period check of `∂Q = S`.
    pub fn verify(&self) -> bool {
        self.filling.boundary().periodic_eq(&self.cycle.chain())
    }
}

/// Places atom `i` (in key order) at `i·g` and the basepoint at `(m+1)·g`, where
/// `g = (1/p, …, 1/p^n)`; moves to the next prime until offsets are distinct and the
/// filling is transverse to `domain`.
pub fn fill_measure(mu: &GrassmannMeasure, prime: u64, domain: &Polytope) -> Result<FilledTorus, TorusError> {
    let mut p = prime;
    let mut last = TorusError::DegenerateOffset("no offsets tried".into());
    for _ in 0..PRIME_ATTEMPTS {
        let mut cycle = PeriodicCycle::new(mu.n, mu.d);
        for (i, atom) in mu.atoms().enumerate() {
            cycle.push(PlaneFamily::new(atom.plane.clone(), generic_offset(mu.n, p, i + 1)), atom.scale.clone());
        }
        let basepoint = generic_offset(mu.n, p, mu.len() + 1);
        let attempt = fill_cycle(&cycle, &basepoint).and_then(|q| {
            let (lo, hi) = domain.bbox().ok_or_else(|| TorusError::Transversality("empty domain".into()))?;
            check_transverse(&lift_into(q.representatives(), &AxisBox::new(lo, hi)), domain)?;
            Ok(q)
        });
        match attempt {
            Ok(filling) => return Ok(FilledTorus { cycle, basepoint, prime: p, filling }),
            Err(e @ (TorusError::DegenerateOffset(_) | TorusError::Transversality(_))) => last = e,
            Err(e) => return Err(e),
        }
        p = next_prime(p);
    }
    Err(TorusError::DegenerateOffset(format!("no generic offsets found up to prime {p}: {last}")))
}
