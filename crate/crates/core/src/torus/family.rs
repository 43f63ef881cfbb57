use num_bigint::BigInt;
use num_traits::One;

use super::periodic::{lift_into, AxisBox, PeriodicChain};
use crate::chains::{permutation_sign, PolyChain, Point};
use crate::grassmann::RationalPlane;
use crate::rational::Rat;

/// `{x : kernel·(x − offset) ∈ Z^{n−d}}`, one `Z^n`-orbit of planes parallel to `plane`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlaneFamily {
    pub plane: RationalPlane,
    pub offset: Point,
}

impl PlaneFamily {
    pub fn new(plane: RationalPlane, offset: Point) -> Self {
        assert_eq!(plane.n, offset.len(), "offset dimension");
        PlaneFamily { plane, offset }
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        let diff: Vec<Rat> = x.iter().zip(&self.offset).map(|(a, b)| a - b).collect();
        self.plane.kernel_apply(&diff).iter().all(|v| v.is_integer())
    }

    /// True when both families consist of the same unoriented planes.
    pub fn shares_planes_with(&self, other: &PlaneFamily) -> bool {
        self.plane.key().unoriented() == other.plane.key().unoriented() && self.contains(&other.offset)
    }

    pub fn lattice_basis(&self) -> Vec<Vec<BigInt>> {
        (0..self.plane.d).map(|j| self.plane.basis.iter().map(|row| row[j].clone()).collect()).collect()
    }

    /// One period: the lattice parallelepiped at the offset.
    pub fn fundamental_cell(&self) -> PolyChain {
        let vecs: Vec<Vec<Rat>> = (0..self.plane.d).map(|j| self.plane.basis_vector(j)).collect();
        parallelepiped(&self.offset, &vecs)
    }

    pub fn periodic(&self) -> PeriodicChain {
        PeriodicChain::from_chain(&self.fundamental_cell())
    }
}

/// All planes of the family meeting `bx`, clipped to it, with coefficient one.
pub fn subtorus_chain(plane: &RationalPlane, offset: &[Rat], bx: &AxisBox) -> PolyChain {
    let family = PlaneFamily::new(plane.clone(), offset.to_vec());
    lift_into(&family.fundamental_cell(), bx).restrict(&bx.polytope()).refined()
}

/// Permutations of `0..k` in lexicographic order with their signs.
pub(crate) fn signed_permutations(k: usize) -> Vec<(Vec<usize>, i32)> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..k).collect();
    loop {
        out.push((p.clone(), permutation_sign(&p)));
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) else {
            return out;
        };
        let j = (i + 1..k).rev().find(|&j| p[j] > p[i]).expect("successor exists");
        p.swap(i, j);
        p[i + 1..].reverse();
    }
}

fn kuhn_simplex(base: &[Rat], vecs: &[Vec<Rat>], order: &[usize]) -> Vec<Point> {
    let mut cur = base.to_vec();
    let mut verts = vec![cur.clone()];
    for &i in order {
        for (c, v) in cur.iter_mut().zip(&vecs[i]) {
            *c += v;
        }
        verts.push(cur.clone());
    }
    verts
}

/// `base + [0,1]^k · vecs`, Kuhn-triangulated and oriented by `vecs[0] ∧ … ∧ vecs[k-1]`.
pub fn parallelepiped(base: &[Rat], vecs: &[Vec<Rat>]) -> PolyChain {
    let mut out = PolyChain::zero(base.len(), vecs.len());
    for (perm, sign) in signed_permutations(vecs.len()) {
        out.add_oriented(kuhn_simplex(base, vecs, &perm), Rat::from_integer(sign.into()));
    }
    out
}

/// The part of `parallelepiped(base, vecs)` where the `first` parameter dominates the `second`.
pub fn half_parallelepiped(base: &[Rat], vecs: &[Vec<Rat>], first: usize, second: usize) -> PolyChain {
    let mut out = PolyChain::zero(base.len(), vecs.len());
    for (perm, sign) in signed_permutations(vecs.len()) {
        let pf = perm.iter().position(|&i| i == first).expect("index in range");
        let ps = perm.iter().position(|&i| i == second).expect("index in range");
        if pf < ps {
            out.add_oriented(kuhn_simplex(base, vecs, &perm), Rat::from_integer(sign.into()));
        }
    }
    out
}

/// `i · (1/p, 1/p², …, 1/p^n)`.
pub fn generic_offset(n: usize, prime: u64, i: usize) -> Point {
    let p = BigInt::from(prime);
    let mut den = BigInt::one();
    (0..n)
        .map(|_| {
            den = &den * &p;
            Rat::new(BigInt::from(i), den.clone())
        })
        .collect()
}

pub(crate) fn next_prime(p: u64) -> u64 {
    let is_prime = |q: u64| q >= 2 && (2..).take_while(|f| f * f <= q).all(|f| q % f != 0);
    (p + 1..).find(|&q| is_prime(q)).expect("primes are unbounded")
}

pub(crate) fn to_rat_vec(v: &[BigInt]) -> Vec<Rat> {
    v.iter().map(|x| Rat::from_integer(x.clone())).collect()
}
