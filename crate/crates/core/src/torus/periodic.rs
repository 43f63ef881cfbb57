use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::chains::{ChainJson, PolyChain, Point, Polytope};
use crate::rational::{floor, Rat};

/// Closed axis-parallel box `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisBox {
    pub lo: Point,
    pub hi: Point,
}

impl AxisBox {
    pub fn new(lo: Point, hi: Point) -> Self {
        assert_eq!(lo.len(), hi.len(), "box corners");
        AxisBox { lo, hi }
    }

    pub fn unit(n: usize) -> Self {
        AxisBox { lo: vec![Rat::zero(); n], hi: vec![Rat::one(); n] }
    }

    /// `[0, k]^n`.
    pub fn cube(n: usize, k: &Rat) -> Self {
        AxisBox { lo: vec![Rat::zero(); n], hi: vec![k.clone(); n] }
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn translated(&self, t: &[Rat]) -> Self {
        AxisBox {
            lo: self.lo.iter().zip(t).map(|(a, b)| a + b).collect(),
            hi: self.hi.iter().zip(t).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn polytope(&self) -> Polytope {
        Polytope::axis_box(&self.lo, &self.hi)
    }
}

fn ceil(r: &Rat) -> BigInt {
    -floor(&-r)
}

/// Every integer translate of every cell of `rep` whose bounding box meets `bx`.
pub fn lift_into(rep: &PolyChain, bx: &AxisBox) -> PolyChain {
    let n = rep.n;
    let mut out = PolyChain::zero(n, rep.d);
    for (v, c) in rep.cells() {
        let mut lo = v[0].clone();
        let mut hi = v[0].clone();
        for p in v {
            for i in 0..n {
                if p[i] < lo[i] {
                    lo[i] = p[i].clone();
                }
                if p[i] > hi[i] {
                    hi[i] = p[i].clone();
                }
            }
        }
        let ranges: Vec<(BigInt, BigInt)> =
            (0..n).map(|i| (ceil(&(&bx.lo[i] - &hi[i])), floor(&(&bx.hi[i] - &lo[i])))).collect();
        if ranges.iter().any(|(a, b)| a > b) {
            continue;
        }
        let mut z: Vec<BigInt> = ranges.iter().map(|r| r.0.clone()).collect();
        'odometer: loop {
            let shift: Vec<Rat> = z.iter().map(|x| Rat::from_integer(x.clone())).collect();
            let moved: Vec<Point> =
                v.iter().map(|p| p.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
            out.add_sorted(moved, c.clone());
            for i in 0..n {
                z[i] += 1;
                if z[i] <= ranges[i].1 {
                    continue 'odometer;
                }
                z[i] = ranges[i].0.clone();
            }
            break;
        }
    }
    out
}

/// A `Z^n`-periodic chain stored as one representative per orbit of cells.
///
/// Each representative has its lexicographically smallest vertex in `[0,1)^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodicChain {
    cells: PolyChain,
}

impl PeriodicChain {
    pub fn zero(n: usize, d: usize) -> Self {
        PeriodicChain { cells: PolyChain::zero(n, d) }
    }

    /// Periodization of a finite chain.
    pub fn from_chain(c: &PolyChain) -> Self {
        let mut out = PolyChain::zero(c.n, c.d);
        for (v, coeff) in c.cells() {
            let shift: Vec<Rat> = v[0].iter().map(|x| -Rat::from_integer(floor(x))).collect();
            let moved: Vec<Point> = v.iter().map(|p| p.iter().zip(&shift).map(|(a, b)| a + b).collect()).collect();
            out.add_sorted(moved, coeff.clone());
        }
        PeriodicChain { cells: out }
    }

    pub fn n(&self) -> usize {
        self.cells.n
    }

    pub fn d(&self) -> usize {
        self.cells.d
    }

    pub fn representatives(&self) -> &PolyChain {
        &self.cells
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn boundary(&self) -> PeriodicChain {
        PeriodicChain::from_chain(&self.cells.boundary())
    }

    pub fn plus(&self, other: &PeriodicChain) -> PeriodicChain {
        PeriodicChain { cells: self.cells.plus(&other.cells) }
    }

    pub fn minus(&self, other: &PeriodicChain) -> PeriodicChain {
        PeriodicChain { cells: self.cells.minus(&other.cells) }
    }

    pub fn scaled(&self, s: &Rat) -> PeriodicChain {
        PeriodicChain { cells: self.cells.scaled(s) }
    }

    /// The lift restricted to a box, refined.
    pub fn over_box(&self, bx: &AxisBox) -> PolyChain {
        lift_into(&self.cells, bx).restrict(&bx.polytope()).refined()
    }

    /// Equality of the implicit periodic chains, decided on one closed period.
    pub fn periodic_eq(&self, other: &PeriodicChain) -> bool {
        self.minus(other).over_box(&AxisBox::unit(self.n())).is_empty()
    }

    pub fn to_json(&self) -> ChainJson {
        self.cells.to_json(true)
    }
}
