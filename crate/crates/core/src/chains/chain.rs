use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::simplex::{simplex_volume, sort_with_sign, OrientedSimplex};
use super::{ChainError, Point};
use crate::grassmann::{FloatMeasure, PlaneKey};
use crate::linalg::{det, RatMatrix};
use crate::rational::{format_rat, parse_rat, to_f64, Rat};

/// Finite rational combination of oriented simplices.
///
/// Cells are stored with lexicographically sorted vertices; the parity of the
/// sort is folded into the coefficient, so syntactically equal simplices merge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyChain {
    pub n: usize,
    pub d: usize,
    cells: BTreeMap<Vec<Point>, Rat>,
}

impl PolyChain {
    pub fn zero(n: usize, d: usize) -> Self {
        PolyChain { n, d, cells: BTreeMap::new() }
    }

    pub fn from_simplex(s: &OrientedSimplex, coeff: Rat) -> Self {
        let mut c = PolyChain::zero(s.ambient(), s.dim());
        c.add_oriented(s.vertices.clone(), coeff);
        c
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Adds `coeff · [v_0, …, v_d]`, dropping degenerate simplices.
    pub fn add_oriented(&mut self, vertices: Vec<Point>, coeff: Rat) {
        debug_assert_eq!(vertices.len(), self.d + 1);
        if coeff.is_zero() {
            return;
        }
        let (sorted, sign) = sort_with_sign(vertices);
        if self.d > 0 && simplex_is_degenerate(&sorted) {
            return;
        }
        let c = if sign > 0 { coeff } else { -coeff };
        self.add_sorted(sorted, c);
    }

    /// Caller guarantees sorted, nondegenerate vertices.
    pub(crate) fn add_sorted(&mut self, sorted: Vec<Point>, coeff: Rat) {
        use std::collections::btree_map::Entry;
        match self.cells.entry(sorted) {
            Entry::Vacant(e) => {
                if !coeff.is_zero() {
                    e.insert(coeff);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn cells(&self) -> impl Iterator<Item = (&Vec<Point>, &Rat)> {
        self.cells.iter()
    }

    pub fn simplices(&self) -> impl Iterator<Item = (OrientedSimplex, &Rat)> {
        self.cells.iter().map(|(v, c)| (OrientedSimplex { vertices: v.clone() }, c))
    }

    pub fn add_chain(&mut self, other: &PolyChain) {
        self.add_scaled(other, &Rat::one());
    }

    pub fn add_scaled(&mut self, other: &PolyChain, s: &Rat) {
        assert_eq!((self.n, self.d), (other.n, other.d), "chains of different shape");
        for (v, c) in &other.cells {
            self.add_sorted(v.clone(), c * s);
        }
    }

    pub fn plus(&self, other: &PolyChain) -> PolyChain {
        let mut out = self.clone();
        out.add_chain(other);
        out
    }

    pub fn minus(&self, other: &PolyChain) -> PolyChain {
        let mut out = self.clone();
        out.add_scaled(other, &-Rat::one());
        out
    }

    pub fn scaled(&self, s: &Rat) -> PolyChain {
        if s.is_zero() {
            return PolyChain::zero(self.n, self.d);
        }
        PolyChain { n: self.n, d: self.d, cells: self.cells.iter().map(|(v, c)| (v.clone(), c * s)).collect() }
    }

    pub fn negated(&self) -> PolyChain {
        self.scaled(&-Rat::one())
    }

    pub fn boundary(&self) -> PolyChain {
        assert!(self.d >= 1, "boundary of a 0-chain");
        let mut out = PolyChain::zero(self.n, self.d - 1);
        for (v, c) in &self.cells {
            for i in 0..v.len() {
                let face: Vec<Point> = v.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
                let coeff = if i % 2 == 0 { c.clone() } else { -c.clone() };
                out.add_sorted(face, coeff);
            }
        }
        out
    }

    pub fn mass(&self) -> f64 {
        self.cells.iter().map(|(v, c)| to_f64(&c.abs()) * simplex_volume(v)).sum()
    }

    /// Pushforward of the mass measure under the oriented tangent-plane map.
    pub fn gaussian_image(&self) -> FloatMeasure {
        let mut m = FloatMeasure::new(self.n, self.d);
        for (v, c) in &self.cells {
            let s = OrientedSimplex { vertices: v.clone() };
            let key = s.plane_key().expect("grade at least one");
            let key = if c.is_negative() { key.reversed() } else { key };
            m.add(key, to_f64(&c.abs()) * simplex_volume(v));
        }
        m
    }

    /// Sum of signed coefficients (the degree of a 0-chain).
    pub fn total_coefficient(&self) -> Rat {
        self.cells.values().sum()
    }

    pub fn translated(&self, t: &[Rat]) -> PolyChain {
        // lexicographic order is translation invariant
        PolyChain {
            n: self.n,
            d: self.d,
            cells: self
                .cells
                .iter()
                .map(|(v, c)| (v.iter().map(|p| p.iter().zip(t).map(|(a, b)| a + b).collect()).collect(), c.clone()))
                .collect(),
        }
    }

    /// Homothety `x ↦ s·x` for `s > 0`.
    pub fn dilated(&self, s: &Rat) -> PolyChain {
        assert!(s.is_positive(), "dilation factor must be positive");
        PolyChain {
            n: self.n,
            d: self.d,
            cells: self
                .cells
                .iter()
                .map(|(v, c)| (v.iter().map(|p| p.iter().map(|a| a * s).collect()).collect(), c.clone()))
                .collect(),
        }
    }

    /// `x ↦ A x + b` with `A` invertible.
    pub fn pushforward_affine(&self, a: &RatMatrix, b: &[Rat]) -> Result<PolyChain, ChainError> {
        if a.len() != self.n || a.iter().any(|r| r.len() != self.n) || b.len() != self.n {
            return Err(ChainError::DimensionMismatch("affine map shape".into()));
        }
        if det(a).is_zero() {
            return Err(ChainError::SingularMap);
        }
        let mut out = PolyChain::zero(self.n, self.d);
        for (v, c) in &self.cells {
            let img: Vec<Point> = v
                .iter()
                .map(|p| (0..self.n).map(|i| a[i].iter().zip(p).map(|(x, y)| x * y).sum::<Rat>() + &b[i]).collect())
                .collect();
            out.add_oriented(img, c.clone());
        }
        Ok(out)
    }

    pub fn bbox(&self) -> Option<(Point, Point)> {
        let mut it = self.cells.keys().flatten();
        let first = it.next()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for p in it {
            for i in 0..self.n {
                if p[i] < lo[i] {
                    lo[i] = p[i].clone();
                }
                if p[i] > hi[i] {
                    hi[i] = p[i].clone();
                }
            }
        }
        Some((lo, hi))
    }

    pub fn max_abs_coefficient(&self) -> Rat {
        self.cells.values().map(|c| c.abs()).max().unwrap_or_else(Rat::zero)
    }

    pub fn retain(&mut self, mut keep: impl FnMut(&[Point], &Rat) -> bool) {
        self.cells.retain(|v, c| keep(v, c));
    }

    pub fn filtered(&self, mut keep: impl FnMut(&[Point], &Rat) -> bool) -> PolyChain {
        let mut out = self.clone();
        out.cells.retain(|v, c| keep(v, c));
        out
    }

    pub fn to_json(&self, periodic: bool) -> ChainJson {
        ChainJson {
            n: self.n,
            d: self.d,
            periodic: periodic.then_some(true),
            cells: self
                .cells
                .iter()
                .map(|(v, c)| CellJson {
                    vertices: v.iter().map(|p| p.iter().map(format_rat).collect()).collect(),
                    coeff: format_rat(c),
                })
                .collect(),
        }
    }

    pub fn from_json_str(s: &str) -> Result<(PolyChain, bool), ChainError> {
        let j: ChainJson = serde_json::from_str(s).map_err(|e| ChainError::Parse(e.to_string()))?;
        j.to_chain()
    }
}

fn simplex_is_degenerate(sorted: &[Point]) -> bool {
    !OrientedSimplex { vertices: sorted.to_vec() }.is_nondegenerate()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellJson {
    pub vertices: Vec<Vec<String>>,
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ChainJson {
    pub n: usize,
    pub d: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periodic: Option<bool>,
    pub cells: Vec<CellJson>,
}

impl ChainJson {
    pub fn to_chain(&self) -> Result<(PolyChain, bool), ChainError> {
        let mut c = PolyChain::zero(self.n, self.d);
        for (i, cell) in self.cells.iter().enumerate() {
            if cell.vertices.len() != self.d + 1 || cell.vertices.iter().any(|p| p.len() != self.n) {
                return Err(ChainError::DimensionMismatch(format!("cell {i} has the wrong shape")));
            }
            let verts: Result<Vec<Point>, _> = cell
                .vertices
                .iter()
                .map(|p| p.iter().map(|x| parse_rat(x)).collect::<Result<Point, _>>())
                .collect();
            let verts = verts.map_err(|e| ChainError::Parse(e.to_string()))?;
            let s = OrientedSimplex::new(verts)?;
            let coeff = parse_rat(&cell.coeff).map_err(|e| ChainError::Parse(e.to_string()))?;
            c.add_oriented(s.vertices, coeff);
        }
        Ok((c, self.periodic.unwrap_or(false)))
    }
}

/// Oriented unit-normalized key of a cell's tangent plane, if the cell is positive.
pub fn cell_key(vertices: &[Point], coeff: &Rat) -> PlaneKey {
    let k = OrientedSimplex { vertices: vertices.to_vec() }.plane_key().expect("positive grade");
    if coeff.is_negative() {
        k.reversed()
    } else {
        k
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn p(c: &[i64]) -> Point {
        c.iter().map(|&x| int(x)).collect()
    }

    fn unit_square() -> PolyChain {
        let mut c = PolyChain::zero(2, 2);
        c.add_oriented(vec![p(&[0, 0]), p(&[1, 0]), p(&[1, 1])], int(1));
        c.add_oriented(vec![p(&[0, 0]), p(&[1, 1]), p(&[0, 1])], int(1));
        c
    }

    #[test]
    fn square_boundary_is_four_edges() {
        let b = unit_square().boundary();
        assert_eq!(b.len(), 4);
        assert!(b.boundary().is_empty());
        let mut expected = PolyChain::zero(2, 1);
        for (a, c) in [([0, 0], [1, 0]), ([1, 0], [1, 1]), ([1, 1], [0, 1]), ([0, 1], [0, 0])] {
            expected.add_oriented(vec![p(&a), p(&c)], int(1));
        }
        assert_eq!(b, expected);
    }

    #[test]
    fn cancellation() {
        let s = unit_square();
        assert!(s.plus(&s.negated()).is_empty());
        assert!(s.plus(&s.negated()).boundary().is_empty());
    }

    #[test]
    fn masses() {
        let mut seg = PolyChain::zero(2, 1);
        seg.add_oriented(vec![p(&[0, 0]), p(&[1, 0])], int(1));
        assert!((seg.mass() - 1.0).abs() < 1e-15);
        let mut diag = PolyChain::zero(2, 1);
        diag.add_oriented(vec![p(&[0, 0]), p(&[1, 1])], int(2));
        assert!((diag.mass() - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(PolyChain::zero(2, 1).mass(), 0.0);
    }

    #[test]
    fn gaussian_image_orientation() {
        let g = unit_square().gaussian_image();
        assert_eq!(g.atoms.len(), 1);
        assert!((g.mass_of(&PlaneKey::coordinate(2, 2)) - 1.0).abs() < 1e-15);
        let neg = unit_square().negated().gaussian_image();
        assert!((neg.mass_of(&PlaneKey::coordinate(2, 2).reversed()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn reversed_vertices_flip_sign() {
        let mut a = PolyChain::zero(2, 1);
        a.add_oriented(vec![p(&[1, 0]), p(&[0, 0])], int(1));
        let mut b = PolyChain::zero(2, 1);
        b.add_oriented(vec![p(&[0, 0]), p(&[1, 0])], int(-1));
        assert_eq!(a, b);
    }

    #[test]
    fn pushforward_shear_and_scaling() {
        let mut seg = PolyChain::zero(2, 1);
        seg.add_oriented(vec![p(&[0, 0]), p(&[0, 1])], int(1));
        let k = vec![vec![int(1), int(1)], vec![int(0), int(1)]];
        let img = seg.pushforward_affine(&k, &[int(0), int(0)]).unwrap();
        let key = img.gaussian_image().atoms.keys().next().unwrap().clone();
        assert_eq!(key, PlaneKey::from_ints(2, 1, &[1, 1]));
        let half = unit_square().dilated(&rat(1, 2));
        assert!((half.mass() - 0.25).abs() < 1e-15);
        let singular = vec![vec![int(1), int(1)], vec![int(1), int(1)]];
        assert_eq!(seg.pushforward_affine(&singular, &[int(0), int(0)]), Err(ChainError::SingularMap));
    }

    #[test]
    fn json_round_trip() {
        let s = unit_square();
        let text = serde_json::to_string(&s.to_json(false)).unwrap();
        let (back, periodic) = PolyChain::from_json_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(!periodic);
    }
}
