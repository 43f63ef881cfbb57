use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use super::chain::PolyChain;
use super::simplex::orientation_sign;
use super::Point;
use crate::linalg::{inverse, rank, solve, transpose, RatMatrix};
use crate::rational::Rat;

/// `a · x <= b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfSpace {
    pub a: Vec<Rat>,
    pub b: Rat,
}

impl HalfSpace {
    pub fn slack(&self, x: &[Rat]) -> Rat {
        let ax: Rat = self.a.iter().zip(x).map(|(p, q)| p * q).sum();
        ax - &self.b
    }

    pub fn flipped(&self) -> HalfSpace {
        HalfSpace { a: self.a.iter().map(|x| -x).collect(), b: -self.b.clone() }
    }
}

/// Convex polytope in H-representation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope {
    pub n: usize,
    pub halfspaces: Vec<HalfSpace>,
}

impl Polytope {
    pub fn new(n: usize, halfspaces: Vec<HalfSpace>) -> Self {
        Polytope { n, halfspaces }
    }

    pub fn axis_box(lo: &[Rat], hi: &[Rat]) -> Self {
        let n = lo.len();
        let mut hs = Vec::with_capacity(2 * n);
        for i in 0..n {
            let mut a = vec![Rat::zero(); n];
            a[i] = -Rat::one();
            hs.push(HalfSpace { a: a.clone(), b: -lo[i].clone() });
            a[i] = Rat::one();
            hs.push(HalfSpace { a, b: hi[i].clone() });
        }
        Polytope { n, halfspaces: hs }
    }

    pub fn unit_cube(n: usize) -> Self {
        Self::axis_box(&vec![Rat::zero(); n], &vec![Rat::one(); n])
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.halfspaces.iter().all(|h| !h.slack(x).is_positive())
    }

    pub fn translated(&self, t: &[Rat]) -> Self {
        Polytope {
            n: self.n,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| {
                    let at: Rat = h.a.iter().zip(t).map(|(p, q)| p * q).sum();
                    HalfSpace { a: h.a.clone(), b: &h.b + at }
                })
                .collect(),
        }
    }

    /// Image under an invertible linear map `x ↦ A x`.
    pub fn linear_image(&self, a: &RatMatrix) -> Self {
        let inv = inverse(a).expect("invertible map");
        let inv_t = transpose(&inv);
        Polytope {
            n: self.n,
            halfspaces: self
                .halfspaces
                .iter()
                .map(|h| HalfSpace {
                    a: (0..self.n).map(|i| inv_t[i].iter().zip(&h.a).map(|(p, q)| p * q).sum()).collect(),
                    b: h.b.clone(),
                })
                .collect(),
        }
    }

    pub fn vertices(&self) -> Vec<Point> {
        enumerate_vertices(self.n, &self.halfspaces).0
    }

    pub fn bbox(&self) -> Option<(Point, Point)> {
        let v = self.vertices();
        let first = v.first()?;
        let mut lo = first.clone();
        let mut hi = first.clone();
        for p in &v {
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

    /// Positively oriented triangulation of a bounded full-dimensional polytope.
    pub fn to_chain(&self) -> PolyChain {
        let (pts, incid) = enumerate_vertices(self.n, &self.halfspaces);
        let mut out = PolyChain::zero(self.n, self.n);
        if pts.len() <= self.n {
            return out;
        }
        for simplex in pulling_triangulation(&pts, &incid, self.n) {
            let mut verts: Vec<Point> = simplex.iter().map(|&i| pts[i].clone()).collect();
            match orientation_sign(&verts) {
                0 => continue,
                s if s < 0 => verts.swap(0, 1),
                _ => {}
            }
            out.add_oriented(verts, Rat::one());
        }
        out
    }

    pub fn boundary_chain(&self) -> PolyChain {
        self.to_chain().boundary()
    }
}

/// Vertices of `{x : cons}` in `R^k`, lexicographically sorted, with their tight constraints.
pub(crate) fn enumerate_vertices(k: usize, cons: &[HalfSpace]) -> (Vec<Point>, Vec<BTreeSet<usize>>) {
    let mut found: BTreeMap<Point, ()> = BTreeMap::new();
    let m = cons.len();
    if k == 0 {
        return (vec![Vec::new()], vec![BTreeSet::new()]);
    }
    let mut subset: Vec<usize> = (0..k).collect();
    if m >= k {
        loop {
            let a: RatMatrix = subset.iter().map(|&i| cons[i].a.clone()).collect();
            let b: Vec<Rat> = subset.iter().map(|&i| cons[i].b.clone()).collect();
            if let Some(x) = solve(&a, &b) {
                if cons.iter().all(|h| !h.slack(&x).is_positive()) {
                    found.insert(x, ());
                }
            }
            if !next_combination(&mut subset, m) {
                break;
            }
        }
    }
    let pts: Vec<Point> = found.into_keys().collect();
    let incid = pts
        .iter()
        .map(|x| (0..m).filter(|&i| cons[i].slack(x).is_zero()).collect())
        .collect();
    (pts, incid)
}

pub(crate) fn next_combination(c: &mut [usize], m: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < m - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

fn affine_rank(pts: &[Point], face: &[usize]) -> usize {
    if face.len() <= 1 {
        return 0;
    }
    let base = &pts[face[0]];
    let rows: RatMatrix = face[1..]
        .iter()
        .map(|&i| pts[i].iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    rank(&rows)
}

/// Pulling triangulation from the smallest vertex, recursively over facets.
/// Depends only on the vertex order and the face lattice, not on redundant constraints.
pub(crate) fn pulling_triangulation(pts: &[Point], incid: &[BTreeSet<usize>], dim: usize) -> Vec<Vec<usize>> {
    let face: Vec<usize> = (0..pts.len()).collect();
    let mut out = Vec::new();
    triangulate_face(pts, incid, &face, dim, &mut Vec::new(), &mut out);
    out
}

fn triangulate_face(
    pts: &[Point],
    incid: &[BTreeSet<usize>],
    face: &[usize],
    dim: usize,
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if dim == 0 {
        let mut s = prefix.clone();
        s.push(face[0]);
        out.push(s);
        return;
    }
    if dim == 1 {
        debug_assert_eq!(face.len(), 2);
        let mut s = prefix.clone();
        s.push(face[0]);
        s.push(face[1]);
        out.push(s);
        return;
    }
    let apex = face[0];
    let mut constraints: BTreeSet<usize> = BTreeSet::new();
    for &v in face {
        constraints.extend(incid[v].iter().copied());
    }
    let mut facets: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in constraints {
        let sub: Vec<usize> = face.iter().copied().filter(|&v| incid[v].contains(&c)).collect();
        if sub.len() < dim || sub.len() == face.len() || sub.contains(&apex) {
            continue;
        }
        if affine_rank(pts, &sub) == dim - 1 {
            facets.insert(sub);
        }
    }
    prefix.push(apex);
    for f in facets {
        triangulate_face(pts, incid, &f, dim - 1, prefix, out);
    }
    prefix.pop();
}

/// Clips one oriented simplex by a polytope; pieces inherit the simplex orientation.
pub(crate) fn clip_simplex(vertices: &[Point], poly: &Polytope, coeff: &Rat, out: &mut PolyChain) {
    let d = vertices.len() - 1;
    let mut cutting: Vec<(usize, Vec<Rat>)> = Vec::new();
    for (hi, h) in poly.halfspaces.iter().enumerate() {
        let s: Vec<Rat> = vertices.iter().map(|v| h.slack(v)).collect();
        let any_pos = s.iter().any(Signed::is_positive);
        let any_neg = s.iter().any(Signed::is_negative);
        if !any_pos {
            continue;
        }
        if !any_neg {
            return;
        }
        cutting.push((hi, s));
    }
    if cutting.is_empty() {
        out.add_oriented(vertices.to_vec(), coeff.clone());
        return;
    }
    if d == 0 {
        return;
    }
    if d == 1 {
        // parametrize v0 + t (v1 - v0); each cut bounds t on one side
        let mut lo = Rat::zero();
        let mut hi = Rat::one();
        for (_, s) in &cutting {
            let slope = &s[1] - &s[0];
            let t = -&s[0] / &slope;
            if slope.is_positive() {
                if t < hi {
                    hi = t;
                }
            } else if t > lo {
                lo = t;
            }
        }
        if lo < hi {
            let pt = |t: &Rat| -> Point { vertices[0].iter().zip(&vertices[1]).map(|(a, b)| a + t * (b - a)).collect() };
            out.add_oriented(vec![pt(&lo), pt(&hi)], coeff.clone());
        }
        return;
    }
    // local coordinates mu in R^d: x = v0 + Σ mu_i (v_i - v0)
    let mut cons: Vec<HalfSpace> = Vec::with_capacity(d + 1 + cutting.len());
    for i in 0..d {
        let mut a = vec![Rat::zero(); d];
        a[i] = -Rat::one();
        cons.push(HalfSpace { a, b: Rat::zero() });
    }
    cons.push(HalfSpace { a: vec![Rat::one(); d], b: Rat::one() });
    for (_, s) in &cutting {
        cons.push(HalfSpace { a: (1..=d).map(|i| &s[i] - &s[0]).collect(), b: -s[0].clone() });
    }
    let (pts, incid) = enumerate_vertices(d, &cons);
    if pts.len() <= d {
        return;
    }
    for simplex in pulling_triangulation(&pts, &incid, d) {
        let mut local: Vec<Point> = simplex.iter().map(|&i| pts[i].clone()).collect();
        match orientation_sign(&local) {
            0 => continue,
            s if s < 0 => local.swap(0, 1),
            _ => {}
        }
        let global: Vec<Point> = local
            .iter()
            .map(|mu| {
                (0..vertices[0].len())
                    .map(|j| {
                        let mut x = vertices[0][j].clone();
                        for (i, m) in mu.iter().enumerate() {
                            if !m.is_zero() {
                                x += m * (&vertices[i + 1][j] - &vertices[0][j]);
                            }
                        }
                        x
                    })
                    .collect()
            })
            .collect();
        out.add_oriented(global, coeff.clone());
    }
}

impl PolyChain {
    /// `T ⌞ U` by exact clipping.
    pub fn restrict(&self, poly: &Polytope) -> PolyChain {
        let mut out = PolyChain::zero(self.n, self.d);
        for (v, c) in self.cells() {
            clip_simplex(v, poly, c, &mut out);
        }
        out
    }
}
