//! Geometric normal forms: chains that agree as currents refine to the same cells.
//!
//! Segments are merged into maximal collinear pieces by a sweep. Higher cells are
//! grouped by affine plane and overlaid so that every emitted piece carries the exact
//! density of the chain there; zero-density pieces are dropped, so `refined(A - B)` is
//! empty exactly when `A` and `B` agree as currents.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::chain::PolyChain;
use super::polytope::{enumerate_vertices, pulling_triangulation, HalfSpace};
use super::simplex::{edge_matrix, orientation_sign};
use super::Point;
use crate::grassmann::{PlaneKey, RationalPlane};
use crate::linalg::{inverse, nullspace, RatMatrix};
use crate::rational::{primitive_integer_direction, Rat};

impl PolyChain {
    pub fn refined(&self) -> PolyChain {
        match self.d {
            0 => self.clone(),
            1 => refine_segments(self),
            _ => refine_cells(self),
        }
    }

    /// Equality as currents.
    pub fn geometric_eq(&self, other: &PolyChain) -> bool {
        self.minus(other).refined().is_empty()
    }
}

fn refine_segments(c: &PolyChain) -> PolyChain {
    // key: primitive direction and the point of the line where the pivot coordinate vanishes
    let mut lines: BTreeMap<(Vec<BigInt>, Point), (usize, Vec<Rat>, Vec<(Rat, Rat)>)> = BTreeMap::new();
    for (v, coeff) in c.cells() {
        let (a, b) = (&v[0], &v[1]);
        let diff: Vec<Rat> = a.iter().zip(b).map(|(x, y)| y - x).collect();
        let prim = primitive_integer_direction(&diff);
        let k = prim.iter().position(|x| !x.is_zero()).expect("nondegenerate segment");
        let step: Vec<Rat> = prim.iter().map(|x| Rat::from_integer(x.clone()) / Rat::from_integer(prim[k].clone())).collect();
        let anchor: Point = a.iter().zip(&step).map(|(x, s)| x - &a[k] * s).collect();
        let entry = lines.entry((prim, anchor)).or_insert_with(|| (k, step, Vec::new()));
        entry.2.push((a[k].clone(), coeff.clone()));
        entry.2.push((b[k].clone(), -coeff.clone()));
    }
    let mut out = PolyChain::zero(c.n, 1);
    for ((_, anchor), (_, step, mut events)) in lines {
        events.sort_by(|x, y| x.0.cmp(&y.0));
        let at = |t: &Rat| -> Point { anchor.iter().zip(&step).map(|(p, s)| p + t * s).collect() };
        let mut level = Rat::zero();
        let mut run: Option<(Rat, Rat)> = None;
        let mut i = 0;
        while i < events.len() {
            let t = events[i].0.clone();
            let mut next = level.clone();
            while i < events.len() && events[i].0 == t {
                next += &events[i].1;
                i += 1;
            }
            if next != level {
                if let Some((start, m)) = run.take() {
                    out.add_sorted(vec![at(&start), at(&t)], m);
                }
                if !next.is_zero() {
                    run = Some((t.clone(), next.clone()));
                }
                level = next;
            }
        }
    }
    out
}

struct Group {
    proj: Vec<usize>,
    cells: Vec<(Vec<Point>, Rat)>,
    lift_base: Point,
    lift: RatMatrix,
}

fn refine_cells(c: &PolyChain) -> PolyChain {
    let (n, d) = (c.n, c.d);
    let mut planes: HashMap<PlaneKey, RationalPlane> = HashMap::new();
    let mut groups: BTreeMap<(PlaneKey, Vec<Rat>), Group> = BTreeMap::new();
    for (v, coeff) in c.cells() {
        let s = super::simplex::OrientedSimplex { vertices: v.clone() };
        let key = s.plane_key().expect("positive grade").unoriented();
        let plane = planes.entry(key.clone()).or_insert_with(|| key.to_plane().expect("cell plane is simple"));
        let offset = plane.kernel_apply(&v[0]);
        let group = groups.entry((key.clone(), offset)).or_insert_with(|| {
            let idx = crate::grassmann::multi_indices(n, d);
            let pos = key.w.iter().position(|x| !x.is_zero()).expect("nonzero key");
            let proj = idx[pos].clone();
            let e = edge_matrix(v);
            let a_i: RatMatrix = proj.iter().map(|&i| e[i].clone()).collect();
            let inv = inverse(&a_i).expect("projection is injective on the plane");
            let lift: RatMatrix = (0..n)
                .map(|r| (0..d).map(|col| (0..d).map(|k| &e[r][k] * &inv[k][col]).sum()).collect())
                .collect();
            Group { proj, cells: Vec::new(), lift_base: v[0].clone(), lift }
        });
        let y: Vec<Point> = v.iter().map(|p| group.proj.iter().map(|&i| p[i].clone()).collect()).collect();
        let sign = orientation_sign(&y);
        let mult = if sign > 0 { coeff.clone() } else { -coeff.clone() };
        group.cells.push((y, mult));
    }

    let mut out = PolyChain::zero(n, d);
    for g in groups.values() {
        refine_group(g, d, &mut out);
    }
    out
}

/// Facet hyperplanes of a full-dimensional simplex in `R^d`, as `a·y <= b` with the simplex inside.
fn simplex_halfspaces(y: &[Point]) -> Vec<HalfSpace> {
    let d = y.len() - 1;
    (0..=d)
        .map(|skip| {
            let face: Vec<&Point> = y.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, p)| p).collect();
            let rows: RatMatrix = face[1..].iter().map(|p| p.iter().zip(face[0]).map(|(a, b)| a - b).collect()).collect();
            let normal = if d == 1 { vec![Rat::from_integer(1.into())] } else { nullspace(&rows, d).remove(0) };
            let b: Rat = normal.iter().zip(face[0]).map(|(a, x)| a * x).sum();
            let h = HalfSpace { a: normal, b };
            if h.slack(&y[skip]).is_positive() {
                normalize(&h.flipped())
            } else {
                normalize(&h)
            }
        })
        .collect()
}

fn normalize(h: &HalfSpace) -> HalfSpace {
    let k = h.a.iter().find(|x| !x.is_zero()).expect("nonzero normal").abs();
    HalfSpace { a: h.a.iter().map(|x| x / &k).collect(), b: &h.b / &k }
}

/// Hyperplane identity independent of side: first nonzero normal entry set to one.
fn hyperplane_key(h: &HalfSpace) -> (Vec<Rat>, Rat) {
    let k = h.a.iter().find(|x| !x.is_zero()).expect("nonzero normal").clone();
    (h.a.iter().map(|x| x / &k).collect(), &h.b / &k)
}

fn refine_group(g: &Group, d: usize, out: &mut PolyChain) {
    let cell_hs: Vec<Vec<HalfSpace>> = g.cells.iter().map(|(y, _)| simplex_halfspaces(y)).collect();
    let near = overlap_pairs(&g.cells, &cell_hs);
    if d == 2 {
        refine_polygons(g, &near, &cell_hs, out);
        return;
    }
    for comp in components(g.cells.len(), &near) {
        refine_component(g, d, &comp, &cell_hs, out);
    }
}

/// For each cell, the cells whose interiors may meet it.
///
/// Two simplices are kept apart when a facet hyperplane of one weakly separates them,
/// which is exact for triangles and conservative in higher dimension.
fn overlap_pairs(cells: &[(Vec<Point>, Rat)], hs: &[Vec<HalfSpace>]) -> Vec<Vec<usize>> {
    let m = cells.len();
    let boxes: Vec<(Point, Point)> = cells
        .iter()
        .map(|(y, _)| {
            let lo = (0..y[0].len()).map(|i| y.iter().map(|p| &p[i]).min().expect("vertex").clone()).collect();
            let hi = (0..y[0].len()).map(|i| y.iter().map(|p| &p[i]).max().expect("vertex").clone()).collect();
            (lo, hi)
        })
        .collect();
    let separated = |a: usize, b: usize| {
        hs[a].iter().any(|h| cells[b].0.iter().all(|p| !h.slack(p).is_negative()))
            || hs[b].iter().any(|h| cells[a].0.iter().all(|p| !h.slack(p).is_negative()))
    };
    let mut near = vec![Vec::new(); m];
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| boxes[a].0[0].cmp(&boxes[b].0[0]));
    for (k, &a) in order.iter().enumerate() {
        for &b in &order[k + 1..] {
            if boxes[b].0[0] >= boxes[a].1[0] {
                break;
            }
            let boxes_meet = (1..boxes[a].0.len()).all(|i| boxes[b].0[i] < boxes[a].1[i] && boxes[a].0[i] < boxes[b].1[i]);
            if boxes_meet && !separated(a, b) {
                near[a].push(b);
                near[b].push(a);
            }
        }
    }
    for list in near.iter_mut() {
        list.sort_unstable();
    }
    near
}

fn components(m: usize, near: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; m];
    let mut out = Vec::new();
    for s in 0..m {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut k = 0;
        while k < comp.len() {
            for &t in &near[comp[k]] {
                if !seen[t] {
                    seen[t] = true;
                    comp.push(t);
                }
            }
            k += 1;
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

fn component_cuts(comp: &[usize], cell_hs: &[Vec<HalfSpace>]) -> Vec<HalfSpace> {
    let mut cuts: BTreeSet<(Vec<Rat>, Rat)> = BTreeSet::new();
    for &i in comp {
        for h in &cell_hs[i] {
            cuts.insert(hyperplane_key(h));
        }
    }
    cuts.into_iter().map(|(a, b)| HalfSpace { a, b }).collect()
}

fn refine_component(g: &Group, d: usize, comp: &[usize], cell_hs: &[Vec<HalfSpace>], out: &mut PolyChain) {
    let cuts = component_cuts(comp, cell_hs);
    let mut regions: BTreeMap<Vec<Point>, (Rat, Vec<HalfSpace>)> = BTreeMap::new();
    for &ci in comp {
        let (y, mult) = &g.cells[ci];
        let mut pieces: Vec<(Vec<HalfSpace>, Vec<Point>)> = vec![(cell_hs[ci].clone(), y.clone())];
        for cut in &cuts {
            let mut next = Vec::with_capacity(pieces.len());
            for (cons, verts) in pieces {
                let s: Vec<Rat> = verts.iter().map(|p| cut.slack(p)).collect();
                if s.iter().any(Signed::is_positive) && s.iter().any(Signed::is_negative) {
                    for side in [cut.clone(), cut.flipped()] {
                        let mut c2 = cons.clone();
                        c2.push(side);
                        let (pts, _) = enumerate_vertices(d, &c2);
                        if pts.len() > d {
                            next.push((c2, pts));
                        }
                    }
                } else {
                    next.push((cons, verts));
                }
            }
            pieces = next;
        }
        for (cons, mut verts) in pieces {
            verts.sort();
            let e = regions.entry(verts).or_insert_with(|| (Rat::zero(), cons));
            e.0 += mult;
        }
    }

    for (verts, (mult, cons)) in regions {
        if mult.is_zero() {
            continue;
        }
        let (pts, incid) = enumerate_vertices(d, &cons);
        debug_assert_eq!(pts, verts);
        for simplex in pulling_triangulation(&pts, &incid, d) {
            let mut ys: Vec<Point> = simplex.iter().map(|&i| pts[i].clone()).collect();
            match orientation_sign(&ys) {
                0 => continue,
                s if s < 0 => ys.swap(0, 1),
                _ => {}
            }
            let xs: Vec<Point> = ys.iter().map(|y| lift(g, y)).collect();
            out.add_oriented(xs, mult.clone());
        }
    }
}

/// Counterclockwise convex polygon cut by `cut`, keeping the side where the slack has sign `side`.
fn clip_polygon(poly: &[Point], slack: &[Rat], side: i32) -> Vec<Point> {
    let keep = |s: &Rat| if side < 0 { !s.is_positive() } else { !s.is_negative() };
    let mut out = Vec::with_capacity(poly.len() + 1);
    for i in 0..poly.len() {
        let j = (i + 1) % poly.len();
        if keep(&slack[i]) {
            out.push(poly[i].clone());
        }
        if (slack[i].is_positive() && slack[j].is_negative()) || (slack[i].is_negative() && slack[j].is_positive()) {
            let t = &slack[i] / (&slack[i] - &slack[j]);
            out.push(poly[i].iter().zip(&poly[j]).map(|(a, b)| a + &t * (b - a)).collect());
        }
    }
    out
}

/// Triangles of one affine plane, overlaid locally.
///
/// Each triangle is cut by the edge lines of the triangles meeting it, so every piece has
/// constant density. A piece is emitted by the first triangle covering it, with the
/// summed multiplicity of all triangles covering it.
fn refine_polygons(g: &Group, near: &[Vec<usize>], cell_hs: &[Vec<HalfSpace>], out: &mut PolyChain) {
    let inside = |c: usize, p: &Point| cell_hs[c].iter().all(|h| !h.slack(p).is_positive());
    let centre = |poly: &[Point]| -> Point {
        let k = Rat::from_integer(poly.len().into());
        (0..2).map(|i| poly.iter().map(|p| &p[i]).sum::<Rat>() / &k).collect()
    };
    for (ci, (y, mult)) in g.cells.iter().enumerate() {
        let mut used: BTreeSet<(Vec<Rat>, Rat)> = cell_hs[ci].iter().map(hyperplane_key).collect();
        let mut first = y.clone();
        if orientation_sign(&first) < 0 {
            first.swap(1, 2);
        }
        let mut pieces = vec![first];
        // earlier triangles first, discarding what they already cover
        for &o in &near[ci] {
            for h in &cell_hs[o] {
                let key = hyperplane_key(h);
                if used.insert(key.clone()) {
                    pieces = split_all(pieces, &HalfSpace { a: key.0, b: key.1 });
                }
            }
            if o < ci {
                pieces.retain(|poly| !inside(o, &centre(poly)));
                if pieces.is_empty() {
                    break;
                }
            }
        }
        for poly in pieces {
            let c = centre(&poly);
            let density: Rat = near[ci].iter().filter(|&&o| o > ci && inside(o, &c)).map(|&o| &g.cells[o].1).sum::<Rat>() + mult;
            if density.is_zero() {
                continue;
            }
            // fan from the smallest vertex
            let m = poly.len();
            let s = (0..m).min_by(|&a, &b| poly[a].cmp(&poly[b])).expect("nonempty polygon");
            for i in 1..m - 1 {
                let ys = [poly[s].clone(), poly[(s + i) % m].clone(), poly[(s + i + 1) % m].clone()];
                let xs: Vec<Point> = ys.iter().map(|y| lift(g, y)).collect();
                out.add_oriented(xs, density.clone());
            }
        }
    }
}

fn split_all(pieces: Vec<Vec<Point>>, cut: &HalfSpace) -> Vec<Vec<Point>> {
    let mut next = Vec::with_capacity(pieces.len());
    for poly in pieces {
        let s: Vec<Rat> = poly.iter().map(|p| cut.slack(p)).collect();
        if s.iter().any(Signed::is_positive) && s.iter().any(Signed::is_negative) {
            next.push(clip_polygon(&poly, &s, -1));
            next.push(clip_polygon(&poly, &s, 1));
        } else {
            next.push(poly);
        }
    }
    next
}

fn lift(g: &Group, y: &[Rat]) -> Point {
    let base_y: Vec<Rat> = g.proj.iter().map(|&i| g.lift_base[i].clone()).collect();
    let dy: Vec<Rat> = y.iter().zip(&base_y).map(|(a, b)| a - b).collect();
    g.lift_base
        .iter()
        .zip(&g.lift)
        .map(|(b, row)| b + row.iter().zip(&dy).map(|(m, t)| m * t).sum::<Rat>())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chains::Polytope;
    use crate::rational::{int, rat};

    fn p(c: &[i64]) -> Point {
        c.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn collinear_segments_merge() {
        let mut a = PolyChain::zero(2, 1);
        a.add_oriented(vec![p(&[0, 0]), p(&[1, 1])], int(1));
        a.add_oriented(vec![p(&[1, 1]), p(&[3, 3])], int(1));
        let mut b = PolyChain::zero(2, 1);
        b.add_oriented(vec![p(&[0, 0]), p(&[2, 2])], int(1));
        b.add_oriented(vec![p(&[2, 2]), p(&[3, 3])], int(1));
        assert_ne!(a, b);
        assert!(a.geometric_eq(&b));
        assert_eq!(a.refined().len(), 1);
    }

    #[test]
    fn overlapping_opposite_segments_cancel_partly() {
        let mut a = PolyChain::zero(2, 1);
        a.add_oriented(vec![p(&[0, 0]), p(&[4, 0])], int(1));
        a.add_oriented(vec![p(&[3, 0]), p(&[1, 0])], int(1));
        let r = a.refined();
        let mut want = PolyChain::zero(2, 1);
        want.add_oriented(vec![p(&[0, 0]), p(&[1, 0])], int(1));
        want.add_oriented(vec![p(&[3, 0]), p(&[4, 0])], int(1));
        assert_eq!(r, want);
    }

    #[test]
    fn differently_triangulated_squares_agree() {
        let mut a = PolyChain::zero(3, 2);
        let z = |x: i64, y: i64| vec![int(x), int(y), rat(1, 3)];
        a.add_oriented(vec![z(0, 0), z(1, 0), z(1, 1)], int(1));
        a.add_oriented(vec![z(0, 0), z(1, 1), z(0, 1)], int(1));
        let mut b = PolyChain::zero(3, 2);
        b.add_oriented(vec![z(0, 0), z(1, 0), z(0, 1)], int(1));
        b.add_oriented(vec![z(1, 0), z(1, 1), z(0, 1)], int(1));
        assert!(a.geometric_eq(&b));
        let shifted = b.translated(&[int(0), int(0), int(1)]);
        assert!(!a.geometric_eq(&shifted));
        assert!(!a.geometric_eq(&b.negated()));
    }

    #[test]
    fn clipped_cube_matches_cube() {
        let big = Polytope::axis_box(&[int(-1), int(-1)], &[int(2), int(2)]).to_chain();
        let clipped = big.restrict(&Polytope::unit_cube(2));
        assert!(clipped.geometric_eq(&Polytope::unit_cube(2).to_chain()));
    }
}
