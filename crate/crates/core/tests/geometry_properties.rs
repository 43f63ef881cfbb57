use polychain::chains::{PolyChain, Polytope};
use polychain::constructions::{extract_qvalued, tile_shrink};
use polychain::grassmann::{GrassmannMeasure, PlaneKey};
use polychain::rational::{int, rat, Rat};
use polychain::torus::{fill_measure, generic_offset, subtorus_chain, tile_fundamental, AxisBox, DEFAULT_PRIME};
use proptest::prelude::*;

fn segment_chain(n: usize, pts: &[Vec<i64>], den: i64) -> PolyChain {
    let mut t = PolyChain::zero(n, 1);
    for w in pts.windows(2) {
        t.add_oriented(vec![w[0].iter().map(|&x| rat(x, den)).collect(), w[1].iter().map(|&x| rat(x, den)).collect()], int(1));
    }
    t
}

fn keys(t: &PolyChain) -> Vec<PlaneKey> {
    t.gaussian_image().atoms.keys().cloned().collect()
}

/// Polygonal path from the origin to `e_1` through random points.
fn path_strategy(n: usize) -> impl Strategy<Value = PolyChain> {
    prop::collection::vec(prop::collection::vec(-6i64..=12, n), 0..5).prop_map(move |mid| {
        let den = 6;
        let mut pts = vec![vec![0; n]];
        pts.extend(mid);
        let mut end = vec![0; n];
        end[0] = den;
        pts.push(end);
        segment_chain(n, &pts, den)
    })
}

/// `(1/Q) Σ` of `Q` graphs over `[0,1]` with increasing abscissae and zero end values.
fn multigraph_strategy() -> impl Strategy<Value = PolyChain> {
    prop::collection::vec(prop::collection::vec(-5i64..=5, 3), 1..4).prop_map(|sheets| {
        let q = sheets.len() as i64;
        let mut out = PolyChain::zero(2, 1);
        for ys in &sheets {
            let pts: Vec<Vec<i64>> =
                vec![vec![0, 0], vec![1, ys[0]], vec![2, ys[1]], vec![3, ys[2]], vec![4, 0]];
            out.add_scaled(&segment_chain(2, &pts, 4), &rat(1, q));
        }
        out
    })
}

/// A zero-class measure on lines in the plane: random classes closed up by their negated sum.
fn cycle_measure_strategy() -> impl Strategy<Value = GrassmannMeasure> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, 2), 1i64..=3), 1..4).prop_filter_map("degenerate", |atoms| {
        let mut mu = GrassmannMeasure::new(2, 1);
        let mut sum = [0i64; 2];
        for (w, s) in &atoms {
            if w.iter().all(|&x| x == 0) {
                return None;
            }
            mu.add_basis(&vec![vec![int(w[0])], vec![int(w[1])]], int(*s)).ok()?;
            sum[0] += w[0] * s;
            sum[1] += w[1] * s;
        }
        if sum != [0, 0] {
            mu.add_basis(&vec![vec![int(-sum[0])], vec![int(-sum[1])]], int(1)).ok()?;
        }
        Some(mu)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn gaussian_image_ignores_triangulation(t in path_strategy(2), extra in path_strategy(2)) {
        let t = t.plus(&extra);
        let big = Polytope::axis_box(&[int(-5), int(-5)], &[int(5), int(5)]);
        let cut = Polytope::axis_box(&[int(-5), int(-5)], &[rat(1, 7), int(5)]);
        let rest = Polytope::axis_box(&[rat(1, 7), int(-5)], &[int(5), int(5)]);
        // the cut avoids the lattice of vertices, so no segment lies in it
        let pieces = t.restrict(&cut).plus(&t.restrict(&rest));
        prop_assert!(t.restrict(&big).geometric_eq(&t));
        prop_assert_eq!(keys(&pieces.refined()), keys(&t.refined()));
        prop_assert!(polychain::grassmann::tv_distance(&pieces.refined().gaussian_image(), &t.refined().gaussian_image()) <= 1e-9);
    }

    #[test]
    fn homothety_scales_mass(t in path_strategy(3), k in 1i64..20) {
        let m = t.mass();
        let shrunk = t.dilated(&rat(1, k));
        prop_assert!((shrunk.mass() - m / k as f64).abs() <= 1e-9 * m.max(1.0));
        prop_assert_eq!(keys(&shrunk), keys(&t));
    }

    #[test]
    fn subtorus_mass_per_period(w in prop::collection::vec(-4i64..=4, 2), v in prop::collection::vec(-3i64..=3, 3)) {
        prop_assume!(w.iter().any(|&x| x != 0));
        let line = PlaneKey::from_ints(2, 1, &w).to_plane().unwrap();
        let t = subtorus_chain(&line, &generic_offset(2, DEFAULT_PRIME, 1), &AxisBox::unit(2));
        prop_assert!((t.mass() - line.w_norm()).abs() <= 1e-6);
        prop_assume!(v.iter().any(|&x| x != 0));
        let plane = PlaneKey::from_ints(3, 2, &v).to_plane().unwrap();
        let s = subtorus_chain(&plane, &generic_offset(3, DEFAULT_PRIME, 1), &AxisBox::unit(3));
        prop_assert!((s.mass() - plane.w_norm()).abs() <= 1e-6, "{} vs {}", s.mass(), plane.w_norm());
    }

    #[test]
    fn fillings_bound_their_cycles_and_tiles_close(mu in cycle_measure_strategy(), shift in prop::collection::vec(-2i64..=2, 2)) {
        let cube = AxisBox::unit(2);
        let filled = fill_measure(&mu, DEFAULT_PRIME, &cube.polytope()).unwrap();
        prop_assert!(filled.verify());
        let s = tile_fundamental(&filled.filling, &cube.polytope()).unwrap();
        prop_assert!(s.boundary().is_empty());
        let v: Vec<Rat> = shift.iter().map(|&x| int(x)).collect();
        let moved = tile_fundamental(&filled.filling, &cube.translated(&v).polytope()).unwrap();
        prop_assert_eq!(moved, s.translated(&v));
    }

    #[test]
    fn tile_shrink_keeps_boundary_and_shrinks_gaussian_image(b in path_strategy(2), i in 1u32..4) {
        let t = tile_shrink(&b, i).unwrap();
        prop_assert_eq!(t.boundary(), b.boundary());
        let (gt, gb) = (t.gaussian_image(), b.refined().gaussian_image());
        for (k, m) in &gt.atoms {
            prop_assert!(*m <= gb.mass_of(k) + 1e-9, "{k}: {m} > {}", gb.mass_of(k));
        }
    }

    #[test]
    fn extraction_round_trips(b in multigraph_strategy()) {
        let (q, u) = extract_qvalued(&b).unwrap();
        prop_assert!(u.graph_chain().geometric_eq(&b.scaled(&int(q as i64))));
        prop_assert!(u.sheets.iter().all(|s| s.len() as u64 == q));
    }
}
