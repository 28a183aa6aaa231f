use std::f64::consts::{FRAC_PI_2, TAU};

use curvflow::{
    beta_curve, build_pentagon, classify_trajectory, region_areas, simulate_jumps, BetaCurve, ClassifyMethod,
    ConvexPolygon, Pentagon, PolyCriticalKind, ReferenceModel, TrajectoryClass,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn alphas() -> impl Iterator<Item = f64> {
    (1..=20).map(|k| k as f64 / 21.0 * FRAC_PI_2)
}

#[test]
fn area_formula_holds_on_random_shapes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let (a, b) = (rng.random_range(0.01..1.56), rng.random_range(0.01..1.56));
        let p = build_pentagon(a, b).unwrap();
        let area = p.polygon().unwrap().area();
        assert!((area - (0.25 * a.tan() + b.tan())).abs() < 1e-10 * area.max(1.0));
    }
}

#[test]
fn centroid_loci_hit_shoulder_and_roof_limit() {
    for a in alphas() {
        let g1 = build_pentagon(a, beta_curve(BetaCurve::G1, a).unwrap()).unwrap();
        let c = g1.polygon().unwrap().centroid();
        assert!((c[1] - g1.p1()[1]).abs() < 1e-9, "α = {a}");
        let g2 = build_pentagon(a, beta_curve(BetaCurve::G2, a).unwrap()).unwrap();
        let c = g2.polygon().unwrap().centroid();
        assert!((c[1] - g2.p2()[1]).abs() < 1e-9, "α = {a}");
    }
}

#[test]
fn self_similar_locus_has_incircle_touching_every_edge() {
    for a in alphas() {
        let p = build_pentagon(a, beta_curve(BetaCurve::B3, a).unwrap()).unwrap();
        let poly = p.polygon().unwrap();
        let (center, r) = poly.incircle();
        for d in poly.edge_distances(center) {
            assert!((d - r).abs() < 1e-9, "α = {a}: {d} vs {r}");
        }
    }
}

#[test]
fn self_similar_shape_survives_offset() {
    for a in [0.2, 0.7, 1.3] {
        let b3 = beta_curve(BetaCurve::B3, a).unwrap();
        let poly = build_pentagon(a, b3).unwrap().polygon().unwrap();
        let back = Pentagon::from_polygon(&poly.eikonal_offset(0.5 * poly.inradius()).unwrap()).unwrap();
        assert!((back.alpha - a).abs() < 1e-8 && (back.beta - b3).abs() < 1e-8);
    }
}

#[test]
fn fixed_grey_band_contains_self_similar_curve() {
    for k in 1..10_000 {
        let a = k as f64 / 10_000.0 * FRAC_PI_2;
        let (u1, b3, u2) = (
            beta_curve(BetaCurve::U1, a).unwrap(),
            beta_curve(BetaCurve::B3, a).unwrap(),
            beta_curve(BetaCurve::U2, a).unwrap(),
        );
        assert!(u1 < b3 && b3 < u2, "α = {a}: {u1} {b3} {u2}");
    }
}

#[test]
fn centroid_curve_crosses_self_similar_curve_transversally() {
    let f = |a: f64| beta_curve(BetaCurve::B3, a).unwrap() - beta_curve(BetaCurve::G1, a).unwrap();
    let (mut lo, mut hi) = (1e-3, FRAC_PI_2 - 1e-3);
    assert!(f(lo) * f(hi) < 0.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let h = 1e-5;
    let slope = (f(lo + h) - f(lo - h)) / (2.0 * h);
    assert!(slope.abs() > 1e-3, "slope difference {slope} at α = {lo}");
}

/// Local extrema of the distance from `p` along the boundary, by dense sampling.
fn scan_extrema(poly: &ConvexPolygon, p: [f64; 2], n: usize) -> usize {
    let v = poly.vertices();
    let perim: Vec<f64> = (0..v.len())
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            ((b[0] - a[0]).powi(2) + (b[1] - a[1]).powi(2)).sqrt()
        })
        .collect();
    let total: f64 = perim.iter().sum();
    let dist: Vec<f64> = (0..n)
        .map(|k| {
            let mut s = (k as f64 + 0.5) * total / n as f64;
            let mut i = 0;
            while s > perim[i] {
                s -= perim[i];
                i += 1;
            }
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            let u = s / perim[i];
            let q = [a[0] + u * (b[0] - a[0]), a[1] + u * (b[1] - a[1])];
            ((q[0] - p[0]).powi(2) + (q[1] - p[1]).powi(2)).sqrt()
        })
        .collect();
    (0..n)
        .filter(|&k| {
            let (a, b, c) = (dist[(k + n - 1) % n], dist[k], dist[(k + 1) % n]);
            (b > a && b > c) || (b < a && b < c)
        })
        .count()
}

#[test]
fn equilibrium_counts_match_boundary_scan() {
    let tri = ConvexPolygon::new(vec![[0.0, 0.0], [1.0, 0.0], [0.3, 0.8]]).unwrap();
    let center = tri.incircle().0;
    assert_eq!(tri.critical_point_count(center).unwrap(), 6);
    assert_eq!(scan_extrema(&tri, center, 1_000_000), 6);
    let sq = ConvexPolygon::square(0.0, 0.0, 2.0).unwrap();
    assert_eq!(sq.critical_point_count([1.0, 1.0]).unwrap(), 8);
    let pts = sq.critical_points([1.0, 1.0]).unwrap();
    assert_eq!(pts.iter().filter(|p| p.kind == PolyCriticalKind::EdgeMinimum).count(), 4);
    assert!(sq.critical_point_count([0.0, 1.0]).is_err());
}

#[test]
fn grey_band_count_matches_boundary_scan() {
    let a = 0.8;
    let mid = 0.5 * (beta_curve(BetaCurve::U1, a).unwrap() + beta_curve(BetaCurve::U2, a).unwrap());
    let poly = build_pentagon(a, mid).unwrap().polygon().unwrap();
    let u = poly.incircle().0;
    assert_eq!(poly.critical_point_count(u).unwrap(), 10);
    assert_eq!(scan_extrema(&poly, u, 1_000_000), 10);
}

#[test]
fn centroid_model_has_confirmed_t2_cells() {
    let map = region_areas(ReferenceModel::Centroid, 512).unwrap();
    let idx = map
        .classes
        .iter()
        .position(|c| *c == TrajectoryClass::T2)
        .expect("a T2 cell");
    let (ab, bb) = map.cell_center(idx % 512, idx / 512);
    let sim = classify_trajectory(ab, bb, ReferenceModel::Centroid, ClassifyMethod::Simulate).unwrap();
    assert_eq!(sim.class, TrajectoryClass::T2);
    assert_eq!(sim.jumps, vec![4, -4]);
}

#[test]
fn boundary_start_is_flagged() {
    let a = 0.5 * FRAC_PI_2;
    let u1 = beta_curve(BetaCurve::U1, a).unwrap();
    let o = classify_trajectory(0.5, u1 / FRAC_PI_2, ReferenceModel::FixedUltimate, ClassifyMethod::Analytic).unwrap();
    assert!(o.on_boundary);
    assert!(classify_trajectory(0.0, 0.5, ReferenceModel::Centroid, ClassifyMethod::Analytic).is_err());
}

fn random_convex() -> impl Strategy<Value = ConvexPolygon> {
    (prop::collection::vec(0.0..1.0f64, 3..9), 0.5..3.0f64).prop_filter_map("degenerate", |(u, rad)| {
        let mut angles: Vec<f64> = u.iter().map(|x| x * TAU).collect();
        angles.sort_by(f64::total_cmp);
        angles.dedup_by(|b, a| *b - *a < 0.2);
        if angles.len() < 3 || angles[0] + TAU - angles[angles.len() - 1] < 0.2 {
            return None;
        }
        ConvexPolygon::new(angles.iter().map(|t| [rad * t.cos(), rad * t.sin()]).collect()).ok()
    })
}

fn directions(p: &ConvexPolygon) -> Vec<f64> {
    let v = p.vertices();
    (0..v.len())
        .map(|i| {
            let (a, b) = (v[i], v[(i + 1) % v.len()]);
            (b[1] - a[1]).atan2(b[0] - a[0])
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn offset_keeps_edge_directions(poly in random_convex(), frac in 0.0..0.95f64) {
        let t = frac * poly.inradius();
        let (out, events) = poly.eikonal_offset_with_events(t).unwrap();
        let before = directions(&poly);
        let after = directions(&out);
        prop_assert_eq!(after.len() + events.len(), before.len());
        for d in &after {
            prop_assert!(before.iter().any(|b| (b - d).abs() < 1e-9 || ((b - d).abs() - TAU).abs() < 1e-9));
        }
        prop_assert!(out.area() < poly.area() || t == 0.0);
        prop_assert!((out.inradius() - (poly.inradius() - t)).abs() < 1e-9);
    }

    #[test]
    fn simulated_jumps_are_fours(ab in 0.01..0.99f64, bb in 0.01..0.99f64, centroid in any::<bool>()) {
        let model = if centroid { ReferenceModel::Centroid } else { ReferenceModel::FixedUltimate };
        let jumps = simulate_jumps(ab * FRAC_PI_2, bb * FRAC_PI_2, model).unwrap();
        prop_assert!(jumps.iter().all(|j| j.abs() == 4), "{:?}", jumps);
        if !centroid {
            prop_assert!(jumps.iter().all(|j| *j < 0), "{:?}", jumps);
        }
    }
}
