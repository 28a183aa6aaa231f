use std::f64::consts::PI;

use curvflow::{
    evolve, min_curvature_radius, scenario_superellipse, EventKind, FlowControls, PolarCurve, SpeedLaw, Topology,
};
use proptest::prelude::*;

#[test]
fn grayson_circle_follows_closed_form() {
    let curve = PolarCurve::circle(64, 1.0).unwrap();
    let rec = evolve(&curve, &SpeedLaw::Grayson, 0.2, &FlowControls::default()).unwrap();
    let expect = (1.0f64 - 2.0 * 0.2).sqrt();
    for r in rec.final_curve.samples() {
        assert!((r - expect).abs() < 1e-9, "{r} vs {expect}");
    }
    assert!(rec.events.is_empty());
    assert_eq!(rec.final_count(), None);
}

/// `½∫r² dφ` by the trapezoid rule, spectrally accurate for smooth periodic `r`.
fn polar_area(curve: &PolarCurve) -> f64 {
    0.5 * curve.samples().iter().map(|r| r * r).sum::<f64>() * curve.spacing()
}

#[test]
fn grayson_area_loss_rate_is_two_pi() {
    // Any simple closed curve under v = κ loses area at rate 2π.
    let curve = scenario_superellipse(1.5, 1.0, 4.0, 0.01, 0.7, 512).unwrap();
    for t_end in [0.01, 0.05] {
        let rec = evolve(&curve, &SpeedLaw::Grayson, t_end, &FlowControls::default()).unwrap();
        let expect = polar_area(&curve) - 2.0 * PI * t_end;
        let got = polar_area(&rec.final_curve);
        assert!((got - expect).abs() < 1e-7, "t = {t_end}: {got} vs {expect}");
    }
}

#[test]
fn eikonal_convex_curve_keeps_its_count() {
    let curve = PolarCurve::from_fn(1024, |p| 1.0 + 0.05 * (3.0 * p).cos()).unwrap();
    let r_min = min_curvature_radius(&curve).unwrap();
    let rec = evolve(&curve, &SpeedLaw::Eikonal, 0.9 * r_min, &FlowControls::default()).unwrap();
    assert!(!rec.horizon_clamped);
    assert!(rec.events.is_empty());
    assert!(rec.samples.iter().all(|s| s.n == Some(6)));
}

#[test]
fn eikonal_stops_at_smoothness_horizon() {
    let curve = PolarCurve::from_fn(256, |p| 1.0 + 0.05 * (3.0 * p).cos()).unwrap();
    let r_min = min_curvature_radius(&curve).unwrap();
    let rec = evolve(&curve, &SpeedLaw::Eikonal, 2.0 * r_min, &FlowControls::default()).unwrap();
    assert!(rec.horizon_clamped);
    assert!((rec.t_final - 0.95 * r_min).abs() < 1e-12);
}

#[test]
fn pitchfork_event_times_stable_under_refinement() {
    let run = |m| {
        let curve = scenario_superellipse(1.5, 1.0, 4.0, 0.0, 0.0, m).unwrap();
        evolve(&curve, &SpeedLaw::Grayson, 0.2, &FlowControls::default()).unwrap()
    };
    let (coarse, fine) = (run(256), run(512));
    assert_eq!(coarse.events.len(), 2);
    assert_eq!(fine.events.len(), 2);
    for (a, b) in coarse.events.iter().zip(&fine.events) {
        assert_eq!(a.topology, Topology::PitchforkLike);
        assert!((a.t_star - b.t_star).abs() < 10.0 * FlowControls::default().tol);
    }
}

/// Smooth convex curves: `2 + Σ a_k cos kφ + b_k sin kφ`, `k ≤ 4`, small amplitudes.
fn convex_curve() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-0.04..0.04f64, -0.04..0.04f64), 2..5)
}

fn build(c: &[(f64, f64)]) -> PolarCurve {
    PolarCurve::from_fn(128, |p| {
        2.0 + c
            .iter()
            .enumerate()
            .map(|(k, (a, b))| a * ((k + 1) as f64 * p).cos() + b * ((k + 1) as f64 * p).sin())
            .sum::<f64>()
    })
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn positive_speed_runs_only_annihilate(c in convex_curve(), bloore in any::<bool>()) {
        let curve = build(&c);
        let law = if bloore { SpeedLaw::planar_bloore(1.0).unwrap() } else { SpeedLaw::Grayson };
        let rec = evolve(&curve, &law, 0.3, &FlowControls::default()).unwrap();
        let counts: Vec<usize> = rec.samples.iter().filter_map(|s| s.n).collect();
        prop_assert!(counts.windows(2).all(|w| w[1] <= w[0]), "{:?}", counts);
        for w in rec.samples.windows(2) {
            prop_assert!(w[1].area < w[0].area);
        }
        for e in &rec.events {
            prop_assert_eq!(e.kind, EventKind::Annihilation);
            if e.omega_predicted != 0 {
                prop_assert_eq!(e.omega_observed, e.omega_predicted);
            }
        }
    }
}
