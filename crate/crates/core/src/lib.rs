//! Critical points of star-shaped curves and surface germs under
//! curvature-driven flows.

// Negated comparisons are deliberate: `!(x > 0.0)` also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod flow;
pub mod geometry;
pub mod io;
pub mod markov;
pub mod pentagon;
pub mod saddle;
pub mod spectral;

pub use error::{Error, Result};
pub use flow::{
    evolve, predicted_omega, radial_step, scenario_superellipse, BifurcationEvent, EventKind,
    FlowControls, FlowSample, RunRecord, SpeedLaw, Topology,
};
pub use geometry::{
    angular_distance, differentiate, locate_critical_points, min_curvature_radius,
    polar_curvature, tangential_factor, CriticalKind, CriticalPoint, CriticalSet, CurveJet,
    PolarCurve,
};
pub use saddle::{
    assumption_2a_omega, curvature_y_derivatives, damon_creation_check, euler_counts,
    mc_expected_omega, omega_3d, principal_curvatures_at_c, DetSampler, EulerCounts, LawForm,
    MCEstimate, Sampler, SpeedLaw3D, SurfaceGerm,
};
pub use markov::{
    chains_csv, delta_error, delta_report, minimize_delta, noisy_omega, p_of_d, simulate_chain,
    simulate_chains, stochastic_bounds, ChainSpec, DeltaMinimum, DeltaReport, NoiseModel,
    TrajectoryTypeDistribution,
};
pub use pentagon::{
    beta3_secant_form, beta_curve, build_pentagon, classify_trajectory, compare_classifiers,
    curve_samples, flow_direction, flow_step_delta, region_areas, simulate_jumps, BetaCurve,
    ClassifierComparison, ClassifyMethod, CollapseEvent, ConvexPolygon, CurveSamples, Pentagon,
    Point, PolyCriticalKind, PolyCriticalPoint, ReferenceModel, RegionMap, TrajectoryClass,
    TrajectoryOutcome,
};
