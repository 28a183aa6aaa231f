//! Radial evolution `r_t = −v(κ)·w` of star-shaped curves, with tracking of
//! the critical-point count `N(t)` and localization of bifurcation events.

use std::f64::consts::TAU;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::geometry::{
    angular_distance, count_from_grid, curvature_unchecked, locate_from_grid, shoelace_area,
    tangential_unchecked, CriticalPoint, CriticalSet, PolarCurve,
};
use crate::io::csv_float;
use crate::spectral::{SpectralOps, TrigInterpolant};

type ScalarFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Curvature values at which a law's derivative is checked by finite differences.
pub const PARTIAL_PROBES: [f64; 5] = [0.1, 0.5, 1.0, 2.0, 5.0];

/// Normal speed as a function of curvature, with its derivative `v_κ`.
#[derive(Clone)]
pub enum SpeedLaw {
    /// `v = κ`
    Grayson,
    /// `v = 1 + Rκ`
    PlanarBloore { radius: f64 },
    /// `v = 1`
    Eikonal,
    /// `v = sgn(κ)|κ|^p`
    Power { exponent: f64 },
    /// `v = −κ`
    Reversed,
    Custom {
        name: String,
        value: ScalarFn,
        partial: ScalarFn,
    },
}

impl fmt::Debug for SpeedLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl SpeedLaw {
    pub fn planar_bloore(radius: f64) -> Result<Self> {
        if !radius.is_finite() {
            return domain(format!("Bloore radius must be finite, got {radius}"));
        }
        Ok(SpeedLaw::PlanarBloore { radius })
    }

    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent > 0.0 && exponent.is_finite()) {
            return domain(format!("power-law exponent must be positive, got {exponent}"));
        }
        Ok(SpeedLaw::Power { exponent })
    }

    /// A user law; `partial` must be the derivative of `value`.
    pub fn custom(
        name: impl Into<String>,
        value: impl Fn(f64) -> f64 + Send + Sync + 'static,
        partial: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let law = SpeedLaw::Custom {
            name: name.into(),
            value: Arc::new(value),
            partial: Arc::new(partial),
        };
        law.check_partial()?;
        Ok(law)
    }

    pub fn label(&self) -> String {
        match self {
            SpeedLaw::Grayson => "grayson".into(),
            SpeedLaw::PlanarBloore { radius } => format!("bloore(R={radius})"),
            SpeedLaw::Eikonal => "eikonal".into(),
            SpeedLaw::Power { exponent } => format!("power(p={exponent})"),
            SpeedLaw::Reversed => "reversed".into(),
            SpeedLaw::Custom { name, .. } => format!("custom({name})"),
        }
    }

    #[inline]
    pub fn value(&self, kappa: f64) -> f64 {
        match self {
            SpeedLaw::Grayson => kappa,
            SpeedLaw::PlanarBloore { radius } => 1.0 + radius * kappa,
            SpeedLaw::Eikonal => 1.0,
            SpeedLaw::Power { exponent } => kappa.signum() * kappa.abs().powf(*exponent),
            SpeedLaw::Reversed => -kappa,
            SpeedLaw::Custom { value, .. } => value(kappa),
        }
    }

    /// `v_κ`
    #[inline]
    pub fn partial(&self, kappa: f64) -> f64 {
        match self {
            SpeedLaw::Grayson => 1.0,
            SpeedLaw::PlanarBloore { radius } => *radius,
            SpeedLaw::Eikonal => 0.0,
            SpeedLaw::Power { exponent } => exponent * kappa.abs().powf(exponent - 1.0),
            SpeedLaw::Reversed => -1.0,
            SpeedLaw::Custom { partial, .. } => partial(kappa),
        }
    }

    /// `v_κ ≡ 0`: the smooth polar representation only holds up to the
    /// first swallowtail.
    pub fn is_eikonal(&self) -> bool {
        matches!(self, SpeedLaw::Eikonal)
    }

    /// Central-difference check of `partial` on [`PARTIAL_PROBES`].
    pub fn check_partial(&self) -> Result<()> {
        for &k in &PARTIAL_PROBES {
            let h = 1e-5 * k.abs().max(1.0);
            let fd = (self.value(k + h) - self.value(k - h)) / (2.0 * h);
            let exact = self.partial(k);
            let err = (fd - exact).abs();
            if !exact.is_finite() || err > 1e-6 * exact.abs() + 1e-8 {
                return domain(format!(
                    "speed law {}: partial {exact} disagrees with finite difference {fd} at κ = {k}",
                    self.label()
                ));
            }
        }
        Ok(())
    }
}

/// `sgn(v_κ(κ))`
pub fn predicted_omega(law: &SpeedLaw, kappa: f64) -> i8 {
    sign(law.partial(kappa))
}

pub(crate) fn sign(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

/// Buffers and FFT plans for repeated right-hand-side evaluations.
struct FlowWorkspace {
    ops: SpectralOps,
    d1: Vec<f64>,
    d2: Vec<f64>,
    k: [Vec<f64>; 4],
    stage: Vec<f64>,
}

impl FlowWorkspace {
    fn new(m: usize) -> Self {
        Self {
            ops: SpectralOps::new(m),
            d1: vec![0.0; m],
            d2: vec![0.0; m],
            k: std::array::from_fn(|_| vec![0.0; m]),
            stage: vec![0.0; m],
        }
    }

    /// `out = −v(κ)·w` for the state `r`.
    fn rhs(ops: &mut SpectralOps, d1: &mut [f64], d2: &mut [f64], law: &SpeedLaw, r: &[f64], out: &mut [f64]) {
        ops.first_second(r, d1, d2);
        for j in 0..r.len() {
            let kappa = curvature_unchecked(r[j], d1[j], d2[j]);
            out[j] = -law.value(kappa) * tangential_unchecked(r[j], d1[j]);
        }
    }

    /// One RK4 step from `r` into `out`; fails if an intermediate stage
    /// passes through the origin.
    fn rk4(&mut self, law: &SpeedLaw, r: &[f64], dt: f64, t: f64, out: &mut [f64]) -> Result<()> {
        let m = r.len();
        let [k1, k2, k3, k4] = &mut self.k;
        Self::rhs(&mut self.ops, &mut self.d1, &mut self.d2, law, r, k1);
        for j in 0..m {
            self.stage[j] = r[j] + 0.5 * dt * k1[j];
        }
        check_stage(&self.stage, t)?;
        Self::rhs(&mut self.ops, &mut self.d1, &mut self.d2, law, &self.stage, k2);
        for j in 0..m {
            self.stage[j] = r[j] + 0.5 * dt * k2[j];
        }
        check_stage(&self.stage, t)?;
        Self::rhs(&mut self.ops, &mut self.d1, &mut self.d2, law, &self.stage, k3);
        for j in 0..m {
            self.stage[j] = r[j] + dt * k3[j];
        }
        check_stage(&self.stage, t)?;
        Self::rhs(&mut self.ops, &mut self.d1, &mut self.d2, law, &self.stage, k4);
        for j in 0..m {
            out[j] = r[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        Ok(())
    }

    /// Fills `d1`, `d2` with `r_φ`, `r_φφ` of `r`.
    fn derivatives(&mut self, r: &[f64]) {
        self.ops.first_second(r, &mut self.d1, &mut self.d2);
    }
}

fn check_stage(r: &[f64], t: f64) -> Result<()> {
    if r.iter().any(|&v| v <= 0.0) {
        return Err(Error::CurveCollapsed { t });
    }
    Ok(())
}

fn check_state(r: &[f64], t: f64) -> Result<()> {
    if r.iter().any(|v| !v.is_finite()) {
        return Err(Error::BlowUp { t });
    }
    if r.iter().any(|&v| v <= 0.0) {
        return Err(Error::CurveCollapsed { t });
    }
    Ok(())
}

/// Advances the curve by one explicit RK4 step of size `dt`.
pub fn radial_step(curve: &PolarCurve, law: &SpeedLaw, dt: f64) -> Result<PolarCurve> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::Usage(format!("time step must be positive, got {dt}")));
    }
    let mut ws = FlowWorkspace::new(curve.len());
    let mut out = vec![0.0; curve.len()];
    ws.rk4(law, curve.samples(), dt, 0.0, &mut out)?;
    check_state(&out, dt)?;
    PolarCurve::new(out)
}

/// Stable step size for the current state, from its derivatives.
///
/// The linearized operator has diffusion `D = |v_κ|·w·r/(r²+r_φ²)^{3/2}` on
/// `r_φφ` and advection `S = |∂(v w)/∂r_φ|`; the step is limited by both.
fn stable_dt(law: &SpeedLaw, r: &[f64], d1: &[f64], d2: &[f64]) -> f64 {
    let h = TAU / r.len() as f64;
    let (mut diff, mut adv) = (0.0_f64, 0.0_f64);
    for j in 0..r.len() {
        let (rr, p, q2) = (r[j], d1[j], d2[j]);
        let q = rr * rr + p * p;
        let sq = q.sqrt();
        let kappa = curvature_unchecked(rr, p, q2);
        let w = sq / rr;
        let vk = law.partial(kappa);
        diff = diff.max(vk.abs() * w * rr / (q * sq));
        let num = rr * rr + 2.0 * p * p - rr * q2;
        let dk_dp = (4.0 * p * q - 3.0 * p * num) / (q * q * sq);
        let dw_dp = p / (rr * sq);
        adv = adv.max((vk * dk_dp * w).abs() + (law.value(kappa) * dw_dp).abs());
    }
    let mut dt = f64::INFINITY;
    if diff > 0.0 {
        dt = dt.min(0.2 * h * h / diff);
    }
    if adv > 0.0 {
        dt = dt.min(0.5 * h / adv);
    }
    dt
}

/// Integration controls for [`evolve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowControls {
    /// Upper bound on the step; `None` uses only the stability estimate and `max_dt`.
    pub dt: Option<f64>,
    pub max_dt: f64,
    /// Record a sample every this many steps (the start and end are always recorded).
    pub sample_every: usize,
    /// Event bracketing tolerance in time.
    pub tol: f64,
}

impl Default for FlowControls {
    fn default() -> Self {
        Self {
            dt: None,
            max_dt: 1e-3,
            sample_every: 100,
            tol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EventKind {
    Annihilation,
    Creation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    SaddleNode,
    PitchforkLike,
}

/// Relative `|r_φφφ|` threshold below which an event is flagged pitchfork-like.
pub const PITCHFORK_REL: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BifurcationEvent {
    pub t_star: f64,
    pub phi_star: f64,
    pub kind: EventKind,
    pub omega_observed: i8,
    pub omega_predicted: i8,
    pub topology: Topology,
    /// Critical points removed (negative) or added at this event.
    pub count_change: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FlowSample {
    pub t: f64,
    /// `None` when the curve is a circle about the origin.
    pub n: Option<usize>,
    pub area: f64,
    /// `NaN` when the curve is not convex.
    pub r_min: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunRecord {
    pub law: String,
    pub samples: Vec<FlowSample>,
    pub events: Vec<BifurcationEvent>,
    pub final_curve: PolarCurve,
    pub t_final: f64,
    pub steps: usize,
    /// The Eikonal run was stopped at the smoothness horizon.
    pub horizon_clamped: bool,
}

impl RunRecord {
    pub fn initial_count(&self) -> Option<usize> {
        self.samples.first().and_then(|s| s.n)
    }

    pub fn final_count(&self) -> Option<usize> {
        self.samples.last().and_then(|s| s.n)
    }

    /// `t,N,area,R_min` rows.
    pub fn samples_csv(&self) -> String {
        let mut out = String::from("t,N,area,R_min\n");
        for s in &self.samples {
            let n = s.n.map(|n| n.to_string()).unwrap_or_else(|| "degenerate".into());
            out.push_str(&format!(
                "{},{},{},{}\n",
                csv_float(s.t),
                n,
                csv_float(s.area),
                csv_float(s.r_min)
            ));
        }
        out
    }

    pub fn events_csv(&self) -> String {
        let mut out =
            String::from("t_star,phi_star,kind,omega_observed,omega_predicted,topology,count_change\n");
        for e in &self.events {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                csv_float(e.t_star),
                csv_float(e.phi_star),
                match e.kind {
                    EventKind::Annihilation => "annihilation",
                    EventKind::Creation => "creation",
                },
                e.omega_observed,
                e.omega_predicted,
                match e.topology {
                    Topology::SaddleNode => "saddle-node",
                    Topology::PitchforkLike => "pitchfork-like",
                },
                e.count_change
            ));
        }
        out
    }
}

/// Grid state with its critical-point count.
struct Snapshot {
    r: Vec<f64>,
    count: Option<usize>,
}

fn sample_of(t: f64, r: &[f64], d1: &[f64], d2: &[f64], count: Option<usize>) -> FlowSample {
    let mut max_k = 0.0_f64;
    let mut convex = true;
    for j in 0..r.len() {
        let k = curvature_unchecked(r[j], d1[j], d2[j]);
        if !(k > 0.0) {
            convex = false;
            break;
        }
        max_k = max_k.max(k);
    }
    FlowSample {
        t,
        n: count,
        area: shoelace_area(r),
        r_min: if convex { 1.0 / max_k } else { f64::NAN },
    }
}

/// Integrates the flow to `t_end`, recording `N(t)` and every change of it.
pub fn evolve(
    curve: &PolarCurve,
    law: &SpeedLaw,
    t_end: f64,
    controls: &FlowControls,
) -> Result<RunRecord> {
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::Usage(format!("t_end must be positive, got {t_end}")));
    }
    if !(controls.tol > 0.0) || controls.sample_every == 0 || !(controls.max_dt > 0.0) {
        return Err(Error::Usage(
            "controls need tol > 0, max_dt > 0 and sample_every ≥ 1".into(),
        ));
    }
    if let Some(dt) = controls.dt {
        if !(dt > 0.0) {
            return Err(Error::Usage(format!("dt must be positive, got {dt}")));
        }
    }
    let m = curve.len();
    if m < 16 {
        return Err(Error::Usage(format!("flow needs at least 16 grid points, got {m}")));
    }

    let mut t_end = t_end;
    let mut horizon_clamped = false;
    if law.is_eikonal() {
        let horizon = 0.95 * crate::geometry::min_curvature_radius(curve)?;
        if t_end > horizon {
            t_end = horizon;
            horizon_clamped = true;
        }
    }

    let mut ws = FlowWorkspace::new(m);
    let mut cur = Snapshot {
        r: curve.samples().to_vec(),
        count: None,
    };
    ws.derivatives(&cur.r);
    cur.count = count_from_grid(&cur.r, &ws.d1, &ws.d2);

    let mut samples = vec![sample_of(0.0, &cur.r, &ws.d1, &ws.d2, cur.count)];
    let mut events = Vec::new();
    let mut next = vec![0.0; m];
    let mut t = 0.0;
    let mut steps = 0usize;

    while t < t_end {
        // ws.d1/d2 hold the derivatives of the current state here.
        let mut dt = stable_dt(law, &cur.r, &ws.d1, &ws.d2)
            .min(controls.max_dt)
            .min(controls.dt.unwrap_or(f64::INFINITY));
        if !(dt > 1e-14) {
            return Err(Error::BlowUp { t });
        }
        let last = t + dt >= t_end;
        if last {
            dt = t_end - t;
        }
        ws.rk4(law, &cur.r, dt, t, &mut next)?;
        check_state(&next, t + dt)?;
        ws.derivatives(&next);
        let count = count_from_grid(&next, &ws.d1, &ws.d2);

        if let (Some(_), Some(_)) = (cur.count, count) {
            if count != cur.count {
                locate_events(&mut ws, law, &cur, t, dt, controls.tol, &mut events)?;
                ws.derivatives(&next);
            }
        }

        std::mem::swap(&mut cur.r, &mut next);
        cur.count = count;
        t = if last { t_end } else { t + dt };
        steps += 1;
        if steps.is_multiple_of(controls.sample_every) || last {
            samples.push(sample_of(t, &cur.r, &ws.d1, &ws.d2, cur.count));
        }
    }

    Ok(RunRecord {
        law: law.label(),
        samples,
        events,
        final_curve: PolarCurve::new(cur.r)?,
        t_final: t,
        steps,
        horizon_clamped,
    })
}

/// Sub-step state `start + s` and its count.
fn substep(ws: &mut FlowWorkspace, law: &SpeedLaw, start: &[f64], s: f64, t: f64) -> Result<Snapshot> {
    let mut r = vec![0.0; start.len()];
    if s > 0.0 {
        ws.rk4(law, start, s, t, &mut r)?;
        check_state(&r, t + s)?;
    } else {
        r.copy_from_slice(start);
    }
    ws.derivatives(&r);
    let count = count_from_grid(&r, &ws.d1, &ws.d2);
    Ok(Snapshot { r, count })
}

fn critical_set(ws: &mut FlowWorkspace, r: &[f64]) -> CriticalSet {
    ws.derivatives(r);
    locate_from_grid(r, &ws.d1, &ws.d2, 1e-12)
}

/// Finds every count change inside the step `[t, t + dt]` taken from `start`.
fn locate_events(
    ws: &mut FlowWorkspace,
    law: &SpeedLaw,
    start: &Snapshot,
    t: f64,
    dt: f64,
    tol: f64,
    events: &mut Vec<BifurcationEvent>,
) -> Result<()> {
    let end = substep(ws, law, &start.r, dt, t)?;
    let mut lo_s = 0.0;
    let mut lo_count = start.count;
    for _ in 0..16 {
        if lo_count == end.count {
            return Ok(());
        }
        // First change after lo_s.
        let (mut a, mut b) = (lo_s, dt);
        let mut guard = 0;
        while b - a > tol {
            let mid = 0.5 * (a + b);
            if substep(ws, law, &start.r, mid, t)?.count == lo_count {
                a = mid;
            } else {
                b = mid;
            }
            guard += 1;
            if guard > 200 {
                return Err(Error::EventLocalization(format!(
                    "no convergence bracketing event in [{}, {}]",
                    t + a,
                    t + b
                )));
            }
        }
        let lo = substep(ws, law, &start.r, a, t)?;
        let hi = substep(ws, law, &start.r, b, t)?;
        let before = critical_set(ws, &lo.r);
        let after = critical_set(ws, &hi.r);
        let found = classify_change(law, &lo.r, &before, &after, t + 0.5 * (a + b))?;
        if found.is_empty() {
            return Err(Error::EventLocalization(format!(
                "count changed {:?} → {:?} in [{}, {}] but no unmatched critical points; \
                 before: {:?}; after: {:?}",
                lo.count,
                hi.count,
                t + a,
                t + b,
                before.points(),
                after.points()
            )));
        }
        events.extend(found);
        lo_s = b;
        lo_count = hi.count;
    }
    Err(Error::EventLocalization(format!(
        "too many count changes inside one step at t = {t}"
    )))
}

/// Matches critical points across an event bracket and turns the unmatched
/// ones into events.
fn classify_change(
    law: &SpeedLaw,
    r_before: &[f64],
    before: &CriticalSet,
    after: &CriticalSet,
    t_star: f64,
) -> Result<Vec<BifurcationEvent>> {
    let m = r_before.len();
    let cutoff = 3.0 * TAU / m as f64;
    let (a, b) = (before.points(), after.points());
    let (used_a, used_b) = match_points(a, b, cutoff);
    let lost: Vec<&CriticalPoint> = a.iter().zip(&used_a).filter(|(_, u)| !**u).map(|(p, _)| p).collect();
    let born: Vec<&CriticalPoint> = b.iter().zip(&used_b).filter(|(_, u)| !**u).map(|(p, _)| p).collect();

    let interp = TrigInterpolant::from_values(r_before);
    let max_r = r_before.iter().copied().fold(0.0, f64::max);
    let mut out = Vec::new();
    for (group, kind, side) in [
        (lost, EventKind::Annihilation, a),
        (born, EventKind::Creation, b),
    ] {
        for cluster in cluster_angles(&group, cutoff) {
            if cluster.len() % 2 == 1 {
                return Err(Error::EventLocalization(format!(
                    "odd cluster of {} unmatched critical points near t = {t_star}: {cluster:?}",
                    cluster.len()
                )));
            }
            // A surviving point inside the cluster (the center of a
            // pitchfork) belongs to the event location.
            let mut members = cluster.clone();
            for p in side {
                let inside = cluster.iter().any(|&c| angular_distance(c, p.angle) < cutoff);
                if inside && !cluster.contains(&p.angle) {
                    members.push(p.angle);
                }
            }
            let phi = circular_mean(&members);
            let r = interp.eval(0, phi);
            let r3 = interp.eval(3, phi);
            let size = cluster.len() as i32;
            out.push(BifurcationEvent {
                t_star,
                phi_star: phi,
                kind,
                omega_observed: match kind {
                    EventKind::Annihilation => 1,
                    EventKind::Creation => -1,
                },
                omega_predicted: predicted_omega(law, 1.0 / r),
                topology: if r3.abs() < PITCHFORK_REL * max_r {
                    Topology::PitchforkLike
                } else {
                    Topology::SaddleNode
                },
                count_change: match kind {
                    EventKind::Annihilation => -size,
                    EventKind::Creation => size,
                },
            });
        }
    }
    out.sort_by(|x, y| x.phi_star.total_cmp(&y.phi_star));
    Ok(out)
}

/// Greedy nearest-angle matching with a distance cutoff.
fn match_points(a: &[CriticalPoint], b: &[CriticalPoint], cutoff: f64) -> (Vec<bool>, Vec<bool>) {
    let mut pairs = Vec::new();
    for (i, p) in a.iter().enumerate() {
        for (j, q) in b.iter().enumerate() {
            let d = angular_distance(p.angle, q.angle);
            if d < cutoff && p.kind == q.kind {
                pairs.push((d, i, j));
            }
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));
    let (mut ua, mut ub) = (vec![false; a.len()], vec![false; b.len()]);
    for (_, i, j) in pairs {
        if !ua[i] && !ub[j] {
            ua[i] = true;
            ub[j] = true;
        }
    }
    (ua, ub)
}

/// Groups angles whose circular gaps are below `gap`.
fn cluster_angles(points: &[&CriticalPoint], gap: f64) -> Vec<Vec<f64>> {
    let mut angles: Vec<f64> = points.iter().map(|p| p.angle).collect();
    angles.sort_by(f64::total_cmp);
    let n = angles.len();
    if n == 0 {
        return Vec::new();
    }
    // Start after the widest gap so no cluster wraps.
    let start = (0..n)
        .max_by(|&i, &j| {
            let gi = (angles[(i + 1) % n] - angles[i]).rem_euclid(TAU);
            let gj = (angles[(j + 1) % n] - angles[j]).rem_euclid(TAU);
            gi.total_cmp(&gj)
        })
        .map(|i| (i + 1) % n)
        .unwrap_or(0);
    let mut clusters: Vec<Vec<f64>> = Vec::new();
    for k in 0..n {
        let phi = angles[(start + k) % n];
        match clusters.last_mut() {
            Some(c) if angular_distance(*c.last().unwrap(), phi) < gap => c.push(phi),
            _ => clusters.push(vec![phi]),
        }
    }
    clusters
}

fn circular_mean(angles: &[f64]) -> f64 {
    let (s, c) = angles
        .iter()
        .fold((0.0, 0.0), |(s, c), a| (s + a.sin(), c + a.cos()));
    s.atan2(c).rem_euclid(TAU)
}

/// Rounded rectangle `((|cos φ|/a)^{2n} + (|sin φ|/b)^{2n})^{−1/(2n)}`,
/// distorted by the factor `1 + ε sin(2φ + ψ)`.
pub fn scenario_superellipse(a: f64, b: f64, n: f64, eps: f64, psi: f64, m: usize) -> Result<PolarCurve> {
    if !(b > 0.0 && a >= b && a.is_finite()) {
        return domain(format!("superellipse needs a ≥ b > 0, got a = {a}, b = {b}"));
    }
    if !(n >= 1.0 && n.is_finite()) {
        return domain(format!("superellipse exponent must be ≥ 1, got {n}"));
    }
    if !(0.0..1.0).contains(&eps) || !psi.is_finite() {
        return domain(format!("distortion needs 0 ≤ ε < 1 and finite ψ, got ε = {eps}, ψ = {psi}"));
    }
    PolarCurve::from_fn(m, |phi| {
        let e = 2.0 * n;
        let base = ((phi.cos().abs() / a).powf(e) + (phi.sin().abs() / b).powf(e)).powf(-1.0 / e);
        base * (1.0 + eps * (2.0 * phi + psi).sin())
    })
}
