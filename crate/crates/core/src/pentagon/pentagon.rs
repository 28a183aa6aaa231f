//! The mirror-symmetric pentagon ("house" shape) under Eikonal abrasion:
//! its two-parameter shape space, the curves where the equilibrium count
//! changes, and the classification of trajectories by their count jumps.

use std::f64::consts::FRAC_PI_2;

use rayon::prelude::*;
use serde::Serialize;

use super::polygon::{incircle_of_lines, ConvexPolygon, OffsetState, Point};
use crate::error::{domain, Error, Result};
use crate::io::csv_float;

/// Unit-width pentagon with vertices (counter-clockwise)
/// `(−½, 0), (½, 0), (½, a), (0, a + h), (−½, a)`, where the roof edges
/// rise at angle `α` (`h = ½ tan α`) and the walls have height `a = tan β`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Pentagon {
    pub alpha: f64,
    pub beta: f64,
}

fn check_angle(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0 && x < FRAC_PI_2) {
        return domain(format!("{name} must lie in (0, π/2), got {x}"));
    }
    Ok(())
}

impl Pentagon {
    fn raw(alpha: f64, beta: f64) -> Self {
        Self { alpha, beta }
    }

    pub fn alpha_bar(&self) -> f64 {
        self.alpha / FRAC_PI_2
    }

    pub fn beta_bar(&self) -> f64 {
        self.beta / FRAC_PI_2
    }

    /// Roof height above the shoulders.
    pub fn h(&self) -> f64 {
        0.5 * self.alpha.tan()
    }

    /// Wall height.
    pub fn a(&self) -> f64 {
        self.beta.tan()
    }

    /// Depth below the shoulders of the lowest axis point whose
    /// perpendicular foot still lands on the roof edges.
    pub fn c(&self) -> f64 {
        1.0 / (2.0 * self.alpha.tan())
    }

    pub fn area_formula(&self) -> f64 {
        0.25 * self.alpha.tan() + self.beta.tan()
    }

    pub fn vertices(&self) -> Vec<Point> {
        let (a, h) = (self.a(), self.h());
        vec![[-0.5, 0.0], [0.5, 0.0], [0.5, a], [0.0, a + h], [-0.5, a]]
    }

    pub fn polygon(&self) -> Result<ConvexPolygon> {
        ConvexPolygon::new(self.vertices())
    }

    /// Axis point at shoulder height.
    pub fn p1(&self) -> Point {
        [0.0, self.a()]
    }

    /// Axis point a depth `c` below the shoulders.
    pub fn p2(&self) -> Point {
        [0.0, self.a() - self.c()]
    }

    /// Reads `(α, β)` back from a five-vertex polygon in the vertex order
    /// of [`Pentagon::vertices`], at any position and scale.
    pub fn from_polygon(poly: &ConvexPolygon) -> Result<Self> {
        let v = poly.vertices();
        if v.len() != 5 {
            return Err(Error::Reconstruction(format!(
                "expected 5 vertices, got {}",
                v.len()
            )));
        }
        let width = v[1][0] - v[0][0];
        if !(width > 0.0) {
            return Err(Error::Reconstruction("base has no width".into()));
        }
        let a = (0.5 * (v[2][1] + v[4][1]) - 0.5 * (v[0][1] + v[1][1])) / width;
        let h = (v[3][1] - 0.5 * (v[2][1] + v[4][1])) / width;
        Ok(Self::raw((2.0 * h).atan(), a.atan()))
    }
}

/// Curves in the `(α, β)` plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum BetaCurve {
    /// Centroid at shoulder height.
    G1,
    /// Centroid at the lower roof-foot limit.
    G2,
    /// Incircle tangent to all five edges: shapes that abrade self-similarly.
    B3,
    /// Ultimate point at shoulder height.
    U1,
    /// Ultimate point at the lower roof-foot limit.
    U2,
}

pub fn beta_curve(which: BetaCurve, alpha: f64) -> Result<f64> {
    check_angle("α", alpha)?;
    let t = alpha.tan();
    Ok(match which {
        BetaCurve::G1 => (t / (2.0 * 3f64.sqrt())).atan(),
        BetaCurve::G2 => ((1.0 + (1.0 + t.powi(4) / 3.0 + t * t).sqrt()) / (2.0 * t)).atan(),
        BetaCurve::B3 => (0.5 * (std::f64::consts::FRAC_PI_4 - alpha / 2.0).tan() + 0.5).atan(),
        BetaCurve::U1 => (alpha.sin() / 2.0).atan(),
        BetaCurve::U2 => (0.5 * (t + 1.0) / t).atan(),
    })
}

/// The self-similar curve written with `tan α` and `sec α`.
pub fn beta3_secant_form(alpha: f64) -> Result<f64> {
    check_angle("α", alpha)?;
    let t = alpha.tan();
    Ok((0.5 * (1.0 + (t * t + 1.0).sqrt() - t)).atan())
}

/// Constructs the pentagon after checking the construction against the
/// area formula, the centroid loci and the incircle-tangency locus at this α.
pub fn build_pentagon(alpha: f64, beta: f64) -> Result<Pentagon> {
    check_angle("α", alpha)?;
    check_angle("β", beta)?;
    let p = Pentagon::raw(alpha, beta);
    let area = p.polygon()?.area();
    if (area - p.area_formula()).abs() > 1e-10 * p.area_formula().max(1.0) {
        return Err(Error::Reconstruction(format!(
            "area {area} differs from ¼tan α + tan β = {}",
            p.area_formula()
        )));
    }
    let tol = 1e-9;
    for (curve, point) in [(BetaCurve::G1, 1usize), (BetaCurve::G2, 2)] {
        let q = Pentagon::raw(alpha, beta_curve(curve, alpha)?);
        let g = q.polygon()?.centroid();
        let target = if point == 1 { q.p1() } else { q.p2() };
        if (g[1] - target[1]).abs() > tol * q.a().max(1.0) || g[0].abs() > tol {
            return Err(Error::Reconstruction(format!(
                "centroid {g:?} on {curve:?} misses P{point} = {target:?}"
            )));
        }
    }
    let q = Pentagon::raw(alpha, beta_curve(BetaCurve::B3, alpha)?);
    let poly = q.polygon()?;
    let (center, r) = poly.incircle();
    for (i, d) in poly.edge_distances(center).iter().enumerate() {
        if (d - r).abs() > tol {
            return Err(Error::Reconstruction(format!(
                "incircle on the self-similar curve misses edge {i}: distance {d} vs radius {r}"
            )));
        }
    }
    Ok(p)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReferenceModel {
    /// The ultimate point of the initial shape, held fixed.
    FixedUltimate,
    /// The centroid of the current shape.
    Centroid,
}

impl ReferenceModel {
    /// The two curves bounding the `N = 10` region.
    pub fn curves(&self) -> (BetaCurve, BetaCurve) {
        match self {
            ReferenceModel::FixedUltimate => (BetaCurve::U1, BetaCurve::U2),
            ReferenceModel::Centroid => (BetaCurve::G1, BetaCurve::G2),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            ReferenceModel::FixedUltimate => "fixed",
            ReferenceModel::Centroid => "centroid",
        }
    }
}

/// Sign of `dβ/dt` from one tiny offset step.
pub fn flow_direction(alpha: f64, beta: f64) -> Result<i8> {
    Ok(flow_step_delta(alpha, beta)?.0)
}

/// `(sgn Δβ, Δβ)` for an offset of `10⁻⁶` of the inradius; the step is
/// halved while it jumps across the self-similar curve.
pub fn flow_step_delta(alpha: f64, beta: f64) -> Result<(i8, f64)> {
    let p = build_pentagon(alpha, beta)?;
    let poly = p.polygon()?;
    let b3 = beta_curve(BetaCurve::B3, alpha)?;
    let mut t = 1e-6 * poly.inradius();
    for _ in 0..40 {
        let next = Pentagon::from_polygon(&poly.eikonal_offset(t)?)?;
        let delta = next.beta - beta;
        let crossed = (beta - b3) * (next.beta - b3) < 0.0;
        if !crossed {
            let s = if delta.abs() < 1e-9 {
                0
            } else if delta > 0.0 {
                1
            } else {
                -1
            };
            return Ok((s, delta));
        }
        t *= 0.5;
    }
    Err(Error::EventLocalization(format!(
        "offset step keeps crossing the self-similar curve at (α, β) = ({alpha}, {beta})"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum TrajectoryClass {
    /// No count jump.
    T0,
    /// One downward jump.
    T1,
    /// One upward then one downward jump.
    T2,
}

impl TrajectoryClass {
    pub fn index(&self) -> usize {
        match self {
            TrajectoryClass::T0 => 0,
            TrajectoryClass::T1 => 1,
            TrajectoryClass::T2 => 2,
        }
    }

    fn from_jumps(jumps: &[i64]) -> Option<Self> {
        match jumps {
            [] => Some(TrajectoryClass::T0),
            [-4] => Some(TrajectoryClass::T1),
            [4, -4] => Some(TrajectoryClass::T2),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ClassifyMethod {
    Analytic,
    Simulate,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryOutcome {
    pub class: TrajectoryClass,
    /// Signed jumps of `N` in time order.
    pub jumps: Vec<i64>,
    /// The start lay on a boundary curve or on the self-similar curve.
    pub on_boundary: bool,
}

/// Classifies the trajectory from normalized coordinates `ᾱ = 2α/π`, `β̄ = 2β/π`.
pub fn classify_trajectory(
    alpha_bar: f64,
    beta_bar: f64,
    model: ReferenceModel,
    method: ClassifyMethod,
) -> Result<TrajectoryOutcome> {
    if !(alpha_bar > 0.0 && alpha_bar < 1.0 && beta_bar > 0.0 && beta_bar < 1.0) {
        return domain(format!(
            "(ᾱ, β̄) must lie in (0, 1)², got ({alpha_bar}, {beta_bar})"
        ));
    }
    let (alpha, beta) = (alpha_bar * FRAC_PI_2, beta_bar * FRAC_PI_2);
    match method {
        ClassifyMethod::Analytic => classify_analytic(alpha, beta, model),
        ClassifyMethod::Simulate => classify_simulated(alpha, beta, model),
    }
}

/// `β` moves monotonically away from the self-similar curve at fixed `α`;
/// each boundary curve passed on the way toggles the `N = 10` state.
fn classify_analytic(alpha: f64, beta: f64, model: ReferenceModel) -> Result<TrajectoryOutcome> {
    let (c1, c2) = model.curves();
    let (b1, b2) = (beta_curve(c1, alpha)?, beta_curve(c2, alpha)?);
    let b3 = beta_curve(BetaCurve::B3, alpha)?;
    let eps = 1e-12;
    let on_boundary = [b1, b2, b3].iter().any(|b| (beta - b).abs() < eps);
    let dir = if beta > b3 + eps {
        1.0
    } else if beta < b3 - eps {
        -1.0
    } else {
        0.0
    };
    let (lo, hi) = (b1.min(b2), b1.max(b2));
    // Judge the start from the open side the motion enters.
    let start = beta + dir * 2.0 * eps;
    let mut grey = lo < start && start < hi;
    let mut crossings: Vec<f64> = if dir > 0.0 {
        [lo, hi].into_iter().filter(|&b| b > start).collect()
    } else if dir < 0.0 {
        [lo, hi].into_iter().filter(|&b| b < start).collect()
    } else {
        Vec::new()
    };
    crossings.sort_by(|x, y| ((x - beta).abs()).total_cmp(&(y - beta).abs()));
    let mut jumps = Vec::new();
    for _ in crossings {
        grey = !grey;
        jumps.push(if grey { 4 } else { -4 });
    }
    let class = TrajectoryClass::from_jumps(&jumps).ok_or_else(|| {
        Error::EventLocalization(format!("unexpected jump pattern {jumps:?}"))
    })?;
    Ok(TrajectoryOutcome {
        class,
        jumps,
        on_boundary,
    })
}

/// Offsets the polygon step by step, recounting equilibria each time.
fn classify_simulated(alpha: f64, beta: f64, model: ReferenceModel) -> Result<TrajectoryOutcome> {
    let jumps = simulate_jumps(alpha, beta, model)?;
    let class = TrajectoryClass::from_jumps(&jumps).ok_or_else(|| {
        Error::EventLocalization(format!(
            "unexpected jump pattern {jumps:?} at (α, β) = ({alpha}, {beta})"
        ))
    })?;
    Ok(TrajectoryOutcome {
        class,
        jumps,
        on_boundary: false,
    })
}

/// Fraction of the current inradius offset per simulation step.
const SIM_STEP: f64 = 0.1;
/// Stop once the inradius falls below this fraction of the initial diameter.
const SIM_MIN_INRADIUS: f64 = 1e-9;

/// Count jumps along the simulated abrasion of the pentagon.
///
/// Between steps the foot of the reference on each edge is watched: when a
/// foot enters or leaves its edge during a step, the crossing time is
/// bisected and the count is re-taken between consecutive crossings, so a
/// narrow band of higher count is not stepped over.
pub fn simulate_jumps(alpha: f64, beta: f64, model: ReferenceModel) -> Result<Vec<i64>> {
    let poly = Pentagon::raw(alpha, beta).polygon()?;
    let diam0 = poly.diameter();
    let fixed = poly.incircle().0;
    let reference = |p: &ConvexPolygon| match model {
        ReferenceModel::FixedUltimate => fixed,
        ReferenceModel::Centroid => p.centroid(),
    };
    let feet_inside = |p: &ConvexPolygon| -> Vec<bool> {
        p.foot_parameters(reference(p))
            .into_iter()
            .map(|s| s > 0.0 && s < 1.0)
            .collect()
    };
    let mut n_prev = poly.critical_point_count(reference(&poly))? as i64;
    let mut inside_prev = feet_inside(&poly);
    let mut state = OffsetState::new(&poly);
    let mut jumps = Vec::new();
    let mut sink = Vec::new();
    let mut record = |n: i64, n_prev: &mut i64| {
        if n != *n_prev {
            jumps.push(n - *n_prev);
            *n_prev = n;
        }
    };
    while let Some((_, r_in)) = incircle_of_lines(&state.lines) {
        if r_in < SIM_MIN_INRADIUS * diam0 {
            break;
        }
        let mut step = SIM_STEP * r_in;
        if let Some(tau) = state.next_collapse()? {
            if tau <= step {
                step = if tau > 1e-6 * r_in {
                    // Stop just short; the collapse gets its own tiny step.
                    tau * (1.0 - 1e-9)
                } else {
                    tau + 1e-12 * r_in
                };
            }
        }
        let saved = state.clone();
        match state.advance(step, &mut sink) {
            Ok(()) => {}
            Err(Error::PolygonVanished { .. }) => break,
            Err(e) => return Err(e),
        }
        let Ok(current) = state.polygon() else {
            break;
        };
        let r = reference(&current);
        if !current.contains_strictly(r) {
            break;
        }
        let inside = feet_inside(&current);
        if state.ids == saved.ids && inside != inside_prev {
            let at = |tau: f64| -> Result<ConvexPolygon> {
                let mut s = saved.clone();
                s.advance(tau, &mut Vec::new())?;
                s.polygon()
            };
            let mut times = Vec::new();
            // The shape stays mirror-symmetric, so the right half (base,
            // right wall, right roof) carries every distinct crossing time.
            let right_half = |k: usize| saved.ids[k] <= 2;
            for k in (0..inside.len()).filter(|&k| right_half(k) && inside[k] != inside_prev[k]) {
                let (mut lo, mut hi) = (0.0, step);
                while hi - lo > 1e-13 * step {
                    let mid = 0.5 * (lo + hi);
                    if feet_inside(&at(mid)?)[k] == inside_prev[k] {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                times.push(0.5 * (lo + hi));
            }
            times.sort_by(f64::total_cmp);
            times.dedup_by(|b, a| *b - *a < 1e-12 * step);
            for w in 0..times.len() {
                let end = times.get(w + 1).copied().unwrap_or(step);
                let p = at(0.5 * (times[w] + end))?;
                let n = p.critical_point_count(reference(&p))? as i64;
                record(n, &mut n_prev);
            }
        }
        let n = current.critical_point_count(r)? as i64;
        record(n, &mut n_prev);
        inside_prev = inside;
        if current.len() < 4 {
            break;
        }
    }
    Ok(jumps)
}

/// Classes on a `resolution × resolution` grid of cell centers and the
/// area fraction of each class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionMap {
    pub model: ReferenceModel,
    pub resolution: usize,
    /// Row-major by `β̄` (outer) then `ᾱ` (inner).
    #[serde(skip)]
    pub classes: Vec<TrajectoryClass>,
    pub q: [f64; 3],
}

impl RegionMap {
    pub fn cell_center(&self, i_alpha: usize, j_beta: usize) -> (f64, f64) {
        let r = self.resolution as f64;
        ((i_alpha as f64 + 0.5) / r, (j_beta as f64 + 0.5) / r)
    }

    pub fn class_at(&self, i_alpha: usize, j_beta: usize) -> TrajectoryClass {
        self.classes[j_beta * self.resolution + i_alpha]
    }

    /// `alpha_bar,beta_bar,class` rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.classes.len() * 48);
        out.push_str("alpha_bar,beta_bar,class\n");
        for j in 0..self.resolution {
            for i in 0..self.resolution {
                let (a, b) = self.cell_center(i, j);
                out.push_str(&csv_float(a));
                out.push(',');
                out.push_str(&csv_float(b));
                out.push(',');
                out.push_str(match self.class_at(i, j) {
                    TrajectoryClass::T0 => "T0",
                    TrajectoryClass::T1 => "T1",
                    TrajectoryClass::T2 => "T2",
                });
                out.push('\n');
            }
        }
        out
    }
}

/// Samples of the model's boundary curves and the self-similar curve in
/// normalized coordinates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSamples {
    pub alpha_bar: Vec<f64>,
    pub beta1_bar: Vec<f64>,
    pub beta2_bar: Vec<f64>,
    pub beta3_bar: Vec<f64>,
}

pub fn curve_samples(model: ReferenceModel, count: usize) -> Result<CurveSamples> {
    let (c1, c2) = model.curves();
    let mut s = CurveSamples {
        alpha_bar: Vec::with_capacity(count),
        beta1_bar: Vec::with_capacity(count),
        beta2_bar: Vec::with_capacity(count),
        beta3_bar: Vec::with_capacity(count),
    };
    for k in 0..count {
        let ab = (k as f64 + 0.5) / count as f64;
        let alpha = ab * FRAC_PI_2;
        s.alpha_bar.push(ab);
        s.beta1_bar.push(beta_curve(c1, alpha)? / FRAC_PI_2);
        s.beta2_bar.push(beta_curve(c2, alpha)? / FRAC_PI_2);
        s.beta3_bar.push(beta_curve(BetaCurve::B3, alpha)? / FRAC_PI_2);
    }
    Ok(s)
}

/// Subdivision per axis for cells on a class boundary.
const REFINE: usize = 8;

/// Analytic classification of every cell center; cells whose neighbors
/// differ are re-evaluated on a `REFINE × REFINE` subgrid.
pub fn region_areas(model: ReferenceModel, resolution: usize) -> Result<RegionMap> {
    if resolution < 512 {
        return Err(Error::Usage(format!("resolution must be at least 512, got {resolution}")));
    }
    let n = resolution;
    let classify = |ab: f64, bb: f64| -> Result<TrajectoryClass> {
        Ok(classify_trajectory(ab, bb, model, ClassifyMethod::Analytic)?.class)
    };
    let classes: Vec<TrajectoryClass> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % n, idx / n);
            classify((i as f64 + 0.5) / n as f64, (j as f64 + 0.5) / n as f64)
        })
        .collect::<Result<_>>()?;
    let per_cell: Vec<[f64; 3]> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % n, idx / n);
            let c = classes[idx];
            let boundary = [(-1i64, 0i64), (1, 0), (0, -1), (0, 1)].iter().any(|(di, dj)| {
                let (ii, jj) = (i as i64 + di, j as i64 + dj);
                ii >= 0
                    && jj >= 0
                    && (ii as usize) < n
                    && (jj as usize) < n
                    && classes[jj as usize * n + ii as usize] != c
            });
            let mut w = [0.0; 3];
            if !boundary {
                w[c.index()] = 1.0;
                return Ok(w);
            }
            let sub = 1.0 / (REFINE * REFINE) as f64;
            for si in 0..REFINE {
                for sj in 0..REFINE {
                    let ab = (i as f64 + (si as f64 + 0.5) / REFINE as f64) / n as f64;
                    let bb = (j as f64 + (sj as f64 + 0.5) / REFINE as f64) / n as f64;
                    w[classify(ab, bb)?.index()] += sub;
                }
            }
            Ok(w)
        })
        .collect::<Result<_>>()?;
    let mut q = [0.0; 3];
    for w in &per_cell {
        for k in 0..3 {
            q[k] += w[k];
        }
    }
    let total = (n * n) as f64;
    for v in &mut q {
        *v /= total;
    }
    Ok(RegionMap {
        model,
        resolution,
        classes,
        q,
    })
}

/// Agreement between the analytic and the simulated classifier.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifierComparison {
    pub model: ReferenceModel,
    pub resolution: usize,
    pub cells: usize,
    pub agree: usize,
    pub fraction: f64,
    /// A few disagreeing cells `(ᾱ, β̄)` for inspection.
    pub examples: Vec<(f64, f64)>,
}

/// Runs the simulated classifier on every cell center of `map`.
pub fn compare_classifiers(map: &RegionMap) -> ClassifierComparison {
    let n = map.resolution;
    let agree_flags: Vec<bool> = (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % n, idx / n);
            let (ab, bb) = map.cell_center(i, j);
            matches!(
                classify_trajectory(ab, bb, map.model, ClassifyMethod::Simulate),
                Ok(o) if o.class == map.classes[idx]
            )
        })
        .collect();
    let agree = agree_flags.iter().filter(|a| **a).count();
    let examples = agree_flags
        .iter()
        .enumerate()
        .filter(|(_, a)| !**a)
        .take(10)
        .map(|(idx, _)| map.cell_center(idx % n, idx / n))
        .collect();
    ClassifierComparison {
        model: map.model,
        resolution: n,
        cells: n * n,
        agree,
        fraction: agree as f64 / (n * n) as f64,
        examples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g1_at_quarter_pi() {
        let v = beta_curve(BetaCurve::G1, std::f64::consts::FRAC_PI_4).unwrap();
        assert!((v - 0.281035).abs() < 1e-6);
        assert!(beta_curve(BetaCurve::G1, 0.0).is_err());
        assert!(beta_curve(BetaCurve::G1, FRAC_PI_2).is_err());
    }

    #[test]
    fn b3_and_u1_share_limit_at_right_angle() {
        let a = FRAC_PI_2 - 1e-9;
        let target = 0.5f64.atan();
        assert!((beta_curve(BetaCurve::B3, a).unwrap() - target).abs() < 1e-8);
        assert!((beta_curve(BetaCurve::U1, a).unwrap() - target).abs() < 1e-8);
    }

    #[test]
    fn b3_forms_agree() {
        for k in 1..1000 {
            let a = k as f64 / 1000.0 * FRAC_PI_2;
            let x = beta_curve(BetaCurve::B3, a).unwrap();
            let y = beta3_secant_form(a).unwrap();
            assert!((x - y).abs() < 1e-12, "α = {a}: {x} vs {y}");
        }
    }

    #[test]
    fn build_validates_and_rejects_domain() {
        build_pentagon(0.7, 0.4).unwrap();
        assert!(build_pentagon(0.7, 0.0).is_err());
        assert!(build_pentagon(FRAC_PI_2, 0.3).is_err());
    }

    #[test]
    fn polygon_round_trip() {
        let p = Pentagon::raw(0.6, 0.9);
        let poly = p.polygon().unwrap().transformed([-3.0, 2.0], 0.37);
        let q = Pentagon::from_polygon(&poly).unwrap();
        assert!((q.alpha - 0.6).abs() < 1e-12 && (q.beta - 0.9).abs() < 1e-12);
    }

    #[test]
    fn direction_is_away_from_self_similar_curve() {
        for a in [0.3, 0.8, 1.2] {
            let b3 = beta_curve(BetaCurve::B3, a).unwrap();
            assert_eq!(flow_direction(a, b3 + 0.1).unwrap(), 1);
            assert_eq!(flow_direction(a, b3 - 0.1).unwrap(), -1);
            let (_, d) = flow_step_delta(a, b3).unwrap();
            assert!(d.abs() < 1e-9);
        }
    }

    #[test]
    fn grey_region_has_ten_equilibria() {
        let a = 0.8;
        let (u1, u2) = (
            beta_curve(BetaCurve::U1, a).unwrap(),
            beta_curve(BetaCurve::U2, a).unwrap(),
        );
        let inside = Pentagon::raw(a, 0.5 * (u1 + u2)).polygon().unwrap();
        assert_eq!(inside.critical_point_count(inside.incircle().0).unwrap(), 10);
        let below = Pentagon::raw(a, 0.5 * u1).polygon().unwrap();
        assert_eq!(below.critical_point_count(below.incircle().0).unwrap(), 6);
    }

    #[test]
    fn fixed_model_classes() {
        let ab = 0.5;
        let a = ab * FRAC_PI_2;
        let mid = 0.5 * (beta_curve(BetaCurve::U1, a).unwrap() + beta_curve(BetaCurve::B3, a).unwrap());
        for method in [ClassifyMethod::Analytic, ClassifyMethod::Simulate] {
            let o = classify_trajectory(ab, mid / FRAC_PI_2, ReferenceModel::FixedUltimate, method).unwrap();
            assert_eq!(o.class, TrajectoryClass::T1, "{method:?}");
            let o = classify_trajectory(ab, 0.05, ReferenceModel::FixedUltimate, method).unwrap();
            assert_eq!(o.class, TrajectoryClass::T0, "{method:?}");
        }
    }
}
