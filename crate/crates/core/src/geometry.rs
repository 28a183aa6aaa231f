//! Star-shaped planar curves in polar form `r(φ)` about a fixed origin, their
//! curvature, and the critical points (extrema) of the radial distance.

use std::cell::OnceCell;
use std::f64::consts::TAU;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::spectral::{self, SpectralOps, TrigInterpolant};

/// Default angular tolerance for root refinement.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
/// Relative threshold (to `max|r|`) below which `|r_φφ|` at a root is flagged.
pub const NEAR_DEGENERATE_REL: f64 = 1e-6;
/// Relative threshold on `max|r_φ|` below which the whole curve is a circle.
const DEGENERATE_CURVE_REL: f64 = 1e-12;
pub const DEFAULT_GRID: usize = 1024;

/// Radial value and its first three angular derivatives at one angle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveJet {
    pub r: f64,
    pub r_phi: f64,
    pub r_phiphi: f64,
    pub r_phiphiphi: f64,
}

impl CurveJet {
    pub fn new(r: f64, r_phi: f64, r_phiphi: f64, r_phiphiphi: f64) -> Self {
        Self {
            r,
            r_phi,
            r_phiphi,
            r_phiphiphi,
        }
    }
}

/// Curvature of a polar curve from its jet:
/// `(r² + 2r_φ² − r r_φφ) / (r² + r_φ²)^{3/2}`.
pub fn polar_curvature(jet: &CurveJet) -> Result<f64> {
    if !(jet.r > 0.0) {
        return domain(format!("polar curvature needs r > 0, got {}", jet.r));
    }
    Ok(curvature_unchecked(jet.r, jet.r_phi, jet.r_phiphi))
}

#[inline]
pub(crate) fn curvature_unchecked(r: f64, rp: f64, rpp: f64) -> f64 {
    let q = r * r + rp * rp;
    // Dividing by q first keeps the flat case exactly 1/r.
    (r * r + 2.0 * rp * rp - r * rpp) / q / q.sqrt()
}

/// Ratio of normal to radial displacement, `sqrt((r² + r_φ²)/r²) = 1/cos γ`.
pub fn tangential_factor(r: f64, r_phi: f64) -> Result<f64> {
    if !(r > 0.0) {
        return domain(format!("tangential factor needs r > 0, got {r}"));
    }
    Ok(tangential_unchecked(r, r_phi))
}

#[inline]
pub(crate) fn tangential_unchecked(r: f64, rp: f64) -> f64 {
    (r * r + rp * rp).sqrt() / r
}

/// A closed star-shaped curve sampled at `M` uniform angles `φ_j = 2πj/M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolarCurve {
    samples: Vec<f64>,
}

impl PolarCurve {
    pub fn new(samples: Vec<f64>) -> Result<Self> {
        let m = samples.len();
        if m < 4 || !m.is_power_of_two() {
            return Err(Error::Usage(format!(
                "grid size must be a power of two ≥ 4, got {m}"
            )));
        }
        if let Some((j, r)) = samples
            .iter()
            .enumerate()
            .find(|(_, r)| !(**r > 0.0) || !r.is_finite())
        {
            return domain(format!(
                "curve must be star-shaped about the origin: r[{j}] = {r}"
            ));
        }
        Ok(Self { samples })
    }

    /// Samples `f` on an `m`-point grid.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new((0..m).map(|j| f(TAU * j as f64 / m as f64)).collect())
    }

    pub fn circle(m: usize, radius: f64) -> Result<Self> {
        Self::from_fn(m, |_| radius)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.len() as f64
    }

    pub fn angle(&self, j: usize) -> f64 {
        self.spacing() * j as f64
    }

    pub fn max_radius(&self) -> f64 {
        self.samples.iter().copied().fold(0.0, f64::max)
    }

    /// Band-limited interpolation onto an `m`-point grid.
    pub fn resample(&self, m: usize) -> Result<Self> {
        Self::new(spectral::resample(&self.samples, m)?)
    }

    pub fn interpolant(&self) -> TrigInterpolant {
        TrigInterpolant::from_values(&self.samples)
    }

    /// Angular derivative of order 1..=3 at every node.
    pub fn derivative(&self, order: usize) -> Result<Vec<f64>> {
        differentiate(self, order)
    }

    /// Curvature at every node.
    pub fn curvature(&self) -> Vec<f64> {
        let m = self.len();
        let mut ops = SpectralOps::new(m);
        let (mut d1, mut d2) = (vec![0.0; m], vec![0.0; m]);
        ops.first_second(&self.samples, &mut d1, &mut d2);
        self.samples
            .iter()
            .zip(d1.iter().zip(&d2))
            .map(|(&r, (&p, &q))| curvature_unchecked(r, p, q))
            .collect()
    }

    /// Area of the inscribed polygon through the samples (shoelace).
    pub fn area(&self) -> f64 {
        shoelace_area(&self.samples)
    }
}

pub(crate) fn shoelace_area(samples: &[f64]) -> f64 {
    let m = samples.len();
    let s = (TAU / m as f64).sin();
    0.5 * s
        * (0..m)
            .map(|j| samples[j] * samples[(j + 1) % m])
            .sum::<f64>()
}

/// Spectral angular derivative of the given order (1..=3) on the grid.
pub fn differentiate(curve: &PolarCurve, order: usize) -> Result<Vec<f64>> {
    if !(1..=3).contains(&order) {
        return Err(Error::Usage(format!(
            "derivative order must be 1..=3, got {order}"
        )));
    }
    if curve.len() < 16 {
        return Err(Error::Usage(format!(
            "differentiation needs at least 16 grid points, got {}",
            curve.len()
        )));
    }
    let mut ops = SpectralOps::new(curve.len());
    let mut out = vec![0.0; curve.len()];
    ops.derivative(curve.samples(), order, &mut out);
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalKind {
    Minimum,
    Maximum,
}

/// One extremum of `r(φ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalPoint {
    pub angle: f64,
    pub kind: CriticalKind,
    pub value: f64,
    /// `|r_φφ|` at the root fell below the near-degenerate threshold; the
    /// kind still follows the sign change of `r_φ`.
    pub near_degenerate: bool,
}

/// Result of a critical-point search.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", content = "points", rename_all = "snake_case")]
pub enum CriticalSet {
    /// `r_φ ≡ 0`: every point is critical (a circle about its center).
    DegenerateCircle,
    Points(Vec<CriticalPoint>),
}

impl CriticalSet {
    pub fn is_degenerate(&self) -> bool {
        matches!(self, CriticalSet::DegenerateCircle)
    }

    /// Number of isolated critical points; `None` for the degenerate circle.
    pub fn count(&self) -> Option<usize> {
        match self {
            CriticalSet::DegenerateCircle => None,
            CriticalSet::Points(p) => Some(p.len()),
        }
    }

    pub fn points(&self) -> &[CriticalPoint] {
        match self {
            CriticalSet::DegenerateCircle => &[],
            CriticalSet::Points(p) => p,
        }
    }
}

#[inline]
fn neg(x: f64) -> bool {
    x < 0.0
}

/// Root of `f` on `[a, b]` given the sign of `f(a)`; plain bisection.
pub(crate) fn bisect(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, a_neg: bool, tol: f64) -> f64 {
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        let mid = 0.5 * (a + b);
        if neg(f(mid)) == a_neg {
            a = mid;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// How the roots of `r_φ` inside one grid cell were detected.
#[derive(Debug, Clone, Copy)]
enum CellRoots {
    /// Sign change of `r_φ` between the cell's nodes.
    Single { cell: usize },
    /// Two roots hidden inside the cell around an extremum of `r_φ` at `e`.
    Pair { cell: usize, extremum: f64 },
}

/// Grid scan shared by counting and locating.
///
/// `rp`, `rpp` are `r_φ`, `r_φφ` at the nodes; `interp` supplies off-grid
/// values and is only built when a cell might hide a root pair.
struct RootScan<'a> {
    rp: &'a [f64],
    rpp: &'a [f64],
    h: f64,
    interp: OnceCell<TrigInterpolant>,
    samples: &'a [f64],
}

impl<'a> RootScan<'a> {
    fn new(samples: &'a [f64], rp: &'a [f64], rpp: &'a [f64]) -> Self {
        Self {
            rp,
            rpp,
            h: TAU / samples.len() as f64,
            interp: OnceCell::new(),
            samples,
        }
    }

    fn interp(&self) -> &TrigInterpolant {
        self.interp
            .get_or_init(|| TrigInterpolant::from_values(self.samples))
    }

    fn is_degenerate(&self) -> bool {
        let max_r = self.samples.iter().copied().fold(0.0, f64::max);
        let max_rp = self.rp.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        max_rp <= DEGENERATE_CURVE_REL * max_r
    }

    fn cells(&self) -> Vec<CellRoots> {
        let m = self.rp.len();
        let mut out = Vec::new();
        for cell in 0..m {
            let next = (cell + 1) % m;
            let (f0, f1) = (self.rp[cell], self.rp[next]);
            if neg(f0) != neg(f1) {
                out.push(CellRoots::Single { cell });
                continue;
            }
            let (g0, g1) = (self.rpp[cell], self.rpp[next]);
            // r_φ must turn back toward zero inside the cell.
            let turns = if neg(f0) {
                g0 > 0.0 && g1 < 0.0
            } else {
                g0 < 0.0 && g1 > 0.0
            };
            if !turns {
                continue;
            }
            let reach = 2.0 * self.h * g0.abs().max(g1.abs());
            if f0.abs().min(f1.abs()) > reach {
                continue;
            }
            let a = self.h * cell as f64;
            let b = a + self.h;
            let interp = self.interp();
            let e = bisect(|p| interp.eval(2, p), a, b, neg(g0), 1e-14);
            if neg(interp.eval(1, e)) != neg(f0) {
                out.push(CellRoots::Pair { cell, extremum: e });
            }
        }
        out
    }

    fn count(&self) -> usize {
        self.cells()
            .iter()
            .map(|c| match c {
                CellRoots::Single { .. } => 1,
                CellRoots::Pair { .. } => 2,
            })
            .sum()
    }

    fn locate(&self, tol: f64) -> Vec<CriticalPoint> {
        let cells = self.cells();
        if cells.is_empty() {
            return Vec::new();
        }
        let interp = self.interp();
        let max_r = self.samples.iter().copied().fold(0.0, f64::max);
        let make = |angle: f64, left_neg: bool| {
            let angle = angle.rem_euclid(TAU);
            let rpp = interp.eval(2, angle);
            CriticalPoint {
                angle,
                kind: if left_neg {
                    CriticalKind::Minimum
                } else {
                    CriticalKind::Maximum
                },
                value: interp.eval(0, angle),
                near_degenerate: rpp.abs() < NEAR_DEGENERATE_REL * max_r,
            }
        };
        let mut pts = Vec::with_capacity(cells.len() + 2);
        for c in cells {
            match c {
                CellRoots::Single { cell } => {
                    let a = self.h * cell as f64;
                    let f0 = self.rp[cell];
                    let root = bisect(|p| interp.eval(1, p), a, a + self.h, neg(f0), tol);
                    pts.push(make(root, neg(f0)));
                }
                CellRoots::Pair { cell, extremum } => {
                    let a = self.h * cell as f64;
                    let f0 = self.rp[cell];
                    let r1 = bisect(|p| interp.eval(1, p), a, extremum, neg(f0), tol);
                    let r2 = bisect(|p| interp.eval(1, p), extremum, a + self.h, !neg(f0), tol);
                    pts.push(make(r1, neg(f0)));
                    pts.push(make(r2, !neg(f0)));
                }
            }
        }
        pts.sort_by(|a, b| a.angle.total_cmp(&b.angle));
        pts
    }
}

/// Counts critical points from grid derivatives without refining them.
/// Returns `None` for the degenerate circle.
pub(crate) fn count_from_grid(samples: &[f64], rp: &[f64], rpp: &[f64]) -> Option<usize> {
    let scan = RootScan::new(samples, rp, rpp);
    if scan.is_degenerate() {
        None
    } else {
        Some(scan.count())
    }
}

pub(crate) fn locate_from_grid(samples: &[f64], rp: &[f64], rpp: &[f64], tol: f64) -> CriticalSet {
    let scan = RootScan::new(samples, rp, rpp);
    if scan.is_degenerate() {
        CriticalSet::DegenerateCircle
    } else {
        CriticalSet::Points(scan.locate(tol))
    }
}

/// All extrema of `r(φ)`, sorted by angle, each refined to `tol` in angle.
///
/// Roots of `r_φ` are bracketed by grid sign changes; a min/max pair that
/// falls inside a single cell is recovered from the extremum of `r_φ`
/// between the nodes.
pub fn locate_critical_points(curve: &PolarCurve, tol: f64) -> Result<CriticalSet> {
    if !(tol > 0.0) {
        return Err(Error::Usage(format!("tolerance must be positive, got {tol}")));
    }
    let m = curve.len();
    let mut ops = SpectralOps::new(m);
    let (mut d1, mut d2) = (vec![0.0; m], vec![0.0; m]);
    ops.first_second(curve.samples(), &mut d1, &mut d2);
    Ok(locate_from_grid(curve.samples(), &d1, &d2, tol))
}

/// Smallest radius of curvature over the grid. The curve must be convex;
/// zero curvature up to rounding (`κ ≥ −1e−9·max|κ|`) is accepted.
pub fn min_curvature_radius(curve: &PolarCurve) -> Result<f64> {
    let kappa = curve.curvature();
    let max_k = kappa.iter().fold(0.0_f64, |m, k| m.max(*k));
    let floor = -1e-9 * kappa.iter().fold(0.0_f64, |m, k| m.max(k.abs()));
    for (j, &k) in kappa.iter().enumerate() {
        if !(k >= floor) || !(max_k > 0.0) {
            return domain(format!(
                "curve is not convex: κ = {k} at φ = {}",
                curve.angle(j)
            ));
        }
    }
    Ok(1.0 / max_k)
}

/// Circular distance between two angles in `[0, π]`.
pub fn angular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn curvature_of_circle_jet() {
        let k = polar_curvature(&CurveJet::new(2.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(k, 0.5);
    }

    #[test]
    fn curvature_rejects_nonpositive_radius() {
        assert!(matches!(
            polar_curvature(&CurveJet::new(0.0, 1.0, 0.0, 0.0)),
            Err(Error::Domain(_))
        ));
        assert!(tangential_factor(-1.0, 0.0).is_err());
    }

    #[test]
    fn tangential_factor_values() {
        assert_eq!(tangential_factor(1.0, 0.0).unwrap(), 1.0);
        assert!((tangential_factor(1.0, 1.0).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        assert!((tangential_factor(3.0, 4.0).unwrap() - 5.0 / 3.0).abs() < 1e-15);
        // cos γ between the radial direction (1,0) and the normal of the
        // polar curve with r = 1, r_φ = 1 at φ = 0: tangent (r_φ, r) = (1, 1).
        let (tx, ty) = (1.0_f64, 1.0_f64);
        let (nx, ny) = (ty, -tx);
        let cos_gamma = nx / (nx * nx + ny * ny).sqrt();
        assert!((1.0 / cos_gamma - tangential_factor(1.0, 1.0).unwrap()).abs() < 1e-15);
    }

    #[test]
    fn differentiate_rejects_bad_order_and_small_grid() {
        let c = PolarCurve::circle(32, 1.0).unwrap();
        assert!(differentiate(&c, 0).is_err());
        assert!(differentiate(&c, 4).is_err());
        let small = PolarCurve::circle(8, 1.0).unwrap();
        assert!(differentiate(&small, 1).is_err());
    }

    #[test]
    fn differentiate_band_limited() {
        let c = PolarCurve::circle(64, 3.0).unwrap();
        assert!(differentiate(&c, 1).unwrap().iter().all(|v| v.abs() < 1e-14));
        let s = PolarCurve::from_fn(64, |p| 2.0 + p.sin()).unwrap();
        for (j, v) in differentiate(&s, 1).unwrap().iter().enumerate() {
            assert!((v - s.angle(j).cos()).abs() < 1e-10);
        }
        let c2 = PolarCurve::from_fn(128, |p| 2.0 + 0.3 * (2.0 * p).cos()).unwrap();
        for (j, v) in differentiate(&c2, 2).unwrap().iter().enumerate() {
            assert!((v + 1.2 * (2.0 * c2.angle(j)).cos()).abs() < 1e-10);
        }
    }

    #[test]
    fn circle_is_reported_as_degenerate() {
        let c = PolarCurve::circle(64, 1.5).unwrap();
        let set = locate_critical_points(&c, DEFAULT_ROOT_TOL).unwrap();
        assert!(set.is_degenerate());
        assert_eq!(set.count(), None);
    }

    #[test]
    fn two_lobed_curve_has_four_alternating_extrema() {
        let c = PolarCurve::from_fn(256, |p| 2.0 + 0.3 * (2.0 * p).cos()).unwrap();
        let set = locate_critical_points(&c, DEFAULT_ROOT_TOL).unwrap();
        let pts = set.points();
        assert_eq!(pts.len(), 4);
        let expected = [
            (0.0, CriticalKind::Maximum),
            (PI / 2.0, CriticalKind::Minimum),
            (PI, CriticalKind::Maximum),
            (1.5 * PI, CriticalKind::Minimum),
        ];
        for (angle, kind) in expected {
            let p = pts
                .iter()
                .find(|p| angular_distance(p.angle, angle) < 1e-9)
                .unwrap_or_else(|| panic!("no extremum near {angle}: {pts:?}"));
            assert_eq!(p.kind, kind);
            assert!(!p.near_degenerate);
        }
    }

    #[test]
    fn hidden_pair_inside_one_cell_is_found() {
        // r_φ = ε - (φ-φ0)^2 locally: a min/max pair 2·sqrt(ε) apart,
        // far narrower than the 16-point grid spacing.
        let phi0 = 0.2;
        let eps = 1e-4;
        let c = PolarCurve::from_fn(16, |p| {
            3.0 + eps * (p - phi0).sin() - ((p - phi0).sin()).powi(3) / 3.0
        })
        .unwrap();
        let set = locate_critical_points(&c, 1e-12).unwrap();
        let near: Vec<_> = set
            .points()
            .iter()
            .filter(|p| angular_distance(p.angle, phi0) < 0.1)
            .collect();
        assert_eq!(near.len(), 2, "{set:?}");
        assert!(near[0].kind != near[1].kind);
    }

    #[test]
    fn ellipse_minimum_radius_of_curvature() {
        let (a, b) = (2.0, 1.0);
        let e = PolarCurve::from_fn(512, |p| {
            a * b / ((b * p.cos()).powi(2) + (a * p.sin()).powi(2)).sqrt()
        })
        .unwrap();
        assert!((min_curvature_radius(&e).unwrap() - b * b / a).abs() < 1e-10);
        let circle = PolarCurve::circle(64, 2.0).unwrap();
        assert!((min_curvature_radius(&circle).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn nonconvex_curve_has_no_minimum_radius() {
        let c = PolarCurve::from_fn(256, |p| 1.0 + 0.3 * (4.0 * p).cos()).unwrap();
        assert!(matches!(min_curvature_radius(&c), Err(Error::Domain(_))));
    }

    #[test]
    fn shoelace_area_of_circle() {
        let c = PolarCurve::circle(4096, 1.0).unwrap();
        assert!((c.area() - PI).abs() < 1e-5);
    }
}
