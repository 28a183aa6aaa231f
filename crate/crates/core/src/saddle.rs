//! Saddle-node germs of a surface `r(x, y)` and the sign of the
//! annihilation indicator under `v(κ, λ)`, exactly and in expectation.

use std::collections::BTreeMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::flow::sign;

/// Third-order Taylor data of `r(x, y)` at a saddle node, where
/// `r_x = r_y = r_xy = r_yy = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceGerm {
    pub r: f64,
    pub r_xx: f64,
    pub r_yyy: f64,
    pub r_xxy: f64,
    pub r_yyx: f64,
    pub r_xxx: f64,
}

/// Value and partials up to second order of the germ polynomial at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GermPartials {
    pub r: f64,
    pub r_x: f64,
    pub r_y: f64,
    pub r_xx: f64,
    pub r_xy: f64,
    pub r_yy: f64,
}

impl SurfaceGerm {
    pub fn new(r: f64, r_xx: f64, r_yyy: f64, r_xxy: f64, r_yyx: f64, r_xxx: f64) -> Result<Self> {
        let g = Self {
            r,
            r_xx,
            r_yyy,
            r_xxy,
            r_yyx,
            r_xxx,
        };
        if !(r > 0.0) {
            return domain(format!("germ needs r > 0, got {r}"));
        }
        if [r, r_xx, r_yyy, r_xxy, r_yyx, r_xxx].iter().any(|v| !v.is_finite()) {
            return domain("germ coefficients must be finite");
        }
        Ok(g)
    }

    /// The cubic `r + r_xx x²/2 + r_yyy y³/6 + r_xxy x²y/2 + r_yyx xy²/2 + r_xxx x³/6`
    /// and its partials at `(x, y)`.
    pub fn partials(&self, x: f64, y: f64) -> GermPartials {
        let g = self;
        GermPartials {
            r: g.r
                + g.r_xx * x * x / 2.0
                + g.r_yyy * y * y * y / 6.0
                + g.r_xxy * x * x * y / 2.0
                + g.r_yyx * x * y * y / 2.0
                + g.r_xxx * x * x * x / 6.0,
            r_x: g.r_xx * x + g.r_xxy * x * y + g.r_yyx * y * y / 2.0 + g.r_xxx * x * x / 2.0,
            r_y: g.r_yyy * y * y / 2.0 + g.r_xxy * x * x / 2.0 + g.r_yyx * x * y,
            r_xx: g.r_xx + g.r_xxy * y + g.r_xxx * x,
            r_xy: g.r_xxy * x + g.r_yyx * y,
            r_yy: g.r_yyy * y + g.r_yyx * x,
        }
    }
}

/// `(κ^C, λ^C) = (1/r, (r − r_xx)/r²)`.
pub fn principal_curvatures_at_c(germ: &SurfaceGerm) -> Result<(f64, f64)> {
    if germ.r_xx == 0.0 {
        return domain("r_xx = 0: the point would be umbilic");
    }
    let r = germ.r;
    Ok((1.0 / r, (r - germ.r_xx) / (r * r)))
}

/// `(κ_y, λ_y) = (−r_yyy/r², −r_xxy/r²)`.
pub fn curvature_y_derivatives(germ: &SurfaceGerm) -> (f64, f64) {
    let r2 = germ.r * germ.r;
    (-germ.r_yyy / r2, -germ.r_xxy / r2)
}

/// `sgn(v_κ r_yyy² + r_xxy r_yyy v_λ)`.
pub fn omega_3d(v_kappa: f64, v_lambda: f64, r_yyy: f64, r_xxy: f64) -> Result<i8> {
    if r_yyy == 0.0 {
        return Err(Error::DegenerateGerm("r_yyy = 0".into()));
    }
    Ok(omega_unchecked(v_kappa, v_lambda, r_yyy, r_xxy))
}

#[inline]
fn omega_unchecked(v_kappa: f64, v_lambda: f64, r_yyy: f64, r_xxy: f64) -> i8 {
    // Factor r_yyy out of the sum so large germs cannot overflow.
    sign(r_yyy) * sign(v_kappa * r_yyy + v_lambda * r_xxy)
}

/// Closed-form laws `v(κ, λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "law", rename_all = "snake_case")]
pub enum LawForm {
    /// `c (κλ)^{1/4}`
    Rayleigh { c: f64 },
    /// `c κλ`
    Firey { c: f64 },
    /// `b (κ + λ)`
    Mean { b: f64 },
    /// `(1 + Rκ)(1 + Rλ)`
    Bloore { radius: f64 },
    /// `1`
    Eikonal,
    /// `c κ`
    Principal { c: f64 },
}

impl LawForm {
    pub fn value(&self, kappa: f64, lambda: f64) -> f64 {
        match *self {
            LawForm::Rayleigh { c } => c * (kappa * lambda).powf(0.25),
            LawForm::Firey { c } => c * kappa * lambda,
            LawForm::Mean { b } => b * (kappa + lambda),
            LawForm::Bloore { radius } => (1.0 + radius * kappa) * (1.0 + radius * lambda),
            LawForm::Eikonal => 1.0,
            LawForm::Principal { c } => c * kappa,
        }
    }

    /// `(v_κ, v_λ)`
    pub fn partials(&self, kappa: f64, lambda: f64) -> (f64, f64) {
        match *self {
            LawForm::Rayleigh { c } => {
                let g = 0.25 * c * (kappa * lambda).powf(-0.75);
                (g * lambda, g * kappa)
            }
            LawForm::Firey { c } => (c * lambda, c * kappa),
            LawForm::Mean { b } => (b, b),
            LawForm::Bloore { radius } => (
                radius * (1.0 + radius * lambda),
                radius * (1.0 + radius * kappa),
            ),
            LawForm::Eikonal => (0.0, 0.0),
            LawForm::Principal { c } => (c, 0.0),
        }
    }
}

/// The partials `(v_κ, v_λ)` of a law at one germ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpeedLaw3D {
    pub name: String,
    pub v_kappa: f64,
    pub v_lambda: f64,
    /// Closed form and the point `(κ, λ)` it was evaluated at, if any.
    pub form: Option<(LawForm, f64, f64)>,
}

impl SpeedLaw3D {
    pub fn from_partials(name: impl Into<String>, v_kappa: f64, v_lambda: f64) -> Result<Self> {
        if !(v_kappa.is_finite() && v_lambda.is_finite()) {
            return domain("law partials must be finite");
        }
        Ok(Self {
            name: name.into(),
            v_kappa,
            v_lambda,
            form: None,
        })
    }

    /// `r_t = r_xx + r_yy` at a critical point: `v_κ = v_λ = 1`.
    pub fn heat() -> Self {
        Self {
            name: "heat".into(),
            v_kappa: 1.0,
            v_lambda: 1.0,
            form: None,
        }
    }

    /// Evaluates a closed-form law at `(κ, λ)`; the partials are checked
    /// against central differences.
    pub fn at(form: LawForm, kappa: f64, lambda: f64) -> Result<Self> {
        let (vk, vl) = form.partials(kappa, lambda);
        let h = 1e-6;
        let hk = h * kappa.abs().max(1.0);
        let hl = h * lambda.abs().max(1.0);
        let fk = (form.value(kappa + hk, lambda) - form.value(kappa - hk, lambda)) / (2.0 * hk);
        let fl = (form.value(kappa, lambda + hl) - form.value(kappa, lambda - hl)) / (2.0 * hl);
        for (exact, fd, which) in [(vk, fk, "v_κ"), (vl, fl, "v_λ")] {
            if !exact.is_finite() || !fd.is_finite() || (exact - fd).abs() > 1e-6 * exact.abs().max(1e-2) {
                return domain(format!(
                    "{form:?} at (κ, λ) = ({kappa}, {lambda}): {which} = {exact} but finite difference gives {fd}"
                ));
            }
        }
        Ok(Self {
            name: format!("{form:?}"),
            v_kappa: vk,
            v_lambda: vl,
            form: Some((form, kappa, lambda)),
        })
    }

    pub fn omega(&self, r_yyy: f64, r_xxy: f64) -> Result<i8> {
        omega_3d(self.v_kappa, self.v_lambda, r_yyy, r_xxy)
    }
}

/// Polynomial in `(x, y, t)` with integer coefficients, keyed by exponents.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly3 {
    terms: BTreeMap<(u32, u32, u32), i64>,
}

impl Poly3 {
    pub fn from_terms(terms: &[(i64, (u32, u32, u32))]) -> Self {
        let mut p = Poly3::default();
        for &(c, e) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: (u32, u32, u32), c: i64) {
        let slot = self.terms.entry(e).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    /// Partial derivative in variable 0 (x), 1 (y) or 2 (t).
    pub fn diff(&self, var: usize) -> Self {
        let mut out = Poly3::default();
        for (&(a, b, c), &k) in &self.terms {
            let (pow, e) = match var {
                0 => (a, (a.wrapping_sub(1), b, c)),
                1 => (b, (a, b.wrapping_sub(1), c)),
                _ => (c, (a, b, c.wrapping_sub(1))),
            };
            if pow > 0 {
                out.add_term(e, k * pow as i64);
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, &k) in &other.terms {
            out.add_term(e, -k);
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, &k) in &other.terms {
            out.add_term(e, k);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn eval(&self, x: f64, y: f64, t: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(a, b, c), &k)| k as f64 * x.powi(a as i32) * y.powi(b as i32) * t.powi(c as i32))
            .sum()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }
}

impl fmt::Display for Poly3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(a, b, c), &k)| format!("{k}·x^{a}·y^{b}·t^{c}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DamonReport {
    /// `r_t − r_xx − r_yy` printed; `"0"` when it vanishes identically.
    pub heat_residual: String,
    pub residual_is_zero: bool,
    /// `r_x, r_y, r_xy, r_yy` at the origin.
    pub saddle_node_partials: [f64; 4],
    pub r_xx: f64,
    pub r_yyy: f64,
    pub r_xxy: f64,
    pub omega: i8,
}

/// `y³ − 6ty − 6yx² + x² + 2t`.
pub fn damon_polynomial() -> Poly3 {
    Poly3::from_terms(&[
        (1, (0, 3, 0)),
        (-6, (0, 1, 1)),
        (-6, (2, 1, 0)),
        (1, (2, 0, 0)),
        (2, (0, 0, 1)),
    ])
}

/// Checks that the Damon polynomial solves `r_t = r_xx + r_yy` and carries
/// a saddle node with `Ω = −1` at the origin.
pub fn damon_creation_check() -> Result<DamonReport> {
    let p = damon_polynomial();
    let (px, py, pt) = (p.diff(0), p.diff(1), p.diff(2));
    let pxx = px.diff(0);
    let pyy = py.diff(1);
    let residual = pt.sub(&pxx.add(&pyy));
    let at0 = |q: &Poly3| q.eval(0.0, 0.0, 0.0);
    let r_xx = at0(&pxx);
    let r_yyy = at0(&pyy.diff(1));
    let r_xxy = at0(&pxx.diff(1));
    let heat = SpeedLaw3D::heat();
    Ok(DamonReport {
        heat_residual: residual.to_string(),
        residual_is_zero: residual.is_zero(),
        saddle_node_partials: [at0(&px), at0(&py), at0(&px.diff(1)), at0(&pyy)],
        r_xx,
        r_yyy,
        r_xxy,
        omega: heat.omega(r_yyy, r_xxy)?,
    })
}

/// Zero-mean, zero-covariance families for `(r̄_xxy, r̄_yyy)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Sampler {
    /// Independent standard normals.
    Symmetric,
    /// Independent `Exp(1) − 1`.
    Skewed,
    /// `r̄_yyy = a`, `q = ρa + (a² − 1)/√2 + c` with `a, c ~ N(0, 1)`, and
    /// `r̄_xxy = q − ρa`: dependent through `a²` but uncorrelated.
    Decorrelated { rho: f64 },
}

impl Sampler {
    pub fn label(&self) -> String {
        match self {
            Sampler::Symmetric => "symmetric".into(),
            Sampler::Skewed => "skewed".into(),
            Sampler::Decorrelated { rho } => format!("decorrelated(rho={rho})"),
        }
    }

    /// One draw `(r̄_xxy, r̄_yyy)`.
    #[inline]
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        match *self {
            Sampler::Symmetric => {
                let a: f64 = StandardNormal.sample(rng);
                let b: f64 = StandardNormal.sample(rng);
                (a, b)
            }
            Sampler::Skewed => {
                let a: f64 = Exp1.sample(rng);
                let b: f64 = Exp1.sample(rng);
                (a - 1.0, b - 1.0)
            }
            Sampler::Decorrelated { rho } => {
                let a: f64 = StandardNormal.sample(rng);
                let c: f64 = StandardNormal.sample(rng);
                let q = rho * a + (a * a - 1.0) / std::f64::consts::SQRT_2 + c;
                (q - rho * a, a)
            }
        }
    }
}

/// Monte Carlo estimate of `E(Ω̄)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MCEstimate {
    pub law: String,
    pub sampler: String,
    pub n: u64,
    pub seed: u64,
    pub mean: f64,
    pub p_plus: f64,
    /// 99% normal-approximation half-width.
    pub ci99: f64,
    /// Draws with `Ω̄ = 0` exactly.
    pub zero_count: u64,
    pub warnings: Vec<String>,
}

impl MCEstimate {
    /// Whether the 99% interval excludes zero.
    pub fn excludes_zero(&self) -> bool {
        self.mean.abs() > self.ci99
    }
}

pub const MIN_DRAWS: u64 = 10_000;
const BLOCK: u64 = 1 << 14;
const Z99: f64 = 2.5758293035489;

#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    plus: u64,
    minus: u64,
    zero: u64,
    /// Sums of x, y, x², y², xy, (xy)² for the zero-mean checks.
    moments: [f64; 6],
}

impl Tally {
    fn merge(mut self, o: &Tally) -> Tally {
        self.plus += o.plus;
        self.minus += o.minus;
        self.zero += o.zero;
        for (a, b) in self.moments.iter_mut().zip(o.moments) {
            *a += b;
        }
        self
    }

    fn count(&mut self, omega: i8) {
        match omega {
            1 => self.plus += 1,
            -1 => self.minus += 1,
            _ => self.zero += 1,
        }
    }
}

/// Runs `n` draws in fixed blocks, each block on its own ChaCha stream, and
/// merges the block tallies in block order so the result does not depend
/// on how the blocks are scheduled.
fn blocked_tally(n: u64, seed: u64, per_block: impl Fn(&mut ChaCha8Rng, u64) -> Tally + Sync) -> Tally {
    let blocks = n.div_ceil(BLOCK);
    let tallies: Vec<Tally> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b);
            let len = BLOCK.min(n - b * BLOCK);
            per_block(&mut rng, len)
        })
        .collect();
    tallies.iter().fold(Tally::default(), |acc, t| acc.merge(t))
}

fn estimate(law: &str, sampler: String, n: u64, seed: u64, t: &Tally, warnings: Vec<String>) -> MCEstimate {
    let nf = n as f64;
    let mean = (t.plus as f64 - t.minus as f64) / nf;
    let second = (t.plus + t.minus) as f64 / nf;
    let var = ((second - mean * mean) * nf / (nf - 1.0)).max(0.0);
    MCEstimate {
        law: law.to_string(),
        sampler,
        n,
        seed,
        mean,
        p_plus: t.plus as f64 / nf,
        ci99: Z99 * var.sqrt() / nf.sqrt(),
        zero_count: t.zero,
        warnings,
    }
}

/// Averages `Ω̄` over `n` draws of `(r̄_xxy, r̄_yyy)`; deterministic in `seed`.
pub fn mc_expected_omega(law: &SpeedLaw3D, sampler: &Sampler, n: u64, seed: u64) -> Result<MCEstimate> {
    if n < MIN_DRAWS {
        return Err(Error::Usage(format!("need at least {MIN_DRAWS} draws, got {n}")));
    }
    if let Sampler::Decorrelated { rho } = sampler {
        if !rho.is_finite() {
            return Err(Error::InvalidSampler(format!("rho must be finite, got {rho}")));
        }
    }
    let (vk, vl) = (law.v_kappa, law.v_lambda);
    let tally = blocked_tally(n, seed, |rng, len| {
        let mut t = Tally::default();
        for _ in 0..len {
            let (xxy, yyy) = sampler.draw(rng);
            t.count(omega_unchecked(vk, vl, yyy, xxy));
            let xy = xxy * yyy;
            for (m, v) in t.moments.iter_mut().zip([xxy, yyy, xxy * xxy, yyy * yyy, xy, xy * xy]) {
                *m += v;
            }
        }
        t
    });
    let warnings = zero_mean_warnings(&tally, n);
    Ok(estimate(&law.name, sampler.label(), n, seed, &tally, warnings))
}

/// Flags empirical means or covariance farther than 3 standard errors from 0.
fn zero_mean_warnings(t: &Tally, n: u64) -> Vec<String> {
    let nf = n as f64;
    let [sx, sy, sxx, syy, sxy, sxy2] = t.moments;
    let mut out = Vec::new();
    let mx = sx / nf;
    let my = sy / nf;
    let se = |s2: f64, m: f64| ((s2 / nf - m * m).max(0.0) / nf).sqrt();
    if mx.abs() > 3.0 * se(sxx, mx) {
        out.push(format!("mean of r_xxy = {mx:.3e} exceeds 3 standard errors"));
    }
    if my.abs() > 3.0 * se(syy, my) {
        out.push(format!("mean of r_yyy = {my:.3e} exceeds 3 standard errors"));
    }
    let mxy = sxy / nf;
    if mxy.abs() > 3.0 * se(sxy2, mxy) {
        out.push(format!("covariance {mxy:.3e} exceeds 3 standard errors"));
    }
    out
}

/// Distribution of the Hessian determinant `ξ` at a random saddle node.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DetSampler {
    /// `ξ = ±D` with equal probability.
    TwoPoint { d: f64 },
    /// `ξ` uniform over the listed values.
    Finite { values: Vec<f64> },
}

impl DetSampler {
    /// `S̄ + Ū` elliptic values `+d` and `H̄` hyperbolic values `−d`.
    pub fn from_morse_counts(counts: &EulerCounts, d: f64) -> Result<Self> {
        if !(d > 0.0) {
            return Err(Error::InvalidSampler(format!("magnitude must be positive, got {d}")));
        }
        let mut values = vec![d; (counts.s_bar + counts.u_bar) as usize];
        values.extend(std::iter::repeat_n(-d, counts.h_bar as usize));
        Ok(DetSampler::Finite { values })
    }

    fn values(&self) -> Vec<f64> {
        match self {
            DetSampler::TwoPoint { d } => vec![*d, -*d],
            DetSampler::Finite { values } => values.clone(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            DetSampler::TwoPoint { d } => format!("two_point(D={d})"),
            DetSampler::Finite { values } => format!("finite({} values)", values.len()),
        }
    }
}

/// `E(sgn(v_κ r_yyy² + ξ v_λ))` with `ξ` from `det`.
///
/// The sign balance `E(sgn ξ) = 0` is a property of the distribution and is
/// checked on it exactly rather than on the draws.
pub fn assumption_2a_omega(
    law: &SpeedLaw3D,
    r_yyy: f64,
    det: &DetSampler,
    n: u64,
    seed: u64,
) -> Result<MCEstimate> {
    if n < MIN_DRAWS {
        return Err(Error::Usage(format!("need at least {MIN_DRAWS} draws, got {n}")));
    }
    if r_yyy == 0.0 {
        return Err(Error::DegenerateGerm("r_yyy = 0".into()));
    }
    let values = det.values();
    if values.is_empty() || values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSampler("determinant values must be finite and non-empty".into()));
    }
    let balance: i64 = values.iter().map(|&v| sign(v) as i64).sum();
    if balance != 0 {
        return Err(Error::InvalidSampler(format!(
            "E(sgn ξ) = {}/{} ≠ 0",
            balance,
            values.len()
        )));
    }
    let base = law.v_kappa * r_yyy * r_yyy;
    let vl = law.v_lambda;
    let tally = blocked_tally(n, seed, |rng, len| {
        let mut t = Tally::default();
        for _ in 0..len {
            let xi = values[rng.random_range(0..values.len())];
            t.count(sign(base + xi * vl));
        }
        t
    });
    Ok(estimate(&law.name, det.label(), n, seed, &tally, Vec::new()))
}

/// Critical-point counts of a periodic function on the sphere with the
/// global extrema removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EulerCounts {
    pub s_bar: u64,
    pub u_bar: u64,
    pub h_bar: u64,
    pub n: u64,
}

/// `(S, U, H) → (S − 1, U − 1, H)`; requires `S + U − H = 2`.
pub fn euler_counts(s: u64, u: u64, h: u64) -> Result<EulerCounts> {
    let chi = s as i64 + u as i64 - h as i64;
    if chi != 2 {
        return domain(format!("S + U − H = {chi}; a topological sphere requires 2"));
    }
    if s == 0 || u == 0 {
        return domain("a sphere has at least one minimum and one maximum");
    }
    let c = EulerCounts {
        s_bar: s - 1,
        u_bar: u - 1,
        h_bar: h,
        n: s + u + h - 2,
    };
    debug_assert_eq!(c.s_bar + c.u_bar, c.h_bar);
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn principal_curvatures_examples() {
        let g = SurfaceGerm::new(1.0, -1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(principal_curvatures_at_c(&g).unwrap(), (1.0, 2.0));
        let g = SurfaceGerm::new(2.0, 1.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert_eq!(principal_curvatures_at_c(&g).unwrap(), (0.5, 0.25));
        let g = SurfaceGerm::new(2.0, 0.0, 1.0, 0.0, 0.0, 0.0).unwrap();
        assert!(principal_curvatures_at_c(&g).is_err());
        assert!(SurfaceGerm::new(0.0, 1.0, 1.0, 0.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn y_derivatives_examples() {
        let g = SurfaceGerm::new(1.0, 1.0, 6.0, -12.0, 0.0, 0.0).unwrap();
        assert_eq!(curvature_y_derivatives(&g), (-6.0, 12.0));
        let g = SurfaceGerm::new(3.0, 1.0, 0.0, 0.0, 2.0, 1.0).unwrap();
        let (a, b) = curvature_y_derivatives(&g);
        assert_eq!((a.abs(), b.abs()), (0.0, 0.0));
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega_3d(1.0, 1.0, 6.0, -12.0).unwrap(), -1);
        assert_eq!(omega_3d(0.3, 5.0, -2.0, 0.0).unwrap(), 1);
        assert!(matches!(omega_3d(1.0, 1.0, 0.0, 1.0), Err(Error::DegenerateGerm(_))));
        // Bloore with R = 1 at κ = λ = 1 and r_xxy = 0.
        let law = SpeedLaw3D::at(LawForm::Bloore { radius: 1.0 }, 1.0, 1.0).unwrap();
        assert_eq!(law.v_kappa, 2.0);
        assert_eq!(law.omega(3.0, 0.0).unwrap(), 1);
    }

    #[test]
    fn catalog_partials_pass_finite_difference_check() {
        for form in [
            LawForm::Rayleigh { c: 1.3 },
            LawForm::Firey { c: 0.7 },
            LawForm::Mean { b: 2.0 },
            LawForm::Bloore { radius: 0.5 },
            LawForm::Eikonal,
            LawForm::Principal { c: 1.0 },
        ] {
            SpeedLaw3D::at(form, 0.8, 1.7).unwrap();
        }
    }

    #[test]
    fn damon_polynomial_solves_heat_and_creates() {
        let rep = damon_creation_check().unwrap();
        assert!(rep.residual_is_zero, "{}", rep.heat_residual);
        assert_eq!(rep.heat_residual, "0");
        assert_eq!(rep.saddle_node_partials, [0.0; 4]);
        assert_eq!((rep.r_yyy, rep.r_xxy), (6.0, -12.0));
        assert_eq!(rep.omega, -1);
    }

    #[test]
    fn poly_derivatives() {
        // d/dx of 3x²y t = 6xyt
        let p = Poly3::from_terms(&[(3, (2, 1, 1))]);
        assert_eq!(p.diff(0), Poly3::from_terms(&[(6, (1, 1, 1))]));
        assert!(p.diff(0).diff(0).diff(0).is_zero());
        assert!(p.sub(&p).is_zero());
    }

    #[test]
    fn single_term_law_gives_certain_annihilation() {
        let law = SpeedLaw3D::from_partials("vk_only", 1.0, 0.0).unwrap();
        for s in [Sampler::Symmetric, Sampler::Skewed, Sampler::Decorrelated { rho: 0.8 }] {
            let est = mc_expected_omega(&law, &s, 20_000, 3).unwrap();
            assert_eq!(est.mean, 1.0);
            assert_eq!(est.p_plus, 1.0);
        }
    }

    #[test]
    fn too_few_draws_rejected() {
        assert!(mc_expected_omega(&SpeedLaw3D::heat(), &Sampler::Symmetric, 100, 1).is_err());
    }

    #[test]
    fn two_point_determinant_enumeration() {
        let law = SpeedLaw3D::from_partials("unit", 1.0, 1.0).unwrap();
        let det = DetSampler::TwoPoint { d: 2.0 };
        let e = assumption_2a_omega(&law, 2.0, &det, 20_000, 9).unwrap();
        assert_eq!(e.mean, 1.0);
        let e = assumption_2a_omega(&law, 1.0, &det, 200_000, 9).unwrap();
        assert!(e.mean.abs() <= e.ci99, "{e:?}");
        let dominated = SpeedLaw3D::from_partials("big", 10.0, 1.0).unwrap();
        let e = assumption_2a_omega(&dominated, 1.0, &det, 20_000, 9).unwrap();
        assert_eq!(e.mean, 1.0);
    }

    #[test]
    fn unbalanced_determinants_rejected() {
        let law = SpeedLaw3D::heat();
        let det = DetSampler::Finite {
            values: vec![1.0, 1.0, -1.0],
        };
        assert!(matches!(
            assumption_2a_omega(&law, 1.0, &det, 20_000, 1),
            Err(Error::InvalidSampler(_))
        ));
    }

    #[test]
    fn euler_count_examples() {
        let c = euler_counts(2, 2, 2).unwrap();
        assert_eq!((c.s_bar, c.u_bar, c.h_bar, c.n), (1, 1, 2, 4));
        let c = euler_counts(5, 3, 6).unwrap();
        assert_eq!((c.s_bar, c.u_bar, c.h_bar, c.n), (4, 2, 6, 12));
        assert!(euler_counts(1, 1, 1).is_err());
        let det = DetSampler::from_morse_counts(&euler_counts(5, 3, 6).unwrap(), 1.0).unwrap();
        assert_eq!(det.values().iter().filter(|v| **v > 0.0).count(), 6);
    }
}
