//! The random walk of the critical-point count under noisy annihilation
//! indicators, and the fit of the noise amplitude `d` to deterministic
//! trajectory statistics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};

/// Uniform noise `η ~ U[−d, d]` added to `v_κ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoiseModel {
    d: f64,
}

impl NoiseModel {
    pub fn new(d: f64) -> Result<Self> {
        if !(d >= 1.0 && d.is_finite()) {
            return domain(format!("noise amplitude must satisfy d ≥ 1, got {d}"));
        }
        Ok(Self { d })
    }

    pub fn amplitude(&self) -> f64 {
        self.d
    }
}

/// `sgn(v_κ + η)`; an exact zero counts as `+1`.
pub fn noisy_omega<R: Rng + ?Sized>(v_kappa: f64, noise: &NoiseModel, rng: &mut R) -> i8 {
    let eta = rng.random_range(-noise.d..=noise.d);
    if v_kappa + eta >= 0.0 {
        1
    } else {
        -1
    }
}

/// Probability of a down-step, `(d + 1)/(2d)`.
pub fn p_of_d(d: f64) -> Result<f64> {
    NoiseModel::new(d)?;
    Ok((d + 1.0) / (2.0 * d))
}

/// Embedded discrete chain of `N`: each epoch moves `−2` with probability
/// `p`, else `+2`, never below `floor`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChainSpec {
    pub n0: u64,
    pub p: f64,
    pub epochs: usize,
    pub floor: u64,
}

impl ChainSpec {
    pub fn new(n0: u64, p: f64, epochs: usize) -> Result<Self> {
        Self::with_floor(n0, p, epochs, 4)
    }

    pub fn with_floor(n0: u64, p: f64, epochs: usize, floor: u64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return domain(format!("p must lie in [0, 1], got {p}"));
        }
        if !n0.is_multiple_of(2) || !floor.is_multiple_of(2) {
            return domain(format!("counts must be even, got N0 = {n0}, floor = {floor}"));
        }
        if n0 < floor {
            return domain(format!("N0 = {n0} lies below the floor {floor}"));
        }
        Ok(Self { n0, p, epochs, floor })
    }
}

/// One trajectory `N_0, …, N_epochs`.
pub fn simulate_chain(spec: &ChainSpec, seed: u64) -> Vec<u64> {
    run_chain(spec, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn run_chain(spec: &ChainSpec, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut n = spec.n0;
    let mut out = Vec::with_capacity(spec.epochs + 1);
    out.push(n);
    for _ in 0..spec.epochs {
        let down = rng.random::<f64>() < spec.p;
        n = if down {
            n.saturating_sub(2).max(spec.floor)
        } else {
            n + 2
        };
        out.push(n);
    }
    out
}

/// `count` independent chains; chain `i` uses stream `i` of the seed.
pub fn simulate_chains(spec: &ChainSpec, count: usize, seed: u64) -> Vec<Vec<u64>> {
    (0..count)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            run_chain(spec, &mut rng)
        })
        .collect()
}

/// `chain,epoch,N` rows.
pub fn chains_csv(chains: &[Vec<u64>]) -> String {
    let mut out = String::from("chain,epoch,N\n");
    for (i, c) in chains.iter().enumerate() {
        for (e, n) in c.iter().enumerate() {
            out.push_str(&format!("{i},{e},{n}\n"));
        }
    }
    out
}

/// Probabilities of trajectories with no jump, one down-jump, and an
/// up-then-down pair of jumps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryTypeDistribution {
    pub q0: f64,
    pub q1: f64,
    pub q2: f64,
}

impl TrajectoryTypeDistribution {
    pub fn new(q0: f64, q1: f64, q2: f64) -> Result<Self> {
        if [q0, q1, q2].iter().any(|q| !(*q >= 0.0)) {
            return domain(format!("q values must be non-negative: ({q0}, {q1}, {q2})"));
        }
        let s = q0 + q1 + q2;
        if (s - 1.0).abs() > 1e-12 {
            return domain(format!("q values must sum to 1, got {s}"));
        }
        Ok(Self { q0, q1, q2 })
    }

    /// Renormalizes non-negative weights onto the simplex.
    pub fn normalized(q0: f64, q1: f64, q2: f64) -> Result<Self> {
        let s = q0 + q1 + q2;
        if !(s > 0.0) {
            return domain("weights must have positive sum");
        }
        Self::new(q0 / s, q1 / s, q2 / s)
    }

    /// Deterministic probabilities `(P_glob, P_ult) = (q0 + q1, 1)`.
    pub fn deterministic_bounds(&self) -> (f64, f64) {
        (self.q0 + self.q1, 1.0)
    }
}

/// `P_glob = q0 + q1 p + q2 p²`, `P_ult = P_glob + 2 q2 p (1 − p)`.
pub fn stochastic_bounds(q: &TrajectoryTypeDistribution, p: f64) -> (f64, f64) {
    let glob = q.q0 + q.q1 * p + q.q2 * p * p;
    (glob, glob + 2.0 * q.q2 * p * (1.0 - p))
}

/// `(P_det_ult − P_ult(d))² + (P_det_glob − P_glob(d))²`.
pub fn delta_error(d: f64, q: &TrajectoryTypeDistribution, p_det_glob: f64, p_det_ult: f64) -> Result<f64> {
    let p = p_of_d(d)?;
    let (glob, ult) = stochastic_bounds(q, p);
    Ok((p_det_ult - ult).powi(2) + (p_det_glob - glob).powi(2))
}

/// Noise amplitude read off the trajectory-type fit in the literature.
pub const REPORTED_D_STAR: f64 = 1.8;
/// `|d* − REPORTED_D_STAR|` beyond which a discrepancy is flagged.
pub const D_STAR_FLAG: f64 = 0.2;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaMinimum {
    pub d_star: f64,
    pub delta_star: f64,
    /// The minimizer lies strictly inside the range.
    pub interior: bool,
    /// `(d, δ(d))` on the scan grid.
    pub table: Vec<(f64, f64)>,
}

/// Grid scan of `δ` on `d_range` followed by golden-section refinement
/// around the best grid point.
pub fn minimize_delta(
    q: &TrajectoryTypeDistribution,
    p_det_glob: f64,
    p_det_ult: f64,
    d_range: (f64, f64),
    step: f64,
) -> Result<DeltaMinimum> {
    let (lo, hi) = d_range;
    if !(lo >= 1.0 && hi > lo && hi.is_finite()) {
        return domain(format!("d range must satisfy 1 ≤ lo < hi, got [{lo}, {hi}]"));
    }
    if !(step > 0.0) {
        return Err(Error::Usage(format!("step must be positive, got {step}")));
    }
    let n = ((hi - lo) / step).round() as usize;
    if n > 10_000_000 {
        return Err(Error::Usage(format!("{n} grid points is too many")));
    }
    let f = |d: f64| delta_error(d, q, p_det_glob, p_det_ult);
    let mut table = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let d = if i == n { hi } else { lo + step * i as f64 };
        table.push((d, f(d)?));
    }
    let best = table
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    if best == 0 || best == table.len() - 1 {
        let (d, v) = table[best];
        return Ok(DeltaMinimum {
            d_star: d,
            delta_star: v,
            interior: false,
            table,
        });
    }
    let (mut a, mut b) = (table[best - 1].0, table[best + 1].0);
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - g * (b - a);
    let mut e = a + g * (b - a);
    let (mut fc, mut fe) = (f(c)?, f(e)?);
    while b - a > 1e-12 * b.abs().max(1.0) {
        if fc <= fe {
            b = e;
            e = c;
            fe = fc;
            c = b - g * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = e;
            fc = fe;
            e = a + g * (b - a);
            fe = f(e)?;
        }
    }
    let d_star = 0.5 * (a + b);
    Ok(DeltaMinimum {
        d_star,
        delta_star: f(d_star)?,
        interior: true,
        table,
    })
}

/// Fit summary for one reference model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaReport {
    pub model: String,
    pub q: TrajectoryTypeDistribution,
    pub p_det_glob: f64,
    pub p_det_ult: f64,
    pub d_star: f64,
    pub delta_star: f64,
    pub delta_at_1: f64,
    pub interior: bool,
    pub reported_d_star: f64,
    /// `|d* − reported| > D_STAR_FLAG`.
    pub discrepancy: bool,
    pub table: Vec<(f64, f64)>,
}

pub fn delta_report(
    model: &str,
    q: &TrajectoryTypeDistribution,
    p_det_glob: f64,
    p_det_ult: f64,
    d_range: (f64, f64),
    step: f64,
) -> Result<DeltaReport> {
    let min = minimize_delta(q, p_det_glob, p_det_ult, d_range, step)?;
    Ok(DeltaReport {
        model: model.to_string(),
        q: *q,
        p_det_glob,
        p_det_ult,
        d_star: min.d_star,
        delta_star: min.delta_star,
        delta_at_1: delta_error(1.0, q, p_det_glob, p_det_ult)?,
        interior: min.interior,
        reported_d_star: REPORTED_D_STAR,
        discrepancy: (min.d_star - REPORTED_D_STAR).abs() > D_STAR_FLAG,
        table: min.table,
    })
}
