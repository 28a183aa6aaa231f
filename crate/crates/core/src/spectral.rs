//! Fourier differentiation and trigonometric interpolation on a uniform
//! periodic grid.

use std::sync::Arc;

use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Highest derivative order that the off-grid evaluator supports.
pub const MAX_EVAL_ORDER: usize = 4;

/// Multiplier `(ik)^order` applied to mode `k` of an `m`-point grid.
///
/// The Nyquist mode is dropped for odd orders so that derivatives of real
/// data stay real.
fn mode_multiplier(k_index: usize, m: usize, order: usize) -> Complex64 {
    let half = m / 2;
    if order == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if k_index == half && order % 2 == 1 {
        return Complex64::new(0.0, 0.0);
    }
    let k = if k_index <= half {
        k_index as f64
    } else {
        k_index as f64 - m as f64
    };
    Complex64::new(0.0, k).powu(order as u32)
}

/// Reusable FFT plans plus scratch for one grid size.
#[derive(Clone)]
pub struct SpectralOps {
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    buf: Vec<Complex64>,
    work: Vec<Complex64>,
    scratch: Vec<Complex64>,
}

impl std::fmt::Debug for SpectralOps {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralOps").field("m", &self.m).finish()
    }
}

impl SpectralOps {
    pub fn new(m: usize) -> Self {
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(m);
        let inverse = planner.plan_fft_inverse(m);
        let scratch_len = forward
            .get_inplace_scratch_len()
            .max(inverse.get_inplace_scratch_len());
        Self {
            m,
            forward,
            inverse,
            buf: vec![Complex64::default(); m],
            work: vec![Complex64::default(); m],
            scratch: vec![Complex64::default(); scratch_len],
        }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// Normalized Fourier coefficients `c_k` with `f_j = Σ c_k e^{ikφ_j}`.
    pub fn coefficients(&mut self, values: &[f64]) -> Vec<Complex64> {
        self.load(values);
        self.buf.clone()
    }

    fn load(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.m);
        for (b, &v) in self.buf.iter_mut().zip(values) {
            *b = Complex64::new(v, 0.0);
        }
        self.forward
            .process_with_scratch(&mut self.buf, &mut self.scratch);
        let norm = 1.0 / self.m as f64;
        for b in &mut self.buf {
            *b *= norm;
        }
    }

    /// Derivative of the given order at every grid node.
    pub fn derivative(&mut self, values: &[f64], order: usize, out: &mut [f64]) {
        self.load(values);
        let m = self.m;
        for (k, (w, &c)) in self.work.iter_mut().zip(&self.buf).enumerate() {
            *w = c * mode_multiplier(k, m, order);
        }
        self.inverse
            .process_with_scratch(&mut self.work, &mut self.scratch);
        for (o, w) in out.iter_mut().zip(&self.work) {
            *o = w.re;
        }
    }

    /// First and second derivatives with a single forward and a single
    /// inverse transform (the two real outputs are packed as re/im).
    pub fn first_second(&mut self, values: &[f64], d1: &mut [f64], d2: &mut [f64]) {
        self.load(values);
        let m = self.m;
        let i = Complex64::new(0.0, 1.0);
        for (k, (w, &c)) in self.work.iter_mut().zip(&self.buf).enumerate() {
            *w = c * mode_multiplier(k, m, 1) + i * (c * mode_multiplier(k, m, 2));
        }
        self.inverse
            .process_with_scratch(&mut self.work, &mut self.scratch);
        for ((a, b), w) in d1.iter_mut().zip(d2.iter_mut()).zip(&self.work) {
            *a = w.re;
            *b = w.im;
        }
    }
}

/// Trigonometric interpolant of periodic grid data, evaluable (with its
/// derivatives up to [`MAX_EVAL_ORDER`]) at any angle.
#[derive(Debug, Clone)]
pub struct TrigInterpolant {
    m: usize,
    mean: f64,
    /// `terms[order][k-1] = 2 c_k (ik)^order` for `k = 1..m/2-1`.
    terms: Vec<Vec<Complex64>>,
    /// Real Nyquist coefficient, applied to `cos(m/2 φ)` for even orders.
    nyquist: f64,
}

impl TrigInterpolant {
    pub fn from_coefficients(coeffs: &[Complex64]) -> Self {
        let m = coeffs.len();
        let half = m / 2;
        let terms = (0..=MAX_EVAL_ORDER)
            .map(|order| {
                (1..half)
                    .map(|k| coeffs[k] * mode_multiplier(k, m, order) * 2.0)
                    .collect()
            })
            .collect();
        Self {
            m,
            mean: coeffs[0].re,
            terms,
            nyquist: coeffs[half].re,
        }
    }

    pub fn from_values(values: &[f64]) -> Self {
        let mut ops = SpectralOps::new(values.len());
        Self::from_coefficients(&ops.coefficients(values))
    }

    pub fn grid_len(&self) -> usize {
        self.m
    }

    /// Derivative of the given order at angle `phi`.
    pub fn eval(&self, order: usize, phi: f64) -> f64 {
        assert!(order <= MAX_EVAL_ORDER, "derivative order {order} unsupported");
        let z = Complex64::from_polar(1.0, phi);
        // Horner on Σ_{k≥1} a_k z^k.
        let mut acc = Complex64::new(0.0, 0.0);
        for a in self.terms[order].iter().rev() {
            acc = acc * z + a;
        }
        acc *= z;
        let mut value = acc.re;
        if order == 0 {
            value += self.mean;
        }
        if order.is_multiple_of(2) {
            let half = (self.m / 2) as f64;
            let sign = if order.is_multiple_of(4) { 1.0 } else { -1.0 };
            value += sign * half.powi(order as i32) * self.nyquist * (half * phi).cos();
        }
        value
    }
}

/// Band-limited resampling of periodic data onto a grid of `m_new` points.
pub fn resample(values: &[f64], m_new: usize) -> Result<Vec<f64>> {
    let m = values.len();
    if !m_new.is_power_of_two() || m_new < 4 {
        return Err(Error::Usage(format!(
            "resample target must be a power of two ≥ 4, got {m_new}"
        )));
    }
    let mut ops = SpectralOps::new(m);
    let coeffs = ops.coefficients(values);
    let mut padded = vec![Complex64::default(); m_new];
    let keep = m.min(m_new) / 2;
    padded[0] = coeffs[0];
    for k in 1..keep {
        padded[k] = coeffs[k];
        padded[m_new - k] = coeffs[m - k];
    }
    // Split a shared Nyquist mode symmetrically when upsampling.
    if m_new > m {
        let ny = coeffs[m / 2] * 0.5;
        padded[m / 2] = ny;
        padded[m_new - m / 2] = ny;
    } else if m_new == m {
        padded[m / 2] = coeffs[m / 2];
    } else {
        // Both ±m_new/2 modes alias onto the new Nyquist node.
        padded[m_new / 2] = coeffs[m_new / 2] + coeffs[m - m_new / 2];
    }
    let mut planner = FftPlanner::new();
    let inverse = planner.plan_fft_inverse(m_new);
    inverse.process(&mut padded);
    Ok(padded.iter().map(|c| c.re).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(m: usize) -> Vec<f64> {
        (0..m).map(|j| 2.0 * PI * j as f64 / m as f64).collect()
    }

    #[test]
    fn interpolant_matches_analytic_derivatives_off_grid() {
        let m = 64;
        let values: Vec<f64> = grid(m)
            .iter()
            .map(|&p| 1.0 + 0.3 * (2.0 * p).cos() + 0.1 * (5.0 * p).sin())
            .collect();
        let interp = TrigInterpolant::from_values(&values);
        let phi: f64 = 0.377;
        let exact = [
            1.0 + 0.3 * (2.0 * phi).cos() + 0.1 * (5.0 * phi).sin(),
            -0.6 * (2.0 * phi).sin() + 0.5 * (5.0 * phi).cos(),
            -1.2 * (2.0 * phi).cos() - 2.5 * (5.0 * phi).sin(),
            2.4 * (2.0 * phi).sin() - 12.5 * (5.0 * phi).cos(),
            4.8 * (2.0 * phi).cos() + 62.5 * (5.0 * phi).sin(),
        ];
        for (order, e) in exact.iter().enumerate() {
            assert!((interp.eval(order, phi) - e).abs() < 1e-10, "order {order}");
        }
    }

    #[test]
    fn interpolant_reproduces_grid_derivative_at_nodes() {
        let m = 32;
        let values: Vec<f64> = grid(m)
            .iter()
            .map(|&p| (1.0 + 0.5 * p.cos()).exp())
            .collect();
        let interp = TrigInterpolant::from_values(&values);
        let mut ops = SpectralOps::new(m);
        let mut d = vec![0.0; m];
        for order in 0..=3 {
            ops.derivative(&values, order, &mut d);
            for (j, p) in grid(m).iter().enumerate() {
                assert!((interp.eval(order, *p) - d[j]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn resample_is_exact_for_band_limited_data() {
        let f = |p: f64| 2.0 + 0.3 * (3.0 * p).cos() - 0.2 * p.sin();
        let coarse: Vec<f64> = grid(32).iter().map(|&p| f(p)).collect();
        let fine = resample(&coarse, 128).unwrap();
        for (v, p) in fine.iter().zip(grid(128)) {
            assert!((v - f(p)).abs() < 1e-12);
        }
        let back = resample(&fine, 32).unwrap();
        for (a, b) in back.iter().zip(&coarse) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
