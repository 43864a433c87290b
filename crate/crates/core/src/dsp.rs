//! FFT-domain helpers shared by synthesis, filtering and estimation.

use std::cell::RefCell;
use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

pub(crate) fn fft(buf: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()));
    plan.process(buf);
}

/// Unnormalized inverse transform.
pub(crate) fn ifft(buf: &mut [Complex64]) {
    let plan = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()));
    plan.process(buf);
}

pub(crate) fn forward_real(x: &[f64]) -> Vec<Complex64> {
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft(&mut buf);
    buf
}

/// Inverse transform, scaled by 1/n, keeping the real part.
pub(crate) fn inverse_real(mut spec: Vec<Complex64>) -> Vec<f64> {
    let n = spec.len() as f64;
    ifft(&mut spec);
    spec.into_iter().map(|c| c.re / n).collect()
}

/// Signed DFT bin index: `k` for `k <= n/2`, `k - n` above.
pub(crate) fn signed_bin(k: usize, n: usize) -> i64 {
    if k <= n / 2 {
        k as i64
    } else {
        k as i64 - n as i64
    }
}

/// Angular frequency of bin `k` for sample interval `dt`.
pub(crate) fn bin_omega(k: usize, n: usize, dt: f64) -> f64 {
    2.0 * PI * signed_bin(k, n) as f64 / (n as f64 * dt)
}

fn is_nyquist(k: usize, n: usize) -> bool {
    n.is_multiple_of(2) && k == n / 2
}

/// Discrete Hilbert transform: multiplies the spectrum by `-j sgn(omega)`.
/// DC and (for even lengths) the Nyquist bin are removed, so `H{cos} = sin`
/// and `H{sin} = -cos` for on-grid tones.
pub fn hilbert(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let mut spec = forward_real(x);
    for (k, c) in spec.iter_mut().enumerate() {
        let s = signed_bin(k, n);
        *c = if s == 0 || is_nyquist(k, n) {
            Complex64::new(0.0, 0.0)
        } else if s > 0 {
            Complex64::new(c.im, -c.re)
        } else {
            Complex64::new(-c.im, c.re)
        };
    }
    inverse_real(spec)
}

/// Brick-wall band filter keeping `low <= |omega| <= high` (rad/s).
pub fn band_filter(x: &[f64], dt: f64, low: f64, high: f64) -> Vec<f64> {
    let n = x.len();
    let mut spec = forward_real(x);
    for (k, c) in spec.iter_mut().enumerate() {
        let w = bin_omega(k, n, dt).abs();
        if w < low || w > high {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    inverse_real(spec)
}

/// Circular fractional delay by `delay` seconds via a linear phase ramp.
/// The Nyquist bin is scaled by `cos(omega_N * delay)` to stay real.
pub(crate) fn circular_delay(x: &[f64], dt: f64, delay: f64) -> Vec<f64> {
    let n = x.len();
    let mut spec = forward_real(x);
    for (k, c) in spec.iter_mut().enumerate() {
        let w = bin_omega(k, n, dt);
        if is_nyquist(k, n) {
            *c *= (w * delay).cos();
        } else {
            *c *= Complex64::from_polar(1.0, -w * delay);
        }
    }
    inverse_real(spec)
}

/// Spectral derivative of a periodic record.
pub(crate) fn derivative(x: &[f64], dt: f64) -> Vec<f64> {
    let n = x.len();
    let mut spec = forward_real(x);
    for (k, c) in spec.iter_mut().enumerate() {
        if is_nyquist(k, n) {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c *= Complex64::new(0.0, bin_omega(k, n, dt));
        }
    }
    inverse_real(spec)
}

/// Spectral integral of a zero-mean periodic record (the DC bin is dropped).
pub(crate) fn integral(x: &[f64], dt: f64) -> Vec<f64> {
    let n = x.len();
    let mut spec = forward_real(x);
    for (k, c) in spec.iter_mut().enumerate() {
        if k == 0 || is_nyquist(k, n) {
            *c = Complex64::new(0.0, 0.0);
        } else {
            *c /= Complex64::new(0.0, bin_omega(k, n, dt));
        }
    }
    inverse_real(spec)
}
