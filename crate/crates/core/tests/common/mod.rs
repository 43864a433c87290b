#![allow(dead_code)]

use crosslation::signal_gen::synthesize;
use crosslation::{SpectrumModel, Waveform};

pub fn gaussian(b: f64, n: usize, dt: f64, seed: u64) -> Waveform {
    synthesize(&SpectrumModel::GaussianShape { b, variance: 1.0 }, n, dt, seed).unwrap()
}

pub fn sine(n: usize, dt: f64, omega: f64, phase: f64) -> Waveform {
    Waveform::new((0..n).map(|i| (omega * i as f64 * dt + phase).sin()).collect(), dt, "sine").unwrap()
}

/// Mean and standard error of independent per-seed estimates.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0);
    (m, (v / n).sqrt())
}

/// Pooled ratio `sum(sums) / sum(counts)` with a batch-spread standard error.
pub fn pooled(sums: &[f64], counts: &[f64]) -> (f64, f64) {
    let n: f64 = counts.iter().sum();
    let m = sums.iter().sum::<f64>() / n;
    let k = sums.len() as f64;
    let ss: f64 = sums.iter().zip(counts).map(|(s, c)| (s - m * c).powi(2)).sum();
    (m, (k / (k - 1.0) * ss).sqrt() / n)
}

pub fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

/// Periodogram `|X_k|^2 dt / n` for `k = 0..=n/2`, an estimate of the
/// two-sided density.
pub fn periodogram(x: &[f64], dt: f64) -> Vec<f64> {
    use rustfft::{num_complex::Complex64, FftPlanner};
    let n = x.len();
    let mut buf: Vec<Complex64> = x.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);
    buf[..=n / 2].iter().map(|c| c.norm_sqr() * dt / n as f64).collect()
}
