//! Monte-Carlo time-delay estimation and resolution experiments.
//!
//! Every trial synthesizes a periodic reference record, delays it
//! circularly and adds noise. Crossings and slew rates always come from
//! the clean reference; values are read from the received channel. All
//! envelopes are circular correlations evaluated by FFT, so every crossing
//! of the reference contributes.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::analytic_ref::{
    butterworth_gain, cr_bounds, degrees_of_freedom, lorentzian_gain, woodward_by_quadrature, CrReport,
};
use crate::dsp;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::seed;
use crate::signal_gen::{delay_and_corrupt_with, synthesize, NoiseBand, SpectrumModel, Waveform};
use crate::zero_crossing::{detect_crossings, CrossingSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Estimator {
    /// Envelope of the cross-correlation and its quadrature.
    CorrelationEnv,
    /// Envelope of the complex crosslation (sign weights).
    CrosslationEnv,
    /// Envelope of the slew-weighted complex crosslation.
    SlewCrosslationEnv,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Estimator::CorrelationEnv => "correlation_env",
            Estimator::CrosslationEnv => "crosslation_env",
            Estimator::SlewCrosslationEnv => "slew_crosslation_env",
        }
    }
}

/// How the coarse envelope peak is refined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Refinement {
    /// Three-point parabola through the envelope peak.
    #[default]
    Parabolic,
    /// Envelope peak, then a fine step on the in-phase component.
    /// Correlation: Gauss-Newton fit of the received channel against the
    /// reference and its derivative at equispaced instants. Crosslation
    /// variants: rising zero of the in-phase interferogram nearest the
    /// coarse peak, linearly interpolated.
    Fine,
}

fn default_trials() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub spectrum: SpectrumModel,
    /// Record length `T`, seconds. The sample count is `round(T / dt)`.
    pub duration: f64,
    pub dt: f64,
    /// True delay, seconds; `|delay| < T / 4`.
    pub delay: f64,
    /// Signal-to-noise ratio in dB; absent means noiseless.
    #[serde(default)]
    pub snr_db: Option<f64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    pub estimator: Estimator,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub noise_band: NoiseBand,
    #[serde(default)]
    pub refinement: Refinement,
    /// Samples in the correlation fine fit; defaults to `round(Lambda)`.
    #[serde(default)]
    pub fit_samples: Option<usize>,
    /// Largest lag searched for the envelope peak, seconds; defaults to `T / 4`.
    #[serde(default)]
    pub max_lag: Option<f64>,
    #[serde(default)]
    pub exec: Execution,
}

impl ExperimentConfig {
    pub fn samples(&self) -> usize {
        (self.duration / self.dt).round() as usize
    }

    /// Period of the circular record, `n dt`.
    pub fn period(&self) -> f64 {
        self.samples() as f64 * self.dt
    }

    pub fn validate(&self) -> Result<()> {
        self.spectrum.validate()?;
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidSampleInterval(self.dt));
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(Error::param(format!("duration must be positive, got {}", self.duration)));
        }
        if self.samples() < 16 {
            return Err(Error::TooShort { required: 16, actual: self.samples() });
        }
        if self.trials < 1 {
            return Err(Error::param("trials must be at least 1"));
        }
        let limit = self.period() / 4.0;
        if !(self.delay.is_finite() && self.delay.abs() < limit) {
            return Err(Error::DelayOutOfRange { delay: self.delay, limit });
        }
        if let Some(snr) = self.snr_db {
            if snr.is_nan() {
                return Err(Error::param("snr_db is NaN"));
            }
        }
        if let Some(m) = self.max_lag {
            if !(m > 0.0 && m <= self.period() / 2.0) {
                return Err(Error::param(format!("max_lag must be in (0, T/2], got {m}")));
            }
        }
        if self.fit_samples == Some(0) {
            return Err(Error::param("fit_samples must be positive"));
        }
        Ok(())
    }

    fn lag_limit(&self) -> usize {
        let max = self.max_lag.unwrap_or(self.period() / 4.0);
        ((max / self.dt).floor() as usize).min(self.samples() / 2 - 1)
    }

    fn fit_samples_or_default(&self) -> Result<usize> {
        if let Some(m) = self.fit_samples {
            return Ok(m);
        }
        let dof = degrees_of_freedom(&self.spectrum, self.period())?;
        Ok((dof.lambda.round() as usize).max(2))
    }
}

/// Estimator settings independent of how the waveforms were produced.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelayEstimator {
    pub estimator: Estimator,
    pub refinement: Refinement,
    /// Largest searched lag, samples.
    pub lag_limit: usize,
    /// Fit size for the correlation fine step.
    pub fit_samples: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DelayEstimate {
    pub delay: f64,
    pub peak_value: f64,
    pub n_c: usize,
}

/// Complex envelope between a reference and a received record.
#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeTrace {
    pub dt: f64,
    /// Lag of `values[0]`, samples.
    pub first_lag: i64,
    /// In-phase component (correlation or crosslation).
    pub in_phase: Vec<f64>,
    /// Quadrature component.
    pub quadrature: Vec<f64>,
    pub envelope: Vec<f64>,
}

impl EnvelopeTrace {
    pub fn tau(&self, i: usize) -> f64 {
        (self.first_lag + i as i64) as f64 * self.dt
    }

    /// Width of the main lobe at half its peak, by linear interpolation.
    pub fn half_maximum_width(&self) -> Result<f64> {
        let e = &self.envelope;
        let p = argmax(e).ok_or(Error::NoCrossings)?;
        let half = 0.5 * e[p];
        let mut left = None;
        for i in (0..p).rev() {
            if e[i] <= half {
                left = Some(i as f64 + (half - e[i]) / (e[i + 1] - e[i]));
                break;
            }
        }
        let mut right = None;
        for i in p + 1..e.len() {
            if e[i] <= half {
                right = Some(i as f64 - (half - e[i]) / (e[i - 1] - e[i]));
                break;
            }
        }
        match (left, right) {
            (Some(l), Some(r)) => Ok((r - l) * self.dt),
            _ => Err(Error::Numerical("main lobe does not fall to half maximum inside the window".into())),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("tau,in_phase,quadrature,envelope\n");
        for i in 0..self.envelope.len() {
            s.push_str(&format!(
                "{:.8e},{:.8e},{:.8e},{:.8e}\n",
                self.tau(i),
                self.in_phase[i],
                self.quadrature[i],
                self.envelope[i]
            ));
        }
        s
    }
}

fn argmax(v: &[f64]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, x) in v.iter().enumerate() {
        if best.is_none_or(|b| *x > v[b]) {
            best = Some(i);
        }
    }
    best
}

/// Impulse train with weight `w_i` split linearly between the samples
/// bracketing each crossing, so that `sum_k d[k] r[k + l]` reads the
/// linearly interpolated value `r(t_i + l dt)`.
fn impulse_train(cs: &CrossingSet, n: usize, weight: impl Fn(&crate::CrossingEvent) -> f64) -> Vec<f64> {
    let mut d = vec![0.0; n];
    for e in &cs.events {
        let w = weight(e);
        d[e.index] += w * (1.0 - e.frac);
        d[(e.index + 1) % n] += w * e.frac;
    }
    d
}

/// Circular correlation of `a` against both `b` and `H{b}`.
fn xcorr_pair(a: &[f64], b: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let n = a.len();
    let fa = dsp::forward_real(a);
    let fb = dsp::forward_real(b);
    let prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x.conj() * y).collect();
    let mut hprod = prod.clone();
    for (k, c) in hprod.iter_mut().enumerate() {
        let s = dsp::signed_bin(k, n);
        *c *= if s > 0 && 2 * k != n {
            Complex64::new(0.0, -1.0)
        } else if s < 0 && 2 * k != n {
            Complex64::new(0.0, 1.0)
        } else {
            Complex64::new(0.0, 0.0)
        };
    }
    (dsp::inverse_real(prod), dsp::inverse_real(hprod))
}

fn circular_window(v: &[f64], lag_limit: usize, scale: f64) -> Vec<f64> {
    let n = v.len() as i64;
    let l = lag_limit as i64;
    (-l..=l).map(|k| scale * v[k.rem_euclid(n) as usize]).collect()
}

fn check_pair(reference: &Waveform, received: &Waveform) -> Result<()> {
    if reference.len() != received.len() || reference.dt() != received.dt() {
        return Err(Error::param("reference and received records must share length and sample interval"));
    }
    Ok(())
}

/// Envelope of the chosen estimator on lags `-lag_limit ..= lag_limit`.
pub fn envelope_trace(
    reference: &Waveform,
    received: &Waveform,
    cs: &CrossingSet,
    estimator: Estimator,
    lag_limit: usize,
) -> Result<EnvelopeTrace> {
    check_pair(reference, received)?;
    let n = reference.len();
    if lag_limit == 0 || 2 * lag_limit >= n {
        return Err(Error::param(format!("lag limit {lag_limit} must be in 1..{}", n / 2)));
    }
    let (probe, scale, quad_sign) = match estimator {
        Estimator::CorrelationEnv => (reference.samples().to_vec(), 1.0 / n as f64, 1.0),
        Estimator::CrosslationEnv | Estimator::SlewCrosslationEnv => {
            if cs.is_empty() {
                return Err(Error::NoCrossings);
            }
            let slew = estimator == Estimator::SlewCrosslationEnv;
            let d = impulse_train(cs, n, |e| if slew { e.slope } else { e.direction.sign() });
            (d, 1.0 / cs.len() as f64, -1.0)
        }
    };
    let (re, im) = xcorr_pair(&probe, received.samples());
    let in_phase = circular_window(&re, lag_limit, scale);
    let quadrature = circular_window(&im, lag_limit, quad_sign * scale);
    let envelope = in_phase.iter().zip(&quadrature).map(|(a, b)| a.hypot(*b)).collect();
    Ok(EnvelopeTrace { dt: reference.dt(), first_lag: -(lag_limit as i64), in_phase, quadrature, envelope })
}

fn parabolic(e: &[f64], p: usize) -> (f64, f64) {
    if p == 0 || p + 1 >= e.len() {
        return (p as f64, e[p]);
    }
    let (a, b, c) = (e[p - 1], e[p], e[p + 1]);
    let den = a - 2.0 * b + c;
    if den >= 0.0 {
        return (p as f64, b);
    }
    let off = 0.5 * (a - c) / den;
    (p as f64 + off, b - 0.25 * (a - c) * off)
}

/// Rising zero of `g` nearest to `pos` (fractional index).
fn rising_zero_near(g: &[f64], pos: f64) -> Option<f64> {
    let mut best: Option<f64> = None;
    for i in 0..g.len().saturating_sub(1) {
        if g[i] <= 0.0 && g[i + 1] > 0.0 {
            let z = i as f64 + g[i] / (g[i] - g[i + 1]);
            if best.is_none_or(|b| (z - pos).abs() < (b - pos).abs()) {
                best = Some(z);
            }
        }
    }
    best
}

/// Least-squares delay fit `r(u + delta) ~ a s(u) + b s'(u)` at `m`
/// equispaced instants, iterated from `start`.
fn fit_delay(reference: &Waveform, received: &Waveform, start: f64, m: usize) -> Result<f64> {
    let n = reference.len();
    let dt = reference.dt();
    let s = reference.samples();
    let ds = dsp::derivative(s, dt);
    let idx: Vec<usize> = (0..m.min(n)).map(|i| i * n / m.min(n)).collect();
    let mut delta = start;
    for _ in 0..4 {
        let r = dsp::circular_delay(received.samples(), dt, -delta);
        let (mut sss, mut ssd, mut sdd, mut srs, mut srd) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for &u in &idx {
            sss += s[u] * s[u];
            ssd += s[u] * ds[u];
            sdd += ds[u] * ds[u];
            srs += r[u] * s[u];
            srd += r[u] * ds[u];
        }
        let det = sss * sdd - ssd * ssd;
        if !(det.is_finite() && det > 0.0) {
            return Err(Error::Numerical("singular delay fit".into()));
        }
        let a = (srs * sdd - srd * ssd) / det;
        let b = (sss * srd - ssd * srs) / det;
        if !(a.is_finite() && a != 0.0) {
            return Err(Error::Numerical("delay fit lost the reference".into()));
        }
        let step = -b / a;
        delta += step;
        if step.abs() < 1e-6 * dt {
            break;
        }
    }
    Ok(delta)
}

/// Estimates the delay of `received` relative to `reference`.
pub fn estimate_delay(reference: &Waveform, received: &Waveform, est: &DelayEstimator) -> Result<DelayEstimate> {
    let cs = detect_crossings(reference);
    if cs.is_empty() {
        return Err(Error::NoCrossings);
    }
    let trace = envelope_trace(reference, received, &cs, est.estimator, est.lag_limit)?;
    let p = argmax(&trace.envelope).ok_or(Error::NoCrossings)?;
    let (pos, peak_value) = parabolic(&trace.envelope, p);
    let dt = reference.dt();
    let coarse = (trace.first_lag as f64 + pos) * dt;
    let delay = match est.refinement {
        Refinement::Parabolic => coarse,
        Refinement::Fine => match est.estimator {
            Estimator::CorrelationEnv => fit_delay(reference, received, coarse, est.fit_samples)?,
            _ => {
                let z = rising_zero_near(&trace.in_phase, pos)
                    .ok_or_else(|| Error::Numerical("in-phase interferogram has no rising zero".into()))?;
                (trace.first_lag as f64 + z) * dt
            }
        },
    };
    if !delay.is_finite() {
        return Err(Error::Numerical("non-finite delay estimate".into()));
    }
    Ok(DelayEstimate { delay, peak_value, n_c: cs.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrialResult {
    pub delta_hat: f64,
    pub peak_value: f64,
    pub n_c_used: usize,
    /// Mean square of the synthesized reference.
    pub signal_power: f64,
}

/// Reference and received records for one trial.
pub fn trial_waveforms(cfg: &ExperimentConfig, trial_index: usize) -> Result<(Waveform, Waveform)> {
    let n = cfg.samples();
    let s = synthesize(&cfg.spectrum, n, cfg.dt, seed::derive(cfg.base_seed, trial_index as u64, 0))?;
    let snr = cfg.snr_db.unwrap_or(f64::INFINITY);
    let r = delay_and_corrupt_with(
        &s,
        cfg.delay,
        snr,
        cfg.noise_band,
        seed::derive(cfg.base_seed, trial_index as u64, 1),
    )?;
    Ok((s, r))
}

fn delay_estimator(cfg: &ExperimentConfig) -> Result<DelayEstimator> {
    let fit_samples = match (cfg.refinement, cfg.estimator) {
        (Refinement::Fine, Estimator::CorrelationEnv) => cfg.fit_samples_or_default()?,
        _ => cfg.fit_samples.unwrap_or(0),
    };
    Ok(DelayEstimator {
        estimator: cfg.estimator,
        refinement: cfg.refinement,
        lag_limit: cfg.lag_limit(),
        fit_samples,
    })
}

fn trial_with(cfg: &ExperimentConfig, est: &DelayEstimator, trial_index: usize) -> Result<TrialResult> {
    let (s, r) = trial_waveforms(cfg, trial_index)?;
    let d = estimate_delay(&s, &r, est)?;
    Ok(TrialResult { delta_hat: d.delay, peak_value: d.peak_value, n_c_used: d.n_c, signal_power: s.mean_square() })
}

pub fn run_trial(cfg: &ExperimentConfig, trial_index: usize) -> Result<TrialResult> {
    cfg.validate()?;
    trial_with(cfg, &delay_estimator(cfg)?, trial_index)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimationReport {
    pub estimator: Estimator,
    pub trials: usize,
    pub delay: f64,
    pub bias: f64,
    /// Population variance of the estimates, s^2.
    pub variance: f64,
    /// `sqrt(bias^2 + variance)`.
    pub rmse: f64,
    /// Standard error of `variance` under normal estimates.
    pub variance_stderr: f64,
    /// Standard error of the mean estimate.
    pub bias_stderr: f64,
    pub mean_n_c: f64,
    /// Degrees of freedom of the model over one period, when defined.
    pub lambda: Option<f64>,
    /// Noise variance used for the bounds.
    pub noise_variance: f64,
    pub cr_bound: Option<CrReport>,
}

impl EstimationReport {
    /// Bound for this report's estimator family.
    pub fn bound(&self) -> Option<f64> {
        self.cr_bound.map(|cr| match self.estimator {
            Estimator::CorrelationEnv => cr.var_correlation,
            _ => cr.var_crosslation,
        })
    }

    /// `(variance - bound) / variance_stderr`.
    pub fn excess_in_stderrs(&self) -> Option<f64> {
        self.bound().map(|b| (self.variance - b) / self.variance_stderr)
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "estimator={} trials={} bias={:.6e} variance={:.6e} rmse={:.6e} variance_se={:.6e} mean_n_c={:.3}",
            self.estimator.name(),
            self.trials,
            self.bias,
            self.variance,
            self.rmse,
            self.variance_stderr,
            self.mean_n_c
        );
        if let Some(l) = self.lambda {
            s.push_str(&format!(" lambda={l:.3}"));
        }
        if let Some(b) = self.bound() {
            s.push_str(&format!(" cr_bound={b:.6e} ratio_to_bound={:.4}", self.variance / b));
        }
        s
    }
}

/// Aggregates per-trial estimates in trial order.
pub fn summarize(cfg: &ExperimentConfig, results: &[TrialResult]) -> Result<EstimationReport> {
    let n = results.len();
    if n == 0 {
        return Err(Error::param("no trials to summarize"));
    }
    let nf = n as f64;
    let mean = results.iter().map(|r| r.delta_hat).sum::<f64>() / nf;
    let bias = mean - cfg.delay;
    let variance = results.iter().map(|r| (r.delta_hat - mean).powi(2)).sum::<f64>() / nf;
    let rmse = (bias * bias + variance).sqrt();
    let variance_stderr = if n > 1 { variance * (2.0 / (nf - 1.0)).sqrt() } else { f64::INFINITY };
    let bias_stderr = if n > 1 { (variance / (nf - 1.0)).sqrt() } else { f64::INFINITY };
    let mean_n_c = results.iter().map(|r| r.n_c_used as f64).sum::<f64>() / nf;
    let signal_power = results.iter().map(|r| r.signal_power).sum::<f64>() / nf;
    let noise_variance = match cfg.snr_db {
        Some(db) => signal_power / 10f64.powf(db / 10.0),
        None => 0.0,
    };
    let (lambda, cr_bound) = match (degrees_of_freedom(&cfg.spectrum, cfg.period()), cfg.spectrum.rms_bandwidth()) {
        (Ok(dof), Some(b)) if b.is_finite() => {
            let cr = cr_bounds(noise_variance, cfg.spectrum.variance(), b, dof.lambda, mean_n_c)?;
            (Some(dof.lambda), Some(cr))
        }
        (Ok(dof), _) => (Some(dof.lambda), None),
        _ => (None, None),
    };
    Ok(EstimationReport {
        estimator: cfg.estimator,
        trials: n,
        delay: cfg.delay,
        bias,
        variance,
        rmse,
        variance_stderr,
        bias_stderr,
        mean_n_c,
        lambda,
        noise_variance,
        cr_bound,
    })
}

/// Runs every trial (in parallel when configured) and aggregates them.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<EstimationReport> {
    run_experiment_with_trials(cfg).map(|(r, _)| r)
}

/// As [`run_experiment`], also returning the per-trial results.
pub fn run_experiment_with_trials(cfg: &ExperimentConfig) -> Result<(EstimationReport, Vec<TrialResult>)> {
    cfg.validate()?;
    let est = delay_estimator(cfg)?;
    let results = cfg
        .exec
        .map(cfg.trials, |i| trial_with(cfg, &est, i))
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok((summarize(cfg, &results)?, results))
}

pub fn trials_csv(results: &[TrialResult]) -> String {
    let mut s = String::from("trial,delta_hat,peak_value,n_c\n");
    for (i, r) in results.iter().enumerate() {
        s.push_str(&format!("{i},{:.8e},{:.8e},{}\n", r.delta_hat, r.peak_value, r.n_c_used));
    }
    s
}

/// Empirical Woodward constants from simulated envelopes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalResolution {
    pub delta_tau: f64,
    pub delta_tau_c: f64,
    pub gain: f64,
}

/// Settings for empirical Woodward constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmpiricalSpec {
    pub samples: usize,
    pub dt: f64,
    /// Integration half window, seconds.
    pub half_window: f64,
    pub seeds: usize,
    #[serde(default)]
    pub base_seed: u64,
}

/// Integrates seed-averaged `|envelope|^2` over `|tau| <= half_window` for
/// the autocorrelation and the auto-crosslation of synthesized records,
/// each normalized by its value at zero lag.
pub fn empirical_woodward(model: &SpectrumModel, spec: &EmpiricalSpec, exec: Execution) -> Result<EmpiricalResolution> {
    if spec.seeds == 0 {
        return Err(Error::param("seeds must be positive"));
    }
    let lag_limit = (spec.half_window / spec.dt).floor() as usize;
    let per_seed = exec.map(spec.seeds, |i| -> Result<(Vec<f64>, Vec<f64>)> {
        let s = synthesize(model, spec.samples, spec.dt, seed::derive(spec.base_seed, i as u64, 0))?;
        let cs = detect_crossings(&s);
        let corr = envelope_trace(&s, &s, &cs, Estimator::CorrelationEnv, lag_limit)?;
        let cross = envelope_trace(&s, &s, &cs, Estimator::CrosslationEnv, lag_limit)?;
        let sq = |t: &EnvelopeTrace| t.envelope.iter().map(|v| v * v).collect::<Vec<f64>>();
        Ok((sq(&corr), sq(&cross)))
    });
    let mut corr = vec![0.0; 2 * lag_limit + 1];
    let mut cross = vec![0.0; 2 * lag_limit + 1];
    for r in per_seed {
        let (a, b) = r?;
        corr.iter_mut().zip(&a).for_each(|(x, y)| *x += y);
        cross.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
    }
    let constant = |e: &[f64]| e.iter().sum::<f64>() * spec.dt / e[lag_limit];
    let delta_tau = constant(&corr);
    let delta_tau_c = constant(&cross);
    Ok(EmpiricalResolution { delta_tau, delta_tau_c, gain: delta_tau / delta_tau_c })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepFamily {
    /// Parameter is the shape `kappa`.
    Butterworth,
    /// Parameter is `gamma`.
    ModifiedLorentzian,
}

impl SweepFamily {
    /// Unit-bandwidth, unit-variance member of the family.
    pub fn model(self, param: f64) -> SpectrumModel {
        match self {
            SweepFamily::Butterworth => SpectrumModel::Butterworth { kappa: param, w: 1.0, variance: 1.0 },
            SweepFamily::ModifiedLorentzian => {
                SpectrumModel::ModifiedLorentzian { gamma: param, w: 1.0, variance: 1.0 }
            }
        }
    }

    pub fn closed_gain(self, param: f64) -> Result<f64> {
        match self {
            SweepFamily::Butterworth => butterworth_gain(param),
            SweepFamily::ModifiedLorentzian => lorentzian_gain(param),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub param: f64,
    pub gain: f64,
    pub gain_quadrature: f64,
    pub gain_empirical: Option<f64>,
}

/// Resolution gain across `params`, by closed form and by quadrature, plus
/// an empirical gain at the parameters listed in `empirical_at`.
pub fn resolution_sweep(
    family: SweepFamily,
    params: &[f64],
    empirical_at: &[f64],
    empirical: Option<&EmpiricalSpec>,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    params
        .iter()
        .map(|&p| {
            let gain = family.closed_gain(p)?;
            let gain_quadrature = if gain.is_infinite() { f64::INFINITY } else { woodward_by_quadrature(&family.model(p))?.gain };
            let gain_empirical = match empirical {
                Some(spec) if empirical_at.contains(&p) => {
                    Some(empirical_woodward(&family.model(p), spec, exec)?.gain)
                }
                _ => None,
            };
            Ok(SweepRow { param: p, gain, gain_quadrature, gain_empirical })
        })
        .collect()
}

pub fn sweep_csv(family: SweepFamily, rows: &[SweepRow]) -> String {
    let name = match family {
        SweepFamily::Butterworth => "kappa",
        SweepFamily::ModifiedLorentzian => "gamma",
    };
    let mut s = format!("{name},gain,gain_quadrature,gain_empirical\n");
    for r in rows {
        let emp = r.gain_empirical.map(|g| format!("{g:.8e}")).unwrap_or_default();
        s.push_str(&format!("{:.8e},{:.8e},{:.8e},{emp}\n", r.param, r.gain, r.gain_quadrature));
    }
    s
}

/// Woodward constant of a band-limited spectrum, `2 pi / W`.
pub fn bandlimited_woodward(w: f64) -> f64 {
    2.0 * PI / w
}
