//! Waveform synthesis and analytic-pair construction.

use std::f64::consts::PI;
use std::ops::Range;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dsp;
use crate::error::{Error, Result};
use crate::seed;

/// Minimum record length accepted by the random synthesizers.
pub const MIN_SYNTH_LEN: usize = 16;

/// Fraction of samples at each end treated as unreliable after an FFT-domain
/// Hilbert transform or filter.
pub const HILBERT_EDGE_FRACTION: f64 = 0.02;

/// A uniformly sampled real waveform.
///
/// `trusted` is the index range whose samples are free of circular
/// wrap-around and transform edge effects. Downstream statistics only use
/// crossings whose full window lies inside it.
#[derive(Debug, Clone, PartialEq)]
pub struct Waveform {
    samples: Vec<f64>,
    dt: f64,
    label: String,
    trusted: Range<usize>,
}

impl Waveform {
    pub fn new(samples: Vec<f64>, dt: f64, label: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::TooShort { required: 1, actual: 0 });
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::InvalidSampleInterval(dt));
        }
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::param("samples must be finite"));
        }
        let n = samples.len();
        Ok(Waveform { samples, dt, label: label.into(), trusted: 0..n })
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Observation interval `(len - 1) * dt`.
    pub fn duration(&self) -> f64 {
        (self.samples.len() - 1) as f64 * self.dt
    }

    pub fn trusted(&self) -> Range<usize> {
        self.trusted.clone()
    }

    /// Narrows the trusted region to its intersection with `range`.
    pub fn restrict_trusted(mut self, range: Range<usize>) -> Self {
        let start = self.trusted.start.max(range.start);
        let end = self.trusted.end.min(range.end).max(start);
        self.trusted = start..end;
        self
    }

    /// Drops `margin` samples from each end of the trusted region.
    pub fn trim_trusted(self, margin: usize) -> Self {
        let n = self.len();
        let end = n.saturating_sub(margin);
        self.restrict_trusted(margin.min(end)..end)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Replaces the samples, keeping `dt` and the trusted region.
    pub(crate) fn map_samples(&self, samples: Vec<f64>, label: String) -> Self {
        debug_assert_eq!(samples.len(), self.samples.len());
        Waveform { samples, dt: self.dt, label, trusted: self.trusted.clone() }
    }

    pub fn scaled(&self, a: f64) -> Self {
        self.map_samples(self.samples.iter().map(|v| v * a).collect(), self.label.clone())
    }

    /// Sample order reversed; the trusted region is mirrored.
    pub fn reversed(&self) -> Self {
        let n = self.len();
        let mut samples = self.samples.clone();
        samples.reverse();
        Waveform {
            samples,
            dt: self.dt,
            label: self.label.clone(),
            trusted: n - self.trusted.end..n - self.trusted.start,
        }
    }

    pub fn mean(&self) -> f64 {
        self.samples.iter().sum::<f64>() / self.len() as f64
    }

    pub fn mean_square(&self) -> f64 {
        self.samples.iter().map(|v| v * v).sum::<f64>() / self.len() as f64
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.samples.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / self.len() as f64
    }

    pub fn demeaned(&self) -> Self {
        let m = self.mean();
        self.map_samples(self.samples.iter().map(|v| v - m).collect(), self.label.clone())
    }

    /// CSV with columns `t,value`, nine significant digits.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t,value\n");
        for (i, v) in self.samples.iter().enumerate() {
            s.push_str(&format!("{:.8e},{v:.8e}\n", i as f64 * self.dt));
        }
        s
    }

    /// Linear interpolation at fractional sample position `pos`.
    pub fn interpolate(&self, pos: f64) -> Option<f64> {
        if pos.is_nan() || pos < 0.0 || pos > (self.len() - 1) as f64 {
            return None;
        }
        let k = (pos.floor() as usize).min(self.len().saturating_sub(2));
        let f = pos - k as f64;
        let a = self.samples[k];
        let b = *self.samples.get(k + 1).unwrap_or(&a);
        Some(a + f * (b - a))
    }
}

/// Target power spectral density.
///
/// Densities are two-sided, `R(tau) = (1/2pi) * integral S(w) e^{jw tau} dw`,
/// so `integral S = 2 pi variance`. Angular frequencies are in rad/s except
/// where a field name ends in `_hz`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum SpectrumModel {
    /// Flat on `|w| < w`.
    BandLimited { w: f64, variance: f64 },
    /// Flat on `low <= |w| <= high`.
    BandPass { low: f64, high: f64, variance: f64 },
    /// `exp(-w^2 / 2b^2)`, rms bandwidth `b`.
    GaussianShape { b: f64, variance: f64 },
    /// `1 / (1 + (w/w_c)^(2 kappa))`.
    Butterworth {
        kappa: f64,
        w: f64,
        #[serde(default = "unit")]
        variance: f64,
    },
    /// Difference of two Lorentzians with corner frequencies `w` and
    /// `gamma * w`; rms bandwidth `w * sqrt(gamma)`.
    ModifiedLorentzian { gamma: f64, w: f64, variance: f64 },
    /// `exp(-|w| / w)`.
    Laplacian { w: f64, variance: f64 },
    /// Equal-amplitude sines with independent uniform phases.
    MultiSine { frequencies_hz: Vec<f64>, amplitude: f64 },
    /// Unit-amplitude carrier frequency-modulated by Gaussian-shape noise of
    /// rms bandwidth `mod_bandwidth` (rad/s). The rms frequency deviation is
    /// `index * mod_bandwidth`.
    FmCarrier { carrier_hz: f64, mod_bandwidth: f64, index: f64 },
}

fn unit() -> f64 {
    1.0
}

impl SpectrumModel {
    pub fn name(&self) -> &'static str {
        match self {
            SpectrumModel::BandLimited { .. } => "band_limited",
            SpectrumModel::BandPass { .. } => "band_pass",
            SpectrumModel::GaussianShape { .. } => "gaussian_shape",
            SpectrumModel::Butterworth { .. } => "butterworth",
            SpectrumModel::ModifiedLorentzian { .. } => "modified_lorentzian",
            SpectrumModel::Laplacian { .. } => "laplacian",
            SpectrumModel::MultiSine { .. } => "multi_sine",
            SpectrumModel::FmCarrier { .. } => "fm_carrier",
        }
    }

    pub fn is_gaussian_process(&self) -> bool {
        !matches!(self, SpectrumModel::MultiSine { .. } | SpectrumModel::FmCarrier { .. })
    }

    pub fn validate(&self) -> Result<()> {
        fn pos(name: &str, v: f64) -> Result<()> {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(format!("{name} must be finite and positive, got {v}")))
            }
        }
        match self {
            SpectrumModel::BandLimited { w, variance } => {
                pos("w", *w)?;
                pos("variance", *variance)
            }
            SpectrumModel::BandPass { low, high, variance } => {
                pos("low", *low)?;
                pos("high", *high)?;
                pos("variance", *variance)?;
                if high <= low {
                    return Err(Error::param("band-pass needs high > low"));
                }
                Ok(())
            }
            SpectrumModel::GaussianShape { b, variance } => {
                pos("b", *b)?;
                pos("variance", *variance)
            }
            SpectrumModel::Butterworth { kappa, w, variance } => {
                if !(kappa.is_finite() && *kappa >= 1.0) {
                    return Err(Error::param(format!("butterworth kappa must be >= 1, got {kappa}")));
                }
                pos("w", *w)?;
                pos("variance", *variance)
            }
            SpectrumModel::ModifiedLorentzian { gamma, w, variance } => {
                if !(gamma.is_finite() && *gamma > 1.0) {
                    return Err(Error::param(format!("lorentzian gamma must be > 1, got {gamma}")));
                }
                pos("w", *w)?;
                pos("variance", *variance)
            }
            SpectrumModel::Laplacian { w, variance } => {
                pos("w", *w)?;
                pos("variance", *variance)
            }
            SpectrumModel::MultiSine { frequencies_hz, amplitude } => {
                if frequencies_hz.is_empty() {
                    return Err(Error::param("multi-sine needs at least one frequency"));
                }
                for f in frequencies_hz {
                    pos("frequency", *f)?;
                }
                pos("amplitude", *amplitude)
            }
            SpectrumModel::FmCarrier { carrier_hz, mod_bandwidth, index } => {
                pos("carrier_hz", *carrier_hz)?;
                pos("mod_bandwidth", *mod_bandwidth)?;
                if !(index.is_finite() && *index >= 0.0) {
                    return Err(Error::param("modulation index must be >= 0"));
                }
                Ok(())
            }
        }
    }

    /// Two-sided density at `omega`, or `None` for line spectra.
    pub fn density(&self, omega: f64) -> Option<f64> {
        let a = omega.abs();
        let s = match *self {
            SpectrumModel::BandLimited { w, variance } => {
                if a < w {
                    variance * PI / w
                } else {
                    0.0
                }
            }
            SpectrumModel::BandPass { low, high, variance } => {
                if a >= low && a <= high {
                    variance * PI / (high - low)
                } else {
                    0.0
                }
            }
            SpectrumModel::GaussianShape { b, variance } => {
                variance * (2.0 * PI).sqrt() / b * (-(a * a) / (2.0 * b * b)).exp()
            }
            SpectrumModel::Butterworth { kappa, w, variance } => {
                let c = 2.0 * kappa * variance * (PI / (2.0 * kappa)).sin() / w;
                c / (1.0 + (a / w).powf(2.0 * kappa))
            }
            SpectrumModel::ModifiedLorentzian { gamma, w, variance } => {
                2.0 * variance * w.powi(3) * gamma * (gamma + 1.0)
                    / ((w * w + a * a) * (gamma * gamma * w * w + a * a))
            }
            SpectrumModel::Laplacian { w, variance } => variance * PI / w * (-a / w).exp(),
            SpectrumModel::MultiSine { .. } | SpectrumModel::FmCarrier { .. } => return None,
        };
        Some(s)
    }

    /// Process variance `R(0)`.
    pub fn variance(&self) -> f64 {
        match self {
            SpectrumModel::BandLimited { variance, .. }
            | SpectrumModel::BandPass { variance, .. }
            | SpectrumModel::GaussianShape { variance, .. }
            | SpectrumModel::Butterworth { variance, .. }
            | SpectrumModel::ModifiedLorentzian { variance, .. }
            | SpectrumModel::Laplacian { variance, .. } => *variance,
            SpectrumModel::MultiSine { frequencies_hz, amplitude } => {
                amplitude * amplitude * frequencies_hz.len() as f64 / 2.0
            }
            SpectrumModel::FmCarrier { .. } => 0.5,
        }
    }

    /// Rms bandwidth in rad/s, `None` when it is infinite.
    pub fn rms_bandwidth(&self) -> Option<f64> {
        match *self {
            SpectrumModel::BandLimited { w, .. } => Some(w / 3f64.sqrt()),
            SpectrumModel::BandPass { low, high, .. } => {
                Some(((high.powi(3) - low.powi(3)) / (3.0 * (high - low))).sqrt())
            }
            SpectrumModel::GaussianShape { b, .. } => Some(b),
            SpectrumModel::Butterworth { kappa, w, .. } => {
                if 2.0 * kappa > 3.0 {
                    let r = (PI / (2.0 * kappa)).sin() / (3.0 * PI / (2.0 * kappa)).sin();
                    Some(w * r.sqrt())
                } else {
                    None
                }
            }
            SpectrumModel::ModifiedLorentzian { gamma, w, .. } => Some(w * gamma.sqrt()),
            SpectrumModel::Laplacian { w, .. } => Some(w * 2f64.sqrt()),
            SpectrumModel::MultiSine { ref frequencies_hz, .. } => {
                let m = frequencies_hz.iter().map(|f| (2.0 * PI * f).powi(2)).sum::<f64>()
                    / frequencies_hz.len() as f64;
                Some(m.sqrt())
            }
            SpectrumModel::FmCarrier { carrier_hz, mod_bandwidth, index } => {
                let w0 = 2.0 * PI * carrier_hz;
                Some((w0 * w0 + (index * mod_bandwidth).powi(2)).sqrt())
            }
        }
    }

    /// Closed-form autocorrelation `R(tau)` where one exists.
    pub fn autocorrelation(&self, tau: f64) -> Option<f64> {
        let t = tau.abs();
        let r = match *self {
            SpectrumModel::BandLimited { w, variance } => variance * sinc(w * t),
            SpectrumModel::BandPass { low, high, variance } => {
                if t == 0.0 {
                    variance
                } else {
                    variance * ((high * t).sin() - (low * t).sin()) / ((high - low) * t)
                }
            }
            SpectrumModel::GaussianShape { b, variance } => variance * (-(b * b * t * t) / 2.0).exp(),
            SpectrumModel::ModifiedLorentzian { gamma, w, variance } => {
                variance * (gamma * (-w * t).exp() - (-gamma * w * t).exp()) / (gamma - 1.0)
            }
            SpectrumModel::Laplacian { w, variance } => variance / (1.0 + w * w * t * t),
            SpectrumModel::MultiSine { ref frequencies_hz, amplitude } => {
                amplitude * amplitude / 2.0
                    * frequencies_hz.iter().map(|f| (2.0 * PI * f * t).cos()).sum::<f64>()
            }
            SpectrumModel::Butterworth { .. } | SpectrumModel::FmCarrier { .. } => return None,
        };
        Some(r)
    }
}

pub(crate) fn sinc(u: f64) -> f64 {
    if u.abs() < 1e-4 {
        1.0 - u * u / 6.0 + u.powi(4) / 120.0
    } else {
        u.sin() / u
    }
}

fn check_dt(dt: f64) -> Result<()> {
    if dt.is_finite() && dt > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidSampleInterval(dt))
    }
}

/// Zero-mean Gaussian realization with the model's density.
///
/// Each positive-frequency bin receives independent complex Gaussian noise
/// with `E|X_k|^2 = n S(w_k) / dt`; the DC bin is zero and the Nyquist bin
/// real. The record is periodic with period `n * dt`.
pub fn synth_gaussian(model: &SpectrumModel, n: usize, dt: f64, seed: u64) -> Result<Waveform> {
    check_dt(dt)?;
    model.validate()?;
    if !model.is_gaussian_process() {
        return Err(Error::UnsupportedModel(model.name()));
    }
    if n < MIN_SYNTH_LEN {
        return Err(Error::TooShort { required: MIN_SYNTH_LEN, actual: n });
    }
    let mut rng = seed::rng(seed);
    let mut spec = vec![Complex64::new(0.0, 0.0); n];
    let scale = n as f64 / dt;
    for k in 1..=n / 2 {
        let s = model.density(dsp::bin_omega(k, n, dt)).unwrap_or(0.0);
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        if n.is_multiple_of(2) && k == n / 2 {
            spec[k] = Complex64::new((scale * s).sqrt() * re, 0.0);
        } else {
            let a = (scale * s / 2.0).sqrt();
            spec[k] = Complex64::new(a * re, a * im);
            spec[n - k] = spec[k].conj();
        }
    }
    let samples = dsp::inverse_real(spec);
    Waveform::new(samples, dt, format!("{}:seed={seed}", model.name()))
}

/// Uniform phases on (-pi, pi) used by [`synth_multisine`] for `seed`.
pub fn multisine_phases(count: usize, seed: u64) -> Vec<f64> {
    let mut rng = seed::rng(seed);
    (0..count).map(|_| rng.random_range(-PI..PI)).collect()
}

/// Sum of equal-amplitude sines `a * sum sin(2 pi f_k t + phi_k)`, `t = i dt`.
pub fn synth_multisine(model: &SpectrumModel, n: usize, dt: f64, seed: u64) -> Result<Waveform> {
    check_dt(dt)?;
    let SpectrumModel::MultiSine { frequencies_hz, amplitude } = model else {
        return Err(Error::UnsupportedModel(model.name()));
    };
    model.validate()?;
    if n == 0 {
        return Err(Error::TooShort { required: 1, actual: 0 });
    }
    let nyquist = 0.5 / dt;
    if let Some(&f) = frequencies_hz.iter().find(|&&f| f >= nyquist) {
        return Err(Error::AboveNyquist { frequency: f, nyquist });
    }
    let phases = multisine_phases(frequencies_hz.len(), seed);
    let samples = (0..n)
        .map(|i| {
            let t = i as f64 * dt;
            amplitude
                * frequencies_hz
                    .iter()
                    .zip(&phases)
                    .map(|(f, p)| (2.0 * PI * f * t + p).sin())
                    .sum::<f64>()
        })
        .collect();
    Waveform::new(samples, dt, format!("multi_sine:seed={seed}"))
}

/// Number of modulation standard deviations kept clear of DC and Nyquist.
const FM_GUARD_SIGMAS: f64 = 4.0;

/// Carrier frequency actually used for an `n`-sample record: the requested
/// carrier rounded to the nearest DFT bin so the phase is periodic.
pub fn fm_snapped_carrier_hz(carrier_hz: f64, n: usize, dt: f64) -> f64 {
    let span = n as f64 * dt;
    (carrier_hz * span).round().max(1.0) / span
}

/// Half-power (FWHM) occupied bandwidth in Hz of a wideband FM carrier,
/// whose spectrum follows the Gaussian law of the instantaneous frequency.
pub fn fm_occupied_bandwidth_hz(mod_bandwidth: f64, index: f64) -> f64 {
    2.0 * (2.0 * 2f64.ln()).sqrt() * index * mod_bandwidth / (2.0 * PI)
}

/// Constant-envelope carrier `cos(w0 t + phi(t))` with
/// `phi' = index * mod_bandwidth * m(t)` for unit-variance Gaussian-shape
/// noise `m`.
pub fn synth_fm_carrier(model: &SpectrumModel, n: usize, dt: f64, seed: u64) -> Result<Waveform> {
    check_dt(dt)?;
    let SpectrumModel::FmCarrier { carrier_hz, mod_bandwidth, index } = *model else {
        return Err(Error::UnsupportedModel(model.name()));
    };
    model.validate()?;
    if n < MIN_SYNTH_LEN {
        return Err(Error::TooShort { required: MIN_SYNTH_LEN, actual: n });
    }
    let w0 = 2.0 * PI * fm_snapped_carrier_hz(carrier_hz, n, dt);
    let deviation = index * mod_bandwidth;
    let nyquist = PI / dt;
    let reach = FM_GUARD_SIGMAS * (deviation + mod_bandwidth);
    if w0 + reach >= nyquist {
        return Err(Error::AboveNyquist { frequency: (w0 + reach) / (2.0 * PI), nyquist: nyquist / (2.0 * PI) });
    }
    if w0 - FM_GUARD_SIGMAS * deviation <= 0.0 {
        return Err(Error::param("modulation would drive the instantaneous frequency negative"));
    }
    let phase = if deviation > 0.0 {
        let m = synth_gaussian(
            &SpectrumModel::GaussianShape { b: mod_bandwidth, variance: 1.0 },
            n,
            dt,
            seed::derive(seed, 0, 1),
        )?;
        dsp::integral(m.samples(), dt)
    } else {
        vec![0.0; n]
    };
    let samples = phase
        .iter()
        .enumerate()
        .map(|(i, p)| (w0 * i as f64 * dt + deviation * p).cos())
        .collect();
    Waveform::new(samples, dt, format!("fm_carrier:seed={seed}"))
}

/// Dispatches to the synthesizer matching the model family.
pub fn synthesize(model: &SpectrumModel, n: usize, dt: f64, seed: u64) -> Result<Waveform> {
    match model {
        SpectrumModel::MultiSine { .. } => synth_multisine(model, n, dt, seed),
        SpectrumModel::FmCarrier { .. } => synth_fm_carrier(model, n, dt, seed),
        _ => synth_gaussian(model, n, dt, seed),
    }
}

/// In-phase / quadrature representation with `x = H{y}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticPair {
    pub x: Waveform,
    pub y: Waveform,
}

impl AnalyticPair {
    pub fn new(x: Waveform, y: Waveform) -> Result<Self> {
        if x.len() != y.len() || x.dt() != y.dt() {
            return Err(Error::param("analytic pair channels must share dt and length"));
        }
        Ok(AnalyticPair { x, y })
    }

    /// Instantaneous envelope `sqrt(x^2 + y^2)`.
    pub fn envelope(&self) -> Vec<f64> {
        self.x.samples().iter().zip(self.y.samples()).map(|(a, b)| a.hypot(*b)).collect()
    }
}

pub(crate) fn edge_margin(n: usize) -> usize {
    (HILBERT_EDGE_FRACTION * n as f64).ceil() as usize
}

/// Returns `y = w` and `x = H{w}` computed with the DFT. The first and last
/// 2% of samples are marked untrusted in both channels.
pub fn analytic_signal(w: &Waveform) -> Result<AnalyticPair> {
    if w.len() < 4 {
        return Err(Error::TooShort { required: 4, actual: w.len() });
    }
    let margin = edge_margin(w.len());
    let y = w.clone().trim_trusted(margin);
    let x = y.map_samples(dsp::hilbert(w.samples()), format!("hilbert({})", w.label()));
    Ok(AnalyticPair { x, y })
}

/// Bandwidth of additive noise in [`delay_and_corrupt_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum NoiseBand {
    /// Independent samples.
    #[default]
    White,
    /// Flat on `|w| < w`, rad/s.
    LowPass { w: f64 },
}

/// Delays `w` by `delay` seconds and adds white Gaussian noise at `snr_db`
/// relative to the mean square of `w`. An infinite SNR adds nothing.
pub fn delay_and_corrupt(w: &Waveform, delay: f64, snr_db: f64, seed: u64) -> Result<Waveform> {
    delay_and_corrupt_with(w, delay, snr_db, NoiseBand::White, seed)
}

/// As [`delay_and_corrupt`] with a choice of noise band. The delay is a
/// circular phase ramp, so `max(|delay|, 10 dt)` at each end is marked
/// untrusted.
pub fn delay_and_corrupt_with(
    w: &Waveform,
    delay: f64,
    snr_db: f64,
    band: NoiseBand,
    seed: u64,
) -> Result<Waveform> {
    let limit = w.duration() / 2.0;
    if !(delay.is_finite() && delay.abs() < limit) {
        return Err(Error::DelayOutOfRange { delay, limit });
    }
    if snr_db.is_nan() {
        return Err(Error::param("snr_db is NaN"));
    }
    let dt = w.dt();
    let mut out = if delay == 0.0 {
        w.samples().to_vec()
    } else {
        dsp::circular_delay(w.samples(), dt, delay)
    };
    if snr_db != f64::INFINITY {
        let noise_var = w.mean_square() / 10f64.powf(snr_db / 10.0);
        let noise_seed = seed::derive(seed, 0, 2);
        match band {
            NoiseBand::White => {
                let sd = noise_var.sqrt();
                let mut rng = seed::rng(noise_seed);
                for v in out.iter_mut() {
                    let z: f64 = rng.sample(StandardNormal);
                    *v += sd * z;
                }
            }
            NoiseBand::LowPass { w: wn } => {
                let noise = synth_gaussian(
                    &SpectrumModel::BandLimited { w: wn, variance: noise_var },
                    w.len(),
                    dt,
                    noise_seed,
                )?;
                for (v, z) in out.iter_mut().zip(noise.samples()) {
                    *v += z;
                }
            }
        }
    }
    let margin = (delay.abs().max(10.0 * dt) / dt).ceil() as usize;
    let label = format!("delayed({},{delay},{snr_db}dB)", w.label());
    Ok(w.map_samples(out, label).trim_trusted(margin))
}
