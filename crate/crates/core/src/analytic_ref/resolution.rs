//! Woodward resolution constants, resolution gains, degrees of freedom and
//! Cramér-Rao bounds.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::quadrature::{bisect, integrate, integrate_to_infinity, Tolerance};
use super::special::ln_beta;
use crate::error::{Error, Result};
use crate::signal_gen::SpectrumModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResolutionReport {
    /// Correlation resolution constant, seconds.
    pub delta_tau: f64,
    /// Crosslation resolution constant, seconds.
    pub delta_tau_c: f64,
    /// `delta_tau / delta_tau_c`.
    pub gain: f64,
    pub method: Method,
}

impl ResolutionReport {
    fn new(delta_tau: f64, delta_tau_c: f64, method: Method) -> Self {
        ResolutionReport { delta_tau, delta_tau_c, gain: delta_tau / delta_tau_c, method }
    }
}

/// Spectral moments `integral_0^inf w^a S(w)^b dw` for a density.
pub trait Density: Sync {
    fn eval(&self, omega: f64) -> f64;
    /// Frequency scale used to split semi-infinite integrals.
    fn scale(&self) -> f64;
    /// Support `[lo, hi]`, `hi = None` for unbounded.
    fn support(&self) -> (f64, Option<f64>) {
        (0.0, None)
    }
    /// Algebraic decay exponent `p` of `S ~ w^-p`, `None` for faster decay.
    fn tail_power(&self) -> Option<f64> {
        None
    }
}

impl Density for SpectrumModel {
    fn eval(&self, omega: f64) -> f64 {
        self.density(omega).unwrap_or(0.0)
    }

    fn scale(&self) -> f64 {
        match *self {
            SpectrumModel::BandLimited { w, .. }
            | SpectrumModel::Butterworth { w, .. }
            | SpectrumModel::ModifiedLorentzian { w, .. }
            | SpectrumModel::Laplacian { w, .. } => w,
            SpectrumModel::BandPass { high, .. } => high,
            SpectrumModel::GaussianShape { b, .. } => b,
            SpectrumModel::MultiSine { .. } | SpectrumModel::FmCarrier { .. } => 1.0,
        }
    }

    fn support(&self) -> (f64, Option<f64>) {
        match *self {
            SpectrumModel::BandLimited { w, .. } => (0.0, Some(w)),
            SpectrumModel::BandPass { low, high, .. } => (low, Some(high)),
            _ => (0.0, None),
        }
    }

    fn tail_power(&self) -> Option<f64> {
        match *self {
            SpectrumModel::Butterworth { kappa, .. } => Some(2.0 * kappa),
            SpectrumModel::ModifiedLorentzian { .. } => Some(4.0),
            _ => None,
        }
    }
}

/// `integral_0^inf w^a S(w)^b dw` by adaptive quadrature.
pub fn spectral_moment<D: Density + ?Sized>(s: &D, a: i32, b: i32, tol: Tolerance) -> Result<f64> {
    let f = |w: f64| w.powi(a) * s.eval(w).powi(b);
    let (lo, hi) = s.support();
    let v = match hi {
        Some(hi) => integrate(f, lo, hi, tol)?.value,
        None => {
            let tail = s.tail_power().map(|p| p * b as f64 - a as f64);
            integrate_to_infinity(f, lo, s.scale(), tail, tol)?.value
        }
    };
    Ok(v)
}

/// Resolution constants by quadrature of the density's moments.
pub fn woodward_by_quadrature<D: Density + ?Sized>(s: &D) -> Result<ResolutionReport> {
    let tol = Tolerance::default();
    let i0 = spectral_moment(s, 0, 2, tol)?;
    let i1 = spectral_moment(s, 0, 1, tol)?;
    let j2 = spectral_moment(s, 2, 2, tol)?;
    let j1 = spectral_moment(s, 1, 1, tol)?;
    Ok(ResolutionReport::new(2.0 * PI * i0 / (i1 * i1), 2.0 * PI * j2 / (j1 * j1), Method::Quadrature))
}

/// `integral_0^inf w^a / (1 + (w/W)^(2k))^b dw` via the beta function.
fn butterworth_moment_ln(kappa: f64, w: f64, a: f64, b: f64) -> f64 {
    let p = (a + 1.0) / (2.0 * kappa);
    (a + 1.0) * w.ln() - (2.0 * kappa).ln() + ln_beta(p, b - p)
}

/// Resolution constants, in closed form where the family allows it and by
/// quadrature otherwise. Line spectra are rejected.
pub fn woodward_constants(model: &SpectrumModel) -> Result<ResolutionReport> {
    model.validate()?;
    let r = match *model {
        SpectrumModel::BandLimited { w, .. } => {
            ResolutionReport::new(2.0 * PI / w, 8.0 * PI / (3.0 * w), Method::ClosedForm)
        }
        SpectrumModel::GaussianShape { b, .. } => {
            ResolutionReport::new(2.0 * PI.sqrt() / b, PI.powf(1.5) / (2.0 * b), Method::ClosedForm)
        }
        SpectrumModel::Laplacian { w, .. } => {
            ResolutionReport::new(PI / w, PI / (2.0 * w), Method::ClosedForm)
        }
        SpectrumModel::BandPass { low, high, .. } => {
            let dt = 2.0 * PI / (high - low);
            let j2 = (high.powi(3) - low.powi(3)) / 3.0;
            let j1 = (high * high - low * low) / 2.0;
            ResolutionReport::new(dt, 2.0 * PI * j2 / (j1 * j1), Method::ClosedForm)
        }
        SpectrumModel::Butterworth { kappa, w, .. } => {
            let dtau = 2.0 * PI * (butterworth_moment_ln(kappa, w, 0.0, 2.0) - 2.0 * butterworth_moment_ln(kappa, w, 0.0, 1.0)).exp();
            let dtau_c = if kappa > 1.0 {
                2.0 * PI
                    * (butterworth_moment_ln(kappa, w, 2.0, 2.0) - 2.0 * butterworth_moment_ln(kappa, w, 1.0, 1.0))
                        .exp()
            } else {
                0.0
            };
            ResolutionReport::new(dtau, dtau_c, Method::ClosedForm)
        }
        SpectrumModel::ModifiedLorentzian { .. } => woodward_by_quadrature(model)?,
        SpectrumModel::MultiSine { .. } | SpectrumModel::FmCarrier { .. } => {
            return Err(Error::UnsupportedModel(model.name()))
        }
    };
    Ok(r)
}

/// Resolution gain of the Butterworth family. Diverges (returns `+inf`) at
/// `kappa = 1`, where the first moment of the density is infinite.
pub fn butterworth_gain(kappa: f64) -> Result<f64> {
    if !(kappa.is_finite() && kappa >= 1.0) {
        return Err(Error::param(format!("butterworth kappa must be >= 1, got {kappa}")));
    }
    if kappa == 1.0 {
        return Ok(f64::INFINITY);
    }
    let k2 = 2.0 * kappa;
    let ln = ln_beta(1.0 / k2, (4.0 * kappa - 1.0) / k2) + 2.0 * ln_beta(1.0 / kappa, (kappa - 1.0) / kappa)
        - 2.0 * ln_beta(1.0 / k2, (2.0 * kappa - 1.0) / k2)
        - ln_beta(3.0 / k2, (4.0 * kappa - 3.0) / k2);
    Ok(ln.exp())
}

/// Resolution gain of the modified Lorentzian family,
/// `4 (g^2 + 3g + 1) ln^2 g / (pi^2 (g - 1)^2)`, evaluated through
/// `ln_1p` so that `gamma -> 1` tends smoothly to `20 / pi^2`.
pub fn lorentzian_gain(gamma: f64) -> Result<f64> {
    if !(gamma.is_finite() && gamma >= 1.0) {
        return Err(Error::param(format!("lorentzian gamma must be >= 1, got {gamma}")));
    }
    let d = gamma - 1.0;
    let ratio = if d == 0.0 { 1.0 } else { d.ln_1p() / d };
    Ok(4.0 * (gamma * gamma + 3.0 * gamma + 1.0) * ratio * ratio / (PI * PI))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Underdetermined,
    Determined,
    Overdetermined,
}

impl Regime {
    /// Classifies a crossing count against the degrees of freedom.
    pub fn classify(n_c: f64, lambda: f64) -> Self {
        let tol = 1e-9 * lambda.abs().max(1.0);
        if (n_c - lambda).abs() <= tol {
            Regime::Determined
        } else if n_c < lambda {
            Regime::Underdetermined
        } else {
            Regime::Overdetermined
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DofReport {
    /// Degrees of freedom `T R(0)^2 / integral R^2`.
    pub lambda: f64,
    /// Rice's expected crossing count `T B / pi` (`+inf` for infinite B).
    pub n_c_expected: f64,
    pub regime: Regime,
}

/// `integral_{-inf}^{inf} R(tau)^2 dtau = (1/pi) integral_0^inf S^2 dw`.
fn integral_r_squared(model: &SpectrumModel) -> Result<f64> {
    let closed = match *model {
        SpectrumModel::BandLimited { w, variance } => Some(variance * variance * PI / w),
        SpectrumModel::GaussianShape { b, variance } => Some(variance * variance * PI.sqrt() / b),
        SpectrumModel::BandPass { low, high, variance } => Some(variance * variance * PI / (high - low)),
        _ => None,
    };
    match closed {
        Some(v) => Ok(v),
        None => Ok(spectral_moment(model, 0, 2, Tolerance::default())? / PI),
    }
}

/// Degrees of freedom and expected crossing count over an interval `t`.
pub fn degrees_of_freedom(model: &SpectrumModel, t: f64) -> Result<DofReport> {
    model.validate()?;
    if !model.is_gaussian_process() {
        return Err(Error::UnsupportedModel(model.name()));
    }
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::param(format!("interval must be positive, got {t}")));
    }
    let s2 = model.variance();
    let lambda = t * s2 * s2 / integral_r_squared(model)?;
    let n_c_expected = model.rms_bandwidth().map_or(f64::INFINITY, |b| t * b / PI);
    Ok(DofReport { lambda, n_c_expected, regime: Regime::classify(n_c_expected, lambda) })
}

/// Degrees of freedom from an autocorrelation callable, integrating `R^2`
/// over the whole line (`R` even, decaying at least like `1/|tau|`).
pub fn degrees_of_freedom_from_autocorrelation(
    r: impl Fn(f64) -> f64,
    correlation_time: f64,
    t: f64,
) -> Result<f64> {
    let r0 = r(0.0);
    let half = integrate_to_infinity(|x| r(x).powi(2), 0.0, correlation_time, Some(2.0), Tolerance::default())?;
    Ok(t * r0 * r0 / (2.0 * half.value))
}

/// The modified-Lorentzian `gamma` at which the degrees of freedom equal
/// the expected crossing count, found by bisection on `[2, 20]` with
/// `R^2` integrated numerically.
pub fn lorentzian_gamma_star() -> Result<f64> {
    bisect(
        |gamma| {
            let model = SpectrumModel::ModifiedLorentzian { gamma, w: 1.0, variance: 1.0 };
            let dof = degrees_of_freedom(&model, 1.0)?;
            Ok(dof.lambda - dof.n_c_expected)
        },
        2.0,
        20.0,
        1e-6,
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrReport {
    /// Bound for the correlation estimator, s^2.
    pub var_correlation: f64,
    /// Bound for the crosslation estimator, s^2.
    pub var_crosslation: f64,
    /// `var_crosslation / var_correlation`.
    pub ratio: f64,
    pub regime: Regime,
}

/// Cramér-Rao bounds for delay estimation with noise variance `noise_var`,
/// signal variance `signal_var`, rms bandwidth `b`, degrees of freedom
/// `lambda` and crossing count `n_c`.
pub fn cr_bounds(noise_var: f64, signal_var: f64, b: f64, lambda: f64, n_c: f64) -> Result<CrReport> {
    for (name, v) in [("signal variance", signal_var), ("bandwidth", b), ("lambda", lambda), ("n_c", n_c)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::param(format!("{name} must be positive, got {v}")));
        }
    }
    if !(noise_var.is_finite() && noise_var >= 0.0) {
        return Err(Error::param(format!("noise variance must be >= 0, got {noise_var}")));
    }
    let energy = signal_var * b * b;
    let var_correlation = noise_var / (lambda * energy);
    let regime = Regime::classify(n_c, lambda);
    let var_crosslation = if n_c < lambda && regime == Regime::Underdetermined {
        noise_var / (2.0 * n_c * energy)
    } else {
        noise_var / (2.0 * lambda * energy)
    };
    let ratio = if var_correlation > 0.0 {
        var_crosslation / var_correlation
    } else if n_c < lambda {
        lambda / (2.0 * n_c)
    } else {
        0.5
    };
    Ok(CrReport { var_correlation, var_crosslation, ratio, regime })
}
