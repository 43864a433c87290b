//! Closed-form correlation, structure, crosslation and autoference
//! functions for the spectrum families with known transforms.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::special::{scaled_e1, scaled_ei};

/// `r(tau) = exp(-b^2 tau^2 / 2)`.
pub fn gaussian_r(b: f64, tau: f64) -> f64 {
    (-(b * b * tau * tau) / 2.0).exp()
}

/// `R'(tau)` of the Gaussian-shape autocorrelation.
pub fn gaussian_dr(b: f64, variance: f64, tau: f64) -> f64 {
    -variance * b * b * tau * gaussian_r(b, tau)
}

/// Global structure function `D(tau) = 2 s2 [1 - r(tau)]`.
pub fn structure_global_gaussian(b: f64, variance: f64, tau: f64) -> f64 {
    2.0 * variance * (1.0 - gaussian_r(b, tau))
}

/// Local structure function `D0(tau) = s2 [1 - r^2 - r'^2 / r''(0)]`, the
/// mean square of crossjectories. For the Gaussian shape `r''(0) = -b^2`.
pub fn structure_local_gaussian(b: f64, variance: f64, tau: f64) -> f64 {
    let r = gaussian_r(b, tau);
    variance * (1.0 - r * r + b * b * tau * tau * r * r)
}

/// Crosslation of a Gaussian process, `C = -sqrt(pi/2) R'(tau) / (b s)`.
pub fn crosslation_gaussian(dr: impl Fn(f64) -> f64, b: f64, sigma: f64, tau: f64) -> f64 {
    -(PI / 2.0).sqrt() * dr(tau) / (b * sigma)
}

/// Conditional moments of crossjectories at an upcrossing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SlepianMoments {
    /// Mean crossjectory, equal to the crosslation.
    pub mean: f64,
    /// Variance of the self-noise term `G(tau)`.
    pub self_noise_variance: f64,
    /// Variance of the whole crossjectory, self-noise plus the spread of
    /// the Rayleigh slope factor.
    pub total_variance: f64,
}

/// Slepian-model moments at lag `tau` from `R` and `R'`.
pub fn slepian_mean_and_variance(
    r: impl Fn(f64) -> f64,
    dr: impl Fn(f64) -> f64,
    b: f64,
    sigma: f64,
    tau: f64,
) -> SlepianMoments {
    let s2 = sigma * sigma;
    let rv = r(tau);
    let d = dr(tau);
    let template = d / (b * b * s2);
    let self_noise = (s2 - rv * rv / s2 - d * d / (b * b * s2)).max(0.0);
    let slope_var = (2.0 - PI / 2.0) * b * b * s2;
    SlepianMoments {
        mean: -(PI / 2.0).sqrt() * b * sigma * template,
        self_noise_variance: self_noise,
        total_variance: self_noise + slope_var * template * template,
    }
}

/// Components of the band-limited family at one lag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandLimitedValues {
    pub r_xx: f64,
    /// `H{R_xx}`.
    pub r_xy: f64,
    /// Envelope of the complex correlation.
    pub r_envelope: f64,
    pub c: f64,
    pub a: f64,
    /// Envelope of the complex crosslation.
    pub a_envelope: f64,
}

/// Below this `|u|` the odd and even kernels use their power series.
const SERIES_BELOW: f64 = 0.5;

// (sin u - u cos u) / u^2
fn odd_kernel(u: f64) -> f64 {
    if u.abs() < SERIES_BELOW {
        // sum_k (-1)^(k+1) 2k u^(2k-1) / (2k+1)!
        let u2 = u * u;
        let mut term = u / 3.0; // k = 1: 2 u / 3!
        let mut sum = term;
        for k in 2..20 {
            let kf = k as f64;
            term *= -u2 * kf / ((kf - 1.0) * (2.0 * kf) * (2.0 * kf + 1.0));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (u.sin() - u * u.cos()) / (u * u)
    }
}

// (u sin u + cos u - 1) / u^2
fn even_kernel(u: f64) -> f64 {
    if u.abs() < SERIES_BELOW {
        // sum_k (-1)^(k-1) (2k-1) u^(2k-2) / (2k)!
        let u2 = u * u;
        let mut term = 0.5;
        let mut sum = term;
        for k in 2..20 {
            let kf = k as f64;
            term *= -u2 * (2.0 * kf - 1.0) / ((2.0 * kf - 3.0) * (2.0 * kf - 1.0) * (2.0 * kf));
            sum += term;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        (u * u.sin() + u.cos() - 1.0) / (u * u)
    }
}

// (1 - cos u) / u
fn hilbert_sinc(u: f64) -> f64 {
    if u.abs() < 1e-3 {
        u / 2.0 - u.powi(3) / 24.0
    } else {
        (1.0 - u.cos()) / u
    }
}

/// Band-limited family for cutoff `w` (rad/s) and standard deviation
/// `sigma`.
pub fn bandlimited_family(w: f64, sigma: f64, tau: f64) -> BandLimitedValues {
    let s2 = sigma * sigma;
    let u = w * tau;
    let k = sigma * (1.5 * PI).sqrt();
    let c = k * odd_kernel(u);
    let a = k * even_kernel(u);
    BandLimitedValues {
        r_xx: s2 * crate::signal_gen::sinc(u),
        r_xy: s2 * hilbert_sinc(u),
        r_envelope: s2 * crate::signal_gen::sinc(u / 2.0).abs(),
        c,
        a,
        a_envelope: a.hypot(c),
    }
}

/// The band-limited crosslation envelope written as a single radical,
/// `sqrt(u^2 - 2u sin u - 2cos u + 2) / u^2`. Loses precision for small
/// `u`; [`bandlimited_family`] is the accurate route.
pub fn bandlimited_envelope_direct(w: f64, sigma: f64, tau: f64) -> f64 {
    let u = w * tau;
    let k = sigma * (1.5 * PI).sqrt();
    k * (u * u - 2.0 * u * u.sin() - 2.0 * u.cos() + 2.0).max(0.0).sqrt() / (u * u)
}

/// `H{exp(-a|tau|)}`.
pub fn hilbert_exp(a: f64, tau: f64) -> f64 {
    if tau == 0.0 {
        return 0.0;
    }
    let x = a * tau.abs();
    tau.signum() / PI * (scaled_e1(x) + scaled_ei(x))
}

/// `H{sgn(tau) exp(-a|tau|)}`; singular at `tau = 0`.
pub fn hilbert_sgn_exp(a: f64, tau: f64) -> f64 {
    let x = a * tau.abs();
    (scaled_ei(x) - scaled_e1(x)) / PI
}

/// Components of the modified-Lorentzian family at one lag.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LorentzianValues {
    pub r_xx: f64,
    pub h_r_xx: f64,
    pub c: f64,
    pub a: f64,
    pub a_envelope: f64,
}

/// Modified-Lorentzian family with parameters `gamma > 1`, corner `w` and
/// `variance`; the rms bandwidth is `w sqrt(gamma)`.
pub fn lorentzian_family(gamma: f64, w: f64, variance: f64, tau: f64) -> LorentzianValues {
    let t = tau.abs();
    let g1 = gamma - 1.0;
    let r_xx = variance * (gamma * (-w * t).exp() - (-gamma * w * t).exp()) / g1;
    let h_r_xx = variance * (gamma * hilbert_exp(w, tau) - hilbert_exp(gamma * w, tau)) / g1;
    let k = variance * gamma * w / g1;
    let dr = k * tau.signum() * ((-gamma * w * t).exp() - (-w * t).exp());
    let h_dr = if tau == 0.0 {
        k * 2.0 / PI * gamma.ln()
    } else {
        k * (hilbert_sgn_exp(gamma * w, tau) - hilbert_sgn_exp(w, tau))
    };
    let sigma = variance.sqrt();
    let b = w * gamma.sqrt();
    let scale = (PI / 2.0).sqrt() / (b * sigma);
    let c = if tau == 0.0 { 0.0 } else { -scale * dr };
    let a = scale * h_dr;
    LorentzianValues { r_xx, h_r_xx, c, a, a_envelope: a.hypot(c) }
}
