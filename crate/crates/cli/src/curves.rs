//! Tabulated closed-form curves as CSV.

use std::path::PathBuf;

use serde::Deserialize;

use crosslation::analytic_ref::{
    bandlimited_family, butterworth_gain, degrees_of_freedom, lorentzian_family, lorentzian_gain,
    structure_global_gaussian, structure_local_gaussian,
};
use crosslation::SpectrumModel;

use crate::error::CliError;

const BUTTERWORTH_SHAPES: [f64; 4] = [1.0, 1.5, 3.0, 10.0];
const LORENTZIAN_GAMMA: f64 = 5.0;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurvesConfig {
    pub curve: Curve,
    pub output: PathBuf,
    #[serde(default = "default_points")]
    pub points: usize,
    /// Abscissa interval; each curve has its own default.
    #[serde(default)]
    pub range: Option<(f64, f64)>,
}

fn default_points() -> usize {
    401
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Curve {
    /// Local and halved global structure functions, Gaussian shape, `B = 1`.
    StructureFunctions,
    /// Butterworth density shapes against `omega / W`.
    ButterworthDensity,
    /// Butterworth resolution gain against `kappa`.
    ButterworthGain,
    /// Band-limited correlation and crosslation components, `W = 1`.
    BandlimitedHelix,
    /// Band-limited correlation and adjusted crosslation envelopes.
    BandlimitedEnvelopes,
    /// Modified-Lorentzian resolution gain against `gamma`.
    LorentzianGain,
    /// Degrees of freedom and expected crossings per `W T` against `gamma`.
    LorentzianDof,
    /// Modified-Lorentzian components at `gamma = 5`.
    LorentzianHelix,
    /// Modified-Lorentzian envelopes at `gamma = 5`.
    LorentzianEnvelopes,
}

fn default_range(curve: Curve) -> (f64, f64) {
    match curve {
        Curve::StructureFunctions => (0.0, 5.0),
        Curve::ButterworthDensity => (0.0, 3.0),
        Curve::ButterworthGain => (1.02, 6.0),
        Curve::BandlimitedHelix | Curve::BandlimitedEnvelopes => (-20.0, 20.0),
        Curve::LorentzianGain => (1.001, 30.0),
        Curve::LorentzianDof => (1.01, 10.0),
        Curve::LorentzianHelix | Curve::LorentzianEnvelopes => (-6.0, 6.0),
    }
}

fn grid(range: (f64, f64), points: usize) -> Vec<f64> {
    let (lo, hi) = range;
    (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect()
}

fn row(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|v| format!("{v:.10e}")).collect();
    cells.join(",") + "\n"
}

/// Returns the CSV text and the row count.
pub fn tabulate(cfg: &CurvesConfig) -> Result<(String, usize), CliError> {
    if cfg.points < 2 {
        return Err(CliError::Config("points must be at least 2".into()));
    }
    let range = cfg.range.unwrap_or_else(|| default_range(cfg.curve));
    if !(range.0.is_finite() && range.1.is_finite() && range.1 > range.0) {
        return Err(CliError::Config(format!("invalid range {range:?}")));
    }
    let xs = grid(range, cfg.points);
    let mut out = String::new();
    match cfg.curve {
        Curve::StructureFunctions => {
            out.push_str("tau,local,global_half\n");
            for &t in &xs {
                out.push_str(&row(&[t, structure_local_gaussian(1.0, 1.0, t), structure_global_gaussian(1.0, 1.0, t) / 2.0]));
            }
        }
        Curve::ButterworthDensity => {
            let names: Vec<String> = BUTTERWORTH_SHAPES.iter().map(|k| format!("kappa_{k}")).collect();
            out.push_str(&format!("omega,{}\n", names.join(",")));
            for &w in &xs {
                let mut r = vec![w];
                r.extend(BUTTERWORTH_SHAPES.iter().map(|k| 1.0 / (1.0 + w.powf(2.0 * k))));
                out.push_str(&row(&r));
            }
        }
        Curve::ButterworthGain => {
            out.push_str("kappa,gain\n");
            for &k in &xs {
                out.push_str(&row(&[k, butterworth_gain(k)?]));
            }
        }
        Curve::BandlimitedHelix => {
            out.push_str("tau,r_xx,r_xy,r_envelope,c,a,a_envelope\n");
            let a0 = bandlimited_family(1.0, 1.0, 0.0).a_envelope;
            for &t in &xs {
                let v = bandlimited_family(1.0, 1.0, t);
                out.push_str(&row(&[t, v.r_xx, v.r_xy, v.r_envelope, v.c / a0, v.a / a0, v.a_envelope / a0]));
            }
        }
        Curve::BandlimitedEnvelopes => {
            out.push_str("tau,r_envelope,a_envelope_adjusted\n");
            let v0 = bandlimited_family(1.0, 1.0, 0.0);
            for &t in &xs {
                let v = bandlimited_family(1.0, 1.0, t);
                out.push_str(&row(&[t, v.r_envelope, v.a_envelope * v0.r_envelope / v0.a_envelope]));
            }
        }
        Curve::LorentzianGain => {
            out.push_str("gamma,gain\n");
            for &g in &xs {
                out.push_str(&row(&[g, lorentzian_gain(g)?]));
            }
        }
        Curve::LorentzianDof => {
            out.push_str("gamma,lambda_per_wt,n_c_per_wt\n");
            for &g in &xs {
                let d = degrees_of_freedom(&SpectrumModel::ModifiedLorentzian { gamma: g, w: 1.0, variance: 1.0 }, 1.0)?;
                out.push_str(&row(&[g, d.lambda, d.n_c_expected]));
            }
        }
        Curve::LorentzianHelix => {
            out.push_str("tau,r_xx,h_r_xx,r_envelope,c,a,a_envelope\n");
            let a0 = lorentzian_family(LORENTZIAN_GAMMA, 1.0, 1.0, 0.0).a_envelope;
            for &t in &xs {
                let v = lorentzian_family(LORENTZIAN_GAMMA, 1.0, 1.0, t);
                let env = v.r_xx.hypot(v.h_r_xx);
                out.push_str(&row(&[t, v.r_xx, v.h_r_xx, env, v.c / a0, v.a / a0, v.a_envelope / a0]));
            }
        }
        Curve::LorentzianEnvelopes => {
            out.push_str("tau,r_envelope,a_envelope_adjusted\n");
            let v0 = lorentzian_family(LORENTZIAN_GAMMA, 1.0, 1.0, 0.0);
            let r0 = v0.r_xx.hypot(v0.h_r_xx);
            for &t in &xs {
                let v = lorentzian_family(LORENTZIAN_GAMMA, 1.0, 1.0, t);
                out.push_str(&row(&[t, v.r_xx.hypot(v.h_r_xx), v.a_envelope * r0 / v0.a_envelope]));
            }
        }
    }
    Ok((out, xs.len()))
}

pub fn name(curve: Curve) -> &'static str {
    match curve {
        Curve::StructureFunctions => "structure_functions",
        Curve::ButterworthDensity => "butterworth_density",
        Curve::ButterworthGain => "butterworth_gain",
        Curve::BandlimitedHelix => "bandlimited_helix",
        Curve::BandlimitedEnvelopes => "bandlimited_envelopes",
        Curve::LorentzianGain => "lorentzian_gain",
        Curve::LorentzianDof => "lorentzian_dof",
        Curve::LorentzianHelix => "lorentzian_helix",
        Curve::LorentzianEnvelopes => "lorentzian_envelopes",
    }
}
