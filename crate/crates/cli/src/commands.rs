//! One function per subcommand. Each returns its summary line.

use std::fmt::Display;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crosslation::analytic_ref::{degrees_of_freedom, lorentzian_gamma_star};
use crosslation::crosslation::{
    complex_crosslation, default_half_window, estimate_mu, spectrum_from_crosslation, Crosslator,
};
use crosslation::estimation::{
    envelope_trace, resolution_sweep, run_experiment_with_trials, sweep_csv, trials_csv, EmpiricalSpec, Estimator,
    ExperimentConfig, SweepFamily,
};
use crosslation::io::{decode_samples, read_waveform, write_text, write_waveform};
use crosslation::signal_gen::{analytic_signal, synthesize};
use crosslation::streaming::{Averaging, Placement, StreamConfig, StreamingCrosslator, DEFAULT_TAPS};
use crosslation::zero_crossing::detect_crossings_with;
use crosslation::{Variant, CrossingSet, Execution, Interferogram, LagRange, SpectrumModel, Timing, Waveform};

use crate::error::CliError;

/// `key=value` pairs printed on one line.
pub struct Summary(Vec<(String, String)>);

impl Summary {
    pub fn new(command: &str) -> Self {
        Summary(vec![("command".into(), command.into())])
    }

    pub fn put(&mut self, key: &str, value: impl Display) -> &mut Self {
        self.0.push((key.into(), value.to_string()));
        self
    }

    pub fn line(&self) -> String {
        self.0.iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
    }
}

fn write_out(path: &Path, text: &str) -> Result<(), CliError> {
    Ok(write_text(path, text)?)
}

/// JSON when the path ends in `.json` (exact round trip), CSV otherwise.
fn write_interferogram(path: &Path, ifg: &Interferogram, csv: impl FnOnce() -> String) -> Result<(), CliError> {
    if path.extension().is_some_and(|e| e == "json") {
        let text = serde_json::to_string(ifg).map_err(|e| CliError::Numeric(e.to_string()))?;
        write_out(path, &text)
    } else {
        write_out(path, &csv())
    }
}

fn input(path: &Path) -> Result<Waveform, CliError> {
    read_waveform(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Half window from the config, or `10 / B` with `B = pi * rate`, capped
/// just below a quarter of the record.
fn half_window(requested: Option<f64>, w: &Waveform, cs: &CrossingSet) -> Result<f64, CliError> {
    if let Some(h) = requested {
        return Ok(h);
    }
    if cs.is_empty() {
        return Err(CliError::Numeric("no zero crossings to size the window".into()));
    }
    let b = std::f64::consts::PI * cs.rate();
    Ok(default_half_window(b).min(0.99 * w.duration() / 4.0))
}

fn variant_name(v: Variant) -> String {
    serde_json::to_value(v).ok().and_then(|j| j.as_str().map(str::to_string)).unwrap_or_default()
}

fn peak(ifg: &Interferogram, values: &[f64]) -> (f64, f64) {
    let (i, v) = values
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc });
    (ifg.tau(i), v)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthConfig {
    pub model: SpectrumModel,
    pub samples: usize,
    pub dt: f64,
    #[serde(default)]
    pub seed: u64,
    pub output: PathBuf,
    #[serde(default)]
    pub csv: Option<PathBuf>,
}

pub fn synth(cfg: SynthConfig) -> Result<String, CliError> {
    let w = synthesize(&cfg.model, cfg.samples, cfg.dt, cfg.seed)?;
    write_waveform(&cfg.output, &w)?;
    if let Some(p) = &cfg.csv {
        write_out(p, &w.to_csv())?;
    }
    let mut s = Summary::new("synth");
    s.put("model", cfg.model.name())
        .put("samples", w.len())
        .put("dt", w.dt())
        .put("seed", cfg.seed)
        .put("mean", w.mean())
        .put("variance", w.variance())
        .put("output", cfg.output.display());
    Ok(s.line())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossingsConfig {
    pub input: PathBuf,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Hysteresis half band, volts.
    #[serde(default)]
    pub threshold: f64,
}

pub fn crossings(cfg: CrossingsConfig) -> Result<String, CliError> {
    if !(cfg.threshold.is_finite() && cfg.threshold >= 0.0) {
        return Err(CliError::Config(format!("threshold must be >= 0, got {}", cfg.threshold)));
    }
    let w = input(&cfg.input)?;
    let cs = detect_crossings_with(&w, cfg.threshold);
    if let Some(p) = &cfg.output {
        write_out(p, &cs.to_csv())?;
    }
    let mut s = Summary::new("crossings");
    s.put("events", cs.len()).put("n_plus", cs.n_plus).put("n_minus", cs.n_minus).put("rate", cs.rate());
    if !cs.is_empty() {
        s.put("slope_m2", cs.slope_second_moment()).put("mean_abs_slope", cs.mean_abs_slope());
    }
    Ok(s.line())
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CrossVariant {
    #[default]
    Crosslation,
    UpOnly,
    DownOnly,
    Slew,
    LocalStructure,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrosslateConfig {
    pub input: PathBuf,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Seconds; defaults to `10 / B` from the measured crossing rate.
    #[serde(default)]
    pub half_window: Option<f64>,
    #[serde(default)]
    pub variant: CrossVariant,
    #[serde(default)]
    pub timing: Timing,
    #[serde(default)]
    pub exec: Execution,
}

pub fn crosslate(cfg: CrosslateConfig) -> Result<String, CliError> {
    let w = input(&cfg.input)?;
    let cs = detect_crossings_with(&w, 0.0);
    let h = half_window(cfg.half_window, &w, &cs)?;
    let engine = Crosslator::new(LagRange::for_window(&w, h)?).with_timing(cfg.timing).with_exec(cfg.exec);
    let ifg = match cfg.variant {
        CrossVariant::Crosslation => engine.crosslation(&w, &cs),
        CrossVariant::UpOnly => engine.up_only(&w, &cs),
        CrossVariant::DownOnly => engine.down_only(&w, &cs),
        CrossVariant::Slew => engine.slew_crosslation(&w, &cs),
        CrossVariant::LocalStructure => engine.local_structure(&w, &cs),
    }?;
    if let Some(p) = &cfg.output {
        write_interferogram(p, &ifg, || ifg.to_csv())?;
    }
    let (tau, v) = peak(&ifg, &ifg.values);
    let mut s = Summary::new("crosslate");
    s.put("variant", variant_name(ifg.variant))
        .put("n_used", ifg.n_used)
        .put("lags", ifg.len())
        .put("half_window", h)
        .put("peak_tau", tau)
        .put("peak_abs", v);
    Ok(s.line())
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AutoVariant {
    #[default]
    Autoference,
    Sign,
    Weighted,
    Slew,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutoferenceConfig {
    pub input: PathBuf,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub half_window: Option<f64>,
    #[serde(default)]
    pub variant: AutoVariant,
}

pub fn autoference(cfg: AutoferenceConfig) -> Result<String, CliError> {
    let w = input(&cfg.input)?;
    let pair = analytic_signal(&w)?;
    let cs = detect_crossings_with(&pair.x, 0.0);
    let h = half_window(cfg.half_window, &w, &cs)?;
    let engine = Crosslator::new(LagRange::for_window(&w, h)?);
    let ifg = match cfg.variant {
        AutoVariant::Autoference => engine.autoference(&pair, &cs),
        AutoVariant::Sign => engine.sign_autoference(&pair, &cs),
        AutoVariant::Weighted => engine.weighted_autoference(&pair, &cs),
        AutoVariant::Slew => engine.slew_autoference(&pair, &cs),
    }?;
    if let Some(p) = &cfg.output {
        write_interferogram(p, &ifg, || ifg.to_csv())?;
    }
    let (tau, v) = peak(&ifg, &ifg.values);
    let mut s = Summary::new("autoference");
    s.put("n_used", ifg.n_used).put("lags", ifg.len()).put("half_window", h).put("peak_tau", tau).put("peak_abs", v);
    Ok(s.line())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvelopeConfig {
    /// Reference waveform; alone, its complex crosslation is reported.
    pub input: PathBuf,
    /// Received waveform; with it, the delay envelope is reported.
    #[serde(default)]
    pub received: Option<PathBuf>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// `A,C` pairs of the complex crosslation.
    #[serde(default)]
    pub nyquist_output: Option<PathBuf>,
    #[serde(default)]
    pub half_window: Option<f64>,
    #[serde(default = "default_estimator")]
    pub estimator: Estimator,
}

fn default_estimator() -> Estimator {
    Estimator::CrosslationEnv
}

pub fn envelope(cfg: EnvelopeConfig) -> Result<String, CliError> {
    let w = input(&cfg.input)?;
    let mut s = Summary::new("envelope");
    match &cfg.received {
        Some(path) => {
            let r = input(path)?;
            let cs = detect_crossings_with(&w, 0.0);
            let h = half_window(cfg.half_window, &w, &cs)?;
            let trace = envelope_trace(&w, &r, &cs, cfg.estimator, (h / w.dt()).floor() as usize)?;
            if let Some(p) = &cfg.output {
                write_out(p, &trace.to_csv())?;
            }
            let (i, v) = trace
                .envelope
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |acc, (i, v)| if *v > acc.1 { (i, *v) } else { acc });
            s.put("estimator", cfg.estimator.name()).put("lags", trace.envelope.len()).put("peak_tau", trace.tau(i));
            s.put("peak_envelope", v);
            if let Ok(width) = trace.half_maximum_width() {
                s.put("half_max_width", width);
            }
        }
        None => {
            let pair = analytic_signal(&w)?;
            let cs = detect_crossings_with(&pair.x, 0.0);
            let h = half_window(cfg.half_window, &w, &cs)?;
            let engine = Crosslator::new(LagRange::for_window(&w, h)?);
            let c = engine.crosslation(&pair.x, &cs)?;
            let a = engine.autoference(&pair, &cs)?;
            let cc = complex_crosslation(&c, &a)?;
            if let Some(p) = &cfg.output {
                write_out(p, &cc.to_csv())?;
            }
            if let Some(p) = &cfg.nyquist_output {
                write_out(p, &cc.nyquist_csv())?;
            }
            let (tau, v) = peak(&c, &cc.envelope);
            s.put("n_used", c.n_used).put("lags", c.len()).put("peak_tau", tau).put("peak_envelope", v);
        }
    }
    Ok(s.line())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub input: PathBuf,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub half_window: Option<f64>,
    /// Slope scale `E|slope| / (sigma B)`; estimated from the record when absent.
    #[serde(default)]
    pub mu: Option<f64>,
}

pub fn spectrum(cfg: SpectrumConfig) -> Result<String, CliError> {
    let w = input(&cfg.input)?;
    let cs = detect_crossings_with(&w, 0.0);
    let h = half_window(cfg.half_window, &w, &cs)?;
    let c = Crosslator::new(LagRange::for_window(&w, h)?).crosslation(&w, &cs)?;
    let mu = cfg.mu.unwrap_or_else(|| estimate_mu(&w));
    let est = spectrum_from_crosslation(&c, mu, cs.rate())?;
    if let Some(p) = &cfg.output {
        write_out(p, &est.to_csv())?;
    }
    let total: f64 = est.density.iter().sum();
    let centroid = est.omega.iter().zip(&est.density).map(|(w, d)| w * d).sum::<f64>() / total;
    let mut s = Summary::new("spectrum");
    s.put("mu", mu).put("rate", cs.rate()).put("bins", est.omega.len()).put("centroid", centroid);
    Ok(s.line())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GainCheck {
    pub expected: f64,
    pub tolerance: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolutionConfig {
    pub family: SweepFamily,
    /// Butterworth shape; shorthand for a one-point `params`.
    #[serde(default)]
    pub kappa: Option<f64>,
    /// Modified-Lorentzian ratio; shorthand for a one-point `params`.
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub params: Option<Vec<f64>>,
    #[serde(default)]
    pub empirical: Option<EmpiricalSpec>,
    #[serde(default)]
    pub empirical_at: Vec<f64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    /// Checked against the gain at the first parameter.
    #[serde(default)]
    pub check: Option<GainCheck>,
    #[serde(default)]
    pub exec: Execution,
}

pub fn resolution(cfg: ResolutionConfig, check: bool) -> Result<String, CliError> {
    let single = match (cfg.family, cfg.kappa, cfg.gamma) {
        (_, Some(_), Some(_)) => return Err(CliError::Config("give kappa or gamma, not both".into())),
        (SweepFamily::Butterworth, None, Some(_)) => {
            return Err(CliError::Config("gamma belongs to modified_lorentzian".into()))
        }
        (SweepFamily::ModifiedLorentzian, Some(_), None) => {
            return Err(CliError::Config("kappa belongs to butterworth".into()))
        }
        (_, k, g) => k.or(g),
    };
    let params = match (single, cfg.params) {
        (Some(_), Some(_)) => return Err(CliError::Config("give a single parameter or params, not both".into())),
        (Some(p), None) => vec![p],
        (None, Some(ps)) if !ps.is_empty() => ps,
        _ => return Err(CliError::Config("no parameter given".into())),
    };
    let rows = resolution_sweep(cfg.family, &params, &cfg.empirical_at, cfg.empirical.as_ref(), cfg.exec)?;
    if let Some(p) = &cfg.output {
        write_out(p, &sweep_csv(cfg.family, &rows))?;
    }
    let first = rows[0];
    let mut s = Summary::new("resolution");
    let family = match cfg.family {
        SweepFamily::Butterworth => "butterworth",
        SweepFamily::ModifiedLorentzian => "modified_lorentzian",
    };
    s.put("family", family)
        .put("rows", rows.len())
        .put("param", first.param)
        .put("gain", first.gain)
        .put("gain_quadrature", first.gain_quadrature);
    if let Some(g) = first.gain_empirical {
        s.put("gain_empirical", g);
    }
    if let Some(c) = &cfg.check {
        let pass = (first.gain - c.expected).abs() <= c.tolerance;
        s.put("check", if pass { "pass" } else { "fail" });
        if check && !pass {
            println!("{}", s.line());
            return Err(CliError::Check(format!("gain {} is not within {} of {}", first.gain, c.tolerance, c.expected)));
        }
    }
    Ok(s.line())
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DofConfig {
    #[serde(default)]
    pub model: Option<SpectrumModel>,
    /// Observation interval `T`, seconds.
    #[serde(default)]
    pub duration: Option<f64>,
    /// Also report the modified-Lorentzian `gamma` where both counts agree.
    #[serde(default)]
    pub gamma_star: bool,
}

pub fn dof(cfg: DofConfig) -> Result<String, CliError> {
    let mut s = Summary::new("dof");
    match (&cfg.model, cfg.duration) {
        (Some(m), Some(t)) => {
            let d = degrees_of_freedom(m, t)?;
            s.put("model", m.name())
                .put("lambda", d.lambda)
                .put("n_c_expected", d.n_c_expected)
                .put("regime", format!("{:?}", d.regime).to_lowercase());
        }
        (None, None) if cfg.gamma_star => {}
        _ => return Err(CliError::Config("dof needs both model and duration".into())),
    }
    if cfg.gamma_star {
        s.put("gamma_star", lorentzian_gamma_star()?);
    }
    Ok(s.line())
}

fn default_taps() -> usize {
    DEFAULT_TAPS
}

fn default_frame_every() -> usize {
    4096
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StreamCommandConfig {
    pub dt: f64,
    #[serde(default = "default_taps")]
    pub taps: usize,
    /// Defaults to the middle tap.
    #[serde(default)]
    pub placement: Option<Placement>,
    #[serde(default)]
    pub averaging: Option<Averaging>,
    /// Samples between snapshot frames.
    #[serde(default = "default_frame_every")]
    pub frame_every: usize,
    /// Frames go to standard output when absent.
    #[serde(default)]
    pub output: Option<PathBuf>,
}

/// Snapshot frames, written through to stdout or collected for a file.
struct FrameSink {
    collect: Option<String>,
    frames: usize,
}

impl FrameSink {
    fn emit(&mut self, s: &StreamingCrosslator) -> Result<(), CliError> {
        let Some(ifg) = s.snapshot().interferogram else {
            return Ok(());
        };
        let sep = if self.frames > 0 { "\n" } else { "" };
        let text = format!("{sep}{}", ifg.to_csv());
        match &mut self.collect {
            Some(buf) => buf.push_str(&text),
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(text.as_bytes())?;
                out.flush()?;
            }
        }
        self.frames += 1;
        Ok(())
    }
}

/// Summary and whether it belongs on standard error (frames on stdout).
pub fn stream(cfg: StreamCommandConfig, mut source: impl Read) -> Result<(String, bool), CliError> {
    if cfg.frame_every == 0 {
        return Err(CliError::Config("frame_every must be positive".into()));
    }
    let sc = StreamConfig {
        taps: cfg.taps,
        placement: cfg.placement.unwrap_or(Placement::Tap(cfg.taps / 2)),
        averaging: cfg.averaging.unwrap_or(Averaging::Cumulative),
        dt: cfg.dt,
    };
    let mut s = StreamingCrosslator::new(sc)?;
    let mut sink = FrameSink { collect: cfg.output.as_ref().map(|_| String::new()), frames: 0 };
    let mut pushed = 0usize;
    let mut buf = vec![0u8; 8 * 4096];
    let mut carry: Vec<u8> = Vec::new();
    loop {
        let n = source.read(&mut buf)?;
        if n == 0 {
            break;
        }
        carry.extend_from_slice(&buf[..n]);
        let whole = carry.len() / 8 * 8;
        for v in decode_samples(&carry[..whole])? {
            s.push_sample(v).map_err(|e| CliError::Config(format!("sample {pushed}: {e}")))?;
            pushed += 1;
            if pushed.is_multiple_of(cfg.frame_every) {
                sink.emit(&s)?;
            }
        }
        carry.drain(..whole);
    }
    if !carry.is_empty() {
        return Err(CliError::Config(format!("input ends with {} stray bytes", carry.len())));
    }
    if !pushed.is_multiple_of(cfg.frame_every) || pushed == 0 {
        sink.emit(&s)?;
    }
    if let (Some(p), Some(text)) = (&cfg.output, &sink.collect) {
        write_out(p, text)?;
    }
    let lags = s.lag_range();
    let mut sum = Summary::new("stream");
    sum.put("samples", pushed)
        .put("events", s.events_processed())
        .put("frames", sink.frames)
        .put("lag_lo", lags.lo)
        .put("lag_hi", lags.hi);
    Ok((sum.line(), cfg.output.is_none()))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelayCheck {
    /// Largest tolerated shortfall below the bound, in standard errors.
    pub max_below_bound_stderrs: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DelaySimConfig {
    pub experiment: ExperimentConfig,
    #[serde(default)]
    pub trials_output: Option<PathBuf>,
    #[serde(default)]
    pub report_output: Option<PathBuf>,
    #[serde(default)]
    pub check: Option<DelayCheck>,
}

pub fn delay_sim(cfg: DelaySimConfig, check: bool) -> Result<String, CliError> {
    cfg.experiment.validate()?;
    let (report, trials) = run_experiment_with_trials(&cfg.experiment)?;
    if let Some(p) = &cfg.trials_output {
        write_out(p, &trials_csv(&trials))?;
    }
    if let Some(p) = &cfg.report_output {
        let text = serde_json::to_string_pretty(&report).map_err(|e| CliError::Numeric(e.to_string()))?;
        write_out(p, &text)?;
    }
    let mut line = format!("command=delay_sim {}", report.summary());
    if let Some(c) = &cfg.check {
        let excess = report.excess_in_stderrs();
        let pass = excess.is_some_and(|x| x >= -c.max_below_bound_stderrs);
        line.push_str(if pass { " check=pass" } else { " check=fail" });
        if check && !pass {
            println!("{line}");
            return Err(CliError::Check(match excess {
                Some(x) => format!("variance is {:.2} standard errors below the bound", -x),
                None => "no bound is defined for this model".into(),
            }));
        }
    }
    Ok(line)
}
