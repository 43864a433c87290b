//! Empirical zero-crossing interferograms.
//!
//! Every interferogram here is a weighted average of crossjectories
//! `x(t_i + tau)` anchored at zero crossings `t_i`. Lags are integer
//! multiples of `dt`; values at sub-sample crossing times come from linear
//! interpolation. Averages are normalized by the number of crossings whose
//! whole window lies in the trusted region of the source waveform.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dsp;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::signal_gen::{edge_margin, AnalyticPair, Waveform};
use crate::zero_crossing::{detect_crossings, CrossingEvent, CrossingSet, Direction};

/// Upper limit on the band-edge ratio `high / low` for which zero crossings
/// of flat band-pass noise still supply one sample per degree of freedom.
pub fn max_band_ratio() -> f64 {
    (7.0 + 33f64.sqrt()) / 4.0
}

/// Default crossjectory half window for rms bandwidth `b` (rad/s).
pub fn default_half_window(b: f64) -> f64 {
    10.0 / b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Timing {
    /// Linear inverse interpolation between the bracketing samples.
    #[default]
    Interpolated,
    /// Halfway between the bracketing samples, as a two-tap detector sees it.
    Midpoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Crosslation,
    UpOnly,
    DownOnly,
    Autoference,
    SignAutoference,
    WeightedAutoference,
    SlewCrosslation,
    SlewAutoference,
    LocalStructure,
    Filterbank,
}

/// Inclusive range of integer lags `lo..=hi` (in samples).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagRange {
    pub lo: i64,
    pub hi: i64,
}

impl LagRange {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if hi < lo {
            return Err(Error::param(format!("empty lag range {lo}..={hi}")));
        }
        Ok(LagRange { lo, hi })
    }

    pub fn symmetric(half: usize) -> Self {
        LagRange { lo: -(half as i64), hi: half as i64 }
    }

    /// Symmetric grid covering `[-half_window, half_window]` for a waveform,
    /// validated against a quarter of its duration.
    pub fn for_window(w: &Waveform, half_window: f64) -> Result<Self> {
        let limit = w.duration() / 4.0;
        if !(half_window.is_finite() && half_window >= 0.0) {
            return Err(Error::param(format!("half window must be >= 0, got {half_window}")));
        }
        if half_window > limit {
            return Err(Error::WindowTooLarge { half_window, limit });
        }
        Ok(LagRange::symmetric((half_window / w.dt() + 1e-9).floor() as usize))
    }

    pub fn len(&self) -> usize {
        (self.hi - self.lo + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Values of an interferogram on the lag grid `first_lag..first_lag+len`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Interferogram {
    pub dt: f64,
    pub first_lag: i64,
    pub values: Vec<f64>,
    /// Per-lag Monte-Carlo standard error of the mean.
    pub stderr: Vec<f64>,
    pub n_used: usize,
    pub variant: Variant,
}

impl Interferogram {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn lag_range(&self) -> LagRange {
        LagRange { lo: self.first_lag, hi: self.first_lag + self.values.len() as i64 - 1 }
    }

    /// Lag values in seconds.
    pub fn lags(&self) -> Vec<f64> {
        (0..self.values.len()).map(|i| self.tau(i)).collect()
    }

    pub fn tau(&self, i: usize) -> f64 {
        (self.first_lag + i as i64) as f64 * self.dt
    }

    /// Index of integer lag `l`, if on the grid.
    pub fn index_of(&self, l: i64) -> Option<usize> {
        let i = l - self.first_lag;
        (i >= 0 && (i as usize) < self.values.len()).then_some(i as usize)
    }

    pub fn at(&self, l: i64) -> Option<f64> {
        self.index_of(l).map(|i| self.values[i])
    }

    pub fn same_grid(&self, other: &Interferogram) -> bool {
        self.first_lag == other.first_lag && self.values.len() == other.values.len() && self.dt == other.dt
    }

    /// Largest `L` with both `-L` and `L` on the grid.
    pub fn symmetric_extent(&self) -> i64 {
        let hi = self.first_lag + self.values.len() as i64 - 1;
        (-self.first_lag).min(hi).max(-1)
    }

    pub fn scaled(&self, a: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= a);
        out.stderr.iter_mut().for_each(|v| *v *= a.abs());
        out
    }

    /// CSV with columns `tau,value,stderr`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("tau,value,stderr\n");
        for i in 0..self.values.len() {
            s.push_str(&format!("{:.8e},{:.8e},{:.8e}\n", self.tau(i), self.values[i], self.stderr[i]));
        }
        s
    }
}

/// Per-crossing weight applied to a crossjectory.
#[derive(Debug, Clone, Copy)]
pub enum Weighting<'a> {
    /// `(-1)^psi`.
    Sign,
    /// 1 for events of one direction, excluded otherwise.
    Class(Direction),
    /// 1 for every event.
    Unit,
    /// The signed slew rate.
    Slope,
    /// The value of another waveform at the crossing time.
    ValueOf(&'a Waveform),
    /// The sign of another waveform at the crossing time.
    SignOf(&'a Waveform),
}

#[derive(Debug, Clone, Copy)]
struct Anchor {
    k: usize,
    frac: f64,
    weight: f64,
}

fn interp_at(x: &[f64], k: usize, frac: f64) -> f64 {
    x[k] + frac * (x[k + 1] - x[k])
}

/// Interferogram engine: a lag grid, a crossing-time convention and an
/// execution mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crosslator {
    pub lags: LagRange,
    pub timing: Timing,
    pub exec: Execution,
}

impl Crosslator {
    pub fn new(lags: LagRange) -> Self {
        Crosslator { lags, timing: Timing::default(), exec: Execution::default() }
    }

    pub fn with_timing(mut self, timing: Timing) -> Self {
        self.timing = timing;
        self
    }

    pub fn with_exec(mut self, exec: Execution) -> Self {
        self.exec = exec;
        self
    }

    fn frac(&self, e: &CrossingEvent) -> f64 {
        match self.timing {
            Timing::Interpolated => e.frac,
            Timing::Midpoint => 0.5,
        }
    }

    /// Whether the window around `e` lies in the trusted part of `source`.
    pub fn usable(&self, source: &Waveform, e: &CrossingEvent) -> bool {
        let tr = source.trusted();
        let k = e.index as i64;
        k + self.lags.lo.min(0) >= tr.start as i64 && k + 1 + self.lags.hi.max(0) < tr.end as i64
    }

    fn anchors(&self, source: &Waveform, events: &[CrossingEvent], weighting: Weighting) -> Vec<Anchor> {
        events
            .iter()
            .filter(|e| self.usable(source, e))
            .filter_map(|e| {
                let frac = self.frac(e);
                let weight = match weighting {
                    Weighting::Sign => e.direction.sign(),
                    Weighting::Class(d) => {
                        if e.direction != d {
                            return None;
                        }
                        1.0
                    }
                    Weighting::Unit => 1.0,
                    Weighting::Slope => e.slope,
                    Weighting::ValueOf(w) => interp_at(w.samples(), e.index, frac),
                    Weighting::SignOf(w) => {
                        let v = interp_at(w.samples(), e.index, frac);
                        if v > 0.0 {
                            1.0
                        } else if v < 0.0 {
                            -1.0
                        } else {
                            0.0
                        }
                    }
                };
                Some(Anchor { k: e.index, frac, weight })
            })
            .collect()
    }

    /// Weighted average of `source(t_i + tau)` (or its square) over the
    /// usable events.
    pub fn average(
        &self,
        source: &Waveform,
        events: &[CrossingEvent],
        weighting: Weighting,
        squared: bool,
        variant: Variant,
    ) -> Result<Interferogram> {
        let anchors = self.anchors(source, events, weighting);
        if anchors.is_empty() {
            return Err(match weighting {
                Weighting::Class(Direction::Up) => Error::EmptyClass("up"),
                Weighting::Class(Direction::Down) => Error::EmptyClass("down"),
                _ => Error::NoCrossings,
            });
        }
        let x = source.samples();
        let n = anchors.len() as f64;
        let lo = self.lags.lo;
        let stats = self.exec.map(self.lags.len(), |j| {
            let l = lo + j as i64;
            let contrib = |a: &Anchor| {
                let v = interp_at(x, (a.k as i64 + l) as usize, a.frac);
                a.weight * if squared { v * v } else { v }
            };
            let mean = anchors.iter().map(contrib).sum::<f64>() / n;
            let se = if anchors.len() > 1 {
                let ss = anchors.iter().map(|a| (contrib(a) - mean).powi(2)).sum::<f64>();
                (ss / (n - 1.0) / n).sqrt()
            } else {
                0.0
            };
            (mean, se)
        });
        let (values, stderr) = stats.into_iter().unzip();
        Ok(Interferogram { dt: source.dt(), first_lag: lo, values, stderr, n_used: anchors.len(), variant })
    }

    /// Aligned crossjectory rows `x(t_i + tau)` for every usable event.
    pub fn crossjectories(&self, w: &Waveform, cs: &CrossingSet) -> Result<Crossjectories> {
        let x = w.samples();
        let mut rows = Vec::new();
        let mut events = Vec::new();
        for e in &cs.events {
            if !self.usable(w, e) {
                continue;
            }
            let frac = self.frac(e);
            let row = (self.lags.lo..=self.lags.hi)
                .map(|l| interp_at(x, (e.index as i64 + l) as usize, frac))
                .collect();
            rows.push(row);
            events.push(*e);
        }
        if rows.is_empty() {
            return Err(Error::NoCrossings);
        }
        Ok(Crossjectories { dt: w.dt(), lags: self.lags, rows, events })
    }

    pub fn crosslation(&self, w: &Waveform, cs: &CrossingSet) -> Result<Interferogram> {
        self.average(w, &cs.events, Weighting::Sign, false, Variant::Crosslation)
    }

    pub fn up_only(&self, w: &Waveform, cs: &CrossingSet) -> Result<Interferogram> {
        self.average(w, &cs.events, Weighting::Class(Direction::Up), false, Variant::UpOnly)
    }

    pub fn down_only(&self, w: &Waveform, cs: &CrossingSet) -> Result<Interferogram> {
        self.average(w, &cs.events, Weighting::Class(Direction::Down), false, Variant::DownOnly)
    }

    /// Sign-weighted average of `y` at crossings `cs` of `x = H{y}`.
    pub fn autoference(&self, pair: &AnalyticPair, cs: &CrossingSet) -> Result<Interferogram> {
        self.average(&pair.y, &cs.events, Weighting::Sign, false, Variant::Autoference)
    }

    /// Average of `sgn(y(t_i)) y(t_i + tau)`, the cross-correlation form.
    pub fn sign_autoference(&self, pair: &AnalyticPair, cs: &CrossingSet) -> Result<Interferogram> {
        self.average(&pair.y, &cs.events, Weighting::SignOf(&pair.y), false, Variant::SignAutoference)
    }

    /// Average of `y(t_i) y(t_i + tau)`.
    pub fn weighted_autoference(&self, pair: &AnalyticPair, cs: &CrossingSet) -> Result<Interferogram> {
        self.average(&pair.y, &cs.events, Weighting::ValueOf(&pair.y), false, Variant::WeightedAutoference)
    }

    pub fn slew_crosslation(&self, w: &Waveform, cs: &CrossingSet) -> Result<Interferogram> {
        self.average(w, &cs.events, Weighting::Slope, false, Variant::SlewCrosslation)
    }

    pub fn slew_autoference(&self, pair: &AnalyticPair, cs: &CrossingSet) -> Result<Interferogram> {
        self.average(&pair.y, &cs.events, Weighting::Slope, false, Variant::SlewAutoference)
    }

    /// Mean of `x^2(t_i + tau)`.
    pub fn local_structure(&self, w: &Waveform, cs: &CrossingSet) -> Result<Interferogram> {
        self.average(w, &cs.events, Weighting::Unit, true, Variant::LocalStructure)
    }
}

/// Crossjectory matrix, one row per usable event.
#[derive(Debug, Clone, PartialEq)]
pub struct Crossjectories {
    pub dt: f64,
    pub lags: LagRange,
    pub rows: Vec<Vec<f64>>,
    pub events: Vec<CrossingEvent>,
}

impl Crossjectories {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Per-lag population variance of the rows multiplied by `(-1)^psi`.
    pub fn signed_variance(&self) -> Vec<f64> {
        let n = self.rows.len() as f64;
        (0..self.lags.len())
            .map(|j| {
                let vals = self.rows.iter().zip(&self.events).map(|(r, e)| e.direction.sign() * r[j]);
                let mean = vals.clone().sum::<f64>() / n;
                vals.map(|v| (v - mean).powi(2)).sum::<f64>() / n
            })
            .collect()
    }
}

pub fn extract_crossjectories(w: &Waveform, cs: &CrossingSet, half_window: f64) -> Result<Crossjectories> {
    Crosslator::new(LagRange::for_window(w, half_window)?).crossjectories(w, cs)
}

/// `C(tau) = (1/n) sum (-1)^psi_i x(t_i + tau)`.
pub fn empirical_crosslation(w: &Waveform, cs: &CrossingSet, half_window: f64) -> Result<Interferogram> {
    Crosslator::new(LagRange::for_window(w, half_window)?).crosslation(w, cs)
}

pub fn empirical_up(w: &Waveform, cs: &CrossingSet, half_window: f64) -> Result<Interferogram> {
    Crosslator::new(LagRange::for_window(w, half_window)?).up_only(w, cs)
}

pub fn empirical_down(w: &Waveform, cs: &CrossingSet, half_window: f64) -> Result<Interferogram> {
    Crosslator::new(LagRange::for_window(w, half_window)?).down_only(w, cs)
}

/// Autoference with crossings detected on `pair.x`.
pub fn empirical_autoference(pair: &AnalyticPair, half_window: f64) -> Result<Interferogram> {
    let cs = detect_crossings(&pair.x);
    Crosslator::new(LagRange::for_window(&pair.y, half_window)?).autoference(pair, &cs)
}

pub fn weighted_autoference(pair: &AnalyticPair, half_window: f64) -> Result<Interferogram> {
    let cs = detect_crossings(&pair.x);
    Crosslator::new(LagRange::for_window(&pair.y, half_window)?).weighted_autoference(pair, &cs)
}

/// Slew-rate weighted crosslation.
pub fn slew_matched(w: &Waveform, cs: &CrossingSet, half_window: f64) -> Result<Interferogram> {
    Crosslator::new(LagRange::for_window(w, half_window)?).slew_crosslation(w, cs)
}

/// Slew-rate weighted autoference with crossings detected on `pair.x`.
pub fn slew_matched_autoference(pair: &AnalyticPair, half_window: f64) -> Result<Interferogram> {
    let cs = detect_crossings(&pair.x);
    Crosslator::new(LagRange::for_window(&pair.y, half_window)?).slew_autoference(pair, &cs)
}

pub fn local_structure(w: &Waveform, cs: &CrossingSet, half_window: f64) -> Result<Interferogram> {
    Crosslator::new(LagRange::for_window(w, half_window)?).local_structure(w, cs)
}

/// Slew-rate based event selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Decimation {
    /// Keep the `target` events of largest `|slope|`.
    Trim,
    /// Keep events with `|slope|` above the Rayleigh quantile that retains
    /// `target` events on average.
    Threshold,
}

/// Slew threshold `eta` retaining `target` of `n` Rayleigh-distributed
/// slopes with second moment `m2`.
pub fn rayleigh_threshold(m2: f64, n: usize, target: f64) -> f64 {
    if target >= n as f64 {
        return 0.0;
    }
    (-m2 * (target / n as f64).ln()).sqrt()
}

/// Reduces `cs` to about `target` events with the steepest slopes. Events
/// keep their chronological order.
pub fn decimate_by_slew(cs: &CrossingSet, target: f64, mode: Decimation) -> Result<CrossingSet> {
    if !(target.is_finite() && target > 0.0) {
        return Err(Error::param(format!("decimation target must be positive, got {target}")));
    }
    if target >= cs.len() as f64 {
        return Ok(cs.clone());
    }
    let keep: Vec<CrossingEvent> = match mode {
        Decimation::Trim => {
            let count = (target.round() as usize).max(1);
            let mut order: Vec<usize> = (0..cs.len()).collect();
            order.sort_by(|&a, &b| {
                cs.events[b].slope.abs().total_cmp(&cs.events[a].slope.abs()).then(a.cmp(&b))
            });
            let mut chosen = order[..count].to_vec();
            chosen.sort_unstable();
            chosen.into_iter().map(|i| cs.events[i]).collect()
        }
        Decimation::Threshold => {
            let eta = rayleigh_threshold(cs.slope_second_moment(), cs.len(), target);
            cs.events.iter().filter(|e| e.slope.abs() > eta).copied().collect()
        }
    };
    Ok(CrossingSet::from_events(keep, cs.duration, cs.dt))
}

/// Crosslation `C` paired with autoference `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexCrosslation {
    pub a: Interferogram,
    pub c: Interferogram,
    /// `sqrt(A^2 + C^2)`.
    pub envelope: Vec<f64>,
    /// `(A(tau), C(tau))` in lag order.
    pub nyquist: Vec<(f64, f64)>,
}

impl ComplexCrosslation {
    pub fn lags(&self) -> Vec<f64> {
        self.a.lags()
    }

    /// CSV with columns `tau,A,C,envelope`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("tau,A,C,envelope\n");
        for i in 0..self.envelope.len() {
            s.push_str(&format!(
                "{:.8e},{:.8e},{:.8e},{:.8e}\n",
                self.a.tau(i),
                self.a.values[i],
                self.c.values[i],
                self.envelope[i]
            ));
        }
        s
    }

    /// CSV with columns `A,C`.
    pub fn nyquist_csv(&self) -> String {
        let mut s = String::from("A,C\n");
        for (a, c) in &self.nyquist {
            s.push_str(&format!("{a:.8e},{c:.8e}\n"));
        }
        s
    }
}

pub fn complex_crosslation(c: &Interferogram, a: &Interferogram) -> Result<ComplexCrosslation> {
    if !c.same_grid(a) {
        return Err(Error::GridMismatch);
    }
    let envelope = a.values.iter().zip(&c.values).map(|(x, y)| x.hypot(*y)).collect();
    let nyquist = a.values.iter().zip(&c.values).map(|(x, y)| (*x, *y)).collect();
    Ok(ComplexCrosslation { a: a.clone(), c: c.clone(), envelope, nyquist })
}

/// `-H{c}` evaluated on a zero-padded copy of the interferogram, giving the
/// autoference implied by a crosslation record.
pub fn inverse_hilbert(c: &Interferogram) -> Interferogram {
    let n = c.len();
    let padded = (4 * n).next_power_of_two();
    let mut buf = vec![0.0; padded];
    buf[..n].copy_from_slice(&c.values);
    let h = dsp::hilbert(&buf);
    let mut out = c.clone();
    out.values = h[..n].iter().map(|v| -v).collect();
    out.stderr = vec![0.0; n];
    out.variant = Variant::Autoference;
    out
}

/// Estimate of `mu = E|X| / sigma^2` from samples.
pub fn estimate_mu(w: &Waveform) -> f64 {
    let x = w.samples();
    let abs = x.iter().map(|v| v.abs()).sum::<f64>();
    let sq = x.iter().map(|v| v * v).sum::<f64>();
    abs / sq
}

/// Density estimate on strictly positive angular frequencies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEstimate {
    pub omega: Vec<f64>,
    /// Two-sided density convention, `integral S dw = 2 pi variance`.
    pub density: Vec<f64>,
}

impl SpectrumEstimate {
    pub fn to_csv(&self) -> String {
        let mut s = String::from("omega,density\n");
        for (w, d) in self.omega.iter().zip(&self.density) {
            s.push_str(&format!("{w:.8e},{d:.8e}\n"));
        }
        s
    }
}

/// Power spectral density of a separable process from its crosslation,
/// `S(w) = (4 n0 / (mu w)) integral_0^inf C(tau) sin(w tau) dtau`, with the
/// odd part of `c` and a rectangle rule. The `w = 0` bin is excluded.
pub fn spectrum_from_crosslation(c: &Interferogram, mu: f64, n0: f64) -> Result<SpectrumEstimate> {
    if !(mu.is_finite() && mu > 0.0 && n0.is_finite() && n0 > 0.0) {
        return Err(Error::param("mu and crossing rate must be positive"));
    }
    let big_l = c.symmetric_extent();
    if big_l < 1 {
        return Err(Error::param("crosslation needs a symmetric grid with at least one nonzero lag"));
    }
    let odd: Vec<f64> = (1..=big_l)
        .map(|l| 0.5 * (c.at(l).unwrap_or(0.0) - c.at(-l).unwrap_or(0.0)))
        .collect();
    let dt = c.dt;
    let omega: Vec<f64> = (1..=big_l).map(|k| k as f64 * PI / (big_l as f64 * dt)).collect();
    let density = omega
        .iter()
        .map(|&w| {
            let integral: f64 = odd
                .iter()
                .enumerate()
                .map(|(i, v)| v * (w * (i + 1) as f64 * dt).sin())
                .sum::<f64>()
                * dt;
            4.0 * n0 / (mu * w) * integral
        })
        .collect();
    Ok(SpectrumEstimate { omega, density })
}

/// Result of a filter-bank decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterbankResult {
    pub interferogram: Interferogram,
    /// Crossings detected per band (whole record).
    pub band_crossings: Vec<usize>,
}

impl FilterbankResult {
    pub fn total_crossings(&self) -> usize {
        self.band_crossings.iter().sum()
    }
}

pub fn validate_band(low: f64, high: f64) -> Result<()> {
    if !(low > 0.0 && high > low && high.is_finite()) {
        return Err(Error::param(format!("band ({low}, {high}) must satisfy 0 < low < high")));
    }
    let ratio = high / low;
    if ratio > max_band_ratio() {
        return Err(Error::BandRatio { low, high, ratio });
    }
    Ok(())
}

/// Splits `w` into brick-wall bands `(low, high)` in rad/s, computes a
/// crosslation per band and combines them weighted by crossing count.
pub fn filterbank_interferogram(
    w: &Waveform,
    bands: &[(f64, f64)],
    half_window: f64,
    exec: Execution,
) -> Result<FilterbankResult> {
    if bands.is_empty() {
        return Err(Error::param("filter bank needs at least one band"));
    }
    for &(lo, hi) in bands {
        validate_band(lo, hi)?;
    }
    let engine = Crosslator::new(LagRange::for_window(w, half_window)?).with_exec(Execution::Sequential);
    let margin = edge_margin(w.len());
    let per_band: Vec<Result<(Interferogram, usize)>> = exec.map_slice(bands, |&(lo, hi)| {
        let filtered = w.map_samples(dsp::band_filter(w.samples(), w.dt(), lo, hi), w.label().to_string());
        let filtered = filtered.trim_trusted(margin);
        let cs = detect_crossings(&filtered);
        let ifg = engine.crosslation(&filtered, &cs)?;
        Ok((ifg, cs.len()))
    });
    let mut parts = Vec::with_capacity(bands.len());
    for p in per_band {
        parts.push(p?);
    }
    let total: usize = parts.iter().map(|(i, _)| i.n_used).sum();
    let len = parts[0].0.len();
    let mut values = vec![0.0; len];
    let mut var = vec![0.0; len];
    for (ifg, _) in &parts {
        let wgt = ifg.n_used as f64 / total as f64;
        for j in 0..len {
            values[j] += wgt * ifg.values[j];
            var[j] += (wgt * ifg.stderr[j]).powi(2);
        }
    }
    let interferogram = Interferogram {
        dt: w.dt(),
        first_lag: parts[0].0.first_lag,
        values,
        stderr: var.into_iter().map(f64::sqrt).collect(),
        n_used: total,
        variant: Variant::Filterbank,
    };
    Ok(FilterbankResult { interferogram, band_crossings: parts.iter().map(|(_, n)| *n).collect() })
}
