//! Tapped-delay-line crosslator operating in elapsed time.
//!
//! Samples enter an `m`-tap delay line; tap 1 holds the newest sample and
//! tap `m` the oldest. A crossing is declared when taps `j + 1` (older) and
//! `j` (newer) change sign, using the same exact-zero rule as batch
//! detection: a zero in tap `j` takes the sign of tap `j - 1`. With `j = 1`
//! that look-ahead is not yet available, so a zero in tap 1 never produces
//! an event. At each event every tap, sign-switched by the crossing
//! direction, is folded into its averager. The crossing is placed midway
//! between the detector taps, so tap `k` sits at relative time
//! `(j - k + 1/2) dt`; snapshots interpolate adjacent taps onto integer
//! lags `j - m + 1 ..= j - 1`.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::crosslation::{Interferogram, LagRange, Variant};
use crate::error::{Error, Result};
use crate::zero_crossing::Direction;

pub const DEFAULT_TAPS: usize = 256;

/// Where the detector pair sits on the line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Taps 1 and 2: only the past of each crossing is seen (`tau <= 0`).
    PastOnly,
    /// Taps `m - 1` and `m`: the line holds the crossing's future (`tau >= 0`).
    FutureInThePast,
    /// Detector between taps `j` and `j + 1`.
    Tap(usize),
}

impl Placement {
    fn detector(self, m: usize) -> usize {
        match self {
            Placement::PastOnly => 1,
            Placement::FutureInThePast => m - 1,
            Placement::Tap(j) => j,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Averaging {
    /// Equal weight for every event since the start.
    Cumulative,
    /// Exponential forgetting, `S <- lambda S + s`, `W <- lambda W + 1`,
    /// reported as `S / W`. `lambda = 1` is cumulative averaging.
    Recursive { lambda: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StreamConfig {
    pub taps: usize,
    pub placement: Placement,
    pub averaging: Averaging,
    pub dt: f64,
}

impl StreamConfig {
    /// `m = 256`, detector at `m / 2`, cumulative averaging.
    pub fn new(dt: f64) -> Self {
        StreamConfig {
            taps: DEFAULT_TAPS,
            placement: Placement::Tap(DEFAULT_TAPS / 2),
            averaging: Averaging::Cumulative,
            dt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StreamEvent {
    /// Chronological index of the sample that completed the detection.
    pub sample: u64,
    /// Chronological crossing time (midpoint of the detector taps), seconds.
    pub t: f64,
    pub direction: Direction,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StreamReport {
    /// `None` until the first event.
    pub interferogram: Option<Interferogram>,
    pub events_processed: u64,
    pub placement: Placement,
}

#[derive(Debug, Clone)]
pub struct StreamingCrosslator {
    cfg: StreamConfig,
    j: usize,
    /// Front is tap 1 (newest).
    line: VecDeque<f64>,
    tap_sums: Vec<f64>,
    lag_squares: Vec<f64>,
    weight: f64,
    weight_sq: f64,
    events: u64,
    pushed: u64,
}

fn sgn(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

impl StreamingCrosslator {
    pub fn new(cfg: StreamConfig) -> Result<Self> {
        if cfg.taps < 3 {
            return Err(Error::param(format!("need at least 3 taps, got {}", cfg.taps)));
        }
        if !(cfg.dt.is_finite() && cfg.dt > 0.0) {
            return Err(Error::InvalidSampleInterval(cfg.dt));
        }
        let j = cfg.placement.detector(cfg.taps);
        if j < 1 || j >= cfg.taps {
            return Err(Error::param(format!("detector position must satisfy 1 <= j < m, got {j}")));
        }
        if let Averaging::Recursive { lambda } = cfg.averaging {
            if !(lambda > 0.0 && lambda <= 1.0) {
                return Err(Error::param(format!("forgetting factor must be in (0, 1], got {lambda}")));
            }
        }
        Ok(StreamingCrosslator {
            cfg,
            j,
            line: VecDeque::with_capacity(cfg.taps + 1),
            tap_sums: vec![0.0; cfg.taps],
            lag_squares: vec![0.0; cfg.taps - 1],
            weight: 0.0,
            weight_sq: 0.0,
            events: 0,
            pushed: 0,
        })
    }

    pub fn config(&self) -> &StreamConfig {
        &self.cfg
    }

    pub fn detector_position(&self) -> usize {
        self.j
    }

    pub fn events_processed(&self) -> u64 {
        self.events
    }

    /// Value at tap `k` (1-based).
    fn tap(&self, k: usize) -> f64 {
        self.line[k - 1]
    }

    /// Lag grid covered by snapshots.
    pub fn lag_range(&self) -> LagRange {
        let j = self.j as i64;
        LagRange { lo: j - self.cfg.taps as i64 + 1, hi: j - 1 }
    }

    /// Shifts `value` into the line and processes a crossing at the
    /// detector taps, if any.
    pub fn push_sample(&mut self, value: f64) -> Result<Option<StreamEvent>> {
        if !value.is_finite() {
            return Err(Error::param("stream samples must be finite"));
        }
        self.line.push_front(value);
        if self.line.len() > self.cfg.taps {
            self.line.pop_back();
        }
        self.pushed += 1;
        if self.line.len() < self.cfg.taps {
            return Ok(None);
        }
        let j = self.j;
        let older = self.tap(j + 1);
        let s0 = sgn(older);
        if s0 == 0 {
            return Ok(None);
        }
        let newer = self.tap(j);
        let s1 = if newer != 0.0 {
            sgn(newer)
        } else if j >= 2 {
            sgn(self.tap(j - 1))
        } else {
            0
        };
        if s1 != -s0 {
            return Ok(None);
        }
        let direction = if s0 < 0 { Direction::Up } else { Direction::Down };
        self.fold(direction.sign());
        let sample = self.pushed - 1;
        let t = (sample as f64 - j as f64 + 0.5) * self.cfg.dt;
        Ok(Some(StreamEvent { sample, t, direction }))
    }

    fn fold(&mut self, sign: f64) {
        let lambda = match self.cfg.averaging {
            Averaging::Cumulative => 1.0,
            Averaging::Recursive { lambda } => lambda,
        };
        for k in 1..=self.cfg.taps {
            let v = sign * self.tap(k);
            self.tap_sums[k - 1] = lambda * self.tap_sums[k - 1] + v;
        }
        let j = self.j as i64;
        let lags = self.lag_range();
        for (i, l) in (lags.lo..=lags.hi).enumerate() {
            let k = (j - l) as usize;
            let v = sign * 0.5 * (self.tap(k) + self.tap(k + 1));
            self.lag_squares[i] = lambda * self.lag_squares[i] + v * v;
        }
        self.weight = lambda * self.weight + 1.0;
        self.weight_sq = lambda * lambda * self.weight_sq + 1.0;
        self.events += 1;
    }

    /// Current per-tap averages, tap 1 first.
    pub fn tap_averages(&self) -> Vec<f64> {
        if self.weight == 0.0 {
            return Vec::new();
        }
        self.tap_sums.iter().map(|s| s / self.weight).collect()
    }

    /// Averages reversed into relative time and interpolated onto integer
    /// lags, with standard errors from the per-lag second moments.
    pub fn snapshot(&self) -> StreamReport {
        let placement = self.cfg.placement;
        if self.events == 0 {
            return StreamReport { interferogram: None, events_processed: 0, placement };
        }
        let j = self.j as i64;
        let lags = self.lag_range();
        let w = self.weight;
        let n_eff = w * w / self.weight_sq;
        let mut values = Vec::with_capacity(lags.len());
        let mut stderr = Vec::with_capacity(lags.len());
        for (i, l) in (lags.lo..=lags.hi).enumerate() {
            let k = (j - l) as usize;
            let mean = 0.5 * (self.tap_sums[k - 1] + self.tap_sums[k]) / w;
            let var = (self.lag_squares[i] / w - mean * mean).max(0.0);
            let se = if n_eff > 1.0 { (var * n_eff / (n_eff - 1.0) / n_eff).sqrt() } else { 0.0 };
            values.push(mean);
            stderr.push(se);
        }
        let interferogram = Interferogram {
            dt: self.cfg.dt,
            first_lag: lags.lo,
            values,
            stderr,
            n_used: self.events as usize,
            variant: Variant::Crosslation,
        };
        StreamReport { interferogram: Some(interferogram), events_processed: self.events, placement }
    }
}
