//! Sub-sample zero-crossing detection.
//!
//! A crossing lies between samples `k` and `k + 1` when `x[k]` is non-zero
//! and the effective sign of `x[k + 1]` is opposite. An exact zero takes the
//! sign of the sample that follows it, so `[1, 0, -1]` yields a single
//! downcrossing at `t = dt` and two consecutive zeros yield nothing. The
//! crossing time is found by linear inverse interpolation and the slew rate
//! from the bracketing pair. Input is not demeaned.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::signal_gen::Waveform;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Up,
    Down,
}

impl Direction {
    /// 0 for an upcrossing, 1 for a downcrossing.
    pub fn psi(self) -> u8 {
        match self {
            Direction::Up => 0,
            Direction::Down => 1,
        }
    }

    /// `(-1)^psi`.
    pub fn sign(self) -> f64 {
        match self {
            Direction::Up => 1.0,
            Direction::Down => -1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CrossingEvent {
    /// Interpolated crossing time in seconds from the first sample.
    pub t: f64,
    pub direction: Direction,
    /// Signed slew rate `(x[k+1] - x[k]) / dt`.
    pub slope: f64,
    /// Index `k` of the first sample of the bracketing pair.
    pub index: usize,
    /// Position within the pair, `t = (index + frac) * dt`, in `(0, 1]`.
    pub frac: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CrossingSet {
    pub events: Vec<CrossingEvent>,
    pub n_plus: usize,
    pub n_minus: usize,
    /// Observation interval `T` in seconds.
    pub duration: f64,
    pub dt: f64,
}

impl CrossingSet {
    pub fn from_events(events: Vec<CrossingEvent>, duration: f64, dt: f64) -> Self {
        let n_plus = events.iter().filter(|e| e.direction == Direction::Up).count();
        let n_minus = events.len() - n_plus;
        CrossingSet { events, n_plus, n_minus, duration, dt }
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Empirical mean crossing rate `n_c / T`.
    pub fn rate(&self) -> f64 {
        self.events.len() as f64 / self.duration
    }

    /// Mean of `slope^2` over all events.
    pub fn slope_second_moment(&self) -> f64 {
        if self.events.is_empty() {
            return 0.0;
        }
        self.events.iter().map(|e| e.slope * e.slope).sum::<f64>() / self.events.len() as f64
    }

    pub fn mean_abs_slope(&self) -> f64 {
        if self.events.is_empty() {
            return 0.0;
        }
        self.events.iter().map(|e| e.slope.abs()).sum::<f64>() / self.events.len() as f64
    }

    /// CSV with columns `t_i,psi,slope`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("t_i,psi,slope\n");
        for e in &self.events {
            s.push_str(&format!("{:.8e},{},{:.8e}\n", e.t, e.direction.psi(), e.slope));
        }
        s
    }
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

fn event_at(x: &[f64], k: usize, dt: f64) -> CrossingEvent {
    let (a, b) = (x[k], x[k + 1]);
    let frac = a / (a - b);
    let direction = if a < 0.0 { Direction::Up } else { Direction::Down };
    CrossingEvent { t: (k as f64 + frac) * dt, direction, slope: (b - a) / dt, index: k, frac }
}

/// Detects every zero crossing of `w`.
pub fn detect_crossings(w: &Waveform) -> CrossingSet {
    detect_crossings_with(w, 0.0)
}

/// Detects crossings with an absolute hysteresis band `threshold`.
///
/// With a positive threshold a new crossing is only accepted after the
/// waveform has left the band on the opposite side; the event reported is
/// the last sign change before that excursion. A zero threshold is plain
/// detection.
pub fn detect_crossings_with(w: &Waveform, threshold: f64) -> CrossingSet {
    let x = w.samples();
    let dt = w.dt();
    let n = x.len();
    let mut events = Vec::new();
    // Effective sign of sample k+1, looking one further ahead for zeros.
    let eff = |k: usize| -> i8 {
        let s = sgn(x[k]);
        if s != 0 || k + 1 >= n {
            s
        } else {
            sgn(x[k + 1])
        }
    };
    if threshold > 0.0 {
        let mut state: i8 = 0;
        let mut pending: Option<usize> = None;
        for k in 0..n {
            let level = if x[k] > threshold {
                1
            } else if x[k] < -threshold {
                -1
            } else {
                0
            };
            if level != 0 && level != state {
                if state != 0 {
                    if let Some(p) = pending {
                        events.push(event_at(x, p, dt));
                    }
                }
                state = level;
                pending = None;
            }
            if k + 1 < n && x[k] != 0.0 {
                let s1 = eff(k + 1);
                if s1 != 0 && s1 == -sgn(x[k]) {
                    pending = Some(k);
                }
            }
        }
    } else {
        for k in 0..n.saturating_sub(1) {
            let s0 = sgn(x[k]);
            if s0 == 0 {
                continue;
            }
            let s1 = eff(k + 1);
            if s1 == -s0 {
                events.push(event_at(x, k, dt));
            }
        }
    }
    CrossingSet::from_events(events, w.duration(), dt)
}

/// Slew rate at `e` from its bracketing pair. Fails for events outside the
/// waveform's trusted region.
pub fn slope_at(w: &Waveform, e: &CrossingEvent) -> Result<f64> {
    let tr = w.trusted();
    if e.index < tr.start || e.index + 1 >= tr.end {
        return Err(Error::UntrustedEvent(e.index));
    }
    let x = w.samples();
    Ok((x[e.index + 1] - x[e.index]) / w.dt())
}

/// One impulse of the bipolar event train.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Impulse {
    pub t: f64,
    /// `(-1)^psi`.
    pub polarity: f64,
}

/// The crossings of `w` as a train of signed unit impulses.
pub fn sign_train(w: &Waveform) -> Vec<Impulse> {
    detect_crossings(w)
        .events
        .iter()
        .map(|e| Impulse { t: e.t, polarity: e.direction.sign() })
        .collect()
}
