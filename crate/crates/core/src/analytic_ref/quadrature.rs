//! Globally adaptive 21-point Gauss-Kronrod quadrature and bisection.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_1,
    0.973_906_528_517_171_7,
    0.930_157_491_355_708_2,
    0.865_063_366_688_984_5,
    0.780_817_726_586_416_9,
    0.679_409_568_299_024_4,
    0.562_757_134_668_604_7,
    0.433_395_394_129_247_2,
    0.294_392_862_701_460_2,
    0.148_874_338_981_631_2,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874,
    0.032_558_162_307_964_73,
    0.054_755_896_574_352,
    0.075_039_674_810_919_95,
    0.093_125_454_583_697_6,
    0.109_387_158_802_297_64,
    0.123_491_976_262_065_85,
    0.134_709_217_311_473_33,
    0.142_775_938_577_060_08,
    0.147_739_104_901_338_5,
    0.149_445_554_002_916_9,
];

// Weights of the embedded 10-point Gauss rule at XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_14,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982_04,
    0.269_266_719_309_996_35,
    0.295_524_224_714_752_87,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs: 1e-10, rel: 1e-10, max_intervals: 4000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = WGK[10] * fc;
    let mut gauss = 0.0;
    for i in 0..10 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

struct Piece {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Piece {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}

impl Eq for Piece {}

impl PartialOrd for Piece {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Piece {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Integrates `f` over `[a, b]`, bisecting the interval with the largest
/// error estimate until the total error meets the tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tolerance) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate { value: 0.0, error: 0.0, intervals: 0 });
    }
    let (value, error) = gk21(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Piece { a, b, value, error });
    let mut total = value;
    let mut err = error;
    let mut intervals = 1;
    while err > tol.abs.max(tol.rel * total.abs()) && intervals < tol.max_intervals {
        let Some(p) = heap.pop() else { break };
        let m = 0.5 * (p.a + p.b);
        if !(m > p.a && m < p.b) {
            heap.push(p);
            break;
        }
        let (v1, e1) = gk21(&f, p.a, m);
        let (v2, e2) = gk21(&f, m, p.b);
        total += v1 + v2 - p.value;
        err += e1 + e2 - p.error;
        heap.push(Piece { a: p.a, b: m, value: v1, error: e1 });
        heap.push(Piece { a: m, b: p.b, value: v2, error: e2 });
        intervals += 1;
    }
    // Re-sum to shed accumulated update roundoff.
    let (total, err) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
    if !total.is_finite() {
        return Err(Error::Numerical(format!("non-finite integral on [{a}, {b}]")));
    }
    Ok(Estimate { value: total, error: err, intervals })
}

/// Integrates `f` over `[a, inf)`.
///
/// The range is split at `a + scale`. The tail uses `w = a + scale / t`
/// and, when the integrand is known to decay like `w^-p` with `p > 1`, the
/// further substitution `t = v^(1/(p-1))` which makes the transformed
/// integrand tend to a constant at `v = 0`.
pub fn integrate_to_infinity<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    scale: f64,
    tail_power: Option<f64>,
    tol: Tolerance,
) -> Result<Estimate> {
    let head = integrate(&f, a, a + scale, tol)?;
    let q = match tail_power {
        Some(p) if p > 1.0 => 1.0 / (p - 1.0),
        _ => 1.0,
    };
    let tail = integrate(
        |v: f64| {
            if v <= 0.0 {
                return 0.0;
            }
            let t = v.powf(q);
            let w = a + scale / t;
            let g = f(w) * scale / (t * t) * q * t / v;
            if g.is_finite() {
                g
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        tol,
    )?;
    Ok(Estimate {
        value: head.value + tail.value,
        error: head.error + tail.error,
        intervals: head.intervals + tail.intervals,
    })
}

/// Bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect<F: FnMut(f64) -> Result<f64>>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut flo = f(lo)?;
    let fhi = f(hi)?;
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::Numerical(format!("no sign change on [{lo}, {hi}]")));
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
