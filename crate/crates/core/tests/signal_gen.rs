mod common;

use std::f64::consts::PI;

use common::{gaussian, periodogram, rel, sine};
use crosslation::analytic_ref::lorentzian_family;
use crosslation::crosslation::{complex_crosslation, Crosslator};
use crosslation::estimation::envelope_trace;
use crosslation::seed;
use crosslation::signal_gen::{
    analytic_signal, delay_and_corrupt, fm_occupied_bandwidth_hz, fm_snapped_carrier_hz, multisine_phases,
    synthesize,
};
use crosslation::zero_crossing::detect_crossings;
use crosslation::estimation::Estimator;
use crosslation::{SpectrumModel, Waveform};
use rand_distr::{Distribution, StandardNormal};



fn white(n: usize, seed_value: u64) -> Waveform {
    let mut rng = seed::rng(seed_value);
    let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(&mut rng)).collect();
    Waveform::new(v, 1.0, "white").unwrap()
}

#[test]
fn band_limited_variance_matches_within_estimator_noise() {
    let (w, dt, n) = (1.0, 0.1, 1 << 16);
    let x = synthesize(&SpectrumModel::BandLimited { w, variance: 1.0 }, n, dt, 11).unwrap();
    let lambda = w * n as f64 * dt / PI;
    let sd = (2.0 / lambda).sqrt();
    assert!((x.variance() - 1.0).abs() < 3.0 * sd, "variance {} sd {sd}", x.variance());
}

#[test]
fn gaussian_crossing_rate_follows_rice() {
    let (b, dt, n) = (1.0, 0.05, 1 << 20);
    let x = gaussian(b, n, dt, 5);
    let rate = detect_crossings(&x).rate();
    assert!(rel(rate, b / PI) < 0.02, "rate {rate}");
}

#[test]
fn lorentzian_autocorrelation_matches_closed_form() {
    let (gamma, w, dt, n, seeds) = (5.0, 1.0, 0.05, 1 << 15, 64);
    let model = SpectrumModel::ModifiedLorentzian { gamma, w, variance: 1.0 };
    let max_lag = (6.0 / (w * dt)) as usize;
    let mut acc = vec![0.0; max_lag + 1];
    for s in 0..seeds {
        let x = synthesize(&model, n, dt, seed::derive(3, s, 0)).unwrap();
        let v = x.samples();
        for (l, a) in acc.iter_mut().enumerate() {
            *a += (0..n).map(|i| v[i] * v[(i + l) % n]).sum::<f64>() / n as f64;
        }
    }
    let worst = acc
        .iter()
        .enumerate()
        .map(|(l, a)| (a / seeds as f64 - lorentzian_family(gamma, w, 1.0, l as f64 * dt).r_xx).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.02, "max abs error {worst}");
}

#[test]
fn single_tone_multisine_is_the_sine() {
    let (f, dt, n, s) = (1.7, 0.01, 3000, 99);
    let x = synthesize(&SpectrumModel::MultiSine { frequencies_hz: vec![f], amplitude: 1.0 }, n, dt, s).unwrap();
    let phi = multisine_phases(1, s)[0];
    for (i, v) in x.samples().iter().enumerate() {
        assert!((v - (2.0 * PI * f * i as f64 * dt + phi).sin()).abs() < 1e-12);
    }
}

#[test]
fn two_tone_variance_is_sum_of_tone_powers() {
    let model = SpectrumModel::MultiSine { frequencies_hz: vec![1.0, 2.5], amplitude: 1.0 };
    let x = synthesize(&model, 100_000, 0.01, 4).unwrap();
    assert!((x.variance() - 1.0).abs() < 1e-3, "{}", x.variance());
}

#[test]
fn harmonic_multisine_nyquist_trace_closes_after_one_period() {
    let (dt, period) = (0.001, 1000);
    let model = SpectrumModel::MultiSine { frequencies_hz: vec![1.0, 2.0, 3.0], amplitude: 1.0 };
    let x = synthesize(&model, 40 * period, dt, 8).unwrap();
    let pair = analytic_signal(&x).unwrap();
    let cs = detect_crossings(&pair.y);
    let engine = Crosslator::new(crosslation::LagRange::new(0, period as i64).unwrap());
    let c = engine.crosslation(&pair.y, &cs).unwrap();
    let a = engine.crosslation(&pair.x, &cs).unwrap().scaled(-1.0);
    let cc = complex_crosslation(&c, &a).unwrap();
    let (a0, c0) = cc.nyquist[0];
    let (a1, c1) = cc.nyquist[period];
    assert!((a1 - a0).hypot(c1 - c0) < 1e-6, "gap {}", (a1 - a0).hypot(c1 - c0));
}

#[test]
fn fm_with_zero_index_is_a_pure_carrier() {
    let (n, dt) = (1 << 14, 0.05);
    let model = SpectrumModel::FmCarrier { carrier_hz: 1.4, mod_bandwidth: 0.3, index: 0.0 };
    let x = synthesize(&model, n, dt, 1).unwrap();
    let w0 = 2.0 * PI * fm_snapped_carrier_hz(1.4, n, dt);
    for (i, v) in x.samples().iter().enumerate() {
        assert!((v - (w0 * i as f64 * dt).cos()).abs() < 1e-9);
    }
}

#[test]
fn fm_occupied_bandwidth_matches_configuration() {
    let (n, dt, seeds) = (1 << 16, 0.05, 16);
    let (bm, index) = (0.3, 0.45 * 2.0 * PI / (2.0 * (2.0 * 2f64.ln()).sqrt()) / 0.3);
    let model = SpectrumModel::FmCarrier { carrier_hz: 1.4, mod_bandwidth: bm, index };
    let configured = fm_occupied_bandwidth_hz(bm, index);
    assert!(rel(configured, 0.45) < 1e-12);
    let mut psd = vec![0.0; n / 2 + 1];
    for s in 0..seeds {
        let x = synthesize(&model, n, dt, s).unwrap();
        for (a, p) in psd.iter_mut().zip(periodogram(x.samples(), dt)) {
            *a += p;
        }
    }
    let df = 1.0 / (n as f64 * dt);
    let total: f64 = psd.iter().sum();
    let centre = psd.iter().enumerate().map(|(k, p)| k as f64 * df * p).sum::<f64>() / total;
    let spread = (psd.iter().enumerate().map(|(k, p)| (k as f64 * df - centre).powi(2) * p).sum::<f64>() / total).sqrt();
    let measured = 2.0 * (2.0 * 2f64.ln()).sqrt() * spread;
    assert!(rel(measured, configured) < 0.15, "measured {measured} configured {configured}");
}

#[test]
fn hilbert_of_cosine_and_sine() {
    let (n, dt) = (4000, 0.01);
    let w0 = 2.0 * PI * 2.0;
    let cos = Waveform::new((0..n).map(|i| (w0 * i as f64 * dt).cos()).collect(), dt, "cos").unwrap();
    let pair = analytic_signal(&cos).unwrap();
    let sin = sine(n, dt, w0, 0.0);
    for i in pair.x.trusted() {
        assert!((pair.x.samples()[i] - sin.samples()[i]).abs() < 1e-9);
    }
    let pair = analytic_signal(&sin).unwrap();
    for i in pair.x.trusted() {
        assert!((pair.x.samples()[i] + cos.samples()[i]).abs() < 1e-9);
    }
}

#[test]
fn hilbert_preserves_energy_of_the_ac_part() {
    let w = white(65_537, 21);
    let pair = analytic_signal(&w).unwrap();
    let ex: f64 = pair.x.samples().iter().map(|v| v * v).sum();
    let ey: f64 = w.demeaned().samples().iter().map(|v| v * v).sum();
    assert!(rel(ex, ey) < 1e-6, "{ex} {ey}");
}

#[test]
fn hilbert_twice_negates_the_ac_part() {
    let w = white(65_537, 22);
    let once = analytic_signal(&w).unwrap();
    let twice = analytic_signal(&once.x).unwrap();
    let ac = w.demeaned();
    let scale = ac.samples().iter().map(|v| v.abs()).fold(0.0, f64::max);
    for i in twice.x.trusted() {
        assert!((twice.x.samples()[i] + ac.samples()[i]).abs() < 1e-6 * scale);
    }
}

#[test]
fn zero_delay_infinite_snr_is_identity() {
    let x = gaussian(1.0, 4096, 0.1, 2);
    let y = delay_and_corrupt(&x, 0.0, f64::INFINITY, 9).unwrap();
    for (a, b) in x.samples().iter().zip(y.samples()) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn fractional_delay_of_a_sinusoid_moves_the_correlation_peak() {
    let (n, dt) = (64 * 64, 1.0);
    let x = sine(n, dt, 2.0 * PI / 64.0, 0.3);
    let y = delay_and_corrupt(&x, 3.5 * dt, f64::INFINITY, 1).unwrap();
    let cs = detect_crossings(&x);
    let tr = envelope_trace(&x, &y, &cs, Estimator::CorrelationEnv, 10).unwrap();
    let v = &tr.in_phase;
    let k = (0..v.len()).max_by(|&a, &b| v[a].total_cmp(&v[b])).unwrap();
    let (a, b, c) = (v[k - 1], v[k], v[k + 1]);
    let peak = tr.tau(k) + 0.5 * (a - c) / (a - 2.0 * b + c) * dt;
    assert!((peak - 3.5 * dt).abs() < 0.05 * dt, "peak {peak}");
}

#[test]
fn zero_db_noise_power_equals_signal_power() {
    let x = gaussian(1.0, 1 << 16, 0.1, 3);
    let y = delay_and_corrupt(&x, 0.0, 0.0, 4).unwrap();
    let noise: f64 = x.samples().iter().zip(y.samples()).map(|(a, b)| (b - a).powi(2)).sum::<f64>() / x.len() as f64;
    assert!(rel(noise, x.mean_square()) < 0.05, "{noise} {}", x.mean_square());
}

#[test]
fn synthesis_is_deterministic_per_seed() {
    for model in [
        SpectrumModel::GaussianShape { b: 1.0, variance: 1.0 },
        SpectrumModel::FmCarrier { carrier_hz: 1.4, mod_bandwidth: 0.3, index: 2.0 },
        SpectrumModel::MultiSine { frequencies_hz: vec![0.5, 1.5], amplitude: 0.7 },
    ] {
        let a = synthesize(&model, 2048, 0.05, 77).unwrap();
        let b = synthesize(&model, 2048, 0.05, 77).unwrap();
        assert!(a.samples().iter().zip(b.samples()).all(|(p, q)| p.to_bits() == q.to_bits()));
        let c = synthesize(&model, 2048, 0.05, 78).unwrap();
        assert_ne!(a.samples(), c.samples());
    }
}

#[test]
fn ensemble_periodogram_matches_each_density() {
    let (n, dt, seeds, block) = (1 << 16, 0.05, 64, 16);
    let models = [
        SpectrumModel::GaussianShape { b: 1.0, variance: 1.0 },
        SpectrumModel::BandLimited { w: 2.0, variance: 1.0 },
        SpectrumModel::Butterworth { kappa: 2.0, w: 1.0, variance: 1.0 },
        SpectrumModel::ModifiedLorentzian { gamma: 5.0, w: 1.0, variance: 1.0 },
        SpectrumModel::Laplacian { w: 1.0, variance: 1.0 },
        SpectrumModel::BandPass { low: 1.0, high: 3.0, variance: 1.0 },
    ];
    for model in &models {
        let mut psd = vec![0.0; n / 2 + 1];
        for s in 0..seeds {
            let x = synthesize(model, n, dt, seed::derive(40, s, 0)).unwrap();
            for (a, p) in psd.iter_mut().zip(periodogram(x.samples(), dt)) {
                *a += p / seeds as f64;
            }
        }
        let omega = |k: usize| 2.0 * PI * k as f64 / (n as f64 * dt);
        let target: Vec<f64> = (0..=n / 2).map(|k| model.density(omega(k)).unwrap()).collect();
        let total: f64 = target.iter().sum();
        let mut cum = 0.0;
        let kmax = target.iter().position(|t| {
            cum += t;
            cum >= 0.99 * total
        });
        let kmax = kmax.unwrap() + 1;
        let (mut err, mut norm) = (0.0, 0.0);
        for start in (1..kmax).step_by(block) {
            let end = (start + block).min(kmax);
            let m = (end - start) as f64;
            let est = psd[start..end].iter().sum::<f64>() / m;
            let tgt = target[start..end].iter().sum::<f64>() / m;
            err += (est - tgt).powi(2);
            norm += tgt * tgt;
        }
        let relative = (err / norm).sqrt();
        assert!(relative < 0.05, "{}: relative L2 error {relative}", model.name());
    }
}

#[test]
fn fm_analytic_envelope_is_constant() {
    let model = SpectrumModel::FmCarrier { carrier_hz: 3.0, mod_bandwidth: 0.3, index: 4.0 };
    for s in 0..4 {
        let x = synthesize(&model, 1 << 16, 0.05, s).unwrap();
        let pair = analytic_signal(&x).unwrap();
        let env = pair.envelope();
        let (lo, hi) = env[pair.y.trusted()].iter().fold((f64::MAX, f64::MIN), |(l, h), &e| (l.min(e), h.max(e)));
        assert!(hi - lo < 1e-6 * hi, "envelope spread {}", hi - lo);
    }
}
