mod common;

use std::f64::consts::PI;

use common::{gaussian, pooled, rel, sine};
use crosslation::analytic_ref::{
    bandlimited_envelope_direct, bandlimited_family, crosslation_gaussian, gaussian_dr, structure_local_gaussian,
};
use crosslation::crosslation::{
    complex_crosslation, decimate_by_slew, empirical_autoference, empirical_crosslation, empirical_down,
    empirical_up, estimate_mu, extract_crossjectories, filterbank_interferogram, inverse_hilbert, local_structure,
    rayleigh_threshold, slew_matched, spectrum_from_crosslation, validate_band, weighted_autoference, Crosslator,
    Decimation,
};
use crosslation::seed;
use crosslation::signal_gen::{analytic_signal, synthesize};
use crosslation::zero_crossing::detect_crossings;
use crosslation::{Error, Execution, Interferogram, LagRange, SpectrumModel, Waveform};

const SEEDS: u64 = 16;

/// Pools per-seed interferograms into per-lag means and batch errors.
fn pool(parts: &[Interferogram]) -> Vec<(f64, f64)> {
    let counts: Vec<f64> = parts.iter().map(|p| p.n_used as f64).collect();
    (0..parts[0].len())
        .map(|j| {
            let sums: Vec<f64> = parts.iter().map(|p| p.values[j] * p.n_used as f64).collect();
            pooled(&sums, &counts)
        })
        .collect()
}

fn max_z(pooled: &[(f64, f64)], lags: &[f64], oracle: impl Fn(f64) -> f64) -> f64 {
    pooled
        .iter()
        .zip(lags)
        .filter(|((_, se), _)| *se > 0.0)
        .map(|((m, se), &tau)| ((m - oracle(tau)) / se).abs())
        .fold(0.0, f64::max)
}

fn band_limited(w: f64, n: usize, dt: f64, s: u64) -> Waveform {
    synthesize(&SpectrumModel::BandLimited { w, variance: 1.0 }, n, dt, s).unwrap()
}

#[test]
fn sinusoid_crossjectories_coincide_with_the_sine() {
    let (dt, w0) = (0.01, 2.0 * PI);
    let w = sine(10_000, dt, w0, 0.0);
    let cs = detect_crossings(&w);
    let cj = extract_crossjectories(&w, &cs, 0.5).unwrap();
    for (row, e) in cj.rows.iter().zip(&cj.events) {
        for (j, v) in row.iter().enumerate() {
            let tau = (cj.lags.lo + j as i64) as f64 * dt;
            assert!((e.direction.sign() * v - (w0 * tau).sin()).abs() < 1e-6);
        }
    }
    let c = empirical_crosslation(&w, &cs, 0.5).unwrap();
    for (v, tau) in c.values.iter().zip(c.lags()) {
        assert!((v - (w0 * tau).sin()).abs() < 1e-6);
    }
}

#[test]
fn crossjectories_vanish_at_zero_lag() {
    let w = gaussian(1.0, 1 << 14, 0.05, 1);
    let cs = detect_crossings(&w);
    let cj = extract_crossjectories(&w, &cs, 5.0).unwrap();
    let zero = (-cj.lags.lo) as usize;
    for (row, e) in cj.rows.iter().zip(&cj.events) {
        assert!(row[zero].abs() < e.slope.abs() * w.dt());
    }
}

#[test]
fn crossjectory_variance_far_from_the_crossing_is_the_process_variance() {
    let w = gaussian(1.0, 1 << 18, 0.05, 2);
    let cs = detect_crossings(&w);
    let cj = Crosslator::new(LagRange::new(390, 400).unwrap()).crossjectories(&w, &cs).unwrap();
    for v in cj.signed_variance() {
        assert!((v / w.variance() - 1.0).abs() < 0.05, "{v}");
    }
}

#[test]
fn gaussian_crosslation_matches_closed_form() {
    let (b, dt, n) = (1.0, 0.05, 1 << 16);
    let parts: Vec<_> = (0..SEEDS)
        .map(|s| {
            let w = gaussian(b, n, dt, seed::derive(50, s, 0));
            empirical_crosslation(&w, &detect_crossings(&w), 6.0).unwrap()
        })
        .collect();
    assert!(parts.iter().map(|p| p.n_used).sum::<usize>() >= 10_000);
    let z = max_z(&pool(&parts), &parts[0].lags(), |t| crosslation_gaussian(|x| gaussian_dr(b, 1.0, x), b, 1.0, t));
    assert!(z < 5.0, "max z {z}");
}

#[test]
fn band_limited_crosslation_and_autoference_match_closed_forms() {
    let (wb, dt, n) = (1.0, 0.1, 1 << 16);
    let (mut cs_parts, mut as_parts) = (Vec::new(), Vec::new());
    for s in 0..SEEDS {
        let w = band_limited(wb, n, dt, seed::derive(51, s, 0));
        let pair = analytic_signal(&w).unwrap();
        cs_parts.push(empirical_crosslation(&pair.y, &detect_crossings(&pair.y), 10.0).unwrap());
        as_parts.push(empirical_autoference(&pair, 10.0).unwrap());
    }
    let lags = cs_parts[0].lags();
    let zc = max_z(&pool(&cs_parts), &lags, |t| bandlimited_family(wb, 1.0, t).c);
    let za = max_z(&pool(&as_parts), &lags, |t| bandlimited_family(wb, 1.0, t).a);
    assert!(zc < 5.0 && za < 5.0, "z_c {zc} z_a {za}");
}

#[test]
fn up_down_identity_and_symmetry() {
    let w = gaussian(1.0, 1 << 17, 0.05, 3);
    let cs = detect_crossings(&w);
    let c = empirical_crosslation(&w, &cs, 5.0).unwrap();
    let up = empirical_up(&w, &cs, 5.0).unwrap();
    let down = empirical_down(&w, &cs, 5.0).unwrap();
    let (np, nm) = (up.n_used as f64, down.n_used as f64);
    assert_eq!(up.n_used + down.n_used, c.n_used);
    for j in 0..c.len() {
        assert!(((np * up.values[j] - nm * down.values[j]) / (np + nm) - c.values[j]).abs() < 1e-12);
        let se = up.stderr[j].hypot(down.stderr[j]);
        if se > 0.0 {
            assert!((up.values[j] + down.values[j]).abs() < 5.0 * se);
        }
    }
    let small = up.index_of(10).unwrap();
    assert!(up.values[small] > 0.0);
}

#[test]
fn sinusoid_autoference_is_a_cosine() {
    let (n, dt, w0) = (4000, 0.01, 2.0 * PI);
    let y = Waveform::new((0..n).map(|i| (w0 * i as f64 * dt).cos()).collect(), dt, "cos").unwrap();
    let pair = analytic_signal(&y).unwrap();
    let a = empirical_autoference(&pair, 0.4).unwrap();
    let zero = a.index_of(0).unwrap();
    for (i, (v, tau)) in a.values.iter().zip(a.lags()).enumerate() {
        assert!((v - (w0 * tau).cos()).abs() < 1e-3);
        assert!(i == zero || *v < a.values[zero]);
    }
}

#[test]
fn autoference_agrees_with_inverse_hilbert_of_crosslation() {
    let (wb, dt) = (1.0, 0.1);
    let w = band_limited(wb, 1 << 18, dt, 4);
    let pair = analytic_signal(&w).unwrap();
    let c = empirical_crosslation(&pair.x, &detect_crossings(&pair.x), 60.0).unwrap();
    let direct = empirical_autoference(&pair, 60.0).unwrap();
    let routed = inverse_hilbert(&c);
    let peak = direct.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let centre = direct.index_of(0).unwrap();
    let reach = (20.0 / dt) as usize;
    let worst = (centre - reach..=centre + reach)
        .map(|j| (direct.values[j] - routed.values[j]).abs())
        .fold(0.0, f64::max);
    assert!(worst < 0.02 * peak, "discrepancy {worst} peak {peak}");
}

#[test]
fn weighted_autoference_of_fm_is_proportional_to_sign_form() {
    let model = SpectrumModel::FmCarrier { carrier_hz: 3.0, mod_bandwidth: 0.3, index: 4.0 };
    let w = synthesize(&model, 1 << 18, 0.005, 5).unwrap();
    let pair = analytic_signal(&w).unwrap();
    let cs = detect_crossings(&pair.x);
    let engine = Crosslator::new(LagRange::for_window(&pair.y, 4.0).unwrap());
    let weighted = engine.weighted_autoference(&pair, &cs).unwrap();
    let signed = engine.sign_autoference(&pair, &cs).unwrap();
    let k = weighted.values.iter().zip(&signed.values).map(|(a, b)| a * b).sum::<f64>()
        / signed.values.iter().map(|b| b * b).sum::<f64>();
    let peak = signed.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    for (a, b) in weighted.values.iter().zip(&signed.values) {
        assert!((a - k * b).abs() < 1e-3 * peak * k);
    }
    assert!(weighted.at(0).unwrap() >= 0.0);
}

#[test]
fn weighted_autoference_equals_direct_sum() {
    let w = gaussian(1.0, 1 << 14, 0.05, 6);
    let pair = analytic_signal(&w).unwrap();
    let cs = detect_crossings(&pair.x);
    let got = weighted_autoference(&pair, 3.0).unwrap();
    let engine = Crosslator::new(got.lag_range());
    let usable: Vec<_> = cs.events.iter().filter(|e| engine.usable(&pair.y, e)).collect();
    assert_eq!(usable.len(), got.n_used);
    let dt = w.dt();
    for (j, tau) in got.lags().iter().enumerate() {
        let sum: f64 = usable
            .iter()
            .map(|e| {
                let p = e.index as f64 + e.frac;
                pair.y.interpolate(p).unwrap() * pair.y.interpolate(p + tau / dt).unwrap()
            })
            .sum();
        assert!((sum / usable.len() as f64 - got.values[j]).abs() < 1e-12);
    }
    assert!(got.at(0).unwrap() >= 0.0);
}

#[test]
fn unit_slope_crossings_make_slew_weighting_trivial() {
    let dt = 0.01;
    let tri: Vec<f64> = (0..8000)
        .map(|i| {
            let p = (i as f64 * dt + 0.37).rem_euclid(4.0);
            if p < 2.0 { p - 1.0 } else { 3.0 - p }
        })
        .collect();
    let w = Waveform::new(tri, dt, "triangle").unwrap();
    let cs = detect_crossings(&w);
    assert!(cs.events.iter().all(|e| (e.slope.abs() - 1.0).abs() < 1e-9));
    let plain = empirical_crosslation(&w, &cs, 1.5).unwrap();
    let slew = slew_matched(&w, &cs, 1.5).unwrap();
    for (a, b) in plain.values.iter().zip(&slew.values) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn gaussian_slew_crosslation_is_a_scaled_crosslation() {
    let (b, dt, n) = (1.0, 0.05, 1 << 16);
    let scale = 2.0 * b / (PI / 2.0).sqrt();
    let mut parts = Vec::new();
    let mut mean_abs = Vec::new();
    for s in 0..SEEDS {
        let w = gaussian(b, n, dt, seed::derive(52, s, 0));
        let cs = detect_crossings(&w);
        mean_abs.push(cs.mean_abs_slope());
        parts.push(slew_matched(&w, &cs, 6.0).unwrap());
    }
    let z = max_z(&pool(&parts), &parts[0].lags(), |t| {
        scale * crosslation_gaussian(|x| gaussian_dr(b, 1.0, x), b, 1.0, t)
    });
    assert!(z < 5.0, "max z {z}");
    let m = mean_abs.iter().sum::<f64>() / mean_abs.len() as f64;
    assert!(rel(m, (PI / 2.0).sqrt() * b) < 0.05, "{m}");
}

#[test]
fn thresholded_slew_keeps_only_steep_events() {
    let w = gaussian(1.0, 1 << 16, 0.05, 7);
    let cs = detect_crossings(&w);
    let eta = rayleigh_threshold(cs.slope_second_moment(), cs.len(), 200.0);
    let kept = decimate_by_slew(&cs, 200.0, Decimation::Threshold).unwrap();
    assert!(kept.events.iter().all(|e| e.slope.abs() > eta));
    let expected = cs.events.iter().filter(|e| e.slope.abs() > eta).count();
    assert_eq!(kept.len(), expected);
    let ifg = slew_matched(&w, &kept, 5.0).unwrap();
    assert!(ifg.n_used <= expected);
}

#[test]
fn decimation_examples() {
    let w = gaussian(1.0, 1 << 16, 0.05, 8);
    let cs = detect_crossings(&w);
    for mode in [Decimation::Trim, Decimation::Threshold] {
        assert_eq!(decimate_by_slew(&cs, cs.len() as f64 + 5.0, mode).unwrap(), cs);
        assert!(matches!(decimate_by_slew(&cs, 0.0, mode), Err(Error::InvalidParameter(_))));
        assert!(decimate_by_slew(&cs, -2.0, mode).is_err());
    }
    let one = decimate_by_slew(&cs, 1.0, Decimation::Trim).unwrap();
    assert_eq!(one.len(), 1);
    let steepest = cs.events.iter().map(|e| e.slope.abs()).fold(0.0, f64::max);
    assert_eq!(one.events[0].slope.abs(), steepest);
    let kept = decimate_by_slew(&cs, cs.len() as f64 / 4.0, Decimation::Threshold).unwrap();
    assert!(kept.slope_second_moment() > 2.0);
}

#[test]
fn sinusoid_complex_crosslation_is_a_circle() {
    let (n, dt, w0) = (4000, 0.01, 2.0 * PI);
    let y = Waveform::new((0..n).map(|i| (w0 * i as f64 * dt).cos()).collect(), dt, "cos").unwrap();
    let pair = analytic_signal(&y).unwrap();
    let cs = detect_crossings(&pair.x);
    let engine = Crosslator::new(LagRange::for_window(&y, 0.5).unwrap());
    let c = engine.crosslation(&pair.x, &cs).unwrap();
    let a = engine.autoference(&pair, &cs).unwrap();
    let cc = complex_crosslation(&c, &a).unwrap();
    for (e, (av, cv)) in cc.envelope.iter().zip(&cc.nyquist) {
        assert!((e - 1.0).abs() < 1e-3);
        assert!((av.hypot(*cv) - 1.0).abs() < 1e-3);
    }
}

#[test]
fn analytic_band_limited_envelope_matches_single_radical() {
    let (wb, dt) = (1.0, 0.01);
    let lags: Vec<i64> = (-2000..=2000).collect();
    let grid = |f: &dyn Fn(f64) -> f64| Interferogram {
        dt,
        first_lag: lags[0],
        values: lags.iter().map(|&l| f(l as f64 * dt)).collect(),
        stderr: vec![0.0; lags.len()],
        n_used: 1,
        variant: crosslation::Variant::Crosslation,
    };
    let c = grid(&|t| bandlimited_family(wb, 1.0, t).c);
    let a = grid(&|t| bandlimited_family(wb, 1.0, t).a);
    let cc = complex_crosslation(&c, &a).unwrap();
    for (i, e) in cc.envelope.iter().enumerate() {
        let tau = c.tau(i);
        assert!(*e >= a.values[i].abs() && *e >= c.values[i].abs());
        if tau.abs() > 0.5 {
            assert!((e - bandlimited_envelope_direct(wb, 1.0, tau)).abs() < 1e-9);
        }
    }
    let mut shifted = a.clone();
    shifted.first_lag += 1;
    assert!(matches!(complex_crosslation(&c, &shifted), Err(Error::GridMismatch)));
}

#[test]
fn local_structure_matches_closed_form() {
    let (b, dt, n) = (1.0, 0.05, 1 << 16);
    let mut parts = Vec::new();
    for s in 0..SEEDS {
        let w = gaussian(b, n, dt, seed::derive(53, s, 0));
        let cs = detect_crossings(&w);
        let d = local_structure(&w, &cs, 20.0).unwrap();
        let zero = d.index_of(0).unwrap();
        let bound = cs.events.iter().map(|e| (e.slope * dt).powi(2)).fold(0.0, f64::max);
        assert!(d.values[zero] < bound);
        parts.push(d);
    }
    let pooled = pool(&parts);
    let lags = parts[0].lags();
    let zero = parts[0].index_of(0).unwrap();
    let z = max_z(&pooled[zero + 1..], &lags[zero + 1..], |t| structure_local_gaussian(b, 1.0, t))
        .max(max_z(&pooled[..zero], &lags[..zero], |t| structure_local_gaussian(b, 1.0, t)));
    assert!(z < 5.0, "max z {z}");
    let far = pooled.last().unwrap().0;
    assert!((far - 1.0).abs() < 0.05, "{far}");
}

#[test]
fn spectrum_recovered_from_gaussian_crosslation() {
    let (b, dt, n) = (1.0, 0.05, 1 << 18);
    let model = SpectrumModel::GaussianShape { b, variance: 1.0 };
    let mut parts = Vec::new();
    let (mut mu, mut rate) = (0.0, 0.0);
    for s in 0..SEEDS {
        let w = gaussian(b, n, dt, seed::derive(54, s, 0));
        let cs = detect_crossings(&w);
        mu += estimate_mu(&w) / SEEDS as f64;
        rate += cs.rate() / SEEDS as f64;
        parts.push(empirical_crosslation(&w, &cs, 10.0).unwrap());
    }
    assert!(rel(mu, (2.0 / PI).sqrt()) < 0.03, "mu {mu}");
    let mut c = parts[0].clone();
    c.values = pool(&parts).iter().map(|p| p.0).collect();
    let est = spectrum_from_crosslation(&c, mu, rate).unwrap();
    let w99 = 2.576 * b;
    let (mut err, mut norm) = (0.0, 0.0);
    for (w, d) in est.omega.iter().zip(&est.density) {
        if *w <= w99 {
            let t = model.density(*w).unwrap();
            err += (d - t).powi(2);
            norm += t * t;
        }
    }
    assert!((err / norm).sqrt() < 0.10, "relative L2 {}", (err / norm).sqrt());
}

#[test]
fn sinusoid_spectrum_is_a_single_line() {
    let (dt, w0) = (0.01, 2.0 * PI * 1.5);
    let w = sine(20_000, dt, w0, 0.3);
    let cs = detect_crossings(&w);
    let c = empirical_crosslation(&w, &cs, 20.0).unwrap();
    let est = spectrum_from_crosslation(&c, estimate_mu(&w), cs.rate()).unwrap();
    let k = (0..est.density.len()).max_by(|&a, &b| est.density[a].total_cmp(&est.density[b])).unwrap();
    let step = est.omega[1] - est.omega[0];
    assert!((est.omega[k] - w0).abs() <= step);
}

#[test]
fn filterbank_band_ratio_is_validated() {
    assert!(matches!(validate_band(1.0, 3.2), Err(Error::BandRatio { .. })));
    assert!(validate_band(1.0, 3.18).is_ok());
    let w = gaussian(1.0, 4096, 0.05, 1);
    assert!(filterbank_interferogram(&w, &[(1.0, 3.2)], 2.0, Execution::Sequential).is_err());
}

#[test]
fn single_band_covering_the_support_is_the_plain_interferogram() {
    let w = synthesize(&SpectrumModel::BandPass { low: 1.0, high: 3.0, variance: 1.0 }, 1 << 14, 0.05, 9).unwrap();
    let fb = filterbank_interferogram(&w, &[(0.99, 3.05)], 5.0, Execution::Sequential).unwrap();
    let margin = (0.02 * w.len() as f64).ceil() as usize;
    let trimmed = w.clone().trim_trusted(margin);
    let plain = empirical_crosslation(&trimmed, &detect_crossings(&trimmed), 5.0).unwrap();
    assert_eq!(fb.interferogram.n_used, plain.n_used);
    for (a, b) in fb.interferogram.values.iter().zip(&plain.values) {
        assert!((a - b).abs() < 1e-9);
    }
}

#[test]
fn octave_filterbank_exceeds_the_degrees_of_freedom() {
    let (b, dt, n) = (1.0, 0.05, 1 << 16);
    let w = gaussian(b, n, dt, 10);
    let ratio = 2f64.powf(1.5);
    let bands: Vec<(f64, f64)> = (0..4).map(|k| (0.25 * ratio.powi(k), 0.25 * ratio.powi(k + 1))).collect();
    let fb = filterbank_interferogram(&w, &bands, 5.0, Execution::Sequential).unwrap();
    let lambda = b * w.duration() / PI.sqrt();
    assert!(fb.total_crossings() as f64 >= lambda, "{} < {lambda}", fb.total_crossings());
    assert!((detect_crossings(&w).len() as f64) < lambda);
}

#[test]
fn scale_and_shift_equivariance() {
    let w = gaussian(1.0, 1 << 14, 0.05, 11);
    let cs = detect_crossings(&w);
    let c = empirical_crosslation(&w, &cs, 4.0).unwrap();
    let scaled = w.scaled(2.5);
    let cs2 = detect_crossings(&scaled);
    assert!(cs.events.iter().zip(&cs2.events).all(|(a, b)| a.t == b.t && a.direction == b.direction));
    let c2 = empirical_crosslation(&scaled, &cs2, 4.0).unwrap();
    assert!(c.same_grid(&c2));
    for (a, b) in c.values.iter().zip(&c2.values) {
        assert!((2.5 * a - b).abs() < 1e-12);
    }
    let s = 37;
    let cut = Waveform::new(w.samples()[s..].to_vec(), w.dt(), "cut").unwrap();
    let restricted = w.clone().restrict_trusted(s..w.len());
    let a = empirical_crosslation(&restricted, &cs, 4.0).unwrap();
    let b = empirical_crosslation(&cut, &detect_crossings(&cut), 4.0).unwrap();
    assert_eq!(a.n_used, b.n_used);
    for (x, y) in a.values.iter().zip(&b.values) {
        assert!((x - y).abs() < 1e-12);
    }
}

#[test]
fn empirical_crosslation_is_odd_within_error_bars() {
    let parts: Vec<_> = (0..SEEDS)
        .map(|s| {
            let w = gaussian(1.0, 1 << 16, 0.05, seed::derive(55, s, 0));
            empirical_crosslation(&w, &detect_crossings(&w), 5.0).unwrap()
        })
        .collect();
    let counts: Vec<f64> = parts.iter().map(|p| p.n_used as f64).collect();
    let c0 = &parts[0];
    for l in 1..=c0.symmetric_extent() {
        let sums: Vec<f64> =
            parts.iter().map(|p| (p.at(l).unwrap() + p.at(-l).unwrap()) * p.n_used as f64).collect();
        let (m, se) = pooled(&sums, &counts);
        assert!(m.abs() < 5.0 * se, "lag {l}: {m} se {se}");
    }
}

#[test]
fn empty_inputs_are_errors() {
    let w = Waveform::new(vec![1.0; 100], 0.1, "flat").unwrap();
    let cs = detect_crossings(&w);
    assert!(matches!(empirical_crosslation(&w, &cs, 1.0), Err(Error::NoCrossings)));
    let ramp = Waveform::new((0..100).map(|i| i as f64 - 50.5).collect(), 0.1, "ramp").unwrap();
    let cs = detect_crossings(&ramp);
    assert!(empirical_down(&ramp, &cs, 1.0).is_err());
    assert!(empirical_up(&ramp, &cs, 1.0).is_ok());
}

#[test]
fn csv_layouts() {
    let w = sine(2000, 0.01, 2.0 * PI, 0.2);
    let pair = analytic_signal(&w).unwrap();
    let cs = detect_crossings(&pair.x);
    let engine = Crosslator::new(LagRange::symmetric(3));
    let c = engine.crosslation(&pair.x, &cs).unwrap();
    let a = engine.autoference(&pair, &cs).unwrap();
    assert!(c.to_csv().starts_with("tau,value,stderr\n"));
    assert_eq!(c.to_csv().lines().count(), 8);
    let cc = complex_crosslation(&c, &a).unwrap();
    assert!(cc.to_csv().starts_with("tau,A,C,envelope\n"));
    assert!(cc.nyquist_csv().starts_with("A,C\n"));
}

