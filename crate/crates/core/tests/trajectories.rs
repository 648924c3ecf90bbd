mod common;

use std::f64::consts::PI;

use common::{abar_by_quadrature, ghz, rel, V};
use mirror_dce::numerics::{ellip_e, ellip_f, find_root};
use mirror_dce::trajectories::{
    average_acceleration, count_acceleration_peaks, relativity_estimator, solve_acceleration_parameter,
    TrajectoryKind, TrajectoryParams,
};

const FREQS_GHZ: [f64; 5] = [5.0, 10.0, 15.0, 20.0, 30.0];

/// Acceleration parameters spanning weak to strongly relativistic motion.
fn accel_grid(kind: TrajectoryKind, w: f64) -> Vec<f64> {
    match kind {
        TrajectoryKind::Sm => [0.05, 0.2, 0.4, 0.6, 0.8].iter().map(|b| b * V * w).collect(),
        TrajectoryKind::Sa => [0.1, 0.5, 1.0, 2.0, 5.0].iter().map(|k| k * V * w / 2.0).collect(),
        TrajectoryKind::Aua => [1.0, 5.0, 10.0, 20.0, 50.0].iter().map(|a| a * 1e18).collect(),
    }
}

fn selected() -> Vec<TrajectoryParams> {
    let w = ghz(14.6);
    vec![
        TrajectoryParams::new(TrajectoryKind::Sm, 0.3 * V * w, w, V).unwrap(),
        TrajectoryParams::new(TrajectoryKind::Sa, 13.725e18, w, V).unwrap(),
        TrajectoryParams::new(TrajectoryKind::Aua, 20e18, w, V).unwrap(),
    ]
}

#[test]
fn closed_form_average_matches_quadrature() {
    for kind in TrajectoryKind::ALL {
        for f in FREQS_GHZ {
            let w = ghz(f);
            for a in accel_grid(kind, w) {
                let closed = average_acceleration(kind, a, w, V).unwrap();
                let numeric = abar_by_quadrature(kind, a, w, V);
                assert!(rel(closed, numeric) < 1e-6, "{kind} A={a:e} f={f}: {closed:e} vs {numeric:e}");
            }
        }
    }
}

#[test]
fn library_velocity_matches_reference() {
    for p in selected() {
        for i in 0..200 {
            let t = p.period() * i as f64 / 200.0 * 1.37;
            let ours = p.velocity(t);
            let reference = common::velocity(p.kind(), p.accel(), p.omega_d(), V, t);
            assert!((ours - reference).abs() <= 1e-9 * V, "{} t={t:e}", p.kind());
        }
    }
}

#[test]
fn subluminal_on_fine_grid() {
    let n = 10_000;
    for p in selected() {
        let h = p.period() / n as f64;
        for i in 0..n {
            let t = i as f64 * h;
            let u = (p.position(t + h) - p.position(t)) / h;
            assert!(u.abs() < V, "{} at t={t:e}: |dz/dt| = {}", p.kind(), u.abs() / V);
        }
    }
}

#[test]
fn sa_reduces_to_sm_for_weak_drive() {
    let w = ghz(10.0);
    let alpha = 1e-3 * V * w;
    let sa = TrajectoryParams::new(TrajectoryKind::Sa, alpha, w, V).unwrap();
    // matched amplitude R = 2α/ω², i.e. A = Rω² = 2α
    let sm = TrajectoryParams::new(TrajectoryKind::Sm, 2.0 * alpha, w, V).unwrap();
    let amp = sm.radius();
    let worst = (0..1000)
        .map(|i| {
            let t = sm.period() * i as f64 / 1000.0;
            (sa.position(t) - sm.position(t)).abs()
        })
        .fold(0.0, f64::max);
    assert!(worst < 1e-3 * amp, "{worst:e} vs amplitude {amp:e}");
}

#[test]
fn proper_time_monotone_and_periodic() {
    for kind in TrajectoryKind::ALL {
        for f in [5.0, 20.0] {
            let w = ghz(f);
            for a in accel_grid(kind, w) {
                let p = TrajectoryParams::new(kind, a, w, V).unwrap();
                let tp = p.period();
                let mut last = -1.0;
                for i in 0..=400 {
                    let t = tp * i as f64 / 400.0;
                    let tau = p.proper_time(t).unwrap();
                    assert!(tau > last, "{kind} not increasing at t={t:e}");
                    assert!(tau <= t * (1.0 + 1e-12) + 1e-30);
                    last = tau;
                }
                let closed = match kind {
                    TrajectoryKind::Sm => ellip_e(2.0 * PI, p.beta().powi(2)).unwrap() / w,
                    TrajectoryKind::Sa => ellip_f(2.0 * PI, -(2.0 * a / (V * w)).powi(2)).unwrap() / w,
                    TrajectoryKind::Aua => 4.0 * V / a * (a * PI / (2.0 * V * w)).asinh(),
                };
                assert!(rel(p.proper_time(tp).unwrap(), closed) < 1e-10, "{kind}");
                assert!(rel(p.proper_period().unwrap(), closed) < 1e-12, "{kind}");
            }
        }
    }
}

#[test]
fn aua_proper_period_root() {
    for f in FREQS_GHZ {
        let w = ghz(f);
        for a in accel_grid(TrajectoryKind::Aua, w) {
            let tp = 2.0 * PI / w;
            // t(τ) over the first quarter is (v/a) sinh(aτ/v)
            let quarter = find_root(|tau| V / a * (a * tau / V).sinh() - tp / 4.0, 0.0, tp, 1e-15).unwrap();
            let p = TrajectoryParams::new(TrajectoryKind::Aua, a, w, V).unwrap();
            assert!(rel(p.proper_period().unwrap(), 4.0 * quarter) < 1e-9);
            assert!(rel(p.coordinate_time(p.proper_period().unwrap()).unwrap(), tp) < 1e-12);
        }
    }
}

#[test]
fn coordinate_time_inverts_proper_time() {
    for p in selected() {
        for i in 1..50 {
            let t = p.period() * i as f64 / 20.0;
            let back = p.coordinate_time(p.proper_time(t).unwrap()).unwrap();
            assert!(rel(back, t) < 1e-9, "{} t={t:e} back={back:e}", p.kind());
        }
    }
}

#[test]
fn aua_is_centered() {
    let w = ghz(14.6);
    let p = TrajectoryParams::new(TrajectoryKind::Aua, 20e18, w, V).unwrap();
    let q = mirror_dce::numerics::Quadrature::with_tolerance(1e-12);
    let tp = p.period();
    let mut mean = 0.0;
    for k in 0..4 {
        let (a, b) = (k as f64 * tp / 4.0, (k + 1) as f64 * tp / 4.0);
        mean += mirror_dce::numerics::integrate(|t| p.position(t), a, b, &q).unwrap();
    }
    mean /= tp;
    let amp = p.position(0.0).abs();
    assert!(mean.abs() < 1e-9 * amp, "mean {mean:e}");
    assert!(rel(p.position_raw(0.0), V * V / 20e18) < 1e-14);
}

#[test]
fn worked_examples() {
    let w = ghz(14.6);
    let sm = TrajectoryParams::sinusoidal(1e-4, w, V).unwrap();
    assert!(rel(sm.position(0.0), -1e-4) < 1e-14);
    assert!(rel(sm.directional_acceleration(0.0), 1e-4 * w * w) < 1e-14);
    let sa = TrajectoryParams::new(TrajectoryKind::Sa, 13.725e18, w, V).unwrap();
    assert!(sa.position_raw(PI / (2.0 * w)).abs() < 1e-18);
    assert!(rel(sa.directional_acceleration(0.0), 2.0 * 13.725e18) < 1e-14);
    let aua = TrajectoryParams::new(TrajectoryKind::Aua, 20e18, w, V).unwrap();
    for i in 0..37 {
        assert_eq!(aua.proper_acceleration(i as f64 * 1e-12), 20e18);
    }
    for p in [&sm, &sa, &aua] {
        assert_eq!(p.proper_time(0.0).unwrap(), 0.0);
    }
    assert!(rel(average_acceleration(TrajectoryKind::Aua, 20e18, w, V).unwrap(), 20e18) < 1e-15);
    assert!(rel(sa.average_acceleration().unwrap(), 20e18) < 0.01);
    // ā · t_p · 5/(2c) with t_p = 1/14.6 GHz
    let expected = 20e18 / 14.6e9 * 5.0 / (2.0 * common::C);
    assert!(rel(aua.relativity_estimator().unwrap(), expected) < 1e-12);
    assert!(rel(expected, 11.42) < 0.01);
    assert_eq!(relativity_estimator(0.0, w), 0.0);
}

#[test]
fn tiny_sm_radius_keeps_coordinate_time() {
    let w = ghz(10.0);
    let p = TrajectoryParams::sinusoidal(1e-15, w, V).unwrap();
    for i in 0..10 {
        let t = i as f64 * 3e-11;
        assert!(rel(p.proper_time(t).unwrap(), t) < 1e-12 || t == 0.0);
    }
}

#[test]
fn sm_reference_radius() {
    let w = ghz(18.0);
    let a = solve_acceleration_parameter(TrajectoryKind::Sm, 9.054e17, w, V).unwrap();
    let r = a / (w * w);
    assert!(rel(r, 0.11e-3) < 0.01, "R = {r:e}");
}

#[test]
fn solve_inverts_average() {
    for kind in TrajectoryKind::ALL {
        for f in FREQS_GHZ {
            let w = ghz(f);
            for a in accel_grid(kind, w) {
                let abar = average_acceleration(kind, a, w, V).unwrap();
                let back = solve_acceleration_parameter(kind, abar, w, V).unwrap();
                assert!(rel(back, a) < 1e-6, "{kind} {a:e} -> {back:e}");
            }
        }
    }
}

#[test]
fn sm_double_peaks_appear_when_fast() {
    let w = ghz(10.0);
    for beta in [0.1, 0.3, 0.5] {
        let p = TrajectoryParams::new(TrajectoryKind::Sm, beta * V * w, w, V).unwrap();
        assert_eq!(count_acceleration_peaks(&p, 4000), 2, "beta {beta}");
    }
    let p = TrajectoryParams::new(TrajectoryKind::Sm, 0.95 * V * w, w, V).unwrap();
    assert!(count_acceleration_peaks(&p, 4000) > 2);
}

#[test]
fn sm_rejects_superluminal() {
    let w = ghz(10.0);
    assert!(TrajectoryParams::new(TrajectoryKind::Sm, 1.01 * V * w, w, V).is_err());
    assert!(average_acceleration(TrajectoryKind::Sm, 1.01 * V * w, w, V).is_err());
}

#[test]
fn all_kinds_periodic() {
    for p in selected() {
        for i in 0..100 {
            let t = p.period() * i as f64 / 100.0;
            let (z0, z1) = (p.position(t), p.position(t + p.period()));
            let scale = p.position(0.0).abs();
            assert!((z0 - z1).abs() <= 1e-9 * scale, "{}", p.kind());
        }
    }
}
