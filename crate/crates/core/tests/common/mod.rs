//! Test-side reference formulas, written independently of the library
//! kinematics so they can serve as oracles.
#![allow(dead_code)]

use std::f64::consts::PI;

use mirror_dce::circuit::{CircuitParams, DriveSpectrum};
use mirror_dce::constants::{HBAR, K_B};
use mirror_dce::numerics::{integrate, Quadrature};
use mirror_dce::trajectories::TrajectoryKind;

pub const C: f64 = 2.99792458e8;
pub const V: f64 = 0.4 * C;

pub fn ghz(f: f64) -> f64 {
    2.0 * PI * f * 1e9
}

pub fn rel(a: f64, b: f64) -> f64 {
    if b == 0.0 {
        a.abs()
    } else {
        ((a - b) / b).abs()
    }
}

/// Coordinate velocity dz/dt from the worldline formulas.
pub fn velocity(kind: TrajectoryKind, accel: f64, w: f64, v: f64, t: f64) -> f64 {
    match kind {
        TrajectoryKind::Sm => accel / w * (w * t).sin(),
        TrajectoryKind::Sa => {
            let k = 2.0 * accel / (v * w);
            let s = (w * t).sin();
            v * k * s / (1.0 + k * k * s * s).sqrt()
        }
        TrajectoryKind::Aua => {
            // even segments are centered on t = 0, odd ones on t = t_p/2
            let tp = 2.0 * PI / w;
            let x = t.rem_euclid(tp);
            let (s, sign) = if x < 0.25 * tp {
                (x, 1.0)
            } else if x < 0.75 * tp {
                (x - 0.5 * tp, -1.0)
            } else {
                (x - tp, 1.0)
            };
            sign * accel * s / (1.0 + (accel * s / v).powi(2)).sqrt()
        }
    }
}

/// Signed proper acceleration at coordinate time t.
pub fn alpha(kind: TrajectoryKind, accel: f64, w: f64, v: f64, t: f64) -> f64 {
    match kind {
        TrajectoryKind::Sm => {
            let beta = accel / (w * v);
            let s = (w * t).sin();
            accel * (w * t).cos() / (1.0 - beta * beta * s * s).powf(1.5)
        }
        TrajectoryKind::Sa => 2.0 * accel * (w * t).cos(),
        TrajectoryKind::Aua => {
            let tp = 2.0 * PI / w;
            let x = t.rem_euclid(tp);
            if x < 0.25 * tp || x >= 0.75 * tp {
                accel
            } else {
                -accel
            }
        }
    }
}

/// Time-averaged proper acceleration `(1/τ_p) ∫ |α| dτ` by quadrature over
/// coordinate time with `dτ = √(1 - u²/v²) dt`, one quarter period at a time.
pub fn abar_by_quadrature(kind: TrajectoryKind, accel: f64, w: f64, v: f64) -> f64 {
    let q = Quadrature::with_tolerance(1e-13);
    let tp = 2.0 * PI / w;
    let mut num = 0.0;
    let mut den = 0.0;
    for k in 0..4 {
        let (a, b) = (k as f64 * 0.25 * tp, (k + 1) as f64 * 0.25 * tp);
        let gamma_inv = |t: f64| {
            let u = velocity(kind, accel, w, v, t) / v;
            (1.0 - u * u).sqrt()
        };
        num += integrate(|t| alpha(kind, accel, w, v, t).abs() * gamma_inv(t), a, b, &q).unwrap();
        den += integrate(gamma_inv, a, b, &q).unwrap();
    }
    num / den
}

/// Output spectrum written out from the drive coefficients.
pub fn n_out_reference(omega: f64, d: &DriveSpectrum, c: &CircuitParams, temperature: f64) -> f64 {
    let occ = |x: f64| -> f64 {
        if temperature == 0.0 {
            0.0
        } else {
            1.0 / ((HBAR * x / (K_B * temperature)).exp() - 1.0)
        }
    };
    let leff = c.effective_length();
    let a0 = d.a0();
    let mut sum = 0.0;
    for n in 1..=d.n_max() {
        let p = d.cos_coeffs()[n - 1].powi(2) + d.sin_coeffs()[n - 1].powi(2);
        let detune = (omega - n as f64 * d.omega_d()).abs();
        let stimulated = if detune == 0.0 {
            omega * K_B * temperature / HBAR
        } else {
            omega * detune * occ(detune)
        };
        let spontaneous = if n as f64 * d.omega_d() > omega {
            omega * (n as f64 * d.omega_d() - omega)
        } else {
            0.0
        };
        sum += p * (stimulated + spontaneous);
    }
    occ(omega) + 4.0 * leff * leff / (c.v * c.v * a0 * a0) * sum
}
