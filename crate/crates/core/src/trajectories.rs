//! Kinematics of the three periodic boundary worldlines.
//!
//! * SM  - sinusoidal motion, `z = -R cos(ω t)`, characteristic parameter `A = R ω²`
//! * SA  - sinusoidal proper acceleration `2α cos(ω t)`, parameter `A = α`
//! * AUA - alternating uniform acceleration of magnitude `a`, parameter `A = a`
//!
//! All formulas use the effective light speed `v` of the waveguide. Positions
//! are reported with their one-period mean removed, which matters only for
//! AUA whose raw worldline sits at `z ≥ v²/a`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::constants::C;
use crate::error::{Error, Result};
use crate::numerics::{ellip_e, ellip_e_complete, ellip_f, ellip_k, find_root, find_root_with, RootOptions};

/// SM requires `R ω / v` to stay below this bound.
pub const SM_MAX_BETA: f64 = 1.0 - 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TrajectoryKind {
    #[serde(rename = "SM", alias = "sm")]
    Sm,
    #[serde(rename = "SA", alias = "sa")]
    Sa,
    #[serde(rename = "AUA", alias = "aua")]
    Aua,
}

impl TrajectoryKind {
    pub const ALL: [TrajectoryKind; 3] = [TrajectoryKind::Sm, TrajectoryKind::Sa, TrajectoryKind::Aua];

    pub fn label(self) -> &'static str {
        match self {
            TrajectoryKind::Sm => "SM",
            TrajectoryKind::Sa => "SA",
            TrajectoryKind::Aua => "AUA",
        }
    }
}

impl fmt::Display for TrajectoryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for TrajectoryKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sm" => Ok(TrajectoryKind::Sm),
            "sa" => Ok(TrajectoryKind::Sa),
            "aua" => Ok(TrajectoryKind::Aua),
            other => Err(Error::param("kind", format!("unknown trajectory `{other}` (sm|sa|aua)"))),
        }
    }
}

/// One point on a worldline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldlineSample {
    pub t: f64,
    pub tau: f64,
    pub z: f64,
    pub alpha_dir: f64,
}

/// A validated worldline: kind, characteristic acceleration `A` [m/s²],
/// angular drive frequency [rad/s] and effective light speed [m/s].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryParams {
    kind: TrajectoryKind,
    accel: f64,
    omega_d: f64,
    v: f64,
}

impl TrajectoryParams {
    pub fn new(kind: TrajectoryKind, accel: f64, omega_d: f64, v: f64) -> Result<Self> {
        if !(accel > 0.0) || !accel.is_finite() {
            return Err(Error::param("A", format!("must be positive and finite, got {accel}")));
        }
        if !(omega_d > 0.0) || !omega_d.is_finite() {
            return Err(Error::param("omega_d", format!("must be positive and finite, got {omega_d}")));
        }
        if !(v > 0.0 && v <= C) {
            return Err(Error::param("v", format!("must satisfy 0 < v <= c, got {v}")));
        }
        let p = TrajectoryParams {
            kind,
            accel,
            omega_d,
            v,
        };
        if kind == TrajectoryKind::Sm && !(p.beta() <= SM_MAX_BETA) {
            return Err(Error::Constraint(format!(
                "SM wall speed R·ω_d = {:.6e} m/s reaches v = {:.6e} m/s (R ω_d / v = {:.9})",
                p.beta() * v,
                v,
                p.beta()
            )));
        }
        Ok(p)
    }

    /// SM parametrized by amplitude `R` [m] instead of `A = R ω²`.
    pub fn sinusoidal(radius: f64, omega_d: f64, v: f64) -> Result<Self> {
        Self::new(TrajectoryKind::Sm, radius * omega_d * omega_d, omega_d, v)
    }

    pub fn kind(&self) -> TrajectoryKind {
        self.kind
    }

    /// Characteristic acceleration parameter `A` [m/s²].
    pub fn accel(&self) -> f64 {
        self.accel
    }

    pub fn omega_d(&self) -> f64 {
        self.omega_d
    }

    pub fn v(&self) -> f64 {
        self.v
    }

    /// Coordinate period `2π/ω_d`.
    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega_d
    }

    /// SM amplitude `R = A/ω²`.
    pub fn radius(&self) -> f64 {
        self.accel / (self.omega_d * self.omega_d)
    }

    /// SM peak speed in units of v, `R ω / v`.
    pub fn beta(&self) -> f64 {
        self.accel / (self.omega_d * self.v)
    }

    /// SA dimensionless strength `2α/(v ω)`.
    fn sa_strength(&self) -> f64 {
        2.0 * self.accel / (self.v * self.omega_d)
    }

    /// AUA `sinh(a τ_p / 4v) = a π / (2 v ω)`.
    fn aua_quarter_sinh(&self) -> f64 {
        self.accel * PI / (2.0 * self.v * self.omega_d)
    }

    /// Segment index `n` and offset `s = t - n t_p/2` for AUA.
    fn aua_segment(&self, t: f64) -> (i64, f64) {
        let half = 0.5 * self.period();
        let n = (t / half + 0.5).floor();
        (n as i64, t - n * half)
    }

    /// Raw (uncentered) boundary position.
    pub fn position_raw(&self, t: f64) -> f64 {
        let w = self.omega_d;
        match self.kind {
            TrajectoryKind::Sm => -self.radius() * (w * t).cos(),
            TrajectoryKind::Sa => {
                let k = self.sa_strength();
                let arg = (k * (w * t).cos() / (1.0 + k * k).sqrt()).clamp(-1.0, 1.0);
                -(self.v / w) * arg.asin()
            }
            TrajectoryKind::Aua => {
                let a = self.accel;
                let v2a = self.v * self.v / a;
                let (n, s) = self.aua_segment(t);
                let hyper = (1.0 + (a * s / self.v).powi(2)).sqrt();
                if n.rem_euclid(2) == 0 {
                    v2a * hyper
                } else {
                    v2a * (2.0 * self.aua_cosh_quarter() - hyper)
                }
            }
        }
    }

    fn aua_cosh_quarter(&self) -> f64 {
        (1.0 + self.aua_quarter_sinh().powi(2)).sqrt()
    }

    /// One-period mean of the raw position.
    pub fn center_offset(&self) -> f64 {
        match self.kind {
            TrajectoryKind::Sm | TrajectoryKind::Sa => 0.0,
            TrajectoryKind::Aua => self.v * self.v / self.accel * self.aua_cosh_quarter(),
        }
    }

    /// Boundary position at coordinate time `t`, centered to zero period mean.
    pub fn position(&self, t: f64) -> f64 {
        self.position_raw(t) - self.center_offset()
    }

    /// Coordinate velocity `dz/dt`.
    pub fn velocity(&self, t: f64) -> f64 {
        let w = self.omega_d;
        match self.kind {
            TrajectoryKind::Sm => self.radius() * w * (w * t).sin(),
            TrajectoryKind::Sa => {
                let k = self.sa_strength();
                let s = (w * t).sin();
                self.v * k * s / (1.0 + k * k * s * s).sqrt()
            }
            TrajectoryKind::Aua => {
                let a = self.accel;
                let (n, s) = self.aua_segment(t);
                let u = a * s / self.v;
                let sign = if n.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                sign * self.v * u / (1.0 + u * u).sqrt()
            }
        }
    }

    /// Signed proper acceleration at coordinate time `t`; the sign follows the
    /// spatial component of the 4-acceleration.
    pub fn directional_acceleration(&self, t: f64) -> f64 {
        let w = self.omega_d;
        match self.kind {
            TrajectoryKind::Sm => {
                let b = self.beta();
                let (s, c) = (w * t).sin_cos();
                self.accel * c / (1.0 - b * b * s * s).powf(1.5)
            }
            TrajectoryKind::Sa => 2.0 * self.accel * (w * t).cos(),
            TrajectoryKind::Aua => {
                let (n, _) = self.aua_segment(t);
                if n.rem_euclid(2) == 0 {
                    self.accel
                } else {
                    -self.accel
                }
            }
        }
    }

    pub fn proper_acceleration(&self, t: f64) -> f64 {
        self.directional_acceleration(t).abs()
    }

    /// Proper time elapsed since `t = 0`.
    pub fn proper_time(&self, t: f64) -> Result<f64> {
        let w = self.omega_d;
        match self.kind {
            TrajectoryKind::Sm => Ok(ellip_e(w * t, self.beta().powi(2))? / w),
            TrajectoryKind::Sa => Ok(ellip_f(w * t, -self.sa_strength().powi(2))? / w),
            TrajectoryKind::Aua => {
                let (n, s) = self.aua_segment(t);
                let a = self.accel;
                let local = self.v / a * (a * s / self.v).asinh();
                Ok(n as f64 * 0.5 * self.proper_period()? + local)
            }
        }
    }

    /// Proper time per coordinate period.
    pub fn proper_period(&self) -> Result<f64> {
        let w = self.omega_d;
        match self.kind {
            TrajectoryKind::Sm => Ok(ellip_e(2.0 * PI, self.beta().powi(2))? / w),
            TrajectoryKind::Sa => Ok(ellip_f(2.0 * PI, -self.sa_strength().powi(2))? / w),
            TrajectoryKind::Aua => Ok(4.0 * self.v / self.accel * self.aua_quarter_sinh().asinh()),
        }
    }

    /// Inverse of [`proper_time`](Self::proper_time): coordinate time at proper time `tau`.
    ///
    /// AUA uses the time component of its piecewise-hyperbolic worldline
    /// directly; SM and SA invert the monotone proper-time map numerically.
    pub fn coordinate_time(&self, tau: f64) -> Result<f64> {
        let tau_p = self.proper_period()?;
        match self.kind {
            TrajectoryKind::Aua => {
                let n = (2.0 * tau / tau_p + 0.5).floor();
                let a = self.accel;
                let local = tau - n * 0.5 * tau_p;
                Ok(self.v / a * ((a / self.v * local).sinh() + 2.0 * n * self.aua_quarter_sinh()))
            }
            _ => {
                // dτ/dt ≤ 1, so t ≥ τ; one extra period always brackets.
                let periods = (tau / tau_p).floor();
                let t0 = periods * self.period();
                let t1 = t0 + self.period();
                let opts = RootOptions {
                    rel_tol: 1e-15,
                    abs_tol: 1e-30,
                    ..Default::default()
                };
                find_root_with(
                    |t| self.proper_time(t).unwrap_or(f64::NAN) - tau,
                    t0,
                    t1,
                    &opts,
                )
            }
        }
    }

    pub fn sample(&self, t: f64) -> Result<WorldlineSample> {
        Ok(WorldlineSample {
            t,
            tau: self.proper_time(t)?,
            z: self.position(t),
            alpha_dir: self.directional_acceleration(t),
        })
    }

    /// Proper acceleration averaged over proper time across one period.
    pub fn average_acceleration(&self) -> Result<f64> {
        average_acceleration(self.kind, self.accel, self.omega_d, self.v)
    }

    /// `ā · (2π/ω_d) · 5/(2c)`; values of order one or below mean strongly
    /// relativistic motion when `v = 0.4 c`.
    pub fn relativity_estimator(&self) -> Result<f64> {
        Ok(relativity_estimator(self.average_acceleration()?, self.omega_d))
    }
}

/// Closed-form period-averaged proper acceleration.
pub fn average_acceleration(kind: TrajectoryKind, accel: f64, omega_d: f64, v: f64) -> Result<f64> {
    let vw = v * omega_d;
    match kind {
        TrajectoryKind::Sm => {
            let beta = accel / vw;
            if !(beta <= SM_MAX_BETA) {
                return Err(Error::Constraint(format!(
                    "SM requires R ω_d < v, got R ω_d / v = {beta}"
                )));
            }
            Ok(vw * beta.atanh() / ellip_e_complete(beta * beta)?)
        }
        TrajectoryKind::Sa => {
            let k = 2.0 * accel / vw;
            Ok(vw * k.asinh() / ellip_k(-k * k)?)
        }
        TrajectoryKind::Aua => Ok(accel),
    }
}

pub fn relativity_estimator(abar: f64, omega_d: f64) -> f64 {
    abar * (2.0 * PI / omega_d) * (5.0 / (2.0 * C))
}

/// Finds `A` with `average_acceleration(kind, A, ω_d, v) = abar_target`.
///
/// The average is monotonically increasing in `A` at fixed frequency, so a
/// bracket is grown geometrically and refined with Brent's method.
pub fn solve_acceleration_parameter(
    kind: TrajectoryKind,
    abar_target: f64,
    omega_d: f64,
    v: f64,
) -> Result<f64> {
    if !(abar_target > 0.0) || !abar_target.is_finite() {
        return Err(Error::param("abar_target", format!("must be positive, got {abar_target}")));
    }
    if !(omega_d > 0.0) || !(v > 0.0) {
        return Err(Error::param("omega_d", "frequency and speed must be positive"));
    }
    match kind {
        TrajectoryKind::Aua => Ok(abar_target),
        TrajectoryKind::Sm => {
            let vw = v * omega_d;
            let reach = average_acceleration(kind, SM_MAX_BETA * vw, omega_d, v)?;
            if abar_target > reach {
                return Err(Error::Infeasible(format!(
                    "SM cannot reach ā = {abar_target:e} below the subluminal bound (max {reach:e})"
                )));
            }
            let beta = find_root(
                |b| average_acceleration(kind, b * vw, omega_d, v).unwrap_or(f64::NAN) / abar_target - 1.0,
                f64::MIN_POSITIVE,
                SM_MAX_BETA,
                1e-14,
            )?;
            Ok(beta * vw)
        }
        TrajectoryKind::Sa => {
            let f = |a: f64| average_acceleration(kind, a, omega_d, v).unwrap_or(f64::NAN) / abar_target - 1.0;
            let (mut lo, mut hi) = (abar_target, abar_target);
            for _ in 0..200 {
                if f(lo) <= 0.0 {
                    break;
                }
                lo *= 0.5;
            }
            for _ in 0..200 {
                if f(hi) >= 0.0 {
                    break;
                }
                hi *= 2.0;
            }
            if !(f(lo) <= 0.0 && f(hi) >= 0.0) {
                return Err(Error::Infeasible(format!("SA target ā = {abar_target:e} not bracketed")));
            }
            find_root(f, lo, hi, 1e-14)
        }
    }
}

/// Number of local maxima of `|α(t)|` over one period sampled on `points` points.
pub fn count_acceleration_peaks(p: &TrajectoryParams, points: usize) -> usize {
    let dt = p.period() / points as f64;
    let vals: Vec<f64> = (0..points).map(|i| p.proper_acceleration(i as f64 * dt)).collect();
    (0..points)
        .filter(|&i| {
            let prev = vals[(i + points - 1) % points];
            let next = vals[(i + 1) % points];
            vals[i] > prev && vals[i] >= next
        })
        .count()
}
