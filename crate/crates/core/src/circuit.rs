//! SQUID-terminated coplanar waveguide.
//!
//! The SQUID Josephson energy `E_J(t) = E_J⁰ + δE_J(t)` sets an effective
//! boundary length `L_eff = (φ₀/2π)² / (L₀ E_J(t))`. To first order a
//! modulation `δE_J` moves the effective boundary by `z = L_eff⁰ δE_J / E_J⁰`,
//! which is how a prescribed worldline is turned into a drive.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::constants::{angular, C, HBAR, K_B, PHI0, PHI0_REDUCED};
use crate::error::{Error, Result};
use crate::numerics::{fourier_decompose, fourier_from_samples, unit_circle, DEFAULT_SAMPLES};
use crate::scattering::ThermalInput;
use crate::trajectories::{TrajectoryKind, TrajectoryParams};

/// Default number of retained drive harmonics.
pub const DEFAULT_N_MAX: usize = 3;

/// Hard bound on `max |δE_J| / E_J⁰` for a synthesized drive.
pub const MAX_MODULATION_DEPTH: f64 = 0.5;

/// Per-harmonic `|a_n + i b_n| / a₀` above which the first-order treatment is rejected.
pub const HARMONIC_RATIO_FAIL: f64 = 0.5;
pub const HARMONIC_RATIO_WARN: f64 = 0.25;

/// Fundamental modulation depth `|a₁ + i b₁| / E_J⁰` used in the reference setups.
pub const REFERENCE_DEPTH: f64 = 0.25;

/// Circuit constants of the waveguide and the terminating SQUID.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CircuitParams {
    /// SQUID capacitance [F].
    pub c_j: f64,
    /// Critical current [A].
    pub i_c: f64,
    /// Characteristic impedance [Ω].
    pub z0: f64,
    /// Phase velocity [m/s].
    pub v: f64,
    /// SQUID plasma angular frequency [rad/s].
    pub omega_s: f64,
    /// Static bias `E_J⁰ / E_J`.
    pub ej0_ratio: f64,
}

impl Default for CircuitParams {
    /// Reference device: 1.25 µA, 90 fF, 55 Ω, v = 0.4c, ω_s/2π = 37.3 GHz, E_J⁰ = 1.3 E_J.
    fn default() -> Self {
        CircuitParams {
            c_j: 90e-15,
            i_c: 1.25e-6,
            z0: 55.0,
            v: 0.4 * C,
            omega_s: angular(37.3e9),
            ej0_ratio: 1.3,
        }
    }
}

impl CircuitParams {
    pub fn validate(&self) -> Result<()> {
        for (name, val) in [
            ("C_J", self.c_j),
            ("I_c", self.i_c),
            ("Z0", self.z0),
            ("v", self.v),
            ("omega_s", self.omega_s),
        ] {
            if !(val > 0.0) || !val.is_finite() {
                return Err(Error::param(name, format!("must be positive and finite, got {val}")));
            }
        }
        if self.v > C {
            return Err(Error::param("v", "cannot exceed c"));
        }
        if !(self.ej0_ratio > 0.0 && self.ej0_ratio <= 2.0) {
            return Err(Error::param(
                "EJ0_ratio",
                format!("must lie in (0, 2], got {}", self.ej0_ratio),
            ));
        }
        Ok(())
    }

    pub fn with_ej0_ratio(&self, ratio: f64) -> Self {
        CircuitParams {
            ej0_ratio: ratio,
            ..*self
        }
    }

    /// Maximum Josephson energy per junction pair, `E_J = I_c φ₀/2π` [J].
    pub fn ej(&self) -> f64 {
        self.i_c * PHI0_REDUCED
    }

    /// Static Josephson energy `E_J⁰` [J].
    pub fn ej0(&self) -> f64 {
        self.ej0_ratio * self.ej()
    }

    /// Inductance per unit length [H/m].
    pub fn l0(&self) -> f64 {
        self.z0 / self.v
    }

    /// Capacitance per unit length [F/m].
    pub fn c0(&self) -> f64 {
        1.0 / (self.z0 * self.v)
    }

    pub fn effective_length(&self) -> f64 {
        effective_length(self)
    }

    /// Bias ratio that makes the fundamental of `p` a modulation of
    /// `depth · E_J⁰`, i.e. `|ã₁ + i b̃₁| = depth · L_eff⁰`.
    pub fn bias_for_depth(&self, p: &TrajectoryParams, depth: f64) -> Result<f64> {
        if !(depth > 0.0) {
            return Err(Error::param("depth", "must be positive"));
        }
        let series = fourier_decompose(|t| p.position(t), p.omega_d(), 1, DEFAULT_SAMPLES)?;
        let fundamental = series.magnitude(1);
        if !(fundamental > 0.0) {
            return Err(Error::Realizability("trajectory has no fundamental component".into()));
        }
        let leff = fundamental / depth;
        Ok(PHI0_REDUCED * PHI0_REDUCED / (self.l0() * self.ej() * leff))
    }
}

/// `L_eff⁰ = (φ₀/2π)² / (L₀ E_J⁰)` [m].
pub fn effective_length(c: &CircuitParams) -> f64 {
    PHI0_REDUCED * PHI0_REDUCED / (c.l0() * c.ej0())
}

/// Fourier representation of the Josephson energy
/// `E_J(t) = a₀/2 + Σ a_n cos(n ω_d t) + b_n sin(n ω_d t)`, all in joules.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DriveSpectrum {
    a0: f64,
    a: Vec<f64>,
    b: Vec<f64>,
    omega_d: f64,
}

impl DriveSpectrum {
    pub fn new(a0: f64, a: Vec<f64>, b: Vec<f64>, omega_d: f64) -> Result<Self> {
        if !(a0 > 0.0) || !a0.is_finite() {
            return Err(Error::param("a0", format!("must be positive, got {a0}")));
        }
        if a.len() != b.len() {
            return Err(Error::param("b", "cosine and sine lists differ in length"));
        }
        if !(omega_d > 0.0) || !omega_d.is_finite() {
            return Err(Error::param("omega_d", "must be positive"));
        }
        let d = DriveSpectrum { a0, a, b, omega_d };
        for n in 1..=d.n_max() {
            let ratio = d.magnitude(n) / a0;
            if !ratio.is_finite() || ratio > HARMONIC_RATIO_FAIL {
                return Err(Error::Realizability(format!(
                    "harmonic {n} has |a_n + i b_n| / a0 = {ratio:.4} > {HARMONIC_RATIO_FAIL}"
                )));
            }
        }
        Ok(d)
    }

    /// Static bias only.
    pub fn unmodulated(c: &CircuitParams, omega_d: f64) -> Result<Self> {
        Self::new(2.0 * c.ej0(), vec![], vec![], omega_d)
    }

    /// Single cosine tone `a₁ = depth · E_J⁰` on top of the circuit's bias.
    pub fn single_tone(c: &CircuitParams, omega_d: f64, depth: f64) -> Result<Self> {
        Self::new(2.0 * c.ej0(), vec![depth * c.ej0()], vec![0.0], omega_d)
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn ej0(&self) -> f64 {
        0.5 * self.a0
    }

    pub fn omega_d(&self) -> f64 {
        self.omega_d
    }

    pub fn n_max(&self) -> usize {
        self.a.len()
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.a
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.b
    }

    /// `|a_n + i b_n|`, harmonic index from 1.
    pub fn magnitude(&self, n: usize) -> f64 {
        self.a[n - 1].hypot(self.b[n - 1])
    }

    /// `|a_n + i b_n|²`.
    pub fn harmonic_power(&self, n: usize) -> f64 {
        let (a, b) = (self.a[n - 1], self.b[n - 1]);
        a * a + b * b
    }

    pub fn total_harmonic_power(&self) -> f64 {
        (1..=self.n_max()).map(|n| self.harmonic_power(n)).sum()
    }

    pub fn delta_ej(&self, t: f64) -> f64 {
        let mut v = 0.0;
        for (i, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            let (s, c) = ((i + 1) as f64 * self.omega_d * t).sin_cos();
            v += a * c + b * s;
        }
        v
    }

    pub fn ej_at(&self, t: f64) -> f64 {
        self.ej0() + self.delta_ej(t)
    }

    /// `δE_J(t_k)` at `t_k = k·T/samples`.
    fn grid_deltas(&self, samples: usize) -> impl Iterator<Item = f64> + '_ {
        let circle = unit_circle(samples);
        (0..samples).map(move |k| {
            let mut v = 0.0;
            for (i, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
                let (s, c) = circle[((i + 1) * k) % samples];
                v += a * c + b * s;
            }
            v
        })
    }

    /// Minimum and maximum of `E_J(t)` over one period on a uniform grid.
    pub fn extrema(&self, samples: usize) -> (f64, f64) {
        let ej0 = self.ej0();
        self.grid_deltas(samples)
            .map(|d| ej0 + d)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
    }

    /// `max |δE_J| / E_J⁰` over one period.
    pub fn modulation_depth(&self, samples: usize) -> f64 {
        self.grid_deltas(samples).map(f64::abs).fold(0.0, f64::max) / self.ej0()
    }

    /// Position coefficients via the printed map `ã_m = 4/(a₀² L₀) (φ₀/2π)² a_m`.
    pub fn position_coefficients(&self, c: &CircuitParams) -> (Vec<f64>, Vec<f64>) {
        let factor = 4.0 / (self.a0 * self.a0 * c.l0()) * PHI0_REDUCED * PHI0_REDUCED;
        (
            self.a.iter().map(|a| factor * a).collect(),
            self.b.iter().map(|b| factor * b).collect(),
        )
    }

    fn check_realizable(&self, c: &CircuitParams) -> Result<()> {
        let (lo, hi) = self.extrema(DEFAULT_SAMPLES);
        let ej0 = self.ej0();
        let depth = (hi - ej0).max(ej0 - lo) / ej0;
        if depth > MAX_MODULATION_DEPTH {
            return Err(Error::Realizability(format!(
                "max |δE_J|/E_J⁰ = {depth:.4} exceeds {MAX_MODULATION_DEPTH}"
            )));
        }
        if lo <= 0.0 {
            return Err(Error::Realizability(format!("E_J(t) drops to {lo:e} J")));
        }
        if hi > 2.0 * c.ej() {
            return Err(Error::Realizability(format!(
                "E_J(t) reaches {:.4}·E_J, above the SQUID maximum 2·E_J",
                hi / c.ej()
            )));
        }
        Ok(())
    }
}

/// Fourier coefficients of `E_J(t)` that move the effective boundary along
/// the centered worldline of `p`.
pub fn trajectory_to_drive(
    p: &TrajectoryParams,
    c: &CircuitParams,
    n_max: usize,
) -> Result<DriveSpectrum> {
    c.validate()?;
    if (p.v() - c.v).abs() > 1e-12 * c.v {
        return Err(Error::param(
            "v",
            format!("trajectory speed {} differs from circuit speed {}", p.v(), c.v),
        ));
    }
    let samples = DEFAULT_SAMPLES.max(8 * n_max);
    let dt = p.period() / samples as f64;
    let z: Vec<f64> = (0..samples).map(|k| p.position(k as f64 * dt)).collect();
    let series = fourier_from_samples(&z, p.omega_d(), n_max)?;
    let leff = effective_length(c);
    let scale = c.ej0() / leff;

    // samples of the exact worldline bound the applied modulation before truncation
    let peak = z.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if peak / leff > MAX_MODULATION_DEPTH {
        return Err(Error::Realizability(format!(
            "trajectory amplitude {peak:.4e} m is {:.3} of L_eff⁰ = {leff:.4e} m (limit {MAX_MODULATION_DEPTH})",
            peak / leff
        )));
    }

    let drive = DriveSpectrum::new(
        2.0 * c.ej0(),
        series.a.iter().map(|a| scale * a).collect(),
        series.b.iter().map(|b| scale * b).collect(),
        p.omega_d(),
    )?;
    drive.check_realizable(c)?;
    Ok(drive)
}

/// External flux `φ_ext(t) = (φ₀/π) arccos(E_J(t) / 2E_J)` realizing the drive [Wb].
pub fn external_flux(d: &DriveSpectrum, c: &CircuitParams, t: f64) -> Result<f64> {
    let ratio = d.ej_at(t) / (2.0 * c.ej());
    let slack = 1e-12;
    if !(ratio >= -slack && ratio <= 1.0 + slack) {
        return Err(Error::FluxDomain { t, ratio });
    }
    Ok(PHI0 / PI * ratio.clamp(0.0, 1.0).acos())
}

/// Josephson energy produced by an external flux, `2E_J |cos(π φ/φ₀)|`.
pub fn josephson_energy(c: &CircuitParams, flux: f64) -> f64 {
    2.0 * c.ej() * (PI * flux / PHI0).cos().abs()
}

/// `(t, φ_ext)` samples over `periods` drive periods, `samples` per period.
pub fn flux_waveform(
    d: &DriveSpectrum,
    c: &CircuitParams,
    samples: usize,
    periods: usize,
) -> Result<Vec<(f64, f64)>> {
    if samples == 0 || periods == 0 {
        return Err(Error::param("samples", "sample and period counts must be positive"));
    }
    let dt = 2.0 * PI / d.omega_d() / samples as f64;
    (0..samples * periods)
        .map(|k| {
            let t = k as f64 * dt;
            external_flux(d, c, t).map(|phi| (t, phi))
        })
        .collect()
}

/// Two-column CSV with a `t,phi_ext` header.
pub fn write_flux_csv<W: Write>(mut w: W, rows: &[(f64, f64)]) -> Result<()> {
    writeln!(w, "t,phi_ext")?;
    for (t, phi) in rows {
        writeln!(w, "{t:.16e},{phi:.16e}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckStatus {
    Pass,
    Warn,
    Fail,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Warn => "warn",
            CheckStatus::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidityReport {
    pub checks: Vec<Check>,
}

impl ValidityReport {
    fn push(&mut self, name: &'static str, status: CheckStatus, detail: String) {
        self.checks.push(Check {
            name,
            status,
            detail,
        });
    }

    /// True when no check failed (warnings allowed).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn status(&self, name: &str) -> Option<CheckStatus> {
        self.checks.iter().find(|c| c.name == name).map(|c| c.status)
    }

    pub fn worst(&self) -> CheckStatus {
        self.checks
            .iter()
            .map(|c| c.status)
            .max()
            .unwrap_or(CheckStatus::Pass)
    }

    pub fn issues(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status != CheckStatus::Pass)
    }
}

impl fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {}: {}", c.status, c.name, c.detail)?;
        }
        Ok(())
    }
}

/// Bias floor `E_J⁰/E_J` below which the SQUID is considered unusable.
pub const EJ0_RATIO_MIN: f64 = 0.1;
/// `k_ω L_eff⁰` above which the small-length expansion is flagged.
pub const KL_WARN: f64 = 0.2;
/// `k_B T / ħ ω_d` above which neglected thermal up-conversion terms are flagged.
pub const THERMAL_WARN: f64 = 0.2;
/// Fraction of harmonic power above the plasma frequency that is flagged.
pub const PLASMA_HARMONIC_WARN: f64 = 1e-4;

/// Physical validity of a drive for the given worldline, circuit, probe
/// frequencies [rad/s] and bath.
pub fn validate(
    d: &DriveSpectrum,
    p: &TrajectoryParams,
    c: &CircuitParams,
    probes: &[f64],
    thermal: &ThermalInput,
) -> ValidityReport {
    DriveAudit::new(d.clone(), *p, *c).report(probes, thermal)
}

/// Sampled properties of a drive that do not depend on the probe frequency or
/// the bath, so that one drive can be checked against many probes cheaply.
#[derive(Debug, Clone)]
pub struct DriveAudit {
    d: DriveSpectrum,
    p: TrajectoryParams,
    c: CircuitParams,
    max_speed: f64,
    ej_range: (f64, f64),
}

impl DriveAudit {
    pub fn new(d: DriveSpectrum, p: TrajectoryParams, c: CircuitParams) -> Self {
        let max_speed = match p.kind() {
            TrajectoryKind::Sm => p.beta() * p.v(),
            _ => {
                let n = DEFAULT_SAMPLES;
                (0..n)
                    .map(|k| p.velocity(p.period() * k as f64 / n as f64).abs())
                    .fold(0.0, f64::max)
            }
        };
        let ej_range = d.extrema(DEFAULT_SAMPLES);
        Self { d, p, c, max_speed, ej_range }
    }

    pub fn drive(&self) -> &DriveSpectrum {
        &self.d
    }

    pub fn params(&self) -> &TrajectoryParams {
        &self.p
    }

    pub fn circuit(&self) -> &CircuitParams {
        &self.c
    }

    pub fn report(&self, probes: &[f64], thermal: &ThermalInput) -> ValidityReport {
        let (d, p, c) = (&self.d, &self.p, &self.c);
        let mut r = ValidityReport::default();
        let w = p.omega_d();

        // (i) subluminal wall
        match p.kind() {
            TrajectoryKind::Sm => {
                let beta = p.beta();
                let status = if beta < 1.0 { CheckStatus::Pass } else { CheckStatus::Fail };
                r.push("subluminal", status, format!("R ω_d / v = {beta:.6}"));
            }
            _ => {
                let ratio = self.max_speed / p.v();
                let status = if ratio < 1.0 { CheckStatus::Pass } else { CheckStatus::Fail };
                r.push("subluminal", status, format!("max |dz/dt| / v = {ratio:.6}"));
            }
        }

        // (ii) static bias
        let ratio = d.ej0() / c.ej();
        let status = if ratio > EJ0_RATIO_MIN { CheckStatus::Pass } else { CheckStatus::Fail };
        r.push("bias", status, format!("E_J⁰/E_J = {ratio:.4} (min {EJ0_RATIO_MIN})"));

        // (iii) plasma frequency
        let max_probe = probes.iter().cloned().fold(0.0, f64::max);
        let mut status = CheckStatus::Pass;
        let mut detail = format!(
            "ω_d/ω_s = {:.4}, max probe ω/ω_s = {:.4}",
            w / c.omega_s,
            max_probe / c.omega_s
        );
        if w >= c.omega_s || max_probe >= c.omega_s {
            status = CheckStatus::Fail;
        } else {
            let total = d.total_harmonic_power();
            let above: f64 = (1..=d.n_max())
                .filter(|&n| n as f64 * w >= c.omega_s)
                .map(|n| d.harmonic_power(n))
                .sum();
            if total > 0.0 && above / total > PLASMA_HARMONIC_WARN {
                status = CheckStatus::Warn;
                detail.push_str(&format!(
                    "; {:.3e} of harmonic power lies above ω_s",
                    above / total
                ));
            }
        }
        r.push("plasma", status, detail);

        // (iv) short effective length
        let leff = effective_length(&c.with_ej0_ratio(ratio));
        let probe = if probes.is_empty() { w } else { max_probe };
        let kl = probe / c.v * leff;
        let status = if kl > KL_WARN {
            CheckStatus::Warn
        } else {
            CheckStatus::Pass
        };
        r.push("short-length", status, format!("k_ω L_eff⁰ = {kl:.4} at ω = {probe:.4e} rad/s"));

        // (v) perturbative harmonics
        let worst = (1..=d.n_max())
            .map(|n| d.magnitude(n) / d.a0())
            .fold(0.0, f64::max);
        let status = if worst > HARMONIC_RATIO_FAIL {
            CheckStatus::Fail
        } else if worst > HARMONIC_RATIO_WARN {
            CheckStatus::Warn
        } else {
            CheckStatus::Pass
        };
        r.push("perturbative", status, format!("max |a_n + i b_n| / a₀ = {worst:.4}"));

        // realizability of E_J(t) through the SQUID flux response
        let (lo, hi) = self.ej_range;
        let status = if lo > 0.0 && hi <= 2.0 * c.ej() {
            CheckStatus::Pass
        } else {
            CheckStatus::Fail
        };
        r.push(
            "realizable",
            status,
            format!("E_J(t)/E_J ∈ [{:.4}, {:.4}]", lo / c.ej(), hi / c.ej()),
        );

        // (vi) cold bath
        let x = K_B * thermal.temperature() / (HBAR * w);
        let status = if x > THERMAL_WARN { CheckStatus::Warn } else { CheckStatus::Pass };
        r.push("cold-bath", status, format!("k_B T / ħω_d = {x:.4}"));

        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::angular;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn derived_constants() {
        let c = CircuitParams::default();
        assert!(rel(c.ej(), 1.25e-6 * PHI0 / (2.0 * PI)) < 1e-15);
        assert!(rel(1.0 / (c.l0() * c.c0()).sqrt(), c.v) < 1e-15);
        assert!(rel((c.l0() / c.c0()).sqrt(), c.z0) < 1e-15);
    }

    #[test]
    fn reference_effective_length() {
        let c = CircuitParams::default();
        assert!(rel(effective_length(&c), 0.44e-3) < 0.01);
        let c3 = c.with_ej0_ratio(0.1002);
        assert!(rel(effective_length(&c3), 0.44157e-3 * 1.3 / 0.1002) < 1e-4);
        assert!(rel(effective_length(&c3), 5.73e-3) < 0.01);
    }

    #[test]
    fn doubling_bias_halves_length() {
        let c = CircuitParams::default().with_ej0_ratio(0.6);
        let l1 = effective_length(&c);
        let l2 = effective_length(&c.with_ej0_ratio(1.2));
        assert!(rel(l2, 0.5 * l1) < 1e-15);
    }

    #[test]
    fn length_scales_inversely_with_critical_current() {
        let c = CircuitParams::default();
        let kappa = 3.7;
        let scaled = CircuitParams {
            i_c: kappa * c.i_c,
            ..c
        };
        assert!(rel(effective_length(&scaled), effective_length(&c) / kappa) < 1e-14);
    }

    #[test]
    fn flux_limits() {
        let c = CircuitParams::default();
        let full = DriveSpectrum::new(4.0 * c.ej(), vec![], vec![], 1e11).unwrap();
        assert_eq!(external_flux(&full, &c, 0.0).unwrap(), 0.0);
        let bias = DriveSpectrum::unmodulated(&c, 1e11).unwrap();
        let phi = external_flux(&bias, &c, 0.0).unwrap();
        assert!(rel(phi / PHI0, 0.65f64.acos() / PI) < 1e-14);
        assert!((phi / PHI0 - 0.27477).abs() < 1e-5);
        // E_J(t) → 0 gives half a flux quantum
        let tiny = DriveSpectrum::new(1e-300, vec![], vec![], 1e11).unwrap();
        assert!(rel(external_flux(&tiny, &c, 0.0).unwrap(), 0.5 * PHI0) < 1e-12);
    }

    #[test]
    fn flux_domain_violation_reports_time() {
        let c = CircuitParams::default().with_ej0_ratio(1.9);
        let d = DriveSpectrum::single_tone(&c, 1e11, 0.25).unwrap();
        match external_flux(&d, &c, 0.0) {
            Err(Error::FluxDomain { t, ratio }) => {
                assert_eq!(t, 0.0);
                assert!(ratio > 1.0);
            }
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn zero_trajectory_gives_dc_only() {
        let c = CircuitParams::default();
        let d = DriveSpectrum::unmodulated(&c, angular(18e9)).unwrap();
        assert_eq!(d.n_max(), 0);
        assert_eq!(d.a0(), 2.0 * c.ej0());
    }

    #[test]
    fn oversized_harmonic_rejected() {
        assert!(DriveSpectrum::new(1.0, vec![0.6], vec![0.0], 1.0).is_err());
        assert!(DriveSpectrum::new(1.0, vec![0.1], vec![], 1.0).is_err());
    }

    #[test]
    fn bias_floor_check() {
        let c = CircuitParams::default().with_ej0_ratio(0.05);
        let w = angular(14.6e9);
        let p = TrajectoryParams::new(TrajectoryKind::Aua, 1e16, w, c.v).unwrap();
        let d = DriveSpectrum::single_tone(&c, w, 0.1).unwrap();
        let r = validate(&d, &p, &c, &[0.5 * w], &ThermalInput::new(0.0).unwrap());
        assert_eq!(r.status("bias"), Some(CheckStatus::Fail));
    }

    #[test]
    fn forty_gigahertz_amplitude_bound() {
        let c = CircuitParams::default();
        let bound = c.v / angular(40e9);
        assert!(rel(bound, 0.4775e-3) < 0.01);
    }

    #[test]
    fn flux_csv_format() {
        let mut out = Vec::new();
        write_flux_csv(&mut out, &[(0.0, 1.5e-16), (1e-12, 2.0e-16)]).unwrap();
        let s = String::from_utf8(out).unwrap();
        let mut lines = s.lines();
        assert_eq!(lines.next(), Some("t,phi_ext"));
        assert_eq!(lines.next(), Some("0.0000000000000000e0,1.5000000000000000e-16"));
        assert_eq!(s.lines().count(), 3);
    }
}
