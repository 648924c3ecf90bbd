//! First-order input-output scattering off the driven SQUID boundary.
//!
//! At zeroth order the boundary is a mirror at distance `L_eff⁰` and
//! reflects with a pure phase `R(ω)`. Each drive harmonic `n` couples the
//! output at `ω` to inputs at `ω - nω_d` (down-conversion), `nω_d - ω`
//! (pair creation, conjugated input) and `ω + nω_d` (up-conversion).

use num_complex::Complex64;

use crate::circuit::{CircuitParams, DriveSpectrum};
use crate::constants::{HBAR, K_B, PHI0_REDUCED};
use crate::error::{Error, Result};

/// Thermal input field at temperature `T` [K].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThermalInput {
    temperature: f64,
}

impl ThermalInput {
    pub fn new(temperature: f64) -> Result<Self> {
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::param("T", format!("must be >= 0, got {temperature}")));
        }
        Ok(ThermalInput { temperature })
    }

    pub fn vacuum() -> Self {
        ThermalInput { temperature: 0.0 }
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn occupation(&self, omega: f64) -> f64 {
        thermal_occupation(omega, self.temperature)
    }
}

/// Bose-Einstein occupation `1 / (exp(ħω / k_B T) - 1)`; zero at `T = 0`.
pub fn thermal_occupation(omega: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    1.0 / (HBAR * omega / (K_B * temperature)).exp_m1()
}

/// `x · n̄(x)`, continuous through `x = 0` where it tends to `k_B T / ħ`.
pub fn weighted_occupation(x: f64, temperature: f64) -> f64 {
    if temperature <= 0.0 {
        return 0.0;
    }
    let kt = K_B * temperature / HBAR;
    if x == 0.0 {
        return kt;
    }
    x / (x / kt).exp_m1()
}

/// Zeroth-order reflection `R(ω) = -(1 + i k L) / (1 - i k L)`, `k = ω/v`.
pub fn reflection(omega: f64, leff0: f64, v: f64) -> Complex64 {
    let kl = omega.abs() / v * leff0;
    -Complex64::new(1.0, kl) / Complex64::new(1.0, -kl)
}

/// `P(ω′, ω″) = (2i L_eff⁰ / v) √ω′ √ω″ θ(ω′) θ(ω″)`.
pub fn pair_kernel(w1: f64, w2: f64, leff0: f64, v: f64) -> Complex64 {
    if w1 <= 0.0 || w2 <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    Complex64::new(0.0, 2.0 * leff0 / v * w1.sqrt() * w2.sqrt())
}

/// Effective length implied by the drive's DC term, `(φ₀/2π)² (1/L₀) (2/a₀)`.
pub fn drive_effective_length(d: &DriveSpectrum, c: &CircuitParams) -> f64 {
    PHI0_REDUCED * PHI0_REDUCED / c.l0() * 2.0 / d.a0()
}

/// Which kernel enters the `b_n` part of the up-conversion amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpConversion {
    /// `(a_n/a₀) P - i (b_n/a₀) P`, as printed.
    #[default]
    Literal,
    /// `(a_n/a₀) P - i (b_n/a₀) P*`, following the down-conversion pattern.
    Conjugate,
}

/// Amplitudes multiplying the three inputs coupled by harmonic `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Conversion {
    /// Coefficient of `a_in(ω - nω_d)`.
    pub down: Complex64,
    /// Coefficient of `a_in(nω_d - ω)†`.
    pub conj: Complex64,
    /// Coefficient of `a_in(ω + nω_d)`.
    pub up: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterAmplitudes {
    pub omega: f64,
    pub r: Complex64,
    /// Entry `n - 1` belongs to harmonic `n`.
    pub conv: Vec<Conversion>,
}

impl ScatterAmplitudes {
    /// Σ_n |conj_n|², the vacuum pair-creation photon number at `ω`.
    pub fn pair_creation(&self) -> f64 {
        self.conv.iter().map(|c| c.conj.norm_sqr()).sum()
    }
}

pub fn scatter_amplitudes(omega: f64, d: &DriveSpectrum, c: &CircuitParams) -> ScatterAmplitudes {
    scatter_amplitudes_with(omega, d, c, UpConversion::Literal)
}

pub fn scatter_amplitudes_with(
    omega: f64,
    d: &DriveSpectrum,
    c: &CircuitParams,
    form: UpConversion,
) -> ScatterAmplitudes {
    let leff = drive_effective_length(d, c);
    let v = c.v;
    let k = |w: f64| w.abs() / v;
    let phase = |x: f64| Complex64::from_polar(1.0, x * leff);
    let i = Complex64::i();
    let conv = (1..=d.n_max())
        .map(|n| {
            let an = d.cos_coeffs()[n - 1] / d.a0();
            let bn = d.sin_coeffs()[n - 1] / d.a0();
            let nw = n as f64 * d.omega_d();

            let p_down = pair_kernel(omega, omega - nw, leff, v);
            let down = (an * p_down - i * bn * p_down.conj()) * phase(k(omega) + k(omega - nw));

            let p_conj = pair_kernel(omega, nw - omega, leff, v);
            let conj = (an * p_conj.conj() - i * bn * p_conj) * phase(k(omega) - k(nw - omega));

            let p_up = pair_kernel(omega, omega + nw, leff, v);
            let p_up_b = match form {
                UpConversion::Literal => p_up,
                UpConversion::Conjugate => p_up.conj(),
            };
            let up = (an * p_up - i * bn * p_up_b) * phase(k(omega) + k(omega + nw));

            Conversion { down, conj, up }
        })
        .collect();
    ScatterAmplitudes {
        omega,
        r: reflection(omega, leff, v),
        conv,
    }
}

/// Mean output photon number at `ω` for a thermal input, dropping terms
/// weighted by the occupation at `ω + nω_d`.
pub fn output_spectrum(omega: f64, d: &DriveSpectrum, c: &CircuitParams, th: &ThermalInput) -> f64 {
    let leff = drive_effective_length(d, c);
    let v = c.v;
    let temp = th.temperature();
    let stimulated_in = reflection(omega, leff, v).norm_sqr() * thermal_occupation(omega, temp);
    let prefactor = 4.0 * leff * leff / (v * v * d.a0() * d.a0());
    let mut sum = 0.0;
    for n in 1..=d.n_max() {
        let nw = n as f64 * d.omega_d();
        let gap = (omega - nw).abs();
        let mut term = omega * weighted_occupation(gap, temp);
        if nw > omega {
            term += omega * (nw - omega);
        }
        sum += d.harmonic_power(n) * term;
    }
    stimulated_in + prefactor * sum
}

/// Temperature-like reading `ħω n_out / k_B` [K].
pub fn temperature_estimator(omega: f64, n_out: f64) -> f64 {
    HBAR * omega * n_out / K_B
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::angular;
    use std::f64::consts::PI;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn occupation_values() {
        assert_eq!(thermal_occupation(1e10, 0.0), 0.0);
        let t = 0.05;
        let w = K_B * t * 2f64.ln() / HBAR;
        assert!(rel(thermal_occupation(w, t), 1.0) < 1e-12);
        let n = thermal_occupation(angular(9e9), 0.05);
        let direct = 1.0 / ((HBAR * angular(9e9) / (K_B * 0.05)).exp() - 1.0);
        assert!(rel(n, direct) < 1e-12);
        assert!((n - 1.77e-4).abs() < 0.01e-4);
    }

    #[test]
    fn weighted_occupation_limit() {
        let t = 0.025;
        let lim = K_B * t / HBAR;
        assert_eq!(weighted_occupation(0.0, t), lim);
        assert!(rel(weighted_occupation(1e-3, t), lim) < 1e-9);
        assert_eq!(weighted_occupation(0.0, 0.0), 0.0);
    }

    #[test]
    fn reflection_is_pure_phase() {
        let r0 = reflection(1e-3, 4.4e-4, 1.2e8);
        assert!((r0 + 1.0).norm() < 1e-12);
        for e in 4..12 {
            let r = reflection(angular(10f64.powi(e)), 4.4e-4, 1.2e8);
            assert!((r.norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn reflection_small_length_phase() {
        // R = -exp(2i atan(kL)), so arg R = π + 2kL + O((kL)³)
        let v = 1.2e8;
        let leff = 1e-3;
        let omega = 1e-3 * v / leff;
        let r = reflection(omega, leff, v);
        let arg = r.arg().rem_euclid(2.0 * PI);
        let kl = 1e-3;
        assert!((arg - (PI + 2.0 * kl)).abs() < kl.powi(3));
    }

    #[test]
    fn no_harmonics_means_plain_reflection() {
        let c = CircuitParams::default();
        let d = DriveSpectrum::unmodulated(&c, angular(18e9)).unwrap();
        let s = scatter_amplitudes(angular(5e9), &d, &c);
        assert!(s.conv.is_empty());
        assert!((s.r - reflection(angular(5e9), c.effective_length(), c.v)).norm() < 1e-15);
        assert_eq!(output_spectrum(angular(5e9), &d, &c, &ThermalInput::vacuum()), 0.0);
    }

    #[test]
    fn degenerate_frequency_kills_down_and_conj() {
        let c = CircuitParams::default();
        let w = angular(18e9);
        let d = DriveSpectrum::new(2.0 * c.ej0(), vec![0.2 * c.ej0()], vec![0.1 * c.ej0()], w).unwrap();
        let s = scatter_amplitudes(w, &d, &c);
        assert_eq!(s.conv[0].down.norm(), 0.0);
        assert_eq!(s.conv[0].conj.norm(), 0.0);
        assert!(s.conv[0].up.norm() > 0.0);
    }

    #[test]
    fn heaviside_structure() {
        let c = CircuitParams::default();
        let w = angular(18e9);
        let d = DriveSpectrum::single_tone(&c, w, 0.25).unwrap();
        let below = scatter_amplitudes(0.3 * w, &d, &c);
        assert_eq!(below.conv[0].down.norm(), 0.0);
        assert!(below.conv[0].conj.norm() > 0.0);
        let above = scatter_amplitudes(1.3 * w, &d, &c);
        assert_eq!(above.conv[0].conj.norm(), 0.0);
        assert!(above.conv[0].down.norm() > 0.0);
    }

    #[test]
    fn single_tone_pair_amplitude() {
        let c = CircuitParams::default();
        let w = angular(18e9);
        let d = DriveSpectrum::single_tone(&c, w, 0.25).unwrap();
        let leff = c.effective_length();
        let omega = 0.37 * w;
        let s = scatter_amplitudes(omega, &d, &c);
        let expect = 2.0 * leff / c.v * (1.0 / 8.0) * (omega * (w - omega)).sqrt();
        assert!(rel(s.conv[0].conj.norm(), expect) < 1e-12);
    }

    #[test]
    fn up_conversion_forms_differ_only_with_sine_terms() {
        let c = CircuitParams::default();
        let w = angular(18e9);
        let cos_only = DriveSpectrum::single_tone(&c, w, 0.25).unwrap();
        let a = scatter_amplitudes_with(0.4 * w, &cos_only, &c, UpConversion::Literal);
        let b = scatter_amplitudes_with(0.4 * w, &cos_only, &c, UpConversion::Conjugate);
        assert_eq!(a, b);
        let with_sine = DriveSpectrum::new(2.0 * c.ej0(), vec![0.0], vec![0.2 * c.ej0()], w).unwrap();
        let a = scatter_amplitudes_with(0.4 * w, &with_sine, &c, UpConversion::Literal);
        let b = scatter_amplitudes_with(0.4 * w, &with_sine, &c, UpConversion::Conjugate);
        assert!((a.conv[0].up - b.conv[0].up).norm() > 0.0);
        assert_eq!(a.conv[0].conj, b.conv[0].conj);
        assert_eq!(a.pair_creation(), b.pair_creation());
    }

    #[test]
    fn estimator_is_linear() {
        assert_eq!(temperature_estimator(1e10, 0.0), 0.0);
        let w = angular(9e9);
        let t1 = temperature_estimator(w, 2.69e-3);
        assert!(rel(temperature_estimator(w, 5.38e-3), 2.0 * t1) < 1e-15);
        assert!((t1 - 1.16e-3).abs() < 0.01e-3);
    }

    #[test]
    fn negative_temperature_rejected() {
        assert!(ThermalInput::new(-1.0).is_err());
    }
}
