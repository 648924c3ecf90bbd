//! Physical constants (SI, CODATA exact values where defined).

use std::f64::consts::PI;

/// Speed of light in vacuum [m/s].
pub const C: f64 = 2.997_924_58e8;

/// Planck constant [J s].
pub const H: f64 = 6.626_070_15e-34;

/// Reduced Planck constant [J s].
pub const HBAR: f64 = H / (2.0 * PI);

/// Boltzmann constant [J/K].
pub const K_B: f64 = 1.380_649e-23;

/// Magnetic flux quantum h/2e [Wb].
pub const PHI0: f64 = 2.067_833_848e-15;

/// Reduced flux quantum φ₀/2π [Wb].
pub const PHI0_REDUCED: f64 = PHI0 / (2.0 * PI);

/// Converts a linear frequency [Hz] to angular frequency [rad/s].
#[inline]
pub fn angular(hz: f64) -> f64 {
    2.0 * PI * hz
}

/// Converts an angular frequency [rad/s] to a linear frequency [Hz].
#[inline]
pub fn linear(omega: f64) -> f64 {
    omega / (2.0 * PI)
}
