//! Incomplete and complete elliptic integrals of the first and second kind,
//! in the parameter convention `m = k²`. Negative parameters are supported.
//!
//! The primary route is Carlson's symmetric forms `R_F` and `R_D`, which stay
//! real for any `m` with `1 - m sin²φ > 0`. Arguments beyond `[-π/2, π/2]`
//! are reduced with `F(φ + π, m) = F(φ, m) + 2K(m)` (likewise for `E`).

use std::f64::consts::FRAC_PI_2;
use std::f64::consts::PI;

use crate::error::{Error, Result};

const CARLSON_R: f64 = 1e-16;

/// Carlson's symmetric integral of the first kind
/// `R_F(x,y,z) = ½∫₀^∞ dt / √((t+x)(t+y)(t+z))`.
///
/// Arguments must be non-negative with at most one zero.
pub fn carlson_rf(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || z < 0.0 {
        return Err(Error::domain("carlson_rf", "arguments must be non-negative"));
    }
    let zeros = [x, y, z].iter().filter(|&&v| v == 0.0).count();
    if zeros > 1 {
        return Err(Error::domain("carlson_rf", "at most one argument may be zero"));
    }
    let a0 = (x + y + z) / 3.0;
    let q = (3.0 * CARLSON_R).powf(-1.0 / 6.0)
        * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let (mut xn, mut yn, mut zn, mut an) = (x, y, z, a0);
    let mut pow4 = 1.0;
    while q * pow4 >= an.abs() {
        let (sx, sy, sz) = (xn.sqrt(), yn.sqrt(), zn.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        an = 0.25 * (an + lambda);
        xn = 0.25 * (xn + lambda);
        yn = 0.25 * (yn + lambda);
        zn = 0.25 * (zn + lambda);
        pow4 *= 0.25;
    }
    let dx = (a0 - x) * pow4 / an;
    let dy = (a0 - y) * pow4 / an;
    let dz = -dx - dy;
    let e2 = dx * dy - dz * dz;
    let e3 = dx * dy * dz;
    Ok((1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / an.sqrt())
}

/// Carlson's degenerate integral of the third kind
/// `R_D(x,y,z) = (3/2)∫₀^∞ dt / ((t+z)√((t+x)(t+y)(t+z)))`.
pub fn carlson_rd(x: f64, y: f64, z: f64) -> Result<f64> {
    if x < 0.0 || y < 0.0 || !(z > 0.0) {
        return Err(Error::domain("carlson_rd", "need x, y >= 0 and z > 0"));
    }
    if x == 0.0 && y == 0.0 {
        return Err(Error::domain("carlson_rd", "x and y cannot both be zero"));
    }
    let a0 = (x + y + 3.0 * z) / 5.0;
    let q = (0.25 * CARLSON_R).powf(-1.0 / 6.0)
        * (a0 - x).abs().max((a0 - y).abs()).max((a0 - z).abs());
    let (mut xn, mut yn, mut zn, mut an) = (x, y, z, a0);
    let mut pow4 = 1.0;
    let mut sum = 0.0;
    while q * pow4 >= an.abs() {
        let (sx, sy, sz) = (xn.sqrt(), yn.sqrt(), zn.sqrt());
        let lambda = sx * sy + sy * sz + sz * sx;
        sum += pow4 / (sz * (zn + lambda));
        an = 0.25 * (an + lambda);
        xn = 0.25 * (xn + lambda);
        yn = 0.25 * (yn + lambda);
        zn = 0.25 * (zn + lambda);
        pow4 *= 0.25;
    }
    let dx = (a0 - x) * pow4 / an;
    let dy = (a0 - y) * pow4 / an;
    let dz = -(dx + dy) / 3.0;
    let xy = dx * dy;
    let e2 = xy - 6.0 * dz * dz;
    let e3 = (3.0 * xy - 8.0 * dz * dz) * dz;
    let e4 = 3.0 * (xy - dz * dz) * dz * dz;
    let e5 = xy * dz * dz * dz;
    let series = 1.0 - 3.0 * e2 / 14.0 + e3 / 6.0 + 9.0 * e2 * e2 / 88.0 - 3.0 * e4 / 22.0
        - 9.0 * e2 * e3 / 52.0
        + 3.0 * e5 / 26.0;
    Ok(pow4 * series / (an * an.sqrt()) + 3.0 * sum)
}

/// Complete integral of the first kind `K(m) = F(π/2, m)`, `m < 1`.
pub fn ellip_k(m: f64) -> Result<f64> {
    if !(m < 1.0) {
        return Err(Error::domain("ellip_k", format!("parameter m={m} must be < 1")));
    }
    carlson_rf(0.0, 1.0 - m, 1.0)
}

/// Complete integral of the second kind `E(m) = E(π/2, m)`, `m ≤ 1`.
pub fn ellip_e_complete(m: f64) -> Result<f64> {
    if m > 1.0 || m.is_nan() {
        return Err(Error::domain("ellip_e", format!("parameter m={m} must be <= 1")));
    }
    if m == 1.0 {
        return Ok(1.0);
    }
    let y = 1.0 - m;
    Ok(carlson_rf(0.0, y, 1.0)? - m / 3.0 * carlson_rd(0.0, y, 1.0)?)
}

/// Splits `phi = j·π + psi` with `psi ∈ [-π/2, π/2]`.
fn reduce(phi: f64) -> (f64, f64) {
    let j = (phi / PI).round();
    (j, phi - j * PI)
}

fn f_principal(psi: f64, m: f64) -> Result<f64> {
    let s = psi.sin();
    let c = psi.cos();
    let delta2 = 1.0 - m * s * s;
    if !(delta2 > 0.0) {
        return Err(Error::domain(
            "ellip_f",
            format!("integrand singular: 1 - m sin²φ = {delta2:e} (m={m}, φ={psi})"),
        ));
    }
    if s == 0.0 {
        return Ok(0.0);
    }
    Ok(s * carlson_rf(c * c, delta2, 1.0)?)
}

fn e_principal(psi: f64, m: f64) -> Result<f64> {
    let s = psi.sin();
    let c = psi.cos();
    let delta2 = 1.0 - m * s * s;
    if delta2 < -4.0 * f64::EPSILON {
        return Err(Error::domain(
            "ellip_e",
            format!("integrand imaginary: 1 - m sin²φ = {delta2:e} (m={m}, φ={psi})"),
        ));
    }
    let delta2 = delta2.max(0.0);
    if s == 0.0 {
        return Ok(0.0);
    }
    let cc = c * c;
    if cc == 0.0 && delta2 == 0.0 {
        // φ = ±π/2 with m = 1
        return Ok(s.signum());
    }
    Ok(s * carlson_rf(cc, delta2, 1.0)? - m / 3.0 * s * s * s * carlson_rd(cc, delta2, 1.0)?)
}

/// Incomplete elliptic integral of the first kind
/// `F(φ, m) = ∫₀^φ dθ / √(1 - m sin²θ)`.
pub fn ellip_f(phi: f64, m: f64) -> Result<f64> {
    if !phi.is_finite() || m.is_nan() {
        return Err(Error::domain("ellip_f", "arguments must be finite"));
    }
    let (j, psi) = reduce(phi);
    let principal = f_principal(psi, m)?;
    if j == 0.0 {
        return Ok(principal);
    }
    Ok(2.0 * j * ellip_k(m)? + principal)
}

/// Incomplete elliptic integral of the second kind
/// `E(φ, m) = ∫₀^φ √(1 - m sin²θ) dθ`.
pub fn ellip_e(phi: f64, m: f64) -> Result<f64> {
    if !phi.is_finite() || m.is_nan() {
        return Err(Error::domain("ellip_e", "arguments must be finite"));
    }
    let (j, psi) = reduce(phi);
    let principal = e_principal(psi, m)?;
    if j == 0.0 {
        return Ok(principal);
    }
    Ok(2.0 * j * ellip_e_complete(m)? + principal)
}

/// Imaginary-modulus form of `F(φ, m)` for `m < 0`:
/// `F(φ|-μ) = F(θ|μ/(1+μ)) / √(1+μ)`, `sin θ = √(1+μ) sin φ / √(1+μ sin²φ)`.
///
/// Independent of the direct Carlson route for negative `m`; used to cross-check it.
pub fn ellip_f_imaginary_modulus(phi: f64, m: f64) -> Result<f64> {
    if !(m < 0.0) {
        return Err(Error::domain("ellip_f_imaginary_modulus", "requires m < 0"));
    }
    let mu = -m;
    let m1 = mu / (1.0 + mu);
    let (j, psi) = reduce(phi);
    let theta = transformed_angle(psi, mu);
    let principal = ellip_f(theta, m1)? / (1.0 + mu).sqrt();
    if j == 0.0 {
        return Ok(principal);
    }
    Ok(2.0 * j * ellip_k(m1)? / (1.0 + mu).sqrt() + principal)
}

/// Imaginary-modulus form of `E(φ, m)` for `m < 0`.
pub fn ellip_e_imaginary_modulus(phi: f64, m: f64) -> Result<f64> {
    if !(m < 0.0) {
        return Err(Error::domain("ellip_e_imaginary_modulus", "requires m < 0"));
    }
    let mu = -m;
    let m1 = mu / (1.0 + mu);
    let scale = (1.0 + mu).sqrt();
    let (j, psi) = reduce(phi);
    let theta = transformed_angle(psi, mu);
    let (st, ct) = theta.sin_cos();
    let principal =
        scale * (ellip_e(theta, m1)? - m1 * st * ct / (1.0 - m1 * st * st).sqrt());
    if j == 0.0 {
        return Ok(principal);
    }
    Ok(2.0 * j * scale * ellip_e_complete(m1)? + principal)
}

fn transformed_angle(psi: f64, mu: f64) -> f64 {
    if psi.abs() >= FRAC_PI_2 {
        return FRAC_PI_2.copysign(psi);
    }
    let s = psi.sin();
    let st = ((1.0 + mu).sqrt() * s / (1.0 + mu * s * s).sqrt()).clamp(-1.0, 1.0);
    st.asin()
}
