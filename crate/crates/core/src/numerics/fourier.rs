use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

use log::debug;

use crate::error::{Error, Result};

pub const DEFAULT_SAMPLES: usize = 4096;

/// Truncated Fourier series `a0/2 + Σ a_n cos(nω t) + b_n sin(nω t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSeries {
    pub a0: f64,
    /// Cosine coefficients; index 0 holds n = 1.
    pub a: Vec<f64>,
    /// Sine coefficients; index 0 holds n = 1.
    pub b: Vec<f64>,
    pub omega_d: f64,
    /// Set when the top harmonic carries more than 1% of the harmonic power.
    pub aliasing_warning: bool,
}

impl FourierSeries {
    pub fn n_max(&self) -> usize {
        self.a.len()
    }

    pub fn eval(&self, t: f64) -> f64 {
        let mut v = 0.5 * self.a0;
        for (i, (a, b)) in self.a.iter().zip(&self.b).enumerate() {
            let (s, c) = ((i + 1) as f64 * self.omega_d * t).sin_cos();
            v += a * c + b * s;
        }
        v
    }

    /// `|a_n + i b_n|` for harmonic `n ≥ 1`.
    pub fn magnitude(&self, n: usize) -> f64 {
        self.a[n - 1].hypot(self.b[n - 1])
    }

    /// Σ (a_n² + b_n²) over the retained harmonics.
    pub fn harmonic_power(&self) -> f64 {
        self.a.iter().zip(&self.b).map(|(a, b)| a * a + b * b).sum()
    }

    /// Period-averaged square of the series (Parseval).
    pub fn mean_square(&self) -> f64 {
        0.25 * self.a0 * self.a0 + 0.5 * self.harmonic_power()
    }
}

type CircleTable = Arc<Vec<(f64, f64)>>;

/// `(sin, cos)` of `2πm/samples` for `m = 0..samples`, cached per size.
pub fn unit_circle(samples: usize) -> CircleTable {
    static CACHE: OnceLock<Mutex<HashMap<usize, CircleTable>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut map = cache.lock().unwrap_or_else(|e| e.into_inner());
    map.entry(samples)
        .or_insert_with(|| {
            Arc::new(
                (0..samples)
                    .map(|m| (2.0 * PI * m as f64 / samples as f64).sin_cos())
                    .collect(),
            )
        })
        .clone()
}

/// Extracts Fourier coefficients of a `2π/omega_d`-periodic signal by the
/// composite trapezoid rule on `samples` uniform points.
pub fn fourier_decompose<F: Fn(f64) -> f64>(
    z: F,
    omega_d: f64,
    n_max: usize,
    samples: usize,
) -> Result<FourierSeries> {
    if !(omega_d > 0.0) || !omega_d.is_finite() {
        return Err(Error::param("omega_d", "must be positive and finite"));
    }
    if samples < 8 * n_max.max(1) {
        return Err(Error::param(
            "samples",
            format!("need at least 8·n_max = {} samples, got {samples}", 8 * n_max.max(1)),
        ));
    }
    let period = 2.0 * PI / omega_d;
    let dt = period / samples as f64;
    let values: Vec<f64> = (0..samples).map(|k| z(k as f64 * dt)).collect();
    fourier_from_samples(&values, omega_d, n_max)
}

/// Same as [`fourier_decompose`] for a signal already sampled at
/// `t_k = k·T/N`, `k = 0..N`.
pub fn fourier_from_samples(values: &[f64], omega_d: f64, n_max: usize) -> Result<FourierSeries> {
    let samples = values.len();
    if !(omega_d > 0.0) || !omega_d.is_finite() {
        return Err(Error::param("omega_d", "must be positive and finite"));
    }
    if samples < 8 * n_max.max(1) {
        return Err(Error::param(
            "samples",
            format!("need at least 8·n_max = {} samples, got {samples}", 8 * n_max.max(1)),
        ));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::domain("fourier_decompose", "signal is not finite on the grid"));
    }

    let norm = 2.0 / samples as f64;
    let a0 = norm * values.iter().sum::<f64>();
    let mut a = Vec::with_capacity(n_max);
    let mut b = Vec::with_capacity(n_max);
    let circle = unit_circle(samples);
    for n in 1..=n_max {
        let (mut ca, mut cb) = (0.0, 0.0);
        for (k, v) in values.iter().enumerate() {
            // phase reduced modulo 2π through the integer product
            let (s, c) = circle[(n * k) % samples];
            ca += v * c;
            cb += v * s;
        }
        a.push(norm * ca);
        b.push(norm * cb);
    }

    let mut series = FourierSeries {
        a0,
        a,
        b,
        omega_d,
        aliasing_warning: false,
    };
    if n_max > 0 {
        let total = series.harmonic_power();
        let top = series.magnitude(n_max).powi(2);
        if total > 0.0 && top > 0.01 * total {
            debug!(
                "harmonic {n_max} carries {:.2}% of the harmonic power; increase n_max",
                100.0 * top / total
            );
            series.aliasing_warning = true;
        }
    }
    Ok(series)
}
