use crate::error::{Error, Result};

/// Settings for globally adaptive Gauss-Kronrod (7/15) quadrature.
///
/// Refinement stops once the summed error estimate is below
/// `max(abs_tol, rel_tol * |I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for Quadrature {
    fn default() -> Self {
        Quadrature {
            abs_tol: 1e-300,
            rel_tol: 1e-12,
            max_subdivisions: 2000,
        }
    }
}

impl Quadrature {
    pub fn with_tolerance(rel_tol: f64) -> Self {
        Quadrature {
            rel_tol,
            ..Default::default()
        }
    }

    fn check(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::param("abs_tol", "must be positive"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::param("rel_tol", "must be positive"));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::param("max_subdivisions", "must be at least 1"));
        }
        Ok(())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];

// Gauss weights for the odd Kronrod nodes (XGK[1], XGK[3], XGK[5], XGK[7]).
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Segment {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Segment {
        a,
        b,
        value: kronrod * half,
        err: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive integral of `f` over `[a, b]`.
///
/// Reversed limits flip the sign; an empty interval yields zero.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, q: &Quadrature) -> Result<f64> {
    q.check()?;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::domain("integrate", "limits must be finite"));
    }
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, q).map(|v| -v);
    }

    let mut segments = vec![gk15(&f, a, b)];
    loop {
        let total: f64 = segments.iter().map(|s| s.value).sum();
        let err: f64 = segments.iter().map(|s| s.err).sum();
        if !total.is_finite() {
            return Err(Error::domain("integrate", "integrand is not finite on the interval"));
        }
        if err <= q.abs_tol.max(q.rel_tol * total.abs()) {
            return Ok(total);
        }
        if segments.len() >= q.max_subdivisions {
            return Err(Error::NoConvergence {
                subdivisions: segments.len(),
                estimate: err,
            });
        }
        let (worst, _) = segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("nonempty");
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a || mid >= s.b {
            // interval exhausted at machine precision; accept what we have
            segments.push(s);
            let total: f64 = segments.iter().map(|s| s.value).sum();
            return Ok(total);
        }
        segments.push(gk15(&f, s.a, mid));
        segments.push(gk15(&f, mid, s.b));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn sine_over_half_period() {
        let v = integrate(f64::sin, 0.0, PI, &Quadrature::default()).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn zero_integrand() {
        let v = integrate(|_| 0.0, 0.0, 1.0, &Quadrature::default()).unwrap();
        assert_eq!(v, 0.0);
    }

    #[test]
    fn cos_squared_full_period() {
        let v = integrate(|t: f64| t.cos().powi(2), 0.0, 2.0 * PI, &Quadrature::default()).unwrap();
        assert!((v - PI).abs() < 1e-10);
    }

    #[test]
    fn reversed_limits() {
        let q = Quadrature::default();
        let fwd = integrate(f64::exp, 0.0, 1.0, &q).unwrap();
        let rev = integrate(f64::exp, 1.0, 0.0, &q).unwrap();
        assert_eq!(fwd, -rev);
        assert!((fwd - (1f64.exp() - 1.0)).abs() < 1e-13);
    }

    #[test]
    fn non_convergence_reported() {
        let q = Quadrature {
            max_subdivisions: 2,
            ..Default::default()
        };
        let r = integrate(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &q);
        assert!(matches!(r, Err(Error::NoConvergence { .. })));
    }

    #[test]
    fn invalid_settings_rejected() {
        let q = Quadrature {
            rel_tol: 0.0,
            ..Default::default()
        };
        assert!(integrate(f64::sin, 0.0, 1.0, &q).is_err());
        let q = Quadrature {
            max_subdivisions: 0,
            ..Default::default()
        };
        assert!(integrate(f64::sin, 0.0, 1.0, &q).is_err());
    }

    #[test]
    fn infinite_integrand_is_domain_error() {
        let r = integrate(|_| f64::INFINITY, 0.0, 1.0, &Quadrature::default());
        assert!(matches!(r, Err(Error::Domain { .. })));
    }
}
