//! Choice of `(A, ω_d)` for a target average acceleration.
//!
//! The criteria are applied lexicographically: hit `ā_target` exactly, stay
//! inside the feasible region (bias floor, realizable drive, SM amplitude
//! cap), then take the smallest drive frequency, which maximizes `ā/ω_d`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::sweep::BiasPolicy;
use crate::circuit::{trajectory_to_drive, validate, CircuitParams, DEFAULT_N_MAX, EJ0_RATIO_MIN};
use crate::constants::{angular, linear};
use crate::error::{Error, Result};
use crate::numerics::find_root;
use crate::scattering::ThermalInput;
use crate::trajectories::{relativity_estimator, solve_acceleration_parameter, TrajectoryKind, TrajectoryParams};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SelectionCriteria {
    /// Target average proper acceleration ā [m/s²].
    pub abar_target: f64,
    /// Smallest admissible `E_J⁰/E_J`.
    pub ejo_ratio_min: f64,
    /// Upper end of the drive-frequency search [rad/s]. SM amplitudes are
    /// also capped at `v/omega_d_max`.
    pub omega_d_max: f64,
    /// Lower end of the drive-frequency search [rad/s].
    pub omega_d_min: f64,
    /// Bias rule applied to each candidate worldline.
    pub bias: BiasPolicy,
    pub n_max: usize,
    /// Geometric scan points before refinement.
    pub scan_points: usize,
}

impl SelectionCriteria {
    pub fn new(abar_target: f64) -> Self {
        Self {
            abar_target,
            ejo_ratio_min: EJ0_RATIO_MIN,
            omega_d_max: angular(40e9),
            omega_d_min: angular(0.1e9),
            bias: BiasPolicy::REFERENCE,
            n_max: DEFAULT_N_MAX,
            scan_points: 400,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.abar_target > 0.0 && self.abar_target.is_finite()) {
            return Err(Error::param("abar_target", "must be positive"));
        }
        if !(self.ejo_ratio_min > 0.0 && self.ejo_ratio_min <= 1.0) {
            return Err(Error::param("ejo_ratio_min", "must lie in (0, 1]"));
        }
        if !(self.omega_d_min > 0.0 && self.omega_d_max > self.omega_d_min) {
            return Err(Error::param("omega_d_max", "need 0 < omega_d_min < omega_d_max"));
        }
        if self.scan_points < 2 {
            return Err(Error::param("scan_points", "need at least 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub kind: TrajectoryKind,
    /// Acceleration parameter `A` [m/s²].
    pub accel: f64,
    pub omega_d: f64,
    pub abar: f64,
    /// Bias `E_J⁰/E_J` from the criteria's bias rule.
    pub ej0_ratio: f64,
}

impl Selection {
    pub fn params(&self, v: f64) -> Result<TrajectoryParams> {
        TrajectoryParams::new(self.kind, self.accel, self.omega_d, v)
    }

    pub fn relativity(&self) -> f64 {
        relativity_estimator(self.abar, self.omega_d)
    }
}

/// Signed feasibility margin at `omega_d`; non-negative means feasible.
fn margin(kind: TrajectoryKind, crit: &SelectionCriteria, c: &CircuitParams, omega_d: f64) -> f64 {
    let eval = || -> Result<f64> {
        let a = solve_acceleration_parameter(kind, crit.abar_target, omega_d, c.v)?;
        let p = TrajectoryParams::new(kind, a, omega_d, c.v)?;
        let biased = crit.bias.apply(c, &p)?;
        let mut m = biased.ej0_ratio / crit.ejo_ratio_min - 1.0;
        if kind == TrajectoryKind::Sm {
            m = m.min(1.0 - p.radius() * crit.omega_d_max / c.v);
        }
        trajectory_to_drive(&p, &biased, crit.n_max)?;
        Ok(m)
    };
    // unreachable targets and unrealizable drives sit below the boundary
    eval().unwrap_or(-1.0)
}

/// Smallest feasible drive frequency and the matching acceleration parameter.
pub fn select_parameters(
    kind: TrajectoryKind,
    crit: &SelectionCriteria,
    c: &CircuitParams,
) -> Result<Selection> {
    crit.validate()?;
    c.validate()?;
    let hi = crit.omega_d_max.min(c.omega_s * (1.0 - 1e-9));
    let lo = crit.omega_d_min.min(hi * 0.5);
    let n = crit.scan_points;
    let grid: Vec<f64> = (0..n)
        .map(|i| if i + 1 == n { hi } else { lo * (hi / lo).powf(i as f64 / (n - 1) as f64) })
        .collect();
    let first = grid
        .iter()
        .position(|&w| margin(kind, crit, c, w) >= 0.0)
        .ok_or_else(|| {
            Error::Infeasible(format!(
                "{kind} cannot reach ā = {:e} m/s² with E_J⁰/E_J ≥ {} for ω_d/2π ≤ {:.4} GHz",
                crit.abar_target,
                crit.ejo_ratio_min,
                linear(hi) * 1e-9
            ))
        })?;
    let omega_d = if first == 0 {
        grid[0]
    } else {
        let (a, b) = (grid[first - 1], grid[first]);
        let root = find_root(|w| margin(kind, crit, c, w), a, b, 1e-12)?;
        // step onto the feasible side of the boundary
        [root, root * (1.0 + 1e-12), root * (1.0 + 1e-10), b]
            .into_iter()
            .find(|&w| margin(kind, crit, c, w) >= 0.0)
            .unwrap_or(b)
    };
    selection_at(kind, crit, c, omega_d)
}

/// Selection for a fixed drive frequency, checked against every validity flag.
pub fn selection_at(
    kind: TrajectoryKind,
    crit: &SelectionCriteria,
    c: &CircuitParams,
    omega_d: f64,
) -> Result<Selection> {
    let accel = solve_acceleration_parameter(kind, crit.abar_target, omega_d, c.v)?;
    let p = TrajectoryParams::new(kind, accel, omega_d, c.v)?;
    let biased = crit.bias.apply(c, &p)?;
    if biased.ej0_ratio < crit.ejo_ratio_min {
        return Err(Error::Infeasible(format!(
            "{kind} at ω_d/2π = {:.4} GHz needs E_J⁰/E_J = {:.4} below {}",
            linear(omega_d) * 1e-9,
            biased.ej0_ratio,
            crit.ejo_ratio_min
        )));
    }
    let drive = trajectory_to_drive(&p, &biased, crit.n_max)?;
    let report = validate(&drive, &p, &biased, &[0.5 * omega_d], &ThermalInput::vacuum());
    if !report.passed() {
        return Err(Error::Infeasible(format!("{kind} selection fails validity checks:\n{report}")));
    }
    Ok(Selection {
        kind,
        accel,
        omega_d,
        abar: p.average_acceleration()?,
        ej0_ratio: biased.ej0_ratio,
    })
}

/// Common drive frequency for several kinds: the largest of the per-kind minima.
pub fn select_common(
    kinds: &[TrajectoryKind],
    crit: &SelectionCriteria,
    c: &CircuitParams,
) -> Result<Vec<Selection>> {
    let mut omega_d: f64 = 0.0;
    for &k in kinds {
        omega_d = omega_d.max(select_parameters(k, crit, c)?.omega_d);
    }
    kinds.iter().map(|&k| selection_at(k, crit, c, omega_d)).collect()
}

/// Column listing of selections with the circuit constants.
pub struct SelectionTable<'a> {
    pub selections: &'a [Selection],
    pub circuit: &'a CircuitParams,
}

impl fmt::Display for SelectionTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.selections;
        let c = self.circuit;
        let row = |f: &mut fmt::Formatter<'_>, name: &str, cells: Vec<String>| -> fmt::Result {
            write!(f, "{name:<24}")?;
            for cell in cells {
                write!(f, "{cell:>16}")?;
            }
            writeln!(f)
        };
        row(f, "Parameter", s.iter().map(|x| x.kind.label().to_string()).collect())?;
        row(f, "I_c [uA]", s.iter().map(|_| format!("{:.4}", c.i_c * 1e6)).collect())?;
        row(f, "C_J [fF]", s.iter().map(|_| format!("{:.4}", c.c_j * 1e15)).collect())?;
        row(f, "Z0 [Ohm]", s.iter().map(|_| format!("{:.4}", c.z0)).collect())?;
        row(f, "v [m/s]", s.iter().map(|_| format!("{:.6e}", c.v)).collect())?;
        row(f, "omega_s/2pi [GHz]", s.iter().map(|_| format!("{:.4}", linear(c.omega_s) * 1e-9)).collect())?;
        row(f, "E_J0/E_J", s.iter().map(|x| format!("{:.4}", x.ej0_ratio)).collect())?;
        row(
            f,
            "L_eff0 [mm]",
            s.iter().map(|x| format!("{:.4}", c.with_ej0_ratio(x.ej0_ratio).effective_length() * 1e3)).collect(),
        )?;
        row(f, "omega_d/2pi [GHz]", s.iter().map(|x| format!("{:.4}", linear(x.omega_d) * 1e-9)).collect())?;
        row(f, "A [m/s^2]", s.iter().map(|x| format!("{:.5e}", x.accel)).collect())?;
        row(f, "abar [m/s^2]", s.iter().map(|x| format!("{:.5e}", x.abar)).collect())?;
        row(f, "abar*2pi*5/(2c omega_d)", s.iter().map(|x| format!("{:.4}", x.relativity())).collect())?;
        let radius: Vec<String> = s
            .iter()
            .map(|x| match x.kind {
                TrajectoryKind::Sm => format!("{:.5}", x.accel / (x.omega_d * x.omega_d) * 1e3),
                _ => "-".into(),
            })
            .collect();
        if s.iter().any(|x| x.kind == TrajectoryKind::Sm) {
            row(f, "R [mm]", radius)?;
        }
        Ok(())
    }
}
