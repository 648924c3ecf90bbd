//! Grid sweeps of the output spectrum.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::dataset::{fmt_f64, SpectrumDataset, SweepAxis};
use crate::circuit::{trajectory_to_drive, CheckStatus, CircuitParams, DriveAudit};
use crate::constants::linear;
use crate::error::{Error, Result};
use crate::numerics::DEFAULT_SAMPLES;
use crate::scattering::{output_spectrum, ThermalInput};
use crate::trajectories::{solve_acceleration_parameter, TrajectoryKind, TrajectoryParams};

pub const DEFAULT_POINTS: usize = 401;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FigureId {
    Worldlines,
    Fourier,
    #[serde(rename = "nout_vs_w_T")]
    NoutVsWT,
    NoutVsW,
    NoutVsWd,
    NoutVsAbar,
    Compare3W,
    Compare3Abar,
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::Worldlines,
        FigureId::Fourier,
        FigureId::NoutVsWT,
        FigureId::NoutVsW,
        FigureId::NoutVsWd,
        FigureId::NoutVsAbar,
        FigureId::Compare3W,
        FigureId::Compare3Abar,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FigureId::Worldlines => "worldlines",
            FigureId::Fourier => "fourier",
            FigureId::NoutVsWT => "nout_vs_w_T",
            FigureId::NoutVsW => "nout_vs_w",
            FigureId::NoutVsWd => "nout_vs_wd",
            FigureId::NoutVsAbar => "nout_vs_abar",
            FigureId::Compare3W => "compare3_w",
            FigureId::Compare3Abar => "compare3_abar",
        }
    }

    /// Figure number of the preset that reproduces this class (1-8).
    pub fn number(self) -> usize {
        FigureId::ALL.iter().position(|&f| f == self).unwrap() + 1
    }

    pub fn from_number(n: usize) -> Option<Self> {
        n.checked_sub(1).and_then(|i| FigureId::ALL.get(i).copied())
    }
}

/// How the acceleration parameter of a trajectory is fixed along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AccelTarget {
    /// `A` itself (α, a or Rω_d²) [m/s²].
    Parameter(f64),
    /// Average proper acceleration ā [m/s²]; `A` is re-solved at every drive frequency.
    Average(f64),
}

impl AccelTarget {
    pub fn value(self) -> f64 {
        match self {
            AccelTarget::Parameter(a) | AccelTarget::Average(a) => a,
        }
    }

    pub fn resolve(self, kind: TrajectoryKind, omega_d: f64, v: f64) -> Result<f64> {
        match self {
            AccelTarget::Parameter(a) => Ok(a),
            AccelTarget::Average(abar) => solve_acceleration_parameter(kind, abar, omega_d, v),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectorySpec {
    pub kind: TrajectoryKind,
    pub accel: AccelTarget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    /// Grid values are used as is.
    Absolute,
    /// Grid values are multiples of the series drive frequency (ω axis only).
    DriveMultiple,
}

/// Uniform grid `start..=end` with `points` nodes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub points: usize,
    pub scale: GridScale,
}

impl Grid {
    pub fn absolute(start: f64, end: f64, points: usize) -> Self {
        Self { start, end, points, scale: GridScale::Absolute }
    }

    pub fn relative(start: f64, end: f64, points: usize) -> Self {
        Self { start, end, points, scale: GridScale::DriveMultiple }
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(Error::param("grid.points", format!("need at least 2, got {}", self.points)));
        }
        if !(self.start > 0.0 && self.end > self.start && self.end.is_finite()) {
            return Err(Error::param(
                "grid",
                format!("need 0 < start < end, got [{}, {}]", self.start, self.end),
            ));
        }
        Ok(())
    }

    /// Node values in grid units; the last node is exactly `end`.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.end
                } else {
                    self.start + (self.end - self.start) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }
}

/// How the static bias `E_J⁰/E_J` is chosen for each drive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BiasPolicy {
    /// Use the circuit's `ej0_ratio` unchanged.
    Fixed,
    /// Bias so that the fundamental modulates `E_J⁰` by `depth`, capped at `max_ratio`.
    FundamentalDepth { depth: f64, max_ratio: f64 },
}

impl BiasPolicy {
    pub const REFERENCE: BiasPolicy = BiasPolicy::FundamentalDepth { depth: 0.25, max_ratio: 1.3 };

    /// Circuit with the bias this policy assigns to worldline `p`.
    pub fn apply(self, c: &CircuitParams, p: &TrajectoryParams) -> Result<CircuitParams> {
        match self {
            BiasPolicy::Fixed => Ok(*c),
            BiasPolicy::FundamentalDepth { depth, max_ratio } => {
                let ratio = c.bias_for_depth(p, depth)?.min(max_ratio);
                Ok(c.with_ej0_ratio(ratio))
            }
        }
    }

    fn describe(self, meta: &mut BTreeMap<String, String>) {
        match self {
            BiasPolicy::Fixed => {
                meta.insert("bias.policy".into(), "fixed".into());
            }
            BiasPolicy::FundamentalDepth { depth, max_ratio } => {
                meta.insert("bias.policy".into(), "fundamental-depth".into());
                meta.insert("bias.depth".into(), fmt_f64(depth));
                meta.insert("bias.max_ratio".into(), fmt_f64(max_ratio));
            }
        }
    }
}

/// A figure-class sweep: every combination of trajectory, fixed frequency
/// and temperature becomes one dataset over the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub figure: FigureId,
    pub axis: SweepAxis,
    pub grid: Grid,
    pub trajectories: Vec<TrajectorySpec>,
    /// Fixed ω_d values [rad/s]; unused on the ω_d axis.
    pub drive_frequencies: Vec<f64>,
    /// Fixed ω values [rad/s]; unused on the ω axis.
    pub probe_frequencies: Vec<f64>,
    /// Bath temperatures [K].
    pub temperatures: Vec<f64>,
    pub n_max: usize,
    pub bias: BiasPolicy,
}

/// One curve of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Series {
    pub trajectory: TrajectorySpec,
    pub omega_d: Option<f64>,
    pub omega: Option<f64>,
    pub temperature: f64,
}

/// Inputs of a single grid point after resolving the axis value.
#[derive(Debug, Clone, Copy)]
pub struct PointSetup {
    pub params: TrajectoryParams,
    pub circuit: CircuitParams,
    pub omega: f64,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.grid.validate()?;
        if self.grid.scale == GridScale::DriveMultiple && self.axis != SweepAxis::Omega {
            return Err(Error::param("grid.scale", "drive-relative grids need the ω axis"));
        }
        if self.trajectories.is_empty() {
            return Err(Error::param("trajectories", "empty"));
        }
        if self.temperatures.is_empty() {
            return Err(Error::param("temperatures", "empty"));
        }
        if self.axis != SweepAxis::OmegaD && self.drive_frequencies.is_empty() {
            return Err(Error::param("drive_frequencies", "required unless sweeping ω_d"));
        }
        if self.axis != SweepAxis::Omega && self.probe_frequencies.is_empty() {
            return Err(Error::param("probe_frequencies", "required unless sweeping ω"));
        }
        let all_pos = |v: &[f64]| v.iter().all(|x| *x > 0.0 && x.is_finite());
        if !all_pos(&self.drive_frequencies) || !all_pos(&self.probe_frequencies) {
            return Err(Error::param("frequencies", "must be positive"));
        }
        if !self.temperatures.iter().all(|t| *t >= 0.0 && t.is_finite()) {
            return Err(Error::param("temperatures", "must be non-negative"));
        }
        for t in &self.trajectories {
            if !(t.accel.value() > 0.0) {
                return Err(Error::param("trajectories", "acceleration must be positive"));
            }
        }
        if let BiasPolicy::FundamentalDepth { depth, max_ratio } = self.bias {
            if !(depth > 0.0 && max_ratio > 0.0 && max_ratio <= 2.0) {
                return Err(Error::param("bias", "depth > 0 and max_ratio in (0, 2] required"));
            }
        }
        Ok(())
    }

    /// Curves in output order: trajectory, drive frequency, probe, temperature.
    pub fn series(&self) -> Vec<Series> {
        let drives: Vec<Option<f64>> = if self.axis == SweepAxis::OmegaD {
            vec![None]
        } else {
            self.drive_frequencies.iter().map(|&w| Some(w)).collect()
        };
        let probes: Vec<Option<f64>> = if self.axis == SweepAxis::Omega {
            vec![None]
        } else {
            self.probe_frequencies.iter().map(|&w| Some(w)).collect()
        };
        let mut out = Vec::new();
        for &trajectory in &self.trajectories {
            for &omega_d in &drives {
                for &omega in &probes {
                    for &temperature in &self.temperatures {
                        out.push(Series { trajectory, omega_d, omega, temperature });
                    }
                }
            }
        }
        out
    }

    /// Absolute axis values of a series.
    pub fn axis_values(&self, s: &Series) -> Vec<f64> {
        let v = self.grid.values();
        match (self.grid.scale, s.omega_d) {
            (GridScale::DriveMultiple, Some(wd)) => v.into_iter().map(|r| r * wd).collect(),
            _ => v,
        }
    }

    /// Worldline, biased circuit and probe frequency at axis value `x`.
    pub fn setup(&self, s: &Series, x: f64, c: &CircuitParams) -> Result<PointSetup> {
        let kind = s.trajectory.kind;
        let (omega_d, omega, accel) = match self.axis {
            SweepAxis::Omega => (s.omega_d.unwrap(), x, s.trajectory.accel),
            SweepAxis::OmegaD => (x, s.omega.unwrap(), s.trajectory.accel),
            SweepAxis::Abar => (s.omega_d.unwrap(), s.omega.unwrap(), AccelTarget::Average(x)),
        };
        let a = accel.resolve(kind, omega_d, c.v)?;
        let params = TrajectoryParams::new(kind, a, omega_d, c.v)?;
        let circuit = self.bias.apply(c, &params)?;
        Ok(PointSetup { params, circuit, omega })
    }
}

struct PointOutcome {
    value: std::result::Result<f64, String>,
    issues: Vec<(String, CheckStatus, String)>,
}

fn evaluate(omega: f64, audit: &DriveAudit, thermal: &ThermalInput) -> PointOutcome {
    let value = output_spectrum(omega, audit.drive(), audit.circuit(), thermal);
    let issues = audit
        .report(&[omega], thermal)
        .issues()
        .map(|c| (c.name.to_string(), c.status, c.detail.clone()))
        .collect();
    let value = if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("n_out not finite at ω = {omega:e}"))
    };
    PointOutcome { value, issues }
}

fn base_metadata(spec: &SweepSpec, c: &CircuitParams) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    m.insert("figure".into(), spec.figure.name().into());
    m.insert("n_max".into(), spec.n_max.to_string());
    m.insert("fourier_samples".into(), DEFAULT_SAMPLES.max(8 * spec.n_max).to_string());
    m.insert("solver.rel_tol".into(), fmt_f64(1e-14));
    m.insert("grid.start".into(), fmt_f64(spec.grid.start));
    m.insert("grid.end".into(), fmt_f64(spec.grid.end));
    m.insert("grid.points".into(), spec.grid.points.to_string());
    m.insert(
        "grid.scale".into(),
        match spec.grid.scale {
            GridScale::Absolute => "absolute",
            GridScale::DriveMultiple => "drive-multiple",
        }
        .into(),
    );
    m.insert("circuit.C_J".into(), fmt_f64(c.c_j));
    m.insert("circuit.I_c".into(), fmt_f64(c.i_c));
    m.insert("circuit.Z0".into(), fmt_f64(c.z0));
    m.insert("circuit.v".into(), fmt_f64(c.v));
    m.insert("circuit.omega_s".into(), fmt_f64(c.omega_s));
    m.insert("circuit.fs_hz".into(), fmt_f64(linear(c.omega_s)));
    m.insert("circuit.EJ0_ratio".into(), fmt_f64(c.ej0_ratio));
    spec.bias.describe(&mut m);
    m
}

type Prepared = std::result::Result<(PointSetup, DriveAudit), String>;

fn prepare(spec: &SweepSpec, s: &Series, x: f64, c: &CircuitParams) -> Prepared {
    let run = || -> Result<(PointSetup, DriveAudit)> {
        let setup = spec.setup(s, x, c)?;
        let drive = trajectory_to_drive(&setup.params, &setup.circuit, spec.n_max)?;
        Ok((setup, DriveAudit::new(drive, setup.params, setup.circuit)))
    };
    run().map_err(|e| e.to_string())
}

/// Evaluates every series of `spec` on its grid.
///
/// Drives are synthesized once per trajectory, fixed drive frequency and grid
/// point, then shared by all probes and temperatures. Grid points run in
/// parallel and results are written by index, so the output does not depend
/// on the thread count. Failed points are listed under `failure.NNNN` in the
/// dataset metadata and validity issues under `validity.<check>`.
pub fn run_sweep(spec: &SweepSpec, c: &CircuitParams) -> Result<Vec<SpectrumDataset>> {
    spec.validate()?;
    c.validate()?;
    let base = base_metadata(spec, c);
    let series = spec.series();
    let mut out = Vec::with_capacity(series.len());
    let mut i0 = 0;
    while i0 < series.len() {
        let head = series[i0];
        let len = series[i0..]
            .iter()
            .take_while(|s| s.trajectory == head.trajectory && s.omega_d == head.omega_d)
            .count();
        let group = &series[i0..i0 + len];
        i0 += len;

        let xs = spec.axis_values(&head);
        let prepared: Vec<Prepared> = if spec.axis == SweepAxis::Omega {
            // the drive does not depend on ω
            vec![prepare(spec, &head, xs[0], c)]
        } else {
            xs.par_iter().map(|&x| prepare(spec, &head, x, c)).collect()
        };

        for s in group {
            let thermal = ThermalInput::new(s.temperature)?;
            let mut meta = base.clone();
            if spec.axis != SweepAxis::Abar {
                let mode = match s.trajectory.accel {
                    AccelTarget::Parameter(_) => "A",
                    AccelTarget::Average(_) => "abar",
                };
                meta.insert("accel.mode".into(), mode.into());
                meta.insert("accel.value".into(), fmt_f64(s.trajectory.accel.value()));
            }
            if let Some(wd) = s.omega_d {
                meta.insert("omega_d".into(), fmt_f64(wd));
                meta.insert("fd_hz".into(), fmt_f64(linear(wd)));
            }
            if let Some(w) = s.omega {
                meta.insert("omega".into(), fmt_f64(w));
                meta.insert("f_hz".into(), fmt_f64(linear(w)));
            }
            if spec.axis == SweepAxis::Omega {
                if let Ok((setup, _)) = &prepared[0] {
                    meta.insert("A".into(), fmt_f64(setup.params.accel()));
                    if let Ok(abar) = setup.params.average_acceleration() {
                        meta.insert("abar".into(), fmt_f64(abar));
                    }
                    meta.insert("EJ0_ratio".into(), fmt_f64(setup.circuit.ej0_ratio));
                    meta.insert("L_eff0".into(), fmt_f64(setup.circuit.effective_length()));
                }
            }

            let outcomes: Vec<PointOutcome> = xs
                .par_iter()
                .enumerate()
                .map(|(i, &x)| {
                    let slot = if spec.axis == SweepAxis::Omega { &prepared[0] } else { &prepared[i] };
                    match slot {
                        Ok((_, audit)) => {
                            let omega = match spec.axis {
                                SweepAxis::Omega => x,
                                _ => s.omega.unwrap(),
                            };
                            evaluate(omega, audit, &thermal)
                        }
                        Err(msg) => PointOutcome { value: Err(msg.clone()), issues: vec![] },
                    }
                })
                .collect();

            let mut points = Vec::with_capacity(xs.len());
            let mut failed = 0usize;
            let mut issues: BTreeMap<String, (CheckStatus, usize, String)> = BTreeMap::new();
            for (i, (x, o)) in xs.iter().zip(outcomes).enumerate() {
                match o.value {
                    Ok(n) => points.push((*x, n)),
                    Err(e) => {
                        failed += 1;
                        meta.insert(format!("failure.{i:04}"), format!("x={} {}", fmt_f64(*x), e));
                    }
                }
                for (name, status, detail) in o.issues {
                    let entry = issues.entry(name).or_insert((status, 0, detail.clone()));
                    if status > entry.0 {
                        *entry = (status, entry.1, detail);
                    }
                    entry.1 += 1;
                }
            }
            for (name, (status, count, first)) in issues {
                meta.insert(
                    format!("validity.{name}"),
                    format!("{status} at {count}/{} points; first {status}: {first}", xs.len()),
                );
            }
            meta.insert("points.ok".into(), points.len().to_string());
            meta.insert("points.failed".into(), failed.to_string());
            out.push(SpectrumDataset::new(spec.axis, s.trajectory.kind, s.temperature, points, meta));
        }
    }
    Ok(out)
}
