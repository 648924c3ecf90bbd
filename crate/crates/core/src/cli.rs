//! Run configuration (TOML), command-line flags and command dispatch.
//!
//! Frequencies in config files and flags are linear [Hz]; everything else is SI.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use log::{info, warn};
use serde::Deserialize;

use crate::circuit::{
    flux_waveform, trajectory_to_drive, validate, CircuitParams, DriveSpectrum, ValidityReport, DEFAULT_N_MAX,
    REFERENCE_DEPTH,
};
use crate::constants::{angular, linear};
use crate::error::{Error, Result};
use crate::experiments::{
    fmt_f64, reproduce, run_sweep, select_common, select_parameters, spectrum_artifacts, AccelTarget,
    Artifact, BiasPolicy, CsvTable, FigureId, Grid, OutputFormat, SelectionCriteria, SelectionTable,
    SweepAxis, SweepSpec, TrajectorySpec, DEFAULT_POINTS,
};
use crate::scattering::ThermalInput;
use crate::trajectories::{TrajectoryKind, TrajectoryParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Sample a worldline over whole periods.
    Traj,
    /// Fourier coefficients of E_J(t) for a worldline.
    Drive,
    /// External flux waveform realizing the drive.
    Flux,
    /// Output photon spectrum versus frequency.
    Spectrum,
    /// Sweep defined by the [sweep] config block.
    Sweep,
    /// Select (A, f_d) for a target average acceleration.
    Params,
    /// Run a figure preset: `reproduce fig3`.
    Reproduce,
}

// ---- config file -----------------------------------------------------------

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    command: Option<Command>,
    trajectory: Option<RawTrajectory>,
    #[serde(default)]
    circuit: RawCircuit,
    #[serde(default)]
    physics: RawPhysics,
    #[serde(default)]
    output: RawOutput,
    sweep: Option<RawSweep>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTrajectory {
    kind: Option<String>,
    #[serde(rename = "A")]
    a: Option<f64>,
    abar: Option<f64>,
    fd: Option<f64>,
    v: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
#[allow(non_snake_case)]
struct RawCircuit {
    C_J: Option<f64>,
    I_c: Option<f64>,
    Z0: Option<f64>,
    v: Option<f64>,
    fs: Option<f64>,
    EJ0_ratio: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPhysics {
    #[serde(rename = "T")]
    temperature: Option<f64>,
    n_max: Option<usize>,
    bias: Option<String>,
    depth: Option<f64>,
    f_max: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    path: Option<PathBuf>,
    format: Option<String>,
    points: Option<usize>,
    samples: Option<usize>,
    periods: Option<usize>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSweep {
    axis: String,
    start: f64,
    end: f64,
    kinds: Vec<String>,
    #[serde(rename = "A")]
    a: Option<Vec<f64>>,
    abar: Option<f64>,
    fd: Option<Vec<f64>>,
    f: Option<Vec<f64>>,
    #[serde(rename = "T")]
    temperatures: Option<Vec<f64>>,
}

// ---- validated config ------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryConfig {
    pub kind: Option<TrajectoryKind>,
    pub accel: Option<AccelTarget>,
    /// Drive frequency ω_d [rad/s].
    pub omega_d: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicsConfig {
    /// Bath temperature [K].
    pub temperature: f64,
    pub n_max: usize,
    /// Keep `circuit.EJ0_ratio` instead of biasing from the worldline.
    pub fixed_bias: bool,
    /// Fundamental modulation depth used by the worldline-following bias,
    /// which is capped at `circuit.EJ0_ratio`.
    pub depth: f64,
    /// Upper end of the `spectrum` grid [rad/s].
    pub omega_max: Option<f64>,
}

impl PhysicsConfig {
    pub fn bias(&self, c: &CircuitParams) -> BiasPolicy {
        if self.fixed_bias {
            BiasPolicy::Fixed
        } else {
            BiasPolicy::FundamentalDepth { depth: self.depth, max_ratio: c.ej0_ratio }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputConfig {
    pub path: PathBuf,
    pub format: OutputFormat,
    pub points: usize,
    /// Samples per period for `traj` and `flux`.
    pub samples: usize,
    pub periods: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub axis: SweepAxis,
    /// Axis range in config units: Hz for frequency axes, m/s² for ā.
    pub start: f64,
    pub end: f64,
    pub trajectories: Vec<TrajectorySpec>,
    /// Fixed drive frequencies [rad/s].
    pub drive_frequencies: Vec<f64>,
    /// Fixed probe frequencies [rad/s].
    pub probe_frequencies: Vec<f64>,
    pub temperatures: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub trajectory: TrajectoryConfig,
    pub circuit: CircuitParams,
    pub physics: PhysicsConfig,
    pub output: OutputConfig,
    pub sweep: Option<SweepConfig>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            command: None,
            trajectory: TrajectoryConfig { kind: None, accel: None, omega_d: None },
            circuit: CircuitParams::default(),
            physics: PhysicsConfig {
                temperature: 0.0,
                n_max: DEFAULT_N_MAX,
                fixed_bias: false,
                depth: REFERENCE_DEPTH,
                omega_max: None,
            },
            output: OutputConfig {
                path: PathBuf::from("out"),
                format: OutputFormat::PerFile,
                points: DEFAULT_POINTS,
                samples: 1024,
                periods: 1,
            },
            sweep: None,
        }
    }
}

fn positive(field: &str, x: Option<f64>) -> Result<Option<f64>> {
    match x {
        Some(v) if !(v > 0.0 && v.is_finite()) => {
            Err(Error::Config(format!("{field}: must be a positive number, got {v}")))
        }
        _ => Ok(x),
    }
}

fn parse_kind(field: &str, s: &str) -> Result<TrajectoryKind> {
    s.parse().map_err(|_| Error::Config(format!("{field}: unknown trajectory kind `{s}` (sm, sa, aua)")))
}

fn accel_from(field: &str, a: Option<f64>, abar: Option<f64>) -> Result<Option<AccelTarget>> {
    match (positive(&format!("{field}.A"), a)?, positive(&format!("{field}.abar"), abar)?) {
        (Some(_), Some(_)) => Err(Error::Config(format!("{field}: set exactly one of `A` and `abar`"))),
        (Some(a), None) => Ok(Some(AccelTarget::Parameter(a))),
        (None, Some(b)) => Ok(Some(AccelTarget::Average(b))),
        (None, None) => Ok(None),
    }
}

/// Parses a TOML run configuration. Unset circuit fields take the reference
/// circuit defaults.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let mut cfg = RunConfig { command: raw.command, ..RunConfig::default() };

    let rc = raw.circuit;
    let c = &mut cfg.circuit;
    if let Some(x) = positive("circuit.C_J", rc.C_J)? {
        c.c_j = x;
    }
    if let Some(x) = positive("circuit.I_c", rc.I_c)? {
        c.i_c = x;
    }
    if let Some(x) = positive("circuit.Z0", rc.Z0)? {
        c.z0 = x;
    }
    if let Some(x) = positive("circuit.v", rc.v)? {
        c.v = x;
    }
    if let Some(x) = positive("circuit.fs", rc.fs)? {
        c.omega_s = angular(x);
    }
    if let Some(x) = positive("circuit.EJ0_ratio", rc.EJ0_ratio)? {
        c.ej0_ratio = x;
    }

    if let Some(t) = raw.trajectory {
        let kind = match &t.kind {
            Some(k) => Some(parse_kind("trajectory.kind", k)?),
            None => return Err(Error::Config("trajectory.kind: missing required key".into())),
        };
        let accel = accel_from("trajectory", t.a, t.abar)?;
        if accel.is_none() {
            return Err(Error::Config("trajectory: one of `A` or `abar` is required".into()));
        }
        let omega_d = positive("trajectory.fd", t.fd)?.map(angular);
        if let Some(v) = positive("trajectory.v", t.v)? {
            match rc.v {
                Some(cv) if (cv - v).abs() > 1e-12 * cv => {
                    return Err(Error::Config(format!(
                        "trajectory.v = {v} differs from circuit.v = {cv}; the boundary moves along the line"
                    )))
                }
                _ => cfg.circuit.v = v,
            }
        }
        cfg.trajectory = TrajectoryConfig { kind, accel, omega_d };
    }
    cfg.circuit.validate().map_err(|e| Error::Config(format!("circuit: {e}")))?;

    let p = raw.physics;
    if let Some(t) = p.temperature {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::Config(format!("physics.T: must be non-negative, got {t}")));
        }
        cfg.physics.temperature = t;
    }
    if let Some(n) = p.n_max {
        cfg.physics.n_max = n;
    }
    if let Some(d) = positive("physics.depth", p.depth)? {
        cfg.physics.depth = d;
    }
    match p.bias.as_deref() {
        None | Some("auto") => {}
        Some("fixed") => cfg.physics.fixed_bias = true,
        Some(other) => {
            return Err(Error::Config(format!("physics.bias: expected `auto` or `fixed`, got `{other}`")))
        }
    }
    cfg.physics.omega_max = positive("physics.f_max", p.f_max)?.map(angular);

    let o = raw.output;
    if let Some(path) = o.path {
        cfg.output.path = path;
    }
    if let Some(f) = o.format {
        cfg.output.format = f.parse().map_err(|e| Error::Config(format!("output.format: {e}")))?;
    }
    if let Some(n) = o.points {
        cfg.output.points = n;
    }
    if let Some(n) = o.samples {
        cfg.output.samples = n;
    }
    if let Some(n) = o.periods {
        cfg.output.periods = n;
    }
    if cfg.output.points < 2 {
        return Err(Error::Config("output.points: need at least 2".into()));
    }
    if cfg.output.samples < 2 || cfg.output.periods == 0 {
        return Err(Error::Config("output.samples ≥ 2 and output.periods ≥ 1 required".into()));
    }

    if let Some(s) = raw.sweep {
        cfg.sweep = Some(parse_sweep(s)?);
    }
    Ok(cfg)
}

fn parse_sweep(s: RawSweep) -> Result<SweepConfig> {
    let axis: SweepAxis = s.axis.parse().map_err(|e| Error::Config(format!("sweep.axis: {e}")))?;
    positive("sweep.start", Some(s.start))?;
    positive("sweep.end", Some(s.end))?;
    if s.end <= s.start {
        return Err(Error::Config("sweep: end must exceed start".into()));
    }
    let kinds = s
        .kinds
        .iter()
        .map(|k| parse_kind("sweep.kinds", k))
        .collect::<Result<Vec<_>>>()?;
    if kinds.is_empty() {
        return Err(Error::Config("sweep.kinds: empty".into()));
    }
    let trajectories = match (s.a, s.abar) {
        (Some(_), Some(_)) => return Err(Error::Config("sweep: set exactly one of `A` and `abar`".into())),
        (Some(a), None) => {
            if a.len() != kinds.len() {
                return Err(Error::Config("sweep.A: one value per entry of sweep.kinds".into()));
            }
            for &x in &a {
                positive("sweep.A", Some(x))?;
            }
            kinds
                .iter()
                .zip(a)
                .map(|(&kind, a)| TrajectorySpec { kind, accel: AccelTarget::Parameter(a) })
                .collect()
        }
        (None, Some(b)) => {
            positive("sweep.abar", Some(b))?;
            kinds.iter().map(|&kind| TrajectorySpec { kind, accel: AccelTarget::Average(b) }).collect()
        }
        (None, None) if axis == SweepAxis::Abar => kinds
            .iter()
            // the axis supplies ā at every point
            .map(|&kind| TrajectorySpec { kind, accel: AccelTarget::Average(s.start) })
            .collect(),
        (None, None) => return Err(Error::Config("sweep: one of `A` or `abar` is required".into())),
    };
    let freqs = |field: &str, v: Option<Vec<f64>>| -> Result<Vec<f64>> {
        let v = v.unwrap_or_default();
        for &x in &v {
            positive(field, Some(x))?;
        }
        Ok(v.into_iter().map(angular).collect())
    };
    Ok(SweepConfig {
        axis,
        start: s.start,
        end: s.end,
        trajectories,
        drive_frequencies: freqs("sweep.fd", s.fd)?,
        probe_frequencies: freqs("sweep.f", s.f)?,
        temperatures: s.temperatures,
    })
}

impl SweepConfig {
    pub fn to_spec(&self, cfg: &RunConfig) -> Result<SweepSpec> {
        let (start, end) = match self.axis {
            SweepAxis::Abar => (self.start, self.end),
            _ => (angular(self.start), angular(self.end)),
        };
        let figure = match self.axis {
            SweepAxis::Omega => FigureId::NoutVsW,
            SweepAxis::OmegaD => FigureId::NoutVsWd,
            SweepAxis::Abar => FigureId::NoutVsAbar,
        };
        let spec = SweepSpec {
            figure,
            axis: self.axis,
            grid: Grid::absolute(start, end, cfg.output.points),
            trajectories: self.trajectories.clone(),
            drive_frequencies: self.drive_frequencies.clone(),
            probe_frequencies: self.probe_frequencies.clone(),
            temperatures: self.temperatures.clone().unwrap_or_else(|| vec![cfg.physics.temperature]),
            n_max: cfg.physics.n_max,
            bias: cfg.physics.bias(&cfg.circuit),
        };
        spec.validate().map_err(|e| Error::Config(format!("sweep: {e}")))?;
        Ok(spec)
    }
}

// ---- command line ----------------------------------------------------------

#[derive(Debug, Parser)]
#[command(name = "mirror-dce", version, about = "Dynamical Casimir effect with a SQUID-terminated waveguide")]
pub struct Cli {
    #[arg(value_enum)]
    pub command: Command,
    /// Preset for `reproduce` (fig1 ... fig8).
    pub target: Option<String>,
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub kind: Option<String>,
    /// Target average acceleration [m/s²].
    #[arg(long)]
    pub abar: Option<f64>,
    /// Acceleration parameter [m/s²].
    #[arg(long = "A")]
    pub accel: Option<f64>,
    /// Drive frequency [Hz].
    #[arg(long)]
    pub fd: Option<f64>,
    /// Bath temperature [K].
    #[arg(long = "T")]
    pub temperature: Option<f64>,
    #[arg(long)]
    pub nmax: Option<usize>,
    #[arg(long)]
    pub points: Option<usize>,
    /// Fundamental modulation depth used to set the bias.
    #[arg(long)]
    pub depth: Option<f64>,
    /// Write spectra as a single long-format CSV.
    #[arg(long)]
    pub long: bool,
    /// Worker threads for sweeps.
    #[arg(long, env = "MIRROR_DCE_THREADS")]
    pub threads: Option<usize>,
}

impl Cli {
    /// Configuration from `--config` (if any) with the flags applied on top.
    pub fn config(&self) -> Result<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                parse_config(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?
            }
            None => RunConfig::default(),
        };
        cfg.command = Some(self.command);
        if let Some(k) = &self.kind {
            cfg.trajectory.kind = Some(parse_kind("--kind", k)?);
        }
        if let Some(a) = accel_from("flags", self.accel, self.abar)? {
            cfg.trajectory.accel = Some(a);
        }
        if let Some(fd) = positive("--fd", self.fd)? {
            cfg.trajectory.omega_d = Some(angular(fd));
        }
        if let Some(t) = self.temperature {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("--T: must be non-negative, got {t}")));
            }
            cfg.physics.temperature = t;
        }
        if let Some(n) = self.nmax {
            cfg.physics.n_max = n;
        }
        if let Some(n) = self.points {
            if n < 2 {
                return Err(Error::Config("--points: need at least 2".into()));
            }
            cfg.output.points = n;
        }
        if let Some(d) = positive("--depth", self.depth)? {
            cfg.physics.depth = d;
        }
        if let Some(out) = &self.out {
            cfg.output.path = out.clone();
        }
        if self.long {
            cfg.output.format = OutputFormat::Long;
        }
        Ok(cfg)
    }
}

// ---- dispatch ----------------------------------------------------------------

/// Result of a command: files written and text for stdout.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub stdout: String,
}

/// Writes all artifacts into `dir`. On failure every file written so far is removed.
pub fn write_artifacts(dir: &Path, artifacts: &[Artifact]) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    for a in artifacts {
        let path = dir.join(&a.name);
        let tmp = dir.join(format!(".{}.partial", a.name));
        let res = fs::write(&tmp, &a.contents).and_then(|_| fs::rename(&tmp, &path));
        if let Err(e) = res {
            let _ = fs::remove_file(&tmp);
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(e.into());
        }
        written.push(path);
    }
    Ok(written)
}

fn require_trajectory(cfg: &RunConfig) -> Result<TrajectoryParams> {
    let t = &cfg.trajectory;
    let kind = t.kind.ok_or_else(|| Error::Config("trajectory.kind (or --kind) is required".into()))?;
    let accel = t.accel.ok_or_else(|| Error::Config("trajectory.A or trajectory.abar is required".into()))?;
    let omega_d = t.omega_d.ok_or_else(|| Error::Config("trajectory.fd (or --fd) is required".into()))?;
    let a = accel.resolve(kind, omega_d, cfg.circuit.v)?;
    TrajectoryParams::new(kind, a, omega_d, cfg.circuit.v)
}

fn traj_meta(t: &mut CsvTable, p: &TrajectoryParams) -> Result<()> {
    t.meta("trajectory", p.kind().label());
    t.meta_f64("A", p.accel());
    t.meta_f64("abar", p.average_acceleration()?);
    t.meta_f64("omega_d", p.omega_d());
    t.meta_f64("fd_hz", linear(p.omega_d()));
    t.meta_f64("v", p.v());
    t.meta_f64("proper_period", p.proper_period()?);
    t.meta_f64("relativity", p.relativity_estimator()?);
    Ok(())
}

fn circuit_meta(t: &mut CsvTable, c: &CircuitParams) {
    t.meta_f64("circuit.C_J", c.c_j);
    t.meta_f64("circuit.I_c", c.i_c);
    t.meta_f64("circuit.Z0", c.z0);
    t.meta_f64("circuit.v", c.v);
    t.meta_f64("circuit.omega_s", c.omega_s);
    t.meta_f64("circuit.fs_hz", linear(c.omega_s));
    t.meta_f64("circuit.EJ0_ratio", c.ej0_ratio);
    t.meta_f64("L_eff0", c.effective_length());
}

fn check(report: &ValidityReport) -> Result<()> {
    for issue in report.issues() {
        warn!("{}: {} ({})", issue.name, issue.detail, issue.status);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Error::Constraint(format!("validity checks failed:\n{report}")))
    }
}

/// Biased circuit and drive for the configured worldline, with validity checks
/// at the given probe frequencies.
fn drive_for(
    cfg: &RunConfig,
    p: &TrajectoryParams,
    probes: &[f64],
) -> Result<(CircuitParams, DriveSpectrum)> {
    let c = cfg.physics.bias(&cfg.circuit).apply(&cfg.circuit, p)?;
    let d = trajectory_to_drive(p, &c, cfg.physics.n_max)?;
    let thermal = ThermalInput::new(cfg.physics.temperature)?;
    check(&validate(&d, p, &c, probes, &thermal))?;
    Ok((c, d))
}

fn parse_figure(target: Option<&str>) -> Result<FigureId> {
    let t = target.ok_or_else(|| Error::Config("reproduce needs a preset name, e.g. `fig3`".into()))?;
    t.strip_prefix("fig")
        .and_then(|n| n.parse().ok())
        .and_then(FigureId::from_number)
        .or_else(|| FigureId::ALL.into_iter().find(|f| f.name() == t))
        .ok_or_else(|| Error::Config(format!("unknown preset `{t}` (fig1 ... fig8)")))
}

/// Computes every artifact of a command without touching the file system.
pub fn render(cfg: &RunConfig, target: Option<&str>) -> Result<(Vec<Artifact>, String)> {
    let command = cfg.command.ok_or_else(|| Error::Config("no command given".into()))?;
    match command {
        Command::Traj => {
            let p = require_trajectory(cfg)?;
            let mut t = CsvTable::new(&["t", "tau", "z", "velocity", "alpha"]);
            traj_meta(&mut t, &p)?;
            let n = cfg.output.samples * cfg.output.periods;
            let dt = p.period() / cfg.output.samples as f64;
            for i in 0..=n {
                let time = i as f64 * dt;
                let s = p.sample(time)?;
                t.push_row(vec![
                    fmt_f64(s.t),
                    fmt_f64(s.tau),
                    fmt_f64(s.z),
                    fmt_f64(p.velocity(time)),
                    fmt_f64(s.alpha_dir),
                ]);
            }
            let name = format!("traj_{}.csv", p.kind().label());
            Ok((vec![Artifact { name, contents: t.render() }], String::new()))
        }
        Command::Drive => {
            let p = require_trajectory(cfg)?;
            let (c, d) = drive_for(cfg, &p, &[0.5 * p.omega_d()])?;
            let mut t = CsvTable::new(&["n", "a_n", "b_n", "magnitude"]);
            traj_meta(&mut t, &p)?;
            circuit_meta(&mut t, &c);
            t.meta_f64("a0", d.a0());
            t.meta_f64("E_J", c.ej());
            t.meta("n_max", d.n_max());
            for n in 1..=d.n_max() {
                t.push_row(vec![
                    n.to_string(),
                    fmt_f64(d.cos_coeffs()[n - 1]),
                    fmt_f64(d.sin_coeffs()[n - 1]),
                    fmt_f64(d.magnitude(n)),
                ]);
            }
            let name = format!("drive_{}.csv", p.kind().label());
            Ok((vec![Artifact { name, contents: t.render() }], String::new()))
        }
        Command::Flux => {
            let p = require_trajectory(cfg)?;
            let (c, d) = drive_for(cfg, &p, &[0.5 * p.omega_d()])?;
            let rows = flux_waveform(&d, &c, cfg.output.samples, cfg.output.periods)?;
            let mut t = CsvTable::new(&["t", "phi_ext"]);
            traj_meta(&mut t, &p)?;
            circuit_meta(&mut t, &c);
            t.meta("n_max", d.n_max());
            for (time, phi) in rows {
                t.push_row(vec![fmt_f64(time), fmt_f64(phi)]);
            }
            let name = format!("flux_{}.csv", p.kind().label());
            Ok((vec![Artifact { name, contents: t.render() }], String::new()))
        }
        Command::Spectrum => {
            let p = require_trajectory(cfg)?;
            let wd = p.omega_d();
            let top = cfg
                .physics
                .omega_max
                .unwrap_or_else(|| (cfg.physics.n_max.max(1) as f64 * wd).min(cfg.circuit.omega_s * (1.0 - 1e-6)));
            let n = cfg.output.points;
            let start = top / n as f64;
            drive_for(cfg, &p, &[top])?;
            let spec = SweepSpec {
                figure: FigureId::NoutVsW,
                axis: SweepAxis::Omega,
                grid: Grid::absolute(start, top, n),
                trajectories: vec![TrajectorySpec {
                    kind: p.kind(),
                    accel: AccelTarget::Parameter(p.accel()),
                }],
                drive_frequencies: vec![wd],
                probe_frequencies: vec![],
                temperatures: vec![cfg.physics.temperature],
                n_max: cfg.physics.n_max,
                bias: cfg.physics.bias(&cfg.circuit),
            };
            let sets = run_sweep(&spec, &cfg.circuit)?;
            let stem = format!("spectrum_{}", p.kind().label());
            let arts = match cfg.output.format {
                OutputFormat::PerFile => vec![Artifact { name: format!("{stem}.csv"), contents: sets[0].to_csv() }],
                OutputFormat::Long => spectrum_artifacts(&stem, &sets, OutputFormat::Long),
            };
            Ok((arts, String::new()))
        }
        Command::Sweep => {
            let sc = cfg
                .sweep
                .as_ref()
                .ok_or_else(|| Error::Config("sweep needs a [sweep] block in the config".into()))?;
            let spec = sc.to_spec(cfg)?;
            let sets = run_sweep(&spec, &cfg.circuit)?;
            let stem = format!("sweep_{}", spec.axis.name());
            Ok((spectrum_artifacts(&stem, &sets, cfg.output.format), String::new()))
        }
        Command::Params => {
            let abar = match cfg.trajectory.accel {
                Some(AccelTarget::Average(b)) => b,
                Some(AccelTarget::Parameter(_)) => {
                    return Err(Error::Config("params selects A; give a target `abar` instead".into()))
                }
                None => return Err(Error::Config("params needs `abar` (or --abar)".into())),
            };
            let mut crit = SelectionCriteria::new(abar);
            crit.n_max = cfg.physics.n_max;
            crit.bias = BiasPolicy::FundamentalDepth { depth: cfg.physics.depth, max_ratio: cfg.circuit.ej0_ratio };
            let selections = match cfg.trajectory.kind {
                Some(k) => vec![select_parameters(k, &crit, &cfg.circuit)?],
                None => select_common(&[TrajectoryKind::Sa, TrajectoryKind::Aua], &crit, &cfg.circuit)?,
            };
            let table = SelectionTable { selections: &selections, circuit: &cfg.circuit }.to_string();
            Ok((vec![], table))
        }
        Command::Reproduce => {
            let fig = parse_figure(target)?;
            info!("running preset fig{} ({})", fig.number(), fig.name());
            let arts = reproduce(fig, &cfg.circuit, cfg.output.points, cfg.output.format)?;
            Ok((arts, String::new()))
        }
    }
}

/// Runs a command and writes its artifacts under `cfg.output.path`.
pub fn dispatch(cfg: &RunConfig, target: Option<&str>) -> Result<Outcome> {
    let (artifacts, mut stdout) = render(cfg, target)?;
    let files = write_artifacts(&cfg.output.path, &artifacts)?;
    for f in &files {
        stdout.push_str(&format!("wrote {}\n", f.display()));
    }
    Ok(Outcome { files, stdout })
}

/// Entry point behind `main`: configure, dispatch, report.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let cfg = cli.config()?;
    dispatch(&cfg, cli.target.as_deref())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_uses_reference_circuit() {
        let cfg = parse_config("[circuit]\n").unwrap();
        assert_eq!(cfg.circuit, CircuitParams::default());
    }

    #[test]
    fn both_accelerations_rejected() {
        let err = parse_config("[trajectory]\nkind='sa'\nA=1e19\nabar=2e19\nfd=14.6e9\n").unwrap_err();
        assert!(err.to_string().contains("exactly one"), "{err}");
    }

    #[test]
    fn unknown_key_rejected_with_location() {
        let err = parse_config("[circuit]\nC_J = 9e-14\nIc = 1e-6\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("Ic") && msg.contains("line 3"), "{msg}");
    }

    #[test]
    fn frequencies_are_linear() {
        let cfg = parse_config("[trajectory]\nkind='aua'\nabar=2e19\nfd=14.6e9\n").unwrap();
        assert_eq!(cfg.trajectory.omega_d, Some(angular(14.6e9)));
        let p = require_trajectory(&RunConfig { command: Some(Command::Traj), ..cfg }).unwrap();
        assert_eq!(p.accel(), 20e18);
    }

    #[test]
    fn figure_names() {
        assert_eq!(parse_figure(Some("fig2")).unwrap(), FigureId::Fourier);
        assert_eq!(parse_figure(Some("compare3_w")).unwrap(), FigureId::Compare3W);
        assert!(parse_figure(Some("fig9")).is_err());
        assert!(parse_figure(None).is_err());
    }
}
