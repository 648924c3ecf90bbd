//! Named presets for the eight figure classes and their CSV artifacts.

use serde::{Deserialize, Serialize};

use super::dataset::{fmt_f64, fmt_short, to_long_table, CsvTable, SpectrumDataset};
use super::sweep::{
    run_sweep, AccelTarget, BiasPolicy, FigureId, Grid, SweepSpec, TrajectorySpec,
};
use super::SweepAxis;
use crate::circuit::{CircuitParams, DEFAULT_N_MAX};
use crate::constants::{angular, linear};
use crate::error::{Error, Result};
use crate::numerics::{fourier_decompose, DEFAULT_SAMPLES};
use crate::trajectories::{solve_acceleration_parameter, TrajectoryKind, TrajectoryParams};

/// Drive frequency of the selected SA/AUA parameter set [Hz].
pub const SELECTED_FD: f64 = 14.6e9;
/// SA acceleration parameter α of the selected set [m/s²].
pub const SELECTED_SA_ALPHA: f64 = 13.725e18;
/// AUA acceleration parameter a of the selected set [m/s²].
pub const SELECTED_AUA_A: f64 = 20e18;
/// Average acceleration of the selected set [m/s²].
pub const SELECTED_ABAR: f64 = 20e18;
/// Average acceleration of the SM reference motion (R = 0.11 mm at 18 GHz) [m/s²].
pub const SM_REFERENCE_ABAR: f64 = 9.054e17;

/// Output layout for spectrum datasets.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    /// One file per curve.
    #[default]
    PerFile,
    /// A single long-format file.
    Long,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per-file" | "per_file" => Ok(OutputFormat::PerFile),
            "long" => Ok(OutputFormat::Long),
            _ => Err(Error::Config(format!("unknown output format `{s}` (per-file, long)"))),
        }
    }
}

/// A file to be written: name relative to the output directory, and contents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

/// One period of `z(t)` and `α(t)` for all three kinds at the same `ā` and `ω_d`.
pub fn worldline_dataset(abar: f64, omega_d: f64, v: f64, points: usize) -> Result<CsvTable> {
    if points < 2 {
        return Err(Error::param("points", "need at least 2"));
    }
    let mut t = CsvTable::new(&["t", "z", "alpha", "trajectory"]);
    t.meta("figure", FigureId::Worldlines.name());
    t.meta_f64("abar", abar);
    t.meta_f64("omega_d", omega_d);
    t.meta_f64("fd_hz", linear(omega_d));
    t.meta_f64("v", v);
    t.meta("points", points);
    for kind in TrajectoryKind::ALL {
        let a = solve_acceleration_parameter(kind, abar, omega_d, v)?;
        let p = TrajectoryParams::new(kind, a, omega_d, v)?;
        t.meta_f64(format!("{}.A", kind.label()), a);
        let period = p.period();
        for i in 0..points {
            let time = period * i as f64 / (points - 1) as f64;
            t.push_row(vec![
                fmt_f64(time),
                fmt_f64(p.position(time)),
                fmt_f64(p.directional_acceleration(time)),
                kind.label().into(),
            ]);
        }
    }
    Ok(t)
}

/// Position Fourier coefficients `ã_n, b̃_n` [m] for each worldline.
pub fn fourier_dataset(params: &[TrajectoryParams], n_max: usize) -> Result<CsvTable> {
    let mut t = CsvTable::new(&["n", "a_n", "b_n", "magnitude", "trajectory"]);
    t.meta("figure", FigureId::Fourier.name());
    t.meta("n_max", n_max);
    let samples = DEFAULT_SAMPLES.max(8 * n_max);
    t.meta("fourier_samples", samples);
    for p in params {
        let label = p.kind().label();
        let s = fourier_decompose(|x| p.position(x), p.omega_d(), n_max, samples)?;
        t.meta_f64(format!("{label}.A"), p.accel());
        t.meta_f64(format!("{label}.omega_d"), p.omega_d());
        t.meta_f64(format!("{label}.fd_hz"), linear(p.omega_d()));
        t.meta_f64(format!("{label}.a0"), s.a0);
        t.meta(format!("{label}.aliasing_warning"), s.aliasing_warning);
        for n in 1..=n_max {
            t.push_row(vec![
                n.to_string(),
                fmt_f64(s.a[n - 1]),
                fmt_f64(s.b[n - 1]),
                fmt_f64(s.magnitude(n)),
                label.into(),
            ]);
        }
    }
    Ok(t)
}

/// Selected SA and AUA worldlines at 14.6 GHz.
pub fn selected_params(v: f64) -> Result<Vec<TrajectoryParams>> {
    let wd = angular(SELECTED_FD);
    Ok(vec![
        TrajectoryParams::new(TrajectoryKind::Sa, SELECTED_SA_ALPHA, wd, v)?,
        TrajectoryParams::new(TrajectoryKind::Aua, SELECTED_AUA_A, wd, v)?,
    ])
}

fn sa_aua_fixed() -> Vec<TrajectorySpec> {
    vec![
        TrajectorySpec { kind: TrajectoryKind::Sa, accel: AccelTarget::Parameter(SELECTED_SA_ALPHA) },
        TrajectorySpec { kind: TrajectoryKind::Aua, accel: AccelTarget::Parameter(SELECTED_AUA_A) },
    ]
}

fn all_average(abar: f64) -> Vec<TrajectorySpec> {
    TrajectoryKind::ALL
        .iter()
        .map(|&kind| TrajectorySpec { kind, accel: AccelTarget::Average(abar) })
        .collect()
}

/// Sweep definition of figures 3-8.
pub fn preset_sweep(figure: FigureId, points: usize) -> Option<SweepSpec> {
    let n = points as f64;
    let wd3 = angular(SELECTED_FD);
    let spec = match figure {
        FigureId::Worldlines | FigureId::Fourier => return None,
        FigureId::NoutVsWT => SweepSpec {
            figure,
            axis: SweepAxis::Omega,
            grid: Grid::relative(2.5 / n, 2.5, points),
            trajectories: sa_aua_fixed(),
            drive_frequencies: vec![wd3],
            probe_frequencies: vec![],
            temperatures: vec![0.0, 0.025, 0.05],
            n_max: DEFAULT_N_MAX,
            bias: BiasPolicy::REFERENCE,
        },
        FigureId::NoutVsW => SweepSpec {
            figure,
            axis: SweepAxis::Omega,
            grid: Grid::relative(2.4 / n, 2.4, points),
            trajectories: sa_aua_fixed(),
            drive_frequencies: vec![angular(15e9), angular(5e9)],
            probe_frequencies: vec![],
            temperatures: vec![0.0, 0.025],
            n_max: DEFAULT_N_MAX,
            bias: BiasPolicy::REFERENCE,
        },
        FigureId::NoutVsWd => SweepSpec {
            figure,
            axis: SweepAxis::OmegaD,
            grid: Grid::absolute(angular(5e9), angular(35e9), points),
            trajectories: vec![
                TrajectorySpec { kind: TrajectoryKind::Sa, accel: AccelTarget::Average(SELECTED_ABAR) },
                TrajectorySpec { kind: TrajectoryKind::Aua, accel: AccelTarget::Average(SELECTED_ABAR) },
            ],
            drive_frequencies: vec![],
            probe_frequencies: vec![angular(5e9), angular(9e9)],
            temperatures: vec![0.0, 0.025],
            n_max: DEFAULT_N_MAX,
            bias: BiasPolicy::REFERENCE,
        },
        FigureId::NoutVsAbar => SweepSpec {
            figure,
            axis: SweepAxis::Abar,
            grid: Grid::absolute(5e18, 30e18, points),
            trajectories: sa_aua_fixed(),
            drive_frequencies: vec![wd3],
            probe_frequencies: vec![0.25 * wd3, 0.5 * wd3, 0.75 * wd3],
            temperatures: vec![0.0, 0.025],
            n_max: DEFAULT_N_MAX,
            bias: BiasPolicy::REFERENCE,
        },
        FigureId::Compare3W => SweepSpec {
            figure,
            axis: SweepAxis::Omega,
            // open interval (0, ω_d)
            grid: Grid::relative(1.0 / (n + 1.0), n / (n + 1.0), points),
            trajectories: all_average(SM_REFERENCE_ABAR),
            drive_frequencies: vec![angular(18e9)],
            probe_frequencies: vec![],
            temperatures: vec![0.0],
            n_max: DEFAULT_N_MAX,
            bias: BiasPolicy::REFERENCE,
        },
        FigureId::Compare3Abar => SweepSpec {
            figure,
            axis: SweepAxis::Abar,
            grid: Grid::absolute(1e17, 2e18, points),
            trajectories: all_average(SM_REFERENCE_ABAR),
            drive_frequencies: vec![angular(18e9)],
            probe_frequencies: vec![angular(9e9)],
            temperatures: vec![0.0],
            n_max: DEFAULT_N_MAX,
            bias: BiasPolicy::REFERENCE,
        },
    };
    Some(spec)
}

/// File stem of one curve: figure, trajectory, temperature and fixed frequencies.
pub fn series_name(d: &SpectrumDataset) -> String {
    let mut name = format!(
        "{}_{}_T{}mK",
        d.metadata.get("figure").map(String::as_str).unwrap_or("sweep"),
        d.trajectory.label(),
        fmt_short(d.temperature * 1e3)
    );
    for (key, tag) in [("fd_hz", "fd"), ("f_hz", "f")] {
        if let Some(hz) = d.metadata.get(key).and_then(|s| s.parse::<f64>().ok()) {
            name.push_str(&format!("_{tag}{}GHz", fmt_short(hz * 1e-9)));
        }
    }
    name
}

/// CSV artifacts for a set of spectra.
pub fn spectrum_artifacts(stem: &str, sets: &[SpectrumDataset], format: OutputFormat) -> Vec<Artifact> {
    match format {
        OutputFormat::Long => vec![Artifact {
            name: format!("{stem}.csv"),
            contents: to_long_table(sets).render(),
        }],
        OutputFormat::PerFile => sets
            .iter()
            .map(|d| Artifact { name: format!("{}.csv", series_name(d)), contents: d.to_csv() })
            .collect(),
    }
}

/// Runs figure preset `figure` and renders its artifacts.
pub fn reproduce(
    figure: FigureId,
    c: &CircuitParams,
    points: usize,
    format: OutputFormat,
) -> Result<Vec<Artifact>> {
    let stem = format!("fig{}_{}", figure.number(), figure.name());
    match figure {
        FigureId::Worldlines => {
            let t = worldline_dataset(1.2e19, angular(28e9), c.v, points)?;
            Ok(vec![Artifact { name: format!("{stem}.csv"), contents: t.render() }])
        }
        FigureId::Fourier => {
            let t = fourier_dataset(&selected_params(c.v)?, 10)?;
            Ok(vec![Artifact { name: format!("{stem}.csv"), contents: t.render() }])
        }
        _ => {
            let spec = preset_sweep(figure, points).expect("sweep figure");
            let sets = run_sweep(&spec, c)?;
            Ok(spectrum_artifacts(&stem, &sets, format))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn worldlines_are_periodic() {
        let t = worldline_dataset(1.2e19, angular(28e9), CircuitParams::default().v, 101).unwrap();
        assert_eq!(t.rows.len(), 303);
        for k in 0..3 {
            let first: f64 = t.rows[k * 101][1].parse().unwrap();
            let last: f64 = t.rows[k * 101 + 100][1].parse().unwrap();
            let scale: f64 = t.rows[k * 101..k * 101 + 101]
                .iter()
                .map(|r| r[1].parse::<f64>().unwrap().abs())
                .fold(0.0, f64::max);
            assert!((first - last).abs() <= 1e-9 * scale);
        }
        // AUA acceleration magnitude is constant
        for r in &t.rows[202..] {
            let a: f64 = r[2].parse().unwrap();
            assert!((a.abs() / 1.2e19 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn every_sweep_preset_validates() {
        for f in FigureId::ALL {
            if let Some(s) = preset_sweep(f, 11) {
                s.validate().unwrap();
            }
        }
    }

    #[test]
    fn names_are_unique() {
        let spec = preset_sweep(FigureId::NoutVsW, 5).unwrap();
        let sets = run_sweep(&spec, &CircuitParams::default()).unwrap();
        let arts = spectrum_artifacts("fig4", &sets, OutputFormat::PerFile);
        let mut names: Vec<_> = arts.iter().map(|a| a.name.clone()).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), sets.len());
        assert!(names.contains(&"nout_vs_w_SA_T25mK_fd15GHz.csv".to_string()));
    }
}
