//! CSV datasets: `# mirror-dce v1`, `# key=value` metadata, then a header row
//! and data rows. Floats are written with 17 significant digits so every file
//! parses back to the same bits.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trajectories::TrajectoryKind;

pub const FORMAT_TAG: &str = "# mirror-dce v1";

/// Fixed float formatting used for every emitted number.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Compact decimal used in file names (`14.6`, `0`, `25`).
pub fn fmt_short(x: f64) -> String {
    let s = format!("{x:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-0" {
        "0".into()
    } else {
        s.replace('.', "p")
    }
}

/// Generic metadata + column table.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CsvTable {
    pub metadata: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl CsvTable {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            metadata: BTreeMap::new(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn meta(&mut self, key: impl Into<String>, value: impl ToString) -> &mut Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    pub fn meta_f64(&mut self, key: impl Into<String>, value: f64) -> &mut Self {
        self.metadata.insert(key.into(), fmt_f64(value));
        self
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(FORMAT_TAG);
        out.push('\n');
        for (k, v) in &self.metadata {
            let v = v.replace(['\n', '\r'], " ");
            let _ = writeln!(out, "# {k}={v}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate();
        match lines.next() {
            Some((_, l)) if l.trim_end() == FORMAT_TAG => {}
            _ => return Err(Error::Parse { line: 1, msg: format!("expected `{FORMAT_TAG}`") }),
        }
        let mut table = CsvTable::default();
        let mut header = false;
        for (i, line) in lines {
            let line = line.trim_end_matches('\r');
            if let Some(rest) = line.strip_prefix('#') {
                if header {
                    return Err(Error::Parse { line: i + 1, msg: "metadata after header".into() });
                }
                let rest = rest.strip_prefix(' ').unwrap_or(rest);
                let (k, v) = rest.split_once('=').ok_or_else(|| Error::Parse {
                    line: i + 1,
                    msg: "metadata line without `=`".into(),
                })?;
                table.metadata.insert(k.to_string(), v.to_string());
            } else if line.is_empty() {
                continue;
            } else if !header {
                table.columns = line.split(',').map(str::to_string).collect();
                header = true;
            } else {
                let row: Vec<String> = line.split(',').map(str::to_string).collect();
                if row.len() != table.columns.len() {
                    return Err(Error::Parse {
                        line: i + 1,
                        msg: format!("{} fields, expected {}", row.len(), table.columns.len()),
                    });
                }
                table.rows.push(row);
            }
        }
        if !header {
            return Err(Error::Parse { line: 1, msg: "missing column header".into() });
        }
        Ok(table)
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }
}

fn parse_f64(s: &str, line: usize) -> Result<f64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse { line, msg: format!("not a number: `{s}`") })
}

/// Independent variable of a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    /// Output frequency ω [rad/s].
    Omega,
    /// Drive frequency ω_d [rad/s].
    OmegaD,
    /// Average proper acceleration ā [m/s²].
    Abar,
}

impl SweepAxis {
    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::Omega => "omega",
            SweepAxis::OmegaD => "omega_d",
            SweepAxis::Abar => "abar",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            SweepAxis::Abar => "m/s^2",
            _ => "rad/s",
        }
    }
}

impl FromStr for SweepAxis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" | "w" => Ok(SweepAxis::Omega),
            "omega_d" | "wd" => Ok(SweepAxis::OmegaD),
            "abar" => Ok(SweepAxis::Abar),
            _ => Err(Error::Config(format!("unknown sweep axis `{s}` (omega, omega_d, abar)"))),
        }
    }
}

/// Output spectrum along one axis for one trajectory and bath temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumDataset {
    pub axis: SweepAxis,
    pub trajectory: TrajectoryKind,
    /// Bath temperature [K].
    pub temperature: f64,
    /// `(x, n_out)` in grid order.
    pub points: Vec<(f64, f64)>,
    pub metadata: BTreeMap<String, String>,
}

impl SpectrumDataset {
    /// Builds a dataset and records the identifying fields in its metadata.
    pub fn new(
        axis: SweepAxis,
        trajectory: TrajectoryKind,
        temperature: f64,
        points: Vec<(f64, f64)>,
        mut metadata: BTreeMap<String, String>,
    ) -> Self {
        metadata.insert("axis".into(), axis.name().into());
        metadata.insert("x_unit".into(), axis.unit().into());
        metadata.insert("trajectory".into(), trajectory.label().into());
        metadata.insert("temperature".into(), fmt_f64(temperature));
        Self { axis, trajectory, temperature, points, metadata }
    }

    pub fn to_table(&self) -> CsvTable {
        let mut t = CsvTable::new(&["x", "n_out"]);
        t.metadata = self.metadata.clone();
        t.metadata.insert("axis".into(), self.axis.name().into());
        t.metadata.insert("x_unit".into(), self.axis.unit().into());
        t.metadata.insert("trajectory".into(), self.trajectory.label().into());
        t.metadata.insert("temperature".into(), fmt_f64(self.temperature));
        for &(x, n) in &self.points {
            t.push_row(vec![fmt_f64(x), fmt_f64(n)]);
        }
        t
    }

    pub fn to_csv(&self) -> String {
        self.to_table().render()
    }

    pub fn from_table(t: &CsvTable) -> Result<Self> {
        let get = |k: &str| {
            t.metadata
                .get(k)
                .ok_or_else(|| Error::Parse { line: 1, msg: format!("missing metadata `{k}`") })
        };
        let axis: SweepAxis = get("axis")?.parse()?;
        let trajectory: TrajectoryKind = get("trajectory")?
            .parse()
            .map_err(|e| Error::Parse { line: 1, msg: format!("{e}") })?;
        let temperature = parse_f64(get("temperature")?, 1)?;
        let (xi, ni) = match (t.column("x"), t.column("n_out")) {
            (Some(x), Some(n)) => (x, n),
            _ => return Err(Error::Parse { line: 1, msg: "columns `x,n_out` required".into() }),
        };
        let header_lines = 2 + t.metadata.len();
        let points = t
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let line = header_lines + i + 1;
                Ok((parse_f64(&r[xi], line)?, parse_f64(&r[ni], line)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { axis, trajectory, temperature, points, metadata: t.metadata.clone() })
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        Self::from_table(&CsvTable::parse(text)?)
    }
}

/// Packs several datasets into one long-format table with columns
/// `x,n_out,trajectory,temperature`. Metadata shared by every series is kept
/// unprefixed; the rest is stored as `series.NNN.key`.
pub fn to_long_table(sets: &[SpectrumDataset]) -> CsvTable {
    let mut t = CsvTable::new(&["x", "n_out", "trajectory", "temperature"]);
    let mut common: BTreeMap<String, String> = sets.first().map(|s| s.metadata.clone()).unwrap_or_default();
    for s in sets.iter().skip(1) {
        common.retain(|k, v| s.metadata.get(k) == Some(v));
    }
    common.retain(|k, _| !k.starts_with("series."));
    t.metadata = common.clone();
    t.meta("series.count", sets.len());
    for (i, s) in sets.iter().enumerate() {
        t.meta(format!("series.{i:03}.rows"), s.points.len());
        for (k, v) in &s.metadata {
            if !common.contains_key(k) {
                t.meta(format!("series.{i:03}.{k}"), v);
            }
        }
        let temp = fmt_f64(s.temperature);
        for &(x, n) in &s.points {
            t.push_row(vec![fmt_f64(x), fmt_f64(n), s.trajectory.label().into(), temp.clone()]);
        }
    }
    t
}

pub fn from_long_table(t: &CsvTable) -> Result<Vec<SpectrumDataset>> {
    let count: usize = t
        .metadata
        .get("series.count")
        .and_then(|c| c.parse().ok())
        .ok_or_else(|| Error::Parse { line: 1, msg: "missing `series.count`".into() })?;
    let common: BTreeMap<String, String> = t
        .metadata
        .iter()
        .filter(|(k, _)| !k.starts_with("series."))
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect();
    let mut out = Vec::with_capacity(count);
    let mut offset = 0usize;
    for i in 0..count {
        let prefix = format!("series.{i:03}.");
        let rows: usize = t
            .metadata
            .get(&format!("{prefix}rows"))
            .and_then(|r| r.parse().ok())
            .ok_or_else(|| Error::Parse { line: 1, msg: format!("missing `{prefix}rows`") })?;
        let mut meta = common.clone();
        for (k, v) in &t.metadata {
            if let Some(key) = k.strip_prefix(&prefix) {
                if key != "rows" {
                    meta.insert(key.to_string(), v.clone());
                }
            }
        }
        if offset + rows > t.rows.len() {
            return Err(Error::Parse { line: 1, msg: format!("series {i} runs past the end of the table") });
        }
        let mut sub = CsvTable::new(&["x", "n_out"]);
        sub.metadata = meta;
        for r in &t.rows[offset..offset + rows] {
            sub.push_row(vec![r[0].clone(), r[1].clone()]);
        }
        out.push(SpectrumDataset::from_table(&sub)?);
        offset += rows;
    }
    if offset != t.rows.len() {
        return Err(Error::Parse { line: 1, msg: "rows not covered by any series".into() });
    }
    Ok(out)
}
