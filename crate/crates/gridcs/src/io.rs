//! File formats: observation and count CSVs, fitted-curve CSVs, and the
//! JSON sidecar that carries a dataset's grid.
//!
//! All CSVs use LF line endings and a fixed header. Floating point values
//! are written in scientific notation with 17 significant digits, which
//! round-trips every f64 exactly.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use gridcs_core::model::{BinnedCounts, GridSpec, ObservationSet, StepEstimate};

use crate::sim::{Battery, EventDist, ScenarioSpec};

/// Exact-round-trip rendering of an f64.
pub(crate) fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Sidecar path for a dataset: the data path with `.meta.json` appended.
pub fn sidecar_path(data_path: &Path) -> PathBuf {
    let mut name = data_path.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

/// Grid and provenance stored alongside a dataset.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DatasetMeta {
    pub grid: GridSpec,
    /// The event-time distribution behind the data, when it was simulated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub event: Option<EventDist>,
    /// The master seed behind the data, when it was simulated.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

pub fn write_meta(data_path: &Path, meta: &DatasetMeta) -> Result<()> {
    let path = sidecar_path(data_path);
    let body = serde_json::to_string_pretty(meta).context("serializing dataset sidecar")?;
    fs::write(&path, body + "\n").with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_meta(data_path: &Path) -> Result<DatasetMeta> {
    let path = sidecar_path(data_path);
    let body = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&body).with_context(|| format!("parsing {}", path.display()))
}

/// Writes raw records as `x,y` rows; `y` is 0 or 1.
pub fn write_observations(path: &Path, observations: &ObservationSet) -> Result<()> {
    let mut out = String::with_capacity(observations.len() * 24 + 4);
    out.push_str("x,y\n");
    for (t, y) in observations.times().iter().zip(observations.events()) {
        out.push_str(&fmt_f64(*t));
        out.push(',');
        out.push(if *y { '1' } else { '0' });
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_observations(path: &Path) -> Result<ObservationSet> {
    let body = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = body.lines().enumerate();
    match lines.next() {
        Some((_, "x,y")) => {}
        Some((_, other)) => bail!("{}: expected header 'x,y', found '{other}'", path.display()),
        None => bail!("{}: empty file", path.display()),
    }
    let mut times = Vec::new();
    let mut events = Vec::new();
    for (index, line) in lines {
        if line.is_empty() {
            continue;
        }
        let row = index + 1;
        let (x, y) = line
            .split_once(',')
            .with_context(|| format!("{} line {row}: expected two fields", path.display()))?;
        let t: f64 = x
            .trim()
            .parse()
            .with_context(|| format!("{} line {row}: bad time '{x}'", path.display()))?;
        let y = match y.trim() {
            "0" => false,
            "1" => true,
            other => bail!(
                "{} line {row}: indicator must be 0 or 1, found '{other}'",
                path.display()
            ),
        };
        times.push(t);
        events.push(y);
    }
    ObservationSet::new(times, events)
        .with_context(|| format!("validating records from {}", path.display()))
}

/// Writes per-grid-point counts as `t,inspections,responses` rows.
pub fn write_binned(path: &Path, binned: &BinnedCounts) -> Result<()> {
    let grid = binned.grid();
    let mut out = String::with_capacity(grid.k() * 32 + 32);
    out.push_str("t,inspections,responses\n");
    for i in 1..=grid.k() {
        out.push_str(&fmt_f64(grid.point(i)));
        out.push(',');
        out.push_str(&binned.counts()[i - 1].to_string());
        out.push(',');
        out.push_str(&binned.responses()[i - 1].to_string());
        out.push('\n');
    }
    fs::write(path, out).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// Reads per-grid-point counts; rows must cover the grid exactly, in order.
pub fn read_binned(path: &Path, grid: &GridSpec) -> Result<BinnedCounts> {
    let body = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = body.lines().enumerate();
    match lines.next() {
        Some((_, "t,inspections,responses")) => {}
        Some((_, other)) => bail!(
            "{}: expected header 't,inspections,responses', found '{other}'",
            path.display()
        ),
        None => bail!("{}: empty file", path.display()),
    }
    let mut counts = Vec::with_capacity(grid.k());
    let mut responses = Vec::with_capacity(grid.k());
    for (index, line) in lines {
        if line.is_empty() {
            continue;
        }
        let row = index + 1;
        let mut fields = line.split(',');
        let (Some(t), Some(n), Some(z), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            bail!("{} line {row}: expected three fields", path.display());
        };
        let t: f64 = t
            .trim()
            .parse()
            .with_context(|| format!("{} line {row}: bad time '{t}'", path.display()))?;
        let expected = counts.len() + 1;
        match grid.snap(t) {
            Some(i) if i == expected => {}
            _ => bail!(
                "{} line {row}: time {t} is not grid point {expected}",
                path.display()
            ),
        }
        counts.push(n.trim().parse().with_context(|| {
            format!("{} line {row}: bad inspection count '{n}'", path.display())
        })?);
        responses.push(
            z.trim().parse().with_context(|| {
                format!("{} line {row}: bad response count '{z}'", path.display())
            })?,
        );
    }
    BinnedCounts::from_parts(*grid, counts, responses)
        .with_context(|| format!("validating counts from {}", path.display()))
}

/// Writes the fitted step function as `t,level` rows.
pub fn write_fit(path: &Path, estimate: &StepEstimate) -> Result<()> {
    fs::write(path, render_fit(estimate)).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// The fitted step function in its CSV form.
pub fn render_fit(estimate: &StepEstimate) -> String {
    let grid = estimate.grid();
    let mut out = String::with_capacity(grid.k() * 48 + 16);
    out.push_str("t,level\n");
    for i in 1..=grid.k() {
        out.push_str(&fmt_f64(grid.point(i)));
        out.push(',');
        out.push_str(&fmt_f64(estimate.levels()[i - 1]));
        out.push('\n');
    }
    out
}

/// Reads a battery of scenarios, or a single scenario, from a JSON file.
pub fn read_battery(path: &Path) -> Result<Battery> {
    let body = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    if let Ok(battery) = serde_json::from_str::<Battery>(&body) {
        return Ok(battery);
    }
    let single: ScenarioSpec = serde_json::from_str(&body).with_context(|| {
        format!(
            "parsing {}: neither a battery nor a single scenario",
            path.display()
        )
    })?;
    Ok(Battery {
        scenarios: vec![single],
    })
}
