//! CSV and chart files.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::phase::PhaseGrid;

use super::config::{Observable, ScenarioConfig};
use super::runner::{DispersionPoint, ObservableRow, ScenarioOutput};
use super::svg;

pub const CSV_HEADER: &str = "axis,concurrence,r_n,r_psi,entropy_sum,p1,p2,p3";
pub const POLE: &str = "pole";

/// Twelve significant digits in scientific notation.
pub fn format_value(x: f64) -> String {
    // Avoid printing a negative zero.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.11e}")
}

pub fn observables_csv(rows: &[ObservableRow]) -> String {
    let mut out = String::with_capacity(rows.len() * 128);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&format_value(row.axis));
        match &row.values {
            Some(v) => {
                for x in [
                    v.concurrence,
                    v.r_n,
                    v.r_psi,
                    v.entropy_sum,
                    v.populations[0],
                    v.populations[1],
                    v.populations[2],
                ] {
                    out.push(',');
                    out.push_str(&format_value(x));
                }
            }
            None => {
                for _ in 0..7 {
                    out.push(',');
                    out.push_str(POLE);
                }
            }
        }
        out.push('\n');
    }
    out
}

pub fn phase_grid_csv(grid: &PhaseGrid) -> String {
    let mut out = String::from("theta,p_theta\n");
    for (t, p) in grid.theta.iter().zip(&grid.values) {
        let _ = writeln!(out, "{},{}", format_value(*t), format_value(*p));
    }
    out
}

pub fn dispersion_csv(points: &[DispersionPoint]) -> String {
    let mut out = String::from("omega_ratio,k_par\n");
    for p in points {
        for k in &p.k_par {
            let _ = writeln!(out, "{},{}", format_value(p.omega_ratio), format_value(*k));
        }
    }
    out
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

pub fn emit_csv(rows: &[ObservableRow], path: &Path) -> Result<()> {
    write(path, &observables_csv(rows))
}

pub fn emit_phase_grid(grid: &PhaseGrid, path: &Path) -> Result<()> {
    write(path, &phase_grid_csv(grid))
}

/// Writes every output of a run under `dir` and returns the files written.
pub fn write_outputs(
    config: &ScenarioConfig,
    output: &ScenarioOutput,
    dir: &Path,
    svg_enabled: bool,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();

    let csv = dir.join("observables.csv");
    emit_csv(&output.rows, &csv)?;
    written.push(csv);

    if !output.phase.is_empty() {
        let phase_dir = dir.join("phase");
        fs::create_dir_all(&phase_dir).map_err(|e| Error::io(&phase_dir, e))?;
        let mut index = String::from("index,axis,file\n");
        for snap in &output.phase {
            let name = format!("phase_{:05}.csv", snap.index);
            let path = phase_dir.join(&name);
            emit_phase_grid(&snap.grid, &path)?;
            let _ = writeln!(index, "{},{},{name}", snap.index, format_value(snap.axis));
            written.push(path);
        }
        let path = phase_dir.join("index.csv");
        write(&path, &index)?;
        written.push(path);
    }

    if !output.dispersion.is_empty() {
        let path = dir.join("dispersion.csv");
        write(&path, &dispersion_csv(&output.dispersion))?;
        written.push(path);
    }

    if svg_enabled {
        let axis_label = format!("{:?}", config.sweep.axis).to_lowercase();
        for obs in &config.output.observables {
            let (name, series): (&str, Vec<Vec<Option<f64>>>) = match obs {
                Observable::Concurrence => ("concurrence", vec![column(output, |v| v.concurrence)]),
                Observable::RN => ("r_n", vec![column(output, |v| v.r_n)]),
                Observable::RPsi => ("r_psi", vec![column(output, |v| v.r_psi)]),
                Observable::EntropySum => ("entropy_sum", vec![column(output, |v| v.entropy_sum)]),
                Observable::Populations => (
                    "populations",
                    (0..3)
                        .map(|i| column(output, move |v| v.populations[i]))
                        .collect(),
                ),
                Observable::PhaseGrid => continue,
            };
            let xs: Vec<f64> = output.rows.iter().map(|r| r.axis).collect();
            let path = dir.join(format!("{name}.svg"));
            write(&path, &svg::line_chart(name, &axis_label, &xs, &series))?;
            written.push(path);
        }
        for snap in &output.phase {
            let path = dir.join("phase").join(format!("phase_{:05}.svg", snap.index));
            let series = vec![snap.grid.values.iter().copied().map(Some).collect()];
            let title = format!("P(theta) at {}", format_value(snap.axis));
            write(&path, &svg::line_chart(&title, "theta", &snap.grid.theta, &series))?;
            written.push(path);
        }
    }
    Ok(written)
}

fn column(
    output: &ScenarioOutput,
    f: impl Fn(&super::runner::RowValues) -> f64,
) -> Vec<Option<f64>> {
    output.rows.iter().map(|r| r.values.as_ref().map(&f)).collect()
}
