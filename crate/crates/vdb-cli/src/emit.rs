//! Plot-ready output files: a CSV with the fixed `m,value,series` header and
//! a JSON mirror carrying the same points plus the full resolved scenario.
//! Numbers in the CSV are printed with 17 significant digits so reruns can
//! be compared byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;

pub struct Series {
    pub name: String,
    pub points: Vec<(u64, f64)>,
}

impl Series {
    pub fn from_values(name: &str, values: &[f64]) -> Self {
        Series {
            name: name.to_string(),
            points: values
                .iter()
                .enumerate()
                .map(|(m, &v)| (m as u64, v))
                .collect(),
        }
    }
}

#[derive(Serialize)]
struct Mirror<'a, S: Serialize> {
    scenario: &'a S,
    columns: [&'static str; 3],
    series: Vec<MirrorSeries<'a>>,
}

#[derive(Serialize)]
struct MirrorSeries<'a> {
    name: &'a str,
    points: &'a [(u64, f64)],
}

/// Write `<basename>.csv` and `<basename>.json` into `out_dir`; returns the
/// two paths.
pub fn emit_curves<S: Serialize>(
    out_dir: &Path,
    basename: &str,
    scenario: &S,
    series: &[Series],
) -> Result<(PathBuf, PathBuf)> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;

    let mut csv = String::from("m,value,series\n");
    for s in series {
        for &(m, v) in &s.points {
            writeln!(csv, "{m},{v:.16e},{}", s.name).unwrap();
        }
    }
    let csv_path = out_dir.join(format!("{basename}.csv"));
    fs::write(&csv_path, csv).with_context(|| format!("writing {}", csv_path.display()))?;

    let mirror = Mirror {
        scenario,
        columns: ["m", "value", "series"],
        series: series
            .iter()
            .map(|s| MirrorSeries {
                name: &s.name,
                points: &s.points,
            })
            .collect(),
    };
    let json_path = out_dir.join(format!("{basename}.json"));
    let mut text = serde_json::to_string_pretty(&mirror)?;
    text.push('\n');
    fs::write(&json_path, text).with_context(|| format!("writing {}", json_path.display()))?;
    Ok((csv_path, json_path))
}

/// Write a standalone JSON document (for results that are not curve sets).
pub fn emit_json<S: Serialize>(out_dir: &Path, basename: &str, doc: &S) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let path = out_dir.join(format!("{basename}.json"));
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}

pub fn emit_text(out_dir: &Path, filename: &str, text: &str) -> Result<PathBuf> {
    fs::create_dir_all(out_dir)
        .with_context(|| format!("creating output directory {}", out_dir.display()))?;
    let path = out_dir.join(filename);
    fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
    Ok(path)
}
