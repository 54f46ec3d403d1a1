use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use gaussric_core::suites::{FuzzReport, ScanReport};
use gaussric_core::VerificationReport;
use serde::Serialize;

use crate::args::Format;

/// File stem safe for any entry name, e.g. `small_circle(0.5)` → `small_circle_0.5_`.
pub fn sanitize(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.') { c } else { '_' })
        .collect()
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn finish_csv(path: &Path, wtr: csv::Writer<Vec<u8>>) -> Result<()> {
    let bytes = wtr.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Writes `<stem>.json` / `<stem>.csv` under `dir` and returns the paths written.
fn emit<T: Serialize>(
    dir: &Path,
    stem: &str,
    format: Format,
    value: &T,
    table: impl FnOnce(&mut csv::Writer<Vec<u8>>) -> Result<()>,
) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut written = vec![];
    if format.json() {
        let path = dir.join(format!("{stem}.json"));
        write_json(&path, value)?;
        written.push(path);
    }
    if format.csv() {
        let path = dir.join(format!("{stem}.csv"));
        let mut wtr = csv::Writer::from_writer(vec![]);
        table(&mut wtr)?;
        finish_csv(&path, wtr)?;
        written.push(path);
    }
    Ok(written)
}

pub fn verification(dir: &Path, format: Format, report: &VerificationReport) -> Result<Vec<PathBuf>> {
    let stem = format!("{}_{}", report.suite, sanitize(&report.entry));
    emit(dir, &stem, format, report, |wtr| {
        let names = report.residual_names();
        let dim = report.grid.dim();
        let mut header: Vec<String> = vec!["index".into()];
        header.extend((0..dim).map(|i| format!("u{i}")));
        header.push("edge".into());
        header.extend(names.iter().cloned());
        header.push("pass".into());
        header.push("error".into());
        wtr.write_record(&header)?;
        for row in &report.rows {
            let mut rec = vec![row.index.to_string()];
            rec.extend(row.point.iter().map(|&x| num(x)));
            rec.push(row.edge.to_string());
            rec.extend(names.iter().map(|n| opt(row.residuals.get(n).copied())));
            rec.push(if row.edge { String::new() } else { row.passed().to_string() });
            rec.push(row.error.clone().unwrap_or_default());
            wtr.write_record(&rec)?;
        }
        Ok(())
    })
}

pub fn scan(dir: &Path, format: Format, report: &ScanReport) -> Result<Vec<PathBuf>> {
    let stem = format!("scan-ric_{}", sanitize(&report.entry));
    emit(dir, &stem, format, report, |wtr| {
        wtr.write_record([
            "half_width",
            "points",
            "max_ricci_eigenvalue",
            "min_ricci_eigenvalue",
            "closed_form_max_eigenvalue",
            "all_negative",
            "failed_points",
            "gauss_image_dc_diameter",
        ])?;
        for s in &report.steps {
            wtr.write_record([
                num(s.half_width),
                s.grid.len().to_string(),
                num(s.max_ricci_eigenvalue),
                num(s.min_ricci_eigenvalue),
                opt(s.closed_form_max_eigenvalue),
                s.all_negative.to_string(),
                s.failed_points.to_string(),
                opt(s.gauss_image_dc_diameter),
            ])?;
        }
        Ok(())
    })
}

pub fn fuzz(dir: &Path, stem: &str, format: Format, report: &FuzzReport) -> Result<Vec<PathBuf>> {
    emit(dir, stem, format, report, |wtr| {
        wtr.write_record([
            "m",
            "k",
            "count",
            "violations",
            "max_lemma_excess",
            "max_symmetry",
            "max_pluecker_det",
            "max_det_product",
            "isometry_pairs",
            "max_isometry",
            "max_line_equality",
            "pass",
        ])?;
        for d in &report.dims {
            wtr.write_record([
                d.plane_dim.to_string(),
                d.ambient_dim.to_string(),
                d.count.to_string(),
                d.violations.to_string(),
                opt(d.max_lemma_excess),
                num(d.max_symmetry),
                num(d.max_pluecker_det),
                num(d.max_det_product),
                d.isometry_pairs.to_string(),
                num(d.max_isometry),
                opt(d.max_line_equality),
                d.pass.to_string(),
            ])?;
        }
        Ok(())
    })
}
