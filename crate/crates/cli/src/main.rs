mod args;
mod output;

use std::fmt;
use std::fs;
use std::process::ExitCode;

use anyhow::{anyhow, Result};
use clap::Parser;
use gaussric_core::catalog::CatalogError;
use gaussric_core::{
    canonical_distance, grassmann_fuzz, principal_cosines, scan_ric, sphere_distance_embedded,
    spherical_distance, verify_corollary_minimal, verify_corollary_sphere, Catalog, Grid,
    MinimalIn, OrientedPlane, Tolerances, VerificationReport,
};
use gaussric_core::pluecker_embed;
use serde::Deserialize;
use serde_json::json;

use args::{Cli, Command, DistanceArgs, FuzzArgs, ScanArgs, Suite, VerifyArgs};

const DEFAULT_DIMS: [(usize, usize); 4] = [(1, 3), (2, 4), (2, 5), (3, 6)];

/// Bad flags, malformed input or unknown entries: exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    anyhow::Error::new(UsageError(msg.into()))
}

fn catalog_error(e: CatalogError) -> anyhow::Error {
    match e {
        CatalogError::UnknownEntry { .. } | CatalogError::BadParameter { .. } => usage(e.to_string()),
        other => anyhow!(other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Distance(a) => cmd_distance(a).map(|()| true),
        Command::ScanRic(a) => cmd_scan(a),
        Command::Fuzz(a) => cmd_fuzz(a),
        Command::List => cmd_list().map(|()| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) if e.is::<UsageError>() => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

/// "41x41" → [41, 41]; a single number is allowed for curves.
fn parse_resolution(spec: &str, dim: usize) -> Result<Vec<usize>> {
    let parts = spec
        .split(['x', 'X'])
        .map(|p| p.trim().parse::<usize>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(format!("bad --grid {spec:?}: {e}")))?;
    if parts.len() != dim {
        return Err(usage(format!("--grid {spec:?} has {} axes, entry has {dim}", parts.len())));
    }
    if parts.iter().any(|&n| n < 2) {
        return Err(usage("--grid needs at least 2 points per axis"));
    }
    Ok(parts)
}

/// "lo0,hi0,lo1,hi1" → (lower, upper).
fn parse_box(spec: &str, dim: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let values = spec
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| usage(format!("bad --box {spec:?}: {e}")))?;
    if values.len() != 2 * dim {
        return Err(usage(format!("--box {spec:?} needs {} numbers", 2 * dim)));
    }
    let lower: Vec<f64> = values.iter().step_by(2).copied().collect();
    let upper: Vec<f64> = values.iter().skip(1).step_by(2).copied().collect();
    if lower.iter().zip(&upper).any(|(l, u)| !(l < u)) {
        return Err(usage(format!("--box {spec:?} is empty")));
    }
    Ok((lower, upper))
}

/// "2x4" → (2, 4).
fn parse_dims(spec: &str) -> Result<(usize, usize)> {
    let bad = || usage(format!("bad dimensions {spec:?}, expected MxK"));
    let (m, k) = spec.split_once(['x', 'X']).ok_or_else(bad)?;
    let m: usize = m.trim().parse().map_err(|_| bad())?;
    let k: usize = k.trim().parse().map_err(|_| bad())?;
    if m == 0 || m > k {
        return Err(usage(format!("cannot sample {m}-planes in R^{k}")));
    }
    Ok((m, k))
}

fn entry_grid(default: &Grid, grid: Option<&str>, bbox: Option<&str>) -> Result<Grid> {
    let mut g = default.clone();
    if let Some(spec) = grid {
        g = g.with_resolution(parse_resolution(spec, g.dim())?)?;
    }
    if let Some(spec) = bbox {
        let (lower, upper) = parse_box(spec, g.dim())?;
        g = g.with_box(lower, upper)?;
    }
    Ok(g)
}

fn print_verification(report: &VerificationReport) {
    let s = &report.summary;
    let status = if s.pass { "PASS" } else { "FAIL" };
    println!(
        "{status} {} {}: {} points ({} edge, {} failed)",
        report.suite, report.entry, report.rows.len(), s.edge_points, s.failed_points
    );
    for (name, value) in &s.max_residual {
        println!("    max {name:<18} {value:.3e}");
    }
    if let (Some(lo), Some(hi)) = (s.min_ricci_eigenvalue, s.max_ricci_eigenvalue) {
        println!("    Ric eigenvalues      [{lo:.6e}, {hi:.6e}]");
    }
    if let Some(d) = s.gauss_image_dc_diameter {
        println!("    Gauss image d_c diameter (sampled, {} points) {d:.6}", s.gauss_image_sample_points);
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<bool> {
    if a.suite == Suite::Grassmann {
        if a.grid.is_some() || a.bbox.is_some() {
            return Err(usage("--grid and --box do not apply to the grassmann suite"));
        }
        let dims = if a.entries.is_empty() {
            DEFAULT_DIMS.to_vec()
        } else {
            a.entries.iter().map(|s| parse_dims(s)).collect::<Result<Vec<_>>>()?
        };
        return run_fuzz(a.count, &dims, a.seed, &a.output, "grassmann");
    }

    let catalog = Catalog::builtin();
    let wanted = match a.suite {
        Suite::Euclid => MinimalIn::Euclidean,
        _ => MinimalIn::Sphere,
    };
    let names = if a.entries.is_empty() {
        catalog
            .entries()
            .iter()
            .filter(|e| e.minimal_in == wanted)
            .map(|e| e.name.clone())
            .collect()
    } else {
        a.entries.clone()
    };
    let entries = names
        .iter()
        .map(|n| catalog.get(n).map_err(catalog_error))
        .collect::<Result<Vec<_>>>()?;

    let mut all_pass = true;
    for entry in &entries {
        let grid = entry_grid(&entry.default_grid, a.grid.as_deref(), a.bbox.as_deref())?;
        let mut tol = Tolerances::defaults(entry.immersion.has_analytic_derivatives());
        if let Some(t) = a.tol_id {
            tol.identity = t;
        }
        if let Some(t) = a.tol_min {
            tol.minimal = t;
        }
        let report = match a.suite {
            Suite::Euclid => verify_corollary_minimal(&entry.immersion, &grid, &tol),
            _ => {
                let nested = entry
                    .nested()
                    .ok_or_else(|| usage(format!("{} does not lie on the unit sphere", entry.name)))?;
                verify_corollary_sphere(&nested, &grid, &tol)
            }
        };
        print_verification(&report);
        for path in output::verification(&a.output.out, a.output.format, &report)? {
            println!("    wrote {}", path.display());
        }
        all_pass &= report.passed();
    }
    Ok(all_pass)
}

fn run_fuzz(
    count: u64,
    dims: &[(usize, usize)],
    seed: u64,
    out: &args::OutputArgs,
    stem: &str,
) -> Result<bool> {
    let report = grassmann_fuzz(count, dims, seed).map_err(|e| usage(e.to_string()))?;
    for d in &report.dims {
        let status = if d.pass { "PASS" } else { "FAIL" };
        println!(
            "{status} {}x{}: {} pairs, {} violations, max(d_s - d_c) {}",
            d.plane_dim,
            d.ambient_dim,
            d.count,
            d.violations,
            d.max_lemma_excess.map_or("-".to_string(), |v| format!("{v:.3e}"))
        );
        for f in &d.failures {
            println!("    {} residual {:.3e}: {}", f.check, f.residual, f.reproduce);
        }
    }
    for path in output::fuzz(&out.out, stem, out.format, &report)? {
        println!("    wrote {}", path.display());
    }
    Ok(report.pass)
}

fn cmd_fuzz(a: FuzzArgs) -> Result<bool> {
    let dims = a.dims.iter().map(|s| parse_dims(s)).collect::<Result<Vec<_>>>()?;
    run_fuzz(a.count, &dims, a.seed, &a.output, "fuzz")
}

fn cmd_scan(a: ScanArgs) -> Result<bool> {
    let entry = Catalog::builtin().get(&a.entry).map_err(catalog_error)?;
    if entry.minimal_in != MinimalIn::Euclidean {
        return Err(usage(format!("{} is not a minimal submanifold of Euclidean space", entry.name)));
    }
    let resolution = a
        .grid
        .as_deref()
        .map(|g| parse_resolution(g, entry.default_grid.dim()))
        .transpose()?;
    let report = scan_ric(&entry, &a.half_widths, resolution).map_err(|e| usage(e.to_string()))?;
    println!("scan-ric {}", report.entry);
    for s in &report.steps {
        let closed = s
            .closed_form_max_eigenvalue
            .map_or(String::new(), |c| format!("  closed form {c:.6e}"));
        let diameter = s
            .gauss_image_dc_diameter
            .map_or("-".to_string(), |d| format!("{d:.6}"));
        println!(
            "    V = {:<6} max Ric eigenvalue {:.6e}{closed}  d_c diameter {diameter}",
            s.half_width, s.max_ricci_eigenvalue
        );
    }
    println!(
        "{} all eigenvalues < 0: {}, nondecreasing max: {}",
        if report.pass { "PASS" } else { "FAIL" },
        report.steps.iter().all(|s| s.all_negative),
        report.monotone
    );
    for path in output::scan(&a.output.out, a.output.format, &report)? {
        println!("    wrote {}", path.display());
    }
    Ok(report.pass)
}

#[derive(Deserialize)]
struct PlanePair {
    p: Vec<Vec<f64>>,
    q: Vec<Vec<f64>>,
}

fn read_source(spec: &str) -> Result<String> {
    if spec.trim_start().starts_with('[') || spec.trim_start().starts_with('{') {
        Ok(spec.to_string())
    } else {
        fs::read_to_string(spec).map_err(|e| usage(format!("cannot read {spec}: {e}")))
    }
}

fn parse_plane(label: &str, vectors: &[Vec<f64>]) -> Result<OrientedPlane> {
    OrientedPlane::from_spanning_vectors(vectors).map_err(|e| usage(format!("plane {label}: {e}")))
}

fn cmd_distance(a: DistanceArgs) -> Result<()> {
    let (p, q) = match (&a.file, &a.p, &a.q) {
        (Some(path), _, _) => {
            let text = fs::read_to_string(path)
                .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let pair: PlanePair =
                serde_json::from_str(&text).map_err(|e| usage(format!("malformed plane file: {e}")))?;
            (pair.p, pair.q)
        }
        (None, Some(p), Some(q)) => {
            let parse = |label: &str, s: &str| -> Result<Vec<Vec<f64>>> {
                serde_json::from_str(&read_source(s)?)
                    .map_err(|e| usage(format!("malformed plane {label}: {e}")))
            };
            (parse("P", p)?, parse("Q", q)?)
        }
        _ => return Err(usage("distance needs two planes P Q or --file")),
    };
    let p = parse_plane("P", &p)?;
    let q = parse_plane("Q", &q)?;
    let bad = |e: gaussric_core::GeometryError| usage(e.to_string());
    let cosines = principal_cosines(&p, &q).map_err(bad)?;
    let dc = canonical_distance(&p, &q).map_err(bad)?;
    let ds = spherical_distance(&p, &q).map_err(bad)?;
    let embedded = sphere_distance_embedded(&pluecker_embed(&p), &pluecker_embed(&q)).map_err(bad)?;
    if a.json {
        let value = json!({
            "principal_cosines": cosines.values(),
            "canonical_distance": dc,
            "spherical_distance": ds,
            "embedded_sphere_distance": embedded,
        });
        println!("{}", serde_json::to_string_pretty(&value)?);
    } else {
        let list: Vec<String> = cosines.values().iter().map(|c| format!("{c:.12}")).collect();
        println!("principal cosines        [{}]", list.join(", "));
        println!("canonical distance d_c   {dc:.12}");
        println!("spherical distance d_s   {ds:.12}");
        println!("embedded sphere distance {embedded:.12}");
    }
    Ok(())
}

fn cmd_list() -> Result<()> {
    for info in Catalog::builtin().list_entries() {
        println!(
            "{:<16} m={} k={} minimal in {:<9} {}",
            info.name, info.domain_dim, info.ambient_dim, info.minimal_in, info.closed_forms
        );
    }
    println!("small_circle(θ) and flat_torus(a) accept other parameters");
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resolution_parsing() {
        assert_eq!(parse_resolution("41x31", 2).unwrap(), vec![41, 31]);
        assert_eq!(parse_resolution("17", 1).unwrap(), vec![17]);
        assert!(parse_resolution("41", 2).is_err());
        assert!(parse_resolution("1x5", 2).is_err());
        assert!(parse_resolution("ax5", 2).unwrap_err().is::<UsageError>());
    }

    #[test]
    fn box_parsing() {
        let (lo, hi) = parse_box("-1,1,0,2", 2).unwrap();
        assert_eq!(lo, vec![-1.0, 0.0]);
        assert_eq!(hi, vec![1.0, 2.0]);
        assert!(parse_box("1,-1", 1).is_err());
        assert!(parse_box("0,1", 2).is_err());
    }

    #[test]
    fn dims_parsing() {
        assert_eq!(parse_dims("2x4").unwrap(), (2, 4));
        assert!(parse_dims("4x2").is_err());
        assert!(parse_dims("0x3").is_err());
        assert!(parse_dims("2-4").is_err());
    }
}
