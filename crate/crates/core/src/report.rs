//! Machine-readable verification reports.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::grid::Grid;

/// Embedded in every report.
pub const SCHEMA: &str = "gaussric/1";

/// Label attached to every sampled Gauss-image diameter.
pub const DIAMETER_NOTE: &str =
    "evidence statistic: max pairwise canonical distance over sampled image points; \
     boundedness of the full image is not decidable from samples";

/// Residual bounds for the identity checks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    /// Pullback identities (φ*h = −Ric, ψ*h = (m−1)g − Ric, ψ*h = right-hand side).
    pub identity: f64,
    /// Minimality: ‖trB‖ or ‖tr B_MN‖.
    pub minimal: f64,
    /// Full pullback formula for φ (any immersion).
    pub lemma: f64,
    /// Intrinsic vs extrinsic Ricci.
    pub oracle: f64,
    /// Derivation formula for dφ vs finite differences.
    pub derivation: f64,
    /// Radial part of B vs −g·x, and |x| = 1.
    pub radial: f64,
    /// ||ψ| − 1|.
    pub unit: f64,
}

impl Tolerances {
    /// Defaults; minimality is relaxed to 1e-5 for immersions whose
    /// derivatives come from finite differences.
    pub fn defaults(analytic: bool) -> Self {
        Self {
            identity: 1e-5,
            minimal: if analytic { 1e-8 } else { 1e-5 },
            lemma: 1e-6,
            oracle: 1e-5,
            derivation: 1e-5,
            radial: 1e-8,
            unit: 1e-10,
        }
    }
}

/// One sampled grid point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub index: usize,
    pub point: Vec<f64>,
    /// Finite-difference stencils reach the chart boundary; excluded from
    /// pass/fail and summary statistics.
    pub edge: bool,
    pub residuals: BTreeMap<String, f64>,
    pub pass: BTreeMap<String, bool>,
    /// Frame-Ricci eigenvalues, ascending.
    pub ricci_eigenvalues: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl ReportRow {
    pub fn counted(&self) -> bool {
        !self.edge
    }

    pub fn passed(&self) -> bool {
        self.error.is_none() && self.pass.values().all(|p| *p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportSummary {
    pub evaluated_points: usize,
    pub edge_points: usize,
    pub failed_points: usize,
    pub max_residual: BTreeMap<String, f64>,
    pub min_ricci_eigenvalue: Option<f64>,
    pub max_ricci_eigenvalue: Option<f64>,
    pub gauss_image_dc_diameter: Option<f64>,
    pub gauss_image_sample_points: usize,
    pub diameter_note: &'static str,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub suite: String,
    pub entry: String,
    pub grid: Grid,
    pub tolerances: Tolerances,
    pub rows: Vec<ReportRow>,
    pub summary: ReportSummary,
}

impl VerificationReport {
    /// Assembles the report, recomputing every summary statistic from `rows`.
    pub fn assemble(
        suite: &str,
        entry: &str,
        grid: Grid,
        tolerances: Tolerances,
        rows: Vec<ReportRow>,
        diameter: Option<(f64, usize)>,
    ) -> Self {
        let summary = summarize(&rows, diameter);
        Self {
            schema: SCHEMA,
            suite: suite.to_string(),
            entry: entry.to_string(),
            grid,
            tolerances,
            rows,
            summary,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.pass
    }

    /// Residual names in column order.
    pub fn residual_names(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .rows
            .iter()
            .flat_map(|r| r.residuals.keys().cloned())
            .collect();
        names.sort();
        names.dedup();
        names
    }
}

pub fn summarize(rows: &[ReportRow], diameter: Option<(f64, usize)>) -> ReportSummary {
    let mut max_residual = BTreeMap::new();
    let mut min_ric: Option<f64> = None;
    let mut max_ric: Option<f64> = None;
    let mut failed = 0;
    for row in rows.iter().filter(|r| r.counted()) {
        if !row.passed() {
            failed += 1;
        }
        for (name, value) in &row.residuals {
            let slot = max_residual.entry(name.clone()).or_insert(0.0_f64);
            *slot = slot.max(*value);
        }
        if let (Some(lo), Some(hi)) = (row.ricci_eigenvalues.first(), row.ricci_eigenvalues.last()) {
            min_ric = Some(min_ric.map_or(*lo, |v| v.min(*lo)));
            max_ric = Some(max_ric.map_or(*hi, |v| v.max(*hi)));
        }
    }
    ReportSummary {
        evaluated_points: rows.iter().filter(|r| r.counted()).count(),
        edge_points: rows.iter().filter(|r| r.edge).count(),
        failed_points: failed,
        max_residual,
        min_ricci_eigenvalue: min_ric,
        max_ricci_eigenvalue: max_ric,
        gauss_image_dc_diameter: diameter.map(|d| d.0),
        gauss_image_sample_points: diameter.map_or(0, |d| d.1),
        diameter_note: DIAMETER_NOTE,
        pass: failed == 0,
    }
}
