//! Finite-difference stencils on chart domains.

use nalgebra::DVector;

use crate::error::Result;

/// Step used for every finite difference at coordinate value `u`:
/// max(1e-4, ∛ε · (1 + |u|)).
pub fn step(u: f64) -> f64 {
    1e-4_f64.max(f64::EPSILON.cbrt() * (1.0 + u.abs()))
}

/// Axis-aligned box of valid chart parameters. Bounds may be infinite.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartBox {
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl ChartBox {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len(), "chart box bounds differ in dimension");
        Self { lower, upper }
    }

    pub fn unbounded(dim: usize) -> Self {
        Self::new(vec![f64::NEG_INFINITY; dim], vec![f64::INFINITY; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn contains(&self, u: &[f64]) -> bool {
        u.len() == self.dim()
            && u
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (lo, hi))| *lo <= *x && *x <= *hi)
    }

    /// Whether `u ± reach` along `axis` stays inside the box.
    pub fn fits(&self, u: &[f64], axis: usize, reach: f64) -> bool {
        self.lower[axis] <= u[axis] - reach && u[axis] + reach <= self.upper[axis]
    }

    /// Whether a stencil of `depth` nested steps fits on every axis at `u`.
    pub fn interior(&self, u: &[f64], depth: usize) -> bool {
        (0..self.dim()).all(|a| self.fits(u, a, depth as f64 * step(u[a])))
    }
}

fn shifted(u: &[f64], axis: usize, delta: f64) -> Vec<f64> {
    let mut v = u.to_vec();
    v[axis] += delta;
    v
}

/// ∂f/∂u_axis. Central differences where the stencil fits in `chart`,
/// otherwise a second-order one-sided stencil pointing into the chart.
pub fn partial<F>(f: &F, u: &[f64], axis: usize, chart: &ChartBox) -> Result<DVector<f64>>
where
    F: Fn(&[f64]) -> Result<DVector<f64>> + ?Sized,
{
    let h = step(u[axis]);
    if chart.fits(u, axis, h) {
        let plus = f(&shifted(u, axis, h))?;
        let minus = f(&shifted(u, axis, -h))?;
        return Ok((plus - minus) / (2.0 * h));
    }
    let dir = if u[axis] + 2.0 * h <= chart.upper()[axis] {
        1.0
    } else {
        -1.0
    };
    let f0 = f(u)?;
    let f1 = f(&shifted(u, axis, dir * h))?;
    let f2 = f(&shifted(u, axis, 2.0 * dir * h))?;
    Ok((f1 * 4.0 - f0 * 3.0 - f2) * (dir / (2.0 * h)))
}
