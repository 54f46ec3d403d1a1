use serde::Serialize;

use crate::error::{GeometryError, Result};

/// Tensor-product sampling grid with inclusive end points. Points are
/// enumerated with the first axis varying slowest.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Grid {
    lower: Vec<f64>,
    upper: Vec<f64>,
    resolution: Vec<usize>,
}

impl Grid {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, resolution: Vec<usize>) -> Result<Self> {
        if lower.len() != upper.len() || lower.len() != resolution.len() || lower.is_empty() {
            return Err(GeometryError::Dimension(format!(
                "grid bounds {lower:?}/{upper:?} and resolution {resolution:?} disagree"
            )));
        }
        if resolution.contains(&0) {
            return Err(GeometryError::Dimension("grid resolution must be positive".into()));
        }
        if lower.iter().zip(&upper).any(|(a, b)| !(a <= b)) {
            return Err(GeometryError::Dimension(format!(
                "grid box {lower:?}..{upper:?} is empty"
            )));
        }
        Ok(Self {
            lower,
            upper,
            resolution,
        })
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

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn len(&self) -> usize {
        self.resolution.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn coordinate(&self, axis: usize, i: usize) -> f64 {
        let n = self.resolution[axis];
        if n == 1 {
            return 0.5 * (self.lower[axis] + self.upper[axis]);
        }
        let t = i as f64 / (n - 1) as f64;
        self.lower[axis] + t * (self.upper[axis] - self.lower[axis])
    }

    pub fn point(&self, mut index: usize) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for axis in (0..self.dim()).rev() {
            let n = self.resolution[axis];
            out[axis] = self.coordinate(axis, index % n);
            index /= n;
        }
        out
    }

    pub fn points(&self) -> Vec<Vec<f64>> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    pub fn with_resolution(&self, resolution: Vec<usize>) -> Result<Self> {
        Self::new(self.lower.clone(), self.upper.clone(), resolution)
    }

    pub fn with_box(&self, lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        Self::new(lower, upper, self.resolution.clone())
    }

    /// Replaces the bounds of `axis` by `[lo, hi]`.
    pub fn with_axis(&self, axis: usize, lo: f64, hi: f64) -> Result<Self> {
        let mut lower = self.lower.clone();
        let mut upper = self.upper.clone();
        lower[axis] = lo;
        upper[axis] = hi;
        Self::new(lower, upper, self.resolution.clone())
    }

    /// Roughly `target` points per axis taken with a uniform stride, always
    /// including both end points of each axis.
    pub fn strided_indices(&self, target: usize) -> Vec<usize> {
        let per_axis: Vec<Vec<usize>> = self
            .resolution
            .iter()
            .map(|&n| {
                if n <= target || target < 2 {
                    (0..n).collect()
                } else {
                    let mut idx: Vec<usize> = (0..target)
                        .map(|j| (j * (n - 1) + (target - 1) / 2) / (target - 1))
                        .collect();
                    idx.dedup();
                    idx
                }
            })
            .collect();
        let mut out = vec![0usize];
        for (axis, picks) in per_axis.iter().enumerate() {
            let n = self.resolution[axis];
            out = out
                .iter()
                .flat_map(|base| picks.iter().map(move |p| base * n + p))
                .collect();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumerates_inclusive_endpoints() {
        let g = Grid::new(vec![0.0, -1.0], vec![1.0, 1.0], vec![3, 2]).unwrap();
        assert_eq!(g.len(), 6);
        assert_eq!(g.point(0), vec![0.0, -1.0]);
        assert_eq!(g.point(1), vec![0.0, 1.0]);
        assert_eq!(g.point(5), vec![1.0, 1.0]);
    }

    #[test]
    fn strided_subset_keeps_corners() {
        let g = Grid::new(vec![0.0, 0.0], vec![1.0, 1.0], vec![41, 41]).unwrap();
        let idx = g.strided_indices(21);
        assert_eq!(idx.len(), 21 * 21);
        assert_eq!(idx[0], 0);
        assert_eq!(*idx.last().unwrap(), g.len() - 1);
        assert!(Grid::new(vec![1.0], vec![0.0], vec![2]).is_err());
    }
}
