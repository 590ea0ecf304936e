use serde::{Deserialize, Serialize};

use crate::error::{LabError, Result};

/// Uniform grid on `[s_min, s_max]` for the fiber coordinate `s = log|z|^2`.
///
/// Points are always recomputed as `s_min + k * spacing()`, so two grids built
/// from the same three fields produce bit-identical samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SGrid {
    s_min: f64,
    s_max: f64,
    n_points: usize,
}

impl SGrid {
    pub fn new(s_min: f64, s_max: f64, n_points: usize) -> Result<Self> {
        if !(s_min.is_finite() && s_max.is_finite()) || s_min >= s_max {
            return Err(LabError::InvalidGrid(format!(
                "need finite s_min < s_max, got [{s_min}, {s_max}]"
            )));
        }
        if n_points < 3 {
            return Err(LabError::InvalidGrid(format!(
                "need at least 3 points, got {n_points}"
            )));
        }
        Ok(Self {
            s_min,
            s_max,
            n_points,
        })
    }

    pub fn s_min(&self) -> f64 {
        self.s_min
    }

    pub fn s_max(&self) -> f64 {
        self.s_max
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        (self.s_max - self.s_min) / (self.n_points - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        self.s_min + k as f64 * self.spacing()
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.point(k)).collect()
    }

    /// Cell index `k` and fraction `θ ∈ [0, 1]` with `s = (1-θ) s_k + θ s_{k+1}`,
    /// clamped to the grid.
    pub fn locate(&self, s: f64) -> (usize, f64) {
        let h = self.spacing();
        let x = ((s - self.s_min) / h).clamp(0.0, (self.n_points - 1) as f64);
        let k = (x.floor() as usize).min(self.n_points - 2);
        (k, x - k as f64)
    }

    /// Index of the node nearest to `s` when `s` sits on a node up to rounding.
    pub fn node_index(&self, s: f64) -> Option<usize> {
        let x = (s - self.s_min) / self.spacing();
        let k = x.round();
        if (x - k).abs() < 1e-9 && k >= 0.0 && (k as usize) < self.n_points {
            Some(k as usize)
        } else {
            None
        }
    }
}

/// Uniform grid on `[0, 1]` for the geodesic parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TGrid {
    n_points: usize,
}

impl TGrid {
    pub fn new(n_points: usize) -> Result<Self> {
        if n_points < 2 {
            return Err(LabError::InvalidGrid(format!(
                "t-grid needs at least 2 points, got {n_points}"
            )));
        }
        Ok(Self { n_points })
    }

    pub fn len(&self) -> usize {
        self.n_points
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        1.0 / (self.n_points - 1) as f64
    }

    pub fn point(&self, k: usize) -> f64 {
        if k + 1 == self.n_points {
            1.0
        } else {
            k as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.n_points).map(|k| self.point(k)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_grids() {
        assert!(SGrid::new(1.0, 1.0, 10).is_err());
        assert!(SGrid::new(0.0, 1.0, 2).is_err());
        assert!(SGrid::new(f64::NAN, 1.0, 5).is_err());
        assert!(TGrid::new(1).is_err());
    }

    #[test]
    fn points_are_reproducible() {
        let g = SGrid::new(-14.0, 14.0, 1025).unwrap();
        let h = g.spacing();
        for k in [0, 1, 512, 1024] {
            assert_eq!(g.point(k).to_bits(), (-14.0 + k as f64 * h).to_bits());
        }
        assert_eq!(g.node_index(0.0), Some(512));
        assert_eq!(g.node_index(0.01), None);
    }

    #[test]
    fn locate_clamps() {
        let g = SGrid::new(0.0, 4.0, 5).unwrap();
        assert_eq!(g.locate(-1.0), (0, 0.0));
        assert_eq!(g.locate(4.0), (3, 1.0));
        let (k, th) = g.locate(2.5);
        assert_eq!(k, 2);
        assert!((th - 0.5).abs() < 1e-15);
    }
}
