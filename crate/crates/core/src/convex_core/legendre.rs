use super::grid::SGrid;
use super::potential::{check_convex_samples, Potential};
use crate::error::{LabError, Result};

/// Samples of the convex conjugate `u*(p) = sup_s (p s - u(s))` on a uniform
/// grid of the slope interval `[p_min, p_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreTable {
    p_min: f64,
    p_max: f64,
    values: Vec<f64>,
}

impl LegendreTable {
    pub fn p_min(&self) -> f64 {
        self.p_min
    }

    pub fn p_max(&self) -> f64 {
        self.p_max
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spacing(&self) -> f64 {
        if self.values.len() < 2 {
            0.0
        } else {
            (self.p_max - self.p_min) / (self.values.len() - 1) as f64
        }
    }

    pub fn point(&self, j: usize) -> f64 {
        if j + 1 == self.values.len() {
            self.p_max
        } else {
            self.p_min + j as f64 * self.spacing()
        }
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.values.len()).map(|j| self.point(j)).collect()
    }

    /// Table with the same slope grid and values `(1-t) self + t other`.
    pub fn interpolate(&self, other: &LegendreTable, t: f64) -> Result<LegendreTable> {
        if self.values.len() != other.values.len()
            || self.p_min != other.p_min
            || self.p_max != other.p_max
        {
            return Err(LabError::Mismatch(
                "Legendre tables on different slope grids".into(),
            ));
        }
        Ok(LegendreTable {
            p_min: self.p_min,
            p_max: self.p_max,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        })
    }

    /// Conjugates back onto the nodes of `grid`: `max_j (p_j s_k - v_j)`.
    /// The maximizing index is nondecreasing in `s`, so one sweep suffices.
    pub fn conjugate_on(&self, grid: &SGrid) -> Vec<f64> {
        let ps = self.points();
        let m = ps.len();
        let mut j = 0usize;
        grid.points()
            .into_iter()
            .map(|s| {
                let val = |j: usize| ps[j] * s - self.values[j];
                while j + 1 < m && val(j + 1) >= val(j) {
                    j += 1;
                }
                val(j)
            })
            .collect()
    }
}

/// Discrete Legendre transform of `u` on `p_grid_size` equispaced slopes.
///
/// Affine tails never beat the end nodes for slopes inside
/// `[slope_lo, slope_hi]`, so a sup over the grid nodes is the exact conjugate
/// of the piecewise-linear extension of `u`.
pub fn legendre(u: &Potential, p_grid_size: usize) -> Result<LegendreTable> {
    check_convex_samples(u.values(), u.grid().spacing())?;
    let (p_min, p_max) = (u.slope_lo(), u.slope_hi());
    let m = if p_min == p_max { 1 } else { p_grid_size };
    if m < 2 && p_min != p_max {
        return Err(LabError::InvalidGrid(format!(
            "slope grid needs at least 2 points, got {p_grid_size}"
        )));
    }
    let mut table = LegendreTable {
        p_min,
        p_max,
        values: vec![0.0; m],
    };
    let s = u.grid().points();
    let vals = u.values();
    let n = s.len();
    let mut k = 0usize;
    for j in 0..m {
        let p = table.point(j);
        let f = |k: usize| p * s[k] - vals[k];
        while k + 1 < n && f(k + 1) >= f(k) {
            k += 1;
        }
        table.values[j] = f(k);
    }
    Ok(table)
}

/// Quadratic-time reference transform, kept as a test oracle.
pub fn legendre_naive(u: &Potential, p_grid_size: usize) -> LegendreTable {
    let (p_min, p_max) = (u.slope_lo(), u.slope_hi());
    let m = if p_min == p_max {
        1
    } else {
        p_grid_size.max(2)
    };
    let mut table = LegendreTable {
        p_min,
        p_max,
        values: vec![0.0; m],
    };
    let s = u.grid().points();
    for j in 0..m {
        let p = table.point(j);
        table.values[j] = s
            .iter()
            .zip(u.values())
            .map(|(s, v)| p * s - v)
            .fold(f64::NEG_INFINITY, f64::max);
    }
    table
}

/// Slope-grid size used when a caller does not pick one.
pub fn default_p_grid_size(n_points: usize) -> usize {
    4 * (n_points - 1) + 1
}

/// `(u*)*` sampled back on the grid of `u`.
pub fn biconjugate(u: &Potential) -> Result<Potential> {
    let table = legendre(u, default_p_grid_size(u.grid().len()))?;
    let values = table.conjugate_on(u.grid());
    Potential::new(*u.grid(), values, u.slope_lo(), u.slope_hi())
}
