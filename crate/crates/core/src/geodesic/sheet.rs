use std::fmt::Write as _;

use crate::convex_core::{PlFunction, Potential, SGrid, TGrid};
use crate::error::{LabError, Result};

/// Samples of `U(t, s)` on a `t x s` product grid, stored row by row (one row
/// per `t`). Sheets built by the hull solver or as barriers also keep the exact
/// piecewise-linear slice `U(t_i, .)` behind each row.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicSheet {
    t_grid: TGrid,
    s_grid: SGrid,
    values: Vec<f64>,
    slope_lo: f64,
    slope_hi: f64,
    slices: Option<Vec<PlFunction>>,
}

impl GeodesicSheet {
    pub fn new(
        t_grid: TGrid,
        s_grid: SGrid,
        values: Vec<f64>,
        slope_lo: f64,
        slope_hi: f64,
    ) -> Result<Self> {
        if values.len() != t_grid.len() * s_grid.len() {
            return Err(LabError::Mismatch(format!(
                "{} sheet values for a {}x{} grid",
                values.len(),
                t_grid.len(),
                s_grid.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(LabError::Invariant {
                what: "finite sheet values",
                index: k,
                value: values[k],
                tol: 0.0,
            });
        }
        Ok(Self {
            t_grid,
            s_grid,
            values,
            slope_lo,
            slope_hi,
            slices: None,
        })
    }

    pub fn from_fn(
        t_grid: TGrid,
        s_grid: SGrid,
        f: impl Fn(f64, f64) -> f64,
        slope_lo: f64,
        slope_hi: f64,
    ) -> Result<Self> {
        let s = s_grid.points();
        let mut values = Vec::with_capacity(t_grid.len() * s.len());
        for t in t_grid.points() {
            values.extend(s.iter().map(|&s| f(t, s)));
        }
        Self::new(t_grid, s_grid, values, slope_lo, slope_hi)
    }

    /// Sheet whose rows are the given slices sampled on `s_grid`.
    pub fn from_slices(t_grid: TGrid, s_grid: SGrid, slices: Vec<PlFunction>) -> Result<Self> {
        if slices.len() != t_grid.len() {
            return Err(LabError::Mismatch(format!(
                "{} slices for {} t-samples",
                slices.len(),
                t_grid.len()
            )));
        }
        let s = s_grid.points();
        let mut values = Vec::with_capacity(t_grid.len() * s.len());
        for sl in &slices {
            values.extend(sl.eval_sorted(&s));
        }
        let (lo, hi) = (slices[0].slope_lo(), slices[0].slope_hi());
        let mut sheet = Self::new(t_grid, s_grid, values, lo, hi)?;
        sheet.slices = Some(slices);
        Ok(sheet)
    }

    pub fn t_grid(&self) -> &TGrid {
        &self.t_grid
    }

    pub fn s_grid(&self) -> &SGrid {
        &self.s_grid
    }

    pub fn n_t(&self) -> usize {
        self.t_grid.len()
    }

    pub fn slope_lo(&self) -> f64 {
        self.slope_lo
    }

    pub fn slope_hi(&self) -> f64 {
        self.slope_hi
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.s_grid.len();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn value(&self, i: usize, k: usize) -> f64 {
        self.values[i * self.s_grid.len() + k]
    }

    pub fn has_exact_slices(&self) -> bool {
        self.slices.is_some()
    }

    /// The slice at `t_i`: the stored exact one if present, otherwise the
    /// linear interpolation of the row samples.
    pub fn slice(&self, i: usize) -> PlFunction {
        match &self.slices {
            Some(sl) => sl[i].clone(),
            None => PlFunction::new(
                self.s_grid.points(),
                self.row(i).to_vec(),
                self.slope_lo,
                self.slope_hi,
            )
            .expect("grid points are increasing"),
        }
    }

    pub fn row_potential(&self, i: usize) -> Result<Potential> {
        Potential::new(
            self.s_grid,
            self.row(i).to_vec(),
            self.slope_lo,
            self.slope_hi,
        )
    }

    /// Largest deviation of the first and last rows from the endpoints.
    pub fn boundary_defect(&self, u0: &Potential, u1: &Potential) -> f64 {
        let last = self.n_t() - 1;
        let d = |row: &[f64], u: &Potential| {
            row.iter()
                .zip(u.values())
                .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
        };
        d(self.row(0), u0).max(d(self.row(last), u1))
    }

    pub fn check_boundary(&self, u0: &Potential, u1: &Potential, tol: f64) -> Result<()> {
        let d = self.boundary_defect(u0, u1);
        if d > tol {
            return Err(LabError::Invariant {
                what: "boundary match",
                index: 0,
                value: d,
                tol,
            });
        }
        Ok(())
    }

    /// Lattice directions `(dt, ds)` (in grid steps) used by the joint
    /// convexity test: the two axes and `(r, ±1)`, `(1, ±r)` for dyadic `r`.
    pub fn lattice_directions(&self) -> Vec<(usize, isize)> {
        let mut dirs = vec![(1, 0), (0, 1)];
        let mut r = 1usize;
        while 2 * r < self.n_t() {
            dirs.push((r, 1));
            dirs.push((r, -1));
            r *= 2;
        }
        let mut r = 2usize;
        while 2 * r < self.s_grid.len() {
            dirs.push((1, r as isize));
            dirs.push((1, -(r as isize)));
            r *= 2;
        }
        dirs
    }

    /// Smallest second difference `U(x+d) - 2U(x) + U(x-d)` over nodes and
    /// lattice directions, with the row and column where it occurs.
    pub fn joint_convexity_defect(&self) -> (f64, usize, usize) {
        let nt = self.n_t() as isize;
        let ns = self.s_grid.len() as isize;
        let mut worst = (f64::INFINITY, 0, 0);
        for (dt, ds) in self.lattice_directions() {
            let dt = dt as isize;
            for i in dt..nt - dt {
                for k in ds.abs()..ns - ds.abs() {
                    let at = |i: isize, k: isize| self.values[(i * ns + k) as usize];
                    let d = at(i + dt, k + ds) - 2.0 * at(i, k) + at(i - dt, k - ds);
                    if d < worst.0 {
                        worst = (d, i as usize, k as usize);
                    }
                }
            }
        }
        worst
    }

    /// Joint convexity within `tol * (1 + max|U|)` along every lattice direction.
    pub fn check_joint_convexity(&self, tol: f64) -> Result<()> {
        let scale = self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let tol = tol * (1.0 + scale);
        let (d, i, k) = self.joint_convexity_defect();
        if d < -tol {
            return Err(LabError::Invariant {
                what: "joint convexity in (t, s)",
                index: i * self.s_grid.len() + k,
                value: d,
                tol,
            });
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "sheet {} {} {} {} {} {}",
            self.n_t(),
            self.s_grid.s_min(),
            self.s_grid.s_max(),
            self.s_grid.len(),
            self.slope_lo,
            self.slope_hi
        )
        .unwrap();
        for v in &self.values {
            writeln!(out, "{v:.17e}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| LabError::Parse("empty sheet file".into()))?;
        let f: Vec<&str> = header.split_whitespace().collect();
        if f.len() != 7 || f[0] != "sheet" {
            return Err(LabError::Parse(format!("bad sheet header: {header:?}")));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| LabError::Parse(format!("bad number {s:?}: {e}")))
        };
        let int = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|e| LabError::Parse(format!("bad count {s:?}: {e}")))
        };
        let t_grid = TGrid::new(int(f[1])?)?;
        let s_grid = SGrid::new(num(f[2])?, num(f[3])?, int(f[4])?)?;
        let values = lines.map(num).collect::<Result<Vec<f64>>>()?;
        Self::new(t_grid, s_grid, values, num(f[5])?, num(f[6])?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip() {
        let sh = GeodesicSheet::from_fn(
            TGrid::new(5).unwrap(),
            SGrid::new(-2.0, 2.0, 9).unwrap(),
            |t, s| s * s + t,
            -4.0,
            4.0,
        )
        .unwrap();
        let back = GeodesicSheet::from_text(&sh.to_text()).unwrap();
        assert_eq!(back, sh);
    }

    #[test]
    fn detects_saddle() {
        let sh = GeodesicSheet::from_fn(
            TGrid::new(9).unwrap(),
            SGrid::new(-1.0, 1.0, 9).unwrap(),
            |t, s| s * s + t * t - 3.0 * t * s,
            -2.0,
            2.0,
        )
        .unwrap();
        assert!(sh.check_joint_convexity(1e-9).is_err());
        let ok = GeodesicSheet::from_fn(
            TGrid::new(9).unwrap(),
            SGrid::new(-1.0, 1.0, 9).unwrap(),
            |t, s| s * s + t * t - t * s,
            -2.0,
            2.0,
        )
        .unwrap();
        assert!(ok.check_joint_convexity(1e-9).is_ok());
    }
}
