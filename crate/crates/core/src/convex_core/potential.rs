use std::fmt::Write as _;

use super::grid::SGrid;
use super::piecewise::PlFunction;
use crate::error::{LabError, Result};

/// A convex potential `u(s)` sampled on an [`SGrid`], extended affinely beyond
/// the grid with slopes `slope_lo` (as `s -> -inf`) and `slope_hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    grid: SGrid,
    values: Vec<f64>,
    slope_lo: f64,
    slope_hi: f64,
}

/// Tolerance on normalized second differences used by the convexity invariant.
pub fn convexity_tolerance(values: &[f64]) -> f64 {
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    1e-9 * (1.0 + scale)
}

/// Tolerance for comparing edge differences against the tail slopes. One grid
/// cell of curvature is always allowed, since a smooth potential reaches its
/// asymptotic slope only in the limit.
pub fn slope_tolerance(h: f64, max_curvature: f64, span: f64) -> f64 {
    1e-4 * (1.0 + span.abs()) + h * max_curvature.max(0.0)
}

/// Normalized second differences `(v[k+1] - 2 v[k] + v[k-1]) / h^2` at interior nodes.
pub fn second_differences(values: &[f64], h: f64) -> Vec<f64> {
    values
        .windows(3)
        .map(|w| (w[2] - 2.0 * w[1] + w[0]) / (h * h))
        .collect()
}

/// Checks the convexity invariant on raw samples, reporting the first
/// offending interior index.
pub fn check_convex_samples(values: &[f64], h: f64) -> Result<()> {
    let tol = convexity_tolerance(values);
    for (i, d) in second_differences(values, h).into_iter().enumerate() {
        if d < -tol || !d.is_finite() {
            return Err(LabError::Invariant {
                what: "discrete convexity",
                index: i + 1,
                value: d,
                tol,
            });
        }
    }
    Ok(())
}

impl Potential {
    pub fn new(grid: SGrid, values: Vec<f64>, slope_lo: f64, slope_hi: f64) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(LabError::Mismatch(format!(
                "{} samples for a {}-point grid",
                values.len(),
                grid.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(LabError::Invariant {
                what: "finite samples",
                index: k,
                value: values[k],
                tol: 0.0,
            });
        }
        if !(slope_lo.is_finite() && slope_hi.is_finite()) || slope_lo > slope_hi {
            return Err(LabError::Inadmissible(format!(
                "tail slopes must satisfy slope_lo <= slope_hi, got ({slope_lo}, {slope_hi})"
            )));
        }
        let h = grid.spacing();
        check_convex_samples(&values, h)?;

        let d2 = second_differences(&values, h);
        let max_curv = d2.iter().fold(0.0f64, |m, v| m.max(*v));
        let tol = slope_tolerance(h, max_curv, slope_hi - slope_lo);
        let n = values.len();
        for k in 0..n - 1 {
            let d = (values[k + 1] - values[k]) / h;
            if d < slope_lo - tol || d > slope_hi + tol {
                return Err(LabError::Invariant {
                    what: "first difference inside the slope range",
                    index: k,
                    value: d,
                    tol,
                });
            }
        }
        let first = (values[1] - values[0]) / h;
        if (first - slope_lo).abs() > tol {
            return Err(LabError::Invariant {
                what: "lower tail consistency",
                index: 0,
                value: first - slope_lo,
                tol,
            });
        }
        let last = (values[n - 1] - values[n - 2]) / h;
        if (last - slope_hi).abs() > tol {
            return Err(LabError::Invariant {
                what: "upper tail consistency",
                index: n - 2,
                value: last - slope_hi,
                tol,
            });
        }
        Ok(Self {
            grid,
            values,
            slope_lo,
            slope_hi,
        })
    }

    pub fn from_fn(
        grid: SGrid,
        f: impl Fn(f64) -> f64,
        slope_lo: f64,
        slope_hi: f64,
    ) -> Result<Self> {
        let values = grid.points().into_iter().map(f).collect();
        Self::new(grid, values, slope_lo, slope_hi)
    }

    pub fn grid(&self) -> &SGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn slope_lo(&self) -> f64 {
        self.slope_lo
    }

    pub fn slope_hi(&self) -> f64 {
        self.slope_hi
    }

    /// Total curvature `slope_hi - slope_lo`, the model volume of the bundle.
    pub fn slope_span(&self) -> f64 {
        self.slope_hi - self.slope_lo
    }

    pub fn to_pl(&self) -> PlFunction {
        PlFunction::new(
            self.grid.points(),
            self.values.clone(),
            self.slope_lo,
            self.slope_hi,
        )
        .expect("grid points are strictly increasing")
    }

    /// Linear interpolation inside the grid, affine tails outside.
    pub fn eval(&self, s: f64) -> f64 {
        let n = self.values.len();
        if s <= self.grid.s_min() {
            return self.values[0] + self.slope_lo * (s - self.grid.s_min());
        }
        if s >= self.grid.point(n - 1) {
            return self.values[n - 1] + self.slope_hi * (s - self.grid.point(n - 1));
        }
        let (k, th) = self.grid.locate(s);
        self.values[k] + th * (self.values[k + 1] - self.values[k])
    }

    pub fn shifted(&self, c: f64) -> Potential {
        Potential {
            grid: self.grid,
            values: self.values.iter().map(|v| v + c).collect(),
            slope_lo: self.slope_lo,
            slope_hi: self.slope_hi,
        }
    }

    /// `s -> u(s - h)` resampled by linear interpolation with the affine tails.
    pub fn translated(&self, h: f64) -> Result<Potential> {
        let values = self
            .grid
            .points()
            .iter()
            .map(|&s| self.eval(s - h))
            .collect();
        Potential::new(self.grid, values, self.slope_lo, self.slope_hi)
    }

    pub fn sup_distance(&self, other: &Potential) -> f64 {
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn same_frame(&self, other: &Potential) -> Result<()> {
        if self.grid != other.grid {
            return Err(LabError::Mismatch(
                "potentials live on different grids".into(),
            ));
        }
        if (self.slope_lo - other.slope_lo).abs() > 1e-12
            || (self.slope_hi - other.slope_hi).abs() > 1e-12
        {
            return Err(LabError::Mismatch(format!(
                "slope ranges differ: ({}, {}) vs ({}, {})",
                self.slope_lo, self.slope_hi, other.slope_lo, other.slope_hi
            )));
        }
        Ok(())
    }

    /// Text form: an `sgrid` header line followed by one value per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(
            out,
            "sgrid {} {} {} {} {}",
            self.grid.s_min(),
            self.grid.s_max(),
            self.grid.len(),
            self.slope_lo,
            self.slope_hi
        )
        .unwrap();
        for v in &self.values {
            writeln!(out, "{v:.17e}").unwrap();
        }
        out
    }

    /// Parses the text form. Lines starting with `#` are ignored; any lines
    /// after the last sample are returned untouched for callers that extend
    /// the format.
    pub fn from_text_with_trailer(text: &str) -> Result<(Potential, Vec<String>)> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let header = lines
            .next()
            .ok_or_else(|| LabError::Parse("empty potential file".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() != 6 || fields[0] != "sgrid" {
            return Err(LabError::Parse(format!("bad header line: {header:?}")));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| LabError::Parse(format!("bad number {s:?}: {e}")))
        };
        let n: usize = fields[3]
            .parse()
            .map_err(|e| LabError::Parse(format!("bad point count {:?}: {e}", fields[3])))?;
        let grid = SGrid::new(num(fields[1])?, num(fields[2])?, n)?;
        let mut values = Vec::with_capacity(n);
        for _ in 0..n {
            let line = lines
                .next()
                .ok_or_else(|| LabError::Parse(format!("expected {n} values")))?;
            values.push(num(line)?);
        }
        let trailer = lines.map(str::to_string).collect();
        let u = Potential::new(grid, values, num(fields[4])?, num(fields[5])?)?;
        Ok((u, trailer))
    }

    pub fn from_text(text: &str) -> Result<Potential> {
        let (u, trailer) = Self::from_text_with_trailer(text)?;
        if let Some(extra) = trailer.first() {
            return Err(LabError::Parse(format!(
                "unexpected trailing line {extra:?}"
            )));
        }
        Ok(u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fubini_study;

    #[test]
    fn quadratic_is_valid() {
        let g = SGrid::new(-8.0, 8.0, 257).unwrap();
        let u = Potential::from_fn(g, |s| 0.5 * s * s, -8.0, 8.0).unwrap();
        assert_eq!(u.slope_span(), 16.0);
    }

    #[test]
    fn rejects_nonconvex_with_index() {
        let g = SGrid::new(-1.0, 1.0, 21).unwrap();
        let err = Potential::from_fn(g, |s| -s * s, -2.0, 2.0).unwrap_err();
        match err {
            LabError::Invariant { what, index, .. } => {
                assert_eq!(what, "discrete convexity");
                assert_eq!(index, 1);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_inconsistent_tails() {
        let g = SGrid::new(-1.0, 1.0, 21).unwrap();
        assert!(Potential::from_fn(g, |s| s, 0.0, 1.0).is_err());
        assert!(Potential::from_fn(g, |s| s, 1.0, 1.0).is_ok());
    }

    #[test]
    fn text_round_trip_is_exact() {
        let g = SGrid::new(-12.0, 12.0, 97).unwrap();
        let u = fubini_study(g).unwrap();
        let text = format!("# comment\n{}", u.to_text());
        let v = Potential::from_text(&text).unwrap();
        assert_eq!(u, v);
        assert!(text
            .lines()
            .nth(1)
            .unwrap()
            .starts_with("sgrid -12 12 97 0 2"));
    }

    #[test]
    fn eval_uses_affine_tails() {
        let g = SGrid::new(-1.0, 1.0, 3).unwrap();
        let u = Potential::new(g, vec![0.0, 0.0, 1.0], 0.0, 1.0).unwrap();
        assert_eq!(u.eval(-5.0), 0.0);
        assert_eq!(u.eval(3.0), 3.0);
        assert_eq!(u.eval(0.5), 0.5);
    }
}
