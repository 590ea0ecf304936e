//! Continuous piecewise-linear functions on the real line.
//!
//! A [`PlFunction`] is linear between its breakpoints and affine outside them
//! with its own tail slopes. Potentials, geodesic slices and twist weights all
//! reduce to this shape, and the quantities the functionals need (exponential
//! integrals, curvature atoms, pointwise maxima) are exact for it.

use crate::error::{LabError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct PlFunction {
    xs: Vec<f64>,
    ys: Vec<f64>,
    slope_lo: f64,
    slope_hi: f64,
}

impl PlFunction {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, slope_lo: f64, slope_hi: f64) -> Result<Self> {
        if xs.len() != ys.len() || xs.len() < 2 {
            return Err(LabError::Mismatch(format!(
                "piecewise-linear function needs >= 2 matching breakpoints, got {} x and {} y",
                xs.len(),
                ys.len()
            )));
        }
        if let Some(k) = xs.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(LabError::Invariant {
                what: "breakpoints strictly increasing",
                index: k + 1,
                value: xs[k + 1] - xs[k],
                tol: 0.0,
            });
        }
        if ys.iter().any(|y| !y.is_finite()) || !slope_lo.is_finite() || !slope_hi.is_finite() {
            return Err(LabError::Inadmissible(
                "non-finite piecewise-linear data".into(),
            ));
        }
        Ok(Self {
            xs,
            ys,
            slope_lo,
            slope_hi,
        })
    }

    /// Builds from breakpoints that may contain exact repeats (zero-length
    /// segments); repeats are collapsed keeping the first value.
    pub(crate) fn from_unsorted_repeats(
        xs: &[f64],
        ys: &[f64],
        slope_lo: f64,
        slope_hi: f64,
    ) -> Self {
        let mut ox = Vec::with_capacity(xs.len());
        let mut oy = Vec::with_capacity(ys.len());
        for (&x, &y) in xs.iter().zip(ys) {
            match ox.last() {
                Some(&last) if x <= last => {}
                _ => {
                    ox.push(x);
                    oy.push(y);
                }
            }
        }
        Self {
            xs: ox,
            ys: oy,
            slope_lo,
            slope_hi,
        }
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn slope_lo(&self) -> f64 {
        self.slope_lo
    }

    pub fn slope_hi(&self) -> f64 {
        self.slope_hi
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] + self.slope_lo * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1] + self.slope_hi * (x - self.xs[n - 1]);
        }
        let k = self.xs.partition_point(|&b| b <= x) - 1;
        self.interp(k, x)
    }

    fn interp(&self, k: usize, x: f64) -> f64 {
        let (x0, x1) = (self.xs[k], self.xs[k + 1]);
        let th = (x - x0) / (x1 - x0);
        self.ys[k] + th * (self.ys[k + 1] - self.ys[k])
    }

    /// Evaluates at nondecreasing abscissae in a single linear sweep.
    pub fn eval_sorted(&self, at: &[f64]) -> Vec<f64> {
        let n = self.xs.len();
        let mut out = Vec::with_capacity(at.len());
        let mut k = 0usize;
        for &x in at {
            if x <= self.xs[0] {
                out.push(self.ys[0] + self.slope_lo * (x - self.xs[0]));
            } else if x >= self.xs[n - 1] {
                out.push(self.ys[n - 1] + self.slope_hi * (x - self.xs[n - 1]));
            } else {
                while self.xs[k + 1] < x {
                    k += 1;
                }
                out.push(self.interp(k, x));
            }
        }
        out
    }

    pub fn segment_slopes(&self) -> Vec<f64> {
        self.xs
            .windows(2)
            .zip(self.ys.windows(2))
            .map(|(x, y)| (y[1] - y[0]) / (x[1] - x[0]))
            .collect()
    }

    /// Slope jumps at every breakpoint, the tails included: the second
    /// derivative of the function as a sum of point masses. The masses sum to
    /// `slope_hi - slope_lo`.
    pub fn curvature_atoms(&self) -> Vec<(f64, f64)> {
        let slopes = self.segment_slopes();
        let n = self.xs.len();
        (0..n)
            .map(|i| {
                let left = if i == 0 { self.slope_lo } else { slopes[i - 1] };
                let right = if i + 1 == n { self.slope_hi } else { slopes[i] };
                (self.xs[i], right - left)
            })
            .collect()
    }

    /// `identity_coef * x + sum_i c_i f_i(x)` as a piecewise-linear function on
    /// the union of the breakpoints.
    pub fn combine(terms: &[(f64, &PlFunction)], identity_coef: f64) -> PlFunction {
        let xs = merge_breakpoints(terms.iter().map(|(_, f)| f.xs()));
        let mut ys: Vec<f64> = xs.iter().map(|&x| identity_coef * x).collect();
        let mut lo = identity_coef;
        let mut hi = identity_coef;
        for (c, f) in terms {
            for (y, v) in ys.iter_mut().zip(f.eval_sorted(&xs)) {
                *y += c * v;
            }
            lo += c * f.slope_lo;
            hi += c * f.slope_hi;
        }
        PlFunction::from_unsorted_repeats(&xs, &ys, lo, hi)
    }

    /// `∫_R exp(g(x)) dx` for this function `g`, exact for the piecewise-linear
    /// exponent. Requires a positive left tail slope and a negative right one.
    pub fn exp_integral(&self) -> Result<f64> {
        if !(self.slope_lo > 0.0) {
            return Err(LabError::NotIntegrable {
                tail: "lower",
                slope: self.slope_lo,
                requirement: "> 0",
            });
        }
        if !(self.slope_hi < 0.0) {
            return Err(LabError::NotIntegrable {
                tail: "upper",
                slope: self.slope_hi,
                requirement: "< 0",
            });
        }
        let n = self.xs.len();
        let mut total = self.ys[0].exp() / self.slope_lo;
        for k in 0..n - 1 {
            let dx = self.xs[k + 1] - self.xs[k];
            let d = self.ys[k + 1] - self.ys[k];
            let ratio = if d.abs() < 1e-12 {
                1.0 + 0.5 * d
            } else {
                d.exp_m1() / d
            };
            total += dx * self.ys[k].exp() * ratio;
        }
        total += self.ys[n - 1].exp() / (-self.slope_hi);
        Ok(total)
    }

    pub fn add_constant(&self, c: f64) -> PlFunction {
        PlFunction {
            xs: self.xs.clone(),
            ys: self.ys.iter().map(|y| y + c).collect(),
            slope_lo: self.slope_lo,
            slope_hi: self.slope_hi,
        }
    }

    /// Pointwise maximum of two functions sharing tail slopes.
    pub fn max_with(&self, other: &PlFunction) -> Result<PlFunction> {
        if (self.slope_lo - other.slope_lo).abs() > 1e-12
            || (self.slope_hi - other.slope_hi).abs() > 1e-12
        {
            return Err(LabError::Mismatch(
                "pointwise max needs equal tail slopes".into(),
            ));
        }
        let xs = merge_breakpoints([self.xs(), other.xs()]);
        let a = self.eval_sorted(&xs);
        let b = other.eval_sorted(&xs);
        let mut ox = Vec::with_capacity(xs.len() * 2);
        let mut oy = Vec::with_capacity(xs.len() * 2);
        for i in 0..xs.len() {
            if i > 0 {
                let d0 = a[i - 1] - b[i - 1];
                let d1 = a[i] - b[i];
                if (d0 > 0.0 && d1 < 0.0) || (d0 < 0.0 && d1 > 0.0) {
                    let th = d0 / (d0 - d1);
                    let x = xs[i - 1] + th * (xs[i] - xs[i - 1]);
                    let y = a[i - 1] + th * (a[i] - a[i - 1]);
                    if x > xs[i - 1] && x < xs[i] {
                        ox.push(x);
                        oy.push(y);
                    }
                }
            }
            ox.push(xs[i]);
            oy.push(a[i].max(b[i]));
        }
        Ok(PlFunction::from_unsorted_repeats(
            &ox,
            &oy,
            self.slope_lo,
            self.slope_hi,
        ))
    }

    /// Restriction to the breakpoints inside `[lo, hi]` plus the two ends; the
    /// tails keep this function's asymptotic slopes.
    pub fn clip(&self, lo: f64, hi: f64) -> PlFunction {
        let mut xs = vec![lo];
        xs.extend(self.xs.iter().copied().filter(|&x| x > lo && x < hi));
        xs.push(hi);
        let ys = self.eval_sorted(&xs);
        PlFunction::from_unsorted_repeats(&xs, &ys, self.slope_lo, self.slope_hi)
    }
}

/// Sorted union of several sorted breakpoint lists with exact repeats removed.
fn merge_breakpoints<'a, I>(lists: I) -> Vec<f64>
where
    I: IntoIterator<Item = &'a [f64]>,
{
    let mut all: Vec<f64> = lists.into_iter().flatten().copied().collect();
    all.sort_by(|a, b| a.total_cmp(b));
    all.dedup();
    all
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tent() -> PlFunction {
        PlFunction::new(vec![-1.0, 0.0, 1.0], vec![1.0, 0.0, 1.0], -1.0, 1.0).unwrap()
    }

    #[test]
    fn eval_with_tails() {
        let f = tent();
        assert_eq!(f.eval(-3.0), 3.0);
        assert_eq!(f.eval(0.5), 0.5);
        assert_eq!(f.eval(2.0), 2.0);
        assert_eq!(f.eval_sorted(&[-3.0, 0.5, 2.0]), vec![3.0, 0.5, 2.0]);
    }

    #[test]
    fn atoms_sum_to_slope_span() {
        let f = PlFunction::new(vec![0.0, 1.0, 3.0], vec![0.0, 0.5, 3.0], 0.0, 2.0).unwrap();
        let atoms = f.curvature_atoms();
        let total: f64 = atoms.iter().map(|a| a.1).sum();
        assert!((total - 2.0).abs() < 1e-15);
        assert!((atoms[0].1 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exp_integral_of_linear_tails() {
        // g(x) = -|x|: integral 2.
        let g = PlFunction::new(vec![-1.0, 0.0, 1.0], vec![-1.0, 0.0, -1.0], 1.0, -1.0).unwrap();
        assert!((g.exp_integral().unwrap() - 2.0).abs() < 1e-14);
        let bad = PlFunction::new(vec![0.0, 1.0], vec![0.0, 0.0], 0.0, -1.0).unwrap();
        assert!(bad.exp_integral().is_err());
    }

    #[test]
    fn max_inserts_crossings() {
        let a = PlFunction::new(vec![0.0, 2.0], vec![0.0, 2.0], 1.0, 1.0).unwrap();
        let b = PlFunction::new(vec![0.0, 2.0], vec![1.0, 1.0 + 2.0], 1.0, 1.0).unwrap();
        let m = a.max_with(&b).unwrap();
        assert_eq!(m.eval(1.0), 2.0);
        let c = PlFunction::new(vec![0.0, 2.0], vec![2.0, 0.0], 1.0, 1.0);
        assert!(c.is_ok());
        let d = PlFunction::new(vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], 1.0, 1.0).unwrap();
        let e = PlFunction::new(vec![0.0, 2.0], vec![0.5, 0.5], 1.0, 1.0).unwrap();
        let m = d.max_with(&e).unwrap();
        assert!(m.xs().contains(&0.5) && m.xs().contains(&1.5));
        assert_eq!(m.eval(1.0), 0.5);
    }

    #[test]
    fn combine_sums_on_union() {
        let a = PlFunction::new(vec![0.0, 1.0], vec![0.0, 1.0], 1.0, 1.0).unwrap();
        let b = PlFunction::new(vec![0.5, 2.0], vec![0.0, 0.0], 0.0, 0.0).unwrap();
        let c = PlFunction::combine(&[(1.0, &a), (-2.0, &b)], 3.0);
        assert_eq!(c.xs(), &[0.0, 0.5, 1.0, 2.0]);
        for x in [-1.0, 0.25, 0.75, 1.5, 5.0] {
            assert!((c.eval(x) - (3.0 * x + a.eval(x) - 2.0 * b.eval(x))).abs() < 1e-14);
        }
    }
}
