use nalgebra::{DMatrix, SymmetricEigen};
use serde::Serialize;

use crate::convex_core::{convexity_verdict, ConvexityVerdict};
use crate::error::{LabError, Result};

/// Box `[lo_i, hi_i]` sampled with `n_i` points per axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxGrid {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    pub n: Vec<usize>,
}

impl BoxGrid {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>, n: Vec<usize>) -> Result<Self> {
        if lo.len() != hi.len() || lo.len() != n.len() || !(1..=3).contains(&lo.len()) {
            return Err(LabError::InvalidGrid(
                "box needs 1 to 3 matching axes".into(),
            ));
        }
        for d in 0..lo.len() {
            if !(lo[d] < hi[d]) || n[d] < 3 {
                return Err(LabError::InvalidGrid(format!(
                    "axis {d}: need lo < hi and at least 3 points"
                )));
            }
        }
        Ok(Self { lo, hi, n })
    }

    pub fn dimension(&self) -> usize {
        self.lo.len()
    }

    pub fn spacing(&self, d: usize) -> f64 {
        (self.hi[d] - self.lo[d]) / (self.n[d] - 1) as f64
    }

    pub fn len(&self) -> usize {
        self.n.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Multi-index of a flat (row-major) node index.
    fn index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dimension()];
        for d in (0..self.dimension()).rev() {
            idx[d] = flat % self.n[d];
            flat /= self.n[d];
        }
        idx
    }

    fn flat(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.n).fold(0, |acc, (i, n)| acc * n + i)
    }

    pub fn point(&self, flat: usize) -> Vec<f64> {
        self.index(flat)
            .iter()
            .enumerate()
            .map(|(d, &i)| self.lo[d] + i as f64 * self.spacing(d))
            .collect()
    }

    fn on_boundary(&self, flat: usize) -> bool {
        self.index(flat)
            .iter()
            .zip(&self.n)
            .any(|(&i, &n)| i == 0 || i == n - 1)
    }

    /// Tensor trapezoid weight of a node.
    fn weight(&self, flat: usize) -> f64 {
        self.index(flat)
            .iter()
            .enumerate()
            .map(|(d, &i)| {
                let h = self.spacing(d);
                if i == 0 || i == self.n[d] - 1 {
                    0.5 * h
                } else {
                    h
                }
            })
            .product()
    }
}

/// Weights `phi_t(x)` sampled on a box for uniformly spaced `t`, with a flag
/// recording whether `(t, x) -> phi` passed the discrete joint-convexity test.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFamily {
    pub grid: BoxGrid,
    pub t_samples: Vec<f64>,
    /// `values[i]` holds `phi_{t_i}` at every node, row-major.
    pub values: Vec<Vec<f64>>,
    pub jointly_convex: bool,
    /// Most negative normalized Hessian eigenvalue seen by the test.
    pub worst_eigenvalue: f64,
}

/// Relative tolerance of the joint-convexity certificate.
pub const JOINT_CONVEXITY_TOL: f64 = 1e-9;

impl WeightFamily {
    pub fn new(grid: BoxGrid, t_samples: Vec<f64>, values: Vec<Vec<f64>>) -> Result<Self> {
        if t_samples.len() < 3 || t_samples.len() != values.len() {
            return Err(LabError::Mismatch(
                "need at least 3 t samples, one value array each".into(),
            ));
        }
        let ht = t_samples[1] - t_samples[0];
        if t_samples
            .windows(2)
            .any(|w| !(w[1] - w[0] > 0.0) || ((w[1] - w[0]) - ht).abs() > 1e-9 * ht.max(1.0))
        {
            return Err(LabError::InvalidGrid(
                "t samples must be uniform and increasing".into(),
            ));
        }
        if values.iter().any(|v| v.len() != grid.len()) {
            return Err(LabError::Mismatch(
                "weight arrays must cover every box node".into(),
            ));
        }
        let worst_eigenvalue = joint_hessian_min_eigenvalue(&grid, ht, &values);
        let scale = values
            .iter()
            .flatten()
            .filter(|v| v.is_finite())
            .fold(1.0f64, |m, v| m.max(v.abs()));
        let h_min = (0..grid.dimension())
            .map(|d| grid.spacing(d))
            .fold(ht, f64::min);
        let tol = JOINT_CONVEXITY_TOL * scale / (h_min * h_min);
        Ok(Self {
            jointly_convex: worst_eigenvalue >= -tol,
            grid,
            t_samples,
            values,
            worst_eigenvalue,
        })
    }

    pub fn from_fn(
        grid: BoxGrid,
        t_samples: Vec<f64>,
        phi: impl Fn(f64, &[f64]) -> f64,
    ) -> Result<Self> {
        let values = t_samples
            .iter()
            .map(|&t| (0..grid.len()).map(|k| phi(t, &grid.point(k))).collect())
            .collect();
        Self::new(grid, t_samples, values)
    }
}

/// Smallest eigenvalue of the central-difference Hessian in `(t, x)` over
/// every interior node.
fn joint_hessian_min_eigenvalue(grid: &BoxGrid, ht: f64, values: &[Vec<f64>]) -> f64 {
    let dim = grid.dimension() + 1;
    let steps: Vec<f64> = std::iter::once(ht)
        .chain((0..grid.dimension()).map(|d| grid.spacing(d)))
        .collect();
    let at = |i: usize, idx: &[usize]| values[i][grid.flat(idx)];
    let mut worst = f64::INFINITY;
    for i in 1..values.len() - 1 {
        for flat in 0..grid.len() {
            if grid.on_boundary(flat) {
                continue;
            }
            let idx = grid.index(flat);
            // Coordinate 0 is t, coordinate d + 1 is x_d.
            let shifted = |moves: &[(usize, isize)]| {
                let mut ti = i as isize;
                let mut j: Vec<isize> = idx.iter().map(|&v| v as isize).collect();
                for &(c, s) in moves {
                    if c == 0 {
                        ti += s;
                    } else {
                        j[c - 1] += s;
                    }
                }
                let j: Vec<usize> = j.iter().map(|&v| v as usize).collect();
                at(ti as usize, &j)
            };
            let center = shifted(&[]);
            let mut hess = DMatrix::<f64>::zeros(dim, dim);
            for a in 0..dim {
                hess[(a, a)] = (shifted(&[(a, 1)]) - 2.0 * center + shifted(&[(a, -1)]))
                    / (steps[a] * steps[a]);
                for b in a + 1..dim {
                    let m = (shifted(&[(a, 1), (b, 1)])
                        - shifted(&[(a, 1), (b, -1)])
                        - shifted(&[(a, -1), (b, 1)])
                        + shifted(&[(a, -1), (b, -1)]))
                        / (4.0 * steps[a] * steps[b]);
                    hess[(a, b)] = m;
                    hess[(b, a)] = m;
                }
            }
            let eig = SymmetricEigen::new(hess).eigenvalues.min();
            worst = worst.min(eig);
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrekopaReport {
    pub verdict: ConvexityVerdict,
    pub jointly_convex: bool,
    /// Largest share of a slice's integral carried by boundary nodes.
    pub tail_fraction: f64,
    /// `f(t) = -log ∫ e^{-phi_t}`.
    pub trace: Vec<f64>,
}

/// Tensor trapezoid integral of `e^{-phi_t}` per slice and the verdict on
/// `f(t) = -log` of it. When `jointly_convex` is false the verdict carries no
/// guarantee; callers should read the flag first.
pub fn prekopa_check(weights: &WeightFamily, tol: f64) -> Result<PrekopaReport> {
    let g = &weights.grid;
    let mut trace = Vec::with_capacity(weights.values.len());
    let mut tail_fraction = 0.0f64;
    for (phi, t) in weights.values.iter().zip(&weights.t_samples) {
        let (mut total, mut boundary) = (0.0, 0.0);
        for (k, &p) in phi.iter().enumerate() {
            let c = g.weight(k) * (-p).exp();
            total += c;
            if g.on_boundary(k) {
                boundary += c;
            }
        }
        if !(total > 0.0 && total.is_finite()) {
            return Err(LabError::Inadmissible(format!(
                "slice at t = {t} has non-finite or zero integral"
            )));
        }
        tail_fraction = tail_fraction.max(boundary / total);
        trace.push(-total.ln());
    }
    if tail_fraction > tol {
        return Err(LabError::Inadmissible(format!(
            "domain too small: boundary nodes carry {tail_fraction:.3e} of the mass (tolerance {tol:.1e})"
        )));
    }
    let spacing = weights.t_samples[1] - weights.t_samples[0];
    Ok(PrekopaReport {
        verdict: convexity_verdict(&trace, spacing, tol)?,
        jointly_convex: weights.jointly_convex,
        tail_fraction,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_core::ConvexityKind;

    fn ts(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect()
    }

    #[test]
    fn translated_gaussian_is_constant() {
        let g = BoxGrid::new(vec![-10.0], vec![10.0], vec![401]).unwrap();
        let w = WeightFamily::from_fn(g, ts(-1.0, 1.0, 21), |t, x| (x[0] - t).powi(2)).unwrap();
        assert!(w.jointly_convex);
        let r = prekopa_check(&w, 1e-8).unwrap();
        assert_eq!(r.verdict.kind, ConvexityKind::Affine);
        assert!(r.verdict.slope.unwrap().abs() < 1e-8);
        assert!((r.trace[0] + std::f64::consts::PI.sqrt().ln()).abs() < 1e-10);
    }

    #[test]
    fn separable_quadratic_is_strictly_convex() {
        let g = BoxGrid::new(vec![-8.0, -8.0], vec![8.0, 8.0], vec![81, 81]).unwrap();
        let w = WeightFamily::from_fn(g, ts(-1.0, 1.0, 11), |t, x| {
            x[0] * x[0] + x[1] * x[1] + t * t
        })
        .unwrap();
        let r = prekopa_check(&w, 1e-6).unwrap();
        assert!(r.jointly_convex);
        assert_eq!(r.verdict.kind, ConvexityKind::StrictlyConvex);
    }

    #[test]
    fn non_jointly_convex_weight_is_flagged() {
        let g = BoxGrid::new(vec![-8.0], vec![8.0], vec![321]).unwrap();
        let w = WeightFamily::from_fn(g, ts(-2.0, 2.0, 41), |t, x| (1.0 + t * t) * x[0] * x[0])
            .unwrap();
        assert!(!w.jointly_convex);
        let r = prekopa_check(&w, 1e-8).unwrap();
        assert!(r.verdict.is_nonconvex());
    }

    #[test]
    fn small_domain_is_rejected() {
        let g = BoxGrid::new(vec![-1.0], vec![1.0], vec![41]).unwrap();
        let w = WeightFamily::from_fn(g, ts(0.0, 1.0, 5), |_, x| x[0] * x[0]).unwrap();
        assert!(prekopa_check(&w, 1e-6).is_err());
    }
}
