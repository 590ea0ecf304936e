//! Damped Newton solver for `u'' = a e^{s - u - w}` on a finite window.
//!
//! Interior rows are the centered second difference. The end rows are Robin
//! conditions that integrate the equation exactly over the affine tails, so
//! that summing all rows reproduces `slope_hi - slope_lo = a mass(u, w)` with
//! the same quadrature as [`mass`](crate::convex_core::mass). The constant `a`
//! is reset from that identity before every Newton step.
//!
//! When `w` is affine, translations `u(s - h) + (1 - w') h` map solutions to
//! solutions and the Newton matrix is nearly singular. In that case the upper
//! Robin row is replaced by pinning the slope at `center` to the mean of the
//! tail slopes; the dropped row is reported as `boundary_defect`.

use super::solution::{lower_asymptote_constant, Gauge, KESolution};
use super::twist::TwistWeight;
use crate::convex_core::{check_integrability, Potential, SGrid};
use crate::error::{LabError, Result};
use crate::models::softplus;

/// Smallest grid the solver accepts.
pub const MIN_GRID_POINTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeOptions {
    pub max_iterations: usize,
    /// Target for the scaled residual norm.
    pub tol: f64,
    /// Where the slope is pinned in the translation-invariant case.
    pub center: f64,
    /// Largest accepted `boundary_defect`.
    pub defect_tol: f64,
}

impl Default for KeOptions {
    fn default() -> Self {
        Self {
            max_iterations: 80,
            tol: 1e-9,
            center: 0.0,
            defect_tol: 1e-7,
        }
    }
}

/// Gaussian elimination with partial pivoting for a tridiagonal system;
/// `sub[i]` is entry `(i+1, i)` and `sup[i]` entry `(i, i+1)`.
pub fn solve_tridiagonal(sub: &[f64], diag: &[f64], sup: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut du = sup.to_vec();
    let mut dl = sub.to_vec();
    let mut du2 = vec![0.0; n.saturating_sub(2)];
    let mut b = rhs.to_vec();
    for i in 0..n - 1 {
        if d[i].abs() >= dl[i].abs() {
            if d[i] == 0.0 {
                return Err(LabError::NoConvergence {
                    iterations: 0,
                    residual: f64::INFINITY,
                });
            }
            let fact = dl[i] / d[i];
            d[i + 1] -= fact * du[i];
            b[i + 1] -= fact * b[i];
        } else {
            let fact = d[i] / dl[i];
            d[i] = dl[i];
            let tmp = d[i + 1];
            d[i + 1] = du[i] - fact * tmp;
            if i + 2 < n {
                du2[i] = du[i + 1];
                du[i + 1] = -fact * du2[i];
            }
            du[i] = tmp;
            let tb = b[i];
            b[i] = b[i + 1];
            b[i + 1] = tb - fact * b[i + 1];
        }
        dl[i] = 0.0;
    }
    if d[n - 1] == 0.0 {
        return Err(LabError::NoConvergence {
            iterations: 0,
            residual: f64::INFINITY,
        });
    }
    let mut x = vec![0.0; n];
    x[n - 1] = b[n - 1] / d[n - 1];
    if n >= 2 {
        x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    }
    for i in (0..n.saturating_sub(2)).rev() {
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    Ok(x)
}

/// Default starting point: `slope_lo s + span softplus(2 (s - center)) / 2`.
pub fn default_init(grid: SGrid, slope_lo: f64, slope_hi: f64, center: f64) -> Result<Potential> {
    let span = slope_hi - slope_lo;
    Potential::from_fn(
        grid,
        |s| slope_lo * s + 0.5 * span * softplus(2.0 * (s - center)),
        slope_lo,
        slope_hi,
    )
}

/// Size of the residual that rounding alone produces in `D^2 u`.
fn rounding_floor(u: &[f64], h: f64) -> f64 {
    let scale = u.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    8.0 * f64::EPSILON * scale / (h * h)
}

struct Problem<'a> {
    grid: SGrid,
    w: Option<&'a TwistWeight>,
    slope_lo: f64,
    slope_hi: f64,
    c_lo: f64,
    c_hi: f64,
    /// Slope-pinning row `(entries, target)` in the symmetric case.
    pin: Option<(Vec<(usize, f64)>, f64)>,
}

struct State {
    a: f64,
    f: Vec<f64>,
    rows: Vec<f64>,
    norm: f64,
    upper_robin: f64,
}

impl Problem<'_> {
    fn state(&self, u: &[f64]) -> Result<State> {
        let n = u.len();
        let h = self.grid.spacing();
        let s = self.grid.points();
        let f: Vec<f64> = (0..n)
            .map(|k| (s[k] - u[k] - self.w.map_or(0.0, |w| w.values()[k])).exp())
            .collect();
        let m = f[1..n - 1].iter().sum::<f64>() * h
            + (0.5 * h + 1.0 / self.c_lo) * f[0]
            + (0.5 * h + 1.0 / self.c_hi) * f[n - 1];
        let a = (self.slope_hi - self.slope_lo) / m;
        if !(a.is_finite() && a > 0.0) {
            return Err(LabError::NoConvergence {
                iterations: 0,
                residual: f64::INFINITY,
            });
        }
        let mut rows = vec![0.0; n];
        rows[0] = (u[1] - u[0]) / h - self.slope_lo - a * (0.5 * h + 1.0 / self.c_lo) * f[0];
        for k in 1..n - 1 {
            rows[k] = (u[k + 1] - 2.0 * u[k] + u[k - 1]) / (h * h) - a * f[k];
        }
        let upper_robin =
            self.slope_hi - (u[n - 1] - u[n - 2]) / h - a * (0.5 * h + 1.0 / self.c_hi) * f[n - 1];
        rows[n - 1] = match &self.pin {
            Some((entries, target)) => entries.iter().map(|(k, c)| c * u[*k]).sum::<f64>() - target,
            None => upper_robin,
        };
        let interior = rows[1..n - 1].iter().fold(0.0f64, |m, r| m.max(r.abs()));
        let norm = interior.max(rows[0].abs() / h).max(rows[n - 1].abs() / h);
        Ok(State {
            a,
            f,
            rows,
            norm: if norm.is_finite() {
                norm
            } else {
                f64::INFINITY
            },
            upper_robin,
        })
    }

    fn newton_step(&self, st: &State) -> Result<Vec<f64>> {
        let n = st.f.len();
        let h = self.grid.spacing();
        let a = st.a;
        let mut sub = vec![0.0; n - 1];
        let mut diag = vec![0.0; n];
        let mut sup = vec![0.0; n - 1];
        diag[0] = -1.0 / h + a * (0.5 * h + 1.0 / self.c_lo) * st.f[0];
        sup[0] = 1.0 / h;
        for k in 1..n - 1 {
            sub[k - 1] = 1.0 / (h * h);
            diag[k] = -2.0 / (h * h) + a * st.f[k];
            sup[k] = 1.0 / (h * h);
        }
        match &self.pin {
            None => {
                sub[n - 2] = 1.0 / h;
                diag[n - 1] = -1.0 / h + a * (0.5 * h + 1.0 / self.c_hi) * st.f[n - 1];
                solve_tridiagonal(&sub, &diag, &sup, &st.rows)
            }
            Some((entries, _)) => {
                // Base matrix with a Dirichlet last row, corrected by Sherman–Morrison.
                sub[n - 2] = 0.0;
                diag[n - 1] = 1.0;
                let y = solve_tridiagonal(&sub, &diag, &sup, &st.rows)?;
                let mut e = vec![0.0; n];
                e[n - 1] = 1.0;
                let z = solve_tridiagonal(&sub, &diag, &sup, &e)?;
                let dot =
                    |x: &[f64]| entries.iter().map(|(k, c)| c * x[*k]).sum::<f64>() - x[n - 1];
                let denom = 1.0 + dot(&z);
                if denom.abs() < 1e-14 {
                    return Err(LabError::NoConvergence {
                        iterations: 0,
                        residual: st.norm,
                    });
                }
                let coef = dot(&y) / denom;
                Ok(y.iter().zip(&z).map(|(y, z)| y - coef * z).collect())
            }
        }
    }
}

/// Pinning row for the slope at `center`, interpolating the centered
/// differences of the two surrounding nodes.
fn pin_row(grid: &SGrid, center: f64) -> Result<Vec<(usize, f64)>> {
    let n = grid.len();
    let h = grid.spacing();
    let x = (center - grid.s_min()) / h;
    let k = x.floor();
    if !(k >= 1.0 && k + 2.0 <= (n - 1) as f64) {
        return Err(LabError::Inadmissible(format!(
            "center {center} is too close to the window edge"
        )));
    }
    let k = k as usize;
    let th = x - k as f64;
    let c = 1.0 / (2.0 * h);
    let mut row = vec![(k - 1, -(1.0 - th) * c), (k + 1, (1.0 - th) * c)];
    if th > 0.0 {
        row.push((k, -th * c));
        row.push((k + 2, th * c));
    }
    Ok(row)
}

pub fn solve_ke(
    w: Option<&TwistWeight>,
    grid: SGrid,
    slope_lo: f64,
    slope_hi: f64,
    init: Option<&Potential>,
) -> Result<KESolution> {
    solve_ke_with(w, grid, slope_lo, slope_hi, init, &KeOptions::default())
}

pub fn solve_ke_with(
    w: Option<&TwistWeight>,
    grid: SGrid,
    slope_lo: f64,
    slope_hi: f64,
    init: Option<&Potential>,
    opts: &KeOptions,
) -> Result<KESolution> {
    if !(slope_hi > slope_lo) {
        return Err(LabError::Inadmissible(format!(
            "slope span must be positive, got ({slope_lo}, {slope_hi})"
        )));
    }
    if grid.len() < MIN_GRID_POINTS {
        return Err(LabError::InvalidGrid(format!(
            "grid too small for the KE solver: {} points, need at least {MIN_GRID_POINTS}",
            grid.len()
        )));
    }
    if let Some(w) = w {
        if *w.grid() != grid {
            return Err(LabError::Mismatch(
                "twist weight lives on another grid".into(),
            ));
        }
    }
    let (c_lo, c_hi) = check_integrability(slope_lo, slope_hi, w)?;
    let symmetric = w.is_none_or(|w| w.is_affine());
    let pin = if symmetric {
        if (c_lo - c_hi).abs() > 1e-12 * (1.0 + c_lo.abs()) {
            return Err(LabError::Inadmissible(format!(
                "unbalanced cone angles: tails need equal exponents, got {c_lo} and {c_hi}; \
                 no solution exists"
            )));
        }
        Some((pin_row(&grid, opts.center)?, 0.5 * (slope_lo + slope_hi)))
    } else {
        None
    };
    let problem = Problem {
        grid,
        w,
        slope_lo,
        slope_hi,
        c_lo,
        c_hi,
        pin,
    };

    let mut u: Vec<f64> = match init {
        Some(p) => {
            if *p.grid() != grid
                || (p.slope_lo() - slope_lo).abs() > 1e-12
                || (p.slope_hi() - slope_hi).abs() > 1e-12
            {
                return Err(LabError::Mismatch(
                    "initial potential has another grid or slope range".into(),
                ));
            }
            p.values().to_vec()
        }
        None => default_init(grid, slope_lo, slope_hi, opts.center)?
            .values()
            .to_vec(),
    };

    let mut history = Vec::new();
    let mut st = problem.state(&u)?;
    let mut iterations = 0;
    let h = grid.spacing();
    while st.norm > opts.tol.max(rounding_floor(&u, h)) {
        history.push(st.norm);
        if iterations == opts.max_iterations {
            return Err(LabError::NoConvergence {
                iterations,
                residual: st.norm,
            });
        }
        iterations += 1;
        let step = problem.newton_step(&st)?;
        let mut lambda = 1.0;
        loop {
            let trial: Vec<f64> = u.iter().zip(&step).map(|(u, d)| u - lambda * d).collect();
            match problem.state(&trial) {
                Ok(next) if next.norm < st.norm || lambda < 1.0 / 1024.0 => {
                    u = trial;
                    st = next;
                    break;
                }
                _ if lambda < 1.0 / 1024.0 => {
                    return Err(LabError::NoConvergence {
                        iterations,
                        residual: st.norm,
                    })
                }
                _ => lambda *= 0.5,
            }
        }
    }
    history.push(st.norm);

    let boundary_defect = if symmetric { st.upper_robin.abs() } else { 0.0 };
    if boundary_defect > opts.defect_tol {
        return Err(LabError::Certification(format!(
            "upper boundary row defect {boundary_defect:.3e} exceeds {:.1e}",
            opts.defect_tol
        )));
    }
    let pot = Potential::new(grid, u, slope_lo, slope_hi)?;
    let c = lower_asymptote_constant(&pot, w, st.a);
    let pot = pot.shifted(-c);
    let a = st.a * (-c).exp();
    let residual_sup = super::solution::ke_residual(&pot, w, a)?;
    Ok(KESolution {
        u: pot,
        w: w.cloned(),
        a,
        residual_sup,
        gauge: Gauge::LowerAsymptote,
        boundary_defect,
        iterations,
        residual_history: history,
        applied_constant: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{cone_solution, fubini_study};

    #[test]
    fn tridiagonal_with_pivoting() {
        // [[0,1,0],[1,0,1],[0,1,1]] x = [1,2,3]  ->  x = [0,1,2]
        let x = solve_tridiagonal(&[1.0, 1.0], &[0.0, 0.0, 1.0], &[1.0, 1.0], &[1.0, 2.0, 3.0])
            .unwrap();
        for (a, b) in x.iter().zip([0.0, 1.0, 2.0]) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn untwisted_recovers_fubini_study() {
        let g = SGrid::new(-20.0, 20.0, 16385).unwrap();
        let sol = solve_ke(None, g, 0.0, 2.0, None).unwrap();
        let fs = fubini_study(g).unwrap();
        assert!((sol.a - 2.0).abs() < 1e-6, "a = {}", sol.a);
        assert!(sol.residual_sup <= 1e-8, "{}", sol.residual_sup);
        assert!(
            sol.u.sup_distance(&fs) < 1e-6,
            "{}",
            sol.u.sup_distance(&fs)
        );
    }

    #[test]
    fn symmetric_cone() {
        let g = SGrid::new(-30.0, 30.0, 16385).unwrap();
        let w = TwistWeight::cone(g, 0.5).unwrap();
        let sol = solve_ke(Some(&w), g, 0.0, 1.0, None).unwrap();
        let exact = cone_solution(g, 0.5).unwrap();
        assert!((sol.a - 0.5).abs() < 1e-6, "a = {}", sol.a);
        assert!(sol.residual_sup <= 1e-8);
        assert!(
            sol.u.sup_distance(&exact) < 1e-6,
            "{}",
            sol.u.sup_distance(&exact)
        );
    }

    #[test]
    fn newton_is_local_near_the_closed_form() {
        let g = SGrid::new(-20.0, 20.0, 4097).unwrap();
        let init = Potential::from_fn(
            g,
            |s| 2.0 * softplus(s) + 0.01 * (-s * s / 4.0).exp(),
            0.0,
            2.0,
        )
        .unwrap();
        let sol = solve_ke(None, g, 0.0, 2.0, Some(&init)).unwrap();
        assert!(sol.iterations <= 8, "{}", sol.iterations);
        for w in sol.residual_history.windows(2) {
            assert!(w[1] <= w[0]);
        }
    }

    #[test]
    fn converged_init_is_a_fixed_point() {
        let g = SGrid::new(-20.0, 20.0, 4097).unwrap();
        let sol = solve_ke(None, g, 0.0, 2.0, None).unwrap();
        let again = solve_ke(None, g, 0.0, 2.0, Some(&sol.u)).unwrap();
        assert!(again.iterations <= 1);
        assert!(again.u.sup_distance(&sol.u) < 1e-10);
        assert!(again.residual_sup <= 1e-8);
    }

    #[test]
    fn constant_shift_of_init_gives_same_gauged_answer() {
        let g = SGrid::new(-20.0, 20.0, 4097).unwrap();
        let init = default_init(g, 0.0, 2.0, 0.0).unwrap();
        let a = solve_ke(None, g, 0.0, 2.0, Some(&init)).unwrap();
        let b = solve_ke(None, g, 0.0, 2.0, Some(&init.shifted(3.0))).unwrap();
        assert!(a.u.sup_distance(&b.u) < 1e-9);
        assert!((a.a - b.a).abs() < 1e-9);
    }

    #[test]
    fn unbalanced_cone_is_rejected() {
        let g = SGrid::new(-20.0, 20.0, 257).unwrap();
        let w = TwistWeight::cone(g, 0.25).unwrap();
        let err = solve_ke(Some(&w), g, 0.0, 1.25, None).unwrap_err();
        assert!(matches!(err, LabError::Inadmissible(_)));
    }
}
