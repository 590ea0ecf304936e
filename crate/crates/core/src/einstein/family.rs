use super::solution::{Gauge, KESolution};
use super::solver::{solve_ke_with, KeOptions};
use crate::convex_core::Potential;
use crate::error::{LabError, Result};

/// Point where the centered slope of `u` crosses the mean of its tail slopes.
pub fn slope_center(u: &Potential) -> f64 {
    let v = u.values();
    let g = u.grid();
    let h = g.spacing();
    let mid = 0.5 * (u.slope_lo() + u.slope_hi());
    let d = |k: usize| (v[k + 1] - v[k - 1]) / (2.0 * h);
    for k in 1..v.len() - 2 {
        let (a, b) = (d(k), d(k + 1));
        if a <= mid && mid <= b {
            let th = if b > a { (mid - a) / (b - a) } else { 0.0 };
            return g.point(k) + th * h;
        }
    }
    if d(1) > mid {
        g.s_min()
    } else {
        g.s_max()
    }
}

/// Solutions transported by the flow `s -> s + h`.
///
/// For `w = beta s` the translate `u(s - h)` solves the equation with `a`
/// replaced by `a e^{-(1 - beta) h}`; adding `(1 - beta) h` restores `a`. Each
/// translate is then re-solved on the grid with the pinning point moved by `h`
/// and shifted back to the base constant, so it carries its own residual
/// certificate. `applied_constant` records the constant actually added
/// relative to the resampled translate (about `(1 - beta) h`).
pub fn ke_family(base: &KESolution, h_values: &[f64]) -> Result<Vec<KESolution>> {
    if let Some(w) = &base.w {
        if !w.is_affine() {
            return Err(LabError::Inadmissible(
                "translations only act on solutions when the twist is affine".into(),
            ));
        }
    }
    let beta = base.w.as_ref().map_or(0.0, |w| w.slope_lo());
    let kappa = 1.0 - beta;
    let g = *base.u.grid();
    let margin = 0.25 * (g.s_max() - g.s_min());
    let center = slope_center(&base.u);

    h_values
        .iter()
        .map(|&h| {
            if h == 0.0 {
                let mut out = base.clone();
                out.applied_constant = Some(0.0);
                return Ok(out);
            }
            if !(h.abs() <= margin) {
                return Err(LabError::Inadmissible(format!(
                    "translation {h} exceeds the grid margin {margin}"
                )));
            }
            let moved = base.u.translated(h)?;
            let init = moved.shifted(kappa * h);
            let opts = KeOptions {
                center: center + h,
                ..KeOptions::default()
            };
            let sol = solve_ke_with(
                base.w.as_ref(),
                g,
                base.u.slope_lo(),
                base.u.slope_hi(),
                Some(&init),
                &opts,
            )?;
            let c = (base.a / sol.a).ln();
            let mut out = sol.shifted(c, Gauge::FlowMatched);
            out.a = base.a;
            out.residual_sup = super::solution::ke_residual(&out.u, out.w.as_ref(), out.a)?;
            let (lo, hi) = overlap(&g, h);
            let mean = (lo..hi)
                .map(|k| out.u.values()[k] - moved.values()[k])
                .sum::<f64>()
                / (hi - lo) as f64;
            out.applied_constant = Some(mean);
            Ok(out)
        })
        .collect()
}

/// Node range whose preimage under `s -> s - h` stays inside the grid.
fn overlap(g: &crate::convex_core::SGrid, h: f64) -> (usize, usize) {
    let n = g.len();
    let m = (h.abs() / g.spacing()).ceil() as usize;
    if h > 0.0 {
        (m.min(n - 1), n)
    } else {
        (0, n - m.min(n - 1))
    }
}
