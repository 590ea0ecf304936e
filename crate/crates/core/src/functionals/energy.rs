use crate::convex_core::{PlFunction, Potential};
use crate::error::{LabError, Result};
use crate::geodesic::GeodesicSheet;

fn volume(lo0: f64, hi0: f64, lo1: f64, hi1: f64) -> Result<f64> {
    if (lo0 - lo1).abs() > 1e-12 || (hi0 - hi1).abs() > 1e-12 {
        return Err(LabError::Mismatch(format!(
            "energy needs equal slope ranges, got ({lo0}, {hi0}) and ({lo1}, {hi1})"
        )));
    }
    let vol = hi0 - lo0;
    if !(vol > 0.0) {
        return Err(LabError::Inadmissible(format!(
            "energy needs a positive slope span, got {vol}"
        )));
    }
    Ok(vol)
}

/// Trapezoid rule on `n_path` nodes for the path integrand
/// `t -> ((1-t) a1 + t a0) / vol`, where `a_i = ∫ (u0 - u1) u_i''`.
fn path_integral(a0: f64, a1: f64, vol: f64, n_path: usize) -> Result<f64> {
    if n_path < 2 {
        return Err(LabError::InvalidGrid(format!(
            "energy path needs at least 2 nodes, got {n_path}"
        )));
    }
    let h = 1.0 / (n_path - 1) as f64;
    let g = |t: f64| ((1.0 - t) * a1 + t * a0) / vol;
    let mut total = 0.5 * (g(0.0) + g(1.0));
    for i in 1..n_path - 1 {
        total += g(i as f64 * h);
    }
    Ok(total * h)
}

/// Pairing `∫ f u''` of grid samples `f` against the curvature of `u`,
/// including the two boundary slope jumps so the weights add up to the span.
fn curvature_pairing(f: &[f64], u: &Potential) -> f64 {
    let v = u.values();
    let n = v.len();
    let h = u.grid().spacing();
    let mut total = f[0] * ((v[1] - v[0]) / h - u.slope_lo());
    for k in 1..n - 1 {
        total += f[k] * (v[k + 1] - 2.0 * v[k] + v[k - 1]) / h;
    }
    total + f[n - 1] * (u.slope_hi() - (v[n - 1] - v[n - 2]) / h)
}

/// Monge–Ampère energy `E(u0, u1) = ∫_0^1 ∫ u̇_t u_t'' ds / Vol dt` along the
/// linear path `u_t = (1-t) u1 + t u0`, normalized so `E(u + c, u) = c`.
pub fn energy(u0: &Potential, u1: &Potential, n_path: usize) -> Result<f64> {
    if u0.grid() != u1.grid() {
        return Err(LabError::Mismatch(
            "energy needs potentials on one grid".into(),
        ));
    }
    let vol = volume(u0.slope_lo(), u0.slope_hi(), u1.slope_lo(), u1.slope_hi())?;
    let delta: Vec<f64> = u0
        .values()
        .iter()
        .zip(u1.values())
        .map(|(a, b)| a - b)
        .collect();
    let a0 = curvature_pairing(&delta, u0);
    let a1 = curvature_pairing(&delta, u1);
    path_integral(a0, a1, vol, n_path)
}

/// [`energy`] for piecewise-linear potentials with arbitrary breakpoints; the
/// curvature of each is its list of slope jumps.
pub fn energy_pl(u0: &PlFunction, u1: &PlFunction) -> Result<f64> {
    let vol = volume(u0.slope_lo(), u0.slope_hi(), u1.slope_lo(), u1.slope_hi())?;
    let pair = |u: &PlFunction| {
        let atoms = u.curvature_atoms();
        let xs: Vec<f64> = atoms.iter().map(|a| a.0).collect();
        let d0 = u0.eval_sorted(&xs);
        let d1 = u1.eval_sorted(&xs);
        atoms
            .iter()
            .zip(d0.iter().zip(&d1))
            .map(|((_, m), (a, b))| (a - b) * m)
            .sum::<f64>()
    };
    path_integral(pair(u0), pair(u1), vol, 2)
}

/// `E(U(0,.), U(1,.))` accumulated along the sheet itself: each step uses the
/// midpoint rule `u̇ ≈ (U_{i+1} - U_i) / h_t`, `u'' ≈ (U_i'' + U_{i+1}'') / 2`.
pub fn path_energy(sheet: &GeodesicSheet) -> Result<f64> {
    let mut total = 0.0;
    let mut prev = sheet.slice(0);
    for i in 1..sheet.n_t() {
        let next = sheet.slice(i);
        total += energy_pl(&prev, &next)?;
        prev = next;
    }
    Ok(total)
}
