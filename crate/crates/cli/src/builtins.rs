//! Named potentials: `fs`, `fs-shift:<h>`, `random:<seed>`, `perturbed:<amp>`,
//! or a path to a file in the potential text format.

use kahler_lab::convex_core::{Potential, SGrid};
use kahler_lab::einstein::{Gauge, KESolution, TwistWeight};
use kahler_lab::models::{random_convex, softplus};

use crate::failure::Failure;

fn number(spec: &str, text: &str) -> Result<f64, Failure> {
    text.parse::<f64>()
        .map_err(|e| Failure::Input(format!("bad parameter in {spec:?}: {e}")))
}

/// Fubini–Study type potential with tail slopes `(lo, hi)`, centred at `h`.
fn fs_like(grid: SGrid, lo: f64, hi: f64, h: f64) -> Result<Potential, Failure> {
    let k = 0.5 * (hi - lo);
    Ok(Potential::from_fn(
        grid,
        |s| lo * s + 2.0 * softplus(k * (s - h)),
        lo,
        hi,
    )?)
}

fn read(path: &str) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("cannot read {path}: {e}")))
}

/// Potential for `spec` on `grid`. Files may carry a trailer (for instance a
/// KE solution); it is ignored here.
pub fn potential(spec: &str, grid: SGrid, lo: f64, hi: f64) -> Result<Potential, Failure> {
    if spec == "fs" {
        return fs_like(grid, lo, hi, 0.0);
    }
    if let Some(h) = spec.strip_prefix("fs-shift:") {
        return fs_like(grid, lo, hi, number(spec, h)?);
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed = seed
            .parse::<u64>()
            .map_err(|e| Failure::Input(format!("bad seed in {spec:?}: {e}")))?;
        return Ok(random_convex(grid, lo, hi, seed)?);
    }
    if let Some(amp) = spec.strip_prefix("perturbed:") {
        let amp = number(spec, amp)?;
        let base = fs_like(grid, lo, hi, 0.0)?;
        let values = grid
            .points()
            .iter()
            .zip(base.values())
            .map(|(s, v)| v + amp * (-s * s).exp())
            .collect();
        return Ok(Potential::new(grid, values, lo, hi)?);
    }
    Ok(Potential::from_text_with_trailer(&read(spec)?)?.0)
}

/// KE candidate for `spec`. Built-ins and plain potential files are wrapped
/// with [`KESolution::certify`]; solution files keep their stored constant.
pub fn solution(
    spec: &str,
    grid: SGrid,
    lo: f64,
    hi: f64,
    w: Option<&TwistWeight>,
) -> Result<KESolution, Failure> {
    let is_builtin = spec == "fs"
        || ["fs-shift:", "random:", "perturbed:"]
            .iter()
            .any(|p| spec.starts_with(p));
    if !is_builtin {
        let text = read(spec)?;
        let (_, trailer) = Potential::from_text_with_trailer(&text)?;
        if !trailer.is_empty() {
            return Ok(KESolution::from_text(&text, w.cloned())?);
        }
    }
    let u = potential(spec, grid, lo, hi)?;
    Ok(KESolution::certify(u, w.cloned(), Gauge::Unspecified)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fs_slopes_and_shift() {
        let g = SGrid::new(-14.0, 14.0, 281).unwrap();
        let u = potential("fs", g, 0.0, 2.0).unwrap();
        assert!((u.eval(0.0) - 2.0 * 2f64.ln()).abs() < 1e-12);
        let v = potential("fs-shift:1", g, 0.0, 2.0).unwrap();
        assert!((v.eval(1.0) - 2.0 * 2f64.ln()).abs() < 1e-12);
        assert!(potential("fs-shift:x", g, 0.0, 2.0).is_err());
        assert!(potential("/no/such/file", g, 0.0, 2.0).is_err());
    }

    #[test]
    fn perturbation_must_stay_convex() {
        let g = SGrid::new(-14.0, 14.0, 281).unwrap();
        assert!(potential("perturbed:0.1", g, 0.0, 2.0).is_ok());
        assert!(potential("perturbed:5", g, 0.0, 2.0).is_err());
    }
}
