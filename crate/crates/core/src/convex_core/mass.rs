use super::piecewise::PlFunction;
use super::potential::Potential;
use crate::einstein::TwistWeight;
use crate::error::{LabError, Result};

/// Exponent slopes of `s - u - w` at the two ends: `1 - p_lo - w_lo` must be
/// positive and `1 - p_hi - w_hi` negative.
pub fn check_integrability(
    slope_lo: f64,
    slope_hi: f64,
    w: Option<&TwistWeight>,
) -> Result<(f64, f64)> {
    let (wl, wh) = w.map_or((0.0, 0.0), |w| (w.slope_lo(), w.slope_hi()));
    let lo = slope_lo + wl;
    let hi = slope_hi + wh;
    if !(lo < 1.0) {
        return Err(LabError::NotIntegrable {
            tail: "lower",
            slope: lo,
            requirement: "< 1",
        });
    }
    if !(hi > 1.0) {
        return Err(LabError::NotIntegrable {
            tail: "upper",
            slope: hi,
            requirement: "> 1",
        });
    }
    Ok((1.0 - lo, hi - 1.0))
}

/// Samples of the density `e^{s - u(s) - w(s)}` at the grid nodes.
pub fn density(u: &Potential, w: Option<&TwistWeight>) -> Result<Vec<f64>> {
    if let Some(w) = w {
        if w.grid() != u.grid() {
            return Err(LabError::Mismatch(
                "twist weight and potential grids differ".into(),
            ));
        }
    }
    let s = u.grid().points();
    Ok(s.iter()
        .enumerate()
        .map(|(k, &s)| {
            let wk = w.map_or(0.0, |w| w.values()[k]);
            (s - u.values()[k] - wk).exp()
        })
        .collect())
}

/// Quadrature weights matching [`mass`]: trapezoid weights, with the closed
/// form tail integral folded into the two end nodes.
pub fn mass_weights(u: &Potential, w: Option<&TwistWeight>) -> Result<Vec<f64>> {
    let (c_lo, c_hi) = check_integrability(u.slope_lo(), u.slope_hi(), w)?;
    let n = u.grid().len();
    let h = u.grid().spacing();
    let mut wts = vec![h; n];
    wts[0] = 0.5 * h + 1.0 / c_lo;
    wts[n - 1] = 0.5 * h + 1.0 / c_hi;
    Ok(wts)
}

/// `∫_R e^{s - u(s) - w(s)} ds`: trapezoid rule on the grid plus the exact
/// integrals of the two exponential tails.
pub fn mass(u: &Potential, w: Option<&TwistWeight>) -> Result<f64> {
    let wts = mass_weights(u, w)?;
    let f = density(u, w)?;
    Ok(f.iter().zip(&wts).map(|(f, w)| f * w).sum())
}

/// The same integral with `u` (and `w`) read as piecewise-linear functions,
/// integrated exactly cell by cell.
pub fn mass_pl(u: &PlFunction, w: Option<&TwistWeight>) -> Result<f64> {
    check_integrability(u.slope_lo(), u.slope_hi(), w)?;
    let exponent = match w {
        Some(w) => {
            let wp = w.to_pl();
            PlFunction::combine(&[(-1.0, u), (-1.0, &wp)], 1.0)
        }
        None => PlFunction::combine(&[(-1.0, u)], 1.0),
    };
    exponent.exp_integral()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_core::SGrid;
    use crate::models::fubini_study;

    #[test]
    fn fubini_study_has_unit_mass() {
        let g = SGrid::new(-20.0, 20.0, 4097).unwrap();
        let u = fubini_study(g).unwrap();
        assert!((mass(&u, None).unwrap() - 1.0).abs() < 1e-8);
        assert!((mass_pl(&u.to_pl(), None).unwrap() - 1.0).abs() < 1e-4);
    }

    #[test]
    fn constant_and_translation_scaling() {
        let g = SGrid::new(-20.0, 20.0, 801).unwrap();
        let u = fubini_study(g).unwrap();
        let m = mass(&u, None).unwrap();
        let c = 0.7;
        let mc = mass(&u.shifted(c), None).unwrap();
        assert!((mc / m - (-c).exp()).abs() < 1e-12);
    }

    #[test]
    fn names_offending_tail() {
        let g = SGrid::new(-5.0, 5.0, 101).unwrap();
        let u = Potential::from_fn(g, |s| 1.5 * s, 1.5, 1.5).unwrap();
        match mass(&u, None).unwrap_err() {
            LabError::NotIntegrable { tail, slope, .. } => {
                assert_eq!(tail, "lower");
                assert_eq!(slope, 1.5);
            }
            e => panic!("{e:?}"),
        }
    }
}
