use crate::convex_core::{second_differences, PlFunction, Potential, SGrid};
use crate::error::{LabError, Result};

/// Fixed convex twist potential `w(s)`. Cone points are affine `w`, smooth
/// twists carry a certified lower bound `strictness` on `w''`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistWeight {
    inner: Potential,
    strictness: f64,
}

impl TwistWeight {
    pub fn new(
        grid: SGrid,
        values: Vec<f64>,
        slope_lo: f64,
        slope_hi: f64,
        strictness: f64,
    ) -> Result<Self> {
        let inner = Potential::new(grid, values, slope_lo, slope_hi)?;
        if !(strictness >= 0.0) {
            return Err(LabError::Inadmissible(format!(
                "strictness must be nonnegative, got {strictness}"
            )));
        }
        let d2 = second_differences(inner.values(), grid.spacing());
        let tol = crate::convex_core::convexity_tolerance(inner.values());
        if let Some((k, &d)) = d2
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .filter(|(_, &d)| d < strictness - tol)
        {
            return Err(LabError::Invariant {
                what: "strictness below the minimal second difference",
                index: k + 1,
                value: d,
                tol: strictness,
            });
        }
        Ok(Self { inner, strictness })
    }

    /// Cone point of parameter `beta` at `z = 0`: `w = beta s`.
    pub fn cone(grid: SGrid, beta: f64) -> Result<Self> {
        let values = grid.points().iter().map(|s| beta * s).collect();
        Self::new(grid, values, beta, beta, 0.0)
    }

    /// `k s^2 / 2` on the grid window, continued affinely; its slopes at the
    /// window ends are `k s_min` and `k s_max`.
    pub fn smooth(grid: SGrid, k: f64) -> Result<Self> {
        if !(k > 0.0) {
            return Err(LabError::Inadmissible(format!(
                "smooth twist needs k > 0, got {k}"
            )));
        }
        let values: Vec<f64> = grid.points().iter().map(|s| 0.5 * k * s * s).collect();
        let d2 = second_differences(&values, grid.spacing());
        let strictness = d2.iter().copied().fold(f64::INFINITY, f64::min).max(0.0);
        Self::new(grid, values, k * grid.s_min(), k * grid.s_max(), strictness)
    }

    pub fn grid(&self) -> &SGrid {
        self.inner.grid()
    }

    pub fn values(&self) -> &[f64] {
        self.inner.values()
    }

    pub fn slope_lo(&self) -> f64 {
        self.inner.slope_lo()
    }

    pub fn slope_hi(&self) -> f64 {
        self.inner.slope_hi()
    }

    pub fn strictness(&self) -> f64 {
        self.strictness
    }

    pub fn eval(&self, s: f64) -> f64 {
        self.inner.eval(s)
    }

    pub fn to_pl(&self) -> PlFunction {
        self.inner.to_pl()
    }

    /// True when `w` is a single affine function (a pure cone twist), the case
    /// where translations act on solutions.
    pub fn is_affine(&self) -> bool {
        if self.slope_lo() != self.slope_hi() {
            return false;
        }
        let h = self.grid().spacing();
        let tol = crate::convex_core::convexity_tolerance(self.values());
        second_differences(self.values(), h)
            .iter()
            .all(|d| d.abs() <= tol)
    }
}

/// Parsed form of the twist specifications `none`, `cone:<b0>[,<binf>]` and
/// `smooth:<k>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TwistSpec {
    None,
    Cone { beta0: f64, beta_inf: f64 },
    Smooth { k: f64 },
}

impl TwistSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "none" {
            return Ok(TwistSpec::None);
        }
        let num = |s: &str| -> Result<f64> {
            s.trim()
                .parse::<f64>()
                .map_err(|e| LabError::Parse(format!("bad twist parameter {s:?}: {e}")))
        };
        if let Some(rest) = text.strip_prefix("cone:") {
            let mut parts = rest.split(',');
            let beta0 = num(parts.next().unwrap_or(""))?;
            let beta_inf = match parts.next() {
                Some(p) => num(p)?,
                None => beta0,
            };
            if parts.next().is_some() {
                return Err(LabError::Parse(format!(
                    "too many cone parameters in {text:?}"
                )));
            }
            for b in [beta0, beta_inf] {
                if !(0.0..1.0).contains(&b) {
                    return Err(LabError::Inadmissible(format!(
                        "cone parameter {b} outside the klt range [0, 1)"
                    )));
                }
            }
            return Ok(TwistSpec::Cone { beta0, beta_inf });
        }
        if let Some(rest) = text.strip_prefix("smooth:") {
            return Ok(TwistSpec::Smooth { k: num(rest)? });
        }
        Err(LabError::Parse(format!("unknown twist spec {text:?}")))
    }

    /// Twist weight on `grid` together with the tail slopes of `u` that make
    /// `u + w` a metric on the anticanonical bundle (slopes `(0, 2)` overall).
    pub fn build(&self, grid: SGrid) -> Result<(Option<TwistWeight>, f64, f64)> {
        match *self {
            TwistSpec::None => Ok((None, 0.0, 2.0)),
            TwistSpec::Cone { beta0, beta_inf } => {
                let w = TwistWeight::cone(grid, beta0)?;
                Ok((Some(w), 0.0, 2.0 - beta0 - beta_inf))
            }
            TwistSpec::Smooth { k } => {
                let w = TwistWeight::smooth(grid, k)?;
                let (lo, hi) = (-w.slope_lo(), 2.0 - w.slope_hi());
                if !(lo < hi) {
                    return Err(LabError::Inadmissible(format!(
                        "smooth twist k={k} leaves no slope range for u on this window"
                    )));
                }
                Ok((Some(w), lo, hi))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_specs() {
        assert_eq!(TwistSpec::parse("none").unwrap(), TwistSpec::None);
        assert_eq!(
            TwistSpec::parse("cone:0.5").unwrap(),
            TwistSpec::Cone {
                beta0: 0.5,
                beta_inf: 0.5
            }
        );
        assert_eq!(
            TwistSpec::parse("cone:0.25,0.5").unwrap(),
            TwistSpec::Cone {
                beta0: 0.25,
                beta_inf: 0.5
            }
        );
        assert_eq!(
            TwistSpec::parse("smooth:0.05").unwrap(),
            TwistSpec::Smooth { k: 0.05 }
        );
        assert!(TwistSpec::parse("cone:1.2").is_err());
        assert!(TwistSpec::parse("wedge:1").is_err());
    }

    #[test]
    fn smooth_twist_strictness() {
        let g = SGrid::new(-12.0, 12.0, 2049).unwrap();
        let w = TwistWeight::smooth(g, 0.05).unwrap();
        assert!((w.strictness() - 0.05).abs() < 1e-6);
        assert!(!w.is_affine());
        assert!(TwistWeight::cone(g, 0.5).unwrap().is_affine());
    }

    #[test]
    fn rejects_overclaimed_strictness() {
        let g = SGrid::new(-1.0, 1.0, 21).unwrap();
        let vals = g.points().iter().map(|s| s * s).collect();
        assert!(TwistWeight::new(g, vals, -2.0, 2.0, 3.0).is_err());
    }
}
