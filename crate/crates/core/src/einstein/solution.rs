use std::fmt::Write as _;

use serde::Serialize;

use super::twist::TwistWeight;
use crate::convex_core::{density, mass, Potential};
use crate::error::{LabError, Result};

/// How the additive constant of a solution was fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Gauge {
    /// `u(s) - slope_lo s -> 0` as `s -> -inf`.
    LowerAsymptote,
    /// `u(0) = 0`.
    ValueAtZero,
    /// Translate of a base solution shifted so that it keeps the base constant `a`.
    FlowMatched,
    /// Constant left as supplied.
    Unspecified,
}

impl Gauge {
    pub fn as_str(&self) -> &'static str {
        match self {
            Gauge::LowerAsymptote => "lower-asymptote",
            Gauge::ValueAtZero => "value-at-zero",
            Gauge::FlowMatched => "flow-matched",
            Gauge::Unspecified => "unspecified",
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        match text {
            "lower-asymptote" => Ok(Gauge::LowerAsymptote),
            "value-at-zero" => Ok(Gauge::ValueAtZero),
            "flow-matched" => Ok(Gauge::FlowMatched),
            "unspecified" => Ok(Gauge::Unspecified),
            _ => Err(LabError::Parse(format!("unknown gauge {text:?}"))),
        }
    }
}

/// Solution of `u'' = a e^{s - u - w}` with its constant and certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct KESolution {
    pub u: Potential,
    pub w: Option<TwistWeight>,
    pub a: f64,
    /// `max_k |D^2 u_k - a e^{s_k - u_k - w_k}|` over interior nodes.
    pub residual_sup: f64,
    pub gauge: Gauge,
    /// Residual of the upper boundary row when it was not imposed directly.
    pub boundary_defect: f64,
    pub iterations: usize,
    /// Newton residual norm before each iteration.
    pub residual_history: Vec<f64>,
    /// Constant added to the translated base when built by `ke_family`.
    pub applied_constant: Option<f64>,
}

/// Interior residual of the model equation for given `u`, `w` and `a`.
pub fn ke_residual(u: &Potential, w: Option<&TwistWeight>, a: f64) -> Result<f64> {
    let f = density(u, w)?;
    let v = u.values();
    let h = u.grid().spacing();
    Ok((1..v.len() - 1)
        .map(|k| ((v[k + 1] - 2.0 * v[k] + v[k - 1]) / (h * h) - a * f[k]).abs())
        .fold(0.0, f64::max))
}

impl KESolution {
    /// Wraps an externally supplied potential: `a` from the mass identity and
    /// the residual evaluated directly.
    pub fn certify(u: Potential, w: Option<TwistWeight>, gauge: Gauge) -> Result<Self> {
        let a = u.slope_span() / mass(&u, w.as_ref())?;
        let residual_sup = ke_residual(&u, w.as_ref(), a)?;
        Ok(Self {
            u,
            w,
            a,
            residual_sup,
            gauge,
            boundary_defect: 0.0,
            iterations: 0,
            residual_history: Vec::new(),
            applied_constant: None,
        })
    }

    /// `a mass(u, w) - span`, relative to the span.
    pub fn mass_identity_defect(&self) -> Result<f64> {
        let span = self.u.slope_span();
        Ok((self.a * mass(&self.u, self.w.as_ref())? - span) / span)
    }

    /// Adds `c` to `u`, rescaling `a` by `e^c` so the equation still holds.
    pub fn shifted(&self, c: f64, gauge: Gauge) -> KESolution {
        let mut out = self.clone();
        out.u = self.u.shifted(c);
        out.a = self.a * c.exp();
        out.gauge = gauge;
        out
    }

    pub fn regauged(&self, gauge: Gauge) -> KESolution {
        match gauge {
            Gauge::LowerAsymptote => {
                let c = lower_asymptote_constant(&self.u, self.w.as_ref(), self.a);
                self.shifted(-c, gauge)
            }
            Gauge::ValueAtZero => self.shifted(-self.u.eval(0.0), gauge),
            Gauge::FlowMatched | Gauge::Unspecified => {
                let mut out = self.clone();
                out.gauge = gauge;
                out
            }
        }
    }

    /// Potential format followed by the trailer
    /// `ke a=<a> residual=<residual_sup> gauge=<gauge>`.
    pub fn to_text(&self) -> String {
        let mut out = self.u.to_text();
        writeln!(
            out,
            "ke a={:.17e} residual={:.17e} gauge={}",
            self.a,
            self.residual_sup,
            self.gauge.as_str()
        )
        .unwrap();
        out
    }

    /// Parses [`to_text`](Self::to_text) output. The residual is recomputed
    /// from the samples rather than trusted.
    pub fn from_text(text: &str, w: Option<TwistWeight>) -> Result<Self> {
        let (u, trailer) = Potential::from_text_with_trailer(text)?;
        let line = trailer
            .first()
            .ok_or_else(|| LabError::Parse("missing `ke` trailer line".into()))?;
        let mut fields = line.split_whitespace();
        if fields.next() != Some("ke") {
            return Err(LabError::Parse(format!("bad trailer {line:?}")));
        }
        let (mut a, mut gauge) = (None, None);
        for f in fields {
            let (k, v) = f
                .split_once('=')
                .ok_or_else(|| LabError::Parse(format!("bad trailer field {f:?}")))?;
            match k {
                "a" => {
                    a = Some(
                        v.parse::<f64>()
                            .map_err(|e| LabError::Parse(format!("bad constant {v:?}: {e}")))?,
                    )
                }
                "gauge" => gauge = Some(Gauge::parse(v)?),
                "residual" => {}
                _ => return Err(LabError::Parse(format!("unknown trailer key {k:?}"))),
            }
        }
        let a = a.ok_or_else(|| LabError::Parse("trailer lacks a=".into()))?;
        if !(a > 0.0) {
            return Err(LabError::Parse(format!(
                "constant a must be positive, got {a}"
            )));
        }
        let residual_sup = ke_residual(&u, w.as_ref(), a)?;
        Ok(Self {
            u,
            w,
            a,
            residual_sup,
            gauge: gauge.unwrap_or(Gauge::Unspecified),
            boundary_defect: 0.0,
            iterations: 0,
            residual_history: Vec::new(),
            applied_constant: None,
        })
    }
}

/// Constant `C` in `u(s) = slope_lo s + C + O(e^{c s})` as `s -> -inf`,
/// read off at the first node with the leading exponential correction
/// `a f_0 / c^2` removed.
pub(crate) fn lower_asymptote_constant(u: &Potential, w: Option<&TwistWeight>, a: f64) -> f64 {
    let s0 = u.grid().s_min();
    let w0 = w.map_or(0.0, |w| w.values()[0]);
    let c = 1.0 - u.slope_lo() - w.map_or(0.0, |w| w.slope_lo());
    let f0 = (s0 - u.values()[0] - w0).exp();
    u.values()[0] - u.slope_lo() * s0 - a * f0 / (c * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_core::SGrid;
    use crate::models::fubini_study;

    #[test]
    fn certify_closed_form() {
        let g = SGrid::new(-20.0, 20.0, 4097).unwrap();
        let sol =
            KESolution::certify(fubini_study(g).unwrap(), None, Gauge::LowerAsymptote).unwrap();
        assert!((sol.a - 2.0).abs() < 1e-7);
        assert!(sol.residual_sup < 1e-4);
        assert!(sol.mass_identity_defect().unwrap().abs() < 1e-14);
    }

    #[test]
    fn regauge_keeps_equation() {
        let g = SGrid::new(-20.0, 20.0, 2049).unwrap();
        let sol =
            KESolution::certify(fubini_study(g).unwrap(), None, Gauge::LowerAsymptote).unwrap();
        let z = sol.regauged(Gauge::ValueAtZero);
        assert!(z.u.eval(0.0).abs() < 1e-14);
        assert!((z.a - sol.a * (-2f64.ln() * 2.0).exp()).abs() < 1e-12);
        let r = ke_residual(&z.u, None, z.a).unwrap();
        assert!((r - sol.residual_sup).abs() < 1e-12);
        let back = z.regauged(Gauge::LowerAsymptote);
        assert!((back.a - sol.a).abs() < 1e-9);
    }

    #[test]
    fn text_round_trip() {
        let g = SGrid::new(-10.0, 10.0, 101).unwrap();
        let sol = KESolution::certify(fubini_study(g).unwrap(), None, Gauge::ValueAtZero).unwrap();
        let back = KESolution::from_text(&sol.to_text(), None).unwrap();
        assert_eq!(back.u, sol.u);
        assert_eq!(back.a, sol.a);
        assert_eq!(back.gauge, Gauge::ValueAtZero);
        assert!(sol.to_text().lines().last().unwrap().starts_with("ke a="));
    }
}
