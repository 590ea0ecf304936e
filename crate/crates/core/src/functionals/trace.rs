use std::fmt::Write as _;

use serde::Serialize;

use crate::convex_core::{
    check_integrability, convexity_verdict, mass_pl, ConvexityVerdict, Potential,
};
use crate::einstein::TwistWeight;
use crate::error::{LabError, Result};
use crate::geodesic::GeodesicSheet;

use super::energy::energy_pl;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FunctionalLabel {
    F,
    E,
    G,
}

impl FunctionalLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            FunctionalLabel::F => "F",
            FunctionalLabel::E => "E",
            FunctionalLabel::G => "G",
        }
    }
}

/// Values of one functional along uniformly spaced `t` samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FunctionalTrace {
    pub t_samples: Vec<f64>,
    pub values: Vec<f64>,
    pub label: FunctionalLabel,
}

impl FunctionalTrace {
    pub fn new(t_samples: Vec<f64>, values: Vec<f64>, label: FunctionalLabel) -> Result<Self> {
        if t_samples.len() != values.len() || t_samples.len() < 2 {
            return Err(LabError::Mismatch(format!(
                "trace needs >= 2 matching samples, got {} t and {} values",
                t_samples.len(),
                values.len()
            )));
        }
        let h = t_samples[1] - t_samples[0];
        for (k, w) in t_samples.windows(2).enumerate() {
            let d = w[1] - w[0];
            if !(d > 0.0) || (d - h).abs() > 1e-9 * h.abs().max(1.0) {
                return Err(LabError::Invariant {
                    what: "uniform increasing t samples",
                    index: k + 1,
                    value: d,
                    tol: 1e-9,
                });
            }
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(LabError::Invariant {
                what: "finite trace values",
                index: k,
                value: values[k],
                tol: 0.0,
            });
        }
        Ok(Self {
            t_samples,
            values,
            label,
        })
    }

    pub fn spacing(&self) -> f64 {
        (self.t_samples[self.t_samples.len() - 1] - self.t_samples[0])
            / (self.t_samples.len() - 1) as f64
    }

    pub fn verdict(&self, tol: f64) -> Result<ConvexityVerdict> {
        convexity_verdict(&self.values, self.spacing(), tol)
    }
}

/// CSV with header `t,value,label`, one row per sample of every trace.
pub fn traces_to_csv(traces: &[&FunctionalTrace]) -> String {
    let mut out = String::from("t,value,label\n");
    for tr in traces {
        for (t, v) in tr.t_samples.iter().zip(&tr.values) {
            writeln!(out, "{t:.14e},{v:.14e},{}", tr.label.as_str()).unwrap();
        }
    }
    out
}

/// A potential `u` on `-(K + S)` paired with the twist `w` on `S`.
#[derive(Debug, Clone, PartialEq)]
pub struct TwistedConfiguration {
    pub u: Potential,
    pub w: Option<TwistWeight>,
}

impl TwistedConfiguration {
    pub fn new(u: Potential, w: Option<TwistWeight>) -> Result<Self> {
        if let Some(w) = &w {
            if w.grid() != u.grid() {
                return Err(LabError::Mismatch(
                    "twist and potential grids differ".into(),
                ));
            }
        }
        check_integrability(u.slope_lo(), u.slope_hi(), w.as_ref())?;
        Ok(Self { u, w })
    }
}

fn t_samples(sheet: &GeodesicSheet) -> Vec<f64> {
    sheet.t_grid().points()
}

/// `F(t) = -log ∫ e^{s - U(t,s) - w(s)} ds`, integrating each slice exactly.
pub fn f_trace(sheet: &GeodesicSheet, w: Option<&TwistWeight>) -> Result<FunctionalTrace> {
    let values = (0..sheet.n_t())
        .map(|i| mass_pl(&sheet.slice(i), w).map(|m| -m.ln()))
        .collect::<Result<Vec<f64>>>()?;
    FunctionalTrace::new(t_samples(sheet), values, FunctionalLabel::F)
}

/// `E(U(t, .), reference)` along the sheet.
pub fn e_trace_along(sheet: &GeodesicSheet, reference: &Potential) -> Result<FunctionalTrace> {
    let r = reference.to_pl();
    let values = (0..sheet.n_t())
        .map(|i| energy_pl(&sheet.slice(i), &r))
        .collect::<Result<Vec<f64>>>()?;
    FunctionalTrace::new(t_samples(sheet), values, FunctionalLabel::E)
}

pub fn g_trace(
    sheet: &GeodesicSheet,
    reference: &Potential,
    w: Option<&TwistWeight>,
) -> Result<FunctionalTrace> {
    let f = f_trace(sheet, w)?;
    let e = e_trace_along(sheet, reference)?;
    let values = f.values.iter().zip(&e.values).map(|(a, b)| a - b).collect();
    FunctionalTrace::new(f.t_samples, values, FunctionalLabel::G)
}
