//! Uniqueness pipeline: connect two solutions by the hull geodesic, check that
//! `F` is affine along it, and identify the translation flow that carries the
//! curvature of one endpoint to the other.

use serde::Serialize;

use super::solution::KESolution;
use crate::convex_core::{second_differences, ConvexityKind, ConvexityVerdict};
use crate::error::{LabError, Result};
use crate::functionals::{f_trace, FunctionalTrace};
use crate::geodesic::{solve_geodesic_hull, GeodesicSheet};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BandoOptions {
    pub n_t: usize,
    /// Verdict tolerance for the F-trace.
    pub affine_tol: f64,
    /// Largest accepted conjugation residual.
    pub conjugation_tol: f64,
    /// Half-width of the golden-section bracket around the initial guess.
    pub bracket: f64,
}

impl Default for BandoOptions {
    fn default() -> Self {
        Self {
            n_t: 65,
            affine_tol: 1e-3,
            conjugation_tol: 1e-2,
            bracket: 0.25,
        }
    }
}

/// Recovered flow `s -> s + h` with its certificates.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlowEstimate {
    pub h: f64,
    /// `max_t sup |D^2 U(t, .) - u0''(. - t h)|` on the overlap window.
    pub conjugation_residual: f64,
    pub f_affine_verdict: ConvexityVerdict,
    /// Slope of the F-trace (least squares).
    pub f_slope: f64,
    #[serde(skip)]
    pub f_trace: FunctionalTrace,
}

/// Runs the pipeline with [`BandoOptions::default`].
pub fn bando_mabuchi_verify(sol0: &KESolution, sol1: &KESolution) -> Result<FlowEstimate> {
    bando_mabuchi_verify_with(sol0, sol1, &BandoOptions::default())
}

pub fn bando_mabuchi_verify_with(
    sol0: &KESolution,
    sol1: &KESolution,
    opts: &BandoOptions,
) -> Result<FlowEstimate> {
    sol0.u.same_frame(&sol1.u)?;
    if sol0.w != sol1.w {
        return Err(LabError::Mismatch(
            "the two solutions carry different twists".into(),
        ));
    }
    let sheet = solve_geodesic_hull(&sol0.u, &sol1.u, opts.n_t)?;
    let trace = f_trace(&sheet, sol0.w.as_ref())?;
    let verdict = trace.verdict(opts.affine_tol)?;
    if verdict.is_nonconvex() {
        return Err(LabError::FTraceNonConvex {
            worst: verdict.worst_second_difference,
            index: verdict.witness_index,
        });
    }
    if verdict.kind != ConvexityKind::Affine {
        return Err(LabError::Certification(format!(
            "F is not affine along the geodesic (largest second difference beyond {:.1e}); \
             the endpoints are not both solutions",
            opts.affine_tol
        )));
    }
    let f_slope = verdict.slope.unwrap_or(0.0);

    let profile = CurvatureProfile::new(&sheet);
    let h0 = profile.centroid_shift();
    let h = golden_section(
        |h| profile.l2_mismatch(h),
        h0 - opts.bracket,
        h0 + opts.bracket,
        1e-12,
    );
    let conjugation_residual = profile.sup_mismatch(h);
    if conjugation_residual > opts.conjugation_tol {
        return Err(LabError::Certification(format!(
            "curvature is not transported by a translation: residual {conjugation_residual:.3e} \
             exceeds {:.1e}",
            opts.conjugation_tol
        )));
    }
    Ok(FlowEstimate {
        h,
        conjugation_residual,
        f_affine_verdict: verdict,
        f_slope,
        f_trace: trace,
    })
}

/// Discrete curvatures `D^2 U(t_i, .)` of every sheet row.
struct CurvatureProfile {
    s: Vec<f64>,
    t: Vec<f64>,
    rows: Vec<Vec<f64>>,
    spacing: f64,
    margin: f64,
}

impl CurvatureProfile {
    fn new(sheet: &GeodesicSheet) -> Self {
        let g = sheet.s_grid();
        let h = g.spacing();
        let s = g.points()[1..g.len() - 1].to_vec();
        let rows = (0..sheet.n_t())
            .map(|i| second_differences(sheet.row(i), h))
            .collect();
        Self {
            s,
            t: sheet.t_grid().points(),
            rows,
            spacing: h,
            margin: 0.25 * (g.s_max() - g.s_min()),
        }
    }

    /// `u0''` read off row 0, linearly interpolated and zero outside.
    fn c0(&self, x: f64) -> f64 {
        let r = &self.rows[0];
        let p = (x - self.s[0]) / self.spacing;
        if p < 0.0 || p > (r.len() - 1) as f64 {
            return 0.0;
        }
        let k = (p.floor() as usize).min(r.len() - 2);
        let th = p - k as f64;
        r[k] + th * (r[k + 1] - r[k])
    }

    fn centroid(c: &[f64], s: &[f64]) -> f64 {
        let m: f64 = c.iter().sum();
        c.iter().zip(s).map(|(c, s)| c * s).sum::<f64>() / m
    }

    fn centroid_shift(&self) -> f64 {
        let last = self.rows.len() - 1;
        Self::centroid(&self.rows[last], &self.s) - Self::centroid(&self.rows[0], &self.s)
    }

    /// Nodes kept for every candidate shift: a fixed window away from the edges.
    fn window(&self) -> impl Iterator<Item = usize> + '_ {
        let (lo, hi) = (
            self.s[0] + self.margin,
            self.s[self.s.len() - 1] - self.margin,
        );
        (0..self.s.len()).filter(move |&k| self.s[k] >= lo && self.s[k] <= hi)
    }

    fn mismatch(&self, h: f64) -> impl Iterator<Item = f64> + '_ {
        self.rows.iter().zip(&self.t).flat_map(move |(row, &t)| {
            self.window()
                .map(move |k| row[k] - self.c0(self.s[k] - t * h))
        })
    }

    fn l2_mismatch(&self, h: f64) -> f64 {
        self.mismatch(h).map(|d| d * d).sum()
    }

    fn sup_mismatch(&self, h: f64) -> f64 {
        self.mismatch(h).fold(0.0, |m, d| m.max(d.abs()))
    }
}

fn golden_section(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}
