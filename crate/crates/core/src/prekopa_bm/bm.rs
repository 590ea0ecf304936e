use serde::Serialize;

use super::body::ConvexBodyFamily;
use super::geometry::{direction_set, support};
use crate::convex_core::{convexity_verdict, ConvexityKind, ConvexityVerdict};
use crate::error::{LabError, Result};

/// `-log |K_t|` for every sample; a zero-volume slice is an error.
pub fn neg_log_volumes(family: &ConvexBodyFamily) -> Result<Vec<f64>> {
    family
        .volumes()?
        .into_iter()
        .zip(family.t_samples())
        .map(|(v, t)| {
            if v > 0.0 {
                Ok(-v.ln())
            } else {
                Err(LabError::Inadmissible(format!(
                    "slice at t = {t} has zero volume, so -log volume is infinite (boundary case)"
                )))
            }
        })
        .collect()
}

/// Verdict on `t -> -log |K_t|`; convexity is log-concavity of the volumes.
pub fn bm_check(family: &ConvexBodyFamily, tol: f64) -> Result<ConvexityVerdict> {
    if family.len() < 3 {
        return Err(LabError::InvalidGrid(format!(
            "need at least 3 slices, got {}",
            family.len()
        )));
    }
    convexity_verdict(&neg_log_volumes(family)?, family.spacing(), tol)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MidpointReport {
    /// Smallest `log|K_m|^2 - log|K_i| - log|K_j|` over pairs with midpoint sample `m`.
    pub worst_defect: f64,
    pub worst_pair: (usize, usize),
    pub pairs_checked: usize,
}

/// Checks `|K_{(t+s)/2}|^2 >= |K_t| |K_s|` for every pair of samples whose
/// midpoint is itself a sample.
pub fn midpoint_check(family: &ConvexBodyFamily) -> Result<MidpointReport> {
    let f = neg_log_volumes(family)?;
    let n = f.len();
    let mut report = MidpointReport {
        worst_defect: f64::INFINITY,
        worst_pair: (0, 0),
        pairs_checked: 0,
    };
    for i in 0..n {
        for j in (i + 2..n).step_by(2) {
            let m = (i + j) / 2;
            let defect = f[i] + f[j] - 2.0 * f[m];
            report.pairs_checked += 1;
            if defect < report.worst_defect {
                report.worst_defect = defect;
                report.worst_pair = (i, j);
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TranslationFit {
    /// Fitted velocity `v` in `K_t = K_{t_0} + (t - t_0) v`.
    pub v: Vec<f64>,
    /// Largest sampled Hausdorff distance between `K_t` and `K_{t_0} + (t - t_0) v`.
    pub residual: f64,
    pub verdict: ConvexityVerdict,
}

fn vertex_mean(body: &[Vec<f64>], dimension: usize) -> Vec<f64> {
    let mut c = vec![0.0; dimension];
    for v in body {
        for d in 0..dimension {
            c[d] += v[d] / body.len() as f64;
        }
    }
    c
}

/// Support-function distance `max_u |h_K(u) - h_L(u) - <shift, u>|` over the
/// fixed direction set of the dimension; a lower bound for the Hausdorff
/// distance between `K` and `L + shift`, exact in one dimension.
pub fn sampled_hausdorff(k: &[Vec<f64>], l: &[Vec<f64>], shift: &[f64]) -> f64 {
    direction_set(shift.len())
        .iter()
        .map(|u| {
            let s: f64 = shift.iter().zip(u).map(|(a, b)| a * b).sum();
            (support(k, u) - support(l, u) - s).abs()
        })
        .fold(0.0, f64::max)
}

/// Least-squares velocity of the vertex means, and how far the family is
/// from the translates of its first body. Requires an `Affine` verdict.
pub fn translation_detect(family: &ConvexBodyFamily, tol: f64) -> Result<TranslationFit> {
    let verdict = bm_check(family, tol)?;
    if verdict.kind != ConvexityKind::Affine {
        return Err(LabError::Inadmissible(format!(
            "translation detection needs an Affine volume verdict, got {}",
            verdict.kind.as_str()
        )));
    }
    let dim = family.dimension();
    let t = family.t_samples();
    let centers: Vec<Vec<f64>> = family
        .bodies()
        .iter()
        .map(|b| vertex_mean(b, dim))
        .collect();
    let t_mean = t.iter().sum::<f64>() / t.len() as f64;
    let stt: f64 = t.iter().map(|x| (x - t_mean).powi(2)).sum();
    let v: Vec<f64> = (0..dim)
        .map(|d| {
            let c_mean = centers.iter().map(|c| c[d]).sum::<f64>() / t.len() as f64;
            t.iter()
                .zip(&centers)
                .map(|(x, c)| (x - t_mean) * (c[d] - c_mean))
                .sum::<f64>()
                / stt
        })
        .collect();
    let base = &family.bodies()[0];
    let residual = family
        .bodies()
        .iter()
        .zip(t)
        .map(|(body, &ti)| {
            let shift: Vec<f64> = v.iter().map(|vd| vd * (ti - t[0])).collect();
            sampled_hausdorff(body, base, &shift)
        })
        .fold(0.0, f64::max);
    Ok(TranslationFit {
        v,
        residual,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square(x: f64, y: f64, side: f64) -> Vec<Vec<f64>> {
        vec![
            vec![x, y],
            vec![x + side, y],
            vec![x + side, y + side],
            vec![x, y + side],
        ]
    }

    fn family(bodies: Vec<Vec<Vec<f64>>>) -> ConvexBodyFamily {
        let n = bodies.len();
        let t = (0..n).map(|i| i as f64 / (n - 1) as f64).collect();
        ConvexBodyFamily::new(2, t, bodies).unwrap()
    }

    #[test]
    fn translates_are_affine_and_detected() {
        let fam = family(
            (0..5)
                .map(|i| square(0.25 * i as f64, 0.5 * i as f64, 1.0))
                .collect(),
        );
        let fit = translation_detect(&fam, 1e-10).unwrap();
        assert!((fit.v[0] - 1.0).abs() < 1e-12 && (fit.v[1] - 2.0).abs() < 1e-12);
        assert!(fit.residual <= 1e-12);
        assert_eq!(fit.verdict.slope, Some(0.0));
    }

    #[test]
    fn shrinking_square_is_strictly_convex() {
        let fam = family(
            (0..10)
                .map(|i| square(0.0, 0.0, 1.0 - 0.1 * i as f64))
                .collect(),
        );
        let v = bm_check(&fam, 1e-8).unwrap();
        assert_eq!(v.kind, ConvexityKind::StrictlyConvex);
        assert!(midpoint_check(&fam).unwrap().worst_defect >= 0.0);
    }

    #[test]
    fn non_log_concave_volumes_are_flagged() {
        let fam = family(vec![
            square(0.0, 0.0, 1.0),
            square(0.0, 0.0, 0.5f64.sqrt()),
            square(0.0, 0.0, 1.0),
        ]);
        assert!(bm_check(&fam, 1e-8).unwrap().is_nonconvex());
        assert!(midpoint_check(&fam).unwrap().worst_defect < 0.0);
        assert!(translation_detect(&fam, 1e-8).is_err());
    }

    #[test]
    fn zero_volume_slice_is_reported() {
        let fam = family(vec![
            square(0.0, 0.0, 1.0),
            vec![vec![0.0, 0.0]],
            square(0.0, 0.0, 1.0),
        ]);
        assert!(bm_check(&fam, 1e-8).is_err());
    }
}
