use serde::Serialize;

use super::potential::second_differences;
use crate::error::{LabError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConvexityKind {
    StrictlyConvex,
    Affine,
    Convex,
    NonConvex,
}

impl ConvexityKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            ConvexityKind::StrictlyConvex => "StrictlyConvex",
            ConvexityKind::Affine => "Affine",
            ConvexityKind::Convex => "Convex",
            ConvexityKind::NonConvex => "NonConvex",
        }
    }
}

/// Classification of a uniformly sampled curve by its normalized second
/// differences `(f[k+1] - 2 f[k] + f[k-1]) / spacing^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityVerdict {
    pub kind: ConvexityKind,
    /// Least-squares slope, present only for `Affine`.
    pub slope: Option<f64>,
    pub worst_second_difference: f64,
    /// Sample index (interior) where the smallest second difference occurs.
    pub witness_index: usize,
}

impl ConvexityVerdict {
    pub fn is_nonconvex(&self) -> bool {
        self.kind == ConvexityKind::NonConvex
    }
}

pub fn convexity_verdict(
    samples: &[f64],
    spacing: f64,
    tol_verdict: f64,
) -> Result<ConvexityVerdict> {
    if samples.len() < 3 {
        return Err(LabError::InvalidGrid(format!(
            "verdict needs at least 3 samples, got {}",
            samples.len()
        )));
    }
    if !(spacing > 0.0) {
        return Err(LabError::InvalidGrid(format!(
            "spacing must be positive, got {spacing}"
        )));
    }
    let d2 = second_differences(samples, spacing);
    let (mut worst, mut witness) = (f64::INFINITY, 1);
    let mut largest = f64::NEG_INFINITY;
    for (i, &d) in d2.iter().enumerate() {
        if d < worst {
            worst = d;
            witness = i + 1;
        }
        largest = largest.max(d);
    }
    let kind = if worst < -tol_verdict || worst.is_nan() {
        ConvexityKind::NonConvex
    } else if largest <= tol_verdict {
        ConvexityKind::Affine
    } else if worst > tol_verdict {
        ConvexityKind::StrictlyConvex
    } else {
        ConvexityKind::Convex
    };
    let slope = (kind == ConvexityKind::Affine).then(|| least_squares_slope(samples, spacing));
    Ok(ConvexityVerdict {
        kind,
        slope,
        worst_second_difference: worst,
        witness_index: witness,
    })
}

fn least_squares_slope(samples: &[f64], spacing: f64) -> f64 {
    let n = samples.len() as f64;
    let xm = (n - 1.0) / 2.0;
    let ym = samples.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (i, y) in samples.iter().enumerate() {
        let dx = i as f64 - xm;
        sxy += dx * (y - ym);
        sxx += dx * dx;
    }
    sxy / sxx / spacing
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(f: impl Fn(f64) -> f64) -> Vec<f64> {
        (0..21).map(|i| f(i as f64 * 0.1)).collect()
    }

    #[test]
    fn classifies_trivial_curves() {
        let v = convexity_verdict(&sample(|t| t * t), 0.1, 1e-8).unwrap();
        assert_eq!(v.kind, ConvexityKind::StrictlyConvex);

        let v = convexity_verdict(&sample(|t| -3.0 * t + 1.0), 0.1, 1e-8).unwrap();
        assert_eq!(v.kind, ConvexityKind::Affine);
        assert!((v.slope.unwrap() + 3.0).abs() < 1e-12);

        let v = convexity_verdict(&sample(|t| -t * t), 0.1, 1e-8).unwrap();
        assert_eq!(v.kind, ConvexityKind::NonConvex);
        assert!(v.slope.is_none());
        assert!((v.worst_second_difference + 2.0).abs() < 1e-9);
    }

    #[test]
    fn kink_is_convex_not_strict() {
        let v = convexity_verdict(&sample(|t| (t - 1.0).max(0.0)), 0.1, 1e-8).unwrap();
        assert_eq!(v.kind, ConvexityKind::Convex);
    }

    #[test]
    fn witness_points_at_violation() {
        let mut s = sample(|t| t);
        s[7] += 0.5;
        let v = convexity_verdict(&s, 0.1, 1e-8).unwrap();
        assert_eq!(v.kind, ConvexityKind::NonConvex);
        assert_eq!(v.witness_index, 7);
    }

    #[test]
    fn too_few_samples() {
        assert!(convexity_verdict(&[1.0, 2.0], 1.0, 1e-8).is_err());
    }
}
