//! Closed-form and randomized model potentials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex_core::{Potential, SGrid};
use crate::error::Result;

/// Numerically stable `log(1 + e^x)`.
pub fn softplus(x: f64) -> f64 {
    x.max(0.0) + (-x.abs()).exp().ln_1p()
}

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// Fubini–Study potential `2 log(1 + e^s)`, slopes `(0, 2)`.
pub fn fubini_study(grid: SGrid) -> Result<Potential> {
    fs_shift(grid, 0.0)
}

/// `s -> 2 log(1 + e^{s - h})`.
pub fn fs_shift(grid: SGrid, h: f64) -> Result<Potential> {
    Potential::from_fn(grid, |s| 2.0 * softplus(s - h), 0.0, 2.0)
}

/// Closed-form solution for a symmetric cone twist `w = beta s`:
/// `2 log(1 + e^{(1 - beta) s})`, slopes `(0, 2 - 2 beta)`, constant `2 (1 - beta)^2`.
pub fn cone_solution(grid: SGrid, beta: f64) -> Result<Potential> {
    let k = 1.0 - beta;
    Potential::from_fn(grid, |s| 2.0 * softplus(k * s), 0.0, 2.0 * k)
}

/// Exact second derivative of [`fs_shift`].
pub fn fs_curvature(s: f64, h: f64) -> f64 {
    let g = sigmoid(s - h);
    2.0 * g * (1.0 - g)
}

/// Seeded convex potential with the given tail slopes: an affine term plus a
/// positive mixture of softplus ramps whose weights add up to the slope span.
/// Ramps sit in `[-2.5, 2.5]`, so windows of half-width 12 or more see the
/// asymptotic slopes at the ends.
pub fn random_convex(grid: SGrid, slope_lo: f64, slope_hi: f64, seed: u64) -> Result<Potential> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_terms = rng.random_range(1..=4usize);
    let raw: Vec<f64> = (0..n_terms).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let span = slope_hi - slope_lo;
    let terms: Vec<(f64, f64, f64)> = raw
        .iter()
        .map(|r| {
            let weight = span * r / total;
            let center = rng.random_range(-2.5..2.5);
            let width = rng.random_range(0.4..1.5);
            (weight, center, width)
        })
        .collect();
    let offset = rng.random_range(-1.0..1.0);
    Potential::from_fn(
        grid,
        |s| {
            offset
                + slope_lo * s
                + terms
                    .iter()
                    .map(|(wt, c, sig)| wt * sig * softplus((s - c) / sig))
                    .sum::<f64>()
        },
        slope_lo,
        slope_hi,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn softplus_is_stable() {
        assert_eq!(softplus(-800.0), 0.0);
        assert_eq!(softplus(800.0), 800.0);
        assert!((softplus(0.0) - 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn random_potentials_are_valid_and_seeded() {
        let g = SGrid::new(-14.0, 14.0, 1025).unwrap();
        for seed in 0..50 {
            let a = random_convex(g, 0.0, 2.0, seed).unwrap();
            let b = random_convex(g, 0.0, 2.0, seed).unwrap();
            assert_eq!(a, b);
        }
    }
}
