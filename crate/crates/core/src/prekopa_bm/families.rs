//! Reference families with known behaviour.

use super::body::ConvexBodyFamily;
use super::weights::{BoxGrid, WeightFamily};
use crate::error::Result;

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

fn unit_square() -> Vec<[f64; 2]> {
    vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
}

/// `K_t = [0, 1 - t]^2` for `t` in `[0, 0.9]`; `-log|K_t| = -2 log(1 - t)`.
pub fn shrinking_square(n_t: usize) -> Result<ConvexBodyFamily> {
    let t = uniform(0.0, 0.9, n_t);
    let bodies = t
        .iter()
        .map(|&t| {
            unit_square()
                .iter()
                .map(|p| vec![p[0] * (1.0 - t), p[1] * (1.0 - t)])
                .collect()
        })
        .collect();
    ConvexBodyFamily::new(2, t, bodies)
}

/// Slices of a sheared prism: `K_t = [0, 1]^3 + t v`, `t` in `[0, 1]`.
pub fn sheared_cube(n_t: usize, v: [f64; 3]) -> Result<ConvexBodyFamily> {
    let t = uniform(0.0, 1.0, n_t);
    let bodies = t
        .iter()
        .map(|&t| {
            (0..8)
                .map(|i| {
                    let c = [(i & 1) as f64, ((i >> 1) & 1) as f64, ((i >> 2) & 1) as f64];
                    (0..3).map(|d| c[d] + t * v[d]).collect()
                })
                .collect()
        })
        .collect();
    ConvexBodyFamily::new(3, t, bodies)
}

/// Unit square centred at the origin, rotated by `t * angle`, `t` in `[0, 1]`.
pub fn rotating_square(n_t: usize, angle: f64) -> Result<ConvexBodyFamily> {
    let t = uniform(0.0, 1.0, n_t);
    let bodies = t
        .iter()
        .map(|&t| {
            let (s, c) = (t * angle).sin_cos();
            unit_square()
                .iter()
                .map(|p| {
                    let (x, y) = (p[0] - 0.5, p[1] - 0.5);
                    vec![c * x - s * y, s * x + c * y]
                })
                .collect()
        })
        .collect();
    ConvexBodyFamily::new(2, t, bodies)
}

/// Squares with areas `1, 1/2, 1`: volumes that no convex body can have as
/// parallel slices.
pub fn dented_squares() -> Result<ConvexBodyFamily> {
    let bodies = [1.0, 0.5f64.sqrt(), 1.0]
        .iter()
        .map(|&side| {
            unit_square()
                .iter()
                .map(|p| vec![side * p[0], side * p[1]])
                .collect()
        })
        .collect();
    ConvexBodyFamily::new(2, vec![0.0, 0.5, 1.0], bodies)
}

/// `phi(t, x) = (x - t)^2` on `[-10, 10]`, `t` in `[-1, 1]`.
pub fn translated_gaussian(n_t: usize) -> Result<WeightFamily> {
    let g = BoxGrid::new(vec![-10.0], vec![10.0], vec![401])?;
    WeightFamily::from_fn(g, uniform(-1.0, 1.0, n_t), |t, x| (x[0] - t).powi(2))
}

/// `phi(t, x) = |x|^2 + t^2` on `[-8, 8]^2`, `t` in `[-1, 1]`.
pub fn separable_quadratic(n_t: usize) -> Result<WeightFamily> {
    let g = BoxGrid::new(vec![-8.0, -8.0], vec![8.0, 8.0], vec![81, 81])?;
    WeightFamily::from_fn(g, uniform(-1.0, 1.0, n_t), |t, x| {
        x[0] * x[0] + x[1] * x[1] + t * t
    })
}

/// `phi(t, x) = (1 + t^2) x^2` on `[-8, 8]`, `t` in `[-2, 2]`: not jointly convex.
pub fn stretched_gaussian(n_t: usize) -> Result<WeightFamily> {
    let g = BoxGrid::new(vec![-8.0], vec![8.0], vec![321])?;
    WeightFamily::from_fn(g, uniform(-2.0, 2.0, n_t), |t, x| {
        (1.0 + t * t) * x[0] * x[0]
    })
}
