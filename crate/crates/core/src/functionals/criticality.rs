use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::convex_core::{mass, Potential, SGrid};
use crate::einstein::TwistWeight;
use crate::error::{LabError, Result};

use super::energy::energy;

/// A bounded perturbation direction: grid samples with flat tails.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundedDirection {
    grid: SGrid,
    values: Vec<f64>,
}

impl BoundedDirection {
    pub fn new(grid: SGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() || values.iter().any(|v| !v.is_finite()) {
            return Err(LabError::Mismatch(
                "direction needs one finite value per grid point".into(),
            ));
        }
        Ok(Self { grid, values })
    }

    pub fn constant(grid: SGrid, c: f64) -> Self {
        Self {
            grid,
            values: vec![c; grid.len()],
        }
    }

    /// Sum of one to three Gaussian bumps with amplitudes in `[-1, 1]` and
    /// centers in `[-2, 2]`.
    pub fn random_bumps(grid: SGrid, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.random_range(1..=3usize);
        let bumps: Vec<(f64, f64, f64)> = (0..n)
            .map(|_| {
                (
                    rng.random_range(-1.0..1.0),
                    rng.random_range(-2.0..2.0),
                    rng.random_range(0.5..1.5),
                )
            })
            .collect();
        let values = grid
            .points()
            .into_iter()
            .map(|s| {
                bumps
                    .iter()
                    .map(|(a, c, w)| a * (-((s - c) / w).powi(2)).exp())
                    .sum()
            })
            .collect();
        Self { grid, values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }
}

fn perturbed(u: &Potential, d: &BoundedDirection, eps: f64) -> Result<Potential> {
    let values = u
        .values()
        .iter()
        .zip(&d.values)
        .map(|(a, b)| a + eps * b)
        .collect();
    Potential::new(*u.grid(), values, u.slope_lo(), u.slope_hi()).map_err(|e| {
        LabError::Inadmissible(format!("u {eps:+e} d is not an admissible potential: {e}"))
    })
}

/// Largest normalized centered difference `|G(u + εd) - G(u - εd)| / (2ε ‖d‖)`
/// over the directions, with `G = F - E` and `F` from [`mass`]. The energy
/// part is the difference `E(u + εd, u - εd)`, so no reference potential is
/// needed.
pub fn g_criticality(
    u: &Potential,
    w: Option<&TwistWeight>,
    directions: &[BoundedDirection],
    step: f64,
) -> Result<f64> {
    if !(step > 0.0) {
        return Err(LabError::Inadmissible(format!(
            "step must be positive, got {step}"
        )));
    }
    let mut worst = 0.0f64;
    for d in directions {
        if d.grid != *u.grid() {
            return Err(LabError::Mismatch(
                "direction and potential grids differ".into(),
            ));
        }
        let norm = d.sup_norm();
        if norm == 0.0 {
            continue;
        }
        let up = perturbed(u, d, step)?;
        let um = perturbed(u, d, -step)?;
        let df = -mass(&up, w)?.ln() + mass(&um, w)?.ln();
        let de = energy(&up, &um, 2)?;
        worst = worst.max(((df - de) / (2.0 * step * norm)).abs());
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::fubini_study;

    #[test]
    fn constant_direction_is_invisible() {
        let g = SGrid::new(-14.0, 14.0, 513).unwrap();
        let u = fubini_study(g).unwrap();
        let c = g_criticality(&u, None, &[BoundedDirection::constant(g, 1.0)], 1e-3).unwrap();
        assert!(c < 1e-12, "{c}");
    }

    #[test]
    fn bumped_potential_is_not_critical() {
        let g = SGrid::new(-14.0, 14.0, 1025).unwrap();
        let u = Potential::from_fn(
            g,
            |s| 2.0 * crate::models::softplus(s) + 0.2 * (-s * s).exp(),
            0.0,
            2.0,
        )
        .unwrap();
        let dirs: Vec<_> = (0..10)
            .map(|k| BoundedDirection::random_bumps(g, k))
            .collect();
        assert!(g_criticality(&u, None, &dirs, 1e-3).unwrap() >= 1e-2);
    }

    #[test]
    fn oversized_step_is_inadmissible() {
        let g = SGrid::new(-14.0, 14.0, 513).unwrap();
        let u = fubini_study(g).unwrap();
        let d = BoundedDirection::new(
            g,
            g.points().iter().map(|s| (-s * s * 50.0).exp()).collect(),
        )
        .unwrap();
        assert!(matches!(
            g_criticality(&u, None, &[d], 1.0),
            Err(LabError::Inadmissible(_))
        ));
    }
}
