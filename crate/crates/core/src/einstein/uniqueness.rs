use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::family::slope_center;
use super::solution::Gauge;
use super::solver::{solve_ke, solve_ke_with, KeOptions};
use super::twist::TwistWeight;
use crate::convex_core::{Potential, SGrid};
use crate::error::{LabError, Result};
use crate::models::random_convex;

fn initializations(
    grid: SGrid,
    slope_lo: f64,
    slope_hi: f64,
    n_inits: usize,
    seed: u64,
) -> Result<Vec<Option<Potential>>> {
    let mut out = vec![None];
    for i in 1..n_inits {
        out.push(Some(random_convex(
            grid,
            slope_lo,
            slope_hi,
            seed.wrapping_add(i as u64),
        )?));
    }
    Ok(out)
}

fn max_pairwise(items: &[Potential], dist: impl Fn(&Potential, &Potential) -> f64) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..items.len() {
        for j in i + 1..items.len() {
            worst = worst.max(dist(&items[i], &items[j]));
        }
    }
    worst
}

/// Solves from `n_inits` starting points (the default one and seeded random
/// convex potentials) and returns the largest sup-distance between the
/// solutions after fixing `u(0) = 0`.
pub fn absolute_uniqueness_experiment(
    w: &TwistWeight,
    slope_lo: f64,
    slope_hi: f64,
    n_inits: usize,
    seed: u64,
) -> Result<f64> {
    if !(w.strictness() > 0.0) {
        return Err(LabError::Inadmissible(
            "absolute uniqueness needs a twist with positive strictness".into(),
        ));
    }
    if n_inits == 0 {
        return Err(LabError::Inadmissible(
            "need at least one initialization".into(),
        ));
    }
    let grid = *w.grid();
    let sols = initializations(grid, slope_lo, slope_hi, n_inits, seed)?
        .iter()
        .map(|init| {
            solve_ke(Some(w), grid, slope_lo, slope_hi, init.as_ref())
                .map(|s| s.regauged(Gauge::ValueAtZero).u)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(max_pairwise(&sols, Potential::sup_distance))
}

/// Distance between `u` and `v` after undoing a translation by a whole number
/// `m` of grid cells and the best additive constant, measured on the overlap.
pub fn translation_quotient_distance(u: &Potential, v: &Potential, m: isize) -> f64 {
    let n = u.values().len() as isize;
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in m.max(0)..(n + m).min(n) {
        let d = v.values()[k as usize] - u.values()[(k - m) as usize];
        lo = lo.min(d);
        hi = hi.max(d);
    }
    0.5 * (hi - lo)
}

/// Uniqueness up to the translation flow, for untwisted or pure-cone problems.
///
/// Each run pins its slope center at a random multiple of the grid spacing
/// within `[-1, 1]` and starts from its own initialization; the returned value
/// is the largest [`translation_quotient_distance`], with the shift detected
/// from the slope centers.
pub fn uniqueness_modulo_translation(
    w: Option<&TwistWeight>,
    grid: SGrid,
    slope_lo: f64,
    slope_hi: f64,
    n_inits: usize,
    seed: u64,
) -> Result<f64> {
    if w.is_some_and(|w| !w.is_affine()) {
        return Err(LabError::Inadmissible(
            "translation quotient only applies to untwisted or pure-cone problems".into(),
        ));
    }
    if n_inits == 0 {
        return Err(LabError::Inadmissible(
            "need at least one initialization".into(),
        ));
    }
    let h = grid.spacing();
    let reach = (1.0 / h).floor() as i64;
    let k0 = (-grid.s_min() / h).round() as i64;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sols = initializations(grid, slope_lo, slope_hi, n_inits, seed)?
        .iter()
        .enumerate()
        .map(|(i, init)| {
            let shift = if i == 0 {
                0
            } else {
                rng.random_range(-reach..=reach)
            };
            let opts = KeOptions {
                center: grid.point((k0 + shift) as usize),
                ..KeOptions::default()
            };
            let init = match init {
                Some(p) => p.clone(),
                None => super::solver::default_init(grid, slope_lo, slope_hi, opts.center)?,
            };
            solve_ke_with(w, grid, slope_lo, slope_hi, Some(&init), &opts).map(|s| s.u)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(max_pairwise(&sols, |u, v| {
        let m = ((slope_center(v) - slope_center(u)) / h).round() as isize;
        translation_quotient_distance(u, v, m)
    }))
}
