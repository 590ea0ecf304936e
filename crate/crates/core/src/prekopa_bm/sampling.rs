use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::body::{hull_vertices, ConvexBodyFamily};
use super::geometry::{hull_2d, hull_3d, P2, P3};
use crate::error::{LabError, Result};

/// Hull vertices of `n_points` seeded uniform points in the unit ball.
pub fn random_polytope(n_points: usize, seed: u64) -> Result<Vec<Vec<f64>>> {
    if n_points < 4 {
        return Err(LabError::Inadmissible(
            "a 3D polytope needs at least 4 points".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n_points);
    while pts.len() < n_points {
        let p: Vec<f64> = (0..3).map(|_| rng.random_range(-1.0..1.0)).collect();
        if p.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            pts.push(p);
        }
    }
    hull_vertices(&pts, 3)
}

/// Slices `{x : (x, z) in P, z = t}` of a 3D polytope by horizontal planes,
/// as a 2D family. Every `t` must lie strictly between the lowest and highest
/// vertex.
pub fn slice_polytope(polytope: &[Vec<f64>], t_samples: Vec<f64>) -> Result<ConvexBodyFamily> {
    let pts: Vec<P3> = polytope.iter().map(|v| [v[0], v[1], v[2]]).collect();
    let hull = hull_3d(&pts)?;
    let edges = hull.edges();
    let bodies = t_samples
        .iter()
        .map(|&t| {
            let mut section: Vec<P2> = Vec::new();
            for &(a, b) in &edges {
                let (p, q) = (pts[a], pts[b]);
                let (da, db) = (p[2] - t, q[2] - t);
                if da == 0.0 {
                    section.push([p[0], p[1]]);
                }
                if db == 0.0 {
                    section.push([q[0], q[1]]);
                }
                if da * db < 0.0 {
                    let s = da / (da - db);
                    section.push([p[0] + s * (q[0] - p[0]), p[1] + s * (q[1] - p[1])]);
                }
            }
            let poly = hull_2d(&section);
            if poly.len() < 3 {
                return Err(LabError::Inadmissible(format!(
                    "plane z = {t} does not cut the polytope in a polygon"
                )));
            }
            Ok(poly.into_iter().map(|p| p.to_vec()).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    ConvexBodyFamily::new(2, t_samples, bodies)
}

/// Monte Carlo volume over the bounding box: `(estimate, standard error)`.
pub fn monte_carlo_volume(
    body: &[Vec<f64>],
    dimension: usize,
    n_samples: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if n_samples == 0 {
        return Err(LabError::Inadmissible("need at least one sample".into()));
    }
    let mut lo = vec![f64::INFINITY; dimension];
    let mut hi = vec![f64::NEG_INFINITY; dimension];
    for v in body {
        for d in 0..dimension {
            lo[d] = lo[d].min(v[d]);
            hi[d] = hi[d].max(v[d]);
        }
    }
    let box_volume: f64 = (0..dimension).map(|d| hi[d] - lo[d]).product();
    let inside: Box<dyn Fn(&[f64]) -> bool> = match dimension {
        1 => Box::new(move |_| true),
        2 => {
            let poly = hull_2d(&body.iter().map(|v| [v[0], v[1]]).collect::<Vec<_>>());
            Box::new(move |x| {
                (0..poly.len()).all(|i| {
                    let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
                    (b[0] - a[0]) * (x[1] - a[1]) - (b[1] - a[1]) * (x[0] - a[0]) >= 0.0
                })
            })
        }
        3 => {
            let hull = hull_3d(&body.iter().map(|v| [v[0], v[1], v[2]]).collect::<Vec<_>>())?;
            Box::new(move |x| hull.contains([x[0], x[1], x[2]]))
        }
        _ => {
            return Err(LabError::Inadmissible(format!(
                "dimension {dimension} unsupported"
            )))
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    let mut x = vec![0.0; dimension];
    for _ in 0..n_samples {
        for d in 0..dimension {
            x[d] = rng.random_range(lo[d]..hi[d]);
        }
        if inside(&x) {
            hits += 1;
        }
    }
    let p = hits as f64 / n_samples as f64;
    Ok((
        box_volume * p,
        box_volume * (p * (1.0 - p) / n_samples as f64).sqrt(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prekopa_bm::{bm_check, slice_volume};

    #[test]
    fn slices_of_a_cube_are_unit_squares() {
        let mut cube = Vec::new();
        for i in 0..8 {
            cube.push(vec![
                (i & 1) as f64,
                ((i >> 1) & 1) as f64,
                ((i >> 2) & 1) as f64,
            ]);
        }
        let fam = slice_polytope(&cube, vec![0.25, 0.5, 0.75]).unwrap();
        for v in fam.volumes().unwrap() {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn random_polytope_slices_are_log_concave() {
        let p = random_polytope(40, 11).unwrap();
        let (zl, zh) = p
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(l, h), v| {
                (l.min(v[2]), h.max(v[2]))
            });
        let t: Vec<f64> = (1..20).map(|i| zl + (zh - zl) * i as f64 / 20.0).collect();
        let fam = slice_polytope(&p, t).unwrap();
        assert!(!bm_check(&fam, 1e-9).unwrap().is_nonconvex());
    }

    #[test]
    fn monte_carlo_agrees_with_exact_volume() {
        let p = random_polytope(30, 5).unwrap();
        let exact = slice_volume(&p, 3).unwrap();
        let (est, se) = monte_carlo_volume(&p, 3, 100_000, 9).unwrap();
        assert!(
            (est - exact).abs() <= 3.0 * se,
            "{est} vs {exact} (se {se})"
        );
    }
}
