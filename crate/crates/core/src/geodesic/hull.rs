//! Lower convex hull of the boundary data `{(0, s, u0(s))} ∪ {(1, s, u1(s))}`.
//!
//! All points sit on the two lines `t = 0` and `t = 1`, so every lower facet
//! joins a lower-hull edge of one endpoint to a vertex of the other. Walking
//! both 2D lower hulls in order of increasing edge slope lists the facets, and
//! the slice of the hull at height `t` is the Minkowski combination
//! `(1 - t) epi(u0) + t epi(u1)`.

use super::sheet::GeodesicSheet;
use crate::convex_core::{check_convex_samples, PlFunction, Potential, TGrid};
use crate::error::Result;

/// Indices of the lower convex hull of points with strictly increasing `xs`.
pub fn lower_hull_2d(xs: &[f64], ys: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(xs.len());
    for k in 0..xs.len() {
        while hull.len() >= 2 {
            let i = hull[hull.len() - 2];
            let j = hull[hull.len() - 1];
            let cross = (xs[j] - xs[i]) * (ys[k] - ys[i]) - (ys[j] - ys[i]) * (xs[k] - xs[i]);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(k);
    }
    hull
}

pub(crate) fn check_frames(u0: &Potential, u1: &Potential) -> Result<()> {
    u0.same_frame(u1)?;
    check_convex_samples(u0.values(), u0.grid().spacing())?;
    check_convex_samples(u1.values(), u1.grid().spacing())
}

/// Facet structure of the lower hull between two endpoint potentials.
#[derive(Debug, Clone)]
pub struct GeodesicHull {
    a: Vec<f64>,
    ya: Vec<f64>,
    b: Vec<f64>,
    yb: Vec<f64>,
    path: Vec<(usize, usize)>,
    slope_lo: f64,
    slope_hi: f64,
}

impl GeodesicHull {
    pub fn new(u0: &Potential, u1: &Potential) -> Result<Self> {
        check_frames(u0, u1)?;
        let s = u0.grid().points();
        let ha = lower_hull_2d(&s, u0.values());
        let hb = lower_hull_2d(&s, u1.values());
        let a: Vec<f64> = ha.iter().map(|&k| s[k]).collect();
        let ya: Vec<f64> = ha.iter().map(|&k| u0.values()[k]).collect();
        let b: Vec<f64> = hb.iter().map(|&k| s[k]).collect();
        let yb: Vec<f64> = hb.iter().map(|&k| u1.values()[k]).collect();
        let slope = |x: &[f64], y: &[f64], i: usize| (y[i + 1] - y[i]) / (x[i + 1] - x[i]);

        let (na, nb) = (a.len(), b.len());
        let mut path = Vec::with_capacity(na + nb);
        let (mut i, mut j) = (0usize, 0usize);
        path.push((0, 0));
        while i + 1 < na || j + 1 < nb {
            if i + 1 == na {
                j += 1;
            } else if j + 1 == nb {
                i += 1;
            } else {
                let (sa, sb) = (slope(&a, &ya, i), slope(&b, &yb, j));
                if sa < sb {
                    i += 1;
                } else if sb < sa {
                    j += 1;
                } else {
                    i += 1;
                    j += 1;
                }
            }
            path.push((i, j));
        }
        Ok(Self {
            a,
            ya,
            b,
            yb,
            path,
            slope_lo: u0.slope_lo(),
            slope_hi: u0.slope_hi(),
        })
    }

    /// Number of lower facets (triangles, or parallelograms where edge slopes tie).
    pub fn facet_count(&self) -> usize {
        self.path.len() - 1
    }

    /// Vertex pairs `(i, j)` along the merged edge walk.
    pub fn path(&self) -> &[(usize, usize)] {
        &self.path
    }

    pub fn slice(&self, t: f64) -> PlFunction {
        let xs: Vec<f64> = self
            .path
            .iter()
            .map(|&(i, j)| (1.0 - t) * self.a[i] + t * self.b[j])
            .collect();
        let ys: Vec<f64> = self
            .path
            .iter()
            .map(|&(i, j)| (1.0 - t) * self.ya[i] + t * self.yb[j])
            .collect();
        PlFunction::from_unsorted_repeats(&xs, &ys, self.slope_lo, self.slope_hi)
    }

    /// Checks that every boundary point lies on or above the supporting plane
    /// of every facet, i.e. that the walk really is the lower hull. Returns the
    /// most negative gap found.
    pub fn verify(&self) -> f64 {
        let mut worst = f64::INFINITY;
        for w in self.path.windows(2) {
            let ((i0, j0), (i1, j1)) = (w[0], w[1]);
            let sigma = if i1 > i0 {
                (self.ya[i1] - self.ya[i0]) / (self.a[i1] - self.a[i0])
            } else {
                (self.yb[j1] - self.yb[j0]) / (self.b[j1] - self.b[j0])
            };
            for k in 0..self.a.len() {
                let plane = self.ya[i0] + sigma * (self.a[k] - self.a[i0]);
                worst = worst.min(self.ya[k] - plane);
            }
            for k in 0..self.b.len() {
                let plane = self.yb[j0] + sigma * (self.b[k] - self.b[j0]);
                worst = worst.min(self.yb[k] - plane);
            }
        }
        worst
    }
}

/// Maximal jointly convex sheet with boundary values `u0`, `u1`, sampled on
/// `n_t` equispaced times.
pub fn solve_geodesic_hull(u0: &Potential, u1: &Potential, n_t: usize) -> Result<GeodesicSheet> {
    let t_grid = TGrid::new(n_t)?;
    let hull = GeodesicHull::new(u0, u1)?;
    let slices = t_grid.points().into_iter().map(|t| hull.slice(t)).collect();
    GeodesicSheet::from_slices(t_grid, *u0.grid(), slices)
}

/// `inf{(1-t) u0(a) + t u1(b) : (1-t) a + t b = s}` by brute force over the
/// breakpoints of both endpoints. Quadratic cost; a test oracle.
pub fn inf_convolution(u0: &Potential, u1: &Potential, t: f64, s: f64) -> f64 {
    if t <= 0.0 {
        return u0.eval(s);
    }
    if t >= 1.0 {
        return u1.eval(s);
    }
    let nodes = u0.grid().points();
    let mut best = f64::INFINITY;
    for &a in &nodes {
        let b = (s - (1.0 - t) * a) / t;
        best = best.min((1.0 - t) * u0.eval(a) + t * u1.eval(b));
    }
    for &b in &nodes {
        let a = (s - t * b) / (1.0 - t);
        best = best.min((1.0 - t) * u0.eval(a) + t * u1.eval(b));
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_core::SGrid;
    use crate::models::{fs_shift, fubini_study, random_convex};

    #[test]
    fn hull_2d_drops_interior_points() {
        let xs = [0.0, 1.0, 2.0, 3.0];
        let ys = [0.0, 2.0, 1.0, 3.0];
        assert_eq!(lower_hull_2d(&xs, &ys), vec![0, 2, 3]);
        let collinear = [0.0, 1.0, 2.0, 3.0];
        assert_eq!(lower_hull_2d(&xs, &collinear), vec![0, 3]);
    }

    #[test]
    fn identical_endpoints_give_constant_sheet() {
        let g = SGrid::new(-10.0, 10.0, 201).unwrap();
        let u = fubini_study(g).unwrap();
        let sh = solve_geodesic_hull(&u, &u, 9).unwrap();
        for i in 0..9 {
            for (a, b) in sh.row(i).iter().zip(u.values()) {
                assert!((a - b).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn constant_offset_is_affine_in_t() {
        let g = SGrid::new(-10.0, 10.0, 201).unwrap();
        let u = fubini_study(g).unwrap();
        let sh = solve_geodesic_hull(&u, &u.shifted(0.75), 5).unwrap();
        for i in 0..5 {
            let t = sh.t_grid().point(i);
            for (a, b) in sh.row(i).iter().zip(u.values()) {
                assert!((a - b - 0.75 * t).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn matches_brute_force_infimal_convolution() {
        let g = SGrid::new(-14.0, 14.0, 141).unwrap();
        for seed in 0..5 {
            let u0 = random_convex(g, 0.0, 2.0, seed).unwrap();
            let u1 = random_convex(g, 0.0, 2.0, seed + 100).unwrap();
            let hull = GeodesicHull::new(&u0, &u1).unwrap();
            assert!(hull.verify() > -1e-12);
            for t in [0.0, 0.3, 0.5, 0.9, 1.0] {
                let sl = hull.slice(t);
                for s in [-15.0, -3.3, 0.0, 1.7, 5.9, 13.1, 16.0] {
                    let d = sl.eval(s) - inf_convolution(&u0, &u1, t, s);
                    assert!(d.abs() < 1e-12, "seed {seed} t {t} s {s}: {d}");
                }
            }
        }
    }

    #[test]
    fn fs_translate_matches_closed_form() {
        let g = SGrid::new(-14.0, 14.0, 1025).unwrap();
        let u0 = fubini_study(g).unwrap();
        let u1 = fs_shift(g, 1.0).unwrap();
        let sh = solve_geodesic_hull(&u0, &u1, 257).unwrap();
        let mut worst = 0.0f64;
        for i in 0..257 {
            let t = sh.t_grid().point(i);
            let exact = fs_shift(g, t).unwrap();
            worst = worst.max(
                sh.row(i)
                    .iter()
                    .zip(exact.values())
                    .fold(0.0f64, |m, (a, b)| m.max((a - b).abs())),
            );
        }
        assert!(worst < 1e-3, "{worst}");
    }

    #[test]
    fn rejects_mismatched_slopes() {
        let g = SGrid::new(-5.0, 5.0, 51).unwrap();
        let u0 = fubini_study(g).unwrap();
        let u1 = Potential::from_fn(g, |s| s * s / 20.0, -0.5, 0.5).unwrap();
        assert!(solve_geodesic_hull(&u0, &u1, 5).is_err());
    }
}
