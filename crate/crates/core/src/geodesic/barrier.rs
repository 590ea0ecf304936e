use super::hull::check_frames;
use super::sheet::GeodesicSheet;
use crate::convex_core::{Potential, TGrid};
use crate::error::{LabError, Result};

/// The subgeodesic `max(u0 - A t, u1 + A (t - 1))`. It attains both boundary
/// values once `A >= sup |u0 - u1|`.
pub fn barrier(u0: &Potential, u1: &Potential, a: f64, n_t: usize) -> Result<GeodesicSheet> {
    check_frames(u0, u1)?;
    let needed = u0.sup_distance(u1);
    if a < needed * (1.0 - 1e-12) {
        return Err(LabError::BarrierTooSmall { a, needed });
    }
    let t_grid = TGrid::new(n_t)?;
    let (p0, p1) = (u0.to_pl(), u1.to_pl());
    let slices = t_grid
        .points()
        .into_iter()
        .map(|t| {
            p0.add_constant(-a * t)
                .max_with(&p1.add_constant(a * (t - 1.0)))
        })
        .collect::<Result<Vec<_>>>()?;
    GeodesicSheet::from_slices(t_grid, *u0.grid(), slices)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_core::SGrid;
    use crate::models::{fs_shift, fubini_study};

    #[test]
    fn identical_endpoints_zero_constant() {
        let g = SGrid::new(-6.0, 6.0, 61).unwrap();
        let u = fubini_study(g).unwrap();
        let sh = barrier(&u, &u, 0.0, 7).unwrap();
        for i in 0..7 {
            assert_eq!(sh.row(i), u.values());
        }
    }

    #[test]
    fn unit_offset_is_tent_in_t() {
        let g = SGrid::new(-6.0, 6.0, 61).unwrap();
        let u = fubini_study(g).unwrap();
        let sh = barrier(&u, &u.shifted(1.0), 1.0, 11).unwrap();
        for i in 0..11 {
            let t = sh.t_grid().point(i);
            for (a, b) in sh.row(i).iter().zip(u.values()) {
                assert!((a - b - (-t).max(t)).abs() < 1e-14);
            }
        }
        sh.check_boundary(&u, &u.shifted(1.0), 1e-14).unwrap();
        sh.check_joint_convexity(1e-12).unwrap();
    }

    #[test]
    fn too_small_constant_is_reported() {
        let g = SGrid::new(-6.0, 6.0, 61).unwrap();
        let u0 = fubini_study(g).unwrap();
        let u1 = fs_shift(g, 2.0).unwrap();
        let err = barrier(&u0, &u1, 1.0, 5).unwrap_err();
        assert!(matches!(err, LabError::BarrierTooSmall { .. }));
        let a = u0.sup_distance(&u1);
        barrier(&u0, &u1, a, 33)
            .unwrap()
            .check_joint_convexity(1e-12)
            .unwrap();
    }
}
