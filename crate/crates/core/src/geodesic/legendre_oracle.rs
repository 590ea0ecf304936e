use super::hull::check_frames;
use super::sheet::GeodesicSheet;
use crate::convex_core::{legendre, Potential, TGrid};
use crate::error::Result;

/// Geodesic by linear interpolation of Legendre transforms: row `t` is the
/// conjugate of `(1-t) u0* + t u1*` on the shared slope interval.
pub fn solve_geodesic_legendre(
    u0: &Potential,
    u1: &Potential,
    n_t: usize,
    p_grid_size: usize,
) -> Result<GeodesicSheet> {
    check_frames(u0, u1)?;
    let t_grid = TGrid::new(n_t)?;
    let v0 = legendre(u0, p_grid_size)?;
    let v1 = legendre(u1, p_grid_size)?;
    let mut values = Vec::with_capacity(n_t * u0.grid().len());
    for t in t_grid.points() {
        values.extend(v0.interpolate(&v1, t)?.conjugate_on(u0.grid()));
    }
    GeodesicSheet::new(t_grid, *u0.grid(), values, u0.slope_lo(), u0.slope_hi())
}
