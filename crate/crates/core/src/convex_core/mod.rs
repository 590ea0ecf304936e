//! Grids, convex potentials, discrete Legendre duality, convexity verdicts and
//! tail-exact mass quadrature.

mod grid;
mod legendre;
mod mass;
mod piecewise;
mod potential;
mod verdict;

pub use grid::{SGrid, TGrid};
pub use legendre::{biconjugate, default_p_grid_size, legendre, legendre_naive, LegendreTable};
pub use mass::{check_integrability, density, mass, mass_pl, mass_weights};
pub use piecewise::PlFunction;
pub use potential::{
    check_convex_samples, convexity_tolerance, second_differences, slope_tolerance, Potential,
};
pub use verdict::{convexity_verdict, ConvexityKind, ConvexityVerdict};
