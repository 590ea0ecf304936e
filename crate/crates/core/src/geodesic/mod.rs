//! Bounded geodesics between model potentials: the exact lower-hull envelope,
//! a Legendre-interpolation oracle, barriers, and the Monge–Ampère residual.

mod barrier;
mod hull;
mod legendre_oracle;
mod residual;
mod sheet;

pub use barrier::barrier;
pub use hull::{inf_convolution, lower_hull_2d, solve_geodesic_hull, GeodesicHull};
pub use legendre_oracle::solve_geodesic_legendre;
pub use residual::{default_epsilon_floor, lipschitz_certificate, ma_residual, MAResidualReport};
pub use sheet::GeodesicSheet;
