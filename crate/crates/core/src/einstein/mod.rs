mod bando;
mod family;
mod kernel;
mod solution;
mod solver;
mod twist;
mod uniqueness;

pub use bando::{bando_mabuchi_verify, bando_mabuchi_verify_with, BandoOptions, FlowEstimate};
pub use family::{ke_family, slope_center};
pub use kernel::{default_zeta_samples, kernel_bound_check};
pub use solution::{ke_residual, Gauge, KESolution};
pub use solver::{default_init, solve_ke, solve_ke_with, solve_tridiagonal, KeOptions};
pub use twist::{TwistSpec, TwistWeight};
pub use uniqueness::{
    absolute_uniqueness_experiment, translation_quotient_distance, uniqueness_modulo_translation,
};
