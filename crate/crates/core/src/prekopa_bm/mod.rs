//! Real-variable analogues: Prekopa's theorem for weighted volumes and the
//! multiplicative Brunn–Minkowski inequality for slices of convex bodies,
//! with detection of the translation equality case.

mod bm;
mod body;
pub mod families;
mod geometry;
mod sampling;
mod weights;

pub use bm::{
    bm_check, midpoint_check, neg_log_volumes, sampled_hausdorff, translation_detect,
    MidpointReport, TranslationFit,
};
pub use body::{hull_vertices, slice_volume, ConvexBodyFamily};
pub use geometry::{direction_set, hull_2d, hull_3d, polygon_area, support, Hull3};
pub use sampling::{monte_carlo_volume, random_polytope, slice_polytope};
pub use weights::{prekopa_check, BoxGrid, PrekopaReport, WeightFamily, JOINT_CONVEXITY_TOL};
