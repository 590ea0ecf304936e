//! The functionals `F = -log ∫ e^{-(u+w)}`, the Monge–Ampère energy `E` and
//! `G = F - E`, evaluated along sheets and at potentials.

mod criticality;
mod energy;
mod trace;

pub use criticality::{g_criticality, BoundedDirection};
pub use energy::{energy, energy_pl, path_energy};
pub use trace::{
    e_trace_along, f_trace, g_trace, traces_to_csv, FunctionalLabel, FunctionalTrace,
    TwistedConfiguration,
};
