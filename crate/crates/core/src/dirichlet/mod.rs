//! Discrete energy, harmonic solves between opposite faces and gluing.

mod energy;
mod glue;
mod solver;

pub use energy::EnergyForm;
pub(crate) use energy::neumaier;
pub use glue::{first_axis_deviation, glue_hm, symmetrize};
pub use solver::{
    effective_resistance, iteration_cap, solve_faces, solve_harmonic, solve_harmonic_from,
    HarmonicSolution, DEFAULT_TOLERANCE,
};
