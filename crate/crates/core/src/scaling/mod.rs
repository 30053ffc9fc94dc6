//! Conductance ratios, walk-dimension estimates and their cross-checks.

mod profile;
mod report;
mod walk;

pub use profile::{
    concentration, energy_profile, solution_profile, CellMass, ConcentrationPoint, EnergyProfile,
    PROFILE_QUANTILES,
};
pub use report::{
    dw_witness, glue_gap, resistance_sequence, FailureKind, GlueGap, Incomplete, LevelRecord,
    ScalingReport, WitnessVerdict,
};
pub use walk::{crossing_steps, random_walk_crossing, trial_rng, walk_dimension, WalkStats, STEP_LIMIT};
