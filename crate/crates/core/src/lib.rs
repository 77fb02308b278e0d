//! Thermodynamics of the quantum Szilard engine.
//!
//! A single particle in a unit box (the system under study) is coupled to a
//! physical demon memory. The cycle inserts a barrier at `x = delta`, measures the
//! particle's side into the demon's macrostate (size `gamma`), expands the occupied
//! side isothermally and finally erases the record. [`engine::run_cycle`] returns the
//! per-stage work/heat/energy/entropy ledgers, [`sweep`] and [`figures`] turn grids of
//! cycles into CSV datasets, and [`cli`] wraps everything in the `szilard` binary.

// `!(x > 0.0)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod engine;
pub mod error;
pub mod figures;
pub mod sweep;
pub mod thermo;
pub mod theta;

pub use engine::{
    binary_entropy, initialize, landauer_check, left_probability, run_cycle, stage_control,
    stage_erasure, stage_insertion, stage_measurement, verify_identities, CycleLedger,
    EngineConfig, GridPoint, LandauerCheck, MeasurementStats, Stage, StageLedger,
    VerificationReport,
};
pub use error::{Error, Result};
pub use thermo::{classify_regime, CanonicalBox, PartitionModel, Regime, ThermalPoint};
