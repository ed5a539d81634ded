//! Nilpotent adjoint orbits of the classical complex Lie algebras: explicit
//! standard triples, invariant functions, hyperKähler potentials and
//! numerical verification of the associated geometry.

pub mod cli_reports;
pub mod cohomogeneity;
pub mod config;
pub mod error;
pub mod fd;
pub mod invariants;
pub mod kahler_geometry;
pub mod lie_core;
pub mod linalg;
pub mod orbit_reps;
pub mod potentials;
pub mod standard_forms;

pub use config::Tolerances;
pub use error::{Error, Result};
