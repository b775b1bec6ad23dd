//! Numeric defaults.
//!
//! | setting                          | default  | flag             |
//! |----------------------------------|----------|------------------|
//! | comparison tolerance             | 1e-9     | `--tol`          |
//! | equilibrium residual tolerance   | 1e-8     | `--tol`          |
//! | ascent iteration cap             | 100000   | `--max-iter`     |
//! | QVI sample seed                  | 24301    | `--seed`         |
//! | oracle grid resolution           | 1e-3     | `--resolution`   |
//!
//! `FUZZYEQ_TOL` replaces the tolerance default for every command.

use fuzzyeq_core::SolverConfig;

pub const COMPARE_TOL: f64 = fuzzyeq_core::DEFAULT_TOL;
pub const RESIDUAL_TOL: f64 = 1e-8;
pub const RESOLUTION: f64 = 1e-3;

pub fn solver() -> SolverConfig {
    SolverConfig::default()
}
