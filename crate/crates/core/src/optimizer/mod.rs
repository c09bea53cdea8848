//! Parameter search, power minimisation, scenario sweeps and rate regions.
//!
//! The inner oracle, [`feasible_split`], is a derivative-free search over a
//! strategy's free parameters (grid, seeded random starts, coordinate
//! descent on the worst constraint slack). Everything else wraps it in
//! bisection.

mod hull;
mod power;
mod region;
mod search;
mod sweep;

pub use hull::{dominated_by_hull, upper_right_hull};
pub use power::{min_power, MinPower, Objective};
pub use region::{region, Region, RegionPoint};
pub use search::{best_split, feasible_split};
pub use sweep::{sweep, SweepRow, SweptParameter};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::ModelError;
use crate::strategies::StrategyError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OptimizerError {
    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),
    #[error("no feasible operating point found at the power cap {cap}")]
    CapExceeded { cap: f64 },
    #[error("invalid sweep: {0}")]
    InvalidSweep(String),
    #[error(transparent)]
    Strategy(#[from] StrategyError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Budget and tolerances for the searches.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// Random starting points refined in addition to the best grid points.
    pub multistarts: usize,
    /// Grid points per parameter direction.
    pub grid_resolution: usize,
    pub rng_seed: u64,
    /// Coordinate-descent sweeps per start.
    pub refine_iterations: usize,
    /// Absolute tolerance of every bisection (power units, or bits for
    /// region tracing).
    pub bisection_tol: f64,
    pub power_cap: f64,
    /// Whether the destination listens in all three half-duplex phases.
    pub tdma_destination_decodes_all_phases: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            multistarts: 6,
            grid_resolution: 4,
            rng_seed: 0,
            refine_iterations: 40,
            bisection_tol: 1e-4,
            power_cap: 1e4,
            tdma_destination_decodes_all_phases: true,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<(), OptimizerError> {
        let bad = |m: &str| Err(OptimizerError::InvalidConfig(m.to_owned()));
        if self.multistarts == 0 {
            return bad("multistarts must be at least 1");
        }
        if self.grid_resolution == 0 {
            return bad("grid_resolution must be positive");
        }
        if self.refine_iterations == 0 {
            return bad("refine_iterations must be positive");
        }
        if !(self.bisection_tol > 0.0 && self.bisection_tol.is_finite()) {
            return bad("bisection_tol must be positive");
        }
        if !(self.power_cap > 0.0 && self.power_cap.is_finite()) {
            return bad("power_cap must be positive");
        }
        Ok(())
    }
}
