//! Achievable-rate evaluation for the three-node Gaussian multiple access
//! channel with feedback and correlated sources.
//!
//! Two sources observe correlated data `S1 = (I, J)`, `S2 = (I, K)` and
//! overhear each other while sending to a common destination. The crate
//! evaluates three ways of doing this:
//!
//! * decode-forward at the sources with coherent cooperation (and its
//!   half-duplex three-phase special case),
//! * Slepian–Wolf source coding followed by compress-forward,
//! * Slepian–Wolf source coding followed by plain MAC coding,
//!
//! and searches their parameters for the least transmit power that still
//! delivers the sources.

pub mod gaussian;
pub mod model;
pub mod optimizer;
pub mod strategies;

pub use gaussian::{GaussianError, GaussianSystem, SystemBuilder, VarId, VariableSet};
pub use model::{
    slepian_wolf_feasible, triple_from_pmf, JointPmf, ModelError, SourceTriple, Topology,
};
pub use optimizer::{
    best_split, feasible_split, min_power, region, sweep, MinPower, Objective, OptimizerError,
    Region, RegionPoint, SearchConfig, SweepRow, SweptParameter,
};
pub use strategies::{
    cf_constraints, cf_min_noise, df_constraints, df_constraints_mixture, maccc_constraints,
    tdma_df_constraints, CfSplit, ConstraintEntry, ConstraintReport, DfPoint, DfSplit, NoiseSearch,
    Strategy, StrategyError, StrategyPoint, TdmaPhase, TimeShareMixture,
};
