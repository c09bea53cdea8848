//! Gaussian signal models for each coding strategy and evaluation of their
//! rate constraints.
//!
//! * `df` – full decoding at the sources with coherent block-Markov
//!   cooperation.
//! * `cf` – Slepian–Wolf source coding followed by compress-forward over the
//!   feedback MAC.
//! * `mac` – Slepian–Wolf source coding followed by plain MAC coding.
//! * `tdma` – the three-phase half-duplex specialisation of `df`.

mod cf;
mod df;
mod mac;
mod report;
mod tdma;

pub use cf::{cf_build, cf_constraints, cf_min_noise, NoiseSearch, NOISE_CAP, NOISE_FLOOR};
pub use df::{df_build, df_build_with_powers, df_constraints, df_constraints_mixture};
pub use mac::{maccc_build, maccc_constraints};
pub use report::{ConstraintEntry, ConstraintReport};
pub use tdma::{tdma_df_constraints, TdmaPhase};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gaussian::GaussianError;
use crate::model::{ModelError, Topology};

/// Slack allowed when checking that power fractions or weights sum to one.
pub const BUDGET_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StrategyError {
    #[error("split exceeds power budget: {0}")]
    SplitOutOfBudget(String),
    #[error("compression noise variances must be strictly positive")]
    NonpositiveCompressionNoise,
    #[error("time-share mixture is not a valid three-phase schedule: {0}")]
    BadPhaseStructure(String),
    #[error("invalid time-share mixture: {0}")]
    InvalidMixture(String),
    #[error("invalid tolerance {0}")]
    InvalidTolerance(f64),
    #[error(transparent)]
    Engine(#[from] GaussianError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Strategy {
    Df,
    Cf,
    Maccc,
    TdmaDf,
}

impl Strategy {
    pub const ALL: [Strategy; 4] = [
        Strategy::Df,
        Strategy::Cf,
        Strategy::Maccc,
        Strategy::TdmaDf,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Df => "df",
            Strategy::Cf => "cf",
            Strategy::Maccc => "maccc",
            Strategy::TdmaDf => "tdma_df",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s)
            .ok_or_else(|| format!("unknown strategy `{s}` (expected df, cf, maccc or tdma_df)"))
    }
}

/// Decode-forward power fractions.
///
/// `alpha = [α10, α11, α12, α1v]` is node 1's share of its power on the
/// common cooperative codeword `W0`, the two private cooperative codewords
/// `W1`, `W2`, and its fresh signal `V1`. `beta` is the same for node 2.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DfSplit {
    pub alpha: [f64; 4],
    pub beta: [f64; 4],
}

impl DfSplit {
    pub fn new(alpha: [f64; 4], beta: [f64; 4]) -> Result<Self, StrategyError> {
        let split = Self { alpha, beta };
        split.validate()?;
        Ok(split)
    }

    pub fn zero() -> Self {
        Self {
            alpha: [0.0; 4],
            beta: [0.0; 4],
        }
    }

    /// Everything on the common codeword.
    pub fn full_cooperation() -> Self {
        Self {
            alpha: [1.0, 0.0, 0.0, 0.0],
            beta: [1.0, 0.0, 0.0, 0.0],
        }
    }

    /// Everything on fresh independent signals, as in a plain MAC.
    pub fn no_cooperation() -> Self {
        Self {
            alpha: [0.0, 0.0, 0.0, 1.0],
            beta: [0.0, 0.0, 0.0, 1.0],
        }
    }

    pub fn validate(&self) -> Result<(), StrategyError> {
        for (name, f) in [("alpha", &self.alpha), ("beta", &self.beta)] {
            if f.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
                return Err(StrategyError::SplitOutOfBudget(format!(
                    "{name} has a negative or non-finite fraction"
                )));
            }
            let s: f64 = f.iter().sum();
            if s > 1.0 + BUDGET_TOLERANCE {
                return Err(StrategyError::SplitOutOfBudget(format!(
                    "{name} fractions sum to {s}"
                )));
            }
        }
        Ok(())
    }

    pub(crate) fn node(&self, node: usize) -> &[f64; 4] {
        if node == 1 {
            &self.alpha
        } else {
            &self.beta
        }
    }
}

/// Decode-forward operating point: per-node transmit powers and the split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DfPoint {
    pub powers: [f64; 2],
    pub split: DfSplit,
}

/// Compress-forward operating point.
///
/// `pu*` is the power on the carrier of the compressed observation, `pv*`
/// the power on fresh data, and `ntilde*` the variance of the compression
/// noise added to the node's own observation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CfSplit {
    pub pu1: f64,
    pub pv1: f64,
    pub pu2: f64,
    pub pv2: f64,
    pub ntilde1: f64,
    pub ntilde2: f64,
}

impl CfSplit {
    pub fn validate(&self, topology: &Topology) -> Result<(), StrategyError> {
        let limits = topology.power_limits();
        let powers = [(self.pu1, self.pv1), (self.pu2, self.pv2)];
        for (i, (pu, pv)) in powers.into_iter().enumerate() {
            if !(pu >= 0.0 && pv >= 0.0 && pu.is_finite() && pv.is_finite()) {
                return Err(StrategyError::SplitOutOfBudget(format!(
                    "node {} has negative power",
                    i + 1
                )));
            }
            if pu + pv > limits[i] * (1.0 + BUDGET_TOLERANCE) + BUDGET_TOLERANCE {
                return Err(StrategyError::SplitOutOfBudget(format!(
                    "node {} uses {} > limit {}",
                    i + 1,
                    pu + pv,
                    limits[i]
                )));
            }
        }
        if !(self.ntilde1 > 0.0 && self.ntilde2 > 0.0)
            || self.ntilde1.is_nan()
            || self.ntilde2.is_nan()
        {
            return Err(StrategyError::NonpositiveCompressionNoise);
        }
        Ok(())
    }
}

/// Weighted time-sharing over operating points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeShareMixture<P> {
    pub components: Vec<(f64, P)>,
}

impl<P> TimeShareMixture<P> {
    pub fn new(components: Vec<(f64, P)>) -> Result<Self, StrategyError> {
        if components.is_empty() {
            return Err(StrategyError::InvalidMixture("no components".into()));
        }
        if components
            .iter()
            .any(|(w, _)| !(*w >= 0.0 && *w <= 1.0 + BUDGET_TOLERANCE))
        {
            return Err(StrategyError::InvalidMixture(
                "weight outside [0, 1]".into(),
            ));
        }
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if (total - 1.0).abs() > BUDGET_TOLERANCE {
            return Err(StrategyError::InvalidMixture(format!(
                "weights sum to {total}"
            )));
        }
        Ok(Self { components })
    }

    pub fn singleton(point: P) -> Self {
        Self {
            components: vec![(1.0, point)],
        }
    }
}

/// A strategy together with the values of its free parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "strategy", rename_all = "snake_case")]
pub enum StrategyPoint {
    Df(DfPoint),
    Cf(CfSplit),
    Maccc {
        powers: [f64; 2],
    },
    TdmaDf {
        mixture: TimeShareMixture<DfPoint>,
        destination_decodes_all_phases: bool,
    },
}

impl StrategyPoint {
    pub fn strategy(&self) -> Strategy {
        match self {
            StrategyPoint::Df(_) => Strategy::Df,
            StrategyPoint::Cf(_) => Strategy::Cf,
            StrategyPoint::Maccc { .. } => Strategy::Maccc,
            StrategyPoint::TdmaDf { .. } => Strategy::TdmaDf,
        }
    }

    /// Evaluates the point. The topology's power limits are the per-node
    /// (average) budgets the point must respect.
    pub fn evaluate(
        &self,
        topology: &Topology,
        triple: &crate::model::SourceTriple,
    ) -> Result<ConstraintReport, StrategyError> {
        match self {
            StrategyPoint::Df(p) => {
                df_constraints_mixture(topology, triple, &TimeShareMixture::singleton(*p))
            }
            StrategyPoint::Cf(split) => cf_constraints(topology, triple, split),
            StrategyPoint::Maccc { powers } => {
                maccc_constraints(topology, triple, powers[0], powers[1])
            }
            StrategyPoint::TdmaDf {
                mixture,
                destination_decodes_all_phases,
            } => tdma_df_constraints(topology, triple, mixture, *destination_decodes_all_phases),
        }
    }
}

/// Checks that the time-averaged transmit power respects each node's limit.
pub(crate) fn check_average_power(
    topology: &Topology,
    mixture: &TimeShareMixture<DfPoint>,
) -> Result<(), StrategyError> {
    for node in 1..=2 {
        let limit = topology.power_limits()[node - 1];
        let used: f64 = mixture
            .components
            .iter()
            .map(|(w, p)| w * p.powers[node - 1] * p.split.node(node).iter().sum::<f64>())
            .sum();
        if used > limit * (1.0 + BUDGET_TOLERANCE) + BUDGET_TOLERANCE {
            return Err(StrategyError::SplitOutOfBudget(format!(
                "node {node} average power {used} exceeds limit {limit}"
            )));
        }
    }
    for (_, p) in &mixture.components {
        p.split.validate()?;
        if p.powers.iter().any(|&x| !(x >= 0.0 && x.is_finite())) {
            return Err(StrategyError::SplitOutOfBudget(
                "negative phase power".into(),
            ));
        }
    }
    Ok(())
}
