//! Channel geometry and the entropic description of the correlated sources.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("node {0} cannot transmit to itself")]
    SelfLink(usize),
    #[error("node index {index} out of range 1..={count}")]
    NodeOutOfRange { index: usize, count: usize },
    #[error("invalid topology: {0}")]
    InvalidTopology(String),
    #[error("invalid pmf: {0}")]
    InvalidPmf(String),
    #[error("entropy `{0}` must be finite and nonnegative")]
    NegativeEntropy(&'static str),
}

/// Node distances, path loss, receiver noise and per-source power limits.
///
/// Nodes are numbered from 1; node `node_count` is the destination and
/// nodes `1..node_count` are sources.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    distances: Vec<Vec<f64>>,
    kappa: f64,
    eta: f64,
    noise: Vec<f64>,
    power_limits: Vec<f64>,
}

impl Topology {
    pub fn new(
        distances: Vec<Vec<f64>>,
        kappa: f64,
        eta: f64,
        noise: Vec<f64>,
        power_limits: Vec<f64>,
    ) -> Result<Self, ModelError> {
        let n = distances.len();
        let bad = |msg: String| Err(ModelError::InvalidTopology(msg));
        if n < 3 {
            return bad(format!("need at least 3 nodes, got {n}"));
        }
        for (i, row) in distances.iter().enumerate() {
            if row.len() != n {
                return bad(format!("distance row {} has {} entries", i + 1, row.len()));
            }
            for (j, &d) in row.iter().enumerate() {
                if i != j && !(d > 0.0 && d.is_finite()) {
                    return bad(format!("distance d{}{} must be positive", i + 1, j + 1));
                }
                if d != distances[j][i] {
                    return bad(format!(
                        "distance matrix not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    ));
                }
            }
        }
        if !(kappa > 0.0 && kappa.is_finite()) {
            return bad("kappa must be positive".into());
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return bad("eta must be positive".into());
        }
        if noise.len() != n {
            return bad(format!("expected {n} noise variances, got {}", noise.len()));
        }
        if noise.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return bad("noise variances must be positive".into());
        }
        if power_limits.len() != n - 1 {
            return bad(format!(
                "expected {} power limits, got {}",
                n - 1,
                power_limits.len()
            ));
        }
        if power_limits.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
            return bad("power limits must be nonnegative".into());
        }
        Ok(Self {
            distances,
            kappa,
            eta,
            noise,
            power_limits,
        })
    }

    /// Builds the distance matrix from planar node coordinates.
    pub fn from_coordinates(
        coordinates: &[[f64; 2]],
        kappa: f64,
        eta: f64,
        noise: Vec<f64>,
        power_limits: Vec<f64>,
    ) -> Result<Self, ModelError> {
        let distances = coordinates
            .iter()
            .map(|a| {
                coordinates
                    .iter()
                    .map(|b| (a[0] - b[0]).hypot(a[1] - b[1]))
                    .collect()
            })
            .collect();
        Self::new(distances, kappa, eta, noise, power_limits)
    }

    /// Three nodes, all pairwise distances `d`, unit noise, κ = 1, η = 2.
    pub fn equilateral(d: f64, power: f64) -> Result<Self, ModelError> {
        Self::triangle(d, d, d, power)
    }

    /// Three nodes with the given source–source and source–destination
    /// distances, κ = 1, η = 2, unit noise and equal power limits.
    pub fn triangle(d12: f64, d13: f64, d23: f64, power: f64) -> Result<Self, ModelError> {
        Self::new(
            vec![
                vec![0.0, d12, d13],
                vec![d12, 0.0, d23],
                vec![d13, d23, 0.0],
            ],
            1.0,
            2.0,
            vec![1.0; 3],
            vec![power; 2],
        )
    }

    pub fn node_count(&self) -> usize {
        self.distances.len()
    }

    pub fn destination(&self) -> usize {
        self.node_count()
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn distances(&self) -> &[Vec<f64>] {
        &self.distances
    }

    pub fn power_limits(&self) -> &[f64] {
        &self.power_limits
    }

    fn check_node(&self, index: usize) -> Result<(), ModelError> {
        if index == 0 || index > self.node_count() {
            return Err(ModelError::NodeOutOfRange {
                index,
                count: self.node_count(),
            });
        }
        Ok(())
    }

    pub fn distance(&self, i: usize, t: usize) -> Result<f64, ModelError> {
        self.check_node(i)?;
        self.check_node(t)?;
        Ok(self.distances[i - 1][t - 1])
    }

    /// Power gain `κ·d_it^(−η)` from node `i` to node `t`.
    pub fn gain(&self, i: usize, t: usize) -> Result<f64, ModelError> {
        if i == t {
            return Err(ModelError::SelfLink(i));
        }
        Ok(self.kappa * self.distance(i, t)?.powf(-self.eta))
    }

    /// Receiver noise variance `N_t` at node `t`.
    pub fn noise(&self, t: usize) -> Result<f64, ModelError> {
        self.check_node(t)?;
        Ok(self.noise[t - 1])
    }

    pub fn noise_variances(&self) -> &[f64] {
        &self.noise
    }

    pub fn with_power_limits(&self, power_limits: Vec<f64>) -> Result<Self, ModelError> {
        Self::new(
            self.distances.clone(),
            self.kappa,
            self.eta,
            self.noise.clone(),
            power_limits,
        )
    }

    pub fn with_distance(&self, i: usize, t: usize, d: f64) -> Result<Self, ModelError> {
        if i == t {
            return Err(ModelError::SelfLink(i));
        }
        self.check_node(i)?;
        self.check_node(t)?;
        let mut distances = self.distances.clone();
        distances[i - 1][t - 1] = d;
        distances[t - 1][i - 1] = d;
        Self::new(
            distances,
            self.kappa,
            self.eta,
            self.noise.clone(),
            self.power_limits.clone(),
        )
    }

    pub(crate) fn require_three_nodes(&self) -> Result<(), ModelError> {
        if self.node_count() != 3 {
            return Err(ModelError::InvalidTopology(format!(
                "strategies are defined for 3 nodes, got {}",
                self.node_count()
            )));
        }
        Ok(())
    }
}

/// Source correlation summarised by `H(S1|S2)`, `H(S2|S1)` and `I(S1;S2)`,
/// all in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SourceTriple {
    pub h1_given_2: f64,
    pub h2_given_1: f64,
    pub common: f64,
}

impl SourceTriple {
    pub fn new(h1_given_2: f64, h2_given_1: f64, common: f64) -> Result<Self, ModelError> {
        let ok = |v: f64| v >= 0.0 && v.is_finite();
        if !ok(h1_given_2) {
            return Err(ModelError::NegativeEntropy("h1_given_2"));
        }
        if !ok(h2_given_1) {
            return Err(ModelError::NegativeEntropy("h2_given_1"));
        }
        if !ok(common) {
            return Err(ModelError::NegativeEntropy("common"));
        }
        Ok(Self {
            h1_given_2,
            h2_given_1,
            common,
        })
    }

    pub fn zero() -> Self {
        Self {
            h1_given_2: 0.0,
            h2_given_1: 0.0,
            common: 0.0,
        }
    }

    /// `H(S1)`
    pub fn h1(&self) -> f64 {
        self.h1_given_2 + self.common
    }

    /// `H(S2)`
    pub fn h2(&self) -> f64 {
        self.h2_given_1 + self.common
    }

    /// `H(S1,S2)`
    pub fn joint(&self) -> f64 {
        self.h1_given_2 + self.h2_given_1 + self.common
    }

    pub fn is_zero(&self) -> bool {
        self.h1_given_2 == 0.0 && self.h2_given_1 == 0.0 && self.common == 0.0
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            h1_given_2: self.h1_given_2 * t,
            h2_given_1: self.h2_given_1 * t,
            common: self.common * t,
        }
    }
}

/// Joint pmf of two finite-alphabet sources; rows index `S1`, columns `S2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointPmf {
    probabilities: Vec<Vec<f64>>,
}

pub const PMF_MASS_TOLERANCE: f64 = 1e-12;

impl JointPmf {
    pub fn new(probabilities: Vec<Vec<f64>>) -> Result<Self, ModelError> {
        let cols = probabilities.first().map_or(0, Vec::len);
        if probabilities.is_empty() || cols == 0 {
            return Err(ModelError::InvalidPmf("empty alphabet".into()));
        }
        if probabilities.iter().any(|r| r.len() != cols) {
            return Err(ModelError::InvalidPmf("rows have different lengths".into()));
        }
        if probabilities
            .iter()
            .flatten()
            .any(|&p| !(p >= 0.0 && p.is_finite()))
        {
            return Err(ModelError::InvalidPmf(
                "negative or non-finite entry".into(),
            ));
        }
        let mass: f64 = probabilities.iter().flatten().sum();
        if (mass - 1.0).abs() > PMF_MASS_TOLERANCE {
            return Err(ModelError::InvalidPmf(format!("total mass {mass} != 1")));
        }
        Ok(Self { probabilities })
    }

    pub fn probabilities(&self) -> &[Vec<f64>] {
        &self.probabilities
    }

    /// Entropy triple of the pmf, with `0·log 0 = 0`.
    pub fn triple(&self) -> SourceTriple {
        let p = &self.probabilities;
        let row: Vec<f64> = p.iter().map(|r| r.iter().sum()).collect();
        let col: Vec<f64> = (0..p[0].len())
            .map(|j| p.iter().map(|r| r[j]).sum())
            .collect();
        let h1 = entropy(row.iter().copied());
        let h2 = entropy(col.iter().copied());
        let h12 = entropy(p.iter().flatten().copied());
        // clamp rounding below zero
        SourceTriple {
            h1_given_2: (h12 - h2).max(0.0),
            h2_given_1: (h12 - h1).max(0.0),
            common: (h1 + h2 - h12).max(0.0),
        }
    }
}

pub fn triple_from_pmf(pmf: &JointPmf) -> SourceTriple {
    pmf.triple()
}

fn entropy(p: impl Iterator<Item = f64>) -> f64 {
    -p.filter(|&x| x > 0.0).map(|x| x * x.log2()).sum::<f64>()
}

/// Outcome of the Slepian–Wolf check for a rate pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SlepianWolf {
    pub feasible: bool,
    /// `r1 − H(S1|S2)`
    pub slack1: f64,
    /// `r2 − H(S2|S1)`
    pub slack2: f64,
    /// `r1 + r2 − H(S1,S2)`
    pub slack_sum: f64,
}

/// Lossless distributed source coding region test (non-strict).
pub fn slepian_wolf_feasible(triple: &SourceTriple, r1: f64, r2: f64) -> SlepianWolf {
    let slack1 = r1 - triple.h1_given_2;
    let slack2 = r2 - triple.h2_given_1;
    let slack_sum = r1 + r2 - triple.joint();
    SlepianWolf {
        feasible: slack1 >= 0.0 && slack2 >= 0.0 && slack_sum >= 0.0,
        slack1,
        slack2,
        slack_sum,
    }
}
