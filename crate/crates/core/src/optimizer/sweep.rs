use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::model::{SourceTriple, Topology};
use crate::strategies::{cf_constraints, cf_min_noise, CfSplit, Strategy, StrategyPoint};

use super::{min_power, Objective, OptimizerError, SearchConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweptParameter {
    /// Distance between the two sources.
    D12,
    /// Both source–destination distances, set equal.
    D13D23,
    /// The common part `I(S1;S2)` of the source triple.
    Common,
    /// Share of each source's power on the compressed-observation carrier
    /// (compress-forward only); reports the smallest compression noise.
    PuFraction,
}

impl SweptParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweptParameter::D12 => "d12",
            SweptParameter::D13D23 => "d13_d23",
            SweptParameter::Common => "common",
            SweptParameter::PuFraction => "pu_fraction",
        }
    }
}

impl fmt::Display for SweptParameter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweptParameter {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            SweptParameter::D12,
            SweptParameter::D13D23,
            SweptParameter::Common,
            SweptParameter::PuFraction,
        ]
        .into_iter()
        .find(|p| p.name() == s)
        .ok_or_else(|| format!("unknown swept parameter `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub strategy: Strategy,
    /// `P*` for power sweeps, `ñ*` for `pu_fraction`; `None` when the cap
    /// was hit.
    pub metric: Option<f64>,
    /// Compress-forward rate bounds `(R1, R2, R1+R2)` at `ñ*`
    /// (`pu_fraction` sweeps only).
    pub rates: Option<[f64; 3]>,
    pub witness: Option<StrategyPoint>,
}

/// One row per `(value, strategy)`, values outermost.
pub fn sweep(
    strategies: &[Strategy],
    template: &Topology,
    parameter: SweptParameter,
    values: &[f64],
    triple: &SourceTriple,
    objective: Objective,
    config: &SearchConfig,
) -> Result<Vec<SweepRow>, OptimizerError> {
    config.validate()?;
    for &v in values {
        let ok = match parameter {
            SweptParameter::D12 | SweptParameter::D13D23 => v > 0.0 && v.is_finite(),
            SweptParameter::Common => v >= 0.0 && v.is_finite(),
            SweptParameter::PuFraction => (0.0..=1.0).contains(&v),
        };
        if !ok {
            return Err(OptimizerError::InvalidSweep(format!(
                "value {v} is not valid for {parameter}"
            )));
        }
    }
    if parameter == SweptParameter::PuFraction && strategies.iter().any(|&s| s != Strategy::Cf) {
        return Err(OptimizerError::InvalidSweep(
            "pu_fraction applies to the cf strategy only".into(),
        ));
    }

    let mut rows = Vec::with_capacity(values.len() * strategies.len());
    for &value in values {
        let mut topology = template.clone();
        let mut triple = *triple;
        match parameter {
            SweptParameter::D12 => topology = topology.with_distance(1, 2, value)?,
            SweptParameter::D13D23 => {
                topology = topology
                    .with_distance(1, 3, value)?
                    .with_distance(2, 3, value)?
            }
            SweptParameter::Common => triple.common = value,
            SweptParameter::PuFraction => {
                rows.push(noise_row(&topology, value, config)?);
                continue;
            }
        }
        for &strategy in strategies {
            let row = match min_power(strategy, &topology, &triple, objective, config) {
                Ok(r) => SweepRow {
                    value,
                    strategy,
                    metric: Some(r.p_star),
                    rates: None,
                    witness: r.witness,
                },
                Err(OptimizerError::CapExceeded { .. }) => SweepRow {
                    value,
                    strategy,
                    metric: None,
                    rates: None,
                    witness: None,
                },
                Err(e) => return Err(e),
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

fn noise_row(
    topology: &Topology,
    fraction: f64,
    config: &SearchConfig,
) -> Result<SweepRow, OptimizerError> {
    let limits = topology.power_limits();
    let (pu1, pu2) = (fraction * limits[0], fraction * limits[1]);
    let (pv1, pv2) = (limits[0] - pu1, limits[1] - pu2);
    let found = cf_min_noise(topology, pu1, pv1, pu2, pv2, config.bisection_tol)?;
    let Some(ntilde) = found.ntilde() else {
        return Ok(SweepRow {
            value: fraction,
            strategy: Strategy::Cf,
            metric: None,
            rates: None,
            witness: None,
        });
    };
    let split = CfSplit {
        pu1,
        pv1,
        pu2,
        pv2,
        ntilde1: ntilde,
        ntilde2: ntilde,
    };
    let report = cf_constraints(topology, &SourceTriple::zero(), &split)?;
    let rhs = |l: &str| report.get(l).map_or(0.0, |e| e.rhs);
    Ok(SweepRow {
        value: fraction,
        strategy: Strategy::Cf,
        metric: Some(ntilde),
        rates: Some([rhs("CF-R1"), rhs("CF-R2"), rhs("CF-R12")]),
        witness: Some(StrategyPoint::Cf(split)),
    })
}
