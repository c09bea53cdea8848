//! Three-phase half-duplex schedule built from the decode-forward terms.
//!
//! Phase 0: node 1 alone sends fresh data. Phase 1: node 2 alone sends
//! fresh data. Phase 2: both nodes send only cooperative codewords, so
//! their signals are deterministic functions of `W0`, `W1`, `W2`.

use crate::model::{SourceTriple, Topology};

use super::df::{terms_at, DfTerms};
use super::{check_average_power, ConstraintReport, DfPoint, StrategyError, TimeShareMixture};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TdmaPhase {
    Node1,
    Node2,
    Joint,
}

impl TdmaPhase {
    pub const ORDER: [TdmaPhase; 3] = [TdmaPhase::Node1, TdmaPhase::Node2, TdmaPhase::Joint];

    fn check(self, point: &DfPoint) -> Result<(), String> {
        let a = &point.split.alpha;
        let b = &point.split.beta;
        let silent = |f: &[f64; 4], p: f64| p == 0.0 || f.iter().all(|&x| x == 0.0);
        match self {
            TdmaPhase::Node1 => {
                if a[..3].iter().any(|&x| x != 0.0) {
                    return Err("phase 0 must not carry cooperative codewords".into());
                }
                if !silent(b, point.powers[1]) {
                    return Err("node 2 must be silent in phase 0".into());
                }
            }
            TdmaPhase::Node2 => {
                if b[..3].iter().any(|&x| x != 0.0) {
                    return Err("phase 1 must not carry cooperative codewords".into());
                }
                if !silent(a, point.powers[0]) {
                    return Err("node 1 must be silent in phase 1".into());
                }
            }
            TdmaPhase::Joint => {
                if a[3] != 0.0 || b[3] != 0.0 {
                    return Err(
                        "phase 2 signals must be functions of the cooperative codewords".into(),
                    );
                }
            }
        }
        Ok(())
    }
}

/// Decode-forward constraints for the three-phase schedule.
///
/// With `destination_decodes_all_phases` the destination uses its
/// observations from every phase; otherwise it only listens in the joint
/// phase and the single-node phases contribute just the inter-source terms.
pub fn tdma_df_constraints(
    topology: &Topology,
    triple: &SourceTriple,
    mixture: &TimeShareMixture<DfPoint>,
    destination_decodes_all_phases: bool,
) -> Result<ConstraintReport, StrategyError> {
    if mixture.components.len() != 3 {
        return Err(StrategyError::BadPhaseStructure(format!(
            "expected 3 phases, got {}",
            mixture.components.len()
        )));
    }
    for (phase, (_, point)) in TdmaPhase::ORDER.iter().zip(&mixture.components) {
        phase
            .check(point)
            .map_err(StrategyError::BadPhaseStructure)?;
    }
    check_average_power(topology, mixture)?;

    let mut avg = DfTerms::default();
    for (phase, (w, point)) in TdmaPhase::ORDER.iter().zip(&mixture.components) {
        if *w == 0.0 {
            continue;
        }
        let mut terms = terms_at(topology, point)?;
        if !destination_decodes_all_phases && *phase != TdmaPhase::Joint {
            terms = terms.inter_source_only();
        }
        avg.add_scaled(*w, &terms);
    }
    Ok(avg.report(triple))
}
