//! Separate source coding followed by ordinary MAC coding; the sources
//! ignore their feedback and send independent signals.

use crate::gaussian::{GaussianSystem, SystemBuilder, VariableSet};
use crate::model::{SourceTriple, Topology};

use super::{ConstraintEntry, ConstraintReport, StrategyError, BUDGET_TOLERANCE};

pub fn maccc_build(topology: &Topology, p1: f64, p2: f64) -> Result<GaussianSystem, StrategyError> {
    topology.require_three_nodes()?;
    let limits = topology.power_limits();
    for (i, p) in [p1, p2].into_iter().enumerate() {
        if !(p >= 0.0 && p <= limits[i] * (1.0 + BUDGET_TOLERANCE) + BUDGET_TOLERANCE) {
            return Err(StrategyError::SplitOutOfBudget(format!(
                "node {} power {p} outside [0, {}]",
                i + 1,
                limits[i]
            )));
        }
    }
    let mut b = SystemBuilder::new();
    let x1 = b.latent("X1", p1);
    let x2 = b.latent("X2", p2);
    let z3 = b.latent("Z3", topology.noise(3)?);
    b.combine(
        "Y3",
        &[
            (x1, topology.gain(1, 3)?.sqrt()),
            (x2, topology.gain(2, 3)?.sqrt()),
            (z3, 1.0),
        ],
    );
    Ok(b.build()?)
}

/// MAC constraints `H(S1|S2) < I(X1;Y3|X2)`, `H(S2|S1) < I(X2;Y3|X1)`,
/// `H(S1,S2) < I(X1,X2;Y3)` with independent Gaussian inputs of power
/// `p1`, `p2`.
pub fn maccc_constraints(
    topology: &Topology,
    triple: &SourceTriple,
    p1: f64,
    p2: f64,
) -> Result<ConstraintReport, StrategyError> {
    let sys = maccc_build(topology, p1, p2)?;
    let x1 = VariableSet::from(sys.id("X1")?);
    let x2 = VariableSet::from(sys.id("X2")?);
    let y3 = VariableSet::from(sys.id("Y3")?);
    let both = VariableSet::new(x1.ids().iter().chain(x2.ids()).copied());
    Ok(ConstraintReport::new(vec![
        ConstraintEntry::rate("MAC-1", triple.h1_given_2, sys.mutual_info(&x1, &y3, &x2)?),
        ConstraintEntry::rate("MAC-2", triple.h2_given_1, sys.mutual_info(&x2, &y3, &x1)?),
        ConstraintEntry::rate(
            "MAC-3",
            triple.joint(),
            sys.mutual_info(&both, &y3, &VariableSet::empty())?,
        ),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn unit_power_is_not_enough() {
        let topo = Topology::equilateral(1.0, 10.0).unwrap();
        let triple = SourceTriple::new(0.5, 0.5, 0.5).unwrap();
        let r = maccc_constraints(&topo, &triple, 1.0, 1.0).unwrap();
        assert!(!r.feasible);
        assert_abs_diff_eq!(
            r.get("MAC-3").unwrap().rhs,
            0.5 * 3f64.log2(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn ten_units_suffice() {
        let topo = Topology::equilateral(1.0, 10.0).unwrap();
        let triple = SourceTriple::new(0.5, 0.5, 0.5).unwrap();
        let r = maccc_constraints(&topo, &triple, 10.0, 10.0).unwrap();
        assert!(r.feasible);
        assert_abs_diff_eq!(
            r.get("MAC-1").unwrap().rhs,
            0.5 * 11f64.log2(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(r.get("MAC-1").unwrap().rhs, 1.7297, epsilon = 1e-4);
        assert_abs_diff_eq!(
            r.get("MAC-3").unwrap().rhs,
            0.5 * 21f64.log2(),
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(r.get("MAC-3").unwrap().rhs, 2.1962, epsilon = 1e-4);
    }

    #[test]
    fn zero_sources_at_zero_power() {
        let topo = Topology::equilateral(1.0, 0.0).unwrap();
        let r = maccc_constraints(&topo, &SourceTriple::zero(), 0.0, 0.0).unwrap();
        assert!(r.feasible);
        assert!(r.entries.iter().all(|e| e.rhs == 0.0));
    }

    #[test]
    fn power_above_limit_is_rejected() {
        let topo = Topology::equilateral(1.0, 1.0).unwrap();
        assert!(maccc_constraints(&topo, &SourceTriple::zero(), 1.5, 1.0).is_err());
    }
}
