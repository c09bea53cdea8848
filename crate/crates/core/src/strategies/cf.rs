//! Separate source coding followed by compress-forward over the MAC with
//! feedback.
//!
//! Node `i` sends `X_i = √pu_i·U_i + √pv_i·V_i`, where `U_i` carries the
//! compressed version of what it overheard in the previous block and `V_i`
//! carries fresh data. The quantised observation is the test channel
//! `Ỹ_i = Y_i + Ẑ_i`, `Ẑ_i ~ N(0, ñ_i)`.

use crate::gaussian::{GaussianSystem, SystemBuilder, VarId, VariableSet};
use crate::model::{SourceTriple, Topology};

use super::{CfSplit, ConstraintEntry, ConstraintReport, StrategyError};

/// Smallest compression noise tried by [`cf_min_noise`].
pub const NOISE_FLOOR: f64 = 1e-6;
/// Largest compression noise tried by [`cf_min_noise`]; stands in for ñ → ∞.
pub const NOISE_CAP: f64 = 1e12;

pub(crate) struct CfVars {
    pub sys: GaussianSystem,
    pub u: [VarId; 2],
    pub x: [VarId; 2],
    pub y: [VarId; 3],
    pub yq: [VarId; 2],
}

pub(crate) fn build(topology: &Topology, split: &CfSplit) -> Result<CfVars, StrategyError> {
    topology.require_three_nodes()?;
    split.validate(topology)?;
    let mut b = SystemBuilder::new();
    let u1 = b.latent("U1", 1.0);
    let v1 = b.latent("V1", 1.0);
    let u2 = b.latent("U2", 1.0);
    let v2 = b.latent("V2", 1.0);
    let z: Vec<_> = (1..=3)
        .map(|t| Ok(b.latent(&format!("Z{t}"), topology.noise(t)?)))
        .collect::<Result<_, StrategyError>>()?;
    let zq1 = b.latent("Zq1", split.ntilde1);
    let zq2 = b.latent("Zq2", split.ntilde2);

    let x1 = b.combine("X1", &[(u1, split.pu1.sqrt()), (v1, split.pv1.sqrt())]);
    let x2 = b.combine("X2", &[(u2, split.pu2.sqrt()), (v2, split.pv2.sqrt())]);
    let y1 = b.combine("Y1", &[(x2, topology.gain(2, 1)?.sqrt()), (z[0], 1.0)]);
    let y2 = b.combine("Y2", &[(x1, topology.gain(1, 2)?.sqrt()), (z[1], 1.0)]);
    let y3 = b.combine(
        "Y3",
        &[
            (x1, topology.gain(1, 3)?.sqrt()),
            (x2, topology.gain(2, 3)?.sqrt()),
            (z[2], 1.0),
        ],
    );
    let yq1 = b.combine("Yq1", &[(y1, 1.0), (zq1, 1.0)]);
    let yq2 = b.combine("Yq2", &[(y2, 1.0), (zq2, 1.0)]);
    Ok(CfVars {
        sys: b.build()?,
        u: [u1.id(), u2.id()],
        x: [x1.id(), x2.id()],
        y: [y1.id(), y2.id(), y3.id()],
        yq: [yq1.id(), yq2.id()],
    })
}

/// Builds the compress-forward signal model.
pub fn cf_build(topology: &Topology, split: &CfSplit) -> Result<GaussianSystem, StrategyError> {
    Ok(build(topology, split)?.sys)
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct CfTerms {
    pub rate1: f64,
    pub rate2: f64,
    pub rate12: f64,
    pub carrier1: f64,
    pub carrier2: f64,
    pub carrier12: f64,
    pub cost1: f64,
    pub cost2: f64,
    pub cost12: f64,
}

impl CfTerms {
    pub fn compute(v: &CfVars) -> Result<Self, StrategyError> {
        let s = &v.sys;
        let mi = |a: &[VarId], b: &[VarId], c: &[VarId]| -> Result<f64, StrategyError> {
            Ok(s.mutual_info(
                &VariableSet::new(a.iter().copied()),
                &VariableSet::new(b.iter().copied()),
                &VariableSet::new(c.iter().copied()),
            )?)
        };
        let [u1, u2] = v.u;
        let [x1, x2] = v.x;
        let [y1, y2, y3] = v.y;
        let [yq1, yq2] = v.yq;
        let obs = [yq1, yq2, y3];

        let quant1 = mi(&[yq1], &[y1], &[x1, u1])?;
        let quant2 = mi(&[yq2], &[y2], &[x2, u2])?;
        let side1 = mi(&[yq1], &[y3], &[yq2, u1, u2])?;
        let side2 = mi(&[yq2], &[y3], &[yq1, u1, u2])?;
        let side12 = mi(&[yq1, yq2], &[y3], &[u1, u2])?;
        Ok(Self {
            rate1: mi(&[x1], &obs, &[u1, u2, x2])?,
            rate2: mi(&[x2], &obs, &[u1, u2, x1])?,
            rate12: mi(&[x1, x2], &obs, &[u1, u2])?,
            carrier1: mi(&[u1], &[y3], &[u2])?,
            carrier2: mi(&[u2], &[y3], &[u1])?,
            carrier12: mi(&[u1, u2], &[y3], &[])?,
            cost1: quant1 - side1,
            cost2: quant2 - side2,
            cost12: quant1 + quant2 - side12,
        })
    }

    pub fn compression_entries(&self) -> [ConstraintEntry; 3] {
        [
            ConstraintEntry::strict("CF-F1", self.cost1, self.carrier1),
            ConstraintEntry::strict("CF-F2", self.cost2, self.carrier2),
            ConstraintEntry::strict("CF-F3", self.cost12, self.carrier12),
        ]
    }

    pub fn report(&self, triple: &SourceTriple) -> ConstraintReport {
        let mut entries = vec![
            ConstraintEntry::rate("CF-R1", triple.h1_given_2, self.rate1),
            ConstraintEntry::rate("CF-R2", triple.h2_given_1, self.rate2),
            ConstraintEntry::rate("CF-R12", triple.joint(), self.rate12),
        ];
        entries.extend(self.compression_entries());
        ConstraintReport::new(entries)
    }
}

/// Rate constraints (`CF-R*`) and compression feasibility constraints
/// (`CF-F*`). For the latter, `lhs` is the net compression cost
/// `I(Ỹ;Y|X,U) − I(Ỹ;Y3|…)` and `rhs` what the `U` carriers deliver.
pub fn cf_constraints(
    topology: &Topology,
    triple: &SourceTriple,
    split: &CfSplit,
) -> Result<ConstraintReport, StrategyError> {
    Ok(CfTerms::compute(&build(topology, split)?)?.report(triple))
}

/// Outcome of [`cf_min_noise`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NoiseSearch {
    /// Smallest symmetric compression noise meeting all compression
    /// constraints, to within the requested tolerance.
    Feasible { ntilde: f64 },
    /// Not even [`NOISE_CAP`] satisfies the compression constraints.
    Infeasible,
}

impl NoiseSearch {
    pub fn ntilde(self) -> Option<f64> {
        match self {
            NoiseSearch::Feasible { ntilde } => Some(ntilde),
            NoiseSearch::Infeasible => None,
        }
    }
}

/// Smallest `ñ1 = ñ2` for which the compression constraints hold, found by
/// bisection (geometric while the bracket spans more than a factor two).
pub fn cf_min_noise(
    topology: &Topology,
    pu1: f64,
    pv1: f64,
    pu2: f64,
    pv2: f64,
    tol: f64,
) -> Result<NoiseSearch, StrategyError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(StrategyError::InvalidTolerance(tol));
    }
    let feasible = |ntilde: f64| -> Result<bool, StrategyError> {
        let split = CfSplit {
            pu1,
            pv1,
            pu2,
            pv2,
            ntilde1: ntilde,
            ntilde2: ntilde,
        };
        let terms = CfTerms::compute(&build(topology, &split)?)?;
        Ok(terms.compression_entries().iter().all(|e| e.satisfied))
    };
    if !feasible(NOISE_CAP)? {
        return Ok(NoiseSearch::Infeasible);
    }
    if feasible(NOISE_FLOOR)? {
        return Ok(NoiseSearch::Feasible {
            ntilde: NOISE_FLOOR,
        });
    }
    let (mut lo, mut hi) = (NOISE_FLOOR, NOISE_CAP);
    while hi - lo > tol {
        let mid = if hi > 2.0 * lo {
            (lo * hi).sqrt()
        } else {
            0.5 * (lo + hi)
        };
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(NoiseSearch::Feasible { ntilde: hi })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::strategies::maccc_constraints;
    use approx::assert_abs_diff_eq;

    #[test]
    fn receiver_noise_still_costs_without_cross_gain() {
        // Nothing of the partner is overheard, but compressing Y_i still
        // describes Z_i, so ñ cannot drop to the floor.
        let topo = Topology::triangle(1e6, 1.0, 1.0, 10.0).unwrap();
        let n = cf_min_noise(&topo, 5.0, 5.0, 5.0, 5.0, 1e-4)
            .unwrap()
            .ntilde()
            .unwrap();
        assert!(n > 1.0 && n < 100.0, "{n}");
        let near =
            cf_constraints(&topo, &SourceTriple::zero(), &split(5.0, 5.0, n * 0.99)).unwrap();
        assert!(!near.feasible);
    }

    fn split(pu: f64, pv: f64, ntilde: f64) -> CfSplit {
        CfSplit {
            pu1: pu,
            pv1: pv,
            pu2: pu,
            pv2: pv,
            ntilde1: ntilde,
            ntilde2: ntilde,
        }
    }

    #[test]
    fn huge_compression_noise_reduces_to_mac() {
        let topo = Topology::triangle(1.4, 1.1, 0.9, 5.0).unwrap();
        let triple = SourceTriple::new(0.3, 0.4, 0.2).unwrap();
        let cf = cf_constraints(&topo, &triple, &split(0.0, 5.0, 1e9)).unwrap();
        let mac = maccc_constraints(&topo, &triple, 5.0, 5.0).unwrap();
        for (c, m) in [("CF-R1", "MAC-1"), ("CF-R2", "MAC-2"), ("CF-R12", "MAC-3")] {
            let d = (cf.get(c).unwrap().rhs - mac.get(m).unwrap().rhs).abs();
            assert!(d < 1e-3, "{c}: {d}");
        }
        for f in ["CF-F1", "CF-F2", "CF-F3"] {
            let e = cf.get(f).unwrap();
            assert!(e.lhs.abs() < 1e-8, "{f} cost {}", e.lhs);
            assert_eq!(e.rhs, 0.0);
        }
    }

    #[test]
    fn tiny_compression_noise_breaks_feasibility() {
        let topo = Topology::equilateral(1.0, 10.0).unwrap();
        let r = cf_constraints(&topo, &SourceTriple::zero(), &split(0.0, 10.0, 1e-3)).unwrap();
        assert!(!r.get("CF-F1").unwrap().satisfied);
        assert!(r.get("CF-F1").unwrap().lhs > 1.0);
    }

    #[test]
    fn quantisation_cost_grows_as_noise_shrinks() {
        let topo = Topology::equilateral(1.0, 10.0).unwrap();
        let mut last = -1.0;
        for k in (0..8).rev() {
            let n = 10f64.powi(k - 3);
            let r = cf_constraints(&topo, &SourceTriple::zero(), &split(2.0, 8.0, n)).unwrap();
            let cost = r.get("CF-F1").unwrap().lhs;
            assert!(cost > last);
            last = cost;
        }
    }

    #[test]
    fn zero_sources_satisfy_rate_constraints() {
        let topo = Topology::equilateral(1.0, 1.0).unwrap();
        let r = cf_constraints(&topo, &SourceTriple::zero(), &split(0.0, 0.0, 1.0)).unwrap();
        for l in ["CF-R1", "CF-R2", "CF-R12"] {
            let e = r.get(l).unwrap();
            assert!(e.satisfied);
            assert_eq!(e.rhs, 0.0);
        }
    }

    #[test]
    fn observation_adds_compressed_copy() {
        // With pu = 0 only Y3 and the Ỹ copies inform X1 given X2.
        let topo = Topology::equilateral(1.0, 1.0).unwrap();
        let r = cf_constraints(&topo, &SourceTriple::zero(), &split(0.0, 1.0, 1.0)).unwrap();
        // Y3 sees X1 at SNR 1; Ỹ2 = X1 + Z2 + Zq2 at SNR 1/2.
        assert_abs_diff_eq!(
            r.get("CF-R1").unwrap().rhs,
            0.5 * 2.5f64.log2(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn invalid_inputs() {
        let topo = Topology::equilateral(1.0, 1.0).unwrap();
        assert_eq!(
            cf_build(&topo, &split(0.5, 0.5, 0.0)).unwrap_err(),
            StrategyError::NonpositiveCompressionNoise
        );
        assert!(matches!(
            cf_build(&topo, &split(0.5, 0.6, 1.0)),
            Err(StrategyError::SplitOutOfBudget(_))
        ));
        assert_eq!(
            cf_min_noise(&topo, 0.5, 0.5, 0.5, 0.5, 0.0).unwrap_err(),
            StrategyError::InvalidTolerance(0.0)
        );
    }

    #[test]
    fn no_carrier_power_needs_infinite_noise() {
        let topo = Topology::equilateral(1.0, 10.0).unwrap();
        assert_eq!(
            cf_min_noise(&topo, 0.0, 10.0, 0.0, 10.0, 1e-4).unwrap(),
            NoiseSearch::Infeasible
        );
    }

    #[test]
    fn min_noise_is_a_bracket() {
        let topo = Topology::equilateral(1.0, 10.0).unwrap();
        let tol = 1e-4;
        let n = cf_min_noise(&topo, 5.0, 5.0, 5.0, 5.0, tol)
            .unwrap()
            .ntilde()
            .unwrap();
        let ok = |n: f64| {
            cf_constraints(&topo, &SourceTriple::zero(), &split(5.0, 5.0, n))
                .unwrap()
                .entries
                .iter()
                .filter(|e| e.label.starts_with("CF-F"))
                .all(|e| e.satisfied)
        };
        assert!(ok(n));
        assert!(!ok(n - tol));
    }
}
