//! Full decoding at the sources (decode-forward).
//!
//! Each node superposes the cooperative codewords `W0` (common part),
//! `W1`, `W2` (the two private parts of the previous block) on its fresh
//! signal `V_i`. Both nodes send the same `W_k` latents, so their
//! contributions add in amplitude at the destination.

use crate::gaussian::{GaussianSystem, SystemBuilder, VarId, VariableSet};
use crate::model::{SourceTriple, Topology};

use super::{
    check_average_power, ConstraintEntry, ConstraintReport, DfPoint, DfSplit, StrategyError,
    TimeShareMixture,
};

pub(crate) struct DfVars {
    pub sys: GaussianSystem,
    pub w: [VarId; 3],
    pub x1: VarId,
    pub x2: VarId,
    pub y1: VarId,
    pub y2: VarId,
    pub y3: VarId,
}

pub(crate) fn build(
    topology: &Topology,
    powers: [f64; 2],
    split: &DfSplit,
) -> Result<DfVars, StrategyError> {
    topology.require_three_nodes()?;
    split.validate()?;
    if powers.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
        return Err(StrategyError::SplitOutOfBudget("negative power".into()));
    }
    let mut b = SystemBuilder::new();
    let w = [
        b.latent("W0", 1.0),
        b.latent("W1", 1.0),
        b.latent("W2", 1.0),
    ];
    let v1 = b.latent("V1", 1.0);
    let v2 = b.latent("V2", 1.0);
    let z: Vec<_> = (1..=3)
        .map(|t| Ok(b.latent(&format!("Z{t}"), topology.noise(t)?)))
        .collect::<Result<_, StrategyError>>()?;

    let amp = |p: f64, f: f64| (p * f).sqrt();
    let (a, bt) = (&split.alpha, &split.beta);
    let x1 = b.combine(
        "X1",
        &[
            (w[0], amp(powers[0], a[0])),
            (w[1], amp(powers[0], a[1])),
            (w[2], amp(powers[0], a[2])),
            (v1, amp(powers[0], a[3])),
        ],
    );
    let x2 = b.combine(
        "X2",
        &[
            (w[0], amp(powers[1], bt[0])),
            (w[1], amp(powers[1], bt[1])),
            (w[2], amp(powers[1], bt[2])),
            (v2, amp(powers[1], bt[3])),
        ],
    );
    // Sources hear only the other source; their own echo is cancelled.
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
    Ok(DfVars {
        sys: b.build()?,
        w: [w[0].id(), w[1].id(), w[2].id()],
        x1: x1.id(),
        x2: x2.id(),
        y1: y1.id(),
        y2: y2.id(),
        y3: y3.id(),
    })
}

/// Builds the decode-forward signal model with each node at its power limit.
pub fn df_build(topology: &Topology, split: &DfSplit) -> Result<GaussianSystem, StrategyError> {
    let limits = topology.power_limits();
    df_build_with_powers(topology, [limits[0], limits[1]], split)
}

pub fn df_build_with_powers(
    topology: &Topology,
    powers: [f64; 2],
    split: &DfSplit,
) -> Result<GaussianSystem, StrategyError> {
    Ok(build(topology, powers, split)?.sys)
}

/// Mutual-information terms appearing in the decode-forward constraints.
/// `to_node1` / `to_node2` are the inter-source terms; all others are
/// observed at the destination.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub(crate) struct DfTerms {
    pub x12: f64,
    pub to_node2: f64,
    pub to_node1: f64,
    pub w1: f64,
    pub x1: f64,
    pub w2: f64,
    pub x2: f64,
    pub w0: f64,
    pub w0w1: f64,
    pub w0w2: f64,
    pub w1w2: f64,
    pub x12_given_w: f64,
}

impl DfTerms {
    pub fn compute(v: &DfVars) -> Result<Self, StrategyError> {
        let s = &v.sys;
        let [w0, w1, w2] = v.w;
        let mi = |a: &[VarId], b: &[VarId], c: &[VarId]| -> Result<f64, StrategyError> {
            Ok(s.mutual_info(
                &VariableSet::new(a.iter().copied()),
                &VariableSet::new(b.iter().copied()),
                &VariableSet::new(c.iter().copied()),
            )?)
        };
        let y3 = [v.y3];
        Ok(Self {
            x12: mi(&[v.x1, v.x2], &y3, &[])?,
            to_node2: mi(&[v.x1], &[v.y2], &[w0, w1, w2, v.x2])?,
            to_node1: mi(&[v.x2], &[v.y1], &[w0, w1, w2, v.x1])?,
            w1: mi(&[w1], &y3, &[w0, w2])?,
            x1: mi(&[v.x1], &y3, &[w0, w1, w2, v.x2])?,
            w2: mi(&[w2], &y3, &[w0, w1])?,
            x2: mi(&[v.x2], &y3, &[w0, w1, w2, v.x1])?,
            w0: mi(&[w0], &y3, &[w1, w2])?,
            w0w1: mi(&[w0, w1], &y3, &[w2])?,
            w0w2: mi(&[w0, w2], &y3, &[w1])?,
            w1w2: mi(&[w1, w2], &y3, &[w0])?,
            x12_given_w: mi(&[v.x1, v.x2], &y3, &[w0, w1, w2])?,
        })
    }

    /// Keeps only what the other source hears.
    pub fn inter_source_only(self) -> Self {
        Self {
            to_node1: self.to_node1,
            to_node2: self.to_node2,
            ..Self::default()
        }
    }

    pub fn add_scaled(&mut self, w: f64, o: &Self) {
        self.x12 += w * o.x12;
        self.to_node2 += w * o.to_node2;
        self.to_node1 += w * o.to_node1;
        self.w1 += w * o.w1;
        self.x1 += w * o.x1;
        self.w2 += w * o.w2;
        self.x2 += w * o.x2;
        self.w0 += w * o.w0;
        self.w0w1 += w * o.w0w1;
        self.w0w2 += w * o.w0w2;
        self.w1w2 += w * o.w1w2;
        self.x12_given_w += w * o.x12_given_w;
    }

    pub fn report(&self, triple: &SourceTriple) -> ConstraintReport {
        let h12 = triple.h1_given_2;
        let h21 = triple.h2_given_1;
        ConstraintReport::new(vec![
            ConstraintEntry::rate("DF-1", triple.joint(), self.x12),
            ConstraintEntry::rate("DF-2a", h12, self.to_node2),
            ConstraintEntry::rate("DF-2b", h12, self.w1 + self.x1),
            ConstraintEntry::rate("DF-3a", h21, self.to_node1),
            ConstraintEntry::rate("DF-3b", h21, self.w2 + self.x2),
            ConstraintEntry::rate("DF-4", triple.common, self.w0),
            ConstraintEntry::rate("DF-5", triple.h1(), self.w0w1 + self.x1),
            ConstraintEntry::rate("DF-6", triple.h2(), self.w0w2 + self.x2),
            ConstraintEntry::rate("DF-7", h12 + h21, self.w1w2 + self.x12_given_w),
        ])
    }
}

pub(crate) fn terms_at(topology: &Topology, point: &DfPoint) -> Result<DfTerms, StrategyError> {
    DfTerms::compute(&build(topology, point.powers, &point.split)?)
}

/// Decode-forward constraints with both nodes at their power limits.
pub fn df_constraints(
    topology: &Topology,
    triple: &SourceTriple,
    split: &DfSplit,
) -> Result<ConstraintReport, StrategyError> {
    let limits = topology.power_limits();
    let point = DfPoint {
        powers: [limits[0], limits[1]],
        split: *split,
    };
    df_constraints_mixture(topology, triple, &TimeShareMixture::singleton(point))
}

/// Decode-forward constraints under time sharing: every mutual-information
/// term is the weight average of its per-component value, and the average
/// transmit power of each node must respect its limit.
pub fn df_constraints_mixture(
    topology: &Topology,
    triple: &SourceTriple,
    mixture: &TimeShareMixture<DfPoint>,
) -> Result<ConstraintReport, StrategyError> {
    check_average_power(topology, mixture)?;
    let mut avg = DfTerms::default();
    for (w, point) in &mixture.components {
        if *w == 0.0 {
            continue;
        }
        avg.add_scaled(*w, &terms_at(topology, point)?);
    }
    Ok(avg.report(triple))
}
