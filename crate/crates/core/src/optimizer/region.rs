use serde::Serialize;

use crate::model::{SourceTriple, Topology};
use crate::strategies::{Strategy, StrategyPoint};

use super::{feasible_split, upper_right_hull, OptimizerError, SearchConfig};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionPoint {
    pub r1: f64,
    pub r2: f64,
    pub strategy: Strategy,
    pub parameters: Option<StrategyPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Region {
    pub points: Vec<RegionPoint>,
    pub hull: Vec<(f64, f64)>,
}

/// Traces the boundary of the pairs `(r1, r2)` the strategy can deliver.
///
/// A pair is achievable when the source triple `(r1, r2, common)` is
/// feasible, so with `common = 0` this is the channel rate region that
/// Slepian–Wolf rates must fall inside. Boundary points are found by
/// bisection along `resolution` rays spread over the first quadrant.
pub fn region(
    strategy: Strategy,
    topology: &Topology,
    powers: [f64; 2],
    resolution: usize,
    common: f64,
    config: &SearchConfig,
) -> Result<Region, OptimizerError> {
    config.validate()?;
    if resolution < 2 {
        return Err(OptimizerError::InvalidConfig(
            "region resolution must be at least 2".into(),
        ));
    }
    let base = SourceTriple::new(0.0, 0.0, common)?;
    let reach = rate_ceiling(topology, powers)?;

    let mut points: Vec<RegionPoint> = Vec::new();
    for k in 0..resolution {
        let theta = std::f64::consts::FRAC_PI_2 * k as f64 / (resolution - 1) as f64;
        let dir = (snap(theta.cos()), snap(theta.sin()));
        let at = |t: f64| SourceTriple {
            h1_given_2: t * dir.0,
            h2_given_1: t * dir.1,
            common: base.common,
        };
        let Some(mut witness) = feasible_split(strategy, topology, &at(0.0), powers, config)?
        else {
            continue;
        };
        let (mut lo, mut hi) = (0.0, reach);
        while hi - lo > config.bisection_tol {
            let mid = 0.5 * (lo + hi);
            match feasible_split(strategy, topology, &at(mid), powers, config)? {
                Some(p) => {
                    lo = mid;
                    witness = p;
                }
                None => hi = mid,
            }
        }
        let p = RegionPoint {
            r1: lo * dir.0,
            r2: lo * dir.1,
            strategy,
            parameters: Some(witness),
        };
        if !points.iter().any(|q| q.r1 == p.r1 && q.r2 == p.r2) {
            points.push(p);
        }
    }
    let raw: Vec<(f64, f64)> = points.iter().map(|p| (p.r1, p.r2)).collect();
    let hull = if raw.is_empty() {
        Vec::new()
    } else {
        upper_right_hull(&raw)
    };
    Ok(Region { points, hull })
}

fn snap(v: f64) -> f64 {
    if v.abs() < 1e-12 {
        0.0
    } else {
        v
    }
}

/// Upper bound on any single rate: the destination cut with fully
/// coherent transmission, plus one bit of headroom.
fn rate_ceiling(topology: &Topology, powers: [f64; 2]) -> Result<f64, OptimizerError> {
    let amp = (topology.gain(1, 3)? * powers[0]).sqrt() + (topology.gain(2, 3)? * powers[1]).sqrt();
    Ok(0.5 * (1.0 + amp * amp / topology.noise(3)?).log2() + 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimizer::dominated_by_hull;

    #[test]
    fn mac_region_is_the_pentagon() {
        let topo = Topology::triangle(1.0, 1.0, 1.4, 4.0).unwrap();
        let cfg = SearchConfig {
            bisection_tol: 1e-6,
            ..SearchConfig::default()
        };
        let reg = region(Strategy::Maccc, &topo, [4.0, 4.0], 9, 0.0, &cfg).unwrap();
        let g13 = topo.gain(1, 3).unwrap();
        let g23 = topo.gain(2, 3).unwrap();
        let c1 = 0.5 * (1.0 + 4.0 * g13).log2();
        let c2 = 0.5 * (1.0 + 4.0 * g23).log2();
        let c12 = 0.5 * (1.0 + 4.0 * (g13 + g23)).log2();
        assert_eq!(reg.points.len(), 9);
        for p in &reg.points {
            assert!(p.r1 <= c1 && p.r2 <= c2 && p.r1 + p.r2 <= c12);
            let gap = (c1 - p.r1).min(c2 - p.r2).min(c12 - p.r1 - p.r2);
            assert!(gap < 1e-5, "point {:?} is {gap} inside", (p.r1, p.r2));
        }
        for p in &reg.points {
            assert!(dominated_by_hull(&reg.hull, (p.r1, p.r2), 1e-12));
        }
    }

    #[test]
    fn zero_power_region_is_the_origin() {
        let topo = Topology::equilateral(1.0, 0.0).unwrap();
        let reg = region(
            Strategy::Maccc,
            &topo,
            [0.0, 0.0],
            5,
            0.0,
            &SearchConfig::default(),
        )
        .unwrap();
        assert_eq!(reg.points.len(), 1);
        assert_eq!((reg.points[0].r1, reg.points[0].r2), (0.0, 0.0));
        assert_eq!(reg.hull, vec![(0.0, 0.0)]);
    }

    #[test]
    fn resolution_must_be_two() {
        let topo = Topology::equilateral(1.0, 1.0).unwrap();
        assert!(region(
            Strategy::Maccc,
            &topo,
            [1.0, 1.0],
            1,
            0.0,
            &SearchConfig::default()
        )
        .is_err());
    }
}
