use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::model::{SourceTriple, Topology};
use crate::strategies::{CfSplit, DfPoint, DfSplit, Strategy, StrategyPoint, TimeShareMixture};

use super::{OptimizerError, SearchConfig};

/// Searches the strategy's free parameters for a point whose constraint
/// report is feasible when the nodes may use at most `powers`.
///
/// `Ok(None)` means the search budget ran out; it is not a proof of
/// infeasibility. Identical inputs give identical results.
pub fn feasible_split(
    strategy: Strategy,
    topology: &Topology,
    triple: &SourceTriple,
    powers: [f64; 2],
    config: &SearchConfig,
) -> Result<Option<StrategyPoint>, OptimizerError> {
    let (point, feasible) = best_split(strategy, topology, triple, powers, config)?;
    Ok(feasible.then_some(point))
}

/// Like [`feasible_split`] but always returns the best point found (largest
/// worst-case slack) together with whether it is feasible.
pub fn best_split(
    strategy: Strategy,
    topology: &Topology,
    triple: &SourceTriple,
    powers: [f64; 2],
    config: &SearchConfig,
) -> Result<(StrategyPoint, bool), OptimizerError> {
    config.validate()?;
    let topology = topology.with_power_limits(powers.to_vec())?;
    let space: Box<dyn Space> = match strategy {
        Strategy::Maccc => {
            let point = StrategyPoint::Maccc { powers };
            let report = point.evaluate(&topology, triple)?;
            return Ok((point, report.feasible));
        }
        Strategy::Df => Box::new(DfSpace { powers }),
        Strategy::Cf => Box::new(CfSpace { powers }),
        Strategy::TdmaDf => Box::new(TdmaSpace {
            powers,
            all_phases: config.tdma_destination_decodes_all_phases,
        }),
    };
    let search = Search {
        space: space.as_ref(),
        topology: &topology,
        triple,
    };
    Ok(search.run(config))
}

/// Maps the unit box onto a strategy's parameter set.
trait Space: Sync {
    fn dim(&self) -> usize;
    fn point(&self, x: &[f64]) -> StrategyPoint;
    fn grid(&self, resolution: usize) -> Vec<Vec<f64>>;
}

struct Search<'a> {
    space: &'a dyn Space,
    topology: &'a Topology,
    triple: &'a SourceTriple,
}

#[derive(Clone)]
struct Candidate {
    x: Vec<f64>,
    score: f64,
}

impl Search<'_> {
    fn score(&self, x: &[f64]) -> f64 {
        match self.space.point(x).evaluate(self.topology, self.triple) {
            Ok(r) if r.feasible => r.margin().max(f64::MIN_POSITIVE),
            Ok(r) => r.margin().min(0.0),
            Err(_) => f64::NEG_INFINITY,
        }
    }

    fn run(&self, config: &SearchConfig) -> (StrategyPoint, bool) {
        let grid = self.space.grid(config.grid_resolution);
        let scored: Vec<Candidate> = grid
            .into_par_iter()
            .map(|x| {
                let score = self.score(&x);
                Candidate { x, score }
            })
            .collect();
        let grid_best = best_of(&scored).cloned();
        if let Some(best) = &grid_best {
            if best.score > 0.0 {
                return (self.space.point(&best.x), true);
            }
        }

        let mut ranked: Vec<usize> = (0..scored.len()).collect();
        ranked.sort_by(|&a, &b| scored[b].score.total_cmp(&scored[a].score).then(a.cmp(&b)));
        let mut starts: Vec<Vec<f64>> = ranked
            .iter()
            .take(config.multistarts)
            .map(|&i| scored[i].x.clone())
            .collect();
        let dim = self.space.dim();
        starts.extend((0..config.multistarts).map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(config.rng_seed);
            rng.set_stream(k as u64 + 1);
            (0..dim).map(|_| rng.gen::<f64>()).collect()
        }));

        let refined: Vec<Candidate> = starts
            .into_par_iter()
            .map(|x| self.refine(x, config.refine_iterations))
            .collect();
        let mut pool = refined;
        pool.extend(grid_best);
        let best = best_of(&pool).expect("at least one start");
        (self.space.point(&best.x), best.score > 0.0)
    }

    /// Coordinate descent on the worst slack; stops as soon as feasible.
    fn refine(&self, mut x: Vec<f64>, iterations: usize) -> Candidate {
        let mut score = self.score(&x);
        let mut step = 0.25;
        for _ in 0..iterations {
            if score > 0.0 || step < 1e-7 {
                break;
            }
            let mut improved = false;
            for j in 0..x.len() {
                for dir in [1.0, -1.0] {
                    let mut trial = x.clone();
                    trial[j] = (trial[j] + dir * step).clamp(0.0, 1.0);
                    if trial[j] == x[j] {
                        continue;
                    }
                    let s = self.score(&trial);
                    if s > score {
                        x = trial;
                        score = s;
                        improved = true;
                        break;
                    }
                }
                if score > 0.0 {
                    break;
                }
            }
            if !improved {
                step *= 0.5;
            }
        }
        Candidate { x, score }
    }
}

/// Highest score, lowest index on ties.
fn best_of(c: &[Candidate]) -> Option<&Candidate> {
    c.iter()
        .enumerate()
        .max_by(|(i, a), (j, b)| a.score.total_cmp(&b.score).then(j.cmp(i)))
        .map(|(_, c)| c)
}

/// Scales `w` down onto the simplex `Σ ≤ 1` if needed.
fn sub_simplex<const N: usize>(w: &[f64]) -> [f64; N] {
    let s: f64 = w.iter().sum();
    let mut out = [0.0; N];
    for (o, &v) in out.iter_mut().zip(w) {
        *o = if s > 1.0 { v / s } else { v };
    }
    out
}

/// Normalises onto `Σ = 1`; an all-zero vector becomes the first vertex.
fn simplex<const N: usize>(w: &[f64]) -> [f64; N] {
    let s: f64 = w.iter().sum();
    let mut out = [0.0; N];
    if s <= 0.0 {
        out[0] = 1.0;
        return out;
    }
    for (o, &v) in out.iter_mut().zip(w) {
        *o = v / s;
    }
    out
}

/// All compositions of `resolution` into `parts` nonnegative integers,
/// scaled to fractions.
fn simplex_grid(parts: usize, resolution: usize) -> Vec<Vec<f64>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(left - k, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut raw = Vec::new();
    rec(resolution, parts, &mut Vec::new(), &mut raw);
    raw.into_iter()
        .map(|c| {
            c.into_iter()
                .map(|k| k as f64 / resolution as f64)
                .collect()
        })
        .collect()
}

struct DfSpace {
    powers: [f64; 2],
}

impl Space for DfSpace {
    fn dim(&self) -> usize {
        8
    }

    fn point(&self, x: &[f64]) -> StrategyPoint {
        StrategyPoint::Df(DfPoint {
            powers: self.powers,
            split: DfSplit {
                alpha: sub_simplex(&x[..4]),
                beta: sub_simplex(&x[4..]),
            },
        })
    }

    fn grid(&self, resolution: usize) -> Vec<Vec<f64>> {
        let node = simplex_grid(4, resolution);
        let mut out = Vec::with_capacity(node.len() * node.len());
        for a in &node {
            for b in &node {
                out.push(a.iter().chain(b).copied().collect());
            }
        }
        out
    }
}

struct CfSpace {
    powers: [f64; 2],
}

impl CfSpace {
    /// Fourth power concentrates resolution near small carrier powers,
    /// where compress-forward is closest to plain MAC coding.
    fn carrier(&self, node: usize, x: f64) -> (f64, f64) {
        let p = self.powers[node];
        let pu = p * x.powi(4);
        (pu, (p - pu).max(0.0))
    }

    fn noise(x: f64) -> f64 {
        10f64.powf(-3.0 + 15.0 * x)
    }
}

impl Space for CfSpace {
    fn dim(&self) -> usize {
        4
    }

    fn point(&self, x: &[f64]) -> StrategyPoint {
        let (pu1, pv1) = self.carrier(0, x[0]);
        let (pu2, pv2) = self.carrier(1, x[1]);
        StrategyPoint::Cf(CfSplit {
            pu1,
            pv1,
            pu2,
            pv2,
            ntilde1: Self::noise(x[2]),
            ntilde2: Self::noise(x[3]),
        })
    }

    fn grid(&self, resolution: usize) -> Vec<Vec<f64>> {
        let carriers: Vec<f64> = (1..=resolution)
            .map(|k| k as f64 / resolution as f64)
            .collect();
        let noises = 3 * resolution;
        let mut out = Vec::new();
        for &a in &carriers {
            for &b in &carriers {
                for k in 0..=noises {
                    let l = k as f64 / noises as f64;
                    out.push(vec![a, b, l, l]);
                }
            }
        }
        out
    }
}

struct TdmaSpace {
    powers: [f64; 2],
    all_phases: bool,
}

impl Space for TdmaSpace {
    fn dim(&self) -> usize {
        11
    }

    fn point(&self, x: &[f64]) -> StrategyPoint {
        let q: [f64; 3] = simplex(&x[..3]);
        let (e1, e2) = (x[3], x[4]);
        let coop1: [f64; 3] = simplex(&x[5..8]);
        let coop2: [f64; 3] = simplex(&x[8..11]);
        let per_phase = |energy: f64, weight: f64| if weight > 0.0 { energy / weight } else { 0.0 };
        let [p1, p2] = self.powers;
        let solo1 = DfPoint {
            powers: [per_phase(e1 * p1, q[0]), 0.0],
            split: DfSplit {
                alpha: [0.0, 0.0, 0.0, 1.0],
                beta: [0.0; 4],
            },
        };
        let solo2 = DfPoint {
            powers: [0.0, per_phase(e2 * p2, q[1])],
            split: DfSplit {
                alpha: [0.0; 4],
                beta: [0.0, 0.0, 0.0, 1.0],
            },
        };
        let joint = DfPoint {
            powers: [
                per_phase((1.0 - e1) * p1, q[2]),
                per_phase((1.0 - e2) * p2, q[2]),
            ],
            split: DfSplit {
                alpha: [coop1[0], coop1[1], coop1[2], 0.0],
                beta: [coop2[0], coop2[1], coop2[2], 0.0],
            },
        };
        StrategyPoint::TdmaDf {
            mixture: TimeShareMixture {
                components: vec![(q[0], solo1), (q[1], solo2), (q[2], joint)],
            },
            destination_decodes_all_phases: self.all_phases,
        }
    }

    fn grid(&self, resolution: usize) -> Vec<Vec<f64>> {
        let weights = simplex_grid(3, resolution);
        let energies = [0.25, 0.5, 0.75];
        let coop = [[1.0, 0.0, 0.0], [1.0, 1.0, 1.0], [2.0, 1.0, 1.0]];
        let mut out = Vec::new();
        for w in &weights {
            for &e1 in &energies {
                for &e2 in &energies {
                    for c in &coop {
                        let mut x = w.clone();
                        x.extend([e1, e2]);
                        let scale = c.iter().sum::<f64>();
                        x.extend(c.iter().map(|v| v / scale));
                        x.extend(c.iter().map(|v| v / scale));
                        out.push(x);
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_grid_counts() {
        assert_eq!(simplex_grid(4, 4).len(), 35);
        assert_eq!(simplex_grid(3, 4).len(), 15);
        for p in simplex_grid(4, 3) {
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn box_maps_stay_in_budget() {
        let df = DfSpace { powers: [2.0, 3.0] };
        let tdma = TdmaSpace {
            powers: [2.0, 3.0],
            all_phases: true,
        };
        let topo = Topology::triangle(1.0, 1.0, 1.0, 2.0)
            .unwrap()
            .with_power_limits(vec![2.0, 3.0])
            .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let x: Vec<f64> = (0..11).map(|_| rng.gen::<f64>()).collect();
            assert!(df
                .point(&x[..8])
                .evaluate(&topo, &SourceTriple::zero())
                .is_ok());
            assert!(tdma
                .point(&x)
                .evaluate(&topo, &SourceTriple::zero())
                .is_ok());
            let cf = CfSpace { powers: [2.0, 3.0] };
            assert!(cf
                .point(&x[..4])
                .evaluate(&topo, &SourceTriple::zero())
                .is_ok());
        }
    }

    #[test]
    fn maccc_has_no_free_parameters() {
        let topo = Topology::equilateral(1.0, 10.0).unwrap();
        let triple = SourceTriple::new(0.5, 0.5, 0.5).unwrap();
        let cfg = SearchConfig::default();
        let p = feasible_split(Strategy::Maccc, &topo, &triple, [10.0, 10.0], &cfg).unwrap();
        assert_eq!(
            p,
            Some(StrategyPoint::Maccc {
                powers: [10.0, 10.0]
            })
        );
        let none = feasible_split(Strategy::Maccc, &topo, &triple, [1.0, 1.0], &cfg).unwrap();
        assert_eq!(none, None);
    }

    #[test]
    fn zero_power_finds_nothing() {
        let topo = Topology::equilateral(1.0, 1.0).unwrap();
        let triple = SourceTriple::new(0.5, 0.5, 0.5).unwrap();
        let cfg = SearchConfig {
            multistarts: 2,
            refine_iterations: 5,
            ..SearchConfig::default()
        };
        for s in Strategy::ALL {
            assert_eq!(
                feasible_split(s, &topo, &triple, [0.0, 0.0], &cfg).unwrap(),
                None,
                "{s}"
            );
        }
    }

    #[test]
    fn cooperation_is_used_over_a_strong_link() {
        let topo = Topology::triangle(0.1, 1.0, 1.0, 2.5).unwrap();
        let triple = SourceTriple::new(0.5, 0.5, 0.5).unwrap();
        let cfg = SearchConfig::default();
        let p = feasible_split(Strategy::Df, &topo, &triple, [2.5, 2.5], &cfg)
            .unwrap()
            .expect("decode-forward should be feasible");
        let StrategyPoint::Df(p) = p else { panic!() };
        assert!(p.split.alpha[0] > 0.0 && p.split.beta[0] > 0.0, "{p:?}");
        // plain MAC coding needs 3.5 here
        assert!(
            !StrategyPoint::Maccc { powers: [2.5, 2.5] }
                .evaluate(&topo, &triple)
                .unwrap()
                .feasible
        );
    }
}
