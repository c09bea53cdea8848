//! TOML run configuration.
//!
//! A config is parsed, then resolved: defaults are filled in and every
//! section is checked. The resolved form is what gets echoed into the run
//! manifest, so feeding a manifest back in reproduces the same run.

use std::fmt;

use macfcs_core::{
    CfSplit, DfPoint, DfSplit, JointPmf, Objective, SearchConfig, SourceTriple, Strategy,
    StrategyPoint, SweptParameter, TimeShareMixture, Topology,
};
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const DEFAULT_KAPPA: f64 = 1.0;
pub const DEFAULT_ETA: f64 = 2.0;
pub const DEFAULT_NOISE: f64 = 1.0;
pub const DEFAULT_PRECISION: usize = 9;
pub const DEFAULT_OUTPUT: &str = "macfcs.csv";
pub const DEFAULT_REGION_RESOLUTION: usize = 16;

/// Weights of a fixed time-sharing schedule must sum to one within this.
const WEIGHT_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub topology: TopologySection,
    pub sources: SourcesSection,
    pub strategy: StrategySection,
    pub command: CommandSection,
    #[serde(default)]
    pub search: SearchConfig,
    #[serde(default)]
    pub output: OutputSection,
    /// Present only in run manifests; ignored on input.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifest: Option<ManifestSection>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySection {
    /// Planar positions of nodes 1, 2 and the destination.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distances: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<Vec<f64>>,
    pub power_limits: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourcesSection {
    /// `[H(S1|S2), H(S2|S1), I(S1;S2)]` in bits.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub triple: Option<[f64; 3]>,
    /// Joint pmf, rows indexed by the value of S1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pmf: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategySection {
    pub kind: Strategy,
    /// Fixed operating point; when absent the parameters are searched.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed: Option<FixedParameters>,
}

/// Union of the fixed parameters of every strategy; which fields are
/// required depends on `strategy.kind`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedParameters {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub powers: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pu: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pv: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ntilde: Option<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<PhaseParameters>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub destination_decodes_all_phases: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseParameters {
    pub weight: f64,
    pub powers: [f64; 2],
    pub alpha: [f64; 4],
    pub beta: [f64; 4],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Evaluate,
    MinPower,
    Sweep,
    Region,
    CfMinNoise,
}

impl fmt::Display for CommandKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommandKind::Evaluate => "evaluate",
            CommandKind::MinPower => "min-power",
            CommandKind::Sweep => "sweep",
            CommandKind::Region => "region",
            CommandKind::CfMinNoise => "cf-min-noise",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommandSection {
    pub name: CommandKind,
    /// min-power, sweep
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub objective: Option<Objective>,
    /// sweep
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<SweptParameter>,
    /// sweep
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    /// sweep; defaults to `[strategy.kind]`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub strategies: Option<Vec<Strategy>>,
    /// region
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resolution: Option<usize>,
    /// region: common information carried alongside the traced pair
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub common: Option<f64>,
    /// cf-min-noise
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pu: Option<[f64; 2]>,
    /// cf-min-noise
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pv: Option<[f64; 2]>,
    /// cf-min-noise; defaults to `search.bisection_tol`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_path")]
    pub path: String,
    /// Significant digits of numeric CSV cells.
    #[serde(default = "default_precision")]
    pub precision: usize,
}

fn default_path() -> String {
    DEFAULT_OUTPUT.to_owned()
}

fn default_precision() -> usize {
    DEFAULT_PRECISION
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            path: default_path(),
            precision: default_precision(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestSection {
    pub version: String,
    pub seed: u64,
    pub config_path: String,
}

/// Everything a command needs, validated.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub config: RunConfig,
    pub topology: Topology,
    pub triple: SourceTriple,
    pub fixed: Option<StrategyPoint>,
}

impl RunConfig {
    pub fn parse(source: &str) -> Result<Self, CliError> {
        toml::from_str(source).map_err(|e| {
            let line = e.span().map(|s| line_of(source, s.start));
            CliError::Config {
                key: line.map(|l| key_at(source, l)).unwrap_or_default(),
                line,
                message: e.message().trim_end().to_owned(),
            }
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config values are always representable")
    }

    /// Fills in defaults and validates every section. Errors carry the
    /// dotted key of the offending entry and its line in `source`.
    pub fn resolve(mut self, source: &str) -> Result<Resolved, CliError> {
        let at = |key: &str, message: String| CliError::Config {
            key: key.to_owned(),
            line: locate(source, key),
            message,
        };

        let topo = &mut self.topology;
        let n = match (&topo.coordinates, &topo.distances) {
            (Some(c), None) => c.len(),
            (None, Some(d)) => d.len(),
            (Some(_), Some(_)) => {
                return Err(at(
                    "topology.distances",
                    "give either coordinates or distances, not both".into(),
                ))
            }
            (None, None) => {
                return Err(at(
                    "topology",
                    "one of coordinates or distances is required".into(),
                ))
            }
        };
        if n != 3 {
            let key = if topo.coordinates.is_some() {
                "topology.coordinates"
            } else {
                "topology.distances"
            };
            return Err(at(key, format!("expected 3 nodes, got {n}")));
        }
        if let Some(d) = &topo.distances {
            for (i, row) in d.iter().enumerate() {
                if row.len() != n {
                    return Err(at(
                        "topology.distances",
                        format!("row {} has {} entries", i + 1, row.len()),
                    ));
                }
                for (j, &v) in row.iter().enumerate() {
                    if i != j && !(v > 0.0 && v.is_finite()) {
                        return Err(at(
                            "topology.distances",
                            format!("distance d{}{} = {v} must be positive", i + 1, j + 1),
                        ));
                    }
                }
            }
        }
        if let Some(c) = &topo.coordinates {
            for i in 0..n {
                for j in i + 1..n {
                    if c[i] == c[j] {
                        return Err(at(
                            "topology.coordinates",
                            format!("nodes {} and {} coincide", i + 1, j + 1),
                        ));
                    }
                }
            }
        }
        let kappa = *topo.kappa.get_or_insert(DEFAULT_KAPPA);
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(at(
                "topology.kappa",
                format!("kappa = {kappa} must be positive"),
            ));
        }
        let eta = *topo.eta.get_or_insert(DEFAULT_ETA);
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(at("topology.eta", format!("eta = {eta} must be positive")));
        }
        let noise = topo
            .noise
            .get_or_insert_with(|| vec![DEFAULT_NOISE; n])
            .clone();
        if noise.len() != n || noise.iter().any(|&v| !(v > 0.0 && v.is_finite())) {
            return Err(at(
                "topology.noise",
                format!("expected {n} positive noise variances"),
            ));
        }
        let limits = topo.power_limits.clone();
        if limits.len() != n - 1 || limits.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
            return Err(at(
                "topology.power_limits",
                format!("expected {} nonnegative power limits", n - 1),
            ));
        }
        let topology = match (&topo.coordinates, &topo.distances) {
            (Some(c), _) => Topology::from_coordinates(c, kappa, eta, noise, limits),
            (_, Some(d)) => Topology::new(d.clone(), kappa, eta, noise, limits),
            _ => unreachable!(),
        }
        .map_err(|e| at("topology", e.to_string()))?;

        let triple = match (&self.sources.triple, &self.sources.pmf) {
            (Some(t), None) => SourceTriple::new(t[0], t[1], t[2])
                .map_err(|e| at("sources.triple", e.to_string()))?,
            (None, Some(p)) => JointPmf::new(p.clone())
                .map_err(|e| at("sources.pmf", e.to_string()))?
                .triple(),
            (Some(_), Some(_)) => {
                return Err(at(
                    "sources.pmf",
                    "give either triple or pmf, not both".into(),
                ))
            }
            (None, None) => return Err(at("sources", "one of triple or pmf is required".into())),
        };

        self.search
            .validate()
            .map_err(|e| at("search", e.to_string()))?;
        if self.output.precision == 0 || self.output.precision > 17 {
            return Err(at(
                "output.precision",
                format!(
                    "precision {} must be between 1 and 17",
                    self.output.precision
                ),
            ));
        }

        let kind = self.strategy.kind;
        let fixed = match &self.strategy.fixed {
            None => None,
            Some(f) => Some(fixed_point(kind, f, &topology, &triple, &at)?),
        };
        check_command(&mut self.command, kind, fixed.is_some(), &self.search, &at)?;

        Ok(Resolved {
            config: self,
            topology,
            triple,
            fixed,
        })
    }
}

fn fixed_point(
    kind: Strategy,
    f: &FixedParameters,
    topology: &Topology,
    triple: &SourceTriple,
    at: &dyn Fn(&str, String) -> CliError,
) -> Result<StrategyPoint, CliError> {
    let limits = topology.power_limits();
    fn required<T>(
        field: Option<T>,
        name: &str,
        kind: Strategy,
        at: &dyn Fn(&str, String) -> CliError,
    ) -> Result<T, CliError> {
        field.ok_or_else(|| {
            at(
                "strategy.fixed",
                format!("`{name}` is required for fixed {kind} parameters"),
            )
        })
    }
    let need = |field, name| required(field, name, kind, at);
    let allowed: &[&str] = match kind {
        Strategy::Df => &["powers", "alpha", "beta"],
        Strategy::Cf => &["pu", "pv", "ntilde"],
        Strategy::Maccc => &["powers"],
        Strategy::TdmaDf => &["phases", "destination_decodes_all_phases"],
    };
    let present = [
        ("powers", f.powers.is_some()),
        ("alpha", f.alpha.is_some()),
        ("beta", f.beta.is_some()),
        ("pu", f.pu.is_some()),
        ("pv", f.pv.is_some()),
        ("ntilde", f.ntilde.is_some()),
        ("phases", f.phases.is_some()),
        (
            "destination_decodes_all_phases",
            f.destination_decodes_all_phases.is_some(),
        ),
    ];
    for (name, set) in present {
        if set && !allowed.contains(&name) {
            return Err(at(
                &format!("strategy.fixed.{name}"),
                format!("`{name}` does not apply to {kind}"),
            ));
        }
    }
    let within = |key: &str, p: [f64; 2]| {
        if p.iter().zip(limits).all(|(&v, &l)| v >= 0.0 && v <= l) {
            Ok(p)
        } else {
            Err(at(
                key,
                format!("powers {p:?} outside the limits {limits:?}"),
            ))
        }
    };
    let point = match kind {
        Strategy::Df => {
            let split = DfSplit::new(need(f.alpha, "alpha")?, need(f.beta, "beta")?)
                .map_err(|e| at("strategy.fixed.alpha", e.to_string()))?;
            let powers = match f.powers {
                Some(p) => within("strategy.fixed.powers", p)?,
                None => [limits[0], limits[1]],
            };
            StrategyPoint::Df(DfPoint { powers, split })
        }
        Strategy::Cf => {
            let pu = required(f.pu, "pu", kind, at)?;
            let pv = required(f.pv, "pv", kind, at)?;
            let nt = required(f.ntilde, "ntilde", kind, at)?;
            StrategyPoint::Cf(CfSplit {
                pu1: pu[0],
                pv1: pv[0],
                pu2: pu[1],
                pv2: pv[1],
                ntilde1: nt[0],
                ntilde2: nt[1],
            })
        }
        Strategy::Maccc => {
            let powers = match f.powers {
                Some(p) => within("strategy.fixed.powers", p)?,
                None => [limits[0], limits[1]],
            };
            StrategyPoint::Maccc { powers }
        }
        Strategy::TdmaDf => {
            let phases = required(f.phases.as_ref(), "phases", kind, at)?;
            let total: f64 = phases.iter().map(|p| p.weight).sum();
            if (total - 1.0).abs() > WEIGHT_TOLERANCE {
                return Err(at(
                    "strategy.fixed.phases",
                    format!("phase weights sum to {total}, not 1"),
                ));
            }
            let mut components = Vec::with_capacity(phases.len());
            for p in phases {
                let split = DfSplit::new(p.alpha, p.beta)
                    .map_err(|e| at("strategy.fixed.phases", e.to_string()))?;
                components.push((
                    p.weight,
                    DfPoint {
                        powers: p.powers,
                        split,
                    },
                ));
            }
            let mixture = TimeShareMixture::new(components)
                .map_err(|e| at("strategy.fixed.phases", e.to_string()))?;
            StrategyPoint::TdmaDf {
                mixture,
                destination_decodes_all_phases: f.destination_decodes_all_phases.unwrap_or(true),
            }
        }
    };
    // Structural problems (budgets, phase layout) surface here.
    point
        .evaluate(topology, triple)
        .map_err(|e| at("strategy.fixed", e.to_string()))?;
    Ok(point)
}

fn check_command(
    c: &mut CommandSection,
    kind: Strategy,
    has_fixed: bool,
    search: &SearchConfig,
    at: &dyn Fn(&str, String) -> CliError,
) -> Result<(), CliError> {
    let allowed: &[&str] = match c.name {
        CommandKind::Evaluate => &[],
        CommandKind::MinPower => &["objective"],
        CommandKind::Sweep => &["objective", "parameter", "values", "strategies"],
        CommandKind::Region => &["resolution", "common"],
        CommandKind::CfMinNoise => &["pu", "pv", "tolerance"],
    };
    let present = [
        ("objective", c.objective.is_some()),
        ("parameter", c.parameter.is_some()),
        ("values", c.values.is_some()),
        ("strategies", c.strategies.is_some()),
        ("resolution", c.resolution.is_some()),
        ("common", c.common.is_some()),
        ("pu", c.pu.is_some()),
        ("pv", c.pv.is_some()),
        ("tolerance", c.tolerance.is_some()),
    ];
    for (name, set) in present {
        if set && !allowed.contains(&name) {
            return Err(at(
                &format!("command.{name}"),
                format!("`{name}` is not an option of the {} command", c.name),
            ));
        }
    }
    if has_fixed && c.name != CommandKind::Evaluate {
        return Err(at(
            "strategy.fixed",
            format!("fixed parameters only apply to evaluate, not {}", c.name),
        ));
    }

    match c.name {
        CommandKind::Evaluate | CommandKind::MinPower => {
            if c.name == CommandKind::MinPower {
                c.objective.get_or_insert(Objective::Symmetric);
            }
        }
        CommandKind::Sweep => {
            c.objective.get_or_insert(Objective::Symmetric);
            let parameter = c
                .parameter
                .ok_or_else(|| at("command", "sweep needs `parameter`".into()))?;
            let values = c
                .values
                .as_ref()
                .ok_or_else(|| at("command", "sweep needs `values`".into()))?;
            for &v in values {
                let ok = match parameter {
                    SweptParameter::D12 | SweptParameter::D13D23 => v > 0.0 && v.is_finite(),
                    SweptParameter::Common => v >= 0.0 && v.is_finite(),
                    SweptParameter::PuFraction => (0.0..=1.0).contains(&v),
                };
                if !ok {
                    return Err(at(
                        "command.values",
                        format!("value {v} is not valid for {parameter}"),
                    ));
                }
            }
            let strategies = c.strategies.get_or_insert_with(|| vec![kind]);
            if strategies.is_empty() {
                return Err(at("command.strategies", "no strategies listed".into()));
            }
            if parameter == SweptParameter::PuFraction
                && strategies.iter().any(|&s| s != Strategy::Cf)
            {
                return Err(at(
                    "command.strategies",
                    "the pu_fraction sweep applies to cf only".into(),
                ));
            }
        }
        CommandKind::Region => {
            let r = *c.resolution.get_or_insert(DEFAULT_REGION_RESOLUTION);
            if r < 2 {
                return Err(at(
                    "command.resolution",
                    format!("resolution {r} must be at least 2"),
                ));
            }
            let common = *c.common.get_or_insert(0.0);
            if !(common >= 0.0 && common.is_finite()) {
                return Err(at(
                    "command.common",
                    format!("common = {common} must be nonnegative"),
                ));
            }
        }
        CommandKind::CfMinNoise => {
            let pu =
                c.pu.ok_or_else(|| at("command", "cf-min-noise needs `pu`".into()))?;
            let pv =
                c.pv.ok_or_else(|| at("command", "cf-min-noise needs `pv`".into()))?;
            if pu.iter().chain(&pv).any(|&p| !(p >= 0.0 && p.is_finite())) {
                return Err(at(
                    "command.pu",
                    "carrier powers must be nonnegative".into(),
                ));
            }
            let tol = *c.tolerance.get_or_insert(search.bisection_tol);
            if !(tol > 0.0 && tol.is_finite()) {
                return Err(at(
                    "command.tolerance",
                    format!("tolerance {tol} must be positive"),
                ));
            }
        }
    }
    Ok(())
}

/// 1-based line containing byte offset `pos`.
fn line_of(source: &str, pos: usize) -> usize {
    source[..pos.min(source.len())].matches('\n').count() + 1
}

/// Dotted key assigned on 1-based `line`, or the enclosing table name.
fn key_at(source: &str, line: usize) -> String {
    let mut table = String::new();
    for raw in source.lines().take(line) {
        let l = raw.trim();
        if l.starts_with('[') {
            table = l.trim_matches(['[', ']']).trim().to_owned();
        }
    }
    let here = source.lines().nth(line - 1).unwrap_or("").trim();
    match here.split_once('=') {
        Some((k, _)) if !here.starts_with('[') => {
            let k = k.trim();
            if table.is_empty() {
                k.to_owned()
            } else {
                format!("{table}.{k}")
            }
        }
        _ => table,
    }
}

/// Best-effort 1-based line of a dotted key such as `topology.eta`: the
/// line assigning it, the header of a table with that name, or failing
/// those the header of the enclosing table.
pub fn locate(source: &str, key: &str) -> Option<usize> {
    let (table, leaf) = match key.rsplit_once('.') {
        Some((t, l)) => (t, Some(l)),
        None => (key, None),
    };
    let mut current = String::new();
    let mut header = None;
    for (i, raw) in source.lines().enumerate() {
        let line = raw.trim();
        if line.starts_with('[') {
            current = line.trim_matches(['[', ']']).trim().to_owned();
            if current == key {
                return Some(i + 1);
            }
            if current == table && header.is_none() {
                header = Some(i + 1);
            }
            continue;
        }
        if let (true, Some(leaf)) = (current == table, leaf) {
            if let Some(rest) = line.strip_prefix(leaf) {
                let rest = rest.trim_start();
                if rest.starts_with('=') || rest.starts_with('.') {
                    return Some(i + 1);
                }
            }
        }
    }
    header.or_else(|| leaf.and_then(|_| locate(source, table)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
[topology]
distances = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]
power_limits = [1, 1]

[sources]
triple = [0.5, 0.5, 0.5]

[strategy]
kind = "maccc"

[command]
name = "min-power"
"#;

    fn resolve(src: &str) -> Result<Resolved, CliError> {
        RunConfig::parse(src)?.resolve(src)
    }

    fn err_key(src: &str) -> (String, Option<usize>) {
        match resolve(src) {
            Err(CliError::Config { key, line, .. }) => (key, line),
            other => panic!("expected a config error, got {other:?}"),
        }
    }

    #[test]
    fn defaults_are_filled() {
        let r = resolve(BASE).unwrap();
        assert_eq!(r.config.topology.kappa, Some(1.0));
        assert_eq!(r.config.topology.eta, Some(2.0));
        assert_eq!(r.config.topology.noise, Some(vec![1.0; 3]));
        assert_eq!(r.config.command.objective, Some(Objective::Symmetric));
        assert_eq!(r.config.output.precision, 9);
        assert_eq!(r.triple, SourceTriple::new(0.5, 0.5, 0.5).unwrap());
    }

    #[test]
    fn resolved_config_round_trips() {
        let r = resolve(BASE).unwrap();
        let text = r.config.to_toml();
        let again = resolve(&text).unwrap();
        assert_eq!(again.config, r.config);
    }

    #[test]
    fn nonpositive_distance_names_key_and_line() {
        let src = BASE.replace(
            "[[0, 1, 1], [1, 0, 1], [1, 1, 0]]",
            "[[0, 1, -1], [1, 0, 1], [-1, 1, 0]]",
        );
        assert_eq!(err_key(&src), ("topology.distances".into(), Some(3)));
    }

    #[test]
    fn bad_eta_is_rejected() {
        let src = BASE.replace("power_limits = [1, 1]", "power_limits = [1, 1]\neta = 0");
        assert_eq!(err_key(&src), ("topology.eta".into(), Some(5)));
    }

    #[test]
    fn negative_entropy_is_rejected() {
        let src = BASE.replace("[0.5, 0.5, 0.5]", "[0.5, -0.1, 0.5]");
        assert_eq!(err_key(&src).0, "sources.triple");
    }

    #[test]
    fn pmf_mass_must_be_one() {
        let src = BASE.replace("triple = [0.5, 0.5, 0.5]", "pmf = [[0.5, 0.2], [0.2, 0.2]]");
        assert_eq!(err_key(&src).0, "sources.pmf");
        let ok = BASE.replace(
            "triple = [0.5, 0.5, 0.5]",
            "pmf = [[0.25, 0.25], [0.25, 0.25]]",
        );
        assert!(!resolve(&ok).unwrap().triple.is_zero());
    }

    #[test]
    fn phase_weights_must_sum_to_one() {
        let src = BASE
            .replace("kind = \"maccc\"", "kind = \"tdma_df\"")
            .replace("name = \"min-power\"", "name = \"evaluate\"")
            + r#"
[[strategy.fixed.phases]]
weight = 0.3
powers = [1, 0]
alpha = [0, 0, 0, 1]
beta = [0, 0, 0, 0]

[[strategy.fixed.phases]]
weight = 0.3
powers = [0, 1]
alpha = [0, 0, 0, 0]
beta = [0, 0, 0, 1]

[[strategy.fixed.phases]]
weight = 0.3
powers = [1, 1]
alpha = [0.5, 0, 0, 0.5]
beta = [0.5, 0, 0, 0.5]
"#;
        let (key, line) = err_key(&src);
        assert_eq!(key, "strategy.fixed.phases");
        assert!(line.is_some());
    }

    #[test]
    fn unknown_key_reports_line() {
        let src = BASE.replace("kind = \"maccc\"", "kind = \"maccc\"\nflavour = 1");
        match resolve(&src) {
            Err(CliError::Config { line, message, .. }) => {
                assert_eq!(line, Some(11));
                assert!(message.contains("flavour"), "{message}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn type_errors_name_the_key() {
        let src = BASE.replace(
            "power_limits = [1, 1]",
            "power_limits = [1, 1]\nkappa = \"one\"",
        );
        assert_eq!(err_key(&src), ("topology.kappa".into(), Some(5)));
    }

    #[test]
    fn options_must_match_command() {
        let src = BASE.replace(
            "name = \"min-power\"",
            "name = \"min-power\"\nresolution = 4",
        );
        assert_eq!(err_key(&src), ("command.resolution".into(), Some(14)));
    }

    #[test]
    fn sweep_requires_values() {
        let src = BASE.replace(
            "name = \"min-power\"",
            "name = \"sweep\"\nparameter = \"d12\"",
        );
        assert_eq!(err_key(&src).0, "command");
    }

    #[test]
    fn coordinates_build_distances() {
        let src = BASE.replace(
            "distances = [[0, 1, 1], [1, 0, 1], [1, 1, 0]]",
            "coordinates = [[0, 0], [3, 0], [0, 4]]",
        );
        let r = resolve(&src).unwrap();
        assert_eq!(r.topology.distance(1, 2).unwrap(), 3.0);
        assert_eq!(r.topology.distance(2, 3).unwrap(), 5.0);
    }
}
