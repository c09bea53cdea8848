use std::fs;
use std::path::{Path, PathBuf};

use macfcs_core::{
    best_split, cf_min_noise, min_power, region, sweep, OptimizerError, StrategyPoint,
    SweptParameter,
};

use crate::config::{CommandKind, ManifestSection, Resolved, RunConfig};
use crate::output::{emit_csv, Cell, Schema};
use crate::CliError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;

/// Command-line overrides applied on top of the config file.
#[derive(Debug, Clone, Default)]
pub struct Options {
    pub config: PathBuf,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub precision: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub exit_code: i32,
    pub csv_path: PathBuf,
    pub manifest_path: PathBuf,
    /// One-line human summary of the result.
    pub summary: String,
}

/// Rows produced by a command, before they are written anywhere.
#[derive(Debug, Clone)]
pub struct Table {
    pub schema: Schema,
    pub rows: Vec<Vec<Cell>>,
    pub infeasible: bool,
    pub summary: String,
}

/// Reads, resolves and runs the config, then writes the CSV and the
/// manifest (`<csv stem>.manifest.toml` next to it).
pub fn run(opts: &Options) -> Result<Outcome, CliError> {
    let source = fs::read_to_string(&opts.config).map_err(|source| CliError::Read {
        path: opts.config.clone(),
        source,
    })?;
    let mut config = RunConfig::parse(&source)?;
    if let Some(seed) = opts.seed {
        config.search.rng_seed = seed;
    }
    if let Some(out) = &opts.out {
        config.output.path = out.to_string_lossy().into_owned();
    }
    if let Some(p) = opts.precision {
        config.output.precision = p;
    }
    let mut resolved = config.resolve(&source)?;
    let table = execute(&resolved)?;

    let csv_path = PathBuf::from(&resolved.config.output.path);
    emit_csv(
        &table.rows,
        table.schema,
        &csv_path,
        resolved.config.output.precision,
    )
    .map_err(|source| CliError::Write {
        path: csv_path.clone(),
        source,
    })?;

    resolved.config.manifest = Some(ManifestSection {
        version: env!("CARGO_PKG_VERSION").to_owned(),
        seed: resolved.config.search.rng_seed,
        config_path: opts.config.to_string_lossy().into_owned(),
    });
    let manifest_path = manifest_path(&csv_path);
    fs::write(&manifest_path, resolved.config.to_toml()).map_err(|e| CliError::Write {
        path: manifest_path.clone(),
        source: e.into(),
    })?;

    Ok(Outcome {
        exit_code: if table.infeasible {
            EXIT_INFEASIBLE
        } else {
            EXIT_OK
        },
        csv_path,
        manifest_path,
        summary: table.summary,
    })
}

fn manifest_path(csv: &Path) -> PathBuf {
    csv.with_extension("manifest.toml")
}

fn witness_json(p: &Option<StrategyPoint>) -> Cell {
    match p {
        Some(p) => Cell::Text(serde_json::to_string(p).expect("points serialise")),
        None => Cell::Empty,
    }
}

/// Runs the configured command and returns its rows.
pub fn execute(r: &Resolved) -> Result<Table, CliError> {
    let cfg = &r.config;
    let cmd = &cfg.command;
    let kind = cfg.strategy.kind;
    let limits = r.topology.power_limits();
    let powers = [limits[0], limits[1]];

    let table = match cmd.name {
        CommandKind::Evaluate => {
            let point = match &r.fixed {
                Some(p) => p.clone(),
                None => best_split(kind, &r.topology, &r.triple, powers, &cfg.search)?.0,
            };
            let report = point.evaluate(&r.topology, &r.triple)?;
            let rows = report
                .entries
                .iter()
                .map(|e| {
                    vec![
                        Cell::text(e.label),
                        Cell::Num(e.lhs),
                        Cell::Num(e.rhs),
                        Cell::Num(e.slack),
                        Cell::Bool(e.satisfied),
                    ]
                })
                .collect();
            Table {
                schema: Schema::Report,
                rows,
                infeasible: !report.feasible,
                summary: format!(
                    "evaluate {kind}: {} (margin {:.6} bits)",
                    if report.feasible {
                        "feasible"
                    } else {
                        "infeasible"
                    },
                    report.margin()
                ),
            }
        }
        CommandKind::MinPower => {
            let objective = cmd.objective.unwrap_or_default();
            let head = [Cell::text(kind.name()), Cell::text(objective.to_string())];
            match min_power(kind, &r.topology, &r.triple, objective, &cfg.search) {
                Ok(m) => Table {
                    schema: Schema::MinPower,
                    rows: vec![[
                        head.to_vec(),
                        vec![
                            Cell::Num(m.p_star),
                            Cell::Num(m.powers[0]),
                            Cell::Num(m.powers[1]),
                            Cell::Bool(m.monotone_verified),
                            witness_json(&m.witness),
                        ],
                    ]
                    .concat()],
                    infeasible: false,
                    summary: format!("min-power {kind} ({objective}): P* = {}", m.p_star),
                },
                Err(OptimizerError::CapExceeded { cap }) => Table {
                    schema: Schema::MinPower,
                    rows: vec![[head.to_vec(), vec![Cell::Empty; 5]].concat()],
                    infeasible: true,
                    summary: format!(
                        "min-power {kind} ({objective}): infeasible up to the cap {cap}"
                    ),
                },
                Err(e) => return Err(e.into()),
            }
        }
        CommandKind::Sweep => {
            let parameter = cmd.parameter.expect("resolved");
            let strategies = cmd.strategies.as_deref().expect("resolved");
            let values = cmd.values.as_deref().expect("resolved");
            let objective = cmd.objective.unwrap_or_default();
            let found = sweep(
                strategies,
                &r.topology,
                parameter,
                values,
                &r.triple,
                objective,
                &cfg.search,
            )?;
            let noise = parameter == SweptParameter::PuFraction;
            let rows = found
                .iter()
                .map(|row| {
                    let mut cells = vec![
                        Cell::Num(row.value),
                        Cell::text(row.strategy.name()),
                        Cell::opt(row.metric),
                    ];
                    if noise {
                        match row.rates {
                            Some(rates) => cells.extend(rates.map(Cell::Num)),
                            None => cells.extend([Cell::Empty, Cell::Empty, Cell::Empty]),
                        }
                    }
                    cells.push(witness_json(&row.witness));
                    cells
                })
                .collect();
            let missing = found.iter().filter(|r| r.metric.is_none()).count();
            Table {
                schema: if noise {
                    Schema::NoiseSweep
                } else {
                    Schema::Sweep
                },
                rows,
                infeasible: false,
                summary: format!(
                    "sweep {parameter}: {} rows, {missing} without a feasible point",
                    found.len()
                ),
            }
        }
        CommandKind::Region => {
            let resolution = cmd.resolution.expect("resolved");
            let common = cmd.common.unwrap_or(0.0);
            let reg = region(kind, &r.topology, powers, resolution, common, &cfg.search)?;
            let raw = reg
                .points
                .iter()
                .map(|p| vec![Cell::text("raw"), Cell::Num(p.r1), Cell::Num(p.r2)]);
            let hull = reg
                .hull
                .iter()
                .map(|&(a, b)| vec![Cell::text("hull"), Cell::Num(a), Cell::Num(b)]);
            Table {
                schema: Schema::Region,
                rows: raw.chain(hull).collect(),
                infeasible: false,
                summary: format!(
                    "region {kind}: {} boundary points, {} hull vertices",
                    reg.points.len(),
                    reg.hull.len()
                ),
            }
        }
        CommandKind::CfMinNoise => {
            let (pu, pv) = (cmd.pu.expect("resolved"), cmd.pv.expect("resolved"));
            let tol = cmd.tolerance.expect("resolved");
            let found = cf_min_noise(&r.topology, pu[0], pv[0], pu[1], pv[1], tol)?;
            let n = found.ntilde();
            Table {
                schema: Schema::CfMinNoise,
                rows: vec![vec![
                    Cell::Num(pu[0]),
                    Cell::Num(pv[0]),
                    Cell::Num(pu[1]),
                    Cell::Num(pv[1]),
                    Cell::opt(n),
                    Cell::Bool(n.is_some()),
                ]],
                infeasible: n.is_none(),
                summary: match n {
                    Some(n) => format!("cf-min-noise: ñ* = {n}"),
                    None => "cf-min-noise: infeasible at the noise cap".into(),
                },
            }
        }
    };
    Ok(table)
}
