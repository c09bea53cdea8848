//! CSV artifacts.

use std::fs::File;
use std::io::{self, Write};
use std::path::Path;

/// Column layouts. Headers are part of the output contract.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Schema {
    Report,
    Sweep,
    NoiseSweep,
    MinPower,
    Region,
    CfMinNoise,
}

impl Schema {
    pub fn header(self) -> &'static [&'static str] {
        match self {
            Schema::Report => &["label", "lhs_bits", "rhs_bits", "slack_bits", "feasible"],
            Schema::Sweep => &["swept_value", "strategy", "p_star", "witness_params_json"],
            Schema::NoiseSweep => &[
                "swept_value",
                "strategy",
                "ntilde_star",
                "r1_bits",
                "r2_bits",
                "sum_rate_bits",
                "witness_params_json",
            ],
            Schema::MinPower => &[
                "strategy",
                "objective",
                "p_star",
                "p1",
                "p2",
                "monotone_verified",
                "witness_params_json",
            ],
            Schema::Region => &["kind", "r1_bits", "r2_bits"],
            Schema::CfMinNoise => &["pu1", "pv1", "pu2", "pv2", "ntilde_star", "feasible"],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
    Bool(bool),
    /// Value that does not exist, e.g. `P*` of an infeasible run.
    Empty,
}

impl Cell {
    pub fn opt(v: Option<f64>) -> Cell {
        v.map_or(Cell::Empty, Cell::Num)
    }

    pub fn text(s: impl Into<String>) -> Cell {
        Cell::Text(s.into())
    }

    fn render(&self, precision: usize) -> String {
        match self {
            Cell::Num(v) => format_significant(*v, precision),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => b.to_string(),
            Cell::Empty => String::new(),
        }
    }
}

/// Fixed-point rendering with `digits` significant digits; switches to
/// scientific notation outside `[1e-6, 1e15)`.
pub fn format_significant(v: f64, digits: usize) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let digits = digits.max(1);
    let mag = v.abs().log10().floor();
    if !(-6.0..15.0).contains(&mag) {
        return format!("{:.*e}", digits - 1, v);
    }
    let decimals = (digits as i64 - 1 - mag as i64).max(0) as usize;
    format!("{v:.decimals$}")
}

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("row {row} has {got} cells, schema has {want}")]
    Shape { row: usize, got: usize, want: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Writes the header then one line per row, in order.
pub fn write_csv<W: Write>(
    writer: W,
    schema: Schema,
    rows: &[Vec<Cell>],
    precision: usize,
) -> Result<(), EmitError> {
    let header = schema.header();
    for (i, r) in rows.iter().enumerate() {
        if r.len() != header.len() {
            return Err(EmitError::Shape {
                row: i,
                got: r.len(),
                want: header.len(),
            });
        }
    }
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    w.write_record(header)?;
    for r in rows {
        w.write_record(r.iter().map(|c| c.render(precision)))?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_csv(
    rows: &[Vec<Cell>],
    schema: Schema,
    path: &Path,
    precision: usize,
) -> Result<(), EmitError> {
    write_csv(File::create(path)?, schema, rows, precision)
}
