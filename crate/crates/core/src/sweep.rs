//! Sampled curves (utilities and fairness gap against the roaming charge,
//! best-response curves) and their CSV / JSON-lines export.

use std::fmt;
use std::fs::File;
use std::io::{self, BufRead, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde_json::{Map, Number, Value};

use crate::equilibrium::{best_response, default_init, price_cap, solve_ne, EquilibriumResult};
use crate::error::{Error, Result};
use crate::model::{GameParams, Mode, Provider};

/// Significant digits written for every numeric cell.
pub const SIGNIFICANT_DIGITS: usize = 12;

/// Header plus row-major records; `None` marks an empty cell.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Option<f64>>>,
    pub metadata: Vec<(String, String)>,
}

impl SweepTable {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        SweepTable { columns: columns.into_iter().map(Into::into).collect(), ..Default::default() }
    }

    /// Appends a row; non-finite values are stored as empty cells.
    pub fn push_row(&mut self, row: Vec<Option<f64>>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::InvalidGrid(format!(
                "row has {} values but the table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row.into_iter().map(|v| v.filter(|x| x.is_finite())).collect());
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|row| row[idx]).collect())
    }

    pub fn metadata_value(&self, key: &str) -> Option<&str> {
        self.metadata.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableFormat {
    #[default]
    Csv,
    JsonLines,
}

impl fmt::Display for TableFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            TableFormat::Csv => "csv",
            TableFormat::JsonLines => "jsonl",
        })
    }
}

impl FromStr for TableFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(TableFormat::Csv),
            "jsonl" | "json-lines" => Ok(TableFormat::JsonLines),
            other => Err(Error::Config(format!("unknown output format `{other}` (expected csv or jsonl)"))),
        }
    }
}

/// `n` points on `(0, R)` offset by half a step from both ends, where
/// `R = 2/(delta phi)` (or `2/delta` when `phi = 0`).
pub fn default_r_grid(params: &GameParams, n: usize) -> Vec<f64> {
    let scale = params.delta() * params.phi();
    let upper = if scale > 0.0 { 2.0 / scale } else { 2.0 / params.delta() };
    let step = upper / n as f64;
    (0..n).map(|i| (i as f64 + 0.5) * step).collect()
}

fn check_grid(grid: &[f64], lo: f64, hi: f64, hi_inclusive: bool, what: &str) -> Result<()> {
    for (i, &x) in grid.iter().enumerate() {
        let above = if hi_inclusive { x > hi } else { x >= hi };
        if !x.is_finite() || x < lo || above {
            let close = if hi_inclusive { ']' } else { ')' };
            return Err(Error::InvalidGrid(format!("{what} value {x} outside [{lo}, {hi}{close}")));
        }
        if i > 0 && x <= grid[i - 1] {
            return Err(Error::InvalidGrid(format!("{what} grid must be strictly increasing (at index {i})")));
        }
    }
    Ok(())
}

fn base_metadata(kind: &str, params: &GameParams, mode: Mode) -> Vec<(String, String)> {
    let mut meta = vec![("table".to_string(), kind.to_string()), ("mode".to_string(), mode.to_string())];
    meta.extend(params.describe());
    meta.push(("timestamp".to_string(), chrono::Utc::now().to_rfc3339()));
    meta
}

/// Equilibrium prices, utilities and fairness gap (utilities and gap per unit
/// `D_max`) at each roaming charge of `r_grid`.
///
/// Points whose equilibrium cannot be computed (or does not converge) keep the
/// `r` value and leave the other cells empty.
pub fn sweep_utilities_vs_r(params: &GameParams, r_grid: &[f64], mode: Mode) -> Result<SweepTable> {
    let scale = params.delta() * params.phi();
    let hi = if mode == Mode::Simplified && scale > 0.0 { 2.0 / scale } else { f64::INFINITY };
    check_grid(r_grid, 0.0, hi, false, "r")?;

    let rows: Vec<Vec<Option<f64>>> = r_grid
        .par_iter()
        .map(|&r| {
            let point = params.with_r(r).and_then(|p| solve_ne(&p, mode, default_init(&p)));
            utilities_row(r, point, params)
        })
        .collect();

    let mut table = SweepTable::new(["r", "p1", "p2", "u1", "u2", "gap"]);
    table.metadata = base_metadata("utilities_vs_r", params, mode);
    for row in rows {
        table.push_row(row)?;
    }
    Ok(table)
}

fn utilities_row(r: f64, point: Result<EquilibriumResult>, params: &GameParams) -> Vec<Option<f64>> {
    let d_max = params.d_max();
    match point {
        Ok(ne) if ne.converged => {
            let gap = (1.0 - params.phi()) * ne.utilities.u1 - ne.utilities.u2;
            vec![
                Some(r),
                Some(ne.prices.p1),
                Some(ne.prices.p2),
                Some(ne.utilities.u1 / d_max),
                Some(ne.utilities.u2 / d_max),
                Some(gap / d_max),
            ]
        }
        _ => vec![Some(r), None, None, None, None, None],
    }
}

/// Best-response curves: `br1(p)` answers `p2 = p` and `br2(p)` answers `p1 = p`.
pub fn sweep_best_response(params: &GameParams, price_grid: &[f64], mode: Mode) -> Result<SweepTable> {
    check_grid(price_grid, 0.0, price_cap(params), true, "price")?;
    let rows: Vec<Result<Vec<Option<f64>>>> = price_grid
        .par_iter()
        .map(|&p| {
            let br1 = best_response(Provider::Incumbent, p, params, mode)?;
            let br2 = best_response(Provider::Entrant, p, params, mode)?;
            Ok(vec![Some(p), Some(br1.price), Some(br2.price)])
        })
        .collect();

    let mut table = SweepTable::new(["p", "br1", "br2"]);
    table.metadata = base_metadata("best_response", params, mode);
    for row in rows {
        table.push_row(row?)?;
    }
    Ok(table)
}

/// Intersection of the two best-response curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub p1: f64,
    pub p2: f64,
}

fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> Option<f64> {
    let (first, last) = (*xs.first()?, *xs.last()?);
    if x < first || x > last {
        return None;
    }
    let j = xs.partition_point(|&v| v <= x);
    if j == 0 {
        return Some(ys[0]);
    }
    if j >= xs.len() {
        return Some(ys[xs.len() - 1]);
    }
    let t = (x - xs[j - 1]) / (xs[j] - xs[j - 1]);
    Some(ys[j - 1] + t * (ys[j] - ys[j - 1]))
}

/// Estimates where the curves meet from a [`sweep_best_response`] table.
///
/// Walks the incumbent's curve `(br1(p), p)` and linearly interpolates the
/// sign change of `br2(br1(p)) - p`. Crossings at positive prices take
/// precedence over the all-zero corner. Returns `None` when no crossing lies
/// inside the sampled grid.
pub fn estimate_crossing(table: &SweepTable) -> Option<Crossing> {
    let grid: Vec<f64> = table.column("p")?.into_iter().collect::<Option<_>>()?;
    let br1: Vec<f64> = table.column("br1")?.into_iter().collect::<Option<_>>()?;
    let br2: Vec<f64> = table.column("br2")?.into_iter().collect::<Option<_>>()?;

    let residuals: Vec<Option<f64>> = grid
        .iter()
        .zip(&br1)
        .map(|(&p, &x)| interpolate(&grid, &br2, x).map(|y| y - p))
        .collect();

    let mut crossings = Vec::new();
    for i in 0..grid.len() {
        let Some(hi) = residuals[i] else { continue };
        if hi == 0.0 {
            crossings.push(Crossing { p1: br1[i], p2: grid[i] });
            continue;
        }
        let Some(Some(hn)) = residuals.get(i + 1).copied() else { continue };
        if hn != 0.0 && hi.signum() != hn.signum() {
            let t = hi / (hi - hn);
            crossings.push(Crossing {
                p1: br1[i] + t * (br1[i + 1] - br1[i]),
                p2: grid[i] + t * (grid[i + 1] - grid[i]),
            });
        }
    }
    // Without roaming revenue (0, 0) is a zero-utility meeting point; prefer a priced one.
    crossings.iter().copied().find(|c| c.p1 > 0.0 && c.p2 > 0.0).or_else(|| crossings.first().copied())
}

/// `x` rounded to [`SIGNIFICANT_DIGITS`] digits in plain or exponent notation.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exponent) = sci.split_once('e').expect("exponent notation");
    let exponent: i32 = exponent.parse().expect("integer exponent");
    if (-5..SIGNIFICANT_DIGITS as i32).contains(&exponent) {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exponent) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exponent}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn cell(value: Option<f64>) -> String {
    value.map(format_significant).unwrap_or_default()
}

pub fn write_csv<W: Write>(table: &SweepTable, mut out: W) -> io::Result<()> {
    for (key, value) in &table.metadata {
        writeln!(out, "# {key}: {value}")?;
    }
    writeln!(out, "{}", table.columns.join(","))?;
    for row in &table.rows {
        let cells: Vec<String> = row.iter().copied().map(cell).collect();
        writeln!(out, "{}", cells.join(","))?;
    }
    out.flush()
}

pub fn write_jsonl<W: Write>(table: &SweepTable, mut out: W) -> io::Result<()> {
    let meta: Map<String, Value> =
        table.metadata.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    let mut header = Map::new();
    header.insert("metadata".to_string(), Value::Object(meta));
    writeln!(out, "{}", Value::Object(header))?;
    for row in &table.rows {
        let record: Map<String, Value> = table
            .columns
            .iter()
            .zip(row)
            .map(|(name, value)| {
                let json = value
                    .and_then(|v| format_significant(v).parse::<f64>().ok())
                    .and_then(Number::from_f64)
                    .map(Value::Number)
                    .unwrap_or(Value::Null);
                (name.clone(), json)
            })
            .collect();
        writeln!(out, "{}", Value::Object(record))?;
    }
    out.flush()
}

pub fn write_table<W: Write>(table: &SweepTable, format: TableFormat, out: W) -> io::Result<()> {
    match format {
        TableFormat::Csv => write_csv(table, out),
        TableFormat::JsonLines => write_jsonl(table, out),
    }
}

/// Writes `table` to `destination`, or to standard output when it is `-`.
pub fn export_table(table: &SweepTable, format: TableFormat, destination: &Path) -> Result<()> {
    let io_err = |source| Error::Io { path: destination.to_path_buf(), source };
    if destination == Path::new("-") {
        let stdout = io::stdout();
        return write_table(table, format, stdout.lock()).map_err(io_err);
    }
    let file = File::create(destination).map_err(io_err)?;
    write_table(table, format, BufWriter::new(file)).map_err(io_err)
}

/// Parses CSV written by [`write_csv`].
pub fn read_csv<R: BufRead>(input: R) -> Result<SweepTable> {
    let mut table = SweepTable::default();
    let mut have_header = false;
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((k, v)) = comment.trim_start().split_once(": ") {
                table.metadata.push((k.to_string(), v.to_string()));
            }
            continue;
        }
        if !have_header {
            table.columns = line.split(',').map(str::to_string).collect();
            have_header = true;
            continue;
        }
        let row = line
            .split(',')
            .map(|c| {
                if c.is_empty() {
                    Ok(None)
                } else {
                    c.parse::<f64>()
                        .map(Some)
                        .map_err(|e| Error::Parse { line: line_no, message: format!("`{c}`: {e}") })
                }
            })
            .collect::<Result<Vec<_>>>()?;
        table.push_row(row).map_err(|e| Error::Parse { line: line_no, message: e.to_string() })?;
    }
    Ok(table)
}
