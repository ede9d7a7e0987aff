//! Command-line front end: `nash`, `fair`, `sweep` and `bestresponse`.
//!
//! Parameters come from built-in defaults, then an optional `key = value`
//! config file, then flags; later layers win. Exit codes: 0 success,
//! 1 invalid input or I/O failure, 2 numeric condition (non-convergence,
//! degenerate fairness, missing sign change).

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::equilibrium::{closed_form_ne, default_init, price_cap, solve_ne};
use crate::error::{Error, Result};
use crate::fairness::{closed_form_rstar, find_rstar};
use crate::model::{Congestion, GameParams, Mode, PricePair};
use crate::sweep::{
    default_r_grid, estimate_crossing, export_table, format_significant, sweep_best_response, sweep_utilities_vs_r,
    write_table, SweepTable, TableFormat,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;

const DEFAULT_R_POINTS: usize = 200;
const DEFAULT_PRICE_POINTS: usize = 101;

#[derive(Debug, Parser)]
#[command(name = "roaming", version, about = "Incumbent/entrant pricing game with regulated roaming charges")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the Nash equilibrium by best-response iteration.
    Nash {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        p1_init: Option<f64>,
        #[arg(long)]
        p2_init: Option<f64>,
    },
    /// Find the fair roaming charge r*.
    Fair {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Tabulate equilibrium utilities and the fairness gap against r.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of points of the default r grid.
        #[arg(long)]
        points: Option<usize>,
        /// Explicit comma-separated r grid.
        #[arg(long, value_delimiter = ',')]
        r_values: Option<Vec<f64>>,
    },
    /// Tabulate both best-response curves and estimate their crossing.
    Bestresponse {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        p_min: Option<f64>,
        #[arg(long)]
        p_max: Option<f64>,
    },
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// `key = value` configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub dmax: Option<f64>,
    #[arg(long = "r")]
    pub r: Option<f64>,
    #[arg(long)]
    pub b1: Option<f64>,
    #[arg(long)]
    pub b2: Option<f64>,
    /// Roaming fraction; sets b2 = b1 (1 - phi).
    #[arg(long)]
    pub phi: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub cd1: Option<f64>,
    #[arg(long)]
    pub cd2: Option<f64>,
    #[arg(long)]
    pub cb1: Option<f64>,
    #[arg(long)]
    pub cb2: Option<f64>,
    /// none | linear | mm1
    #[arg(long)]
    pub congestion: Option<String>,
    /// simplified | full
    #[arg(long)]
    pub mode: Option<String>,
    /// csv | jsonl
    #[arg(long)]
    pub format: Option<String>,
    /// Table destination; `-` for standard output.
    #[arg(short = 'o', long = "output")]
    pub output: Option<PathBuf>,
}

/// One layer of settings; unset fields defer to lower layers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigLayer {
    pub delta: Option<f64>,
    pub dmax: Option<f64>,
    pub r: Option<f64>,
    pub b1: Option<f64>,
    pub b2: Option<f64>,
    pub phi: Option<f64>,
    pub gamma: Option<f64>,
    pub cd1: Option<f64>,
    pub cd2: Option<f64>,
    pub cb1: Option<f64>,
    pub cb2: Option<f64>,
    pub congestion: Option<Congestion>,
    pub mode: Option<Mode>,
    pub format: Option<TableFormat>,
    pub output: Option<PathBuf>,
    pub p1_init: Option<f64>,
    pub p2_init: Option<f64>,
    pub points: Option<usize>,
    pub r_values: Option<Vec<f64>>,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
}

fn parse_number<T: std::str::FromStr>(line: usize, key: &str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    value.parse().map_err(|e| Error::Parse { line, message: format!("`{key}`: {e}") })
}

impl ConfigLayer {
    /// Parses `key = value` lines; `#` starts a comment.
    pub fn parse(text: &str) -> Result<ConfigLayer> {
        let mut layer = ConfigLayer::default();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse { line: line_no, message: format!("expected `key = value`, got `{line}`") })?;
            let key = key.trim().to_ascii_lowercase().replace('-', "_");
            let value = value.trim();
            let n = |k: &str| parse_number::<f64>(line_no, k, value).map(Some);
            match key.as_str() {
                "delta" => layer.delta = n(&key)?,
                "dmax" | "d_max" => layer.dmax = n(&key)?,
                "r" => layer.r = n(&key)?,
                "b1" => layer.b1 = n(&key)?,
                "b2" => layer.b2 = n(&key)?,
                "phi" => layer.phi = n(&key)?,
                "gamma" => layer.gamma = n(&key)?,
                "cd1" => layer.cd1 = n(&key)?,
                "cd2" => layer.cd2 = n(&key)?,
                "cb1" => layer.cb1 = n(&key)?,
                "cb2" => layer.cb2 = n(&key)?,
                "p1_init" => layer.p1_init = n(&key)?,
                "p2_init" => layer.p2_init = n(&key)?,
                "p_min" => layer.p_min = n(&key)?,
                "p_max" => layer.p_max = n(&key)?,
                "points" => layer.points = Some(parse_number(line_no, &key, value)?),
                "r_values" => {
                    layer.r_values = Some(
                        value
                            .split(',')
                            .map(|v| parse_number::<f64>(line_no, &key, v.trim()))
                            .collect::<Result<_>>()?,
                    )
                }
                "congestion" => layer.congestion = Some(value.parse()?),
                "mode" => layer.mode = Some(value.parse()?),
                "format" => layer.format = Some(value.parse()?),
                "output" => layer.output = Some(PathBuf::from(value)),
                other => {
                    return Err(Error::Parse { line: line_no, message: format!("unknown key `{other}`") });
                }
            }
        }
        if layer.b2.is_some() && layer.phi.is_some() {
            return Err(Error::Config("set either b2 or phi, not both".into()));
        }
        Ok(layer)
    }

    pub fn from_file(path: &Path) -> Result<ConfigLayer> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_path_buf(), source })?;
        ConfigLayer::parse(&text)
    }

    fn from_args(args: &CommonArgs) -> Result<ConfigLayer> {
        if args.b2.is_some() && args.phi.is_some() {
            return Err(Error::Config("set either --b2 or --phi, not both".into()));
        }
        Ok(ConfigLayer {
            delta: args.delta,
            dmax: args.dmax,
            r: args.r,
            b1: args.b1,
            b2: args.b2,
            phi: args.phi,
            gamma: args.gamma,
            cd1: args.cd1,
            cd2: args.cd2,
            cb1: args.cb1,
            cb2: args.cb2,
            congestion: args.congestion.as_deref().map(str::parse).transpose()?,
            mode: args.mode.as_deref().map(str::parse).transpose()?,
            format: args.format.as_deref().map(str::parse).transpose()?,
            output: args.output.clone(),
            ..ConfigLayer::default()
        })
    }

    /// `self` with every field set in `upper` replaced.
    pub fn overlay(self, upper: ConfigLayer) -> ConfigLayer {
        // b2 and phi describe the same quantity; the upper layer's choice wins.
        let (b2, phi) = if upper.b2.is_some() || upper.phi.is_some() { (upper.b2, upper.phi) } else { (self.b2, self.phi) };
        ConfigLayer {
            delta: upper.delta.or(self.delta),
            dmax: upper.dmax.or(self.dmax),
            r: upper.r.or(self.r),
            b1: upper.b1.or(self.b1),
            b2,
            phi,
            gamma: upper.gamma.or(self.gamma),
            cd1: upper.cd1.or(self.cd1),
            cd2: upper.cd2.or(self.cd2),
            cb1: upper.cb1.or(self.cb1),
            cb2: upper.cb2.or(self.cb2),
            congestion: upper.congestion.or(self.congestion),
            mode: upper.mode.or(self.mode),
            format: upper.format.or(self.format),
            output: upper.output.or(self.output),
            p1_init: upper.p1_init.or(self.p1_init),
            p2_init: upper.p2_init.or(self.p2_init),
            points: upper.points.or(self.points),
            r_values: upper.r_values.or(self.r_values),
            p_min: upper.p_min.or(self.p_min),
            p_max: upper.p_max.or(self.p_max),
        }
    }

    pub fn resolve(self) -> Result<CliConfig> {
        let mut builder = GameParams::builder();
        macro_rules! apply {
            ($($field:ident => $setter:ident),*) => {
                $(if let Some(v) = self.$field { builder = builder.$setter(v); })*
            };
        }
        apply!(delta => delta, dmax => d_max, r => r, b1 => b1, b2 => b2, gamma => gamma,
               cd1 => cd1, cd2 => cd2, cb1 => cb1, cb2 => cb2, congestion => congestion);
        if let Some(phi) = self.phi {
            if !(0.0..1.0).contains(&phi) {
                return Err(Error::InvalidParameter { name: "phi", value: phi, reason: "must lie in [0, 1)" });
            }
            builder = builder.phi(phi);
        }
        let params = builder.build()?;

        let init = match (self.p1_init, self.p2_init) {
            (None, None) => None,
            (p1, p2) => {
                let mid = default_init(&params);
                Some(PricePair::new(p1.unwrap_or(mid.p1), p2.unwrap_or(mid.p2))?)
            }
        };
        if self.points == Some(0) {
            return Err(Error::Config("points must be at least 1".into()));
        }
        Ok(CliConfig {
            params,
            mode: self.mode.unwrap_or_default(),
            format: self.format.unwrap_or_default(),
            output: self.output.unwrap_or_else(|| PathBuf::from("-")),
            init,
            points: self.points,
            r_values: self.r_values,
            p_min: self.p_min,
            p_max: self.p_max,
        })
    }
}

/// Fully resolved settings for one subcommand run.
#[derive(Debug, Clone, PartialEq)]
pub struct CliConfig {
    pub params: GameParams,
    pub mode: Mode,
    pub format: TableFormat,
    pub output: PathBuf,
    pub init: Option<PricePair>,
    pub points: Option<usize>,
    pub r_values: Option<Vec<f64>>,
    pub p_min: Option<f64>,
    pub p_max: Option<f64>,
}

impl CliConfig {
    /// Defaults, then the `--config` file, then flags.
    pub fn load(args: &CommonArgs, extra: ConfigLayer) -> Result<CliConfig> {
        let file = match &args.config {
            Some(path) => ConfigLayer::from_file(path)?,
            None => ConfigLayer::default(),
        };
        let flags = ConfigLayer::from_args(args)?.overlay(extra);
        file.overlay(flags).resolve()
    }
}

fn sig(x: f64) -> String {
    format_significant(x)
}

fn describe_params(params: &GameParams) -> String {
    params.describe().into_iter().map(|(k, v)| format!("{k}={v}")).collect::<Vec<_>>().join(" ")
}

/// Exit code for a library error.
fn exit_code(err: &Error) -> i32 {
    match err {
        Error::DemandNotConverged { .. }
        | Error::EquilibriumNotConverged { .. }
        | Error::DegenerateFairness
        | Error::NoSignChange { .. } => EXIT_NUMERIC,
        _ => EXIT_INVALID,
    }
}

fn fail(err: &Error, stderr: &mut dyn Write) -> i32 {
    let _ = writeln!(stderr, "error: {err}");
    exit_code(err)
}

pub fn cmd_nash(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let params = &config.params;
    let closed = if config.mode == Mode::Simplified {
        match closed_form_ne(params) {
            Ok(p) => Some(p),
            Err(e) => return fail(&e, err),
        }
    } else {
        None
    };
    let init = config.init.unwrap_or_else(|| default_init(params));
    let ne = match solve_ne(params, config.mode, init) {
        Ok(ne) => ne,
        Err(e) => return fail(&e, err),
    };

    let _ = (|| -> std::io::Result<()> {
        writeln!(out, "mode: {}", config.mode)?;
        writeln!(out, "params: {}", describe_params(params))?;
        writeln!(out, "nash prices: p1 = {}, p2 = {}", sig(ne.prices.p1), sig(ne.prices.p2))?;
        writeln!(out, "utilities: u1 = {}, u2 = {}", sig(ne.utilities.u1), sig(ne.utilities.u2))?;
        writeln!(out, "interior: {}", ne.interior)?;
        writeln!(out, "soc_ok: {}", ne.soc_ok)?;
        writeln!(
            out,
            "converged: {} (iterations = {}, last change = {:e})",
            ne.converged, ne.iterations, ne.last_change
        )?;
        if let Some(closed) = closed {
            let discrepancy = (ne.prices.p1 - closed.p1).abs().max((ne.prices.p2 - closed.p2).abs());
            writeln!(out, "closed form: p1 = p2 = {}", sig(closed.p1))?;
            writeln!(out, "discrepancy: {discrepancy:e}")?;
        }
        Ok(())
    })();

    if ne.converged {
        EXIT_OK
    } else {
        let _ = writeln!(err, "error: best-response iteration did not converge");
        EXIT_NUMERIC
    }
}

pub fn cmd_fair(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let params = &config.params;
    if params.phi() <= 0.0 {
        let _ = writeln!(err, "error: fairness gap identically zero (phi = 0): every roaming charge is fair");
        return EXIT_NUMERIC;
    }
    let found = match find_rstar(params, config.mode) {
        Ok(found) => found,
        Err(e) => return fail(&e, err),
    };
    let _ = (|| -> std::io::Result<()> {
        writeln!(out, "mode: {}", config.mode)?;
        writeln!(out, "params: {}", describe_params(params))?;
        writeln!(out, "r* (root-find): {}", sig(found.r_star))?;
        if config.mode == Mode::Simplified {
            let closed = closed_form_rstar(params);
            writeln!(out, "r* (closed form): {}", sig(closed))?;
            writeln!(out, "discrepancy: {:e}", (found.r_star - closed).abs())?;
        }
        writeln!(out, "gap at root: {:e}", found.gap_at_root)?;
        writeln!(out, "bracket: [{}, {}]", sig(found.bracket.0), sig(found.bracket.1))?;
        Ok(())
    })();
    EXIT_OK
}

fn emit_table(table: &SweepTable, config: &CliConfig, out: &mut dyn Write) -> Result<()> {
    if config.output == Path::new("-") {
        write_table(table, config.format, out).map_err(|source| Error::Io { path: config.output.clone(), source })
    } else {
        export_table(table, config.format, &config.output)
    }
}

pub fn cmd_sweep(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let params = &config.params;
    let grid = match &config.r_values {
        Some(values) => values.clone(),
        None => default_r_grid(params, config.points.unwrap_or(DEFAULT_R_POINTS)),
    };
    let result = sweep_utilities_vs_r(params, &grid, config.mode).and_then(|table| {
        emit_table(&table, config, out)?;
        Ok(table.rows.len())
    });
    match result {
        Ok(rows) => {
            if config.output != Path::new("-") {
                let _ = writeln!(out, "wrote {rows} rows to {}", config.output.display());
            }
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INVALID
        }
    }
}

pub fn cmd_bestresponse(config: &CliConfig, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let params = &config.params;
    let cap = price_cap(params);
    let lo = config.p_min.unwrap_or(0.0);
    let hi = config.p_max.unwrap_or(cap);
    let n = config.points.unwrap_or(DEFAULT_PRICE_POINTS);
    let grid: Vec<f64> = if n == 1 {
        vec![lo]
    } else {
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    };

    let table = match sweep_best_response(params, &grid, config.mode) {
        Ok(table) => table,
        Err(e) => return fail(&e, err),
    };
    if let Err(e) = emit_table(&table, config, out) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_INVALID;
    }
    let line = match estimate_crossing(&table) {
        Some(c) => format!("# crossing: p1 = {}, p2 = {}", sig(c.p1), sig(c.p2)),
        None => "# crossing: out of grid".to_string(),
    };
    let _ = writeln!(out, "{line}");
    EXIT_OK
}

/// Parses `args` (including the program name) and runs the selected subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_INVALID
                }
            };
        }
    };

    let (common, extra) = match &cli.command {
        Command::Nash { common, p1_init, p2_init } => {
            (common, ConfigLayer { p1_init: *p1_init, p2_init: *p2_init, ..Default::default() })
        }
        Command::Fair { common } => (common, ConfigLayer::default()),
        Command::Sweep { common, points, r_values } => {
            (common, ConfigLayer { points: *points, r_values: r_values.clone(), ..Default::default() })
        }
        Command::Bestresponse { common, points, p_min, p_max } => {
            (common, ConfigLayer { points: *points, p_min: *p_min, p_max: *p_max, ..Default::default() })
        }
    };
    let config = match CliConfig::load(common, extra) {
        Ok(config) => config,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            let _ = writeln!(err, "usage: roaming <nash|fair|sweep|bestresponse> [OPTIONS] (see --help)");
            return EXIT_INVALID;
        }
    };

    match cli.command {
        Command::Nash { .. } => cmd_nash(&config, out, err),
        Command::Fair { .. } => cmd_fair(&config, out, err),
        Command::Sweep { .. } => cmd_sweep(&config, out, err),
        Command::Bestresponse { .. } => cmd_bestresponse(&config, out, err),
    }
}
