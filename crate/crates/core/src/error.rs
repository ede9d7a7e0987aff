use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid price `{name}` = {value}: prices must be finite and nonnegative")]
    InvalidPrice { name: &'static str, value: f64 },

    #[error("congestion factor undefined: capacity {capacity} must exceed headroom {headroom}")]
    CongestionDomain { capacity: f64, headroom: f64 },

    #[error("demand fixed point did not converge after {iterations} bisection steps (bracket width {width:e})")]
    DemandNotConverged { iterations: usize, width: f64 },

    #[error("interiority violated: delta*r*phi = {product} must be < 2 (no feasible positive prices)")]
    Interiority { product: f64 },

    #[error("fairness gap identically zero: phi = 0 makes every roaming charge fair")]
    DegenerateFairness,

    #[error("no sign change on [{a}, {b}]: f(a) = {fa:e}, f(b) = {fb:e}")]
    NoSignChange { a: f64, fa: f64, b: f64, fb: f64 },

    #[error("Nash iteration did not converge after {iterations} rounds (last price change {last_change:e})")]
    EquilibriumNotConverged { iterations: usize, last_change: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),
}
