//! Solver for a two-provider cellular pricing game with a regulated roaming
//! charge.
//!
//! An incumbent (provider 1) and a smaller entrant (provider 2) set access
//! prices. Part of the entrant's traffic roams onto the incumbent's network
//! and the entrant pays a regulated charge `r` per unit of roamed demand.
//! The crate computes demands (optionally under congestion), best responses,
//! Nash-equilibrium prices, and the roaming charge at which equilibrium net
//! revenue is proportional to deployed infrastructure.
//!
//! ```
//! use roaming::{closed_form_ne, solve_ne, default_init, GameParams, Mode};
//!
//! let params = GameParams::builder().delta(1.0).b1(10.0).b2(1.0).r(0.8).build()?;
//! let ne = solve_ne(&params, Mode::Simplified, default_init(&params))?;
//! let exact = closed_form_ne(&params)?;
//! assert!((ne.prices.p1 - exact.p1).abs() < 1e-6);
//! # Ok::<(), roaming::Error>(())
//! ```

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod fairness;
pub mod model;
pub mod numeric;
pub mod sweep;

pub use equilibrium::{
    best_response, closed_form_ne, default_init, fonc_residual, price_cap, solve_ne, BestResponseResult,
    EquilibriumResult, NashSolver, UpdateOrder,
};
pub use error::{Error, Result};
pub use fairness::{closed_form_rstar, fairness_gap, find_rstar, FairnessMethod, FairnessResult};
pub use model::{
    average_price, congestion_factor, phi, solve_demand, utilities, utilities_full, utilities_simplified, Congestion,
    DemandPair, GameParams, GameParamsBuilder, Mode, PricePair, Provider, UtilityPair,
};
pub use sweep::{
    default_r_grid, estimate_crossing, export_table, sweep_best_response, sweep_utilities_vs_r, Crossing,
    SweepTable, TableFormat,
};
