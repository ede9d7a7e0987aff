//! Fair roaming charge.
//!
//! Equilibrium revenue is fair when it is proportional to deployed
//! infrastructure, `U1*/B1 = U2*/B2`. With `phi = 1 - B2/B1` this is the
//! root of the gap `(1 - phi) U1*(r) - U2*(r)`; negative gaps favor the
//! entrant and positive gaps the incumbent.

use crate::equilibrium::{default_init, solve_ne};
use crate::error::{Error, Result};
use crate::model::{GameParams, Mode};
use crate::numeric::brent_root;

/// Bracket width at which the root search stops.
pub const RSTAR_XTOL: f64 = 1e-9;
const RSTAR_MAX_ITER: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FairnessMethod {
    ClosedForm,
    RootFind,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FairnessResult {
    pub r_star: f64,
    pub gap_at_root: f64,
    pub method: FairnessMethod,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

/// `(1 - phi) U1* - U2*` at the equilibrium reached from the default start.
pub fn fairness_gap(r: f64, params: &GameParams, mode: Mode) -> Result<f64> {
    let params = params.with_r(r)?;
    if mode == Mode::Simplified && !params.is_interior() {
        return Err(Error::Interiority { product: params.interiority_product() });
    }
    let ne = solve_ne(&params, mode, default_init(&params))?;
    if !ne.converged {
        return Err(Error::EquilibriumNotConverged { iterations: ne.iterations, last_change: ne.last_change });
    }
    Ok((1.0 - params.phi()) * ne.utilities.u1 - ne.utilities.u2)
}

/// `r* = 2 (2 - phi) / (delta (4 - 3 phi)^2)`.
pub fn closed_form_rstar(params: &GameParams) -> f64 {
    let phi = params.phi();
    2.0 * (2.0 - phi) / (params.delta() * (4.0 - 3.0 * phi).powi(2))
}

/// Root of the fairness gap on `[0, 2/(delta phi) - eps]`, `eps = 1e-6/(delta phi)`.
pub fn find_rstar(params: &GameParams, mode: Mode) -> Result<FairnessResult> {
    let phi = params.phi();
    if phi <= 0.0 {
        return Err(Error::DegenerateFairness);
    }
    let scale = params.delta() * phi;
    let upper = 2.0 / scale - 1e-6 / scale;
    let root = brent_root(|r| fairness_gap(r, params, mode), 0.0, upper, RSTAR_XTOL, RSTAR_MAX_ITER)?;
    Ok(FairnessResult {
        r_star: root.x,
        gap_at_root: root.fx,
        method: FairnessMethod::RootFind,
        bracket: (0.0, upper),
        iterations: root.iterations,
    })
}

impl FairnessResult {
    /// Wraps the closed-form value, with its gap evaluated numerically.
    pub fn closed_form(params: &GameParams) -> Result<FairnessResult> {
        let r_star = closed_form_rstar(params);
        Ok(FairnessResult {
            r_star,
            gap_at_root: fairness_gap(r_star, params, Mode::Simplified)?,
            method: FairnessMethod::ClosedForm,
            bracket: (r_star, r_star),
            iterations: 0,
        })
    }
}
