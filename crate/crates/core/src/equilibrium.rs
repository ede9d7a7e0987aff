//! Best responses and Nash equilibria of the pricing game.

use crate::error::{Error, Result};
use crate::model::{raw_utilities, GameParams, Mode, PricePair, Provider, UtilityPair};
use crate::numeric::{central_first, central_second, golden_section_max};

/// Final bracket width of the best-response golden-section search.
pub const BEST_RESPONSE_WIDTH: f64 = 1e-10;
/// Sup-norm price change at which best-response iteration stops.
pub const NASH_TOLERANCE: f64 = 1e-8;
pub const NASH_MAX_ITER: usize = 10_000;
/// Relative step of the second-derivative check.
pub const SOC_STEP: f64 = 1e-5;
/// Relative step of the first-order residual.
pub const FONC_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BestResponseResult {
    pub price: f64,
    pub utility: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumResult {
    pub prices: PricePair,
    pub utilities: UtilityPair,
    pub converged: bool,
    pub iterations: usize,
    /// Sup-norm price change of the last round.
    pub last_change: f64,
    /// `delta * r * phi < 2`.
    pub interior: bool,
    /// Both own-price second derivatives are negative at `prices`.
    pub soc_ok: bool,
}

/// Upper bound `max(0, 2/delta - phi r)` on prices with positive total demand.
pub fn price_cap(params: &GameParams) -> f64 {
    (2.0 / params.delta() - params.phi() * params.r()).max(0.0)
}

/// Utility of `provider` when it charges `own` and its rival charges `other`.
pub(crate) fn own_utility(provider: Provider, own: f64, other: f64, params: &GameParams, mode: Mode) -> Result<f64> {
    let (p1, p2) = match provider {
        Provider::Incumbent => (own, other),
        Provider::Entrant => (other, own),
    };
    Ok(raw_utilities(p1, p2, params, mode)?.get(provider))
}

/// Utility-maximizing price of `provider` on `[0, price_cap]` against `other_price`.
pub fn best_response(
    provider: Provider,
    other_price: f64,
    params: &GameParams,
    mode: Mode,
) -> Result<BestResponseResult> {
    if !other_price.is_finite() || other_price < 0.0 {
        return Err(Error::InvalidPrice { name: "other_price", value: other_price });
    }
    let cap = price_cap(params);
    let objective = |p: f64| own_utility(provider, p, other_price, params, mode);
    let max = golden_section_max(objective, 0.0, cap, BEST_RESPONSE_WIDTH)?;
    let (price, utility) = polish_interior_max(objective, max.x, max.fx, cap)?;
    Ok(BestResponseResult {
        price,
        utility,
        bracket: (0.0, cap),
        iterations: max.iterations,
    })
}

/// Refines an interior golden-section maximum by bisecting the sign change of
/// the central-difference slope in a small window around it.
///
/// Value comparisons resolve the argmax only to about `sqrt(eps)`; the slope
/// changes sign sharply, which pins the argmax near round-off. The refinement
/// is kept only if it does not lose utility beyond round-off.
fn polish_interior_max<F>(mut f: F, x0: f64, f0: f64, cap: f64) -> Result<(f64, f64)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let room = x0.min(cap - x0);
    if room.is_nan() || room <= 0.0 {
        return Ok((x0, f0));
    }
    let window = (1e-6 * x0.max(1.0)).min(0.5 * room);
    let step = 0.25 * window;
    let mut slope = |x: f64| central_first(&mut f, x, step);

    let (mut lo, mut hi) = (x0 - window, x0 + window);
    if !(slope(lo)? > 0.0 && slope(hi)? < 0.0) {
        return Ok((x0, f0));
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let x = 0.5 * (lo + hi);
    let fx = f(x)?;
    if fx >= f0 - 16.0 * f64::EPSILON * f0.abs() {
        Ok((x, fx))
    } else {
        Ok((x0, f0))
    }
}

/// Symmetric interior equilibrium of the simplified game,
/// `p* = (1 - 2 delta r phi + sqrt(4 delta r phi + 1)) / (4 delta)` for both providers.
pub fn closed_form_ne(params: &GameParams) -> Result<PricePair> {
    let x = params.interiority_product();
    if x >= 2.0 {
        return Err(Error::Interiority { product: x });
    }
    let p = ((1.0 - 2.0 * x + (4.0 * x + 1.0).sqrt()) / (4.0 * params.delta())).max(0.0);
    PricePair::new(p, p)
}

/// Order of the two best-response updates within one round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum UpdateOrder {
    #[default]
    IncumbentFirst,
    EntrantFirst,
}

/// Gauss-Seidel best-response iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NashSolver {
    pub tolerance: f64,
    pub max_iter: usize,
    pub order: UpdateOrder,
}

impl Default for NashSolver {
    fn default() -> Self {
        NashSolver { tolerance: NASH_TOLERANCE, max_iter: NASH_MAX_ITER, order: UpdateOrder::default() }
    }
}

impl NashSolver {
    pub fn solve(&self, params: &GameParams, mode: Mode, init: PricePair) -> Result<EquilibriumResult> {
        let init = PricePair::new(init.p1, init.p2)?;
        let sequence = match self.order {
            UpdateOrder::IncumbentFirst => [Provider::Incumbent, Provider::Entrant],
            UpdateOrder::EntrantFirst => [Provider::Entrant, Provider::Incumbent],
        };

        let mut prices = init;
        let mut last_change = f64::INFINITY;
        let mut iterations = 0;
        let mut converged = false;
        while iterations < self.max_iter {
            iterations += 1;
            let previous = prices;
            for provider in sequence {
                let br = best_response(provider, prices.get(provider.other()), params, mode)?;
                prices = prices.with(provider, br.price);
            }
            last_change = (prices.p1 - previous.p1).abs().max((prices.p2 - previous.p2).abs());
            if last_change < self.tolerance {
                converged = true;
                break;
            }
        }

        let utilities = raw_utilities(prices.p1, prices.p2, params, mode)?;
        let soc_ok = second_order_ok(prices, params, mode)?;
        Ok(EquilibriumResult {
            prices,
            utilities,
            converged,
            iterations,
            last_change,
            interior: params.is_interior(),
            soc_ok,
        })
    }
}

/// Midpoint start `(cap/2, cap/2)`.
pub fn default_init(params: &GameParams) -> PricePair {
    let half = 0.5 * price_cap(params);
    PricePair { p1: half, p2: half }
}

/// Best-response iteration with the default solver settings.
pub fn solve_ne(params: &GameParams, mode: Mode, init: PricePair) -> Result<EquilibriumResult> {
    NashSolver::default().solve(params, mode, init)
}

fn second_order_ok(prices: PricePair, params: &GameParams, mode: Mode) -> Result<bool> {
    let (d1, d2) = own_price_second_derivatives(prices, params, mode)?;
    Ok(d1 < 0.0 && d2 < 0.0)
}

/// `(d²U1/dp1², d²U2/dp2²)` by central differences with step `1e-5 max(1, p)`.
pub fn own_price_second_derivatives(prices: PricePair, params: &GameParams, mode: Mode) -> Result<(f64, f64)> {
    let mut out = [0.0; 2];
    for (slot, provider) in out.iter_mut().zip([Provider::Incumbent, Provider::Entrant]) {
        let own = prices.get(provider);
        let other = prices.get(provider.other());
        let step = SOC_STEP * own.max(1.0);
        *slot = central_second(|p| own_utility(provider, p, other, params, mode), own, step)?;
    }
    Ok((out[0], out[1]))
}

/// `(dU1/dp1, dU2/dp2)` by central differences with step `1e-6 max(1, p)`.
pub fn fonc_residual(prices: PricePair, params: &GameParams, mode: Mode) -> Result<(f64, f64)> {
    let mut out = [0.0; 2];
    for (slot, provider) in out.iter_mut().zip([Provider::Incumbent, Provider::Entrant]) {
        let own = prices.get(provider);
        let other = prices.get(provider.other());
        let step = FONC_STEP * own.max(1.0);
        *slot = central_first(|p| own_utility(provider, p, other, params, mode), own, step)?;
    }
    Ok((out[0], out[1]))
}
