//! Demand and utility model for the incumbent/entrant pricing game.
//!
//! Provider 1 is the incumbent, provider 2 the entrant. A fraction `phi` of
//! the entrant's demand roams onto the incumbent's network at the regulated
//! charge `r` per unit demand, so entrant customers effectively pay
//! `p2 + phi * r`.
//!
//! Total demand falls linearly in the average effective price, is split
//! between the providers inversely to price, and is thinned by a congestion
//! factor that itself depends on the carried demand. The resulting demand
//! equations are implicit and are solved as a pair of scalar fixed points.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::numeric::bisect_increasing;

/// Relative bracket tolerance of the demand fixed-point bisection.
pub const DEMAND_RTOL: f64 = 1e-12;
/// Iteration cap of the demand fixed-point bisection.
pub const DEMAND_MAX_ITER: usize = 200;

/// Congestion factor family `g(D, B)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Congestion {
    /// `g == 1`: no congestion.
    #[default]
    None,
    /// `g(D, B) = 1 - D / (B - gamma)`.
    Linear,
    /// Normalized M/M/1 mean-delay form `(1 - gamma/(B - D)) / (1 - gamma/B)`.
    MM1,
}

impl fmt::Display for Congestion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Congestion::None => "none",
            Congestion::Linear => "linear",
            Congestion::MM1 => "mm1",
        })
    }
}

impl FromStr for Congestion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "none" => Ok(Congestion::None),
            "linear" => Ok(Congestion::Linear),
            "mm1" => Ok(Congestion::MM1),
            other => Err(Error::Config(format!(
                "unknown congestion model `{other}` (expected none, linear or mm1)"
            ))),
        }
    }
}

/// Which utility functions the game is played with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Closed-form utilities without op-ex and without congestion.
    #[default]
    Simplified,
    /// Utilities built from the implicit congested demand and op-ex terms.
    Full,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(match self {
            Mode::Simplified => "simplified",
            Mode::Full => "full",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "simplified" => Ok(Mode::Simplified),
            "full" => Ok(Mode::Full),
            other => Err(Error::Config(format!(
                "unknown mode `{other}` (expected simplified or full)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Provider {
    Incumbent,
    Entrant,
}

impl Provider {
    pub fn other(self) -> Provider {
        match self {
            Provider::Incumbent => Provider::Entrant,
            Provider::Entrant => Provider::Incumbent,
        }
    }
}

/// Exogenous parameters of the game. Construct through [`GameParams::builder`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams {
    delta: f64,
    d_max: f64,
    r: f64,
    b1: f64,
    b2: f64,
    gamma: f64,
    cd1: f64,
    cd2: f64,
    cb1: f64,
    cb2: f64,
    congestion: Congestion,
}

impl Default for GameParams {
    fn default() -> Self {
        GameParamsBuilder::default()
            .build()
            .expect("default parameters are valid")
    }
}

impl GameParams {
    pub fn builder() -> GameParamsBuilder {
        GameParamsBuilder::default()
    }

    /// Builder seeded with this parameter set.
    pub fn to_builder(&self) -> GameParamsBuilder {
        GameParamsBuilder {
            delta: self.delta,
            d_max: self.d_max,
            r: self.r,
            b1: self.b1,
            b2: self.b2,
            gamma: self.gamma,
            cd1: self.cd1,
            cd2: self.cd2,
            cb1: self.cb1,
            cb2: self.cb2,
            congestion: self.congestion,
        }
    }

    /// Same parameters with a different roaming charge.
    pub fn with_r(&self, r: f64) -> Result<GameParams> {
        self.to_builder().r(r).build()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }
    pub fn d_max(&self) -> f64 {
        self.d_max
    }
    pub fn r(&self) -> f64 {
        self.r
    }
    pub fn b1(&self) -> f64 {
        self.b1
    }
    pub fn b2(&self) -> f64 {
        self.b2
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn cd1(&self) -> f64 {
        self.cd1
    }
    pub fn cd2(&self) -> f64 {
        self.cd2
    }
    pub fn cb1(&self) -> f64 {
        self.cb1
    }
    pub fn cb2(&self) -> f64 {
        self.cb2
    }
    pub fn congestion(&self) -> Congestion {
        self.congestion
    }

    /// Roaming fraction `1 - B2/B1`, in `[0, 1)`.
    pub fn phi(&self) -> f64 {
        phi(self)
    }

    /// `delta * r * phi`; the simplified game has interior prices iff this is below 2.
    pub fn interiority_product(&self) -> f64 {
        self.delta * self.r * self.phi()
    }

    pub fn is_interior(&self) -> bool {
        self.interiority_product() < 2.0
    }

    /// Key/value listing used as table metadata.
    pub fn describe(&self) -> Vec<(String, String)> {
        vec![
            ("delta".into(), self.delta.to_string()),
            ("dmax".into(), self.d_max.to_string()),
            ("r".into(), self.r.to_string()),
            ("b1".into(), self.b1.to_string()),
            ("b2".into(), self.b2.to_string()),
            ("phi".into(), self.phi().to_string()),
            ("gamma".into(), self.gamma.to_string()),
            ("cd1".into(), self.cd1.to_string()),
            ("cd2".into(), self.cd2.to_string()),
            ("cb1".into(), self.cb1.to_string()),
            ("cb2".into(), self.cb2.to_string()),
            ("congestion".into(), self.congestion.to_string()),
        ]
    }
}

/// Builder for [`GameParams`]; every setter is optional and `build` validates.
///
/// Defaults: `delta = 1`, `d_max = 1`, `r = 0`, `B1 = 10`, `B2 = 1`
/// (so `phi = 0.9`), `gamma = 0.1`, zero op-ex, no congestion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParamsBuilder {
    delta: f64,
    d_max: f64,
    r: f64,
    b1: f64,
    b2: f64,
    gamma: f64,
    cd1: f64,
    cd2: f64,
    cb1: f64,
    cb2: f64,
    congestion: Congestion,
}

impl Default for GameParamsBuilder {
    fn default() -> Self {
        GameParamsBuilder {
            delta: 1.0,
            d_max: 1.0,
            r: 0.0,
            b1: 10.0,
            b2: 1.0,
            gamma: 0.1,
            cd1: 0.0,
            cd2: 0.0,
            cb1: 0.0,
            cb2: 0.0,
            congestion: Congestion::None,
        }
    }
}

macro_rules! setter {
    ($($name:ident),*) => {
        $(
            pub fn $name(mut self, value: f64) -> Self {
                self.$name = value;
                self
            }
        )*
    };
}

impl GameParamsBuilder {
    setter!(delta, d_max, r, b1, b2, gamma, cd1, cd2, cb1, cb2);

    pub fn congestion(mut self, congestion: Congestion) -> Self {
        self.congestion = congestion;
        self
    }

    /// Sets `B2 = B1 (1 - phi)` from the current `B1`.
    pub fn phi(mut self, phi: f64) -> Self {
        self.b2 = self.b1 * (1.0 - phi);
        self
    }

    pub fn build(self) -> Result<GameParams> {
        let positive = [("delta", self.delta), ("dmax", self.d_max), ("b1", self.b1), ("b2", self.b2), ("gamma", self.gamma)];
        for (name, value) in positive {
            if !value.is_finite() || value <= 0.0 {
                return Err(Error::InvalidParameter { name, value, reason: "must be finite and > 0" });
            }
        }
        let nonnegative = [("r", self.r), ("cd1", self.cd1), ("cd2", self.cd2), ("cb1", self.cb1), ("cb2", self.cb2)];
        for (name, value) in nonnegative {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidParameter { name, value, reason: "must be finite and >= 0" });
            }
        }
        if self.b2 > self.b1 {
            return Err(Error::InvalidParameter {
                name: "b2",
                value: self.b2,
                reason: "entrant capacity must not exceed incumbent capacity b1",
            });
        }
        if self.gamma >= self.b2 {
            return Err(Error::InvalidParameter {
                name: "gamma",
                value: self.gamma,
                reason: "headroom must be below the entrant capacity b2",
            });
        }
        Ok(GameParams {
            delta: self.delta,
            d_max: self.d_max,
            r: self.r,
            b1: self.b1,
            b2: self.b2,
            gamma: self.gamma,
            cd1: self.cd1,
            cd2: self.cd2,
            cb1: self.cb1,
            cb2: self.cb2,
            congestion: self.congestion,
        })
    }
}

/// Access prices `(p1, p2)` of incumbent and entrant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PricePair {
    pub p1: f64,
    pub p2: f64,
}

impl PricePair {
    pub fn new(p1: f64, p2: f64) -> Result<Self> {
        for (name, value) in [("p1", p1), ("p2", p2)] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::InvalidPrice { name, value });
            }
        }
        Ok(PricePair { p1, p2 })
    }

    pub fn get(&self, provider: Provider) -> f64 {
        match provider {
            Provider::Incumbent => self.p1,
            Provider::Entrant => self.p2,
        }
    }

    pub fn with(self, provider: Provider, price: f64) -> PricePair {
        match provider {
            Provider::Incumbent => PricePair { p1: price, ..self },
            Provider::Entrant => PricePair { p2: price, ..self },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DemandPair {
    pub d1: f64,
    pub d2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UtilityPair {
    pub u1: f64,
    pub u2: f64,
}

impl UtilityPair {
    pub fn get(&self, provider: Provider) -> f64 {
        match provider {
            Provider::Incumbent => self.u1,
            Provider::Entrant => self.u2,
        }
    }
}

pub fn phi(params: &GameParams) -> f64 {
    1.0 - params.b2 / params.b1
}

/// Congestion factor `g(d, b)` with headroom `gamma`.
///
/// Extended by 0 for `d >= b - gamma` and by 1 for `d <= 0`.
pub fn congestion_factor(d: f64, b: f64, gamma: f64, model: Congestion) -> Result<f64> {
    if !(b > gamma && gamma > 0.0) {
        return Err(Error::CongestionDomain { capacity: b, headroom: gamma });
    }
    Ok(congestion_unchecked(d, b, gamma, model))
}

fn congestion_unchecked(d: f64, b: f64, gamma: f64, model: Congestion) -> f64 {
    let d = d.max(0.0);
    match model {
        Congestion::None => 1.0,
        _ if d >= b - gamma => 0.0,
        Congestion::Linear => (1.0 - d / (b - gamma)).clamp(0.0, 1.0),
        Congestion::MM1 => ((1.0 - gamma / (b - d)) / (1.0 - gamma / b)).clamp(0.0, 1.0),
    }
}

/// Average effective price `(p1 + p2 + phi r) / 2`.
pub fn average_price(prices: PricePair, params: &GameParams) -> f64 {
    raw_average_price(prices.p1, prices.p2, params)
}

fn raw_average_price(p1: f64, p2: f64, params: &GameParams) -> f64 {
    0.5 * (p1 + p2 + params.phi() * params.r)
}

/// Uncongested demand amplitudes: total demand `D_max (1 - delta pbar)^+`
/// split by the price-competition shares.
fn demand_amplitudes(p1: f64, p2: f64, params: &GameParams) -> (f64, f64) {
    let phi = params.phi();
    let total = params.d_max * (1.0 - params.delta * raw_average_price(p1, p2, params)).max(0.0);
    let effective2 = p2 + phi * params.r;
    let sum = p1 + effective2;
    let (share1, share2) = if sum > 0.0 { (effective2 / sum, p1 / sum) } else { (0.5, 0.5) };
    (total * share1, total * share2)
}

/// Unique root of `x = amp * g(slope * x + offset, b)`.
fn congested_fixed_point(amp: f64, slope: f64, offset: f64, b: f64, gamma: f64, model: Congestion) -> Result<f64> {
    if model == Congestion::None || amp == 0.0 {
        return Ok(amp);
    }
    if congestion_unchecked(offset, b, gamma, model) == 0.0 {
        return Ok(0.0);
    }
    let hi = amp.min((b - gamma - offset) / slope);
    let residual = |x: f64| x - amp * congestion_unchecked(slope * x + offset, b, gamma, model);
    bisect_increasing(residual, 0.0, hi, DEMAND_RTOL, DEMAND_MAX_ITER)
}

fn raw_demand(p1: f64, p2: f64, params: &GameParams) -> Result<DemandPair> {
    let phi = params.phi();
    let (a1, a2) = demand_amplitudes(p1, p2, params);
    let model = params.congestion;
    // The entrant equation involves only D2; the incumbent's depends on D2 through the roamed load.
    let d2 = congested_fixed_point(a2, 1.0 - phi, 0.0, params.b2, params.gamma, model)?;
    let d1 = congested_fixed_point(a1, 1.0, phi * d2, params.b1, params.gamma, model)?;
    Ok(DemandPair { d1, d2 })
}

/// Realized demands solving the implicit demand equations at `prices`.
pub fn solve_demand(prices: PricePair, params: &GameParams) -> Result<DemandPair> {
    raw_demand(prices.p1, prices.p2, params)
}

/// Residuals `(D1 - rhs1, D2 - rhs2)` of the demand equations at a candidate demand.
pub fn demand_residuals(prices: PricePair, demand: DemandPair, params: &GameParams) -> (f64, f64) {
    let phi = params.phi();
    let (a1, a2) = demand_amplitudes(prices.p1, prices.p2, params);
    let g1 = congestion_unchecked(demand.d1 + phi * demand.d2, params.b1, params.gamma, params.congestion);
    let g2 = congestion_unchecked((1.0 - phi) * demand.d2, params.b2, params.gamma, params.congestion);
    (demand.d1 - a1 * g1, demand.d2 - a2 * g2)
}

pub(crate) fn raw_utilities_full(p1: f64, p2: f64, params: &GameParams) -> Result<UtilityPair> {
    let phi = params.phi();
    let DemandPair { d1, d2 } = raw_demand(p1, p2, params)?;
    let u1 = (p1 - params.cd1) * d1 + (params.r - params.cd1) * phi * d2 - params.cb1 * params.b1;
    let u2 = (p2 - (1.0 - phi) * params.cd2) * d2 - params.cb2 * params.b2;
    Ok(UtilityPair { u1, u2 })
}

pub(crate) fn raw_utilities_simplified(p1: f64, p2: f64, params: &GameParams) -> UtilityPair {
    let phi = params.phi();
    let r = params.r;
    let price_factor = (1.0 - params.delta * raw_average_price(p1, p2, params)).max(0.0);
    let sum = p1 + p2 + phi * r;
    let (share1, share2) = if sum > 0.0 { ((p2 + phi * r) / sum, p1 / sum) } else { (0.5, 0.5) };
    let u1 = p1 * price_factor * share1 + r * phi * price_factor * share2;
    let u2 = p2 * price_factor * share2;
    UtilityPair { u1: params.d_max * u1, u2: params.d_max * u2 }
}

pub(crate) fn raw_utilities(p1: f64, p2: f64, params: &GameParams, mode: Mode) -> Result<UtilityPair> {
    match mode {
        Mode::Simplified => Ok(raw_utilities_simplified(p1, p2, params)),
        Mode::Full => raw_utilities_full(p1, p2, params),
    }
}

/// Net utilities with op-ex and congested demand.
pub fn utilities_full(prices: PricePair, params: &GameParams) -> Result<UtilityPair> {
    raw_utilities_full(prices.p1, prices.p2, params)
}

/// Utilities of the uncongested game without op-ex.
pub fn utilities_simplified(prices: PricePair, params: &GameParams) -> UtilityPair {
    raw_utilities_simplified(prices.p1, prices.p2, params)
}

pub fn utilities(prices: PricePair, params: &GameParams, mode: Mode) -> Result<UtilityPair> {
    raw_utilities(prices.p1, prices.p2, params, mode)
}
