//! Test-only oracles, kept independent of the library's solver paths.

#![allow(dead_code)]

use roaming::{Congestion, GameParams, PricePair};

/// Reference congestion factor written straight from its definition.
pub fn g_ref(d: f64, b: f64, gamma: f64, model: Congestion) -> f64 {
    match model {
        Congestion::None => 1.0,
        _ if d >= b - gamma => 0.0,
        Congestion::Linear => 1.0 - d / (b - gamma),
        Congestion::MM1 => (1.0 - gamma / (b - d)) / (1.0 - gamma / b),
    }
}

/// `(D_max (1 - delta pbar)^+ * share1, ... * share2)`.
pub fn amplitudes_ref(prices: PricePair, params: &GameParams) -> (f64, f64) {
    let phi = 1.0 - params.b2() / params.b1();
    let eff2 = prices.p2 + phi * params.r();
    let pbar = (prices.p1 + eff2) / 2.0;
    let total = params.d_max() * (1.0 - params.delta() * pbar).max(0.0);
    let sum = prices.p1 + eff2;
    if sum > 0.0 {
        (total * eff2 / sum, total * prices.p1 / sum)
    } else {
        (total / 2.0, total / 2.0)
    }
}

/// Root of the increasing residual `h` on `[0, upper]` by nested grid scans:
/// each level scans `points` cells and zooms into the first one where `h`
/// turns nonnegative.
pub fn scan_root(h: impl Fn(f64) -> f64, upper: f64, points: usize, levels: usize) -> f64 {
    if h(0.0) >= 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, upper);
    for _ in 0..levels {
        let step = (hi - lo) / points as f64;
        // h(hi) >= 0 holds at every level, so the last cell is the fallback.
        let mut next = (hi - step, hi);
        for i in 1..=points {
            let x = lo + step * i as f64;
            if h(x) >= 0.0 {
                next = (x - step, x);
                break;
            }
        }
        (lo, hi) = next;
    }
    0.5 * (lo + hi)
}

/// Brute-force demands: entrant equation first, then the incumbent's given it.
pub fn demand_by_scan(prices: PricePair, params: &GameParams) -> (f64, f64) {
    let phi = 1.0 - params.b2() / params.b1();
    let (a1, a2) = amplitudes_ref(prices, params);
    let (b1, b2, gamma, model) = (params.b1(), params.b2(), params.gamma(), params.congestion());
    let d2 = scan_root(|x| x - a2 * g_ref((1.0 - phi) * x, b2, gamma, model), a2, 1000, 3);
    let d1 = scan_root(|x| x - a1 * g_ref(x + phi * d2, b1, gamma, model), a1, 1000, 3);
    (d1, d2)
}

/// Simplified utilities by direct substitution.
pub fn simplified_ref(p1: f64, p2: f64, delta: f64, phi: f64, r: f64, d_max: f64) -> (f64, f64) {
    let pbar = (p1 + p2 + phi * r) / 2.0;
    let s = p1 + p2 + phi * r;
    let f = 1.0 - delta * pbar;
    let u1 = p1 * f * (p2 + phi * r) / s + r * phi * f * p1 / s;
    let u2 = p2 * f * p1 / s;
    (d_max * u1, d_max * u2)
}
