// Demand under congestion and the equilibrium of the full game.
//
// Run with `cargo run --example congested_demand`.

use std::error::Error;

use roaming::{default_init, solve_demand, solve_ne, Congestion, GameParams, Mode, PricePair};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let prices = PricePair::new(0.3, 0.3)?;
    for congestion in [Congestion::None, Congestion::Linear, Congestion::MM1] {
        let params = GameParams::builder()
            .r(0.8)
            .d_max(3.0)
            .b1(10.0)
            .b2(1.0)
            .gamma(0.1)
            .congestion(congestion)
            .build()?;
        let d = solve_demand(prices, &params)?;
        println!("{congestion:>6}: D1 = {:.6}, D2 = {:.6}", d.d1, d.d2);
    }

    let params = GameParams::builder()
        .r(0.8)
        .d_max(3.0)
        .gamma(0.1)
        .cd1(0.02)
        .cb1(0.001)
        .congestion(Congestion::MM1)
        .build()?;
    let ne = solve_ne(&params, Mode::Full, default_init(&params))?;
    println!(
        "full game (M/M/1): p* = ({:.6}, {:.6}), U* = ({:.6}, {:.6}), converged = {}",
        ne.prices.p1, ne.prices.p2, ne.utilities.u1, ne.utilities.u2, ne.converged
    );
    if !ne.converged {
        return Err("full-mode iteration did not converge".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
