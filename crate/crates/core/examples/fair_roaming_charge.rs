// Fair roaming charge r* across roaming fractions, by root finding and in closed form.
//
// Run with `cargo run --example fair_roaming_charge`.

use std::error::Error;

use roaming::{closed_form_rstar, find_rstar, GameParams, Mode};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    println!("{:>6} {:>12} {:>12} {:>10}", "phi", "root-find", "closed", "|diff|");
    for phi in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let params = GameParams::builder().delta(1.0).phi(phi).build()?;
        let found = find_rstar(&params, Mode::Simplified)?;
        let closed = closed_form_rstar(&params);
        println!("{phi:>6.2} {:>12.8} {closed:>12.8} {:>10.2e}", found.r_star, (found.r_star - closed).abs());
    }

    // Infrastructure op-ex enters the full game; equal per-unit costs cancel in the gap.
    let params = GameParams::builder().phi(0.9).cb1(0.01).cb2(0.01).build()?;
    let found = find_rstar(&params, Mode::Full)?;
    println!("full game with cb1 = cb2 = 0.01: r* = {:.6}", found.r_star);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
