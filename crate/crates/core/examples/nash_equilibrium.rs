// Solve the pricing game at the reference scenario and certify the result.
//
// Run with `cargo run --example nash_equilibrium`.

use std::error::Error;

use roaming::equilibrium::own_price_second_derivatives;
use roaming::{closed_form_ne, default_init, fonc_residual, solve_ne, GameParams, Mode};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    // B1 = 10, B2 = 1 gives a roaming fraction of 0.9.
    let params = GameParams::builder().delta(1.0).b1(10.0).b2(1.0).r(0.8).build()?;

    let ne = solve_ne(&params, Mode::Simplified, default_init(&params))?;
    let exact = closed_form_ne(&params)?;
    println!("best-response iteration: ({:.8}, {:.8}) after {} rounds", ne.prices.p1, ne.prices.p2, ne.iterations);
    println!("closed form:             ({:.8}, {:.8})", exact.p1, exact.p2);
    println!("utilities: U1 = {:.6}, U2 = {:.6}", ne.utilities.u1, ne.utilities.u2);

    let (g1, g2) = fonc_residual(ne.prices, &params, Mode::Simplified)?;
    let (h1, h2) = own_price_second_derivatives(ne.prices, &params, Mode::Simplified)?;
    println!("first-order residuals:  ({g1:.2e}, {g2:.2e})");
    println!("second derivatives:     ({h1:.4}, {h2:.4})  soc_ok = {}", ne.soc_ok);

    if !(ne.converged && (ne.prices.p1 - exact.p1).abs() < 1e-6 && ne.soc_ok) {
        return Err("equilibrium does not match the closed form".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
