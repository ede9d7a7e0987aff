// Tabulate both best-response curves and locate their intersection.
//
// Run with `cargo run --example best_response_curves`.

use std::error::Error;

use roaming::{estimate_crossing, price_cap, sweep_best_response, GameParams, Mode};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = GameParams::builder().phi(0.9).r(0.8).build()?;
    let cap = price_cap(&params);
    let grid: Vec<f64> = (0..=64).map(|i| cap * i as f64 / 64.0).collect();

    let table = sweep_best_response(&params, &grid, Mode::Simplified)?;
    println!("{:>8} {:>10} {:>10}", "p", "br1(p)", "br2(p)");
    for row in table.rows.iter().step_by(8) {
        println!("{:>8.4} {:>10.6} {:>10.6}", row[0].unwrap(), row[1].unwrap(), row[2].unwrap());
    }

    let crossing = estimate_crossing(&table).ok_or("curves do not cross on the grid")?;
    println!("curves cross near ({:.4}, {:.4})", crossing.p1, crossing.p2);
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
