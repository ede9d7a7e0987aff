// Equilibrium utilities and the fairness gap as the roaming charge grows.
//
// Run with `cargo run --example utilities_vs_roaming`.

use std::error::Error;

use roaming::{closed_form_rstar, default_r_grid, sweep_utilities_vs_r, GameParams, Mode};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = GameParams::builder().delta(1.0).phi(0.9).build()?;
    let grid = default_r_grid(&params, 40);
    let table = sweep_utilities_vs_r(&params, &grid, Mode::Simplified)?;

    println!("{:>8} {:>10} {:>10} {:>11}", "r", "U1/Dmax", "U2/Dmax", "gap/Dmax");
    for row in &table.rows {
        let v: Vec<f64> = row.iter().map(|c| c.unwrap_or(f64::NAN)).collect();
        println!("{:>8.4} {:>10.6} {:>10.6} {:>11.6}", v[0], v[3], v[4], v[5]);
    }

    let rstar = closed_form_rstar(&params);
    let gap = table.column("gap").ok_or("missing gap column")?;
    let crossing = grid.windows(2).zip(gap.windows(2)).find(|(_, g)| g[0] < Some(0.0) && g[1] > Some(0.0));
    if let Some((r, _)) = crossing {
        println!("gap changes sign between r = {:.4} and {:.4} (closed form r* = {rstar:.5})", r[0], r[1]);
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
