// Write a sweep as CSV and JSON lines, then read the CSV back.
//
// Run with `cargo run --example export_table`.

use std::error::Error;
use std::fs::File;
use std::io::BufReader;

use roaming::sweep::read_csv;
use roaming::{export_table, sweep_utilities_vs_r, GameParams, Mode, TableFormat};

pub fn run_example() -> Result<(), Box<dyn Error>> {
    let params = GameParams::builder().phi(0.9).build()?;
    let table = sweep_utilities_vs_r(&params, &[0.2, 0.8, 1.4, 2.0], Mode::Simplified)?;

    let dir = std::env::temp_dir().join(format!("roaming-export-{}", std::process::id()));
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("utilities.csv");
    let jsonl = dir.join("utilities.jsonl");
    export_table(&table, TableFormat::Csv, &csv)?;
    export_table(&table, TableFormat::JsonLines, &jsonl)?;

    print!("{}", std::fs::read_to_string(&csv)?);
    let back = read_csv(BufReader::new(File::open(&csv)?))?;
    println!("read back {} rows x {} columns", back.rows.len(), back.columns.len());

    std::fs::remove_dir_all(&dir)?;
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn Error>> {
    run_example()
}
