//! Bifurcation diagram in `gamma`, written as CSV.
//!
//! `cargo run --release --example bifurcation_diagram -- [out.csv]`

use std::fs::File;
use std::io::BufWriter;

use plankton_dynamics::model::PlanktonState;
use plankton_dynamics::orbit::{bifurcation_diagram, Grid, SweepConfig};
use plankton_dynamics::output::write_bifurcation_csv;
use plankton_dynamics::ModelParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "bifurcation_h1.csv".into());
    let base = ModelParams::new(0.5, 1.0, 1.0, 1)?;
    let sweep = SweepConfig {
        gamma: Grid::new(0.5, 3.0, 400)?,
        transient: 2000,
        samples: 200,
        initial: PlanktonState::new(0.35, 0.6),
        seed: 0,
    };
    let columns = bifurcation_diagram(&base, &sweep)?;
    write_bifurcation_csv(BufWriter::new(File::create(&out)?), &columns)?;

    for col in columns.iter().step_by(25) {
        let shape = if col.diverged {
            "diverged"
        } else if col.u_spread() < 1e-6 {
            "point"
        } else {
            "spread"
        };
        println!("gamma {:.4}  {shape:<8}  u spread {:.3e}", col.gamma, col.u_spread());
    }
    println!("wrote {} columns to {out}", columns.len());
    Ok(())
}
