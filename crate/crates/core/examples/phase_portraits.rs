//! Phase portraits on either side of the Neimark-Sacker point, as CSV files.

use std::fs::File;
use std::io::BufWriter;

use plankton_dynamics::model::PlanktonState;
use plankton_dynamics::orbit::simulate;
use plankton_dynamics::output::write_orbit_csv;
use plankton_dynamics::ModelParams;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).unwrap_or_else(|| ".".into());
    let portraits = [
        (1.775, 1u8, (0.35, 0.6)),
        (1.79, 1, (0.35, 0.7)),
        (2.2, 1, (0.33, 0.96)),
        (6.2, 2, (0.4, 0.8)),
        (6.4, 2, (0.4, 0.8)),
        (8.2, 2, (0.35, 3.0)),
    ];
    for (gamma, h, (u0, v0)) in portraits {
        let (r, c) = if h == 1 { (0.5, 1.0) } else { (0.8, 2.0) };
        let params = ModelParams::new(r, c, gamma, h)?;
        let orbit = simulate(&params, PlanktonState::new(u0, v0), 10_000);
        let path = format!("{dir}/portrait_h{h}_gamma{gamma}.csv");
        write_orbit_csv(BufWriter::new(File::create(&path)?), &orbit)?;
        let tail = &orbit.states[orbit.len() - 1000..];
        let (lo, hi) = tail.iter().fold((f64::INFINITY, 0.0f64), |(lo, hi), s| (lo.min(s.u), hi.max(s.u)));
        println!("h = {h}, gamma = {gamma}: last 1000 iterates u in [{lo:.4}, {hi:.4}] -> {path}");
    }
    Ok(())
}
