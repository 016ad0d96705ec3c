//! Maximum Lyapunov exponent along a `gamma` sweep for both response types.

use plankton_dynamics::model::PlanktonState;
use plankton_dynamics::orbit::{mle_curve, Grid, MleOptions};
use plankton_dynamics::ModelParams;

fn main() -> plankton_dynamics::Result<()> {
    let runs = [
        (ModelParams::new(0.5, 1.0, 1.0, 1)?, Grid::new(0.5, 3.0, 26)?, PlanktonState::new(0.35, 0.6)),
        (ModelParams::new(0.8, 2.0, 1.0, 2)?, Grid::new(5.0, 8.5, 15)?, PlanktonState::new(0.4, 0.8)),
    ];
    for (base, grid, start) in runs {
        println!("h = {}", base.h());
        for pt in mle_curve(&base, &grid, start, &MleOptions::default())? {
            let note = if pt.mle.diverged { "  diverged" } else { "" };
            println!("  gamma {:.3}  mle {:+.5}{note}", pt.gamma, pt.mle.value);
        }
    }
    Ok(())
}
