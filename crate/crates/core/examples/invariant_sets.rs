//! Positively invariant sets and convergence to the prey-only state.

use plankton_dynamics::global::{converges_to_e1, sample_invariance, InvariantSet, SetKind};
use plankton_dynamics::model::{step, PlanktonState};
use plankton_dynamics::ModelParams;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> plankton_dynamics::Result<()> {
    let cases = [
        (SetKind::M1, ModelParams::new(0.5, 0.4, 0.6, 1)?),
        (SetKind::M2, ModelParams::new(0.5, 1.5, 1.0, 1)?),
        (SetKind::M3, ModelParams::new(0.5, 0.75, 0.8, 1)?),
        (SetKind::N1, ModelParams::new(0.8, 2.0, 2.0, 2)?),
        (SetKind::N2, ModelParams::new(0.5, 8.0, 4.0, 2)?),
    ];
    println!("set  r     c     gamma  h  escapes/samples  mean steps to E1");
    for (i, (kind, params)) in cases.into_iter().enumerate() {
        let set = InvariantSet::new(kind, params)?;
        let report = sample_invariance(&set, 20_000, i as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(i as u64);
        let runs: Vec<_> = (0..50)
            .map(|_| {
                let mut s = set.sample(&mut rng, 50.0);
                s.u = s.u.max(0.05);
                converges_to_e1(&params, s, 100_000, 1e-8)
            })
            .collect();
        let mean = runs.iter().map(|c| c.iterations as f64).sum::<f64>() / runs.len() as f64;
        println!(
            "{:<4} {:<5} {:<5} {:<6} {}  {:>6}/{:<8} {:.0} ({}/50 converged)",
            kind.name(),
            params.r(),
            params.c(),
            params.gamma(),
            params.h(),
            report.escapes.len(),
            report.samples,
            mean,
            runs.iter().filter(|c| c.converged).count()
        );
    }

    // outside the admissible range the bounded region need not be invariant
    let params = ModelParams::new(0.5, 19.0, 10.0, 1)?;
    let region = InvariantSet::unchecked(SetKind::M1, params);
    let s = PlanktonState::new(0.1, 4.62);
    let once = step(&params, s);
    let twice = step(&params, once);
    println!(
        "\nc = 19, gamma = 10: ({}, {}) -> ({:.4}, {:.4}) -> ({:.4}, {:.4}), inside after two steps: {}",
        s.u,
        s.v,
        once.u,
        once.v,
        twice.u,
        twice.v,
        region.contains(twice)
    );
    Ok(())
}
