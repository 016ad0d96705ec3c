mod common;

use common::p;
use plankton_dynamics::model::{positive_fixed_point, PlanktonState};
use plankton_dynamics::orbit::{
    bifurcation_diagram, max_lyapunov, max_lyapunov_with, mle_curve, simulate, stability_region, Grid, MleOptions,
    SweepConfig,
};
use plankton_dynamics::output::{write_bifurcation_csv, write_mle_csv, write_region_csv};
use plankton_dynamics::stability::{critical_gamma, eigenvalues_at};

fn in_pool<T: Send>(threads: usize, job: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(job)
}

#[test]
fn mle_at_attracting_point_is_log_spectral_radius() {
    for (r, c, g, h, s0) in [(0.5, 1.0, 1.5, 1, (0.35, 0.6)), (0.5, 1.0, 1.2, 1, (0.8, 1.5)), (0.8, 2.0, 5.5, 2, (0.4, 0.8))] {
        let params = p(r, c, g, h);
        let fp = positive_fixed_point(&params).unwrap();
        let radius = eigenvalues_at(&params, fp).iter().map(|z| z.norm()).fold(0.0, f64::max);
        let est = max_lyapunov(&params, PlanktonState::new(s0.0, s0.1), 100_000, 2000);
        assert!(!est.diverged);
        assert!((est.value - radius.ln()).abs() < 0.02, "{g}: {} vs {}", est.value, radius.ln());
    }
}

#[test]
fn renormalization_interval_does_not_change_the_estimate() {
    for (r, c, g, h, s0) in [(0.5, 1.0, 1.5, 1, (0.35, 0.6)), (0.5, 1.0, 2.46, 1, (0.35, 0.6)), (0.8, 2.0, 8.3, 2, (0.4, 0.8))] {
        let params = p(r, c, g, h);
        let s0 = PlanktonState::new(s0.0, s0.1);
        let every = |k: usize| {
            max_lyapunov_with(&params, s0, &MleOptions { n: 20_000, transient: 2000, renorm_every: k, seed: 3 }).value
        };
        let (a, b) = (every(1), every(10));
        assert!((a - b).abs() < 1e-6, "{g}: {a} vs {b}");
    }
}

#[test]
fn mle_sign_examples() {
    let h1 = |g: f64| max_lyapunov(&p(0.5, 1.0, g, 1), PlanktonState::new(0.35, 0.6), 20_000, 2000).value;
    assert!(h1(1.5) < 0.0);
    assert!(h1(2.2) > 0.0);
    let h2 = max_lyapunov(&p(0.8, 2.0, 8.3, 2), PlanktonState::new(0.4, 0.8), 20_000, 2000).value;
    assert!(h2 > 0.0, "{h2}");
}

#[test]
fn mle_sign_changes_near_the_window_edges() {
    let base = p(0.5, 1.0, 1.0, 1);
    let grid = Grid::new(0.5, 3.0, 500).unwrap();
    let curve = mle_curve(&base, &grid, PlanktonState::new(0.35, 0.6), &MleOptions::default()).unwrap();
    let onset = curve.iter().find(|pt| pt.mle.value >= 0.0).unwrap().gamma;
    assert!((onset - 1.78).abs() <= 0.05, "{onset}");
    // first clearly negative value after the onset: the estimate resolves
    // about 1e-4 at n = 2e4
    let exit = curve
        .iter()
        .find(|pt| pt.gamma > onset && pt.mle.value < -1e-3)
        .unwrap()
        .gamma;
    assert!((exit - 2.357).abs() <= 0.05, "{exit}");
}

#[test]
fn sweeps_are_identical_across_thread_counts() {
    let base = p(0.5, 1.0, 1.0, 1);
    let sweep = SweepConfig {
        gamma: Grid::new(1.5, 2.5, 40).unwrap(),
        transient: 500,
        samples: 50,
        initial: PlanktonState::new(0.35, 0.6),
        seed: 9,
    };
    let render = |threads: usize| {
        in_pool(threads, || {
            let mut a = Vec::new();
            write_bifurcation_csv(&mut a, &bifurcation_diagram(&base, &sweep).unwrap()).unwrap();
            let opts = MleOptions { n: 3000, transient: 500, renorm_every: 1, seed: 9 };
            write_mle_csv(&mut a, &mle_curve(&base, &sweep.gamma, sweep.initial, &opts).unwrap()).unwrap();
            let r = Grid::new(0.1, 1.0, 7).unwrap();
            let c = Grid::new(0.1, 2.0, 5).unwrap();
            write_region_csv(&mut a, &stability_region(&r, &c, 2).unwrap()).unwrap();
            a
        })
    };
    let one = render(1);
    assert_eq!(one, render(4));
    assert_eq!(one, render(4));
}

#[test]
fn bifurcation_columns_distinguish_point_and_curve() {
    let base = p(0.5, 1.0, 1.0, 1);
    let sweep = SweepConfig {
        gamma: Grid::new(1.5, 2.0, 2).unwrap(),
        transient: 2000,
        samples: 200,
        initial: PlanktonState::new(0.35, 0.6),
        seed: 0,
    };
    let cols = bifurcation_diagram(&base, &sweep).unwrap();
    assert_eq!(cols.len(), 2);
    assert!(cols[0].u_spread() < 1e-6);
    assert!(cols[1].u_spread() > 1e-2);
}

#[test]
fn region_rows_bracket_the_attracting_band() {
    let r = Grid::new(0.1, 1.0, 10).unwrap();
    let c = Grid::new(0.1, 2.0, 10).unwrap();
    for h in [1, 2] {
        for pt in stability_region(&r, &c, h).unwrap() {
            assert!((pt.gamma_low - pt.r * (1.0 + pt.c)).abs() < 1e-15);
            match pt.gamma_high {
                Some(g) => {
                    assert!(g > pt.gamma_low);
                    assert!((g - critical_gamma(pt.r, pt.c, h).unwrap().gamma0).abs() < 1e-15);
                }
                None => assert!(h == 2 && critical_gamma(pt.r, pt.c, h).is_err()),
            }
        }
    }
}

#[test]
fn diverging_orbit_is_truncated() {
    let orbit = simulate(&p(0.5, 1.0, 1.5, 1), PlanktonState::new(5.0, 1.0), 100);
    assert!(orbit.diverged);
    assert!(orbit.len() < 101);
    assert!(orbit.states.iter().all(|s| s.is_finite()));
}
