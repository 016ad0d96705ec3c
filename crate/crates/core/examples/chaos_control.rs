//! Stabilizing the positive fixed point with linear feedback on the prey.
//!
//! Prints the triangle of stabilizing gains, then compares a free and a
//! controlled orbit started near the fixed point.

use plankton_dynamics::control::{control_triangle, is_stable, simulate_controlled, ControlGains};
use plankton_dynamics::model::{positive_fixed_point, PlanktonState};
use plankton_dynamics::ModelParams;

fn main() -> plankton_dynamics::Result<()> {
    let params = ModelParams::new(0.5, 1.0, 2.0, 1)?;
    let fp = positive_fixed_point(&params).expect("gamma above the existence threshold");
    let tri = control_triangle(&params, fp)?;
    println!("fixed point ({:.6}, {:.6})", fp.u, fp.v);
    for (name, v) in ["l1 ^ l2", "l2 ^ l3", "l1 ^ l3"].iter().zip(tri.vertices) {
        println!("vertex {name}: ({:.6}, {:.6})", v.s1, v.s2);
    }
    println!("area {:.4}", tri.area());

    let gains = tri.centroid();
    let verdict = is_stable(&params, fp, gains);
    println!(
        "\ngains at the centroid ({:.4}, {:.4}): stable = {}, |lambda| = {:.4}",
        gains.s1,
        gains.s2,
        verdict.stable,
        verdict.eigenvalues[0].norm().max(verdict.eigenvalues[1].norm())
    );

    let s0 = PlanktonState::new(fp.u + 0.05, fp.v + 0.05);
    let free = simulate_controlled(&params, ControlGains::default(), fp, s0, 2000);
    let held = simulate_controlled(&params, gains, fp, s0, 2000);
    println!("\n step   free distance   controlled distance");
    for k in [0, 10, 50, 200, 1000, 2000] {
        println!("{k:5}   {:13.3e}   {:19.3e}", free[k].dist_inf(&fp), held[k].dist_inf(&fp));
    }
    Ok(())
}
