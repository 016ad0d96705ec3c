//! Fixed points of the map and their local stability across `gamma`.
//!
//! Run with `cargo run --example fixed_points`.

use plankton_dynamics::stability::{classify_e0, classify_e1, classify_positive, critical_gamma};
use plankton_dynamics::ModelParams;

fn main() -> plankton_dynamics::Result<()> {
    let (r, c) = (0.5, 1.0);
    for h in [1u8, 2] {
        match critical_gamma(r, c, h) {
            Ok(crit) => println!("h = {h}: positive point attracting for {:.4} < gamma < {:.6}", r * (1.0 + c), crit.gamma0),
            Err(e) => println!("h = {h}: {e}"),
        }
    }

    let base = ModelParams::new(r, c, 1.0, 1)?;
    println!("\n gamma   E0             E1             E+ (u, v)                 class");
    for gamma in [0.8, 1.2, 1.6, 1.775, 1.79, 2.2] {
        let params = base.with_gamma(gamma)?;
        let e0 = format!("{:?}", classify_e0(&params).classification);
        let e1 = format!("{:?}", classify_e1(&params).classification);
        match classify_positive(&params) {
            Some(rep) => println!(
                "{gamma:6.3}   {e0:<14} {e1:<14} ({:.5}, {:.5})       {:?}  q = {:.5}",
                rep.point.u,
                rep.point.v,
                rep.classification,
                rep.q_value.unwrap_or(f64::NAN)
            ),
            None => println!("{gamma:6.3}   {e0:<14} {e1:<14} none"),
        }
    }
    Ok(())
}
