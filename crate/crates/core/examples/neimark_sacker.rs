//! Normal-form analysis at the critical `gamma0` for both response types.

use plankton_dynamics::ns_bifurcation::lyapunov_quantity;
use plankton_dynamics::ModelParams;

fn main() -> plankton_dynamics::Result<()> {
    for (r, c, h) in [(0.5, 1.0, 1u8), (0.8, 2.0, 2)] {
        let rep = lyapunov_quantity(&ModelParams::new(r, c, 1.0, h)?)?;
        let [l1, l2] = rep.eigenvalues;
        println!("r = {r}, c = {c}, h = {h}");
        println!("  gamma0         {:.6}", rep.gamma0);
        println!("  fixed point    ({:.5}, {:.5})", rep.fixed_point.u, rep.fixed_point.v);
        println!("  eigenvalues    {:.5} {:+.5}i, {:.5} {:+.5}i  |lambda| = {:.12}", l1.re, l1.im, l2.re, l2.im, l1.norm());
        for (name, z) in [("L20", rep.l20), ("L11", rep.l11), ("L02", rep.l02), ("L21", rep.l21)] {
            println!("  {name}            {:+.5} {:+.5}i", z.re, z.im);
        }
        println!("  L              {:.5}", rep.l);
        println!("  transversality {:.5}", rep.transversality);
        println!("  non-degenerate {}", rep.non_degenerate());
        println!("  {:?}\n", rep.direction);
    }
    Ok(())
}
