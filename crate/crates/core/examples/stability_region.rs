//! Width of the attracting band `r(1+c) < gamma < gamma0` over `(r, c)`.

use plankton_dynamics::orbit::{stability_region, Grid};

fn main() -> plankton_dynamics::Result<()> {
    let r = Grid::new(0.1, 0.9, 5)?;
    let c = Grid::new(0.5, 2.5, 5)?;
    for h in [1u8, 2] {
        println!("h = {h}: gamma0 - r(1+c), rows r, columns c = {:?}", c.points());
        let region = stability_region(&r, &c, h)?;
        for rv in r.points().iter() {
            let row: Vec<String> = region
                .iter()
                .filter(|pt| pt.r == *rv)
                .map(|pt| match pt.gamma_high {
                    Some(g) => format!("{:8.4}", g - pt.gamma_low),
                    None => format!("{:>8}", "-"),
                })
                .collect();
            println!("  r = {rv:.2} {}", row.join(" "));
        }
    }
    Ok(())
}
