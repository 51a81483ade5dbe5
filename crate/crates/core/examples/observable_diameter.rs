//! Observable and partial diameters of finite spaces.

use mmlab::mmspace::{observable_diameter, partial_diameter_space, ObsDiamOptions};
use mmlab::spaces;

fn main() -> mmlab::Result<()> {
    let tri = spaces::triangle(1.0, 1.0, 1.0);
    let obs = observable_diameter(&tri, 1.0 / 3.0, ObsDiamOptions::default())?;
    println!("equilateral triangle, κ = 1/3: {:.4} (exact {}) from f = {:?}", obs.value, obs.exact, obs.function.values());

    let cycle = spaces::cycle(12);
    for kappa in [0.1, 0.25, 0.5] {
        let o = observable_diameter(&cycle, kappa, ObsDiamOptions { budget: 400, seed: 1 })?;
        let p = partial_diameter_space(&cycle, 1.0 - kappa, false)?;
        println!("12-cycle, κ = {kappa}: observable ≥ {:.3}, partial {:?}", o.value, p);
        if let Some(best) = o.log.last() {
            println!("  best candidate: {}", best.source);
        }
    }
    Ok(())
}
