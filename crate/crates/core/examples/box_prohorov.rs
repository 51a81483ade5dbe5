//! Box distance between small spaces and its comparison with Prohorov.

use mmlab::boxdist::{box_distance_ordered, box_distance_small, prokhorov_bound_check, DEFAULT_BUDGET};
use mmlab::mmspace::FiniteMMSpace;
use mmlab::spaces;

fn main() -> mmlab::Result<()> {
    let x = FiniteMMSpace::uniform(vec![vec![0.0, 1.0], vec![1.0, 0.0]])?;
    for delta in [0.1, 0.3, 0.7] {
        let y = FiniteMMSpace::uniform(vec![vec![0.0, 1.0 + delta], vec![1.0 + delta, 0.0]])?;
        let b = box_distance_small(&x, &y, DEFAULT_BUDGET);
        println!("two points, stretch {delta}: box = {:.3}", b.value);
    }

    let tri = spaces::triangle(1.0, 1.0, 1.5);
    let path = spaces::path(&[1.0, 0.5]);
    let b = box_distance_small(&tri, &path, DEFAULT_BUDGET);
    let ordered = box_distance_ordered(&tri, &path)?;
    println!("triangle vs path: box = {:.4} (exact {}), best ordered parameters {:.4}", b.value, b.exact, ordered.value);
    for c in &b.kept {
        println!("  keep x{} ~ y{} mass {:.3}", c.x, c.y, c.mass);
    }

    let base = vec![vec![0.0, 1.0, 2.0], vec![1.0, 0.0, 1.0], vec![2.0, 1.0, 0.0]];
    let r = prokhorov_bound_check(&base, &[0.5, 0.5, 0.0], &[0.0, 0.5, 0.5], DEFAULT_BUDGET)?;
    println!("same metric, shifted weights: box = {:.3}, prohorov = {:.3}", r.box_value, r.prohorov);
    Ok(())
}
