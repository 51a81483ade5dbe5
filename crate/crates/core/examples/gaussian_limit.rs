//! Concentration of the sphere distance law to the standard Gaussian.

use mmlab::sphere::{self, limit_table, ShiftedDensity};

fn main() -> mmlab::Result<()> {
    for n in [100, 10_000, 100_000] {
        let rows = limit_table(n, 3.0, 0.05)?;
        let worst = rows.iter().map(|r| r.error).fold(0.0, f64::max);
        let d = ShiftedDensity::new(n)?;
        println!("n = {n:>6}: max |cos^(n-1)(r/√n) − e^(−r²/2)| = {worst:.2e}, density at 0 = {:.6}", d.eval(0.0));
    }
    println!("1/√(2π)          = {:.6}", sphere::gauss_density(0.0));

    let rows = limit_table(1000, 1.0, 0.25)?;
    print!("{}", sphere::limit_table_csv(&rows));

    let rows = sphere::normal_law_rows(100, 100_000, 0, &[0.1, 0.05, 0.01])?;
    for r in rows {
        println!("κ = {:<4}  coordinate on S^100(10): {:.4}   Gaussian: {:.4}", r.kappa, r.sample, r.gaussian);
    }
    Ok(())
}
