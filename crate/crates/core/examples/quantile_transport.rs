//! Generalized inverses and monotone transport between laws on the line.

use mmlab::measure1d::{cdf, quantile, Cdf, CdfKind, DiscreteMeasure1D};
use mmlab::order::monotone_transport;

fn main() -> mmlab::Result<()> {
    let coin = DiscreteMeasure1D::uniform(&[0.0, 1.0])?;
    let q = quantile(&cdf(&coin))?;
    for s in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!("G~({s:.2}) = {}", q.eval(s));
    }

    // uniform on [0, 1] onto a three-atom law
    let f = Cdf::new(CdfKind::Linear, vec![0.0, 1.0], vec![0.0, 1.0])?;
    let target = DiscreteMeasure1D::new(vec![-1.0, 0.5, 2.0], vec![0.2, 0.5, 0.3])?;
    let g = cdf(&target);
    let phi = monotone_transport(&f, &g, 1e-4)?;
    let ks = g
        .breakpoints()
        .iter()
        .map(|&y| (phi.pushforward_cdf(&f, y) - g.eval(y)).abs())
        .fold(0.0, f64::max);
    for t in [0.1, 0.2, 0.3, 0.6, 0.7, 0.9] {
        println!("phi({t}) = {}", phi.eval(t));
    }
    println!("KS(phi_* F, G) = {ks:.1e}");
    Ok(())
}
