//! The distance law of S^n(r) and the transport G̃∘V onto other laws.

use mmlab::measure1d::{Cdf, CdfKind};
use mmlab::sphere::{self, sphere_law, sphere_transport, TransportOptions};

fn main() -> mmlab::Result<()> {
    let n = 3;
    let law = sphere_law(n, 1.0, 1e-4)?;
    for t in [0.5, 1.0, 1.5, 2.0, 3.0] {
        println!("V({t}) = {:.6}", law.cdf_at(t));
    }

    // shrinking the sphere is short
    let small = sphere_law(n, 0.7, 1e-4)?;
    let t = sphere_transport(n, 1.0, small.cdf(), TransportOptions::default())?;
    println!("onto S^{n}(0.7): max slope {:.6} on grid {:.1e}, certified {}", t.max_slope, t.grid_step, t.certified);

    // uniform on [-1, 1] is the law of a coordinate on S^2 but not on S^3
    let flat = Cdf::new(CdfKind::Linear, vec![-1.0, 1.0], vec![0.0, 1.0])?;
    for m in [2, 3] {
        let t = sphere_transport(m, 1.0, &flat, TransportOptions::default())?;
        println!("S^{m} onto uniform[-1, 1]: max slope {:.4}", t.max_slope);
    }

    // the same check from 10^5 samples of a coordinate, with a DKW band
    let sample = sphere::monte_carlo_pushforward(n, 1.0, "coordinate:1".parse()?, 100_000, 1)?;
    let eps = sphere::dkw_epsilon(100_000, 1e-3);
    let b = sphere::banded_slope(&law, &sample, eps, 512)?;
    println!("coordinate: banded slope {:.4} (raw {:.2}, eps {:.1e})", b.max_quotient, b.raw_max_quotient, eps);
    Ok(())
}
