//! Scanning finite spaces for two non-isomorphic maximal elements of the
//! 1-measurement.

use mmlab::maxdetect::{detect, no_maximum_certificate, DEFAULT_TOL};
use mmlab::spaces;

fn main() -> mmlab::Result<()> {
    for (name, x) in [
        ("8-cycle", spaces::cycle(8)),
        ("4x4 torus", spaces::torus_grid(4)),
        ("Petersen graph", spaces::petersen()),
        ("triangle 2, 1.5, 1.5", spaces::triangle(2.0, 1.5, 1.5)),
    ] {
        let report = detect(&x, DEFAULT_TOL)?;
        println!("{name}: {:?}", report.verdict);
        if let Some(cert) = no_maximum_certificate(&x, DEFAULT_TOL)? {
            let v = cert.violation.as_ref().expect("scan found a triple");
            println!("  diameter pair ({}, {}), off-geodesic point {}, excess {:.4}", v.x, v.y, v.z, v.excess);
            println!("  xi   {:?}", cert.xi.values());
            println!("  zeta {:?}", cert.zeta.values());
            println!("  laws {:?} / {:?}", cert.measure_a.atoms(), cert.measure_b.atoms());
        }
    }
    Ok(())
}
