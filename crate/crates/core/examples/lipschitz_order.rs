//! Deciding μ ≺ ν on the line, with witnesses.

use mmlab::measure1d::DiscreteMeasure1D;
use mmlab::order::{dominates_bruteforce, mm_isomorphic_1d, DEFAULT_BUDGET};

fn main() -> mmlab::Result<()> {
    let point = DiscreteMeasure1D::dirac(0.0);
    let pair = DiscreteMeasure1D::uniform(&[0.0, 1.0])?;
    let wide = DiscreteMeasure1D::uniform(&[0.0, 2.0])?;
    let three = DiscreteMeasure1D::uniform(&[0.0, 1.0, 2.0])?;

    for (a, an, b, bn) in [
        (&point, "δ0", &pair, "u{0,1}"),
        (&pair, "u{0,1}", &point, "δ0"),
        (&pair, "u{0,1}", &wide, "u{0,2}"),
        (&wide, "u{0,2}", &three, "u{0,1,2}"),
    ] {
        let d = dominates_bruteforce(a, b, DEFAULT_BUDGET);
        print!("{an} ≺ {bn}: {:?}", d.holds());
        if let Some(w) = d.witness() {
            print!("  via {:?} ↦ {:?}", w.on, w.values);
        }
        println!();
    }

    let moved = pair.translate(3.0).reflect(0.0);
    println!("u{{0,1}} ≅ its reflected translate: {}", mm_isomorphic_1d(&pair, &moved));
    Ok(())
}
