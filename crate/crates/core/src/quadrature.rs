//! Adaptive Simpson quadrature.

const MAX_DEPTH: u32 = 48;

fn simpson(fa: f64, fm: f64, fb: f64, h: f64) -> f64 {
    h / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(fa, flm, fm, m - a);
    let right = simpson(fm, frm, fb, b - m);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    adapt(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + adapt(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// ∫ₐᵇ f with absolute tolerance `tol`, after splitting [a, b] into
/// `panels` equal pieces so narrow peaks are not missed.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64, panels: usize) -> f64 {
    if a == b {
        return 0.0;
    }
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let piece_tol = tol / panels as f64;
    let mut total = 0.0;
    let mut comp = 0.0;
    for k in 0..panels {
        let lo = a + h * k as f64;
        let hi = if k + 1 == panels { b } else { a + h * (k + 1) as f64 };
        let (fa, fm, fb) = (f(lo), f(0.5 * (lo + hi)), f(hi));
        let piece = adapt(&f, lo, hi, fa, fm, fb, simpson(fa, fm, fb, hi - lo), piece_tol, MAX_DEPTH);
        // Neumaier summation across panels
        let t = total + piece;
        comp += if total.abs() >= piece.abs() { (total - t) + piece } else { (piece - t) + total };
        total = t;
    }
    total + comp
}
