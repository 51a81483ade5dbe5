//! Prohorov distance between two finitely supported measures.
//!
//! By Strassen's theorem, d_P(μ, ν) ≤ ε iff some coupling puts mass at most ε
//! on pairs further apart than ε. For a fixed ε the best coupling mass on
//! pairs within ε is a max-flow, and that mass only changes at pairwise
//! distances, so the optimum is either a distance or 1 minus a flow value.

use crate::flow::max_coupled_mass;

const TOL: f64 = 1e-12;

/// Prohorov distance given the cross-distance table `cross[i][j]` between the
/// supports of `mu` and `nu`.
pub fn prohorov_finite(cross: &[Vec<f64>], mu: &[f64], nu: &[f64]) -> f64 {
    let mut levels: Vec<f64> = cross.iter().flatten().copied().collect();
    levels.push(0.0);
    levels.sort_by(f64::total_cmp);
    levels.dedup();

    let mass_within = |r: f64| max_coupled_mass(mu, nu, |i, j| cross[i][j] <= r);
    let next = |k: usize| levels.get(k + 1).copied().unwrap_or(f64::INFINITY);
    let deficit = |m: f64| {
        let d = 1.0 - m;
        if d <= TOL {
            0.0
        } else {
            d
        }
    };
    // smallest k whose level interval [r_k, r_{k+1}) contains a feasible ε
    let (mut lo, mut hi) = (0usize, levels.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if deficit(mass_within(levels[mid])) < next(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    levels[lo].max(deficit(mass_within(levels[lo]))).min(1.0)
}
