//! Oracles and generators shared by the integration tests. Everything here
//! works from definitions and avoids the library's algorithms.

#![allow(dead_code, clippy::needless_range_loop)]

use mmlab::measure1d::{Cdf, CdfKind, DiscreteMeasure1D, MonotoneMap};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn normalize(w: &mut [f64]) {
    let total: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= total);
}

/// Weights that are multiples of `1/grid`, all positive.
pub fn grid_weights(rng: &mut ChaCha8Rng, n: usize, grid: u32) -> Vec<f64> {
    assert!(grid as usize >= n);
    let mut counts = vec![1u32; n];
    for _ in n as u32..grid {
        counts[rng.random_range(0..n)] += 1;
    }
    counts.into_iter().map(|c| c as f64 / grid as f64).collect()
}

/// A measure with up to `max_atoms` atoms from the half-integers in [0, 5].
pub fn random_measure(rng: &mut ChaCha8Rng, max_atoms: usize) -> DiscreteMeasure1D {
    let k = rng.random_range(1..=max_atoms);
    let atoms: Vec<f64> = (0..k).map(|_| rng.random_range(0..=10) as f64 * 0.5).collect();
    let weights: Vec<f64> = (0..k).map(|_| rng.random_range(1..=6) as f64).collect();
    let total: f64 = weights.iter().sum();
    let weights: Vec<f64> = weights.iter().map(|w| w / total).collect();
    DiscreteMeasure1D::from_weighted_values(&atoms, &weights).unwrap()
}

/// Step CDF of a random measure with real atoms.
pub fn random_step_cdf(rng: &mut ChaCha8Rng) -> Cdf {
    let k = rng.random_range(1..=8);
    let mut atoms: Vec<f64> = (0..k).map(|_| rng.random_range(-5.0..5.0)).collect();
    atoms.sort_by(f64::total_cmp);
    atoms.dedup();
    let mut w: Vec<f64> = atoms.iter().map(|_| rng.random_range(0.05..1.0)).collect();
    normalize(&mut w);
    let mut acc = 0.0;
    let values: Vec<f64> = w
        .iter()
        .map(|x| {
            acc += x;
            acc
        })
        .collect();
    Cdf::new(CdfKind::Step, atoms, values).unwrap()
}

/// Piecewise-linear CDF from 0 to 1, with flat stretches now and then.
pub fn random_linear_cdf(rng: &mut ChaCha8Rng) -> Cdf {
    let k = rng.random_range(2..=9);
    let mut t = rng.random_range(-3.0..3.0);
    let mut bps = vec![t];
    for _ in 1..k {
        t += rng.random_range(0.05..2.0);
        bps.push(t);
    }
    let mut levels: Vec<f64> = (0..k - 2).map(|_| rng.random_range(0.0..1.0)).collect();
    levels.sort_by(f64::total_cmp);
    if k > 3 && rng.random_bool(0.3) {
        levels[1] = levels[0];
    }
    let mut values = vec![0.0];
    values.extend(levels);
    values.push(1.0);
    Cdf::new(CdfKind::Linear, bps, values).unwrap()
}

/// Strictly increasing continuous CDF.
pub fn random_strict_cdf(rng: &mut ChaCha8Rng) -> Cdf {
    let k = rng.random_range(2..=8);
    let mut t = rng.random_range(-2.0..2.0);
    let mut bps = vec![t];
    for _ in 1..k {
        t += rng.random_range(0.1..1.5);
        bps.push(t);
    }
    let mut inc: Vec<f64> = (1..k).map(|_| rng.random_range(0.05..1.0)).collect();
    normalize(&mut inc);
    let mut values = vec![0.0];
    let mut acc = 0.0;
    for x in inc {
        acc += x;
        values.push(acc);
    }
    *values.last_mut().unwrap() = 1.0;
    Cdf::new(CdfKind::Linear, bps, values).unwrap()
}

/// inf{t : G(t) ≥ s}, with the right limit at s = 0.
pub fn quantile_by_definition(g: &Cdf, s: f64) -> f64 {
    let b = g.breakpoints();
    if s == 0.0 {
        // right limit: the first point where G leaves 0
        return match g.kind() {
            CdfKind::Step => b[0],
            CdfKind::Linear => {
                let zeros = b.iter().filter(|&&t| g.eval(t) == 0.0).count();
                b[zeros.max(1) - 1]
            }
        };
    }
    let k = b.iter().position(|&t| g.eval(t) >= s).expect("G reaches 1");
    if g.kind() == CdfKind::Step || k == 0 {
        return b[k];
    }
    let (mut lo, mut hi) = (b[k - 1], b[k]);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g.eval(mid) >= s {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// P(φ(X) ≤ y) for X ~ F by bisection on the monotone map itself.
pub fn pushforward_cdf_by_bisection(phi: &MonotoneMap, f: &Cdf, y: f64) -> f64 {
    let b = phi.breakpoints();
    let (lo0, hi0) = (b[0] - 1.0, b[b.len() - 1] + 1.0);
    if phi.eval(lo0) > y {
        return 0.0;
    }
    if phi.eval(hi0) <= y {
        return 1.0;
    }
    let (mut lo, mut hi) = (lo0, hi0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if phi.eval(mid) <= y {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    f.eval(lo)
}

/// KS distance between φ_*F and G, probed on G's breakpoints (both sides)
/// and a uniform grid.
pub fn transport_ks(phi: &MonotoneMap, f: &Cdf, g: &Cdf) -> f64 {
    let gb = g.breakpoints();
    let (lo, hi) = (gb[0] - 0.5, gb[gb.len() - 1] + 0.5);
    let mut ys: Vec<f64> = (0..=2000).map(|k| lo + (hi - lo) * k as f64 / 2000.0).collect();
    for &t in gb {
        ys.push(t);
        ys.push(t - 1e-9);
    }
    ys.iter().map(|&y| (pushforward_cdf_by_bisection(phi, f, y) - g.eval(y)).abs()).fold(0.0, f64::max)
}

fn same(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9
}

/// μ ≺ ν by listing every map supp ν → supp μ.
pub fn dominates_by_enumeration(mu: &DiscreteMeasure1D, nu: &DiscreteMeasure1D) -> bool {
    let (m, n) = (mu.len(), nu.len());
    let total = m.pow(n as u32);
    (0..total).any(|mut code| {
        let mut map = Vec::with_capacity(n);
        for _ in 0..n {
            map.push(code % m);
            code /= m;
        }
        for i in 0..n {
            for j in i + 1..n {
                let dy = (mu.atoms()[map[i]] - mu.atoms()[map[j]]).abs();
                if dy > (nu.atoms()[i] - nu.atoms()[j]).abs() + 1e-12 {
                    return false;
                }
            }
        }
        let mut mass = vec![0.0; m];
        for i in 0..n {
            mass[map[i]] += nu.weights()[i];
        }
        mass.iter().zip(mu.weights()).all(|(a, b)| (a - b).abs() <= 1e-9)
    })
}

/// μ and ν agree after a translation or a reflection.
pub fn isometric_1d(mu: &DiscreteMeasure1D, nu: &DiscreteMeasure1D) -> bool {
    if mu.len() != nu.len() {
        return false;
    }
    let n = mu.len();
    let (a, wa) = (mu.atoms(), mu.weights());
    let (b, wb) = (nu.atoms(), nu.weights());
    let straight = (0..n).all(|i| same(a[i] - a[0], b[i] - b[0]) && same(wa[i], wb[i]));
    let flipped = (0..n).all(|i| same(a[i] - a[0], b[n - 1] - b[n - 1 - i]) && same(wa[i], wb[n - 1 - i]));
    straight || flipped
}

/// Smallest diameter of a set of atoms with mass at least α.
pub fn partial_diameter_by_subsets(mu: &DiscreteMeasure1D, alpha: f64) -> f64 {
    let n = mu.len();
    let mut best = f64::INFINITY;
    for set in 1u32..(1 << n) {
        let idx: Vec<usize> = (0..n).filter(|i| set >> i & 1 == 1).collect();
        let mass: f64 = idx.iter().map(|&i| mu.weights()[i]).sum();
        if mass >= alpha - 1e-12 {
            let lo = mu.atoms()[idx[0]];
            let hi = mu.atoms()[*idx.last().unwrap()];
            best = best.min(hi - lo);
        }
    }
    best
}

/// Prohorov distance from μ(A) ≤ ν(B_ε(A)) + ε and its mirror over all
/// subsets A, by bisection on ε.
pub fn prohorov_by_definition(cross: &[Vec<f64>], mu: &[f64], nu: &[f64]) -> f64 {
    let one_sided = |eps: f64, transpose: bool| {
        let (a_len, b_len) = if transpose { (nu.len(), mu.len()) } else { (mu.len(), nu.len()) };
        let (wa, wb) = if transpose { (nu, mu) } else { (mu, nu) };
        let d = |i: usize, j: usize| if transpose { cross[j][i] } else { cross[i][j] };
        (1u32..(1 << a_len)).all(|set| {
            let ma: f64 = (0..a_len).filter(|i| set >> i & 1 == 1).map(|i| wa[i]).sum();
            let mb: f64 = (0..b_len)
                .filter(|&j| (0..a_len).any(|i| set >> i & 1 == 1 && d(i, j) <= eps))
                .map(|j| wb[j])
                .sum();
            ma <= mb + eps + 1e-12
        })
    };
    let feasible = |eps: f64| one_sided(eps, false) && one_sided(eps, true);
    if feasible(0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if feasible(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Shortest-path closure of a symmetric weight table; `f64::INFINITY`
/// marks a missing edge.
pub fn floyd(mut d: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let n = d.len();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// A metric on `n` points with distances on the quarter grid in [¼, 2].
pub fn random_metric(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    let mut d = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random_range(1..=8) as f64 * 0.25;
            d[i][j] = v;
            d[j][i] = v;
        }
    }
    floyd(d)
}

pub fn all_pairs_lipschitz(d: &[Vec<f64>], f: &[f64], tol: f64) -> bool {
    (0..f.len()).all(|i| (0..f.len()).all(|j| (f[i] - f[j]).abs() <= d[i][j] + tol))
}

/// Checks G∘G̃(s) ≥ s, G̃∘G(t) ≤ t where G(t) > 0, and
/// {s ∈ (0,1] : G̃(s) ≤ t} = (0, G(t)] on a grid of levels and points.
/// Returns the first failure.
///
/// `tol` is in levels. Comparisons between points allow `tol` times
/// (1 + the steepest slope of G̃), since a level off by one ulp moves G̃ by
/// that much.
pub fn galois_failure(g: &Cdf, q: &mmlab::measure1d::QuantileFunction, tol: f64) -> Option<String> {
    let b = g.breakpoints();
    let v = g.values();
    let steep = (1..b.len())
        .filter(|&i| v[i] > v[i - 1])
        .map(|i| (b[i] - b[i - 1]) / (v[i] - v[i - 1]))
        .fold(0.0, f64::max);
    let ttol = tol * (1.0 + steep);
    let mut levels: Vec<f64> = (0..=1000).map(|k| k as f64 / 1000.0).collect();
    for &t in b {
        let v = g.eval(t);
        levels.push(v);
        levels.push(v.next_up().min(1.0));
        levels.push(v.next_down().max(0.0));
    }
    let (lo, hi) = (b[0] - 1.0, b[b.len() - 1] + 1.0);
    let mut points: Vec<f64> = (0..=400).map(|k| lo + (hi - lo) * k as f64 / 400.0).collect();
    for &t in b {
        points.extend([t, t.next_up(), t.next_down()]);
    }
    for &s in &levels {
        let qs = q.eval(s);
        if g.eval(qs) < s - tol {
            return Some(format!("G(G~({s})) = {} < s", g.eval(qs)));
        }
    }
    for &t in &points {
        let gt = g.eval(t);
        if gt > 0.0 && q.eval(gt) > t + ttol {
            return Some(format!("G~(G({t})) = {} > t", q.eval(gt)));
        }
        for &s in &levels {
            if s == 0.0 {
                continue;
            }
            let qs = q.eval(s);
            if s <= gt - tol && qs > t + ttol {
                return Some(format!("s = {s} <= G({t}) = {gt} but G~(s) = {qs} > t"));
            }
            if s > gt + tol && qs <= t - ttol {
                return Some(format!("s = {s} > G({t}) = {gt} but G~(s) = {qs} <= t"));
            }
        }
    }
    None
}
