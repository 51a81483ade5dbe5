//! Finite metric measure spaces and their 1-measurements.

use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure1d::{self, stable_sum, DiscreteMeasure1D, WEIGHT_TOL};

/// Default absolute slack for the triangle inequality and the Lipschitz bound.
pub const METRIC_TOL: f64 = 1e-12;

/// Largest space for exhaustive subset search in [`partial_diameter_space`].
pub const EXHAUSTIVE_MAX_POINTS: usize = 20;

/// Largest space for which [`observable_diameter`] is exact.
pub const EXACT_OBSDIAM_MAX_POINTS: usize = 5;

/// First invariant a candidate space breaks.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Violation {
    Empty,
    NotSquare { row: usize, len: usize },
    WeightCount { expected: usize, got: usize },
    LabelCount { expected: usize, got: usize },
    NonFinite { i: usize, j: usize },
    NonzeroDiagonal { i: usize, value: f64 },
    Asymmetric { i: usize, j: usize },
    NonPositiveDistance { i: usize, j: usize, value: f64 },
    Triangle { x: usize, via: usize, y: usize, excess: f64 },
    NonPositiveWeight { i: usize, value: f64 },
    Mass { total: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Empty => write!(f, "space has no points"),
            Violation::NotSquare { row, len } => write!(f, "row {row} has length {len}"),
            Violation::WeightCount { expected, got } => {
                write!(f, "expected {expected} weights, got {got}")
            }
            Violation::LabelCount { expected, got } => {
                write!(f, "expected {expected} labels, got {got}")
            }
            Violation::NonFinite { i, j } => write!(f, "d[{i}][{j}] is not finite"),
            Violation::NonzeroDiagonal { i, value } => write!(f, "d[{i}][{i}] = {value}"),
            Violation::Asymmetric { i, j } => write!(f, "d[{i}][{j}] != d[{j}][{i}]"),
            Violation::NonPositiveDistance { i, j, value } => {
                write!(f, "d[{i}][{j}] = {value} for distinct points")
            }
            Violation::Triangle { x, via, y, excess } => write!(
                f,
                "triangle inequality fails: d[{x}][{y}] exceeds d[{x}][{via}] + d[{via}][{y}] by {excess}"
            ),
            Violation::NonPositiveWeight { i, value } => write!(f, "weight {i} is {value}"),
            Violation::Mass { total } => write!(f, "weights sum to {total}"),
        }
    }
}

/// A finite metric space with a fully supported probability measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSpace")]
pub struct FiniteMMSpace {
    d: Vec<Vec<f64>>,
    w: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    #[serde(skip)]
    tol: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    d: Vec<Vec<f64>>,
    w: Vec<f64>,
    #[serde(default)]
    labels: Option<Vec<String>>,
}

impl TryFrom<RawSpace> for FiniteMMSpace {
    type Error = Error;
    fn try_from(raw: RawSpace) -> Result<Self> {
        let mut space = FiniteMMSpace::new(raw.d, raw.w)?;
        if let Some(labels) = raw.labels {
            space = space.with_labels(labels)?;
        }
        Ok(space)
    }
}

impl FiniteMMSpace {
    /// Validated constructor.
    pub fn new(d: Vec<Vec<f64>>, w: Vec<f64>) -> Result<Self> {
        let space = Self::unchecked(d, w);
        space.validate().map_err(Error::InvalidSpace)?;
        Ok(space)
    }

    /// Builds without checking; call [`FiniteMMSpace::validate`] for a report.
    pub fn unchecked(d: Vec<Vec<f64>>, w: Vec<f64>) -> Self {
        Self { d, w, labels: None, tol: METRIC_TOL }
    }

    /// Uniform weights on a distance matrix.
    pub fn uniform(d: Vec<Vec<f64>>) -> Result<Self> {
        let n = d.len().max(1);
        Self::new(d, vec![1.0 / n as f64; n])
    }

    /// Restricts (d, w) to the points of positive weight.
    pub fn restrict_to_support(d: &[Vec<f64>], w: &[f64]) -> Result<Self> {
        let keep: Vec<usize> = (0..w.len()).filter(|&i| w[i] > 0.0).collect();
        let sub = keep.iter().map(|&i| keep.iter().map(|&j| d[i][j]).collect()).collect();
        Self::new(sub, keep.iter().map(|&i| w[i]).collect())
    }

    /// Replaces the triangle tolerance, e.g. for metrics built by quadrature.
    pub fn with_triangle_tol(mut self, tol: f64) -> Result<Self> {
        self.tol = tol;
        self.validate().map_err(Error::InvalidSpace)?;
        Ok(self)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::InvalidSpace(Violation::LabelCount {
                expected: self.n(),
                got: labels.len(),
            }));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let n = self.d.len();
        if n == 0 {
            return Err(Violation::Empty);
        }
        if let Some((row, r)) = self.d.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(Violation::NotSquare { row, len: r.len() });
        }
        if self.w.len() != n {
            return Err(Violation::WeightCount { expected: n, got: self.w.len() });
        }
        let d = &self.d;
        for i in 0..n {
            for j in 0..n {
                if !d[i][j].is_finite() {
                    return Err(Violation::NonFinite { i, j });
                }
            }
        }
        for i in 0..n {
            if d[i][i] != 0.0 {
                return Err(Violation::NonzeroDiagonal { i, value: d[i][i] });
            }
            for j in 0..n {
                if d[i][j] != d[j][i] {
                    return Err(Violation::Asymmetric { i, j });
                }
                if i != j && d[i][j] <= 0.0 {
                    return Err(Violation::NonPositiveDistance { i, j, value: d[i][j] });
                }
            }
        }
        for x in 0..n {
            for via in 0..n {
                for y in 0..n {
                    let excess = d[x][y] - d[x][via] - d[via][y];
                    if excess > self.tol {
                        return Err(Violation::Triangle { x, via, y, excess });
                    }
                }
            }
        }
        if let Some((i, &value)) = self.w.iter().enumerate().find(|(_, w)| !(**w > 0.0)) {
            return Err(Violation::NonPositiveWeight { i, value });
        }
        let total = stable_sum(self.w.iter().copied());
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Violation::Mass { total });
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.d.len()
    }

    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.d[i][j]
    }

    pub fn distances(&self) -> &[Vec<f64>] {
        &self.d
    }

    pub fn weights(&self) -> &[f64] {
        &self.w
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn triangle_tol(&self) -> f64 {
        self.tol
    }

    pub fn diam(&self) -> f64 {
        self.d.iter().flatten().copied().fold(0.0, f64::max)
    }

    /// Pushforward of the weights by a function given as values on points.
    pub fn pushforward(&self, f: &LipschitzFunction) -> DiscreteMeasure1D {
        DiscreteMeasure1D::from_weighted_values(&f.values, &self.w)
            .expect("a valid space pushes to a valid measure")
    }

    /// The distance function from point `i`.
    pub fn distance_function(&self, i: usize) -> Result<LipschitzFunction> {
        if i >= self.n() {
            return Err(Error::IndexOutOfRange { index: i, len: self.n() });
        }
        Ok(LipschitzFunction { values: self.d[i].clone() })
    }
}

/// Values of a real function on the points of a [`FiniteMMSpace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LipschitzFunction {
    values: Vec<f64>,
}

impl LipschitzFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn negate(&self) -> Self {
        Self { values: self.values.iter().map(|v| -v).collect() }
    }

    /// Checks |f(i) − f(j)| ≤ d(i, j) + tol on every pair.
    pub fn check(&self, space: &FiniteMMSpace) -> Result<()> {
        if self.values.len() != space.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} values on {} points",
                self.values.len(),
                space.n()
            )));
        }
        let n = space.n();
        for i in 0..n {
            for j in i + 1..n {
                let gap = (self.values[i] - self.values[j]).abs();
                let dist = space.d(i, j);
                if gap > dist + space.tol {
                    return Err(Error::NotLipschitz { i, j, gap, dist });
                }
            }
        }
        Ok(())
    }
}

/// Checks the space and returns the first violation.
pub fn validate(space: &FiniteMMSpace) -> std::result::Result<(), Violation> {
    space.validate()
}

/// Law of the distance from point `i`.
pub fn distance_pushforward(space: &FiniteMMSpace, i: usize) -> Result<DiscreteMeasure1D> {
    Ok(space.pushforward(&space.distance_function(i)?))
}

/// Points whose farthest point realizes the diameter.
pub fn eccentric_points(space: &FiniteMMSpace) -> Vec<usize> {
    let diam = space.diam();
    (0..space.n())
        .filter(|&i| space.d[i].iter().copied().fold(0.0, f64::max) == diam)
        .collect()
}

/// The largest 1-Lipschitz function bounded by the pinned values,
/// f(x) = min_j (v_j + d(x, x_j)). It agrees with the pins when they are
/// 1-Lipschitz among themselves.
pub fn tight_extension(space: &FiniteMMSpace, pins: &[(usize, f64)]) -> Result<LipschitzFunction> {
    if pins.is_empty() {
        return Err(Error::Config("tight extension needs at least one pinned point".into()));
    }
    if let Some(&(index, _)) = pins.iter().find(|(i, _)| *i >= space.n()) {
        return Err(Error::IndexOutOfRange { index, len: space.n() });
    }
    let values = (0..space.n())
        .map(|x| pins.iter().map(|&(j, v)| v + space.d(x, j)).fold(f64::INFINITY, f64::min))
        .collect();
    Ok(LipschitzFunction { values })
}

/// Draws a random 1-Lipschitz function: random values on a random subset,
/// tight extension, and a reflection with probability one half.
pub fn sample_lipschitz(space: &FiniteMMSpace, seed: u64) -> LipschitzFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = space.n();
    let diam = space.diam();
    let k = rng.random_range(1..=n);
    let mut points: Vec<usize> = (0..n).collect();
    points.shuffle(&mut rng);
    let pins: Vec<(usize, f64)> = points[..k]
        .iter()
        .map(|&i| (i, if diam > 0.0 { rng.random_range(0.0..=diam) } else { 0.0 }))
        .collect();
    let f = tight_extension(space, &pins).expect("pins are in range");
    if rng.random_bool(0.5) {
        f.negate()
    } else {
        f
    }
}

/// Result of [`partial_diameter_space`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PartialDiameter {
    Exact { value: f64 },
    Bounds { lower: f64, upper: f64 },
}

/// diam(X; α) over subsets of points.
///
/// Exhaustive up to [`EXHAUSTIVE_MAX_POINTS`]; beyond that a lower/upper
/// bound pair is returned when `allow_bounds` is set.
pub fn partial_diameter_space(
    space: &FiniteMMSpace,
    alpha: f64,
    allow_bounds: bool,
) -> Result<PartialDiameter> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange { what: "alpha", value: alpha });
    }
    if alpha == 0.0 {
        return Ok(PartialDiameter::Exact { value: 0.0 });
    }
    let n = space.n();
    if n <= EXHAUSTIVE_MAX_POINTS {
        let size = 1usize << n;
        let mut diam = vec![0.0_f64; size];
        let mut mass = vec![0.0_f64; size];
        let mut best = f64::INFINITY;
        for mask in 1..size {
            let low = mask.trailing_zeros() as usize;
            let rest = mask & (mask - 1);
            let mut dm = diam[rest];
            let mut r = rest;
            while r != 0 {
                let j = r.trailing_zeros() as usize;
                dm = dm.max(space.d[low][j]);
                r &= r - 1;
            }
            diam[mask] = dm;
            mass[mask] = mass[rest] + space.w[low];
            if mass[mask] >= alpha - WEIGHT_TOL && dm < best {
                best = dm;
            }
        }
        return Ok(PartialDiameter::Exact { value: best });
    }
    if !allow_bounds {
        return Err(Error::BudgetExceeded {
            needed: (n as f64).exp2(),
            budget: (EXHAUSTIVE_MAX_POINTS as f64).exp2(),
        });
    }
    // Upper: nearest points around each center. Lower: a set of diameter r
    // lies in B_r(a) for each of its points a.
    let mut upper = f64::INFINITY;
    for c in 0..n {
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| space.d[c][a].total_cmp(&space.d[c][b]));
        let mut acc = 0.0;
        let mut taken = Vec::new();
        for &p in &order {
            taken.push(p);
            acc += space.w[p];
            if acc >= alpha - WEIGHT_TOL {
                break;
            }
        }
        let dm = taken
            .iter()
            .flat_map(|&a| taken.iter().map(move |&b| (a, b)))
            .map(|(a, b)| space.d[a][b])
            .fold(0.0, f64::max);
        upper = upper.min(dm);
    }
    let mut radii: Vec<f64> = space.d.iter().flatten().copied().collect();
    radii.sort_by(f64::total_cmp);
    radii.dedup();
    let lower = radii
        .into_iter()
        .find(|&r| {
            (0..n).any(|c| {
                let m: f64 = (0..n).filter(|&j| space.d[c][j] <= r).map(|j| space.w[j]).sum();
                m >= alpha - WEIGHT_TOL
            })
        })
        .unwrap_or(0.0);
    Ok(PartialDiameter::Bounds { lower, upper })
}

#[derive(Debug, Clone, Copy)]
pub struct ObsDiamOptions {
    /// Number of random Lipschitz samples, and of local improvement steps.
    pub budget: usize,
    pub seed: u64,
}

impl Default for ObsDiamOptions {
    fn default() -> Self {
        Self { budget: 200, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateRecord {
    pub source: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObservableDiameter {
    /// Achieved value of diam(f_*μ; 1 − κ); a lower bound on ObsDiam(X; −κ).
    pub value: f64,
    pub function: LipschitzFunction,
    /// True when `value` is the supremum (small spaces only).
    pub exact: bool,
    /// Each strict improvement in search order.
    pub log: Vec<CandidateRecord>,
}

fn pushed_partial_diameter(space: &FiniteMMSpace, f: &LipschitzFunction, alpha: f64) -> f64 {
    measure1d::partial_diameter(&space.pushforward(f), alpha).expect("alpha checked")
}

/// ObsDiam(X; −κ) = sup over 1-Lipschitz f of diam(f_*μ; 1 − κ).
///
/// The search covers the distance functions, tight extensions from up to
/// three pinned points, random samples and clamping moves. For spaces of at
/// most [`EXACT_OBSDIAM_MAX_POINTS`] points the supremum is also solved
/// exactly, one ordering of f at a time.
pub fn observable_diameter(
    space: &FiniteMMSpace,
    kappa: f64,
    opts: ObsDiamOptions,
) -> Result<ObservableDiameter> {
    if !(0.0..=1.0).contains(&kappa) {
        return Err(Error::OutOfRange { what: "kappa", value: kappa });
    }
    let alpha = 1.0 - kappa;
    let n = space.n();

    let mut candidates: Vec<(String, LipschitzFunction)> = Vec::new();
    for i in 0..n {
        candidates.push((format!("xi[{i}]"), space.distance_function(i)?));
    }
    let factors = [-1.0, 0.0, 1.0];
    for i in 0..n {
        for j in i + 1..n {
            for &a in &factors {
                let pins = [(i, 0.0), (j, a * space.d(i, j))];
                candidates.push((format!("pins{pins:?}"), tight_extension(space, &pins)?));
            }
        }
    }
    if n <= 30 {
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    for &a in &factors {
                        for &b in &factors {
                            let (vj, vk) = (a * space.d(i, j), b * space.d(i, k));
                            if (vj - vk).abs() > space.d(j, k) {
                                continue;
                            }
                            let pins = [(i, 0.0), (j, vj), (k, vk)];
                            candidates
                                .push((format!("pins{pins:?}"), tight_extension(space, &pins)?));
                        }
                    }
                }
            }
        }
    }
    for s in 0..opts.budget {
        let seed = opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(s as u64);
        candidates.push((format!("sample[{s}]"), sample_lipschitz(space, seed)));
    }

    let scores: Vec<f64> =
        candidates.par_iter().map(|(_, f)| pushed_partial_diameter(space, f, alpha)).collect();
    let mut log = Vec::new();
    let mut best_idx = 0;
    for (idx, &v) in scores.iter().enumerate() {
        if idx == 0 || v > scores[best_idx] {
            best_idx = idx;
            log.push(CandidateRecord { source: candidates[idx].0.clone(), value: v });
        }
    }
    let mut best_value = scores[best_idx];
    let mut best = candidates.swap_remove(best_idx).1;

    // clamp moves: pin one coordinate to a perturbed value and retract onto
    // the Lipschitz polytope by clamping into [v − d(·, x_i), v + d(·, x_i)]
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xC1A3_9E55);
    let diam = space.diam();
    for step in 0..opts.budget {
        let scale = diam * 0.25 * (1.0 - step as f64 / opts.budget as f64);
        let i = rng.random_range(0..n);
        let v = best.values[i] + rng.random_range(-1.0..=1.0) * scale;
        let moved = LipschitzFunction {
            values: (0..n)
                .map(|x| best.values[x].max(v - space.d(x, i)).min(v + space.d(x, i)))
                .collect(),
        };
        let value = pushed_partial_diameter(space, &moved, alpha);
        if value > best_value {
            best_value = value;
            best = moved;
            log.push(CandidateRecord { source: format!("clamp[{step}]"), value });
        }
    }

    let mut exact = false;
    if n <= EXACT_OBSDIAM_MAX_POINTS {
        let (f, _) = exact_observable_diameter(space, alpha, best_value);
        if let Some(f) = f {
            let value = pushed_partial_diameter(space, &f, alpha);
            if value > best_value {
                best_value = value;
                best = f;
                log.push(CandidateRecord { source: "exact".into(), value });
            }
        }
        exact = true;
    }
    Ok(ObservableDiameter { value: best_value, function: best, exact, log })
}

/// For a fixed ordering f(p₀) ≤ … ≤ f(pₙ₋₁), diam(f_*μ; α) is the minimum of
/// f(p_b) − f(p_a) over windows carrying mass ≥ α, so "value ≥ t" is a system
/// of difference constraints together with the Lipschitz bounds; it is
/// feasible iff its constraint graph has no negative cycle. Bisection on t per
/// ordering gives the supremum.
///
/// Returns a function beating `floor` (if one exists) and the supremum.
fn exact_observable_diameter(
    space: &FiniteMMSpace,
    alpha: f64,
    floor: f64,
) -> (Option<LipschitzFunction>, f64) {
    let n = space.n();
    if alpha <= 0.0 {
        return (None, 0.0);
    }
    let diam = space.diam();
    let mut best_t = floor;
    let mut best_f = None;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut sup: f64 = 0.0;
    loop {
        let windows: Vec<(usize, usize)> = (0..n)
            .filter_map(|a| {
                let mut m = 0.0;
                (a..n).find_map(|b| {
                    m += space.w[perm[b]];
                    (m >= alpha - WEIGHT_TOL).then_some((perm[a], perm[b]))
                })
            })
            .collect();
        let single = windows.iter().any(|(a, b)| a == b);
        if !single && !windows.is_empty() {
            let solve = |t: f64| difference_constraints(space, &perm, &windows, t);
            let (mut lo, mut hi) = (0.0, diam);
            if solve(sup.max(0.0) + 1e-12).is_some() {
                if solve(hi).is_some() {
                    lo = hi;
                }
                for _ in 0..64 {
                    let mid = 0.5 * (lo + hi);
                    if solve(mid).is_some() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                sup = sup.max(lo);
                if lo > best_t {
                    best_t = lo;
                    best_f = solve(lo).map(|values| LipschitzFunction { values });
                }
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    (best_f, sup)
}

/// Feasible potentials for the constraint system, or None on a negative cycle.
fn difference_constraints(
    space: &FiniteMMSpace,
    perm: &[usize],
    windows: &[(usize, usize)],
    t: f64,
) -> Option<Vec<f64>> {
    let n = space.n();
    // w[u][v]: constraint f_v − f_u ≤ w[u][v]
    let mut w: Vec<Vec<f64>> = (0..n).map(|i| space.d[i].clone()).collect();
    for k in 0..n - 1 {
        let (lo, hi) = (perm[k], perm[k + 1]);
        w[hi][lo] = w[hi][lo].min(0.0);
    }
    for &(a, b) in windows {
        w[b][a] = w[b][a].min(-t);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = w[i][k] + w[k][j];
                if via < w[i][j] {
                    w[i][j] = via;
                }
            }
        }
    }
    if (0..n).any(|i| w[i][i] < -1e-12) {
        return None;
    }
    Some((0..n).map(|v| (0..n).map(|u| w[u][v]).fold(0.0, f64::min)).collect())
}

fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}
