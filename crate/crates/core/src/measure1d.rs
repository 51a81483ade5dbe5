//! Probability measures on the real line.
//!
//! Every element of a 1-measurement is a measure on ℝ, so this module is the
//! common currency of the crate: discrete measures, their right-continuous
//! distribution functions, generalized inverses, monotone maps, partial
//! diameters and two metrics between measures (Kolmogorov–Smirnov and
//! Prohorov).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::prohorov;

/// Absolute tolerance for sums of weights.
pub const WEIGHT_TOL: f64 = 1e-12;

/// Atoms closer than this (relative to their magnitude) are merged.
pub const MERGE_TOL: f64 = 1e-12;

/// Compensated (Neumaier) summation.
pub(crate) fn stable_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for x in iter {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

pub(crate) fn same_atom(a: f64, b: f64) -> bool {
    (a - b).abs() <= MERGE_TOL * a.abs().max(b.abs()).max(1.0)
}

/// A finitely supported Borel probability measure on ℝ.
///
/// Atoms are strictly increasing and every weight is positive, so the atom
/// list is exactly the support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMeasure")]
pub struct DiscreteMeasure1D {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMeasure {
    atoms: Vec<f64>,
    weights: Vec<f64>,
}

impl TryFrom<RawMeasure> for DiscreteMeasure1D {
    type Error = Error;
    fn try_from(raw: RawMeasure) -> Result<Self> {
        DiscreteMeasure1D::new(raw.atoms, raw.weights)
    }
}

impl DiscreteMeasure1D {
    pub fn new(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMeasure("no atoms".into()));
        }
        if atoms.len() != weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "{} atoms but {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if let Some(a) = atoms.iter().find(|a| !a.is_finite()) {
            return Err(Error::InvalidMeasure(format!("non-finite atom {a}")));
        }
        if let Some(w) = atoms.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMeasure(format!(
                "atoms not strictly increasing at {} >= {}",
                w[0], w[1]
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(**w > 0.0) || !w.is_finite()) {
            return Err(Error::InvalidMeasure(format!("non-positive weight {w}")));
        }
        let total = stable_sum(weights.iter().copied());
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidMeasure(format!("weights sum to {total}")));
        }
        Ok(Self { atoms, weights })
    }

    pub fn dirac(x: f64) -> Self {
        Self { atoms: vec![x], weights: vec![1.0] }
    }

    /// Uniform measure on the given (not necessarily sorted or distinct) points.
    pub fn uniform(points: &[f64]) -> Result<Self> {
        let w = 1.0 / points.len() as f64;
        Self::from_weighted_values(points, &vec![w; points.len()])
    }

    /// Builds the law of a random variable taking `values[i]` with mass
    /// `weights[i]`: sorts, merges coincident values and drops zero mass.
    pub fn from_weighted_values(values: &[f64], weights: &[f64]) -> Result<Self> {
        if values.len() != weights.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} values but {} weights",
                values.len(),
                weights.len()
            )));
        }
        let mut pairs: Vec<(f64, f64)> = values
            .iter()
            .copied()
            .zip(weights.iter().copied())
            .filter(|&(_, w)| w > 0.0)
            .collect();
        if let Some((v, _)) = pairs.iter().find(|(v, _)| !v.is_finite()) {
            return Err(Error::InvalidMeasure(format!("non-finite value {v}")));
        }
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut atoms: Vec<f64> = Vec::with_capacity(pairs.len());
        let mut fibers: Vec<Vec<f64>> = Vec::with_capacity(pairs.len());
        for (v, w) in pairs {
            match atoms.last() {
                Some(&last) if same_atom(last, v) => fibers.last_mut().unwrap().push(w),
                _ => {
                    atoms.push(v);
                    fibers.push(vec![w]);
                }
            }
        }
        let weights = fibers.into_iter().map(stable_sum).collect();
        Self::new(atoms, weights)
    }

    /// Empirical measure of a sample.
    pub fn from_samples(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidMeasure("empty sample".into()));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len() as f64;
        let mut atoms = Vec::new();
        let mut counts: Vec<usize> = Vec::new();
        for v in sorted {
            match atoms.last() {
                Some(&last) if same_atom(last, v) => *counts.last_mut().unwrap() += 1,
                _ => {
                    atoms.push(v);
                    counts.push(1);
                }
            }
        }
        let weights = counts.into_iter().map(|c| c as f64 / n).collect();
        Self::new(atoms, weights)
    }

    pub fn atoms(&self) -> &[f64] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn min(&self) -> f64 {
        self.atoms[0]
    }

    pub fn max(&self) -> f64 {
        self.atoms[self.atoms.len() - 1]
    }

    /// Diameter of the support.
    pub fn diam(&self) -> f64 {
        self.max() - self.min()
    }

    pub fn translate(&self, shift: f64) -> Self {
        Self {
            atoms: self.atoms.iter().map(|a| a + shift).collect(),
            weights: self.weights.clone(),
        }
    }

    /// Image under x ↦ c − x.
    pub fn reflect(&self, c: f64) -> Self {
        Self {
            atoms: self.atoms.iter().rev().map(|a| c - a).collect(),
            weights: self.weights.iter().rev().copied().collect(),
        }
    }

    /// prefix[i] = mass of the first i atoms.
    pub(crate) fn prefix_masses(&self) -> Vec<f64> {
        let mut prefix = Vec::with_capacity(self.len() + 1);
        prefix.push(0.0);
        let (mut sum, mut comp) = (0.0_f64, 0.0_f64);
        for &w in &self.weights {
            let t = sum + w;
            if sum.abs() >= w {
                comp += (sum - t) + w;
            } else {
                comp += (w - t) + sum;
            }
            sum = t;
            prefix.push((sum + comp).min(1.0));
        }
        prefix
    }

    /// Index of the atom equal to `x`, if any.
    pub fn atom_index(&self, x: f64) -> Option<usize> {
        let i = self.atoms.partition_point(|&a| a < x && !same_atom(a, x));
        (i < self.len() && same_atom(self.atoms[i], x)).then_some(i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CdfKind {
    /// Right-continuous step function: jumps at breakpoints, 0 before the first.
    Step,
    /// Continuous piecewise-linear interpolation of the table, constant
    /// outside the breakpoint range.
    Linear,
}

/// A distribution function given by a breakpoint/value table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCdf")]
pub struct Cdf {
    kind: CdfKind,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCdf {
    kind: CdfKind,
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawCdf> for Cdf {
    type Error = Error;
    fn try_from(raw: RawCdf) -> Result<Self> {
        Cdf::new(raw.kind, raw.breakpoints, raw.values)
    }
}

impl Cdf {
    /// Validates the table. A final value within 1e-9 of 1 is snapped to 1.
    ///
    /// A `Linear` table whose first value is positive is accepted: it
    /// describes a law whose mass below the table is unaccounted for, and such
    /// a table never attains 0 (see [`Cdf::attains_zero`]).
    pub fn new(kind: CdfKind, breakpoints: Vec<f64>, mut values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::InvalidCdf(format!(
                "{} breakpoints, {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if breakpoints.iter().chain(values.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidCdf("non-finite entry".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidCdf("breakpoints not strictly increasing".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidCdf("values decrease".into()));
        }
        if values[0] < 0.0 {
            return Err(Error::InvalidCdf("negative value".into()));
        }
        let last = values.len() - 1;
        if (values[last] - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidCdf(format!("final value {} is not 1", values[last])));
        }
        values[last] = 1.0;
        for v in &mut values {
            *v = v.min(1.0);
        }
        Ok(Self { kind, breakpoints, values })
    }

    pub fn kind(&self) -> CdfKind {
        self.kind
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> f64 {
        let b = &self.breakpoints;
        let v = &self.values;
        // number of breakpoints <= t
        let k = b.partition_point(|&x| x <= t);
        match self.kind {
            CdfKind::Step => {
                if k == 0 {
                    0.0
                } else {
                    v[k - 1]
                }
            }
            CdfKind::Linear => {
                if k == 0 {
                    v[0]
                } else if k == b.len() {
                    v[k - 1]
                } else {
                    let (b0, b1, v0, v1) = (b[k - 1], b[k], v[k - 1], v[k]);
                    v0 + (t - b0) / (b1 - b0) * (v1 - v0)
                }
            }
        }
    }

    /// Whether G(t₀) = 0 for some t₀.
    pub fn attains_zero(&self) -> bool {
        match self.kind {
            CdfKind::Step => true,
            CdfKind::Linear => self.values[0] == 0.0,
        }
    }

    /// Continuous and strictly increasing between its last 0 and first 1.
    pub fn is_continuous_strict(&self) -> bool {
        self.kind == CdfKind::Linear
            && self.values[0] == 0.0
            && self.values.windows(2).all(|w| w[1] > w[0] || w[0] == 0.0 || w[1] == 1.0)
    }

    /// Smallest and largest breakpoint.
    pub fn range(&self) -> (f64, f64) {
        (self.breakpoints[0], self.breakpoints[self.breakpoints.len() - 1])
    }
}

/// Right-continuous distribution function of `mu`.
pub fn cdf(mu: &DiscreteMeasure1D) -> Cdf {
    let values = mu.prefix_masses()[1..].to_vec();
    Cdf::new(CdfKind::Step, mu.atoms.clone(), values).expect("a valid measure has a valid CDF")
}

/// Generalized inverse G̃(s) = inf{t : s ≤ G(t)}, extended to s = 0 by its
/// right limit.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantileFunction {
    cdf: Cdf,
    at_zero: f64,
}

/// Builds the generalized inverse of `g`.
pub fn quantile(g: &Cdf) -> Result<QuantileFunction> {
    if !g.attains_zero() {
        return Err(Error::NoZero);
    }
    let b = &g.breakpoints;
    let v = &g.values;
    let at_zero = match g.kind {
        CdfKind::Step => b[v.partition_point(|&x| x <= 0.0)],
        CdfKind::Linear => b[v.partition_point(|&x| x <= 0.0) - 1],
    };
    Ok(QuantileFunction { cdf: g.clone(), at_zero })
}

impl QuantileFunction {
    pub fn cdf(&self) -> &Cdf {
        &self.cdf
    }

    /// G̃(s) for s ∈ [0, 1]; arguments outside are clamped.
    pub fn eval(&self, s: f64) -> f64 {
        if s <= 0.0 {
            return self.at_zero;
        }
        let s = s.min(1.0);
        let b = &self.cdf.breakpoints;
        let v = &self.cdf.values;
        let k = v.partition_point(|&x| x < s);
        match self.cdf.kind {
            CdfKind::Step => b[k],
            CdfKind::Linear => {
                // v[0] == 0 < s, so k >= 1
                let (b0, b1, v0, v1) = (b[k - 1], b[k], v[k - 1], v[k]);
                (b0 + (s - v0) / (v1 - v0) * (b1 - b0)).min(b1)
            }
        }
    }

    /// Right limit sup{t : G(t) ≤ s}, for s ∈ [0, 1).
    pub fn eval_upper(&self, s: f64) -> f64 {
        let b = &self.cdf.breakpoints;
        let v = &self.cdf.values;
        let s = s.max(0.0);
        let k = v.partition_point(|&x| x <= s);
        if k == v.len() {
            return b[b.len() - 1];
        }
        match self.cdf.kind {
            CdfKind::Step => b[k],
            CdfKind::Linear => {
                if k == 0 {
                    return b[0];
                }
                let (b0, b1, v0, v1) = (b[k - 1], b[k], v[k - 1], v[k]);
                (b0 + (s - v0) / (v1 - v0) * (b1 - b0)).min(b1)
            }
        }
    }

    /// Levels in (0, 1) where G̃ jumps, i.e. where G is flat.
    pub fn jump_levels(&self) -> Vec<f64> {
        let v = &self.cdf.values;
        let mut levels: Vec<f64> = match self.cdf.kind {
            CdfKind::Step => v.to_vec(),
            CdfKind::Linear => v.windows(2).filter(|w| w[0] == w[1]).map(|w| w[0]).collect(),
        };
        levels.retain(|&s| s > 0.0 && s < 1.0);
        levels.dedup();
        levels
    }
}

/// A nondecreasing piecewise-linear map, constant outside its breakpoints.
///
/// Two equal consecutive breakpoints encode a jump; the map is
/// left-continuous there (it takes the first of the two values).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMap")]
pub struct MonotoneMap {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMap {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl TryFrom<RawMap> for MonotoneMap {
    type Error = Error;
    fn try_from(raw: RawMap) -> Result<Self> {
        MonotoneMap::new(raw.breakpoints, raw.values)
    }
}

impl MonotoneMap {
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() || breakpoints.len() != values.len() {
            return Err(Error::InvalidCdf("map table lengths differ or are empty".into()));
        }
        if breakpoints.iter().chain(values.iter()).any(|x| !x.is_finite()) {
            return Err(Error::InvalidCdf("non-finite map entry".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidCdf("map breakpoints decrease".into()));
        }
        if breakpoints.windows(3).any(|w| w[0] == w[2]) {
            return Err(Error::InvalidCdf("more than two equal breakpoints".into()));
        }
        if values.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::InvalidCdf("map values decrease".into()));
        }
        Ok(Self { breakpoints, values })
    }

    pub fn identity(lo: f64, hi: f64) -> Self {
        Self { breakpoints: vec![lo, hi], values: vec![lo, hi] }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, t: f64) -> f64 {
        let b = &self.breakpoints;
        let v = &self.values;
        if t <= b[0] {
            return v[0];
        }
        let last = b.len() - 1;
        if t >= b[last] {
            // left-continuous at a terminal jump
            return if t == b[last] && last > 0 && b[last - 1] == b[last] {
                v[last - 1]
            } else {
                v[last]
            };
        }
        let k = b.partition_point(|&x| x < t);
        if b[k] == t {
            return v[k];
        }
        let (b0, b1, v0, v1) = (b[k - 1], b[k], v[k - 1], v[k]);
        v0 + (t - b0) / (b1 - b0) * (v1 - v0)
    }

    /// Largest segment slope; infinite if the map jumps.
    pub fn lipschitz_constant(&self) -> f64 {
        self.breakpoints
            .windows(2)
            .zip(self.values.windows(2))
            .map(|(b, v)| {
                let dv = v[1] - v[0];
                if b[1] > b[0] {
                    dv / (b[1] - b[0])
                } else if dv > 0.0 {
                    f64::INFINITY
                } else {
                    0.0
                }
            })
            .fold(0.0, f64::max)
    }

    /// P(φ(X) ≤ y) where X has distribution function `source`.
    pub fn pushforward_cdf(&self, source: &Cdf, y: f64) -> f64 {
        let b = &self.breakpoints;
        let v = &self.values;
        if y < v[0] {
            return 0.0;
        }
        if y >= v[v.len() - 1] {
            return 1.0;
        }
        // last node with value <= y; the map exceeds y right after it
        let i = v.partition_point(|&x| x <= y) - 1;
        let t = if b[i + 1] > b[i] {
            b[i] + (y - v[i]) / (v[i + 1] - v[i]) * (b[i + 1] - b[i])
        } else {
            b[i]
        };
        source.eval(t)
    }
}

/// Pushforward of `mu` by an arbitrary real map.
pub fn pushforward<F: Fn(f64) -> f64>(mu: &DiscreteMeasure1D, map: F) -> DiscreteMeasure1D {
    let values: Vec<f64> = mu.atoms.iter().map(|&a| map(a)).collect();
    DiscreteMeasure1D::from_weighted_values(&values, &mu.weights)
        .expect("pushforward of a probability measure is a probability measure")
}

/// Pushforward of `mu` by the map given as a value table on its atoms.
pub fn pushforward_table(mu: &DiscreteMeasure1D, table: &[f64]) -> Result<DiscreteMeasure1D> {
    if table.len() != mu.len() {
        return Err(Error::DimensionMismatch(format!(
            "table has {} entries for {} atoms",
            table.len(),
            mu.len()
        )));
    }
    DiscreteMeasure1D::from_weighted_values(table, &mu.weights)
}

/// diam(μ; α) = inf{diam A : μ(A) ≥ α}.
///
/// On the line the infimum is attained by an interval whose endpoints are
/// atoms, so a two-pointer sweep over sorted atoms is exact.
pub fn partial_diameter(mu: &DiscreteMeasure1D, alpha: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange { what: "alpha", value: alpha });
    }
    if alpha == 0.0 {
        return Ok(0.0);
    }
    let prefix = mu.prefix_masses();
    let atoms = &mu.atoms;
    let n = atoms.len();
    let mut best = f64::INFINITY;
    let mut j = 0;
    for i in 0..n {
        j = j.max(i);
        while j < n && prefix[j + 1] - prefix[i] < alpha - WEIGHT_TOL {
            j += 1;
        }
        if j == n {
            break;
        }
        best = best.min(atoms[j] - atoms[i]);
    }
    Ok(if best.is_finite() { best } else { mu.diam() })
}

/// Kolmogorov–Smirnov distance sup_t |F_μ(t) − F_ν(t)|.
pub fn ks_distance(mu: &DiscreteMeasure1D, nu: &DiscreteMeasure1D) -> f64 {
    let (f, g) = (cdf(mu), cdf(nu));
    mu.atoms
        .iter()
        .chain(nu.atoms.iter())
        .map(|&t| (f.eval(t) - g.eval(t)).abs())
        .fold(0.0, f64::max)
}

/// Prohorov distance between two discrete measures on ℝ.
pub fn prohorov_distance(mu: &DiscreteMeasure1D, nu: &DiscreteMeasure1D) -> f64 {
    let cross: Vec<Vec<f64>> = mu
        .atoms
        .iter()
        .map(|&a| nu.atoms.iter().map(|&b| (a - b).abs()).collect())
        .collect();
    prohorov::prohorov_finite(&cross, &mu.weights, &nu.weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(points: &[f64]) -> DiscreteMeasure1D {
        DiscreteMeasure1D::uniform(points).unwrap()
    }

    #[test]
    fn cdf_examples() {
        let f = cdf(&DiscreteMeasure1D::dirac(0.0));
        assert_eq!(f.eval(-1e-9), 0.0);
        assert_eq!(f.eval(0.0), 1.0);
        let f = cdf(&u(&[0.0, 1.0]));
        assert_eq!((f.eval(-0.5), f.eval(0.0), f.eval(1.0)), (0.0, 0.5, 1.0));
        let f = cdf(&u(&[0.0, 1.0, 10.0]));
        assert!((f.eval(1.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn quantile_examples() {
        let q = quantile(&cdf(&u(&[0.0, 1.0]))).unwrap();
        assert_eq!(q.eval(0.0), 0.0);
        assert_eq!(q.eval(0.25), 0.0);
        assert_eq!(q.eval(0.5), 0.0);
        assert_eq!(q.eval(0.5 + 1e-12), 1.0);
        assert_eq!(q.eval(1.0), 1.0);

        let id = Cdf::new(CdfKind::Linear, vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        let q = quantile(&id).unwrap();
        for s in [0.0, 0.1, 0.37, 0.5, 1.0] {
            assert!((q.eval(s) - s).abs() < 1e-15);
        }

        let q = quantile(&cdf(&DiscreteMeasure1D::dirac(3.0))).unwrap();
        for s in [0.0, 0.3, 1.0] {
            assert_eq!(q.eval(s), 3.0);
        }
    }

    #[test]
    fn quantile_rejects_cdf_without_zero() {
        let g = Cdf::new(CdfKind::Linear, vec![0.0, 1.0], vec![0.2, 1.0]).unwrap();
        assert!(!g.attains_zero());
        assert!(matches!(quantile(&g), Err(Error::NoZero)));
    }

    #[test]
    fn quantile_at_zero_is_right_limit() {
        // flat at zero until 2, then linear
        let g = Cdf::new(CdfKind::Linear, vec![0.0, 2.0, 3.0], vec![0.0, 0.0, 1.0]).unwrap();
        let q = quantile(&g).unwrap();
        assert_eq!(q.eval(0.0), 2.0);
        assert!((q.eval(1e-9) - 2.0).abs() < 1e-8);
    }

    #[test]
    fn upper_quantile_sees_flats() {
        let g = Cdf::new(CdfKind::Linear, vec![0.0, 1.0, 2.0, 3.0], vec![0.0, 0.5, 0.5, 1.0])
            .unwrap();
        let q = quantile(&g).unwrap();
        assert_eq!(q.eval(0.5), 1.0);
        assert_eq!(q.eval_upper(0.5), 2.0);
        assert_eq!(q.jump_levels(), vec![0.5]);
    }

    #[test]
    fn pushforward_examples() {
        let mu = u(&[0.0, 1.0]);
        assert_eq!(pushforward(&mu, |x| x), mu);
        assert_eq!(pushforward(&mu, |_| 5.0), DiscreteMeasure1D::dirac(5.0));
        let nu = pushforward(&u(&[0.0, 1.0, 2.0]), |x| (x - 1.0).abs());
        assert_eq!(nu.atoms(), &[0.0, 1.0]);
        assert!((nu.weights()[0] - 1.0 / 3.0).abs() < 1e-15);
        assert!((nu.weights()[1] - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn partial_diameter_examples() {
        let mu = u(&[0.0, 1.0, 10.0]);
        assert_eq!(partial_diameter(&mu, 2.0 / 3.0).unwrap(), 1.0);
        assert_eq!(partial_diameter(&mu, 0.0).unwrap(), 0.0);
        assert_eq!(partial_diameter(&mu, 1.0).unwrap(), 10.0);
        assert!(partial_diameter(&mu, 1.5).is_err());
        assert!(partial_diameter(&mu, -0.1).is_err());
    }

    #[test]
    fn ks_examples() {
        let mu = u(&[0.0, 1.0]);
        assert_eq!(ks_distance(&mu, &mu), 0.0);
        assert_eq!(ks_distance(&DiscreteMeasure1D::dirac(0.0), &DiscreteMeasure1D::dirac(1.0)), 1.0);
        assert_eq!(ks_distance(&mu, &DiscreteMeasure1D::dirac(0.0)), 0.5);
    }

    #[test]
    fn prohorov_examples() {
        let mu = u(&[0.0, 1.0, 3.0]);
        assert_eq!(prohorov_distance(&mu, &mu), 0.0);
        let d0 = DiscreteMeasure1D::dirac(0.0);
        assert_eq!(prohorov_distance(&d0, &DiscreteMeasure1D::dirac(0.5)), 0.5);
        assert_eq!(prohorov_distance(&d0, &DiscreteMeasure1D::dirac(3.0)), 1.0);
    }

    #[test]
    fn measure_validation() {
        assert!(DiscreteMeasure1D::new(vec![1.0, 0.0], vec![0.5, 0.5]).is_err());
        assert!(DiscreteMeasure1D::new(vec![0.0, 1.0], vec![0.5, 0.4]).is_err());
        assert!(DiscreteMeasure1D::new(vec![0.0, 1.0], vec![1.0, 0.0]).is_err());
        assert!(DiscreteMeasure1D::new(vec![], vec![]).is_err());
        let json = r#"{"atoms":[0,1],"weights":[0.5,0.5]}"#;
        let mu: DiscreteMeasure1D = serde_json::from_str(json).unwrap();
        assert_eq!(serde_json::to_string(&mu).unwrap(), r#"{"atoms":[0.0,1.0],"weights":[0.5,0.5]}"#);
        assert!(serde_json::from_str::<DiscreteMeasure1D>(r#"{"atoms":[0],"weights":[0.9]}"#).is_err());
    }

    #[test]
    fn monotone_map_jump_is_left_continuous() {
        let m = MonotoneMap::new(vec![0.0, 1.0, 1.0, 2.0], vec![0.0, 0.0, 5.0, 5.0]).unwrap();
        assert_eq!(m.eval(1.0), 0.0);
        assert_eq!(m.eval(1.0 + 1e-12), 5.0);
        assert_eq!(m.lipschitz_constant(), f64::INFINITY);
        let src = Cdf::new(CdfKind::Linear, vec![0.0, 2.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(m.pushforward_cdf(&src, 0.0), 0.5);
        assert_eq!(m.pushforward_cdf(&src, 4.9), 0.5);
        assert_eq!(m.pushforward_cdf(&src, 5.0), 1.0);
    }
}
