//! Parameters, pullback pseudo-metrics and the box distance between small
//! finite mm-spaces.
//!
//! A pair of parameters of X and Y is the same thing as a coupling π of μ_X
//! and μ_Y laid out along [0, 1). A set I₀ on which the pullback metrics are
//! ε-close is a sub-measure σ ≤ π whose support is a clique of the graph on
//! X × Y joining (x, y) and (x′, y′) when |d_X(x, x′) − d_Y(y, y′)| ≤ ε.
//! Every sub-measure with marginals below μ_X, μ_Y extends to a coupling, so
//!
//!   □(X, Y) = inf_ε max(ε, 1 − F(ε)),  F(ε) = max over cliques C of the
//!   largest mass a sub-coupling can put on C,
//!
//! and F is a max-flow per maximal clique. F only changes at metric
//! discrepancies, so the infimum is a minimum over those levels.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::max_coupling;
use crate::mmspace::FiniteMMSpace;
use crate::prohorov::prohorov_finite;

/// Default bound on clique-search calls for [`box_distance_small`].
pub const DEFAULT_BUDGET: u64 = 1_000_000;
/// Largest |X|·|Y| handled by the exact clique search.
pub const MAX_EXACT_PAIRS: usize = 64;

const TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cell {
    pub start: f64,
    pub end: f64,
    pub point: usize,
}

/// A map [0, 1) → X, constant on consecutive half-open cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Parameter {
    pub cells: Vec<Cell>,
}

impl Parameter {
    fn from_lengths(points: impl IntoIterator<Item = (usize, f64)>) -> Self {
        let mut start = 0.0;
        let mut cells: Vec<Cell> = points
            .into_iter()
            .filter(|&(_, len)| len > 0.0)
            .map(|(point, len)| {
                let cell = Cell { start, end: start + len, point };
                start += len;
                cell
            })
            .collect();
        if let Some(last) = cells.last_mut() {
            last.end = 1.0;
        }
        Parameter { cells }
    }

    /// The point at s ∈ [0, 1).
    pub fn point_at(&self, s: f64) -> usize {
        let k = self.cells.partition_point(|c| c.end <= s);
        self.cells[k.min(self.cells.len() - 1)].point
    }

    /// Lebesgue measure of each fiber.
    pub fn pushforward(&self, n: usize) -> Vec<f64> {
        let mut w = vec![0.0; n];
        for c in &self.cells {
            w[c.point] += c.end - c.start;
        }
        w
    }
}

/// Consecutive cells in the given point order, lengths equal to the weights.
pub fn parameter_of(space: &FiniteMMSpace, ordering: &[usize]) -> Result<Parameter> {
    let n = space.n();
    let mut seen = vec![false; n];
    for &i in ordering {
        if i >= n || std::mem::replace(&mut seen[i], true) {
            return Err(Error::DimensionMismatch(format!("{ordering:?} is not an ordering of {n} points")));
        }
    }
    if ordering.len() != n {
        return Err(Error::DimensionMismatch(format!("{ordering:?} is not an ordering of {n} points")));
    }
    Ok(Parameter::from_lengths(ordering.iter().map(|&i| (i, space.weights()[i]))))
}

/// ρ(s, t) = d(φ(s), φ(t)) on [0, 1).
#[derive(Debug, Clone)]
pub struct PseudoMetricOnI<'a> {
    pub space: &'a FiniteMMSpace,
    pub parameter: &'a Parameter,
}

impl PseudoMetricOnI<'_> {
    pub fn eval(&self, s: f64, t: f64) -> f64 {
        self.space.d(self.parameter.point_at(s), self.parameter.point_at(t))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoupledCell {
    pub x: usize,
    pub y: usize,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxDistance {
    pub value: f64,
    /// False when the clique search ran out of budget; `value` is then an
    /// upper bound.
    pub exact: bool,
    /// The sub-coupling kept, i.e. I₀.
    pub kept: Vec<CoupledCell>,
    /// A full coupling extending `kept`, kept cells first.
    pub coupling: Vec<CoupledCell>,
}

impl BoxDistance {
    pub fn removed_mass(&self) -> f64 {
        (1.0 - self.kept.iter().map(|c| c.mass).sum::<f64>()).max(0.0)
    }

    /// Parameters of X and Y laying the coupling out along [0, 1); I₀ is
    /// the initial segment of length 1 − `removed_mass`.
    pub fn parameters(&self) -> (Parameter, Parameter) {
        (
            Parameter::from_lengths(self.coupling.iter().map(|c| (c.x, c.mass))),
            Parameter::from_lengths(self.coupling.iter().map(|c| (c.y, c.mass))),
        )
    }
}

/// Checks a box witness from scratch: marginals of the coupling, kept ⊂
/// coupling, kept mass ≥ 1 − value, and pairwise discrepancy ≤ value.
pub fn check_witness(x: &FiniteMMSpace, y: &FiniteMMSpace, b: &BoxDistance) -> bool {
    let tol = 1e-9;
    let mut mx = vec![0.0; x.n()];
    let mut my = vec![0.0; y.n()];
    for c in &b.coupling {
        mx[c.x] += c.mass;
        my[c.y] += c.mass;
    }
    let marginals = mx.iter().zip(x.weights()).all(|(a, w)| (a - w).abs() <= tol)
        && my.iter().zip(y.weights()).all(|(a, w)| (a - w).abs() <= tol);
    let close = b.kept.iter().all(|p| {
        b.kept.iter().all(|q| (x.d(p.x, q.x) - y.d(p.y, q.y)).abs() <= b.value + tol)
    });
    marginals && close && b.removed_mass() <= b.value + tol
}

/// Bron–Kerbosch with pivoting over vertex bitmasks, `adj` without
/// self-loops. Calls `report` on every maximal clique; returns false when
/// `calls` exceeds `budget`.
fn maximal_cliques(
    adj: &[u64],
    r: u64,
    mut p: u64,
    mut x: u64,
    calls: &mut u64,
    budget: u64,
    report: &mut dyn FnMut(u64),
) -> bool {
    *calls += 1;
    if *calls > budget {
        return false;
    }
    if p == 0 && x == 0 {
        report(r);
        return true;
    }
    let pivot = (p | x).trailing_zeros() as usize;
    let mut candidates = p & !adj[pivot];
    while candidates != 0 {
        let v = candidates.trailing_zeros() as usize;
        let bit = 1u64 << v;
        candidates &= !bit;
        if !maximal_cliques(adj, r | bit, p & adj[v], x & adj[v], calls, budget, report) {
            return false;
        }
        p &= !bit;
        x |= bit;
    }
    true
}

fn discrepancy_levels(x: &FiniteMMSpace, y: &FiniteMMSpace) -> Vec<f64> {
    let mut levels = vec![0.0];
    for i in 0..x.n() {
        for i2 in 0..x.n() {
            for j in 0..y.n() {
                for j2 in 0..y.n() {
                    let g = (x.d(i, i2) - y.d(j, j2)).abs();
                    if g < 1.0 {
                        levels.push(g);
                    }
                }
            }
        }
    }
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    levels
}

/// Extends a sub-coupling to a coupling by the north-west corner rule on the
/// leftover marginals.
fn complete_coupling(x: &FiniteMMSpace, y: &FiniteMMSpace, kept: &[CoupledCell]) -> Vec<CoupledCell> {
    let mut a = x.weights().to_vec();
    let mut b = y.weights().to_vec();
    for c in kept {
        a[c.x] -= c.mass;
        b[c.y] -= c.mass;
    }
    let mut coupling = kept.to_vec();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        let m = a[i].min(b[j]);
        if m > TOL {
            coupling.push(CoupledCell { x: i, y: j, mass: m });
        }
        a[i] -= m;
        b[j] -= m;
        if a[i] <= TOL {
            i += 1;
        } else {
            j += 1;
        }
    }
    coupling
}

/// Best sub-coupling on a clique at threshold `eps`, with its mass.
fn best_clique_mass(
    x: &FiniteMMSpace,
    y: &FiniteMMSpace,
    eps: f64,
    calls: &mut u64,
    budget: u64,
) -> (f64, Vec<CoupledCell>, bool) {
    let m = y.n();
    let pairs = x.n() * m;
    let adj: Vec<u64> = (0..pairs)
        .map(|p| {
            (0..pairs)
                .filter(|&q| q != p && (x.d(p / m, q / m) - y.d(p % m, q % m)).abs() <= eps + TOL)
                .fold(0u64, |mask, q| mask | 1 << q)
        })
        .collect();
    let mut best = (0.0, Vec::new());
    let mut report = |clique: u64| {
        let (mass, plan) = max_coupling(x.weights(), y.weights(), |i, j| clique >> (i * m + j) & 1 == 1);
        if mass > best.0 + TOL {
            best = (mass, plan.into_iter().map(|(x, y, mass)| CoupledCell { x, y, mass }).collect());
        }
    };
    let all = if pairs == 64 { u64::MAX } else { (1u64 << pairs) - 1 };
    let complete = maximal_cliques(&adj, 0, all, 0, calls, budget, &mut report);
    (best.0, best.1, complete)
}

/// The box distance between two small finite mm-spaces, exact unless the
/// clique search exceeds `budget` calls or |X|·|Y| > [`MAX_EXACT_PAIRS`];
/// then an upper bound flagged by `exact = false`.
pub fn box_distance_small(x: &FiniteMMSpace, y: &FiniteMMSpace, budget: u64) -> BoxDistance {
    if x.n() * y.n() > MAX_EXACT_PAIRS {
        let ord = ordered_value(x, y, &(0..x.n()).collect::<Vec<_>>(), &(0..y.n()).collect::<Vec<_>>());
        let coupling = complete_coupling(x, y, &ord.1);
        return BoxDistance { value: ord.0, exact: false, kept: ord.1, coupling };
    }
    let mut calls = 0;
    let mut exact = true;
    let mut best = (1.0, Vec::new());
    for eps in discrepancy_levels(x, y) {
        if eps >= best.0 {
            break;
        }
        let (mass, kept, complete) = best_clique_mass(x, y, eps, &mut calls, budget);
        exact &= complete;
        let value = eps.max(1.0 - mass);
        if value < best.0 {
            best = (value, kept);
        }
        if !exact {
            break;
        }
    }
    let coupling = complete_coupling(x, y, &best.1);
    BoxDistance { value: best.0.max(0.0), exact, kept: best.1, coupling }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for k in 0..=p.len() {
            let mut q = p.clone();
            q.insert(k, n - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Removal problem for the cell-aligned parameters of two orderings: keep a
/// heaviest set of cells of the common refinement whose pullback metrics
/// are ε-close, for each candidate ε.
fn ordered_value(x: &FiniteMMSpace, y: &FiniteMMSpace, ox: &[usize], oy: &[usize]) -> (f64, Vec<CoupledCell>) {
    let cells = {
        let (mut a, mut b) = (x.weights().to_vec(), y.weights().to_vec());
        let (mut i, mut j) = (0, 0);
        let mut cells = Vec::new();
        while i < ox.len() && j < oy.len() {
            let m = a[ox[i]].min(b[oy[j]]);
            if m > 0.0 {
                cells.push(CoupledCell { x: ox[i], y: oy[j], mass: m });
            }
            a[ox[i]] -= m;
            b[oy[j]] -= m;
            if a[ox[i]] <= TOL {
                i += 1;
            } else {
                j += 1;
            }
        }
        cells
    };
    let gap = |p: &CoupledCell, q: &CoupledCell| (x.d(p.x, q.x) - y.d(p.y, q.y)).abs();
    let mut levels: Vec<f64> = cells
        .iter()
        .flat_map(|p| cells.iter().map(move |q| (p, q)))
        .map(|(p, q)| gap(p, q))
        .filter(|&g| g < 1.0)
        .chain([0.0])
        .collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let k = cells.len();
    let mut best = (1.0, Vec::new());
    for eps in levels {
        if eps >= best.0 {
            break;
        }
        let adj: Vec<u64> = (0..k)
            .map(|p| (0..k).filter(|&q| q != p && gap(&cells[p], &cells[q]) <= eps + TOL).fold(0, |m, q| m | 1 << q))
            .collect();
        let mut heaviest = (0.0, 0u64);
        let mut report = |clique: u64| {
            let mass: f64 = (0..k).filter(|&c| clique >> c & 1 == 1).map(|c| cells[c].mass).sum();
            if mass > heaviest.0 + TOL {
                heaviest = (mass, clique);
            }
        };
        let all = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        maximal_cliques(&adj, 0, all, 0, &mut 0, u64::MAX, &mut report);
        let value = eps.max(1.0 - heaviest.0);
        if value < best.0 {
            best = (value, (0..k).filter(|&c| heaviest.1 >> c & 1 == 1).map(|c| cells[c]).collect());
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OrderedBox {
    pub value: f64,
    pub ordering_x: Vec<usize>,
    pub ordering_y: Vec<usize>,
    pub removed_mass: f64,
}

/// Best value over cell-aligned (non-interleaved) parameter pairs, by
/// enumerating both point orderings. An upper bound for the box distance.
pub fn box_distance_ordered(x: &FiniteMMSpace, y: &FiniteMMSpace) -> Result<OrderedBox> {
    if x.n() + y.n() > 10 {
        return Err(Error::BudgetExceeded { needed: (x.n() + y.n()) as f64, budget: 10.0 });
    }
    let (px, py) = (permutations(x.n()), permutations(y.n()));
    let best = px
        .par_iter()
        .flat_map_iter(|ox| py.iter().map(move |oy| (ox, oy)))
        .map(|(ox, oy)| {
            let (value, kept) = ordered_value(x, y, ox, oy);
            let removed = (1.0 - kept.iter().map(|c| c.mass).sum::<f64>()).max(0.0);
            OrderedBox { value, ordering_x: ox.clone(), ordering_y: oy.clone(), removed_mass: removed }
        })
        .reduce_with(|a, b| {
            let key = |o: &OrderedBox| (o.ordering_x.clone(), o.ordering_y.clone());
            if b.value < a.value || (b.value == a.value && key(&b) < key(&a)) {
                b
            } else {
                a
            }
        })
        .expect("at least one ordering");
    Ok(best)
}

/// Whether a bijection preserves distances and weights.
pub fn mm_isomorphic_finite(x: &FiniteMMSpace, y: &FiniteMMSpace) -> bool {
    fn extend(x: &FiniteMMSpace, y: &FiniteMMSpace, map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let i = map.len();
        if i == x.n() {
            return true;
        }
        for j in 0..y.n() {
            if used[j]
                || (x.weights()[i] - y.weights()[j]).abs() > TOL
                || map.iter().enumerate().any(|(a, &b)| (x.d(a, i) - y.d(b, j)).abs() > TOL)
            {
                continue;
            }
            used[j] = true;
            map.push(j);
            if extend(x, y, map, used) {
                return true;
            }
            map.pop();
            used[j] = false;
        }
        false
    }
    x.n() == y.n() && extend(x, y, &mut Vec::new(), &mut vec![false; y.n()])
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoxProhorovReport {
    #[serde(rename = "box")]
    pub box_value: f64,
    pub prohorov: f64,
    /// The witness coupling as cells along [0, 1), in indices of the base.
    pub witness_ordering: Vec<CoupledCell>,
    pub removed_mass: f64,
    pub exact: bool,
}

/// Box distance between (X, d, w1) and (X, d, w2) next to the Prohorov
/// distance between w1 and w2, checking box ≤ 2·prohorov + 1e−9.
pub fn prokhorov_bound_check(base: &[Vec<f64>], w1: &[f64], w2: &[f64], budget: u64) -> Result<BoxProhorovReport> {
    let n = base.len();
    if w1.len() != n || w2.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{n} points, weight vectors of length {} and {}",
            w1.len(),
            w2.len()
        )));
    }
    if let Some(&w) = w1.iter().chain(w2).find(|w| !(**w >= 0.0)) {
        return Err(Error::InvalidMeasure(format!("weight {w}")));
    }
    let support = |w: &[f64]| (0..n).filter(|&i| w[i] > 0.0).collect::<Vec<_>>();
    let (s1, s2) = (support(w1), support(w2));
    let x = FiniteMMSpace::restrict_to_support(base, w1)?;
    let y = FiniteMMSpace::restrict_to_support(base, w2)?;
    let b = box_distance_small(&x, &y, budget);
    let prohorov = prohorov_finite(base, w1, w2);
    if b.value > 2.0 * prohorov + 1e-9 {
        return Err(Error::Construction(format!("box {} exceeds twice the Prohorov distance {prohorov}", b.value)));
    }
    let removed_mass = b.removed_mass();
    Ok(BoxProhorovReport {
        box_value: b.value,
        prohorov,
        witness_ordering: b.coupling.iter().map(|c| CoupledCell { x: s1[c.x], y: s2[c.y], mass: c.mass }).collect(),
        removed_mass,
        exact: b.exact,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spaces;

    fn two_point(d: f64, w: [f64; 2]) -> FiniteMMSpace {
        FiniteMMSpace::new(vec![vec![0.0, d], vec![d, 0.0]], w.to_vec()).unwrap()
    }

    fn point() -> FiniteMMSpace {
        FiniteMMSpace::uniform(vec![vec![0.0]]).unwrap()
    }

    #[test]
    fn parameter_examples() {
        let p = parameter_of(&spaces::line(&[0.0, 1.0]), &[0, 1]).unwrap();
        assert_eq!(p.cells, vec![Cell { start: 0.0, end: 0.5, point: 0 }, Cell { start: 0.5, end: 1.0, point: 1 }]);
        assert_eq!(parameter_of(&point(), &[0]).unwrap().cells, vec![Cell { start: 0.0, end: 1.0, point: 0 }]);
        let p = parameter_of(&two_point(1.0, [0.25, 0.75]), &[1, 0]).unwrap();
        assert_eq!(p.pushforward(2), vec![0.25, 0.75]);
        assert_eq!(p.point_at(0.1), 1);
        assert_eq!(p.point_at(0.8), 0);
        assert!(parameter_of(&point(), &[0, 0]).is_err());
    }

    #[test]
    fn pseudo_metric_inherits_the_metric() {
        let space = spaces::cycle(5);
        let parameter = parameter_of(&space, &[3, 1, 4, 0, 2]).unwrap();
        let rho = PseudoMetricOnI { space: &space, parameter: &parameter };
        let s = [0.05, 0.33, 0.5, 0.71, 0.99];
        for a in s {
            assert_eq!(rho.eval(a, a), 0.0);
            for b in s {
                assert_eq!(rho.eval(a, b), rho.eval(b, a));
                for c in s {
                    assert!(rho.eval(a, c) <= rho.eval(a, b) + rho.eval(b, c));
                }
            }
        }
    }

    #[test]
    fn box_examples() {
        let c5 = spaces::cycle(5);
        assert_eq!(box_distance_small(&c5, &c5, DEFAULT_BUDGET).value, 0.0);

        let two = spaces::line(&[0.0, 1.0]);
        let b = box_distance_small(&two, &point(), DEFAULT_BUDGET);
        assert_eq!(b.value, 0.5);
        assert!(b.exact && check_witness(&two, &point(), &b));

        for (delta, expected) in [(0.1, 0.1), (0.3, 0.3), (0.7, 0.5)] {
            let other = spaces::line(&[0.0, 1.0 + delta]);
            let b = box_distance_small(&two, &other, DEFAULT_BUDGET);
            assert!((b.value - expected).abs() < 1e-12, "δ = {delta}: {}", b.value);
            assert!(check_witness(&two, &other, &b));
            let o = box_distance_ordered(&two, &other).unwrap();
            assert!((o.value - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn witness_parameters_push_to_the_weights() {
        let x = FiniteMMSpace::new(spaces::cycle(3).distances().to_vec(), vec![0.5, 0.3, 0.2]).unwrap();
        let y = spaces::line(&[0.0, 1.0, 2.5]);
        let b = box_distance_small(&x, &y, DEFAULT_BUDGET);
        assert!(check_witness(&x, &y, &b));
        let (px, py) = b.parameters();
        for (p, w) in [(px.pushforward(3), x.weights()), (py.pushforward(3), y.weights())] {
            assert!(p.iter().zip(w).all(|(a, b)| (a - b).abs() < 1e-12));
        }
        let ordered = box_distance_ordered(&x, &y).unwrap();
        assert!(b.value <= ordered.value + 1e-12);
    }

    #[test]
    fn tiny_budget_is_flagged() {
        let b = box_distance_small(&spaces::cycle(4), &spaces::path(&[1.0, 2.0, 0.5, 1.0]), 3);
        assert!(!b.exact);
    }

    #[test]
    fn isomorphism_search() {
        let a = spaces::triangle(1.0, 2.0, 2.5);
        let b = spaces::triangle(2.5, 2.0, 1.0);
        assert!(mm_isomorphic_finite(&a, &b));
        assert!(!mm_isomorphic_finite(&a, &spaces::triangle(1.0, 2.0, 2.4)));
    }

    #[test]
    fn prohorov_report_examples() {
        let d = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let r = prokhorov_bound_check(&d, &[0.5, 0.5], &[0.5, 0.5], DEFAULT_BUDGET).unwrap();
        assert_eq!((r.box_value, r.prohorov), (0.0, 0.0));
        let r = prokhorov_bound_check(&d, &[1.0, 0.0], &[0.5, 0.5], DEFAULT_BUDGET).unwrap();
        assert_eq!((r.box_value, r.prohorov), (0.5, 0.5));
        let json = serde_json::to_string(&r).unwrap();
        assert!(json.starts_with(r#"{"box":0.5,"prohorov":0.5,"witness_ordering":["#));
        assert_eq!(serde_json::from_str::<BoxProhorovReport>(&json).unwrap(), r);
        assert!(prokhorov_bound_check(&d, &[1.0], &[0.5, 0.5], DEFAULT_BUDGET).is_err());
    }
}
