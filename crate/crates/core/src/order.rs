//! The Lipschitz order between measures on the line.
//!
//! μ ≺ ν when some 1-Lipschitz map pushes ν to μ. For discrete measures it is
//! enough to look for a map supp ν → supp μ (a deterministic map cannot split
//! an atom, and a 1-Lipschitz map on a subset of ℝ extends to all of ℝ), which
//! makes the relation decidable by enumeration.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure1d::{
    self, same_atom, stable_sum, Cdf, DiscreteMeasure1D, MonotoneMap, WEIGHT_TOL,
};
use crate::mmspace::{self, FiniteMMSpace, LipschitzFunction};

/// Default bound on search nodes for [`dominates_bruteforce`].
pub const DEFAULT_BUDGET: u64 = 10_000_000;

const SLOPE_TOL: f64 = 1e-12;

fn within_slope(dy: f64, dx: f64) -> bool {
    dy.abs() <= dx.abs() * (1.0 + SLOPE_TOL) + SLOPE_TOL
}

/// A value table on supp ν witnessing μ ≺ ν.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DominanceWitness {
    pub on: Vec<f64>,
    pub values: Vec<f64>,
}

impl DominanceWitness {
    pub fn identity(mu: &DiscreteMeasure1D) -> Self {
        Self { on: mu.atoms().to_vec(), values: mu.atoms().to_vec() }
    }

    /// Largest difference quotient of the table.
    pub fn lipschitz_constant(&self) -> f64 {
        let mut lip: f64 = 0.0;
        for i in 0..self.on.len() {
            for j in i + 1..self.on.len() {
                lip = lip.max((self.values[j] - self.values[i]).abs() / (self.on[j] - self.on[i]).abs());
            }
        }
        lip
    }

    pub fn eval(&self, x: f64) -> Option<f64> {
        self.on.iter().position(|&a| same_atom(a, x)).map(|i| self.values[i])
    }

    /// Checks that the table is 1-Lipschitz on supp ν and pushes ν to μ.
    pub fn verify(&self, mu: &DiscreteMeasure1D, nu: &DiscreteMeasure1D) -> Result<()> {
        if self.on.len() != nu.len() || self.values.len() != nu.len() {
            return Err(Error::InvalidWitness("table does not cover supp ν".into()));
        }
        if !self.on.iter().zip(nu.atoms()).all(|(a, b)| same_atom(*a, *b)) {
            return Err(Error::InvalidWitness("table is not defined on supp ν".into()));
        }
        for i in 0..self.on.len() {
            for j in i + 1..self.on.len() {
                if !within_slope(self.values[j] - self.values[i], self.on[j] - self.on[i]) {
                    return Err(Error::InvalidWitness(format!(
                        "slope {} between {} and {}",
                        self.lipschitz_constant(),
                        self.on[i],
                        self.on[j]
                    )));
                }
            }
        }
        let pushed = measure1d::pushforward_table(nu, &self.values)?;
        if !measures_equal(&pushed, mu) {
            return Err(Error::InvalidWitness("pushforward of ν differs from μ".into()));
        }
        Ok(())
    }

    /// Witness for μ ≺ ρ from `self` (μ ≺ ν) and `inner` (ν ≺ ρ).
    pub fn compose(&self, inner: &DominanceWitness) -> Result<DominanceWitness> {
        let values = inner
            .values
            .iter()
            .map(|&y| {
                self.eval(y)
                    .ok_or_else(|| Error::InvalidWitness(format!("{y} is outside the outer table")))
            })
            .collect::<Result<_>>()?;
        Ok(DominanceWitness { on: inner.on.clone(), values })
    }
}

/// Equal atoms and weights up to merge and weight tolerance.
pub fn measures_equal(a: &DiscreteMeasure1D, b: &DiscreteMeasure1D) -> bool {
    a.len() == b.len()
        && a.atoms().iter().zip(b.atoms()).all(|(x, y)| same_atom(*x, *y))
        && a.weights().iter().zip(b.weights()).all(|(x, y)| (x - y).abs() <= WEIGHT_TOL)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Dominance {
    /// μ ≺ ν, with the first witness in lexicographic map order.
    Dominates { witness: DominanceWitness, nodes: u64 },
    /// The search space was exhausted without a witness.
    NotDominated { nodes: u64, reason: String },
    /// The node budget ran out first.
    Undecided { nodes: u64, budget: u64 },
}

impl Dominance {
    pub fn holds(&self) -> Option<bool> {
        match self {
            Dominance::Dominates { .. } => Some(true),
            Dominance::NotDominated { .. } => Some(false),
            Dominance::Undecided { .. } => None,
        }
    }

    pub fn witness(&self) -> Option<&DominanceWitness> {
        match self {
            Dominance::Dominates { witness, .. } => Some(witness),
            _ => None,
        }
    }
}

struct Search<'a> {
    target: &'a [f64],
    target_w: &'a [f64],
    src: &'a [f64],
    src_w: &'a [f64],
    fill: Vec<f64>,
    assign: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl Search<'_> {
    fn deficit(&self, i: usize) -> f64 {
        self.target_w[i] - self.fill[i]
    }

    /// Returns Some(found) or None when out of budget.
    fn dfs(&mut self, j: usize) -> Option<bool> {
        if j == self.src.len() {
            return Some((0..self.target.len()).all(|i| self.deficit(i) <= WEIGHT_TOL));
        }
        for i in 0..self.target.len() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            if self.src_w[j] > self.deficit(i) + WEIGHT_TOL {
                continue;
            }
            // adjacent slopes suffice: on the line they bound all slopes
            if j > 0 {
                let prev = self.assign[j - 1];
                if !within_slope(self.target[i] - self.target[prev], self.src[j] - self.src[j - 1]) {
                    continue;
                }
            }
            self.fill[i] += self.src_w[j];
            self.assign.push(i);
            let reach = self.src[self.src.len() - 1] - self.src[j];
            let left = self.src.len() - 1 - j;
            let mut needy = 0;
            let feasible = (0..self.target.len()).all(|t| {
                if self.deficit(t) <= WEIGHT_TOL {
                    return true;
                }
                needy += 1;
                within_slope(self.target[t] - self.target[i], reach)
            }) && needy <= left;
            if feasible {
                match self.dfs(j + 1) {
                    Some(true) => return Some(true),
                    None => return None,
                    Some(false) => {}
                }
            }
            self.assign.pop();
            self.fill[i] -= self.src_w[j];
        }
        Some(false)
    }
}

/// Decides μ ≺ ν by searching maps supp ν → supp μ in lexicographic order,
/// pruning prefixes that break the slope bound, overfill an atom of μ, or
/// leave an unfilled atom out of reach.
pub fn dominates_bruteforce(mu: &DiscreteMeasure1D, nu: &DiscreteMeasure1D, budget: u64) -> Dominance {
    if mu.len() > nu.len() {
        return Dominance::NotDominated {
            nodes: 0,
            reason: "supp μ has more atoms than supp ν".into(),
        };
    }
    if !within_slope(mu.diam(), nu.diam()) {
        return Dominance::NotDominated { nodes: 0, reason: "diam supp μ > diam supp ν".into() };
    }
    let mut search = Search {
        target: mu.atoms(),
        target_w: mu.weights(),
        src: nu.atoms(),
        src_w: nu.weights(),
        fill: vec![0.0; mu.len()],
        assign: Vec::with_capacity(nu.len()),
        nodes: 0,
        budget,
    };
    match search.dfs(0) {
        Some(true) => {
            let values = search.assign.iter().map(|&i| mu.atoms()[i]).collect();
            Dominance::Dominates {
                witness: DominanceWitness { on: nu.atoms().to_vec(), values },
                nodes: search.nodes,
            }
        }
        Some(false) => Dominance::NotDominated {
            nodes: search.nodes,
            reason: "no 1-Lipschitz map pushes ν to μ".into(),
        },
        None => Dominance::Undecided { nodes: search.nodes, budget },
    }
}

/// Decides Y ≺ X for finite mm-spaces: searches maps X → Y that are
/// 1-Lipschitz and push μ_X to μ_Y. `None` when the node budget runs out.
pub fn dominates_spaces(y: &FiniteMMSpace, x: &FiniteMMSpace, budget: u64) -> Option<Option<Vec<usize>>> {
    fn extend(
        y: &FiniteMMSpace,
        x: &FiniteMMSpace,
        map: &mut Vec<usize>,
        fill: &mut [f64],
        nodes: &mut u64,
        budget: u64,
    ) -> Option<bool> {
        let i = map.len();
        if i == x.n() {
            return Some(fill.iter().zip(y.weights()).all(|(f, w)| (f - w).abs() <= WEIGHT_TOL));
        }
        for j in 0..y.n() {
            *nodes += 1;
            if *nodes > budget {
                return None;
            }
            if fill[j] + x.weights()[i] > y.weights()[j] + WEIGHT_TOL
                || map.iter().enumerate().any(|(a, &b)| !within_slope(y.d(b, j), x.d(a, i)))
            {
                continue;
            }
            fill[j] += x.weights()[i];
            map.push(j);
            match extend(y, x, map, fill, nodes, budget) {
                Some(true) => return Some(true),
                None => return None,
                Some(false) => {}
            }
            map.pop();
            fill[j] -= x.weights()[i];
        }
        Some(false)
    }
    let mut map = Vec::with_capacity(x.n());
    let found = extend(y, x, &mut map, &mut vec![0.0; y.n()], &mut 0, budget)?;
    Some(found.then_some(map))
}

fn lex_less(a: &DiscreteMeasure1D, b: &DiscreteMeasure1D) -> bool {
    let key = |m: &DiscreteMeasure1D| {
        m.atoms().iter().chain(m.weights()).copied().collect::<Vec<f64>>()
    };
    key(a).partial_cmp(&key(b)) == Some(std::cmp::Ordering::Less)
}

/// Representative of the mm-isomorphism class of (ℝ, |·|, μ): translated so
/// the support starts at 0, reflected when that is lexicographically smaller.
pub fn canonical_form(mu: &DiscreteMeasure1D) -> DiscreteMeasure1D {
    let shifted = mu.translate(-mu.min());
    let reflected = mu.reflect(mu.max());
    if lex_less(&reflected, &shifted) {
        reflected
    } else {
        shifted
    }
}

/// Whether (ℝ, μ) and (ℝ, ν) are mm-isomorphic: the isometries between
/// subsets of ℝ are restrictions of x ↦ ±x + c.
pub fn mm_isomorphic_1d(mu: &DiscreteMeasure1D, nu: &DiscreteMeasure1D) -> bool {
    if mu.len() != nu.len() {
        return false;
    }
    let m = mu.translate(-mu.min());
    measures_equal(&m, &nu.translate(-nu.min())) || measures_equal(&m, &nu.reflect(nu.max()))
}

/// For μ ≺ ν with equal support diameters, checks that the witness has the
/// rigid form x ↦ min supp μ + |x − x₀| for an endpoint x₀ of supp ν, hence
/// is an isometry.
pub fn verify_diam_iso(
    mu: &DiscreteMeasure1D,
    nu: &DiscreteMeasure1D,
    witness: &DominanceWitness,
) -> Result<bool> {
    witness.verify(mu, nu)?;
    if !same_atom(mu.diam(), nu.diam()) {
        return Err(Error::DiameterMismatch(mu.diam(), nu.diam()));
    }
    let y0 = mu.min();
    let rigid = |x0: f64| {
        witness.eval(x0).is_some_and(|v| same_atom(v, y0))
            && witness.on.iter().zip(&witness.values).all(|(&x, &v)| same_atom(v, y0 + (x - x0).abs()))
    };
    Ok(rigid(nu.min()) || rigid(nu.max()))
}

/// Continuous strictly increasing F and any G attaining 0: samples
/// φ = G̃ ∘ F, which pushes the law of F to the law of G.
///
/// `resolution` is the grid step relative to the support width of F. The
/// grid also contains every breakpoint of F and every preimage under F of a
/// level of G, so φ is exact for piecewise-linear inputs; jumps of G̃ become
/// jumps of the returned map.
pub fn monotone_transport(f: &Cdf, g: &Cdf, resolution: f64) -> Result<MonotoneMap> {
    if !f.is_continuous_strict() {
        return Err(Error::SourceNotContinuous(format!("{:?} table", f.kind())));
    }
    if !(resolution > 0.0 && resolution <= 1.0) {
        return Err(Error::OutOfRange { what: "resolution", value: resolution });
    }
    let qg = measure1d::quantile(g)?;
    let qf = measure1d::quantile(f)?;
    let (lo, hi) = (qf.eval(0.0), qf.eval(1.0));

    // (t, s = F(t), is_level_node)
    let mut nodes: Vec<(f64, f64, bool)> = Vec::new();
    let steps = (1.0 / resolution).ceil() as usize;
    for k in 0..=steps {
        let t = lo + (hi - lo) * k as f64 / steps as f64;
        nodes.push((t, f.eval(t), false));
    }
    for &b in f.breakpoints() {
        if b > lo && b < hi {
            nodes.push((b, f.eval(b), false));
        }
    }
    let jumps = qg.jump_levels();
    for &v in g.values().iter().chain(&jumps) {
        if v > 0.0 && v < 1.0 {
            nodes.push((qf.eval(v), v, true));
        }
    }
    nodes.sort_by(|a, b| a.0.total_cmp(&b.0).then(b.2.cmp(&a.2)));
    // a grid node within rounding distance of another node only adds noise
    // to the difference quotients
    let close = 1e-9 * (hi - lo);
    let mut merged: Vec<(f64, f64, bool)> = Vec::with_capacity(nodes.len());
    for node in nodes {
        match merged.last_mut() {
            Some(last) if node.0 == last.0 || (node.0 - last.0 <= close && !(last.2 && node.2)) => {
                if node.2 {
                    *last = node;
                }
            }
            _ => merged.push(node),
        }
    }
    let nodes = merged;

    let mut bps = Vec::with_capacity(nodes.len() + jumps.len());
    let mut vals: Vec<f64> = Vec::with_capacity(nodes.len() + jumps.len());
    let mut level: f64 = 0.0;
    let push = |t: f64, v: f64, bps: &mut Vec<f64>, vals: &mut Vec<f64>| {
        let v = vals.last().map_or(v, |&last| v.max(last));
        bps.push(t);
        vals.push(v);
    };
    for (t, s, is_level) in nodes {
        level = level.max(s);
        let lower = qg.eval(level);
        push(t, lower, &mut bps, &mut vals);
        if is_level && level < 1.0 {
            let upper = qg.eval_upper(level);
            if upper > lower {
                push(t, upper, &mut bps, &mut vals);
            }
        }
    }
    MonotoneMap::new(bps, vals)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Maximality {
    /// diam supp μ = diam X, so μ is maximal.
    Maximal,
    /// A strictly larger element of the 1-measurement was found.
    DominatedBy { nu: DiscreteMeasure1D, generator: LipschitzFunction, witness: DominanceWitness },
    /// No dominator among the candidates tried; not a proof of maximality.
    Inconclusive { tried: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct MaximalityOptions {
    pub samples: usize,
    pub seed: u64,
    pub budget: u64,
}

impl Default for MaximalityOptions {
    fn default() -> Self {
        Self { samples: 200, seed: 0, budget: DEFAULT_BUDGET }
    }
}

/// Decides maximality of μ = f_*μ_X in M(X; 1) when diam supp μ = diam X;
/// otherwise searches distance functions and sampled Lipschitz functions for
/// a strict dominator. Maximality is read up to mm-isomorphism: a dominator
/// isomorphic to μ does not count.
pub fn maximality_certificate(
    space: &FiniteMMSpace,
    f: &LipschitzFunction,
    opts: MaximalityOptions,
) -> Result<Maximality> {
    f.check(space)?;
    let mu = space.pushforward(f);
    let diam = space.diam();
    if (mu.diam() - diam).abs() <= 1e-9 * diam.max(f64::MIN_POSITIVE) {
        return Ok(Maximality::Maximal);
    }
    let mut tried = 0;
    let candidates = (0..space.n())
        .map(|i| space.distance_function(i).expect("index in range"))
        .chain((0..opts.samples as u64).map(|s| mmspace::sample_lipschitz(space, opts.seed + s)));
    for g in candidates {
        tried += 1;
        let nu = space.pushforward(&g);
        if nu.diam() <= mu.diam() {
            // equal diameters force isomorphism, smaller ones cannot dominate
            continue;
        }
        if let Dominance::Dominates { witness, .. } = dominates_bruteforce(&mu, &nu, opts.budget) {
            if !mm_isomorphic_1d(&mu, &nu) {
                return Ok(Maximality::DominatedBy { nu, generator: g, witness });
            }
        }
    }
    Ok(Maximality::Inconclusive { tried })
}

/// Total mass check used by tests and reports.
pub fn total_mass(mu: &DiscreteMeasure1D) -> f64 {
    stable_sum(mu.weights().iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure1d::{cdf, CdfKind};
    use crate::spaces;

    fn u(points: &[f64]) -> DiscreteMeasure1D {
        DiscreteMeasure1D::uniform(points).unwrap()
    }

    /// Every map supp ν → supp μ, no pruning.
    fn dominates_by_enumeration(mu: &DiscreteMeasure1D, nu: &DiscreteMeasure1D) -> bool {
        let (m, k) = (mu.len(), nu.len());
        (0..m.pow(k as u32)).any(|code| {
            let mut c = code;
            let table: Vec<f64> = (0..k)
                .map(|_| {
                    let v = mu.atoms()[c % m];
                    c /= m;
                    v
                })
                .collect();
            let w = DominanceWitness { on: nu.atoms().to_vec(), values: table };
            w.verify(mu, nu).is_ok()
        })
    }

    #[test]
    fn dominance_examples() {
        let nu = u(&[0.0, 1.0, 5.0]);
        let d = dominates_bruteforce(&DiscreteMeasure1D::dirac(0.0), &nu, DEFAULT_BUDGET);
        assert_eq!(d.witness().unwrap().values, vec![0.0; 3]);

        let mu = u(&[0.0, 0.5]);
        let nu = u(&[0.0, 1.0]);
        let d = dominates_bruteforce(&mu, &nu, DEFAULT_BUDGET);
        assert_eq!(d.witness().unwrap().values, vec![0.0, 0.5]);
        assert!(dominates_by_enumeration(&mu, &nu));

        let mu = u(&[0.0, 2.0]);
        assert_eq!(dominates_bruteforce(&mu, &nu, DEFAULT_BUDGET).holds(), Some(false));
        assert!(!dominates_by_enumeration(&mu, &nu));
    }

    #[test]
    fn tiny_budget_is_undecided() {
        let mu = u(&[0.0, 0.5, 1.0]);
        let nu = u(&[0.0, 0.5, 1.0]);
        assert!(matches!(dominates_bruteforce(&mu, &nu, 1), Dominance::Undecided { .. }));
    }

    #[test]
    fn pruned_search_agrees_with_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let grid = [0.0, 0.5, 1.0, 1.5, 2.0];
        let draw = |rng: &mut rand_chacha::ChaCha8Rng| {
            let k = rng.random_range(1..=4);
            let pts: Vec<f64> = (0..k).map(|_| grid[rng.random_range(0..grid.len())]).collect();
            let ws: Vec<f64> = (0..k).map(|_| rng.random_range(1..=3) as f64).collect();
            let total: f64 = ws.iter().sum();
            let ws: Vec<f64> = ws.iter().map(|w| w / total).collect();
            DiscreteMeasure1D::from_weighted_values(&pts, &ws).unwrap()
        };
        for _ in 0..400 {
            let (mu, nu) = (draw(&mut rng), draw(&mut rng));
            let fast = dominates_bruteforce(&mu, &nu, DEFAULT_BUDGET);
            assert_eq!(fast.holds(), Some(dominates_by_enumeration(&mu, &nu)), "{mu:?} {nu:?}");
            if let Some(w) = fast.witness() {
                w.verify(&mu, &nu).unwrap();
            }
        }
    }

    #[test]
    fn isomorphism_examples() {
        let mu = u(&[0.0, 1.0, 3.0]);
        assert!(mm_isomorphic_1d(&mu, &mu.translate(7.0)));
        assert!(mm_isomorphic_1d(&mu, &u(&[0.0, 2.0, 3.0])));
        assert!(!mm_isomorphic_1d(&mu, &u(&[0.0, 1.0, 4.0])));
        assert_eq!(canonical_form(&u(&[5.0, 7.0, 8.0])), u(&[0.0, 1.0, 3.0]));
        assert_eq!(canonical_form(&u(&[5.0, 6.0, 8.0])), u(&[0.0, 1.0, 3.0]));
    }

    #[test]
    fn diam_iso_examples() {
        let mu = u(&[0.0, 1.0]);
        assert!(verify_diam_iso(&mu, &mu, &DominanceWitness::identity(&mu)).unwrap());

        let nu = DiscreteMeasure1D::new(vec![0.0, 1.0, 2.0], vec![0.5, 0.3, 0.2]).unwrap();
        let refl = nu.reflect(2.0);
        let w = DominanceWitness { on: vec![0.0, 1.0, 2.0], values: vec![2.0, 1.0, 0.0] };
        assert!(verify_diam_iso(&refl, &nu, &w).unwrap());

        let mu = u(&[0.0, 2.0]);
        let nu = u(&[0.0, 1.0]);
        let w = DominanceWitness { on: vec![0.0, 1.0], values: vec![0.0, 2.0] };
        assert!(verify_diam_iso(&mu, &nu, &w).is_err());
    }

    #[test]
    fn witnesses_compose() {
        let rho = u(&[0.0, 1.0, 2.0, 3.0]);
        let nu = u(&[0.0, 1.0]); // fold 0,1 | 2,3 halves
        let w_nu_rho = DominanceWitness { on: rho.atoms().to_vec(), values: vec![0.0, 0.0, 1.0, 1.0] };
        w_nu_rho.verify(&nu, &rho).unwrap();
        let mu = DiscreteMeasure1D::dirac(0.5);
        let w_mu_nu = DominanceWitness { on: nu.atoms().to_vec(), values: vec![0.5, 0.5] };
        let composed = w_mu_nu.compose(&w_nu_rho).unwrap();
        composed.verify(&mu, &rho).unwrap();
    }

    #[test]
    fn witness_json() {
        let w = DominanceWitness { on: vec![0.0, 1.0], values: vec![0.0, 0.5] };
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"on":[0.0,1.0],"values":[0.0,0.5]}"#);
        assert_eq!(serde_json::from_str::<DominanceWitness>(&s).unwrap(), w);
    }

    fn lin(b: Vec<f64>, v: Vec<f64>) -> Cdf {
        Cdf::new(CdfKind::Linear, b, v).unwrap()
    }

    #[test]
    fn transport_examples() {
        let f = lin(vec![0.0, 1.0], vec![0.0, 1.0]);
        let phi = monotone_transport(&f, &f, 1e-3).unwrap();
        for t in [0.0, 0.3, 0.77, 1.0] {
            assert!((phi.eval(t) - t).abs() < 1e-12);
        }
        let g = lin(vec![0.0, 2.0], vec![0.0, 1.0]);
        let phi = monotone_transport(&f, &g, 1e-3).unwrap();
        for t in [0.0, 0.3, 0.77, 1.0] {
            assert!((phi.eval(t) - 2.0 * t).abs() < 1e-12);
        }
        assert!((phi.lipschitz_constant() - 2.0).abs() < 1e-9);

        // distance law on S², finely tabulated, onto uniform[0,1]
        let ts: Vec<f64> = (0..=2000).map(|k| std::f64::consts::PI * k as f64 / 2000.0).collect();
        let vs: Vec<f64> = ts.iter().map(|t| (1.0 - t.cos()) / 2.0).collect();
        let phi = monotone_transport(&lin(ts.clone(), vs), &f, 1e-4).unwrap();
        for &t in ts.iter().step_by(97) {
            assert!((phi.eval(t) - (1.0 - t.cos()) / 2.0).abs() < 1e-6);
        }
        assert!(phi.lipschitz_constant() <= 0.5 + 1e-6);
    }

    #[test]
    fn transport_rejects_step_sources_and_zero_free_targets() {
        let step = cdf(&u(&[0.0, 1.0]));
        let f = lin(vec![0.0, 1.0], vec![0.0, 1.0]);
        assert!(matches!(monotone_transport(&step, &f, 1e-3), Err(Error::SourceNotContinuous(_))));
        let g = lin(vec![0.0, 1.0], vec![0.3, 1.0]);
        assert!(matches!(monotone_transport(&f, &g, 1e-3), Err(Error::NoZero)));
    }

    #[test]
    fn transport_onto_discrete_target_is_exact() {
        let f = lin(vec![0.0, 1.0, 3.0], vec![0.0, 0.25, 1.0]);
        let target = DiscreteMeasure1D::new(vec![-1.0, 0.5, 2.0], vec![0.2, 0.5, 0.3]).unwrap();
        let g = cdf(&target);
        let phi = monotone_transport(&f, &g, 1e-2).unwrap();
        for y in [-2.0, -1.0, 0.0, 0.5, 1.0, 2.0, 3.0] {
            assert!((phi.pushforward_cdf(&f, y) - g.eval(y)).abs() < 1e-12, "y = {y}");
        }
    }

    #[test]
    fn space_dominance() {
        let path = spaces::line(&[0.0, 1.0, 2.0]);
        let two = FiniteMMSpace::new(spaces::line(&[0.0, 1.0]).distances().to_vec(), vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        assert_eq!(dominates_spaces(&two, &path, DEFAULT_BUDGET), Some(Some(vec![0, 0, 1])));
        assert_eq!(dominates_spaces(&path, &two, DEFAULT_BUDGET), Some(None));
        assert_eq!(dominates_spaces(&path, &path, 1), None);
    }

    #[test]
    fn maximality_examples() {
        let two = spaces::line(&[0.0, 1.0]);
        let xi = two.distance_function(0).unwrap();
        assert_eq!(maximality_certificate(&two, &xi, Default::default()).unwrap(), Maximality::Maximal);

        let constant = LipschitzFunction::new(vec![0.0, 0.0]);
        match maximality_certificate(&two, &constant, Default::default()).unwrap() {
            Maximality::DominatedBy { nu, witness, .. } => {
                assert_eq!(nu, u(&[0.0, 1.0]));
                witness.verify(&DiscreteMeasure1D::dirac(0.0), &nu).unwrap();
            }
            other => panic!("{other:?}"),
        }

        let c5 = spaces::cycle(5);
        let constant = LipschitzFunction::new(vec![3.0; 5]);
        assert!(matches!(
            maximality_certificate(&c5, &constant, Default::default()).unwrap(),
            Maximality::DominatedBy { .. }
        ));

        let bad = LipschitzFunction::new(vec![0.0, 2.0]);
        assert!(maximality_certificate(&two, &bad, Default::default()).is_err());
    }
}
