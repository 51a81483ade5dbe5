//! The distance law on round spheres, the monotone maps built from it, and
//! the Gaussian limit of the distance law on S^n(√n).

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::measure1d::{self, Cdf, CdfKind, DiscreteMeasure1D, MonotoneMap};
use crate::order::monotone_transport;
use crate::quadrature::integrate;

/// Default grid step of the law table, relative to the support length πr.
pub const DEFAULT_GRID: f64 = 1e-4;
/// Absolute tolerance of every normalization integral.
pub const QUAD_TOL: f64 = 1e-12;
/// Default slack on the slope certificate of a transport map.
pub const DEFAULT_LIP_TOL: f64 = 1e-6;

const PANELS: usize = 256;
const MC_CHUNK: usize = 4096;

/// (n − 1)·ln(u) with ln(0) = −∞; u⁰ is taken to be 1.
fn log_pow(n: u64, ln_u: f64) -> f64 {
    if n == 1 {
        0.0
    } else {
        (n - 1) as f64 * ln_u
    }
}

fn ln_sin(x: f64) -> f64 {
    let s = x.sin();
    if s > 0.0 {
        s.ln()
    } else {
        f64::NEG_INFINITY
    }
}

/// ln cos x, accurate near x = 0.
fn ln_cos(x: f64) -> f64 {
    let h = (0.5 * x).sin();
    let u = -2.0 * h * h;
    if u > -1.0 {
        u.ln_1p()
    } else {
        f64::NEG_INFINITY
    }
}

/// sin^{n−1}(x).
pub fn sin_pow(n: u64, x: f64) -> f64 {
    log_pow(n, ln_sin(x)).exp()
}

/// cos^{n−1}(x).
pub fn cos_pow(n: u64, x: f64) -> f64 {
    log_pow(n, ln_cos(x)).exp()
}

fn check_dimension(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::OutOfRange { what: "dimension", value: 0.0 });
    }
    Ok(())
}

/// Law of the distance from a fixed pole on S^n(r), tabulated on a grid.
#[derive(Debug, Clone)]
pub struct SphereLaw {
    n: u64,
    radius: f64,
    step: f64,
    /// Unnormalized mass of [0, t_k].
    cumulative: Vec<f64>,
    total: f64,
    cdf: Cdf,
}

impl SphereLaw {
    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn grid_step(&self) -> f64 {
        self.step
    }

    /// Piecewise-linear interpolation of the tabulated law.
    pub fn cdf(&self) -> &Cdf {
        &self.cdf
    }

    fn density(&self, t: f64) -> f64 {
        sin_pow(self.n, t / self.radius)
    }

    /// V(t), integrated from the nearest grid point rather than interpolated.
    pub fn cdf_at(&self, t: f64) -> f64 {
        let end = PI * self.radius;
        if t <= 0.0 {
            return 0.0;
        }
        if t >= end {
            return 1.0;
        }
        let k = ((t / self.step) as usize).min(self.cumulative.len() - 2);
        let tk = self.step * k as f64;
        let part = integrate(|s| self.density(s), tk, t, QUAD_TOL / self.cumulative.len() as f64, 1);
        ((self.cumulative[k] + part) / self.total).clamp(0.0, 1.0)
    }

    /// (t, V(t)) rows every `step`.
    pub fn table_csv(&self, step: f64) -> Result<String> {
        if !(step > 0.0) {
            return Err(Error::OutOfRange { what: "step", value: step });
        }
        let end = PI * self.radius;
        let mut out = String::from("t,V\n");
        let count = (end / step).floor() as usize;
        for k in 0..=count {
            let t = (step * k as f64).min(end);
            writeln!(out, "{t},{}", self.cdf_at(t)).expect("writing to a String");
        }
        Ok(out)
    }
}

/// Tabulates the distance law of S^n(r): density ∝ sin^{n−1}(t/r) on
/// [0, πr], cell masses by adaptive Simpson. `grid` is the cell width
/// relative to πr.
pub fn sphere_law(n: u64, radius: f64, grid: f64) -> Result<SphereLaw> {
    check_dimension(n)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::OutOfRange { what: "radius", value: radius });
    }
    if !(grid > 0.0 && grid <= 0.5) {
        return Err(Error::OutOfRange { what: "grid", value: grid });
    }
    let end = PI * radius;
    let cells = (1.0 / grid).round() as usize;
    let step = end / cells as f64;
    let density = |t: f64| sin_pow(n, t / radius);
    let cell_tol = QUAD_TOL / cells as f64;
    let masses: Vec<f64> = (0..cells)
        .into_par_iter()
        .map(|k| {
            let hi = if k + 1 == cells { end } else { step * (k + 1) as f64 };
            integrate(density, step * k as f64, hi, cell_tol, 1)
        })
        .collect();
    let mut cumulative = Vec::with_capacity(cells + 1);
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    cumulative.push(0.0);
    for m in masses {
        let t = sum + m;
        comp += if sum.abs() >= m.abs() { (sum - t) + m } else { (m - t) + sum };
        sum = t;
        cumulative.push(sum + comp);
    }
    let total = cumulative[cells];
    // cells whose mass is below one ulp of the running sum would leave flat
    // runs inside (0, 1); keep only the first breakpoint of such a run
    let (mut breakpoints, mut values) = (Vec::with_capacity(cells + 1), Vec::with_capacity(cells + 1));
    for (k, c) in cumulative.iter().enumerate() {
        let t = if k == cells { end } else { step * k as f64 };
        let v = c / total;
        if v == 0.0 || v == 1.0 || values.last().is_none_or(|&last| v > last) {
            breakpoints.push(t);
            values.push(v);
        }
    }
    if breakpoints.last() != Some(&end) {
        breakpoints.push(end);
        values.push(1.0);
    }
    let cdf = Cdf::new(CdfKind::Linear, breakpoints, values)?;
    Ok(SphereLaw { n, radius, step, cumulative, total, cdf })
}

/// V(t) on the unit sphere S^n by direct quadrature.
pub fn sphere_cdf(n: u64, t: f64) -> Result<f64> {
    check_dimension(n)?;
    if t <= 0.0 {
        return Ok(0.0);
    }
    if t >= PI {
        return Ok(1.0);
    }
    let density = |s: f64| sin_pow(n, s);
    let total = integrate(density, 0.0, PI, QUAD_TOL, PANELS);
    let panels = ((PANELS as f64 * t / PI).ceil() as usize).max(1);
    Ok(integrate(density, 0.0, t, QUAD_TOL, panels) / total)
}

/// Measure of the cap of radius `cap_radius + growth` on the unit S^n, the
/// growth of a cap of radius `cap_radius`.
pub fn cap_growth(n: u64, cap_radius: f64, growth: f64) -> Result<f64> {
    for (what, value) in [("cap radius", cap_radius), ("growth", growth)] {
        if !(0.0..=PI).contains(&value) {
            return Err(Error::OutOfRange { what, value });
        }
    }
    sphere_cdf(n, (cap_radius + growth).min(PI))
}

#[derive(Debug, Clone, Copy)]
pub struct TransportOptions {
    pub grid: f64,
    pub lip_tol: f64,
}

impl Default for TransportOptions {
    fn default() -> Self {
        Self { grid: DEFAULT_GRID, lip_tol: DEFAULT_LIP_TOL }
    }
}

/// φ = G̃ ∘ V together with its grid slope certificate.
///
/// `max_slope` is the largest difference quotient of φ between nodes of the
/// uniform grid of step `grid_step` (on a grid, consecutive nodes bound all
/// pairs). It is a numerical check at that resolution, not a proof. The map
/// is constant below 0, so the junction adds no slope.
#[derive(Debug, Clone, Serialize)]
pub struct SphereTransport {
    pub map: MonotoneMap,
    pub max_slope: f64,
    pub grid_step: f64,
    pub certified: bool,
}

pub fn sphere_transport(n: u64, radius: f64, g: &Cdf, opts: TransportOptions) -> Result<SphereTransport> {
    if !g.attains_zero() {
        return Err(Error::NoZero);
    }
    let law = sphere_law(n, radius, opts.grid)?;
    let map = monotone_transport(law.cdf(), g, opts.grid)?;
    let h = law.grid_step();
    let cells = (PI * radius / h).round() as usize;
    let at: Vec<f64> = (0..=cells).map(|k| map.eval(h * k as f64)).collect();
    let max_slope = at.windows(2).map(|w| (w[1] - w[0]) / h).fold(0.0, f64::max);
    Ok(SphereTransport { map, max_slope, grid_step: law.grid_step(), certified: max_slope <= 1.0 + opts.lip_tol })
}

/// Half-width √(ln(2/α) / 2N) of the Dvoretzky–Kiefer–Wolfowitz band, which
/// holds with probability at least 1 − α.
pub fn dkw_epsilon(samples: usize, alpha: f64) -> f64 {
    ((2.0 / alpha).ln() / (2.0 * samples as f64)).sqrt()
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BandedSlope {
    /// Largest slope of G̃ ∘ V that the sample proves, given the band.
    pub max_quotient: f64,
    /// Largest raw quotient of the empirical map, for reference.
    pub raw_max_quotient: f64,
    pub epsilon: f64,
    pub grid_step: f64,
}

/// Slope check of φ = G̃ ∘ V when G is only known through an empirical law Ĝ
/// with sup |Ĝ − G| ≤ ε. Since Ĝ̃(s − ε) ≤ G̃(s) ≤ Ĝ̃(s + ε),
///
///   φ(t′) − φ(t) ≥ Ĝ̃(V(t′) − ε) − Ĝ̃(V(t) + ε),
///
/// and the maximum of the right side over node pairs divided by t′ − t is a
/// lower bound on the Lipschitz constant of φ.
pub fn banded_slope(law: &SphereLaw, sample: &DiscreteMeasure1D, epsilon: f64, nodes: usize) -> Result<BandedSlope> {
    if nodes < 2 {
        return Err(Error::OutOfRange { what: "nodes", value: nodes as f64 });
    }
    let q = measure1d::quantile(&measure1d::cdf(sample))?;
    let end = PI * law.radius();
    let h = end / (nodes - 1) as f64;
    let ts: Vec<f64> = (0..nodes).map(|k| h * k as f64).collect();
    let vs: Vec<f64> = ts.par_iter().map(|&t| law.cdf_at(t)).collect();
    let below: Vec<f64> = vs.iter().map(|&v| q.eval(v - epsilon)).collect();
    let above: Vec<f64> = vs.iter().map(|&v| q.eval((v + epsilon).min(1.0))).collect();
    let mid: Vec<f64> = vs.iter().map(|&v| q.eval(v)).collect();
    let (mut banded, mut raw) = (f64::NEG_INFINITY, 0.0f64);
    for i in 0..nodes {
        for j in i + 1..nodes {
            let dt = ts[j] - ts[i];
            banded = banded.max((below[j] - above[i]) / dt);
            raw = raw.max((mid[j] - mid[i]) / dt);
        }
    }
    Ok(BandedSlope { max_quotient: banded, raw_max_quotient: raw, epsilon, grid_step: h })
}

fn check_band(n: u64, r: f64) -> Result<()> {
    check_dimension(n)?;
    if !(r.abs() <= PI / 2.0 * (n as f64).sqrt()) {
        return Err(Error::OutOfRange { what: "r", value: r });
    }
    Ok(())
}

/// |cos^{n−1}(r/√n) − e^{−r²/2}| for |r| ≤ (π/2)√n.
pub fn gaussian_limit_error(n: u64, r: f64) -> Result<f64> {
    check_band(n, r)?;
    Ok((cos_pow(n, r / (n as f64).sqrt()) - (-0.5 * r * r).exp()).abs())
}

/// Whether cos^{n−1}(r/√n) ≤ e^{−r²/4} at every grid point, compared in
/// log space with a relative slack of 1e−14 for rounding.
pub fn cos_envelope_check(n: u64, r_grid: &[f64]) -> Result<bool> {
    if n < 2 {
        return Err(Error::OutOfRange { what: "dimension", value: n as f64 });
    }
    let sqrt_n = (n as f64).sqrt();
    let mut holds = true;
    for &r in r_grid {
        check_band(n, r)?;
        let lhs = log_pow(n, ln_cos(r / sqrt_n));
        let rhs = -0.25 * r * r;
        holds &= lhs <= rhs + 1e-14 * rhs.abs();
    }
    Ok(holds)
}

/// Standard Gaussian density.
pub fn gauss_density(r: f64) -> f64 {
    (-0.5 * r * r).exp() / (2.0 * PI).sqrt()
}

/// Density of ξ − √n·π/2 on S^n(√n), ξ the distance from a pole:
/// cos^{n−1}(r/√n) normalized over the band |r| ≤ (π/2)√n.
#[derive(Debug, Clone, Copy)]
pub struct ShiftedDensity {
    n: u64,
    half_width: f64,
    normalizer: f64,
}

impl ShiftedDensity {
    pub fn new(n: u64) -> Result<Self> {
        check_dimension(n)?;
        let sqrt_n = (n as f64).sqrt();
        let half_width = PI / 2.0 * sqrt_n;
        let normalizer = integrate(|t| cos_pow(n, t / sqrt_n), -half_width, half_width, QUAD_TOL, PANELS);
        Ok(Self { n, half_width, normalizer })
    }

    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r.abs() > self.half_width {
            return 0.0;
        }
        cos_pow(self.n, r / (self.n as f64).sqrt()) / self.normalizer
    }
}

pub fn shifted_density(n: u64, r: f64) -> Result<f64> {
    Ok(ShiftedDensity::new(n)?.eval(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub r: f64,
    pub density_n: f64,
    pub gauss: f64,
    pub error: f64,
    /// |cos^{n−1}(r/√n) − e^{−r²/2}|, the unnormalized kernel error.
    pub kernel_error: f64,
}

/// Rows for r = −rmax, −rmax + step, …, rmax, clipped to the band.
pub fn limit_table(n: u64, rmax: f64, step: f64) -> Result<Vec<LimitRow>> {
    if !(step > 0.0) {
        return Err(Error::OutOfRange { what: "step", value: step });
    }
    if !(rmax >= 0.0) {
        return Err(Error::OutOfRange { what: "rmax", value: rmax });
    }
    let density = ShiftedDensity::new(n)?;
    let half = PI / 2.0 * (n as f64).sqrt();
    let count = (rmax / step + 1e-9).floor() as i64;
    (-count..=count)
        .map(|k| k as f64 * step)
        .filter(|r| r.abs() <= half)
        .map(|r| {
            let (d, g) = (density.eval(r), gauss_density(r));
            Ok(LimitRow { r, density_n: d, gauss: g, error: (d - g).abs(), kernel_error: gaussian_limit_error(n, r)? })
        })
        .collect()
}

pub fn limit_table_csv(rows: &[LimitRow]) -> String {
    let mut out = String::from("r,density_n,gauss,error,kernel_error\n");
    for row in rows {
        writeln!(out, "{},{},{},{},{}", row.r, row.density_n, row.gauss, row.error, row.kernel_error)
            .expect("writing to a String");
    }
    out
}

/// Real functions on S^n(r) ⊂ ℝ^{n+1} with Lipschitz constant at most 1 for
/// the geodesic distance, less a constant offset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ObservableKind {
    Constant { value: f64 },
    Coordinate { index: usize },
    /// Geodesic distance from the pole r·e₀.
    DistanceFromPole,
    MaxOfTwoCoordinates { i: usize, j: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Observable {
    pub kind: ObservableKind,
    #[serde(default)]
    pub offset: f64,
}

impl Observable {
    pub fn new(kind: ObservableKind) -> Self {
        Self { kind, offset: 0.0 }
    }

    pub fn shifted(self, offset: f64) -> Self {
        Self { offset, ..self }
    }

    fn check(&self, n: u64) -> Result<()> {
        let fits = |i: usize| (i as u64) <= n;
        let ok = match self.kind {
            ObservableKind::Constant { value } => value.is_finite(),
            ObservableKind::Coordinate { index } => fits(index),
            ObservableKind::DistanceFromPole => true,
            ObservableKind::MaxOfTwoCoordinates { i, j } => fits(i) && fits(j),
        };
        if ok && self.offset.is_finite() {
            Ok(())
        } else {
            Err(Error::UnknownObservable(format!("{self:?} on S^{n}")))
        }
    }

    fn eval(&self, x: &[f64], radius: f64) -> f64 {
        let v = match self.kind {
            ObservableKind::Constant { value } => value,
            ObservableKind::Coordinate { index } => x[index],
            ObservableKind::DistanceFromPole => radius * (x[0] / radius).clamp(-1.0, 1.0).acos(),
            ObservableKind::MaxOfTwoCoordinates { i, j } => x[i].max(x[j]),
        };
        v - self.offset
    }
}

/// Parses `constant:<c>`, `coordinate:<i>`, `distance-from-pole` or
/// `max-of-two:<i>,<j>`.
impl FromStr for Observable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let unknown = || Error::UnknownObservable(s.to_string());
        let (name, arg) = s.split_once(':').unwrap_or((s, ""));
        let kind = match name {
            "constant" => ObservableKind::Constant { value: arg.parse().map_err(|_| unknown())? },
            "coordinate" => ObservableKind::Coordinate { index: arg.parse().map_err(|_| unknown())? },
            "distance-from-pole" if arg.is_empty() => ObservableKind::DistanceFromPole,
            "max-of-two" => {
                let (i, j) = arg.split_once(',').ok_or_else(unknown)?;
                ObservableKind::MaxOfTwoCoordinates {
                    i: i.parse().map_err(|_| unknown())?,
                    j: j.parse().map_err(|_| unknown())?,
                }
            }
            _ => return Err(unknown()),
        };
        Ok(Observable::new(kind))
    }
}

/// Empirical law of `obs` at `samples` uniform points of S^n(radius), drawn
/// by normalizing standard Gaussian vectors. Chunks use independent ChaCha
/// streams, so the result depends only on the seed.
pub fn monte_carlo_pushforward(
    n: u64,
    radius: f64,
    obs: Observable,
    samples: usize,
    seed: u64,
) -> Result<DiscreteMeasure1D> {
    check_dimension(n)?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::OutOfRange { what: "radius", value: radius });
    }
    obs.check(n)?;
    if samples == 0 {
        return Err(Error::OutOfRange { what: "samples", value: 0.0 });
    }
    let dim = n as usize + 1;
    let chunks = samples.div_ceil(MC_CHUNK);
    let values: Vec<f64> = (0..chunks)
        .into_par_iter()
        .flat_map_iter(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(c as u64);
            let count = MC_CHUNK.min(samples - c * MC_CHUNK);
            let mut x = vec![0.0; dim];
            (0..count)
                .map(|_| {
                    let mut norm2 = 0.0f64;
                    for xi in x.iter_mut() {
                        *xi = StandardNormal.sample(&mut rng);
                        norm2 += *xi * *xi;
                    }
                    let scale = radius / norm2.sqrt();
                    x.iter_mut().for_each(|xi| *xi *= scale);
                    obs.eval(&x, radius)
                })
                .collect::<Vec<_>>()
        })
        .collect();
    DiscreteMeasure1D::from_samples(&values)
}

/// The standard Gaussian binned on cells of width `step` over
/// [−half_width, half_width], mass at cell midpoints.
pub fn gaussian_discretized(step: f64, half_width: f64) -> Result<DiscreteMeasure1D> {
    if !(step > 0.0 && half_width > step) {
        return Err(Error::OutOfRange { what: "step", value: step });
    }
    let normal = Normal::standard();
    let cells = (2.0 * half_width / step).round() as usize;
    let edge = |k: usize| -half_width + 2.0 * half_width * k as f64 / cells as f64;
    let tail = normal.cdf(-half_width);
    let mut atoms = Vec::with_capacity(cells);
    let mut weights = Vec::with_capacity(cells);
    for k in 0..cells {
        atoms.push(0.5 * (edge(k) + edge(k + 1)));
        let mut w = normal.cdf(edge(k + 1)) - normal.cdf(edge(k));
        // fold the tails into the end cells
        if k == 0 || k + 1 == cells {
            w += tail;
        }
        weights.push(w);
    }
    DiscreteMeasure1D::from_weighted_values(&atoms, &weights)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NormalLawRow {
    pub kappa: f64,
    pub sample: f64,
    pub gaussian: f64,
}

/// Partial diameters diam(·; 1 − κ) of the first coordinate on S^n(√n)
/// (from `samples` points) and of the binned standard Gaussian.
pub fn normal_law_rows(n: u64, samples: usize, seed: u64, kappas: &[f64]) -> Result<Vec<NormalLawRow>> {
    let coordinate = Observable::new(ObservableKind::Coordinate { index: 0 });
    let law = monte_carlo_pushforward(n, (n as f64).sqrt(), coordinate, samples, seed)?;
    let gaussian = gaussian_discretized(1e-3, 8.0)?;
    kappas
        .iter()
        .map(|&kappa| {
            if !(kappa > 0.0 && kappa < 1.0) {
                return Err(Error::OutOfRange { what: "kappa", value: kappa });
            }
            Ok(NormalLawRow {
                kappa,
                sample: measure1d::partial_diameter(&law, 1.0 - kappa)?,
                gaussian: measure1d::partial_diameter(&gaussian, 1.0 - kappa)?,
            })
        })
        .collect()
}
