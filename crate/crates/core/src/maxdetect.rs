//! Detecting when the 1-measurement of a finite mm-space has no maximum.
//!
//! A maximum forces every point z to lie on a geodesic between any two points
//! realizing the diameter. A violating triple yields two maximal elements that
//! are not isomorphic: the law of the distance from one end of the diameter
//! pair, and the law of the function ζ built from the triple.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure1d::{DiscreteMeasure1D, MERGE_TOL};
use crate::mmspace::{self, FiniteMMSpace, LipschitzFunction};
use crate::order::mm_isomorphic_1d;

/// Relative tolerance for recognizing pairs at the diameter.
pub const DIAM_REL_TOL: f64 = 1e-9;

/// Default tolerance on the excess d(x,z) + d(z,y) − diam X.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanMode {
    /// First violation in (x, y, z) index order.
    #[default]
    First,
    /// The violation with the largest excess, ties to the smallest index.
    MaxExcess,
}

/// A diameter pair (x, y) and a point z off every geodesic between them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ViolationTriple {
    pub x: usize,
    pub y: usize,
    pub z: usize,
    pub excess: f64,
}

/// Quantities of the ζ construction, with x₀ and x₁ ordered so r₁ ≤ r₀.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZetaFrame {
    pub x0: usize,
    pub x1: usize,
    pub x2: usize,
    pub r0: f64,
    pub r1: f64,
    pub big_r: f64,
    pub d: f64,
}

impl ViolationTriple {
    pub fn frame(&self, space: &FiniteMMSpace) -> ZetaFrame {
        let (mut x0, mut x1) = (self.x, self.y);
        if space.d(x1, self.z) > space.d(x0, self.z) {
            std::mem::swap(&mut x0, &mut x1);
        }
        let r0 = space.d(x0, self.z);
        let r1 = space.d(x1, self.z);
        let big_r = space.diam();
        ZetaFrame { x0, x1, x2: self.z, r0, r1, big_r, d: (r0 + r1 - big_r) / 2.0 }
    }
}

fn is_diameter_pair(space: &FiniteMMSpace, x: usize, y: usize) -> bool {
    let diam = space.diam();
    diam > 0.0 && space.d(x, y) >= diam * (1.0 - DIAM_REL_TOL)
}

fn violations_from(space: &FiniteMMSpace, x: usize, tol: f64) -> impl Iterator<Item = ViolationTriple> + '_ {
    let diam = space.diam();
    (x + 1..space.n())
        .filter(move |&y| is_diameter_pair(space, x, y))
        .flat_map(move |y| {
            (0..space.n()).filter_map(move |z| {
                let excess = space.d(x, z) + space.d(z, y) - diam;
                (excess > tol).then_some(ViolationTriple { x, y, z, excess })
            })
        })
}

/// Scans all diameter pairs and all third points. `None` means the
/// three-point condition holds within `tol`.
pub fn three_point_check(space: &FiniteMMSpace, tol: f64, mode: ScanMode) -> Option<ViolationTriple> {
    match mode {
        ScanMode::First => (0..space.n())
            .into_par_iter()
            .find_map_first(|x| violations_from(space, x, tol).next()),
        ScanMode::MaxExcess => (0..space.n())
            .into_par_iter()
            .filter_map(|x| {
                violations_from(space, x, tol).reduce(|a, b| if b.excess > a.excess { b } else { a })
            })
            .collect::<Vec<_>>()
            .into_iter()
            .reduce(|a, b| if b.excess > a.excess { b } else { a }),
    }
}

/// The function ζ of the construction: distance from x₀ on the open ball of
/// radius r₀ − D about x₀, R minus the distance to x₁ on the open ball of
/// radius r₁ − D about x₁, and r₀ − D elsewhere. The result is checked to be
/// 1-Lipschitz before it is returned.
pub fn zeta_witness(space: &FiniteMMSpace, violation: &ViolationTriple) -> Result<LipschitzFunction> {
    let n = space.n();
    for i in [violation.x, violation.y, violation.z] {
        if i >= n {
            return Err(Error::IndexOutOfRange { index: i, len: n });
        }
    }
    if !is_diameter_pair(space, violation.x, violation.y) {
        return Err(Error::Construction(format!(
            "({}, {}) does not realize the diameter",
            violation.x, violation.y
        )));
    }
    let f = violation.frame(space);
    if f.d <= 0.0 {
        return Err(Error::Construction(format!("D = {} is not positive", f.d)));
    }
    let (rad0, rad1) = (f.r0 - f.d, f.r1 - f.d);
    let values = (0..n)
        .map(|x| {
            let in0 = space.d(x, f.x0) < rad0;
            let in1 = space.d(x, f.x1) < rad1;
            if in0 && in1 {
                return Err(Error::Construction(format!("point {x} lies in both balls")));
            }
            Ok(if in0 {
                space.d(x, f.x0)
            } else if in1 {
                f.big_r - space.d(x, f.x1)
            } else {
                rad0
            })
        })
        .collect::<Result<Vec<f64>>>()?;
    let zeta = LipschitzFunction::new(values);
    zeta.check(space)?;
    Ok(zeta)
}

/// The two orientations compared when testing isomorphism of two laws.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoTranscript {
    pub a_normalized: DiscreteMeasure1D,
    pub b_normalized: DiscreteMeasure1D,
    pub b_reflected: DiscreteMeasure1D,
    pub isomorphic: bool,
}

impl IsoTranscript {
    pub fn compare(a: &DiscreteMeasure1D, b: &DiscreteMeasure1D) -> Self {
        Self {
            a_normalized: a.translate(-a.min()),
            b_normalized: b.translate(-b.min()),
            b_reflected: b.reflect(b.max()),
            isomorphic: mm_isomorphic_1d(a, b),
        }
    }
}

/// Two non-isomorphic maximal elements of the 1-measurement.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoMaximumCertificate {
    pub measure_a: DiscreteMeasure1D,
    pub measure_b: DiscreteMeasure1D,
    /// Generator of `measure_a`: the distance from x₀.
    pub xi: LipschitzFunction,
    /// Generator of `measure_b`: ζ, or the distance from the other pole.
    pub zeta: LipschitzFunction,
    pub violation: Option<ViolationTriple>,
    pub transcript: IsoTranscript,
}

fn certify(
    space: &FiniteMMSpace,
    xi: LipschitzFunction,
    zeta: LipschitzFunction,
    violation: Option<ViolationTriple>,
) -> Result<Option<NoMaximumCertificate>> {
    let a = space.pushforward(&xi);
    let b = space.pushforward(&zeta);
    let diam = space.diam();
    for m in [&a, &b] {
        if (m.diam() - diam).abs() > MERGE_TOL * diam.max(1.0) {
            return Err(Error::Construction(format!(
                "pushforward has support diameter {} but diam X = {diam}",
                m.diam()
            )));
        }
    }
    let transcript = IsoTranscript::compare(&a, &b);
    if transcript.isomorphic {
        return Ok(None);
    }
    Ok(Some(NoMaximumCertificate { measure_a: a, measure_b: b, xi, zeta, violation, transcript }))
}

/// Runs the three-point scan; on a violation builds both maximal elements
/// and confirms they are not isomorphic. `None` only says the necessary
/// condition holds.
pub fn no_maximum_certificate(space: &FiniteMMSpace, tol: f64) -> Result<Option<NoMaximumCertificate>> {
    let Some(violation) = three_point_check(space, tol, ScanMode::First) else {
        return Ok(None);
    };
    let zeta = zeta_witness(space, &violation)?;
    let x0 = violation.frame(space).x0;
    let xi = space.distance_function(x0)?;
    let cert = certify(space, xi, zeta, Some(violation.clone()))?;
    if cert.is_none() {
        return Err(Error::Construction(format!(
            "laws of ξ and ζ are isomorphic for violation {violation:?}"
        )));
    }
    Ok(cert)
}

/// Compares the distance laws from every pair of eccentric points.
pub fn two_pole_test(space: &FiniteMMSpace) -> Result<Option<NoMaximumCertificate>> {
    let poles = mmspace::eccentric_points(space);
    for (k, &i) in poles.iter().enumerate() {
        for &j in &poles[k + 1..] {
            let cert = certify(space, space.distance_function(i)?, space.distance_function(j)?, None)?;
            if cert.is_some() {
                return Ok(cert);
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    NoMaximum,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateMeasures {
    pub a: DiscreteMeasure1D,
    pub b: DiscreteMeasure1D,
    pub xi: LipschitzFunction,
    pub zeta: LipschitzFunction,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DetectorReport {
    pub verdict: Verdict,
    pub violation: Option<ViolationTriple>,
    pub measures: Option<CertificateMeasures>,
}

impl DetectorReport {
    pub fn from_certificate(cert: Option<NoMaximumCertificate>) -> Self {
        match cert {
            Some(c) => DetectorReport {
                verdict: Verdict::NoMaximum,
                violation: c.violation,
                measures: Some(CertificateMeasures {
                    a: c.measure_a,
                    b: c.measure_b,
                    xi: c.xi,
                    zeta: c.zeta,
                }),
            },
            None => DetectorReport { verdict: Verdict::Inconclusive, violation: None, measures: None },
        }
    }
}

/// The full detector: the three-point scan first, then the two-pole test.
pub fn detect(space: &FiniteMMSpace, tol: f64) -> Result<DetectorReport> {
    let cert = match no_maximum_certificate(space, tol)? {
        Some(c) => Some(c),
        None => two_pole_test(space)?,
    };
    Ok(DetectorReport::from_certificate(cert))
}
