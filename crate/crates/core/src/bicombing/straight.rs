//! Straightness diagnostics for discretized curves in sup-norm spaces.
//!
//! A curve is straight when its distance to every witness point is a convex
//! function of the parameter; straight curves are automatically constant
//! speed geodesics. These checks run on uniformly sampled curves and test
//! midpoint convexity on consecutive triples, generically over the scalar,
//! so the rational cases stay exact.

use super::Bicombing;
use crate::metric::{linf_distance, LinfPoint};
use crate::scalar::{smax, Scalar};
use crate::Pt;
use thiserror::Error;

/// A curve sampled at `k + 1` uniformly spaced parameters of `[0, 1]`.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscretizedCurve<S> {
    pub points: Vec<LinfPoint<S>>,
}

impl<S: Scalar> DiscretizedCurve<S> {
    pub fn new(points: Vec<LinfPoint<S>>) -> Self {
        assert!(points.len() >= 2, "a curve needs at least two samples");
        Self { points }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// Worst midpoint-convexity violation found, with the witnessing indices.
#[derive(Clone, Debug)]
pub struct CurveReport<S> {
    pub max_defect: S,
    /// `(witness index, interior sample index)` attaining the defect.
    pub witness: Option<(usize, usize)>,
}

/// Max over witnesses `z` and interior samples of
/// `d(z, c(j)) - (d(z, c(j-1)) + d(z, c(j+1))) / 2`, clamped at zero.
pub fn straightness_defect<S: Scalar>(
    curve: &DiscretizedCurve<S>,
    witnesses: &[LinfPoint<S>],
) -> CurveReport<S> {
    let mut best = S::zero();
    let mut at = None;
    for (w, z) in witnesses.iter().enumerate() {
        let profile: Vec<S> = curve
            .points
            .iter()
            .map(|p| linf_distance(z, p).expect("consistent dimensions"))
            .collect();
        for j in 1..profile.len() - 1 {
            let defect =
                profile[j].clone() - (profile[j - 1].clone() + profile[j + 1].clone()).half();
            if defect > best {
                best = defect;
                at = Some((w, j));
            }
        }
    }
    CurveReport {
        max_defect: best,
        witness: at,
    }
}

#[derive(Debug, Error)]
pub enum ProbeError<S: Scalar> {
    #[error("curves are sampled at different resolutions: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("input curve {which} is not straight: defect {defect}")]
    NotStraight { which: &'static str, defect: S },
}

/// Midpoint-convexity defect of the mutual distance `j -> d(a(j), b(j))`
/// of two equally sampled curves.
pub fn mutual_convexity_defect<S: Scalar>(
    a: &DiscretizedCurve<S>,
    b: &DiscretizedCurve<S>,
) -> Result<CurveReport<S>, ProbeError<S>> {
    if a.len() != b.len() {
        return Err(ProbeError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let profile: Vec<S> = a
        .points
        .iter()
        .zip(&b.points)
        .map(|(p, q)| linf_distance(p, q).expect("consistent dimensions"))
        .collect();
    let mut best = S::zero();
    let mut at = None;
    for j in 1..profile.len() - 1 {
        let defect = profile[j].clone() - (profile[j - 1].clone() + profile[j + 1].clone()).half();
        if defect > best {
            best = defect;
            at = Some((0, j));
        }
    }
    Ok(CurveReport {
        max_defect: best,
        witness: at,
    })
}

#[derive(Clone, Debug)]
pub struct ProbeReport<S> {
    /// Convexity defect of the mutual distance function. In spaces of
    /// finite combinatorial dimension this must vanish for straight inputs.
    pub convexity_defect: S,
    pub same_endpoints: bool,
    /// Sup over samples of `d(a(j), b(j))`.
    pub max_pointwise_distance: S,
}

/// Checks both curves for straightness against `witnesses` (refusing if
/// either fails `tol`), then reports on the mutual distance function.
pub fn straight_uniqueness_probe<S: Scalar>(
    a: &DiscretizedCurve<S>,
    b: &DiscretizedCurve<S>,
    witnesses: &[LinfPoint<S>],
    tol: &S,
) -> Result<ProbeReport<S>, ProbeError<S>> {
    if a.len() != b.len() {
        return Err(ProbeError::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let ra = straightness_defect(a, witnesses);
    if ra.max_defect > *tol {
        return Err(ProbeError::NotStraight {
            which: "alpha",
            defect: ra.max_defect,
        });
    }
    let rb = straightness_defect(b, witnesses);
    if rb.max_defect > *tol {
        return Err(ProbeError::NotStraight {
            which: "beta",
            defect: rb.max_defect,
        });
    }
    let convexity = mutual_convexity_defect(a, b)?.max_defect;
    let ends = |c: &DiscretizedCurve<S>| {
        (
            c.points.first().unwrap().clone(),
            c.points.last().unwrap().clone(),
        )
    };
    let (a0, a1) = ends(a);
    let (b0, b1) = ends(b);
    let same_endpoints = linf_distance(&a0, &b0).expect("dims") <= *tol
        && linf_distance(&a1, &b1).expect("dims") <= *tol;
    let mut max_pointwise = S::zero();
    for (p, q) in a.points.iter().zip(&b.points) {
        max_pointwise = smax(max_pointwise, linf_distance(p, q).expect("dims"));
    }
    Ok(ProbeReport {
        convexity_defect: convexity,
        same_endpoints,
        max_pointwise_distance: max_pointwise,
    })
}

/// Samples one geodesic of a bicombing at `steps + 1` uniform parameters.
pub fn discretize_geodesic(sigma: &Bicombing, x: &Pt, y: &Pt, steps: u64) -> DiscretizedCurve<f64> {
    DiscretizedCurve::new(
        (0..=steps)
            .map(|k| sigma.eval_frac(x, y, k, steps))
            .collect(),
    )
}
