//! Boundary at infinity for ambient sup-norm space with the linear
//! bicombing.
//!
//! Points at infinity are direction classes of unit-speed rays. Together
//! with the interior points they form the closure, metrized by integrating
//! ray distances against `e^{-s}`:
//!
//! ```text
//! D_o(x, y) = integral_0^inf d(rho_ox(s), rho_oy(s)) e^{-s} ds
//! ```
//!
//! where `rho_ox` is the unit-speed curve from `o` towards `x`, eventually
//! constant when `x` is interior. For the linear bicombing all rays are
//! closed-form and the integrand is piecewise affine, so the metric is
//! computed exactly per piece. Radial retractions along the rays contract
//! the closure to the basepoint with explicit Lipschitz control.

use crate::bicombing::sup_dist;
use crate::Pt;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BoundaryError {
    #[error("direction vector is zero")]
    ZeroDirection,
    #[error("points live in different dimensions: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("horizon {given} is too small; the error bound needs at least {required}")]
    HorizonTooSmall { given: f64, required: f64 },
    #[error("{0}")]
    BadParameter(String),
}

fn check_dims(a: &Pt, b: &Pt) -> Result<(), BoundaryError> {
    if a.dim() != b.dim() {
        Err(BoundaryError::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        })
    } else {
        Ok(())
    }
}

/// A unit-speed curve `t -> o + min(t, range) * direction` from `o`:
/// either a genuine ray (`range = None`, infinite) or the eventually
/// constant curve towards an interior point.
#[derive(Clone, Debug)]
pub struct GeneralizedRay {
    origin: Pt,
    /// Sup-norm unit direction; zero exactly for the constant ray.
    direction: Pt,
    /// `Some(R)`: constant from parameter `R` on. `None`: never constant.
    range: Option<f64>,
}

impl GeneralizedRay {
    pub fn origin(&self) -> &Pt {
        &self.origin
    }

    pub fn range(&self) -> Option<f64> {
        self.range
    }

    pub fn is_infinite(&self) -> bool {
        self.range.is_none()
    }

    pub fn eval(&self, t: f64) -> Pt {
        let t = t.max(0.0);
        let s = match self.range {
            Some(r) => t.min(r),
            None => t,
        };
        Pt::new(
            self.origin
                .coords
                .iter()
                .zip(&self.direction.coords)
                .map(|(o, u)| o + s * u)
                .collect(),
        )
    }
}

/// The eventually constant unit-speed curve from `o` to `x`.
pub fn generalized_ray(o: &Pt, x: &Pt) -> Result<GeneralizedRay, BoundaryError> {
    check_dims(o, x)?;
    let r = sup_dist(o, x);
    if r == 0.0 {
        return Ok(GeneralizedRay {
            origin: o.clone(),
            direction: Pt::new(vec![0.0; o.dim()]),
            range: Some(0.0),
        });
    }
    let direction = Pt::new(
        x.coords
            .iter()
            .zip(&o.coords)
            .map(|(xc, oc)| (xc - oc) / r)
            .collect(),
    );
    Ok(GeneralizedRay {
        origin: o.clone(),
        direction,
        range: Some(r),
    })
}

/// The unit-speed linear ray from `o` in the given direction
/// (normalized to sup norm one).
pub fn ray_to_boundary(o: &Pt, direction: &Pt) -> Result<GeneralizedRay, BoundaryError> {
    check_dims(o, direction)?;
    let norm = direction.coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if norm == 0.0 {
        return Err(BoundaryError::ZeroDirection);
    }
    Ok(GeneralizedRay {
        origin: o.clone(),
        direction: Pt::new(direction.coords.iter().map(|c| c / norm).collect()),
        range: None,
    })
}

/// A point of the closure: interior, or a direction class at infinity.
/// Boundary directions are canonicalized to sup-norm one.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosurePoint {
    Interior { point: Pt },
    Boundary { direction: Pt },
}

impl ClosurePoint {
    pub fn interior(p: &Pt) -> Self {
        ClosurePoint::Interior { point: p.clone() }
    }

    pub fn boundary(direction: &Pt) -> Result<Self, BoundaryError> {
        let norm = direction.coords.iter().fold(0.0f64, |m, c| m.max(c.abs()));
        if norm == 0.0 {
            return Err(BoundaryError::ZeroDirection);
        }
        Ok(ClosurePoint::Boundary {
            direction: Pt::new(direction.coords.iter().map(|c| c / norm).collect()),
        })
    }

    fn sort_key(&self) -> (u8, Vec<f64>) {
        match self {
            ClosurePoint::Interior { point } => (0, point.coords.clone()),
            ClosurePoint::Boundary { direction } => (1, direction.coords.clone()),
        }
    }
}

/// The unit-speed curve from `o` representing a closure point.
pub fn ray_from_basepoint(o: &Pt, target: &ClosurePoint) -> Result<GeneralizedRay, BoundaryError> {
    match target {
        ClosurePoint::Interior { point } => generalized_ray(o, point),
        ClosurePoint::Boundary { direction } => ray_to_boundary(o, direction),
    }
}

/// Radial retraction onto the closed ball of radius `r` at `o`:
/// `x` maps to the point at parameter `r` on the curve towards it.
/// Nonexpansive up to the sharp factor 2.
pub fn radial_retraction(o: &Pt, r: f64, x: &Pt) -> Result<Pt, BoundaryError> {
    if r < 0.0 {
        return Err(BoundaryError::BadParameter(
            "radius must be nonnegative".into(),
        ));
    }
    Ok(generalized_ray(o, x)?.eval(r))
}

// ---------------------------------------------------------------------------
// Exact piecewise-affine distance profiles
// ---------------------------------------------------------------------------

/// One affine piece `s -> slope * s + intercept` on `[start, end)`.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ProfileSegment {
    pub start: f64,
    pub end: f64,
    pub slope: f64,
    pub intercept: f64,
}

/// The function `s -> d(rho_1(s), rho_2(s))` as finitely many affine pieces
/// plus an affine tail.
#[derive(Clone, Debug, Serialize)]
pub struct DistanceProfile {
    pub segments: Vec<ProfileSegment>,
    /// Valid on `[tail_start, infinity)`.
    pub tail_start: f64,
    pub tail_slope: f64,
    pub tail_intercept: f64,
}

impl DistanceProfile {
    pub fn value(&self, s: f64) -> f64 {
        let s = s.max(0.0);
        for seg in &self.segments {
            if s < seg.end {
                return seg.slope * s + seg.intercept;
            }
        }
        self.tail_slope * s + self.tail_intercept
    }

    /// `integral_0^inf value(s) e^{-s} ds`, exact per affine piece:
    /// the antiderivative of `(m s + c) e^{-s}` is `-(m s + m + c) e^{-s}`.
    pub fn integral_exp(&self) -> f64 {
        let piece = |m: f64, c: f64, a: f64, b: f64| -> f64 {
            (m * a + m + c) * (-a).exp() - (m * b + m + c) * (-b).exp()
        };
        let mut total = 0.0;
        for seg in &self.segments {
            total += piece(seg.slope, seg.intercept, seg.start, seg.end);
        }
        total += (self.tail_slope * self.tail_start + self.tail_slope + self.tail_intercept)
            * (-self.tail_start).exp();
        total
    }
}

/// Computes the exact profile of two generalized rays in the same ambient
/// space. Every coordinate difference is affine between the rays' range
/// knots, so breakpoints are coordinate roots and envelope crossings.
pub fn distance_profile(
    r1: &GeneralizedRay,
    r2: &GeneralizedRay,
) -> Result<DistanceProfile, BoundaryError> {
    check_dims(&r1.origin, &r2.origin)?;
    let dim = r1.origin.dim();
    // Affine data of coordinate i on an interval where neither range
    // saturates: handled by clamping inside the closures below.
    let coord = |ray: &GeneralizedRay, i: usize, t: f64| -> f64 {
        let s = match ray.range {
            Some(r) => t.min(r),
            None => t,
        };
        ray.origin.coords[i] + s * ray.direction.coords[i]
    };
    let slope_at = |ray: &GeneralizedRay, i: usize, t: f64| -> f64 {
        match ray.range {
            Some(r) if t >= r => 0.0,
            _ => ray.direction.coords[i],
        }
    };
    let mut knots: Vec<f64> = vec![0.0];
    for r in [r1.range, r2.range].into_iter().flatten() {
        if r > 0.0 {
            knots.push(r);
        }
    }
    knots.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    knots.dedup();

    // Candidate breakpoints inside one base interval [a, b): roots of each
    // coordinate difference and crossings between coordinate envelopes.
    let candidates_in = |a: f64, b: f64| -> Vec<f64> {
        let probe = a + if b.is_finite() { (b - a) * 0.5 } else { 1.0 };
        let alphas: Vec<f64> = (0..dim)
            .map(|i| slope_at(r1, i, probe) - slope_at(r2, i, probe))
            .collect();
        let betas: Vec<f64> = (0..dim)
            .map(|i| coord(r1, i, a) - coord(r2, i, a) - alphas[i] * a)
            .collect();
        let mut out = Vec::new();
        let mut push = |t: f64| {
            if t > a && (b.is_infinite() || t < b) && t.is_finite() {
                out.push(t);
            }
        };
        for i in 0..dim {
            if alphas[i] != 0.0 {
                push(-betas[i] / alphas[i]);
            }
            for j in (i + 1)..dim {
                // |alpha_i t + beta_i| = |alpha_j t + beta_j| has up to two
                // solutions, from the two sign combinations.
                let da = alphas[i] - alphas[j];
                let db = betas[j] - betas[i];
                if da != 0.0 {
                    push(db / da);
                }
                let sa = alphas[i] + alphas[j];
                let sb = -(betas[i] + betas[j]);
                if sa != 0.0 {
                    push(sb / sa);
                }
            }
        }
        out.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        out.dedup();
        out
    };

    let mut cut_points: Vec<f64> = Vec::new();
    for (idx, &a) in knots.iter().enumerate() {
        cut_points.push(a);
        let b = knots.get(idx + 1).copied().unwrap_or(f64::INFINITY);
        cut_points.extend(candidates_in(a, b));
    }
    cut_points.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    cut_points.dedup();

    // Affine data of the max-coordinate envelope at the midpoint of a piece.
    let envelope = |a: f64, b: f64| -> (f64, f64) {
        let probe = if b.is_finite() {
            0.5 * (a + b)
        } else {
            a + 1.0
        };
        let mut best = (0usize, 1.0f64, f64::NEG_INFINITY);
        for i in 0..dim {
            let v = coord(r1, i, probe) - coord(r2, i, probe);
            for sign in [1.0, -1.0] {
                if sign * v > best.2 {
                    best = (i, sign, sign * v);
                }
            }
        }
        let (i, sign, _) = best;
        let slope = sign * (slope_at(r1, i, probe) - slope_at(r2, i, probe));
        let intercept = sign * (coord(r1, i, a) - coord(r2, i, a)) - slope * a;
        (slope, intercept)
    };

    let mut segments: Vec<ProfileSegment> = Vec::new();
    for (idx, &a) in cut_points.iter().enumerate() {
        let b = cut_points.get(idx + 1).copied().unwrap_or(f64::INFINITY);
        if b.is_finite() {
            let (slope, intercept) = envelope(a, b);
            // Merge collinear neighbours to keep profiles small.
            if let Some(last) = segments.last_mut() {
                if last.slope == slope && last.intercept == intercept {
                    last.end = b;
                    continue;
                }
            }
            segments.push(ProfileSegment {
                start: a,
                end: b,
                slope,
                intercept,
            });
        }
    }
    let tail_start = *cut_points.last().expect("at least t = 0");
    let (tail_slope, tail_intercept) = envelope(tail_start, f64::INFINITY);
    Ok(DistanceProfile {
        segments,
        tail_start,
        tail_slope,
        tail_intercept,
    })
}

// ---------------------------------------------------------------------------
// The exponentially weighted metric on the closure
// ---------------------------------------------------------------------------

/// `D_o` between two closure points, from the exact profile of their rays.
/// Inputs are ordered canonically first so the metric is bit-symmetric.
pub fn cone_metric(o: &Pt, x: &ClosurePoint, y: &ClosurePoint) -> Result<f64, BoundaryError> {
    let (first, second) = if x.sort_key() <= y.sort_key() {
        (x, y)
    } else {
        (y, x)
    };
    let rx = ray_from_basepoint(o, first)?;
    let ry = ray_from_basepoint(o, second)?;
    Ok(distance_profile(&rx, &ry)?.integral_exp())
}

/// Radial retraction of the closure onto the `D_o`-ball of radius
/// `lambda`: the identity at `lambda = 1`, otherwise the point at
/// parameter `-log(1 - lambda)` on the ray.
pub fn cone_retraction(
    o: &Pt,
    lambda: f64,
    x: &ClosurePoint,
) -> Result<ClosurePoint, BoundaryError> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(BoundaryError::BadParameter(format!(
            "lambda {lambda} outside [0, 1]"
        )));
    }
    if lambda == 1.0 {
        return Ok(x.clone());
    }
    let t = -(1.0 - lambda).ln();
    let ray = ray_from_basepoint(o, x)?;
    Ok(ClosurePoint::interior(&ray.eval(t)))
}

/// The homotopy contracting the closure to `o`: identity at `lambda = 0`,
/// constant `o` at `lambda = 1`, with modulus
/// `D_o(h(x, l), h(y, m)) <= 2 D_o(x, y) + |l - m|`.
pub fn contract_to_basepoint(
    o: &Pt,
    x: &ClosurePoint,
    lambda: f64,
) -> Result<ClosurePoint, BoundaryError> {
    cone_retraction(o, 1.0 - lambda, x)
}

/// Membership in the cone-topology basis set `U_o(x, t, eps)`:
/// the rays towards `x` and `y` are `eps`-close at parameter `t`.
pub fn cone_neighborhood_contains(
    o: &Pt,
    x: &ClosurePoint,
    t: f64,
    eps: f64,
    y: &ClosurePoint,
) -> Result<bool, BoundaryError> {
    if t <= 0.0 || eps <= 0.0 {
        return Err(BoundaryError::BadParameter(
            "cone neighborhoods need positive t and eps".into(),
        ));
    }
    let rx = ray_from_basepoint(o, x)?;
    let ry = ray_from_basepoint(o, y)?;
    Ok(sup_dist(&rx.eval(t), &ry.eval(t)) < eps)
}

/// Smallest horizon `T` for which points of a ray beyond `T` pin the ray
/// from `o` to accuracy `eps` on `[0, t_max]`: the tail estimate gives the
/// error `2 t d(o,p) / (T - d(o,p))` for `t <= T - 2 d(o,p)`.
pub fn required_horizon(d_op: f64, t_max: f64, eps: f64) -> f64 {
    if d_op == 0.0 {
        return t_max;
    }
    (2.0 * d_op + t_max).max(d_op + 2.0 * t_max * d_op / eps)
}

/// Finite-horizon approximation of the ray from `o` asymptotic to `xi`:
/// the eventually constant curve towards `xi(T)`. Errors out (reporting the
/// required horizon) when `T` is too small for the requested accuracy.
pub fn approx_ray_from_basepoint(
    o: &Pt,
    xi: &GeneralizedRay,
    horizon: Option<f64>,
    t_max: f64,
    eps: f64,
) -> Result<(GeneralizedRay, f64), BoundaryError> {
    if !xi.is_infinite() {
        return Err(BoundaryError::BadParameter(
            "approximation target must be a genuine ray".into(),
        ));
    }
    if t_max <= 0.0 || eps <= 0.0 {
        return Err(BoundaryError::BadParameter(
            "need positive t_max and accuracy".into(),
        ));
    }
    let d_op = sup_dist(o, xi.origin());
    let required = required_horizon(d_op, t_max, eps);
    let horizon = horizon.unwrap_or(required);
    if horizon < required {
        return Err(BoundaryError::HorizonTooSmall {
            given: horizon,
            required,
        });
    }
    Ok((generalized_ray(o, &xi.eval(horizon))?, horizon))
}
