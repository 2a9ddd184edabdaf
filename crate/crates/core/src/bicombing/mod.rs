//! Geodesic bicombings on sup-norm retract spaces.
//!
//! A bicombing assigns to every ordered pair `(x, y)` a constant-speed
//! geodesic `t -> eval(x, y, t)`. The constructions here are the linear
//! bicombing of the ambient space, its image under a nonexpansive
//! retraction, and the midpoint-refinement cascade in
//! [`cats_cradle`]. Everything in this module runs on `f64`; the defect
//! scanners in [`defects`] quantify how far a bicombing is from the
//! conical/convex/consistent/reversible axioms instead of assuming them.

pub mod cats_cradle;
pub mod defects;
pub mod straight;

pub use cats_cradle::{
    cats_cradle_fixed_point, cats_cradle_step, convexify, ConvexifyRun, FixedPointRun, LevelReport,
};
pub use defects::{
    conical_defect, consistency_defect, convexity_defect, discrete_convexity_defect,
    geodesic_defect, reversibility_defect, DefectReport, DefectWitness, SampleSpec,
};
pub use straight::{
    discretize_geodesic, mutual_convexity_defect, straight_uniqueness_probe, straightness_defect,
    CurveReport, DiscretizedCurve, ProbeReport,
};

use crate::Pt;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::sync::Arc;
use thiserror::Error;

/// Sup-norm distance for the floating-point layer.
pub fn sup_dist(a: &Pt, b: &Pt) -> f64 {
    assert_eq!(a.dim(), b.dim(), "points live in the same ambient space");
    a.coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub type Sampler = Arc<dyn Fn(&mut ChaCha8Rng) -> Pt + Send + Sync>;
pub type PointMap = Arc<dyn Fn(&Pt) -> Pt + Send + Sync>;
pub type Membership = Arc<dyn Fn(&Pt) -> bool + Send + Sync>;

/// A sampleable subset of some `R^d` with the sup metric.
#[derive(Clone)]
pub struct SpaceHandle {
    pub name: String,
    pub dim: usize,
    pub sampler: Sampler,
    /// Deterministic landmark points, always members of the space. Defect
    /// scans combine these with seeded random samples.
    pub anchors: Vec<Pt>,
    pub membership: Option<Membership>,
}

impl SpaceHandle {
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Pt {
        (self.sampler)(rng)
    }

    pub fn contains(&self, p: &Pt) -> bool {
        self.membership.as_ref().map(|m| m(p)).unwrap_or(true)
    }
}

impl std::fmt::Debug for SpaceHandle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpaceHandle")
            .field("name", &self.name)
            .field("dim", &self.dim)
            .field("anchors", &self.anchors.len())
            .finish()
    }
}

/// A subset of the ambient space together with a claimed nonexpansive
/// retraction onto it. The claim is spot-checked, not assumed.
#[derive(Clone)]
pub struct RetractSpace {
    pub handle: SpaceHandle,
    pub retraction: PointMap,
}

impl RetractSpace {
    pub fn retract(&self, p: &Pt) -> Pt {
        (self.retraction)(p)
    }
}

impl std::fmt::Debug for RetractSpace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("RetractSpace")
            .field("handle", &self.handle)
            .finish()
    }
}

/// Geodesic selection rule. `eval_frac` exists so grid parameters can be
/// propagated exactly through nested constructions; for selectors without
/// grid structure it just divides.
pub trait GeodesicSelector: Send + Sync {
    fn eval(&self, x: &Pt, y: &Pt, t: f64) -> Pt;

    fn eval_frac(&self, x: &Pt, y: &Pt, num: u64, den: u64) -> Pt {
        self.eval(x, y, num as f64 / den as f64)
    }
}

/// How a bicombing was produced, carried along for reporting.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Linear {
        dim: usize,
    },
    Retract {
        space: String,
        /// Set when the nonexpansiveness or idempotence spot-check failed.
        warning: Option<String>,
    },
    Refined {
        level: u32,
        grid: u32,
        base: String,
    },
}

impl Provenance {
    pub fn describe(&self) -> String {
        match self {
            Provenance::Linear { dim } => format!("linear:{dim}"),
            Provenance::Retract { space, .. } => format!("retract:{space}"),
            Provenance::Refined { level, grid, base } => {
                format!("refined[{level}] grid 1/{grid} of {base}")
            }
        }
    }
}

#[derive(Clone)]
pub struct Bicombing {
    pub space: SpaceHandle,
    selector: Arc<dyn GeodesicSelector>,
    pub provenance: Provenance,
    /// Grid `n` for which 1/n-discrete convexity is claimed (and re-tested
    /// by the cascade); `None` means convex at all parameters.
    pub discrete_level: Option<u32>,
}

impl Bicombing {
    pub fn new(
        space: SpaceHandle,
        selector: Arc<dyn GeodesicSelector>,
        provenance: Provenance,
        discrete_level: Option<u32>,
    ) -> Self {
        Self {
            space,
            selector,
            provenance,
            discrete_level,
        }
    }

    pub fn eval(&self, x: &Pt, y: &Pt, t: f64) -> Pt {
        self.selector.eval(x, y, t)
    }

    pub fn eval_frac(&self, x: &Pt, y: &Pt, num: u64, den: u64) -> Pt {
        self.selector.eval_frac(x, y, num, den)
    }

    pub fn selector(&self) -> Arc<dyn GeodesicSelector> {
        Arc::clone(&self.selector)
    }

    /// The same selection run backwards: `(x, y, t) -> eval(y, x, 1-t)`.
    /// Conical bicombings stay conical under reversal.
    pub fn reversed(&self) -> Bicombing {
        struct Reversed(Arc<dyn GeodesicSelector>);
        impl GeodesicSelector for Reversed {
            fn eval(&self, x: &Pt, y: &Pt, t: f64) -> Pt {
                self.0.eval(y, x, 1.0 - t)
            }
            fn eval_frac(&self, x: &Pt, y: &Pt, num: u64, den: u64) -> Pt {
                self.0.eval_frac(y, x, den - num, den)
            }
        }
        Bicombing {
            space: self.space.clone(),
            selector: Arc::new(Reversed(Arc::clone(&self.selector))),
            provenance: self.provenance.clone(),
            discrete_level: self.discrete_level,
        }
    }
}

impl std::fmt::Debug for Bicombing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Bicombing")
            .field("space", &self.space.name)
            .field("provenance", &self.provenance)
            .field("discrete_level", &self.discrete_level)
            .finish()
    }
}

#[derive(Debug, Error)]
pub enum BicombingError {
    #[error(
        "midpoint refinement did not converge within {max_iter} iterations (residual {residual})"
    )]
    FixedPointDiverged { max_iter: usize, residual: f64 },
    #[error(
        "input bicombing fails 1/{n}-discrete convexity (defect {defect}) beyond tolerance {tol}"
    )]
    InputNotDiscretelyConvex { n: u32, defect: f64, tol: f64 },
    #[error("bicombing has no discrete convexity grid to refine")]
    NoGrid,
    #[error("{0}")]
    BadInput(String),
}

struct LinearSelector;

impl GeodesicSelector for LinearSelector {
    fn eval(&self, x: &Pt, y: &Pt, t: f64) -> Pt {
        Pt::new(
            x.coords
                .iter()
                .zip(&y.coords)
                .map(|(a, b)| (1.0 - t) * a + t * b)
                .collect(),
        )
    }
}

/// Ambient sup-norm space with the linear bicombing; convex, consistent
/// and reversible by construction. Samples are drawn from `[-4, 4]^dim`.
pub fn linear_bicombing(dim: usize) -> Bicombing {
    let mut anchors = vec![Pt::new(vec![0.0; dim])];
    for i in 0..dim {
        for s in [1.0, -1.0] {
            let mut c = vec![0.0; dim];
            c[i] = s;
            anchors.push(Pt::new(c));
        }
    }
    anchors.push(Pt::new(vec![1.0; dim]));
    anchors.push(Pt::new(vec![-1.0; dim]));
    let space = SpaceHandle {
        name: format!("l-inf:{dim}"),
        dim,
        sampler: Arc::new(move |rng: &mut ChaCha8Rng| {
            Pt::new((0..dim).map(|_| rng.gen_range(-4.0..4.0)).collect())
        }),
        anchors,
        membership: None,
    };
    Bicombing {
        space: space.clone(),
        selector: Arc::new(LinearSelector),
        provenance: Provenance::Linear { dim },
        discrete_level: None,
    }
}

struct RetractSelector {
    base: Arc<dyn GeodesicSelector>,
    retraction: PointMap,
}

impl GeodesicSelector for RetractSelector {
    fn eval(&self, x: &Pt, y: &Pt, t: f64) -> Pt {
        (self.retraction)(&self.base.eval(x, y, t))
    }
    fn eval_frac(&self, x: &Pt, y: &Pt, num: u64, den: u64) -> Pt {
        (self.retraction)(&self.base.eval_frac(x, y, num, den))
    }
}

/// Composes a base bicombing with the retraction of `space`. The result is
/// conical whenever the base is conical and the retraction nonexpansive;
/// the latter is spot-checked on sampled pairs and a failure is recorded as
/// a provenance warning rather than silently trusted.
pub fn retract_bicombing(space: &RetractSpace, base: &Bicombing) -> Bicombing {
    let warning = spot_check_retraction(space);
    let selector = Arc::new(RetractSelector {
        base: base.selector(),
        retraction: Arc::clone(&space.retraction),
    });
    Bicombing {
        space: space.handle.clone(),
        selector,
        provenance: Provenance::Retract {
            space: space.handle.name.clone(),
            warning,
        },
        // Conical bicombings are 1/2-discretely convex.
        discrete_level: Some(2),
    }
}

fn spot_check_retraction(space: &RetractSpace) -> Option<String> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(0x9e3779b9);
    let tol = 1e-9;
    let mut points: Vec<Pt> = space.handle.anchors.clone();
    for _ in 0..48 {
        points.push(space.handle.sample(&mut rng));
    }
    // Perturbed ambient points exercise the retraction off the subset.
    let ambient: Vec<Pt> = points
        .iter()
        .map(|p| {
            Pt::new(
                p.coords
                    .iter()
                    .map(|c| c + rng.gen_range(-0.5..0.5))
                    .collect(),
            )
        })
        .collect();
    let mut all = points;
    all.extend(ambient);
    for p in &all {
        let rp = space.retract(p);
        let rrp = space.retract(&rp);
        if sup_dist(&rp, &rrp) > tol {
            return Some(format!(
                "retraction is not idempotent at {:?} (moved {})",
                p.coords,
                sup_dist(&rp, &rrp)
            ));
        }
    }
    for (i, p) in all.iter().enumerate() {
        for q in &all[i + 1..] {
            let lhs = sup_dist(&space.retract(p), &space.retract(q));
            let rhs = sup_dist(p, q);
            if lhs > rhs + tol {
                return Some(format!(
                    "retraction expands {:?} -- {:?} by {}",
                    p.coords,
                    q.coords,
                    lhs - rhs
                ));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::pt;

    #[test]
    fn linear_is_midpoint_exact() {
        let sigma = linear_bicombing(2);
        let x = pt(&[-2.0, 1.0]);
        let y = pt(&[2.0, 1.0]);
        assert_eq!(sigma.eval(&x, &y, 0.5), pt(&[0.0, 1.0]));
        assert_eq!(sigma.eval(&x, &x, 0.75), x);
        assert_eq!(sigma.eval_frac(&x, &y, 1, 4), pt(&[-1.0, 1.0]));
    }

    #[test]
    fn butterfly_matches_known_values() {
        let space = crate::gallery::butterfly();
        let ambient = linear_bicombing(2);
        let sigma = retract_bicombing(&space, &ambient);
        if let Provenance::Retract { warning, .. } = &sigma.provenance {
            assert!(warning.is_none(), "{warning:?}");
        } else {
            panic!("retract provenance expected");
        }
        let x = pt(&[-2.0, 1.0]);
        let y = pt(&[2.0, 1.0]);
        assert_eq!(sigma.eval_frac(&x, &y, 1, 4), pt(&[-1.0, 0.0]));
        assert_eq!(sigma.eval_frac(&x, &y, 1, 2), pt(&[0.0, 1.0]));
        assert_eq!(sigma.eval_frac(&x, &y, 3, 4), pt(&[1.0, 0.0]));
        // Interior fixed point stays put.
        let z = pt(&[0.0, 0.25]);
        assert_eq!(sigma.eval(&z, &z, 0.3), z);
    }

    #[test]
    fn reversal_flips_parameters() {
        let space = crate::gallery::butterfly();
        let sigma = retract_bicombing(&space, &linear_bicombing(2));
        let rev = sigma.reversed();
        let x = pt(&[-2.0, 1.0]);
        let y = pt(&[2.0, 1.0]);
        assert_eq!(rev.eval_frac(&x, &y, 1, 4), sigma.eval_frac(&y, &x, 3, 4));
    }
}
