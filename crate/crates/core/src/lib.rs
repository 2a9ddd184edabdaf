//! Exact machinery for sup-norm metric geometry at desk scale.
//!
//! The crate has two arithmetic regimes. Everything combinatorial — metric
//! validation, Isbell tight spans and their face complexes, Dress-style
//! combinatorial dimension checks with constructive certificates — runs on
//! arbitrary-precision rationals and is exact. The geodesic bicombing
//! constructions and the boundary-at-infinity apparatus run on `f64` with
//! explicit, seeded defect reports.
//!
//! Modules follow that split:
//!
//! * [`metric`] — validated finite metric spaces and `LinfPoint`s;
//! * [`tight_span`] — extremal functions, admissible graphs, face
//!   enumeration and the nonexpansive retraction onto the tight span;
//! * [`comb_dim`] — the `2(n+1)`-point matching criterion, exhaustive
//!   dimension sweeps and exact flow certificates;
//! * [`bicombing`] — geodesic bicombings on retract spaces, defect scans
//!   and the midpoint-refinement convexification cascade;
//! * [`boundary`] — generalized rays, radial retractions and the
//!   exponentially weighted ray metric on the closure;
//! * [`gallery`] — reproducible example spaces and seeded generators;
//! * [`oracle`] — brute-force reference algorithms used for cross-checks;
//! * [`simplex`] — a small dense exact-arithmetic LP solver.

pub mod scalar;

pub mod metric;

pub mod simplex;

pub mod tight_span;

pub mod comb_dim;

pub mod oracle;

pub mod bicombing;

pub mod boundary;

pub mod gallery;

/// Exact scalar used by the combinatorial layer.
pub type Rat = num_rational::BigRational;

/// Finite metric space over exact rationals.
pub type RatSpace = metric::FiniteMetricSpace<Rat>;

/// Real-valued function on the points of a rational space.
pub type RatForm = tight_span::MetricForm<Rat>;

/// Point type used by the floating-point bicombing and boundary layers.
pub type Pt = metric::LinfPoint<f64>;

pub use metric::{linf_distance, validate_metric, FiniteMetricSpace, LinfPoint};
pub use scalar::Scalar;
