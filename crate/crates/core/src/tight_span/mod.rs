//! Isbell's injective hull of a finite metric space.
//!
//! A function `f` on the points of `X` lies in `Delta(X)` when
//! `f(x) + f(y) >= d(x,y)` for all pairs; it is extremal when it is a fixed
//! point of the dual operator `f*(x) = max_y (d(x,y) - f(y))`. The extremal
//! functions form the tight span `E(X)`, a polyhedral complex whose faces
//! are classified here by their equality graphs.

mod faces;

pub use faces::{
    enumerate_faces, face_dim_by_linear_algebra, tight_span_dim, Face, FaceComplex, FaceError,
    DEFAULT_FACE_CAP,
};

use crate::metric::FiniteMetricSpace;
use crate::scalar::{smax, Scalar};
use std::collections::BTreeSet;
use thiserror::Error;

/// A real-valued vector indexed by the points of a finite metric space.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricForm<S> {
    values: Vec<S>,
}

impl<S: Scalar> MetricForm<S> {
    pub fn new(values: Vec<S>) -> Self {
        Self { values }
    }

    pub fn constant(value: S, n: usize) -> Self {
        Self {
            values: vec![value; n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn get(&self, i: usize) -> &S {
        &self.values[i]
    }

    pub fn sup_distance(&self, other: &Self) -> S {
        assert_eq!(self.len(), other.len(), "forms live on the same space");
        let mut best = S::zero();
        for (a, b) in self.values.iter().zip(&other.values) {
            best = smax(best, (a.clone() - b.clone()).abs());
        }
        best
    }

    pub fn midpoint(&self, other: &Self) -> Self {
        Self {
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| (a.clone() + b.clone()).half())
                .collect(),
        }
    }
}

#[derive(Debug, Error)]
pub enum TightSpanError {
    #[error("form has {form} entries but the space has {space} points")]
    SizeMismatch { form: usize, space: usize },
    #[error("form is not extremal (defect {defect})")]
    NotExtremal { defect: String },
    #[error("retraction did not reach tolerance within {max_iter} iterations (defect {defect})")]
    NotConverged { max_iter: usize, defect: String },
}

fn check_size<S: Scalar>(
    f: &MetricForm<S>,
    space: &FiniteMetricSpace<S>,
) -> Result<(), TightSpanError> {
    if f.len() != space.n_points() {
        Err(TightSpanError::SizeMismatch {
            form: f.len(),
            space: space.n_points(),
        })
    } else {
        Ok(())
    }
}

/// The dual form `f*(x) = max_y (d(x,y) - f(y))`.
pub fn star_dual<S: Scalar>(f: &MetricForm<S>, space: &FiniteMetricSpace<S>) -> MetricForm<S> {
    let n = space.n_points();
    let values = (0..n)
        .map(|x| {
            let mut best = space.d(x, 0) - f.get(0).clone();
            for y in 1..n {
                best = smax(best, space.d(x, y) - f.get(y).clone());
            }
            best
        })
        .collect();
    MetricForm::new(values)
}

/// `max_x (f*(x) - f(x))`, i.e. how far `f` is from being extremal.
/// Nonnegative whenever `f` is in `Delta(X)`.
pub fn extremality_defect<S: Scalar>(f: &MetricForm<S>, space: &FiniteMetricSpace<S>) -> S {
    f.sup_distance(&star_dual(f, space))
}

/// Membership in `Delta(X)`: all pair sums dominate the distance.
pub fn is_in_delta<S: Scalar>(f: &MetricForm<S>, space: &FiniteMetricSpace<S>) -> bool {
    let n = space.n_points();
    for x in 0..n {
        for y in x..n {
            if f.get(x).clone() + f.get(y).clone() < space.d(x, y) {
                return false;
            }
        }
    }
    true
}

/// Membership in `Delta_1(X)`: in `Delta(X)` and 1-Lipschitz for `d`.
pub fn is_in_delta1<S: Scalar>(f: &MetricForm<S>, space: &FiniteMetricSpace<S>) -> bool {
    if !is_in_delta(f, space) {
        return false;
    }
    let n = space.n_points();
    for x in 0..n {
        for y in (x + 1)..n {
            if (f.get(x).clone() - f.get(y).clone()).abs() > space.d(x, y) {
                return false;
            }
        }
    }
    true
}

/// Extremal means fixed by the dual operator.
pub fn is_extremal<S: Scalar>(f: &MetricForm<S>, space: &FiniteMetricSpace<S>) -> bool {
    f == &star_dual(f, space)
}

/// The canonical embedding `x -> d(x, .)`, a row of the distance matrix.
pub fn kuratowski_embed<S: Scalar>(space: &FiniteMetricSpace<S>, x: usize) -> MetricForm<S> {
    MetricForm::new((0..space.n_points()).map(|y| space.d(x, y)).collect())
}

/// Nonexpansive retraction of an arbitrary form onto `Delta(X)`:
/// the pointwise maximum of `g` and its dual. Fixes `Delta(X)`.
pub fn retract_to_delta<S: Scalar>(
    g: &MetricForm<S>,
    space: &FiniteMetricSpace<S>,
) -> MetricForm<S> {
    let dual = star_dual(g, space);
    MetricForm::new(
        g.values()
            .iter()
            .zip(dual.values())
            .map(|(a, b)| smax(a.clone(), b.clone()))
            .collect(),
    )
}

/// Outcome of the averaging iteration onto the tight span.
#[derive(Clone, Debug)]
pub struct RetractRun<S> {
    pub form: MetricForm<S>,
    pub iterations: usize,
    pub defect: S,
}

/// Iterates `f <- (f + f*)/2` from a point of `Delta(X)` until the
/// extremality defect drops to `tol` (use `tol = 0` for exact fixed-point
/// detection over rationals). Every iterate stays in `Delta(X)` and the
/// iteration fixes `E(X)` pointwise; failure to converge inside `max_iter`
/// steps is reported, not silently swallowed.
pub fn retract_to_tight_span<S: Scalar>(
    f: &MetricForm<S>,
    space: &FiniteMetricSpace<S>,
    tol: &S,
    max_iter: usize,
) -> Result<RetractRun<S>, TightSpanError> {
    check_size(f, space)?;
    debug_assert!(
        is_in_delta(f, space),
        "input to the retraction lies in Delta"
    );
    let mut current = f.clone();
    for iterations in 0..=max_iter {
        let dual = star_dual(&current, space);
        let defect = current.sup_distance(&dual);
        if defect <= *tol {
            return Ok(RetractRun {
                form: current,
                iterations,
                defect,
            });
        }
        if iterations == max_iter {
            return Err(TightSpanError::NotConverged {
                max_iter,
                defect: defect.to_string(),
            });
        }
        current = current.midpoint(&dual);
    }
    unreachable!("loop returns or errors")
}

/// An unordered pair of point indices, stored with `0 <= small <= large`.
/// A loop `(x, x)` records the equality `f(x) = 0`.
pub type Edge = (usize, usize);

pub fn edge(a: usize, b: usize) -> Edge {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// The equality graph of an extremal function: all pairs (loops allowed)
/// with `f(x) + f(y) = d(x,y)`, together with its parity decomposition.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AdmissibleGraph {
    n: usize,
    edges: BTreeSet<Edge>,
}

impl AdmissibleGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Self {
        let edges = edges
            .into_iter()
            .map(|(a, b)| edge(a, b))
            .collect::<BTreeSet<_>>();
        Self { n, edges }
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().copied()
    }

    pub fn contains(&self, e: Edge) -> bool {
        self.edges.contains(&e)
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn is_subgraph_of(&self, other: &AdmissibleGraph) -> bool {
        self.n == other.n && self.edges.is_subset(&other.edges)
    }

    /// Every point carries at least one edge (possibly a loop). For an
    /// equality graph this is exactly extremality of the underlying form.
    pub fn covers_all_points(&self) -> bool {
        let mut seen = vec![false; self.n];
        for &(a, b) in &self.edges {
            seen[a] = true;
            seen[b] = true;
        }
        seen.into_iter().all(|s| s)
    }

    /// Connected components, each flagged odd when it contains an odd cycle
    /// (a loop counts as a cycle of length one).
    pub fn components(&self) -> Vec<Component> {
        let mut adj = vec![Vec::new(); self.n];
        let mut looped = vec![false; self.n];
        for &(a, b) in &self.edges {
            if a == b {
                looped[a] = true;
            } else {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
        let mut color = vec![None::<bool>; self.n];
        let mut out = Vec::new();
        for start in 0..self.n {
            if color[start].is_some() {
                continue;
            }
            let mut vertices = Vec::new();
            let mut odd = false;
            let mut stack = vec![start];
            color[start] = Some(false);
            while let Some(v) = stack.pop() {
                vertices.push(v);
                if looped[v] {
                    odd = true;
                }
                for &w in &adj[v] {
                    match color[w] {
                        None => {
                            color[w] = Some(!color[v].unwrap());
                            stack.push(w);
                        }
                        Some(c) => {
                            if c == color[v].unwrap() {
                                odd = true;
                            }
                        }
                    }
                }
            }
            vertices.sort_unstable();
            out.push(Component { vertices, odd });
        }
        out
    }

    /// Number of even components; equals the dimension of the face this
    /// graph cuts out of the tight span.
    pub fn rank(&self) -> usize {
        self.components().iter().filter(|c| !c.odd).count()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub vertices: Vec<usize>,
    pub odd: bool,
}

/// Equality edge set of an extremal form, loops included where `f(x) = 0`.
pub fn admissible_graph<S: Scalar>(
    f: &MetricForm<S>,
    space: &FiniteMetricSpace<S>,
) -> Result<AdmissibleGraph, TightSpanError> {
    check_size(f, space)?;
    if !is_extremal(f, space) {
        return Err(TightSpanError::NotExtremal {
            defect: extremality_defect(f, space).to_string(),
        });
    }
    Ok(equality_graph(f, space))
}

/// Equality edges of an arbitrary form in `Delta(X)` (no extremality check).
pub fn equality_graph<S: Scalar>(
    f: &MetricForm<S>,
    space: &FiniteMetricSpace<S>,
) -> AdmissibleGraph {
    let n = space.n_points();
    let mut edges = BTreeSet::new();
    for x in 0..n {
        for y in x..n {
            if f.get(x).clone() + f.get(y).clone() == space.d(x, y) {
                edges.insert((x, y));
            }
        }
    }
    AdmissibleGraph { n, edges }
}
