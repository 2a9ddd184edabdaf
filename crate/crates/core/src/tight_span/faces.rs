//! Face enumeration for tight spans of finite metric spaces.
//!
//! `Delta(X)` is the polyhedron `{ f : f(x) + f(y) >= d(x,y) }` (the case
//! `x = y` gives `f >= 0`). Its bounded faces are exactly the cells of the
//! tight span, and a face is bounded precisely when its equality graph
//! covers every point. We therefore:
//!
//! 1. run an exact double-description pass over the homogenization of
//!    `Delta(X)` to obtain all polyhedron vertices (the rank-0 extremal
//!    functions) together with their equality sets, then
//! 2. close the vertex equality sets under intersection, keeping the
//!    covering ones; each such set is an admissible graph and its face is
//!    the convex hull of the vertices that carry it.
//!
//! Everything runs on exact scalars; equality tests are exact.

use super::{equality_graph, AdmissibleGraph, Edge, MetricForm};
use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;
use std::collections::{BTreeSet, VecDeque};
use thiserror::Error;

pub const DEFAULT_FACE_CAP: usize = 8;

/// Hard limit coming from the 128-bit constraint masks.
const MASK_LIMIT: usize = 14;

#[derive(Debug, Error)]
pub enum FaceError {
    #[error("space has {n} points, above the enumeration cap {cap}")]
    CapExceeded { n: usize, cap: usize },
}

/// One cell of the tight span.
#[derive(Clone, Debug)]
pub struct Face<S> {
    /// Equality graph shared by the relative interior of the cell.
    pub graph: AdmissibleGraph,
    /// Cell dimension; equals the number of even components of `graph`.
    pub rank: usize,
    /// Average of the cell's vertices — an exact relative-interior point.
    pub representative: MetricForm<S>,
    /// Indices into [`FaceComplex::vertices`] of the cell's corners.
    pub vertex_indices: Vec<usize>,
}

/// The full bounded-face complex of `Delta(X)`, i.e. the tight span.
#[derive(Clone, Debug)]
pub struct FaceComplex<S> {
    /// Rank-0 extremal functions, canonically ordered.
    pub vertices: Vec<MetricForm<S>>,
    /// All cells, sorted by (rank, edge list). Vertices appear as rank-0
    /// cells; `P(A')` is a subface of `P(A)` exactly when `A` is a subgraph
    /// of `A'`.
    pub faces: Vec<Face<S>>,
    /// Maximum cell rank.
    pub dim: usize,
}

impl<S: Scalar> FaceComplex<S> {
    /// Looks up the face whose equality graph equals `graph`.
    pub fn face_with_graph(&self, graph: &AdmissibleGraph) -> Option<&Face<S>> {
        self.faces.iter().find(|f| &f.graph == graph)
    }
}

/// Dimension of the tight span (maximum face rank). Always at most
/// `floor(|X| / 2)`.
pub fn tight_span_dim<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    cap: usize,
) -> Result<usize, FaceError> {
    Ok(enumerate_faces(space, cap)?.dim)
}

struct Rows<S> {
    /// Constraint rows over `(f_0, .., f_{n-1}, t)`; the first `n + 1` rows
    /// are the identity (loops and `t >= 0`), then one row per pair.
    coeffs: Vec<Vec<S>>,
    /// Edge attached to each row (`None` for the `t >= 0` row).
    edges: Vec<Option<Edge>>,
    n: usize,
}

fn build_rows<S: Scalar>(space: &FiniteMetricSpace<S>) -> Rows<S> {
    let n = space.n_points();
    let dim = n + 1;
    let mut coeffs = Vec::new();
    let mut edges = Vec::new();
    for i in 0..n {
        let mut row = vec![S::zero(); dim];
        row[i] = S::one();
        coeffs.push(row);
        edges.push(Some((i, i)));
    }
    let mut t_row = vec![S::zero(); dim];
    t_row[n] = S::one();
    coeffs.push(t_row);
    edges.push(None);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut row = vec![S::zero(); dim];
            row[i] = S::one();
            row[j] = S::one();
            row[n] = -space.d(i, j);
            coeffs.push(row);
            edges.push(Some((i, j)));
        }
    }
    Rows { coeffs, edges, n }
}

#[derive(Clone)]
struct Ray<S> {
    coords: Vec<S>,
    /// Value of every constraint row on this ray.
    vals: Vec<S>,
    /// Bit `r` set when row `r` vanishes on the ray.
    mask: u128,
}

impl<S: Scalar> Ray<S> {
    fn normalized(mut coords: Vec<S>, mut vals: Vec<S>) -> Self {
        let mut sum = S::zero();
        for c in &coords {
            sum = sum + c.clone();
        }
        debug_assert!(
            sum > S::zero(),
            "rays of the homogenized cone are nonnegative"
        );
        for c in coords.iter_mut() {
            *c = c.clone() / sum.clone();
        }
        for v in vals.iter_mut() {
            *v = v.clone() / sum.clone();
        }
        let mut mask = 0u128;
        for (r, v) in vals.iter().enumerate() {
            if v.is_zero() {
                mask |= 1 << r;
            }
        }
        Ray { coords, vals, mask }
    }
}

/// Exact double description over the homogenized cone of `Delta(X)`.
/// Returns the polyhedron vertices with their full tight masks.
fn delta_vertices<S: Scalar>(space: &FiniteMetricSpace<S>, rows: &Rows<S>) -> Vec<Ray<S>> {
    let n = rows.n;
    let dim = n + 1;
    let m = rows.coeffs.len();
    let mut rays: Vec<Ray<S>> = (0..dim)
        .map(|i| {
            let mut coords = vec![S::zero(); dim];
            coords[i] = S::one();
            let vals = rows
                .coeffs
                .iter()
                .map(|row| row[i].clone())
                .collect::<Vec<_>>();
            Ray::normalized(coords, vals)
        })
        .collect();
    let mut processed: u128 = (1 << dim) - 1;
    for cur in dim..m {
        let cur_bit = 1u128 << cur;
        let mut positive = Vec::new();
        let mut zero = Vec::new();
        let mut negative = Vec::new();
        for ray in rays.drain(..) {
            if ray.vals[cur].is_zero() {
                zero.push(ray);
            } else if ray.vals[cur] > S::zero() {
                positive.push(ray);
            } else {
                negative.push(ray);
            }
        }
        let mut next = Vec::with_capacity(positive.len() + zero.len());
        if negative.is_empty() {
            next.extend(positive);
            next.extend(zero);
            rays = next;
            processed |= cur_bit;
            continue;
        }
        // Adjacency is tested combinatorially: p and q span an edge of the
        // current cone iff no third ray is tight on their common tight set.
        let all: Vec<&Ray<S>> = positive
            .iter()
            .chain(zero.iter())
            .chain(negative.iter())
            .collect();
        let mut fresh = Vec::new();
        for p in &positive {
            for q in &negative {
                let common = p.mask & q.mask & processed;
                let blocked = all.iter().any(|s| {
                    !std::ptr::eq(*s, p) && !std::ptr::eq(*s, q) && (s.mask & common) == common
                });
                if blocked {
                    continue;
                }
                let c1 = p.vals[cur].clone();
                let c2 = -q.vals[cur].clone();
                let coords = q
                    .coords
                    .iter()
                    .zip(&p.coords)
                    .map(|(qc, pc)| c1.clone() * qc.clone() + c2.clone() * pc.clone())
                    .collect::<Vec<_>>();
                let vals = q
                    .vals
                    .iter()
                    .zip(&p.vals)
                    .map(|(qv, pv)| c1.clone() * qv.clone() + c2.clone() * pv.clone())
                    .collect::<Vec<_>>();
                fresh.push(Ray::normalized(coords, vals));
            }
        }
        next.extend(positive);
        next.extend(zero);
        next.extend(fresh);
        rays = next;
        processed |= cur_bit;
    }
    let _ = space;
    let (vertices, recession): (Vec<_>, Vec<_>) =
        rays.into_iter().partition(|r| !r.coords[n].is_zero());
    debug_assert!(
        recession
            .iter()
            .all(|r| { r.coords[..n].iter().filter(|c| !c.is_zero()).count() == 1 }),
        "the recession cone of Delta(X) is the nonnegative orthant"
    );
    vertices
}

/// Enumerates every cell of the tight span of `space`.
///
/// Errors when `|X|` exceeds `cap` (or the hard mask limit).
pub fn enumerate_faces<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    cap: usize,
) -> Result<FaceComplex<S>, FaceError> {
    let n = space.n_points();
    let cap = cap.min(MASK_LIMIT);
    if n > cap {
        return Err(FaceError::CapExceeded { n, cap });
    }
    let rows = build_rows(space);
    let edge_rows_mask: u128 = rows
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.is_some())
        .fold(0u128, |acc, (r, _)| acc | (1 << r));
    let mut point_rows = vec![0u128; n];
    for (r, e) in rows.edges.iter().enumerate() {
        if let Some((a, b)) = e {
            point_rows[*a] |= 1 << r;
            point_rows[*b] |= 1 << r;
        }
    }
    let covers = |mask: u128| point_rows.iter().all(|pr| mask & pr != 0);

    let raw = delta_vertices(space, &rows);
    // Canonical vertex order: by coordinate vectors.
    let mut vertex_entries: Vec<(MetricForm<S>, u128)> = raw
        .into_iter()
        .map(|ray| {
            let t = ray.coords[n].clone();
            let form = MetricForm::new(
                ray.coords[..n]
                    .iter()
                    .map(|c| c.clone() / t.clone())
                    .collect(),
            );
            (form, ray.mask & edge_rows_mask)
        })
        .collect();
    vertex_entries.sort_by(|a, b| {
        a.0.values()
            .iter()
            .zip(b.0.values())
            .find_map(|(x, y)| x.partial_cmp(y).filter(|o| o.is_ne()))
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    debug_assert!(
        vertex_entries.iter().all(|(_, mask)| covers(*mask)),
        "polyhedron vertices of Delta(X) are extremal"
    );

    // Close the vertex equality sets under intersection; covering sets are
    // exactly the bounded faces.
    let mut seen: BTreeSet<u128> = BTreeSet::new();
    let mut queue: VecDeque<u128> = VecDeque::new();
    for (_, mask) in &vertex_entries {
        if covers(*mask) && seen.insert(*mask) {
            queue.push_back(*mask);
        }
    }
    while let Some(t) = queue.pop_front() {
        for (_, vmask) in &vertex_entries {
            let inter = t & vmask;
            if covers(inter) && seen.insert(inter) {
                queue.push_back(inter);
            }
        }
    }

    let mask_to_graph = |mask: u128| {
        AdmissibleGraph::new(
            n,
            rows.edges
                .iter()
                .enumerate()
                .filter(|(r, e)| e.is_some() && mask & (1 << r) != 0)
                .map(|(_, e)| e.unwrap()),
        )
    };

    let mut faces = Vec::with_capacity(seen.len());
    for mask in seen {
        let members: Vec<usize> = vertex_entries
            .iter()
            .enumerate()
            .filter(|(_, (_, vmask))| vmask & mask == mask)
            .map(|(i, _)| i)
            .collect();
        debug_assert!(!members.is_empty());
        let mut acc = vec![S::zero(); n];
        for &i in &members {
            for (a, v) in acc.iter_mut().zip(vertex_entries[i].0.values()) {
                *a = a.clone() + v.clone();
            }
        }
        let count = S::from_int(members.len() as i64);
        let representative = MetricForm::new(acc.into_iter().map(|v| v / count.clone()).collect());
        let graph = mask_to_graph(mask);
        debug_assert_eq!(
            equality_graph(&representative, space),
            graph,
            "vertex average lies in the relative interior of its face"
        );
        let rank = graph.rank();
        faces.push(Face {
            graph,
            rank,
            representative,
            vertex_indices: members,
        });
    }
    faces.sort_by(|a, b| {
        a.rank.cmp(&b.rank).then_with(|| {
            a.graph
                .edges()
                .collect::<Vec<_>>()
                .cmp(&b.graph.edges().collect::<Vec<_>>())
        })
    });
    let dim = faces.iter().map(|f| f.rank).max().unwrap_or(0);
    debug_assert!(dim <= n / 2, "tight span dimension is at most n/2");
    Ok(FaceComplex {
        vertices: vertex_entries.into_iter().map(|(f, _)| f).collect(),
        faces,
        dim,
    })
}

/// Rank of the equality system of a graph, over the `f` variables only.
/// The affine dimension of the face is `n` minus this number; it must agree
/// with the even-component count.
pub fn face_dim_by_linear_algebra<S: Scalar>(graph: &AdmissibleGraph) -> usize {
    let n = graph.n_points();
    let mut rows: Vec<Vec<S>> = graph
        .edges()
        .map(|(a, b)| {
            let mut row = vec![S::zero(); n];
            if a == b {
                row[a] = S::one();
            } else {
                row[a] = S::one();
                row[b] = S::one();
            }
            row
        })
        .collect();
    let mut rank = 0usize;
    for col in 0..n {
        let Some(pivot) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let lead = rows[rank][col].clone();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone() / lead.clone();
                for c in 0..n {
                    let delta = factor.clone() * rows[rank][c].clone();
                    rows[r][c] = rows[r][c].clone() - delta;
                }
            }
        }
        rank += 1;
    }
    n - rank
}
