//! Reproducible example spaces and seeded generators.
//!
//! Everything here regenerates bit-identically from its parameters: random
//! constructions draw from a ChaCha stream seeded explicitly, and all finite
//! spaces go through [`validate_metric`] on construction.

use crate::bicombing::{PointMap, RetractSpace, SpaceHandle};
use crate::metric::validate_metric;
use crate::scalar::rat;
use crate::tight_span::{retract_to_delta, retract_to_tight_span, MetricForm};
use crate::{Pt, Rat, RatSpace};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GalleryError {
    #[error("unknown gallery id {0:?}")]
    UnknownId(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("edge list is not a tree: {0}")]
    NotATree(String),
}

// ---------------------------------------------------------------------------
// Butterfly: two triangles joined at a point, inside a sup-norm triangle.
// ---------------------------------------------------------------------------

fn wing_bound(u: f64) -> f64 {
    u.abs() - 1.0
}

/// The bowtie region `{ |u| <= 2, |u| - 1 <= v <= ||u| - 1| }` with the
/// vertical retraction `(u, v) -> (u, min(v, ||u| - 1|))` from the triangle
/// above it. The retraction is nonexpansive for the sup norm, so composing
/// it with the linear bicombing yields a conical bicombing that is visibly
/// not convex.
pub fn butterfly() -> RetractSpace {
    let retraction: PointMap = Arc::new(|p: &Pt| {
        let u = p.coords[0];
        let v = p.coords[1];
        Pt::new(vec![u, v.min(wing_bound(u).abs())])
    });
    let sampler = Arc::new(|rng: &mut ChaCha8Rng| {
        let u: f64 = rng.gen_range(-2.0..2.0);
        let lo = wing_bound(u);
        let hi = lo.abs();
        let v = if hi > lo { rng.gen_range(lo..hi) } else { lo };
        Pt::new(vec![u, v])
    });
    let membership = Arc::new(|p: &Pt| {
        let u = p.coords[0];
        let v = p.coords[1];
        u.abs() <= 2.0 + 1e-12 && wing_bound(u) - 1e-12 <= v && v <= wing_bound(u).abs() + 1e-12
    });
    let anchors = vec![
        Pt::new(vec![-2.0, 1.0]),
        Pt::new(vec![2.0, 1.0]),
        Pt::new(vec![0.0, 1.0]),
        Pt::new(vec![0.0, -1.0]),
        Pt::new(vec![0.0, 0.0]),
        Pt::new(vec![-1.0, 0.0]),
        Pt::new(vec![1.0, 0.0]),
        Pt::new(vec![1.5, 0.5]),
        Pt::new(vec![-1.5, 0.5]),
    ];
    RetractSpace {
        handle: SpaceHandle {
            name: "butterfly".into(),
            dim: 2,
            sampler,
            anchors,
            membership: Some(membership),
        },
        retraction,
    }
}

// ---------------------------------------------------------------------------
// Finite spaces
// ---------------------------------------------------------------------------

/// Vertices of a regular `2n`-gon with the inner (arc-length) metric:
/// `d(i, j) = min(|i - j|, 2n - |i - j|)`, an integer-valued metric.
pub fn ngon(two_n: usize) -> Result<RatSpace, GalleryError> {
    if two_n < 2 || two_n % 2 != 0 {
        return Err(GalleryError::BadParameter(format!(
            "ngon wants an even vertex count >= 2, got {two_n}"
        )));
    }
    let dist = (0..two_n)
        .map(|i| {
            (0..two_n)
                .map(|j| {
                    let diff = i.abs_diff(j);
                    rat(diff.min(two_n - diff) as i64, 1)
                })
                .collect()
        })
        .collect();
    Ok(validate_metric(dist, None).expect("arc metric is a metric"))
}

/// Discretized bigon: two unit-speed curves `a`, `b` sharing their
/// endpoints, sampled at `k/m`. Distances inside a curve are `|s - t|`;
/// across, `s + t - 2 s t`. Index layout: `a_k` for `k = 0..=m`, then `b_k`
/// for `k = 1..m-1` (the endpoints are identified, so the space has `2m`
/// points).
pub fn bigon(m: usize) -> Result<RatSpace, GalleryError> {
    if m < 1 {
        return Err(GalleryError::BadParameter("bigon needs m >= 1".into()));
    }
    let param = |idx: usize| -> (bool, Rat) {
        if idx <= m {
            (false, rat(idx as i64, m as i64))
        } else {
            (true, rat((idx - m) as i64, m as i64))
        }
    };
    let n = 2 * m;
    let mut labels = Vec::with_capacity(n);
    for k in 0..=m {
        labels.push(format!("a{k}"));
    }
    for k in 1..m {
        labels.push(format!("b{k}"));
    }
    let dist = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let (ci, s) = param(i);
                    let (cj, t) = param(j);
                    if ci == cj {
                        (s.clone() - t).abs()
                    } else {
                        let two_st = rat(2, 1) * s.clone() * t.clone();
                        s + t - two_st
                    }
                })
                .collect()
        })
        .collect();
    Ok(validate_metric(dist, Some(labels)).expect("bigon distances satisfy the axioms"))
}

/// The curve-swapping involution of `bigon(m)` as an index permutation.
/// It fixes the shared endpoints and is an isometry.
pub fn bigon_involution(m: usize) -> Vec<usize> {
    let n = 2 * m;
    (0..n)
        .map(|i| {
            if i == 0 || i == m {
                i
            } else if i < m {
                m + i
            } else {
                i - m
            }
        })
        .collect()
}

/// Metric of a weighted tree on nodes `0..n` given by its edge list.
pub fn tree_metric(n: usize, edges: &[(usize, usize, Rat)]) -> Result<RatSpace, GalleryError> {
    if n == 0 {
        return Err(GalleryError::BadParameter("empty tree".into()));
    }
    if edges.len() + 1 != n {
        return Err(GalleryError::NotATree(format!(
            "{} edges on {n} nodes",
            edges.len()
        )));
    }
    let mut adj = vec![Vec::new(); n];
    for &(a, b, ref w) in edges {
        if a >= n || b >= n || a == b {
            return Err(GalleryError::NotATree(format!("bad edge ({a}, {b})")));
        }
        if !w.is_positive() {
            return Err(GalleryError::BadParameter(format!(
                "edge ({a}, {b}) has nonpositive length {w}"
            )));
        }
        adj[a].push((b, w.clone()));
        adj[b].push((a, w.clone()));
    }
    let mut dist = vec![vec![Rat::zero(); n]; n];
    for root in 0..n {
        let mut seen = vec![false; n];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(v) = stack.pop() {
            for (w, len) in &adj[v] {
                if !seen[*w] {
                    seen[*w] = true;
                    dist[root][*w] = dist[root][v].clone() + len.clone();
                    stack.push(*w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(GalleryError::NotATree("disconnected edge list".into()));
        }
    }
    Ok(validate_metric(dist, None).expect("tree path sums form a metric"))
}

/// Star with `k` unit edges: leaves `0..k`, center at index `k`.
pub fn star_tree(k: usize) -> Result<RatSpace, GalleryError> {
    let edges: Vec<(usize, usize, Rat)> = (0..k).map(|leaf| (leaf, k, rat(1, 1))).collect();
    tree_metric(k + 1, &edges)
}

/// Path with `k` nodes and unit edges.
pub fn path_tree(k: usize) -> Result<RatSpace, GalleryError> {
    let edges: Vec<(usize, usize, Rat)> = (1..k).map(|v| (v - 1, v, rat(1, 1))).collect();
    tree_metric(k, &edges)
}

/// Random tree with rational edge lengths, deterministic in `(n, seed)`.
pub fn random_tree(n: usize, seed: u64) -> Result<RatSpace, GalleryError> {
    if n < 2 {
        return Err(GalleryError::BadParameter("tree needs >= 2 nodes".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges: Vec<(usize, usize, Rat)> = (1..n)
        .map(|v| {
            let parent = rng.gen_range(0..v);
            let numer = rng.gen_range(1..=6i64);
            let denom = rng.gen_range(1..=2i64);
            (parent, v, rat(numer, denom))
        })
        .collect();
    tree_metric(n, &edges)
}

/// Shortest-path closure of a random rational-weighted complete graph.
/// The closure guarantees the triangle inequality; determinism in
/// `(n, seed)` is part of the contract.
pub fn random_metric(n: usize, seed: u64) -> RatSpace {
    assert!(n >= 2, "a metric space needs at least two points");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut d = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let numer = rng.gen_range(1..=12i64);
            let denom = rng.gen_range(1..=2i64);
            let w = rat(numer, denom);
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let via = d[i][k].clone() + d[k][j].clone();
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    validate_metric(d, None).expect("shortest-path closure is a metric")
}

// ---------------------------------------------------------------------------
// Convex 1-Lipschitz profiles on a grid
// ---------------------------------------------------------------------------

/// A finite sample of the compact convex family
/// `{ f : f(0) + f(1) = 1, f convex, f in Delta_1([0,1]) }`, discretized on
/// a uniform grid, together with the hinge curve `t -> d_t`.
#[derive(Clone, Debug)]
pub struct CapSet {
    /// Grid points of `[0, 1]` with the absolute-value metric.
    pub space: RatSpace,
    pub grid: Vec<Rat>,
    /// Sampled members of the family, as functions on the grid.
    pub members: Vec<MetricForm<Rat>>,
    /// The hinge curve `gamma(t) = d_t` sampled on the grid.
    pub curve: Vec<MetricForm<Rat>>,
}

/// Checks the three defining constraints of the family on the grid.
pub fn cap_member_ok(f: &MetricForm<Rat>, cap: &CapSet) -> bool {
    let g = cap.grid.len();
    if f.len() != g {
        return false;
    }
    if f.get(0).clone() + f.get(g - 1).clone() != rat(1, 1) {
        return false;
    }
    for j in 1..g - 1 {
        // Uniform grid: midpoint convexity per consecutive triple.
        if f.get(j - 1).clone() + f.get(j + 1).clone() < rat(2, 1) * f.get(j).clone() {
            return false;
        }
    }
    crate::tight_span::is_in_delta1(f, &cap.space)
}

/// Builds the sampled family on `g >= 2` grid points: all hinges `|u - c|`,
/// all admissible affine profiles through the grid values, plus `extra`
/// seeded convex combinations.
pub fn convex_cap_set(g: usize, extra: usize, seed: u64) -> Result<CapSet, GalleryError> {
    if g < 2 {
        return Err(GalleryError::BadParameter(
            "the grid needs at least two points".into(),
        ));
    }
    let grid: Vec<Rat> = (0..g).map(|j| rat(j as i64, (g - 1) as i64)).collect();
    let dist = grid
        .iter()
        .map(|u| grid.iter().map(|v| (u.clone() - v.clone()).abs()).collect())
        .collect();
    let space = validate_metric(dist, None).expect("grid metric");
    let hinge =
        |c: &Rat| MetricForm::new(grid.iter().map(|u| (u.clone() - c.clone()).abs()).collect());
    let affine = |a: &Rat| {
        // f(u) = a + (1 - 2a) u; 1-Lipschitz for a in [0, 1].
        MetricForm::new(
            grid.iter()
                .map(|u| a.clone() + (rat(1, 1) - rat(2, 1) * a.clone()) * u.clone())
                .collect(),
        )
    };
    let mut members: Vec<MetricForm<Rat>> = Vec::new();
    for c in &grid {
        members.push(hinge(c));
    }
    for a in &grid {
        members.push(affine(a));
    }
    let base = members.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..extra {
        let i = rng.gen_range(0..base);
        let j = rng.gen_range(0..base);
        let lambda = rat(rng.gen_range(0..=8i64), 8);
        let mix = MetricForm::new(
            members[i]
                .values()
                .iter()
                .zip(members[j].values())
                .map(|(fi, fj)| {
                    lambda.clone() * fi.clone() + (rat(1, 1) - lambda.clone()) * fj.clone()
                })
                .collect(),
        );
        members.push(mix);
    }
    let curve = (0..g)
        .map(|j| crate::tight_span::kuratowski_embed(&space, j))
        .collect();
    let cap = CapSet {
        space,
        grid,
        members,
        curve,
    };
    debug_assert!(cap.members.iter().all(|f| cap_member_ok(f, &cap)));
    Ok(cap)
}

// ---------------------------------------------------------------------------
// Tight spans as retract spaces
// ---------------------------------------------------------------------------

/// Realizes the tight span of a finite rational space as an `f64` retract
/// space inside `R^n` with the sup norm. The retraction first projects onto
/// the pair-sum polyhedron and then runs the averaging iteration; both maps
/// are nonexpansive and fix the tight span pointwise.
pub fn tight_span_retract_space(space: &RatSpace, name: &str) -> RetractSpace {
    use num_traits::ToPrimitive;
    let spacef = Arc::new(space.to_f64());
    let n = space.n_points();
    let diameter = space.diameter().to_f64().expect("finite diameter");
    let retraction_space = Arc::clone(&spacef);
    let retraction: PointMap = Arc::new(move |p: &Pt| {
        let g = MetricForm::new(p.coords.clone());
        let in_delta = retract_to_delta(&g, &retraction_space);
        let run = retract_to_tight_span(&in_delta, &retraction_space, &1e-12, 10_000)
            .expect("averaging iteration converges on desk-scale spaces");
        Pt::new(run.form.values().to_vec())
    });
    let sampler_retraction = Arc::clone(&retraction);
    let sampler = Arc::new(move |rng: &mut ChaCha8Rng| {
        let raw = Pt::new(
            (0..n)
                .map(|_| rng.gen_range(0.0..diameter.max(1.0)))
                .collect(),
        );
        sampler_retraction(&raw)
    });
    let membership_space = Arc::clone(&spacef);
    let membership = Arc::new(move |p: &Pt| {
        let f = MetricForm::new(p.coords.clone());
        crate::tight_span::extremality_defect(&f, &membership_space) <= 1e-9
    });
    let mut anchors: Vec<Pt> = (0..n)
        .map(|x| {
            Pt::new(
                crate::tight_span::kuratowski_embed(&spacef, x)
                    .values()
                    .to_vec(),
            )
        })
        .collect();
    let centroid = Pt::new(
        (0..n)
            .map(|j| anchors.iter().map(|a| a.coords[j]).sum::<f64>() / n as f64)
            .collect(),
    );
    anchors.push(retraction(&centroid));
    anchors.push(retraction(&Pt::new(vec![diameter / 2.0; n])));
    RetractSpace {
        handle: SpaceHandle {
            name: format!("tight-span:{name}"),
            dim: n,
            sampler,
            anchors,
            membership: Some(membership),
        },
        retraction,
    }
}

// ---------------------------------------------------------------------------
// Registry
// ---------------------------------------------------------------------------

#[derive(Clone, Debug, serde::Serialize)]
pub struct GalleryInfo {
    pub id: &'static str,
    pub params: &'static str,
    pub description: &'static str,
}

pub enum GalleryObject {
    Finite(RatSpace),
    Retract(RetractSpace),
    /// Ambient sup-norm space of the given dimension (linear bicombing).
    Ambient(usize),
}

pub fn list() -> Vec<GalleryInfo> {
    vec![
        GalleryInfo {
            id: "butterfly",
            params: "",
            description: "bowtie region under the vertical retraction of a sup-norm triangle",
        },
        GalleryInfo {
            id: "ngon",
            params: "ngon:<2n>",
            description: "regular polygon vertices with the arc-length metric",
        },
        GalleryInfo {
            id: "bigon",
            params: "bigon:<m>",
            description: "two unit-speed curves with shared endpoints, cross distances s+t-2st",
        },
        GalleryInfo {
            id: "tree-star",
            params: "tree-star:<k>",
            description: "star tree with k unit edges (center is the last index)",
        },
        GalleryInfo {
            id: "tree-path",
            params: "tree-path:<k>",
            description: "path with k nodes and unit edges",
        },
        GalleryInfo {
            id: "tree-random",
            params: "tree-random:<n>:<seed>",
            description: "random tree metric with rational edge lengths",
        },
        GalleryInfo {
            id: "random",
            params: "random:<n>:<seed>",
            description: "shortest-path closure of a random rational weighted complete graph",
        },
        GalleryInfo {
            id: "l-inf",
            params: "l-inf:<d>",
            description: "ambient sup-norm space with the linear bicombing",
        },
    ]
}

/// Builds a gallery object from its id string, e.g. `"ngon:6"`.
pub fn build(id: &str) -> Result<GalleryObject, GalleryError> {
    let parts: Vec<&str> = id.split(':').collect();
    let arg = |k: usize| -> Result<usize, GalleryError> {
        parts
            .get(k)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| GalleryError::BadParameter(format!("{id:?} needs parameter {k}")))
    };
    let seed = |k: usize| -> Result<u64, GalleryError> {
        parts
            .get(k)
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| GalleryError::BadParameter(format!("{id:?} needs a seed at {k}")))
    };
    match parts[0] {
        "butterfly" => Ok(GalleryObject::Retract(butterfly())),
        "ngon" => Ok(GalleryObject::Finite(ngon(arg(1)?)?)),
        "bigon" => Ok(GalleryObject::Finite(bigon(arg(1)?)?)),
        "tree-star" => Ok(GalleryObject::Finite(star_tree(arg(1)?)?)),
        "tree-path" => Ok(GalleryObject::Finite(path_tree(arg(1)?)?)),
        "tree-random" => Ok(GalleryObject::Finite(random_tree(arg(1)?, seed(2)?)?)),
        "random" => Ok(GalleryObject::Finite(random_metric(arg(1)?, seed(2)?))),
        "l-inf" => Ok(GalleryObject::Ambient(arg(1)?)),
        other => Err(GalleryError::UnknownId(other.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bicombing::sup_dist;
    use crate::metric::pt;

    #[test]
    fn butterfly_retraction_facts() {
        let b = butterfly();
        assert_eq!(b.retract(&pt(&[0.0, 1.0])), pt(&[0.0, 1.0]));
        assert_eq!(b.retract(&pt(&[0.0, 0.5])), pt(&[0.0, 0.5]));
        // Idempotent on a 10x10 grid of the ambient triangle.
        for i in 0..10 {
            for j in 0..10 {
                let u = -2.0 + 4.0 * (i as f64) / 9.0;
                let v = wing_bound(u) + (1.0 - wing_bound(u)) * (j as f64) / 9.0;
                let p = pt(&[u, v]);
                let rp = b.retract(&p);
                assert_eq!(b.retract(&rp), rp);
                assert!((b.handle.membership.as_ref().unwrap())(&rp));
            }
        }
    }

    #[test]
    fn ngon_small_cases() {
        let two = ngon(2).unwrap();
        assert_eq!(two.d(0, 1), rat(1, 1));
        let hex = ngon(6).unwrap();
        assert_eq!(hex.d(0, 3), rat(3, 1));
        assert_eq!(hex.d(1, 5), rat(2, 1));
        assert!(ngon(5).is_err());
    }

    #[test]
    fn bigon_distances_and_involution() {
        let one = bigon(1).unwrap();
        assert_eq!(one.n_points(), 2);
        assert_eq!(one.d(0, 1), rat(1, 1));

        let two = bigon(2).unwrap();
        // d(a_{1/2}, b_{1/2}) = 1/2 + 1/2 - 2/4.
        assert_eq!(two.d(1, 3), rat(1, 2));

        let m = 5;
        let b = bigon(m).unwrap();
        let iota = bigon_involution(m);
        for i in 0..b.n_points() {
            assert_eq!(iota[iota[i]], i);
            for j in 0..b.n_points() {
                assert_eq!(b.d(iota[i], iota[j]), b.d(i, j), "({i}, {j})");
            }
        }
    }

    #[test]
    fn bigon_embeds_in_sup_norm_grid_vectors() {
        let m = 4usize;
        let b = bigon(m).unwrap();
        let grid: Vec<Rat> = (0..=m).map(|k| rat(k as i64, m as i64)).collect();
        let vector = |idx: usize| -> Vec<Rat> {
            if idx <= m {
                let s = rat(idx as i64, m as i64);
                grid.iter()
                    .map(|u| u.clone() + s.clone() - rat(2, 1) * s.clone() * u.clone())
                    .collect()
            } else {
                let t = rat((idx - m) as i64, m as i64);
                grid.iter().map(|u| (t.clone() - u.clone()).abs()).collect()
            }
        };
        for i in 0..b.n_points() {
            for j in 0..b.n_points() {
                let vi = vector(i);
                let vj = vector(j);
                let sup = vi
                    .iter()
                    .zip(&vj)
                    .map(|(x, y)| (x.clone() - y.clone()).abs())
                    .max()
                    .unwrap();
                assert_eq!(sup, b.d(i, j), "pair ({i}, {j})");
            }
        }
    }

    #[test]
    fn trees_and_random_spaces() {
        let star = star_tree(3).unwrap();
        assert_eq!(star.n_points(), 4);
        assert_eq!(star.d(0, 1), rat(2, 1));
        assert_eq!(star.d(0, 3), rat(1, 1));

        let path = path_tree(4).unwrap();
        assert_eq!(path.d(0, 3), rat(3, 1));

        assert!(tree_metric(3, &[(0, 1, rat(1, 1))]).is_err());
        assert!(tree_metric(3, &[(0, 1, rat(1, 1)), (0, 1, rat(1, 1))]).is_err());

        let a = random_metric(5, 42);
        let b = random_metric(5, 42);
        assert_eq!(a, b);
        let c = random_metric(5, 43);
        assert_ne!(a, c);

        let t = random_tree(6, 7).unwrap();
        assert_eq!(t, random_tree(6, 7).unwrap());
        assert!(t.max_four_point_defect() <= Rat::zero());
    }

    #[test]
    fn cap_set_members_satisfy_constraints() {
        let cap = convex_cap_set(9, 12, 5).unwrap();
        assert!(cap.members.len() >= 18);
        for f in &cap.members {
            assert!(cap_member_ok(f, &cap));
        }
        // The linear member u -> u is present (affine with a = 0).
        assert!(cap
            .members
            .iter()
            .any(|f| f.values() == cap.grid.as_slice()));
        // The hinge at c = 1/2 is present when the grid contains 1/2.
        let hinge_half = cap.members.iter().any(|f| {
            (0..cap.grid.len()).all(|j| {
                let u = cap.grid[j].clone();
                *f.get(j) == (u - rat(1, 2)).abs()
            })
        });
        assert!(hinge_half);
    }

    #[test]
    fn tight_span_retract_space_fixes_embedded_points() {
        let tree = star_tree(3).unwrap();
        let rs = tight_span_retract_space(&tree, "star3");
        for x in 0..4 {
            let e = Pt::new(
                crate::tight_span::kuratowski_embed(&tree.to_f64(), x)
                    .values()
                    .to_vec(),
            );
            assert!(sup_dist(&rs.retract(&e), &e) <= 1e-12);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..10 {
            let p = rs.handle.sample(&mut rng);
            assert!((rs.handle.membership.as_ref().unwrap())(&p));
            assert!(sup_dist(&rs.retract(&p), &p) <= 1e-9);
        }
    }

    #[test]
    fn registry_builds_everything() {
        assert!(matches!(build("butterfly"), Ok(GalleryObject::Retract(_))));
        assert!(matches!(build("ngon:6"), Ok(GalleryObject::Finite(_))));
        assert!(matches!(build("l-inf:3"), Ok(GalleryObject::Ambient(3))));
        assert!(matches!(build("random:5:42"), Ok(GalleryObject::Finite(_))));
        assert!(build("nope").is_err());
        assert!(build("ngon:x").is_err());
        assert_eq!(list().len(), 8);
    }
}
