//! Brute-force reference algorithms.
//!
//! These recompute results of the main algorithms along independent routes
//! and exist purely for cross-validation: the face oracle solves every
//! equality pattern directly instead of walking the polyhedron, and the
//! matching oracle enumerates all fixed-point-free bijections.

use crate::comb_dim::for_each_fixed_point_free_bijection;
use crate::metric::FiniteMetricSpace;
use crate::scalar::Scalar;
use crate::simplex::{solve, Constraint, Outcome, Program, Rel};
use crate::tight_span::{AdmissibleGraph, Edge};

/// All admissible equality patterns of `Delta(X)` with their dimensions,
/// found by trying every subset of pairs-and-loops: a pattern is a face of
/// the tight span iff it covers every point, its equality system is
/// feasible inside `Delta(X)`, and some solution is strict off the pattern.
///
/// Exponential in `|X| (|X| + 1) / 2`; meant for `|X| <= 5`.
pub fn faces_by_equality_patterns<S: Scalar>(
    space: &FiniteMetricSpace<S>,
) -> Vec<(AdmissibleGraph, usize)> {
    let n = space.n_points();
    let mut edges: Vec<Edge> = Vec::new();
    for i in 0..n {
        for j in i..n {
            edges.push((i, j));
        }
    }
    let m = edges.len();
    assert!(m <= 20, "oracle is exponential; keep |X| small");
    let mut point_bits = vec![0u32; n];
    for (b, &(i, j)) in edges.iter().enumerate() {
        point_bits[i] |= 1 << b;
        point_bits[j] |= 1 << b;
    }
    let scaled = scaled_integer_matrix(space);
    let mut out = Vec::new();
    for pattern in 1u32..(1 << m) {
        if point_bits.iter().any(|pb| pattern & pb == 0) {
            continue; // an uncovered point means an unbounded face
        }
        let chosen: Vec<Edge> = (0..m)
            .filter(|b| pattern & (1 << b) != 0)
            .map(|b| edges[b])
            .collect();
        // Cheap exact rejection in machine integers when the distances
        // scale; the parametrization below re-checks exactly either way.
        if let Some(mat) = &scaled {
            if !integer_system_consistent(mat, &chosen) {
                continue;
            }
        }
        if let Some(dim) = pattern_dimension(space, &edges, pattern, &chosen) {
            out.push((AdmissibleGraph::new(n, chosen), dim));
        }
    }
    out.sort_by(|a, b| {
        a.1.cmp(&b.1).then_with(|| {
            a.0.edges()
                .collect::<Vec<_>>()
                .cmp(&b.0.edges().collect::<Vec<_>>())
        })
    });
    out
}

/// Feasibility + strictness over the component parametrization. The
/// propagation writes every solution of the equality system as
/// `f(v) = offset_v + sign_v * t_{comp(v)}` with one parameter per
/// component (fixed by loops or odd cycles). The pattern is admissible iff
/// the off-pattern constraints admit a common strict slack, an exact LP
/// over the few free parameters; the face dimension is the number of free
/// parameters.
fn pattern_dimension<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    edges: &[Edge],
    pattern: u32,
    chosen: &[Edge],
) -> Option<usize> {
    let param = parametrize(space, chosen)?;
    let free: Vec<usize> = (0..param.fixed.len())
        .filter(|&c| param.fixed[c].is_none())
        .collect();
    let free_index = |comp: usize| free.iter().position(|&c| c == comp);
    let dim = free.len();
    // Value of f_v split into (constant, coefficient per free parameter).
    let value_of = |v: usize| -> (S, Vec<(usize, S)>) {
        let comp = param.component[v];
        let sign = S::from_int(param.sign[v] as i64);
        match &param.fixed[comp] {
            Some(t) => (param.offset[v].clone() + sign * t.clone(), Vec::new()),
            None => (
                param.offset[v].clone(),
                vec![(free_index(comp).expect("free component"), sign)],
            ),
        }
    };
    // LP variables: t_c = p_c - m_c per free component, then eps.
    let nv = 2 * dim + 1;
    let eps_col = nv - 1;
    let mut constraints = Vec::new();
    for (b, &(i, j)) in edges.iter().enumerate() {
        if pattern & (1 << b) != 0 {
            continue;
        }
        let mut coeffs = vec![S::zero(); nv];
        let (mut constant, mut terms) = value_of(i);
        if i != j {
            let (c2, t2) = value_of(j);
            constant = constant + c2;
            terms.extend(t2);
        }
        for (f, sg) in terms {
            coeffs[2 * f] = coeffs[2 * f].clone() + sg.clone();
            coeffs[2 * f + 1] = coeffs[2 * f + 1].clone() - sg;
        }
        coeffs[eps_col] = -S::one();
        let rhs = space.d(i, j) - constant;
        if coeffs[..eps_col].iter().all(|c| c.is_zero()) {
            // Constant off-pattern constraint: must be strictly slack.
            if rhs >= S::zero() {
                return None;
            }
            continue;
        }
        constraints.push(Constraint {
            coeffs,
            rel: Rel::Ge,
            rhs,
        });
    }
    if constraints.is_empty() {
        return Some(dim);
    }
    let mut cap = vec![S::zero(); nv];
    cap[eps_col] = S::one();
    constraints.push(Constraint {
        coeffs: cap,
        rel: Rel::Le,
        rhs: S::one(),
    });
    let mut objective = vec![S::zero(); nv];
    objective[eps_col] = S::one();
    match solve(&Program {
        maximize: objective,
        constraints,
    }) {
        Outcome::Optimal { value, .. } if value > S::zero() => Some(dim),
        Outcome::Optimal { .. } => None,
        Outcome::Infeasible => None,
        Outcome::Unbounded { .. } => unreachable!("eps is capped"),
    }
}

/// The alternating-sign parametrization of the equality system, or `None`
/// when it is inconsistent. Offsets propagate as `f(v) = d - f(u)` along
/// edges; closing edges with matching signs and loops fix the component
/// parameter.
struct Parametrization<S> {
    sign: Vec<i8>,
    offset: Vec<S>,
    component: Vec<usize>,
    fixed: Vec<Option<S>>,
}

fn parametrize<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    chosen: &[Edge],
) -> Option<Parametrization<S>> {
    let n = space.n_points();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(i, j)) in chosen.iter().enumerate() {
        if i != j {
            adj[i].push(e);
            adj[j].push(e);
        }
    }
    let mut sign = vec![0i8; n];
    let mut offset = vec![S::zero(); n];
    let mut component = vec![usize::MAX; n];
    let mut fixed: Vec<Option<S>> = Vec::new();
    for root in 0..n {
        if component[root] != usize::MAX {
            continue;
        }
        let comp = fixed.len();
        fixed.push(None);
        sign[root] = 1;
        component[root] = comp;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            let (su, ou) = (sign[u], offset[u].clone());
            for &e in &adj[u] {
                let (a, b) = chosen[e];
                let v = if a == u { b } else { a };
                let d = space.d(a, b);
                if component[v] == usize::MAX {
                    sign[v] = -su;
                    offset[v] = d - ou.clone();
                    component[v] = comp;
                    stack.push(v);
                } else {
                    let rhs = d - ou.clone() - offset[v].clone();
                    if su + sign[v] == 0 {
                        if !rhs.is_zero() {
                            return None;
                        }
                    } else {
                        let t = rhs / S::from_int((su + sign[v]) as i64);
                        match &fixed[comp] {
                            None => fixed[comp] = Some(t),
                            Some(existing) => {
                                if *existing != t {
                                    return None;
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for &(i, j) in chosen {
        if i == j {
            let t = -offset[i].clone() / S::from_int(sign[i] as i64);
            let comp = component[i];
            match &fixed[comp] {
                None => fixed[comp] = Some(t),
                Some(existing) => {
                    if *existing != t {
                        return None;
                    }
                }
            }
        }
    }
    Some(Parametrization {
        sign,
        offset,
        component,
        fixed,
    })
}

/// A common-denominator integer rescaling of the distance matrix, when the
/// numbers are small enough for machine integers. Consistency of the
/// equality systems is invariant under the scaling.
fn scaled_integer_matrix<S: Scalar>(space: &FiniteMetricSpace<S>) -> Option<Vec<Vec<i64>>> {
    use num_traits::ToPrimitive;
    let n = space.n_points();
    let any = space.at(0, 0);
    // Only the exact rational instantiation benefits; other scalars fall
    // back to the generic propagation.
    let as_rat = |v: &S| -> Option<crate::Rat> {
        let s = format!("{v}");
        s.parse::<crate::Rat>().ok()
    };
    as_rat(any)?;
    let mut denominators: Vec<num_bigint::BigInt> = Vec::new();
    let mut rats = vec![vec![crate::Rat::from_integer(0.into()); n]; n];
    for i in 0..n {
        for j in 0..n {
            let r = as_rat(space.at(i, j))?;
            denominators.push(r.denom().clone());
            rats[i][j] = r;
        }
    }
    let lcm = denominators
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, d| {
            num_integer::lcm(acc, d.clone())
        });
    let lcm_small = lcm.to_i64().filter(|v| *v <= 1_000_000)?;
    let mut out = vec![vec![0i64; n]; n];
    for i in 0..n {
        for j in 0..n {
            let scaled = rats[i][j].clone() * crate::Rat::from_integer(lcm_small.into());
            let v = scaled.to_integer().to_i64()?;
            if v.abs() > 1_000_000_000 {
                return None;
            }
            out[i][j] = v;
        }
    }
    Some(out)
}

/// Machine-integer twin of the parametrization used as a pre-filter:
/// offsets live in scaled units and the component parameter is tracked
/// doubled, so halves never appear.
fn integer_system_consistent(dist: &[Vec<i64>], chosen: &[Edge]) -> bool {
    let n = dist.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (e, &(i, j)) in chosen.iter().enumerate() {
        if i != j {
            adj[i].push(e);
            adj[j].push(e);
        }
    }
    let mut assign: Vec<Option<(i64, i64)>> = vec![None; n]; // (sign, offset)
    let mut component = vec![usize::MAX; n];
    let mut doubled_t: Vec<Option<i64>> = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    for root in 0..n {
        if assign[root].is_some() {
            continue;
        }
        let comp = doubled_t.len();
        doubled_t.push(None);
        assign[root] = Some((1, 0));
        component[root] = comp;
        stack.clear();
        stack.push(root);
        while let Some(u) = stack.pop() {
            let (su, ou) = assign[u].expect("assigned before push");
            for &e in &adj[u] {
                let (a, b) = chosen[e];
                let v = if a == u { b } else { a };
                let d = dist[a][b];
                match assign[v] {
                    None => {
                        assign[v] = Some((-su, d - ou));
                        component[v] = comp;
                        stack.push(v);
                    }
                    Some((sv, ov)) => {
                        let rhs = d - ou - ov;
                        if su + sv == 0 {
                            if rhs != 0 {
                                return false;
                            }
                        } else {
                            // (su + sv) t = rhs with su + sv = +-2.
                            let t2 = if su + sv == 2 { rhs } else { -rhs };
                            match doubled_t[comp] {
                                None => doubled_t[comp] = Some(t2),
                                Some(existing) => {
                                    if existing != t2 {
                                        return false;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    for &(i, j) in chosen {
        if i == j {
            let (s, o) = assign[i].expect("all vertices visited");
            let t2 = -2 * o * s;
            let comp = component[i];
            match doubled_t[comp] {
                None => doubled_t[comp] = Some(t2),
                Some(existing) => {
                    if existing != t2 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Tight span dimension recomputed from the equality-pattern sweep.
pub fn tight_span_dim_by_patterns<S: Scalar>(space: &FiniteMetricSpace<S>) -> usize {
    faces_by_equality_patterns(space)
        .into_iter()
        .map(|(_, dim)| dim)
        .max()
        .unwrap_or(0)
}

/// Largest matching sum `sum_z d(z, j(z))` over fixed-point-free bijections
/// `j != exclude`, by full enumeration.
pub fn best_rival_matching_sum<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    subset: &[usize],
    exclude: &[usize],
) -> Option<S> {
    let k = subset.len();
    let mut best: Option<S> = None;
    for_each_fixed_point_free_bijection(k, |image| {
        if image == exclude {
            return;
        }
        let mut sum = S::zero();
        for (z, &img) in image.iter().enumerate() {
            sum = sum + space.d(subset[z], subset[img]);
        }
        if best.as_ref().map(|b| sum > *b).unwrap_or(true) {
            best = Some(sum);
        }
    });
    best
}
