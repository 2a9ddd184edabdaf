//! Combinatorial dimension: the `2(n+1)`-point matching criterion and its
//! constructive certificates.
//!
//! The dimension of a metric space here is the supremum of the tight span
//! dimensions of its finite subspaces. It is at most `n` exactly when for
//! every `2(n+1)`-point subset `Z` and every fixed-point-free involution
//! `i` on `Z` there is a fixed-point-free bijection `j != i` with
//!
//! ```text
//! sum_z d(z, i(z)) <= sum_z d(z, j(z)).
//! ```
//!
//! [`dress_check`] tests the inequality by enumeration, and
//! [`comb_dim_exhaustive`] computes the dimension from tight spans, so the
//! equivalence can be validated with two independent routes. For a single
//! `(Z, i)`, [`dress_witness`] produces the certificate behind the
//! inequality constructively, via exact linear programming over the flow
//! cone `W(h)`: flows on pairs of `Z` that are nonpositive on the matched
//! pairs, nonnegative elsewhere, with prescribed vertex sums `h`.

use crate::metric::FiniteMetricSpace;
use crate::scalar::{smax, Scalar};
use crate::simplex::{solve, Constraint, Outcome, Program, Rel};
use crate::tight_span::{
    admissible_graph, edge, is_extremal, tight_span_dim, AdmissibleGraph, MetricForm,
};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CombDimError {
    #[error("combinatorial budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("invalid pairing: {0}")]
    BadPairing(String),
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

// ---------------------------------------------------------------------------
// Involutions and enumeration helpers
// ---------------------------------------------------------------------------

/// A fixed-point-free involution on `0..len`, i.e. a perfect matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Involution {
    map: Vec<usize>,
}

impl Involution {
    pub fn from_map(map: Vec<usize>) -> Result<Self, CombDimError> {
        let n = map.len();
        if n == 0 || n % 2 != 0 {
            return Err(CombDimError::BadPairing(format!(
                "domain size {n} is not even and positive"
            )));
        }
        for (z, &img) in map.iter().enumerate() {
            if img >= n {
                return Err(CombDimError::BadPairing(format!(
                    "image {img} out of range"
                )));
            }
            if img == z {
                return Err(CombDimError::BadPairing(format!("fixed point at {z}")));
            }
            if map[img] != z {
                return Err(CombDimError::BadPairing(format!(
                    "not an involution at {z} -> {img}"
                )));
            }
        }
        Ok(Self { map })
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self, CombDimError> {
        let mut map = vec![usize::MAX; n];
        for &(a, b) in pairs {
            if a >= n || b >= n {
                return Err(CombDimError::BadPairing(format!(
                    "pair ({a}, {b}) out of range"
                )));
            }
            if map[a] != usize::MAX || map[b] != usize::MAX {
                return Err(CombDimError::BadPairing(format!(
                    "point reused in ({a}, {b})"
                )));
            }
            map[a] = b;
            map[b] = a;
        }
        if map.contains(&usize::MAX) {
            return Err(CombDimError::BadPairing(
                "pairs do not cover the set".into(),
            ));
        }
        Self::from_map(map)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn apply(&self, z: usize) -> usize {
        self.map[z]
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// The matched pairs, each with the smaller index first, sorted.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .filter(|&z| z < self.map[z])
            .map(|z| (z, self.map[z]))
            .collect()
    }
}

/// All fixed-point-free involutions of `0..n`, lexicographic in their pair
/// lists (the smallest unmatched point is paired with every candidate in
/// increasing order).
pub fn enumerate_involutions(n: usize) -> Vec<Involution> {
    fn rec(map: &mut Vec<usize>, out: &mut Vec<Involution>) {
        let Some(z) = map.iter().position(|&v| v == usize::MAX) else {
            out.push(Involution { map: map.clone() });
            return;
        };
        for w in (z + 1)..map.len() {
            if map[w] == usize::MAX {
                map[z] = w;
                map[w] = z;
                rec(map, out);
                map[z] = usize::MAX;
                map[w] = usize::MAX;
            }
        }
    }
    if n == 0 || n % 2 != 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(&mut vec![usize::MAX; n], &mut out);
    out
}

/// Visits all fixed-point-free bijections of `0..n` in lexicographic order.
pub fn for_each_fixed_point_free_bijection(n: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(
        pos: usize,
        n: usize,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut impl FnMut(&[usize]),
    ) {
        if pos == n {
            visit(image);
            return;
        }
        for v in 0..n {
            if v != pos && !used[v] {
                used[v] = true;
                image[pos] = v;
                rec(pos + 1, n, image, used, visit);
                used[v] = false;
            }
        }
    }
    rec(
        0,
        n,
        &mut vec![usize::MAX; n],
        &mut vec![false; n],
        &mut visit,
    );
}

/// Visits all `k`-subsets of `0..n` in lexicographic order.
pub fn for_each_subset(n: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    fn rec(
        start: usize,
        n: usize,
        k: usize,
        cur: &mut Vec<usize>,
        visit: &mut impl FnMut(&[usize]) -> bool,
        stop: &mut bool,
    ) {
        if *stop {
            return;
        }
        if cur.len() == k {
            if !visit(cur) {
                *stop = true;
            }
            return;
        }
        let remaining = k - cur.len();
        for v in start..=(n - remaining) {
            cur.push(v);
            rec(v + 1, n, k, cur, visit, stop);
            cur.pop();
            if *stop {
                return;
            }
        }
    }
    if k == 0 || k > n {
        return;
    }
    let mut stop = false;
    rec(0, n, k, &mut Vec::with_capacity(k), &mut visit, &mut stop);
}

fn pairing_sum<S: Scalar>(space: &FiniteMetricSpace<S>, image: &[usize]) -> S {
    let mut sum = S::zero();
    for (z, &img) in image.iter().enumerate() {
        sum = sum + space.d(z, img);
    }
    sum
}

// ---------------------------------------------------------------------------
// The matching criterion
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug)]
pub struct DressBudget {
    pub max_points: usize,
    pub max_n: usize,
}

impl Default for DressBudget {
    fn default() -> Self {
        Self {
            max_points: 12,
            max_n: 3,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DressViolation<S> {
    /// Indices into the ambient space.
    pub subset: Vec<usize>,
    /// The dominating involution, on local indices of `subset`.
    pub involution: Involution,
    pub matched_sum: S,
    /// Largest sum over fixed-point-free bijections distinct from the
    /// involution; strictly smaller on a violation.
    pub best_rival: S,
}

#[derive(Clone, Debug, Serialize)]
pub struct DressOutcome<S> {
    pub holds: bool,
    pub violation: Option<DressViolation<S>>,
}

/// Checks the `2(n+1)`-point inequality for every subset and pairing, in
/// lexicographic order, reporting the first violation. Subsets smaller than
/// the space make the check vacuous.
pub fn dress_check<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    n: usize,
) -> Result<DressOutcome<S>, CombDimError> {
    dress_check_with_budget(space, n, &DressBudget::default())
}

pub fn dress_check_with_budget<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    n: usize,
    budget: &DressBudget,
) -> Result<DressOutcome<S>, CombDimError> {
    if n < 1 {
        return Err(CombDimError::BadParameter(
            "the criterion needs n >= 1".into(),
        ));
    }
    if n > budget.max_n || space.n_points() > budget.max_points {
        return Err(CombDimError::BudgetExceeded(format!(
            "|X| = {}, n = {} beyond ({}, {})",
            space.n_points(),
            n,
            budget.max_points,
            budget.max_n
        )));
    }
    let k = 2 * (n + 1);
    if space.n_points() < k {
        return Ok(DressOutcome {
            holds: true,
            violation: None,
        });
    }
    let involutions = enumerate_involutions(k);
    let mut violation: Option<DressViolation<S>> = None;
    for_each_subset(space.n_points(), k, |subset| {
        let sub = space.subspace(subset).expect("valid subset");
        // One enumeration of all fixed-point-free bijections gives the
        // maximum sum and its multiplicity; an involution is dominating
        // exactly when it is the unique maximizer.
        let mut max1: Option<S> = None;
        let mut count1 = 0usize;
        let mut max2: Option<S> = None;
        for_each_fixed_point_free_bijection(k, |image| {
            let sum = pairing_sum(&sub, image);
            match &max1 {
                None => {
                    max1 = Some(sum);
                    count1 = 1;
                }
                Some(best) => {
                    if sum > *best {
                        max2 = max1.take();
                        max1 = Some(sum);
                        count1 = 1;
                    } else if sum == *best {
                        count1 += 1;
                    } else if max2.as_ref().map(|m| sum > *m).unwrap_or(true) {
                        max2 = Some(sum);
                    }
                }
            }
        });
        let max1 = max1.expect("at least one fixed-point-free bijection");
        if count1 == 1 {
            for inv in &involutions {
                let sum = pairing_sum(&sub, inv.map());
                if sum == max1 {
                    violation = Some(DressViolation {
                        subset: subset.to_vec(),
                        involution: inv.clone(),
                        matched_sum: sum,
                        best_rival: max2.clone().expect("k >= 4 gives rivals"),
                    });
                    return false;
                }
            }
        }
        true
    });
    Ok(DressOutcome {
        holds: violation.is_none(),
        violation,
    })
}

/// Exact combinatorial dimension of a finite space: the maximum tight span
/// dimension over all nonempty subsets.
pub fn comb_dim_exhaustive<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    cap: usize,
) -> Result<usize, CombDimError> {
    let n = space.n_points();
    if n > cap {
        return Err(CombDimError::BudgetExceeded(format!(
            "|X| = {n} beyond the cap {cap}"
        )));
    }
    let mut best = 0usize;
    for size in 1..=n {
        for_each_subset(n, size, |subset| {
            let sub = space.subspace(subset).expect("valid subset");
            let dim = tight_span_dim(&sub, size).expect("within cap");
            best = best.max(dim);
            true
        });
    }
    Ok(best)
}

/// Largest candidate `delta` such that
/// `d(x0,y0) + d(x,y) <= d(x,y0) + d(x0,y)` for all `x` within `delta` of
/// `x0` and `y` within `delta` of `y0`. `x0 = y0` passes every candidate by
/// the triangle inequality.
pub fn local_quadrilateral_delta<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    x0: usize,
    y0: usize,
    candidates: &[S],
) -> Result<Option<S>, CombDimError> {
    let n = space.n_points();
    if x0 >= n || y0 >= n {
        return Err(CombDimError::BadParameter("base point out of range".into()));
    }
    let mut sorted: Vec<&S> = candidates.iter().collect();
    sorted.sort_by(|a, b| b.partial_cmp(a).expect("comparable"));
    'cand: for delta in sorted {
        for x in 0..n {
            if space.d(x0, x) > *delta {
                continue;
            }
            for y in 0..n {
                if space.d(y0, y) > *delta {
                    continue;
                }
                let lhs = space.d(x0, y0) + space.d(x, y);
                let rhs = space.d(x, y0) + space.d(x0, y);
                if lhs > rhs {
                    continue 'cand;
                }
            }
        }
        return Ok(Some(delta.clone()));
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Flows on pairs: the certificate machinery
// ---------------------------------------------------------------------------

/// A weight on every 2-element subset of `0..n`.
#[derive(Clone, Debug, PartialEq)]
pub struct FlowVector<S> {
    n: usize,
    values: Vec<S>,
}

fn pair_id(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn all_pairs(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in (i + 1)..n {
            out.push((i, j));
        }
    }
    out
}

impl<S: Scalar> FlowVector<S> {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            values: vec![S::zero(); n * (n - 1) / 2],
        }
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize) -> &S {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        &self.values[pair_id(self.n, i, j)]
    }

    pub fn set(&mut self, a: usize, b: usize, v: S) {
        let (i, j) = if a < b { (a, b) } else { (b, a) };
        self.values[pair_id(self.n, i, j)] = v;
    }

    /// Pairs carrying a nonzero weight, lexicographic.
    pub fn support(&self) -> Vec<(usize, usize)> {
        all_pairs(self.n)
            .into_iter()
            .filter(|&(i, j)| !self.get(i, j).is_zero())
            .collect()
    }

    pub fn vertex_sum(&self, z: usize) -> S {
        let mut sum = S::zero();
        for w in 0..self.n {
            if w != z {
                sum = sum + self.get(z, w).clone();
            }
        }
        sum
    }

    /// `sum_e w(e) d(e)`.
    pub fn score(&self, space: &FiniteMetricSpace<S>) -> S {
        let mut sum = S::zero();
        for (i, j) in all_pairs(self.n) {
            sum = sum + self.get(i, j).clone() * space.d(i, j);
        }
        sum
    }
}

/// Supremum of the score over the flow cone `W(h)`.
#[derive(Clone, Debug)]
pub enum FlowSup<S> {
    Finite {
        value: S,
        flow: FlowVector<S>,
    },
    /// The supremum is infinite; `ray` lies in `W(0)` with positive score.
    Unbounded {
        ray: FlowVector<S>,
    },
}

/// Exact LP over `W(h)`: weights nonpositive on the matched pairs of
/// `pairing`, nonnegative elsewhere, with `sum_{z'} w({z, z'}) = h(z)`,
/// maximizing the score. The cone is never empty.
pub fn flow_sup<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    pairing: &Involution,
    h: &[S],
) -> Result<FlowSup<S>, CombDimError> {
    flow_sup_supported(space, pairing, h, None)
}

fn flow_sup_supported<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    pairing: &Involution,
    h: &[S],
    allowed: Option<&[(usize, usize)]>,
) -> Result<FlowSup<S>, CombDimError> {
    let k = space.n_points();
    if pairing.len() != k || h.len() != k {
        return Err(CombDimError::BadParameter(
            "pairing and h must live on the space".into(),
        ));
    }
    let pairs: Vec<(usize, usize)> = match allowed {
        Some(list) => list.to_vec(),
        None => all_pairs(k),
    };
    // Variable per pair: u_e >= 0 encodes w_e = sign_e u_e, where the sign
    // is negative exactly on matched pairs.
    let sign = |i: usize, j: usize| -> S {
        if pairing.apply(i) == j {
            -S::one()
        } else {
            S::one()
        }
    };
    let mut constraints = Vec::with_capacity(k);
    for z in 0..k {
        let mut coeffs = vec![S::zero(); pairs.len()];
        for (e, &(i, j)) in pairs.iter().enumerate() {
            if i == z || j == z {
                coeffs[e] = sign(i, j);
            }
        }
        constraints.push(Constraint {
            coeffs,
            rel: Rel::Eq,
            rhs: h[z].clone(),
        });
    }
    let maximize: Vec<S> = pairs
        .iter()
        .map(|&(i, j)| sign(i, j) * space.d(i, j))
        .collect();
    let to_flow = |x: &[S]| {
        let mut w = FlowVector::zero(k);
        for (e, &(i, j)) in pairs.iter().enumerate() {
            w.set(i, j, sign(i, j) * x[e].clone());
        }
        w
    };
    match solve(&Program {
        maximize,
        constraints,
    }) {
        Outcome::Optimal { x, value } => Ok(FlowSup::Finite {
            value,
            flow: to_flow(&x),
        }),
        Outcome::Unbounded { ray } => {
            let w = to_flow(&ray);
            debug_assert!((0..k).all(|z| w.vertex_sum(z).is_zero()));
            debug_assert!(w.score(space) > S::zero());
            Ok(FlowSup::Unbounded { ray: w })
        }
        Outcome::Infeasible => Err(CombDimError::Internal(
            "the flow cone W(h) is never empty".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Witness construction
// ---------------------------------------------------------------------------

/// Certificate that a pairing satisfies the matching inequality.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum DressWitness<S> {
    /// A fixed-point-free bijection with strictly larger sum.
    Strict {
        j: Vec<usize>,
        matched_sum: S,
        witness_sum: S,
    },
    /// An extremal form whose equality graph contains the matching,
    /// together with a fixed-point-free bijection of equal sum (an
    /// involution whenever the alternate-cycle construction applies).
    Equality {
        f: Vec<S>,
        j: Vec<usize>,
        involution: bool,
        matched_sum: S,
    },
}

#[derive(Debug, Error)]
pub enum WitnessError<S: Scalar> {
    /// The pairing strictly dominates every other fixed-point-free
    /// bijection; verified by exhaustive enumeration before returning.
    #[error("no witness exists: matched sum {matched_sum} strictly beats every rival (best {best_rival})")]
    NoWitness { matched_sum: S, best_rival: S },
    #[error("invalid input: {0}")]
    Bad(String),
    /// A constructed certificate failed its arithmetic re-verification;
    /// this signals a bug, never a property of the input.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

fn verify_bijection(map: &[usize]) -> Result<(), String> {
    let n = map.len();
    let mut seen = vec![false; n];
    for (z, &img) in map.iter().enumerate() {
        if img >= n || img == z {
            return Err(format!("not fixed point free at {z}"));
        }
        if seen[img] {
            return Err(format!("not injective at image {img}"));
        }
        seen[img] = true;
    }
    Ok(())
}

/// Constructs the matching-inequality certificate for `(Z, i)`, where
/// `space` is the metric on `Z` and `pairing` the involution.
///
/// When the flow cone `W(0)` supports positive score, a minimal-support
/// positive flow yields an alternating cycle and a strictly better
/// bijection. Otherwise an extremal form with the matching in its equality
/// graph is built from the flow values, a maximal-rank relative-interior
/// form is computed over the face it spans, and an alternate cycle in that
/// equality graph produces an equal-sum involution. If no witness exists
/// the error says so, verified by exhaustive enumeration.
pub fn dress_witness<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    pairing: &Involution,
) -> Result<DressWitness<S>, WitnessError<S>> {
    let k = space.n_points();
    if pairing.len() != k {
        return Err(WitnessError::Bad(format!(
            "pairing acts on {} points, space has {k}",
            pairing.len()
        )));
    }
    if k < 4 {
        return Err(WitnessError::Bad("need at least four points".into()));
    }
    let matched_sum = pairing_sum(space, pairing.map());
    let zero_h = vec![S::zero(); k];
    let sup0 =
        flow_sup(space, pairing, &zero_h).map_err(|e| WitnessError::Internal(e.to_string()))?;
    match sup0 {
        FlowSup::Unbounded { ray } => {
            let minimal = minimize_support(space, pairing, ray)?;
            let cycle = strict_cycle(&minimal, pairing)?;
            let mut j = pairing.map().to_vec();
            let l = cycle.len();
            for idx in 0..l {
                j[pairing.apply(cycle[idx])] = cycle[(idx + 1) % l];
            }
            verify_bijection(&j).map_err(WitnessError::Internal)?;
            if j == pairing.map() {
                return Err(WitnessError::Internal(
                    "strict witness equals the pairing".into(),
                ));
            }
            let witness_sum = pairing_sum(space, &j);
            if witness_sum <= matched_sum {
                return Err(WitnessError::Internal(format!(
                    "strict witness sum {witness_sum} not above {matched_sum}"
                )));
            }
            Ok(DressWitness::Strict {
                j,
                matched_sum,
                witness_sum,
            })
        }
        FlowSup::Finite { value, .. } => {
            if !value.is_zero() {
                return Err(WitnessError::Internal(format!(
                    "supremum over W(0) must be 0 or infinite, got {value}"
                )));
            }
            equality_branch(space, pairing, matched_sum)
        }
    }
}

/// Shrinks the support of a positive flow in `W(0)` until no single pair
/// can be dropped, which makes the support an alternating-cycle union.
fn minimize_support<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    pairing: &Involution,
    mut flow: FlowVector<S>,
) -> Result<FlowVector<S>, WitnessError<S>> {
    let zero_h = vec![S::zero(); space.n_points()];
    'outer: loop {
        let support = flow.support();
        for drop in &support {
            let allowed: Vec<(usize, usize)> =
                support.iter().copied().filter(|e| e != drop).collect();
            match flow_sup_supported(space, pairing, &zero_h, Some(&allowed))
                .map_err(|e| WitnessError::Internal(e.to_string()))?
            {
                FlowSup::Unbounded { ray } => {
                    flow = ray;
                    continue 'outer;
                }
                FlowSup::Finite { value, .. } => {
                    if !value.is_zero() {
                        return Err(WitnessError::Internal(
                            "restricted flow cone produced a finite positive supremum".into(),
                        ));
                    }
                }
            }
        }
        return Ok(flow);
    }
}

/// Extracts the alternating cycle `z_0, .., z_l` from a minimal-support
/// positive flow: matched pairs carry negative weight, and each step
/// follows a positive pair out of the partner.
fn strict_cycle<S: Scalar>(
    flow: &FlowVector<S>,
    pairing: &Involution,
) -> Result<Vec<usize>, WitnessError<S>> {
    let k = flow.n_points();
    let negative: Vec<usize> = (0..k)
        .filter(|&z| *flow.get(z, pairing.apply(z)) < S::zero())
        .collect();
    let start = *negative.first().ok_or_else(|| {
        WitnessError::Internal("positive flow without negative matched pair".into())
    })?;
    let step = |z: usize| -> Option<usize> {
        let partner = pairing.apply(z);
        (0..k).find(|&w| {
            w != partner
                && w != z
                && *flow.get(partner, w) > S::zero()
                && *flow.get(w, pairing.apply(w)) < S::zero()
        })
    };
    let mut order: Vec<usize> = vec![start];
    let mut position = vec![usize::MAX; k];
    position[start] = 0;
    loop {
        let cur = *order.last().expect("nonempty walk");
        let next = step(cur)
            .ok_or_else(|| WitnessError::Internal(format!("no outgoing positive pair at {cur}")))?;
        if position[next] != usize::MAX {
            let cycle = order[position[next]..].to_vec();
            if cycle.len() < 2 {
                return Err(WitnessError::Internal(
                    "degenerate alternating cycle".into(),
                ));
            }
            return Ok(cycle);
        }
        position[next] = order.len();
        order.push(next);
    }
}

fn equality_branch<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    pairing: &Involution,
    matched_sum: S,
) -> Result<DressWitness<S>, WitnessError<S>> {
    let k = space.n_points();
    let internal = |msg: String| WitnessError::Internal(msg);
    // Half-differences nu(z) = (sup W(delta_z) - sup W(-delta_z)) / 2; both
    // sides are finite when the zero cone has no positive score.
    let mut nu = Vec::with_capacity(k);
    for z in 0..k {
        let mut plus = vec![S::zero(); k];
        plus[z] = S::one();
        let up = match flow_sup(space, pairing, &plus).map_err(|e| internal(e.to_string()))? {
            FlowSup::Finite { value, .. } => value,
            FlowSup::Unbounded { .. } => {
                return Err(internal(
                    "finite cone branch saw an unbounded direction".into(),
                ))
            }
        };
        let mut minus = vec![S::zero(); k];
        minus[z] = -S::one();
        let down = match flow_sup(space, pairing, &minus).map_err(|e| internal(e.to_string()))? {
            FlowSup::Finite { value, .. } => value,
            FlowSup::Unbounded { .. } => {
                return Err(internal(
                    "finite cone branch saw an unbounded direction".into(),
                ))
            }
        };
        nu.push((up - down).half());
    }
    // Assemble f pairwise: on a matched pair {x, y} set
    // f(x) = max(nu_x, d - nu_y), f(y) = d - f(x).
    let mut values = vec![S::zero(); k];
    for (x, y) in pairing.pairs() {
        let d = space.d(x, y);
        if nu[x].clone() + nu[y].clone() > d {
            return Err(internal(format!(
                "half-differences exceed the matched distance on ({x}, {y})"
            )));
        }
        let fx = smax(nu[x].clone(), d.clone() - nu[y].clone());
        let fy = d - fx.clone();
        values[x] = fx;
        values[y] = fy;
    }
    let f = MetricForm::new(values);
    for z in 0..k {
        if f.get(z) < &nu[z] {
            return Err(internal(format!("certificate form drops below nu at {z}")));
        }
    }
    if !is_extremal(&f, space) {
        return Err(internal("certificate form is not extremal".into()));
    }
    let graph_f = admissible_graph(&f, space).map_err(|e| internal(e.to_string()))?;
    for (x, y) in pairing.pairs() {
        if !graph_f.contains(edge(x, y)) {
            return Err(internal(format!(
                "matched pair ({x}, {y}) missing from the graph"
            )));
        }
    }
    // Maximal-rank relative-interior form over the face cut out by the
    // matched equalities.
    let g = relative_interior_form(space, pairing)?;
    let graph = admissible_graph(&g, space).map_err(|e| internal(e.to_string()))?;
    for (x, y) in pairing.pairs() {
        if !graph.contains(edge(x, y)) {
            return Err(internal("relative interior lost a matched equality".into()));
        }
    }
    if let Some(cycle) = find_swap_cycle(&graph, pairing) {
        let mut j = pairing.map().to_vec();
        let l = cycle.len();
        for idx in 0..l {
            let a = pairing.apply(cycle[idx]);
            let b = cycle[(idx + 1) % l];
            j[a] = b;
            j[b] = a;
        }
        verify_bijection(&j).map_err(WitnessError::Internal)?;
        let is_involution = (0..k).all(|z| j[j[z]] == z);
        if !is_involution || j == pairing.map() {
            return Err(internal("swap construction failed its shape checks".into()));
        }
        let sum = pairing_sum(space, &j);
        if sum != matched_sum {
            return Err(internal(format!(
                "swap witness sum {sum} differs from {matched_sum}"
            )));
        }
        return Ok(DressWitness::Equality {
            f: f.values().to_vec(),
            j,
            involution: true,
            matched_sum,
        });
    }
    // No alternating cycle: fall back to exhaustive search, which either
    // finds an equal-sum bijection or proves the violation. Involutions are
    // preferred when both exist.
    let mut equal_any: Option<Vec<usize>> = None;
    let mut equal_involution: Option<Vec<usize>> = None;
    let mut best_rival: Option<S> = None;
    for_each_fixed_point_free_bijection(k, |image| {
        if image == pairing.map() {
            return;
        }
        let sum = pairing_sum(space, image);
        if best_rival.as_ref().map(|b| sum > *b).unwrap_or(true) {
            best_rival = Some(sum.clone());
        }
        if sum == matched_sum {
            if equal_any.is_none() {
                equal_any = Some(image.to_vec());
            }
            if equal_involution.is_none() && (0..k).all(|z| image[image[z]] == z) {
                equal_involution = Some(image.to_vec());
            }
        }
    });
    let best_rival = best_rival.expect("k >= 4 has rivals");
    if best_rival > matched_sum {
        return Err(internal(
            "a strictly better bijection exists although W(0) had no positive ray".into(),
        ));
    }
    match equal_involution.or(equal_any) {
        Some(j) => {
            let is_involution = (0..k).all(|z| j[j[z]] == z);
            Ok(DressWitness::Equality {
                f: f.values().to_vec(),
                j,
                involution: is_involution,
                matched_sum,
            })
        }
        None => Err(WitnessError::NoWitness {
            matched_sum,
            best_rival,
        }),
    }
}

/// A form in the relative interior of
/// `{ g in Delta(Z) : matched pairs tight }`: tighten nothing that some
/// point of the face leaves slack. Each slack is probed by one exact LP and
/// the argmax points are averaged.
fn relative_interior_form<S: Scalar>(
    space: &FiniteMetricSpace<S>,
    pairing: &Involution,
) -> Result<MetricForm<S>, WitnessError<S>> {
    let k = space.n_points();
    let base_constraints = |extra: Option<&[S]>| -> Program<S> {
        let mut constraints = Vec::new();
        for i in 0..k {
            for j in (i + 1)..k {
                let mut coeffs = vec![S::zero(); k];
                coeffs[i] = S::one();
                coeffs[j] = S::one();
                constraints.push(Constraint {
                    coeffs,
                    rel: if pairing.apply(i) == j {
                        Rel::Eq
                    } else {
                        Rel::Ge
                    },
                    rhs: space.d(i, j),
                });
            }
        }
        Program {
            maximize: extra
                .map(|c| c.to_vec())
                .unwrap_or_else(|| vec![S::zero(); k]),
            constraints,
        }
    };
    let mut witnesses: Vec<Vec<S>> = Vec::new();
    // Loop slacks: keep every coordinate positive where possible.
    for z in 0..k {
        let mut objective = vec![S::zero(); k];
        objective[z] = S::one();
        match solve(&base_constraints(Some(&objective))) {
            Outcome::Optimal { x, value } => {
                if value > S::zero() {
                    witnesses.push(x);
                }
            }
            other => {
                return Err(WitnessError::Internal(format!(
                    "loop slack probe failed: {other:?}"
                )))
            }
        }
    }
    // Pair slacks off the matching.
    for i in 0..k {
        for j in (i + 1)..k {
            if pairing.apply(i) == j {
                continue;
            }
            let mut objective = vec![S::zero(); k];
            objective[i] = S::one();
            objective[j] = S::one();
            match solve(&base_constraints(Some(&objective))) {
                Outcome::Optimal { x, value } => {
                    if value > space.d(i, j) {
                        witnesses.push(x);
                    }
                }
                other => {
                    return Err(WitnessError::Internal(format!(
                        "pair slack probe failed: {other:?}"
                    )))
                }
            }
        }
    }
    if witnesses.is_empty() {
        // The face is a single point: recover it from the matched equalities
        // via any feasible solution (all slack probes were tight).
        match solve(&base_constraints(None)) {
            Outcome::Optimal { x, .. } => witnesses.push(x),
            other => {
                return Err(WitnessError::Internal(format!(
                    "feasibility probe failed: {other:?}"
                )))
            }
        }
    }
    let count = S::from_int(witnesses.len() as i64);
    let mut avg = vec![S::zero(); k];
    for w in &witnesses {
        for (a, v) in avg.iter_mut().zip(w) {
            *a = a.clone() + v.clone();
        }
    }
    for a in avg.iter_mut() {
        *a = a.clone() / count.clone();
    }
    Ok(MetricForm::new(avg))
}

/// Looks for `z_0, .., z_l` with pairwise disjoint matched pairs and
/// `{partner(z_idx), z_{idx+1}}` an edge of `graph` cyclically; such a
/// cycle swaps into an equal-sum involution.
fn find_swap_cycle(graph: &AdmissibleGraph, pairing: &Involution) -> Option<Vec<usize>> {
    let k = pairing.len();
    fn dfs(
        graph: &AdmissibleGraph,
        pairing: &Involution,
        start: usize,
        path: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        let cur = *path.last().expect("nonempty path");
        let from = pairing.apply(cur);
        // Close the cycle when long enough.
        if path.len() >= 2 && from != start && graph.contains(edge(from, start)) {
            return true;
        }
        for next in 0..pairing.len() {
            if used[next] || next == from {
                continue;
            }
            if !graph.contains(edge(from, next)) {
                continue;
            }
            path.push(next);
            used[next] = true;
            used[pairing.apply(next)] = true;
            if dfs(graph, pairing, start, path, used) {
                return true;
            }
            used[pairing.apply(next)] = false;
            used[next] = false;
            path.pop();
        }
        false
    }
    for start in 0..k {
        let mut path = vec![start];
        let mut used = vec![false; k];
        used[start] = true;
        used[pairing.apply(start)] = true;
        if dfs(graph, pairing, start, &mut path, &mut used) {
            return Some(path);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;
    use crate::Rat;
    use num_traits::Zero;

    fn zeros(k: usize) -> Vec<Rat> {
        vec![Rat::zero(); k]
    }

    #[test]
    fn involution_helpers() {
        let inv = Involution::from_pairs(4, &[(0, 2), (1, 3)]).unwrap();
        assert_eq!(inv.apply(0), 2);
        assert_eq!(inv.pairs(), vec![(0, 2), (1, 3)]);
        assert!(Involution::from_map(vec![0, 1]).is_err());
        assert!(Involution::from_map(vec![1, 0, 2, 3]).is_err());
        assert_eq!(enumerate_involutions(4).len(), 3);
        assert_eq!(enumerate_involutions(6).len(), 15);
    }

    #[test]
    fn tree_passes_level_one() {
        let tree = crate::gallery::star_tree(3).unwrap();
        let outcome = dress_check(&tree, 1).unwrap();
        assert!(outcome.holds);
        // Equivalent to the four-point condition.
        assert!(tree.max_four_point_defect() <= Rat::zero());
    }

    #[test]
    fn hexagon_fails_level_two_with_antipodal_pairing() {
        let hex = crate::gallery::ngon(6).unwrap();
        let outcome = dress_check(&hex, 2).unwrap();
        assert!(!outcome.holds);
        let v = outcome.violation.unwrap();
        assert_eq!(v.subset, vec![0, 1, 2, 3, 4, 5]);
        assert_eq!(v.involution.pairs(), vec![(0, 3), (1, 4), (2, 5)]);
        assert_eq!(v.matched_sum, rat(18, 1));
        assert!(v.best_rival < rat(18, 1));
        // But the hexagon satisfies level three vacuously (too few points).
        assert!(dress_check(&hex, 3).unwrap().holds);
    }

    #[test]
    fn equal_distances_hold_trivially() {
        let k = 4;
        let dist = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| if i == j { Rat::zero() } else { rat(1, 1) })
                    .collect()
            })
            .collect();
        let space = crate::validate_metric(dist, None).unwrap();
        assert!(dress_check(&space, 1).unwrap().holds);
    }

    #[test]
    fn exhaustive_dimension_examples() {
        let two = crate::gallery::ngon(2).unwrap();
        assert_eq!(comb_dim_exhaustive(&two, 8).unwrap(), 1);
        let hex = crate::gallery::ngon(6).unwrap();
        assert_eq!(comb_dim_exhaustive(&hex, 8).unwrap(), 3);
        for seed in 0..4 {
            let tree = crate::gallery::random_tree(6, seed).unwrap();
            assert_eq!(comb_dim_exhaustive(&tree, 8).unwrap(), 1);
        }
        let big = crate::gallery::random_metric(9, 1);
        assert!(comb_dim_exhaustive(&big, 8).is_err());
    }

    fn square_sides_pairing() -> (crate::RatSpace, Involution) {
        // Corners of a square with side 2 and diagonal 4 (taxicab style):
        // pairing along the short sides.
        let two = rat(2, 1);
        let four = rat(4, 1);
        let z = Rat::zero();
        let dist = vec![
            vec![z.clone(), two.clone(), four.clone(), two.clone()],
            vec![two.clone(), z.clone(), two.clone(), four.clone()],
            vec![four.clone(), two.clone(), z.clone(), two.clone()],
            vec![two.clone(), four.clone(), two.clone(), z.clone()],
        ];
        let space = crate::validate_metric(dist, None).unwrap();
        let pairing = Involution::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        (space, pairing)
    }

    #[test]
    fn flow_sup_examples() {
        // Tree with the tree-compatible pairing: zero cone tops out at 0.
        let tree = crate::gallery::star_tree(3).unwrap();
        let sub = tree.subspace(&[0, 1, 2, 3]).unwrap();
        let pairing = Involution::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        match flow_sup(&sub, &pairing, &zeros(4)).unwrap() {
            FlowSup::Finite { value, .. } => assert!(value.is_zero()),
            other => panic!("unexpected {other:?}"),
        }
        // Square with the short-side pairing: unbounded, diagonal swaps win.
        let (square, sides) = square_sides_pairing();
        match flow_sup(&square, &sides, &zeros(4)).unwrap() {
            FlowSup::Unbounded { ray } => {
                assert!(ray.score(&square) > Rat::zero());
                for z in 0..4 {
                    assert!(ray.vertex_sum(z).is_zero());
                }
            }
            other => panic!("unexpected {other:?}"),
        }
        // Point masses always have nonnegative supremum.
        for z in 0..4 {
            let mut h = zeros(4);
            h[z] = rat(1, 1);
            match flow_sup(&square, &sides, &h).unwrap() {
                FlowSup::Finite { value, .. } => assert!(value >= Rat::zero()),
                FlowSup::Unbounded { .. } => {}
            }
        }
    }

    #[test]
    fn strict_witness_on_the_square() {
        let (square, sides) = square_sides_pairing();
        match dress_witness(&square, &sides).unwrap() {
            DressWitness::Strict {
                j,
                matched_sum,
                witness_sum,
            } => {
                assert_eq!(matched_sum, rat(8, 1));
                assert!(witness_sum > matched_sum);
                // Oracle: the best rival over all bijections.
                let best =
                    crate::oracle::best_rival_matching_sum(&square, &[0, 1, 2, 3], sides.map())
                        .unwrap();
                assert!(witness_sum <= best);
                verify_bijection(&j).unwrap();
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equality_witness_on_a_tree_cherry() {
        // Star with three unit edges; the cherry pairing (two leaves
        // together, third leaf with the center) ties every rival, so the
        // zero cone is bounded and the equal-sum swap exists.
        let path = crate::gallery::star_tree(3).unwrap();
        let pairing = Involution::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        match dress_witness(&path, &pairing).unwrap() {
            DressWitness::Equality {
                f,
                j,
                involution,
                matched_sum,
            } => {
                assert!(involution);
                assert_eq!(matched_sum, pairing_sum(&path, &j));
                let form = MetricForm::new(f);
                assert!(is_extremal(&form, &path));
                let graph = admissible_graph(&form, &path).unwrap();
                assert!(graph.contains(edge(0, 1)));
                assert!(graph.contains(edge(2, 3)));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn equal_distance_space_gets_equality_witness() {
        let dist = (0..4)
            .map(|i| {
                (0..4)
                    .map(|j| if i == j { Rat::zero() } else { rat(1, 1) })
                    .collect()
            })
            .collect();
        let space = crate::validate_metric(dist, None).unwrap();
        let pairing = Involution::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        match dress_witness(&space, &pairing).unwrap() {
            DressWitness::Equality { involution, .. } => assert!(involution),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn violating_pairing_is_reported_with_proof() {
        let hex = crate::gallery::ngon(6).unwrap();
        let antipodal = Involution::from_pairs(6, &[(0, 3), (1, 4), (2, 5)]).unwrap();
        match dress_witness(&hex, &antipodal) {
            Err(WitnessError::NoWitness {
                matched_sum,
                best_rival,
            }) => {
                assert_eq!(matched_sum, rat(18, 1));
                assert!(best_rival < matched_sum);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn quadrilateral_delta_examples() {
        let hex = crate::gallery::ngon(6).unwrap();
        let candidates = [rat(1, 4), rat(1, 2), rat(3, 4), rat(1, 1), rat(2, 1)];
        // Same base point: everything passes.
        assert_eq!(
            local_quadrilateral_delta(&hex, 2, 2, &candidates).unwrap(),
            Some(rat(2, 1))
        );
        // Antipodal base points on the hexagon: radius 1 already fails.
        assert_eq!(
            local_quadrilateral_delta(&hex, 0, 3, &candidates).unwrap(),
            Some(rat(3, 4))
        );
        // Two-point space: small radii pass vacuously.
        let two = crate::gallery::ngon(2).unwrap();
        assert_eq!(
            local_quadrilateral_delta(&two, 0, 1, &[rat(1, 2)]).unwrap(),
            Some(rat(1, 2))
        );
    }

    #[test]
    fn flow_superadditivity_on_finite_instances() {
        let star = crate::gallery::star_tree(3).unwrap();
        let pairing = Involution::from_pairs(4, &[(0, 1), (2, 3)]).unwrap();
        let value = |h: &[Rat]| match flow_sup(&star, &pairing, h).unwrap() {
            FlowSup::Finite { value, .. } => value,
            FlowSup::Unbounded { .. } => panic!("finite instance"),
        };
        let hs = [
            vec![rat(1, 1), Rat::zero(), Rat::zero(), Rat::zero()],
            vec![Rat::zero(), rat(1, 2), rat(-1, 2), Rat::zero()],
            vec![rat(-1, 1), rat(1, 1), Rat::zero(), Rat::zero()],
        ];
        for a in &hs {
            for b in &hs {
                let sum: Vec<Rat> = a
                    .iter()
                    .zip(b)
                    .map(|(x, y)| x.clone() + y.clone())
                    .collect();
                assert!(value(a) + value(b) <= value(&sum));
            }
        }
    }
}
