//! Acceptance suite: one test per release criterion, every tolerance
//! pinned in code. Each test prints a `criterion N: PASS` line (visible
//! with `--nocapture`); the per-test pass/fail status is the gate.
//!
//! Run with `cargo test -p bicomb-cli --test acceptance`.

use bicomb_core::bicombing::{
    cats_cradle_fixed_point, conical_defect, convexify, convexity_defect,
    discrete_convexity_defect, discretize_geodesic, linear_bicombing, mutual_convexity_defect,
    retract_bicombing, straight_uniqueness_probe, straightness_defect, sup_dist, Bicombing,
    DiscretizedCurve, SampleSpec,
};
use bicomb_core::boundary::{
    cone_metric, cone_neighborhood_contains, cone_retraction, generalized_ray, radial_retraction,
    ray_from_basepoint, ray_to_boundary, ClosurePoint,
};
use bicomb_core::comb_dim::{
    comb_dim_exhaustive, dress_check, dress_witness, enumerate_involutions, flow_sup, DressWitness,
    FlowSup, WitnessError,
};
use bicomb_core::gallery;
use bicomb_core::metric::{pt, LinfPoint};
use bicomb_core::scalar::rat;
use bicomb_core::tight_span::{
    admissible_graph, edge, enumerate_faces, is_extremal, kuratowski_embed, MetricForm,
};
use bicomb_core::{Pt, Rat, RatSpace};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::{Duration, Instant};

fn budget(name: &str, elapsed: Duration, limit: Duration) {
    assert!(
        elapsed <= limit,
        "{name} took {elapsed:?}, over the {limit:?} budget"
    );
}

fn butterfly_bicombing() -> Bicombing {
    retract_bicombing(&gallery::butterfly(), &linear_bicombing(2))
}

/// Criterion 1: the butterfly retract bicombing reproduces its known
/// values exactly, is conical over 10^4 seeded samples at 1e-9, and has
/// convexity defect at least 1 with the bottom-corner witness.
#[test]
fn criterion_1_butterfly_reproduction() {
    let started = Instant::now();
    let sigma = butterfly_bicombing();
    let x = pt(&[-2.0, 1.0]);
    let y = pt(&[2.0, 1.0]);
    assert_eq!(sigma.eval_frac(&x, &y, 1, 4), pt(&[-1.0, 0.0]));
    assert_eq!(sigma.eval_frac(&x, &y, 1, 2), pt(&[0.0, 1.0]));
    assert_eq!(sigma.eval_frac(&x, &y, 3, 4), pt(&[1.0, 0.0]));

    let spec = SampleSpec::seeded(0xC1, 10_000);
    let conical = conical_defect(&sigma, &spec);
    assert!(conical.max_defect <= 1e-9, "{conical:?}");

    let z = pt(&[0.0, -1.0]);
    let probe = SampleSpec::seeded(0xC1, 0)
        .with_anchors(false)
        .with_explicit(vec![[x.clone(), y.clone(), z.clone(), z.clone()]]);
    let convex = convexity_defect(&sigma, &probe);
    assert!(convex.max_defect >= 1.0, "{convex:?}");
    let witness = convex.witness.expect("positive defect carries a witness");
    assert_eq!(witness.points[2], vec![0.0, -1.0]);

    budget("criterion 1", started.elapsed(), Duration::from_secs(1));
    println!(
        "criterion 1: PASS (conical {:.2e}, convex defect {})",
        conical.max_defect, convex.max_defect
    );
}

/// Criterion 2: four cascade levels on the butterfly reach 1/9-discrete
/// convexity at 1e-9 on the full grid, stay conical over 10^3 samples,
/// and every alternating iteration obeys the contraction inequality.
#[test]
fn criterion_2_convexification() {
    let started = Instant::now();
    let seed = butterfly_bicombing();
    let spec = SampleSpec::seeded(0xC2, 60);
    let run = convexify(&seed, 4, 1e-9, &spec).expect("cascade runs");
    let result = &run.result;
    assert_eq!(result.discrete_level, Some(9));

    let grid_spec = SampleSpec::seeded(0xC2 + 1, 300);
    let discrete = discrete_convexity_defect(result, 9, &grid_spec);
    assert!(discrete.max_defect <= 1e-9, "{discrete:?}");

    let conical_spec = SampleSpec::seeded(0xC2 + 2, 1_000);
    let conical = conical_defect(result, &conical_spec);
    assert!(conical.max_defect <= 1e-9, "{conical:?}");

    // Contraction along the alternating iteration at every level.
    let mut level = seed.clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC2 + 3);
    for _ in 0..3 {
        let n = level.discrete_level.expect("cascade levels carry grids");
        let selector = level.selector();
        for _ in 0..25 {
            let a = level.space.sample(&mut rng);
            let b = level.space.sample(&mut rng);
            let fp = cats_cradle_fixed_point(selector.as_ref(), &a, &b, n, 1e-12, 10_000)
                .expect("iteration converges");
            assert!(
                fp.contraction_violation <= 1e-12,
                "contraction violated by {} at grid {n}",
                fp.contraction_violation
            );
        }
        level = bicomb_core::bicombing::cats_cradle_step(&level, 1e-9, &spec).expect("step");
    }

    budget("criterion 2", started.elapsed(), Duration::from_secs(120));
    println!(
        "criterion 2: PASS (discrete {:.2e}, conical {:.2e})",
        discrete.max_defect, conical.max_defect
    );
}

/// Criterion 3: the cascade leaves the linear bicombing unchanged, up to
/// floating-point roundoff, on 10^3 sampled triples.
#[test]
fn criterion_3_linear_fixed_point() {
    let sigma = linear_bicombing(2);
    let mut level2 = sigma.clone();
    // The linear bicombing is convex at every grid.
    level2.discrete_level = Some(2);
    let run = convexify(&level2, 4, 1e-12, &SampleSpec::seeded(0xC3, 40)).expect("cascade");
    let probe = SampleSpec::seeded(0xC3 + 1, 1_000);
    let dist = bicomb_core::bicombing::cats_cradle::uniform_distance(&run.result, &sigma, &probe);
    assert!(dist <= 1e-12, "uniform distance {dist}");
    println!("criterion 3: PASS (uniform distance {dist:.2e})");
}

/// Criterion 4: for 50 seeded spaces with at most 5 points the face
/// enumeration agrees with the equality-pattern oracle, dimensions stay
/// below |X|/2, the canonical embedding is isometric, and the sup-norm
/// identity holds exactly for every representative.
#[test]
fn criterion_4_tight_span_exactness() {
    let started = Instant::now();
    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 4);
        let space = gallery::random_metric(n, 1_000 + seed);
        let complex = enumerate_faces(&space, 8).expect("within cap");
        let ours: Vec<(Vec<(usize, usize)>, usize)> = complex
            .faces
            .iter()
            .map(|f| (f.graph.edges().collect(), f.rank))
            .collect();
        let oracle: Vec<(Vec<(usize, usize)>, usize)> =
            bicomb_core::oracle::faces_by_equality_patterns(&space)
                .into_iter()
                .map(|(g, d)| (g.edges().collect(), d))
                .collect();
        let mut ours_sorted = ours.clone();
        ours_sorted.sort();
        let mut oracle_sorted = oracle.clone();
        oracle_sorted.sort();
        assert_eq!(ours_sorted, oracle_sorted, "seed {seed}");
        assert!(complex.dim <= n / 2);
        for x in 0..n {
            for y in 0..n {
                let ex = kuratowski_embed(&space, x);
                let ey = kuratowski_embed(&space, y);
                assert_eq!(ex.sup_distance(&ey), space.d(x, y));
            }
        }
        for face in &complex.faces {
            assert!(is_extremal(&face.representative, &space));
            for x in 0..n {
                let dx = kuratowski_embed(&space, x);
                assert_eq!(
                    face.representative.sup_distance(&dx),
                    *face.representative.get(x)
                );
            }
        }
    }
    budget("criterion 4", started.elapsed(), Duration::from_secs(60));
    println!("criterion 4: PASS (50 spaces, lattice + isometry exact)");
}

/// Criterion 5: on 100 seeded spaces with at most 7 points the matching
/// criterion at n = 1, 2 agrees with the exhaustive dimension in both
/// directions; the hexagon fails at n = 2 with the antipodal pairing and
/// trees pass at n = 1.
#[test]
fn criterion_5_dress_equivalence() {
    let started = Instant::now();
    let mut checked = 0usize;
    for seed in 0..100u64 {
        let space: RatSpace = if seed % 4 == 3 {
            gallery::random_tree(4 + (seed as usize % 4), 2_000 + seed).expect("tree")
        } else {
            gallery::random_metric(4 + (seed as usize % 4), 2_000 + seed)
        };
        let dim = comb_dim_exhaustive(&space, 8).expect("within cap");
        for n in 1..=2usize {
            let outcome = dress_check(&space, n).expect("within budget");
            assert_eq!(
                outcome.holds,
                dim <= n,
                "seed {seed}: dim {dim}, n {n}, violation {:?}",
                outcome.violation
            );
            checked += 1;
        }
        if seed % 4 == 3 {
            assert!(
                dress_check(&space, 1).expect("tree").holds,
                "tree seed {seed}"
            );
        }
    }
    let hex = gallery::ngon(6).expect("hexagon");
    let outcome = dress_check(&hex, 2).expect("hexagon fits the budget");
    assert!(!outcome.holds);
    let violation = outcome.violation.expect("violation reported");
    assert_eq!(violation.subset, vec![0, 1, 2, 3, 4, 5]);
    assert_eq!(violation.involution.pairs(), vec![(0, 3), (1, 4), (2, 5)]);
    budget("criterion 5", started.elapsed(), Duration::from_secs(300));
    println!("criterion 5: PASS ({checked} equivalence checks, zero discrepancies)");
}

/// Criterion 6: 50 seeded subset/pairing instances with |Z| in {4, 6}
/// yield certificates that re-verify exactly, and the zero-flow supremum
/// is 0 or infinite in every run.
#[test]
fn criterion_6_matching_certificates() {
    let started = Instant::now();
    let mut instances = 0usize;
    let mut strict = 0usize;
    let mut equality = 0usize;
    let mut violations = 0usize;
    let mut seed = 0u64;
    while instances < 50 {
        seed += 1;
        let space = gallery::random_metric(7, 3_000 + seed);
        let k = if seed % 2 == 0 { 4 } else { 6 };
        let subset: Vec<usize> = (0..k).collect();
        let sub = space.subspace(&subset).expect("subset");
        let involutions = enumerate_involutions(k);
        let pairing = involutions[(seed as usize) % involutions.len()].clone();
        instances += 1;
        // The zero-flow supremum is exactly 0 or unbounded.
        let zero = vec![Rat::zero(); k];
        match flow_sup(&sub, &pairing, &zero).expect("cone is nonempty") {
            FlowSup::Finite { value, .. } => assert!(value.is_zero()),
            FlowSup::Unbounded { ray } => assert!(ray.score(&sub) > Rat::zero()),
        }
        match dress_witness(&sub, &pairing) {
            Ok(DressWitness::Strict {
                j,
                matched_sum,
                witness_sum,
            }) => {
                strict += 1;
                let recomputed: Rat = (0..k)
                    .map(|z| sub.d(z, j[z]))
                    .fold(Rat::zero(), |a, b| a + b);
                assert_eq!(recomputed, witness_sum);
                assert!(witness_sum > matched_sum);
                assert_ne!(j.as_slice(), pairing.map());
            }
            Ok(DressWitness::Equality {
                f, j, matched_sum, ..
            }) => {
                equality += 1;
                let form = MetricForm::new(f);
                assert!(is_extremal(&form, &sub));
                let graph = admissible_graph(&form, &sub).expect("extremal");
                for (a, b) in pairing.pairs() {
                    assert!(graph.contains(edge(a, b)));
                }
                let recomputed: Rat = (0..k)
                    .map(|z| sub.d(z, j[z]))
                    .fold(Rat::zero(), |a, b| a + b);
                assert_eq!(recomputed, matched_sum);
                assert_ne!(j.as_slice(), pairing.map());
            }
            Err(WitnessError::NoWitness {
                matched_sum,
                best_rival,
            }) => {
                violations += 1;
                // Exhaustive oracle confirms the strict domination.
                let best =
                    bicomb_core::oracle::best_rival_matching_sum(&space, &subset, pairing.map())
                        .expect("rivals exist");
                assert_eq!(best, best_rival);
                assert!(best_rival < matched_sum);
            }
            Err(other) => panic!("internal failure on instance {seed}: {other}"),
        }
    }
    assert_eq!(instances, 50);
    assert!(strict > 0 && equality > 0);
    budget("criterion 6", started.elapsed(), Duration::from_secs(120));
    println!(
        "criterion 6: PASS (50 instances: {strict} strict, {equality} equality, {violations} violations)"
    );
}

/// Criterion 7: straightness diagnostics. The hinge curve of the convex
/// profile family is exactly straight; a bent sup-norm geodesic is caught
/// with a witness; the discretized bigon carries two straight curves that
/// stay 1/2 apart at the middle; and mutual distances of straight pairs in
/// 4-point tight spans are convex, with equal endpoints forcing equality.
#[test]
fn criterion_7_straightness() {
    let started = Instant::now();

    // Hinge curve on the 33-point grid, exact rational arithmetic.
    let cap = gallery::convex_cap_set(33, 16, 0xC7).expect("grid");
    let curve = DiscretizedCurve::new(
        cap.curve
            .iter()
            .map(|f| LinfPoint::new(f.values().to_vec()))
            .collect(),
    );
    let members: Vec<LinfPoint<Rat>> = cap
        .members
        .iter()
        .map(|f| LinfPoint::new(f.values().to_vec()))
        .collect();
    assert!(straightness_defect(&curve, &members).max_defect.is_zero());

    // A seeded non-linear sup-norm geodesic has a witnessed defect.
    let mut rng = ChaCha8Rng::seed_from_u64(0xC7);
    let apex: f64 = rng.gen_range(0.25..0.75);
    let bent = DiscretizedCurve::new(
        (0..=16)
            .map(|k| {
                let t = k as f64 / 16.0;
                let y = apex * if t <= 0.5 { 2.0 * t } else { 2.0 - 2.0 * t };
                pt(&[2.0 * t, y])
            })
            .collect(),
    );
    let mut grid_witnesses = Vec::new();
    for i in -4..=4 {
        for j in -4..=4 {
            grid_witnesses.push(pt(&[i as f64, j as f64]));
        }
    }
    let bent_report = straightness_defect(&bent, &grid_witnesses);
    assert!(bent_report.max_defect > 1e-3, "{bent_report:?}");
    assert!(bent_report.witness.is_some());

    // The discretized bigon: both boundary curves embed straight, yet they
    // disagree by exactly 1/2 at the midpoint.
    let m = 8usize;
    let bigon = gallery::bigon(m).expect("bigon");
    let e = |idx: usize| LinfPoint::new(kuratowski_embed(&bigon, idx).values().to_vec());
    let alpha = DiscretizedCurve::new((0..=m).map(e).collect());
    let beta_ids: Vec<usize> = std::iter::once(0)
        .chain((m + 1)..2 * m)
        .chain(std::iter::once(m))
        .collect();
    let beta = DiscretizedCurve::new(beta_ids.into_iter().map(e).collect());
    let witnesses: Vec<LinfPoint<Rat>> = (0..bigon.n_points()).map(e).collect();
    let a_report = straightness_defect(&alpha, &witnesses);
    let b_report = straightness_defect(&beta, &witnesses);
    assert!(a_report.max_defect.is_zero() && b_report.max_defect.is_zero());
    let mid = bicomb_core::metric::linf_distance(&alpha.points[m / 2], &beta.points[m / 2])
        .expect("same dimension");
    assert_eq!(mid, rat(1, 2));

    // Straight pairs in 4-point tight spans: mutual distances convex, and
    // identical endpoints force identical curves.
    let mut pairs_checked = 0usize;
    for seed in [11u64, 12, 15] {
        let space = gallery::random_metric(4, seed);
        let complex = enumerate_faces(&space, 8).expect("four points");
        let mut segment_points: Vec<Vec<Rat>> = complex
            .vertices
            .iter()
            .map(|v| v.values().to_vec())
            .collect();
        segment_points.extend(
            complex
                .faces
                .iter()
                .map(|f| f.representative.values().to_vec()),
        );
        let mut span_witnesses: Vec<LinfPoint<Rat>> = (0..4)
            .map(|x| LinfPoint::new(kuratowski_embed(&space, x).values().to_vec()))
            .collect();
        span_witnesses.extend(segment_points.iter().map(|v| LinfPoint::new(v.clone())));
        // Straight segments inside each cell: endpoints from the cell's own
        // corner/representative set.
        for face in complex.faces.iter().filter(|f| f.rank >= 1) {
            let corners: Vec<Vec<Rat>> = face
                .vertex_indices
                .iter()
                .map(|&i| complex.vertices[i].values().to_vec())
                .collect();
            let a = &corners[0];
            let b = face.representative.values();
            let c = corners.last().expect("cells have corners");
            let lerp = |p: &[Rat], q: &[Rat], j: i64| -> LinfPoint<Rat> {
                let t = rat(j, 8);
                LinfPoint::new(
                    p.iter()
                        .zip(q)
                        .map(|(x, y)| x.clone() + (y.clone() - x.clone()) * t.clone())
                        .collect(),
                )
            };
            let alpha = DiscretizedCurve::new((0..=8).map(|j| lerp(a, b, j)).collect());
            let beta = DiscretizedCurve::new((0..=8).map(|j| lerp(c, b, j)).collect());
            let probe = straight_uniqueness_probe(&alpha, &beta, &span_witnesses, &Rat::zero())
                .expect("segments are straight");
            assert!(probe.convexity_defect <= rat(1, 1_000_000_000));
            let again = DiscretizedCurve::new((0..=8).map(|j| lerp(a, b, j)).collect());
            let same = straight_uniqueness_probe(&alpha, &again, &span_witnesses, &Rat::zero())
                .expect("identical segments");
            assert!(same.same_endpoints);
            assert!(same.max_pointwise_distance.is_zero());
            pairs_checked += 1;
        }
    }
    assert!(pairs_checked >= 3);

    // Tree tight span: the retract bicombing geodesic coincides with the
    // exact branch-point polyline (unique straight segment).
    let tree = gallery::star_tree(3).expect("star");
    let rs = gallery::tight_span_retract_space(&tree, "star3");
    let sigma = retract_bicombing(&rs, &linear_bicombing(4));
    let treef = tree.to_f64();
    let e0 = Pt::new(kuratowski_embed(&treef, 0).values().to_vec());
    let e1 = Pt::new(kuratowski_embed(&treef, 1).values().to_vec());
    let center = Pt::new(kuratowski_embed(&treef, 3).values().to_vec());
    let polyline = DiscretizedCurve::new(
        (0..=8)
            .map(|j| {
                let t = j as f64 / 8.0;
                let (from, to, s) = if t <= 0.5 {
                    (&e0, &center, 2.0 * t)
                } else {
                    (&center, &e1, 2.0 * t - 1.0)
                };
                Pt::new(
                    from.coords
                        .iter()
                        .zip(&to.coords)
                        .map(|(x, y)| x + s * (y - x))
                        .collect(),
                )
            })
            .collect(),
    );
    let geodesic = discretize_geodesic(&sigma, &e0, &e1, 8);
    let witnesses_f: Vec<Pt> = rs.handle.anchors.clone();
    let probe = straight_uniqueness_probe(&polyline, &geodesic, &witnesses_f, &1e-9)
        .expect("both curves are straight in the tree span");
    assert!(probe.same_endpoints);
    assert!(probe.max_pointwise_distance <= 1e-9, "{probe:?}");
    assert!(probe.convexity_defect <= 1e-9);
    let _ = mutual_convexity_defect(&polyline, &geodesic).expect("same sampling");

    budget("criterion 7", started.elapsed(), Duration::from_secs(60));
    println!("criterion 7: PASS ({pairs_checked} straight pairs, bigon gap 1/2 exact)");
}

/// Criterion 8: boundary formulas. The retraction distance formula to
/// 1e-12 over 10^3 seeded configurations in dimensions up to 4, the sharp
/// retraction ratio at three epsilons, and the five estimate families over
/// 10^4 seeded configurations each with no violation above 1e-9.
#[test]
fn criterion_8_boundary_formulas() {
    let started = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(0xC8);
    let sample = |rng: &mut ChaCha8Rng, dim: usize| -> Pt {
        Pt::new((0..dim).map(|_| rng.gen_range(-4.0..4.0)).collect())
    };
    let direction = |rng: &mut ChaCha8Rng, dim: usize| -> Pt {
        loop {
            let p = sample(rng, dim);
            if p.coords.iter().any(|c| c.abs() > 1e-3) {
                return p;
            }
        }
    };
    let closure = |rng: &mut ChaCha8Rng, dim: usize| -> ClosurePoint {
        if rng.gen_bool(0.5) {
            ClosurePoint::interior(&sample(rng, dim))
        } else {
            ClosurePoint::boundary(&direction(rng, dim)).expect("nonzero")
        }
    };

    // D_o(x, phi_r(x)) = e^{-r} - e^{-R} to 1e-12.
    for case in 0..1_000 {
        let dim = 2 + case % 3;
        let o = sample(&mut rng, dim);
        let x = sample(&mut rng, dim);
        let big_r = sup_dist(&o, &x);
        if big_r < 1e-9 {
            continue;
        }
        let r = rng.gen_range(0.0..big_r);
        let y = radial_retraction(&o, r, &x).expect("radius ok");
        let d = cone_metric(&o, &ClosurePoint::interior(&x), &ClosurePoint::interior(&y))
            .expect("metric");
        let expected = (-r).exp() - (-big_r).exp();
        assert!(
            (d - expected).abs() <= 1e-12,
            "case {case}: {d} vs {expected}"
        );
    }

    // Sharpness of the factor 2 at epsilon = 1e-1, 1e-2, 1e-3.
    for eps in [1e-1, 1e-2, 1e-3] {
        let o = pt(&[0.0, 0.0]);
        let x = pt(&[1.0 + eps, 1.0 - eps]);
        let y = pt(&[1.0, 1.0]);
        let fx = radial_retraction(&o, 1.0, &x).expect("radius");
        let fy = radial_retraction(&o, 1.0, &y).expect("radius");
        let ratio = sup_dist(&fx, &fy) / sup_dist(&x, &y);
        assert!(
            (ratio - 2.0 / (1.0 + eps)).abs() <= 1e-12,
            "eps {eps}: {ratio}"
        );
    }

    const N: usize = 10_000;
    const TOL: f64 = 1e-9;

    // Radial retraction estimate.
    let mut done = 0;
    while done < N {
        let dim = 2 + done % 3;
        let o = sample(&mut rng, dim);
        let (mut x, mut y) = (sample(&mut rng, dim), sample(&mut rng, dim));
        if sup_dist(&o, &x) < sup_dist(&o, &y) {
            std::mem::swap(&mut x, &mut y);
        }
        let dox = sup_dist(&o, &x);
        let r = rng.gen_range(0.0..5.0);
        if dox <= r {
            continue;
        }
        let fx = radial_retraction(&o, r, &x).expect("radius");
        let fy = radial_retraction(&o, r, &y).expect("radius");
        assert!(sup_dist(&fx, &fy) <= (2.0 * r / dox) * sup_dist(&x, &y) + TOL);
        done += 1;
    }

    // Doubling of ray distances at earlier parameters.
    for case in 0..N {
        let dim = 2 + case % 3;
        let o = sample(&mut rng, dim);
        let x = closure(&mut rng, dim);
        let y = closure(&mut rng, dim);
        let t = rng.gen_range(0.2..8.0);
        let r = rng.gen_range(0.0..t);
        let rx = ray_from_basepoint(&o, &x).expect("ray");
        let ry = ray_from_basepoint(&o, &y).expect("ray");
        assert!(
            sup_dist(&rx.eval(r), &ry.eval(r)) <= 2.0 * sup_dist(&rx.eval(t), &ry.eval(t)) + TOL
        );
    }

    // Cone retraction inequalities, with the equality case.
    let o2 = pt(&[0.0, 0.0]);
    for _ in 0..N {
        let x = closure(&mut rng, 2);
        let y = closure(&mut rng, 2);
        let lam: f64 = rng.gen_range(0.0..1.0);
        let mu: f64 = rng.gen_range(0.0..1.0);
        let pl_x = cone_retraction(&o2, lam, &x).expect("lambda");
        let pl_y = cone_retraction(&o2, lam, &y).expect("lambda");
        let d = cone_metric(&o2, &x, &y).expect("metric");
        assert!(cone_metric(&o2, &pl_x, &pl_y).expect("metric") <= 2.0 * d + TOL);
        let pm_x = cone_retraction(&o2, mu, &x).expect("mu");
        let slide = cone_metric(&o2, &pl_x, &pm_x).expect("metric");
        assert!(slide <= (lam - mu).abs() + TOL);
        let dox = cone_metric(&o2, &ClosurePoint::interior(&o2), &x).expect("metric");
        if dox >= lam.max(mu) {
            assert!((slide - (lam - mu).abs()).abs() <= TOL);
        }
    }

    // Metric sandwich around the ray distance at one parameter.
    for _ in 0..N {
        let x = closure(&mut rng, 2);
        let y = closure(&mut rng, 2);
        let t = rng.gen_range(0.1..6.0);
        let rx = ray_from_basepoint(&o2, &x).expect("ray");
        let ry = ray_from_basepoint(&o2, &y).expect("ray");
        let a = sup_dist(&rx.eval(t), &ry.eval(t));
        let d = cone_metric(&o2, &x, &y).expect("metric");
        assert!(0.5 * a * (-t).exp() <= d + TOL);
        assert!(d <= 2.0 * a * (1.0 - (-t).exp()) + 2.0 * (t + 1.0) * (-t).exp() + TOL);
    }

    // Tail estimate for rays seen from another basepoint.
    let mut done = 0;
    while done < N {
        let dim = 2 + done % 3;
        let o = sample(&mut rng, dim);
        let p = sample(&mut rng, dim);
        let dop = sup_dist(&o, &p);
        if dop < 1e-6 {
            continue;
        }
        let xi = ray_to_boundary(&p, &direction(&mut rng, dim)).expect("ray");
        let t_cap = rng.gen_range(0.1..6.0);
        let big_t = 2.0 * dop + t_cap + rng.gen_range(0.0..4.0);
        let t = rng.gen_range(0.0..=(big_t - 2.0 * dop));
        let x = xi.eval(big_t + rng.gen_range(0.0..5.0));
        let y = xi.eval(big_t + rng.gen_range(0.0..5.0));
        let rx = generalized_ray(&o, &x).expect("ray");
        let ry = generalized_ray(&o, &y).expect("ray");
        assert!(sup_dist(&rx.eval(t), &ry.eval(t)) <= 2.0 * t * dop / (big_t - dop) + TOL);
        done += 1;
    }

    // Interior cone neighborhoods are open balls.
    for _ in 0..2_000 {
        let x = sample(&mut rng, 3);
        let y = sample(&mut rng, 3);
        let o = sample(&mut rng, 3);
        let eps = rng.gen_range(0.2..2.0);
        let t = sup_dist(&o, &x) + eps + rng.gen_range(0.0..2.0);
        let member = cone_neighborhood_contains(
            &o,
            &ClosurePoint::interior(&x),
            t,
            eps,
            &ClosurePoint::interior(&y),
        )
        .expect("cone");
        assert_eq!(member, sup_dist(&x, &y) < eps);
    }

    budget("criterion 8", started.elapsed(), Duration::from_secs(60));
    println!("criterion 8: PASS (formulas to 1e-12, estimates clean at 1e-9)");
}

/// Criterion 9: byte reproducibility of seeded CLI runs (wall time aside).
#[test]
fn criterion_9_cli_determinism() {
    let bin = env!("CARGO_BIN_EXE_bicomb");
    let dir = std::env::temp_dir().join("bicomb-acceptance");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let hex = dir.join("hexagon.json");
    let run = |args: &[&str]| -> (i32, String) {
        let out = std::process::Command::new(bin)
            .args(args)
            .output()
            .expect("binary runs");
        (
            out.status.code().unwrap_or(-1),
            String::from_utf8(out.stdout).expect("utf-8 stdout"),
        )
    };
    let (code, _) = run(&["gallery", "emit", "ngon:6", "-o", hex.to_str().unwrap()]);
    assert_eq!(code, 0);
    let hex_path = hex.to_str().unwrap();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["gallery", "list"],
        vec!["gallery", "emit", "ngon:6"],
        vec!["validate", hex_path],
        vec!["tight-span", hex_path, "--faces"],
        vec!["comb-dim", hex_path, "--n", "2"],
        vec!["comb-dim", hex_path, "--exhaustive"],
        vec![
            "dress-witness",
            hex_path,
            "--z",
            "0,1,2,3",
            "--i",
            "0-1,2-3",
        ],
        vec![
            "bicombing",
            "check",
            "--space",
            "butterfly",
            "--axiom",
            "conical",
            "--samples",
            "300",
            "--rng-seed",
            "7",
        ],
        vec![
            "bicombing",
            "build",
            "--space",
            "butterfly",
            "--levels",
            "3",
            "--samples",
            "40",
            "--rng-seed",
            "11",
        ],
        vec![
            "boundary", "dist", "--space", "l-inf:2", "--o", "0,0", "--x", "3,1", "--y", "dir:1,0",
        ],
        vec![
            "boundary",
            "check",
            "--lemma",
            "psi",
            "--samples",
            "300",
            "--rng-seed",
            "3",
        ],
    ];
    let strip_wall_time = |text: &str| -> String {
        text.lines()
            .filter(|line| !line.contains("wall_time_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    for args in &invocations {
        let (code1, out1) = run(args);
        let (code2, out2) = run(args);
        assert_eq!(code1, code2, "{args:?}");
        assert_eq!(
            strip_wall_time(&out1),
            strip_wall_time(&out2),
            "non-deterministic output for {args:?}"
        );
        assert!(!out1.is_empty());
    }
    println!(
        "criterion 9: PASS ({} invocations byte-stable)",
        invocations.len()
    );
}
