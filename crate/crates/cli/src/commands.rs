//! One function per subcommand; each returns the results JSON plus the
//! failure flag that drives the exit code.

use crate::report::CommandOutcome;
use anyhow::{anyhow, bail, Context};
use bicomb_core::bicombing::{
    conical_defect, consistency_defect, convexify, convexity_defect, discrete_convexity_defect,
    geodesic_defect, linear_bicombing, retract_bicombing, reversibility_defect, Bicombing,
    DefectReport, SampleSpec,
};
use bicomb_core::boundary::{
    cone_metric, cone_neighborhood_contains, cone_retraction, distance_profile, generalized_ray,
    radial_retraction, ray_from_basepoint, ray_to_boundary, ClosurePoint,
};
use bicomb_core::comb_dim::{
    comb_dim_exhaustive, dress_check, dress_witness as witness_fn, DressWitness, Involution,
    WitnessError,
};
use bicomb_core::gallery::{self, GalleryObject};
use bicomb_core::metric::{parse_space_matrix, space_to_json, validate_metric, MetricViolation};
use bicomb_core::tight_span::enumerate_faces;
use bicomb_core::{Pt, Rat, RatSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

fn read_space(path: &str) -> anyhow::Result<(RatSpace, Vec<u8>)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {path}"))?;
    let text = String::from_utf8(bytes.clone()).context("space file is not UTF-8")?;
    let space = bicomb_core::metric::space_from_json(&text).map_err(|e| anyhow!("{path}: {e}"))?;
    Ok((space, bytes))
}

fn rat_str(v: &Rat) -> String {
    v.to_string()
}

fn violation_json(v: &MetricViolation<Rat>) -> Value {
    match v {
        MetricViolation::NonSquare { rows, row, row_len } => {
            json!({"kind": "non_square", "rows": rows, "row": row, "row_len": row_len})
        }
        MetricViolation::Asymmetric { i, j } => json!({"kind": "asymmetric", "i": i, "j": j}),
        MetricViolation::NonzeroDiagonal { i } => json!({"kind": "nonzero_diagonal", "i": i}),
        MetricViolation::NonPositive { i, j } => json!({"kind": "non_positive", "i": i, "j": j}),
        MetricViolation::Triangle { i, via, k, defect } => json!({
            "kind": "triangle", "i": i, "via": via, "k": k, "defect": rat_str(defect)
        }),
    }
}

pub fn validate(path: &str) -> anyhow::Result<CommandOutcome> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {path}"))?;
    let text = String::from_utf8(bytes.clone()).context("space file is not UTF-8")?;
    let (dist, labels) = parse_space_matrix(&text).map_err(|e| anyhow!("{path}: {e}"))?;
    let results = match validate_metric(dist, labels) {
        Ok(space) => json!({"valid": true, "points": space.n_points()}),
        Err(violations) => json!({
            "valid": false,
            "violations": violations.iter().map(violation_json).collect::<Vec<_>>(),
        }),
    };
    let failed = !results["valid"].as_bool().unwrap_or(false);
    Ok(CommandOutcome::ok(results)
        .with_digest(&bytes)
        .failing_if(failed))
}

pub fn tight_span(
    path: &str,
    faces: bool,
    _dim: bool,
    cap: usize,
) -> anyhow::Result<CommandOutcome> {
    let (space, bytes) = read_space(path)?;
    let complex = enumerate_faces(&space, cap).map_err(|e| anyhow!("{e}"))?;
    let mut results = json!({"dim": complex.dim, "n_faces": complex.faces.len()});
    if faces {
        let list: Vec<Value> = complex
            .faces
            .iter()
            .map(|f| {
                json!({
                    "edges": f.graph.edges().map(|(a, b)| vec![a, b]).collect::<Vec<_>>(),
                    "rank": f.rank,
                    "rep": f.representative.values().iter().map(rat_str).collect::<Vec<_>>(),
                    "vertices": f.vertex_indices,
                })
            })
            .collect();
        results["faces"] = Value::Array(list);
        results["vertex_forms"] = Value::Array(
            complex
                .vertices
                .iter()
                .map(|v| {
                    Value::Array(
                        v.values()
                            .iter()
                            .map(|x| Value::String(rat_str(x)))
                            .collect(),
                    )
                })
                .collect(),
        );
    }
    Ok(CommandOutcome::ok(results).with_digest(&bytes))
}

pub fn comb_dim(
    path: &str,
    n: usize,
    exhaustive: bool,
    cap: usize,
) -> anyhow::Result<CommandOutcome> {
    let (space, bytes) = read_space(path)?;
    if exhaustive {
        let dim = comb_dim_exhaustive(&space, cap).map_err(|e| anyhow!("{e}"))?;
        return Ok(CommandOutcome::ok(json!({"comb_dim": dim})).with_digest(&bytes));
    }
    let outcome = dress_check(&space, n).map_err(|e| anyhow!("{e}"))?;
    let results = match &outcome.violation {
        None => json!({"n": n, "holds": true}),
        Some(v) => json!({
            "n": n,
            "holds": false,
            "violation": {
                "subset": v.subset,
                "pairing": v.involution.pairs().iter().map(|&(a, b)| vec![a, b]).collect::<Vec<_>>(),
                "matched_sum": rat_str(&v.matched_sum),
                "best_rival": rat_str(&v.best_rival),
            }
        }),
    };
    Ok(CommandOutcome::ok(results)
        .with_digest(&bytes)
        .failing_if(!outcome.holds))
}

pub fn dress_witness(path: &str, z: &str, i: &str) -> anyhow::Result<CommandOutcome> {
    let (space, bytes) = read_space(path)?;
    let subset: Vec<usize> = z
        .split(',')
        .map(|s| s.trim().parse::<usize>().context("subset index"))
        .collect::<Result<_, _>>()?;
    let local = |abs: usize| -> anyhow::Result<usize> {
        subset
            .iter()
            .position(|&v| v == abs)
            .ok_or_else(|| anyhow!("pairing point {abs} is not in the subset"))
    };
    let mut pairs = Vec::new();
    for part in i.split(',') {
        let (a, b) = part
            .trim()
            .split_once('-')
            .ok_or_else(|| anyhow!("pairing entries look like `a-b`"))?;
        pairs.push((local(a.trim().parse()?)?, local(b.trim().parse()?)?));
    }
    let pairing = Involution::from_pairs(subset.len(), &pairs).map_err(|e| anyhow!("{e}"))?;
    let sub = space.subspace(&subset).map_err(|e| anyhow!("{e}"))?;
    let results = match witness_fn(&sub, &pairing) {
        Ok(DressWitness::Strict {
            j,
            matched_sum,
            witness_sum,
        }) => json!({
            "variant": "strict",
            "j": j,
            "matched_sum": rat_str(&matched_sum),
            "witness_sum": rat_str(&witness_sum),
        }),
        Ok(DressWitness::Equality {
            f,
            j,
            involution,
            matched_sum,
        }) => json!({
            "variant": "equality",
            "f": f.iter().map(rat_str).collect::<Vec<_>>(),
            "j": j,
            "involution": involution,
            "matched_sum": rat_str(&matched_sum),
        }),
        Err(WitnessError::NoWitness {
            matched_sum,
            best_rival,
        }) => {
            let results = json!({
                "variant": "violation",
                "matched_sum": rat_str(&matched_sum),
                "best_rival": rat_str(&best_rival),
            });
            return Ok(CommandOutcome::ok(results)
                .with_digest(&bytes)
                .failing_if(true));
        }
        Err(other) => bail!("{other}"),
    };
    Ok(CommandOutcome::ok(results).with_digest(&bytes))
}

// ---------------------------------------------------------------------------
// Bicombings
// ---------------------------------------------------------------------------

enum ResolvedSpace {
    Ambient(usize),
    Retract(bicomb_core::bicombing::RetractSpace),
}

fn resolve_space(spec: &str) -> anyhow::Result<(ResolvedSpace, Vec<u8>)> {
    if std::path::Path::new(spec).exists() || spec.ends_with(".json") {
        let (space, bytes) = read_space(spec)?;
        let name = std::path::Path::new(spec)
            .file_stem()
            .and_then(|s| s.to_str())
            .unwrap_or("space");
        return Ok((
            ResolvedSpace::Retract(gallery::tight_span_retract_space(&space, name)),
            bytes,
        ));
    }
    let object = gallery::build(spec).map_err(|e| anyhow!("{e}"))?;
    let resolved = match object {
        GalleryObject::Ambient(dim) => ResolvedSpace::Ambient(dim),
        GalleryObject::Retract(rs) => ResolvedSpace::Retract(rs),
        GalleryObject::Finite(space) => {
            ResolvedSpace::Retract(gallery::tight_span_retract_space(&space, spec))
        }
    };
    Ok((resolved, spec.as_bytes().to_vec()))
}

fn build_seed(resolved: &ResolvedSpace, kind: &str) -> anyhow::Result<Bicombing> {
    match (resolved, kind) {
        (ResolvedSpace::Ambient(dim), "linear") => Ok(linear_bicombing(*dim)),
        (ResolvedSpace::Retract(rs), "retract") => {
            Ok(retract_bicombing(rs, &linear_bicombing(rs.handle.dim)))
        }
        (ResolvedSpace::Ambient(_), other) => {
            bail!("ambient spaces take --seed-bicombing linear, not {other:?}")
        }
        (ResolvedSpace::Retract(_), other) => {
            bail!("retract spaces take --seed-bicombing retract, not {other:?}")
        }
    }
}

fn defect_json(report: &DefectReport) -> Value {
    serde_json::to_value(report).expect("defect report serializes")
}

pub fn bicombing_build(
    space: &str,
    seed_kind: &str,
    levels: u32,
    tol: f64,
    samples: usize,
    rng_seed: u64,
) -> anyhow::Result<CommandOutcome> {
    let (resolved, digest) = resolve_space(space)?;
    let seed = build_seed(&resolved, seed_kind)?;
    let spec = SampleSpec::seeded(rng_seed, samples);
    let run = convexify(&seed, levels.max(1), tol, &spec).map_err(|e| anyhow!("{e}"))?;
    let results = json!({
        "space": seed.space.name,
        "provenance": run.result.provenance.describe(),
        "discrete_level": run.result.discrete_level,
        "levels": run.levels.iter().map(|l| json!({
            "n": l.n,
            "discrete_defect": l.discrete_defect,
            "conical_defect": l.conical_defect,
            "uniform_distance_to_previous": l.uniform_distance_to_previous,
        })).collect::<Vec<_>>(),
    });
    Ok(CommandOutcome::ok(results)
        .with_digest(&digest)
        .with_seed(rng_seed))
}

pub fn bicombing_check(
    space: &str,
    seed_kind: &str,
    levels: u32,
    axiom: &str,
    tol: f64,
    samples: usize,
    rng_seed: u64,
) -> anyhow::Result<CommandOutcome> {
    let (resolved, digest) = resolve_space(space)?;
    let seed = build_seed(&resolved, seed_kind)?;
    let spec = SampleSpec::seeded(rng_seed, samples);
    let sigma = if levels > 1 {
        convexify(&seed, levels, tol, &spec)
            .map_err(|e| anyhow!("{e}"))?
            .result
    } else {
        seed
    };
    let report = match axiom {
        "conical" => conical_defect(&sigma, &spec),
        "convex" => convexity_defect(&sigma, &spec),
        "consistent" => consistency_defect(&sigma, &spec),
        "reversible" => reversibility_defect(&sigma, &spec),
        "geodesic" => geodesic_defect(&sigma, &spec),
        other => match other.strip_prefix("discrete:") {
            Some(n) => {
                let n: u32 = n.parse().context("discrete grid")?;
                discrete_convexity_defect(&sigma, n, &spec)
            }
            None => bail!("unknown axiom {other:?}"),
        },
    };
    let pass = report.max_defect <= tol;
    let results = json!({
        "space": sigma.space.name,
        "provenance": sigma.provenance.describe(),
        "axiom": report.axiom,
        "tol": tol,
        "pass": pass,
        "report": defect_json(&report),
    });
    Ok(CommandOutcome::ok(results)
        .with_digest(&digest)
        .with_seed(rng_seed)
        .failing_if(!pass))
}

// ---------------------------------------------------------------------------
// Boundary
// ---------------------------------------------------------------------------

fn parse_point(text: &str) -> anyhow::Result<Pt> {
    let coords: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>().context("coordinate"))
        .collect::<Result<_, _>>()?;
    Ok(Pt::new(coords))
}

fn parse_closure_point(text: &str) -> anyhow::Result<ClosurePoint> {
    if let Some(dir) = text.strip_prefix("dir:") {
        Ok(ClosurePoint::boundary(&parse_point(dir)?).map_err(|e| anyhow!("{e}"))?)
    } else {
        Ok(ClosurePoint::interior(&parse_point(text)?))
    }
}

fn ambient_dim(space: &str) -> anyhow::Result<usize> {
    match gallery::build(space).map_err(|e| anyhow!("{e}"))? {
        GalleryObject::Ambient(dim) => Ok(dim),
        _ => bail!("boundary commands work on l-inf:<d> spaces"),
    }
}

pub fn boundary_dist(space: &str, o: &str, x: &str, y: &str) -> anyhow::Result<CommandOutcome> {
    let dim = ambient_dim(space)?;
    let o = parse_point(o)?;
    let x = parse_closure_point(x)?;
    let y = parse_closure_point(y)?;
    if o.dim() != dim {
        bail!(
            "basepoint has dimension {} but the space is {dim}-dimensional",
            o.dim()
        );
    }
    let d = cone_metric(&o, &x, &y).map_err(|e| anyhow!("{e}"))?;
    let rx = ray_from_basepoint(&o, &x).map_err(|e| anyhow!("{e}"))?;
    let ry = ray_from_basepoint(&o, &y).map_err(|e| anyhow!("{e}"))?;
    let profile = distance_profile(&rx, &ry).map_err(|e| anyhow!("{e}"))?;
    let results = json!({
        "space": format!("l-inf:{dim}"),
        "d_o": d,
        "profile_segments": profile.segments.len() + 1,
    });
    Ok(CommandOutcome::ok(results).with_digest(space.as_bytes()))
}

struct LemmaScan {
    samples: usize,
    violations: usize,
    max_violation: f64,
}

impl LemmaScan {
    fn new() -> Self {
        Self {
            samples: 0,
            violations: 0,
            max_violation: 0.0,
        }
    }

    fn record(&mut self, violation: f64, tol: f64) {
        self.samples += 1;
        if violation > tol {
            self.violations += 1;
        }
        if violation > self.max_violation {
            self.max_violation = violation;
        }
    }
}

fn sample_point(rng: &mut ChaCha8Rng, dim: usize) -> Pt {
    Pt::new((0..dim).map(|_| rng.gen_range(-4.0..4.0)).collect())
}

fn sample_direction(rng: &mut ChaCha8Rng, dim: usize) -> Pt {
    loop {
        let p = sample_point(rng, dim);
        if p.coords.iter().any(|c| c.abs() > 1e-3) {
            return p;
        }
    }
}

fn sample_closure_point(rng: &mut ChaCha8Rng, dim: usize) -> ClosurePoint {
    if rng.gen_bool(0.5) {
        ClosurePoint::interior(&sample_point(rng, dim))
    } else {
        ClosurePoint::boundary(&sample_direction(rng, dim)).expect("nonzero direction")
    }
}

pub fn boundary_check(
    lemma: &str,
    dim: usize,
    samples: usize,
    rng_seed: u64,
    tol: f64,
) -> anyhow::Result<CommandOutcome> {
    use bicomb_core::bicombing::sup_dist;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut scan = LemmaScan::new();
    match lemma {
        // d(phi_r x, phi_r y) <= (2r / d(o,x)) d(x,y) when d(o,x) >= d(o,y)
        // and d(o,x) > r; in particular the retraction is 2-Lipschitz.
        "phi-r" => {
            while scan.samples < samples {
                let o = sample_point(&mut rng, dim);
                let (mut x, mut y) = (sample_point(&mut rng, dim), sample_point(&mut rng, dim));
                if sup_dist(&o, &x) < sup_dist(&o, &y) {
                    std::mem::swap(&mut x, &mut y);
                }
                let dox = sup_dist(&o, &x);
                let r = rng.gen_range(0.0..5.0);
                if dox <= r {
                    continue;
                }
                let fx = radial_retraction(&o, r, &x).map_err(|e| anyhow!("{e}"))?;
                let fy = radial_retraction(&o, r, &y).map_err(|e| anyhow!("{e}"))?;
                let lhs = sup_dist(&fx, &fy);
                let bound = (2.0 * r / dox) * sup_dist(&x, &y);
                let lipschitz = 2.0 * sup_dist(&x, &y);
                scan.record((lhs - bound).max(lhs - lipschitz), tol);
            }
        }
        // Tail estimate: for points of a ray beyond T, the rays from o stay
        // 2 t d(o,p) / (T - d(o,p))-close on [0, T - 2 d(o,p)].
        "t-T" => {
            while scan.samples < samples {
                let o = sample_point(&mut rng, dim);
                let p = sample_point(&mut rng, dim);
                let dop = sup_dist(&o, &p);
                if dop < 1e-6 {
                    continue;
                }
                let xi = ray_to_boundary(&p, &sample_direction(&mut rng, dim))
                    .map_err(|e| anyhow!("{e}"))?;
                let t_cap = rng.gen_range(0.1..6.0);
                let big_t = 2.0 * dop + t_cap + rng.gen_range(0.0..4.0);
                let t = rng.gen_range(0.0..=(big_t - 2.0 * dop));
                let x = xi.eval(big_t + rng.gen_range(0.0..5.0));
                let y = xi.eval(big_t + rng.gen_range(0.0..5.0));
                let rx = generalized_ray(&o, &x).map_err(|e| anyhow!("{e}"))?;
                let ry = generalized_ray(&o, &y).map_err(|e| anyhow!("{e}"))?;
                let lhs = sup_dist(&rx.eval(t), &ry.eval(t));
                let bound = 2.0 * t * dop / (big_t - dop);
                scan.record(lhs - bound, tol);
            }
        }
        // The D_o-radial retraction is 2-Lipschitz and moves points by at
        // most |lambda - mu| along each ray, exactly when the ray is long
        // enough.
        "psi" => {
            let o = sample_point(&mut rng, dim);
            while scan.samples < samples {
                let x = sample_closure_point(&mut rng, dim);
                let y = sample_closure_point(&mut rng, dim);
                let lam = rng.gen_range(0.0..1.0);
                let mu = rng.gen_range(0.0..1.0);
                let psix = cone_retraction(&o, lam, &x).map_err(|e| anyhow!("{e}"))?;
                let psiy = cone_retraction(&o, lam, &y).map_err(|e| anyhow!("{e}"))?;
                let dxy = cone_metric(&o, &x, &y).map_err(|e| anyhow!("{e}"))?;
                let lhs = cone_metric(&o, &psix, &psiy).map_err(|e| anyhow!("{e}"))?;
                let mut worst = lhs - 2.0 * dxy;
                let psix2 = cone_retraction(&o, mu, &x).map_err(|e| anyhow!("{e}"))?;
                let slide = cone_metric(&o, &psix, &psix2).map_err(|e| anyhow!("{e}"))?;
                worst = worst.max(slide - (lam - mu).abs());
                let dox =
                    cone_metric(&o, &ClosurePoint::interior(&o), &x).map_err(|e| anyhow!("{e}"))?;
                if dox >= lam.max(mu) {
                    worst = worst.max((slide - (lam - mu).abs()).abs());
                }
                scan.record(worst, tol);
            }
        }
        // Ray distances at smaller parameters are controlled by a factor
        // two, and cone neighborhoods of interior points are open balls.
        "cone" => {
            let o = sample_point(&mut rng, dim);
            while scan.samples < samples {
                let x = sample_closure_point(&mut rng, dim);
                let y = sample_closure_point(&mut rng, dim);
                let t = rng.gen_range(0.2..8.0);
                let r = rng.gen_range(0.0..t);
                let rx = ray_from_basepoint(&o, &x).map_err(|e| anyhow!("{e}"))?;
                let ry = ray_from_basepoint(&o, &y).map_err(|e| anyhow!("{e}"))?;
                let near = sup_dist(&rx.eval(r), &ry.eval(r));
                let far = sup_dist(&rx.eval(t), &ry.eval(t));
                let mut worst = near - 2.0 * far;
                // Interior case: membership in U_o(x, t, eps) is the open
                // ball once t >= d(o,x) + eps.
                let xp = sample_point(&mut rng, dim);
                let yp = sample_point(&mut rng, dim);
                let eps = rng.gen_range(0.2..2.0);
                let t_ball = sup_dist(&o, &xp) + eps + rng.gen_range(0.0..2.0);
                let member = cone_neighborhood_contains(
                    &o,
                    &ClosurePoint::interior(&xp),
                    t_ball,
                    eps,
                    &ClosurePoint::interior(&yp),
                )
                .map_err(|e| anyhow!("{e}"))?;
                if member != (sup_dist(&xp, &yp) < eps) {
                    worst = worst.max(1.0);
                }
                scan.record(worst, tol);
            }
        }
        // With a = d(rho_x(t), rho_y(t)):
        // (a/2) e^{-t} <= D_o(x, y) <= 2a (1 - e^{-t}) + 2 (t + 1) e^{-t}.
        "sandwich" => {
            let o = sample_point(&mut rng, dim);
            while scan.samples < samples {
                let x = sample_closure_point(&mut rng, dim);
                let y = sample_closure_point(&mut rng, dim);
                let t = rng.gen_range(0.1..6.0);
                let rx = ray_from_basepoint(&o, &x).map_err(|e| anyhow!("{e}"))?;
                let ry = ray_from_basepoint(&o, &y).map_err(|e| anyhow!("{e}"))?;
                let a = sup_dist(&rx.eval(t), &ry.eval(t));
                let d = cone_metric(&o, &x, &y).map_err(|e| anyhow!("{e}"))?;
                let lower = 0.5 * a * (-t).exp();
                let upper = 2.0 * a * (1.0 - (-t).exp()) + 2.0 * (t + 1.0) * (-t).exp();
                scan.record((lower - d).max(d - upper), tol);
            }
        }
        other => bail!("unknown lemma {other:?}"),
    }
    let pass = scan.violations == 0;
    let results = json!({
        "lemma": lemma,
        "dim": dim,
        "samples": scan.samples,
        "violations": scan.violations,
        "max_violation": scan.max_violation,
        "tol": tol,
        "pass": pass,
    });
    Ok(CommandOutcome::ok(results)
        .with_digest(lemma.as_bytes())
        .with_seed(rng_seed)
        .failing_if(!pass))
}

// ---------------------------------------------------------------------------
// Gallery
// ---------------------------------------------------------------------------

pub fn gallery_list() -> anyhow::Result<CommandOutcome> {
    let entries: Vec<Value> = gallery::list()
        .into_iter()
        .map(|info| json!({"id": info.id, "params": info.params, "description": info.description}))
        .collect();
    Ok(CommandOutcome::ok(json!({"spaces": entries})))
}

pub fn gallery_emit(id: &str, out: Option<&str>) -> anyhow::Result<CommandOutcome> {
    let object = gallery::build(id).map_err(|e| anyhow!("{e}"))?;
    let space = match object {
        GalleryObject::Finite(space) => space,
        _ => bail!("{id:?} is not a finite space; only finite spaces emit distance matrices"),
    };
    let doc = space_to_json(&space);
    let results = match out {
        Some(path) => {
            std::fs::write(path, format!("{}\n", serde_json::to_string_pretty(&doc)?))
                .with_context(|| format!("writing {path}"))?;
            json!({"id": id, "points": space.n_points(), "written": path})
        }
        None => json!({"id": id, "points": space.n_points(), "space": doc}),
    };
    Ok(CommandOutcome::ok(results).with_digest(id.as_bytes()))
}
