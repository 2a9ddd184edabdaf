//! Seeded defect scans for the bicombing axioms.
//!
//! Each scanner evaluates its inequality over a deterministic sample set
//! (explicit quadruples, anchor combinations, then seeded random draws) and
//! reports the worst violation together with a witness that reproduces it.
//! Reported defects are clamped at zero, so an axiom that holds yields 0 up
//! to floating-point noise.

use super::{sup_dist, Bicombing};
use crate::Pt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

/// Deterministic sample plan shared by the scanners.
#[derive(Clone, Debug)]
pub struct SampleSpec {
    pub seed: u64,
    /// Number of random point quadruples.
    pub quads: usize,
    /// Parameter grid: all scanners step through multiples of `1/grid`.
    pub grid: u32,
    /// Extra quadruples checked verbatim (before any random ones).
    pub explicit: Vec<[Pt; 4]>,
    /// Include structured combinations of the space anchors.
    pub use_anchors: bool,
}

impl SampleSpec {
    pub fn seeded(seed: u64, quads: usize) -> Self {
        Self {
            seed,
            quads,
            grid: 8,
            explicit: Vec::new(),
            use_anchors: true,
        }
    }

    pub fn with_grid(mut self, grid: u32) -> Self {
        self.grid = grid.max(2);
        self
    }

    pub fn with_explicit(mut self, quads: Vec<[Pt; 4]>) -> Self {
        self.explicit = quads;
        self
    }

    pub fn with_anchors(mut self, on: bool) -> Self {
        self.use_anchors = on;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectWitness {
    pub points: Vec<Vec<f64>>,
    pub params: Vec<f64>,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct DefectReport {
    pub axiom: String,
    pub max_defect: f64,
    pub samples: usize,
    pub witness: Option<DefectWitness>,
}

fn gather_quads(sigma: &Bicombing, spec: &SampleSpec) -> Vec<[Pt; 4]> {
    let mut quads = spec.explicit.clone();
    if spec.use_anchors {
        let anchors = &sigma.space.anchors;
        let k = anchors.len();
        // Segment-vs-point probes (x, y, z, z) and a capped set of generic
        // anchor quadruples.
        for a in 0..k {
            for b in (a + 1)..k {
                for z in 0..k {
                    quads.push([
                        anchors[a].clone(),
                        anchors[b].clone(),
                        anchors[z].clone(),
                        anchors[z].clone(),
                    ]);
                }
            }
        }
        let mut budget = 256usize;
        'outer: for a in 0..k {
            for b in 0..k {
                for c in 0..k {
                    for d in 0..k {
                        if budget == 0 {
                            break 'outer;
                        }
                        quads.push([
                            anchors[a].clone(),
                            anchors[b].clone(),
                            anchors[c].clone(),
                            anchors[d].clone(),
                        ]);
                        budget -= 1;
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    for _ in 0..spec.quads {
        quads.push([
            sigma.space.sample(&mut rng),
            sigma.space.sample(&mut rng),
            sigma.space.sample(&mut rng),
            sigma.space.sample(&mut rng),
        ]);
    }
    quads
}

/// Scans `quads` in parallel with a per-quad evaluator, keeping the worst
/// defect; ties resolve to the earliest quad so reports are deterministic.
fn scan(
    axiom: &str,
    sigma: &Bicombing,
    spec: &SampleSpec,
    per_quad: impl Fn(&[Pt; 4]) -> Option<(f64, DefectWitness)> + Sync,
) -> DefectReport {
    let quads = gather_quads(sigma, spec);
    let best = quads
        .par_iter()
        .enumerate()
        .filter_map(|(i, quad)| per_quad(quad).map(|(d, w)| (d, i, w)))
        .collect::<Vec<_>>()
        .into_iter()
        .fold(None::<(f64, usize, DefectWitness)>, |acc, item| match acc {
            None => Some(item),
            Some(cur) => {
                if item.0 > cur.0 || (item.0 == cur.0 && item.1 < cur.1) {
                    Some(item)
                } else {
                    Some(cur)
                }
            }
        });
    match best {
        Some((d, _, w)) if d > 0.0 => DefectReport {
            axiom: axiom.to_string(),
            max_defect: d,
            samples: quads.len(),
            witness: Some(w),
        },
        _ => DefectReport {
            axiom: axiom.to_string(),
            max_defect: 0.0,
            samples: quads.len(),
            witness: None,
        },
    }
}

fn witness(quad: &[Pt; 4], params: &[f64], lhs: f64, rhs: f64) -> DefectWitness {
    DefectWitness {
        points: quad.iter().map(|p| p.coords.clone()).collect(),
        params: params.to_vec(),
        lhs,
        rhs,
    }
}

/// Worst violation of
/// `d(s(x,y,t), s(x',y',t)) <= (1-t) d(x,x') + t d(y,y')`.
pub fn conical_defect(sigma: &Bicombing, spec: &SampleSpec) -> DefectReport {
    let g = spec.grid as u64;
    scan("conical", sigma, spec, |[x, y, x2, y2]| {
        let dx = sup_dist(x, x2);
        let dy = sup_dist(y, y2);
        let mut best: Option<(f64, DefectWitness)> = None;
        for k in 0..=g {
            let t = k as f64 / g as f64;
            let lhs = sup_dist(&sigma.eval_frac(x, y, k, g), &sigma.eval_frac(x2, y2, k, g));
            let rhs = (1.0 - t) * dx + t * dy;
            let d = lhs - rhs;
            if best.as_ref().map(|b| d > b.0).unwrap_or(true) {
                best = Some((
                    d,
                    witness(
                        &[x.clone(), y.clone(), x2.clone(), y2.clone()],
                        &[t],
                        lhs,
                        rhs,
                    ),
                ));
            }
        }
        best
    })
}

/// Worst midpoint-convexity violation of `t -> d(s_xy(t), s_x'y'(t))` over
/// equally spaced grid triples: `D(s) - (D(s-h) + D(s+h)) / 2`, clamped at 0.
pub fn convexity_defect(sigma: &Bicombing, spec: &SampleSpec) -> DefectReport {
    let g = spec.grid as u64;
    scan("convex", sigma, spec, |[x, y, x2, y2]| {
        let profile: Vec<f64> = (0..=g)
            .map(|k| sup_dist(&sigma.eval_frac(x, y, k, g), &sigma.eval_frac(x2, y2, k, g)))
            .collect();
        let mut best: Option<(f64, DefectWitness)> = None;
        for mid in 1..g {
            for h in 1..=mid.min(g - mid) {
                let lhs = profile[mid as usize];
                let rhs = 0.5 * (profile[(mid - h) as usize] + profile[(mid + h) as usize]);
                let d = lhs - rhs;
                if best.as_ref().map(|b| d > b.0).unwrap_or(true) {
                    let params = [
                        (mid - h) as f64 / g as f64,
                        mid as f64 / g as f64,
                        (mid + h) as f64 / g as f64,
                    ];
                    best = Some((
                        d,
                        witness(
                            &[x.clone(), y.clone(), x2.clone(), y2.clone()],
                            &params,
                            lhs,
                            rhs,
                        ),
                    ));
                }
            }
        }
        best
    })
}

/// Midpoint convexity restricted to the grid `[0,1] ∩ (1/n)Z`, checked via
/// the local triple inequality at every interior grid point.
pub fn discrete_convexity_defect(sigma: &Bicombing, n: u32, spec: &SampleSpec) -> DefectReport {
    let n = n as u64;
    scan(&format!("discrete:{n}"), sigma, spec, |[x, y, x2, y2]| {
        let profile: Vec<f64> = (0..=n)
            .map(|k| sup_dist(&sigma.eval_frac(x, y, k, n), &sigma.eval_frac(x2, y2, k, n)))
            .collect();
        let mut best: Option<(f64, DefectWitness)> = None;
        for mid in 1..n {
            let lhs = profile[mid as usize];
            let rhs = 0.5 * (profile[(mid - 1) as usize] + profile[(mid + 1) as usize]);
            let d = lhs - rhs;
            if best.as_ref().map(|b| d > b.0).unwrap_or(true) {
                let params = [
                    (mid - 1) as f64 / n as f64,
                    mid as f64 / n as f64,
                    (mid + 1) as f64 / n as f64,
                ];
                best = Some((
                    d,
                    witness(
                        &[x.clone(), y.clone(), x2.clone(), y2.clone()],
                        &params,
                        lhs,
                        rhs,
                    ),
                ));
            }
        }
        best
    })
}

/// Worst violation of consistency: the geodesic between two points of a
/// geodesic must retrace it. Uses the first two entries of each quadruple.
pub fn consistency_defect(sigma: &Bicombing, spec: &SampleSpec) -> DefectReport {
    let g = spec.grid as u64;
    scan("consistent", sigma, spec, |[x, y, _, _]| {
        let mut best: Option<(f64, DefectWitness)> = None;
        for a in 0..=g {
            for b in a..=g {
                let p = sigma.eval_frac(x, y, a, g);
                let q = sigma.eval_frac(x, y, b, g);
                for c in 0..=g {
                    // (1 - c/g) a/g + (c/g) b/g exactly, over denominator g^2.
                    let target = (g - c) * a + c * b;
                    let lhs_pt = sigma.eval_frac(&p, &q, c, g);
                    let rhs_pt = sigma.eval_frac(x, y, target, g * g);
                    let d = sup_dist(&lhs_pt, &rhs_pt);
                    if best.as_ref().map(|bst| d > bst.0).unwrap_or(true) {
                        let params = [
                            a as f64 / g as f64,
                            b as f64 / g as f64,
                            c as f64 / g as f64,
                        ];
                        best = Some((
                            d,
                            witness(
                                &[x.clone(), y.clone(), p.clone(), q.clone()],
                                &params,
                                d,
                                0.0,
                            ),
                        ));
                    }
                }
            }
        }
        best
    })
}

/// Worst violation of `s(x, y, t) = s(y, x, 1-t)`.
pub fn reversibility_defect(sigma: &Bicombing, spec: &SampleSpec) -> DefectReport {
    let g = spec.grid as u64;
    scan("reversible", sigma, spec, |[x, y, _, _]| {
        let mut best: Option<(f64, DefectWitness)> = None;
        for k in 0..=g {
            let d = sup_dist(
                &sigma.eval_frac(x, y, k, g),
                &sigma.eval_frac(y, x, g - k, g),
            );
            if best.as_ref().map(|b| d > b.0).unwrap_or(true) {
                best = Some((
                    d,
                    witness(
                        &[x.clone(), y.clone(), x.clone(), y.clone()],
                        &[k as f64 / g as f64],
                        d,
                        0.0,
                    ),
                ));
            }
        }
        best
    })
}

/// Worst violation of the constant-speed property
/// `d(s_xy(t), s_xy(t')) = |t - t'| d(x, y)`.
pub fn geodesic_defect(sigma: &Bicombing, spec: &SampleSpec) -> DefectReport {
    let g = spec.grid as u64;
    scan("geodesic", sigma, spec, |[x, y, _, _]| {
        let dxy = sup_dist(x, y);
        let pts: Vec<Pt> = (0..=g).map(|k| sigma.eval_frac(x, y, k, g)).collect();
        let mut best: Option<(f64, DefectWitness)> = None;
        for a in 0..=g {
            for b in a..=g {
                let expected = (b - a) as f64 / g as f64 * dxy;
                let got = sup_dist(&pts[a as usize], &pts[b as usize]);
                let d = (got - expected).abs();
                if best.as_ref().map(|bst| d > bst.0).unwrap_or(true) {
                    best = Some((
                        d,
                        witness(
                            &[x.clone(), y.clone(), x.clone(), y.clone()],
                            &[a as f64 / g as f64, b as f64 / g as f64],
                            got,
                            expected,
                        ),
                    ));
                }
            }
        }
        best
    })
}
