//! Finite metric spaces with exact distance matrices, and sup-norm points.

use crate::scalar::{smax, Scalar};
use crate::Rat;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A point of `R^d` carrying the sup norm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinfPoint<S> {
    pub coords: Vec<S>,
}

impl<S: Scalar> LinfPoint<S> {
    pub fn new(coords: Vec<S>) -> Self {
        Self { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// Constructs an `f64` point from a slice, mostly for tests and samplers.
pub fn pt(coords: &[f64]) -> LinfPoint<f64> {
    LinfPoint::new(coords.to_vec())
}

/// Sup-norm distance `max_i |p_i - q_i|`.
pub fn linf_distance<S: Scalar>(p: &LinfPoint<S>, q: &LinfPoint<S>) -> Result<S, MetricError> {
    if p.dim() != q.dim() {
        return Err(MetricError::DimensionMismatch {
            left: p.dim(),
            right: q.dim(),
        });
    }
    let mut best = S::zero();
    for (a, b) in p.coords.iter().zip(&q.coords) {
        best = smax(best, (a.clone() - b.clone()).abs());
    }
    Ok(best)
}

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("point dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("index {index} out of range for a space on {size} points")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("subspace index set is empty")]
    EmptySubset,
    #[error("matrix is not a metric: {0} violation(s); first: {1}")]
    NotAMetric(usize, String),
}

/// One failed metric axiom, with enough data to point at the offending entries.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetricViolation<S> {
    NonSquare {
        rows: usize,
        row: usize,
        row_len: usize,
    },
    Asymmetric {
        i: usize,
        j: usize,
    },
    NonzeroDiagonal {
        i: usize,
    },
    NonPositive {
        i: usize,
        j: usize,
    },
    /// `d(i,k) > d(i,j) + d(j,k)`; `defect` is the positive gap.
    Triangle {
        i: usize,
        via: usize,
        k: usize,
        defect: S,
    },
}

/// A finite metric space: labelled points and an exact, validated distance
/// matrix. Construction goes through [`validate_metric`], so every value of
/// this type satisfies symmetry, zero diagonal, positivity off the diagonal
/// and the triangle inequality.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace<S> {
    labels: Vec<String>,
    dist: Vec<S>,
    n: usize,
}

/// Checks the metric axioms and builds the space, or reports every violation.
pub fn validate_metric<S: Scalar>(
    dist: Vec<Vec<S>>,
    labels: Option<Vec<String>>,
) -> Result<FiniteMetricSpace<S>, Vec<MetricViolation<S>>> {
    let n = dist.len();
    let mut violations = Vec::new();
    for (r, row) in dist.iter().enumerate() {
        if row.len() != n {
            violations.push(MetricViolation::NonSquare {
                rows: n,
                row: r,
                row_len: row.len(),
            });
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    for i in 0..n {
        if !dist[i][i].is_zero() {
            violations.push(MetricViolation::NonzeroDiagonal { i });
        }
        for j in (i + 1)..n {
            if dist[i][j] != dist[j][i] {
                violations.push(MetricViolation::Asymmetric { i, j });
            }
            if dist[i][j] <= S::zero() {
                violations.push(MetricViolation::NonPositive { i, j });
            }
        }
    }
    for i in 0..n {
        for k in (i + 1)..n {
            for j in 0..n {
                if j == i || j == k {
                    continue;
                }
                let defect = dist[i][k].clone() - dist[i][j].clone() - dist[j][k].clone();
                if defect > S::zero() {
                    violations.push(MetricViolation::Triangle {
                        i,
                        via: j,
                        k,
                        defect,
                    });
                }
            }
        }
    }
    if !violations.is_empty() {
        return Err(violations);
    }
    let labels = labels.unwrap_or_else(|| (0..n).map(|i| i.to_string()).collect::<Vec<_>>());
    let mut flat = Vec::with_capacity(n * n);
    for row in dist {
        flat.extend(row);
    }
    Ok(FiniteMetricSpace {
        labels,
        dist: flat,
        n,
    })
}

impl<S: Scalar> FiniteMetricSpace<S> {
    pub fn n_points(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Borrowed distance entry; `at(i, j) == at(j, i)`.
    pub fn at(&self, i: usize, j: usize) -> &S {
        &self.dist[i * self.n + j]
    }

    /// Owned distance entry.
    pub fn d(&self, i: usize, j: usize) -> S {
        self.at(i, j).clone()
    }

    pub fn rows(&self) -> Vec<Vec<S>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.d(i, j)).collect())
            .collect()
    }

    pub fn diameter(&self) -> S {
        let mut best = S::zero();
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                best = smax(best, self.d(i, j));
            }
        }
        best
    }

    fn check_index(&self, index: usize) -> Result<(), MetricError> {
        if index >= self.n {
            Err(MetricError::IndexOutOfRange {
                index,
                size: self.n,
            })
        } else {
            Ok(())
        }
    }

    /// Restriction to an index set; labels travel with their points.
    pub fn subspace(&self, indices: &[usize]) -> Result<Self, MetricError> {
        if indices.is_empty() {
            return Err(MetricError::EmptySubset);
        }
        for &i in indices {
            self.check_index(i)?;
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let m = indices.len();
        let mut flat = Vec::with_capacity(m * m);
        for &i in indices {
            for &j in indices {
                flat.push(self.d(i, j));
            }
        }
        Ok(FiniteMetricSpace {
            labels,
            dist: flat,
            n: m,
        })
    }

    /// `d(x,x') + d(y,y') - max{ d(x,y) + d(x',y'), d(x,y') + d(x',y) }`.
    ///
    /// Nonpositive for every quadruple exactly when the space is 0-hyperbolic
    /// (tree-like). Repetitions among the four indices are allowed.
    pub fn four_point_defect(
        &self,
        x: usize,
        x2: usize,
        y: usize,
        y2: usize,
    ) -> Result<S, MetricError> {
        for &i in &[x, x2, y, y2] {
            self.check_index(i)?;
        }
        let paired = self.d(x, x2) + self.d(y, y2);
        let cross = smax(self.d(x, y) + self.d(x2, y2), self.d(x, y2) + self.d(x2, y));
        Ok(paired - cross)
    }

    /// Largest four-point defect over all ordered quadruples (0 for trees).
    pub fn max_four_point_defect(&self) -> S {
        let mut best = self.four_point_defect(0, 0, 0, 0).expect("nonempty");
        for x in 0..self.n {
            for x2 in x..self.n {
                for y in 0..self.n {
                    for y2 in y..self.n {
                        let v = self.four_point_defect(x, x2, y, y2).expect("in range");
                        best = smax(best, v);
                    }
                }
            }
        }
        best
    }
}

impl FiniteMetricSpace<Rat> {
    /// Lossy conversion used by the floating-point bicombing layer.
    pub fn to_f64(&self) -> FiniteMetricSpace<f64> {
        use num_traits::ToPrimitive;
        FiniteMetricSpace {
            labels: self.labels.clone(),
            dist: self
                .dist
                .iter()
                .map(|v| v.to_f64().expect("finite rational"))
                .collect(),
            n: self.n,
        }
    }
}

// ---------------------------------------------------------------------------
// JSON interchange for exact spaces: entries are integers or "p/q" strings.
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct SpaceJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
    dist: Vec<Vec<RatEntry>>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RatEntry {
    Int(i64),
    Str(String),
}

#[derive(Debug, Error)]
pub enum SpaceIoError {
    #[error("JSON syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("bad distance entry: {0}")]
    BadEntry(String),
    #[error(transparent)]
    NotAMetric(#[from] MetricError),
}

/// Distance matrix plus optional labels, as read from a space file.
pub type RawSpace = (Vec<Vec<Rat>>, Option<Vec<String>>);

/// Parses the JSON space format without validating the axioms; the result
/// feeds [`validate_metric`].
pub fn parse_space_matrix(text: &str) -> Result<RawSpace, SpaceIoError> {
    let parsed: SpaceJson = serde_json::from_str(text).map_err(|e| SpaceIoError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut dist = Vec::with_capacity(parsed.dist.len());
    for row in parsed.dist {
        let mut out = Vec::with_capacity(row.len());
        for entry in row {
            out.push(match entry {
                RatEntry::Int(v) => Rat::from_int(v),
                RatEntry::Str(s) => {
                    crate::scalar::rat_from_str(&s).map_err(SpaceIoError::BadEntry)?
                }
            });
        }
        dist.push(out);
    }
    Ok((dist, parsed.labels))
}

/// Parses the JSON space format and validates the metric axioms.
pub fn space_from_json(text: &str) -> Result<FiniteMetricSpace<Rat>, SpaceIoError> {
    let (dist, labels) = parse_space_matrix(text)?;
    validate_metric(dist, labels).map_err(|violations| {
        let first = violations
            .first()
            .map(|v| format!("{v:?}"))
            .unwrap_or_default();
        SpaceIoError::NotAMetric(MetricError::NotAMetric(violations.len(), first))
    })
}

fn rat_entry(v: &Rat) -> RatEntry {
    use num_traits::ToPrimitive;
    if v.is_integer() {
        if let Some(i) = v.to_integer().to_i64() {
            return RatEntry::Int(i);
        }
    }
    RatEntry::Str(v.to_string())
}

/// Serializes a space in the JSON interchange format.
pub fn space_to_json(space: &FiniteMetricSpace<Rat>) -> serde_json::Value {
    let doc = SpaceJson {
        labels: Some(space.labels().to_vec()),
        dist: (0..space.n_points())
            .map(|i| {
                (0..space.n_points())
                    .map(|j| rat_entry(space.at(i, j)))
                    .collect()
            })
            .collect(),
    };
    serde_json::to_value(doc).expect("space serializes")
}
