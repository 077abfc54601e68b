//! Finite probabilistic metric spaces.
//!
//! A [`PMSpace`] stores one distance distribution per unordered pair of
//! points (the diagonal is implicitly `H_0`) together with the triangle
//! function that governs its triangle inequality
//! `D(x,y) ⋆ D(y,z) ≤ D(x,z)`. Symmetry holds by construction; identity and
//! the triangle inequality are audited by [`PMSpace::validate`].

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::distribution::Distribution;
use crate::levy::{levy_distance, LevyResult};
use crate::tolerance::Tolerances;
use crate::triangle::{TriangleFn, TriangleKind};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PmError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("point label {0:?} appears more than once")]
    DuplicatePoint(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("D({x}, {y}) and D({y}, {x}) differ")]
    Asymmetric { x: String, y: String },
    #[error("D({0}, {0}) must be H_0")]
    NonNeutralDiagonal(String),
    #[error("pair ({x}, {y}) is given more than once")]
    DuplicatePair { x: String, y: String },
    #[error("pair ({x}, {y}) is missing")]
    MissingPair { x: String, y: String },
    #[error("pair ({0}, {0}) lies on the diagonal, which is implied")]
    DiagonalPair(String),
    #[error("not a metric: {0}")]
    NotAMetric(String),
    #[error("triangle function {0} does not send H_a, H_b to H_(a+b); use kind sum")]
    IncompatibleTriangleFn(TriangleFn),
    #[error("t must be positive, got {0}")]
    NonPositiveT(f64),
    #[error("space violates {0} probabilistic metric axiom instance(s)")]
    InvalidSpace(usize),
}

/// A failed instance of the probabilistic metric axioms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum AxiomViolation {
    /// `D(x, y) = H_0` for distinct points.
    Identity { x: usize, y: usize },
    /// `D(x, y) ⋆ D(y, z) ≰ D(x, z)`.
    Triangle { x: usize, y: usize, z: usize },
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ValidationReport {
    pub violations: Vec<AxiomViolation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Outcome of comparing a strong neighborhood with the corresponding Lévy ball.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equivalence {
    Holds,
    /// Membership of `y` differs between `N_x(t)` and the ball.
    Differs { y: usize },
    /// `t` falls inside the bisection enclosure of `d_L(D(x,y), H_0)`.
    Indeterminate { y: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SandwichSide {
    /// `d_L(D(x,y), H_0) ≤ σ(x,y)` failed.
    Lower,
    /// `σ(x,y) ≤ k·d_L(D(x,y), H_0)` failed.
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SandwichViolation {
    pub x: usize,
    pub y: usize,
    pub side: SandwichSide,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetrizationReport {
    pub sigma: Vec<Vec<f64>>,
    pub lower: Vec<Vec<f64>>,
    pub k: f64,
    pub tolerance: f64,
    pub violations: Vec<SandwichViolation>,
}

impl MetrizationReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }

    /// Whether `σ` and `d_L(D(·,·), H_0)` agree entrywise within the report
    /// tolerance, as they do for spaces induced by a metric of diameter ≤ 1.
    pub fn sigma_equals_lower(&self) -> bool {
        self.sigma
            .iter()
            .flatten()
            .zip(self.lower.iter().flatten())
            .all(|(s, l)| (s - l).abs() <= self.tolerance)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PMSpace {
    points: Vec<String>,
    /// Strict upper triangle in row-major order.
    upper: Vec<Distribution>,
    tf: TriangleFn,
    h0: Distribution,
}

fn upper_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn check_unique(points: &[String]) -> Result<(), PmError> {
    let mut seen = std::collections::HashSet::new();
    for p in points {
        if !seen.insert(p.as_str()) {
            return Err(PmError::DuplicatePoint(p.clone()));
        }
    }
    Ok(())
}

impl PMSpace {
    /// Builds a space from a full square matrix, enforcing symmetry and an
    /// `H_0` diagonal.
    pub fn from_matrix(
        points: Vec<String>,
        matrix: Vec<Vec<Distribution>>,
        tf: TriangleFn,
    ) -> Result<Self, PmError> {
        let n = points.len();
        check_unique(&points)?;
        if matrix.len() != n || matrix.iter().any(|row| row.len() != n) {
            return Err(PmError::ShapeMismatch(format!(
                "expected a {n}x{n} matrix for {n} points"
            )));
        }
        let mut upper = Vec::with_capacity(n * n.saturating_sub(1) / 2);
        for i in 0..n {
            if !matrix[i][i].is_h0() {
                return Err(PmError::NonNeutralDiagonal(points[i].clone()));
            }
            for j in i + 1..n {
                if matrix[i][j] != matrix[j][i] {
                    return Err(PmError::Asymmetric {
                        x: points[i].clone(),
                        y: points[j].clone(),
                    });
                }
                upper.push(matrix[i][j].clone());
            }
        }
        Ok(PMSpace {
            points,
            upper,
            tf,
            h0: Distribution::h0(),
        })
    }

    /// Builds a space from one entry per unordered pair of distinct points.
    pub fn from_pairs(
        points: Vec<String>,
        pairs: impl IntoIterator<Item = (String, String, Distribution)>,
        tf: TriangleFn,
    ) -> Result<Self, PmError> {
        check_unique(&points)?;
        let n = points.len();
        let index: HashMap<&str, usize> = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.as_str(), i))
            .collect();
        let mut slots: Vec<Option<Distribution>> = vec![None; n * n.saturating_sub(1) / 2];
        for (x, y, dist) in pairs {
            let i = *index.get(x.as_str()).ok_or_else(|| PmError::UnknownPoint(x.clone()))?;
            let j = *index.get(y.as_str()).ok_or_else(|| PmError::UnknownPoint(y.clone()))?;
            if i == j {
                return Err(PmError::DiagonalPair(x));
            }
            let slot = &mut slots[upper_index(n, i.min(j), i.max(j))];
            if slot.is_some() {
                return Err(PmError::DuplicatePair { x, y });
            }
            *slot = Some(dist);
        }
        let mut upper = Vec::with_capacity(slots.len());
        for i in 0..n {
            for j in i + 1..n {
                match slots[upper_index(n, i, j)].take() {
                    Some(d) => upper.push(d),
                    None => {
                        return Err(PmError::MissingPair {
                            x: points[i].clone(),
                            y: points[j].clone(),
                        })
                    }
                }
            }
        }
        Ok(PMSpace {
            points,
            upper,
            tf,
            h0: Distribution::h0(),
        })
    }

    /// The space `D(p, q) = H_{d(p,q)}` induced by a finite metric.
    ///
    /// The metric is checked for finiteness, zero diagonal, positivity off
    /// the diagonal, symmetry and the triangle inequality. Only sum-kind
    /// triangle functions are accepted, since they satisfy
    /// `H_a ⋆ H_b = H_{a+b}`.
    pub fn induced_from_metric(
        points: Vec<String>,
        d: &[Vec<f64>],
        tf: TriangleFn,
    ) -> Result<Self, PmError> {
        if tf.kind != TriangleKind::Sum {
            return Err(PmError::IncompatibleTriangleFn(tf));
        }
        let n = points.len();
        if d.len() != n || d.iter().any(|row| row.len() != n) {
            return Err(PmError::ShapeMismatch(format!(
                "expected a {n}x{n} metric for {n} points"
            )));
        }
        check_metric(d)?;
        let matrix = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Distribution::heaviside(d[i][j]).expect("checked nonnegative"))
                    .collect()
            })
            .collect();
        PMSpace::from_matrix(points, matrix, tf)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn triangle(&self) -> TriangleFn {
        self.tf
    }

    pub fn index_of(&self, label: &str) -> Result<usize, PmError> {
        self.points
            .iter()
            .position(|p| p == label)
            .ok_or_else(|| PmError::UnknownPoint(label.to_string()))
    }

    /// `D(x, y)` by index.
    ///
    /// # Panics
    ///
    /// Panics if either index is out of range.
    pub fn dist(&self, x: usize, y: usize) -> &Distribution {
        let n = self.len();
        assert!(x < n && y < n, "point index out of range");
        match x.cmp(&y) {
            std::cmp::Ordering::Equal => &self.h0,
            std::cmp::Ordering::Less => &self.upper[upper_index(n, x, y)],
            std::cmp::Ordering::Greater => &self.upper[upper_index(n, y, x)],
        }
    }

    /// Exhaustive check of `D(x,y) = H_0 ⇒ x = y` and of
    /// `D(x,y) ⋆ D(y,z) ≤ D(x,z)` over all ordered triples.
    pub fn validate(&self) -> ValidationReport {
        let n = self.len();
        let mut violations: Vec<AxiomViolation> = Vec::new();
        for x in 0..n {
            for y in x + 1..n {
                if self.dist(x, y).is_h0() {
                    violations.push(AxiomViolation::Identity { x, y });
                }
            }
        }
        let mut triangle: Vec<AxiomViolation> = (0..n)
            .into_par_iter()
            .flat_map_iter(|x| {
                let mut found = Vec::new();
                for y in 0..n {
                    let dxy = self.dist(x, y);
                    for z in 0..n {
                        let combined = self.tf.star(dxy, self.dist(y, z));
                        if !combined.leq(self.dist(x, z)) {
                            found.push(AxiomViolation::Triangle { x, y, z });
                        }
                    }
                }
                found
            })
            .collect();
        triangle.sort();
        violations.extend(triangle);
        ValidationReport { violations }
    }

    /// `d_L(D(x,y), H_0)` by index.
    pub fn lower_at(&self, x: usize, y: usize, bisect_tol: f64) -> LevyResult {
        levy_distance(self.dist(x, y), &self.h0, bisect_tol)
    }

    /// `σ_D(x, y) = max_z d_L(D(x,z), D(y,z))` by index, as an enclosure.
    pub fn sigma_at(&self, x: usize, y: usize, bisect_tol: f64) -> LevyResult {
        if x == y {
            return LevyResult::exact(0.0);
        }
        (0..self.len())
            .map(|z| levy_distance(self.dist(x, z), self.dist(y, z), bisect_tol))
            .reduce(LevyResult::max)
            .unwrap_or(LevyResult::exact(0.0))
    }

    pub fn sigma(&self, x: &str, y: &str, bisect_tol: f64) -> Result<LevyResult, PmError> {
        Ok(self.sigma_at(self.index_of(x)?, self.index_of(y)?, bisect_tol))
    }

    /// Strong neighborhood `N_x(t) = { y : D(x,y)(t) > 1 - t }`, as sorted
    /// point indices.
    pub fn strong_neighborhood(&self, x: &str, t: f64) -> Result<Vec<usize>, PmError> {
        let xi = self.index_of(x)?;
        if !(t > 0.0) {
            return Err(PmError::NonPositiveT(t));
        }
        Ok((0..self.len())
            .filter(|&y| self.dist(xi, y).eval(t) > 1.0 - t)
            .collect())
    }

    /// Compares `N_x(t)` with the ball `{ y : d_L(D(x,y), H_0) < t }`.
    ///
    /// Ball membership is decided from the Lévy enclosure; when `t` lies
    /// inside an enclosure the outcome is [`Equivalence::Indeterminate`].
    pub fn neighborhood_ball_equivalence(
        &self,
        x: &str,
        t: f64,
        bisect_tol: f64,
    ) -> Result<Equivalence, PmError> {
        let neighborhood = self.strong_neighborhood(x, t)?;
        let xi = self.index_of(x)?;
        let mut indeterminate = None;
        for y in 0..self.len() {
            let in_n = neighborhood.binary_search(&y).is_ok();
            let r = self.lower_at(xi, y, bisect_tol);
            let in_ball = if r.upper < t {
                true
            } else if r.lower >= t {
                false
            } else {
                indeterminate.get_or_insert(y);
                continue;
            };
            if in_n != in_ball {
                return Ok(Equivalence::Differs { y });
            }
        }
        Ok(match indeterminate {
            Some(y) => Equivalence::Indeterminate { y },
            None => Equivalence::Holds,
        })
    }

    /// Computes `σ_D` and `d_L(D(·,·), H_0)` and checks
    /// `lower ≤ σ ≤ k·lower` entrywise with slack `3·tol.bisect`.
    pub fn metrization_report(&self, tol: &Tolerances) -> Result<MetrizationReport, PmError> {
        let validation = self.validate();
        if !validation.is_valid() {
            return Err(PmError::InvalidSpace(validation.violations.len()));
        }
        let n = self.len();
        let k = self.tf.lipschitz_k();
        let slack = 3.0 * tol.bisect;
        let rows: Vec<(Vec<f64>, Vec<f64>)> = (0..n)
            .into_par_iter()
            .map(|x| {
                let sigma = (0..n).map(|y| self.sigma_at(x, y, tol.bisect).value).collect();
                let lower = (0..n).map(|y| self.lower_at(x, y, tol.bisect).value).collect();
                (sigma, lower)
            })
            .collect();
        let (sigma, lower): (Vec<Vec<f64>>, Vec<Vec<f64>>) = rows.into_iter().unzip();
        let mut violations = Vec::new();
        for x in 0..n {
            for y in 0..n {
                if lower[x][y] > sigma[x][y] + slack {
                    violations.push(SandwichViolation {
                        x,
                        y,
                        side: SandwichSide::Lower,
                    });
                }
                if sigma[x][y] > k * lower[x][y] + slack {
                    violations.push(SandwichViolation {
                        x,
                        y,
                        side: SandwichSide::Upper,
                    });
                }
            }
        }
        Ok(MetrizationReport {
            sigma,
            lower,
            k,
            tolerance: slack,
            violations,
        })
    }
}

fn check_metric(d: &[Vec<f64>]) -> Result<(), PmError> {
    let n = d.len();
    for i in 0..n {
        if d[i][i] != 0.0 {
            return Err(PmError::NotAMetric(format!("d({i},{i}) = {} ≠ 0", d[i][i])));
        }
        for j in 0..n {
            let v = d[i][j];
            if !v.is_finite() || v < 0.0 {
                return Err(PmError::NotAMetric(format!("d({i},{j}) = {v} is not a finite nonnegative number")));
            }
            if i != j && v == 0.0 {
                return Err(PmError::NotAMetric(format!("d({i},{j}) = 0 for distinct points")));
            }
            if v != d[j][i] {
                return Err(PmError::NotAMetric(format!("d({i},{j}) ≠ d({j},{i})")));
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if d[x][z] > d[x][y] + d[y][z] {
                    return Err(PmError::NotAMetric(format!(
                        "d({x},{z}) > d({x},{y}) + d({y},{z})"
                    )));
                }
            }
        }
    }
    Ok(())
}
