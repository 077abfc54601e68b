//! Probabilistic 1-Lipschitz maps `f : G → Δ+` with
//! `D(x,y) ⋆ f(y) ≤ f(x)`, their envelopes, and C-contractions.

mod contraction;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distribution::Distribution;
use crate::levy::{levy_distance, LevyResult};
use crate::pmspace::{PMSpace, PmError};
use crate::tolerance::Tolerances;
use crate::triangle::TriangleFn;

pub use contraction::{fixpoint_iterate, is_c_contraction, ContractionCheck, FixpointCertificate};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LipschitzError {
    #[error("map has no value at point {0:?}")]
    MissingPoint(String),
    #[error("unknown point {0:?}")]
    UnknownPoint(String),
    #[error("triangle function {0} does not distribute over finite maxima; envelopes need kind sum or max")]
    UnsupportedTriangleFn(TriangleFn),
    #[error("subset is empty")]
    EmptySubset,
    #[error("map {index} is not probabilistic 1-Lipschitz (pair ({x}, {y}))")]
    NotLipschitz { index: usize, x: String, y: String },
    #[error("q = {0} is outside (0, 1)")]
    QOutOfRange(f64),
    #[error("k·q = {k}·{q} is not below 1")]
    KQTooLarge { k: f64, q: f64 },
    #[error("not a C-contraction: witness pair ({x}, {y})")]
    NotContraction { x: String, y: String },
    #[error("no fixed point reached after {0} iterations")]
    NoConvergence(usize),
    #[error(transparent)]
    Space(PmError),
}

impl From<PmError> for LipschitzError {
    fn from(e: PmError) -> Self {
        match e {
            PmError::UnknownPoint(p) => LipschitzError::UnknownPoint(p),
            other => LipschitzError::Space(other),
        }
    }
}

/// A candidate probabilistic 1-Lipschitz map, keyed by point label.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProbLipMap {
    pub values: BTreeMap<String, Distribution>,
}

/// A map from the point set to itself, keyed by point label.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelfMap {
    pub map: BTreeMap<String, String>,
}

impl ProbLipMap {
    pub fn get(&self, label: &str) -> Option<&Distribution> {
        self.values.get(label)
    }

    /// Values in the space's point order.
    fn resolve<'a>(&'a self, space: &PMSpace) -> Result<Vec<&'a Distribution>, LipschitzError> {
        for label in self.values.keys() {
            space.index_of(label)?;
        }
        space
            .points()
            .iter()
            .map(|p| {
                self.values
                    .get(p)
                    .ok_or_else(|| LipschitzError::MissingPoint(p.clone()))
            })
            .collect()
    }
}

impl SelfMap {
    /// Image indices in the space's point order.
    pub fn resolve(&self, space: &PMSpace) -> Result<Vec<usize>, LipschitzError> {
        for label in self.map.keys() {
            space.index_of(label)?;
        }
        space
            .points()
            .iter()
            .map(|p| {
                let image = self
                    .map
                    .get(p)
                    .ok_or_else(|| LipschitzError::MissingPoint(p.clone()))?;
                Ok(space.index_of(image)?)
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LipReport {
    /// Ordered pairs `(x, y)` with `D(x,y) ⋆ f(y) ≰ f(x)`, sorted.
    pub violations: Vec<(usize, usize)>,
}

impl LipReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn check_lip1(space: &PMSpace, f: &ProbLipMap) -> Result<LipReport, LipschitzError> {
    let values = f.resolve(space)?;
    Ok(lip1_violations(space, &values))
}

fn lip1_violations(space: &PMSpace, values: &[&Distribution]) -> LipReport {
    let n = space.len();
    let tf = space.triangle();
    let violations = (0..n)
        .into_par_iter()
        .flat_map_iter(|x| {
            (0..n)
                .filter(move |&y| !tf.star(space.dist(x, y), values[y]).leq(values[x]))
                .map(move |y| (x, y))
                .collect::<Vec<_>>()
        })
        .collect();
    LipReport { violations }
}

/// `δ_x : y ↦ D(y, x)`.
pub fn delta(space: &PMSpace, x: &str) -> Result<ProbLipMap, LipschitzError> {
    let xi = space.index_of(x)?;
    let values = space
        .points()
        .iter()
        .enumerate()
        .map(|(y, label)| (label.clone(), space.dist(y, xi).clone()))
        .collect();
    Ok(ProbLipMap { values })
}

/// `d_∞(f, g) = max_x d_L(f(x), g(x))` as an enclosure. Both maps must be
/// defined on the same labels.
pub fn uniform_dist(
    f: &ProbLipMap,
    g: &ProbLipMap,
    bisect_tol: f64,
) -> Result<LevyResult, LipschitzError> {
    if let Some(label) = g.values.keys().find(|k| !f.values.contains_key(*k)) {
        return Err(LipschitzError::MissingPoint(label.clone()));
    }
    let mut out = LevyResult::exact(0.0);
    for (label, fx) in &f.values {
        let gx = g
            .values
            .get(label)
            .ok_or_else(|| LipschitzError::MissingPoint(label.clone()))?;
        out = out.max(levy_distance(fx, gx, bisect_tol));
    }
    Ok(out)
}

/// `f̃_A(x) = max_{y ∈ A} f(y) ⋆ D(x, y)`.
///
/// Only sum and max kinds are accepted, since the result is 1-Lipschitz when
/// `⋆` distributes over finite pointwise maxima. `f` needs values on `A`
/// only.
pub fn envelope(
    space: &PMSpace,
    f: &ProbLipMap,
    subset: &[String],
) -> Result<ProbLipMap, LipschitzError> {
    let tf = space.triangle();
    if !tf.is_sup_continuous() {
        return Err(LipschitzError::UnsupportedTriangleFn(tf));
    }
    if subset.is_empty() {
        return Err(LipschitzError::EmptySubset);
    }
    let mut data = Vec::with_capacity(subset.len());
    for label in subset {
        let yi = space.index_of(label)?;
        let fy = f
            .get(label)
            .ok_or_else(|| LipschitzError::MissingPoint(label.clone()))?;
        data.push((yi, fy));
    }
    let values = space
        .points()
        .par_iter()
        .enumerate()
        .map(|(x, label)| {
            let terms: Vec<Distribution> = data
                .iter()
                .map(|&(y, fy)| tf.star(fy, space.dist(x, y)))
                .collect();
            (label.clone(), Distribution::pointwise_max(&terms))
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(ProbLipMap { values })
}

/// Decides `lhs ≤ factor·rhs + slack` for two Lévy distances.
///
/// When the bisection enclosures leave the answer open, both distances are
/// recomputed once at a hundredth of the tolerance and the midpoint values
/// decide.
pub(crate) fn enclosure_le(
    eval: impl Fn(f64) -> (LevyResult, LevyResult),
    factor: f64,
    tol: &Tolerances,
) -> bool {
    let (lhs, rhs) = eval(tol.bisect);
    if lhs.upper <= factor * rhs.lower + tol.assert {
        return true;
    }
    if lhs.lower > factor * rhs.upper + tol.assert {
        return false;
    }
    let (lhs, rhs) = eval(tol.bisect / 100.0);
    lhs.value <= factor * rhs.value + tol.assert
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquicontinuityViolation {
    pub map: usize,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EquicontinuityReport {
    pub k: f64,
    pub violations: Vec<EquicontinuityViolation>,
}

impl EquicontinuityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `d_L(f(x), f(y)) ≤ k·d_L(D(x,y), H_0) + tol.assert` for every map
/// and pair. Every map must first pass [`check_lip1`].
pub fn equicontinuity_check(
    space: &PMSpace,
    fs: &[ProbLipMap],
    tol: &Tolerances,
) -> Result<EquicontinuityReport, LipschitzError> {
    let mut resolved = Vec::with_capacity(fs.len());
    for (index, f) in fs.iter().enumerate() {
        let values = f.resolve(space)?;
        let report = lip1_violations(space, &values);
        if let Some(&(x, y)) = report.violations.first() {
            return Err(not_lipschitz(space, index, x, y));
        }
        resolved.push(values);
    }
    let n = space.len();
    let k = space.triangle().lipschitz_k();
    let h0 = Distribution::h0();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let mut violations: Vec<EquicontinuityViolation> = resolved
        .par_iter()
        .enumerate()
        .flat_map_iter(|(map, values)| {
            pairs
                .iter()
                .filter(|&&(x, y)| {
                    !enclosure_le(
                        |b| {
                            (
                                levy_distance(values[x], values[y], b),
                                levy_distance(space.dist(x, y), &h0, b),
                            )
                        },
                        k,
                        tol,
                    )
                })
                .map(move |&(x, y)| EquicontinuityViolation { map, x, y })
                .collect::<Vec<_>>()
        })
        .collect();
    violations.sort_by_key(|v| (v.map, v.x, v.y));
    Ok(EquicontinuityReport { k, violations })
}

fn not_lipschitz(space: &PMSpace, index: usize, x: usize, y: usize) -> LipschitzError {
    LipschitzError::NotLipschitz {
        index,
        x: space.points()[x].clone(),
        y: space.points()[y].clone(),
    }
}

/// Closure of the 1-Lipschitz maps under uniform limits, at finite scale.
///
/// Every `fs[n]` must pass [`check_lip1`]; otherwise the family is rejected
/// with `NotLipschitz`. If the last element is within `conv_tol` of `f` in
/// `d_∞`, the result is whether `f` itself passes [`check_lip1`]. A prefix
/// that has not converged yields `Ok(None)`.
pub fn limit_closure_check(
    space: &PMSpace,
    fs: &[ProbLipMap],
    f: &ProbLipMap,
    conv_tol: f64,
    bisect_tol: f64,
) -> Result<Option<bool>, LipschitzError> {
    for (index, g) in fs.iter().enumerate() {
        let report = check_lip1(space, g)?;
        if let Some(&(x, y)) = report.violations.first() {
            return Err(not_lipschitz(space, index, x, y));
        }
    }
    let Some(last) = fs.last() else {
        return Ok(None);
    };
    if uniform_dist(last, f, bisect_tol)?.upper >= conv_tol {
        return Ok(None);
    }
    Ok(Some(check_lip1(space, f)?.passed()))
}
