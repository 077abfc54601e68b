//! Distance distribution functions in Δ+ represented as finite step functions.
//!
//! A [`Distribution`] is a left-continuous, nondecreasing step function
//! `F : [-∞, +∞] → [0, 1]` with `F(t) = 0` for `t ≤ 0` and `F(+∞) = 1`.
//! It is stored as a strictly increasing list of `(location, level)` jumps;
//! `F(t)` is the level of the last jump whose location lies strictly below
//! `t`. Levels need not reach 1: any missing mass sits at `+∞`.
//!
//! All comparisons inside the algebra are exact. Two distributions are equal
//! as functions iff their canonical jump lists are equal.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DistributionError {
    #[error("jump levels must be strictly increasing in location order (at location {location})")]
    NonMonotone { location: f64 },
    #[error("jump location {0} is negative or not a number")]
    NegativeLocation(f64),
    #[error("jump location {0} is not finite")]
    InfiniteLocation(f64),
    #[error("jump level {0} is outside (0, 1]")]
    LevelOutOfRange(f64),
    #[error("location {0} appears more than once")]
    DuplicateLocation(f64),
}

/// A canonical step distribution function in Δ+.
#[derive(Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDistribution", into = "RawDistribution")]
pub struct Distribution {
    jumps: Vec<(f64, f64)>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDistribution {
    jumps: Vec<(f64, f64)>,
}

impl TryFrom<RawDistribution> for Distribution {
    type Error = DistributionError;

    fn try_from(raw: RawDistribution) -> Result<Self, Self::Error> {
        Distribution::make_step(raw.jumps)
    }
}

impl From<Distribution> for RawDistribution {
    fn from(d: Distribution) -> Self {
        RawDistribution { jumps: d.jumps }
    }
}

impl Distribution {
    /// Builds a canonical distribution from a list of `(location, level)` jumps.
    ///
    /// The input is sorted by location; after sorting, both coordinates must
    /// be strictly increasing. Non-monotone input is rejected, never repaired.
    pub fn make_step(jumps: impl Into<Vec<(f64, f64)>>) -> Result<Self, DistributionError> {
        let mut jumps = jumps.into();
        for &(loc, level) in &jumps {
            if loc.is_nan() || loc < 0.0 {
                return Err(DistributionError::NegativeLocation(loc));
            }
            if loc.is_infinite() {
                return Err(DistributionError::InfiniteLocation(loc));
            }
            if !(level > 0.0 && level <= 1.0) {
                return Err(DistributionError::LevelOutOfRange(level));
            }
        }
        jumps.sort_by(|a, b| a.0.total_cmp(&b.0));
        for w in jumps.windows(2) {
            if w[0].0 == w[1].0 {
                return Err(DistributionError::DuplicateLocation(w[1].0));
            }
            if w[1].1 <= w[0].1 {
                return Err(DistributionError::NonMonotone { location: w[1].0 });
            }
        }
        Ok(Distribution { jumps })
    }

    /// The Heaviside distribution `H_a`: 0 on `t ≤ a`, 1 on `t > a`.
    ///
    /// `a = +∞` gives the minimal element of Δ+ (all mass at infinity).
    pub fn heaviside(a: f64) -> Result<Self, DistributionError> {
        if a.is_nan() || a < 0.0 {
            return Err(DistributionError::NegativeLocation(a));
        }
        if a.is_infinite() {
            return Ok(Self::infinity());
        }
        Ok(Distribution {
            jumps: vec![(a, 1.0)],
        })
    }

    /// `H_0`, the maximal element of Δ+ and the neutral element of every
    /// triangle function.
    pub fn h0() -> Self {
        Distribution {
            jumps: vec![(0.0, 1.0)],
        }
    }

    /// `H_∞`, the distribution that is zero at every finite argument.
    pub fn infinity() -> Self {
        Distribution { jumps: Vec::new() }
    }

    pub fn jumps(&self) -> &[(f64, f64)] {
        &self.jumps
    }

    pub fn is_h0(&self) -> bool {
        self.jumps == [(0.0, 1.0)]
    }

    /// Largest jump location, or 0 when there are no finite jumps.
    pub fn max_location(&self) -> f64 {
        self.jumps.last().map_or(0.0, |j| j.0)
    }

    /// Level reached just after the last jump (`sup_{t<∞} F(t)`).
    pub fn final_level(&self) -> f64 {
        self.jumps.last().map_or(0.0, |j| j.1)
    }

    /// Left-continuous evaluation `F(t)`; `F(+∞) = 1` and `F(-∞) = 0`.
    pub fn eval(&self, t: f64) -> f64 {
        if t == f64::INFINITY {
            return 1.0;
        }
        let n = self.jumps.partition_point(|&(loc, _)| loc < t);
        if n == 0 {
            0.0
        } else {
            self.jumps[n - 1].1
        }
    }

    /// Right limit `lim_{s↓t} F(s)`: the level of the last jump at or below `t`.
    pub fn eval_right(&self, t: f64) -> f64 {
        let n = self.jumps.partition_point(|&(loc, _)| loc <= t);
        if n == 0 {
            0.0
        } else {
            self.jumps[n - 1].1
        }
    }

    /// Pointwise order `F ≤ G` on the whole extended line.
    ///
    /// Both sides are constant on each interval `(p, q]` between consecutive
    /// breakpoints of either function, so comparing right limits at every
    /// breakpoint decides the order exactly.
    pub fn leq(&self, other: &Distribution) -> bool {
        merged_locations(&[self, other])
            .into_iter()
            .all(|p| self.eval_right(p) <= other.eval_right(p))
    }

    /// Least upper bound of a nonempty family under the pointwise order.
    ///
    /// # Panics
    ///
    /// Panics if `family` is empty.
    pub fn pointwise_max<'a>(family: impl IntoIterator<Item = &'a Distribution>) -> Distribution {
        let family: Vec<&Distribution> = family.into_iter().collect();
        assert!(!family.is_empty(), "pointwise_max of an empty family");
        Self::lattice_op(&family, |a, b| a.max(b))
    }

    /// Greatest lower bound of a nonempty family under the pointwise order.
    ///
    /// # Panics
    ///
    /// Panics if `family` is empty.
    pub fn pointwise_min<'a>(family: impl IntoIterator<Item = &'a Distribution>) -> Distribution {
        let family: Vec<&Distribution> = family.into_iter().collect();
        assert!(!family.is_empty(), "pointwise_min of an empty family");
        Self::lattice_op(&family, |a, b| a.min(b))
    }

    fn lattice_op(family: &[&Distribution], op: impl Fn(f64, f64) -> f64) -> Distribution {
        let mut builder = StepBuilder::default();
        for p in merged_locations(family) {
            let level = family
                .iter()
                .map(|d| d.eval_right(p))
                .reduce(&op)
                .unwrap_or(0.0);
            builder.push(p, level);
        }
        builder.finish()
    }

    /// Translation `τ_λ F(t) = F(t - λ)`, moving every jump right by `lambda`.
    pub fn shift(&self, lambda: f64) -> Result<Distribution, DistributionError> {
        Distribution::make_step(
            self.jumps
                .iter()
                .map(|&(loc, lvl)| (loc + lambda, lvl))
                .collect::<Vec<_>>(),
        )
    }

    /// Argument scaling `t ↦ F(t / factor)`; jump locations are multiplied
    /// by `factor`. A zero factor collapses the distribution onto `H_0`.
    pub fn scale(&self, factor: f64) -> Result<Distribution, DistributionError> {
        if factor.is_nan() || factor < 0.0 {
            return Err(DistributionError::NegativeLocation(factor));
        }
        if factor == 0.0 {
            return Ok(Distribution::h0());
        }
        Distribution::make_step(
            self.jumps
                .iter()
                .map(|&(loc, lvl)| (loc * factor, lvl))
                .collect::<Vec<_>>(),
        )
    }
}

impl fmt::Debug for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Distribution{:?}", self.jumps)
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_h0() {
            return write!(f, "H_0");
        }
        if self.jumps.len() == 1 && self.jumps[0].1 == 1.0 {
            return write!(f, "H_{}", self.jumps[0].0);
        }
        if self.jumps.is_empty() {
            return write!(f, "H_inf");
        }
        write!(f, "[")?;
        for (i, (loc, lvl)) in self.jumps.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "({loc}, {lvl})")?;
        }
        write!(f, "]")
    }
}

/// Sorted, deduplicated union of the jump locations of `family`.
pub(crate) fn merged_locations(family: &[&Distribution]) -> Vec<f64> {
    let mut locs: Vec<f64> = family
        .iter()
        .flat_map(|d| d.jumps.iter().map(|j| j.0))
        .collect();
    locs.sort_by(f64::total_cmp);
    locs.dedup();
    locs
}

/// Accumulates `(location, level-after-location)` samples in nondecreasing
/// location order and emits the canonical step function.
///
/// Samples whose level does not exceed the running maximum are dropped, and a
/// repeated location keeps the largest level offered for it.
#[derive(Default)]
pub(crate) struct StepBuilder {
    jumps: Vec<(f64, f64)>,
}

impl StepBuilder {
    pub(crate) fn push(&mut self, loc: f64, level: f64) {
        let current = self.jumps.last().map_or(0.0, |j| j.1);
        if level <= current {
            return;
        }
        debug_assert!(self.jumps.last().is_none_or(|j| j.0 <= loc));
        match self.jumps.last_mut() {
            Some(last) if last.0 == loc => last.1 = level,
            _ => self.jumps.push((loc, level)),
        }
    }

    pub(crate) fn finish(self) -> Distribution {
        Distribution { jumps: self.jumps }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn two_step() -> Distribution {
        Distribution::make_step(vec![(1.0, 0.5), (3.0, 1.0)]).unwrap()
    }

    #[test]
    fn make_step_examples() {
        assert_eq!(
            Distribution::make_step(vec![(0.0, 1.0)]).unwrap(),
            Distribution::h0()
        );
        let f = two_step();
        assert_eq!(f.eval(2.0), 0.5);
        assert_eq!(f.eval(4.0), 1.0);
        assert_eq!(
            Distribution::make_step(vec![(1.0, 0.8), (2.0, 0.5)]),
            Err(DistributionError::NonMonotone { location: 2.0 })
        );
    }

    #[test]
    fn make_step_sorts_and_rejects_bad_input() {
        let f = Distribution::make_step(vec![(3.0, 1.0), (1.0, 0.5)]).unwrap();
        assert_eq!(f, two_step());
        assert!(matches!(
            Distribution::make_step(vec![(-1.0, 0.5)]),
            Err(DistributionError::NegativeLocation(_))
        ));
        assert!(matches!(
            Distribution::make_step(vec![(1.0, 0.0)]),
            Err(DistributionError::LevelOutOfRange(_))
        ));
        assert!(matches!(
            Distribution::make_step(vec![(1.0, 1.5)]),
            Err(DistributionError::LevelOutOfRange(_))
        ));
        assert!(matches!(
            Distribution::make_step(vec![(1.0, 0.2), (1.0, 0.5)]),
            Err(DistributionError::DuplicateLocation(_))
        ));
        assert!(matches!(
            Distribution::make_step(vec![(f64::INFINITY, 0.5)]),
            Err(DistributionError::InfiniteLocation(_))
        ));
    }

    #[test]
    fn heaviside_semantics() {
        let h0 = Distribution::heaviside(0.0).unwrap();
        assert_eq!(h0.eval(0.5), 1.0);
        assert_eq!(h0.eval(0.0), 0.0);
        let h2 = Distribution::heaviside(2.0).unwrap();
        assert_eq!(h2.eval(2.0), 0.0);
        assert_eq!(h2.eval(5.0), 1.0);
        let hinf = Distribution::heaviside(f64::INFINITY).unwrap();
        assert!(hinf.jumps().is_empty());
        assert_eq!(hinf.eval(1e300), 0.0);
        assert_eq!(hinf.eval(f64::INFINITY), 1.0);
        assert!(Distribution::heaviside(-0.5).is_err());
    }

    #[test]
    fn eval_and_right_limits() {
        let f = two_step();
        assert_eq!(f.eval(3.0), 0.5);
        assert_eq!(f.eval(f64::INFINITY), 1.0);
        assert_eq!(Distribution::infinity().eval(f64::INFINITY), 1.0);
        let h2 = Distribution::heaviside(2.0).unwrap();
        assert_eq!(h2.eval_right(2.0), 1.0);
        assert_eq!(h2.eval_right(1.9), 0.0);
        assert_eq!(f.eval_right(1.0), 0.5);
    }

    #[test]
    fn order_examples() {
        let h1 = Distribution::heaviside(1.0).unwrap();
        let h2 = Distribution::heaviside(2.0).unwrap();
        let f = two_step();
        assert!(f.leq(&Distribution::h0()));
        assert!(h2.leq(&h1));
        assert!(!h1.leq(&h2));
        assert!(f.leq(&f));
        assert!(Distribution::infinity().leq(&f));
    }

    #[test]
    fn max_examples() {
        let h1 = Distribution::heaviside(1.0).unwrap();
        let h3 = Distribution::heaviside(3.0).unwrap();
        assert_eq!(Distribution::pointwise_max([&h1, &h3]), h1);
        let f = two_step();
        assert_eq!(Distribution::pointwise_max([&f]), f);
    }

    #[test]
    fn max_of_crossing_steps_matches_grid() {
        let f = Distribution::make_step(vec![(0.5, 0.2), (2.0, 0.9)]).unwrap();
        let g = Distribution::make_step(vec![(1.0, 0.6), (4.0, 1.0)]).unwrap();
        let m = Distribution::pointwise_max([&f, &g]);
        // union of breakpoints ± ε plus a dense sweep
        let mut grid: Vec<f64> = (0..=1000).map(|i| i as f64 * 0.005).collect();
        for p in [0.5, 1.0, 2.0, 4.0] {
            grid.extend([p - 1e-9, p, p + 1e-9]);
        }
        for t in grid {
            assert_eq!(m.eval(t), f.eval(t).max(g.eval(t)), "t = {t}");
        }
    }

    #[test]
    fn serde_shape() {
        let h = Distribution::heaviside(0.2).unwrap();
        assert_eq!(serde_json::to_string(&h).unwrap(), r#"{"jumps":[[0.2,1.0]]}"#);
        let back: Distribution = serde_json::from_str(r#"{"jumps":[[1,0.5],[3,1]]}"#).unwrap();
        assert_eq!(back, two_step());
        assert!(serde_json::from_str::<Distribution>(r#"{"jumps":[[1,0.8],[2,0.5]]}"#).is_err());
    }

    fn arb_distribution() -> impl Strategy<Value = Distribution> {
        prop::collection::btree_map(0u32..40, 1u32..=16, 0..6).prop_map(|m| {
            let mut levels: Vec<u32> = m.values().copied().collect();
            levels.sort_unstable();
            levels.dedup();
            let jumps: Vec<(f64, f64)> = m
                .keys()
                .zip(levels)
                .map(|(&loc, lvl)| (loc as f64 / 4.0, lvl as f64 / 16.0))
                .collect();
            Distribution::make_step(jumps).unwrap()
        })
    }

    proptest! {
        #[test]
        fn left_limit_below_right_limit(f in arb_distribution(), t in 0.0f64..12.0) {
            prop_assert!(f.eval(t) <= f.eval_right(t));
            let at_jump = f.jumps().iter().any(|j| j.0 == t);
            if !at_jump {
                prop_assert_eq!(f.eval(t), f.eval_right(t));
            }
            prop_assert_eq!(f.eval(0.0), 0.0);
        }

        #[test]
        fn round_trip(f in arb_distribution()) {
            prop_assert_eq!(Distribution::make_step(f.jumps().to_vec()).unwrap(), f);
        }

        #[test]
        fn leq_is_partial_order(
            f in arb_distribution(),
            g in arb_distribution(),
            h in arb_distribution(),
        ) {
            prop_assert!(f.leq(&f));
            if f.leq(&g) && g.leq(&f) {
                prop_assert_eq!(&f, &g);
            }
            if f.leq(&g) && g.leq(&h) {
                prop_assert!(f.leq(&h));
            }
        }

        #[test]
        fn max_is_least_upper_bound(
            f in arb_distribution(),
            g in arb_distribution(),
            u in arb_distribution(),
        ) {
            let m = Distribution::pointwise_max([&f, &g]);
            prop_assert!(f.leq(&m) && g.leq(&m));
            if f.leq(&u) && g.leq(&u) {
                prop_assert!(m.leq(&u));
            }
            let n = Distribution::pointwise_min([&f, &g]);
            prop_assert!(n.leq(&f) && n.leq(&g));
        }
    }
}
