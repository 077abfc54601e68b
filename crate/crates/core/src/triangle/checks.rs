use rayon::prelude::*;

use super::star::{TriangleFn, TriangleOp};
use crate::distribution::Distribution;
use crate::levy::levy_distance;

/// The five defining properties of a triangle function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Axiom {
    /// The result is a canonical element of Δ+.
    Closure,
    Commutativity,
    Associativity,
    NeutralElement,
    Monotonicity,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomFailure {
    pub sample: usize,
    /// Every axiom that fails on this sample, in declaration order.
    pub axioms: Vec<Axiom>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AxiomReport {
    pub samples_checked: usize,
    /// The failure with the smallest sample index, if any.
    pub first_failure: Option<AxiomFailure>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Checks closure, commutativity, associativity, the neutral element and
/// monotonicity on every `(F, G, K)` sample, all by exact canonical equality
/// or exact order.
///
/// Monotonicity is exercised with `L = max(F, G) ≥ F`, checking
/// `F ⋆ K ≤ L ⋆ K`, and additionally with `G` itself whenever `F ≤ G`.
pub fn check_triangle_axioms<O: TriangleOp>(
    op: &O,
    samples: &[(Distribution, Distribution, Distribution)],
) -> AxiomReport {
    let first_failure = samples
        .par_iter()
        .enumerate()
        .filter_map(|(i, (f, g, k))| {
            let axioms = broken_axioms(op, f, g, k);
            (!axioms.is_empty()).then_some(AxiomFailure { sample: i, axioms })
        })
        .min_by_key(|fail| fail.sample);
    AxiomReport {
        samples_checked: samples.len(),
        first_failure,
    }
}

fn broken_axioms<O: TriangleOp>(
    op: &O,
    f: &Distribution,
    g: &Distribution,
    k: &Distribution,
) -> Vec<Axiom> {
    let mut broken = Vec::new();
    let fg = op.apply(f, g);
    let canonical = Distribution::make_step(fg.jumps().to_vec())
        .map(|d| d == fg)
        .unwrap_or(false);
    if !canonical || fg.eval(0.0) != 0.0 {
        broken.push(Axiom::Closure);
    }
    if op.apply(g, f) != fg {
        broken.push(Axiom::Commutativity);
    }
    if op.apply(f, &op.apply(g, k)) != op.apply(&fg, k) {
        broken.push(Axiom::Associativity);
    }
    if op.apply(f, &Distribution::h0()) != *f {
        broken.push(Axiom::NeutralElement);
    }
    let upper = Distribution::pointwise_max([f, g]);
    let fk = op.apply(f, k);
    let monotone = fk.leq(&op.apply(&upper, k)) && (!f.leq(g) || fk.leq(&op.apply(g, k)));
    if !monotone {
        broken.push(Axiom::Monotonicity);
    }
    broken
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzViolation {
    pub sample: usize,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzReport {
    pub k: f64,
    pub samples_checked: usize,
    pub violations: Vec<LipschitzViolation>,
    /// Largest observed `d_L(F⋆G, F'⋆G') / (d_L(F,F') + d_L(G,G'))` over
    /// samples with a nonzero denominator.
    pub max_ratio: f64,
}

impl LipschitzReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks `d_L(F⋆G, F'⋆G') ≤ k·(d_L(F,F') + d_L(G,G')) + tol` on every
/// `(F, F', G, G')` sample.
pub fn check_lipschitz(
    tf: &TriangleFn,
    samples: &[(Distribution, Distribution, Distribution, Distribution)],
    tol: f64,
    bisect_tol: f64,
) -> LipschitzReport {
    let k = tf.lipschitz_k();
    let outcomes: Vec<(f64, f64)> = samples
        .par_iter()
        .map(|(f, f2, g, g2)| {
            let lhs = levy_distance(&tf.star(f, g), &tf.star(f2, g2), bisect_tol).value;
            let rhs = levy_distance(f, f2, bisect_tol).value + levy_distance(g, g2, bisect_tol).value;
            (lhs, rhs)
        })
        .collect();
    let mut violations = Vec::new();
    let mut max_ratio = 0.0f64;
    for (i, &(lhs, rhs)) in outcomes.iter().enumerate() {
        if lhs > k * rhs + tol {
            violations.push(LipschitzViolation { sample: i, lhs, rhs });
        }
        if rhs > 0.0 {
            max_ratio = max_ratio.max(lhs / rhs);
        }
    }
    LipschitzReport {
        k,
        samples_checked: samples.len(),
        violations,
        max_ratio,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distribution::StepBuilder;
    use crate::triangle::{TNorm, TriangleKind};

    fn d(j: &[(f64, f64)]) -> Distribution {
        Distribution::make_step(j.to_vec()).unwrap()
    }

    fn samples() -> Vec<(Distribution, Distribution, Distribution)> {
        let a = d(&[(0.25, 0.5), (1.0, 1.0)]);
        let b = d(&[(0.5, 0.25), (0.75, 0.5), (2.0, 0.75)]);
        let c = d(&[(0.0, 0.125), (1.5, 1.0)]);
        vec![
            (a.clone(), b.clone(), c.clone()),
            (b.clone(), c.clone(), a.clone()),
            (c.clone(), a.clone(), b.clone()),
            (Distribution::h0(), a.clone(), Distribution::infinity()),
        ]
    }

    #[test]
    fn builtins_pass_on_dyadic_samples() {
        for tf in TriangleFn::all() {
            let report = check_triangle_axioms(&tf, &samples());
            assert!(report.passed(), "{tf}: {:?}", report.first_failure);
            assert_eq!(report.samples_checked, 4);
        }
    }

    /// Sup-convolution over a symmetric level operation that is not monotone.
    struct Broken;

    impl TriangleOp for Broken {
        fn apply(&self, f: &Distribution, g: &Distribution) -> Distribution {
            let mut cand = Vec::new();
            for &(a, fa) in f.jumps() {
                for &(b, gb) in g.jumps() {
                    cand.push((a + b, (1.0 - fa).max(1.0 - gb).max(fa.min(gb))));
                }
            }
            cand.sort_by(|x, y| x.0.total_cmp(&y.0));
            let mut builder = StepBuilder::default();
            for (loc, lvl) in cand {
                builder.push(loc, lvl);
            }
            builder.finish()
        }
    }

    #[test]
    fn broken_operation_fails_monotonicity() {
        let f = d(&[(1.0, 0.25)]);
        let l = d(&[(1.0, 0.5)]);
        let k = d(&[(1.0, 0.5)]);
        assert!(f.leq(&l));
        let report = check_triangle_axioms(&Broken, &[(f, l, k)]);
        let failure = report.first_failure.expect("broken operation passed");
        assert_eq!(failure.sample, 0);
        assert!(failure.axioms.contains(&Axiom::Monotonicity), "{failure:?}");
    }

    #[test]
    fn lipschitz_trivial_and_neutral_cases() {
        let f = d(&[(0.25, 0.5), (1.0, 1.0)]);
        let f2 = d(&[(0.5, 0.5), (1.25, 1.0)]);
        let g = d(&[(0.5, 0.25), (2.0, 1.0)]);
        let tf = TriangleFn::new(TriangleKind::Sum, TNorm::Minimum);
        let same = check_lipschitz(&tf, &[(f.clone(), f.clone(), g.clone(), g.clone())], 1e-9, 1e-12);
        assert!(same.passed());
        assert_eq!(same.max_ratio, 0.0);
        let h0 = Distribution::h0();
        let neutral = check_lipschitz(&tf, &[(f.clone(), f2.clone(), h0.clone(), h0)], 1e-9, 1e-12);
        assert!(neutral.passed());
        assert!((neutral.max_ratio - 1.0).abs() < 1e-9);
    }
}
