//! The modified Lévy metric on Δ+.
//!
//! For `h > 0` let `A^h(F, G) = { t ≥ 0 : G(t) ≤ F(t + h) + h }`. The distance
//! `d_L(F, G)` is the infimum of the `h` for which `[0, 1/h)` lies inside both
//! `A^h(F, G)` and `A^h(G, F)`. For step functions the inclusion is decided
//! exactly for a fixed `h` ([`admissible`]), and the infimum is located by
//! bisection ([`levy_distance`]): the admissible set is up-closed in `h` and
//! always contains `[1, ∞)`.

use thiserror::Error;

use crate::distribution::Distribution;

pub const DEFAULT_BISECT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LevyError {
    #[error("h must be positive, got {0}")]
    NonPositiveH(f64),
}

/// An enclosure of a Lévy distance produced by bisection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyResult {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub iterations: u32,
}

impl LevyResult {
    pub fn exact(value: f64) -> Self {
        LevyResult {
            value,
            lower: value,
            upper: value,
            iterations: 0,
        }
    }

    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    /// Componentwise maximum of two enclosures; used for sup-type distances
    /// over finite index sets.
    pub fn max(self, other: LevyResult) -> LevyResult {
        LevyResult {
            value: self.value.max(other.value),
            lower: self.lower.max(other.lower),
            upper: self.upper.max(other.upper),
            iterations: self.iterations.max(other.iterations),
        }
    }
}

/// Decides whether `[0, 1/h) ⊂ A^h(F, G) ∩ A^h(G, F)`.
pub fn admissible(f: &Distribution, g: &Distribution, h: f64) -> Result<bool, LevyError> {
    if !(h > 0.0) {
        return Err(LevyError::NonPositiveH(h));
    }
    if h >= 1.0 {
        return Ok(true);
    }
    Ok(one_sided(f, g, h) && one_sided(g, f, h))
}

/// `[0, 1/h) ⊂ A^h(F, G)`, i.e. `G(t) ≤ F(t + h) + h` for all `t < 1/h`.
///
/// `t ↦ G(t) - F(t + h)` is constant on every interval `(p, q]` between
/// consecutive points of `{0} ∪ locs(G) ∪ (locs(F) - h)`, where it equals
/// `G(p+) - F((p + h)+)`. Checking those right limits for every such `p`
/// below `1/h` is therefore exact. `t = 0` itself always passes since `G(0) = 0`.
fn one_sided(f: &Distribution, g: &Distribution, h: f64) -> bool {
    let horizon = 1.0 / h;
    if g.eval_right(0.0) > f.eval_right(h) + h {
        return false;
    }
    for &(a, g_level) in g.jumps() {
        if a >= horizon {
            break;
        }
        if g_level > f.eval_right(a + h) + h {
            return false;
        }
    }
    for &(b, f_level) in f.jumps() {
        let p = b - h;
        if p <= 0.0 {
            continue;
        }
        if p >= horizon {
            break;
        }
        // F((p + h)+) is the level reached at b itself; use it directly
        // rather than re-deriving b from the rounded sum p + h.
        if g.eval_right(p) > f_level + h {
            return false;
        }
    }
    true
}

/// Modified Lévy distance by bisection on `h ∈ (0, 1]`.
///
/// Equal canonical arguments short-circuit to an exact zero. Otherwise the
/// returned bracket `[lower, upper]` has width at most `bisect_tol`, `upper`
/// is admissible, and `value` is the bracket midpoint.
pub fn levy_distance(f: &Distribution, g: &Distribution, bisect_tol: f64) -> LevyResult {
    if f == g {
        return LevyResult::exact(0.0);
    }
    let tol = if bisect_tol > 0.0 {
        bisect_tol
    } else {
        DEFAULT_BISECT_TOL
    };
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if one_sided(f, g, mid) && one_sided(g, f, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
    }
    LevyResult {
        value: 0.5 * (lo + hi),
        lower: lo,
        upper: hi,
        iterations,
    }
}

/// Closed form of `d_L(H_a, H_b) = min(1, |b - a|, 1 / min(a, b))`, with
/// `1/0 = +∞`.
pub fn heaviside_closed_form(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let m = a.min(b);
    let inv = if m == 0.0 { f64::INFINITY } else { 1.0 / m };
    1.0f64.min((b - a).abs()).min(inv)
}

/// Finite-prefix proxy for weak convergence `F_n → F`.
///
/// Weak convergence is a limit statement, so this only inspects the prefix:
/// it holds when the last distance is below `tol` and the distances over the
/// second half of the prefix never increase by more than `tol`. This is a
/// test utility, not a decision procedure.
pub fn weakly_converges(seq: &[Distribution], limit: &Distribution, tol: f64) -> bool {
    if seq.is_empty() {
        return false;
    }
    let dists: Vec<f64> = seq
        .iter()
        .map(|fn_| levy_distance(fn_, limit, DEFAULT_BISECT_TOL).value)
        .collect();
    let last = *dists.last().unwrap();
    if !(last < tol) {
        return false;
    }
    let tail = &dists[dists.len() / 2..];
    tail.windows(2).all(|w| w[1] <= w[0] + tol)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn h(a: f64) -> Distribution {
        Distribution::heaviside(a).unwrap()
    }

    #[test]
    fn admissible_examples() {
        let f = Distribution::make_step(vec![(1.0, 0.5), (3.0, 1.0)]).unwrap();
        let g = h(7.0);
        assert!(admissible(&f, &g, 1.0).unwrap());
        assert!(admissible(&h(0.2), &h(0.5), 0.31).unwrap());
        assert!(!admissible(&h(0.2), &h(0.5), 0.29).unwrap());
        for hv in [1e-6, 0.01, 0.3, 0.9, 2.0] {
            assert!(admissible(&f, &f, hv).unwrap());
        }
        assert_eq!(admissible(&f, &g, 0.0), Err(LevyError::NonPositiveH(0.0)));
        assert!(admissible(&f, &g, -1.0).is_err());
    }

    #[test]
    fn heaviside_distances() {
        let tol = DEFAULT_BISECT_TOL;
        let f = Distribution::make_step(vec![(1.0, 0.5), (3.0, 1.0)]).unwrap();
        assert_eq!(levy_distance(&f, &f, tol).value, 0.0);
        assert!((levy_distance(&h(2.0), &h(5.0), tol).value - 0.5).abs() <= tol);
        assert!((levy_distance(&h(0.2), &h(0.5), tol).value - 0.3).abs() <= tol);
        let r = levy_distance(&h(0.2), &h(0.5), tol);
        assert!(r.lower <= r.value && r.value <= r.upper && r.width() <= tol);
    }

    #[test]
    fn closed_form_examples() {
        assert!((heaviside_closed_form(0.2, 0.5) - 0.3).abs() < 1e-15);
        assert_eq!(heaviside_closed_form(2.0, 3.0), 0.5);
        assert_eq!(heaviside_closed_form(4.0, 4.0), 0.0);
        assert!((heaviside_closed_form(1.5, 9.0) - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(heaviside_closed_form(0.0, 7.0), 1.0);
        assert_eq!(heaviside_closed_form(0.0, 0.25), 0.25);
        assert_eq!(heaviside_closed_form(4.0, f64::INFINITY), 0.25);
    }

    #[test]
    fn infinity_is_at_distance_one_from_h0() {
        let r = levy_distance(&Distribution::infinity(), &Distribution::h0(), DEFAULT_BISECT_TOL);
        assert!((r.value - 1.0).abs() <= DEFAULT_BISECT_TOL);
    }

    #[test]
    fn weak_convergence_examples() {
        let approaching: Vec<_> = (1..=50).map(|n| h(1.0 + 1.0 / n as f64)).collect();
        assert!(weakly_converges(&approaching, &h(1.0), 0.05));
        let escaping: Vec<_> = (1..=50).map(|n| h(n as f64)).collect();
        assert!(!weakly_converges(&escaping, &h(0.0), 0.05));
        let f = Distribution::make_step(vec![(1.0, 0.5), (3.0, 1.0)]).unwrap();
        assert!(weakly_converges(&[f.clone(), f.clone(), f.clone()], &f, 1e-9));
        assert!(!weakly_converges(&[], &f, 1e-9));
    }
}
