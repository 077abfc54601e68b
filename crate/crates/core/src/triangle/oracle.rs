//! Grid brute force for the four triangle-function formulas.
//!
//! Used as a test oracle only. Arguments are sampled on the uniform grid
//! `t_k = k·Δ`, `Δ = t_max / grid`, and the defining sup or inf is taken over
//! grid splittings. Sup-type formulas can only miss contributions, so their
//! sample at `t_k` sits between the exact values at `t_k - Δ` and `t_k`; it is
//! placed on the cell `(t_{k-1}, t_k]`. The inf formula can only overshoot, so
//! its sample sits between the exact values at `t_k` and `t_k + Δ` and is
//! placed on `(t_k, t_{k+1}]`. Either way the returned step function `O`
//! satisfies `R(t - Δ) ≤ O(t) ≤ R(t + Δ)` on `(0, t_max]`, where `R` is the
//! exact result.

use super::star::{TriangleFn, TriangleKind};
use crate::distribution::{Distribution, StepBuilder};

pub const DEFAULT_GRID: usize = 2048;

/// Default horizon: the sum of the largest jump locations plus one spare unit.
pub fn default_t_max(f: &Distribution, g: &Distribution) -> f64 {
    f.max_location() + g.max_location() + 1.0
}

/// # Panics
///
/// Panics if `grid < 2` or `t_max` is not positive.
pub fn star_oracle(
    tf: &TriangleFn,
    f: &Distribution,
    g: &Distribution,
    grid: usize,
    t_max: f64,
) -> Distribution {
    assert!(grid >= 2, "oracle grid must have at least two cells");
    assert!(t_max > 0.0, "oracle horizon must be positive");
    let step = t_max / grid as f64;
    let at = |k: usize| k as f64 * step;
    let t = tf.tnorm;

    let f_left: Vec<f64> = (0..=grid).map(|k| f.eval(at(k))).collect();
    let g_left: Vec<f64> = (0..=grid).map(|k| g.eval(at(k))).collect();
    let f_right: Vec<f64> = (0..=grid).map(|k| f.eval_right(at(k))).collect();

    let samples: Vec<f64> = (0..=grid)
        .map(|k| match tf.kind {
            // u just above u_i, v just below t_k - u_i
            TriangleKind::Sum => (0..=k)
                .map(|i| t.apply(f_right[i], g_left[k - i]))
                .fold(0.0, f64::max),
            TriangleKind::Max => {
                let with_u = (0..=k).map(|j| t.apply(f_left[k], g_left[j]));
                let with_v = (0..=k).map(|i| t.apply(f_left[i], g_left[k]));
                with_u.chain(with_v).fold(0.0, f64::max)
            }
            TriangleKind::Pointwise => t.apply(f_left[k], g_left[k]),
            TriangleKind::Conorm => (0..=k)
                .map(|i| t.apply_conorm(f_left[i], g_left[k - i]))
                .fold(f64::INFINITY, f64::min),
        })
        .collect();

    let mut builder = StepBuilder::default();
    let mut running = 0.0f64;
    match tf.kind {
        TriangleKind::Conorm => {
            for (k, &s) in samples.iter().enumerate() {
                running = running.max(s);
                builder.push(at(k), running);
            }
        }
        _ => {
            for (k, &s) in samples.iter().enumerate().skip(1) {
                running = running.max(s);
                builder.push(at(k - 1), running);
            }
        }
    }
    builder.finish()
}

/// Largest violation of `R(t - Δ) ≤ O(t) ≤ R(t + Δ)` over the grid midpoints
/// `(k + 1/2)·Δ`, `k = 0..grid`. Zero means the oracle and the exact result
/// agree to within one grid cell in argument everywhere on `(0, t_max]`.
pub fn band_violation(exact: &Distribution, oracle: &Distribution, grid: usize, t_max: f64) -> f64 {
    let step = t_max / grid as f64;
    (0..grid)
        .map(|k| {
            let m = (k as f64 + 0.5) * step;
            let o = oracle.eval(m);
            let below = exact.eval(m - step) - o;
            let above = o - exact.eval(m + step);
            below.max(above).max(0.0)
        })
        .fold(0.0, f64::max)
}
