use rayon::prelude::*;

use super::{enclosure_le, LipschitzError, SelfMap};
use crate::distribution::Distribution;
use crate::levy::levy_distance;
use crate::pmspace::PMSpace;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionCheck {
    pub holds: bool,
    /// First pair `(x, y)`, `x < y`, violating the contraction inequality.
    pub witness: Option<(usize, usize)>,
}

/// Checks `d_L(D(m x, m y), H_0) ≤ q·d_L(D(x, y), H_0)` over all pairs.
///
/// On a finite space this is equivalent to the ε-t form
/// `D(x,y)(t) > 1 - t ⇒ D(m x, m y)(qt) > 1 - qt` for all `t > 0`.
pub fn is_c_contraction(
    space: &PMSpace,
    m: &SelfMap,
    q: f64,
    tol: &Tolerances,
) -> Result<ContractionCheck, LipschitzError> {
    if !(q > 0.0 && q < 1.0) {
        return Err(LipschitzError::QOutOfRange(q));
    }
    let image = m.resolve(space)?;
    Ok(contraction_witness(space, &image, q, tol))
}

fn contraction_witness(space: &PMSpace, image: &[usize], q: f64, tol: &Tolerances) -> ContractionCheck {
    let n = space.len();
    let h0 = Distribution::h0();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|x| (x + 1..n).map(move |y| (x, y))).collect();
    let witness = pairs
        .par_iter()
        .find_first(|&&(x, y)| {
            let (mx, my) = (image[x], image[y]);
            mx != my
                && !enclosure_le(
                    |b| {
                        (
                            levy_distance(space.dist(mx, my), &h0, b),
                            levy_distance(space.dist(x, y), &h0, b),
                        )
                    },
                    q,
                    tol,
                )
        })
        .copied();
    ContractionCheck {
        holds: witness.is_none(),
        witness,
    }
}

/// Trace of a Picard iteration together with its a-priori error bounds.
#[derive(Debug, Clone, PartialEq)]
pub struct FixpointCertificate {
    pub fixed_point: String,
    /// `x_0, x_1, …, x*`, ending at the first repeated point.
    pub iterates: Vec<String>,
    /// `k(kq)^n / (1 - kq) · d_L(D(x_1, x_0), H_0)` for each iterate.
    pub bounds: Vec<f64>,
    /// `d_L(D(x_n, x*), H_0)` for each iterate.
    pub achieved: Vec<f64>,
    pub k: f64,
    pub q: f64,
}

impl FixpointCertificate {
    /// First step whose achieved error exceeds its bound by more than `tol`.
    pub fn first_violation(&self, tol: f64) -> Option<usize> {
        self.achieved
            .iter()
            .zip(&self.bounds)
            .position(|(a, b)| *a > b + tol)
    }

    pub fn holds(&self, tol: f64) -> bool {
        self.first_violation(tol).is_none()
    }
}

/// Iterates `x_{n+1} = m(x_n)` from `x0` until a fixed point is reached.
///
/// Before iterating, the map is checked to have at most one fixed point and
/// to be a C-contraction with constant `q`; either failure is reported as
/// `NotContraction` with a witness pair.
pub fn fixpoint_iterate(
    space: &PMSpace,
    m: &SelfMap,
    q: f64,
    x0: &str,
    max_iter: usize,
    tol: &Tolerances,
) -> Result<FixpointCertificate, LipschitzError> {
    let k = space.triangle().lipschitz_k();
    if k * q >= 1.0 {
        return Err(LipschitzError::KQTooLarge { k, q });
    }
    if !(q > 0.0) {
        return Err(LipschitzError::QOutOfRange(q));
    }
    let image = m.resolve(space)?;
    let start = space.index_of(x0)?;
    let label = |i: usize| space.points()[i].clone();

    let fixed: Vec<usize> = (0..space.len()).filter(|&p| image[p] == p).collect();
    if let [a, b, ..] = fixed[..] {
        return Err(LipschitzError::NotContraction { x: label(a), y: label(b) });
    }
    if let Some((x, y)) = contraction_witness(space, &image, q, tol).witness {
        return Err(LipschitzError::NotContraction { x: label(x), y: label(y) });
    }

    let mut trace = vec![start];
    let mut x = start;
    loop {
        let next = image[x];
        if next == x {
            break;
        }
        if trace.len() > max_iter {
            return Err(LipschitzError::NoConvergence(max_iter));
        }
        trace.push(next);
        x = next;
    }
    let star = x;

    let h0 = Distribution::h0();
    let first_step = levy_distance(space.dist(image[start], start), &h0, tol.bisect).value;
    let kq = k * q;
    let bounds = (0..trace.len())
        .map(|n| k * kq.powi(n as i32) / (1.0 - kq) * first_step)
        .collect();
    let achieved = trace
        .iter()
        .map(|&p| levy_distance(space.dist(p, star), &h0, tol.bisect).value)
        .collect();
    Ok(FixpointCertificate {
        fixed_point: label(star),
        iterates: trace.into_iter().map(label).collect(),
        bounds,
        achieved,
        k,
        q,
    })
}
