use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::tnorm::TNorm;
use crate::distribution::{merged_locations, Distribution, StepBuilder};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("unknown triangle-function kind {0:?} (expected sum, max, conorm or pointwise)")]
pub struct UnknownKind(pub String);

/// How a t-norm is lifted to a binary operation on Δ+.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriangleKind {
    /// `(F ⋆ G)(t) = sup_{u+v=t} T(F(u), G(v))`.
    Sum,
    /// `(F ⋆ G)(t) = sup_{max(u,v)=t} T(F(u), G(v))`.
    Max,
    /// `(F ⋆ G)(t) = inf_{u+v=t} T*(F(u), G(v))`.
    Conorm,
    /// `(F ⋆ G)(t) = T(F(t), G(t))`.
    Pointwise,
}

impl TriangleKind {
    pub const ALL: [TriangleKind; 4] = [
        TriangleKind::Sum,
        TriangleKind::Max,
        TriangleKind::Conorm,
        TriangleKind::Pointwise,
    ];

    pub fn name(self) -> &'static str {
        match self {
            TriangleKind::Sum => "sum",
            TriangleKind::Max => "max",
            TriangleKind::Conorm => "conorm",
            TriangleKind::Pointwise => "pointwise",
        }
    }
}

impl FromStr for TriangleKind {
    type Err = UnknownKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sum" => Ok(TriangleKind::Sum),
            "max" => Ok(TriangleKind::Max),
            "conorm" => Ok(TriangleKind::Conorm),
            "pointwise" => Ok(TriangleKind::Pointwise),
            other => Err(UnknownKind(other.to_string())),
        }
    }
}

impl fmt::Display for TriangleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A triangle function: a construction applied to a built-in t-norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TriangleFn {
    pub kind: TriangleKind,
    pub tnorm: TNorm,
}

impl TriangleFn {
    pub fn new(kind: TriangleKind, tnorm: TNorm) -> Self {
        TriangleFn { kind, tnorm }
    }

    /// The Menger sup-convolution under the minimum t-norm.
    pub fn menger_min() -> Self {
        TriangleFn::new(TriangleKind::Sum, TNorm::Minimum)
    }

    /// Every construction inherits the t-norm's Lipschitz constant with
    /// respect to the modified Lévy metric.
    pub fn lipschitz_k(&self) -> f64 {
        self.tnorm.lipschitz_k()
    }

    /// All twelve built-in combinations.
    pub fn all() -> impl Iterator<Item = TriangleFn> {
        TriangleKind::ALL
            .into_iter()
            .flat_map(|k| TNorm::ALL.into_iter().map(move |t| TriangleFn::new(k, t)))
    }

    /// Whether `⋆` distributes over finite pointwise maxima in each argument.
    pub fn is_sup_continuous(&self) -> bool {
        matches!(self.kind, TriangleKind::Sum | TriangleKind::Max)
    }

    pub fn star(&self, f: &Distribution, g: &Distribution) -> Distribution {
        match self.kind {
            TriangleKind::Sum => sup_convolution(self.tnorm, f, g),
            TriangleKind::Max | TriangleKind::Pointwise => pointwise(self.tnorm, f, g),
            TriangleKind::Conorm => inf_convolution(self.tnorm, f, g),
        }
    }
}

impl fmt::Display for TriangleFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.kind, self.tnorm)
    }
}

/// A binary operation on Δ+ that claims to be a triangle function.
///
/// Implemented by [`TriangleFn`]; the axiom checker accepts any
/// implementation so that hand-written operations can be audited too.
pub trait TriangleOp: Sync {
    fn apply(&self, f: &Distribution, g: &Distribution) -> Distribution;
}

impl TriangleOp for TriangleFn {
    fn apply(&self, f: &Distribution, g: &Distribution) -> Distribution {
        self.star(f, g)
    }
}

/// Step levels of `F` as a list of half-open pieces.
///
/// Piece `i` covers `(start_i, start_{i+1}]` with level `level_i`; piece 0
/// starts at 0 with level 0 (it is just `{0}` when `F` jumps at 0) and the
/// last piece extends to `+∞`.
fn pieces(f: &Distribution) -> (Vec<f64>, Vec<f64>) {
    let mut starts = Vec::with_capacity(f.jumps().len() + 1);
    let mut levels = Vec::with_capacity(f.jumps().len() + 1);
    starts.push(0.0);
    levels.push(0.0);
    for &(loc, lvl) in f.jumps() {
        starts.push(loc);
        levels.push(lvl);
    }
    (starts, levels)
}

/// `sup_{u+v=t} T(F(u), G(v))`.
///
/// `F(u) ≥ f_i` needs `u > a_i` and `G(v) ≥ g_j` needs `v > b_j`, so the pair
/// of jumps `(i, j)` contributes `T(f_i, g_j)` exactly for `t > a_i + b_j`.
/// Pairs involving a zero level contribute `T(0, ·) = 0` and are skipped.
fn sup_convolution(t: TNorm, f: &Distribution, g: &Distribution) -> Distribution {
    let mut cand: Vec<(f64, f64)> = Vec::with_capacity(f.jumps().len() * g.jumps().len());
    for &(a, fa) in f.jumps() {
        for &(b, gb) in g.jumps() {
            cand.push((a + b, t.apply(fa, gb)));
        }
    }
    cand.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut builder = StepBuilder::default();
    for (loc, lvl) in cand {
        builder.push(loc, lvl);
    }
    builder.finish()
}

/// `T(F(t), G(t))`, which is also `sup_{max(u,v)=t} T(F(u), G(v))`: with
/// `u = t` fixed the supremum over `v ≤ t` is reached at `v = t` by
/// monotonicity of `T` and `G`, and symmetrically.
fn pointwise(t: TNorm, f: &Distribution, g: &Distribution) -> Distribution {
    let mut builder = StepBuilder::default();
    for p in merged_locations(&[f, g]) {
        builder.push(p, t.apply(f.eval_right(p), g.eval_right(p)));
    }
    builder.finish()
}

/// `inf_{u+v=s} T*(F(u), G(v))` for `s > 0`.
///
/// With pieces `(a_i, a_{i+1}]` of `F` and `(b_j, b_{j+1}]` of `G`, the level
/// pair `(f_i, g_j)` is attainable at `s` iff `a_i + b_j < s ≤ a_{i+1} + b_{j+1}`
/// (piece 0 of each side includes the point 0, which is harmless for
/// `s > 0`). All these bounds are sums of piece starts, so the result is
/// constant on each interval `(c_k, c_{k+1}]` of consecutive critical sums,
/// where it is the minimum of `T*(f_i, g_j)` over pairs with
/// `lo ≤ c_k` and `hi ≥ c_{k+1}`.
fn inf_convolution(t: TNorm, f: &Distribution, g: &Distribution) -> Distribution {
    let (fs, fl) = pieces(f);
    let (gs, gl) = pieces(g);
    struct Pair {
        lo: f64,
        hi: f64,
        level: f64,
    }
    let mut pairs = Vec::with_capacity(fs.len() * gs.len());
    let mut crit = Vec::with_capacity(fs.len() * gs.len());
    for i in 0..fs.len() {
        for j in 0..gs.len() {
            let lo = fs[i] + gs[j];
            let hi = match (fs.get(i + 1), gs.get(j + 1)) {
                (Some(&a), Some(&b)) => a + b,
                _ => f64::INFINITY,
            };
            crit.push(lo);
            pairs.push(Pair {
                lo,
                hi,
                level: t.apply_conorm(fl[i], gl[j]),
            });
        }
    }
    crit.sort_by(f64::total_cmp);
    crit.dedup();

    let mut builder = StepBuilder::default();
    let mut previous = 0.0;
    for (k, &c) in crit.iter().enumerate() {
        let next = crit.get(k + 1).copied().unwrap_or(f64::INFINITY);
        let level = pairs
            .iter()
            .filter(|p| p.lo <= c && p.hi >= next)
            .map(|p| p.level)
            .fold(f64::INFINITY, f64::min);
        debug_assert!(level.is_finite(), "no attainable level pair on ({c}, {next}]");
        debug_assert!(level >= previous, "inf-convolution decreased at {c}");
        previous = level;
        builder.push(c, level);
    }
    builder.finish()
}
