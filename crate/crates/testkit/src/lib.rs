//! Random instance generators shared by the test suites.
//!
//! Generators that feed exact comparisons (`leq`, canonical equality) use
//! dyadic locations and levels so that every sum and product computed by the
//! star algebra is exact in `f64`.

use std::collections::BTreeMap;

use probmetric::lipschitz::{envelope, ProbLipMap, SelfMap};
use probmetric::{Distribution, PMSpace, TriangleFn, TriangleKind};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("p{i}")).collect()
}

/// A step distribution with 1 to 4 jumps at multiples of 1/4 in `[0, 10)`
/// and levels that are multiples of 1/16. With probability 1/2 the last
/// level is 1.
pub fn dyadic_distribution<R: Rng>(rng: &mut R) -> Distribution {
    let count = rng.gen_range(1..=4);
    let mut locs: Vec<u32> = (0..40).collect::<Vec<_>>().choose_multiple(rng, count).copied().collect();
    locs.sort_unstable();
    let mut levels: Vec<u32> = (1..=16).collect::<Vec<_>>().choose_multiple(rng, count).copied().collect();
    levels.sort_unstable();
    if rng.gen_bool(0.5) {
        *levels.last_mut().unwrap() = 16;
    }
    levels.dedup();
    let jumps: Vec<(f64, f64)> = locs
        .iter()
        .zip(&levels)
        .map(|(&l, &v)| (l as f64 / 4.0, v as f64 / 16.0))
        .collect();
    Distribution::make_step(jumps).expect("generated jumps are canonical")
}

/// Like [`dyadic_distribution`] but never `H_0`.
pub fn dyadic_non_h0<R: Rng>(rng: &mut R) -> Distribution {
    loop {
        let d = dyadic_distribution(rng);
        if !d.is_h0() {
            return d;
        }
    }
}

/// A step distribution with 1 to 5 jumps at uniform locations in `[0, 5)` and
/// uniform levels; the first location is 0 with probability 1/8.
pub fn real_distribution<R: Rng>(rng: &mut R) -> Distribution {
    let count = rng.gen_range(1..=5);
    let mut locs: Vec<f64> = (0..count).map(|_| rng.gen_range(0.0..5.0)).collect();
    if rng.gen_bool(0.125) {
        locs[0] = 0.0;
    }
    let mut levels: Vec<f64> = (0..count).map(|_| rng.gen_range(0.0..1.0f64).max(1e-3)).collect();
    if rng.gen_bool(0.5) {
        levels[0] = 1.0;
    }
    locs.sort_by(f64::total_cmp);
    levels.sort_by(f64::total_cmp);
    locs.dedup();
    levels.dedup();
    let jumps: Vec<(f64, f64)> = locs.into_iter().zip(levels).collect();
    Distribution::make_step(jumps).expect("generated jumps are canonical")
}

/// Distinct points of `{k/8 : 0 ≤ k ≤ 8·span}` on the real line, returned
/// with their metric `|x - y|`.
pub fn line_metric<R: Rng>(rng: &mut R, n: usize, span: u32) -> Vec<Vec<f64>> {
    let grid: Vec<u32> = (0..=8 * span).collect();
    let xs: Vec<f64> = grid
        .choose_multiple(rng, n)
        .map(|&k| k as f64 / 8.0)
        .collect();
    xs.iter()
        .map(|a| xs.iter().map(|b| (a - b).abs()).collect())
        .collect()
}

/// An ultrametric `d(x, y) = 2^{-lcp(x, y)}` on distinct random bit strings
/// of length 6, where `lcp` is the length of the common prefix.
pub fn ultrametric<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    assert!(n <= 64);
    let codes: Vec<u32> = (0..64).collect::<Vec<_>>().choose_multiple(rng, n).copied().collect();
    codes
        .iter()
        .map(|&a| {
            codes
                .iter()
                .map(|&b| {
                    if a == b {
                        0.0
                    } else {
                        let lcp = ((a ^ b) << 26).leading_zeros();
                        0.5f64.powi(lcp as i32)
                    }
                })
                .collect()
        })
        .collect()
}

/// Induced space `D(p, q) = H_{d(p,q)}` over a random line metric, with the
/// metric that produced it.
pub fn induced_space<R: Rng>(rng: &mut R, n: usize, span: u32, tf: TriangleFn) -> (PMSpace, Vec<Vec<f64>>) {
    let d = line_metric(rng, n, span);
    let space = PMSpace::induced_from_metric(labels(n), &d, tf).expect("line metrics are metrics");
    (space, d)
}

/// A simple space `D(x, y)(t) = G(t / d(x, y))` for a random dyadic `G`.
///
/// Sum kinds use a line metric, where `G(u/a) ∧ G(v/b) ≤ G((u+v)/(a+b))`
/// gives the triangle inequality under every t-norm. Max and pointwise kinds
/// use an ultrametric, for which `G(t/a) ∧ G(t/b) ≤ G(t/max(a,b))`. Conorm
/// kinds fall back to an induced line space.
pub fn simple_space<R: Rng>(rng: &mut R, n: usize, tf: TriangleFn) -> PMSpace {
    let d = match tf.kind {
        TriangleKind::Sum => line_metric(rng, n, 4),
        TriangleKind::Max | TriangleKind::Pointwise => ultrametric(rng, n),
        TriangleKind::Conorm => return induced_conorm(rng, n, tf),
    };
    let g = loop {
        let g = dyadic_non_h0(rng);
        if g.jumps()[0].0 > 0.0 || g.jumps()[0].1 < 1.0 {
            break g;
        }
    };
    let matrix = d
        .iter()
        .map(|row| row.iter().map(|&a| g.scale(a).expect("nonnegative scale")).collect())
        .collect();
    PMSpace::from_matrix(labels(n), matrix, tf).expect("square symmetric matrix")
}

fn induced_conorm<R: Rng>(rng: &mut R, n: usize, tf: TriangleFn) -> PMSpace {
    let d = line_metric(rng, n, 4);
    let matrix = d
        .iter()
        .map(|row| row.iter().map(|&a| Distribution::heaviside(a).unwrap()).collect())
        .collect();
    PMSpace::from_matrix(labels(n), matrix, tf).expect("square symmetric matrix")
}

/// Random dyadic values on every point.
pub fn random_map<R: Rng>(rng: &mut R, space: &PMSpace) -> ProbLipMap {
    ProbLipMap {
        values: space
            .points()
            .iter()
            .map(|p| (p.clone(), dyadic_distribution(rng)))
            .collect(),
    }
}

/// A 1-Lipschitz map: the envelope of random data over all points.
pub fn lip1_map<R: Rng>(rng: &mut R, space: &PMSpace) -> ProbLipMap {
    let data = random_map(rng, space);
    envelope(space, &data, space.points()).expect("sum or max kind")
}

/// A random nonempty subset of the points, in point order.
pub fn random_subset<R: Rng>(rng: &mut R, space: &PMSpace) -> Vec<String> {
    let n = space.len();
    let size = rng.gen_range(1..=n);
    let mut idx: Vec<usize> = (0..n).collect::<Vec<_>>().choose_multiple(rng, size).copied().collect();
    idx.sort_unstable();
    idx.into_iter().map(|i| space.points()[i].clone()).collect()
}

/// A C-contraction instance with its constant `q` and a start point.
pub struct PlantedContraction {
    pub space: PMSpace,
    pub map: SelfMap,
    pub q: f64,
    pub x0: String,
    pub fixed_point: String,
}

/// The ultrametric space `d(x, y) = max(x, y)` on `values` (which must
/// contain 0 and lie in `[0, 1]`), under the sum/minimum triangle function.
///
/// With this metric `d_L(D(x,y), H_0) = max(x, y)` for `x ≠ y`, so any map
/// with `m(x) ≤ q·x` shrinks every pair by `q`.
fn max_metric_space(values: &[f64]) -> PMSpace {
    let d: Vec<Vec<f64>> = (0..values.len())
        .map(|i| {
            (0..values.len())
                .map(|j| if i == j { 0.0 } else { values[i].max(values[j]) })
                .collect()
        })
        .collect();
    PMSpace::induced_from_metric(labels(values.len()), &d, TriangleFn::menger_min())
        .expect("max metric on distinct nonnegative values")
}

/// Largest value `≤ bound` (0 is always present).
fn floor_in(values: &[f64], bound: f64) -> usize {
    (0..values.len())
        .filter(|&i| values[i] <= bound)
        .max_by(|&a, &b| values[a].total_cmp(&values[b]))
        .expect("0 is present")
}

fn planted_from_values(values: &[f64], q: f64, start: usize) -> PlantedContraction {
    let space = max_metric_space(values);
    let names = labels(values.len());
    let map: BTreeMap<String, String> = (0..values.len())
        .map(|i| (names[i].clone(), names[floor_in(values, q * values[i])].clone()))
        .collect();
    let zero = floor_in(values, 0.0);
    PlantedContraction {
        space,
        map: SelfMap { map },
        q,
        x0: names[start].clone(),
        fixed_point: names[zero].clone(),
    }
}

/// The seven points `{1, 1/2, …, 1/32, 0}` with `x ↦ x/2` (and `1/32 ↦ 0`),
/// `q = 1/2`, started at 1.
pub fn dyadic_halving() -> PlantedContraction {
    let values = [1.0, 0.5, 0.25, 0.125, 0.0625, 0.03125, 0.0];
    planted_from_values(&values, 0.5, 0)
}

/// A random planted contraction on 5 to 12 points of `{k/64}` (always
/// including 0), with `q ∈ {1/2, 3/4}` and `m(x)` the largest point `≤ q·x`.
pub fn planted_contraction<R: Rng>(rng: &mut R) -> PlantedContraction {
    let n = rng.gen_range(5..=12);
    let mut values: Vec<f64> = (1..=64u32)
        .collect::<Vec<_>>()
        .choose_multiple(rng, n - 1)
        .map(|&k| k as f64 / 64.0)
        .collect();
    values.push(0.0);
    values.shuffle(rng);
    let q = *[0.5, 0.75].choose(rng).unwrap();
    let start = rng.gen_range(0..n);
    planted_from_values(&values, q, start)
}

/// A family `fs[n] = envelope(data shifted right by 2^{-3(n+1)})` converging
/// to `f = envelope(data)`, with both envelopes taken over all points. The
/// shifts are dyadic so the shifted envelopes stay exactly 1-Lipschitz.
pub fn converging_family<R: Rng>(rng: &mut R, space: &PMSpace, len: usize) -> (Vec<ProbLipMap>, ProbLipMap) {
    let data = random_map(rng, space);
    let limit = envelope(space, &data, space.points()).expect("sum or max kind");
    let fs = (0..len)
        .map(|n| {
            let eps = 0.125f64.powi(n as i32 + 1);
            let shifted = ProbLipMap {
                values: data
                    .values
                    .iter()
                    .map(|(k, v)| (k.clone(), v.shift(eps).expect("finite shift")))
                    .collect(),
            };
            envelope(space, &shifted, space.points()).expect("sum or max kind")
        })
        .collect();
    (fs, limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use probmetric::lipschitz::{check_lip1, is_c_contraction};
    use probmetric::{TNorm, Tolerances};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn generated_spaces_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for tf in TriangleFn::all() {
            for _ in 0..10 {
                let s = simple_space(&mut rng, 5, tf);
                assert!(s.validate().is_valid(), "{tf}");
            }
        }
        let d = ultrametric(&mut rng, 8);
        for x in 0..8 {
            for y in 0..8 {
                for z in 0..8 {
                    assert!(d[x][z] <= d[x][y].max(d[y][z]));
                }
            }
        }
    }

    #[test]
    fn generated_maps_and_contractions() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let tf = TriangleFn::new(TriangleKind::Sum, TNorm::Product);
        let s = simple_space(&mut rng, 5, tf);
        assert!(check_lip1(&s, &lip1_map(&mut rng, &s)).unwrap().passed());
        let tol = Tolerances::default();
        let h = dyadic_halving();
        assert!(is_c_contraction(&h.space, &h.map, h.q, &tol).unwrap().holds);
        for _ in 0..10 {
            let p = planted_contraction(&mut rng);
            assert!(is_c_contraction(&p.space, &p.map, p.q, &tol).unwrap().holds);
        }
    }
}
