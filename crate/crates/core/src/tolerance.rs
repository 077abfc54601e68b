use crate::levy::DEFAULT_BISECT_TOL;

/// Numerical tolerances for metric-level assertions.
///
/// `bisect` is the width of every Lévy distance enclosure. `assert` is the
/// slack allowed when comparing distances in inequalities; it must dominate
/// the enclosure width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub bisect: f64,
    pub assert: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            bisect: DEFAULT_BISECT_TOL,
            assert: 1e-9,
        }
    }
}
