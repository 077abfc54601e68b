//! Exact computation in finite probabilistic metric spaces.
//!
//! Distance distributions are step functions in Δ+ ([`Distribution`]),
//! compared with the modified Lévy metric ([`levy`]) and combined with
//! triangle functions built from t-norms ([`triangle`]). Finite spaces
//! ([`PMSpace`]) are validated against the probabilistic metric axioms and
//! metrized by `σ_D`; [`lipschitz`] covers probabilistic 1-Lipschitz maps and
//! the certified fixed-point iteration for C-contractions.

pub mod distribution;
pub mod io;
pub mod levy;
pub mod lipschitz;
pub mod pmspace;
pub mod triangle;

mod tolerance;

pub use distribution::{Distribution, DistributionError};
pub use levy::{levy_distance, LevyResult};
pub use lipschitz::{ProbLipMap, SelfMap};
pub use pmspace::PMSpace;
pub use tolerance::Tolerances;
pub use triangle::{TNorm, TriangleFn, TriangleKind};
