//! t-norms, their conorms, and the four triangle-function constructions on
//! step distributions, together with a grid brute-force oracle and the
//! axiom and Lipschitz checks.

mod checks;
mod oracle;
mod star;
mod tnorm;

pub use checks::{
    check_lipschitz, check_triangle_axioms, Axiom, AxiomFailure, AxiomReport, LipschitzReport,
    LipschitzViolation,
};
pub use oracle::{band_violation, default_t_max, star_oracle, DEFAULT_GRID};
pub use star::{TriangleFn, TriangleKind, TriangleOp, UnknownKind};
pub use tnorm::{TNorm, TNormError};
