use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TNormError {
    #[error("argument ({0}, {1}) is outside [0, 1]²")]
    OutOfRange(f64, f64),
    #[error("unknown t-norm {0:?} (expected min, prod or luk)")]
    Unknown(String),
}

/// The built-in triangular norms. Each is 1-Lipschitz and continuous.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TNorm {
    #[serde(rename = "min")]
    Minimum,
    #[serde(rename = "prod")]
    Product,
    #[serde(rename = "luk")]
    Lukasiewicz,
}

impl TNorm {
    pub const ALL: [TNorm; 3] = [TNorm::Minimum, TNorm::Product, TNorm::Lukasiewicz];

    /// Lipschitz constant `k` with `|T(a,b) - T(c,d)| ≤ k(|a-c| + |b-d|)`.
    pub fn lipschitz_k(self) -> f64 {
        1.0
    }

    pub fn name(self) -> &'static str {
        match self {
            TNorm::Minimum => "min",
            TNorm::Product => "prod",
            TNorm::Lukasiewicz => "luk",
        }
    }

    pub fn eval(self, x: f64, y: f64) -> Result<f64, TNormError> {
        check_unit(x, y)?;
        Ok(self.apply(x, y))
    }

    pub fn conorm(self, x: f64, y: f64) -> Result<f64, TNormError> {
        check_unit(x, y)?;
        Ok(self.apply_conorm(x, y))
    }

    /// Unchecked evaluation used inside the star algebra.
    ///
    /// Every form is written so that `T(x, 1) = x` and `T(x, y) = T(y, x)`
    /// hold bit-for-bit in floating point.
    #[inline]
    pub(crate) fn apply(self, x: f64, y: f64) -> f64 {
        match self {
            TNorm::Minimum => x.min(y),
            TNorm::Product => x * y,
            TNorm::Lukasiewicz => {
                let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
                (lo - (1.0 - hi)).max(0.0)
            }
        }
    }

    /// Dual conorm `T*(x, y) = 1 - T(1 - x, 1 - y)` in closed form, so that
    /// `T*(x, 0) = x` holds exactly.
    #[inline]
    pub(crate) fn apply_conorm(self, x: f64, y: f64) -> f64 {
        match self {
            TNorm::Minimum => x.max(y),
            TNorm::Product => x + y - x * y,
            TNorm::Lukasiewicz => (x + y).min(1.0),
        }
    }
}

fn check_unit(x: f64, y: f64) -> Result<(), TNormError> {
    if (0.0..=1.0).contains(&x) && (0.0..=1.0).contains(&y) {
        Ok(())
    } else {
        Err(TNormError::OutOfRange(x, y))
    }
}

impl fmt::Display for TNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TNorm {
    type Err = TNormError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "min" | "minimum" => Ok(TNorm::Minimum),
            "prod" | "product" => Ok(TNorm::Product),
            "luk" | "lukasiewicz" => Ok(TNorm::Lukasiewicz),
            other => Err(TNormError::Unknown(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert_eq!(TNorm::Minimum.eval(0.3, 0.7).unwrap(), 0.3);
        assert!((TNorm::Lukasiewicz.eval(0.6, 0.7).unwrap() - 0.3).abs() < 1e-15);
        assert_eq!(TNorm::Minimum.conorm(0.3, 0.7).unwrap(), 0.7);
        assert_eq!(TNorm::Product.conorm(0.5, 0.5).unwrap(), 0.75);
        assert_eq!(TNorm::Product.eval(1.2, 0.5), Err(TNormError::OutOfRange(1.2, 0.5)));
        assert!(TNorm::Minimum.conorm(-0.1, 0.5).is_err());
    }

    proptest! {
        #[test]
        fn boundary_conditions_exact(x in 0.0f64..=1.0) {
            for t in TNorm::ALL {
                prop_assert_eq!(t.eval(x, 1.0).unwrap(), x);
                prop_assert_eq!(t.eval(1.0, x).unwrap(), x);
                prop_assert_eq!(t.conorm(x, 0.0).unwrap(), x);
                prop_assert_eq!(t.conorm(0.0, x).unwrap(), x);
            }
        }

        #[test]
        fn norm_axioms(x in 0.0f64..=1.0, y in 0.0f64..=1.0, z in 0.0f64..=1.0) {
            for t in TNorm::ALL {
                prop_assert_eq!(t.apply(x, y), t.apply(y, x));
                let lhs = t.apply(x, t.apply(y, z));
                let rhs = t.apply(t.apply(x, y), z);
                prop_assert!((lhs - rhs).abs() <= 1e-15);
                if y <= z {
                    prop_assert!(t.apply(x, y) <= t.apply(x, z));
                    prop_assert!(t.apply_conorm(x, y) <= t.apply_conorm(x, z));
                }
            }
        }

        #[test]
        fn conorm_is_de_morgan_dual(x in 0.0f64..=1.0, y in 0.0f64..=1.0) {
            for t in TNorm::ALL {
                let dual = 1.0 - t.apply(1.0 - x, 1.0 - y);
                prop_assert!((t.apply_conorm(x, y) - dual).abs() <= 1e-15);
            }
        }

        #[test]
        fn shifted_difference_bound(
            a in 0.0f64..=1.0, b in 0.0f64..=1.0,
            c in 0.0f64..=1.0, d in 0.0f64..=1.0,
        ) {
            // with h1 = (a - c)+ and h2 = (b - d)+ the hypotheses a ≤ c + h1,
            // b ≤ d + h2 hold tightly
            let h1 = (a - c).max(0.0);
            let h2 = (b - d).max(0.0);
            for t in TNorm::ALL {
                let k = t.lipschitz_k();
                prop_assert!(t.apply(a, b) - t.apply(c, d) <= k * (h1 + h2) + 1e-15);
                prop_assert!(t.apply_conorm(a, b) - t.apply_conorm(c, d) <= k * (h1 + h2) + 1e-15);
            }
        }
    }
}
