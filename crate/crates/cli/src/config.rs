use clap::ValueEnum;
use probmetric::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    /// One `key=value` record per line.
    Machine,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub assert_tol: f64,
    pub bisect_tol: f64,
    pub oracle_grid: usize,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            assert_tol: 1e-9,
            bisect_tol: 1e-12,
            oracle_grid: 2048,
            output_format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    /// Requires `0 < bisect_tol < assert_tol < 1` and a grid of at least two cells.
    pub fn validate(&self) -> Result<(), String> {
        if !(self.bisect_tol > 0.0 && self.bisect_tol < self.assert_tol && self.assert_tol < 1.0) {
            return Err(format!(
                "tolerances must satisfy 0 < bisect-tol < assert-tol < 1 (got {:?} and {:?})",
                self.bisect_tol, self.assert_tol
            ));
        }
        if self.oracle_grid < 2 {
            return Err(format!("grid must be at least 2 (got {})", self.oracle_grid));
        }
        Ok(())
    }

    pub fn tolerances(&self) -> Tolerances {
        Tolerances {
            bisect: self.bisect_tol,
            assert: self.assert_tol,
        }
    }
}
