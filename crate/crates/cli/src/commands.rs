use std::fs;
use std::path::Path;

use probmetric::io::{self, ParseError};
use probmetric::lipschitz::{self, LipschitzError};
use probmetric::pmspace::{AxiomViolation, Equivalence, PmError, SandwichSide};
use probmetric::triangle::{band_violation, default_t_max, star_oracle};
use probmetric::{levy_distance, Distribution, TNorm, TriangleFn, TriangleKind};
use thiserror::Error;

use crate::config::RunConfig;
use crate::report::{num, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    /// Bad arguments or inconsistent inputs.
    #[error("{0}")]
    Input(String),
    /// A mathematical violation or an unsupported request.
    #[error("{0}")]
    Violation(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Violation(_) => 1,
            _ => 2,
        }
    }
}

impl From<LipschitzError> for CliError {
    fn from(e: LipschitzError) -> Self {
        match e {
            LipschitzError::UnsupportedTriangleFn(_)
            | LipschitzError::NotLipschitz { .. }
            | LipschitzError::KQTooLarge { .. }
            | LipschitzError::NotContraction { .. }
            | LipschitzError::NoConvergence(_) => CliError::Violation(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PmError> for CliError {
    fn from(e: PmError) -> Self {
        match e {
            PmError::InvalidSpace(_) => CliError::Violation(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// A rendered report and whether every assertion in it held.
pub struct Outcome {
    pub report: Report,
    pub ok: bool,
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })
}

fn load<T>(path: &Path, parse: impl Fn(&str) -> Result<T, ParseError>) -> Result<T, CliError> {
    parse(&read(path)?).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

pub fn validate(space_file: &Path) -> Result<Outcome, CliError> {
    let space = load(space_file, io::parse_space)?;
    let labels = space.points();
    let violations = space.validate().violations;
    let mut r = Report::new("validate");
    r.field("points", space.len())
        .field("triangle", space.triangle())
        .field("violations", violations.len());
    for v in &violations {
        match *v {
            AxiomViolation::Identity { x, y } => {
                r.field("violation", format!("identity {x} {y}"));
                r.note(format!("  D({}, {}) = H_0 for distinct points", labels[x], labels[y]));
            }
            AxiomViolation::Triangle { x, y, z } => {
                r.field("violation", format!("triangle {x} {y} {z}"));
                r.note(format!(
                    "  D({0}, {1}) * D({1}, {2}) is not below D({0}, {2})",
                    labels[x], labels[y], labels[z]
                ));
            }
        }
    }
    let ok = violations.is_empty();
    r.field("status", if ok { "valid" } else { "invalid" });
    Ok(Outcome { report: r, ok })
}

pub fn levy(a: &Path, b: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let f = load(a, io::parse_distribution)?;
    let g = load(b, io::parse_distribution)?;
    let d = levy_distance(&f, &g, cfg.bisect_tol);
    let mut r = Report::new("levy");
    r.number("value", d.value)
        .number("lower", d.lower)
        .number("upper", d.upper)
        .field("iterations", d.iterations);
    Ok(Outcome { report: r, ok: true })
}

pub fn star(
    a: &Path,
    b: &Path,
    kind: TriangleKind,
    tnorm: TNorm,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let f = load(a, io::parse_distribution)?;
    let g = load(b, io::parse_distribution)?;
    let tf = TriangleFn::new(kind, tnorm);
    let exact = tf.star(&f, &g);
    let t_max = default_t_max(&f, &g);
    let oracle = star_oracle(&tf, &f, &g, cfg.oracle_grid, t_max);
    let band = band_violation(&exact, &oracle, cfg.oracle_grid, t_max);
    let ok = band <= cfg.assert_tol;
    let mut r = Report::new("star");
    r.field("triangle", tf)
        .field("result", compact(&exact))
        .number("oracle_t_max", t_max)
        .number("oracle_band_violation", band)
        .field("oracle", if ok { "agrees" } else { "disagrees" });
    Ok(Outcome { report: r, ok })
}

fn compact(d: &Distribution) -> String {
    serde_json::to_string(d).expect("distributions always serialize")
}

pub fn report(space_file: &Path, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let space = load(space_file, io::parse_space)?;
    let m = space.metrization_report(&cfg.tolerances())?;
    let labels = space.points();
    let mut r = Report::new("report");
    r.field("points", space.len())
        .field("triangle", space.triangle())
        .number("k", m.k)
        .number("sandwich_tol", m.tolerance)
        .matrix("sigma", labels, m.sigma.clone())
        .matrix("lower", labels, m.lower.clone())
        .field("sigma_equals_lower", m.sigma_equals_lower());
    if m.sigma_equals_lower() {
        r.note("sigma == lower");
    }
    r.field("violations", m.violations.len());
    for v in &m.violations {
        let side = match v.side {
            SandwichSide::Lower => "lower",
            SandwichSide::Upper => "upper",
        };
        r.field("violation", format!("{side} {} {}", v.x, v.y));
    }
    let ok = m.holds();
    r.field("sandwich", if ok { "holds" } else { "fails" });
    Ok(Outcome { report: r, ok })
}

pub fn fixpoint(
    space_file: &Path,
    map_file: &Path,
    q: f64,
    x0: &str,
    max_iter: usize,
    cfg: &RunConfig,
) -> Result<Outcome, CliError> {
    let space = load(space_file, io::parse_space)?;
    let map = load(map_file, io::parse_self_map)?;
    let cert = lipschitz::fixpoint_iterate(&space, &map, q, x0, max_iter, &cfg.tolerances())?;
    let mut r = Report::new("fixpoint");
    r.number("q", cert.q)
        .number("k", cert.k)
        .field("fixed_point", &cert.fixed_point)
        .field("steps", cert.iterates.len() - 1);
    r.note(format!("{:>4}  {:<12} {:>22} {:>22}", "n", "point", "achieved", "bound"));
    for (n, point) in cert.iterates.iter().enumerate() {
        r.record(format!("iterate.{n}"), point)
            .record(format!("achieved.{n}"), num(cert.achieved[n]))
            .record(format!("bound.{n}"), num(cert.bounds[n]));
        r.note(format!(
            "{n:>4}  {point:<12} {:>22} {:>22}",
            num(cert.achieved[n]),
            num(cert.bounds[n])
        ));
    }
    let ok = cert.holds(cfg.assert_tol);
    r.field("unique", true)
        .field("certificate", if ok { "holds" } else { "fails" });
    Ok(Outcome { report: r, ok })
}

pub fn envelope(
    space_file: &Path,
    data_file: &Path,
    subset: Option<&[String]>,
    out: &Path,
) -> Result<Outcome, CliError> {
    let space = load(space_file, io::parse_space)?;
    let data = load(data_file, io::parse_map)?;
    let subset = subset.unwrap_or(space.points());
    let env = lipschitz::envelope(&space, &data, subset)?;
    let lip = lipschitz::check_lip1(&space, &env)?;
    fs::write(out, io::map_to_string(&env)).map_err(|source| CliError::Write {
        path: out.display().to_string(),
        source,
    })?;
    let mut r = Report::new("envelope");
    r.field("triangle", space.triangle())
        .field("subset", subset.join(","))
        .field("lip1_violations", lip.violations.len())
        .field("lip1", if lip.passed() { "pass" } else { "fail" });
    Ok(Outcome { report: r, ok: lip.passed() })
}

pub fn neighborhood(space_file: &Path, x: &str, t: f64, cfg: &RunConfig) -> Result<Outcome, CliError> {
    let space = load(space_file, io::parse_space)?;
    let members = space.strong_neighborhood(x, t)?;
    let verdict = space.neighborhood_ball_equivalence(x, t, cfg.bisect_tol)?;
    let labels = space.points();
    let mut r = Report::new("neighborhood");
    r.field("x", x).number("t", t).field(
        "members",
        members.iter().map(|&i| labels[i].as_str()).collect::<Vec<_>>().join(","),
    );
    let ok = match verdict {
        Equivalence::Holds => {
            r.field("ball_equivalence", "holds");
            true
        }
        Equivalence::Differs { y } => {
            r.field("ball_equivalence", "differs").field("witness", &labels[y]);
            false
        }
        Equivalence::Indeterminate { y } => {
            r.field("ball_equivalence", "indeterminate").field("witness", &labels[y]);
            r.note("t lies inside the bisection enclosure of d_L(D(x, witness), H_0)");
            true
        }
    };
    Ok(Outcome { report: r, ok })
}

/// Parses `a,b,c` into labels; empty items are rejected.
pub fn parse_subset(s: &str) -> Result<Vec<String>, CliError> {
    let items: Vec<String> = s.split(',').map(|p| p.trim().to_string()).collect();
    if items.iter().any(String::is_empty) {
        return Err(CliError::Input(format!("malformed subset {s:?}")));
    }
    Ok(items)
}
