//! Golden and exit-code cases shared by the CLI tests and the acceptance runner.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

/// Placeholder in argument lists for a fresh output path.
pub const OUT: &str = "{out}";

pub struct Golden {
    pub name: &'static str,
    pub args: &'static [&'static str],
}

pub const GOLDEN: [Golden; 5] = [
    Golden {
        name: "validate_abc",
        args: &["validate", "tests/fixtures/abc.json"],
    },
    Golden {
        name: "levy_h02_h05",
        args: &["levy", "tests/fixtures/h0.2.json", "tests/fixtures/h0.5.json"],
    },
    Golden {
        name: "report_abc",
        args: &["report", "tests/fixtures/abc.json"],
    },
    Golden {
        name: "fixpoint_halving",
        args: &[
            "fixpoint",
            "tests/fixtures/halving.json",
            "tests/fixtures/halving_map.json",
            "--q",
            "0.5",
            "--x0",
            "p0",
        ],
    },
    Golden {
        name: "envelope_abc",
        args: &[
            "envelope",
            "tests/fixtures/abc.json",
            "tests/fixtures/abc_data.json",
            "--subset",
            "A,C",
            "--out",
            OUT,
        ],
    },
];

pub struct ExitCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub code: i32,
    /// Must appear in stdout or stderr.
    pub mentions: &'static str,
}

pub const EXIT_CASES: [ExitCase; 8] = [
    ExitCase {
        name: "valid space",
        args: &["validate", "tests/fixtures/abc.json"],
        code: 0,
        mentions: "status=valid",
    },
    ExitCase {
        name: "triangle violation",
        args: &["validate", "tests/fixtures/triangle_violation.json"],
        code: 1,
        mentions: "violation=triangle 0 1 2",
    },
    ExitCase {
        name: "malformed json",
        args: &["validate", "tests/fixtures/malformed.json"],
        code: 2,
        mentions: "line 5, column",
    },
    ExitCase {
        name: "duplicate pair",
        args: &["validate", "tests/fixtures/duplicate_pair.json"],
        code: 2,
        mentions: "(B, A)",
    },
    ExitCase {
        name: "identity map",
        args: &[
            "fixpoint",
            "tests/fixtures/halving.json",
            "tests/fixtures/identity_map.json",
            "--q",
            "0.5",
            "--x0",
            "p0",
        ],
        code: 1,
        mentions: "witness pair (p0, p1)",
    },
    ExitCase {
        name: "kq not below one",
        args: &[
            "fixpoint",
            "tests/fixtures/halving.json",
            "tests/fixtures/halving_map.json",
            "--q",
            "1",
            "--x0",
            "p0",
        ],
        code: 1,
        mentions: "is not below 1",
    },
    ExitCase {
        name: "conorm envelope",
        args: &["envelope", "tests/fixtures/conorm.json", "tests/fixtures/abc_data.json", "--out", OUT],
        code: 1,
        mentions: "conorm/prod",
    },
    ExitCase {
        name: "bad tolerances",
        args: &["levy", "tests/fixtures/h2.json", "tests/fixtures/h5.json", "--bisect-tol", "1e-3"],
        code: 2,
        mentions: "bisect-tol < assert-tol",
    },
];

pub struct Run {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
    /// Contents of the `{out}` file, if the command wrote one.
    pub written: Option<String>,
}

fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Runs the binary from the crate directory in machine format.
pub fn run(args: &[&str]) -> Run {
    let tmp = tempfile::tempdir().expect("temporary directory");
    let out = tmp.path().join("out.json");
    let out_str = out.to_str().expect("utf-8 temp path").to_string();
    let args: Vec<&str> = args.iter().map(|a| if *a == OUT { out_str.as_str() } else { a }).collect();
    let output = Command::new(env!("CARGO_BIN_EXE_probmetric"))
        .current_dir(crate_dir())
        .args(&args)
        .args(["--format", "machine"])
        .output()
        .expect("spawn probmetric");
    Run {
        stdout: String::from_utf8(output.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(output.stderr).expect("utf-8 stderr"),
        code: output.status.code().unwrap_or(-1),
        written: fs::read_to_string(&out).ok(),
    }
}

fn compare(path: &Path, actual: &str) -> Result<(), String> {
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(path, actual).map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(());
    }
    let expected = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!(
            "{} differs\n--- expected\n{expected}--- actual\n{actual}",
            path.display()
        ))
    }
}

pub fn check_golden(case: &Golden) -> Result<(), String> {
    let run = run(case.args);
    if run.code != 0 {
        return Err(format!("{}: exit {} ({})", case.name, run.code, run.stderr.trim()));
    }
    let dir = crate_dir().join("tests/golden");
    compare(&dir.join(format!("{}.txt", case.name)), &run.stdout)?;
    if let Some(written) = &run.written {
        compare(&dir.join(format!("{}.out.json", case.name)), written)?;
    }
    Ok(())
}

pub fn check_exit(case: &ExitCase) -> Result<(), String> {
    let run = run(case.args);
    if run.code != case.code {
        return Err(format!("{}: exit {} instead of {}", case.name, run.code, case.code));
    }
    if !run.stdout.contains(case.mentions) && !run.stderr.contains(case.mentions) {
        return Err(format!(
            "{}: output does not mention {:?}\n{}{}",
            case.name, case.mentions, run.stdout, run.stderr
        ));
    }
    if case.code != 0 && run.written.is_some() {
        return Err(format!("{}: failed run left an output file", case.name));
    }
    Ok(())
}
