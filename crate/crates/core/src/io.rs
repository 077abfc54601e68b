//! Textual file formats.
//!
//! All files are JSON. A distribution is `{"jumps": [[t, v], ...]}`; a space
//! is `{"points": [...], "triangle": {"kind": .., "tnorm": ..}, "distances":
//! [{"x": .., "y": .., "dist": ..}, ...]}` with the diagonal omitted and each
//! unordered pair listed once; a map is `{"values": {label: dist, ...}}`; a
//! self-map is `{"map": {label: label, ...}}`.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::distribution::Distribution;
use crate::lipschitz::{ProbLipMap, SelfMap};
use crate::pmspace::{PMSpace, PmError};
use crate::triangle::TriangleFn;

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Space(#[from] PmError),
}

impl From<serde_json::Error> for ParseError {
    fn from(e: serde_json::Error) -> Self {
        // serde_json appends " at line L column C" to its Display output
        let full = e.to_string();
        let message = match full.rfind(" at line ") {
            Some(cut) => full[..cut].to_string(),
            None => full,
        };
        ParseError::Syntax {
            line: e.line(),
            column: e.column(),
            message,
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpaceFile {
    points: Vec<String>,
    triangle: TriangleFn,
    distances: Vec<PairEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PairEntry {
    x: String,
    y: String,
    dist: Distribution,
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    Ok(serde_json::from_str(text)?)
}

fn render<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("in-memory values always serialize");
    s.push('\n');
    s
}

pub fn parse_distribution(text: &str) -> Result<Distribution, ParseError> {
    parse(text)
}

pub fn parse_space(text: &str) -> Result<PMSpace, ParseError> {
    let file: SpaceFile = parse(text)?;
    let pairs = file.distances.into_iter().map(|p| (p.x, p.y, p.dist));
    Ok(PMSpace::from_pairs(file.points, pairs, file.triangle)?)
}

pub fn parse_map(text: &str) -> Result<ProbLipMap, ParseError> {
    parse(text)
}

pub fn parse_self_map(text: &str) -> Result<SelfMap, ParseError> {
    parse(text)
}

pub fn distribution_to_string(d: &Distribution) -> String {
    render(d)
}

/// Pairs are written in row-major upper-triangular order.
pub fn space_to_string(space: &PMSpace) -> String {
    let n = space.len();
    let points = space.points();
    let mut distances = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            distances.push(PairEntry {
                x: points[i].clone(),
                y: points[j].clone(),
                dist: space.dist(i, j).clone(),
            });
        }
    }
    render(&SpaceFile {
        points: points.to_vec(),
        triangle: space.triangle(),
        distances,
    })
}

pub fn map_to_string(map: &ProbLipMap) -> String {
    render(map)
}

pub fn self_map_to_string(map: &SelfMap) -> String {
    render(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    const ABC: &str = r#"{
  "points": ["A", "B", "C"],
  "triangle": {"kind": "sum", "tnorm": "min"},
  "distances": [
    {"x": "A", "y": "B", "dist": {"jumps": [[0.4, 1.0]]}},
    {"x": "C", "y": "B", "dist": {"jumps": [[0.3, 1.0]]}},
    {"x": "A", "y": "C", "dist": {"jumps": [[0.6, 1.0]]}}
  ]
}"#;

    #[test]
    fn space_round_trip() {
        let s = parse_space(ABC).unwrap();
        assert_eq!(s.dist(1, 2), &Distribution::heaviside(0.3).unwrap());
        let again = parse_space(&space_to_string(&s)).unwrap();
        assert_eq!(again, s);
    }

    #[test]
    fn duplicate_pair_is_named() {
        let text = ABC.replace(
            r#"{"x": "A", "y": "C", "dist": {"jumps": [[0.6, 1.0]]}}"#,
            r#"{"x": "B", "y": "A", "dist": {"jumps": [[0.6, 1.0]]}}"#,
        );
        let err = parse_space(&text).unwrap_err();
        assert!(matches!(err, ParseError::Space(PmError::DuplicatePair { .. })));
        assert!(err.to_string().contains("(B, A)"), "{err}");
    }

    #[test]
    fn malformed_input_reports_position() {
        let err = parse_space("{\n  \"points\": [\"A\"],\n  \"triangle\": 3\n}").unwrap_err();
        match err {
            ParseError::Syntax { line, .. } => assert_eq!(line, 3),
            other => panic!("{other}"),
        }
        let err = parse_distribution(r#"{"jumps": [[1.0, 0.5], [2.0, 0.25]]}"#).unwrap_err();
        assert!(err.to_string().contains("strictly increasing"), "{err}");
    }

    #[test]
    fn distribution_text_form() {
        let h = Distribution::heaviside(0.5).unwrap();
        let text = distribution_to_string(&h);
        assert_eq!(parse_distribution(&text).unwrap(), h);
        assert!(text.contains("0.5") && text.contains("1.0"));
    }

    #[test]
    fn maps_round_trip() {
        let m = parse_map(r#"{"values": {"a": {"jumps": []}, "b": {"jumps": [[1.0, 1.0]]}}}"#).unwrap();
        assert_eq!(parse_map(&map_to_string(&m)).unwrap(), m);
        let s = parse_self_map(r#"{"map": {"a": "b", "b": "b"}}"#).unwrap();
        assert_eq!(parse_self_map(&self_map_to_string(&s)).unwrap(), s);
    }
}
