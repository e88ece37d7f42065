//! File formats for configurations and hyperplane arrangements.
//!
//! Syntax errors carry serde_json's line and column. Semantic errors (bad
//! scalars, wrong lengths, repeated points) are mapped back to the line of
//! the offending value by walking the raw text.

use serde::{Deserialize, Serialize};

use super::{ConfigError, HyperplaneArrangement, PointConfiguration, ProjectivePoint};
use crate::fields::{FieldElement, FieldSpec};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    dim: usize,
    field: FieldSpec,
    points: Vec<Vec<String>>,
    #[serde(default)]
    label: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArrangementFile {
    dim: usize,
    field: FieldSpec,
    hyperplanes: Vec<Vec<String>>,
}

fn encode(coords: &[FieldElement]) -> Vec<String> {
    coords.iter().map(ToString::to_string).collect()
}

pub(super) fn config_to_json(z: &PointConfiguration) -> String {
    let file = ConfigFile {
        dim: z.dim(),
        field: z.field(),
        points: z.points().iter().map(|p| encode(p.coords())).collect(),
        label: z.label().to_string(),
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

pub(super) fn arrangement_to_json(a: &HyperplaneArrangement) -> String {
    let file = ArrangementFile {
        dim: a.dim(),
        field: a.field(),
        hyperplanes: a.hyperplanes().iter().map(|h| encode(h)).collect(),
    };
    serde_json::to_string_pretty(&file).expect("serializable") + "\n"
}

fn syntax(e: serde_json::Error) -> ConfigError {
    ConfigError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

fn invalid(text: &str, path: &[Seg<'_>], message: String) -> ConfigError {
    ConfigError::Invalid {
        line: locate(text, path).unwrap_or(1),
        message,
    }
}

fn parse_vectors(
    text: &str,
    key: &str,
    field: FieldSpec,
    dim: usize,
    raw: &[Vec<String>],
) -> Result<Vec<Vec<FieldElement>>, ConfigError> {
    raw.iter()
        .enumerate()
        .map(|(i, coords)| {
            if coords.len() != dim + 1 {
                return Err(invalid(
                    text,
                    &[Seg::Key(key), Seg::Index(i)],
                    format!(
                        "{key}[{i}] has {} coordinates, expected {}",
                        coords.len(),
                        dim + 1
                    ),
                ));
            }
            coords
                .iter()
                .enumerate()
                .map(|(j, c)| {
                    field.parse_element(c).map_err(|e| {
                        invalid(
                            text,
                            &[Seg::Key(key), Seg::Index(i), Seg::Index(j)],
                            format!("{key}[{i}][{j}]: {e}"),
                        )
                    })
                })
                .collect()
        })
        .collect()
}

pub(super) fn config_from_json(text: &str) -> Result<PointConfiguration, ConfigError> {
    let file: ConfigFile = serde_json::from_str(text).map_err(syntax)?;
    let coords = parse_vectors(text, "points", file.field, file.dim, &file.points)?;
    let mut points = Vec::with_capacity(coords.len());
    for (i, c) in coords.into_iter().enumerate() {
        let p = ProjectivePoint::new(c).map_err(|e| {
            invalid(
                text,
                &[Seg::Key("points"), Seg::Index(i)],
                format!("points[{i}]: {e}"),
            )
        })?;
        if let Some(j) = points.iter().position(|q| q == &p) {
            return Err(invalid(
                text,
                &[Seg::Key("points"), Seg::Index(i)],
                format!("points[{i}] repeats points[{j}]"),
            ));
        }
        points.push(p);
    }
    PointConfiguration::new(file.dim, file.field, points, file.label).map_err(|e| match e {
        ConfigError::Invalid { message, .. } => invalid(text, &[Seg::Key("dim")], message),
        other => invalid(text, &[Seg::Key("dim")], other.to_string()),
    })
}

pub(super) fn arrangement_from_json(text: &str) -> Result<HyperplaneArrangement, ConfigError> {
    let file: ArrangementFile = serde_json::from_str(text).map_err(syntax)?;
    if file.dim < 2 {
        return Err(invalid(
            text,
            &[Seg::Key("dim")],
            format!("dim must be at least 2, got {}", file.dim),
        ));
    }
    let hyperplanes = parse_vectors(text, "hyperplanes", file.field, file.dim, &file.hyperplanes)?;
    Ok(HyperplaneArrangement::new(
        file.dim,
        file.field,
        hyperplanes,
    ))
}

#[derive(Clone, Copy)]
enum Seg<'a> {
    Key(&'a str),
    Index(usize),
}

/// 1-based line of the value at `path`, or `None` if the text does not
/// contain it. Assumes `text` already parsed as JSON.
fn locate(text: &str, path: &[Seg<'_>]) -> Option<usize> {
    let mut s = Scanner {
        b: text.as_bytes(),
        i: 0,
    };
    let pos = s.find(path)?;
    Some(
        1 + text.as_bytes()[..pos]
            .iter()
            .filter(|&&c| c == b'\n')
            .count(),
    )
}

struct Scanner<'a> {
    b: &'a [u8],
    i: usize,
}

impl<'a> Scanner<'a> {
    fn ws(&mut self) {
        while self.i < self.b.len() && self.b[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.b.get(self.i).copied()
    }

    fn eat(&mut self, c: u8) -> Option<()> {
        self.ws();
        (self.peek()? == c).then(|| self.i += 1)
    }

    fn string(&mut self) -> Option<&'a [u8]> {
        self.eat(b'"')?;
        let start = self.i;
        while self.peek()? != b'"' {
            if self.peek()? == b'\\' {
                self.i += 1;
            }
            self.i += 1;
        }
        let b: &'a [u8] = self.b;
        let out = &b[start..self.i];
        self.i += 1;
        Some(out)
    }

    fn skip_value(&mut self) -> Option<()> {
        self.ws();
        match self.peek()? {
            b'"' => self.string().map(|_| ()),
            open @ (b'{' | b'[') => {
                let close = if open == b'{' { b'}' } else { b']' };
                self.i += 1;
                self.ws();
                if self.peek()? == close {
                    self.i += 1;
                    return Some(());
                }
                loop {
                    if open == b'{' {
                        self.string()?;
                        self.eat(b':')?;
                    }
                    self.skip_value()?;
                    self.ws();
                    match self.peek()? {
                        b',' => self.i += 1,
                        c if c == close => {
                            self.i += 1;
                            return Some(());
                        }
                        _ => return None,
                    }
                }
            }
            _ => {
                while self
                    .peek()
                    .is_some_and(|c| !matches!(c, b',' | b'}' | b']') && !c.is_ascii_whitespace())
                {
                    self.i += 1;
                }
                Some(())
            }
        }
    }

    fn find(&mut self, path: &[Seg<'_>]) -> Option<usize> {
        self.ws();
        let Some((&head, rest)) = path.split_first() else {
            return Some(self.i);
        };
        match head {
            Seg::Key(key) => {
                self.eat(b'{')?;
                loop {
                    let k = self.string()?;
                    self.eat(b':')?;
                    if k == key.as_bytes() {
                        return self.find(rest);
                    }
                    self.skip_value()?;
                    self.eat(b',')?;
                }
            }
            Seg::Index(n) => {
                self.eat(b'[')?;
                for _ in 0..n {
                    self.skip_value()?;
                    self.eat(b',')?;
                }
                self.find(rest)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn locator_finds_nested_values() {
        let text = "{\n  \"a\": 1,\n  \"points\": [\n    [\"1\", \"2\"],\n    [\"3\",\n     \"x\"]\n  ]\n}";
        assert_eq!(locate(text, &[Seg::Key("a")]), Some(2));
        assert_eq!(locate(text, &[Seg::Key("points"), Seg::Index(0)]), Some(4));
        assert_eq!(
            locate(text, &[Seg::Key("points"), Seg::Index(1), Seg::Index(1)]),
            Some(6)
        );
        assert_eq!(locate(text, &[Seg::Key("missing")]), None);
    }

    #[test]
    fn bad_coordinate_reports_its_line() {
        let text = r#"{
  "dim": 2,
  "field": {"kind": "rational"},
  "points": [
    ["1", "0", "0"],
    ["0", "1/0", "1"]
  ],
  "label": "bad"
}"#;
        match config_from_json(text) {
            Err(ConfigError::Invalid { line, message }) => {
                assert_eq!(line, 6);
                assert!(message.contains("points[1][1]"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "{\n  \"dim\": 2,\n  \"field\": {\"kind\": \"rational\"}\n  \"points\": []\n}";
        match config_from_json(text) {
            Err(ConfigError::Syntax { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn repeated_and_zero_points_rejected() {
        let text = r#"{"dim": 2, "field": {"kind": "rational"},
"points": [["1","2","3"],
["2","4","6"]], "label": ""}"#;
        match config_from_json(text) {
            Err(ConfigError::Invalid { line, message }) => {
                assert_eq!(line, 3);
                assert!(message.contains("repeats"));
            }
            other => panic!("unexpected {other:?}"),
        }
        let text =
            r#"{"dim": 2, "field": {"kind": "rational"}, "points": [["0","0","0"]], "label": ""}"#;
        assert!(matches!(
            config_from_json(text),
            Err(ConfigError::Invalid { .. })
        ));
    }

    #[test]
    fn wrong_length_and_field() {
        let text =
            r#"{"dim": 2, "field": {"kind": "prime", "p": 7}, "points": [["1","2"]], "label": ""}"#;
        assert!(matches!(
            config_from_json(text),
            Err(ConfigError::Invalid { .. })
        ));
        let text = r#"{"dim": 2, "field": {"kind": "prime", "p": 8}, "points": [], "label": ""}"#;
        assert!(matches!(
            config_from_json(text),
            Err(ConfigError::Syntax { .. })
        ));
        let text = r#"{"dim": 2, "field": {"kind": "rational"}, "points": [], "label": ""}"#;
        assert!(matches!(
            config_from_json(text),
            Err(ConfigError::Invalid { .. })
        ));
    }
}
