//! The line-oriented `.bcf` format.
//!
//! ```text
//! # comment
//! vertex <id> multiplicity <int> cycle <angle> <angle> ...
//! polygon <id> <angle> <angle> ...
//! ```

use super::{BrauerConfiguration, ConfigurationData, Polygon, VertexCycle};
use crate::error::{Error, Result};

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let content = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start: Option<usize> = None;
    for (i, ch) in content.char_indices() {
        match (ch.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Token {
                    text: &content[s..i],
                    column: content[..s].chars().count() + 1,
                });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Token {
            text: &content[s..],
            column: content[..s].chars().count() + 1,
        });
    }
    out
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

/// Reads the statements of a document without checking the configuration
/// invariants.
pub fn parse_document(text: &str) -> Result<ConfigurationData> {
    let mut data = ConfigurationData::default();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        let toks = tokens(line);
        let Some(first) = toks.first() else { continue };
        let end_column = line.chars().count() + 1;
        let expect = |i: usize, what: &str| -> Result<&Token<'_>> {
            toks.get(i)
                .ok_or_else(|| syntax(lineno, end_column, format!("expected {what}")))
        };
        match first.text {
            "vertex" => {
                let id = expect(1, "vertex id")?;
                let kw = expect(2, "`multiplicity`")?;
                if kw.text != "multiplicity" {
                    return Err(syntax(
                        lineno,
                        kw.column,
                        format!("expected `multiplicity`, found `{}`", kw.text),
                    ));
                }
                let m = expect(3, "multiplicity value")?;
                let multiplicity: i64 = m.text.parse().map_err(|_| {
                    syntax(lineno, m.column, format!("invalid multiplicity `{}`", m.text))
                })?;
                let kw = expect(4, "`cycle`")?;
                if kw.text != "cycle" {
                    return Err(syntax(
                        lineno,
                        kw.column,
                        format!("expected `cycle`, found `{}`", kw.text),
                    ));
                }
                if toks.len() < 6 {
                    return Err(syntax(
                        lineno,
                        end_column,
                        format!("vertex `{}` needs at least one angle", id.text),
                    ));
                }
                data.vertices.push(VertexCycle {
                    id: id.text.to_string(),
                    multiplicity,
                    cycle: toks[5..].iter().map(|t| t.text.to_string()).collect(),
                });
            }
            "polygon" => {
                let id = expect(1, "polygon id")?;
                data.polygons.push(Polygon {
                    id: id.text.to_string(),
                    angles: toks[2..].iter().map(|t| t.text.to_string()).collect(),
                });
            }
            other => {
                return Err(syntax(
                    lineno,
                    first.column,
                    format!("unknown statement `{other}`"),
                ))
            }
        }
    }
    Ok(data)
}

/// Parses and validates a `.bcf` document.
pub fn parse_configuration(text: &str) -> Result<BrauerConfiguration> {
    BrauerConfiguration::from_data(parse_document(text)?)
}
