//! Canonical text form, e.g.
//! `IMPLIES(AND(TimeInterval(300,605),Owner("AreaOfInterest")),OccupyBox(1051,3056,1505,3603))`.
//!
//! Parsing returns the normalized term, so `parse(print(x)) == x.normalize()`.

use super::geometry::{Rect, TimeWindow};
use super::Invariant;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{message} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

pub(super) fn write_invariant(inv: &Invariant, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match inv {
        Invariant::True => f.write_str("TRUE"),
        Invariant::False => f.write_str("FALSE"),
        Invariant::And(parts) => write_list(f, "AND", parts),
        Invariant::Or(parts) => write_list(f, "OR", parts),
        Invariant::Not(inner) => write!(f, "NOT({inner})"),
        Invariant::Implies(lhs, rhs) => write!(f, "IMPLIES({lhs},{rhs})"),
        Invariant::TimeInterval(w) => write!(f, "{w}"),
        Invariant::Owner(name) => {
            f.write_str("Owner(\"")?;
            for c in name.chars() {
                match c {
                    '"' => f.write_str("\\\"")?,
                    '\\' => f.write_str("\\\\")?,
                    '\n' => f.write_str("\\n")?,
                    c => write!(f, "{c}")?,
                }
            }
            f.write_str("\")")
        }
        Invariant::OccupyBox(b) => write!(f, "{b}"),
        Invariant::OccupyPoint(x, y) => write!(f, "OccupyPoint({x},{y})"),
    }
}

fn write_list(f: &mut fmt::Formatter<'_>, head: &str, parts: &[Invariant]) -> fmt::Result {
    write!(f, "{head}(")?;
    for (i, p) in parts.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{p}")?;
    }
    f.write_str(")")
}

pub fn parse_invariant(input: &str) -> Result<Invariant, ParseError> {
    let mut p = Parser { src: input, pos: 0 };
    let inv = p.invariant()?;
    p.skip_ws();
    if p.pos != input.len() {
        return Err(p.error("trailing input"));
    }
    Ok(inv.normalize())
}

/// One invariant per non-blank line; lines starting with `#` are comments.
pub fn parse_invariants(input: &str) -> Result<Vec<Invariant>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0;
    for line in input.split_inclusive('\n') {
        let trimmed = line.trim();
        if !trimmed.is_empty() && !trimmed.starts_with('#') {
            out.push(parse_invariant(trimmed).map_err(|e| ParseError {
                offset: offset + (line.len() - line.trim_start().len()) + e.offset,
                message: e.message,
            })?);
        }
        offset += line.len();
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError { offset: self.pos, message: message.into() }
    }

    fn rest(&self) -> &str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.rest().starts_with(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<&str, ParseError> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.error("expected a construct name"));
        }
        let start = self.pos;
        self.pos += len;
        Ok(&self.src[start..self.pos])
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let rest = self.rest();
        let sign = usize::from(rest.starts_with('-') || rest.starts_with('+'));
        let digits = rest[sign..].find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len() - sign);
        if digits == 0 {
            return Err(self.error("expected an integer"));
        }
        let text = &rest[..sign + digits];
        let value = text.parse::<i64>().map_err(|_| self.error("integer out of range"))?;
        self.pos += text.len();
        Ok(value)
    }

    fn string(&mut self) -> Result<String, ParseError> {
        self.expect('"')?;
        let mut out = String::new();
        let mut chars = self.rest().char_indices();
        while let Some((i, c)) = chars.next() {
            match c {
                '"' => {
                    self.pos += i + 1;
                    return Ok(out);
                }
                '\\' => match chars.next() {
                    Some((_, '"')) => out.push('"'),
                    Some((_, '\\')) => out.push('\\'),
                    Some((_, 'n')) => out.push('\n'),
                    _ => {
                        self.pos += i;
                        return Err(self.error("bad escape in string"));
                    }
                },
                c => out.push(c),
            }
        }
        Err(self.error("unterminated string"))
    }

    fn integers<const N: usize>(&mut self) -> Result<[i64; N], ParseError> {
        self.expect('(')?;
        let mut out = [0; N];
        for (i, slot) in out.iter_mut().enumerate() {
            if i > 0 {
                self.expect(',')?;
            }
            *slot = self.integer()?;
        }
        self.expect(')')?;
        Ok(out)
    }

    fn list(&mut self) -> Result<Vec<Invariant>, ParseError> {
        self.expect('(')?;
        if self.eat(')') {
            return Ok(Vec::new());
        }
        let mut parts = vec![self.invariant()?];
        while self.eat(',') {
            parts.push(self.invariant()?);
        }
        self.expect(')')?;
        Ok(parts)
    }

    fn invariant(&mut self) -> Result<Invariant, ParseError> {
        let start = self.pos;
        let name = self.ident()?;
        Ok(match name {
            "TRUE" => Invariant::True,
            "FALSE" => Invariant::False,
            "AND" => Invariant::And(self.list()?),
            "OR" => Invariant::Or(self.list()?),
            "NOT" => {
                self.expect('(')?;
                let inner = self.invariant()?;
                self.expect(')')?;
                Invariant::not(inner)
            }
            "IMPLIES" => {
                self.expect('(')?;
                let lhs = self.invariant()?;
                self.expect(',')?;
                let rhs = self.invariant()?;
                self.expect(')')?;
                Invariant::implies(lhs, rhs)
            }
            "TimeInterval" => {
                let [a, b] = self.integers()?;
                Invariant::TimeInterval(TimeWindow::new(a, b))
            }
            "Owner" => {
                self.expect('(')?;
                let name = self.string()?;
                self.expect(')')?;
                Invariant::Owner(name)
            }
            "OccupyBox" => {
                let [x1, y1, x2, y2] = self.integers()?;
                Invariant::OccupyBox(Rect::new(x1, y1, x2, y2))
            }
            "OccupyPoint" => {
                let [x, y] = self.integers()?;
                Invariant::OccupyPoint(x, y)
            }
            other => {
                let other = other.to_string();
                self.pos = start;
                self.skip_ws();
                return Err(self.error(format!("unknown construct '{other}'")));
            }
        })
    }
}
