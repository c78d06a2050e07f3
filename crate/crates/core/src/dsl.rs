//! Text form of circuits.
//!
//! ```text
//! circuit  := parallel
//! parallel := series ("|" series)*
//! series   := atom ("-" atom)*
//! atom     := "R" ":" number | "L" ":" number | "(" circuit ")"
//! ```
//!
//! Series binds tighter than parallel, so `L:1 - L:2 | R:1` reads as
//! `(L:1 - L:2) | R:1`. Whitespace is ignored between tokens.

use std::fmt;

use crate::error::Error;
use crate::forest::{leaf, Circuit, Component, ComponentKind, Composition};

/// A parse failure at a 0-based character offset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for SourceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for SourceError {}

const MAX_NESTING: usize = 512;

pub fn parse(text: &str) -> Result<Circuit, SourceError> {
    let mut p = Parser {
        chars: text.chars().collect(),
        pos: 0,
        nesting: 0,
    };
    let c = p.parallel()?;
    p.skip_ws();
    if p.pos < p.chars.len() {
        let msg = if p.chars[p.pos] == ')' {
            "unbalanced parentheses: unexpected ')'".to_string()
        } else {
            format!("unexpected trailing input {:?}", p.chars[p.pos])
        };
        return Err(p.error_at(p.pos, msg));
    }
    Ok(c)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
    nesting: usize,
}

impl Parser {
    fn error_at(&self, position: usize, message: impl Into<String>) -> SourceError {
        SourceError {
            position: position.min(self.chars.len()),
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn parallel(&mut self) -> Result<Circuit, SourceError> {
        let mut parts = vec![self.series()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            parts.push(self.series()?);
        }
        Ok(join(Composition::Parallel, parts))
    }

    fn series(&mut self) -> Result<Circuit, SourceError> {
        let mut parts = vec![self.atom()?];
        while self.peek() == Some('-') {
            self.pos += 1;
            parts.push(self.atom()?);
        }
        Ok(join(Composition::Series, parts))
    }

    fn atom(&mut self) -> Result<Circuit, SourceError> {
        let start = self.pos;
        match self.peek() {
            Some('(') => {
                let open = self.pos;
                self.nesting += 1;
                if self.nesting > MAX_NESTING {
                    return Err(self.error_at(open, "parentheses nested too deeply"));
                }
                self.pos += 1;
                let inner = self.parallel()?;
                if self.peek() != Some(')') {
                    return Err(self.error_at(
                        self.pos,
                        format!("unbalanced parentheses: '(' at offset {open} is not closed"),
                    ));
                }
                self.pos += 1;
                self.nesting -= 1;
                Ok(inner)
            }
            Some(c @ ('R' | 'L')) => {
                let kind = if c == 'R' {
                    ComponentKind::Resistor
                } else {
                    ComponentKind::Inertance
                };
                self.pos += 1;
                if self.peek() != Some(':') {
                    return Err(self.error_at(self.pos, "expected ':' after component letter"));
                }
                self.pos += 1;
                self.skip_ws();
                let num_start = self.pos;
                let value = self.number()?;
                Component::new(kind, value).map(leaf).map_err(|e| match e {
                    Error::NonPositiveValue(_) => {
                        self.error_at(num_start, "non-positive component value")
                    }
                    other => self.error_at(num_start, other.to_string()),
                })
            }
            Some(other) => Err(self.error_at(
                self.pos,
                format!("unknown token {other:?}; expected 'R', 'L' or '('"),
            )),
            None => Err(self.error_at(
                start.max(self.pos),
                "unexpected end of input; expected 'R', 'L' or '('",
            )),
        }
    }

    fn number(&mut self) -> Result<f64, SourceError> {
        let start = self.pos;
        let at = |p: &Self, i: usize| p.chars.get(i).copied();
        let mut i = self.pos;
        if matches!(at(self, i), Some('+' | '-')) {
            i += 1;
        }
        let int_start = i;
        while at(self, i).is_some_and(|c| c.is_ascii_digit()) {
            i += 1;
        }
        let mut mantissa_digits = i - int_start;
        if at(self, i) == Some('.') {
            i += 1;
            let frac_start = i;
            while at(self, i).is_some_and(|c| c.is_ascii_digit()) {
                i += 1;
            }
            mantissa_digits += i - frac_start;
        }
        if mantissa_digits == 0 {
            return Err(self.error_at(start, "expected a number"));
        }
        if matches!(at(self, i), Some('e' | 'E')) {
            let mut j = i + 1;
            if matches!(at(self, j), Some('+' | '-')) {
                j += 1;
            }
            let exp_start = j;
            while at(self, j).is_some_and(|c| c.is_ascii_digit()) {
                j += 1;
            }
            if j == exp_start {
                return Err(self.error_at(i, "malformed exponent"));
            }
            i = j;
        }
        let text: String = self.chars[start..i].iter().collect();
        self.pos = i;
        text.parse::<f64>()
            .map_err(|_| self.error_at(start, format!("invalid number {text:?}")))
    }
}

fn join(kind: Composition, mut parts: Vec<Circuit>) -> Circuit {
    if parts.len() == 1 {
        return parts.pop().expect("one part");
    }
    crate::forest::compose(kind, parts).expect("parsed parts are canonical and at least two")
}

/// Prints with the fewest parentheses that parse back to the same structure.
pub fn format(c: &Circuit) -> String {
    let mut out = String::new();
    write_circuit(c, &mut out);
    out
}

fn write_circuit(c: &Circuit, out: &mut String) {
    match c {
        Circuit::Leaf(comp) => out.push_str(&comp.to_string()),
        Circuit::Parallel(parts) => {
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" | ");
                }
                write_wrapped(p, matches!(p, Circuit::Parallel(_)), out);
            }
        }
        Circuit::Series(parts) => {
            for (i, p) in parts.iter().enumerate() {
                if i > 0 {
                    out.push_str(" - ");
                }
                write_wrapped(p, !matches!(p, Circuit::Leaf(_)), out);
            }
        }
    }
}

fn write_wrapped(c: &Circuit, parens: bool, out: &mut String) {
    if parens {
        out.push('(');
        write_circuit(c, out);
        out.push(')');
    } else {
        write_circuit(c, out);
    }
}

/// Reads a corpus file: one circuit per line, `#` starts a comment, blank
/// lines are skipped. Errors carry the 1-based line number.
pub fn parse_corpus(text: &str) -> Result<Vec<Circuit>, (usize, SourceError)> {
    let mut out = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        if body.trim().is_empty() {
            continue;
        }
        out.push(parse(body).map_err(|e| (n + 1, e))?);
    }
    Ok(out)
}
