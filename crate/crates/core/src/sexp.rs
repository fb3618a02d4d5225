//! Minimal s-expression reader and printer used by every file format.
//!
//! Nodes keep their source position so that semantic errors (an unknown
//! label, a bad integer) can point at the offending token.

use crate::error::{Error, Result};
use std::fmt::Write as _;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn error(self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

impl Sexp {
    pub fn atom(s: impl Into<String>) -> Sexp {
        Sexp::Atom(s.into(), Pos::default())
    }

    pub fn list(items: Vec<Sexp>) -> Sexp {
        Sexp::List(items, Pos::default())
    }

    /// `(head items...)`
    pub fn tagged(head: &str, mut items: Vec<Sexp>) -> Sexp {
        items.insert(0, Sexp::atom(head));
        Sexp::list(items)
    }

    pub fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }

    pub fn as_atom(&self) -> Result<&str> {
        match self {
            Sexp::Atom(s, _) => Ok(s),
            Sexp::List(_, p) => Err(p.error("expected an atom, found a list")),
        }
    }

    pub fn as_list(&self) -> Result<&[Sexp]> {
        match self {
            Sexp::List(items, _) => Ok(items),
            Sexp::Atom(s, p) => Err(p.error(format!("expected a list, found `{s}`"))),
        }
    }

    pub fn as_usize(&self) -> Result<usize> {
        let s = self.as_atom()?;
        s.parse()
            .map_err(|_| self.pos().error(format!("expected a non-negative integer, found `{s}`")))
    }

    /// Head symbol of a list, if it has one.
    pub fn head(&self) -> Option<&str> {
        match self {
            Sexp::List(items, _) => match items.first() {
                Some(Sexp::Atom(s, _)) => Some(s),
                _ => None,
            },
            Sexp::Atom(..) => None,
        }
    }

    /// The list items after the head, checking the head matches `tag`.
    pub fn expect_tagged(&self, tag: &str) -> Result<&[Sexp]> {
        let items = self.as_list()?;
        match self.head() {
            Some(h) if h == tag => Ok(&items[1..]),
            _ => Err(self.pos().error(format!("expected `({tag} ...)`"))),
        }
    }

    /// Single-line rendering.
    pub fn to_compact(&self) -> String {
        let mut out = String::new();
        self.write_compact(&mut out);
        out
    }

    fn write_compact(&self, out: &mut String) {
        match self {
            Sexp::Atom(s, _) => out.push_str(s),
            Sexp::List(items, _) => {
                out.push('(');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    item.write_compact(out);
                }
                out.push(')');
            }
        }
    }

    /// Renders the top-level list with one child per line, and each child's
    /// sub-lists (past the child's own head) on their own lines when the
    /// child has more than a couple of list items. Output ends with a newline.
    pub fn to_pretty(&self) -> String {
        let mut out = String::new();
        match self {
            Sexp::List(items, _) if !items.is_empty() => {
                out.push('(');
                items[0].write_compact(&mut out);
                for item in &items[1..] {
                    out.push_str("\n  ");
                    write_section(item, &mut out);
                }
                out.push(')');
            }
            other => other.write_compact(&mut out),
        }
        out.push('\n');
        out
    }
}

fn write_section(item: &Sexp, out: &mut String) {
    let lists = match item {
        Sexp::List(items, _) => items.iter().skip(1).filter(|s| matches!(s, Sexp::List(..))).count(),
        Sexp::Atom(..) => 0,
    };
    match item {
        Sexp::List(items, _) if lists >= 2 => {
            out.push('(');
            items[0].write_compact(out);
            for child in &items[1..] {
                out.push_str("\n    ");
                child.write_compact(out);
            }
            out.push(')');
        }
        other => other.write_compact(out),
    }
}

/// Parses every top-level expression in `text`. `;` starts a line comment.
pub fn parse_all(text: &str) -> Result<Vec<Sexp>> {
    let mut reader = Reader {
        chars: text.chars().collect(),
        idx: 0,
        line: 1,
        column: 1,
    };
    let mut out = Vec::new();
    loop {
        reader.skip_ws();
        if reader.peek().is_none() {
            return Ok(out);
        }
        out.push(reader.read()?);
    }
}

/// Parses exactly one top-level expression.
pub fn parse_one(text: &str) -> Result<Sexp> {
    let mut all = parse_all(text)?;
    match all.len() {
        1 => Ok(all.pop().unwrap()),
        0 => Err(Pos { line: 1, column: 1 }.error("empty input")),
        _ => Err(all[1].pos().error("unexpected trailing expression")),
    }
}

struct Reader {
    chars: Vec<char>,
    idx: usize,
    line: usize,
    column: usize,
}

impl Reader {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).copied()
    }

    fn pos(&self) -> Pos {
        Pos {
            line: self.line,
            column: self.column,
        }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.idx += 1;
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.peek() {
            if c == ';' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn read(&mut self) -> Result<Sexp> {
        self.skip_ws();
        let start = self.pos();
        match self.peek() {
            None => Err(start.error("unexpected end of input")),
            Some(')') => Err(start.error("unexpected `)`")),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_ws();
                    match self.peek() {
                        None => return Err(start.error("unclosed `(`")),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.read()?),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(c) = self.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, start))
            }
        }
    }
}

/// Whether `s` can be written as a bare atom and read back unchanged.
pub fn is_valid_atom(s: &str) -> bool {
    !s.is_empty() && !s.chars().any(|c| c.is_whitespace() || c == '(' || c == ')' || c == ';')
}

pub(crate) fn check_atom(s: &str) -> Result<()> {
    if is_valid_atom(s) {
        Ok(())
    } else {
        let mut msg = String::new();
        let _ = write!(msg, "`{s}` is not a valid name");
        Err(Error::RangeError(msg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roundtrip_compact() {
        let text = "(graph (arity 1) (edges (0 a 1) (1 b 1 2)))";
        assert_eq!(parse_one(text).unwrap().to_compact(), text);
    }

    #[test]
    fn reports_position() {
        let err = parse_one("(a\n  (b c)").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 1,
                column: 1,
                message: "unclosed `(`".into()
            }
        );
        let err = parse_one("(a))").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 1, column: 4, .. }));
    }

    #[test]
    fn comments_skipped() {
        let all = parse_all("; header\n(a) ; trailing\n(b)").unwrap();
        assert_eq!(all.len(), 2);
        assert_eq!(all[1].pos(), Pos { line: 3, column: 1 });
    }

    #[test]
    fn pretty_reparses() {
        let s = parse_one("(graph (arity 0) (vertices 0 1) (edges (0 a 0) (1 a 1)))").unwrap();
        let pretty = s.to_pretty();
        assert_eq!(parse_one(&pretty).unwrap().to_compact(), s.to_compact());
    }
}
