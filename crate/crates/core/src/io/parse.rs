//! Parser for the ground program text format.
//!
//! ```text
//! program    := { statement }
//! statement  := rule | projection
//! rule       := head "." | head ":-" body "." | ":-" body "."
//! head       := atom { "|" atom }
//! body       := literal { "," literal }
//! literal    := [ "not" ] atom
//! projection := "#project" atom { "," atom } "."
//! ```
//!
//! `%` starts a line comment. Atom ids are handed out in the order atoms
//! first appear inside rules; `#project` names are resolved afterwards.

use std::collections::BTreeSet;
use std::fmt;

use crate::program::{Atom, AtomTable, Program, Rule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseDiagnostic {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseDiagnostic {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseDiagnostic {
            line,
            column,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok<'a> {
    Ident(&'a str),
    Not,
    Pipe,
    Comma,
    Dot,
    If,
    Project,
    Eof,
}

impl fmt::Display for Tok<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "atom `{s}`"),
            Tok::Not => f.write_str("`not`"),
            Tok::Pipe => f.write_str("`|`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Dot => f.write_str("`.`"),
            Tok::If => f.write_str("`:-`"),
            Tok::Project => f.write_str("`#project`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Pos {
    line: usize,
    column: usize,
}

struct Lexer<'a> {
    src: &'a str,
    offset: usize,
    line: usize,
    column: usize,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a str) -> Self {
        Lexer {
            src,
            offset: 0,
            line: 1,
            column: 1,
        }
    }

    fn peek_char(&self) -> Option<char> {
        self.src[self.offset..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek_char()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(c) = self.peek_char() {
            if c == '%' {
                while let Some(c) = self.peek_char() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn next(&mut self) -> Result<(Tok<'a>, Pos), ParseDiagnostic> {
        self.skip_trivia();
        let pos = Pos {
            line: self.line,
            column: self.column,
        };
        let Some(c) = self.peek_char() else {
            return Ok((Tok::Eof, pos));
        };
        let tok = match c {
            '|' => {
                self.bump();
                Tok::Pipe
            }
            ',' => {
                self.bump();
                Tok::Comma
            }
            '.' => {
                self.bump();
                Tok::Dot
            }
            ':' => {
                self.bump();
                if self.peek_char() == Some('-') {
                    self.bump();
                    Tok::If
                } else {
                    return Err(ParseDiagnostic::new(pos.line, pos.column, "unknown token `:`"));
                }
            }
            '#' => {
                let start = self.offset;
                self.bump();
                while matches!(self.peek_char(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.bump();
                }
                let word = &self.src[start..self.offset];
                if word == "#project" {
                    Tok::Project
                } else {
                    return Err(ParseDiagnostic::new(
                        pos.line,
                        pos.column,
                        format!("unknown token `{word}`"),
                    ));
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = self.offset;
                while matches!(self.peek_char(), Some(c) if c.is_ascii_alphanumeric() || c == '_') {
                    self.bump();
                }
                match &self.src[start..self.offset] {
                    "not" => Tok::Not,
                    s => Tok::Ident(s),
                }
            }
            other => {
                return Err(ParseDiagnostic::new(
                    pos.line,
                    pos.column,
                    format!("unknown token `{other}`"),
                ))
            }
        };
        Ok((tok, pos))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    current: (Tok<'a>, Pos),
    atoms: AtomTable,
    rules: Vec<Rule>,
    projection: Vec<(&'a str, Pos)>,
    has_directive: bool,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, ParseDiagnostic> {
        let mut lexer = Lexer::new(src);
        let current = lexer.next()?;
        Ok(Parser {
            lexer,
            current,
            atoms: AtomTable::new(),
            rules: Vec::new(),
            projection: Vec::new(),
            has_directive: false,
        })
    }

    fn advance(&mut self) -> Result<(Tok<'a>, Pos), ParseDiagnostic> {
        let next = self.lexer.next()?;
        Ok(std::mem::replace(&mut self.current, next))
    }

    fn error_here(&self, message: impl Into<String>) -> ParseDiagnostic {
        let pos = self.current.1;
        ParseDiagnostic::new(pos.line, pos.column, message)
    }

    fn expect_atom(&mut self) -> Result<(&'a str, Pos), ParseDiagnostic> {
        match self.current.0 {
            Tok::Ident(name) => {
                let (_, pos) = self.advance()?;
                Ok((name, pos))
            }
            ref other => Err(self.error_here(format!("expected atom, found {other}"))),
        }
    }

    fn expect_period(&mut self) -> Result<(), ParseDiagnostic> {
        if self.current.0 == Tok::Dot {
            self.advance()?;
            Ok(())
        } else {
            Err(self.error_here(format!("missing terminating period, found {}", self.current.0)))
        }
    }

    fn statement(&mut self) -> Result<(), ParseDiagnostic> {
        match self.current.0 {
            Tok::Project => {
                self.advance()?;
                self.has_directive = true;
                loop {
                    let (name, pos) = self.expect_atom()?;
                    self.projection.push((name, pos));
                    if self.current.0 == Tok::Comma {
                        self.advance()?;
                    } else {
                        break;
                    }
                }
                self.expect_period()
            }
            Tok::Dot => Err(self.error_here("empty rule")),
            Tok::If => {
                let (_, pos) = self.advance()?;
                if self.current.0 == Tok::Dot {
                    return Err(ParseDiagnostic::new(pos.line, pos.column, "empty rule"));
                }
                let (pos_body, neg_body) = self.body()?;
                self.expect_period()?;
                self.rules.push(Rule::new(Vec::new(), pos_body, neg_body));
                Ok(())
            }
            Tok::Ident(_) => {
                let mut head = Vec::new();
                loop {
                    let (name, _) = self.expect_atom()?;
                    head.push(self.atoms.intern(name));
                    if self.current.0 == Tok::Pipe {
                        self.advance()?;
                    } else {
                        break;
                    }
                }
                let (pos_body, neg_body) = if self.current.0 == Tok::If {
                    self.advance()?;
                    self.body()?
                } else {
                    (Vec::new(), Vec::new())
                };
                self.expect_period()?;
                self.rules.push(Rule::new(head, pos_body, neg_body));
                Ok(())
            }
            ref other => Err(self.error_here(format!("unexpected {other}"))),
        }
    }

    fn body(&mut self) -> Result<(Vec<Atom>, Vec<Atom>), ParseDiagnostic> {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        loop {
            let negated = if self.current.0 == Tok::Not {
                self.advance()?;
                true
            } else {
                false
            };
            let (name, _) = self.expect_atom()?;
            let a = self.atoms.intern(name);
            if negated {
                neg.push(a);
            } else {
                pos.push(a);
            }
            if self.current.0 == Tok::Comma {
                self.advance()?;
            } else {
                return Ok((pos, neg));
            }
        }
    }

    fn finish(self) -> Result<Program, ParseDiagnostic> {
        let projection = if self.has_directive {
            let mut set = BTreeSet::new();
            for (name, pos) in &self.projection {
                match self.atoms.get(name) {
                    Some(a) => {
                        set.insert(a);
                    }
                    None => {
                        return Err(ParseDiagnostic::new(
                            pos.line,
                            pos.column,
                            format!("projection atom `{name}` does not occur in any rule"),
                        ))
                    }
                }
            }
            Some(set)
        } else {
            None
        };
        Ok(Program::new(self.atoms, self.rules, projection))
    }
}

/// Parses a full program text. Without a `#project` directive the
/// projection is every atom.
pub fn parse_program(text: &str) -> Result<Program, ParseDiagnostic> {
    let mut parser = Parser::new(text)?;
    while parser.current.0 != Tok::Eof {
        parser.statement()?;
    }
    parser.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::EXAMPLE1;

    fn names(p: &Program, set: &BTreeSet<Atom>) -> Vec<String> {
        set.iter().map(|&a| p.name(a).to_owned()).collect()
    }

    #[test]
    fn running_example_text() {
        let p = parse_program(EXAMPLE1).unwrap();
        assert_eq!(p.rules().len(), 5);
        assert_eq!(p.num_atoms(), 5);
        assert_eq!(names(&p, p.projection()), ["e", "d"]);
        let order: Vec<&str> = p.atom_table().atoms().map(|a| p.name(a)).collect();
        assert_eq!(order, ["a", "b", "c", "e", "d"]);
        assert_eq!(p.rules(), crate::fixtures::example1().rules());
    }

    #[test]
    fn empty_and_default_projection() {
        let p = parse_program("").unwrap();
        assert_eq!(p.rules().len(), 0);
        assert!(p.projection().is_empty());

        let q = parse_program("a :- not a.").unwrap();
        assert!(q.is_normal());
        assert_eq!(names(&q, q.projection()), ["a"]);
    }

    #[test]
    fn comments_and_unions() {
        let p = parse_program("% hi\n#project b.\na|b. % tail\nc :- a.\n#project c.").unwrap();
        assert_eq!(names(&p, p.projection()), ["b", "c"]);
    }

    #[test]
    fn diagnostics() {
        let e = parse_program("a :- b\nc.").unwrap_err();
        assert_eq!((e.line, e.column), (2, 1));
        assert!(e.message.contains("missing terminating period"));

        let e = parse_program("a ; b.").unwrap_err();
        assert_eq!((e.line, e.column), (1, 3));
        assert!(e.message.contains("unknown token"));

        let e = parse_program(":- .").unwrap_err();
        assert!(e.message.contains("empty rule"));
        let e = parse_program("  .").unwrap_err();
        assert_eq!((e.line, e.column, e.message.as_str()), (1, 3, "empty rule"));

        let e = parse_program("a.\n#project z.").unwrap_err();
        assert_eq!((e.line, e.column), (2, 10));
        assert!(e.message.contains("`z`"));

        assert!(parse_program("#project .").is_err());
        assert!(parse_program("a").unwrap_err().message.contains("end of input"));
        assert!(parse_program("#show a.").unwrap_err().message.contains("unknown token"));
    }
}
