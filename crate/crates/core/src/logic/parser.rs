//! Recursive-descent parser for the formula syntax.
//!
//! ```text
//! formula  := until ("->" formula)?
//! until    := disj (("U" | "S") disj)*
//! disj     := conj ("|" conj)*
//! conj     := unary ("&" unary)*
//! unary    := ("!" | "C" | "B" | "R" | "R[" n "]") unary | primary
//! primary  := "true" | "false" | "(" formula ")" | ident "=" ident
//!           | ident ("(" ident ")")? | ("E" | "A") ident ":" ident "." formula
//! ```

use super::ast::Formula;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Num(u32),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Bang,
    Amp,
    Bar,
    Arrow,
    Colon,
    Dot,
    Equals,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Num(n) => format!("`{n}`"),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBrack => "`[`".into(),
            Tok::RBrack => "`]`".into(),
            Tok::Bang => "`!`".into(),
            Tok::Amp => "`&`".into(),
            Tok::Bar => "`|`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Dot => "`.`".into(),
            Tok::Equals => "`=`".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const KEYWORDS: [&str; 9] = ["true", "false", "C", "B", "R", "U", "S", "E", "A"];

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'[' => Tok::LBrack,
            b']' => Tok::RBrack,
            b'!' => Tok::Bang,
            b'&' => Tok::Amp,
            b'|' => Tok::Bar,
            b':' => Tok::Colon,
            b'.' => Tok::Dot,
            b'=' => Tok::Equals,
            b'-' if bytes.get(i + 1) == Some(&b'>') => {
                i += 1;
                Tok::Arrow
            }
            b'0'..=b'9' => {
                while i + 1 < bytes.len() && bytes[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let n = text[start..=i].parse().map_err(|_| Error::Syntax {
                    offset: start,
                    message: "number too large".into(),
                })?;
                Tok::Num(n)
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i + 1 < bytes.len() && (bytes[i + 1].is_ascii_alphanumeric() || bytes[i + 1] == b'_') {
                    i += 1;
                }
                Tok::Ident(text[start..=i].to_string())
            }
            _ => {
                let ch = text[start..].chars().next().unwrap_or('?');
                return Err(Error::Syntax {
                    offset: start,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        out.push((tok, start));
        i += 1;
    }
    out.push((Tok::End, text.len()));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.offset(),
            message: message.into(),
        })
    }

    fn expect(&mut self, want: Tok) -> Result<()> {
        if *self.peek() == want {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", want.describe(), self.peek().describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn ident(&mut self, what: &str) -> Result<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                Ok(s)
            }
            t => self.error(format!("expected {what}, found {}", t.describe())),
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        let lhs = self.until()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn until(&mut self) -> Result<Formula> {
        let mut lhs = self.disj()?;
        loop {
            if self.is_keyword("U") {
                self.bump();
                lhs = Formula::until(lhs, self.disj()?);
            } else if self.is_keyword("S") {
                self.bump();
                lhs = Formula::surrounded(lhs, self.disj()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn disj(&mut self) -> Result<Formula> {
        let mut lhs = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            lhs = Formula::or(lhs, self.conj()?);
        }
        Ok(lhs)
    }

    fn conj(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            lhs = Formula::and(lhs, self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Ident(s) if s == "C" => {
                self.bump();
                Ok(Formula::closure(self.unary()?))
            }
            Tok::Ident(s) if s == "B" => {
                self.bump();
                Ok(Formula::boundary(self.unary()?))
            }
            Tok::Ident(s) if s == "R" => {
                self.bump();
                let mut bound = None;
                if *self.peek() == Tok::LBrack {
                    self.bump();
                    match self.bump() {
                        Tok::Num(n) if n > 0 => bound = Some(n),
                        Tok::Num(_) => {
                            self.pos -= 1;
                            return self.error("reach bound must be positive");
                        }
                        _ => {
                            self.pos -= 1;
                            return self.error("expected a path length");
                        }
                    }
                    self.expect(Tok::RBrack)?;
                }
                Ok(Formula::reach(self.unary()?, bound))
            }
            _ => self.primary(),
        }
    }

    fn primary(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(s) if s == "true" => {
                self.bump();
                Ok(Formula::True)
            }
            Tok::Ident(s) if s == "false" => {
                self.bump();
                Ok(Formula::False)
            }
            Tok::Ident(s) if s == "E" || s == "A" => {
                self.bump();
                let var = self.ident("a variable")?;
                self.expect(Tok::Colon)?;
                let sort = self.ident("a sort")?;
                self.expect(Tok::Dot)?;
                let body = Box::new(self.formula()?);
                Ok(if s == "E" {
                    Formula::Exists { var, sort, body }
                } else {
                    Formula::Forall { var, sort, body }
                })
            }
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.bump();
                match self.peek() {
                    Tok::Equals => {
                        self.bump();
                        let rhs = self.ident("a variable")?;
                        Ok(Formula::Eq(s, rhs))
                    }
                    Tok::LParen
                        if matches!(&self.toks[self.pos + 1].0, Tok::Ident(v) if !KEYWORDS.contains(&v.as_str()))
                            && self.toks[self.pos + 2].0 == Tok::RParen =>
                    {
                        self.bump();
                        let arg = self.ident("a variable")?;
                        self.expect(Tok::RParen)?;
                        Ok(Formula::Atom { name: s, arg: Some(arg) })
                    }
                    _ => Ok(Formula::Atom { name: s, arg: None }),
                }
            }
            t => self.error(format!("expected a formula, found {}", t.describe())),
        }
    }
}

/// Parses a formula; errors carry the byte offset of the offending token.
pub fn parse_formula(text: &str) -> Result<Formula> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {}", p.peek().describe()));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    #[test]
    fn closure_and_negation() {
        assert_eq!(
            p("C(a) & !b"),
            Formula::and(Formula::closure(Formula::atom("a")), Formula::not(Formula::atom("b")))
        );
    }

    #[test]
    fn nested_surrounded() {
        assert_eq!(
            p("a U (b S c)"),
            Formula::until(Formula::atom("a"), Formula::surrounded(Formula::atom("b"), Formula::atom("c")))
        );
    }

    #[test]
    fn until_left_associative() {
        assert_eq!(
            p("a U b U c"),
            Formula::until(Formula::until(Formula::atom("a"), Formula::atom("b")), Formula::atom("c"))
        );
    }

    #[test]
    fn precedence_levels() {
        // ! > & > | > U > ->
        assert_eq!(
            p("!a & b | c U d -> e"),
            Formula::implies(
                Formula::until(
                    Formula::or(
                        Formula::and(Formula::not(Formula::atom("a")), Formula::atom("b")),
                        Formula::atom("c")
                    ),
                    Formula::atom("d")
                ),
                Formula::atom("e")
            )
        );
        assert_eq!(
            p("a -> b -> c"),
            Formula::implies(Formula::atom("a"), Formula::implies(Formula::atom("b"), Formula::atom("c")))
        );
    }

    #[test]
    fn reach_bounds() {
        assert_eq!(p("R[2] a"), Formula::reach(Formula::atom("a"), Some(2)));
        assert_eq!(p("R(a)"), Formula::reach(Formula::atom("a"), None));
        assert!(parse_formula("R[0] a").is_err());
    }

    #[test]
    fn quantifiers_and_equality() {
        let f = p("E y:X. x = y & a(y)");
        let Formula::Exists { var, sort, body } = f else { panic!() };
        assert_eq!((var.as_str(), sort.as_str()), ("y", "X"));
        assert_eq!(
            *body,
            Formula::and(
                Formula::Eq("x".into(), "y".into()),
                Formula::Atom { name: "a".into(), arg: Some("y".into()) }
            )
        );
    }

    #[test]
    fn syntax_error_offsets() {
        match parse_formula("a U") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 3),
            other => panic!("{other:?}"),
        }
        match parse_formula("a & $") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("(a").is_err());
        assert!(parse_formula("a b").is_err());
        assert!(parse_formula("C").is_err());
    }

    #[test]
    fn printing_roundtrips() {
        for s in [
            "C(a) & !b",
            "a U (b S c)",
            "a U b U c",
            "(a -> b) -> c",
            "!(a & b) | B(c)",
            "R[3](a) & R(b)",
            "E y:X. a(y) & x = y",
            "(A y:X. a(y)) & b",
            "true -> false",
            "a & (b | c)",
        ] {
            let f = p(s);
            assert_eq!(p(&f.to_string()), f, "{s} printed as {f}");
        }
        assert_eq!(p("C(a)&!b").to_string(), "C(a) & !b");
    }
}
