//! Boolean predicates over property names, e.g.
//! `H_almost_Rothberger AND NOT H_Rothberger`.
//!
//! Grammar, loosest binding first: `OR`, `AND`, `NOT`, then names and
//! parentheses. Keywords are case-insensitive and `&&`, `||`, `!` are
//! accepted as well. Names are matched case-insensitively with `-` and `_`
//! treated alike.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{LabError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Predicate {
    Var(String),
    Not(Box<Predicate>),
    And(Box<Predicate>, Box<Predicate>),
    Or(Box<Predicate>, Box<Predicate>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Name(String),
    And,
    Or,
    Not,
    Open,
    Close,
}

/// Lower-case, `-` replaced by `_`.
pub fn normalize(name: &str) -> String {
    name.trim().to_ascii_lowercase().replace('-', "_")
}

fn tokenize(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(at, c)) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '(' => {
                chars.next();
                out.push(Token::Open);
            }
            ')' => {
                chars.next();
                out.push(Token::Close);
            }
            '!' => {
                chars.next();
                out.push(Token::Not);
            }
            '&' | '|' => {
                chars.next();
                if chars.next().map(|(_, d)| d) != Some(c) {
                    return Err(LabError::Predicate(format!("lone '{c}' at offset {at}")));
                }
                out.push(if c == '&' { Token::And } else { Token::Or });
            }
            c if c.is_ascii_alphanumeric() || c == '_' || c == '-' => {
                let mut word = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' || d == '-' {
                        word.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(match word.to_ascii_uppercase().as_str() {
                    "AND" => Token::And,
                    "OR" => Token::Or,
                    "NOT" => Token::Not,
                    _ => Token::Name(normalize(&word)),
                });
            }
            other => {
                return Err(LabError::Predicate(format!(
                    "unexpected character '{other}' at offset {at}"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn or(&mut self) -> Result<Predicate> {
        let mut lhs = self.and()?;
        while self.peek() == Some(&Token::Or) {
            self.pos += 1;
            lhs = Predicate::Or(Box::new(lhs), Box::new(self.and()?));
        }
        Ok(lhs)
    }

    fn and(&mut self) -> Result<Predicate> {
        let mut lhs = self.not()?;
        while self.peek() == Some(&Token::And) {
            self.pos += 1;
            lhs = Predicate::And(Box::new(lhs), Box::new(self.not()?));
        }
        Ok(lhs)
    }

    fn not(&mut self) -> Result<Predicate> {
        if self.peek() == Some(&Token::Not) {
            self.pos += 1;
            return Ok(Predicate::Not(Box::new(self.not()?)));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Predicate> {
        match self.next() {
            Some(Token::Name(n)) => Ok(Predicate::Var(n)),
            Some(Token::Open) => {
                let inner = self.or()?;
                match self.next() {
                    Some(Token::Close) => Ok(inner),
                    _ => Err(LabError::Predicate("unbalanced parenthesis".into())),
                }
            }
            Some(t) => Err(LabError::Predicate(format!("unexpected {t:?}"))),
            None => Err(LabError::Predicate("unexpected end of predicate".into())),
        }
    }
}

impl Predicate {
    /// Parses `src` and checks every name against `known` (already
    /// normalized).
    pub fn parse(src: &str, known: &[String]) -> Result<Self> {
        let tokens = tokenize(src)?;
        if tokens.is_empty() {
            return Err(LabError::Predicate("empty predicate".into()));
        }
        let mut p = Parser { tokens, pos: 0 };
        let expr = p.or()?;
        if p.pos != p.tokens.len() {
            return Err(LabError::Predicate(format!(
                "trailing input after token {}",
                p.pos
            )));
        }
        for name in expr.names() {
            if !known.contains(&name) {
                return Err(LabError::Predicate(format!("unknown property '{name}'")));
            }
        }
        Ok(expr)
    }

    pub fn names(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut out);
        out.sort();
        out.dedup();
        out
    }

    fn collect(&self, out: &mut Vec<String>) {
        match self {
            Predicate::Var(n) => out.push(n.clone()),
            Predicate::Not(a) => a.collect(out),
            Predicate::And(a, b) | Predicate::Or(a, b) => {
                a.collect(out);
                b.collect(out);
            }
        }
    }

    /// Evaluates against normalized names. Missing names are an error.
    pub fn eval(&self, values: &BTreeMap<String, bool>) -> Result<bool> {
        Ok(match self {
            Predicate::Var(n) => *values
                .get(n)
                .ok_or_else(|| LabError::Predicate(format!("no value for '{n}'")))?,
            Predicate::Not(a) => !a.eval(values)?,
            Predicate::And(a, b) => a.eval(values)? && b.eval(values)?,
            Predicate::Or(a, b) => a.eval(values)? || b.eval(values)?,
        })
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Predicate::Var(n) => f.write_str(n),
            Predicate::Not(a) => write!(f, "NOT {a}"),
            Predicate::And(a, b) => write!(f, "({a} AND {b})"),
            Predicate::Or(a, b) => write!(f, "({a} OR {b})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn known() -> Vec<String> {
        ["a", "b", "c", "h_rothberger"]
            .iter()
            .map(|s| s.to_string())
            .collect()
    }

    fn vals(a: bool, b: bool, c: bool) -> BTreeMap<String, bool> {
        BTreeMap::from([("a".into(), a), ("b".into(), b), ("c".into(), c)])
    }

    #[test]
    fn precedence_not_and_or() {
        let p = Predicate::parse("a OR b AND NOT c", &known()).unwrap();
        assert_eq!(p.to_string(), "(a OR (b AND NOT c))");
        let q = Predicate::parse("!(a || b) && c", &known()).unwrap();
        assert_eq!(q.to_string(), "(NOT (a OR b) AND c)");
    }

    #[test]
    fn names_are_normalized() {
        let p = Predicate::parse("H-Rothberger and not H_ROTHBERGER", &known()).unwrap();
        assert_eq!(p.names(), vec!["h_rothberger".to_string()]);
        let v = BTreeMap::from([("h_rothberger".to_string(), true)]);
        assert!(!p.eval(&v).unwrap());
    }

    #[test]
    fn errors() {
        for bad in ["", "a AND", "(a", "a b", "a & b", "zzz", "a ? b", "NOT"] {
            assert!(Predicate::parse(bad, &known()).is_err(), "{bad}");
        }
    }

    fn arb() -> impl Strategy<Value = Predicate> {
        let leaf =
            prop_oneof![Just("a"), Just("b"), Just("c")].prop_map(|s| Predicate::Var(s.into()));
        leaf.prop_recursive(4, 24, 2, |inner| {
            prop_oneof![
                inner.clone().prop_map(|a| Predicate::Not(Box::new(a))),
                (inner.clone(), inner.clone())
                    .prop_map(|(a, b)| Predicate::And(Box::new(a), Box::new(b))),
                (inner.clone(), inner).prop_map(|(a, b)| Predicate::Or(Box::new(a), Box::new(b))),
            ]
        })
    }

    proptest! {
        #[test]
        fn display_round_trips(p in arb(), a: bool, b: bool, c: bool) {
            let back = Predicate::parse(&p.to_string(), &known()).unwrap();
            prop_assert_eq!(back.eval(&vals(a, b, c)).unwrap(), p.eval(&vals(a, b, c)).unwrap());
        }
    }
}
