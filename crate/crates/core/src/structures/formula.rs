//! First-order formulas over a relational signature.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Rel(String, Vec<String>),
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn rel(symbol: &str, args: &[&str]) -> Formula {
        Formula::Rel(symbol.to_string(), args.iter().map(|a| a.to_string()).collect())
    }

    pub fn eq(x: &str, y: &str) -> Formula {
        Formula::Eq(x.to_string(), y.to_string())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }

    pub fn and(self, other: Formula) -> Formula {
        Formula::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Formula) -> Formula {
        Formula::Or(Box::new(self), Box::new(other))
    }

    pub fn implies(self, other: Formula) -> Formula {
        Formula::Implies(Box::new(self), Box::new(other))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(var.to_string(), Box::new(body))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall(var.to_string(), Box::new(body))
    }

    /// Universal closure over `vars`, outermost first.
    pub fn forall_all(vars: &[&str], body: Formula) -> Formula {
        vars.iter().rev().fold(body, |acc, v| Formula::forall(v, acc))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Rel(_, args) => args.iter().for_each(|a| note(a, bound)),
            Formula::Eq(x, y) => {
                note(x, bound);
                note(y, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(v, f) | Formula::Forall(v, f) => {
                bound.push(v.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Relation symbols with the argument counts they are used with.
    pub fn symbols(&self) -> BTreeSet<(String, usize)> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| {
            if let Formula::Rel(s, args) = f {
                out.insert((s.clone(), args.len()));
            }
        });
        out
    }

    fn visit(&self, f: &mut dyn FnMut(&Formula)) {
        f(self);
        match self {
            Formula::Rel(..) | Formula::Eq(..) => {}
            Formula::Not(g) | Formula::Exists(_, g) | Formula::Forall(_, g) => g.visit(f),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.visit(f);
                b.visit(f);
            }
        }
    }

    pub fn parse(text: &str) -> Result<Formula> {
        let mut p = Parser { src: text, pos: 0 };
        let f = p.formula()?;
        p.skip_ws();
        if p.pos < text.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(f)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Rel(s, args) => write!(f, "{s}({})", args.join(",")),
            Formula::Eq(x, y) => write!(f, "{x} = {y}"),
            Formula::Not(g) => write!(f, "~{g}"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Exists(v, g) => write!(f, "E {v}. {g}"),
            Formula::Forall(v, g) => write!(f, "A {v}. {g}"),
        }
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        let rest = &self.src[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.src[self.pos..].chars().next()
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token) {
            self.pos += token.len();
            Ok(())
        } else {
            Err(self.error(&format!("expected `{token}`")))
        }
    }

    fn ident(&mut self) -> Result<String> {
        self.skip_ws();
        let rest = &self.src[self.pos..];
        let mut chars = rest.char_indices();
        match chars.next() {
            Some((_, c)) if c.is_ascii_alphabetic() => {}
            _ => return Err(self.error("expected an identifier")),
        }
        let end = chars
            .find(|&(_, c)| !(c.is_ascii_alphanumeric() || c == '_'))
            .map_or(rest.len(), |(i, _)| i);
        self.pos += end;
        Ok(rest[..end].to_string())
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some('~') => {
                self.pos += 1;
                Ok(Formula::Not(Box::new(self.formula()?)))
            }
            Some('(') => {
                self.pos += 1;
                let a = self.formula()?;
                self.skip_ws();
                let rest = &self.src[self.pos..];
                if rest.starts_with(')') {
                    self.pos += 1;
                    return Ok(a);
                }
                let (len, make): (usize, fn(Box<Formula>, Box<Formula>) -> Formula) = if rest.starts_with("->") {
                    (2, Formula::Implies)
                } else if rest.starts_with('&') {
                    (1, Formula::And)
                } else if rest.starts_with('|') {
                    (1, Formula::Or)
                } else {
                    return Err(self.error("expected `&`, `|`, `->` or `)`"));
                };
                self.pos += len;
                let b = self.formula()?;
                self.expect(")")?;
                Ok(make(Box::new(a), Box::new(b)))
            }
            Some(_) => {
                let start = self.pos;
                let name = self.ident()?;
                match self.peek() {
                    Some('(') => {
                        self.pos += 1;
                        let mut args = vec![self.ident()?];
                        while self.peek() == Some(',') {
                            self.pos += 1;
                            args.push(self.ident()?);
                        }
                        self.expect(")")?;
                        Ok(Formula::Rel(name, args))
                    }
                    Some('=') => {
                        self.pos += 1;
                        Ok(Formula::Eq(name, self.ident()?))
                    }
                    Some(c) if (name == "E" || name == "A") && c.is_ascii_alphabetic() => {
                        let var = self.ident()?;
                        self.expect(".")?;
                        let body = Box::new(self.formula()?);
                        Ok(if name == "E" {
                            Formula::Exists(var, body)
                        } else {
                            Formula::Forall(var, body)
                        })
                    }
                    _ => {
                        self.pos = start + name.len();
                        Err(self.error("expected `(`, `=` or a quantified variable"))
                    }
                }
            }
        }
    }
}
