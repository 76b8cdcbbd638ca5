//! Polynomial expressions and scheme specification files.
//!
//! ```text
//! expr   := ("+"|"-")? term (("+"|"-") term)*
//! term   := factor ("*" factor)*
//! factor := base ("^" nat)?
//! base   := ident | rational | "zeta" | "(" expr ")"
//! ```

use std::path::Path;

use num::{BigInt, BigRational};
use serde::{Deserialize, Serialize};

use crate::cyclo::{zeta_pow, CycScalar};
use crate::error::{Error, Result};
use crate::jetpoly::{JetPoly, JetVar};
use crate::jetscheme::{DiagAutomorphism, SchemeSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

#[derive(Clone, Debug)]
struct Spanned {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(src: &str) -> Result<Vec<Spanned>> {
    let mut out = Vec::new();
    let (mut line, mut column) = (1, 1);
    let mut chars = src.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (l, col) = (line, column);
        if c == '\n' {
            chars.next();
            line += 1;
            column = 1;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            column += 1;
            continue;
        }
        let tok = if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_alphanumeric() || d == '_' {
                    s.push(d);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            Tok::Ident(s)
        } else if c.is_ascii_digit() {
            let mut s = String::new();
            while let Some(&d) = chars.peek() {
                if d.is_ascii_digit() {
                    s.push(d);
                    chars.next();
                    column += 1;
                } else {
                    break;
                }
            }
            Tok::Int(s.parse().expect("digits"))
        } else {
            chars.next();
            column += 1;
            match c {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                _ => {
                    return Err(Error::Syntax {
                        line: l,
                        column: col,
                        message: format!("unexpected character `{c}`"),
                    })
                }
            }
        };
        out.push(Spanned {
            tok,
            line: l,
            column: col,
        });
    }
    out.push(Spanned {
        tok: Tok::End,
        line,
        column,
    });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Spanned>,
    pos: usize,
    names: &'a [String],
    order: u32,
}

impl Parser<'_> {
    fn peek(&self) -> &Spanned {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Spanned {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: impl Into<String>) -> Error {
        let t = self.peek();
        let message = message.into();
        let message = if t.tok == Tok::End {
            format!("{message} at end of input")
        } else {
            message
        };
        Error::Syntax {
            line: t.line,
            column: t.column,
            message,
        }
    }

    fn expr(&mut self) -> Result<JetPoly> {
        let negate = match self.peek().tok {
            Tok::Plus => {
                self.bump();
                false
            }
            Tok::Minus => {
                self.bump();
                true
            }
            _ => false,
        };
        let mut acc = self.term()?;
        if negate {
            acc = -&acc;
        }
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Tok::Minus => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<JetPoly> {
        let mut acc = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<JetPoly> {
        let base = self.base()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        match self.peek().tok.clone() {
            Tok::Int(n) => {
                let e: u32 = n
                    .try_into()
                    .map_err(|_| self.error("exponent too large"))?;
                self.bump();
                Ok(base.pow(e))
            }
            _ => Err(self.error("expected a natural number exponent")),
        }
    }

    fn base(&mut self) -> Result<JetPoly> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(name) => {
                self.bump();
                if name == "zeta" {
                    return Ok(JetPoly::constant(zeta_pow(self.order, 1)));
                }
                match self.names.iter().position(|n| *n == name) {
                    Some(i) => Ok(JetPoly::var(self.order, JetVar::new(i as u32 + 1, 0))),
                    None => Err(Error::UnknownIdentifier {
                        name,
                        line: t.line,
                        column: t.column,
                    }),
                }
            }
            Tok::Int(num) => {
                self.bump();
                let mut q = BigRational::from_integer(num);
                if self.peek().tok == Tok::Slash {
                    self.bump();
                    match self.peek().tok.clone() {
                        Tok::Int(den) if den != BigInt::from(0) => {
                            self.bump();
                            q /= BigRational::from_integer(den);
                        }
                        Tok::Int(_) => return Err(self.error("zero denominator")),
                        _ => return Err(self.error("expected a denominator")),
                    }
                }
                Ok(JetPoly::constant(CycScalar::from_rational(self.order, q)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek().tok != Tok::RParen {
                    return Err(self.error("expected `)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error("expected a variable, number, `zeta` or `(`")),
        }
    }
}

/// Parses `src` as a polynomial in the level-0 variables named by `names`
/// (the `i`-th name is `x_{i+1}`), with coefficients in `Q(zeta_order)`.
pub fn parse_polynomial(src: &str, names: &[String], order: u32) -> Result<JetPoly> {
    if order == 0 {
        return Err(Error::Input("order must be positive".into()));
    }
    let mut p = Parser {
        toks: lex(src)?,
        pos: 0,
        names,
        order,
    };
    let out = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.error("unexpected token"));
    }
    Ok(out)
}

/// On-disk description of a scheme and a diagonal automorphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecFile {
    pub m: u32,
    pub variables: Vec<String>,
    #[serde(default)]
    pub relations: Vec<String>,
    #[serde(default)]
    pub exponents: Vec<u32>,
}

impl SpecFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Input(format!("spec file: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Input(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Builds the scheme and automorphism, with `order` overriding `m` when given.
    pub fn build(&self, order: Option<u32>) -> Result<(SchemeSpec, DiagAutomorphism)> {
        let m = order.unwrap_or(self.m);
        if m == 0 {
            return Err(Error::Input("m must be positive".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for v in &self.variables {
            let valid = v.starts_with(|c: char| c.is_ascii_alphabetic() || c == '_')
                && v.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
            if !valid || v == "zeta" {
                return Err(Error::Input(format!("invalid variable name `{v}`")));
            }
            if !seen.insert(v) {
                return Err(Error::Input(format!("duplicate variable `{v}`")));
            }
        }
        let exponents = if self.exponents.is_empty() {
            vec![0; self.variables.len()]
        } else {
            self.exponents.clone()
        };
        if exponents.len() != self.variables.len() {
            return Err(Error::Input(format!(
                "{} exponents for {} variables",
                exponents.len(),
                self.variables.len()
            )));
        }
        let g = DiagAutomorphism::new(m, exponents).map_err(|e| Error::Input(e.to_string()))?;
        let relations = self
            .relations
            .iter()
            .map(|r| parse_polynomial(r, &self.variables, m))
            .collect::<Result<Vec<_>>>()?;
        let spec = SchemeSpec::new(m, self.variables.len() as u32, relations)?;
        Ok((spec, g))
    }
}
