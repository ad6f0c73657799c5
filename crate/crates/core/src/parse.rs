//! A small recursive-descent expression parser shared by the residue-side
//! and dyadic-side textual grammars.
//!
//! Grammar:
//!   expr  := term (('+' | '-') term)*
//!   term  := unary (('*' | '/') unary)*
//!   unary := '-' unary | atom ('^' uint)*
//!   atom  := '(' expr ')' | name | name '(' raw ')' | uint
//!
//! Evaluation is abstract over [`Eval`]; function-call arguments are handed
//! to the evaluator as raw text so it can pick a different sub-grammar
//! (e.g. `teich(t + 1)` parses its argument as a ground-field element).

use crate::error::{Error, Result};

pub trait Eval {
    type Value: Clone;

    fn symbol(&self, name: &str) -> Result<Self::Value>;
    fn integer(&self, n: u64) -> Result<Self::Value>;
    fn call(&self, name: &str, arg_src: &str) -> Result<Self::Value>;
    fn add(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn sub(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn mul(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn div(&self, a: Self::Value, b: Self::Value) -> Result<Self::Value>;
    fn neg(&self, a: Self::Value) -> Result<Self::Value>;
    fn pow(&self, a: Self::Value, e: u64) -> Result<Self::Value>;
}

pub fn parse_expr<E: Eval>(eval: &E, src: &str) -> Result<E::Value> {
    let mut p = Parser {
        src: src.as_bytes(),
        pos: 0,
        eval,
    };
    let v = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(Error::Parse(format!(
            "unexpected trailing input at byte {} of {src:?}",
            p.pos
        )));
    }
    Ok(v)
}

struct Parser<'a, E: Eval> {
    src: &'a [u8],
    pos: usize,
    eval: &'a E,
}

impl<'a, E: Eval> Parser<'a, E> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expr(&mut self) -> Result<E::Value> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.eval.add(acc, rhs)?;
                }
                Some(b'-') => {
                    self.bump();
                    let rhs = self.term()?;
                    acc = self.eval.sub(acc, rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<E::Value> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.eval.mul(acc, rhs)?;
                }
                Some(b'/') => {
                    self.bump();
                    let rhs = self.unary()?;
                    acc = self.eval.div(acc, rhs)?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<E::Value> {
        if self.peek() == Some(b'-') {
            self.bump();
            let v = self.unary()?;
            return self.eval.neg(v);
        }
        let mut v = self.atom()?;
        while self.peek() == Some(b'^') {
            self.bump();
            let e = self.uint()?;
            v = self.eval.pow(v, e)?;
        }
        Ok(v)
    }

    fn atom(&mut self) -> Result<E::Value> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(Error::Parse("expected ')'".into()));
                }
                self.bump();
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.uint()?;
                self.eval.integer(n)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.name();
                if self.peek() == Some(b'(') {
                    self.bump();
                    let raw = self.raw_until_close()?;
                    self.eval.call(&name, &raw)
                } else {
                    self.eval.symbol(&name)
                }
            }
            other => Err(Error::Parse(format!(
                "unexpected input {:?}",
                other.map(|c| c as char)
            ))),
        }
    }

    fn name(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len()
            && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.src[start..self.pos]).into_owned()
    }

    fn uint(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::Parse("expected an integer".into()));
        }
        String::from_utf8_lossy(&self.src[start..self.pos])
            .parse()
            .map_err(|_| Error::Parse("integer out of range".into()))
    }

    /// Raw argument text up to the matching close paren.
    fn raw_until_close(&mut self) -> Result<String> {
        let start = self.pos;
        let mut depth = 1usize;
        while self.pos < self.src.len() {
            match self.src[self.pos] {
                b'(' => depth += 1,
                b')' => {
                    depth -= 1;
                    if depth == 0 {
                        let raw = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                        self.pos += 1;
                        return Ok(raw);
                    }
                }
                _ => {}
            }
            self.pos += 1;
        }
        Err(Error::Parse("unterminated function call".into()))
    }
}
