//! Expressions for `wittcalc`:
//!
//! ```text
//! expr  := ['-'] term (('+' | '-') term)*
//! term  := [int '*'] atom
//! atom  := '[' e, … ']' | frob(expr) | shift(expr, l) | trunc(expr, l) | '(' expr ')'
//! ```

use std::sync::Arc;

use symlen::field::Signature;
use symlen::text::parse_witt;
use symlen::witt::WittVector;

pub struct ExprError {
    pub column: usize,
    pub message: String,
}

struct P<'a> {
    sig: &'a Arc<Signature>,
    m: usize,
    s: &'a str,
    pos: usize,
}

type R = Result<WittVector, ExprError>;

impl P<'_> {
    fn err(&self, msg: impl Into<String>) -> ExprError {
        ExprError {
            column: self.pos + 1,
            message: msg.into(),
        }
    }

    fn ws(&mut self) {
        while self.s[self.pos..].starts_with(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, t: &str) -> bool {
        self.ws();
        if self.s[self.pos..].starts_with(t) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &str) -> Result<(), ExprError> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{t}'")))
        }
    }

    fn int(&mut self) -> Option<i64> {
        self.ws();
        let rest = &self.s[self.pos..];
        let n = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
        if n == 0 {
            return None;
        }
        let v = rest[..n].parse().ok()?;
        self.pos += n;
        Some(v)
    }

    fn arith(&self, r: Result<WittVector, symlen::witt::WittError>) -> R {
        r.map_err(|e| self.err(e.to_string()))
    }

    fn expr(&mut self) -> R {
        let mut acc = if self.eat("-") {
            self.term()?.neg()
        } else {
            self.term()?
        };
        loop {
            if self.eat("+") {
                let t = self.term()?;
                acc = self.arith(acc.add(&t))?;
            } else if self.eat("-") {
                let t = self.term()?;
                acc = self.arith(acc.sub(&t))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> R {
        let save = self.pos;
        if let Some(c) = self.int() {
            if self.eat("*") {
                return Ok(self.atom()?.scalar(c));
            }
            self.pos = save;
            return Err(self.err("expected '<int>*' or a Witt vector"));
        }
        self.atom()
    }

    fn atom(&mut self) -> R {
        self.ws();
        if self.s[self.pos..].starts_with('[') {
            let start = self.pos;
            let close = self.s[start..]
                .find(']')
                .ok_or_else(|| self.err("unclosed '['"))?;
            let lit = &self.s[start..=start + close];
            let w = parse_witt(self.sig, lit).map_err(|e| ExprError {
                column: start + e.column,
                message: e.message,
            })?;
            if w.len() != self.m {
                return Err(self.err(format!("literal has length {}, expected {}", w.len(), self.m)));
            }
            self.pos = start + close + 1;
            return Ok(w);
        }
        if self.eat("frob(") {
            let w = self.expr()?;
            self.expect(")")?;
            return Ok(w.frobenius());
        }
        for (name, is_shift) in [("shift(", true), ("trunc(", false)] {
            if self.eat(name) {
                let w = self.expr()?;
                self.expect(",")?;
                let l = self.int().ok_or_else(|| self.err("expected a length"))? as usize;
                self.expect(")")?;
                return if is_shift {
                    Ok(w.shift(l))
                } else {
                    self.arith(w.truncate(l))
                };
            }
        }
        if self.eat("(") {
            let w = self.expr()?;
            self.expect(")")?;
            return Ok(w);
        }
        Err(self.err("expected a Witt vector, frob, shift, trunc or '('"))
    }
}

pub fn eval(sig: &Arc<Signature>, m: usize, s: &str) -> R {
    let mut p = P { sig, m, s, pos: 0 };
    let w = p.expr()?;
    p.ws();
    if p.pos != s.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(w)
}
