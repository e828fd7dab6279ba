//! Certificates and their independent checker.
//!
//! The checker never calls [`Move::apply`]. For each step it compares the sums
//! before and after: the untouched terms must line up exactly, and the terms
//! the move consumed and produced must satisfy the move's relation.

use std::fmt;
use std::sync::Arc;

use super::{Move, SymbolSum, Term};
use crate::field::{FieldElem, Signature};
use crate::par;

#[derive(Clone, PartialEq, Eq)]
pub struct Step {
    pub mv: Move,
    pub result: SymbolSum,
}

/// A chain of moves from `start` to `end` in the group of symbols with
/// Witt length `m` and `n` field slots over `sig`.
#[derive(Clone, PartialEq, Eq)]
pub struct Certificate {
    pub sig: Arc<Signature>,
    pub m: usize,
    pub n: usize,
    pub start: SymbolSum,
    pub steps: Vec<Step>,
    pub end: SymbolSum,
}

impl fmt::Debug for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start {}", self.start)?;
        for s in &self.steps {
            writeln!(f, "step {}\n= {}", s.mv, s.result)?;
        }
        write!(f, "end {}", self.end)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Location {
    Start,
    Step(usize),
    End,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Start => f.write_str("start"),
            Location::Step(k) => write!(f, "step {k}"),
            Location::End => f.write_str("end"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid at {location}: {reason}")]
pub struct VerifyError {
    pub location: Location,
    pub reason: String,
}

type Check = Result<(), String>;

fn fail(msg: &str) -> Check {
    Err(msg.to_string())
}

struct Shape<'a> {
    sig: &'a Arc<Signature>,
    m: usize,
    n: usize,
}

impl Shape<'_> {
    fn term(&self, t: &Term) -> Check {
        let s = t.sym();
        if t.coef() == 0 {
            return fail("zero coefficient");
        }
        if s.m() != self.m || s.n() != self.n {
            return Err(format!(
                "term has shape m={} n={}, expected m={} n={}",
                s.m(),
                s.n(),
                self.m,
                self.n
            ));
        }
        if s.sig() != self.sig {
            return fail("term over a different field");
        }
        if s.slots().iter().any(FieldElem::is_zero) {
            return fail("zero field slot");
        }
        Ok(())
    }
}

/// Positions of `before` not in `gone` must equal, in order, the positions
/// of `after` not in `new`.
fn frame(before: &[Term], after: &[Term], gone: &[usize], new: &[usize]) -> Check {
    if gone.iter().any(|&g| g >= before.len()) {
        return fail("term index out of range");
    }
    if new.iter().any(|&g| g >= after.len()) {
        return fail("result index out of range");
    }
    if before.len() - gone.len() != after.len() - new.len() {
        return fail("wrong number of terms in result");
    }
    let kept_before = (0..before.len()).filter(|k| !gone.contains(k));
    let kept_after = (0..after.len()).filter(|k| !new.contains(k));
    for (a, b) in kept_before.zip(kept_after) {
        if before[a] != after[b] {
            return Err(format!("term {a} changed but the move does not touch it"));
        }
    }
    Ok(())
}

fn same_sym_except_w(a: &Term, b: &Term) -> bool {
    a.sym().slots() == b.sym().slots()
}

fn check_step(shape: &Shape, mv: &Move, before: &SymbolSum, after: &SymbolSum) -> Check {
    let (b, a) = (before.terms(), after.terms());
    match mv {
        Move::WittMerge { i, j } => {
            let (i, j) = (*i, *j);
            if i >= j {
                return fail("merge indices must increase");
            }
            frame(b, a, &[i, j], &[i])?;
            let (x, y, r) = (&b[i], &b[j], &a[i]);
            if !same_sym_except_w(x, y) || !same_sym_except_w(x, r) {
                return fail("merged terms must share all slots");
            }
            if r.coef() != 1 {
                return fail("merged term must have coefficient 1");
            }
            let lhs = r.sym().w().sub(&y.sym().w().scalar(y.coef())).map_err(|e| e.to_string())?;
            if lhs != x.sym().w().scalar(x.coef()) {
                return fail("merged Witt vector is not the sum");
            }
        }
        Move::WittSplit { i, part } => {
            let i = *i;
            frame(b, a, &[i], &[i, i + 1])?;
            let (x, r0, r1) = (&b[i], &a[i], &a[i + 1]);
            if r0.coef() != 1 || r1.coef() != 1 {
                return fail("split parts must have coefficient 1");
            }
            if !same_sym_except_w(x, r0) || !same_sym_except_w(x, r1) {
                return fail("split parts must keep the slots");
            }
            if r0.sym().w() != part {
                return fail("first part differs from the named part");
            }
            let sum = r0.sym().w().add(r1.sym().w()).map_err(|e| e.to_string())?;
            if sum != x.sym().w().scalar(x.coef()) {
                return fail("parts do not add up");
            }
        }
        Move::CoefSplit { i, k } => {
            let i = *i;
            frame(b, a, &[i], &[i, i + 1])?;
            let (x, r0, r1) = (&b[i], &a[i], &a[i + 1]);
            if r0.sym() != x.sym() || r1.sym() != x.sym() {
                return fail("coefficient split must keep the symbol");
            }
            if r0.coef() != *k || r0.coef() + r1.coef() != x.coef() {
                return fail("coefficients do not add up");
            }
        }
        Move::SlotSplit { i, s, a: fa, b: fb } => {
            let (i, s) = (*i, *s);
            frame(b, a, &[i], &[i, i + 1])?;
            let (x, r0, r1) = (&b[i], &a[i], &a[i + 1]);
            if s >= shape.n {
                return fail("slot out of range");
            }
            for (r, f) in [(r0, fa), (r1, fb)] {
                if r.coef() != x.coef() || r.sym().w() != x.sym().w() {
                    return fail("split terms must keep coefficient and Witt vector");
                }
                if r.sym().slot(s) != f {
                    return fail("split slot differs from the named factor");
                }
                if (0..shape.n).any(|k| k != s && r.sym().slot(k) != x.sym().slot(k)) {
                    return fail("slot split touched another slot");
                }
            }
            if x.sym().slot(s) != &(r0.sym().slot(s) * r1.sym().slot(s)) {
                return fail("factors do not multiply to the slot");
            }
        }
        Move::SlotMerge { i, j, s } => {
            let (i, j, s) = (*i, *j, *s);
            if i >= j {
                return fail("merge indices must increase");
            }
            if s >= shape.n {
                return fail("slot out of range");
            }
            frame(b, a, &[i, j], &[i])?;
            let (x, y, r) = (&b[i], &b[j], &a[i]);
            for t in [y, r] {
                if t.coef() != x.coef() || t.sym().w() != x.sym().w() {
                    return fail("slot merge needs equal coefficients and Witt vectors");
                }
                if (0..shape.n).any(|k| k != s && t.sym().slot(k) != x.sym().slot(k)) {
                    return fail("slot merge terms differ outside the merged slot");
                }
            }
            if r.sym().slot(s) != &(x.sym().slot(s) * y.sym().slot(s)) {
                return fail("merged slot is not the product");
            }
        }
        Move::RepeatKill { i } => {
            frame(b, a, &[*i], &[])?;
            if !has_repeat(&b[*i]) {
                return fail("deleted term has no repeated slot");
            }
        }
        Move::RepeatInsert { at, term } => {
            frame(b, a, &[], &[*at])?;
            shape.term(&a[*at])?;
            if &a[*at] != term || !has_repeat(term) {
                return fail("inserted term is not the named term with a repeated slot");
            }
        }
        Move::FrobKill { i } | Move::FrobLift { i } => {
            let i = *i;
            frame(b, a, &[i], &[i])?;
            let (x, r) = (&b[i], &a[i]);
            if x.coef() != r.coef() || !same_sym_except_w(x, r) {
                return fail("Frobenius step must keep coefficient and slots");
            }
            let ok = match mv {
                Move::FrobKill { .. } => &r.sym().w().frobenius() == x.sym().w(),
                _ => &x.sym().w().frobenius() == r.sym().w(),
            };
            if !ok {
                return fail("Witt vectors are not related by Frobenius");
            }
        }
        Move::SlotVectorKill { i } => {
            frame(b, a, &[*i], &[])?;
            let s = b[*i].sym();
            let nz: Vec<&FieldElem> = s.w().slots().iter().filter(|v| !v.is_zero()).collect();
            if nz.len() != 1 || !s.slots().iter().any(|v| v == nz[0]) {
                return fail("deleted term is not a lone-slot vector matching a field slot");
            }
        }
        Move::WittEval { i } => {
            let i = *i;
            frame(b, a, &[i], &[i])?;
            let (x, r) = (&b[i], &a[i]);
            if r.coef() != 1 || !same_sym_except_w(x, r) {
                return fail("evaluated term must have coefficient 1 and the same slots");
            }
            if r.sym().w() != &x.sym().w().scalar(x.coef()) {
                return fail("evaluated Witt vector is wrong");
            }
        }
        Move::WittUneval { i, c, w } => {
            let i = *i;
            frame(b, a, &[i], &[i])?;
            let (x, r) = (&b[i], &a[i]);
            if x.coef() != 1 || r.coef() != *c || !same_sym_except_w(x, r) || r.sym().w() != w {
                return fail("unevaluated term does not match the named data");
            }
            if &w.scalar(*c) != x.sym().w() {
                return fail("c·ω differs from the original Witt vector");
            }
        }
        Move::ZeroKill { i } => {
            frame(b, a, &[*i], &[])?;
            if !b[*i].sym().w().slots().iter().all(FieldElem::is_zero) {
                return fail("deleted term has a nonzero Witt vector");
            }
        }
        Move::ZeroInsert { at, term } => {
            frame(b, a, &[], &[*at])?;
            shape.term(&a[*at])?;
            if &a[*at] != term || !term.sym().w().slots().iter().all(FieldElem::is_zero) {
                return fail("inserted term is not the named zero term");
            }
        }
        Move::TermMove { from, to } => {
            frame(b, a, &[*from], &[*to])?;
            if b[*from] != a[*to] {
                return fail("moved term changed");
            }
        }
    }
    Ok(())
}

fn has_repeat(t: &Term) -> bool {
    let s = t.sym().slots();
    (0..s.len()).any(|k| (k + 1..s.len()).any(|l| s[k] == s[l]))
}

/// Check every step. Reports the first failure in chain order.
pub fn verify(cert: &Certificate) -> Result<(), VerifyError> {
    let shape = Shape {
        sig: &cert.sig,
        m: cert.m,
        n: cert.n,
    };
    for t in cert.start.terms() {
        shape.term(t).map_err(|reason| VerifyError {
            location: Location::Start,
            reason,
        })?;
    }
    let failure = par::find_first(cert.steps.len(), |k| {
        let before = if k == 0 {
            &cert.start
        } else {
            &cert.steps[k - 1].result
        };
        let step = &cert.steps[k];
        check_step(&shape, &step.mv, before, &step.result)
            .err()
            .map(|reason| VerifyError {
                location: Location::Step(k),
                reason: format!("{}: {reason}", step.mv.name()),
            })
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let last = cert.steps.last().map_or(&cert.start, |s| &s.result);
    if last != &cert.end {
        return Err(VerifyError {
            location: Location::End,
            reason: "end differs from the last result".into(),
        });
    }
    Ok(())
}
