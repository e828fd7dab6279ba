//! Elementary relation moves and their application.

use std::fmt;

use super::{SymbolSum, Term};
use crate::field::FieldElem;
use crate::witt::WittVector;

/// One rewrite step. Indices refer to term positions in the sum the move is
/// applied to; insertions name the position the new term will occupy.
#[derive(Clone, PartialEq, Eq)]
pub enum Move {
    /// `c_i ω_i ⊗ R + c_j ω_j ⊗ R → 1·(c_i ω_i + c_j ω_j) ⊗ R` at `i`, `i < j`.
    WittMerge { i: usize, j: usize },
    /// `c ω ⊗ R → part ⊗ R + (cω − part) ⊗ R` at `i, i+1`.
    WittSplit { i: usize, part: WittVector },
    /// `c·S → k·S + (c−k)·S` at `i, i+1`.
    CoefSplit { i: usize, k: i64 },
    /// Slot `s` holding `a·b` becomes two terms holding `a` and `b`.
    SlotSplit {
        i: usize,
        s: usize,
        a: FieldElem,
        b: FieldElem,
    },
    /// Two terms agreeing except at slot `s` merge into one holding the product.
    SlotMerge { i: usize, j: usize, s: usize },
    /// Delete a term with two equal slots.
    RepeatKill { i: usize },
    RepeatInsert { at: usize, term: Term },
    /// `ω^p ⊗ R → ω ⊗ R`.
    FrobKill { i: usize },
    /// `ω ⊗ R → ω^p ⊗ R`.
    FrobLift { i: usize },
    /// Delete `(0,…,β_k,…,0) ⊗ β_1 ⊗ ⋯ ⊗ β_n`.
    SlotVectorKill { i: usize },
    /// `c·(ω ⊗ R) → 1·(cω ⊗ R)`.
    WittEval { i: usize },
    /// `1·(ν ⊗ R) → c·(ω ⊗ R)` where `cω = ν`.
    WittUneval { i: usize, c: i64, w: WittVector },
    /// Delete a term with zero Witt vector.
    ZeroKill { i: usize },
    ZeroInsert { at: usize, term: Term },
    /// Reorder: remove the term at `from` and reinsert it so it sits at `to`.
    TermMove { from: usize, to: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0}")]
pub struct MoveError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, MoveError> {
    Err(MoveError(msg.into()))
}

impl Move {
    pub fn name(&self) -> &'static str {
        match self {
            Move::WittMerge { .. } => "witt-merge",
            Move::WittSplit { .. } => "witt-split",
            Move::CoefSplit { .. } => "coef-split",
            Move::SlotSplit { .. } => "slot-split",
            Move::SlotMerge { .. } => "slot-merge",
            Move::RepeatKill { .. } => "repeat-kill",
            Move::RepeatInsert { .. } => "repeat-insert",
            Move::FrobKill { .. } => "frob-kill",
            Move::FrobLift { .. } => "frob-lift",
            Move::SlotVectorKill { .. } => "slot-vector-kill",
            Move::WittEval { .. } => "witt-eval",
            Move::WittUneval { .. } => "witt-uneval",
            Move::ZeroKill { .. } => "zero-kill",
            Move::ZeroInsert { .. } => "zero-insert",
            Move::TermMove { .. } => "term-move",
        }
    }

    /// The same move addressed `offset` positions further into a larger sum.
    pub fn shifted(&self, offset: usize) -> Move {
        let mut mv = self.clone();
        match &mut mv {
            Move::WittMerge { i, j } | Move::SlotMerge { i, j, .. } => {
                *i += offset;
                *j += offset;
            }
            Move::WittSplit { i, .. }
            | Move::CoefSplit { i, .. }
            | Move::SlotSplit { i, .. }
            | Move::RepeatKill { i }
            | Move::FrobKill { i }
            | Move::FrobLift { i }
            | Move::SlotVectorKill { i }
            | Move::WittEval { i }
            | Move::WittUneval { i, .. }
            | Move::ZeroKill { i } => *i += offset,
            Move::RepeatInsert { at, .. } | Move::ZeroInsert { at, .. } => *at += offset,
            Move::TermMove { from, to } => {
                *from += offset;
                *to += offset;
            }
        }
        mv
    }

    /// Apply to `sum`, producing the resulting sum.
    pub fn apply(&self, sum: &SymbolSum) -> Result<SymbolSum, MoveError> {
        let mut t = sum.terms().to_vec();
        let get = |t: &Vec<Term>, i: usize| -> Result<Term, MoveError> {
            t.get(i)
                .cloned()
                .ok_or_else(|| MoveError(format!("term {i} out of range")))
        };
        match self {
            Move::WittMerge { i, j } => {
                if i >= j {
                    return err("witt-merge needs i < j");
                }
                let (a, b) = (get(&t, *i)?, get(&t, *j)?);
                if a.sym.slots != b.sym.slots {
                    return err("witt-merge: slots differ");
                }
                let w = a.sym.w.scalar(a.coef).add(&b.sym.w.scalar(b.coef)).map_err(werr)?;
                t[*i] = Term::unit(a.sym.with_w(w));
                t.remove(*j);
            }
            Move::WittSplit { i, part } => {
                let a = get(&t, *i)?;
                let total = a.sym.w.scalar(a.coef);
                let rest = total.sub(part).map_err(werr)?;
                t[*i] = Term::unit(a.sym.with_w(part.clone()));
                t.insert(i + 1, Term::unit(a.sym.with_w(rest)));
            }
            Move::CoefSplit { i, k } => {
                let a = get(&t, *i)?;
                if *k == 0 || *k == a.coef {
                    return err("coef-split would create a zero coefficient");
                }
                t[*i] = Term::new(*k, a.sym.clone()).expect("nonzero");
                t.insert(i + 1, Term::new(a.coef - k, a.sym.clone()).expect("nonzero"));
            }
            Move::SlotSplit { i, s, a, b } => {
                let x = get(&t, *i)?;
                if *s >= x.sym.n() {
                    return err("slot index out of range");
                }
                if &(a * b) != x.sym.slot(*s) {
                    return err("slot-split factors do not multiply to the slot");
                }
                let sa = x.sym.with_slot(*s, a.clone()).map_err(serr)?;
                let sb = x.sym.with_slot(*s, b.clone()).map_err(serr)?;
                t[*i] = Term::new(x.coef, sa).expect("nonzero");
                t.insert(i + 1, Term::new(x.coef, sb).expect("nonzero"));
            }
            Move::SlotMerge { i, j, s } => {
                if i >= j {
                    return err("slot-merge needs i < j");
                }
                let (a, b) = (get(&t, *i)?, get(&t, *j)?);
                if *s >= a.sym.n() || a.sym.n() != b.sym.n() {
                    return err("slot index out of range");
                }
                if a.coef != b.coef || a.sym.w != b.sym.w {
                    return err("slot-merge: coefficient or Witt vector differs");
                }
                if (0..a.sym.n()).any(|k| k != *s && a.sym.slot(k) != b.sym.slot(k)) {
                    return err("slot-merge: other slots differ");
                }
                let v = a.sym.slot(*s) * b.sym.slot(*s);
                t[*i] = Term::new(a.coef, a.sym.with_slot(*s, v).map_err(serr)?).expect("nonzero");
                t.remove(*j);
            }
            Move::RepeatKill { i } => {
                if get(&t, *i)?.sym.repeated_slots().is_none() {
                    return err("repeat-kill: no repeated slot");
                }
                t.remove(*i);
            }
            Move::RepeatInsert { at, term } => {
                if term.sym.repeated_slots().is_none() {
                    return err("repeat-insert: no repeated slot");
                }
                if *at > t.len() {
                    return err("insert position out of range");
                }
                t.insert(*at, term.clone());
            }
            Move::FrobKill { i } => {
                let a = get(&t, *i)?;
                let root = a
                    .sym
                    .w
                    .frobenius_root()
                    .ok_or_else(|| MoveError("frob-kill: not a p-th power".into()))?;
                t[*i] = Term::new(a.coef, a.sym.with_w(root)).expect("nonzero");
            }
            Move::FrobLift { i } => {
                let a = get(&t, *i)?;
                t[*i] = Term::new(a.coef, a.sym.with_w(a.sym.w.frobenius())).expect("nonzero");
            }
            Move::SlotVectorKill { i } => {
                let a = get(&t, *i)?;
                let (count, first) = a.sym.w.support();
                let ok = count == 1
                    && a
                        .sym
                        .slots
                        .contains(a.sym.w.slot(first.expect("one nonzero slot")));
                if !ok {
                    return err("slot-vector-kill: Witt vector is not a lone field slot");
                }
                t.remove(*i);
            }
            Move::WittEval { i } => {
                let a = get(&t, *i)?;
                t[*i] = Term::unit(a.sym.with_w(a.sym.w.scalar(a.coef)));
            }
            Move::WittUneval { i, c, w } => {
                let a = get(&t, *i)?;
                if a.coef != 1 {
                    return err("witt-uneval needs coefficient 1");
                }
                if w.len() != a.sym.m() || &w.scalar(*c) != a.sym.w() {
                    return err("witt-uneval: c·ω differs from the term");
                }
                t[*i] = Term::new(*c, a.sym.with_w(w.clone())).map_err(serr)?;
            }
            Move::ZeroKill { i } => {
                if !get(&t, *i)?.sym.w.is_zero() {
                    return err("zero-kill: Witt vector is not zero");
                }
                t.remove(*i);
            }
            Move::ZeroInsert { at, term } => {
                if !term.sym.w.is_zero() {
                    return err("zero-insert: Witt vector is not zero");
                }
                if *at > t.len() {
                    return err("insert position out of range");
                }
                t.insert(*at, term.clone());
            }
            Move::TermMove { from, to } => {
                let a = get(&t, *from)?;
                t.remove(*from);
                if *to > t.len() {
                    return err("term-move target out of range");
                }
                t.insert(*to, a);
            }
        }
        Ok(SymbolSum::new(t))
    }
}

fn werr(e: crate::witt::WittError) -> MoveError {
    MoveError(e.to_string())
}

fn serr(e: super::SymbolError) -> MoveError {
    MoveError(e.to_string())
}

impl fmt::Display for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = self.name();
        match self {
            Move::WittMerge { i, j } => write!(f, "{name} {i} {j}"),
            Move::WittSplit { i, part } => write!(f, "{name} {i} | {part}"),
            Move::CoefSplit { i, k } => write!(f, "{name} {i} {k}"),
            Move::SlotSplit { i, s, a, b } => write!(f, "{name} {i} {s} | {a} | {b}"),
            Move::SlotMerge { i, j, s } => write!(f, "{name} {i} {j} {s}"),
            Move::RepeatKill { i }
            | Move::FrobKill { i }
            | Move::FrobLift { i }
            | Move::SlotVectorKill { i }
            | Move::WittEval { i }
            | Move::ZeroKill { i } => write!(f, "{name} {i}"),
            Move::RepeatInsert { at, term } | Move::ZeroInsert { at, term } => {
                write!(f, "{name} {at} | {} {}", term.coef, term.sym)
            }
            Move::WittUneval { i, c, w } => write!(f, "{name} {i} {c} | {w}"),
            Move::TermMove { from, to } => write!(f, "{name} {from} {to}"),
        }
    }
}

impl fmt::Debug for Move {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
