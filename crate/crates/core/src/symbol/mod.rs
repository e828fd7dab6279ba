//! Formal sums of symbols `ω ⊗ β_1 ⊗ ⋯ ⊗ β_n` and certified rewriting.

mod moves;
mod rewrite;
mod verify;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::field::{
    beta_power, universal_representation, DependenceWitness, ExponentIndex, FieldElem,
    FieldError, Signature,
};
use crate::witt::WittVector;

pub use moves::{Move, MoveError};
pub use rewrite::{antisymmetry_swap, expand_slot, Rewriter};
pub use verify::{verify, Certificate, Location, Step, VerifyError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymbolError {
    #[error("slot {0} is zero")]
    ZeroSlot(usize),
    #[error("a symbol needs at least one slot")]
    NoSlots,
    #[error("entries belong to different fields")]
    SignatureMismatch,
    #[error("coefficient must be nonzero")]
    ZeroCoefficient,
    #[error("first Witt slot is not zero")]
    NonzeroFirstSlot,
    #[error("cannot project a length-{m} vector to length {l}")]
    BadLength { m: usize, l: usize },
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    w: WittVector,
    slots: Vec<FieldElem>,
}

impl Symbol {
    pub fn new(w: WittVector, slots: Vec<FieldElem>) -> Result<Self, SymbolError> {
        if slots.is_empty() {
            return Err(SymbolError::NoSlots);
        }
        if let Some(i) = slots.iter().position(FieldElem::is_zero) {
            return Err(SymbolError::ZeroSlot(i));
        }
        if slots.iter().any(|s| s.sig() != w.sig()) {
            return Err(SymbolError::SignatureMismatch);
        }
        Ok(Symbol { w, slots })
    }

    pub fn w(&self) -> &WittVector {
        &self.w
    }

    pub fn slots(&self) -> &[FieldElem] {
        &self.slots
    }

    pub fn slot(&self, i: usize) -> &FieldElem {
        &self.slots[i]
    }

    pub fn m(&self) -> usize {
        self.w.len()
    }

    pub fn n(&self) -> usize {
        self.slots.len()
    }

    pub fn sig(&self) -> &Arc<Signature> {
        self.w.sig()
    }

    pub fn with_w(&self, w: WittVector) -> Symbol {
        Symbol {
            w,
            slots: self.slots.clone(),
        }
    }

    /// Replace slot `i`; the new value must be nonzero.
    pub fn with_slot(&self, i: usize, v: FieldElem) -> Result<Symbol, SymbolError> {
        if v.is_zero() {
            return Err(SymbolError::ZeroSlot(i));
        }
        let mut slots = self.slots.clone();
        slots[i] = v;
        Ok(Symbol {
            w: self.w.clone(),
            slots,
        })
    }

    /// Indices `k < l` of two equal slots, if any.
    pub fn repeated_slots(&self) -> Option<(usize, usize)> {
        for k in 0..self.n() {
            for l in k + 1..self.n() {
                if self.slots[k] == self.slots[l] {
                    return Some((k, l));
                }
            }
        }
        None
    }

    /// Keep the first `l` Witt slots.
    pub fn project(&self, l: usize) -> Result<Symbol, SymbolError> {
        let w = self
            .w
            .truncate(l)
            .map_err(|_| SymbolError::BadLength { m: self.m(), l })?;
        Ok(self.with_w(w))
    }

    /// First Witt slot together with the field slots.
    pub fn residue(&self) -> (FieldElem, &[FieldElem]) {
        (self.w.slot(0).clone(), &self.slots)
    }

    /// Prepend a zero Witt slot.
    pub fn lift(&self) -> Symbol {
        Symbol {
            w: self.w.shift(1),
            slots: self.slots.clone(),
        }
    }

    /// Drop a zero first Witt slot.
    pub fn unlift(&self) -> Result<Symbol, SymbolError> {
        let w = self.w.unshift(1).ok_or(SymbolError::NonzeroFirstSlot)?;
        Ok(Symbol {
            w,
            slots: self.slots.clone(),
        })
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.slots.iter().map(|x| x.to_string()).collect();
        write!(f, "{} ({})", self.w, s.join("; "))
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `coef · sym` inside a sum.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Term {
    coef: i64,
    sym: Arc<Symbol>,
}

impl Term {
    pub fn new(coef: i64, sym: impl Into<Arc<Symbol>>) -> Result<Self, SymbolError> {
        if coef == 0 {
            return Err(SymbolError::ZeroCoefficient);
        }
        Ok(Term {
            coef,
            sym: sym.into(),
        })
    }

    pub fn unit(sym: impl Into<Arc<Symbol>>) -> Self {
        Term {
            coef: 1,
            sym: sym.into(),
        }
    }

    pub fn coef(&self) -> i64 {
        self.coef
    }

    pub fn sym(&self) -> &Symbol {
        &self.sym
    }

    pub fn sym_arc(&self) -> &Arc<Symbol> {
        &self.sym
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.coef, self.sym)
    }
}

/// An ordered formal sum. Order matters: moves address terms by position.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct SymbolSum {
    terms: Vec<Term>,
}

impl SymbolSum {
    pub fn new(terms: Vec<Term>) -> Self {
        SymbolSum { terms }
    }

    pub fn from_symbols(syms: impl IntoIterator<Item = Symbol>) -> Self {
        SymbolSum {
            terms: syms.into_iter().map(Term::unit).collect(),
        }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }
}

impl fmt::Display for SymbolSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, t) in self.terms.iter().enumerate() {
            let c = t.coef;
            if k == 0 {
                if c != 1 {
                    write!(f, "{c} ")?;
                }
            } else {
                let sign = if c < 0 { '-' } else { '+' };
                write!(f, " {sign} ")?;
                if c.abs() != 1 {
                    write!(f, "{} ", c.abs())?;
                }
            }
            write!(f, "{}", t.sym)?;
        }
        Ok(())
    }
}

impl fmt::Debug for SymbolSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Data `(λ, z_d)` exhibiting `α = λ^p − λ + Σ_d z_d^p β^d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ASWitness {
    pub lambda: FieldElem,
    /// Missing indices mean `z_d = 0`.
    pub z: BTreeMap<ExponentIndex, FieldElem>,
}

impl ASWitness {
    pub fn trivial(sig: &Arc<Signature>) -> Self {
        ASWitness {
            lambda: FieldElem::zero(sig),
            z: BTreeMap::new(),
        }
    }

    /// Nonzero entries only, in index order.
    pub fn nonzero(&self) -> impl Iterator<Item = (&ExponentIndex, &FieldElem)> {
        self.z.iter().filter(|(_, v)| !v.is_zero())
    }

    /// `λ^p − λ + Σ z_d^p β^d`.
    pub fn evaluate(&self, betas: &[FieldElem]) -> Option<FieldElem> {
        let p = self.lambda.p();
        let mut acc = &self.lambda.frobenius() - &self.lambda;
        for (d, z) in self.nonzero() {
            if d.len() != betas.len() || d.entries().iter().any(|&e| e >= p) || d.is_zero() {
                return None;
            }
            acc = &acc + &(&z.frobenius() * &beta_power(betas, d.entries()));
        }
        Some(acc)
    }
}

/// Whether `wit` exhibits `α ⊗ β_1 ⊗ ⋯ ⊗ β_n` as trivial in degree p.
pub fn check_as_witness(alpha: &FieldElem, betas: &[FieldElem], wit: &ASWitness) -> bool {
    if betas.iter().any(FieldElem::is_zero) {
        return false;
    }
    match wit.evaluate(betas) {
        Some(v) => &v == alpha,
        None => false,
    }
}

/// `λ = −α` and `z` from the universal representation of `α^p`.
pub fn witness_from_dependence(
    alpha: &FieldElem,
    betas: &[FieldElem],
    dep: &DependenceWitness,
) -> Result<ASWitness, FieldError> {
    let y = universal_representation(betas, dep, alpha)?;
    Ok(ASWitness {
        lambda: alpha.neg(),
        z: y.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{p_independence, parse_elem, PIndependence};

    fn el(sig: &Arc<Signature>, s: &str) -> FieldElem {
        parse_elem(sig, s).unwrap()
    }

    fn idx(d: &[u32], p: u32) -> ExponentIndex {
        ExponentIndex::new(d.to_vec(), p).unwrap()
    }

    #[test]
    fn as_witness_examples() {
        let sig = Signature::parse_vars(2, "x,y").unwrap();
        let x = el(&sig, "x");
        let wit = ASWitness {
            lambda: x.clone(),
            z: BTreeMap::from([(idx(&[1], 2), el(&sig, "1"))]),
        };
        assert!(check_as_witness(&el(&sig, "x^2"), &[x.clone()], &wit));
        assert!(!check_as_witness(&el(&sig, "x^2+1"), &[x.clone()], &wit));
        assert!(check_as_witness(
            &FieldElem::zero(&sig),
            &[x],
            &ASWitness::trivial(&sig)
        ));
    }

    #[test]
    fn witness_from_dependence_passes_check() {
        let sig = Signature::parse_vars(2, "x,y").unwrap();
        for (betas, alpha) in [
            (vec![el(&sig, "x"), el(&sig, "x")], el(&sig, "y")),
            (vec![el(&sig, "x"), el(&sig, "x^2")], el(&sig, "1")),
            (vec![el(&sig, "x"), el(&sig, "x^2")], el(&sig, "0")),
        ] {
            let PIndependence::Dependent(dep) = p_independence(&betas).unwrap() else {
                panic!()
            };
            let w = witness_from_dependence(&alpha, &betas, &dep).unwrap();
            assert!(check_as_witness(&alpha, &betas, &w));
        }
    }

    #[test]
    fn lift_and_project() {
        let sig = Signature::parse_vars(2, "x").unwrap();
        let x = el(&sig, "x");
        let s = Symbol::new(
            WittVector::new(vec![FieldElem::zero(&sig), x.clone() + FieldElem::one(&sig)]).unwrap(),
            vec![x.clone()],
        )
        .unwrap();
        let u = s.unlift().unwrap();
        assert_eq!(u.m(), 1);
        assert_eq!(u.lift(), s);
        assert!(u.lift().project(1).unwrap().w().is_zero());
        assert_eq!(s.project(2).unwrap(), s);
        let t = Symbol::new(WittVector::new(vec![x.clone(), x.clone()]).unwrap(), vec![x]).unwrap();
        assert_eq!(t.unlift(), Err(SymbolError::NonzeroFirstSlot));
        assert_eq!(t.residue().0, el(&sig, "x"));
    }
}
