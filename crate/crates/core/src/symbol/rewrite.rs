//! Building certificates: a cursor over a sum that records each move, and
//! the derived identities used by the decompositions.

use std::sync::Arc;

use super::verify::{Certificate, Step};
use super::{Move, MoveError, Symbol, SymbolSum, Term};
use crate::field::{FieldElem, Signature};
use crate::witt::WittVector;

pub struct Rewriter {
    sig: Arc<Signature>,
    m: usize,
    n: usize,
    start: SymbolSum,
    cur: SymbolSum,
    steps: Vec<Step>,
}

impl Rewriter {
    pub fn new(sig: &Arc<Signature>, m: usize, n: usize, start: SymbolSum) -> Self {
        Rewriter {
            sig: sig.clone(),
            m,
            n,
            cur: start.clone(),
            start,
            steps: Vec::new(),
        }
    }

    /// Start from a single symbol with coefficient 1.
    pub fn single(sym: Symbol) -> Self {
        let sig = sym.sig().clone();
        let (m, n) = (sym.m(), sym.n());
        Rewriter::new(&sig, m, n, SymbolSum::from_symbols([sym]))
    }

    pub fn current(&self) -> &SymbolSum {
        &self.cur
    }

    pub fn term(&self, i: usize) -> &Term {
        &self.cur.terms()[i]
    }

    pub fn sym(&self, i: usize) -> &Symbol {
        self.cur.terms()[i].sym()
    }

    pub fn len(&self) -> usize {
        self.cur.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cur.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.steps.len()
    }

    pub fn apply(&mut self, mv: Move) -> Result<(), MoveError> {
        let next = mv.apply(&self.cur)?;
        self.cur = next.clone();
        self.steps.push(Step { mv, result: next });
        Ok(())
    }

    /// Replay `local`, which rewrites the terms at `offset..offset+local.start.len()`.
    pub fn splice(&mut self, offset: usize, local: Certificate) -> Result<(), MoveError> {
        let width = local.start.len();
        let terms = self.cur.terms();
        if offset + width > terms.len() || terms[offset..offset + width] != *local.start.terms() {
            return Err(MoveError("spliced certificate does not match the sum".into()));
        }
        let prefix = terms[..offset].to_vec();
        let suffix = terms[offset + width..].to_vec();
        for step in local.steps {
            let mut t = prefix.clone();
            t.extend(step.result.terms().iter().cloned());
            t.extend(suffix.iter().cloned());
            let result = SymbolSum::new(t);
            self.steps.push(Step {
                mv: step.mv.shifted(offset),
                result,
            });
        }
        if let Some(last) = self.steps.last() {
            self.cur = last.result.clone();
        }
        Ok(())
    }

    pub fn finish(self) -> Certificate {
        Certificate {
            sig: self.sig,
            m: self.m,
            n: self.n,
            start: self.start,
            steps: self.steps,
            end: self.cur,
        }
    }

    fn one(&self) -> FieldElem {
        FieldElem::one(&self.sig)
    }

    /// Make the coefficient of term `i` equal to 1.
    pub fn normalize_coef(&mut self, i: usize) -> Result<(), MoveError> {
        if self.term(i).coef() != 1 {
            self.apply(Move::WittEval { i })?;
        }
        Ok(())
    }

    /// Delete a term whose slot `s` is 1: `ω ⊗ 1 = 0`.
    pub fn unit_kill(&mut self, i: usize, s: usize) -> Result<(), MoveError> {
        if !self.sym(i).slot(s).is_one() {
            return Err(MoveError("unit-kill needs slot equal to 1".into()));
        }
        let t = self.term(i);
        let total = t.sym().w().scalar(t.coef());
        // W → (−W) + 2W → (−W) + W + W → (−W) + W → 0
        self.apply(Move::WittSplit {
            i,
            part: total.neg(),
        })?;
        self.apply(Move::WittSplit {
            i: i + 1,
            part: total,
        })?;
        self.apply(Move::SlotMerge {
            i: i + 1,
            j: i + 2,
            s,
        })?;
        self.apply(Move::WittMerge { i, j: i + 1 })?;
        self.apply(Move::ZeroKill { i })
    }

    /// Insert `1·sym` at `at`, where `sym` has a slot equal to 1.
    pub fn unit_insert(&mut self, at: usize, sym: Symbol) -> Result<(), MoveError> {
        let s = (0..sym.n())
            .find(|&k| sym.slot(k).is_one())
            .ok_or_else(|| MoveError("unit-insert needs a slot equal to 1".into()))?;
        let w = sym.w().clone();
        let zero = sym.with_w(WittVector::zero(&self.sig, self.m));
        self.apply(Move::ZeroInsert {
            at,
            term: Term::unit(zero),
        })?;
        // 0 → (−W) + W → (−W) + W + W → 0 + W → W
        self.apply(Move::WittSplit {
            i: at,
            part: w.neg(),
        })?;
        let one = self.one();
        self.apply(Move::SlotSplit {
            i: at + 1,
            s,
            a: one.clone(),
            b: one,
        })?;
        self.apply(Move::WittMerge { i: at, j: at + 1 })?;
        self.apply(Move::ZeroKill { i: at })
    }

    /// `ω ⊗ b → (−ω) ⊗ b^{-1}` at slot `s`, leaving coefficient 1.
    pub fn invert_slot(&mut self, i: usize, s: usize) -> Result<(), MoveError> {
        self.normalize_coef(i)?;
        let sym = self.sym(i).clone();
        let b = sym.slot(s).clone();
        let binv = b.inv().map_err(|e| MoveError(e.to_string()))?;
        let neg = sym.with_w(sym.w().neg());
        self.unit_insert(i + 1, neg.with_slot(s, self.one()).expect("one is nonzero"))?;
        self.apply(Move::SlotSplit {
            i: i + 1,
            s,
            a: b,
            b: binv,
        })?;
        self.apply(Move::WittMerge { i, j: i + 1 })?;
        self.apply(Move::ZeroKill { i })
    }

    /// Slot `s` equal to `base^k` (k ≥ 1) becomes `k` consecutive terms with slot `base`.
    pub fn split_power(
        &mut self,
        i: usize,
        s: usize,
        base: &FieldElem,
        k: u64,
    ) -> Result<(), MoveError> {
        for c in 0..k.saturating_sub(1) {
            let rest = base
                .int_pow((k - 1 - c) as i64)
                .map_err(|e| MoveError(e.to_string()))?;
            self.apply(Move::SlotSplit {
                i: i + c as usize,
                s,
                a: base.clone(),
                b: rest,
            })?;
        }
        Ok(())
    }

    /// `1·ω ⊗ base^k → 1·(kω) ⊗ base`.
    pub fn power_out(
        &mut self,
        i: usize,
        s: usize,
        base: &FieldElem,
        k: u64,
    ) -> Result<(), MoveError> {
        self.normalize_coef(i)?;
        self.split_power(i, s, base, k)?;
        self.merge_run(i, k as usize)
    }

    /// Witt-merge the `count` consecutive terms starting at `i` into one.
    pub fn merge_run(&mut self, i: usize, count: usize) -> Result<(), MoveError> {
        for _ in 1..count {
            self.apply(Move::WittMerge { i, j: i + 1 })?;
        }
        Ok(())
    }

    /// `c·ω ⊗ β → 1·ω ⊗ β^c` for `c ≥ 1`.
    pub fn coef_power(&mut self, i: usize, s: usize) -> Result<(), MoveError> {
        let c = self.term(i).coef();
        if c < 1 {
            return Err(MoveError("coef-power needs a positive coefficient".into()));
        }
        for t in 0..(c - 1) as usize {
            self.apply(Move::CoefSplit { i: i + t, k: 1 })?;
        }
        for _ in 1..c {
            self.apply(Move::SlotMerge { i, j: i + 1, s })?;
        }
        Ok(())
    }

    /// Swap slots `a < b`, inverting the one that lands at `b`:
    /// `ω ⊗ … x … y … → ω ⊗ … y … x^{-1} …`.
    pub fn antisymmetry_swap(&mut self, i: usize, a: usize, b: usize) -> Result<(), MoveError> {
        if a == b {
            return Err(MoveError("swap needs two distinct slots".into()));
        }
        self.normalize_coef(i)?;
        let sym = self.sym(i).clone();
        let (x, y) = (sym.slot(a).clone(), sym.slot(b).clone());
        let xy = &x * &y;
        let mut ins = sym.with_w(sym.w().neg());
        ins = ins.with_slot(a, xy.clone()).expect("nonzero");
        ins = ins.with_slot(b, xy).expect("nonzero");
        // 0 = −ω⊗xy⊗xy = −ω⊗x⊗x − ω⊗x⊗y − ω⊗y⊗x − ω⊗y⊗y
        self.apply(Move::RepeatInsert {
            at: i + 1,
            term: Term::unit(ins),
        })?;
        self.apply(Move::SlotSplit {
            i: i + 1,
            s: a,
            a: x.clone(),
            b: y.clone(),
        })?;
        self.apply(Move::SlotSplit {
            i: i + 1,
            s: b,
            a: x.clone(),
            b: y.clone(),
        })?;
        self.apply(Move::SlotSplit {
            i: i + 3,
            s: b,
            a: x,
            b: y,
        })?;
        // i: ω⊗x⊗y, i+1: −ω⊗x⊗x, i+2: −ω⊗x⊗y, i+3: −ω⊗y⊗x, i+4: −ω⊗y⊗y
        self.apply(Move::RepeatKill { i: i + 4 })?;
        self.apply(Move::RepeatKill { i: i + 1 })?;
        self.apply(Move::WittMerge { i, j: i + 1 })?;
        self.apply(Move::ZeroKill { i })?;
        self.invert_slot(i, b)
    }
}

/// Expand slot `i` of `sym` along `factors`, whose product must equal it.
pub fn expand_slot(
    sym: &Symbol,
    i: usize,
    factors: &[FieldElem],
) -> Result<(SymbolSum, Certificate), MoveError> {
    let mut rw = Rewriter::single(sym.clone());
    if i >= sym.n() {
        return Err(MoveError("slot out of range".into()));
    }
    let prod = factors
        .iter()
        .fold(FieldElem::one(sym.sig()), |acc, f| &acc * f);
    if factors.is_empty() || &prod != sym.slot(i) {
        return Err(MoveError("factors do not multiply to the slot".into()));
    }
    let mut rest = prod;
    for (k, f) in factors[..factors.len() - 1].iter().enumerate() {
        rest = &rest / f;
        rw.apply(Move::SlotSplit {
            i: k,
            s: i,
            a: f.clone(),
            b: rest.clone(),
        })?;
    }
    let cert = rw.finish();
    Ok((cert.end.clone(), cert))
}

/// `ω ⊗ … a … b … = ω ⊗ … b … a^{-1} …` for slots `i ≠ j`.
pub fn antisymmetry_swap(
    sym: &Symbol,
    i: usize,
    j: usize,
) -> Result<(Symbol, Certificate), MoveError> {
    if i >= sym.n() || j >= sym.n() {
        return Err(MoveError("slot out of range".into()));
    }
    let mut rw = Rewriter::single(sym.clone());
    rw.antisymmetry_swap(0, i, j)?;
    let out = rw.sym(0).clone();
    Ok((out, rw.finish()))
}
