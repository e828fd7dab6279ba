//! Differences `ω ⊗ β − τ ⊗ δ` of two symbols over `W_m(F)`, `p = 2`.

use super::tails::theorem3_at;
use super::{DecomposeError, Decomposition};
use crate::field::FieldElem;
use crate::witt::WittVector;
use crate::par;
use crate::symbol::{
    check_as_witness, ASWitness, Certificate, Move, Rewriter, Symbol, SymbolSum, Term,
};

/// Intermediate slots `γ_1,…,γ_{n-1}` and one witness per telescoping line.
#[derive(Clone, Debug)]
pub struct ChainWitness {
    pub gammas: Vec<FieldElem>,
    /// `2n` entries, in line order.
    pub lines: Vec<ASWitness>,
}

/// Slot lists strictly after `β`, ending with `δ`:
/// `(γ_1..γ_i, β_{i+1}..)` for `i < n`, then `(γ_1..γ_{i-1}, δ_i..δ_n)` for `i = n..1`.
fn chain(beta: &[FieldElem], delta: &[FieldElem], gammas: &[FieldElem]) -> Vec<Vec<FieldElem>> {
    let n = beta.len();
    let mut out = Vec::with_capacity(2 * n - 1);
    for i in 1..n {
        let mut s = gammas[..i].to_vec();
        s.extend_from_slice(&beta[i..]);
        out.push(s);
    }
    for i in (1..=n).rev() {
        let mut s = gammas[..i - 1].to_vec();
        s.extend_from_slice(&delta[i - 1..]);
        out.push(s);
    }
    out
}

fn check_pair(a: &Symbol, b: &Symbol, gammas: &[FieldElem]) -> Result<(), DecomposeError> {
    if a.m() != b.m() || a.n() != b.n() || a.sig() != b.sig() {
        return Err(DecomposeError::Input(
            "both symbols need the same Witt length and number of slots".into(),
        ));
    }
    if gammas.len() + 1 != a.n() {
        return Err(DecomposeError::Input(format!(
            "need {} intermediate slots, got {}",
            a.n() - 1,
            gammas.len()
        )));
    }
    if gammas.iter().any(FieldElem::is_zero) {
        return Err(DecomposeError::Input("intermediate slot is zero".into()));
    }
    Ok(())
}

fn telescope_rw(
    a: &Symbol,
    b: &Symbol,
    gammas: &[FieldElem],
) -> Result<Rewriter, DecomposeError> {
    check_pair(a, b, gammas)?;
    let sig = a.sig().clone();
    let start = SymbolSum::new(vec![
        Term::unit(a.clone()),
        Term::new(-1, b.clone()).expect("nonzero"),
    ]);
    let mut rw = Rewriter::new(&sig, a.m(), a.n(), start);
    let lists = chain(a.slots(), b.slots(), gammas);
    let omega = a.w().clone();
    for (k, list) in lists.iter().enumerate() {
        let at = 2 * k + 1;
        let zero = Symbol::new(WittVector::zero(&sig, a.m()), list.clone())
            .map_err(|e| DecomposeError::Input(e.to_string()))?;
        rw.apply(Move::ZeroInsert {
            at,
            term: Term::unit(zero),
        })?;
        rw.apply(Move::WittSplit {
            i: at,
            part: omega.neg(),
        })?;
    }
    // [ω⊗S_0, −ω⊗L_1, ω⊗L_1, …, −ω⊗L_{2n-1}, ω⊗L_{2n-1}, −τ⊗δ]
    let lines = lists.len() + 1;
    for q in 0..lines {
        let (x, y) = (rw.sym(q).clone(), rw.sym(q + 1).clone());
        if x.slots() == y.slots() {
            rw.apply(Move::WittMerge { i: q, j: q + 1 })?;
            continue;
        }
        let s = (0..x.n())
            .find(|&s| x.slot(s) != y.slot(s))
            .expect("lists differ");
        rw.invert_slot(q + 1, s)?;
        rw.apply(Move::SlotMerge { i: q, j: q + 1, s })?;
    }
    Ok(rw)
}

/// Rewrite `ω⊗β − τ⊗δ` as `2n` line symbols: `ω ⊗ (consecutive slot quotient)`
/// for the first `2n − 1`, and `(ω − τ) ⊗ δ` last.
pub fn telescope(
    a: &Symbol,
    b: &Symbol,
    gammas: &[FieldElem],
) -> Result<(Vec<Symbol>, Certificate), DecomposeError> {
    let rw = telescope_rw(a, b, gammas)?;
    let lines = rw.current().terms().iter().map(|t| t.sym().clone()).collect();
    Ok((lines, rw.finish()))
}

/// Decompose `ω⊗β − τ⊗δ` over `W_m(F)`, `p = 2`, whose residue vanishes,
/// given the telescoping chain and a witness for every line.
pub fn theorem5(
    a: &Symbol,
    b: &Symbol,
    chain: &ChainWitness,
) -> Result<Decomposition, DecomposeError> {
    if a.sig().p() != 2 {
        return Err(DecomposeError::Input("only p = 2 is supported".into()));
    }
    if a.m() < 2 {
        return Err(DecomposeError::LengthTooShort);
    }
    let n = a.n();
    if chain.lines.len() != 2 * n {
        return Err(DecomposeError::Input(format!(
            "need {} line witnesses, got {}",
            2 * n,
            chain.lines.len()
        )));
    }
    let mut rw = telescope_rw(a, b, &chain.gammas)?;
    let lines: Vec<Symbol> = rw.current().terms().iter().map(|t| t.sym().clone()).collect();
    let mut live = Vec::new();
    for (q, line) in lines.iter().enumerate() {
        if line.w().is_zero() {
            rw.apply(Move::ZeroKill { i: live.len() })?;
            continue;
        }
        let (alpha, betas) = line.residue();
        if !check_as_witness(&alpha, betas, &chain.lines[q]) {
            return Err(DecomposeError::LineWitness { line: q + 1 });
        }
        live.push(q);
    }
    let locals = par::map(&live, |&q| {
        let mut local = Rewriter::single(lines[q].clone());
        let count = theorem3_at(&mut local, 0, &chain.lines[q])?;
        Ok::<_, DecomposeError>((local.finish(), count))
    });
    let mut at = 0;
    for r in locals {
        let (cert, count) = r?;
        rw.splice(at, cert)?;
        at += count;
    }
    let p = 2u64;
    Decomposition::from_rewriter(rw, (2 * n as u64 + 1) * p.pow(n as u32))
}
