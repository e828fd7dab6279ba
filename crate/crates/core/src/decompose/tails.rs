//! Single symbols whose residue is trivial.

use super::lemma::rewrite_first_slot_at;
use super::{inv_mod, peel, DecomposeError, Decomposition};
use crate::field::{ExponentIndex, FieldElem};
use crate::par;
use crate::symbol::{check_as_witness, ASWitness, Certificate, Move, Rewriter, Symbol};
use crate::witt::WittVector;

/// Turn a term `1·(x,0,…)⊗x⊗R`-able symbol into `(0,x,0,…)⊗z^{-1}⊗R`:
/// term `i` must read `(x,0,…) ⊗ (x z^{-p}) ⊗ R`.
fn finish_group(
    rw: &mut Rewriter,
    i: usize,
    x: &FieldElem,
    z: &FieldElem,
) -> Result<(), DecomposeError> {
    let p = x.p() as u64;
    let zinv = z.inv().expect("nonzero z");
    let zp = zinv.int_pow(p as i64).expect("nonzero");
    let slot = rw.sym(i).slot(0).clone();
    if slot != x * &zp {
        return Err(DecomposeError::Input("tail slot is not x·z^{-p}".into()));
    }
    rw.apply(Move::SlotSplit {
        i,
        s: 0,
        a: x.clone(),
        b: zp,
    })?;
    rw.apply(Move::SlotVectorKill { i })?;
    // p copies of (x,0,…)⊗z^{-1} merge to (0,x^p,0,…)⊗z^{-1}
    rw.power_out(i, 0, &zinv, p)?;
    rw.apply(Move::FrobKill { i })?;
    Ok(())
}

/// Tail for `n ≥ 2`: `(x,0,…)⊗β_1⊗⋯⊗β_n` with `x = z^p β^d` becomes
/// `(0,x,0,…)⊗z^{-1}⊗γ_2⊗⋯⊗γ_n`.
fn tail(sym: Symbol, d: &ExponentIndex, z: &FieldElem, x: &FieldElem) -> Result<Certificate, DecomposeError> {
    let mut rw = Rewriter::single(sym);
    let dd: Vec<u64> = d.entries().iter().map(|&e| e as u64).collect();
    rewrite_first_slot_at(&mut rw, 0, &dd)?;
    finish_group(&mut rw, 0, x, z)?;
    Ok(rw.finish())
}

/// Tail in degree 2 over `betas = (β_1,…,β_j)`: the term `(x,0,…)⊗β_j` with
/// `x = z^p β_1^{i_1}⋯β_{j-1}^{i_{j-1}} β_j^k` becomes
/// `[c(0,x,0,…)⊗z^{-1}, (−c i_l (x,0,…))⊗β_l for each l with i_l > 0]`
/// where `c = k^{-1} mod p^m`.
pub(crate) fn h2_tail(
    sym: Symbol,
    betas: &[FieldElem],
    d: &ExponentIndex,
    z: &FieldElem,
    x: &FieldElem,
) -> Result<Certificate, DecomposeError> {
    let j = betas.len();
    let p = x.p() as i64;
    let pm = p.pow(sym.m() as u32);
    let k = d.entries()[j - 1] as i64;
    let c = inv_mod(k, pm);
    let lower: Vec<(usize, i64)> = (0..j - 1)
        .map(|l| (l, d.entries()[l] as i64))
        .filter(|&(_, e)| e > 0)
        .collect();
    let width = 1 + lower.len();
    let w = sym.w().clone();
    let mut rw = Rewriter::single(sym);
    if c * k != 1 {
        rw.apply(Move::WittUneval { i: 0, c: c * k, w })?;
        for t in 0..(c - 1) as usize {
            rw.apply(Move::CoefSplit { i: t, k })?;
        }
    }
    let zinv = z.inv().expect("nonzero z");
    let zp = zinv.int_pow(p).expect("nonzero");
    let mut lower_part = FieldElem::one(x.sig());
    for &(l, e) in &lower {
        lower_part = &lower_part * &betas[l].int_pow(-e).expect("nonzero");
    }
    for g in 0..c as usize {
        // group g sits at `at`: width terms of earlier groups already merged before it
        let at = if g == 0 { 0 } else { width };
        rw.coef_power(at, 0)?;
        // β_j^k = x · z^{-p} · Π β_l^{-i_l}
        if !lower.is_empty() {
            rw.apply(Move::SlotSplit {
                i: at,
                s: 0,
                a: x * &zp,
                b: lower_part.clone(),
            })?;
        }
        finish_group(&mut rw, at, x, z)?;
        let mut pos = at + 1;
        let mut rest = lower_part.clone();
        for (q, &(l, e)) in lower.iter().enumerate() {
            let piece = betas[l].int_pow(-e).expect("nonzero");
            if q + 1 < lower.len() {
                rest = &rest / &piece;
                rw.apply(Move::SlotSplit {
                    i: pos,
                    s: 0,
                    a: piece,
                    b: rest.clone(),
                })?;
            }
            let binv = betas[l].inv().expect("nonzero");
            rw.power_out(pos, 0, &binv, e as u64)?;
            rw.invert_slot(pos, 0)?;
            pos += 1;
        }
        if g > 0 {
            for q in 0..width {
                rw.apply(Move::WittMerge { i: q, j: width })?;
            }
        }
    }
    Ok(rw.finish())
}

/// Decompose a single symbol over `W_m` whose residue is trivial, given a
/// witness for it, into at most `p^n` symbols over `W_{m-1}`.
pub fn theorem3(sym: &Symbol, wit: &ASWitness) -> Result<Decomposition, DecomposeError> {
    if sym.m() < 2 {
        return Err(DecomposeError::LengthTooShort);
    }
    let (alpha, betas) = sym.residue();
    if !check_as_witness(&alpha, betas, wit) {
        return Err(DecomposeError::WitnessRejected(
            "identity fails for the first Witt slot".into(),
        ));
    }
    let mut rw = Rewriter::single(sym.clone());
    theorem3_at(&mut rw, 0, wit)?;
    let p = sym.sig().p() as u64;
    Decomposition::from_rewriter(rw, p.pow(sym.n() as u32))
}

/// Replace term `i` by the lifted outputs; returns how many there are.
pub(crate) fn theorem3_at(
    rw: &mut Rewriter,
    i: usize,
    wit: &ASWitness,
) -> Result<usize, DecomposeError> {
    let sym = rw.sym(i).clone();
    let betas = sym.slots().to_vec();
    rw.normalize_coef(i)?;
    let parts = peel(rw, i, wit, &betas)?;
    let head = i + parts.len();
    let mut count = parts.len();
    if rw.sym(head).w().is_zero() {
        rw.apply(Move::ZeroKill { i: head })?;
    } else {
        count += 1;
    }
    let m = sym.m();
    let locals = par::map(&parts, |(d, z, x)| {
        let t = sym.with_w(WittVector::constant(x, m));
        if sym.n() == 1 {
            h2_tail(t, &betas, d, z, x)
        } else {
            tail(t, d, z, x)
        }
    });
    for (t, local) in locals.into_iter().enumerate() {
        rw.splice(i + t, local?)?;
    }
    Ok(count)
}
