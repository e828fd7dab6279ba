//! Moving a prescribed monomial in the slots into the first slot.

use super::{inv_mod, DecomposeError};
use crate::field::FieldElem;
use crate::symbol::{Certificate, Move, Rewriter, Symbol, Term};

fn pow(b: &FieldElem, e: i64) -> FieldElem {
    b.int_pow(e).expect("slots are nonzero")
}

/// Rewrite term `i` (coefficient made 1) so that its first slot is
/// `Π β_k^{d_k}`. With one slot and `d ≠ 1` the Witt vector is rescaled
/// instead: `ω ⊗ β = (cω) ⊗ β^d` with `cd ≡ 1 (mod p^m)`.
pub(crate) fn rewrite_first_slot_at(
    rw: &mut Rewriter,
    i: usize,
    d: &[u64],
) -> Result<(), DecomposeError> {
    let sym = rw.sym(i).clone();
    let n = sym.n();
    if d.len() != n {
        return Err(DecomposeError::Input(format!(
            "exponent vector has {} entries for {n} slots",
            d.len()
        )));
    }
    let p = sym.sig().p() as i64;
    let pm = p.pow(sym.m() as u32);
    let j0 = d
        .iter()
        .position(|&x| x as i64 % p != 0)
        .ok_or(DecomposeError::NoCoprimeEntry)?;
    let target = sym
        .slots()
        .iter()
        .zip(d)
        .fold(FieldElem::one(sym.sig()), |acc, (b, &e)| &acc * &pow(b, e as i64));
    rw.normalize_coef(i)?;

    if n == 1 {
        let d0 = d[0] as i64;
        if d0 == 1 {
            return Ok(());
        }
        let c = inv_mod(d0, pm);
        let w = rw.sym(i).w().clone();
        rw.apply(Move::WittUneval { i, c: c * d0, w })?;
        for t in 0..(c - 1) as usize {
            rw.apply(Move::CoefSplit { i: i + t, k: d0 })?;
        }
        for g in 0..c as usize {
            rw.coef_power(i + g, 0)?;
        }
        rw.merge_run(i, c as usize)?;
        debug_assert_eq!(rw.sym(i).slot(0), &target);
        return Ok(());
    }

    // v[k] is the base now sitting in slot k, e[k] its target exponent
    let mut v: Vec<FieldElem> = sym.slots().to_vec();
    let mut e: Vec<i64> = d.iter().map(|&x| x as i64).collect();
    if j0 != 0 {
        rw.antisymmetry_swap(i, 0, j0)?;
        let (b0, bj) = (v[0].clone(), v[j0].clone());
        v[0] = bj;
        v[j0] = b0.inv().expect("nonzero");
        let (e0, ej) = (e[0], e[j0]);
        e[0] = ej;
        e[j0] = -e0;
    }
    let t0 = e[0];
    // actual exponent of v[k] inside slot 0 once we are done
    let mut actual = vec![0i64; n];
    actual[0] = 1;
    let mut u: Vec<FieldElem> = v.clone();
    let mut f = vec![0i64; n];
    for k in 1..n {
        f[k] = e[k].rem_euclid(pm);
    }
    if t0 % pm != 1 {
        // ω⊗v0⊗v1 = (t0·c)ω⊗v0⊗v1 = ω⊗v0^{t0}⊗v1^c
        let c = inv_mod(t0, pm);
        let w = rw.sym(i).w().clone();
        rw.apply(Move::WittUneval { i, c: t0 * c, w })?;
        for t in 0..(t0 - 1) as usize {
            rw.apply(Move::CoefSplit { i: i + t, k: c })?;
        }
        for g in 0..t0 as usize {
            rw.coef_power(i + g, 1)?;
        }
        for _ in 1..t0 {
            rw.apply(Move::SlotMerge { i, j: i + 1, s: 0 })?;
        }
        actual[0] = t0;
        u[1] = pow(&v[1], c);
        f[1] = (e[1] * t0).rem_euclid(pm);
        actual[1] = c * f[1];
    }
    // ω⊗A⊗…u…  = ω⊗(A·u)⊗…u…  since ω⊗u⊗…u… = 0
    for k in 1..n {
        if k != 1 || t0 % pm == 1 {
            actual[k] = f[k];
        }
        for _ in 0..f[k] {
            let cur = rw.sym(i).clone();
            let ins = cur.with_slot(0, u[k].clone()).expect("nonzero");
            rw.apply(Move::RepeatInsert {
                at: i + 1,
                term: Term::unit(ins),
            })?;
            rw.apply(Move::SlotMerge { i, j: i + 1, s: 0 })?;
        }
    }
    // slot 0 = target · g^{p^m}; split g^{p^m} off and let p^m·ω = 0 kill it
    let mut g = FieldElem::one(sym.sig());
    for k in 0..n {
        let diff = actual[k] - e[k];
        debug_assert_eq!(diff % pm, 0);
        if diff != 0 {
            g = &g * &pow(&v[k], diff / pm);
        }
    }
    if !g.is_one() {
        rw.apply(Move::SlotSplit {
            i,
            s: 0,
            a: target.clone(),
            b: pow(&g, pm),
        })?;
        rw.power_out(i + 1, 0, &g, pm as u64)?;
        rw.apply(Move::ZeroKill { i: i + 1 })?;
    }
    if rw.sym(i).slot(0) != &target {
        return Err(DecomposeError::Input("first slot rewrite did not reach the target".into()));
    }
    Ok(())
}

/// `ω⊗β_1⊗⋯⊗β_n = ω'⊗(Π β_k^{d_k})⊗γ_2⊗⋯⊗γ_n`, certified. `ω' = ω` unless `n = 1`.
pub fn rewrite_first_slot(
    sym: &Symbol,
    d: &[u64],
) -> Result<(Symbol, Certificate), DecomposeError> {
    let mut rw = Rewriter::single(sym.clone());
    rewrite_first_slot_at(&mut rw, 0, d)?;
    let out = rw.sym(0).clone();
    Ok((out, rw.finish()))
}
