//! Sums `Σ_j ω_j ⊗ β_j` of degree-one symbols.

use std::collections::BTreeMap;

use super::tails::h2_tail;
use super::{peel, DecomposeError, Decomposition};
use crate::field::{p_independence, FieldElem, PIndependence};
use crate::par;
use crate::symbol::{check_as_witness, ASWitness, Move, Rewriter, Symbol, SymbolSum};
use crate::witt::WittVector;

/// Supplies, for level `j`, a witness for `α ⊗ β_1 ⊗ ⋯ ⊗ β_j` in degree 2
/// whose nonzero indices all have last entry ≥ 1.
pub trait WitnessProvider: Sync {
    fn level_witness(&self, level: usize, alpha: &FieldElem, betas: &[FieldElem])
        -> Option<ASWitness>;
}

/// Witnesses fixed in advance, keyed by level (1-based).
#[derive(Clone, Debug, Default)]
pub struct PlantedLevels {
    pub levels: BTreeMap<usize, ASWitness>,
}

impl WitnessProvider for PlantedLevels {
    fn level_witness(&self, level: usize, _: &FieldElem, _: &[FieldElem]) -> Option<ASWitness> {
        self.levels.get(&level).cloned()
    }
}

fn valid_level_witness(alpha: &FieldElem, betas: &[FieldElem], wit: &ASWitness) -> bool {
    check_as_witness(alpha, betas, wit)
        && wit
            .nonzero()
            .all(|(d, _)| d.entries().last().is_some_and(|&e| e >= 1))
}

fn move_to(rw: &mut Rewriter, from: usize, to: usize) -> Result<(), DecomposeError> {
    if from != to {
        rw.apply(Move::TermMove { from, to })?;
    }
    Ok(())
}

/// Decompose `Σ_j ω_j ⊗ β_j` (all `n = 1`, same `m ≥ 2`) whose first slots
/// sum to zero in the degree-two quotient, level by level from the top.
pub fn theorem4(
    pairs: &[Symbol],
    provider: &dyn WitnessProvider,
) -> Result<Decomposition, DecomposeError> {
    let r = pairs.len();
    let first = pairs
        .first()
        .ok_or_else(|| DecomposeError::Input("no symbols".into()))?;
    let (sig, m) = (first.sig().clone(), first.m());
    if m < 2 {
        return Err(DecomposeError::LengthTooShort);
    }
    if pairs.iter().any(|s| s.n() != 1 || s.m() != m || s.sig() != &sig) {
        return Err(DecomposeError::Input(
            "every symbol needs one slot and the same Witt length".into(),
        ));
    }
    let betas: Vec<FieldElem> = pairs.iter().map(|s| s.slot(0).clone()).collect();
    if r > 1 {
        if let PIndependence::Dependent(dep) =
            p_independence(&betas[..r - 1]).map_err(|e| DecomposeError::Input(e.to_string()))?
        {
            return Err(DecomposeError::Dependent(dep));
        }
    }
    let mut rw = Rewriter::new(&sig, m, 1, SymbolSum::from_symbols(pairs.iter().cloned()));
    // layout: [outputs (done)…, τ_1, …, τ_j]
    let mut done = 0usize;
    for j in (1..=r).rev() {
        let q = done + j - 1;
        rw.normalize_coef(q)?;
        let alpha = rw.sym(q).w().slot(0).clone();
        let bs = &betas[..j];
        let wit = provider
            .level_witness(j, &alpha, bs)
            .ok_or_else(|| DecomposeError::ProviderFailed {
                level: j,
                alpha: alpha.to_string(),
            })?;
        if !valid_level_witness(&alpha, bs, &wit) {
            return Err(DecomposeError::WitnessRejected(format!("level {j}")));
        }
        let tau = rw.sym(q).clone();
        let parts = peel(&mut rw, q, &wit, bs)?;
        let head = q + parts.len();
        if rw.sym(head).w().is_zero() {
            rw.apply(Move::ZeroKill { i: head })?;
        } else {
            move_to(&mut rw, head, done)?;
            done += 1;
        }
        let locals = par::map(&parts, |(d, z, x)| {
            h2_tail(tau.with_w(WittVector::constant(x, m)), bs, d, z, x)
        });
        for ((d, _, _), local) in parts.iter().zip(locals) {
            let q = done + j - 1;
            rw.splice(q, local?)?;
            for l in 1..j {
                if d.entries()[l - 1] > 0 {
                    rw.apply(Move::WittMerge {
                        i: done + l - 1,
                        j: q + 1,
                    })?;
                }
            }
            move_to(&mut rw, q, done)?;
            done += 1;
        }
    }
    if rw.len() != done {
        return Err(DecomposeError::Input("levels left over".into()));
    }
    let p = sig.p() as u64;
    Decomposition::from_rewriter(rw, p.pow(r as u32) + r as u64 - 1)
}
