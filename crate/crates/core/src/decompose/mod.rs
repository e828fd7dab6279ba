//! Constructive symbol-length decompositions with certificates.
//!
//! Every routine returns symbols over `W_{m-1}` together with a certificate,
//! over `W_m`, that rewrites the input into the sum of their lifts.

mod h2;
mod lemma;
mod tails;
mod two;

use crate::field::{DependenceWitness, ExponentIndex, FieldElem};
use crate::symbol::{ASWitness, Certificate, MoveError, Rewriter, Symbol};
use crate::witt::WittVector;

pub use h2::{theorem4, PlantedLevels, WitnessProvider};
pub use lemma::rewrite_first_slot;
pub use tails::theorem3;
pub use two::{telescope, theorem5, ChainWitness};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecomposeError {
    #[error("Witt length must be at least 2")]
    LengthTooShort,
    #[error("exponent vector has no entry prime to p")]
    NoCoprimeEntry,
    #[error("witness does not verify: {0}")]
    WitnessRejected(String),
    #[error("no witness found for level {level} (first Witt slot {alpha})")]
    ProviderFailed { level: usize, alpha: String },
    #[error("slots are p-dependent")]
    Dependent(DependenceWitness),
    #[error("line {line}: witness does not verify")]
    LineWitness { line: usize },
    #[error("bad input: {0}")]
    Input(String),
    #[error("rewrite failed: {0}")]
    Move(#[from] MoveError),
}

#[derive(Clone, Debug)]
pub struct Decomposition {
    /// Output symbols over `W_{m-1}`.
    pub outputs: Vec<Symbol>,
    pub certificate: Certificate,
    /// The published bound for the instance's parameters.
    pub bound: u64,
}

impl Decomposition {
    pub fn count(&self) -> usize {
        self.outputs.len()
    }

    pub fn within_bound(&self) -> bool {
        self.outputs.len() as u64 <= self.bound
    }

    fn from_rewriter(rw: Rewriter, bound: u64) -> Result<Self, DecomposeError> {
        let certificate = rw.finish();
        let outputs = certificate
            .end
            .terms()
            .iter()
            .map(|t| {
                if t.coef() != 1 {
                    return Err(DecomposeError::Input("output with coefficient ≠ 1".into()));
                }
                t.sym()
                    .unlift()
                    .map_err(|e| DecomposeError::Input(e.to_string()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Decomposition {
            outputs,
            certificate,
            bound,
        })
    }
}

/// `c ≡ a^{-1} (mod modulus)` for `a` prime to the modulus.
pub(crate) fn inv_mod(a: i64, modulus: i64) -> i64 {
    let (mut r0, mut r1) = (modulus, a.rem_euclid(modulus));
    let (mut s0, mut s1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
    }
    assert_eq!(r0, 1, "not invertible");
    s0.rem_euclid(modulus)
}

/// Split `ω` at term `i` into `(λ^p,0,…) − (λ,0,…) + Σ (x_d,0,…) + head` and
/// cancel the `λ` parts. Leaves `[x-terms…, head]` starting at `i` and returns
/// the `(d, z, x)` triples in order. The head's first slot is zero when the
/// witness verifies.
pub(crate) fn peel(
    rw: &mut Rewriter,
    i: usize,
    wit: &ASWitness,
    betas: &[FieldElem],
) -> Result<Vec<(ExponentIndex, FieldElem, FieldElem)>, DecomposeError> {
    let m = rw.sym(i).m();
    let lam = &wit.lambda;
    if !lam.is_zero() {
        use crate::symbol::Move;
        rw.apply(Move::WittSplit {
            i,
            part: WittVector::constant(&lam.frobenius(), m),
        })?;
        rw.apply(Move::WittSplit {
            i: i + 1,
            part: WittVector::constant(lam, m).neg(),
        })?;
        rw.apply(Move::FrobKill { i })?;
        rw.apply(Move::WittMerge { i, j: i + 1 })?;
        rw.apply(Move::ZeroKill { i })?;
    }
    let mut parts = Vec::new();
    for (d, z) in wit.nonzero() {
        let x = &z.frobenius() * &crate::field::beta_power(betas, d.entries());
        rw.apply(crate::symbol::Move::WittSplit {
            i: i + parts.len(),
            part: WittVector::constant(&x, m),
        })?;
        parts.push((d.clone(), z.clone(), x));
    }
    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::inv_mod;

    #[test]
    fn modular_inverse() {
        assert_eq!(inv_mod(3, 4), 3);
        assert_eq!(inv_mod(2, 9), 5);
        assert_eq!(inv_mod(1, 8), 1);
    }
}
