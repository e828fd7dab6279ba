//! Seeded instance generators with planted witnesses.
//!
//! All randomness comes from ChaCha8 seeded with the 64-bit seed, drawn in a
//! fixed order, so an instance depends only on its parameters and seed.
//! Variables are named `t1, …, tk`.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::monomials;
use crate::decompose::{ChainWitness, PlantedLevels};
use crate::field::{
    beta_power, p_independence, ExponentIndex, FieldElem, FieldError, MultiPoly, PIndependence,
    Signature,
};
use crate::symbol::{ASWitness, Symbol};
use crate::witt::WittVector;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("Witt length must be at least 2")]
    LengthTooShort,
    #[error("need at least {need} variables, got {got}")]
    TooFewVariables { need: usize, got: usize },
    #[error("{0}")]
    Field(#[from] FieldError),
}

fn signature(p: u32, k: usize) -> Result<Arc<Signature>, GenError> {
    let vars = (1..=k).map(|i| format!("t{i}")).collect();
    Ok(Signature::new(p, vars)?)
}

struct Draw<'a> {
    rng: ChaCha8Rng,
    sig: &'a Arc<Signature>,
}

impl Draw<'_> {
    /// Polynomial of total degree ≤ `deg` with at most `support` monomials.
    fn poly(&mut self, deg: u32, support: usize) -> FieldElem {
        let p = self.sig.p();
        let mut mons = monomials(self.sig.nvars(), deg);
        mons.shuffle(&mut self.rng);
        let terms: Vec<_> = mons
            .into_iter()
            .take(support)
            .map(|m| (m, self.rng.gen_range(0..p)))
            .collect();
        FieldElem::from_poly(self.sig, MultiPoly::from_terms(terms, p))
    }

    fn nonzero(&mut self, deg: u32, support: usize) -> FieldElem {
        loop {
            let x = self.poly(deg, support);
            if !x.is_zero() {
                return x;
            }
        }
    }

    fn nonconstant(&mut self, deg: u32, support: usize) -> FieldElem {
        loop {
            let x = self.poly(deg.max(1), support);
            if x.total_degree() > 0 {
                return x;
            }
        }
    }

    fn coin(&mut self) -> bool {
        self.rng.gen_bool(0.5)
    }

    /// Higher Witt slots after a fixed first one.
    fn witt(&mut self, first: FieldElem, m: usize, deg: u32) -> WittVector {
        let mut slots = vec![first];
        for _ in 1..m {
            slots.push(self.poly(deg, usize::MAX));
        }
        WittVector::new(slots).expect("same field")
    }

    /// `λ` and, for each index independently with probability 1/2, a nonzero `z_d`.
    fn witness(&mut self, indices: &[ExponentIndex], deg: u32, support: usize) -> ASWitness {
        let lambda = self.poly(deg, support);
        let mut z = BTreeMap::new();
        for d in indices {
            if self.coin() {
                z.insert(d.clone(), self.nonzero(deg, support));
            }
        }
        ASWitness { lambda, z }
    }
}

fn draw(seed: u64, sig: &Arc<Signature>) -> Draw<'_> {
    Draw {
        rng: ChaCha8Rng::seed_from_u64(seed),
        sig,
    }
}

fn independent(betas: &[FieldElem]) -> bool {
    matches!(p_independence(betas), Ok(PIndependence::Independent))
}

/// A symbol `ω ⊗ β_1 ⊗ ⋯ ⊗ β_n` over `𝔽_p(t_1..t_k)` with
/// `ω_1 = λ^p − λ + Σ z_d^p β^d` for random `λ, z` of degree ≤ `deg`.
///
/// With `n ≤ k` the slots are `t_i + c_i` for random constants `c_i`, which
/// are p-independent; otherwise random polynomials, redrawn up to 16 times
/// until p-independent.
pub fn gen_t3(
    p: u32,
    m: usize,
    n: usize,
    k: usize,
    seed: u64,
    deg: u32,
) -> Result<(Symbol, ASWitness), GenError> {
    if m < 2 {
        return Err(GenError::LengthTooShort);
    }
    if k == 0 {
        return Err(GenError::TooFewVariables { need: 1, got: 0 });
    }
    let sig = signature(p, k)?;
    let mut g = draw(seed, &sig);
    let betas: Vec<FieldElem> = if n <= k {
        (0..n)
            .map(|i| {
                let c = FieldElem::from_int(&sig, g.rng.gen_range(0..p) as i64);
                &FieldElem::var(&sig, i) + &c
            })
            .collect()
    } else {
        let mut b = Vec::new();
        for _ in 0..16 {
            b = (0..n).map(|_| g.nonconstant(deg, 3)).collect();
            if independent(&b) {
                break;
            }
        }
        b
    };
    let wit = g.witness(&ExponentIndex::nonzero(n, p), deg, usize::MAX);
    let alpha = wit.evaluate(&betas).expect("indices fit");
    let w = g.witt(alpha, m, deg);
    let sym = Symbol::new(w, betas).expect("nonzero slots");
    Ok((sym, wit))
}

#[derive(Clone, Debug)]
pub struct T4Instance {
    /// `ω_j ⊗ β_j` for `j = 1..r`.
    pub pairs: Vec<Symbol>,
    /// A witness for every level, consistent with the order in which the
    /// decomposition consumes them when it uses exactly these witnesses.
    pub levels: PlantedLevels,
}

impl T4Instance {
    pub fn top(&self) -> &ASWitness {
        self.levels.levels.values().next_back().expect("r ≥ 1")
    }

    /// Only the top level's witness.
    pub fn top_only(&self) -> PlantedLevels {
        let (&r, w) = self.levels.levels.iter().next_back().expect("r ≥ 1");
        PlantedLevels {
            levels: BTreeMap::from([(r, w.clone())]),
        }
    }
}

/// `Σ_{j=1}^r ω_j ⊗ β_j` with `β_j = t_j` for `j < r` and `β_r` random.
///
/// Witnesses are planted at every level, top down: level `j` gets a random
/// witness (degree ≤ `deg` at the top, degree ≤ 1 with at most 3 monomials
/// below), and `ω_j`'s first slot is chosen so that, once the tails of the
/// higher levels have been merged into it, it equals that witness's value.
pub fn gen_t4(
    p: u32,
    m: usize,
    r: usize,
    k: usize,
    seed: u64,
    deg: u32,
) -> Result<T4Instance, GenError> {
    if m < 2 {
        return Err(GenError::LengthTooShort);
    }
    let need = r.saturating_sub(1).max(1);
    if k < need {
        return Err(GenError::TooFewVariables { need, got: k });
    }
    let sig = signature(p, k)?;
    let mut g = draw(seed, &sig);
    let mut betas: Vec<FieldElem> = (0..r - 1).map(|i| FieldElem::var(&sig, i)).collect();
    betas.push(g.nonconstant(deg, 3));
    // carried[l]: first-slot mass the higher levels merge into τ_l
    let mut carried = vec![FieldElem::zero(&sig); r];
    let mut alphas = vec![FieldElem::zero(&sig); r];
    let mut levels = BTreeMap::new();
    for j in (1..=r).rev() {
        let idx = super::level_indices(j, p);
        let wit = if j == r {
            g.witness(&idx, deg, usize::MAX)
        } else {
            g.witness(&idx, 1, 3)
        };
        let bs = &betas[..j];
        // after the merges τ_j's first slot is α_j − carried_j
        alphas[j - 1] = &wit.evaluate(bs).expect("indices fit") + &carried[j - 1];
        for (d, z) in wit.nonzero() {
            let e = d.entries();
            let c = crate::decompose::inv_mod(e[j - 1] as i64, p as i64);
            let x = &z.frobenius() * &beta_power(bs, e);
            for l in 0..j - 1 {
                if e[l] > 0 {
                    let s = FieldElem::from_int(&sig, c * e[l] as i64);
                    carried[l] = &carried[l] + &(&s * &x);
                }
            }
        }
        levels.insert(j, wit);
    }
    let pairs = (0..r)
        .map(|j| {
            let w = g.witt(alphas[j].clone(), m, deg);
            Symbol::new(w, vec![betas[j].clone()]).expect("nonzero slot")
        })
        .collect();
    Ok(T4Instance {
        pairs,
        levels: PlantedLevels { levels },
    })
}

#[derive(Clone, Debug)]
pub struct T5Instance {
    pub a: Symbol,
    pub b: Symbol,
    pub chain: ChainWitness,
}

fn index(d: &[u32]) -> ExponentIndex {
    ExponentIndex::new(d.to_vec(), 2).expect("entries below 2")
}

fn unit_index(n: usize, ones: usize) -> ExponentIndex {
    let mut d = vec![0; n];
    for x in d.iter_mut().take(ones) {
        *x = 1;
    }
    index(&d)
}

/// `ω ⊗ β − τ ⊗ δ` over `𝔽_2(t_1..t_k)` with a planted chain.
///
/// With `s = t_1` and `α = λ² + λ + z_0² s`, the lines are built first and
/// the slots read off from them: `γ_1 = s`; for `n ≥ 2`, `β_1 = s² q² / β_2`
/// and `δ_1 = δ_2 q'²`; for `n = 1`, `β_1 = s δ_1 q²`. `τ = ω − u` with
/// `u_1 = λ'² + λ' + z'² δ_1`.
pub fn gen_t5(m: usize, n: usize, k: usize, seed: u64, deg: u32) -> Result<T5Instance, GenError> {
    if m < 2 {
        return Err(GenError::LengthTooShort);
    }
    if k == 0 {
        return Err(GenError::TooFewVariables { need: 1, got: 0 });
    }
    let sig = signature(2, k)?;
    let mut g = draw(seed, &sig);
    let s = FieldElem::var(&sig, 0);
    let lambda = g.poly(deg, usize::MAX);
    let z0 = g.nonzero(deg, usize::MAX);
    let alpha = &(&lambda.frobenius() + &lambda) + &(&z0.frobenius() * &s);
    let q = g.nonzero(deg, 3);
    let qq = g.nonzero(deg, 3);

    let mut beta = Vec::with_capacity(n);
    let mut delta = Vec::with_capacity(n);
    let mut gammas = Vec::with_capacity(n.saturating_sub(1));
    if n == 1 {
        let d1 = g.nonconstant(deg, 3);
        beta.push(&(&s * &d1) * &q.frobenius());
        delta.push(d1);
    } else {
        let b2 = g.nonconstant(deg, 3);
        let d2 = g.nonconstant(deg, 3);
        beta.push(&(&s.frobenius() * &q.frobenius()) / &b2);
        delta.push(&d2 * &qq.frobenius());
        beta.push(b2);
        delta.push(d2);
        for _ in 2..n {
            beta.push(g.nonconstant(deg, 3));
            delta.push(g.nonconstant(deg, 3));
        }
        gammas.push(s.clone());
        for _ in 2..n {
            gammas.push(g.nonconstant(deg, 3));
        }
    }
    let lam2 = g.poly(deg, usize::MAX);
    let z2 = g.poly(deg, usize::MAX);
    let u1 = &(&lam2.frobenius() + &lam2) + &(&z2.frobenius() * &delta[0]);
    let omega = g.witt(alpha, m, deg);
    let u = g.witt(u1, m, deg);
    let tau = omega.sub(&u).expect("same length");

    let line = |d: ExponentIndex, z: FieldElem| ASWitness {
        lambda: lambda.clone(),
        z: BTreeMap::from([(d, z)]),
    };
    let mut lines = Vec::with_capacity(2 * n);
    if n == 1 {
        lines.push(line(unit_index(1, 1), &z0 / &q));
    } else {
        lines.push(line(unit_index(n, 2), &z0 / &q));
        for _ in 2..2 * n - 1 {
            lines.push(line(unit_index(n, 1), z0.clone()));
        }
        lines.push(line(unit_index(n, 2), &z0 * &qq));
    }
    let mut last = ASWitness {
        lambda: lam2,
        z: BTreeMap::new(),
    };
    if !z2.is_zero() {
        last.z.insert(unit_index(n, 1), z2);
    }
    lines.push(last);
    Ok(T5Instance {
        a: Symbol::new(omega, beta).expect("nonzero slots"),
        b: Symbol::new(tau, delta).expect("nonzero slots"),
        chain: ChainWitness { gammas, lines },
    })
}
