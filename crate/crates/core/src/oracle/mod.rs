//! Desk-scale ground truth: planted instances and bounded witness search.
//!
//! Search enumerates candidate polynomials in a fixed order: the zero
//! polynomial, then by total degree, then by monomial set (grlex, largest
//! monomial first), then by coefficients. Tuples `(λ, z_1, …)` are scanned
//! lexicographically with `λ` most significant; the last `z` is solved for
//! by a p-th root instead of being enumerated. The first hit in this order
//! is returned even when the scan runs in parallel.

mod gen;

use std::cmp::Ordering;
use std::sync::atomic::{AtomicBool, Ordering as AtomicOrdering};
use std::sync::Arc;

use crate::decompose::{PlantedLevels, WitnessProvider};
use crate::field::poly::{grlex, Mono};
use crate::field::{beta_power, ExponentIndex, FieldElem, MultiPoly, Signature};
use crate::par;
use crate::symbol::{check_as_witness, ASWitness};

pub use gen::{gen_t3, gen_t4, gen_t5, GenError, T4Instance, T5Instance};

/// Default cap on the number of tuples a search may scan.
pub const DEFAULT_CAP: u128 = 1 << 24;

/// Environment variable overriding [`DEFAULT_CAP`].
pub const CAP_ENV: &str = "WITT_SYMBOL_CAP";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBounds {
    /// Largest total degree of a candidate polynomial.
    pub max_degree: u32,
    /// Largest number of monomials in a candidate.
    pub max_support: usize,
}

impl SearchBounds {
    pub fn new(max_degree: u32, max_support: usize) -> Self {
        SearchBounds {
            max_degree,
            max_support,
        }
    }

    /// Whether `x` is one of the candidates.
    pub fn contains(&self, x: &FieldElem) -> bool {
        x.is_polynomial()
            && x.num().total_degree() <= self.max_degree
            && x.num().terms().len() <= self.max_support
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("search space has {size} tuples, above the cap of {cap}")]
    CapExceeded { size: u128, cap: u128 },
    #[error("bad search input: {0}")]
    Input(String),
}

/// The cap in force: `WITT_SYMBOL_CAP` if set and valid, else [`DEFAULT_CAP`].
pub fn search_cap() -> u128 {
    std::env::var(CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_CAP)
}

/// Monomials of total degree at most `deg` in `k` variables, ascending grlex.
pub(crate) fn monomials(k: usize, deg: u32) -> Vec<Mono> {
    let mut out: Vec<Mono> = vec![Mono::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|m| {
                let used: u32 = m.iter().sum();
                (0..=deg - used).map(move |e| {
                    let mut m2 = m.clone();
                    m2.push(e);
                    m2
                })
            })
            .collect();
    }
    out.sort_by(|a, b| grlex(a, b));
    out
}

fn binom(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Number of candidates per unknown.
pub fn candidate_count(sig: &Signature, bounds: &SearchBounds) -> u128 {
    let mons = monomials(sig.nvars(), bounds.max_degree).len() as u128;
    let q = (sig.p() - 1) as u128;
    (0..=bounds.max_support as u128)
        .map(|j| binom(mons, j).saturating_mul(q.saturating_pow(j as u32)))
        .fold(0u128, u128::saturating_add)
}

/// Tuples scanned when searching over `indices`.
pub fn search_space(sig: &Signature, n_indices: usize, bounds: &SearchBounds) -> u128 {
    let c = candidate_count(sig, bounds);
    let unknowns = if n_indices == 0 { 1 } else { n_indices };
    c.saturating_pow(unknowns as u32)
}

fn order_key(a: &MultiPoly, b: &MultiPoly) -> Ordering {
    a.total_degree()
        .cmp(&b.total_degree())
        .then_with(|| {
            let ma = a.terms().iter().map(|t| &t.0);
            let mb = b.terms().iter().map(|t| &t.0);
            for (x, y) in ma.clone().zip(mb.clone()) {
                match grlex(x, y) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
            a.terms().len().cmp(&b.terms().len())
        })
        .then_with(|| {
            let ca = a.terms().iter().map(|t| t.1);
            let cb = b.terms().iter().map(|t| t.1);
            ca.cmp(cb)
        })
}

/// Every candidate, in search order.
pub fn candidates(sig: &Arc<Signature>, bounds: &SearchBounds) -> Vec<FieldElem> {
    let p = sig.p();
    let mons = monomials(sig.nvars(), bounds.max_degree);
    let mut polys = vec![MultiPoly::zero()];
    // grow supports one monomial at a time, always taking a larger index
    let mut frontier: Vec<(usize, Vec<(Mono, u32)>)> = vec![(0, Vec::new())];
    for _ in 0..bounds.max_support.min(mons.len()) {
        let mut next = Vec::new();
        for (start, terms) in &frontier {
            for (i, m) in mons.iter().enumerate().skip(*start) {
                for c in 1..p {
                    let mut t = terms.clone();
                    t.push((m.clone(), c));
                    polys.push(MultiPoly::from_terms(t.clone(), p));
                    next.push((i + 1, t));
                }
            }
        }
        frontier = next;
    }
    polys.sort_by(order_key);
    polys
        .into_iter()
        .map(|poly| FieldElem::from_poly(sig, poly))
        .collect()
}

/// Search for `(λ, z)` with `α = λ^p − λ + Σ_{d ∈ indices} z_d^p β^d`, all
/// unknowns drawn from the candidates. `None` means no witness within bounds,
/// which says nothing about triviality.
pub fn search_as_witness_on(
    alpha: &FieldElem,
    betas: &[FieldElem],
    indices: &[ExponentIndex],
    bounds: &SearchBounds,
) -> Result<Option<ASWitness>, SearchError> {
    let sig = alpha.sig().clone();
    if betas.iter().any(FieldElem::is_zero) {
        return Err(SearchError::Input("zero slot".into()));
    }
    if indices.iter().any(|d| d.len() != betas.len() || d.is_zero()) {
        return Err(SearchError::Input("index does not fit the slots".into()));
    }
    let size = search_space(&sig, indices.len(), bounds);
    let cap = search_cap();
    if size > cap {
        return Err(SearchError::CapExceeded { size, cap });
    }
    let cands = candidates(&sig, bounds);
    let c = cands.len();
    let art: Vec<FieldElem> = cands.iter().map(|l| &l.frobenius() - l).collect();
    let (enumerated, last) = match indices.split_last() {
        Some((last, rest)) => (rest, Some(last)),
        None => (indices, None),
    };
    let terms: Vec<Vec<FieldElem>> = enumerated
        .iter()
        .map(|d| {
            let b = beta_power(betas, d.entries());
            cands.iter().map(|z| &z.frobenius() * &b).collect()
        })
        .collect();
    let last_inv = last.map(|d| beta_power(betas, d.entries()).inv().expect("nonzero"));
    let slots = 1 + enumerated.len();
    let hit = par::find_first(size as usize, |flat| {
        let mut digits = vec![0usize; slots];
        let mut t = flat;
        for k in (0..slots).rev() {
            digits[k] = t % c;
            t /= c;
        }
        let mut rest = alpha - &art[digits[0]];
        for (e, &dg) in digits[1..].iter().enumerate() {
            if dg != 0 {
                rest = &rest - &terms[e][dg];
            }
        }
        let z_last = match &last_inv {
            Some(inv) => {
                let z = (&rest * inv).pth_root()?;
                if !bounds.contains(&z) {
                    return None;
                }
                Some(z)
            }
            None if rest.is_zero() => None,
            None => return None,
        };
        let mut wit = ASWitness::trivial(&sig);
        wit.lambda = cands[digits[0]].clone();
        for (e, &dg) in digits[1..].iter().enumerate() {
            if dg != 0 {
                wit.z.insert(enumerated[e].clone(), cands[dg].clone());
            }
        }
        if let (Some(d), Some(z)) = (last, z_last) {
            if !z.is_zero() {
                wit.z.insert(d.clone(), z);
            }
        }
        check_as_witness(alpha, betas, &wit).then_some(wit)
    });
    Ok(hit)
}

/// [`search_as_witness_on`] over every nonzero index.
pub fn search_as_witness(
    alpha: &FieldElem,
    betas: &[FieldElem],
    bounds: &SearchBounds,
) -> Result<Option<ASWitness>, SearchError> {
    let p = alpha.p();
    search_as_witness_on(alpha, betas, &ExponentIndex::nonzero(betas.len(), p), bounds)
}

/// Indices usable at a level of the degree-two induction: last entry ≥ 1.
pub fn level_indices(j: usize, p: u32) -> Vec<ExponentIndex> {
    ExponentIndex::nonzero(j, p)
        .into_iter()
        .filter(|d| d.entries().last().is_some_and(|&e| e >= 1))
        .collect()
}

/// Planted witnesses where available, bounded search elsewhere.
#[derive(Debug, Default)]
pub struct LevelSearch {
    pub bounds: SearchBounds,
    pub planted: PlantedLevels,
    cap_hit: AtomicBool,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds::new(1, 3)
    }
}

impl LevelSearch {
    pub fn new(bounds: SearchBounds, planted: PlantedLevels) -> Self {
        LevelSearch {
            bounds,
            planted,
            cap_hit: AtomicBool::new(false),
        }
    }

    /// Whether some level gave up because the search space was over the cap.
    pub fn cap_hit(&self) -> bool {
        self.cap_hit.load(AtomicOrdering::Relaxed)
    }
}

impl WitnessProvider for LevelSearch {
    fn level_witness(
        &self,
        level: usize,
        alpha: &FieldElem,
        betas: &[FieldElem],
    ) -> Option<ASWitness> {
        if let Some(w) = self.planted.levels.get(&level) {
            return Some(w.clone());
        }
        let idx = level_indices(betas.len(), alpha.p());
        match search_as_witness_on(alpha, betas, &idx, &self.bounds) {
            Ok(w) => w,
            Err(SearchError::CapExceeded { .. }) => {
                self.cap_hit.store(true, AtomicOrdering::Relaxed);
                None
            }
            Err(SearchError::Input(_)) => None,
        }
    }
}
