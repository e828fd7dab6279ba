//! The additive group of truncated Witt vectors `W_m F`.

mod table;

use std::fmt;
use std::sync::Arc;

use crate::field::poly::MultiPoly;
use crate::field::{FieldElem, Signature};

pub use table::{generate_table, table, IntegralityError, TablePoly, WittPolynomialTable};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WittError {
    #[error("Witt vector lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("cannot keep {keep} slots of a length-{len} vector")]
    TruncateTooLong { keep: usize, len: usize },
    #[error("Witt vectors must have at least one slot")]
    Empty,
    #[error("slots belong to different fields")]
    SignatureMismatch,
}

/// `(ω_1,…,ω_m)`, slot 1 first.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WittVector {
    slots: Vec<FieldElem>,
}

impl WittVector {
    pub fn new(slots: Vec<FieldElem>) -> Result<Self, WittError> {
        let first = slots.first().ok_or(WittError::Empty)?;
        if slots.iter().any(|s| s.sig() != first.sig()) {
            return Err(WittError::SignatureMismatch);
        }
        Ok(WittVector { slots })
    }

    pub fn zero(sig: &Arc<Signature>, m: usize) -> Self {
        assert!(m >= 1);
        WittVector {
            slots: vec![FieldElem::zero(sig); m],
        }
    }

    /// `(x, 0, …, 0)` of length `m`.
    pub fn constant(x: &FieldElem, m: usize) -> Self {
        let mut slots = vec![FieldElem::zero(x.sig()); m];
        slots[0] = x.clone();
        WittVector { slots }
    }

    pub fn len(&self) -> usize {
        self.slots.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn slots(&self) -> &[FieldElem] {
        &self.slots
    }

    pub fn slot(&self, i: usize) -> &FieldElem {
        &self.slots[i]
    }

    pub fn sig(&self) -> &Arc<Signature> {
        self.slots[0].sig()
    }

    pub fn p(&self) -> u32 {
        self.sig().p()
    }

    pub fn is_zero(&self) -> bool {
        self.slots.iter().all(FieldElem::is_zero)
    }

    /// Number of nonzero slots and the index of the first one.
    pub fn support(&self) -> (usize, Option<usize>) {
        let nz: Vec<usize> = (0..self.len())
            .filter(|&i| !self.slots[i].is_zero())
            .collect();
        (nz.len(), nz.first().copied())
    }

    fn same_shape(&self, other: &Self) -> Result<(), WittError> {
        if self.len() != other.len() {
            return Err(WittError::LengthMismatch(self.len(), other.len()));
        }
        if self.sig() != other.sig() {
            return Err(WittError::SignatureMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, WittError> {
        self.same_shape(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        let t = table(self.p(), self.len());
        let inputs: Vec<FieldElem> = self.slots.iter().chain(&other.slots).cloned().collect();
        let slots = t.sum.iter().map(|s| eval_table_poly(s, &inputs)).collect();
        Ok(WittVector { slots })
    }

    pub fn neg(&self) -> Self {
        if self.p() != 2 {
            return WittVector {
                slots: self.slots.iter().map(FieldElem::neg).collect(),
            };
        }
        self.neg_by_table()
    }

    /// Negation through the generated polynomials, for every p.
    pub fn neg_by_table(&self) -> Self {
        let t = table(self.p(), self.len());
        WittVector {
            slots: t.neg.iter().map(|s| eval_table_poly(s, &self.slots)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, WittError> {
        self.add(&other.neg())
    }

    /// `c·w` by double-and-add.
    pub fn scalar(&self, c: i64) -> Self {
        let mut acc = WittVector::zero(self.sig(), self.len());
        let mut base = if c < 0 { self.neg() } else { self.clone() };
        let mut k = c.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base).expect("same shape");
            }
            k >>= 1;
            if k > 0 {
                base = base.add(&base).expect("same shape");
            }
        }
        acc
    }

    /// Slotwise p-th power.
    pub fn frobenius(&self) -> Self {
        WittVector {
            slots: self.slots.iter().map(FieldElem::frobenius).collect(),
        }
    }

    /// Slotwise p-th root, if every slot is a p-th power.
    pub fn frobenius_root(&self) -> Option<Self> {
        Some(WittVector {
            slots: self
                .slots
                .iter()
                .map(FieldElem::pth_root)
                .collect::<Option<Vec<_>>>()?,
        })
    }

    /// `(0,…,0,ω_1,…,ω_m)` with `l` leading zeros.
    pub fn shift(&self, l: usize) -> Self {
        let mut slots = vec![FieldElem::zero(self.sig()); l];
        slots.extend(self.slots.iter().cloned());
        WittVector { slots }
    }

    /// Keep the first `l` slots.
    pub fn truncate(&self, l: usize) -> Result<Self, WittError> {
        if l == 0 || l > self.len() {
            return Err(WittError::TruncateTooLong {
                keep: l,
                len: self.len(),
            });
        }
        Ok(WittVector {
            slots: self.slots[..l].to_vec(),
        })
    }

    /// Preimage under [`shift`](Self::shift): drops `l` leading slots, which must be zero.
    pub fn unshift(&self, l: usize) -> Option<Self> {
        if l >= self.len() || self.slots[..l].iter().any(|s| !s.is_zero()) {
            return None;
        }
        Some(WittVector {
            slots: self.slots[l..].to_vec(),
        })
    }
}

/// Evaluate an 𝔽_p-coefficient polynomial at field elements over one common
/// denominator, so only a single normalization happens.
fn eval_table_poly(poly: &TablePoly, inputs: &[FieldElem]) -> FieldElem {
    let sig = inputs[0].sig().clone();
    let p = sig.p();
    let nv = sig.nvars();
    let live: Vec<&(Vec<u32>, u32)> = poly
        .iter()
        .filter(|(e, _)| e.iter().zip(inputs).all(|(&x, v)| x == 0 || !v.is_zero()))
        .collect();
    if live.is_empty() {
        return FieldElem::zero(&sig);
    }
    let nin = inputs.len();
    let mut maxe = vec![0u32; nin];
    for (e, _) in &live {
        for (j, &x) in e.iter().enumerate() {
            maxe[j] = maxe[j].max(x);
        }
    }
    let pows = |base: &MultiPoly, k: u32| -> Vec<MultiPoly> {
        let mut v = Vec::with_capacity(k as usize + 1);
        v.push(MultiPoly::one(nv, p));
        for i in 1..=k as usize {
            let next = v[i - 1].mul(base, p);
            v.push(next);
        }
        v
    };
    let npow: Vec<Vec<MultiPoly>> = (0..nin).map(|j| pows(inputs[j].num(), maxe[j])).collect();
    let all_poly = inputs.iter().all(FieldElem::is_polynomial);
    let dpow: Vec<Vec<MultiPoly>> = if all_poly {
        Vec::new()
    } else {
        (0..nin).map(|j| pows(inputs[j].den(), maxe[j])).collect()
    };
    let mut num = MultiPoly::zero();
    for (e, c) in live {
        let mut t = MultiPoly::constant(*c, nv, p);
        for j in 0..nin {
            if e[j] > 0 {
                t = t.mul(&npow[j][e[j] as usize], p);
            }
            if !all_poly && maxe[j] > e[j] {
                t = t.mul(&dpow[j][(maxe[j] - e[j]) as usize], p);
            }
        }
        num = num.add(&t, p);
    }
    if all_poly {
        return FieldElem::from_poly(&sig, num);
    }
    let mut den = MultiPoly::one(nv, p);
    for j in 0..nin {
        den = den.mul(&dpow[j][maxe[j] as usize], p);
    }
    let mut factors: Vec<&MultiPoly> = Vec::new();
    for (j, x) in inputs.iter().enumerate() {
        if maxe[j] > 0 && !x.den().is_one() && !factors.contains(&x.den()) {
            factors.push(x.den());
        }
    }
    FieldElem::from_fraction_over(&sig, num, den, &factors)
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.slots.iter().map(|x| x.to_string()).collect();
        write!(f, "[{}]", s.join(", "))
    }
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
