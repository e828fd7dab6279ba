//! Exact arithmetic in F = 𝔽_p(t_1,…,t_k) and its p-th-power structure.

mod elem;
mod expr;
mod gcd;
pub mod poly;
mod pth;

use std::cmp::Ordering;
use std::fmt;

pub use elem::{FieldElem, Signature};
pub use expr::{parse_elem, ExprError};
pub use gcd::gcd;
pub use poly::MultiPoly;
pub use pth::{
    beta_power, fp_coordinates, p_independence, universal_representation, DependenceWitness,
    PIndependence,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("elements belong to different fields")]
    SignatureMismatch,
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("variable '{0}' declared twice")]
    DuplicateVariable(String),
    #[error("zero element where a unit is required")]
    ZeroElement,
    #[error("invalid dependence witness: {0}")]
    InvalidWitness(String),
}

/// A multi-exponent `d = (d_1,…,d_n)` with every entry below `bound`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExponentIndex {
    d: Vec<u32>,
    bound: u32,
}

impl ExponentIndex {
    pub fn new(d: Vec<u32>, bound: u32) -> Option<Self> {
        if d.iter().all(|&x| x < bound) {
            Some(ExponentIndex { d, bound })
        } else {
            None
        }
    }

    pub fn zero(n: usize, bound: u32) -> Self {
        ExponentIndex {
            d: vec![0; n],
            bound,
        }
    }

    pub fn entries(&self) -> &[u32] {
        &self.d
    }

    pub fn bound(&self) -> u32 {
        self.bound
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.d.iter().all(|&x| x == 0)
    }

    /// Every index in `{0,…,bound-1}^n`, ascending grlex.
    pub fn all(n: usize, bound: u32) -> Vec<ExponentIndex> {
        let mut out = vec![Vec::new()];
        for _ in 0..n {
            out = out
                .into_iter()
                .flat_map(|v: Vec<u32>| {
                    (0..bound).map(move |x| {
                        let mut w = v.clone();
                        w.push(x);
                        w
                    })
                })
                .collect();
        }
        let mut idx: Vec<ExponentIndex> = out
            .into_iter()
            .map(|d| ExponentIndex { d, bound })
            .collect();
        idx.sort();
        idx
    }

    /// Nonzero indices of `{0,…,bound-1}^n`, ascending grlex.
    pub fn nonzero(n: usize, bound: u32) -> Vec<ExponentIndex> {
        Self::all(n, bound)
            .into_iter()
            .filter(|d| !d.is_zero())
            .collect()
    }
}

impl PartialOrd for ExponentIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExponentIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        poly::grlex(&self.d, &other.d).then(self.bound.cmp(&other.bound))
    }
}

impl fmt::Debug for ExponentIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.d)
    }
}

impl fmt::Display for ExponentIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.d.iter().map(|x| x.to_string()).collect();
        f.write_str(&s.join(" "))
    }
}
