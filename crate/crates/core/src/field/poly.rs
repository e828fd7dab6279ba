//! Sparse multivariate polynomials over a prime field.
//!
//! Terms are kept sorted in descending graded-lexicographic order with no
//! stored zero coefficients, so structural equality is polynomial equality.
//! The prime is not stored; every operation that needs it takes it explicitly.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use smallvec::SmallVec;

/// Exponent vector of a monomial.
pub type Mono = SmallVec<[u32; 4]>;

/// Graded lexicographic comparison of exponent vectors.
pub fn grlex(a: &[u32], b: &[u32]) -> Ordering {
    let da: u64 = a.iter().map(|&e| e as u64).sum();
    let db: u64 = b.iter().map(|&e| e as u64).sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct OwnedKey(Mono);

impl PartialOrd for OwnedKey {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for OwnedKey {
    fn cmp(&self, other: &Self) -> Ordering {
        grlex(&self.0, &other.0)
    }
}

pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

pub(crate) fn neg_mod(a: u32, p: u32) -> u32 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn pow_mod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    r
}

/// Inverse in 𝔽_p by Fermat. `a` must be nonzero mod p.
pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a, (p - 2) as u64, p)
}

/// Reduce a signed integer into `0..p`.
pub fn reduce_int(v: i64, p: u32) -> u32 {
    v.rem_euclid(p as i64) as u32
}

#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct MultiPoly {
    terms: Vec<(Mono, u32)>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly { terms: Vec::new() }
    }

    pub fn constant(c: u32, nvars: usize, p: u32) -> Self {
        let c = c % p;
        if c == 0 {
            return Self::zero();
        }
        MultiPoly {
            terms: vec![(SmallVec::from_elem(0, nvars), c)],
        }
    }

    pub fn one(nvars: usize, p: u32) -> Self {
        Self::constant(1, nvars, p)
    }

    pub fn monomial(exps: Mono, c: u32, p: u32) -> Self {
        let c = c % p;
        if c == 0 {
            return Self::zero();
        }
        MultiPoly {
            terms: vec![(exps, c)],
        }
    }

    pub fn var(i: usize, nvars: usize, p: u32) -> Self {
        let mut e: Mono = SmallVec::from_elem(0, nvars);
        e[i] = 1;
        Self::monomial(e, 1, p)
    }

    /// Build from arbitrary (exponent, coefficient) pairs; combines like terms.
    pub fn from_terms<I: IntoIterator<Item = (Mono, u32)>>(it: I, p: u32) -> Self {
        let mut acc: BTreeMap<OwnedKey, u32> = BTreeMap::new();
        for (e, c) in it {
            let slot = acc.entry(OwnedKey(e)).or_insert(0);
            *slot = add_mod(*slot, c % p, p);
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| *c != 0)
            .map(|(k, c)| (k.0, c))
            .collect();
        MultiPoly { terms }
    }

    pub fn terms(&self) -> &[(Mono, u32)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.len() <= 1 && self.terms.iter().all(|(e, _)| e.iter().all(|&x| x == 0))
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].1 == 1 && self.terms[0].0.iter().all(|&x| x == 0)
    }

    pub fn leading(&self) -> Option<&(Mono, u32)> {
        self.terms.first()
    }

    pub fn leading_coeff(&self) -> u32 {
        self.terms.first().map(|t| t.1).unwrap_or(0)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .iter()
            .map(|(e, _)| e.iter().sum::<u32>())
            .max()
            .unwrap_or(0)
    }

    pub fn degree_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|(e, _)| e[v]).max().unwrap_or(0)
    }

    pub fn involves(&self, v: usize) -> bool {
        self.terms.iter().any(|(e, _)| e[v] > 0)
    }

    pub fn add(&self, other: &Self, p: u32) -> Self {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ea, ca) = &self.terms[i];
            let (eb, cb) = &other.terms[j];
            match grlex(ea, eb) {
                Ordering::Greater => {
                    out.push((ea.clone(), *ca));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((eb.clone(), *cb));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = add_mod(*ca, *cb, p);
                    if c != 0 {
                        out.push((ea.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        MultiPoly { terms: out }
    }

    pub fn neg(&self, p: u32) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), neg_mod(*c, p)))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self, p: u32) -> Self {
        self.add(&other.neg(p), p)
    }

    pub fn scale(&self, c: u32, p: u32) -> Self {
        let c = c % p;
        if c == 0 {
            return Self::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, x)| (e.clone(), mul_mod(*x, c, p)))
                .collect(),
        }
    }

    /// Multiply by a monomial `c * t^e`.
    pub fn mul_term(&self, e: &[u32], c: u32, p: u32) -> Self {
        let c = c % p;
        if c == 0 {
            return Self::zero();
        }
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(x, d)| {
                    let m: Mono = x.iter().zip(e).map(|(a, b)| a + b).collect();
                    (m, mul_mod(*d, c, p))
                })
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self, p: u32) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.is_one() {
            return other.clone();
        }
        if other.is_one() {
            return self.clone();
        }
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        if small.terms.len() == 1 {
            let (e, c) = &small.terms[0];
            // monomial multiplication preserves order
            return large.mul_term(e, *c, p);
        }
        let mut acc: BTreeMap<OwnedKey, u32> = BTreeMap::new();
        for (ea, ca) in &small.terms {
            for (eb, cb) in &large.terms {
                let m: Mono = ea.iter().zip(eb.iter()).map(|(a, b)| a + b).collect();
                let slot = acc.entry(OwnedKey(m)).or_insert(0);
                *slot = add_mod(*slot, mul_mod(*ca, *cb, p), p);
            }
        }
        MultiPoly {
            terms: acc
                .into_iter()
                .rev()
                .filter(|(_, c)| *c != 0)
                .map(|(k, c)| (k.0, c))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u64, nvars: usize, p: u32) -> Self {
        let mut base = self.clone();
        let mut r = Self::one(nvars, p);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base, p);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, p);
            }
        }
        r
    }

    /// The p-th power, computed as exponent scaling (coefficients are fixed by Fermat).
    pub fn frobenius(&self, p: u32) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| x * p).collect(), *c))
                .collect(),
        }
    }

    /// Inverse of [`frobenius`](Self::frobenius) when every exponent is divisible by p.
    pub fn pth_root(&self, p: u32) -> Option<Self> {
        if self.terms.iter().any(|(e, _)| e.iter().any(|x| x % p != 0)) {
            return None;
        }
        Some(MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.iter().map(|x| x / p).collect(), *c))
                .collect(),
        })
    }

    /// Make the leading coefficient 1; returns the factor that was divided out.
    pub fn monic(&self, p: u32) -> (Self, u32) {
        let lc = self.leading_coeff();
        if lc == 0 || lc == 1 {
            return (self.clone(), lc.max(1));
        }
        (self.scale(inv_mod(lc, p), p), lc)
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self, p: u32) -> Option<Self> {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if divisor.is_one() {
            return Some(self.clone());
        }
        let (le, lc) = divisor.leading().expect("nonzero");
        let lc_inv = inv_mod(*lc, p);
        if divisor.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            for (e, c) in &self.terms {
                if e.iter().zip(le.iter()).any(|(a, b)| a < b) {
                    return None;
                }
                let m: Mono = e.iter().zip(le.iter()).map(|(a, b)| a - b).collect();
                out.push((m, mul_mod(*c, lc_inv, p)));
            }
            return Some(MultiPoly { terms: out });
        }
        let mut rem = self.clone();
        let mut quot: Vec<(Mono, u32)> = Vec::new();
        while let Some((re, rc)) = rem.leading().cloned() {
            if re.iter().zip(le.iter()).any(|(a, b)| a < b) {
                return None;
            }
            let m: Mono = re.iter().zip(le.iter()).map(|(a, b)| a - b).collect();
            let c = mul_mod(rc, lc_inv, p);
            rem = rem.sub(&divisor.mul_term(&m, c, p), p);
            quot.push((m, c));
        }
        Some(MultiPoly { terms: quot })
    }

    /// Partial derivative in variable `v`.
    pub fn partial(&self, v: usize, p: u32) -> Self {
        let terms = self.terms.iter().filter(|(e, _)| e[v] % p != 0).map(|(e, c)| {
            let mut m = e.clone();
            m[v] -= 1;
            (m, mul_mod(*c, e[v] % p, p))
        });
        MultiPoly::from_terms(terms, p)
    }

    /// Split into coefficients of powers of variable `v`; index = degree in `v`.
    pub fn coeffs_in(&self, v: usize, p: u32) -> Vec<MultiPoly> {
        let d = self.degree_in(v) as usize;
        let mut buckets: Vec<Vec<(Mono, u32)>> = vec![Vec::new(); d + 1];
        for (e, c) in &self.terms {
            let mut m = e.clone();
            let k = m[v] as usize;
            m[v] = 0;
            buckets[k].push((m, *c));
        }
        buckets
            .into_iter()
            .map(|b| MultiPoly::from_terms(b, p))
            .collect()
    }

    /// Inverse of [`coeffs_in`](Self::coeffs_in).
    pub fn from_coeffs_in(coeffs: &[MultiPoly], v: usize, p: u32) -> Self {
        let mut all = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for (e, x) in &c.terms {
                let mut m = e.clone();
                m[v] += k as u32;
                all.push((m, *x));
            }
        }
        MultiPoly::from_terms(all, p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallvec::smallvec;

    const P: u32 = 3;

    fn x() -> MultiPoly {
        MultiPoly::var(0, 2, P)
    }
    fn y() -> MultiPoly {
        MultiPoly::var(1, 2, P)
    }

    #[test]
    fn grlex_orders_by_degree_first() {
        assert_eq!(grlex(&[0, 2], &[1, 0]), Ordering::Greater);
        assert_eq!(grlex(&[1, 1], &[0, 2]), Ordering::Greater);
        assert_eq!(grlex(&[1, 1], &[1, 1]), Ordering::Equal);
    }

    #[test]
    fn product_and_exact_division() {
        let a = x().add(&y(), P).add(&MultiPoly::one(2, P), P);
        let b = x().sub(&y(), P);
        let ab = a.mul(&b, P);
        assert_eq!(ab.div_exact(&a, P).unwrap(), b);
        assert_eq!(ab.div_exact(&b, P).unwrap(), a);
        assert!(a.div_exact(&b, P).is_none());
    }

    #[test]
    fn frobenius_is_cube_in_char_3() {
        let a = x().add(&MultiPoly::one(2, P), P);
        assert_eq!(a.frobenius(P), a.pow(3, 2, P));
        assert_eq!(a.frobenius(P).pth_root(P).unwrap(), a);
        assert!(a.pth_root(P).is_none());
    }

    #[test]
    fn coefficient_split_round_trips() {
        let a = MultiPoly::from_terms(
            vec![(smallvec![2, 1], 1), (smallvec![0, 3], 2), (smallvec![1, 0], 1)],
            P,
        );
        let cs = a.coeffs_in(1, P);
        assert_eq!(cs.len(), 4);
        assert_eq!(MultiPoly::from_coeffs_in(&cs, 1, P), a);
    }
}
