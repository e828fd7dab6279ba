use std::fmt;
use std::sync::Arc;

use super::gcd::gcd;
use super::poly::{reduce_int, MultiPoly};
use super::FieldError;

/// The ambient field 𝔽_p(t_1,…,t_k): characteristic and variable names.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    p: u32,
    vars: Vec<String>,
}

impl Signature {
    pub fn new(p: u32, vars: Vec<String>) -> Result<Arc<Self>, FieldError> {
        if p < 2 || !(2..p).take_while(|d| d * d <= p).all(|d| p % d != 0) {
            return Err(FieldError::NotPrime(p));
        }
        for (i, v) in vars.iter().enumerate() {
            if vars[..i].contains(v) {
                return Err(FieldError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Arc::new(Signature { p, vars }))
    }

    /// Convenience constructor for tests and generators: `vars` comma separated.
    pub fn parse_vars(p: u32, vars: &str) -> Result<Arc<Self>, FieldError> {
        let vs = vars
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(String::from)
            .collect();
        Self::new(p, vs)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "field p={} vars={}", self.p, self.vars.join(","))
    }
}

/// An element of 𝔽_p(t_1,…,t_k) as a reduced fraction with grlex-monic denominator.
#[derive(Clone)]
pub struct FieldElem {
    sig: Arc<Signature>,
    num: MultiPoly,
    den: MultiPoly,
}

impl PartialEq for FieldElem {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den && self.sig == other.sig
    }
}

impl Eq for FieldElem {}

impl std::hash::Hash for FieldElem {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl FieldElem {
    pub fn zero(sig: &Arc<Signature>) -> Self {
        FieldElem {
            sig: sig.clone(),
            num: MultiPoly::zero(),
            den: MultiPoly::one(sig.nvars(), sig.p()),
        }
    }

    pub fn one(sig: &Arc<Signature>) -> Self {
        Self::from_int(sig, 1)
    }

    pub fn from_int(sig: &Arc<Signature>, v: i64) -> Self {
        FieldElem {
            sig: sig.clone(),
            num: MultiPoly::constant(reduce_int(v, sig.p()), sig.nvars(), sig.p()),
            den: MultiPoly::one(sig.nvars(), sig.p()),
        }
    }

    pub fn var(sig: &Arc<Signature>, i: usize) -> Self {
        FieldElem {
            sig: sig.clone(),
            num: MultiPoly::var(i, sig.nvars(), sig.p()),
            den: MultiPoly::one(sig.nvars(), sig.p()),
        }
    }

    pub fn from_poly(sig: &Arc<Signature>, num: MultiPoly) -> Self {
        FieldElem {
            sig: sig.clone(),
            num,
            den: MultiPoly::one(sig.nvars(), sig.p()),
        }
    }

    /// Build `num/den` and bring it to canonical form.
    pub fn from_fraction(
        sig: &Arc<Signature>,
        num: MultiPoly,
        den: MultiPoly,
    ) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalize(sig.clone(), num, den))
    }

    /// `num/den` where `den` is a product of powers of the monic `factors`,
    /// so any cancellation happens against one of them.
    pub(crate) fn from_fraction_over(
        sig: &Arc<Signature>,
        mut num: MultiPoly,
        mut den: MultiPoly,
        factors: &[&MultiPoly],
    ) -> Self {
        let p = sig.p();
        if num.is_zero() {
            return Self::zero(sig);
        }
        for f in factors {
            loop {
                let g = gcd(&num, f, p);
                if g.is_one() {
                    break;
                }
                match (num.div_exact(&g, p), den.div_exact(&g, p)) {
                    (Some(n), Some(d)) => {
                        num = n;
                        den = d;
                    }
                    _ => return Self::normalize(sig.clone(), num, den),
                }
            }
        }
        let (den, lc) = den.monic(p);
        let num = if lc == 1 {
            num
        } else {
            num.scale(super::poly::inv_mod(lc, p), p)
        };
        FieldElem {
            sig: sig.clone(),
            num,
            den,
        }
    }

    fn normalize(sig: Arc<Signature>, num: MultiPoly, den: MultiPoly) -> Self {
        let p = sig.p();
        if num.is_zero() {
            let one = MultiPoly::one(sig.nvars(), p);
            return FieldElem {
                sig,
                num: MultiPoly::zero(),
                den: one,
            };
        }
        let (num, den) = if den.is_constant() {
            (num, den)
        } else {
            let g = gcd(&num, &den, p);
            if g.is_one() {
                (num, den)
            } else {
                (
                    num.div_exact(&g, p).expect("gcd divides"),
                    den.div_exact(&g, p).expect("gcd divides"),
                )
            }
        };
        let (den, lc) = den.monic(p);
        let num = if lc == 1 {
            num
        } else {
            num.scale(super::poly::inv_mod(lc, p), p)
        };
        FieldElem { sig, num, den }
    }

    pub fn sig(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn p(&self) -> u32 {
        self.sig.p()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    fn check_sig(&self, other: &Self) -> Result<(), FieldError> {
        if Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig {
            Ok(())
        } else {
            Err(FieldError::SignatureMismatch)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_sig(other)?;
        let p = self.p();
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.den == other.den {
            let num = self.num.add(&other.num, p);
            if self.den.is_one() {
                return Ok(FieldElem {
                    sig: self.sig.clone(),
                    num,
                    den: self.den.clone(),
                });
            }
            return Ok(Self::normalize(self.sig.clone(), num, self.den.clone()));
        }
        // Henrici: only factors of g = gcd(den_a, den_b) can cancel
        let g = gcd(&self.den, &other.den, p);
        let (ad, bd) = if g.is_one() {
            (self.den.clone(), other.den.clone())
        } else {
            (
                self.den.div_exact(&g, p).expect("gcd divides"),
                other.den.div_exact(&g, p).expect("gcd divides"),
            )
        };
        let num = self.num.mul(&bd, p).add(&other.num.mul(&ad, p), p);
        let den = ad.mul(&other.den, p);
        if num.is_zero() {
            return Ok(Self::zero(&self.sig));
        }
        if g.is_one() || gcd(&num, &g, p).is_one() {
            return Ok(FieldElem {
                sig: self.sig.clone(),
                num,
                den,
            });
        }
        Ok(Self::normalize(self.sig.clone(), num, den))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_add(&other.neg())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, FieldError> {
        self.check_sig(other)?;
        let p = self.p();
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(&self.sig));
        }
        if self.den.is_one() && other.den.is_one() {
            return Ok(FieldElem {
                sig: self.sig.clone(),
                num: self.num.mul(&other.num, p),
                den: self.den.clone(),
            });
        }
        // cross-cancel so the result is already reduced
        let g1 = gcd(&self.num, &other.den, p);
        let g2 = gcd(&other.num, &self.den, p);
        let a = self.num.div_exact(&g1, p).expect("gcd divides");
        let d = other.den.div_exact(&g1, p).expect("gcd divides");
        let c = other.num.div_exact(&g2, p).expect("gcd divides");
        let b = self.den.div_exact(&g2, p).expect("gcd divides");
        let num = a.mul(&c, p);
        let den = b.mul(&d, p);
        let (den, lc) = den.monic(p);
        let num = if lc == 1 {
            num
        } else {
            num.scale(super::poly::inv_mod(lc, p), p)
        };
        Ok(FieldElem {
            sig: self.sig.clone(),
            num,
            den,
        })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, FieldError> {
        self.try_mul(&other.inv()?)
    }

    pub fn neg(&self) -> Self {
        FieldElem {
            sig: self.sig.clone(),
            num: self.num.neg(self.p()),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let p = self.p();
        let (den, lc) = self.num.monic(p);
        let num = self.den.scale(super::poly::inv_mod(lc, p), p);
        Ok(FieldElem {
            sig: self.sig.clone(),
            num,
            den,
        })
    }

    /// `self^e`, inverting for negative exponents.
    pub fn int_pow(&self, e: i64) -> Result<Self, FieldError> {
        if e < 0 {
            return self.inv()?.int_pow(-e);
        }
        let p = self.p();
        let n = self.sig.nvars();
        Ok(FieldElem {
            sig: self.sig.clone(),
            num: self.num.pow(e as u64, n, p),
            den: self.den.pow(e as u64, n, p),
        })
    }

    /// The p-th power.
    pub fn frobenius(&self) -> Self {
        let p = self.p();
        FieldElem {
            sig: self.sig.clone(),
            num: self.num.frobenius(p),
            den: self.den.frobenius(p),
        }
    }

    /// The unique p-th root, when every exponent of the reduced numerator and
    /// denominator is divisible by p.
    pub fn pth_root(&self) -> Option<Self> {
        let p = self.p();
        Some(FieldElem {
            sig: self.sig.clone(),
            num: self.num.pth_root(p)?,
            den: self.den.pth_root(p)?,
        })
    }

    /// Partial derivative in the `v`-th variable.
    pub fn partial(&self, v: usize) -> Self {
        let p = self.p();
        let dn = self.num.partial(v, p);
        if self.den.is_one() {
            return FieldElem::from_poly(&self.sig, dn);
        }
        let dd = self.den.partial(v, p);
        let num = dn.mul(&self.den, p).sub(&self.num.mul(&dd, p), p);
        let den = self.den.mul(&self.den, p);
        Self::from_fraction_over(&self.sig, num, den, &[&self.den])
    }

    pub fn total_degree(&self) -> u32 {
        self.num.total_degree().max(self.den.total_degree())
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $f:ident) => {
        impl std::ops::$tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: &FieldElem) -> FieldElem {
                self.$f(rhs).expect(concat!("field ", stringify!($m)))
            }
        }
        impl std::ops::$tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $m(self, rhs: FieldElem) -> FieldElem {
                (&self).$f(&rhs).expect(concat!("field ", stringify!($m)))
            }
        }
    };
}

// Operator forms panic on signature mismatch or division by zero; the
// `try_*` methods report them.
forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);
forward_op!(Div, div, try_div);

impl std::ops::Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(self)
    }
}

impl std::ops::Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::neg(&self)
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn render_poly(poly: &MultiPoly, vars: &[String]) -> String {
    if poly.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (e, c)) in poly.terms().iter().enumerate() {
        if i > 0 {
            out.push('+');
        }
        let factors: Vec<String> = e
            .iter()
            .enumerate()
            .filter(|(_, &x)| x > 0)
            .map(|(v, &x)| {
                if x == 1 {
                    vars[v].clone()
                } else {
                    format!("{}^{}", vars[v], x)
                }
            })
            .collect();
        if factors.is_empty() {
            out.push_str(&c.to_string());
        } else {
            if *c != 1 {
                out.push_str(&c.to_string());
                out.push('*');
            }
            out.push_str(&factors.join("*"));
        }
    }
    out
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = render_poly(&self.num, self.sig.vars());
        if self.den.is_one() {
            f.write_str(&n)
        } else {
            let d = render_poly(&self.den, self.sig.vars());
            write!(f, "({n})/({d})")
        }
    }
}
