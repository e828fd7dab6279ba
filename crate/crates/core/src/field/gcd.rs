//! Multivariate gcd over 𝔽_p by recursive content / primitive pseudo-remainder sequences.

use super::poly::{inv_mod, mul_mod, Mono, MultiPoly};

/// Monic gcd of two polynomials. `gcd(0, 0) = 0`.
pub fn gcd(a: &MultiPoly, b: &MultiPoly, p: u32) -> MultiPoly {
    if a.is_zero() {
        return b.monic(p).0;
    }
    if b.is_zero() {
        return a.monic(p).0;
    }
    if a.is_constant() || b.is_constant() {
        let nvars = a.terms()[0].0.len();
        return MultiPoly::one(nvars, p);
    }
    if a == b {
        return a.monic(p).0;
    }
    let nvars = a.terms()[0].0.len();
    let vars: Vec<usize> = (0..nvars).filter(|&v| a.involves(v) || b.involves(v)).collect();
    let Some(&v) = vars.last() else {
        return MultiPoly::one(nvars, p);
    };
    if vars.len() == 1 {
        return univariate_gcd(a, b, v, nvars, p);
    }
    // a polynomial free of `v` acts as a coefficient
    if !b.involves(v) {
        let ca = content(a, v, p);
        return gcd(&ca, b, p);
    }
    if !a.involves(v) {
        let cb = content(b, v, p);
        return gcd(a, &cb, p);
    }
    let ca = content(a, v, p);
    let cb = content(b, v, p);
    let c = gcd(&ca, &cb, p);
    let pa = a.div_exact(&ca, p).expect("content divides");
    let pb = b.div_exact(&cb, p).expect("content divides");
    let g = primitive_prs(pa, pb, v, p);
    c.mul(&g, p).monic(p).0
}

/// Dense Euclid when both inputs only involve `v`.
fn univariate_gcd(a: &MultiPoly, b: &MultiPoly, v: usize, nvars: usize, p: u32) -> MultiPoly {
    let dense = |f: &MultiPoly| {
        let mut c = vec![0u32; f.degree_in(v) as usize + 1];
        for (e, x) in f.terms() {
            c[e[v] as usize] = *x;
        }
        c
    };
    let (mut a, mut b) = (dense(a), dense(b));
    while b.iter().any(|&x| x != 0) {
        while b.last() == Some(&0) {
            b.pop();
        }
        let lb = inv_mod(*b.last().expect("nonzero"), p);
        while a.len() >= b.len() {
            let lead = mul_mod(*a.last().expect("nonempty"), lb, p);
            let shift = a.len() - b.len();
            if lead != 0 {
                for (k, &bk) in b.iter().enumerate() {
                    let t = mul_mod(lead, bk, p);
                    a[k + shift] = (a[k + shift] + p - t) % p;
                }
            }
            a.pop();
        }
        while a.last() == Some(&0) {
            a.pop();
        }
        std::mem::swap(&mut a, &mut b);
    }
    let terms = a.iter().enumerate().filter(|(_, &c)| c != 0).map(|(d, &c)| {
        let mut m: Mono = std::iter::repeat(0).take(nvars).collect();
        m[v] = d as u32;
        (m, c)
    });
    MultiPoly::from_terms(terms, p).monic(p).0
}

/// gcd of the coefficients of `a` viewed as a polynomial in `v`.
fn content(a: &MultiPoly, v: usize, p: u32) -> MultiPoly {
    let mut g = MultiPoly::zero();
    for c in a.coeffs_in(v, p).iter().filter(|c| !c.is_zero()) {
        g = gcd(&g, c, p);
        if g.is_one() {
            break;
        }
    }
    g
}

fn primitive_part(a: &MultiPoly, v: usize, p: u32) -> MultiPoly {
    if a.is_zero() {
        return a.clone();
    }
    let c = content(a, v, p);
    a.div_exact(&c, p).expect("content divides").monic(p).0
}

fn primitive_prs(a: MultiPoly, b: MultiPoly, v: usize, p: u32) -> MultiPoly {
    let (mut a, mut b) = if a.degree_in(v) >= b.degree_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    while !b.is_zero() {
        if b.degree_in(v) == 0 {
            // b is a nonzero v-free primitive polynomial, so the v-gcd is trivial
            let nvars = b.terms()[0].0.len();
            return MultiPoly::one(nvars, p);
        }
        let r = pseudo_rem(&a, &b, v, p);
        a = b;
        b = primitive_part(&r, v, p);
    }
    primitive_part(&a, v, p)
}

fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, v: usize, p: u32) -> MultiPoly {
    let bc = b.coeffs_in(v, p);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    let mut r = a.coeffs_in(v, p);
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.mul(&lb, p);
        }
        for (k, bk) in bc.iter().enumerate() {
            let t = bk.mul(&lr, p);
            r[k + shift] = r[k + shift].sub(&t, p);
        }
        while r.last().is_some_and(|c| c.is_zero()) {
            r.pop();
        }
    }
    MultiPoly::from_coeffs_in(&r, v, p)
}
