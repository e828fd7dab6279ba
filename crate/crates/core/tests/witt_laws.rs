use std::sync::Arc;

use proptest::prelude::*;
use symlen::field::{FieldElem, MultiPoly, Signature};
use symlen::witt::{generate_table, WittVector};

// Witt vectors with 𝔽_p entries form W_m(𝔽_p) = ℤ/p^m, and (a_0,…,a_{m-1})
// corresponds to Σ τ(a_i) p^i where τ is the Teichmüller lift a^{p^{m-1}}.
fn teich(a: u64, p: u64, m: u32) -> u64 {
    let modulus = p.pow(m);
    let mut r = 1u64;
    for _ in 0..p.pow(m - 1) {
        r = r * a % modulus;
    }
    if a == 0 {
        0
    } else {
        r
    }
}

fn to_int(v: &[u64], p: u64, m: u32) -> u64 {
    let modulus = p.pow(m);
    v.iter()
        .enumerate()
        .map(|(i, &a)| teich(a, p, m) * p.pow(i as u32) % modulus)
        .sum::<u64>()
        % modulus
}

fn consts(sig: &Arc<Signature>, v: &[u64]) -> WittVector {
    WittVector::new(v.iter().map(|&a| FieldElem::from_int(sig, a as i64)).collect()).unwrap()
}

fn read_consts(w: &WittVector) -> Vec<u64> {
    w.slots()
        .iter()
        .map(|s| {
            assert!(s.is_polynomial() && s.num().is_constant());
            s.num().terms().first().map_or(0, |t| t.1 as u64)
        })
        .collect()
}

#[test]
fn constant_vectors_add_like_p_adic_integers() {
    for (p, m) in [(2u64, 2u32), (2, 3), (3, 2), (5, 2), (3, 3)] {
        let sig = Signature::parse_vars(p as u32, "t").unwrap();
        let all: Vec<Vec<u64>> = (0..p.pow(m))
            .map(|mut k| {
                (0..m)
                    .map(|_| {
                        let d = k % p;
                        k /= p;
                        d
                    })
                    .collect()
            })
            .collect();
        for a in &all {
            for b in &all {
                let s = consts(&sig, a).add(&consts(&sig, b)).unwrap();
                assert_eq!(
                    to_int(&read_consts(&s), p, m),
                    (to_int(a, p, m) + to_int(b, p, m)) % p.pow(m),
                    "p={p} m={m} a={a:?} b={b:?}"
                );
            }
            let n = consts(&sig, a).neg_by_table();
            assert_eq!(
                (to_int(&read_consts(&n), p, m) + to_int(a, p, m)) % p.pow(m),
                0
            );
        }
    }
}

#[test]
fn tables_generate_for_desk_parameters() {
    for (p, m) in [(2, 2), (2, 3), (3, 2), (5, 2), (2, 4), (3, 3)] {
        let t = generate_table(p, m).unwrap();
        assert_eq!(t.sum.len(), m);
        assert_eq!(t.neg.len(), m);
    }
}

fn small_poly(p: u32) -> impl Strategy<Value = Vec<(u32, u32, u32)>> {
    prop::collection::vec((0..3u32, 0..3u32, 1..p), 0..3)
}

fn elem(sig: &Arc<Signature>, num: &[(u32, u32, u32)], den: &[(u32, u32, u32)]) -> FieldElem {
    let p = sig.p();
    let mk = |t: &[(u32, u32, u32)]| {
        MultiPoly::from_terms(
            t.iter().map(|&(a, b, c)| ([a, b].into_iter().collect(), c)),
            p,
        )
    };
    let d = mk(den).add(&MultiPoly::one(2, p), p);
    if d.is_zero() {
        return FieldElem::from_poly(sig, mk(num));
    }
    FieldElem::from_fraction(sig, mk(num), d).unwrap()
}

fn vector(p: u32, m: usize) -> impl Strategy<Value = Vec<(Vec<(u32, u32, u32)>, Vec<(u32, u32, u32)>)>> {
    prop::collection::vec((small_poly(p), small_poly(p)), m)
}

fn build(sig: &Arc<Signature>, raw: &[(Vec<(u32, u32, u32)>, Vec<(u32, u32, u32)>)]) -> WittVector {
    WittVector::new(raw.iter().map(|(n, d)| elem(sig, n, d)).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn group_laws_p2_m2(a in vector(2, 2), b in vector(2, 2), c in vector(2, 2)) {
        check_laws(2, &a, &b, &c);
    }

    #[test]
    fn group_laws_p2_m3(a in vector(2, 3), b in vector(2, 3), c in vector(2, 3)) {
        check_laws(2, &a, &b, &c);
    }

    #[test]
    fn group_laws_p3_m2(a in vector(3, 2), b in vector(3, 2), c in vector(3, 2)) {
        check_laws(3, &a, &b, &c);
    }
}

type Raw = [(Vec<(u32, u32, u32)>, Vec<(u32, u32, u32)>)];

fn check_laws(p: u32, a: &Raw, b: &Raw, c: &Raw) {
    let sig = Signature::parse_vars(p, "x,y").unwrap();
    let (a, b, c) = (build(&sig, a), build(&sig, b), build(&sig, c));
    let m = a.len();
    let ab = a.add(&b).unwrap();
    assert_eq!(ab, b.add(&a).unwrap());
    assert_eq!(ab.add(&c).unwrap(), a.add(&b.add(&c).unwrap()).unwrap());
    assert_eq!(a.add(&WittVector::zero(&sig, m)).unwrap(), a);
    assert!(a.add(&a.neg()).unwrap().is_zero());
    assert_eq!(a.neg(), a.neg_by_table());
    assert_eq!(ab.slot(0), &(a.slot(0) + b.slot(0)));
    assert_eq!(ab.frobenius(), a.frobenius().add(&b.frobenius()).unwrap());
    assert!(a.scalar((p as i64).pow(m as u32)).is_zero());
    let x = WittVector::constant(a.slot(0), m);
    let px = x.scalar(p as i64);
    assert!(px.slot(0).is_zero());
    assert_eq!(px.slot(1), &a.slot(0).frobenius());
}
