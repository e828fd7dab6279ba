use std::collections::BTreeMap;
use std::sync::Arc;

use symlen::decompose::{
    rewrite_first_slot, telescope, theorem3, theorem4, DecomposeError, PlantedLevels,
};
use symlen::field::{parse_elem, ExponentIndex, FieldElem, Signature};
use symlen::symbol::{verify, ASWitness, Symbol, SymbolSum};
use symlen::witt::WittVector;

fn el(sig: &Arc<Signature>, s: &str) -> FieldElem {
    parse_elem(sig, s).unwrap()
}

fn sym(sig: &Arc<Signature>, w: &[&str], slots: &[&str]) -> Symbol {
    Symbol::new(
        WittVector::new(w.iter().map(|s| el(sig, s)).collect()).unwrap(),
        slots.iter().map(|s| el(sig, s)).collect(),
    )
    .unwrap()
}

fn wit(sig: &Arc<Signature>, lambda: &str, z: &[(&[u32], &str)]) -> ASWitness {
    let p = sig.p();
    ASWitness {
        lambda: el(sig, lambda),
        z: z.iter()
            .map(|(d, v)| (ExponentIndex::new(d.to_vec(), p).unwrap(), el(sig, v)))
            .collect::<BTreeMap<_, _>>(),
    }
}

#[test]
fn first_slot_identity_exponent_is_a_no_op() {
    let sig = Signature::parse_vars(2, "x,y").unwrap();
    let s = sym(&sig, &["x", "y"], &["x", "y"]);
    let (out, cert) = rewrite_first_slot(&s, &[1, 0]).unwrap();
    assert_eq!(out, s);
    assert!(cert.steps.is_empty());
    verify(&cert).unwrap();
}

#[test]
fn first_slot_monomials() {
    let sig = Signature::parse_vars(2, "x,y").unwrap();
    let s = sym(&sig, &["x+y", "1"], &["x", "y"]);
    for (d, want) in [(vec![1, 1], "x*y"), (vec![2, 1], "x^2*y"), (vec![0, 3], "y^3")] {
        let (out, cert) = rewrite_first_slot(&s, &d).unwrap();
        assert_eq!(out.slot(0), &el(&sig, want), "{d:?}");
        assert_eq!(out.w(), s.w());
        verify(&cert).unwrap();
        assert_eq!(cert.end, SymbolSum::from_symbols([out]));
    }
    assert_eq!(
        rewrite_first_slot(&s, &[2, 4]).unwrap_err(),
        DecomposeError::NoCoprimeEntry
    );
}

#[test]
fn first_slot_three_slots_odd_p() {
    let sig = Signature::parse_vars(3, "x,y,z").unwrap();
    let s = sym(&sig, &["x", "z"], &["x+1", "y", "z"]);
    for d in [vec![0, 2, 1], vec![2, 2, 2], vec![3, 0, 1]] {
        let (out, cert) = rewrite_first_slot(&s, &d).unwrap();
        let want = &(&el(&sig, "x+1").int_pow(d[0] as i64).unwrap()
            * &el(&sig, "y").int_pow(d[1] as i64).unwrap())
            * &el(&sig, "z").int_pow(d[2] as i64).unwrap();
        assert_eq!(out.slot(0), &want);
        verify(&cert).unwrap();
    }
}

#[test]
fn one_slot_rescales_the_witt_vector() {
    let sig = Signature::parse_vars(3, "t").unwrap();
    let s = sym(&sig, &["t", "1"], &["t+1"]);
    let (out, cert) = rewrite_first_slot(&s, &[2]).unwrap();
    assert_eq!(out.slot(0), &el(&sig, "(t+1)^2"));
    // 2·5 ≡ 1 mod 9
    assert_eq!(out.w(), &s.w().scalar(5));
    verify(&cert).unwrap();
}

fn check(dec: &symlen::decompose::Decomposition, m: usize) {
    verify(&dec.certificate).unwrap();
    assert!(dec.within_bound(), "{} > {}", dec.count(), dec.bound);
    for o in &dec.outputs {
        assert_eq!(o.m(), m - 1);
    }
    let lifted = SymbolSum::from_symbols(dec.outputs.iter().map(Symbol::lift));
    assert_eq!(dec.certificate.end, lifted);
}

#[test]
fn single_symbol_two_slots() {
    let sig = Signature::parse_vars(2, "x,y").unwrap();
    // α = y² + y + x
    let s = sym(&sig, &["y^2+y+x", "x+1"], &["x", "y"]);
    let w = wit(&sig, "y", &[(&[1, 0], "1")]);
    let dec = theorem3(&s, &w).unwrap();
    check(&dec, 2);
    assert_eq!(dec.bound, 4);

    let s = sym(&sig, &["x^3*y+y/x^2", "x"], &["x", "y+1"]);
    let w = wit(&sig, "0", &[(&[1, 1], "1/x"), (&[0, 1], "x^2"), (&[1, 0], "x")]);
    let s = s.with_w(
        WittVector::new(vec![w.evaluate(s.slots()).unwrap(), el(&sig, "x")]).unwrap(),
    );
    let dec = theorem3(&s, &w).unwrap();
    check(&dec, 2);
}

#[test]
fn single_symbol_one_slot_and_longer_witt() {
    let sig = Signature::parse_vars(3, "t").unwrap();
    let w = wit(&sig, "t+1", &[(&[2], "t"), (&[1], "1")]);
    let beta = el(&sig, "t^2+1");
    let alpha = w.evaluate(&[beta.clone()]).unwrap();
    let s = Symbol::new(
        WittVector::new(vec![alpha, el(&sig, "t"), el(&sig, "1")]).unwrap(),
        vec![beta],
    )
    .unwrap();
    let dec = theorem3(&s, &w).unwrap();
    check(&dec, 3);
    assert_eq!(dec.bound, 3);
}

#[test]
fn single_symbol_rejects_bad_witness() {
    let sig = Signature::parse_vars(2, "x,y").unwrap();
    let s = sym(&sig, &["y^2+y+x+1", "x+1"], &["x", "y"]);
    let w = wit(&sig, "y", &[(&[1, 0], "1")]);
    assert!(matches!(
        theorem3(&s, &w),
        Err(DecomposeError::WitnessRejected(_))
    ));
    let short = sym(&sig, &["x"], &["x", "y"]);
    assert_eq!(
        theorem3(&short, &ASWitness::trivial(&sig)).unwrap_err(),
        DecomposeError::LengthTooShort
    );
}

#[test]
fn degree_two_sum_of_two() {
    let sig = Signature::parse_vars(2, "x,y").unwrap();
    // level 2: α_2 = x·y (z_(1,1) = 1); its tail feeds −x·y into level 1
    let t2 = sym(&sig, &["x*y", "y"], &["y"]);
    let t1 = sym(&sig, &["x^2+x+x*y", "1"], &["x"]);
    let mut planted = PlantedLevels::default();
    planted.levels.insert(2, wit(&sig, "0", &[(&[1, 1], "1")]));
    planted.levels.insert(1, wit(&sig, "x", &[]));
    let dec = theorem4(&[t1, t2], &planted).unwrap();
    check(&dec, 2);
    assert_eq!(dec.bound, 5);
}

#[test]
fn degree_two_reports_missing_level() {
    let sig = Signature::parse_vars(2, "x,y").unwrap();
    let t2 = sym(&sig, &["x*y", "y"], &["y"]);
    let t1 = sym(&sig, &["x^2+x+x*y", "1"], &["x"]);
    let mut planted = PlantedLevels::default();
    planted.levels.insert(2, wit(&sig, "0", &[(&[1, 1], "1")]));
    assert!(matches!(
        theorem4(&[t1, t2], &planted),
        Err(DecomposeError::ProviderFailed { level: 1, .. })
    ));
}

#[test]
fn telescope_lines_verify() {
    let sig = Signature::parse_vars(2, "x,y,s").unwrap();
    let a = sym(&sig, &["x", "y"], &["x", "y"]);
    let b = sym(&sig, &["x+1", "s"], &["y", "x*s"]);
    let (lines, cert) = telescope(&a, &b, &[el(&sig, "s")]).unwrap();
    assert_eq!(lines.len(), 4);
    verify(&cert).unwrap();
    assert_eq!(lines[3].w(), &a.w().sub(b.w()).unwrap());
}
