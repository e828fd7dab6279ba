//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use symlen::decompose::{theorem3, theorem4, theorem5, DecomposeError, Decomposition};
use symlen::field::{
    beta_power, p_independence, ExponentIndex, FieldElem, MultiPoly, PIndependence, Signature,
};
use symlen::oracle::{
    candidates, gen_t3, gen_t4, gen_t5, search_as_witness, LevelSearch, SearchBounds,
};
use symlen::symbol::{
    check_as_witness, verify, witness_from_dependence, ASWitness, Certificate, Location, Move,
    Symbol, SymbolSum, Term,
};
use symlen::witt::{generate_table, WittVector};

// pinned limits
const C1_LIMIT: Duration = Duration::from_secs(5);
const C2_LIMIT: Duration = Duration::from_secs(1);
const C3_LIMIT: Duration = Duration::from_secs(60);
const C4_LIMIT: Duration = Duration::from_secs(600);
const C5_LIMIT: Duration = Duration::from_secs(300);
const C7_LIMIT: Duration = Duration::from_secs(10);
const C8_LIMIT: Duration = Duration::from_secs(300);
const C1_TRIPLES: usize = 1000;
const C1_TORSION: usize = 100;
const C2_VECTORS: usize = 100;
const C3_PER_CONFIG: u64 = 100;
const C4_R2: usize = 25;
const C4_R3: usize = 10;
/// Regeneration attempts allowed per requested instance before giving up.
const C4_MAX_TRIES: u64 = 20;
const C5_PER_N: u64 = 25;
const C6_MUTATIONS: usize = 600;
const C7_PAIRS: usize = 100;
const C8_INSTANCES: usize = 50;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn random_elem(rng: &mut ChaCha8Rng, sig: &Arc<Signature>, deg: u32, fraction: bool) -> FieldElem {
    let poly = |rng: &mut ChaCha8Rng| {
        let p = sig.p();
        let k = sig.nvars();
        let terms: Vec<_> = (0..4)
            .map(|_| {
                let mut e: Vec<u32> = vec![0; k];
                let mut left = rng.gen_range(0..=deg);
                for x in e.iter_mut() {
                    let t = rng.gen_range(0..=left);
                    *x = t;
                    left -= t;
                }
                (e.into_iter().collect(), rng.gen_range(0..p))
            })
            .collect();
        FieldElem::from_poly(sig, MultiPoly::from_terms(terms, p))
    };
    let num = poly(rng);
    if !fraction {
        return num;
    }
    loop {
        let den = poly(rng);
        if !den.is_zero() {
            return &num / &den;
        }
    }
}

fn random_witt(rng: &mut ChaCha8Rng, sig: &Arc<Signature>, m: usize) -> WittVector {
    let slots = (0..m)
        .map(|_| {
            let frac = rng.gen_bool(0.25);
            random_elem(rng, sig, 2, frac)
        })
        .collect();
    WittVector::new(slots).unwrap()
}

fn criterion1() -> Outcome {
    let configs = [(2u32, 2usize), (2, 3), (3, 2), (5, 2)];
    for &(p, m) in &configs {
        if generate_table(p, m).is_err() {
            return outcome(false, format!("table ({p},{m}) not integral"));
        }
    }
    let sig = Signature::parse_vars(2, "a,b").unwrap();
    let (a0, a1, b0, b1) = (
        FieldElem::var(&sig, 0),
        FieldElem::from_int(&sig, 1),
        FieldElem::var(&sig, 1),
        &FieldElem::var(&sig, 0) * &FieldElem::var(&sig, 1),
    );
    let s = WittVector::new(vec![a0.clone(), a1.clone()])
        .unwrap()
        .add(&WittVector::new(vec![b0.clone(), b1.clone()]).unwrap())
        .unwrap();
    let want = vec![&a0 + &b0, &(&a1 + &b1) + &(&a0 * &b0)];
    if s.slots() != want.as_slice() {
        return outcome(false, format!("(2,2) sum gave {s}"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let per = C1_TRIPLES / configs.len();
    for &(p, m) in &configs {
        let sig = Signature::parse_vars(p, "x,y").unwrap();
        for _ in 0..per {
            let (a, b, c) = (
                random_witt(&mut rng, &sig, m),
                random_witt(&mut rng, &sig, m),
                random_witt(&mut rng, &sig, m),
            );
            let ab = a.add(&b).unwrap();
            let ok = ab == b.add(&a).unwrap()
                && ab.add(&c).unwrap() == a.add(&b.add(&c).unwrap()).unwrap()
                && a.add(&WittVector::zero(&sig, m)).unwrap() == a
                && a.add(&a.neg()).unwrap().is_zero();
            if !ok {
                return outcome(false, format!("group law fails at ({p},{m}) on {a}, {b}, {c}"));
            }
        }
        let pm = (p as i64).pow(m as u32);
        for _ in 0..C1_TORSION / configs.len() {
            let w = random_witt(&mut rng, &sig, m);
            if !w.scalar(pm).is_zero() {
                return outcome(false, format!("p^m·w ≠ 0 at ({p},{m}) for {w}"));
            }
        }
    }
    outcome(
        true,
        format!("4 tables, {C1_TRIPLES} triples, {C1_TORSION} torsion checks"),
    )
}

fn criterion2() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for &(p, m) in &[(2u32, 3usize), (3, 2), (5, 3)] {
        let sig = Signature::parse_vars(p, "x,y").unwrap();
        for l in [1, m - 1] {
            for _ in 0..C2_VECTORS / 3 + 1 {
                let w = random_witt(&mut rng, &sig, m - l);
                let v = w.shift(l);
                if v.len() != m || !v.truncate(l).unwrap().is_zero() {
                    return outcome(false, format!("truncate∘shift ≠ 0 at ({p},{m}), ℓ={l}"));
                }
                if v.unshift(l).as_ref() != Some(&w) {
                    return outcome(false, format!("no preimage at ({p},{m}), ℓ={l}"));
                }
                let u = random_witt(&mut rng, &sig, m);
                if u.truncate(l).unwrap().is_zero() != u.unshift(l).is_some() {
                    return outcome(false, "preimage exists off the kernel");
                }
                checked += 1;
            }
        }
    }
    outcome(true, format!("{checked} vectors, ℓ ∈ {{1, m−1}}"))
}

fn check_dec(dec: &Decomposition, m: usize) -> Result<(), String> {
    verify(&dec.certificate).map_err(|e| e.to_string())?;
    if !dec.within_bound() {
        return Err(format!("count {} above bound {}", dec.count(), dec.bound));
    }
    if dec.outputs.iter().any(|o| o.m() != m - 1) {
        return Err("output of the wrong Witt length".into());
    }
    if dec.certificate.end != SymbolSum::from_symbols(dec.outputs.iter().map(Symbol::lift)) {
        return Err("certificate does not end at the lifted outputs".into());
    }
    Ok(())
}

fn criterion3(pool: &mut Vec<Certificate>) -> Outcome {
    let configs = [(2u32, 2usize, 1usize), (2, 2, 2), (3, 2, 1), (3, 2, 2), (2, 3, 2)];
    let mut max = BTreeMap::new();
    for &(p, m, n) in &configs {
        for seed in 0..C3_PER_CONFIG {
            let (s, w) = gen_t3(p, m, n, 2, seed, 2).unwrap();
            let dec = match theorem3(&s, &w) {
                Ok(d) => d,
                Err(e) => return outcome(false, format!("({p},{m},{n}) seed {seed}: {e}")),
            };
            if let Err(e) = check_dec(&dec, m) {
                return outcome(false, format!("({p},{m},{n}) seed {seed}: {e}"));
            }
            let e = max.entry((p, m, n)).or_insert(0);
            *e = (*e).max(dec.count());
            if seed % 25 == 0 {
                pool.push(dec.certificate);
            }
        }
    }
    let detail: Vec<String> = max
        .iter()
        .map(|((p, m, n), c)| format!("({p},{m},{n}) max {c} ≤ {}", p.pow(*n as u32)))
        .collect();
    outcome(true, format!("{} instances; {}", 5 * C3_PER_CONFIG, detail.join(", ")))
}

fn criterion4(pool: &mut Vec<Certificate>) -> Outcome {
    let bounds = SearchBounds::new(1, 3);
    let mut regenerated = 0u64;
    let mut attempts = 0u64;
    let mut report = Vec::new();
    for &(r, wanted, bound) in &[(2usize, C4_R2, 5usize), (3, C4_R3, 10)] {
        let mut done = 0;
        let mut seed = 1000 * r as u64;
        let mut max = 0;
        while done < wanted {
            if attempts > C4_MAX_TRIES * (C4_R2 + C4_R3) as u64 {
                return outcome(false, "too many regenerations");
            }
            attempts += 1;
            let inst = gen_t4(2, 2, r, 2, seed, 1).unwrap();
            seed += 1;
            let provider = LevelSearch::new(bounds, inst.top_only());
            match theorem4(&inst.pairs, &provider) {
                Ok(dec) => {
                    if let Err(e) = check_dec(&dec, 2) {
                        return outcome(false, format!("r={r} seed {}: {e}", seed - 1));
                    }
                    if dec.count() > bound {
                        return outcome(false, format!("r={r}: count {}", dec.count()));
                    }
                    max = max.max(dec.count());
                    done += 1;
                    if done % 5 == 0 {
                        pool.push(dec.certificate);
                    }
                }
                Err(DecomposeError::ProviderFailed { .. }) => regenerated += 1,
                Err(e) => return outcome(false, format!("r={r} seed {}: {e}", seed - 1)),
            }
        }
        report.push(format!("r={r}: {wanted} instances, max {max} ≤ {bound}"));
    }
    outcome(
        true,
        format!(
            "{}; regenerated {regenerated}/{attempts} ({:.1}%)",
            report.join("; "),
            100.0 * regenerated as f64 / attempts as f64
        ),
    )
}

fn criterion5(pool: &mut Vec<Certificate>) -> Outcome {
    let mut report = Vec::new();
    for &(n, bound) in &[(1usize, 6usize), (2, 20)] {
        let mut max = 0;
        for seed in 0..C5_PER_N {
            let t = gen_t5(2, n, 2, seed, 2).unwrap();
            let dec = match theorem5(&t.a, &t.b, &t.chain) {
                Ok(d) => d,
                Err(e) => return outcome(false, format!("n={n} seed {seed}: {e}")),
            };
            if let Err(e) = check_dec(&dec, 2) {
                return outcome(false, format!("n={n} seed {seed}: {e}"));
            }
            if dec.count() > bound || dec.bound != bound as u64 {
                return outcome(false, format!("n={n}: count {} bound {}", dec.count(), dec.bound));
            }
            max = max.max(dec.count());
            if seed % 5 == 0 {
                pool.push(dec.certificate);
            }
        }
        report.push(format!("n={n}: {C5_PER_N} instances, max {max} ≤ {bound}"));
    }
    outcome(true, report.join("; "))
}

// ---- criterion 6 ----

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Site {
    /// A Witt slot or field slot of a term in a step's result.
    Result,
    /// A field entry carried by the move itself.
    Payload,
    /// A term index of the move.
    Index,
}

fn bump_witt(w: &WittVector, s: usize) -> WittVector {
    let mut slots = w.slots().to_vec();
    slots[s] = &slots[s] + &FieldElem::one(w.sig());
    WittVector::new(slots).unwrap()
}

fn bump_symbol(rng: &mut ChaCha8Rng, sym: &Symbol) -> Symbol {
    if rng.gen_bool(0.5) {
        let s = rng.gen_range(0..sym.m());
        sym.with_w(bump_witt(sym.w(), s))
    } else {
        // multiply by a variable: stays nonzero, always changes the value
        let s = rng.gen_range(0..sym.n());
        let t = FieldElem::var(sym.sig(), 0);
        sym.with_slot(s, sym.slot(s) * &t).unwrap()
    }
}

fn mutate_payload(rng: &mut ChaCha8Rng, mv: &Move) -> Option<Move> {
    let t = |x: &FieldElem| x * &FieldElem::var(x.sig(), 0);
    Some(match mv {
        Move::WittSplit { i, part } => Move::WittSplit {
            i: *i,
            part: bump_witt(part, rng.gen_range(0..part.len())),
        },
        Move::SlotSplit { i, s, a, b } => {
            if rng.gen_bool(0.5) {
                Move::SlotSplit { i: *i, s: *s, a: t(a), b: b.clone() }
            } else {
                Move::SlotSplit { i: *i, s: *s, a: a.clone(), b: t(b) }
            }
        }
        Move::WittUneval { i, c, w } => Move::WittUneval {
            i: *i,
            c: *c,
            w: bump_witt(w, rng.gen_range(0..w.len())),
        },
        Move::RepeatInsert { at, term } => Move::RepeatInsert {
            at: *at,
            term: Term::new(term.coef(), bump_symbol(rng, term.sym())).unwrap(),
        },
        Move::ZeroInsert { at, term } => Move::ZeroInsert {
            at: *at,
            term: Term::new(term.coef(), bump_symbol(rng, term.sym())).unwrap(),
        },
        _ => return None,
    })
}

fn mutate_index(mv: &Move) -> Move {
    match mv.clone() {
        Move::WittMerge { i, j } => Move::WittMerge { i, j: j + 1 },
        Move::SlotMerge { i, j, s } => Move::SlotMerge { i, j: j + 1, s },
        Move::TermMove { from, to } => Move::TermMove { from: from + 1, to },
        other => other.shifted(1),
    }
}

fn criterion6(pool: &[Certificate]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    let mut false_accepts = 0;
    let mut unlocated = 0;
    let mut total = 0;
    while total < C6_MUTATIONS {
        let cert = &pool[rng.gen_range(0..pool.len())];
        if cert.steps.is_empty() {
            continue;
        }
        let k = rng.gen_range(0..cert.steps.len());
        let site = match rng.gen_range(0..10) {
            0..=4 => Site::Result,
            5..=7 => Site::Payload,
            _ => Site::Index,
        };
        let mut bad = cert.clone();
        match site {
            Site::Result => {
                let terms = bad.steps[k].result.terms().to_vec();
                if terms.is_empty() {
                    continue;
                }
                let q = rng.gen_range(0..terms.len());
                let mut t2 = terms.clone();
                t2[q] = Term::new(terms[q].coef(), bump_symbol(&mut rng, terms[q].sym())).unwrap();
                bad.steps[k].result = SymbolSum::new(t2);
                if k + 1 == bad.steps.len() {
                    bad.end = bad.steps[k].result.clone();
                }
            }
            Site::Payload => match mutate_payload(&mut rng, &bad.steps[k].mv) {
                Some(mv) => bad.steps[k].mv = mv,
                None => continue,
            },
            Site::Index => bad.steps[k].mv = mutate_index(&bad.steps[k].mv),
        }
        total += 1;
        let name = match site {
            Site::Result => "result",
            Site::Payload => "payload",
            Site::Index => "index",
        };
        let entry = counts.entry(name).or_default();
        entry.0 += 1;
        match verify(&bad) {
            Ok(()) => {
                if site != Site::Index {
                    false_accepts += 1;
                }
            }
            Err(e) => {
                entry.1 += 1;
                if !matches!(e.location, Location::Step(_)) {
                    unlocated += 1;
                }
            }
        }
    }
    let detail: Vec<String> = counts
        .iter()
        .map(|(k, (n, rej))| format!("{k} {rej}/{n} rejected"))
        .collect();
    outcome(
        false_accepts == 0 && unlocated == 0 && total >= 500,
        format!(
            "{total} mutations over {} certificates; {}; false accepts {false_accepts}; without step index {unlocated}",
            pool.len(),
            detail.join(", ")
        ),
    )
}

fn criterion7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < C7_PAIRS {
        let p = [2u32, 3, 5][done % 3];
        let n = 1 + done % 3;
        let sig = Signature::parse_vars(p, "x,y").unwrap();
        let mut betas: Vec<FieldElem> = (0..n - 1)
            .map(|_| loop {
                let frac = rng.gen_bool(0.3);
                let b = random_elem(&mut rng, &sig, 2, frac);
                if !b.is_zero() {
                    break b;
                }
            })
            .collect();
        // last slot = monomial in the others times a p-th power
        let e: Vec<u32> = (0..n - 1).map(|_| rng.gen_range(0..p)).collect();
        let c = loop {
            let c = random_elem(&mut rng, &sig, 1, false);
            if !c.is_zero() {
                break c;
            }
        };
        let last = if betas.is_empty() {
            c.frobenius()
        } else {
            &beta_power(&betas, &e) * &c.frobenius()
        };
        betas.push(last);
        let frac = rng.gen_bool(0.3);
        let alpha = random_elem(&mut rng, &sig, 2, frac);
        let Ok(PIndependence::Dependent(dep)) = p_independence(&betas) else {
            return outcome(false, format!("p={p} slots {betas:?} not reported dependent"));
        };
        let w = match witness_from_dependence(&alpha, &betas, &dep) {
            Ok(w) => w,
            Err(e) => return outcome(false, format!("p={p}: {e}")),
        };
        if !check_as_witness(&alpha, &betas, &w) {
            return outcome(false, format!("p={p} α={alpha} β={betas:?}: witness fails"));
        }
        done += 1;
    }
    outcome(true, format!("{done} pairs over p ∈ {{2,3,5}}, n ∈ {{1,2,3}}"))
}

fn criterion8() -> Outcome {
    let bounds = SearchBounds::new(1, 3);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let configs = [(2u32, 1usize), (2, 2), (3, 1)];
    for i in 0..C8_INSTANCES {
        let (p, n) = configs[i % configs.len()];
        let sig = Signature::parse_vars(p, "x,y").unwrap();
        let cands = candidates(&sig, &bounds);
        let pick = |rng: &mut ChaCha8Rng| cands[rng.gen_range(0..cands.len())].clone();
        let betas: Vec<FieldElem> = (0..n)
            .map(|_| loop {
                let b = random_elem(&mut rng, &sig, 2, false);
                if !b.is_zero() {
                    break b;
                }
            })
            .collect();
        let mut planted = ASWitness::trivial(&sig);
        planted.lambda = pick(&mut rng);
        for d in ExponentIndex::nonzero(n, p) {
            let z = pick(&mut rng);
            if !z.is_zero() {
                planted.z.insert(d, z);
            }
        }
        let alpha = planted.evaluate(&betas).unwrap();
        match search_as_witness(&alpha, &betas, &bounds) {
            Ok(Some(w)) if check_as_witness(&alpha, &betas, &w) => {}
            other => {
                return outcome(
                    false,
                    format!("instance {i} (p={p}, n={n}): {other:?} for planted {planted:?}"),
                )
            }
        }
    }
    outcome(true, format!("{C8_INSTANCES} planted instances, D=1, s=3"))
}

fn main() {
    let mut pool = Vec::new();
    let mut all_ok = true;
    let mut run = |id: u32, name: &str, limit: Option<Duration>, f: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = f();
        let el = t.elapsed();
        let timely = limit.map_or(true, |l| el < l);
        let ok = o.ok && timely;
        all_ok &= ok;
        let lim = limit.map_or(String::new(), |l| format!(" < {:?}", l));
        println!(
            "criterion {id} {name}: {} ({}; {:.2?}{lim})",
            if ok { "PASS" } else { "FAIL" },
            o.detail,
            el
        );
    };
    run(1, "witt kernel", Some(C1_LIMIT), &mut criterion1);
    run(2, "exact sequence", Some(C2_LIMIT), &mut criterion2);
    run(3, "single symbol", Some(C3_LIMIT), &mut || criterion3(&mut pool));
    run(4, "degree-two sums", Some(C4_LIMIT), &mut || criterion4(&mut pool));
    run(5, "two symbols, p=2", Some(C5_LIMIT), &mut || criterion5(&mut pool));
    run(6, "certificate soundness", None, &mut || criterion6(&pool));
    run(7, "dependence to witness", Some(C7_LIMIT), &mut criterion7);
    run(8, "search completeness", Some(C8_LIMIT), &mut criterion8);
    if !all_ok {
        std::process::exit(1);
    }
}
