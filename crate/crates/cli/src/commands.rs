use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use symlen::decompose::{
    telescope, theorem3, theorem4, theorem5, ChainWitness, DecomposeError, Decomposition,
    PlantedLevels,
};
use symlen::field::{p_independence, DependenceWitness, FieldElem, PIndependence, Signature};
use symlen::oracle::{
    gen_t3, gen_t4, gen_t5, search_as_witness, search_space, LevelSearch, SearchBounds,
    SearchError,
};
use symlen::symbol::{verify as check_cert, ASWitness};
use symlen::text::{
    parse, parse_field_elem, parse_header, render, Body, Document, Label, WitnessBundle,
};
use symlen::{field::ExponentIndex, par};

use crate::report::{read, write_atomic, Fail, Report};
use crate::{DecomposeArgs, GenArgs, PdepArgs, Provider, SearchArgs, VerifyArgs, WittcalcArgs};

pub type Out = Result<Report, (Report, Fail)>;

fn bare(f: Fail) -> (Report, Fail) {
    (Report::default(), f)
}

fn cap(on: bool, name: &str, value: usize, max: usize) -> Result<(), Fail> {
    if on && value > max {
        Err(Fail::Parse(format!(
            "{name}={value} is above the desk cap {max}; pass --no-caps to override"
        )))
    } else {
        Ok(())
    }
}

fn field_caps(on: bool, sig: &Signature) -> Result<(), Fail> {
    cap(on, "p", sig.p() as usize, 5)?;
    cap(on, "k", sig.nvars(), 3)
}

fn elems(sig: &Arc<Signature>, list: &str) -> Result<Vec<FieldElem>, Fail> {
    list.split(',')
        .map(|s| parse_field_elem(sig, s).map_err(Fail::from))
        .collect()
}

fn put_index(rep: &mut Report, prefix: &str, d: &ExponentIndex, v: &FieldElem) {
    let ds: Vec<String> = d.entries().iter().map(|x| x.to_string()).collect();
    rep.put(&format!("{prefix}[{}]", ds.join(",")), v);
}

fn put_witness(rep: &mut Report, w: &ASWitness) {
    rep.put("lambda", &w.lambda);
    for (d, z) in &w.z {
        put_index(rep, "z", d, z);
    }
}

fn put_dependence(rep: &mut Report, dep: &DependenceWitness) {
    rep.put("dependent", "yes");
    for (d, x) in dep {
        put_index(rep, "x", d, x);
    }
}

pub fn wittcalc(a: &WittcalcArgs, caps: bool) -> Out {
    let run = || -> Result<Report, Fail> {
        let sig = Signature::parse_vars(a.p, &a.vars).map_err(|e| Fail::Parse(e.to_string()))?;
        field_caps(caps, &sig)?;
        cap(caps, "m", a.m, 4)?;
        if a.m == 0 {
            return Err(Fail::Parse("m must be at least 1".into()));
        }
        let w = crate::wittexpr::eval(&sig, a.m, &a.expr)
            .map_err(|e| Fail::Parse(format!("column {}: {}", e.column, e.message)))?;
        let mut rep = Report::default();
        rep.put("length", w.len()).put("result", &w);
        Ok(rep)
    };
    run().map_err(bare)
}

pub fn pdep(a: &PdepArgs, caps: bool) -> Out {
    let run = || -> Result<Report, Fail> {
        let sig = parse_header(&a.field)?;
        field_caps(caps, &sig)?;
        let es = elems(&sig, &a.elems)?;
        cap(caps, "n", es.len(), 3)?;
        let r = p_independence(&es).map_err(|e| Fail::Parse(e.to_string()))?;
        let mut rep = Report::default();
        match r {
            PIndependence::Independent => {
                rep.put("result", "independent");
            }
            PIndependence::Dependent(dep) => {
                rep.put("result", "dependent");
                for (d, x) in &dep {
                    put_index(&mut rep, "x", d, x);
                }
            }
        }
        Ok(rep)
    };
    run().map_err(bare)
}

fn gen_one(a: &GenArgs, seed: u64, prefix: &Path) -> Result<(PathBuf, PathBuf), Fail> {
    let bad = |e: symlen::oracle::GenError| Fail::Parse(e.to_string());
    let (sig, theorem, symbols, bundle) = match a.theorem {
        3 => {
            let n = a.n.ok_or_else(|| Fail::Parse("--n is required".into()))?;
            let (s, w) = gen_t3(a.p, a.m, n, a.k, seed, a.deg).map_err(bad)?;
            (s.sig().clone(), 3, vec![s], WitnessBundle::single(w))
        }
        4 => {
            let r = a.r.ok_or_else(|| Fail::Parse("--r is required".into()))?;
            let inst = gen_t4(a.p, a.m, r, a.k, seed, a.deg).map_err(bad)?;
            let levels = if a.top_only {
                inst.top_only()
            } else {
                inst.levels.clone()
            };
            let blocks = levels
                .levels
                .into_iter()
                .rev()
                .map(|(j, w)| (Some(Label::Level(j)), w))
                .collect();
            let sig = inst.pairs[0].sig().clone();
            (
                sig,
                4,
                inst.pairs,
                WitnessBundle {
                    gammas: vec![],
                    blocks,
                },
            )
        }
        _ => {
            if a.p != 2 {
                return Err(Fail::Parse("theorem 5 needs p=2".into()));
            }
            let n = a.n.ok_or_else(|| Fail::Parse("--n is required".into()))?;
            let t = gen_t5(a.m, n, a.k, seed, a.deg).map_err(bad)?;
            let blocks = t
                .chain
                .lines
                .into_iter()
                .enumerate()
                .map(|(q, w)| (Some(Label::Line(q + 1)), w))
                .collect();
            (
                t.a.sig().clone(),
                5,
                vec![t.a, t.b],
                WitnessBundle {
                    gammas: t.chain.gammas,
                    blocks,
                },
            )
        }
    };
    let with_ext = |ext: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(ext);
        PathBuf::from(s)
    };
    let inst = with_ext(".instance");
    let wit = with_ext(".witness");
    write_atomic(
        &inst,
        &render(&Document {
            sig: sig.clone(),
            body: Body::Instance { theorem, symbols },
        }),
    )?;
    write_atomic(
        &wit,
        &render(&Document {
            sig,
            body: Body::Witness(bundle),
        }),
    )?;
    Ok((inst, wit))
}

pub fn gen(a: &GenArgs, caps: bool) -> Out {
    let check = || -> Result<(), Fail> {
        cap(caps, "p", a.p as usize, 5)?;
        cap(caps, "m", a.m, 4)?;
        cap(caps, "n", a.n.unwrap_or(0), 3)?;
        cap(caps, "r", a.r.unwrap_or(0), 4)?;
        cap(caps, "k", a.k, 3)
    };
    check().map_err(bare)?;
    let mut rep = Report::default();
    rep.put("theorem", a.theorem);
    match a.batch {
        None => {
            let (i, w) = gen_one(a, a.seed, &a.out).map_err(bare)?;
            rep.put("seed", a.seed)
                .put("instance", i.display())
                .put("witness", w.display());
        }
        Some(n) => {
            let seeds: Vec<u64> = (0..n).map(|i| a.seed + i).collect();
            let results = par::map(&seeds, |&s| {
                let mut p = a.out.as_os_str().to_owned();
                p.push(format!("-{s}"));
                gen_one(a, s, Path::new(&p))
            });
            rep.put("batch", n);
            for (s, r) in seeds.iter().zip(results) {
                match r {
                    Ok((i, _)) => {
                        rep.put(&format!("instance.{s}"), i.display());
                    }
                    Err(f) => return Err((rep, f)),
                }
            }
        }
    }
    Ok(rep)
}

fn load(path: &Path) -> Result<Document, Fail> {
    Ok(parse(&read(path)?)?)
}

fn bundle(path: Option<&PathBuf>) -> Result<Option<WitnessBundle>, Fail> {
    match path {
        None => Ok(None),
        Some(p) => match load(p)?.body {
            Body::Witness(b) => Ok(Some(b)),
            _ => Err(Fail::Parse(format!("{}: not a witness file", p.display()))),
        },
    }
}

fn search_err(e: SearchError) -> Fail {
    match e {
        SearchError::CapExceeded { .. } => Fail::Cap(e.to_string()),
        SearchError::Input(m) => Fail::Parse(m),
    }
}

fn searched(alpha: &FieldElem, betas: &[FieldElem], bounds: &SearchBounds) -> Result<ASWitness, Fail> {
    search_as_witness(alpha, betas, bounds)
        .map_err(search_err)?
        .ok_or_else(|| {
            Fail::Witness(format!(
                "no witness with degree ≤ {} and support ≤ {} (not a proof of nontriviality)",
                bounds.max_degree, bounds.max_support
            ))
        })
}

fn decompose_error(rep: &mut Report, e: DecomposeError) -> Fail {
    match e {
        DecomposeError::Dependent(dep) => {
            put_dependence(rep, &dep);
            Fail::Witness("slots are p-dependent".into())
        }
        DecomposeError::WitnessRejected(_)
        | DecomposeError::ProviderFailed { .. }
        | DecomposeError::LineWitness { .. }
        | DecomposeError::NoCoprimeEntry => Fail::Witness(e.to_string()),
        DecomposeError::LengthTooShort | DecomposeError::Input(_) => Fail::Parse(e.to_string()),
        DecomposeError::Move(_) => Fail::Check(e.to_string()),
    }
}

fn run_decompose(a: &DecomposeArgs, caps: bool, rep: &mut Report) -> Result<Decomposition, Fail> {
    let doc = load(&a.input)?;
    let Body::Instance { theorem, symbols } = doc.body else {
        return Err(Fail::Parse(format!("{}: not an instance file", a.input.display())));
    };
    if theorem != a.theorem {
        return Err(Fail::Parse(format!(
            "instance is for theorem {theorem}, not {}",
            a.theorem
        )));
    }
    let first = symbols
        .first()
        .ok_or_else(|| Fail::Parse("instance has no symbols".into()))?;
    let sig = doc.sig.clone();
    field_caps(caps, &sig)?;
    cap(caps, "m", first.m(), 4)?;
    cap(caps, "n", first.n(), 3)?;
    rep.put("theorem", theorem)
        .put("p", sig.p())
        .put("m", first.m())
        .put("n", first.n());
    let bounds = SearchBounds::new(a.deg, a.support);
    let search = matches!(a.provider, Provider::Search);
    let bundle = bundle(a.witness.as_ref())?;
    if bundle.is_none() && !search {
        return Err(Fail::Parse("--witness is required unless --provider search".into()));
    }
    let result = match theorem {
        3 => {
            if symbols.len() != 1 {
                return Err(Fail::Parse("theorem 3 takes exactly one symbol".into()));
            }
            let wit = match bundle.and_then(|b| b.blocks.into_iter().next()) {
                Some((_, w)) => w,
                None => {
                    let (alpha, betas) = first.residue();
                    searched(&alpha, betas, &bounds)?
                }
            };
            theorem3(first, &wit)
        }
        4 => {
            cap(caps, "r", symbols.len(), 4)?;
            rep.put("r", symbols.len());
            let mut planted = PlantedLevels::default();
            for (label, w) in bundle.map(|b| b.blocks).unwrap_or_default() {
                match label {
                    Some(Label::Level(j)) => {
                        planted.levels.insert(j, w);
                    }
                    _ => return Err(Fail::Parse("theorem 4 witnesses need 'level <j>'".into())),
                }
            }
            if search {
                let provider = LevelSearch::new(bounds, planted);
                let r = theorem4(&symbols, &provider);
                if r.is_err() && provider.cap_hit() {
                    return Err(Fail::Cap("a level's search space is above the cap".into()));
                }
                r
            } else {
                theorem4(&symbols, &planted)
            }
        }
        _ => {
            let [x, y] = &symbols[..] else {
                return Err(Fail::Parse("theorem 5 takes exactly two symbols".into()));
            };
            let b = bundle.ok_or_else(|| Fail::Parse("theorem 5 needs a witness file with gamma= lines".into()))?;
            let n = x.n();
            let mut lines: BTreeMap<usize, ASWitness> = BTreeMap::new();
            for (q, (label, w)) in b.blocks.into_iter().enumerate() {
                let q = match label {
                    Some(Label::Line(q)) => q,
                    None => q + 1,
                    Some(Label::Level(_)) => {
                        return Err(Fail::Parse("theorem 5 witnesses need 'line <q>'".into()))
                    }
                };
                lines.insert(q, w);
            }
            if search && lines.len() < 2 * n {
                let (syms, _) = telescope(x, y, &b.gammas).map_err(|e| decompose_error(rep, e))?;
                for (q, s) in syms.iter().enumerate() {
                    if !lines.contains_key(&(q + 1)) {
                        let (alpha, betas) = s.residue();
                        let w = if alpha.is_zero() {
                            ASWitness::trivial(&sig)
                        } else {
                            searched(&alpha, betas, &bounds)?
                        };
                        lines.insert(q + 1, w);
                    }
                }
            }
            let chain = ChainWitness {
                gammas: b.gammas,
                lines: lines.into_values().collect(),
            };
            theorem5(x, y, &chain)
        }
    };
    result.map_err(|e| decompose_error(rep, e))
}

pub fn decompose(a: &DecomposeArgs, caps: bool) -> Out {
    let mut rep = Report::default();
    let dec = match run_decompose(a, caps, &mut rep) {
        Ok(d) => d,
        Err(f) => return Err((rep, f)),
    };
    let sig = dec.certificate.sig.clone();
    let outputs = render(&Document {
        sig: sig.clone(),
        body: Body::Symbols(dec.outputs.clone()),
    });
    let cert = render(&Document {
        sig,
        body: Body::Certificate(dec.certificate.clone()),
    });
    if let Err(f) = write_atomic(&a.out, &outputs).and_then(|_| write_atomic(&a.cert, &cert)) {
        return Err((rep, f));
    }
    let verified = check_cert(&dec.certificate);
    let ok = dec.within_bound();
    rep.put("count", dec.count())
        .put("bound", dec.bound)
        .put("bound_check", Report::pass(ok))
        .put("steps", dec.certificate.steps.len())
        .put("verify", Report::pass(verified.is_ok()))
        .put("out", a.out.display())
        .put("cert", a.cert.display());
    if let Err(e) = verified {
        return Err((rep, Fail::Check(e.to_string())));
    }
    if !ok {
        return Err((rep, Fail::Check("count is above the bound".into())));
    }
    Ok(rep)
}

pub fn verify(a: &VerifyArgs) -> Out {
    let doc = load(&a.cert).map_err(bare)?;
    let Body::Certificate(cert) = doc.body else {
        return Err(bare(Fail::Parse(format!(
            "{}: not a certificate file",
            a.cert.display()
        ))));
    };
    let mut rep = Report::default();
    rep.put("steps", cert.steps.len())
        .put("start_terms", cert.start.len())
        .put("end_terms", cert.end.len());
    match check_cert(&cert) {
        Ok(()) => {
            rep.put("verify", "PASS");
            Ok(rep)
        }
        Err(e) => {
            rep.put("verify", "FAIL").put("location", e.location);
            if let symlen::symbol::Location::Step(k) = e.location {
                rep.put("step", k);
            }
            rep.put("reason", &e.reason);
            Err((rep, Fail::Check(e.to_string())))
        }
    }
}

pub fn search(a: &SearchArgs, caps: bool) -> Out {
    let mut rep = Report::default();
    let run = |rep: &mut Report| -> Result<(), Fail> {
        let sig = parse_header(&a.field)?;
        field_caps(caps, &sig)?;
        let alpha = parse_field_elem(&sig, &a.alpha)?;
        let betas = elems(&sig, &a.betas)?;
        cap(caps, "n", betas.len(), 3)?;
        let bounds = SearchBounds::new(a.deg, a.support);
        let nidx = ExponentIndex::nonzero(betas.len(), sig.p()).len();
        rep.put("space", search_space(&sig, nidx, &bounds));
        match search_as_witness(&alpha, &betas, &bounds).map_err(search_err)? {
            Some(w) => {
                rep.put("found", "yes");
                put_witness(rep, &w);
                if let Some(path) = &a.out {
                    write_atomic(
                        path,
                        &render(&Document {
                            sig: sig.clone(),
                            body: Body::Witness(WitnessBundle::single(w)),
                        }),
                    )?;
                }
            }
            None => {
                rep.put("found", "no")
                    .put("note", "no witness within bounds; not a proof of nontriviality");
            }
        }
        Ok(())
    };
    match run(&mut rep) {
        Ok(()) => Ok(rep),
        Err(f) => Err((rep, f)),
    }
}
