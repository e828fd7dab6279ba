//! Line-oriented file format for instances, witnesses, symbol lists and
//! certificates.
//!
//! ```text
//! field p=2 vars=x,y
//! # comment
//! instance theorem=3
//! [x^2+x+y, 1] (x; y)
//! ```
//!
//! Every document starts with the `field` header, then one body keyword line
//! (`instance`, `symbols`, `witness`, `certificate`), then its lines. Blank
//! lines and lines starting with `#` are ignored. Errors carry 1-based line
//! and column numbers.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::sync::Arc;

use crate::field::{parse_elem, ExponentIndex, FieldElem, Signature};
use crate::symbol::{ASWitness, Certificate, Move, Step, Symbol, SymbolSum, Term};
use crate::witt::WittVector;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {message}")]
pub struct TextError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

/// A position-aware slice of one input line.
#[derive(Clone, Copy)]
struct Src<'a> {
    line: usize,
    full: &'a str,
}

impl<'a> Src<'a> {
    fn err(&self, at: &str, message: impl Into<String>) -> TextError {
        let col = (at.as_ptr() as usize).saturating_sub(self.full.as_ptr() as usize);
        TextError {
            line: self.line,
            column: col.min(self.full.len()) + 1,
            message: message.into(),
        }
    }
}

/// Split at `sep` characters outside brackets and parentheses.
fn split_top(s: &str, seps: &[char]) -> Vec<(usize, char)> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            _ if depth == 0 && seps.contains(&c) => out.push((i, c)),
            _ => {}
        }
    }
    out
}

fn pieces<'a>(s: &'a str, sep: char) -> Vec<&'a str> {
    let mut out = Vec::new();
    let mut last = 0;
    for (i, _) in split_top(s, &[sep]) {
        out.push(&s[last..i]);
        last = i + sep.len_utf8();
    }
    out.push(&s[last..]);
    out
}

fn elem(sig: &Arc<Signature>, src: Src, s: &str) -> Result<FieldElem, TextError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(src.err(s, "expected a field element"));
    }
    parse_elem(sig, t).map_err(|e| {
        let mut err = src.err(t, e.message.clone());
        err.column += e.column - 1;
        err
    })
}

fn witt(sig: &Arc<Signature>, src: Src, s: &str) -> Result<WittVector, TextError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| src.err(t, "expected a Witt vector [e, …]"))?;
    let slots = pieces(inner, ',')
        .into_iter()
        .map(|p| elem(sig, src, p))
        .collect::<Result<Vec<_>, _>>()?;
    WittVector::new(slots).map_err(|e| src.err(t, e.to_string()))
}

/// Index of the bracket closing the one at `open`.
fn closing(s: &str, open: usize) -> Option<usize> {
    let mut depth = 0;
    for (i, c) in s[open..].char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => {
                depth -= 1;
                if depth == 0 {
                    return Some(open + i);
                }
            }
            _ => {}
        }
    }
    None
}

fn symbol(sig: &Arc<Signature>, src: Src, s: &str) -> Result<Symbol, TextError> {
    let t = s.trim();
    if !t.starts_with('[') {
        return Err(src.err(t, "expected a symbol [w, …] (b; …)"));
    }
    let close = closing(t, 0).ok_or_else(|| src.err(t, "unclosed '['"))?;
    let w = witt(sig, src, &t[..=close])?;
    let rest = t[close + 1..].trim_start();
    let inner = rest
        .strip_prefix('(')
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| src.err(rest, "expected slots (b1; b2; …)"))?;
    let slots = pieces(inner, ';')
        .into_iter()
        .map(|p| elem(sig, src, p))
        .collect::<Result<Vec<_>, _>>()?;
    Symbol::new(w, slots).map_err(|e| src.err(t, e.to_string()))
}

/// `<int>? <symbol>` with an optional leading sign.
fn term(sig: &Arc<Signature>, src: Src, s: &str, sign: i64) -> Result<Term, TextError> {
    let t = s.trim();
    let digits = t.find(|c: char| !c.is_ascii_digit()).unwrap_or(t.len());
    let coef: i64 = if digits == 0 {
        1
    } else {
        t[..digits]
            .parse()
            .map_err(|_| src.err(t, "coefficient out of range"))?
    };
    let sym = symbol(sig, src, &t[digits..])?;
    Term::new(sign * coef, sym).map_err(|e| src.err(t, e.to_string()))
}

fn sum(sig: &Arc<Signature>, src: Src, s: &str) -> Result<SymbolSum, TextError> {
    let t = s.trim();
    if t == "0" {
        return Ok(SymbolSum::default());
    }
    let cuts = split_top(t, &['+', '-']);
    let mut terms = Vec::new();
    let mut sign = 1;
    let mut last = 0;
    for (i, c) in cuts {
        let piece = &t[last..i];
        if !piece.trim().is_empty() {
            terms.push(term(sig, src, piece, sign)?);
        } else if last != 0 || i != 0 {
            return Err(src.err(&t[i..], "missing term"));
        }
        sign = if c == '-' { -1 } else { 1 };
        last = i + 1;
    }
    terms.push(term(sig, src, &t[last..], sign)?);
    Ok(SymbolSum::new(terms))
}

fn index(src: Src, s: &str) -> Result<usize, TextError> {
    s.parse().map_err(|_| src.err(s, "expected a term index"))
}

fn int(src: Src, s: &str) -> Result<i64, TextError> {
    s.parse().map_err(|_| src.err(s, "expected an integer"))
}

fn parse_move(sig: &Arc<Signature>, src: Src, s: &str) -> Result<Move, TextError> {
    let parts = pieces(s, '|');
    let head: Vec<&str> = parts[0].split_whitespace().collect();
    let payload = &parts[1..];
    let name = *head.first().ok_or_else(|| src.err(s, "missing move name"))?;
    let args = &head[1..];
    let want = |k: usize, p: usize| -> Result<(), TextError> {
        if args.len() != k || payload.len() != p {
            Err(src.err(
                name,
                format!("{name} takes {k} indices and {p} '|' fields"),
            ))
        } else {
            Ok(())
        }
    };
    let ix = |k: usize| index(src, args[k]);
    Ok(match name {
        "witt-merge" => {
            want(2, 0)?;
            Move::WittMerge { i: ix(0)?, j: ix(1)? }
        }
        "witt-split" => {
            want(1, 1)?;
            Move::WittSplit {
                i: ix(0)?,
                part: witt(sig, src, payload[0])?,
            }
        }
        "coef-split" => {
            want(2, 0)?;
            Move::CoefSplit {
                i: ix(0)?,
                k: int(src, args[1])?,
            }
        }
        "slot-split" => {
            want(2, 2)?;
            Move::SlotSplit {
                i: ix(0)?,
                s: ix(1)?,
                a: elem(sig, src, payload[0])?,
                b: elem(sig, src, payload[1])?,
            }
        }
        "slot-merge" => {
            want(3, 0)?;
            Move::SlotMerge {
                i: ix(0)?,
                j: ix(1)?,
                s: ix(2)?,
            }
        }
        "repeat-insert" | "zero-insert" => {
            want(1, 1)?;
            let at = ix(0)?;
            let p = payload[0].trim_start();
            let (sign, body) = match p.strip_prefix('-') {
                Some(r) => (-1, r),
                None => (1, p),
            };
            let term = term(sig, src, body, sign)?;
            if name == "repeat-insert" {
                Move::RepeatInsert { at, term }
            } else {
                Move::ZeroInsert { at, term }
            }
        }
        "witt-uneval" => {
            want(2, 1)?;
            Move::WittUneval {
                i: ix(0)?,
                c: int(src, args[1])?,
                w: witt(sig, src, payload[0])?,
            }
        }
        "term-move" => {
            want(2, 0)?;
            Move::TermMove {
                from: ix(0)?,
                to: ix(1)?,
            }
        }
        "repeat-kill" | "frob-kill" | "frob-lift" | "slot-vector-kill" | "witt-eval"
        | "zero-kill" => {
            want(1, 0)?;
            let i = ix(0)?;
            match name {
                "repeat-kill" => Move::RepeatKill { i },
                "frob-kill" => Move::FrobKill { i },
                "frob-lift" => Move::FrobLift { i },
                "slot-vector-kill" => Move::SlotVectorKill { i },
                "witt-eval" => Move::WittEval { i },
                _ => Move::ZeroKill { i },
            }
        }
        _ => return Err(src.err(name, format!("unknown move '{name}'"))),
    })
}

/// Witnesses and chain data read from a witness file.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessBundle {
    /// `gamma=<e>` lines, in order.
    pub gammas: Vec<FieldElem>,
    /// Blocks in file order, each with its `level <j>` / `line <q>` label if any.
    pub blocks: Vec<(Option<Label>, ASWitness)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    Level(usize),
    Line(usize),
}

impl WitnessBundle {
    pub fn single(w: ASWitness) -> Self {
        WitnessBundle {
            gammas: Vec::new(),
            blocks: vec![(None, w)],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Body {
    /// `instance theorem=<t>` followed by the input symbols.
    Instance { theorem: u8, symbols: Vec<Symbol> },
    Symbols(Vec<Symbol>),
    Witness(WitnessBundle),
    Certificate(Certificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Document {
    pub sig: Arc<Signature>,
    pub body: Body,
}

/// Parse `field p=<int> vars=<id>(,<id>)*`.
pub fn parse_header(text: &str) -> Result<Arc<Signature>, TextError> {
    header(Src { line: 1, full: text }, text)
}

fn header(src: Src, s: &str) -> Result<Arc<Signature>, TextError> {
    let mut words = s.split_whitespace();
    if words.next() != Some("field") {
        return Err(src.err(s, "expected 'field p=<prime> vars=<names>'"));
    }
    let mut p = None;
    let mut vars = None;
    for w in words {
        if let Some(v) = w.strip_prefix("p=") {
            p = Some(v.parse::<u32>().map_err(|_| src.err(v, "bad prime"))?);
        } else if let Some(v) = w.strip_prefix("vars=") {
            vars = Some(v);
        } else {
            return Err(src.err(w, format!("unexpected '{w}'")));
        }
    }
    let p = p.ok_or_else(|| src.err(s, "missing p="))?;
    let vars = vars.ok_or_else(|| src.err(s, "missing vars="))?;
    Signature::parse_vars(p, vars).map_err(|e| src.err(s, e.to_string()))
}

fn keyword<'a>(src: Src, s: &'a str, key: &str) -> Result<&'a str, TextError> {
    s.split_whitespace()
        .find_map(|w| w.strip_prefix(key))
        .ok_or_else(|| src.err(s, format!("missing {key}")))
}

/// Parse a single field element against `sig` (for command-line arguments).
pub fn parse_field_elem(sig: &Arc<Signature>, s: &str) -> Result<FieldElem, TextError> {
    elem(sig, Src { line: 1, full: s }, s)
}

pub fn parse_witt(sig: &Arc<Signature>, s: &str) -> Result<WittVector, TextError> {
    witt(sig, Src { line: 1, full: s }, s)
}

pub fn parse_symbol(sig: &Arc<Signature>, s: &str) -> Result<Symbol, TextError> {
    symbol(sig, Src { line: 1, full: s }, s)
}

pub fn parse_sum(sig: &Arc<Signature>, s: &str) -> Result<SymbolSum, TextError> {
    sum(sig, Src { line: 1, full: s }, s)
}

/// Parse a whole document.
pub fn parse(text: &str) -> Result<Document, TextError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (Src { line: i + 1, full: l }, l))
        .filter(|(_, l)| {
            let t = l.trim();
            !t.is_empty() && !t.starts_with('#')
        });
    let (hsrc, hline) = lines.next().ok_or(TextError {
        line: 1,
        column: 1,
        message: "empty document".into(),
    })?;
    let sig = header(hsrc, hline)?;
    let (ksrc, kline) = lines.next().ok_or(TextError {
        line: hsrc.line + 1,
        column: 1,
        message: "missing body".into(),
    })?;
    let kw = kline.split_whitespace().next().unwrap_or("");
    let body = match kw {
        "instance" => {
            let t = keyword(ksrc, kline, "theorem=")?;
            let theorem = t
                .parse()
                .ok()
                .filter(|t| (3..=5).contains(t))
                .ok_or_else(|| ksrc.err(t, "theorem must be 3, 4 or 5"))?;
            let symbols = lines
                .map(|(src, l)| symbol(&sig, src, l))
                .collect::<Result<_, _>>()?;
            Body::Instance { theorem, symbols }
        }
        "symbols" => Body::Symbols(
            lines
                .map(|(src, l)| symbol(&sig, src, l))
                .collect::<Result<_, _>>()?,
        ),
        "witness" => Body::Witness(witness_body(&sig, lines)?),
        "certificate" => {
            let m = keyword(ksrc, kline, "m=")?;
            let n = keyword(ksrc, kline, "n=")?;
            let m = m.parse().map_err(|_| ksrc.err(m, "bad m"))?;
            let n = n.parse().map_err(|_| ksrc.err(n, "bad n"))?;
            Body::Certificate(certificate_body(&sig, m, n, ksrc, lines)?)
        }
        _ => {
            return Err(ksrc.err(
                kline,
                "expected 'instance', 'symbols', 'witness' or 'certificate'",
            ))
        }
    };
    Ok(Document { sig, body })
}

fn witness_body<'a>(
    sig: &Arc<Signature>,
    lines: impl Iterator<Item = (Src<'a>, &'a str)>,
) -> Result<WitnessBundle, TextError> {
    let p = sig.p();
    let mut out = WitnessBundle::default();
    let mut label = None;
    let mut cur: Option<(Option<Label>, ASWitness)> = None;
    for (src, l) in lines {
        let t = l.trim();
        if let Some(v) = t.strip_prefix("gamma=") {
            out.gammas.push(elem(sig, src, v)?);
        } else if let Some(v) = t.strip_prefix("level ").or(t.strip_prefix("line ")) {
            let j = v.trim().parse().map_err(|_| src.err(v, "bad label"))?;
            label = Some(if t.starts_with("level") {
                Label::Level(j)
            } else {
                Label::Line(j)
            });
        } else if let Some(v) = t.strip_prefix("lambda=") {
            out.blocks.extend(cur.take());
            cur = Some((
                label.take(),
                ASWitness {
                    lambda: elem(sig, src, v)?,
                    z: BTreeMap::new(),
                },
            ));
        } else if let Some(v) = t.strip_prefix('z') {
            let (_, w) = cur
                .as_mut()
                .ok_or_else(|| src.err(t, "z line before lambda="))?;
            let (lhs, rhs) = v
                .split_once('=')
                .ok_or_else(|| src.err(t, "expected 'z d1 … = <e>'"))?;
            let d = lhs
                .split_whitespace()
                .map(|x| x.parse::<u32>().map_err(|_| src.err(x, "bad exponent")))
                .collect::<Result<Vec<_>, _>>()?;
            let d = ExponentIndex::new(d, p)
                .ok_or_else(|| src.err(lhs, format!("exponents must be below {p}")))?;
            let z = elem(sig, src, rhs)?;
            if w.z.insert(d, z).is_some() {
                return Err(src.err(lhs, "index given twice"));
            }
        } else {
            return Err(src.err(t, "expected gamma=, level, line, lambda= or z"));
        }
    }
    out.blocks.extend(cur);
    Ok(out)
}

fn certificate_body<'a>(
    sig: &Arc<Signature>,
    m: usize,
    n: usize,
    ksrc: Src<'a>,
    lines: impl Iterator<Item = (Src<'a>, &'a str)>,
) -> Result<Certificate, TextError> {
    let mut start = None;
    let mut end = None;
    let mut steps = Vec::new();
    let mut pending: Option<Move> = None;
    for (src, l) in lines {
        let t = l.trim();
        if let Some(mv) = pending.take() {
            steps.push(Step {
                mv,
                result: sum(sig, src, t)?,
            });
        } else if let Some(v) = t.strip_prefix("start ") {
            start = Some(sum(sig, src, v)?);
        } else if let Some(v) = t.strip_prefix("step ") {
            pending = Some(parse_move(sig, src, v)?);
        } else if let Some(v) = t.strip_prefix("end ") {
            end = Some(sum(sig, src, v)?);
        } else {
            return Err(src.err(t, "expected start, step or end"));
        }
    }
    if pending.is_some() {
        return Err(ksrc.err("", "last step has no result line"));
    }
    Ok(Certificate {
        sig: sig.clone(),
        m,
        n,
        start: start.ok_or_else(|| ksrc.err("", "missing start line"))?,
        steps,
        end: end.ok_or_else(|| ksrc.err("", "missing end line"))?,
    })
}

pub fn render_header(sig: &Signature) -> String {
    format!("field p={} vars={}", sig.p(), sig.vars().join(","))
}

fn render_witness(out: &mut String, w: &ASWitness) {
    let _ = writeln!(out, "lambda={}", w.lambda);
    for (d, z) in &w.z {
        let ds: Vec<String> = d.entries().iter().map(|x| x.to_string()).collect();
        let _ = writeln!(out, "z {} = {}", ds.join(" "), z);
    }
}

impl fmt::Display for Document {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(self))
    }
}

/// Canonical text; `parse(render(d)) == d`.
pub fn render(doc: &Document) -> String {
    let mut out = render_header(&doc.sig);
    out.push('\n');
    match &doc.body {
        Body::Instance { theorem, symbols } => {
            let _ = writeln!(out, "instance theorem={theorem}");
            for s in symbols {
                let _ = writeln!(out, "{s}");
            }
        }
        Body::Symbols(symbols) => {
            out.push_str("symbols\n");
            for s in symbols {
                let _ = writeln!(out, "{s}");
            }
        }
        Body::Witness(b) => {
            out.push_str("witness\n");
            for g in &b.gammas {
                let _ = writeln!(out, "gamma={g}");
            }
            for (label, w) in &b.blocks {
                match label {
                    Some(Label::Level(j)) => {
                        let _ = writeln!(out, "level {j}");
                    }
                    Some(Label::Line(q)) => {
                        let _ = writeln!(out, "line {q}");
                    }
                    None => {}
                }
                render_witness(&mut out, w);
            }
        }
        Body::Certificate(c) => {
            let _ = writeln!(out, "certificate m={} n={}", c.m, c.n);
            let _ = writeln!(out, "start {}", c.start);
            for s in &c.steps {
                let _ = writeln!(out, "step {}", s.mv);
                let _ = writeln!(out, "{}", s.result);
            }
            let _ = writeln!(out, "end {}", c.end);
        }
    }
    out
}
