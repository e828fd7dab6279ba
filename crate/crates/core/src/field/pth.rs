//! The field as a vector space over its subfield of p-th powers.

use std::collections::BTreeMap;

use super::poly::{Mono, MultiPoly};
use super::{ExponentIndex, FieldElem, FieldError};

/// `x_d` coefficients of a relation `Σ_d β^d x_d^p = 0`.
pub type DependenceWitness = BTreeMap<ExponentIndex, FieldElem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PIndependence {
    Independent,
    Dependent(DependenceWitness),
}

/// `Π_i β_i^{d_i}`.
pub fn beta_power(betas: &[FieldElem], d: &[u32]) -> FieldElem {
    let sig = betas
        .first()
        .map(|b| b.sig().clone())
        .expect("at least one element");
    let mut acc = FieldElem::one(&sig);
    for (b, &e) in betas.iter().zip(d) {
        if e > 0 {
            acc = &acc * &b.int_pow(e as i64).expect("nonnegative exponent");
        }
    }
    acc
}

/// Coordinates of `a` in the basis `{t^r : 0 ≤ r_i < p}` over F^p.
///
/// Every returned coefficient is a p-th power and `Σ_r c_r t^r = a`.
pub fn fp_coordinates(a: &FieldElem) -> BTreeMap<Vec<u32>, FieldElem> {
    let sig = a.sig().clone();
    let p = sig.p();
    let n = sig.nvars();
    let mut out = BTreeMap::new();
    if a.is_zero() {
        return out;
    }
    // a = N/D = N D^{p-1} / D^p
    let dpow = a.den().pow(p as u64 - 1, n, p);
    let num = a.num().mul(&dpow, p);
    let den_p = a.den().frobenius(p);
    let mut groups: BTreeMap<Vec<u32>, Vec<(Mono, u32)>> = BTreeMap::new();
    for (e, c) in num.terms() {
        let r: Vec<u32> = e.iter().map(|x| x % p).collect();
        let q: Mono = e.iter().map(|x| x - x % p).collect();
        groups.entry(r).or_default().push((q, *c));
    }
    for (r, terms) in groups {
        let poly = MultiPoly::from_terms(terms, p);
        let c = FieldElem::from_fraction(&sig, poly, den_p.clone()).expect("nonzero denominator");
        out.insert(r, c);
    }
    out
}

fn check_nonzero(betas: &[FieldElem]) -> Result<(), FieldError> {
    if betas.iter().any(FieldElem::is_zero) {
        return Err(FieldError::ZeroElement);
    }
    Ok(())
}

/// Decide whether the `p^n` products `β^d`, `d ∈ {0,…,p-1}^n`, are linearly
/// independent over F^p. A dependence comes with a witness `x_d` satisfying
/// `Σ_d β^d x_d^p = 0`.
///
/// Independence is read off the differentials `dβ_i`. For the first `β_j`
/// whose differential depends on the earlier ones, the earlier elements are
/// completed to a p-basis with variables and `β_j` is expanded in that basis
/// by Taylor projection along the dual derivations.
pub fn p_independence(betas: &[FieldElem]) -> Result<PIndependence, FieldError> {
    check_nonzero(betas)?;
    if betas.is_empty() {
        return Ok(PIndependence::Independent);
    }
    let sig = betas[0].sig().clone();
    let k = sig.nvars();
    let grad = |b: &FieldElem| (0..k).map(|l| b.partial(l)).collect::<Vec<_>>();
    let mut echelon = Echelon::default();
    for (j, b) in betas.iter().enumerate() {
        if !echelon.insert(grad(b))? {
            return Ok(PIndependence::Dependent(expand_dependent(betas, j, echelon)?));
        }
    }
    Ok(PIndependence::Independent)
}

/// Row echelon form over F of gradient vectors.
#[derive(Default)]
struct Echelon {
    rows: Vec<(usize, Vec<FieldElem>)>,
}

impl Echelon {
    /// Add `v` if it is independent of the rows so far.
    fn insert(&mut self, mut v: Vec<FieldElem>) -> Result<bool, FieldError> {
        for (piv, row) in &self.rows {
            if !v[*piv].is_zero() {
                let f = v[*piv].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x = &*x - &(&f * r);
                }
            }
        }
        let Some(piv) = v.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = v[piv].inv()?;
        v.iter_mut().for_each(|x| *x = &*x * &inv);
        self.rows.push((piv, v));
        Ok(true)
    }
}

fn invert(mut a: Vec<Vec<FieldElem>>) -> Result<Vec<Vec<FieldElem>>, FieldError> {
    let n = a.len();
    let sig = a[0][0].sig().clone();
    let mut inv: Vec<Vec<FieldElem>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| FieldElem::from_int(&sig, (i == j) as i64))
                .collect()
        })
        .collect();
    for c in 0..n {
        let r = (c..n)
            .find(|&r| !a[r][c].is_zero())
            .ok_or(FieldError::DivisionByZero)?;
        a.swap(c, r);
        inv.swap(c, r);
        let s = a[c][c].inv()?;
        for j in 0..n {
            a[c][j] = &a[c][j] * &s;
            inv[c][j] = &inv[c][j] * &s;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let f = a[r][c].clone();
                for j in 0..n {
                    a[r][j] = &a[r][j] - &(&f * &a[c][j]);
                    inv[r][j] = &inv[r][j] - &(&f * &inv[c][j]);
                }
            }
        }
    }
    Ok(inv)
}

/// `β_0..β_{j-1}` are p-independent and `dβ_j` lies in their span; return
/// `x` with `Σ_{e} β^e y_e^p - β_j = 0`.
fn expand_dependent(
    betas: &[FieldElem],
    j: usize,
    mut echelon: Echelon,
) -> Result<DependenceWitness, FieldError> {
    let sig = betas[0].sig().clone();
    let p = sig.p();
    let k = sig.nvars();
    let n = betas.len();
    let mut basis: Vec<FieldElem> = betas[..j].to_vec();
    for l in 0..k {
        if basis.len() == k {
            break;
        }
        let mut unit = vec![FieldElem::zero(&sig); k];
        unit[l] = FieldElem::one(&sig);
        if echelon.insert(unit)? {
            basis.push(FieldElem::var(&sig, l));
        }
    }
    // dual derivations: D_i = Σ_l m[l][i] ∂_l with m the inverse Jacobian
    let jac: Vec<Vec<FieldElem>> = basis
        .iter()
        .map(|b| (0..k).map(|l| b.partial(l)).collect())
        .collect();
    let m = invert(jac)?;
    let derive = |g: &FieldElem, i: usize| {
        (0..k).fold(FieldElem::zero(&sig), |acc, l| {
            if m[l][i].is_zero() {
                acc
            } else {
                &acc + &(&m[l][i] * &g.partial(l))
            }
        })
    };
    // D^a β_j for every a in the box {0..p-1}^k, each from a neighbour
    let boxes = ExponentIndex::all(k, p);
    let mut ders: BTreeMap<Vec<u32>, FieldElem> = BTreeMap::new();
    for a in &boxes {
        let a = a.entries().to_vec();
        let v = match a.iter().position(|&x| x > 0) {
            None => betas[j].clone(),
            Some(i) => {
                let mut prev = a.clone();
                prev[i] -= 1;
                derive(&ders[&prev], i)
            }
        };
        ders.insert(a, v);
    }
    let fact = |e: u32| (1..=e as i64).product::<i64>();
    let neg_basis: Vec<FieldElem> = basis.iter().map(FieldElem::neg).collect();
    let mut witness = DependenceWitness::new();
    let mut top = vec![0; n];
    top[j] = 1;
    witness.insert(
        ExponentIndex::new(top, p).expect("digit below p"),
        FieldElem::from_int(&sig, -1),
    );
    for e in ExponentIndex::all(j, p) {
        let mut full = e.entries().to_vec();
        full.resize(k, 0);
        // c_e = π(D^e β_j) / e!, π = Σ_i Π_l (-b_l)^{i_l} / i_l! D^i
        let mut c = FieldElem::zero(&sig);
        for i in &boxes {
            let i = i.entries();
            let a: Vec<u32> = full.iter().zip(i).map(|(x, y)| x + y).collect();
            if a.iter().any(|&x| x >= p) {
                continue;
            }
            let d = &ders[&a];
            if d.is_zero() {
                continue;
            }
            let mut w = d.clone();
            let mut den = 1i64;
            for l in 0..k {
                if i[l] > 0 {
                    w = &w * &neg_basis[l].int_pow(i[l] as i64)?;
                    den *= fact(i[l]);
                }
            }
            c = &c + &(&w * &FieldElem::from_int(&sig, den).inv()?);
        }
        let ef: i64 = full.iter().map(|&x| fact(x)).product();
        let c = &c * &FieldElem::from_int(&sig, ef).inv()?;
        if c.is_zero() {
            continue;
        }
        let y = c.pth_root().ok_or_else(|| {
            FieldError::InvalidWitness("basis coordinate is not a p-th power".into())
        })?;
        let mut idx = e.entries().to_vec();
        idx.resize(n, 0);
        witness.insert(ExponentIndex::new(idx, p).expect("digit below p"), y);
    }
    debug_assert!(dependence_sum(betas, &witness).is_zero());
    Ok(witness)
}

/// Evaluate `Σ_d β^d x_d^p`.
pub(crate) fn dependence_sum(betas: &[FieldElem], x: &DependenceWitness) -> FieldElem {
    let sig = betas[0].sig().clone();
    x.iter().fold(FieldElem::zero(&sig), |acc, (d, v)| {
        &acc + &(&beta_power(betas, d.entries()) * &v.frobenius())
    })
}

fn validate_witness(betas: &[FieldElem], x: &DependenceWitness) -> Result<(), FieldError> {
    let p = betas[0].p();
    for d in x.keys() {
        if d.len() != betas.len() || d.entries().iter().any(|&e| e >= p) {
            return Err(FieldError::InvalidWitness(format!("index {d:?} out of range")));
        }
    }
    if x.values().all(FieldElem::is_zero) {
        return Err(FieldError::InvalidWitness("all coefficients are zero".into()));
    }
    if !dependence_sum(betas, x).is_zero() {
        return Err(FieldError::InvalidWitness("relation does not vanish".into()));
    }
    Ok(())
}

/// Given a dependence of the `β^d`, write `γ^p` as `Σ_{d≠0} β^d y_d^p`.
pub fn universal_representation(
    betas: &[FieldElem],
    witness: &DependenceWitness,
    gamma: &FieldElem,
) -> Result<BTreeMap<ExponentIndex, FieldElem>, FieldError> {
    check_nonzero(betas)?;
    if betas.is_empty() {
        return Err(FieldError::InvalidWitness("no elements".into()));
    }
    validate_witness(betas, witness)?;
    let sig = gamma.sig().clone();
    let p = sig.p();
    let n = betas.len();
    let (dstar, _) = witness
        .iter()
        .find(|(_, v)| !v.is_zero())
        .expect("validated nonzero");
    // divide by β^{d*}; a negative exponent c is renormalized via
    // β^c x^p = β^{p+c} (x/β)^p
    let mut shifted: BTreeMap<ExponentIndex, FieldElem> = BTreeMap::new();
    for (d, v) in witness {
        if v.is_zero() {
            continue;
        }
        let mut nd = Vec::with_capacity(n);
        let mut coeff = v.clone();
        for i in 0..n {
            let diff = d.entries()[i] as i64 - dstar.entries()[i] as i64;
            if diff < 0 {
                nd.push((diff + p as i64) as u32);
                coeff = &coeff / &betas[i];
            } else {
                nd.push(diff as u32);
            }
        }
        shifted.insert(ExponentIndex::new(nd, p).expect("in range"), coeff);
    }
    let x0 = shifted
        .remove(&ExponentIndex::zero(n, p))
        .expect("d* maps to the zero index");
    let scale = &gamma.neg() / &x0;
    let mut out = BTreeMap::new();
    for d in ExponentIndex::nonzero(n, p) {
        let y = shifted
            .get(&d)
            .map(|v| &scale * v)
            .unwrap_or_else(|| FieldElem::zero(&sig));
        out.insert(d, y);
    }
    Ok(out)
}
