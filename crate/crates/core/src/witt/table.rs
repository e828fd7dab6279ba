//! Universal addition and negation polynomials of truncated Witt vectors.
//!
//! Generated from the ghost components `W_i(X) = Σ_{j≤i} p^j X_j^{p^{i-j}}`
//! through the recursion `p^i S_i = W_i(X) + W_i(Y) - Σ_{j<i} p^j S_j^{p^{i-j}}`.
//! The integer arithmetic runs in ℤ/p^mℤ, which is exact for everything the
//! recursion needs: `S_j` is only ever used multiplied by `p^j`, so knowing it
//! modulo `p^{m-j}` suffices, and the division by `p^i` is checked on the
//! numerator reduced modulo `p^m`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

/// Integer polynomial modulo a fixed modulus.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct ModPoly(BTreeMap<Vec<u32>, u64>);

impl ModPoly {
    fn var(i: usize, nvars: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        ModPoly(BTreeMap::from([(e, 1)]))
    }

    fn one(nvars: usize) -> Self {
        ModPoly(BTreeMap::from([(vec![0; nvars], 1)]))
    }

    fn add_scaled(&mut self, other: &ModPoly, c: u64, modulus: u64) {
        for (e, v) in &other.0 {
            let slot = self.0.entry(e.clone()).or_insert(0);
            *slot = ((*slot as u128 + (*v as u128 * c as u128)) % modulus as u128) as u64;
        }
        self.0.retain(|_, v| *v != 0);
    }

    fn mul(&self, other: &ModPoly, modulus: u64) -> ModPoly {
        let mut out: BTreeMap<Vec<u32>, u64> = BTreeMap::new();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &other.0 {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let slot = out.entry(e).or_insert(0);
                *slot = ((*slot as u128 + *ca as u128 * *cb as u128) % modulus as u128) as u64;
            }
        }
        out.retain(|_, v| *v != 0);
        ModPoly(out)
    }

    fn pow(&self, mut e: u64, nvars: usize, modulus: u64) -> ModPoly {
        let mut base = self.clone();
        let mut r = ModPoly::one(nvars);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&base, modulus);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base, modulus);
            }
        }
        r
    }
}

/// A polynomial with coefficients in 𝔽_p, as a list of (exponents, coefficient).
pub type TablePoly = Vec<(Vec<u32>, u32)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittPolynomialTable {
    pub p: u32,
    pub m: usize,
    /// `S_i` in the variables `X_0..X_{m-1}, Y_0..Y_{m-1}`.
    pub sum: Vec<TablePoly>,
    /// `N_i` in the variables `X_0..X_{m-1}`.
    pub neg: Vec<TablePoly>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("Witt table generation for p={p}, m={m}: component {index} is not integral")]
pub struct IntegralityError {
    pub p: u32,
    pub m: usize,
    pub index: usize,
}

fn reduce_mod_p(poly: &ModPoly, p: u32) -> TablePoly {
    poly.0
        .iter()
        .map(|(e, c)| (e.clone(), (*c % p as u64) as u32))
        .filter(|(_, c)| *c != 0)
        .collect()
}

/// Solve the ghost recursion for one family of polynomials. `ghost(i)` is the
/// target ghost component (`W_i(X)+W_i(Y)` for sums, `-W_i(X)` for negation).
fn solve(
    p: u32,
    m: usize,
    nvars: usize,
    ghost: impl Fn(usize) -> ModPoly,
) -> Result<Vec<ModPoly>, usize> {
    let modulus = (p as u64).pow(m as u32);
    let mut solved: Vec<ModPoly> = Vec::with_capacity(m);
    for i in 0..m {
        let mut numer = ghost(i);
        for (j, s) in solved.iter().enumerate() {
            let e = (p as u64).pow((i - j) as u32);
            let pj = (p as u64).pow(j as u32);
            let power = s.pow(e, nvars, modulus);
            numer.add_scaled(&power, modulus - pj % modulus, modulus);
        }
        let pi = (p as u64).pow(i as u32);
        if numer.0.values().any(|c| c % pi != 0) {
            return Err(i);
        }
        let reduced = modulus / pi;
        let quotient = ModPoly(
            numer
                .0
                .into_iter()
                .map(|(e, c)| (e, (c / pi) % reduced))
                .filter(|(_, c)| *c != 0)
                .collect(),
        );
        solved.push(quotient);
    }
    Ok(solved)
}

fn ghost_component(p: u32, i: usize, offset: usize, nvars: usize, modulus: u64) -> ModPoly {
    let mut w = ModPoly::default();
    for j in 0..=i {
        let x = ModPoly::var(offset + j, nvars);
        let e = (p as u64).pow((i - j) as u32);
        let pj = (p as u64).pow(j as u32) % modulus;
        w.add_scaled(&x.pow(e, nvars, modulus), pj, modulus);
    }
    w
}

pub fn generate_table(p: u32, m: usize) -> Result<WittPolynomialTable, IntegralityError> {
    assert!(m >= 1, "Witt length must be positive");
    let modulus = (p as u64).pow(m as u32);
    let err = |index| IntegralityError { p, m, index };
    let sums = solve(p, m, 2 * m, |i| {
        let mut g = ghost_component(p, i, 0, 2 * m, modulus);
        g.add_scaled(&ghost_component(p, i, m, 2 * m, modulus), 1, modulus);
        g
    })
    .map_err(err)?;
    let negs = solve(p, m, m, |i| {
        let mut g = ModPoly::default();
        g.add_scaled(&ghost_component(p, i, 0, m, modulus), modulus - 1, modulus);
        g
    })
    .map_err(err)?;
    Ok(WittPolynomialTable {
        p,
        m,
        sum: sums.iter().map(|s| reduce_mod_p(s, p)).collect(),
        neg: negs.iter().map(|s| reduce_mod_p(s, p)).collect(),
    })
}

type Cache = Mutex<HashMap<(u32, usize), Arc<WittPolynomialTable>>>;

/// Cached table for `(p, m)`. Concurrent first calls may both generate; the
/// results are identical and one wins.
pub fn table(p: u32, m: usize) -> Arc<WittPolynomialTable> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("table cache").get(&(p, m)) {
        return t.clone();
    }
    let t = Arc::new(generate_table(p, m).expect("ghost recursion is integral for prime p"));
    cache
        .lock()
        .expect("table cache")
        .entry((p, m))
        .or_insert(t)
        .clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn as_set(t: &TablePoly) -> BTreeMap<Vec<u32>, u32> {
        t.iter().cloned().collect()
    }

    #[test]
    fn p2_m2_sum_is_known() {
        let t = generate_table(2, 2).unwrap();
        // S_0 = X0 + Y0
        assert_eq!(
            as_set(&t.sum[0]),
            BTreeMap::from([(vec![1, 0, 0, 0], 1), (vec![0, 0, 1, 0], 1)])
        );
        // S_1 = X1 + Y1 + X0 Y0
        assert_eq!(
            as_set(&t.sum[1]),
            BTreeMap::from([
                (vec![0, 1, 0, 0], 1),
                (vec![0, 0, 0, 1], 1),
                (vec![1, 0, 1, 0], 1)
            ])
        );
        // N_1 = X1 + X0^2
        assert_eq!(
            as_set(&t.neg[1]),
            BTreeMap::from([(vec![0, 1], 1), (vec![2, 0], 1)])
        );
    }

    #[test]
    fn odd_negation_is_componentwise() {
        for (p, m) in [(3, 2), (3, 3), (5, 2)] {
            let t = generate_table(p, m).unwrap();
            for (i, n) in t.neg.iter().enumerate() {
                let mut e = vec![0; m];
                e[i] = 1;
                assert_eq!(as_set(n), BTreeMap::from([(e, p - 1)]));
            }
        }
    }

    #[test]
    fn length_one_tables() {
        for p in [2, 3, 5, 7] {
            let t = generate_table(p, 1).unwrap();
            assert_eq!(as_set(&t.sum[0]), BTreeMap::from([(vec![1, 0], 1), (vec![0, 1], 1)]));
            assert_eq!(as_set(&t.neg[0]), BTreeMap::from([(vec![1], p - 1)]));
        }
    }
}
