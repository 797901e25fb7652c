//! Independent oracles shared by the integration tests. Nothing here calls
//! into the engine beyond building its input types.

#![allow(dead_code)]

use lipsat_core::series::exp;
use lipsat_core::{CycRat, PSeries};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

/// Dense integer polynomial in `t`, lowest degree first.
pub type IPoly = Vec<i64>;

pub fn series(p: &IPoly, trunc: i64) -> PSeries {
    PSeries::from_terms(
        exp(trunc),
        p.iter()
            .enumerate()
            .filter(|(_, c)| **c != 0)
            .map(|(k, c)| (exp(k as i64), CycRat::from_int(*c))),
    )
}

pub fn order(p: &[i128]) -> Option<usize> {
    p.iter().position(|c| *c != 0)
}

pub fn mul(a: &[i128], b: &[i128]) -> Vec<i128> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0i128; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn sub(a: &[i128], b: &[i128]) -> Vec<i128> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or(0) - b.get(k).copied().unwrap_or(0))
        .collect()
}

pub fn widen(p: &IPoly) -> Vec<i128> {
    p.iter().map(|c| *c as i128).collect()
}

/// Least order among the 2x2 minors of a rank-2 column list, i.e. the
/// colength of the module in the free module of rank 2.
pub fn min_minor_order(cols: &[[IPoly; 2]]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for i in 0..cols.len() {
        for j in i + 1..cols.len() {
            let d = sub(
                &mul(&widen(&cols[i][0]), &widen(&cols[j][1])),
                &mul(&widen(&cols[i][1]), &widen(&cols[j][0])),
            );
            if let Some(o) = order(&d) {
                best = Some(best.map_or(o, |b| b.min(o)));
            }
        }
    }
    best
}

/// Whether `A x = b` has a solution over the rationals.
pub fn solvable(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> bool {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|i| !a[*i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        b.swap(r, p);
        let inv = Q::one() / a[r][c].clone();
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone() * inv.clone();
                for k in c..cols {
                    let v = a[r][k].clone() * f.clone();
                    a[i][k] -= v;
                }
                let v = b[r].clone() * f;
                b[i] -= v;
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    b[r..].iter().all(Zero::is_zero)
}

/// `v ∈ Σ C[[t]]·col_j` decided through the coefficient system modulo `t^n`.
/// Sound once `n` exceeds the colength of a rank-2 module.
pub fn truncated_membership(v: &[IPoly; 2], cols: &[[IPoly; 2]], n: usize) -> bool {
    // Unknowns: a_{j,k} for column j, power k < n.
    let unknowns = cols.len() * n;
    let mut a = Vec::with_capacity(2 * n);
    let mut b = Vec::with_capacity(2 * n);
    for row in 0..2 {
        for deg in 0..n {
            let mut eq = vec![Q::zero(); unknowns];
            for (j, col) in cols.iter().enumerate() {
                for k in 0..=deg {
                    if let Some(c) = col[row].get(deg - k) {
                        eq[j * n + k] += q(*c);
                    }
                }
            }
            a.push(eq);
            b.push(q(v[row].get(deg).copied().unwrap_or(0)));
        }
    }
    solvable(a, b)
}

/// Seeded sampler for test inputs.
pub struct Sampler(ChaCha8Rng);

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Uniform in `lo..=hi`.
    pub fn range(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.random_range(lo..=hi)
    }

    pub fn unit(&mut self) -> f64 {
        self.0.random()
    }

    /// Integer polynomial of degree at most `deg` with at most `terms` terms.
    pub fn ipoly(&mut self, deg: usize, terms: usize) -> IPoly {
        let mut p = vec![0; deg + 1];
        for _ in 0..terms {
            let k = self.range(0, deg as i64) as usize;
            p[k] = self.range(-3, 3);
        }
        p
    }
}
