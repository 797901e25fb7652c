//! Dense univariate polynomials over [`CycRat`] and root finding inside
//! cyclotomic fields.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::cyclotomic::{cyclotomic_polynomial, lcm, CycRat};
use crate::error::{Error, Result};

/// Coefficients lowest degree first, no trailing zeros.
#[derive(Clone, PartialEq, Eq)]
pub struct UPoly {
    coeffs: Vec<CycRat>,
}

impl UPoly {
    pub fn new(mut coeffs: Vec<CycRat>) -> Self {
        while coeffs.last().map_or(false, CycRat::is_zero) {
            coeffs.pop();
        }
        UPoly { coeffs }
    }

    pub fn zero() -> Self {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: CycRat) -> Self {
        UPoly::new(vec![c])
    }

    /// `c·u^k`.
    pub fn monomial(c: CycRat, k: usize) -> Self {
        let mut v = vec![CycRat::zero(); k + 1];
        v[k] = c;
        UPoly::new(v)
    }

    pub fn coeffs(&self) -> &[CycRat] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> CycRat {
        self.coeffs.get(k).cloned().unwrap_or_else(CycRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> CycRat {
        self.coeffs.last().cloned().unwrap_or_else(CycRat::zero)
    }

    pub fn eval(&self, x: &CycRat) -> CycRat {
        let mut acc = CycRat::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derive(&self) -> UPoly {
        UPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &CycRat::from_int(k as i64))
                .collect(),
        )
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new((0..n).map(|k| &self.coeff(k) + &other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UPoly::new((0..n).map(|k| &self.coeff(k) - &other.coeff(k)).collect())
    }

    pub fn scale(&self, c: &CycRat) -> UPoly {
        UPoly::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &UPoly) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![CycRat::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] = &out[i + j] + &(a * b);
                }
            }
        }
        UPoly::new(out)
    }

    pub fn divrem(&self, d: &UPoly) -> Result<(UPoly, UPoly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let inv = d.lead().inv()?;
        let mut r = self.coeffs.clone();
        let n = r.len();
        if n <= dd {
            return Ok((UPoly::zero(), self.clone()));
        }
        let mut q = vec![CycRat::zero(); n - dd];
        for k in (dd..n).rev() {
            let c = &r[k] * &inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = &r[idx] - &(&c * dc);
            }
            q[k - dd] = c;
        }
        r.truncate(dd);
        Ok((UPoly::new(q), UPoly::new(r)))
    }

    pub fn monic(&self) -> UPoly {
        match self.lead().inv() {
            Ok(inv) => self.scale(&inv),
            Err(_) => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &UPoly) -> UPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Largest `e` such that the polynomial is a polynomial in `u^e`.
    fn exponent_gcd(&self) -> usize {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .fold(0usize, |g, (k, _)| g.gcd(&k))
    }

    fn level(&self) -> u32 {
        self.coeffs.iter().fold(1, |acc, c| lcm(acc, c.level()))
    }

    /// Distinct roots with multiplicities, in a deterministic order.
    ///
    /// Roots must lie in a cyclotomic field; otherwise the unresolved factor
    /// is reported through [`Error::UnsupportedExtension`].
    pub fn roots(&self) -> Result<Vec<(CycRat, usize)>> {
        if self.is_zero() {
            return Err(Error::InvalidArgument("roots of the zero polynomial".into()));
        }
        let sqfree = match self.gcd(&self.derive()).degree() {
            Some(0) | None => self.monic(),
            Some(_) => self.divrem(&self.gcd(&self.derive()))?.0.monic(),
        };
        let distinct = squarefree_roots(&sqfree)?;
        let mut out = Vec::with_capacity(distinct.len());
        for r in distinct {
            let mut m = 0;
            let mut q = self.clone();
            while !q.is_zero() && q.eval(&r).is_zero() {
                m += 1;
                q = q.derive();
            }
            out.push((r, m));
        }
        Ok(out)
    }

    pub fn display_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => String::from(var),
                _ => format!("{}^{}", var, k),
            };
            parts.push(if k == 0 {
                format!("{}", c)
            } else if c.is_one() {
                mono
            } else {
                format!("{}*{}", c, mono)
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Debug for UPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_in("u"))
    }
}

fn squarefree_roots(p: &UPoly) -> Result<Vec<CycRat>> {
    let mut out = Vec::new();
    let mut p = p.clone();
    if p.degree() == Some(0) {
        return Ok(out);
    }
    if p.coeff(0).is_zero() {
        out.push(CycRat::zero());
        p = UPoly::new(p.coeffs[1..].to_vec());
    }
    solve_nonzero(&p.monic(), &mut out)?;
    Ok(out)
}

/// Roots of a squarefree monic polynomial with nonzero constant term.
fn solve_nonzero(p: &UPoly, out: &mut Vec<CycRat>) -> Result<()> {
    let deg = match p.degree() {
        None | Some(0) => return Ok(()),
        Some(d) => d,
    };
    if deg == 1 {
        out.push(-&p.coeff(0));
        return Ok(());
    }
    let e = p.exponent_gcd();
    if e > 1 {
        let reduced = UPoly::new((0..=deg / e).map(|k| p.coeff(k * e)).collect());
        let mut inner = Vec::new();
        solve_nonzero(&reduced, &mut inner)?;
        for v in inner {
            out.extend(all_nth_roots(&v, e as u32).ok_or_else(|| unsupported(p))?);
        }
        return Ok(());
    }
    if deg == 2 {
        // u = (-b ± √(b²-4c)) / 2 for monic u² + b u + c.
        let b = p.coeff(1);
        let c = p.coeff(0);
        let disc = &(&b * &b) - &(&c * &CycRat::from_int(4));
        let s = nth_root(&disc, 2).ok_or_else(|| unsupported(p))?;
        let half = CycRat::from_frac(1, 2);
        out.push(&(&s - &b) * &half);
        out.push(&(&(-&s) - &b) * &half);
        return Ok(());
    }
    if let Some(r) = rational_root(p) {
        out.push(r.clone());
        let (q, _) = p.divrem(&UPoly::new(vec![-&r, CycRat::one()]))?;
        return solve_nonzero(&q.monic(), out);
    }
    if let Some(r) = root_of_unity_root(p) {
        out.push(r.clone());
        let (q, _) = p.divrem(&UPoly::new(vec![-&r, CycRat::one()]))?;
        return solve_nonzero(&q.monic(), out);
    }
    Err(unsupported(p))
}

fn unsupported(p: &UPoly) -> Error {
    Error::UnsupportedExtension(p.display_in("u"))
}

/// A rational root of a polynomial with rational coefficients, if any.
fn rational_root(p: &UPoly) -> Option<CycRat> {
    let mut qs = Vec::new();
    for c in p.coeffs() {
        qs.push(c.as_rational()?.clone());
    }
    let den = qs.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = qs.iter().map(|q| (q * BigRational::from_integer(den.clone())).to_integer()).collect();
    let c0 = ints[0].abs();
    let cn = ints.last().unwrap().abs();
    if c0.bits() > 40 || cn.bits() > 40 {
        return None;
    }
    let nums = divisors(&c0);
    let dens = divisors(&cn);
    for n in &nums {
        for d in &dens {
            for sign in [1, -1] {
                let cand = CycRat::from_rational(BigRational::new(n * BigInt::from(sign), d.clone()));
                if p.eval(&cand).is_zero() {
                    return Some(cand);
                }
            }
        }
    }
    None
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= *n {
        if (n % &d).is_zero() {
            out.push(d.clone());
            let other = n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out.sort();
    out
}

/// A root of unity that is a root of `p`, searching orders up to a small bound.
fn root_of_unity_root(p: &UPoly) -> Option<CycRat> {
    let deg = p.degree()?;
    let base = p.level();
    for m in 1..=(4 * deg as u32 * base).min(120) {
        let phi = cyclotomic_polynomial(m);
        if phi.len() - 1 > deg {
            continue;
        }
        for k in 0..m {
            if k.gcd(&m) != 1 {
                continue;
            }
            let z = CycRat::zeta_pow(m, k as i64);
            if p.eval(&z).is_zero() {
                return Some(z);
            }
        }
    }
    None
}

/// All `n`-th roots of a nonzero `c`, when one of them lies in a cyclotomic field.
pub fn all_nth_roots(c: &CycRat, n: u32) -> Option<Vec<CycRat>> {
    let w = nth_root(c, n)?;
    Some((0..n).map(|k| &w * &CycRat::zeta_pow(n, k as i64)).collect())
}

/// Some `n`-th root of `c` in a cyclotomic field, if one is found.
pub fn nth_root(c: &CycRat, n: u32) -> Option<CycRat> {
    if n == 1 || c.is_zero() {
        return Some(c.clone());
    }
    if let Some(q) = c.as_rational() {
        return rational_nth_root(q, n);
    }
    let m = lcm(2, c.level());
    let r = c.pow(m as u64);
    let r = r.as_rational()?.clone();
    let w0 = rational_nth_root(&r, n * m)?;
    let big = n * m;
    (0..big)
        .map(|j| &w0 * &CycRat::zeta_pow(big, j as i64))
        .find(|cand| cand.pow(n as u64) == *c)
}

fn rational_nth_root(q: &BigRational, n: u32) -> Option<CycRat> {
    let negative = q.is_negative();
    let a = q.abs();
    let sign_root = if negative {
        CycRat::zeta_pow(2 * n, 1)
    } else {
        CycRat::one()
    };
    if let Some(r) = perfect_root(&a, n) {
        return Some(&CycRat::from_rational(r) * &sign_root);
    }
    if n % 2 == 0 {
        if let Some(s) = perfect_root(&a, n / 2) {
            return Some(&sqrt_positive(&s)? * &sign_root);
        }
    }
    None
}

fn perfect_root(q: &BigRational, n: u32) -> Option<BigRational> {
    let num = q.numer();
    let den = q.denom();
    if num.sign() == Sign::Minus {
        return None;
    }
    let rn = num.nth_root(n);
    let rd = den.nth_root(n);
    if rn.pow(n) == *num && rd.pow(n) == *den {
        Some(BigRational::new(rn, rd))
    } else {
        None
    }
}

/// `√s` for a positive rational, through Gauss sums.
fn sqrt_positive(s: &BigRational) -> Option<CycRat> {
    let prod = s.numer() * s.denom();
    if prod.bits() > 48 {
        return None;
    }
    let mut n: u64 = prod.try_into().ok()?;
    let mut outside: u64 = 1;
    let mut root = CycRat::one();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            for _ in 0..e / 2 {
                outside *= p;
            }
            if e % 2 == 1 {
                root = &root * &sqrt_prime(p);
            }
        }
        p += 1;
    }
    if n > 1 {
        root = &root * &sqrt_prime(n);
    }
    let scale = BigRational::new(BigInt::from(outside), s.denom().clone());
    Some(root.scale(&scale))
}

fn sqrt_prime(p: u64) -> CycRat {
    if p == 2 {
        return &CycRat::zeta_pow(8, 1) + &CycRat::zeta_pow(8, 7);
    }
    let level = p as u32;
    let mut g = CycRat::zero();
    for a in 1..p {
        let leg = legendre(a, p);
        let z = CycRat::zeta_pow(level, a as i64);
        g = if leg == 1 { &g + &z } else { &g - &z };
    }
    if p % 4 == 1 {
        g
    } else {
        // g² = -p here, so √p = -i·g.
        &(-&CycRat::zeta(4)) * &g
    }
}

fn legendre(a: u64, p: u64) -> i32 {
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}
