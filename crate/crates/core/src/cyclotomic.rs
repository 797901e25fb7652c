//! Exact arithmetic in cyclotomic number fields `Q(ζ_N)`.
//!
//! An element is stored as a rational coefficient vector in the power basis
//! `1, ζ, …, ζ^{d-1}` with `d = deg Φ_N`. Elements of different levels are
//! combined by embedding both into `Q(ζ_lcm)`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The field `Q(ζ_N)` together with its defining polynomial `Φ_N`.
#[derive(Debug, PartialEq, Eq)]
pub struct CyclotomicField {
    level: u32,
    /// Monic `Φ_N`, lowest degree first.
    modulus: Vec<BigInt>,
}

impl CyclotomicField {
    pub fn new(level: u32) -> Arc<Self> {
        assert!(level > 0, "cyclotomic level must be positive");
        Arc::new(CyclotomicField {
            level,
            modulus: cyclotomic_polynomial(level),
        })
    }

    pub fn level(&self) -> u32 {
        self.level
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Integer coefficients of `Φ_N`, lowest degree first.
    pub fn modulus(&self) -> &[BigInt] {
        &self.modulus
    }

    fn reduce(&self, mut coeffs: Vec<BigRational>) -> Vec<BigRational> {
        let d = self.degree();
        while coeffs.len() > d {
            let top = coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = coeffs.len() - d;
            for (i, m) in self.modulus.iter().take(d).enumerate() {
                if !m.is_zero() {
                    coeffs[shift + i] -= &top * BigRational::from_integer(m.clone());
                }
            }
        }
        coeffs.resize(d, BigRational::zero());
        coeffs
    }
}

/// Integer coefficients of the `n`-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    // Φ_n = Π_{d | n} (x^d - 1)^{μ(n/d)}
    let divisors: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let mut num: Vec<BigInt> = vec![BigInt::one()];
    let mut dens: Vec<u32> = Vec::new();
    for &d in &divisors {
        match mobius(n / d) {
            1 => num = mul_x_pow_minus_one(&num, d as usize),
            -1 => dens.push(d),
            _ => {}
        }
    }
    for d in dens {
        num = div_x_pow_minus_one(&num, d as usize);
    }
    num
}

fn mobius(mut n: u32) -> i32 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

fn mul_x_pow_minus_one(p: &[BigInt], d: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); p.len() + d];
    for (i, c) in p.iter().enumerate() {
        out[i + d] += c;
        out[i] -= c;
    }
    out
}

fn div_x_pow_minus_one(p: &[BigInt], d: usize) -> Vec<BigInt> {
    // p = q * (x^d - 1); solve from the top down.
    let n = p.len() - d;
    let mut rem: Vec<BigInt> = p.to_vec();
    let mut q = vec![BigInt::zero(); n];
    for k in (0..n).rev() {
        let c = rem[k + d].clone();
        q[k] = c.clone();
        rem[k + d] -= &c;
        rem[k] += &c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero));
    q
}

pub(crate) fn lcm(a: u32, b: u32) -> u32 {
    a / a.gcd(&b) * b
}

/// An element of `Q(ζ_N)`.
#[derive(Clone)]
pub struct CycRat {
    field: Arc<CyclotomicField>,
    coeffs: Vec<BigRational>,
}

impl CycRat {
    pub fn from_rational(q: BigRational) -> Self {
        CycRat {
            field: CyclotomicField::new(1),
            coeffs: vec![q],
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// `ζ_N^k` where `ζ_N = exp(2πi/N)`.
    pub fn zeta_pow(level: u32, k: i64) -> Self {
        let field = CyclotomicField::new(level);
        let e = k.rem_euclid(level as i64) as usize;
        let mut coeffs = vec![BigRational::zero(); e + 1];
        coeffs[e] = BigRational::one();
        let coeffs = field.reduce(coeffs);
        CycRat { field, coeffs }
    }

    pub fn zeta(level: u32) -> Self {
        Self::zeta_pow(level, 1)
    }

    /// Build from power-basis coefficients (reduced modulo `Φ_N`).
    pub fn from_coeffs(level: u32, coeffs: Vec<BigRational>) -> Self {
        let field = CyclotomicField::new(level);
        let coeffs = field.reduce(coeffs);
        CycRat { field, coeffs }
    }

    pub fn level(&self) -> u32 {
        self.field.level
    }

    pub fn field(&self) -> &Arc<CyclotomicField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        if self.coeffs[1..].iter().all(Zero::is_zero) {
            Some(&self.coeffs[0])
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Re-express this element in `Q(ζ_L)`; `L` must be a multiple of the level.
    pub fn embed(&self, level: u32) -> Self {
        if level == self.level() {
            return self.clone();
        }
        assert!(level % self.level() == 0, "embedding level must be a multiple");
        let step = (level / self.level()) as usize;
        let mut coeffs = vec![BigRational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i * step] = c.clone();
        }
        let field = CyclotomicField::new(level);
        let coeffs = field.reduce(coeffs);
        CycRat { field, coeffs }
    }

    fn unify(a: &CycRat, b: &CycRat) -> (CycRat, CycRat) {
        if a.level() == b.level() {
            return (a.clone(), b.clone());
        }
        if a.is_rational() {
            let r = a.coeffs[0].clone();
            return (b.with_rational(r), b.clone());
        }
        if b.is_rational() {
            let r = b.coeffs[0].clone();
            return (a.clone(), a.with_rational(r));
        }
        let l = lcm(a.level(), b.level());
        (a.embed(l), b.embed(l))
    }

    fn with_rational(&self, r: BigRational) -> CycRat {
        let mut coeffs = vec![BigRational::zero(); self.field.degree()];
        coeffs[0] = r;
        CycRat {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn inv(&self) -> Result<CycRat> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(self.with_rational(r.recip()));
        }
        // Extended Euclid in Q[x] against Φ_N.
        let modulus: Vec<BigRational> = self
            .field
            .modulus
            .iter()
            .map(|m| BigRational::from_integer(m.clone()))
            .collect();
        let (g, s) = ext_gcd_first(trim(self.coeffs.clone()), modulus);
        debug_assert_eq!(g.len(), 1);
        let scale = g[0].recip();
        let coeffs = s.into_iter().map(|c| c * &scale).collect();
        Ok(CycRat {
            field: self.field.clone(),
            coeffs: self.field.reduce(coeffs),
        })
    }

    pub fn pow(&self, mut e: u64) -> CycRat {
        let mut base = self.clone();
        let mut acc = self.with_rational(BigRational::one());
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power, negative exponents through inversion.
    pub fn powi(&self, e: i64) -> Result<CycRat> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.level() as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * core::f64::consts::PI * (i as f64) / n;
            acc += Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN);
        }
        acc
    }

    /// If this element is a root of unity `ζ_M^k`, returns `(M, k)` with `M` the
    /// smallest even multiple of the level.
    pub fn root_of_unity_index(&self) -> Option<(u32, u32)> {
        let m = lcm(2, self.level());
        if !self.pow(m as u64).is_one() {
            return None;
        }
        let target = self.embed(m);
        (0..m).find(|&k| CycRat::zeta_pow(m, k as i64) == target).map(|k| (m, k))
    }
}

fn trim(mut v: Vec<BigRational>) -> Vec<BigRational> {
    while v.len() > 1 && v.last().map_or(false, Zero::is_zero) {
        v.pop();
    }
    v
}

/// Returns `(g, s)` with `s·a ≡ g (mod b)` and `g = gcd(a, b)`.
fn ext_gcd_first(a: Vec<BigRational>, b: Vec<BigRational>) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = trim(a);
    let mut r1 = trim(b);
    let mut s0: Vec<BigRational> = vec![BigRational::one()];
    let mut s1: Vec<BigRational> = vec![BigRational::zero()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = poly_divrem(&r0, &r1);
        let qs = poly_mul(&q, &s1);
        let s2 = poly_sub(&s0, &qs);
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    (r0, s0)
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    trim(out)
}

fn poly_divrem(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    if r.len() < b.len() {
        return (vec![BigRational::zero()], r);
    }
    let lead_inv = b.last().unwrap().recip();
    let mut q = vec![BigRational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !(r.len() == 1 && r[0].is_zero()) {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
        if r.is_empty() {
            r.push(BigRational::zero());
        }
    }
    (trim(q), r)
}

impl PartialEq for CycRat {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = CycRat::unify(self, other);
        a.coeffs == b.coeffs
    }
}

impl Eq for CycRat {}

impl<'a> Add<&'a CycRat> for &'a CycRat {
    type Output = CycRat;
    fn add(self, rhs: &'a CycRat) -> CycRat {
        let (mut a, b) = CycRat::unify(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x += y;
        }
        a
    }
}

impl<'a> Sub<&'a CycRat> for &'a CycRat {
    type Output = CycRat;
    fn sub(self, rhs: &'a CycRat) -> CycRat {
        let (mut a, b) = CycRat::unify(self, rhs);
        for (x, y) in a.coeffs.iter_mut().zip(b.coeffs.iter()) {
            *x -= y;
        }
        a
    }
}

impl<'a> Mul<&'a CycRat> for &'a CycRat {
    type Output = CycRat;
    fn mul(self, rhs: &'a CycRat) -> CycRat {
        if let Some(r) = self.as_rational() {
            return rhs.scale(r);
        }
        if let Some(r) = rhs.as_rational() {
            return self.scale(r);
        }
        let (a, b) = CycRat::unify(self, rhs);
        let d = a.coeffs.len();
        let mut prod = vec![BigRational::zero(); 2 * d - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let coeffs = a.field.reduce(prod);
        CycRat {
            field: a.field,
            coeffs,
        }
    }
}

impl CycRat {
    pub fn scale(&self, r: &BigRational) -> CycRat {
        CycRat {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }
}

impl Neg for &CycRat {
    type Output = CycRat;
    fn neg(self) -> CycRat {
        CycRat {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<CycRat> for CycRat {
            type Output = CycRat;
            fn $m(self, rhs: CycRat) -> CycRat {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a CycRat> for CycRat {
            type Output = CycRat;
            fn $m(self, rhs: &'a CycRat) -> CycRat {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for CycRat {
    type Output = CycRat;
    fn neg(self) -> CycRat {
        -&self
    }
}

impl From<i64> for CycRat {
    fn from(n: i64) -> Self {
        CycRat::from_int(n)
    }
}

impl From<BigRational> for CycRat {
    fn from(q: BigRational) -> Self {
        CycRat::from_rational(q)
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for CycRat {
    /// Rationals print bare; other elements print as a parenthesised sum of
    /// `(zN)^k` terms, which the polynomial parser reads back.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.as_rational() {
            return fmt_rational(q, f);
        }
        let n = self.level();
        let nonzero: Vec<usize> = (0..self.coeffs.len()).filter(|i| !self.coeffs[*i].is_zero()).collect();
        if let [i] = nonzero[..] {
            if i > 0 && self.coeffs[i].is_one() {
                return if i == 1 { write!(f, "(z{})", n) } else { write!(f, "(z{})^{}", n, i) };
            }
        }
        f.write_str("(")?;
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if i == 0 {
                fmt_rational(&abs, f)?;
                continue;
            }
            if !abs.is_one() {
                fmt_rational(&abs, f)?;
                f.write_str("*")?;
            }
            if i == 1 {
                write!(f, "(z{})", n)?;
            } else {
                write!(f, "(z{})^{}", n, i)?;
            }
        }
        f.write_str(")")
    }
}

impl fmt::Debug for CycRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials() {
        let as_i64 = |n| -> Vec<i64> {
            cyclotomic_polynomial(n)
                .iter()
                .map(|c| c.to_i64().unwrap())
                .collect()
        };
        assert_eq!(as_i64(1), vec![-1, 1]);
        assert_eq!(as_i64(2), vec![1, 1]);
        assert_eq!(as_i64(4), vec![1, 0, 1]);
        assert_eq!(as_i64(5), vec![1, 1, 1, 1, 1]);
        assert_eq!(as_i64(6), vec![1, -1, 1]);
        assert_eq!(as_i64(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(105).len() - 1, 48);
    }

    #[test]
    fn zeta_five_has_order_five() {
        let z = CycRat::zeta(5);
        let mut acc = CycRat::one();
        for _ in 0..5 {
            acc = &acc * &z;
        }
        assert!(acc.is_one());
        assert!(!z.pow(3).is_one());
    }

    #[test]
    fn cube_roots_sum_to_zero() {
        let z = CycRat::zeta(3);
        let s = &(&CycRat::one() + &z) + &z.pow(2);
        assert!(s.is_zero());
    }

    #[test]
    fn rational_inverse() {
        assert_eq!(CycRat::from_int(2).inv().unwrap(), CycRat::from_frac(1, 2));
        assert_eq!(CycRat::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_of_one_minus_zeta() {
        let a = &CycRat::one() - &CycRat::zeta(5);
        let b = a.inv().unwrap();
        assert!((&a * &b).is_one());
    }

    #[test]
    fn mixed_levels_unify() {
        // ζ_4^2 = -1 = ζ_6^3
        assert_eq!(CycRat::zeta_pow(4, 2), CycRat::zeta_pow(6, 3));
        assert_eq!(CycRat::zeta_pow(12, 4), CycRat::zeta(3));
        let s = &CycRat::zeta(4) + &CycRat::zeta(3);
        assert_eq!(s.level(), 12);
        assert_eq!(&s - &CycRat::zeta(3), CycRat::zeta(4));
    }

    #[test]
    fn root_of_unity_detection() {
        assert_eq!(CycRat::zeta_pow(5, 3).root_of_unity_index(), Some((10, 6)));
        assert_eq!(CycRat::from_int(-1).root_of_unity_index(), Some((2, 1)));
        assert_eq!(CycRat::from_int(2).root_of_unity_index(), None);
    }

    #[test]
    fn complex_embedding() {
        let z = CycRat::zeta(4).to_complex();
        assert!((z.re).abs() < 1e-12 && (z.im - 1.0).abs() < 1e-12);
    }

    #[test]
    fn display_round_trip_shape() {
        let a = &CycRat::from_frac(3, 2) - &CycRat::zeta_pow(5, 2);
        assert_eq!(alloc::format!("{}", a), "(3/2 - (z5)^2)");
        assert_eq!(alloc::format!("{}", CycRat::from_frac(-1, 3)), "-1/3");
    }
}
