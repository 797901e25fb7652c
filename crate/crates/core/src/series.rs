//! Truncated Puiseux series in one variable `t` over [`CycRat`].
//!
//! Exponents are rationals whose denominators divide the ramification index
//! `ram`; internally they are stored as integer "ticks" `k` meaning `t^{k/ram}`.
//! Every series carries its truncation order: coefficients at and above it are
//! unknown. Operations never extend a truncation; they shrink it to what the
//! inputs actually determine.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::cyclotomic::CycRat;
use crate::error::{Error, Result};

/// Rational exponent of `t`.
pub type Exponent = Ratio<i64>;

pub fn exp(n: i64) -> Exponent {
    Exponent::from_integer(n)
}

/// Order of a truncated series: exact, or only bounded below by the truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    Finite(Exponent),
    AtLeast(Exponent),
}

impl Order {
    pub fn finite(&self) -> Option<Exponent> {
        match self {
            Order::Finite(e) => Some(*e),
            Order::AtLeast(_) => None,
        }
    }

    /// The best known lower bound.
    pub fn lower_bound(&self) -> Exponent {
        match self {
            Order::Finite(e) | Order::AtLeast(e) => *e,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Order::Finite(_))
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(e) => write!(f, "{}", e),
            Order::AtLeast(e) => write!(f, ">={}", e),
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct PSeries {
    ram: u32,
    /// Truncation in ticks: coefficients with tick `>= trunc` are unknown.
    trunc: i64,
    terms: BTreeMap<i64, CycRat>,
}

fn to_ticks(e: Exponent, ram: u32) -> Option<i64> {
    let scaled = e * Exponent::from_integer(ram as i64);
    if scaled.is_integer() {
        Some(scaled.to_integer())
    } else {
        None
    }
}

fn ceil_ticks(e: Exponent, ram: u32) -> i64 {
    (e * Exponent::from_integer(ram as i64)).ceil().to_integer()
}

impl PSeries {
    /// The zero series known up to `t^trunc`.
    pub fn zero(trunc: Exponent) -> Self {
        let ram = *trunc.denom() as u32;
        PSeries {
            ram,
            trunc: to_ticks(trunc, ram).unwrap(),
            terms: BTreeMap::new(),
        }
    }

    /// Build from `(exponent, coefficient)` pairs; terms at or above `trunc` are dropped.
    pub fn from_terms<I>(trunc: Exponent, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, CycRat)>,
    {
        let terms: Vec<(Exponent, CycRat)> = terms.into_iter().collect();
        let mut ram = *trunc.denom();
        for (e, _) in &terms {
            ram = ram.lcm(e.denom());
        }
        let ram = ram as u32;
        let mut s = PSeries {
            ram,
            trunc: to_ticks(trunc, ram).unwrap(),
            terms: BTreeMap::new(),
        };
        for (e, c) in terms {
            let k = to_ticks(e, ram).unwrap();
            if k < s.trunc {
                s.add_term(k, c);
            }
        }
        s
    }

    pub fn monomial(coeff: CycRat, e: Exponent, trunc: Exponent) -> Self {
        Self::from_terms(trunc, [(e, coeff)])
    }

    pub fn constant(c: CycRat, trunc: Exponent) -> Self {
        Self::monomial(c, exp(0), trunc)
    }

    /// The parameter `t` itself.
    pub fn t(trunc: Exponent) -> Self {
        Self::monomial(CycRat::one(), exp(1), trunc)
    }

    fn add_term(&mut self, k: i64, c: CycRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&k);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn ram(&self) -> u32 {
        self.ram
    }

    pub fn trunc(&self) -> Exponent {
        Exponent::new(self.trunc, self.ram as i64)
    }

    fn exponent(&self, k: i64) -> Exponent {
        Exponent::new(k, self.ram as i64)
    }

    /// Iterate over `(exponent, coefficient)` in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &CycRat)> + '_ {
        self.terms.iter().map(move |(k, c)| (self.exponent(*k), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, e: Exponent) -> Option<&CycRat> {
        to_ticks(e, self.ram).and_then(|k| self.terms.get(&k))
    }

    pub fn order(&self) -> Order {
        match self.terms.keys().next() {
            Some(k) => Order::Finite(self.exponent(*k)),
            None => Order::AtLeast(self.trunc()),
        }
    }

    /// Known lower bound on the order (the order itself when finite).
    fn order_ticks(&self) -> i64 {
        self.terms.keys().next().copied().unwrap_or(self.trunc)
    }

    pub fn leading(&self) -> Option<(Exponent, &CycRat)> {
        self.terms.iter().next().map(|(k, c)| (self.exponent(*k), c))
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Least common level of the coefficient fields.
    pub fn level(&self) -> u32 {
        self.terms
            .values()
            .fold(1, |acc, c| crate::cyclotomic::lcm(acc, c.level()))
    }

    /// Re-express with a ramification index that is a multiple of the current one.
    pub fn with_ram(&self, ram: u32) -> PSeries {
        if ram == self.ram {
            return self.clone();
        }
        assert!(ram % self.ram == 0);
        let f = (ram / self.ram) as i64;
        PSeries {
            ram,
            trunc: self.trunc * f,
            terms: self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect(),
        }
    }

    fn unify(a: &PSeries, b: &PSeries) -> (PSeries, PSeries) {
        if a.ram == b.ram {
            return (a.clone(), b.clone());
        }
        let r = a.ram.lcm(&b.ram);
        (a.with_ram(r), b.with_ram(r))
    }

    /// Drop the ramification index to the smallest value the exponents allow.
    pub fn normalize_ram(&self) -> PSeries {
        let mut g = self.ram as i64;
        g = g.gcd(&self.trunc);
        for k in self.terms.keys() {
            g = g.gcd(k);
        }
        if g <= 1 {
            return self.clone();
        }
        PSeries {
            ram: (self.ram as i64 / g) as u32,
            trunc: self.trunc / g,
            terms: self.terms.iter().map(|(k, c)| (k / g, c.clone())).collect(),
        }
    }

    /// Forget every coefficient at or above `t^trunc` (only ever lowers the truncation).
    pub fn truncate(&self, trunc: Exponent) -> PSeries {
        let lowered = if trunc < self.trunc() { trunc } else { self.trunc() };
        let r = (self.ram as i64).lcm(lowered.denom()) as u32;
        let mut s = self.with_ram(r);
        s.trunc = to_ticks(lowered, r).unwrap();
        let cut = s.trunc;
        s.terms.retain(|k, _| *k < cut);
        s
    }

    pub fn add(&self, other: &PSeries) -> PSeries {
        let (mut a, b) = Self::unify(self, other);
        a.trunc = a.trunc.min(b.trunc);
        let cut = a.trunc;
        a.terms.retain(|k, _| *k < cut);
        for (k, c) in b.terms {
            if k < cut {
                a.add_term(k, c);
            }
        }
        a
    }

    pub fn neg(&self) -> PSeries {
        PSeries {
            ram: self.ram,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &PSeries) -> PSeries {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CycRat) -> PSeries {
        if c.is_zero() {
            // 0·s is exactly zero; keep the truncation of the operand.
            return PSeries {
                ram: self.ram,
                trunc: self.trunc,
                terms: BTreeMap::new(),
            };
        }
        PSeries {
            ram: self.ram,
            trunc: self.trunc,
            terms: self.terms.iter().map(|(k, x)| (*k, x * c)).collect(),
        }
    }

    /// Multiply by `t^e`; the truncation shifts with it.
    pub fn shift(&self, e: Exponent) -> PSeries {
        let r = (self.ram as i64).lcm(e.denom()) as u32;
        let s = self.with_ram(r);
        let d = to_ticks(e, r).unwrap();
        PSeries {
            ram: r,
            trunc: s.trunc + d,
            terms: s.terms.into_iter().map(|(k, c)| (k + d, c)).collect(),
        }
    }

    pub fn mul(&self, other: &PSeries) -> PSeries {
        let (a, b) = Self::unify(self, other);
        let trunc = (a.trunc + b.order_ticks()).min(b.trunc + a.order_ticks());
        let mut out = PSeries {
            ram: a.ram,
            trunc,
            terms: BTreeMap::new(),
        };
        for (ka, ca) in &a.terms {
            for (kb, cb) in &b.terms {
                let k = ka + kb;
                if k >= trunc {
                    break;
                }
                out.add_term(k, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> PSeries {
        if e == 0 {
            return PSeries::constant(CycRat::one(), self.trunc());
        }
        let mut acc = self.clone();
        for _ in 1..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal `d/dt`; exponents shift down by one and so does the truncation.
    pub fn derive(&self) -> PSeries {
        let r = self.ram as i64;
        let mut out = PSeries {
            ram: self.ram,
            trunc: self.trunc - r,
            terms: BTreeMap::new(),
        };
        for (k, c) in &self.terms {
            if *k == 0 {
                continue;
            }
            let factor = CycRat::from_frac(*k, r);
            out.add_term(k - r, c * &factor);
        }
        out
    }

    /// `self(inner(t))`.
    ///
    /// `inner` must have positive order. Non-integer exponents in `self` are
    /// only supported when `inner` is an exact pure power `t^k`.
    pub fn compose(&self, inner: &PSeries) -> Result<PSeries> {
        let ob = inner.order_ticks();
        if ob <= 0 {
            return Err(Error::IllegalComposition);
        }
        let ob_e = inner.exponent(ob);
        let min_pos = self
            .terms
            .keys()
            .find(|k| **k > 0)
            .map(|k| self.exponent(*k))
            .unwrap_or(self.trunc());
        let mut trunc = self.trunc() * ob_e;
        let from_inner = inner.trunc() + (min_pos - exp(1)) * ob_e;
        if !self.terms.keys().all(|k| *k == 0) && from_inner < trunc {
            trunc = from_inner;
        }
        let integral = self.ram == 1 || self.terms.keys().all(|k| k % self.ram as i64 == 0);
        if !integral {
            let pure_power = inner.terms.len() == 1
                && inner.terms.values().next().map_or(false, CycRat::is_one);
            if !pure_power {
                return Err(Error::IllegalComposition);
            }
            let out_terms = self
                .terms()
                .map(|(e, c)| (e * ob_e, c.clone()))
                .collect::<Vec<_>>();
            return Ok(PSeries::from_terms(trunc, out_terms));
        }
        let mut acc = PSeries::zero(trunc);
        let mut power = PSeries::constant(CycRat::one(), trunc);
        let mut current = 0i64;
        for (k, c) in &self.terms {
            let e = k / self.ram as i64;
            while current < e {
                power = power.mul(inner).truncate(trunc);
                current += 1;
            }
            acc = acc.add(&power.scale(c).truncate(trunc));
        }
        Ok(acc.truncate(trunc))
    }

    /// Inverse of a series with nonzero constant term.
    fn unit_inverse(&self) -> Result<PSeries> {
        let c0 = match self.terms.get(&0) {
            Some(c) => c.clone(),
            None => return Err(Error::DivisionByZero),
        };
        if self.terms.keys().next() != Some(&0) {
            return Err(Error::DivisionByZero);
        }
        let inv0 = c0.inv()?;
        let mut w: BTreeMap<i64, CycRat> = BTreeMap::new();
        w.insert(0, inv0.clone());
        let rest: Vec<(i64, CycRat)> = self
            .terms
            .iter()
            .filter(|(k, _)| **k > 0)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        // Every tick reachable as a sum of positive ticks below the truncation.
        for n in 1..self.trunc {
            let mut acc = CycRat::zero();
            let mut any = false;
            for (k, c) in &rest {
                if *k > n {
                    break;
                }
                if let Some(wv) = w.get(&(n - k)) {
                    acc = &acc + &(c * wv);
                    any = true;
                }
            }
            if any && !acc.is_zero() {
                w.insert(n, -(&acc * &inv0));
            }
        }
        Ok(PSeries {
            ram: self.ram,
            trunc: self.trunc,
            terms: w,
        })
    }

    /// `self / other` as a Laurent–Puiseux series.
    pub fn div(&self, other: &PSeries) -> Result<PSeries> {
        let (ob, _) = match other.leading() {
            Some((e, c)) => (e, c.clone()),
            None => {
                return Err(Error::TruncationInsufficient(
                    "divisor vanishes to its truncation".into(),
                ))
            }
        };
        let unit = other.shift(-ob);
        let inv = unit.unit_inverse()?;
        Ok(self.shift(-ob).mul(&inv))
    }

    /// Numeric evaluation at a complex parameter (principal branch for roots).
    pub fn eval_complex(&self, t: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in self.terms() {
            let p = if e.is_integer() {
                t.powi(e.to_integer() as i32)
            } else {
                t.powf(e.to_f64().unwrap())
            };
            acc += c.to_complex() * p;
        }
        acc
    }

    /// Compare two series as far as both are known.
    pub fn agrees_with(&self, other: &PSeries) -> bool {
        self.sub(other).is_zero()
    }

    /// Smallest exponent `e` with `e·ram` integral and `e >= x`.
    pub fn ceil_exponent(x: Exponent, ram: u32) -> Exponent {
        Exponent::new(ceil_ticks(x, ram), ram as i64)
    }
}

impl PartialOrd for Order {
    /// Orders compare by their lower bounds; `AtLeast` sorts after an equal `Finite`.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let a = self.lower_bound();
        let b = other.lower_bound();
        Some(a.cmp(&b).then_with(|| match (self, other) {
            (Order::Finite(_), Order::AtLeast(_)) => Ordering::Less,
            (Order::AtLeast(_), Order::Finite(_)) => Ordering::Greater,
            _ => Ordering::Equal,
        }))
    }
}

fn fmt_exponent(e: Exponent, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if e.is_integer() {
        write!(f, "{}", e.to_integer())
    } else {
        write!(f, "({}/{})", e.numer(), e.denom())
    }
}

impl fmt::Display for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, mag) = match c.as_rational() {
                Some(q) if q.is_negative() => (true, CycRat::from_rational(-q)),
                _ => (false, c.clone()),
            };
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            if e.is_zero() {
                write!(f, "{}", mag)?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{}*", mag)?;
            }
            f.write_str("t")?;
            if e != exp(1) {
                f.write_str("^")?;
                fmt_exponent(e, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O(t^{})", self, self.trunc())
    }
}
