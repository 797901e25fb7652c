//! Sparse multivariate polynomials over [`CycRat`] with named variables.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;

use crate::cyclotomic::CycRat;
use crate::error::{Error, Result};
use crate::series::{exp, Exponent, PSeries};

pub type Monomial = Vec<u32>;

#[derive(Clone)]
pub struct Poly {
    vars: Vec<String>,
    terms: BTreeMap<Monomial, CycRat>,
}

/// Sorted union of two variable lists, keeping first-seen order for ties.
fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out = a.to_vec();
    for v in b {
        if !out.contains(v) {
            out.push(v.clone());
        }
    }
    out
}

impl Poly {
    pub fn zero(vars: &[String]) -> Self {
        Poly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: CycRat) -> Self {
        let mut p = Self::zero(vars);
        p.add_term(vec![0; vars.len()], c);
        p
    }

    /// The variable `name`; it is appended to `vars` if absent.
    pub fn var(vars: &[String], name: &str) -> Self {
        let mut vars = vars.to_vec();
        if !vars.iter().any(|v| v == name) {
            vars.push(name.to_owned());
        }
        let i = vars.iter().position(|v| v == name).unwrap();
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = Self::zero(&vars);
        p.add_term(e, CycRat::one());
        p
    }

    pub fn from_terms<I>(vars: &[String], terms: I) -> Self
    where
        I: IntoIterator<Item = (Monomial, CycRat)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length mismatch");
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Monomial, c: CycRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                let sum = &*existing + &c;
                if sum.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &CycRat)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, e: &Monomial) -> Option<&CycRat> {
        self.terms.get(e)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Re-express over `vars`, which must contain every variable that occurs.
    pub fn with_vars(&self, vars: &[String]) -> Result<Poly> {
        if vars == self.vars.as_slice() {
            return Ok(self.clone());
        }
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let target = vars.iter().position(|w| w == v);
            if target.is_none() && self.terms.keys().any(|e| e[i] != 0) {
                return Err(Error::UnknownVariable(v.clone()));
            }
            map.push(target);
        }
        let mut out = Poly::zero(vars);
        for (e, c) in &self.terms {
            let mut ne = vec![0; vars.len()];
            for (i, k) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] = *k;
                }
            }
            out.terms.insert(ne, c.clone());
        }
        Ok(out)
    }

    /// Extend the variable list by `extra` (no-op for names already present).
    pub fn extend_vars(&self, extra: &[String]) -> Poly {
        let vars = union_vars(&self.vars, extra);
        self.with_vars(&vars).expect("superset of variables")
    }

    fn aligned(&self, other: &Poly) -> (Poly, Poly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = union_vars(&self.vars, &other.vars);
        (
            self.with_vars(&vars).expect("superset"),
            other.with_vars(&vars).expect("superset"),
        )
    }

    /// Variables that actually occur with a positive exponent.
    pub fn used_vars(&self) -> Vec<String> {
        self.vars
            .iter()
            .enumerate()
            .filter(|(i, _)| self.terms.keys().any(|e| e[*i] > 0))
            .map(|(_, v)| v.clone())
            .collect()
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (mut a, b) = self.aligned(other);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }

    pub fn neg(&self) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CycRat) -> Poly {
        if c.is_zero() {
            return Poly::zero(&self.vars);
        }
        Poly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let (a, b) = self.aligned(other);
        let mut out = Poly::zero(&a.vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Monomial = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Poly {
        let mut acc = Poly::constant(&self.vars, CycRat::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Formal partial derivative.
    pub fn partial(&self, var: &str) -> Result<Poly> {
        let i = self
            .var_index(var)
            .ok_or_else(|| Error::UnknownVariable(var.to_owned()))?;
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut ne = e.clone();
            ne[i] -= 1;
            out.add_term(ne, c * &CycRat::from_int(e[i] as i64));
        }
        Ok(out)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    /// Order at the origin: least total degree of a term.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    pub fn degree_in(&self, var: &str) -> Option<u32> {
        let i = self.var_index(var)?;
        self.terms.keys().map(|e| e[i]).max()
    }

    pub fn constant_term(&self) -> CycRat {
        self.terms
            .get(&vec![0; self.vars.len()])
            .cloned()
            .unwrap_or_else(CycRat::zero)
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.constant_term().is_zero()
    }

    /// Evaluate at a point; every occurring variable must be assigned.
    pub fn eval(&self, point: &BTreeMap<String, CycRat>) -> Result<CycRat> {
        let mut vals = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match point.get(v) {
                Some(x) => vals.push(Some(x.clone())),
                None => {
                    if self.terms.keys().any(|e| e[i] > 0) {
                        return Err(Error::UnknownVariable(v.clone()));
                    }
                    vals.push(None);
                }
            }
        }
        let mut acc = CycRat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    term = &term * &vals[i].as_ref().unwrap().pow(*k as u64);
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// Substitute polynomials for some variables; the others stay symbolic.
    pub fn substitute(&self, assignment: &BTreeMap<String, Poly>) -> Poly {
        let mut vars = self.vars.clone();
        for p in assignment.values() {
            vars = union_vars(&vars, &p.vars);
        }
        let images: Vec<Poly> = self
            .vars
            .iter()
            .map(|v| match assignment.get(v) {
                Some(p) => p.with_vars(&vars).expect("superset"),
                None => Poly::var(&vars, v),
            })
            .collect();
        let mut cache: Vec<Vec<Poly>> = images
            .iter()
            .map(|p| vec![Poly::constant(&vars, CycRat::one()), p.clone()])
            .collect();
        let mut out = Poly::zero(&vars);
        for (e, c) in &self.terms {
            let mut term = Poly::constant(&vars, c.clone());
            for (i, k) in e.iter().enumerate() {
                let k = *k as usize;
                while cache[i].len() <= k {
                    let next = cache[i].last().unwrap().mul(&images[i]);
                    cache[i].push(next);
                }
                if k > 0 {
                    term = term.mul(&cache[i][k]);
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Pull back along a parametrization; every occurring variable must be assigned.
    ///
    /// With no occurring variables the result is the constant known to `t^trunc`.
    pub fn substitute_series(
        &self,
        assignment: &BTreeMap<String, PSeries>,
        trunc: Exponent,
    ) -> Result<PSeries> {
        let mut powers: Vec<Vec<PSeries>> = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let max = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
            match assignment.get(v) {
                Some(s) => {
                    let mut row = vec![PSeries::constant(CycRat::one(), trunc)];
                    for _ in 0..max {
                        let next = row.last().unwrap().mul(s).truncate(trunc);
                        row.push(next);
                    }
                    powers.push(row);
                }
                None if max == 0 => powers.push(Vec::new()),
                None => return Err(Error::UnknownVariable(v.clone())),
            }
        }
        let mut acc = PSeries::zero(trunc);
        for (e, c) in &self.terms {
            let mut term = PSeries::constant(c.clone(), trunc);
            for (i, k) in e.iter().enumerate() {
                if *k > 0 {
                    term = term.mul(&powers[i][*k as usize]);
                }
            }
            acc = acc.add(&term);
        }
        Ok(acc.truncate(trunc))
    }

    /// Rename variables; names not in `map` are kept.
    pub fn rename(&self, map: &BTreeMap<String, String>) -> Poly {
        let vars: Vec<String> = self
            .vars
            .iter()
            .map(|v| map.get(v).cloned().unwrap_or_else(|| v.clone()))
            .collect();
        Poly {
            vars,
            terms: self.terms.clone(),
        }
    }

    /// Copy with the listed variables replaced by their primed versions.
    pub fn primed(&self, which: &[String]) -> Poly {
        let map = which
            .iter()
            .map(|v| (v.clone(), prime(v)))
            .collect::<BTreeMap<_, _>>();
        self.rename(&map)
    }

    /// Exact quotient by a polynomial in a single variable power `var^k`.
    pub fn div_var_power(&self, var: &str, k: u32) -> Option<Poly> {
        let i = self.var_index(var)?;
        let mut out = Poly::zero(&self.vars);
        for (e, c) in &self.terms {
            if e[i] < k {
                return None;
            }
            let mut ne = e.clone();
            ne[i] -= k;
            out.terms.insert(ne, c.clone());
        }
        Some(out)
    }

    /// Field generated by all coefficients.
    pub fn level(&self) -> u32 {
        self.terms
            .values()
            .fold(1, |acc, c| crate::cyclotomic::lcm(acc, c.level()))
    }

    /// Largest exponent appearing in any single variable.
    pub fn max_var_degree(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().copied())
            .max()
            .unwrap_or(0)
    }

    /// Lowest-degree homogeneous part.
    pub fn initial_form(&self) -> Poly {
        let Some(o) = self.order() else {
            return self.clone();
        };
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == o)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drop every term of total degree `> d`.
    pub fn truncate_degree(&self, d: u32) -> Poly {
        Poly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() <= d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }
}

pub fn prime(v: &str) -> String {
    format!("{}'", v)
}

/// Convenience: variable names from string slices.
pub fn names(vs: &[&str]) -> Vec<String> {
    vs.iter().map(|v| (*v).to_owned()).collect()
}

/// Series assignment helper `t ↦ c·t^e` per variable.
pub fn monomial_curve(pairs: &[(&str, CycRat, i64)], trunc: i64) -> BTreeMap<String, PSeries> {
    pairs
        .iter()
        .map(|(v, c, e)| ((*v).to_owned(), PSeries::monomial(c.clone(), exp(*e), exp(trunc))))
        .collect()
}

impl PartialEq for Poly {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl Eq for Poly {}

fn write_coeff(f: &mut fmt::Formatter<'_>, c: &CycRat, first: bool, has_monomial: bool) -> fmt::Result {
    let negative = c.as_rational().map_or(false, |q| q.is_negative());
    let mag = if negative { -c } else { c.clone() };
    if first {
        if negative {
            f.write_str("-")?;
        }
    } else {
        f.write_str(if negative { " - " } else { " + " })?;
    }
    if !has_monomial {
        return write!(f, "{}", mag);
    }
    if !mag.is_one() {
        write!(f, "{}*", mag)?;
    }
    Ok(())
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // Highest total degree first reads most naturally.
        let mut terms: Vec<(&Monomial, &CycRat)> = self.terms.iter().collect();
        terms.sort_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            db.cmp(&da).then_with(|| b.cmp(a))
        });
        for (n, (e, c)) in terms.into_iter().enumerate() {
            let has_monomial = e.iter().any(|k| *k > 0);
            write_coeff(f, c, n == 0, has_monomial)?;
            let mut first_var = true;
            for (i, k) in e.iter().enumerate() {
                if *k == 0 {
                    continue;
                }
                if !first_var {
                    f.write_str("*")?;
                }
                first_var = false;
                f.write_str(&self.vars[i])?;
                if *k > 1 {
                    write!(f, "^{}", k)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {:?}", self, self.vars)
    }
}
