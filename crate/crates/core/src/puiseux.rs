//! Newton–Puiseux expansion of plane-curve germs at the origin.
//!
//! Each Newton polygon edge with weights `(q, p)` (coprime) is resolved by the
//! substitution `x = α t^q`, `y = t^p (β + y₁)` with `α = u^s`, `β = u^r`,
//! `rq - sp = 1`, where `u` is a root of the edge polynomial. This keeps every
//! coefficient inside the field generated by the roots `u` themselves, so no
//! radicals are ever adjoined and all exponents stay integral.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;

use crate::cyclotomic::{lcm, CycRat};
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::series::{exp, Exponent, Order, PSeries};
use crate::upoly::{nth_root, UPoly};

/// One branch `t ↦ (z₁(t), …, z_m(t))` of a curve germ.
#[derive(Clone, Debug, PartialEq)]
pub struct Branch {
    pub vars: Vec<String>,
    pub comps: Vec<PSeries>,
    /// Order of the minimal-order component.
    pub mult: u32,
    pub source: Poly,
    /// Every component is known exactly (a polynomial in `t`).
    pub exact: bool,
}

impl Branch {
    /// Build a branch from explicit components; `mult` is derived.
    pub fn new(vars: Vec<String>, comps: Vec<PSeries>, source: Poly, exact: bool) -> Result<Branch> {
        if vars.len() != comps.len() {
            return Err(Error::InvalidArgument("one component per variable required".into()));
        }
        let mut mult: Option<Exponent> = None;
        for c in &comps {
            match c.order() {
                Order::Finite(e) => {
                    if e <= exp(0) {
                        return Err(Error::DegenerateCurve(
                            "branch components must vanish at t = 0".into(),
                        ));
                    }
                    mult = Some(mult.map_or(e, |m| m.min(e)));
                }
                Order::AtLeast(_) => {}
            }
        }
        let mult = mult.ok_or_else(|| Error::DegenerateCurve("constant branch".into()))?;
        if !mult.is_integer() {
            return Err(Error::DegenerateCurve("branch must be given in integer exponents".into()));
        }
        Ok(Branch {
            vars,
            comps,
            mult: mult.to_integer() as u32,
            source,
            exact,
        })
    }

    pub fn trunc(&self) -> Exponent {
        self.comps
            .iter()
            .map(PSeries::trunc)
            .min()
            .unwrap_or_else(|| exp(0))
    }

    pub fn assignment(&self) -> BTreeMap<String, PSeries> {
        self.vars
            .iter()
            .cloned()
            .zip(self.comps.iter().cloned())
            .collect()
    }

    /// Pull a polynomial back along this branch.
    pub fn pullback(&self, h: &Poly, trunc: Exponent) -> Result<PSeries> {
        h.substitute_series(&self.assignment(), trunc)
    }

    /// Exact branches re-expressed with components known to `trunc`.
    pub fn extended(&self, trunc: Exponent) -> Branch {
        if !self.exact || trunc <= self.trunc() {
            return self.clone();
        }
        let mut b = self.clone();
        b.comps = self
            .comps
            .iter()
            .map(|c| PSeries::from_terms(trunc, c.terms().map(|(e, x)| (e, x.clone()))))
            .collect();
        b
    }

    /// Components composed with a reparametrization `t ↦ u(t)`.
    pub fn reparametrize(&self, u: &PSeries) -> Result<Vec<PSeries>> {
        self.comps.iter().map(|c| c.compose(u)).collect()
    }

    pub fn level(&self) -> u32 {
        self.comps.iter().fold(1, |acc, c| lcm(acc, c.level()))
    }

    /// Primitive: not a reparametrization `t ↦ t^k` of another branch.
    pub fn is_primitive(&self) -> bool {
        let mut g = 0i64;
        for c in &self.comps {
            for (e, _) in c.terms() {
                if !e.is_integer() {
                    return false;
                }
                g = g.gcd(&e.to_integer());
            }
        }
        g == 1
    }

    /// Exponent/coefficient pairs per component.
    pub fn component_terms(&self) -> Vec<Vec<(Exponent, CycRat)>> {
        self.comps
            .iter()
            .map(|c| c.terms().map(|(e, x)| (e, x.clone())).collect())
            .collect()
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.comps.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}", c)?;
            if !self.exact && !c.is_zero() && c.num_terms() > 1 {
                write!(f, " + O(t^{})", c.trunc())?;
            }
        }
        write!(f, ") [mult {}]", self.mult)
    }
}

/// Default truncation `4·deg(f)²`.
pub fn default_trunc(f: &Poly) -> i64 {
    let d = f.total_degree().unwrap_or(1).max(1) as i64;
    4 * d * d
}

const XV: &str = "#x";
const YV: &str = "#y";
const TV: &str = "#t";
const UV: &str = "#u";

fn canonical(f: &Poly) -> Poly {
    let map: BTreeMap<String, String> = [
        (f.vars()[0].clone(), XV.to_owned()),
        (f.vars()[1].clone(), YV.to_owned()),
    ]
    .into_iter()
    .collect();
    f.rename(&map)
}

fn two_var(f: &Poly) -> Result<Poly> {
    let used = f.used_vars();
    if used.len() > 2 {
        return Err(Error::InvalidArgument(format!(
            "plane curve expected, found variables {:?}",
            used
        )));
    }
    if f.vars().len() == 2 {
        return Ok(f.clone());
    }
    let mut vars: Vec<String> = used;
    for v in f.vars() {
        if vars.len() == 2 {
            break;
        }
        if !vars.contains(v) {
            vars.push(v.clone());
        }
    }
    if vars.len() < 2 {
        return Err(Error::InvalidArgument("plane curve needs two coordinates".into()));
    }
    f.with_vars(&vars)
}

// Bivariate polynomials as polynomials in y with coefficients in K[x].
type Bi = Vec<UPoly>;

fn to_bi(f: &Poly) -> Bi {
    let mut rows: Vec<Vec<CycRat>> = Vec::new();
    for (e, c) in f.terms() {
        let (i, j) = (e[0] as usize, e[1] as usize);
        if rows.len() <= j {
            rows.resize(j + 1, Vec::new());
        }
        if rows[j].len() <= i {
            rows[j].resize(i + 1, CycRat::zero());
        }
        rows[j][i] = c.clone();
    }
    rows.into_iter().map(UPoly::new).collect()
}

fn from_bi(b: &Bi, vars: &[String]) -> Poly {
    let mut terms = Vec::new();
    for (j, row) in b.iter().enumerate() {
        for (i, c) in row.coeffs().iter().enumerate() {
            if !c.is_zero() {
                terms.push((vec![i as u32, j as u32], c.clone()));
            }
        }
    }
    Poly::from_terms(vars, terms)
}

fn bi_trim(mut b: Bi) -> Bi {
    while b.last().map_or(false, UPoly::is_zero) {
        b.pop();
    }
    b
}

fn bi_content(b: &Bi) -> UPoly {
    b.iter()
        .fold(UPoly::zero(), |g, c| if c.is_zero() { g } else { g.gcd(c) })
}

fn bi_div_scalar(b: &Bi, c: &UPoly) -> Bi {
    b.iter()
        .map(|x| x.divrem(c).expect("nonzero content").0)
        .collect()
}

fn bi_prem(a: &Bi, b: &Bi) -> Bi {
    let mut r = bi_trim(a.clone());
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let shift = dr - db;
        let mut next: Bi = r.iter().map(|c| c.mul(&lb)).collect();
        for (k, bc) in b.iter().enumerate() {
            next[k + shift] = next[k + shift].sub(&bc.mul(&lr));
        }
        r = bi_trim(next);
    }
    r
}

fn bi_primitive(b: &Bi) -> Bi {
    let c = bi_content(b);
    if c.degree() == Some(0) {
        return b.clone();
    }
    bi_div_scalar(b, &c)
}

/// Gcd of primitive bivariate polynomials, primitive in y.
fn bi_gcd(a: &Bi, b: &Bi) -> Bi {
    let mut a = bi_primitive(a);
    let mut b = bi_primitive(b);
    if a.len() < b.len() {
        core::mem::swap(&mut a, &mut b);
    }
    while !b.is_empty() {
        let r = bi_prem(&a, &b);
        a = b;
        b = if r.is_empty() { r } else { bi_primitive(&r) };
    }
    a
}

/// Exact quotient `a / b` in `K[x][y]`.
fn bi_exact_div(a: &Bi, b: &Bi) -> Bi {
    let mut r = bi_trim(a.clone());
    let db = b.len() - 1;
    if r.len() <= db {
        return Vec::new();
    }
    let mut q: Bi = vec![UPoly::zero(); r.len() - db];
    while r.len() > db {
        let dr = r.len() - 1;
        let (c, rem) = r[dr].divrem(&b[db]).expect("nonzero");
        debug_assert!(rem.is_zero());
        let shift = dr - db;
        for (k, bc) in b.iter().enumerate() {
            r[k + shift] = r[k + shift].sub(&bc.mul(&c));
        }
        q[shift] = c;
        r = bi_trim(r);
    }
    q
}

fn bi_derive_y(b: &Bi) -> Bi {
    b.iter()
        .enumerate()
        .skip(1)
        .map(|(j, c)| c.scale(&CycRat::from_int(j as i64)))
        .collect()
}

/// Remove repeated factors of a polynomial in two variables.
pub fn squarefree_part(f: &Poly) -> Result<Poly> {
    let f = two_var(f)?;
    if f.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    if !f.vanishes_at_origin() {
        return Err(Error::NoSingularPoint);
    }
    let b = bi_trim(to_bi(&f));
    let content = bi_content(&b);
    let prim = bi_div_scalar(&b, &content);
    let dy = bi_trim(bi_derive_y(&prim));
    let reduced = if dy.is_empty() {
        prim
    } else {
        let g = bi_gcd(&prim, &dy);
        if g.len() <= 1 {
            prim
        } else {
            bi_exact_div(&prim, &g)
        }
    };
    let c_sq = {
        let d = content.derive();
        let g = content.gcd(&d);
        if g.degree().unwrap_or(0) == 0 {
            content.clone()
        } else {
            content.divrem(&g)?.0
        }
    };
    let out: Bi = reduced.iter().map(|c| c.mul(&c_sq)).collect();
    Ok(from_bi(&out, f.vars()))
}

/// Branches of `{f = 0}` at the origin with components known to `t^trunc`.
pub fn puiseux_branches(f: &Poly, trunc: i64) -> Result<Vec<Branch>> {
    let f2 = two_var(f)?;
    if f2.is_zero() {
        return Err(Error::InvalidArgument("zero polynomial".into()));
    }
    if !f2.vanishes_at_origin() {
        return Err(Error::NoSingularPoint);
    }
    if trunc < 2 {
        return Err(Error::TruncationInsufficient(format!("truncation {} too small", trunc)));
    }
    let sq = squarefree_part(&f2)?;
    let pairs = expand(&canonical(&sq), trunc)?;
    let mut out = Vec::with_capacity(pairs.len());
    for (x, y, exact) in pairs {
        let (x, y) = normalize(x, y);
        let b = Branch::new(f2.vars().to_vec(), vec![x, y], f.clone(), exact)?;
        if !b.is_primitive() {
            // Only truncation can hide the terms that make a branch primitive.
            return Err(Error::TruncationInsufficient(format!(
                "truncation {} hides the branch {}",
                trunc, b
            )));
        }
        out.push(b);
    }
    Ok(out)
}

/// `true` iff `f` pulled back along `b` vanishes to order at least `trunc`.
pub fn verify_branch(f: &Poly, b: &Branch, trunc: i64) -> bool {
    let t = exp(trunc);
    if b.trunc() < t {
        return false;
    }
    match b.pullback(f, t) {
        Ok(s) => s.is_zero() && s.trunc() >= t,
        Err(_) => false,
    }
}

type Expansion = (PSeries, PSeries, bool);

/// Branches of a polynomial in `(#x, #y)` through the origin.
fn expand(g: &Poly, trunc: i64) -> Result<Vec<Expansion>> {
    let t_full = exp(trunc);
    let mut out = Vec::new();
    let i_min = g.terms().map(|(e, _)| e[0]).min().unwrap_or(0);
    let j_min = g.terms().map(|(e, _)| e[1]).min().unwrap_or(0);
    if i_min > 0 {
        out.push((PSeries::zero(t_full), PSeries::t(t_full), true));
    }
    if j_min > 0 {
        out.push((PSeries::t(t_full), PSeries::zero(t_full), true));
    }
    let g = g
        .div_var_power(XV, i_min)
        .and_then(|h| h.div_var_power(YV, j_min))
        .expect("monomial factor divides");
    if !g.vanishes_at_origin() {
        return Ok(out);
    }
    let support: BTreeMap<(u32, u32), CycRat> = g
        .terms()
        .map(|(e, c)| ((e[0], e[1]), c.clone()))
        .collect();
    for (p1, p2) in lower_hull(&support) {
        let di = (p2.0 - p1.0) as i64;
        let dj = (p1.1 - p2.1) as i64;
        let l = di.gcd(&dj);
        let q = dj / l;
        let p = di / l;
        let m = q * p1.0 as i64 + p * p1.1 as i64;
        let edge: Vec<CycRat> = (0..=l)
            .map(|k| {
                let i = p2.0 as i64 - p * k;
                let j = p2.1 as i64 + q * k;
                support
                    .get(&(i as u32, j as u32))
                    .cloned()
                    .unwrap_or_else(CycRat::zero)
            })
            .collect();
        let r_exp = if p == 1 { 0 } else { mod_inverse(q, p) };
        let s_exp = (r_exp * q - 1) / p;
        for (u, mu) in UPoly::new(edge).roots()? {
            if u.is_zero() {
                continue;
            }
            let alpha = u.powi(s_exp)?;
            let beta = u.powi(r_exp)?;
            let g1 = edge_transform(&g, &alpha, &beta, q as u32, p as u32, m as u32);
            if mu == 1 {
                let (y1, exact) = newton_solve(&g1, trunc)?;
                let x = PSeries::monomial(alpha.clone(), exp(q), t_full);
                let y = y1
                    .add(&PSeries::constant(beta.clone(), t_full))
                    .shift(exp(p))
                    .truncate(t_full);
                out.push((x, y, exact));
            } else {
                for (ct, cy, exact) in expand(&g1, trunc)? {
                    if ct.is_zero() {
                        return Err(Error::DegenerateCurve(
                            "edge transform acquired a parameter-axis branch".into(),
                        ));
                    }
                    let x = ct.pow(q as u32).scale(&alpha).truncate(t_full);
                    let y = cy
                        .add(&PSeries::constant(beta.clone(), t_full))
                        .mul(&ct.pow(p as u32))
                        .truncate(t_full);
                    out.push((x, y, exact));
                }
            }
        }
    }
    Ok(out)
}

/// Lower-left Newton polygon edges, each as (upper-left, lower-right) endpoints.
fn lower_hull(support: &BTreeMap<(u32, u32), CycRat>) -> Vec<((u32, u32), (u32, u32))> {
    let start = support
        .keys()
        .filter(|(i, _)| *i == 0)
        .min_by_key(|(_, j)| *j)
        .copied()
        .expect("x does not divide");
    let end = support
        .keys()
        .filter(|(_, j)| *j == 0)
        .min_by_key(|(i, _)| *i)
        .copied()
        .expect("y does not divide");
    let mut edges = Vec::new();
    let mut cur = start;
    while cur != end {
        // Next vertex: the steepest descent, farthest on ties.
        let mut best: Option<(u32, u32)> = None;
        for &(i, j) in support.keys() {
            if i <= cur.0 || j >= cur.1 {
                continue;
            }
            best = match best {
                None => Some((i, j)),
                Some(b) => {
                    // slope (j - cur.1)/(i - cur.0), compare by cross-multiplication
                    let lhs = (j as i64 - cur.1 as i64) * (b.0 as i64 - cur.0 as i64);
                    let rhs = (b.1 as i64 - cur.1 as i64) * (i as i64 - cur.0 as i64);
                    if lhs < rhs || (lhs == rhs && i > b.0) {
                        Some((i, j))
                    } else {
                        Some(b)
                    }
                }
            };
        }
        let next = best.expect("hull reaches the x axis");
        edges.push((cur, next));
        cur = next;
    }
    edges
}

fn mod_inverse(a: i64, m: i64) -> i64 {
    let e = a.extended_gcd(&m);
    e.x.rem_euclid(m)
}

/// `g(α t^q, t^p (β + u)) / t^m` as a polynomial in `(#x, #y)` standing for `(t, u)`.
fn edge_transform(g: &Poly, alpha: &CycRat, beta: &CycRat, q: u32, p: u32, m: u32) -> Poly {
    let vars = [TV.to_owned(), UV.to_owned()];
    let t = Poly::var(&vars, TV);
    let u = Poly::var(&vars, UV);
    let x_img = t.pow(q).scale(alpha);
    let y_img = t.pow(p).mul(&u.add(&Poly::constant(&vars, beta.clone())));
    let mut map = BTreeMap::new();
    map.insert(XV.to_owned(), x_img);
    map.insert(YV.to_owned(), y_img);
    let sub = g.substitute(&map).with_vars(&vars).expect("only t and u remain");
    let div = sub.div_var_power(TV, m).expect("edge weight divides");
    let back: BTreeMap<String, String> = [(TV.to_owned(), XV.to_owned()), (UV.to_owned(), YV.to_owned())]
        .into_iter()
        .collect();
    div.rename(&back)
}

/// Power series `y(t)` with `g(t, y(t)) = 0`, `y(0) = 0`, by Newton iteration.
///
/// `g` is a polynomial in `(#x, #y)` read as `(t, y)` with `∂g/∂y(0,0) ≠ 0`.
fn newton_solve(g: &Poly, trunc: i64) -> Result<(PSeries, bool)> {
    let gy = g.partial(YV)?;
    let mut approx: Vec<(Exponent, CycRat)> = Vec::new();
    let mut prec = 1i64;
    let mut rounds_at_full = 0;
    loop {
        let tp = exp(prec);
        let ys = PSeries::from_terms(tp, approx.iter().cloned());
        let mut assign = BTreeMap::new();
        assign.insert(XV.to_owned(), PSeries::t(tp));
        assign.insert(YV.to_owned(), ys.clone());
        let r = g.substitute_series(&assign, tp)?;
        if prec == trunc && r.is_zero() {
            let exact = approx.len() <= 6 && exact_root(g, &approx);
            return Ok((PSeries::from_terms(exp(trunc), approx), exact));
        }
        let d = gy.substitute_series(&assign, tp)?;
        let corr = r.div(&d)?;
        let next = ys.sub(&corr).truncate(tp);
        approx = next.terms().map(|(e, c)| (e, c.clone())).collect();
        if prec == trunc {
            rounds_at_full += 1;
            if rounds_at_full > 4 {
                return Err(Error::TruncationInsufficient(
                    "Newton iteration failed to converge".into(),
                ));
            }
        }
        prec = (2 * prec).min(trunc);
    }
}

/// Whether the polynomial approximant is an exact root.
fn exact_root(g: &Poly, approx: &[(Exponent, CycRat)]) -> bool {
    let vars = [XV.to_owned()];
    let t = Poly::var(&vars, XV);
    let mut y = Poly::zero(&vars);
    for (e, c) in approx {
        y = y.add(&t.pow(e.to_integer() as u32).scale(c));
    }
    let mut map = BTreeMap::new();
    map.insert(YV.to_owned(), y);
    g.substitute(&map).is_zero()
}

/// Unit normalization: make the minimal-order component monic when the
/// needed root already lies in the coefficient field.
fn normalize(x: PSeries, y: PSeries) -> (PSeries, PSeries) {
    let (min, other) = match (x.order(), y.order()) {
        (Order::Finite(a), Order::Finite(b)) if b < a => (&y, &x),
        (Order::Finite(_), _) => (&x, &y),
        _ => (&y, &x),
    };
    let Some((k, a)) = min.leading().map(|(e, c)| (e, c.clone())) else {
        return (x, y);
    };
    let k = k.to_integer() as u32;
    let level = lcm(x.level(), y.level());
    let scale = a
        .inv()
        .ok()
        .and_then(|ai| nth_root(&ai, k))
        .filter(|c| level % c.level() == 0 && !c.is_one())
        .or_else(|| {
            // Only a sign flip is available: use it to make the other
            // component's leading coefficient positive.
            let (e, c) = other.leading()?;
            let odd = e.to_integer() % 2 != 0;
            let negative = c.as_rational().map_or(false, |q| q < &num_rational::BigRational::from_integer(0.into()));
            (k % 2 == 0 && odd && negative).then(|| CycRat::from_int(-1))
        });
    match scale {
        Some(c) => (rescale(&x, &c), rescale(&y, &c)),
        None => (x, y),
    }
}

/// `s(c·t)`.
fn rescale(s: &PSeries, c: &CycRat) -> PSeries {
    PSeries::from_terms(
        s.trunc(),
        s.terms().map(|(e, x)| (e, x * &c.pow(e.to_integer() as u64))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&p("x^2+y^5")).unwrap(), p("x^2+y^5"));
        assert_eq!(squarefree_part(&p("x^2*y")).unwrap(), p("x*y"));
        let s = squarefree_part(&p("(x+y)^2")).unwrap();
        assert!(s.total_degree() == Some(1) && s.num_terms() == 2);
        assert_eq!(squarefree_part(&p("x^2+y+1")), Err(Error::NoSingularPoint));
    }

    #[test]
    fn cusp_branches() {
        let b = puiseux_branches(&p("x^2-y^3"), 24).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].to_string(), "(t^3, t^2) [mult 2]");
        let b = puiseux_branches(&p("x^2+y^5"), 40).unwrap();
        assert_eq!(b[0].to_string(), "(t^5, -t^2) [mult 2]");
        let b = puiseux_branches(&p("x^2+y^7"), 40).unwrap();
        assert_eq!(b[0].to_string(), "(t^7, -t^2) [mult 2]");
    }

    #[test]
    fn axes() {
        let b = puiseux_branches(&p("x*y"), 8).unwrap();
        assert_eq!(b.len(), 2);
        assert_eq!(b[0].to_string(), "(0, t) [mult 1]");
        assert_eq!(b[1].to_string(), "(t, 0) [mult 1]");
    }

    #[test]
    fn quasi_homogeneous_splitting() {
        // gcd(4, 6) = 2 branches, each with orders (3, 2).
        let f = p("x^4+y^6");
        let b = puiseux_branches(&f, 40).unwrap();
        assert_eq!(b.len(), 2);
        for br in &b {
            assert!(verify_branch(&f, br, 40));
            assert_eq!(br.comps[0].order(), Order::Finite(exp(3)));
            assert_eq!(br.comps[1].order(), Order::Finite(exp(2)));
        }
    }

    #[test]
    fn non_trivial_series() {
        let f = p("y^2 - x^3 - x^4");
        let b = puiseux_branches(&f, 30).unwrap();
        assert_eq!(b.len(), 1);
        assert!(verify_branch(&f, &b[0], 30));
        assert!(!b[0].exact);
    }

    #[test]
    fn multiple_edge_roots_recurse() {
        // (y - x^2)^2 - x^5: both branches share the tangent y = x^2.
        let f = p("(y - x^2)^2 - x^5");
        let b = puiseux_branches(&f, 30).unwrap();
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].mult, 2);
        assert!(verify_branch(&f, &b[0], 30));
        let f = p("(y - x^2)^2 - x^6");
        let b = puiseux_branches(&f, 30).unwrap();
        assert_eq!(b.len(), 2);
        for br in &b {
            assert!(verify_branch(&f, br, 30));
        }
    }

    #[test]
    fn verify_rejects_wrong_branch() {
        let f = p("x^2+y^5");
        let good = puiseux_branches(&f, 30).unwrap().remove(0);
        assert!(verify_branch(&f, &good, 30));
        let bad = Branch::new(
            good.vars.clone(),
            vec![PSeries::t(exp(30)).pow(5), PSeries::t(exp(30)).pow(2)],
            f.clone(),
            true,
        )
        .unwrap();
        assert!(!verify_branch(&f, &bad, 30));
    }
}
