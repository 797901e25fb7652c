//! Membership in ideals of a local ring at the origin, certified by explicit
//! division identities `u·h = Σ aᵢ gᵢ + Σ bⱼ Fⱼ` with `u(0) = 1`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclotomic::CycRat;
use crate::linalg::{Echelon, SparseRow};
use crate::poly::{Monomial, Poly};
use crate::verdict::DivisionCertificate;

/// Beyond this many unknowns the degree search stops early.
pub const MAX_UNKNOWNS: usize = 1500;

fn common_vars(polys: &[&Poly]) -> Vec<String> {
    let mut vars: Vec<String> = Vec::new();
    for p in polys {
        for v in p.vars() {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
    }
    vars
}

/// All exponent vectors of total degree `lo..=hi` in `n` variables.
pub fn monomials(n: usize, lo: u32, hi: u32) -> Vec<Monomial> {
    let mut out = Vec::new();
    fn rec(n: usize, left: u32, cur: &mut Monomial, out: &mut Vec<Monomial>) {
        if cur.len() == n - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k);
            rec(n, left - k, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        if lo == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    for d in lo..=hi {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

fn times_monomial(p: &Poly, m: &Monomial) -> Vec<(Monomial, CycRat)> {
    p.terms()
        .map(|(e, c)| (e.iter().zip(m).map(|(a, b)| a + b).collect(), c.clone()))
        .collect()
}

/// `h` is a constant multiple of generator `i`.
pub fn generator_index(h: &Poly, gens: &[Poly]) -> Option<usize> {
    gens.iter().position(|g| proportional(h, g))
}

fn proportional(h: &Poly, g: &Poly) -> bool {
    let g = g.extend_vars(h.vars());
    let Ok(h) = h.extend_vars(g.vars()).with_vars(g.vars()) else {
        return false;
    };
    let Some((e, c)) = g.terms().next() else {
        return false;
    };
    let Some(hc) = h.coefficient(e) else {
        return false;
    };
    match c.inv() {
        Ok(ci) => g.scale(&(hc * &ci)) == h,
        Err(_) => false,
    }
}

/// Search for `u·h = Σ aᵢ gᵢ + Σ bⱼ Fⱼ` with multiplier degrees up to `max_deg`.
///
/// A certificate proves `h ∈ (g) · O_{V,0}` where `V = {F = 0}`. `None` only
/// means no certificate exists within the bound.
pub fn local_division(
    h: &Poly,
    gens: &[Poly],
    relations: &[Poly],
    max_deg: u32,
) -> Option<DivisionCertificate> {
    let mut all: Vec<&Poly> = vec![h];
    all.extend(gens.iter());
    all.extend(relations.iter());
    let vars = common_vars(&all);
    let h = h.with_vars(&vars).ok()?;
    let gens: Vec<Poly> = gens.iter().map(|g| g.with_vars(&vars).expect("superset")).collect();
    let rels: Vec<Poly> = relations
        .iter()
        .map(|g| g.with_vars(&vars).expect("superset"))
        .collect();
    let n = vars.len();
    if h.is_zero() {
        return Some(DivisionCertificate {
            unit: Poly::constant(&vars, CycRat::one()),
            coeffs: gens.iter().map(|_| Poly::zero(&vars)).collect(),
            relation_coeffs: rels.iter().map(|_| Poly::zero(&vars)).collect(),
        });
    }
    for d in 0..=max_deg {
        let unit_monos = monomials(n, 1, d);
        let mult_monos = monomials(n, 0, d);
        let blocks = gens.len() + rels.len();
        let nunknown = unit_monos.len() + blocks * mult_monos.len();
        if nunknown > MAX_UNKNOWNS {
            return None;
        }
        // Columns: unit terms, then one block per generator and relation.
        let mut eqs: BTreeMap<Monomial, SparseRow> = BTreeMap::new();
        let mut rhs: BTreeMap<Monomial, CycRat> = BTreeMap::new();
        for (e, c) in h.terms() {
            rhs.insert(e.clone(), -c);
        }
        let mut col = 0usize;
        for m in &unit_monos {
            for (e, c) in times_monomial(&h, m) {
                eqs.entry(e).or_default().insert(col, c);
            }
            col += 1;
        }
        for g in gens.iter().chain(rels.iter()) {
            for m in &mult_monos {
                for (e, c) in times_monomial(g, m) {
                    eqs.entry(e).or_default().insert(col, -&c);
                }
                col += 1;
            }
        }
        let mut keys: Vec<&Monomial> = eqs.keys().collect();
        for k in rhs.keys() {
            if !eqs.contains_key(k) {
                keys.push(k);
            }
        }
        let mut ech = Echelon::new();
        for k in keys {
            let row = eqs.get(k).cloned().unwrap_or_default();
            let r = rhs.get(k).cloned().unwrap_or_else(CycRat::zero);
            ech.push(row, r);
            if !ech.is_consistent() {
                break;
            }
        }
        let Some(x) = ech.solve(nunknown) else {
            continue;
        };
        let mut unit = Poly::constant(&vars, CycRat::one());
        let mut idx = 0;
        for m in &unit_monos {
            unit.add_term(m.clone(), x[idx].clone());
            idx += 1;
        }
        let mut polys = Vec::with_capacity(blocks);
        for _ in 0..blocks {
            let mut p = Poly::zero(&vars);
            for m in &mult_monos {
                p.add_term(m.clone(), x[idx].clone());
                idx += 1;
            }
            polys.push(p);
        }
        let relation_coeffs = polys.split_off(gens.len());
        let cert = DivisionCertificate {
            unit,
            coeffs: polys,
            relation_coeffs,
        };
        debug_assert!(verify_division(&h, &gens, &rels, &cert));
        return Some(cert);
    }
    None
}

/// Check `u·h - Σ aᵢ gᵢ - Σ bⱼ Fⱼ = 0` and `u(0) ≠ 0` exactly.
pub fn verify_division(h: &Poly, gens: &[Poly], relations: &[Poly], cert: &DivisionCertificate) -> bool {
    if cert.coeffs.len() != gens.len() || cert.relation_coeffs.len() != relations.len() {
        return false;
    }
    if cert.unit.constant_term().is_zero() {
        return false;
    }
    let mut acc = cert.unit.mul(h);
    for (a, g) in cert.coeffs.iter().zip(gens) {
        acc = acc.sub(&a.mul(g));
    }
    for (b, f) in cert.relation_coeffs.iter().zip(relations) {
        acc = acc.sub(&b.mul(f));
    }
    acc.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(2, 0, 2).len(), 6);
        assert_eq!(monomials(3, 1, 1).len(), 3);
    }

    #[test]
    fn direct_member() {
        let gens = [p("2*x"), p("5*y^4")];
        let c = local_division(&p("y^4"), &gens, &[p("x^2+y^5")], 4).unwrap();
        assert!(verify_division(&p("y^4"), &gens, &[p("x^2+y^5")], &c));
    }

    #[test]
    fn needs_a_unit() {
        // y^4 (5y + 4) = y·(5y^4 + 4y^3): y^4 is a local member only.
        let gens = [p("x"), p("5*y^5 + 4*y^4")];
        let c = local_division(&p("y^4"), &gens, &[], 3).unwrap();
        assert!(!c.unit.constant_term().is_zero());
        assert!(c.unit.num_terms() > 1);
    }

    #[test]
    fn non_member_has_no_certificate() {
        let gens = [p("2*x"), p("5*y^4")];
        assert!(local_division(&p("y^3"), &gens, &[p("x^2+y^5")], 4).is_none());
    }

    #[test]
    fn generator_detection() {
        let gens = [p("2*x"), p("5*y^4")];
        assert_eq!(generator_index(&p("x"), &gens), Some(0));
        assert_eq!(generator_index(&p("y^4"), &gens), Some(1));
        assert_eq!(generator_index(&p("y^3"), &gens), None);
    }
}
