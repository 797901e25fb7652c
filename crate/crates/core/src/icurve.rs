//! Ideals on plane-curve germs: pullbacks to the normalization, integral
//! closure membership and multiplicities.

use alloc::format;
use alloc::vec::Vec;

use crate::division::generator_index;
use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::puiseux::{default_trunc, puiseux_branches, verify_branch, Branch};
use crate::series::{exp, Exponent, Order, PSeries};
use crate::verdict::{BranchOrder, BranchWitness, Certificate, Verdict, Witness};

/// Truncation used for the first attempt and the cap for iterative doubling.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// `None` means `4·deg(f)²`.
    pub trunc: Option<i64>,
    pub ceiling: i64,
}

impl Limits {
    pub const DEFAULT_CEILING: i64 = 4096;

    pub fn initial(&self, f: &Poly) -> i64 {
        self.trunc.unwrap_or_else(|| default_trunc(f)).min(self.ceiling)
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            trunc: None,
            ceiling: Self::DEFAULT_CEILING,
        }
    }
}

/// Run `op` at the initial truncation, doubling it on
/// [`Error::TruncationInsufficient`] until the ceiling is passed.
pub fn deepen<T, F>(f: &Poly, limits: Limits, mut op: F) -> Result<T>
where
    F: FnMut(i64) -> Result<T>,
{
    let mut trunc = limits.initial(f).max(2);
    loop {
        match op(trunc) {
            Err(Error::TruncationInsufficient(msg)) => {
                if trunc >= limits.ceiling {
                    return Err(Error::TruncationInsufficient(format!(
                        "{} (ceiling {} reached)",
                        msg, limits.ceiling
                    )));
                }
                trunc = (2 * trunc).min(limits.ceiling);
            }
            other => return other,
        }
    }
}

/// An ideal of the local ring of `{curve = 0}` at the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct IdealOnCurve {
    pub gens: Vec<Poly>,
    pub curve: Poly,
    pub branches: Vec<Branch>,
    pub trunc: i64,
}

impl IdealOnCurve {
    /// Compute the branches of `curve` to order `trunc`.
    pub fn new(gens: Vec<Poly>, curve: Poly, trunc: i64) -> Result<Self> {
        let branches = puiseux_branches(&curve, trunc)?;
        Self::with_branches(gens, curve, branches, trunc)
    }

    /// Use caller-supplied branches, each checked with `verify_branch`.
    pub fn with_branches(gens: Vec<Poly>, curve: Poly, branches: Vec<Branch>, trunc: i64) -> Result<Self> {
        if gens.is_empty() {
            return Err(Error::EmptyIdeal);
        }
        if let Some(g) = gens.iter().find(|g| !g.vanishes_at_origin()) {
            return Err(Error::InvalidArgument(format!(
                "generator {} does not vanish at the origin",
                g
            )));
        }
        for b in &branches {
            let t = b.trunc().to_integer().min(trunc);
            if !verify_branch(&curve, b, t) {
                return Err(Error::DegenerateCurve(format!("{} is not a branch of {}", b, curve)));
            }
        }
        Ok(IdealOnCurve {
            gens,
            curve,
            branches,
            trunc,
        })
    }

    fn branch(&self, b: &Branch) -> Branch {
        b.extended(exp(self.trunc))
    }
}

/// Pullbacks of the generators along `b` and their least order.
pub fn pullback_ideal(ideal: &IdealOnCurve, b: &Branch) -> Result<(Vec<PSeries>, Exponent)> {
    let b = ideal.branch(b);
    let t = b.trunc().min(exp(ideal.trunc));
    let pulled: Vec<PSeries> = ideal
        .gens
        .iter()
        .map(|g| b.pullback(g, t))
        .collect::<Result<_>>()?;
    match pulled.iter().filter_map(|s| s.order().finite()).min() {
        Some(m) => Ok((pulled, m)),
        None if b.exact && ideal.gens.iter().all(|g| vanishes_exactly(g, &b)) => {
            Err(Error::NotFiniteColength)
        }
        None => Err(Error::TruncationInsufficient(format!(
            "every generator vanishes to order {} on {}",
            t, b
        ))),
    }
}

/// For exact branches: `g∘b` is the zero polynomial.
fn vanishes_exactly(g: &Poly, b: &Branch) -> bool {
    let comp_deg = b
        .comps
        .iter()
        .filter_map(|c| c.terms().map(|(e, _)| e).max())
        .max()
        .unwrap_or_else(|| exp(0));
    let bound = comp_deg * exp(g.total_degree().unwrap_or(0) as i64) + exp(1);
    let b = b.extended(bound);
    matches!(b.pullback(g, bound), Ok(s) if s.is_zero())
}

/// Decide `h ∈ \overline{I}` by comparing orders on every branch.
pub fn ic_membership(h: &Poly, ideal: &IdealOnCurve) -> Result<Verdict> {
    if let Some(index) = generator_index(h, &ideal.gens) {
        return Ok(Verdict::CertifiedYes(Certificate::Generator { index }));
    }
    let mut table = Vec::with_capacity(ideal.branches.len());
    for (i, b0) in ideal.branches.iter().enumerate() {
        let (_, min) = pullback_ideal(ideal, b0)?;
        let b = ideal.branch(b0);
        let t = b.trunc().min(exp(ideal.trunc));
        let target = b.pullback(h, t)?.order();
        let row = BranchOrder {
            branch: i,
            target,
            ideal: min,
        };
        if let Order::AtLeast(k) = target {
            if k < min {
                return Err(Error::TruncationInsufficient(format!(
                    "target known to order {} on branch {}, ideal order {}",
                    k, i, min
                )));
            }
        }
        if !row.holds() {
            return Ok(Verdict::CertifiedNo(Witness::Branch(BranchWitness {
                branch_index: i,
                branch: b0.clone(),
                target_order: target,
                ideal_order: min,
            })));
        }
        table.push(row);
    }
    Ok(Verdict::CertifiedYes(Certificate::BranchOrders(table)))
}

/// `Σ_b ord(φ_b*(I))`, the multiplicity of `I` on the curve.
pub fn ideal_multiplicity(ideal: &IdealOnCurve) -> Result<u64> {
    let mut total = 0u64;
    for b in &ideal.branches {
        let (_, m) = pullback_ideal(ideal, b)?;
        total += m.to_integer() as u64;
    }
    Ok(total)
}

/// Branch-by-branch orders of `I`, in branch order.
pub fn branch_orders(ideal: &IdealOnCurve) -> Result<Vec<Exponent>> {
    ideal
        .branches
        .iter()
        .map(|b| pullback_ideal(ideal, b).map(|(_, m)| m))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;

    fn p(s: &str) -> Poly {
        parse_poly(s).unwrap()
    }

    fn jac(f: &str) -> IdealOnCurve {
        let f = p(f);
        let gens = vec![f.partial("x").unwrap(), f.partial("y").unwrap()];
        let t = default_trunc(&f);
        IdealOnCurve::new(gens, f, t).unwrap()
    }

    #[test]
    fn pullback_orders() {
        let i = jac("x^2+y^5");
        let (s, m) = pullback_ideal(&i, &i.branches[0]).unwrap();
        assert_eq!(m, exp(5));
        assert_eq!(s[0].order(), Order::Finite(exp(5)));
        assert_eq!(s[1].order(), Order::Finite(exp(8)));
        let f = p("x^2+y^5");
        let m = IdealOnCurve::new(vec![p("x"), p("y")], f, 100).unwrap();
        assert_eq!(ideal_multiplicity(&m).unwrap(), 2);
    }

    #[test]
    fn vanishing_generator_is_flagged() {
        let i = IdealOnCurve::new(vec![p("y")], p("x*y"), 20).unwrap();
        let axis = i
            .branches
            .iter()
            .find(|b| b.comps[1].is_zero())
            .unwrap()
            .clone();
        assert_eq!(pullback_ideal(&i, &axis).unwrap_err(), Error::NotFiniteColength);
        assert_eq!(ideal_multiplicity(&i).unwrap_err(), Error::NotFiniteColength);
    }

    #[test]
    fn threshold() {
        let i = jac("x^2+y^5");
        assert!(ic_membership(&p("y^3"), &i).unwrap().is_yes());
        match ic_membership(&p("y^2"), &i).unwrap() {
            Verdict::CertifiedNo(Witness::Branch(w)) => {
                assert_eq!(w.target_order, Order::Finite(exp(4)));
                assert_eq!(w.ideal_order, exp(5));
            }
            v => panic!("{:?}", v),
        }
        assert_eq!(
            ic_membership(&p("2*x"), &i).unwrap(),
            Verdict::CertifiedYes(Certificate::Generator { index: 0 })
        );
    }

    #[test]
    fn node_multiplicity() {
        let i = IdealOnCurve::new(vec![p("x"), p("y")], p("x*y"), 20).unwrap();
        assert_eq!(ideal_multiplicity(&i).unwrap(), 2);
    }

    #[test]
    fn deepening_stops_at_ceiling() {
        let f = p("x^2+y^5");
        let lim = Limits {
            trunc: Some(4),
            ceiling: 4,
        };
        let r = deepen(&f, lim, |t| {
            let i = IdealOnCurve::new(vec![p("2*x"), p("5*y^4")], f.clone(), t)?;
            ideal_multiplicity(&i)
        });
        assert!(matches!(r, Err(Error::TruncationInsufficient(_))), "{:?}", r);
        let r = deepen(&f, Limits { trunc: Some(4), ceiling: 64 }, |t| {
            let i = IdealOnCurve::new(vec![p("2*x"), p("5*y^4")], f.clone(), t)?;
            ideal_multiplicity(&i)
        });
        assert_eq!(r.unwrap(), 5);
    }
}
