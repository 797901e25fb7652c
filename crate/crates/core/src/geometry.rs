//! Metric probes: distances between hyperplanes in sup-norm, the product
//! lemma, tangent-plane commensurability and Lipschitz exponents along
//! pair-curves. Floating point is confined to this module.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::conditions::Family;
use crate::cyclotomic::CycRat;
use crate::doubling::{curve_trunc, side_components};
use crate::error::{Error, Result};
use crate::icurve::IdealOnCurve;
use crate::poly::Poly;
use crate::puiseux::{default_trunc, puiseux_branches};
use crate::series::{Exponent, Order, PSeries};
use crate::verdict::PairCurve;

/// Default relative tolerance for floating-point comparisons.
pub const TOLERANCE: f64 = 1e-10;

/// The hyperplane `Σ a_i z_i = 0` in `ℂ^{n+1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Hyperplane {
    pub coeffs: Vec<Complex64>,
    /// First index of maximal modulus.
    pub norm_index: usize,
}

impl Hyperplane {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        let mut best = 0;
        for (i, c) in coeffs.iter().enumerate() {
            if c.norm() > coeffs[best].norm() {
                best = i;
            }
        }
        if coeffs.len() < 2 || coeffs[best].norm() == 0.0 {
            return Err(Error::DegenerateInput("hyperplane needs a nonzero coefficient vector of length >= 2".into()));
        }
        Ok(Hyperplane {
            coeffs,
            norm_index: best,
        })
    }

    pub fn from_reals(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|x| Complex64::new(*x, 0.0)).collect())
    }

    pub fn sup_norm(&self) -> f64 {
        sup_norm(&self.coeffs)
    }
}

fn sup_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceMethod {
    /// `sup_i |a_i/a₀ - b_i/b₀|` after moving the norm index to the front.
    SupFormula,
    /// `sup |(u, v)| / (‖u‖‖v‖)` over the basis `a₀e_i - a_ie₀` of `A` and the
    /// normal `b` of `B`, in sup-norm.
    InnerProductDef,
}

/// Both planes are read in the coordinates where `A` attains its sup-norm
/// at index 0.
pub fn hyperplane_distance(a: &Hyperplane, b: &Hyperplane, method: DistanceMethod) -> Result<f64> {
    if a.coeffs.len() != b.coeffs.len() {
        return Err(Error::DegenerateInput("hyperplanes live in different spaces".into()));
    }
    let k = a.norm_index;
    let (a0, b0) = (a.coeffs[k], b.coeffs[k]);
    if b0.norm() == 0.0 {
        return Err(Error::DegenerateInput(format!("coefficient {} of the second plane vanishes", k)));
    }
    let others = (0..a.coeffs.len()).filter(|i| *i != k);
    let d = match method {
        DistanceMethod::SupFormula => others
            .map(|i| (a.coeffs[i] / a0 - b.coeffs[i] / b0).norm())
            .fold(0.0, f64::max),
        DistanceMethod::InnerProductDef => {
            let nb = b.sup_norm();
            others
                .map(|i| {
                    let mut v = alloc::vec![Complex64::zero(); a.coeffs.len()];
                    v[i] = a0;
                    v[k] = -a.coeffs[i];
                    let pairing: Complex64 = v.iter().zip(&b.coeffs).map(|(x, y)| x * y).sum();
                    pairing.norm() / (sup_norm(&v) * nb)
                })
                .fold(0.0, f64::max)
        }
    };
    Ok(d)
}

/// One sample `(h(p₁), h(p₂), g(p₁), g(p₂))`.
pub type ProductSample<T> = [T; 4];

#[derive(Debug, Clone, PartialEq)]
pub struct ProductReport {
    pub samples: usize,
    pub violations: usize,
    /// Least `rhs - lhs` observed (negative only on a violation).
    pub min_slack: f64,
}

/// `‖(hg)(p₁)-(hg)(p₂)‖ ≤ ‖h(p₁)‖‖g(p₁)-g(p₂)‖ + ‖g(p₂)‖‖h(p₁)-h(p₂)‖`
/// in floating point, with violations counted beyond `tol·(1 + rhs)`.
pub fn product_inequality_probe(samples: &[ProductSample<Complex64>], tol: f64) -> ProductReport {
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for [h1, h2, g1, g2] in samples {
        let lhs = (h1 * g1 - h2 * g2).norm();
        let rhs = h1.norm() * (g1 - g2).norm() + g2.norm() * (h1 - h2).norm();
        let slack = rhs - lhs;
        if slack < -tol * (1.0 + rhs) {
            violations += 1;
        }
        min_slack = min_slack.min(slack);
    }
    ProductReport {
        samples: samples.len(),
        violations,
        min_slack,
    }
}

/// The same inequality over the rationals, decided exactly.
pub fn product_inequality_exact(samples: &[ProductSample<BigRational>]) -> ProductReport {
    let mut violations = 0;
    let mut min_slack: Option<BigRational> = None;
    for [h1, h2, g1, g2] in samples {
        let lhs = (h1 * g1 - h2 * g2).abs();
        let rhs = h1.abs() * (g1 - g2).abs() + g2.abs() * (h1 - h2).abs();
        let slack = rhs - lhs;
        if slack.is_negative() {
            violations += 1;
        }
        if min_slack.as_ref().map_or(true, |m| slack < *m) {
            min_slack = Some(slack);
        }
    }
    ProductReport {
        samples: samples.len(),
        violations,
        min_slack: min_slack.and_then(|s| s.to_f64()).unwrap_or(f64::INFINITY),
    }
}

/// Numeric value of a polynomial at a complex point.
pub fn eval_complex(p: &Poly, point: &BTreeMap<String, Complex64>) -> Result<Complex64> {
    let mut acc = Complex64::zero();
    for (e, c) in p.terms() {
        let mut term = c.to_complex();
        for (v, k) in p.vars().iter().zip(e) {
            if *k > 0 {
                let x = point.get(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
                term *= x.powi(*k as i32);
            }
        }
        acc += term;
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSample {
    /// Fiber coordinates of the two points.
    pub points: [Vec<Complex64>; 2],
    pub params: Vec<CycRat>,
    /// Curve parameters `t` used on each side.
    pub t: [f64; 2],
    /// Distance of the tangent planes of `X`.
    pub total: f64,
    /// Distance of the tangent lines of the fiber.
    pub fiber: f64,
    /// Sup-norm distance of the points.
    pub point: f64,
    /// `total / max(fiber, point)`.
    pub ratio: Option<f64>,
}

/// Tangent-plane distances between pairs of smooth fiber points sampled on
/// the branches of `f_{y₀}` at small rational `t`.
pub fn tangent_commensurability_probe(fam: &Family, y0: &[CycRat], n_samples: usize, seed: u64) -> Result<Vec<ProbeSample>> {
    let f0 = fam.fiber(y0)?;
    let branches = puiseux_branches(&f0, default_trunc(&f0))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grad_total: Vec<Poly> = fam.jz.iter().chain(&fam.jy).cloned().collect();
    let params: BTreeMap<String, Complex64> = fam
        .param_vars
        .iter()
        .cloned()
        .zip(y0.iter().map(CycRat::to_complex))
        .collect();
    let mut out = Vec::with_capacity(n_samples);
    let mut attempts = 0;
    while out.len() < n_samples && attempts < 20 * n_samples.max(1) {
        attempts += 1;
        let bi = [rng.random_range(0..branches.len()), rng.random_range(0..branches.len())];
        let t = [rng.random_range(1..=100) as f64 / 1000.0, rng.random_range(1..=100) as f64 / 1000.0];
        let mut pts: [Vec<Complex64>; 2] = [Vec::new(), Vec::new()];
        let mut grads: [(Vec<Complex64>, Vec<Complex64>); 2] = Default::default();
        for s in 0..2 {
            let b = &branches[bi[s]];
            let tc = Complex64::new(t[s], 0.0);
            let mut point = params.clone();
            for v in &fam.fiber_vars {
                let idx = b.vars.iter().position(|w| w == v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
                let z = b.comps[idx].eval_complex(tc);
                point.insert(v.clone(), z);
                pts[s].push(z);
            }
            let total = grad_total.iter().map(|d| eval_complex(d, &point)).collect::<Result<Vec<_>>>()?;
            let fiber = fam.jz.iter().map(|d| eval_complex(d, &point)).collect::<Result<Vec<_>>>()?;
            grads[s] = (total, fiber);
        }
        let point_dist = pts[0].iter().zip(&pts[1]).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if point_dist == 0.0 {
            continue;
        }
        let planes = (
            Hyperplane::new(grads[0].0.clone()),
            Hyperplane::new(grads[1].0.clone()),
            Hyperplane::new(grads[0].1.clone()),
            Hyperplane::new(grads[1].1.clone()),
        );
        let (Ok(a), Ok(b), Ok(fa), Ok(fb)) = planes else {
            continue;
        };
        let (Ok(total), Ok(fiber)) = (
            hyperplane_distance(&a, &b, DistanceMethod::SupFormula),
            hyperplane_distance(&fa, &fb, DistanceMethod::SupFormula),
        ) else {
            continue;
        };
        let denom = fiber.max(point_dist);
        out.push(ProbeSample {
            points: pts,
            params: y0.to_vec(),
            t,
            total,
            fiber,
            point: point_dist,
            ratio: if denom > 0.0 { Some(total / denom) } else { None },
        });
    }
    Ok(out)
}

/// Orders behind a Lipschitz exponent along a pair-curve.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzProbe {
    /// Index of the generator used as denominator, if a single one works.
    pub denominator: Option<usize>,
    /// `ord((h/g)∘φ₁)`, `ord((h/g)∘φ₂)`; negative means `h/g` is unbounded.
    pub side_orders: [Order; 2],
    /// `ord((h/g)∘φ₁ - (h/g)∘φ₂)`
    pub quotient_order: Order,
    /// Least order among `z∘φ₁ - z∘φ₂` and `(g_i/g)∘φ₁ - (g_i/g)∘φ₂`.
    pub coord_order: Exponent,
    pub exponent: Order,
}

impl LipschitzProbe {
    /// Negative exponent: `h/g` fails to be Lipschitz along the curve.
    pub fn is_negative(&self) -> bool {
        matches!(self.exponent, Order::Finite(e) if e < Exponent::zero())
    }
}

fn shift_order(o: Order, by: Exponent) -> Order {
    match o {
        Order::Finite(e) => Order::Finite(e - by),
        Order::AtLeast(e) => Order::AtLeast(e - by),
    }
}

/// `ord(Δ(h/g)) - ord(Δ(z, g_i/g))` along `Φ`, where `g` attains the order
/// of `I` on both sides and the blow-up coordinates `g_i/g` join the `z`.
/// An unbounded quotient on either side caps the exponent at its (negative) order.
pub fn lipschitz_exponent_probe(h: &Poly, ideal: &IdealOnCurve, curve: &PairCurve) -> Result<LipschitzProbe> {
    let trunc = curve_trunc(curve, ideal.trunc);
    let s1 = side_components(&curve.first, &ideal.branches, trunc)?;
    let s2 = side_components(&curve.second, &ideal.branches, trunc)?;
    let (Some(c1), Some(c2)) = (s1, s2) else {
        return Err(Error::DegenerateCurve("the probe needs two non-constant sides".into()));
    };
    let vars = ideal.branches[curve.first.branch.unwrap_or(0)].vars.clone();
    let assign = |c: &[PSeries]| -> BTreeMap<String, PSeries> { vars.iter().cloned().zip(c.iter().cloned()).collect() };
    let (m1, m2) = (assign(&c1), assign(&c2));
    let pull = |p: &Poly, m: &BTreeMap<String, PSeries>| p.substitute_series(m, trunc);
    let g1: Vec<PSeries> = ideal.gens.iter().map(|g| pull(g, &m1)).collect::<Result<_>>()?;
    let g2: Vec<PSeries> = ideal.gens.iter().map(|g| pull(g, &m2)).collect::<Result<_>>()?;
    let min_of = |v: &[PSeries]| v.iter().filter_map(|s| s.order().finite()).min();
    let (Some(o1), Some(o2)) = (min_of(&g1), min_of(&g2)) else {
        return Err(Error::TruncationInsufficient("the ideal vanishes along the curve".into()));
    };
    let attains = |a: &PSeries, b: &PSeries| a.order() == Order::Finite(o1) && b.order() == Order::Finite(o2);
    let (denominator, d1, d2) = match (0..g1.len()).find(|i| attains(&g1[*i], &g2[*i])) {
        Some(i) => (Some(i), g1[i].clone(), g2[i].clone()),
        None => {
            let mut comb = Poly::zero(ideal.gens[0].vars());
            for (i, g) in ideal.gens.iter().enumerate() {
                comb = comb.add(&g.scale(&CycRat::from_int(2 * i as i64 + 3)));
            }
            let (a, b) = (pull(&comb, &m1)?, pull(&comb, &m2)?);
            if !attains(&a, &b) {
                return Err(Error::DegenerateCurve("no denominator attains the order on both sides".into()));
            }
            (None, a, b)
        }
    };
    let q1 = pull(h, &m1)?.div(&d1)?;
    let q2 = pull(h, &m2)?.div(&d2)?;
    let side_orders = [q1.order(), q2.order()];
    let quotient_order = q1.sub(&q2).order();
    let mut diffs: Vec<Order> = c1.iter().zip(&c2).map(|(a, b)| a.sub(b).order()).collect();
    for (a, b) in g1.iter().zip(&g2) {
        diffs.push(a.div(&d1)?.sub(&b.div(&d2)?).order());
    }
    let coord_order = diffs
        .iter()
        .filter_map(Order::finite)
        .min()
        .ok_or_else(|| Error::DegenerateCurve("the two sides agree to the working truncation".into()))?;
    let mut exponent = shift_order(quotient_order, coord_order);
    for o in side_orders {
        if o < exponent && o.lower_bound() < Exponent::zero() {
            exponent = o;
        }
    }
    Ok(LipschitzProbe {
        denominator,
        side_orders,
        quotient_order,
        coord_order,
        exponent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_poly;
    use crate::series::exp;
    use crate::verdict::CurveSide;

    #[test]
    fn distances() {
        let a = Hyperplane::from_reals(&[1.0, 0.0]).unwrap();
        let b = Hyperplane::from_reals(&[1.0, 1.0]).unwrap();
        for m in [DistanceMethod::SupFormula, DistanceMethod::InnerProductDef] {
            assert!((hyperplane_distance(&a, &b, m).unwrap() - 1.0).abs() < TOLERANCE);
            assert_eq!(hyperplane_distance(&a, &a, m).unwrap(), 0.0);
        }
        let c = Hyperplane::from_reals(&[0.0, 1.0]).unwrap();
        assert!(matches!(
            hyperplane_distance(&a, &c, DistanceMethod::SupFormula),
            Err(Error::DegenerateInput(_))
        ));
        assert!(Hyperplane::from_reals(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn product_lemma_equality_case() {
        let z = Complex64::new(0.3, -0.2);
        let r = product_inequality_probe(&[[z, z, z, z]], 1e-12);
        assert_eq!(r.violations, 0);
        assert_eq!(r.min_slack, 0.0);
    }

    fn golden() -> (IdealOnCurve, PairCurve) {
        let f = parse_poly("x^2+y^5").unwrap();
        let gens = alloc::vec![f.partial("x").unwrap(), f.partial("y").unwrap()];
        let i = IdealOnCurve::new(gens, f, 100).unwrap();
        let c = PairCurve {
            first: CurveSide::plain(0, 1),
            second: CurveSide::twisted(0, 1, 5, 1),
        };
        (i, c)
    }

    #[test]
    fn lipschitz_exponents() {
        let (i, c) = golden();
        let p = lipschitz_exponent_probe(&parse_poly("y^3").unwrap(), &i, &c).unwrap();
        assert_eq!(p.denominator, Some(0));
        assert_eq!(p.quotient_order, Order::Finite(exp(1)));
        assert_eq!(p.coord_order, exp(2));
        assert_eq!(p.exponent, Order::Finite(exp(-1)));
        let p4 = lipschitz_exponent_probe(&parse_poly("y^4").unwrap(), &i, &c).unwrap();
        assert!(!p4.is_negative());
        let g = lipschitz_exponent_probe(&parse_poly("2*x").unwrap(), &i, &c).unwrap();
        assert!(!g.is_negative());
        assert!(!g.exponent.is_finite());
    }

    #[test]
    fn tangent_probe_is_seeded() {
        let fam = crate::conditions::family_ideals(
            &parse_poly("x^2+y^5+w*y^4").unwrap(),
            &crate::poly::names(&["x", "y"]),
            &crate::poly::names(&["w"]),
        )
        .unwrap();
        let a = tangent_commensurability_probe(&fam, &[CycRat::one()], 20, 7).unwrap();
        let b = tangent_commensurability_probe(&fam, &[CycRat::one()], 20, 7).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 20);
        assert!(a.iter().all(|s| s.total >= 0.0 && s.fiber >= 0.0 && s.point > 0.0));
    }
}
