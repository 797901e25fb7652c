//! The doubled module `I_D` on `X × X` and Lipschitz saturation membership
//! tested along pair-curves.

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_integer::Integer;

use crate::cyclotomic::CycRat;
use crate::division::{generator_index, local_division};
use crate::dvr::{dvr_membership, DvrMatrix};
use crate::error::{Error, Result};
use crate::icurve::{ic_membership, IdealOnCurve};
use crate::poly::{prime, Poly};
use crate::puiseux::Branch;
use crate::series::{exp, Exponent, Order, PSeries};
use crate::verdict::{Certificate, CurveSide, PairCurve, PairWitness, SearchBound, Verdict, Witness};

/// Rational reparametrization coefficient used next to the roots of unity.
pub const GENERIC_COEFF: i64 = 2;

#[derive(Debug, Clone, PartialEq)]
pub struct DoubledModule {
    pub base_gens: Vec<Poly>,
    pub coord_vars: Vec<String>,
    pub relative_vars: Vec<String>,
    /// `z_j - z_j'` for every coordinate.
    pub diag: Vec<Poly>,
    /// `(f_i, f_i')`, then `(Δ_j f_i, 0)`, then `(0, Δ_j f_i')`.
    pub gen_list: Vec<[Poly; 2]>,
}

/// `h` with every coordinate variable primed; relative variables are shared.
pub fn primed(h: &Poly, coord_vars: &[String]) -> Poly {
    h.primed(coord_vars)
}

/// `h_D = (h, h')`.
pub fn double(h: &Poly, coord_vars: &[String]) -> [Poly; 2] {
    [h.clone(), primed(h, coord_vars)]
}

pub fn double_ideal(gens: &[Poly], coord_vars: &[String], relative_vars: &[String]) -> Result<DoubledModule> {
    if gens.is_empty() {
        return Err(Error::EmptyIdeal);
    }
    if let Some(v) = relative_vars.iter().find(|v| coord_vars.contains(v)) {
        return Err(Error::InvalidArgument(format!("{} is both a coordinate and a parameter", v)));
    }
    let diag: Vec<Poly> = coord_vars
        .iter()
        .map(|v| {
            let z = Poly::var(&[], v);
            z.sub(&z.primed(coord_vars))
        })
        .collect();
    let mut gen_list = Vec::new();
    for g in gens {
        gen_list.push(double(g, coord_vars));
    }
    for g in gens {
        for d in &diag {
            let a = d.mul(g);
            gen_list.push([a.clone(), Poly::zero(a.vars())]);
        }
    }
    for g in gens {
        let gp = primed(g, coord_vars);
        for d in &diag {
            let b = d.mul(&gp);
            gen_list.push([Poly::zero(b.vars()), b]);
        }
    }
    Ok(DoubledModule {
        base_gens: gens.to_vec(),
        coord_vars: coord_vars.to_vec(),
        relative_vars: relative_vars.to_vec(),
        diag,
        gen_list,
    })
}

/// `w₀·a + w₁·b` for every generator `(a, b)`.
pub fn contraction(weights: &[CycRat; 2], m: &DoubledModule) -> Vec<Poly> {
    m.gen_list
        .iter()
        .map(|[a, b]| a.scale(&weights[0]).add(&b.scale(&weights[1])))
        .collect()
}

/// Coordinates of one side of a pair-curve.
pub fn side_components(side: &CurveSide, branches: &[Branch], trunc: Exponent) -> Result<Option<Vec<PSeries>>> {
    let Some(i) = side.branch else {
        return Ok(None);
    };
    let b = branches
        .get(i)
        .ok_or_else(|| Error::InvalidArgument(format!("no branch {}", i)))?;
    if side.exp == 0 || side.coeff.is_zero() {
        return Err(Error::DegenerateCurve("reparametrization must have positive order".into()));
    }
    let e = exp(side.exp as i64);
    let b = b.extended(trunc / e + exp(1));
    let u = PSeries::monomial(side.coeff.clone(), e, trunc + e);
    let comps = b.reparametrize(&u)?;
    Ok(Some(comps.into_iter().map(|c| c.truncate(trunc)).collect()))
}

fn assignment(
    curve: &PairCurve,
    branches: &[Branch],
    coord_vars: &[String],
    trunc: Exponent,
) -> Result<(BTreeMap<String, PSeries>, [Option<Vec<PSeries>>; 2])> {
    let s1 = side_components(&curve.first, branches, trunc)?;
    let s2 = side_components(&curve.second, branches, trunc)?;
    let mut map = BTreeMap::new();
    for (side, comps) in [(0, &s1), (1, &s2)] {
        let b = match comps {
            Some(_) => curve_branch(curve, side, branches),
            None => None,
        };
        for v in coord_vars {
            let value = match (comps, b) {
                (Some(c), Some(b)) => {
                    let idx = b.vars.iter().position(|w| w == v).ok_or_else(|| {
                        Error::UnknownVariable(format!("{} is not a coordinate of the branch", v))
                    })?;
                    c[idx].clone()
                }
                _ => PSeries::zero(trunc),
            };
            let name = if side == 0 { v.clone() } else { prime(v) };
            map.insert(name, value);
        }
    }
    Ok((map, [s1, s2]))
}

fn curve_branch<'a>(curve: &PairCurve, side: usize, branches: &'a [Branch]) -> Option<&'a Branch> {
    let s = if side == 0 { &curve.first } else { &curve.second };
    s.branch.and_then(|i| branches.get(i))
}

/// Working truncation for a pair-curve built on branches known to `base`.
pub fn curve_trunc(curve: &PairCurve, base: i64) -> Exponent {
    exp(base * curve.first.exp.max(curve.second.exp).max(1) as i64)
}

/// The two-row matrix of `M` pulled back along `Φ`.
pub fn pullback_doubled(m: &DoubledModule, branches: &[Branch], curve: &PairCurve, trunc: Exponent) -> Result<DvrMatrix> {
    let (map, _) = assignment(curve, branches, &m.coord_vars, trunc)?;
    let cols = m
        .gen_list
        .iter()
        .map(|[a, b]| Ok(vec![a.substitute_series(&map, trunc)?, b.substitute_series(&map, trunc)?]))
        .collect::<Result<Vec<_>>>()?;
    DvrMatrix::new(2, cols)
}

fn same_sides(s: &[Option<Vec<PSeries>>; 2]) -> bool {
    match (&s[0], &s[1]) {
        (Some(a), Some(b)) => a.iter().zip(b).all(|(x, y)| x.sub(y).is_zero()),
        _ => false,
    }
}

/// `h_D∘Φ ∈ Φ*(I_D)·O₁`, with a replayable witness on failure.
///
/// A pair-curve inside the diagonal or with a constant side only sees one
/// row of the module; the test is then made on that row alone.
pub fn closure_membership_on_curve(
    h: &Poly,
    m: &DoubledModule,
    branches: &[Branch],
    curve: &PairCurve,
    trunc: Exponent,
) -> Result<Verdict> {
    let (map, sides) = assignment(curve, branches, &m.coord_vars, trunc)?;
    let mat = pullback_doubled(m, branches, curve, trunc)?;
    let hd = double(h, &m.coord_vars);
    let target = vec![hd[0].substitute_series(&map, trunc)?, hd[1].substitute_series(&map, trunc)?];
    let row = match (&sides[0], &sides[1]) {
        (None, None) => return Err(Error::DegenerateCurve("both sides are constant".into())),
        (Some(_), None) => Some(0),
        (None, Some(_)) => Some(1),
        _ if same_sides(&sides) => Some(0),
        _ => None,
    };
    let verdict = match row {
        Some(r) => {
            let cols = mat.cols().iter().map(|c| vec![c[r].clone()]).collect();
            let one = DvrMatrix::new(1, cols)?;
            match dvr_membership(&target[r..=r], &one)? {
                Verdict::CertifiedNo(Witness::Residual {
                    residual,
                    valuation,
                    pivots,
                }) => {
                    let mut full = vec![PSeries::zero(trunc), PSeries::zero(trunc)];
                    full[r] = residual[0].clone();
                    Verdict::CertifiedNo(Witness::Residual {
                        residual: full,
                        valuation,
                        pivots,
                    })
                }
                v => v,
            }
        }
        None => dvr_membership(&target, &mat)?,
    };
    Ok(match verdict {
        Verdict::CertifiedNo(Witness::Residual {
            residual,
            valuation,
            pivots,
        }) => {
            let contraction_valuation = mat
                .cols()
                .iter()
                .map(|c| c[0].sub(&c[1]).order())
                .min_by(order_cmp)
                .unwrap_or(Order::AtLeast(trunc));
            let w = PairWitness {
                curve: curve.clone(),
                branches: branches.to_vec(),
                target_orders: [target[0].order(), target[1].order()],
                pivots,
                residual,
                residual_valuation: valuation,
                contraction_valuation,
                contraction_target: target[0].sub(&target[1]).order(),
                trunc,
            };
            Verdict::CertifiedNo(Witness::PairCurve(Box::new(w)))
        }
        v => v,
    })
}

fn order_cmp(a: &Order, b: &Order) -> core::cmp::Ordering {
    a.lower_bound()
        .cmp(&b.lower_bound())
        .then_with(|| b.is_finite().cmp(&a.is_finite()))
}

/// Exponent of the first monomial component, the natural twist order.
fn natural_twist(b: &Branch) -> Option<u32> {
    b.comps.iter().find_map(|c| {
        if b.exact && c.num_terms() == 1 {
            c.leading().map(|(e, _)| e.to_integer() as u32).filter(|n| *n > 1)
        } else {
            None
        }
    })
}

/// Pair-curves in search order: one-sided, twisted, then general.
pub fn candidate_curves(branches: &[Branch], bound: &SearchBound) -> Vec<PairCurve> {
    let mut out = Vec::new();
    let nb = branches.len();
    for i in 0..nb {
        out.push(PairCurve {
            first: CurveSide::plain(i, 1),
            second: CurveSide::zero(),
        });
        out.push(PairCurve {
            first: CurveSide::zero(),
            second: CurveSide::plain(i, 1),
        });
    }
    for i in 0..nb {
        for j in 0..nb {
            if i != j {
                out.push(PairCurve {
                    first: CurveSide::plain(i, 1),
                    second: CurveSide::plain(j, 1),
                });
            }
            let mut orders: Vec<u32> = Vec::new();
            if let Some(n) = natural_twist(&branches[j]) {
                if n <= bound.root {
                    orders.push(n);
                }
            }
            for n in 2..=bound.root {
                if !orders.contains(&n) {
                    orders.push(n);
                }
            }
            for n in orders {
                for k in 1..n {
                    if k.gcd(&n) == 1 {
                        out.push(PairCurve {
                            first: CurveSide::plain(i, 1),
                            second: CurveSide::twisted(j, 1, n, k),
                        });
                    }
                }
            }
        }
    }
    let generic = CycRat::from_int(GENERIC_COEFF);
    for i in 0..nb {
        for j in 0..nb {
            out.push(PairCurve {
                first: CurveSide::plain(i, 1),
                second: CurveSide::scaled(j, 1, generic.clone()),
            });
            for e1 in 1..=bound.exp {
                for e2 in 1..=bound.exp {
                    if (e1, e2) == (1, 1) || e1.gcd(&e2) != 1 {
                        continue;
                    }
                    if i != j || e1 != e2 {
                        out.push(PairCurve {
                            first: CurveSide::plain(i, e1),
                            second: CurveSide::plain(j, e2),
                        });
                    }
                    out.push(PairCurve {
                        first: CurveSide::plain(i, e1),
                        second: CurveSide::scaled(j, e2, generic.clone()),
                    });
                }
            }
        }
    }
    out
}

/// Decide `h ∈ I_S` as far as the search bound allows.
///
/// Membership in `I` itself (by explicit division) certifies a yes; failure of
/// integral closure on a branch, or of the doubled closure along any
/// enumerated pair-curve, certifies a no.
pub fn saturation_membership(h: &Poly, ideal: &IdealOnCurve, bound: &SearchBound) -> Result<Verdict> {
    if let Some(index) = generator_index(h, &ideal.gens) {
        return Ok(Verdict::CertifiedYes(Certificate::Generator { index }));
    }
    if let Some(c) = local_division(h, &ideal.gens, core::slice::from_ref(&ideal.curve), bound.div) {
        return Ok(Verdict::CertifiedYes(Certificate::Division(c)));
    }
    let ic = ic_membership(h, ideal)?;
    if ic.is_no() {
        return Ok(ic);
    }
    let coords = match ideal.branches.first() {
        Some(b) => b.vars.clone(),
        None => return Ok(Verdict::NoObstructionUpToBound(*bound)),
    };
    let m = double_ideal(&ideal.gens, &coords, &[])?;
    for curve in candidate_curves(&ideal.branches, bound) {
        let t = curve_trunc(&curve, ideal.trunc);
        let v = closure_membership_on_curve(h, &m, &ideal.branches, &curve, t)?;
        if v.is_no() {
            return Ok(v);
        }
    }
    Ok(Verdict::NoObstructionUpToBound(*bound))
}

/// Result of re-evaluating a recorded pair-curve witness.
#[derive(Debug, Clone, PartialEq)]
pub struct Replay {
    pub confirmed: bool,
    pub verdict: Verdict,
}

/// Re-run a witness: confirmed iff the same curve still refutes with the
/// recorded residual valuation, pivots and contraction orders.
pub fn replay_pair_witness(h: &Poly, gens: &[Poly], w: &PairWitness) -> Result<Replay> {
    let coords = match w.curve.first.branch.or(w.curve.second.branch) {
        Some(i) => w
            .branches
            .get(i)
            .ok_or_else(|| Error::InvalidArgument(format!("no branch {}", i)))?
            .vars
            .clone(),
        None => return Err(Error::DegenerateCurve("both sides are constant".into())),
    };
    let m = double_ideal(gens, &coords, &[])?;
    let verdict = closure_membership_on_curve(h, &m, &w.branches, &w.curve, w.trunc)?;
    let confirmed = match &verdict {
        Verdict::CertifiedNo(Witness::PairCurve(r)) => {
            r.residual_valuation == w.residual_valuation
                && r.pivots == w.pivots
                && r.contraction_valuation == w.contraction_valuation
                && r.contraction_target == w.contraction_target
        }
        _ => false,
    };
    Ok(Replay { confirmed, verdict })
}
