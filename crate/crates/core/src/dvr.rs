//! Modules over the one-variable series ring: echelon reduction by
//! valuation pivots, membership and colength of nested modules.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclotomic::CycRat;
use crate::error::{Error, Result};
use crate::series::{exp, Exponent, Order, PSeries};
use crate::verdict::{Certificate, Verdict, Witness};

/// Extra known coefficients required above the largest pivot before deciding.
pub const SAFETY_MARGIN: i64 = 4;

/// Columns generate a submodule of the free module of rank `rows`.
#[derive(Debug, Clone, PartialEq)]
pub struct DvrMatrix {
    rows: usize,
    cols: Vec<Vec<PSeries>>,
}

impl DvrMatrix {
    pub fn new(rows: usize, cols: Vec<Vec<PSeries>>) -> Result<Self> {
        if cols.iter().any(|c| c.len() != rows) {
            return Err(Error::InvalidArgument(format!(
                "every column must have {} entries",
                rows
            )));
        }
        Ok(DvrMatrix { rows, cols })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> &[Vec<PSeries>] {
        &self.cols
    }

    /// Smallest truncation among the entries.
    pub fn trunc(&self) -> Option<Exponent> {
        self.cols.iter().flatten().map(PSeries::trunc).min()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pivot {
    pub row: usize,
    pub valuation: Exponent,
}

/// Echelon basis: column `k` has pivot `pivots[k]` and vanishes in the pivot
/// rows of all earlier columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Echelon {
    pub rows: usize,
    pub pivots: Vec<Pivot>,
    pub basis: Vec<Vec<PSeries>>,
    /// `basis[k] = Σ_j transform[k][j] · original[j]`.
    pub transform: Vec<Vec<PSeries>>,
    /// Everything not captured by pivots is known to vanish below this order.
    pub floor: Exponent,
}

impl Echelon {
    pub fn valuations(&self) -> Vec<Exponent> {
        self.pivots.iter().map(|p| p.valuation).collect()
    }

    pub fn is_full_rank(&self) -> bool {
        self.pivots.len() == self.rows
    }

    pub fn matrix(&self) -> DvrMatrix {
        DvrMatrix {
            rows: self.rows,
            cols: self.basis.clone(),
        }
    }

    fn max_pivot(&self) -> Option<Exponent> {
        self.pivots.iter().map(|p| p.valuation).max()
    }
}

fn entry_order(s: &PSeries) -> Option<Exponent> {
    s.order().finite()
}

/// Column echelon form by repeatedly pivoting on the entry of least valuation.
///
/// Ties go to the earlier column, then the earlier row. Pivot columns are
/// rescaled by a unit so the pivot entry is exactly `t^v` up to truncation.
pub fn dvr_reduce(m: &DvrMatrix) -> Result<Echelon> {
    let n = m.cols.len();
    let big = m.trunc().unwrap_or_else(|| exp(0));
    let mut cols = m.cols.clone();
    let mut trans: Vec<Vec<PSeries>> = (0..n)
        .map(|k| {
            (0..n)
                .map(|j| {
                    let c = if j == k { CycRat::one() } else { CycRat::zero() };
                    PSeries::constant(c, big)
                })
                .collect()
        })
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut free_rows: Vec<usize> = (0..m.rows).collect();
    let mut pivots = Vec::new();
    let mut basis = Vec::new();
    let mut transform = Vec::new();
    loop {
        let mut best: Option<(Exponent, usize, usize)> = None;
        for &c in &active {
            for &r in &free_rows {
                if let Some(v) = entry_order(&cols[c][r]) {
                    if best.map_or(true, |(bv, _, _)| v < bv) {
                        best = Some((v, c, r));
                    }
                }
            }
        }
        let Some((v, pc, pr)) = best else { break };
        // Normalize the pivot entry to t^v.
        let unit = cols[pc][pr].shift(-v);
        let unit_inv = PSeries::constant(CycRat::one(), unit.trunc()).div(&unit)?;
        let pcol: Vec<PSeries> = cols[pc].iter().map(|e| e.mul(&unit_inv)).collect();
        let ptrans: Vec<PSeries> = trans[pc].iter().map(|e| e.mul(&unit_inv)).collect();
        for &c in &active {
            if c == pc {
                continue;
            }
            let entry = &cols[c][pr];
            let q = entry.div(&pcol[pr])?;
            cols[c] = cols[c].iter().zip(&pcol).map(|(a, b)| a.sub(&q.mul(b))).collect();
            trans[c] = trans[c].iter().zip(&ptrans).map(|(a, b)| a.sub(&q.mul(b))).collect();
        }
        pivots.push(Pivot { row: pr, valuation: v });
        basis.push(pcol);
        transform.push(ptrans);
        active.retain(|&c| c != pc);
        free_rows.retain(|&r| r != pr);
    }
    let mut floor = big;
    for &c in &active {
        for &r in &free_rows {
            floor = floor.min(cols[c][r].order().lower_bound());
        }
    }
    if active.is_empty() || free_rows.is_empty() {
        floor = basis
            .iter()
            .flatten()
            .map(PSeries::trunc)
            .min()
            .unwrap_or(big);
    }
    Ok(Echelon {
        rows: m.rows,
        pivots,
        basis,
        transform,
        floor,
    })
}

fn min_trunc(v: &[PSeries]) -> Exponent {
    v.iter().map(PSeries::trunc).min().unwrap_or_else(|| exp(0))
}

/// Decide `v ∈ span(M)` over the series ring.
///
/// Yes answers carry coefficients on the original columns; no answers carry
/// the residual after reduction and its valuation.
pub fn dvr_membership(v: &[PSeries], m: &DvrMatrix) -> Result<Verdict> {
    let ech = dvr_reduce(m)?;
    membership_in(v, m, &ech)
}

/// Membership against an already reduced module.
pub fn membership_in(v: &[PSeries], m: &DvrMatrix, ech: &Echelon) -> Result<Verdict> {
    if v.len() != m.rows {
        return Err(Error::InvalidArgument("vector length differs from row count".into()));
    }
    let mut res: Vec<PSeries> = v.to_vec();
    let mut coeffs: Vec<PSeries> = m
        .cols
        .iter()
        .map(|_| PSeries::zero(min_trunc(v)))
        .collect();
    let pivots = ech.valuations();
    for (k, piv) in ech.pivots.iter().enumerate() {
        let entry = &res[piv.row];
        if let Order::Finite(w) = entry.order() {
            if w < piv.valuation {
                return Ok(Verdict::CertifiedNo(Witness::Residual {
                    residual: res,
                    valuation: w,
                    pivots,
                }));
            }
        }
        let q = entry.div(&ech.basis[k][piv.row])?;
        res = res
            .iter()
            .zip(&ech.basis[k])
            .map(|(a, b)| a.sub(&q.mul(b)))
            .collect();
        for (j, t) in ech.transform[k].iter().enumerate() {
            coeffs[j] = coeffs[j].add(&q.mul(t));
        }
    }
    // Rows without a pivot: the module is known to vanish there below `floor`.
    let pivot_rows: Vec<usize> = ech.pivots.iter().map(|p| p.row).collect();
    for (r, e) in res.iter().enumerate() {
        if pivot_rows.contains(&r) {
            continue;
        }
        if let Order::Finite(w) = e.order() {
            if w < ech.floor {
                return Ok(Verdict::CertifiedNo(Witness::Residual {
                    residual: res.clone(),
                    valuation: w,
                    pivots,
                }));
            }
        }
    }
    let known = min_trunc(&res);
    if let Some(w) = res.iter().filter_map(|e| e.order().finite()).min() {
        // Nonzero residual at or above a pivot valuation: more terms needed.
        return Err(Error::TruncationInsufficient(format!(
            "residual of order {} left after reduction (known to {})",
            w, known
        )));
    }
    let top = ech.max_pivot().unwrap_or_else(|| exp(0));
    if !ech.is_full_rank() || known < top + exp(SAFETY_MARGIN) {
        return Err(Error::TruncationInsufficient(format!(
            "residual known to order {} but pivots reach {} (rank {}/{})",
            known,
            top,
            ech.pivots.len(),
            ech.rows
        )));
    }
    Ok(Verdict::CertifiedYes(Certificate::Combination {
        coeffs,
        trunc: known,
    }))
}

/// Re-check a combination certificate: `v - Σ cᵢ colᵢ` vanishes to `trunc`.
pub fn verify_combination(v: &[PSeries], m: &DvrMatrix, coeffs: &[PSeries], trunc: Exponent) -> bool {
    if coeffs.len() != m.cols.len() {
        return false;
    }
    (0..m.rows).all(|r| {
        let mut acc = v[r].clone();
        for (c, col) in coeffs.iter().zip(&m.cols) {
            acc = acc.sub(&c.mul(&col[r]));
        }
        acc.is_zero() && acc.trunc() >= trunc
    })
}

/// Colength of `M` inside `N`: `Σ pivots(M) - Σ pivots(N)`.
pub fn pair_multiplicity_dvr(m: &DvrMatrix, n: &DvrMatrix) -> Result<Exponent> {
    let en = dvr_reduce(n)?;
    let em = dvr_reduce(m)?;
    if !en.is_full_rank() || !em.is_full_rank() {
        return Err(Error::NotFiniteColength);
    }
    for col in &m.cols {
        match membership_in(col, n, &en)? {
            Verdict::CertifiedNo(_) => return Err(Error::NotNested),
            Verdict::CertifiedYes(_) => {}
            Verdict::NoObstructionUpToBound(_) => unreachable!("membership is decided exactly"),
        }
    }
    let sm: Exponent = em.valuations().into_iter().sum();
    let sn: Exponent = en.valuations().into_iter().sum();
    Ok(sm - sn)
}

/// Convenience: a column of monomials `c·t^e` with a shared truncation.
pub fn monomial_column(entries: &[(CycRat, Option<i64>)], trunc: i64) -> Vec<PSeries> {
    entries
        .iter()
        .map(|(c, e)| match e {
            Some(e) => PSeries::monomial(c.clone(), exp(*e), exp(trunc)),
            None => PSeries::zero(exp(trunc)),
        })
        .collect()
}

pub fn zero_vector(rows: usize, trunc: Exponent) -> Vec<PSeries> {
    vec![PSeries::zero(trunc); rows]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(c: CycRat, e: i64) -> PSeries {
        PSeries::monomial(c, exp(e), exp(30))
    }

    fn one() -> CycRat {
        CycRat::one()
    }

    #[test]
    fn rank_one_pivot() {
        let m = DvrMatrix::new(1, vec![vec![mono(one(), 2)], vec![mono(one(), 5)]]).unwrap();
        assert_eq!(dvr_reduce(&m).unwrap().valuations(), vec![exp(2)]);
    }

    #[test]
    fn rank_two_pivots() {
        let z = PSeries::zero(exp(30));
        let m = DvrMatrix::new(
            2,
            vec![vec![mono(one(), 5), mono(one(), 5)], vec![z, mono(one(), 7)]],
        )
        .unwrap();
        assert_eq!(dvr_reduce(&m).unwrap().valuations(), vec![exp(5), exp(7)]);
        let m = DvrMatrix::new(
            2,
            vec![
                vec![mono(one(), 3), mono(one(), 3)],
                vec![mono(one(), 3), mono(CycRat::from_int(2), 3)],
            ],
        )
        .unwrap();
        assert_eq!(dvr_reduce(&m).unwrap().valuations(), vec![exp(3), exp(3)]);
    }

    #[test]
    fn twisted_residual_is_refuted() {
        let z = CycRat::zeta(5);
        let w = &one() - &z;
        let zero = PSeries::zero(exp(30));
        let m = DvrMatrix::new(
            2,
            vec![
                vec![mono(one(), 5), mono(one(), 5)],
                vec![zero.clone(), mono(w.clone(), 7)],
                vec![mono(w, 7), zero],
                vec![mono(one(), 8), mono(z.pow(4), 8)],
            ],
        )
        .unwrap();
        let v = vec![mono(one(), 6), mono(z.pow(3), 6)];
        match dvr_membership(&v, &m).unwrap() {
            Verdict::CertifiedNo(Witness::Residual { valuation, pivots, residual }) => {
                assert_eq!(valuation, exp(6));
                assert_eq!(pivots, vec![exp(5), exp(7)]);
                assert!(residual[0].is_zero());
                assert_eq!(residual[1].order(), Order::Finite(exp(6)));
            }
            other => panic!("{:?}", other),
        }
        let first = m.cols()[0].clone();
        match dvr_membership(&first, &m).unwrap() {
            Verdict::CertifiedYes(Certificate::Combination { coeffs, trunc }) => {
                assert!(verify_combination(&first, &m, &coeffs, trunc));
            }
            other => panic!("{:?}", other),
        }
    }

    #[test]
    fn colength() {
        let m = DvrMatrix::new(1, vec![vec![mono(one(), 5)]]).unwrap();
        let n = DvrMatrix::new(1, vec![vec![mono(one(), 2)]]).unwrap();
        assert_eq!(pair_multiplicity_dvr(&m, &n).unwrap(), exp(3));
        assert_eq!(pair_multiplicity_dvr(&m, &m).unwrap(), exp(0));
        assert_eq!(pair_multiplicity_dvr(&n, &m), Err(Error::NotNested));
    }
}
