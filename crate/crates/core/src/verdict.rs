//! Three-valued membership verdicts with certificates and witnesses.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::cyclotomic::CycRat;
use crate::poly::Poly;
use crate::puiseux::Branch;
use crate::series::{Exponent, Order, PSeries};

/// Limits of the bounded search behind a positive answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBound {
    /// Largest reparametrization exponent tried.
    pub exp: u32,
    /// Largest root-of-unity order tried for twists.
    pub root: u32,
    /// Degree bound for explicit division certificates.
    pub div: u32,
}

impl SearchBound {
    pub const DEFAULT_EXP: u32 = 6;
    pub const DEFAULT_DIV: u32 = 10;

    /// Default bounds for a defining polynomial of degree `deg`.
    pub fn for_degree(deg: u32) -> Self {
        SearchBound {
            exp: Self::DEFAULT_EXP,
            root: (2 * deg).max(2),
            div: Self::DEFAULT_DIV,
        }
    }
}

impl fmt::Display for SearchBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "exp<={}, root<={}, div<={}", self.exp, self.root, self.div)
    }
}

/// Target versus ideal order on one branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchOrder {
    pub branch: usize,
    pub target: Order,
    pub ideal: Exponent,
}

impl BranchOrder {
    pub fn holds(&self) -> bool {
        match self.target {
            Order::Finite(e) => e >= self.ideal,
            Order::AtLeast(e) => e >= self.ideal,
        }
    }
}

/// `u·h = Σ aᵢ gᵢ + Σ bⱼ Fⱼ` with `u(0) ≠ 0`, an identity of polynomials.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisionCertificate {
    pub unit: Poly,
    pub coeffs: Vec<Poly>,
    /// Multipliers of the relations (defining equations), if any.
    pub relation_coeffs: Vec<Poly>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// Nothing to prove (empty target list, smooth section, ...).
    Vacuous(String),
    /// The target coincides with generator `index` (up to a unit constant).
    Generator { index: usize },
    /// Branch-by-branch order comparison on the normalization.
    BranchOrders(Vec<BranchOrder>),
    /// `v = Σ cᵢ colᵢ` up to the stated truncation, with `trunc` above every pivot.
    Combination { coeffs: Vec<PSeries>, trunc: Exponent },
    /// Explicit local division.
    Division(DivisionCertificate),
    /// One certificate per target generator.
    Each(Vec<Certificate>),
}

/// A reparametrized branch: `t ↦ b(c·t^e)`, or the constant zero map.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveSide {
    /// `None` for the zero map.
    pub branch: Option<usize>,
    pub coeff: CycRat,
    pub exp: u32,
    /// Root-of-unity twist `(zN)^k` when `coeff` is one.
    pub twist: Option<(u32, u32)>,
}

impl CurveSide {
    pub fn zero() -> Self {
        CurveSide {
            branch: None,
            coeff: CycRat::zero(),
            exp: 1,
            twist: None,
        }
    }

    pub fn plain(branch: usize, exp: u32) -> Self {
        CurveSide {
            branch: Some(branch),
            coeff: CycRat::one(),
            exp,
            twist: None,
        }
    }

    pub fn twisted(branch: usize, exp: u32, n: u32, k: u32) -> Self {
        CurveSide {
            branch: Some(branch),
            coeff: CycRat::zeta_pow(n, k as i64),
            exp,
            twist: Some((n, k)),
        }
    }

    pub fn scaled(branch: usize, exp: u32, coeff: CycRat) -> Self {
        let twist = coeff.root_of_unity_index();
        CurveSide {
            branch: Some(branch),
            coeff,
            exp,
            twist,
        }
    }
}

/// A map of a disc into `X × X` (or `X ×_Y X`).
#[derive(Debug, Clone, PartialEq)]
pub struct PairCurve {
    pub first: CurveSide,
    pub second: CurveSide,
}

/// Everything needed to re-evaluate a pair-curve refutation.
#[derive(Debug, Clone, PartialEq)]
pub struct PairWitness {
    pub curve: PairCurve,
    pub branches: Vec<Branch>,
    /// Orders of `h∘φ₁`, `h∘φ₂`.
    pub target_orders: [Order; 2],
    /// Pivot valuations of the pulled-back module.
    pub pivots: Vec<Exponent>,
    /// Residual after reduction and its valuation.
    pub residual: Vec<PSeries>,
    pub residual_valuation: Exponent,
    /// Valuation of the `(1,-1)` contraction of the pulled-back module.
    pub contraction_valuation: Order,
    /// Valuation of `h∘φ₁ - h∘φ₂`.
    pub contraction_target: Order,
    pub trunc: Exponent,
}

impl PairWitness {
    /// The competing orders as `"6 < 7"`.
    pub fn gap(&self) -> String {
        let bound = self
            .pivots
            .iter()
            .filter(|p| **p > self.residual_valuation)
            .min()
            .copied();
        match bound {
            Some(b) => alloc::format!("{} < {}", self.residual_valuation, b),
            None => alloc::format!("{} < {}", self.residual_valuation, self.trunc),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchWitness {
    pub branch_index: usize,
    pub branch: Branch,
    pub target_order: Order,
    pub ideal_order: Exponent,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    Branch(BranchWitness),
    Residual {
        residual: Vec<PSeries>,
        valuation: Exponent,
        pivots: Vec<Exponent>,
    },
    PairCurve(alloc::boxed::Box<PairWitness>),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    CertifiedYes(Certificate),
    CertifiedNo(Witness),
    NoObstructionUpToBound(SearchBound),
}

impl Verdict {
    pub fn kind(&self) -> VerdictKind {
        match self {
            Verdict::CertifiedYes(_) => VerdictKind::CertifiedYes,
            Verdict::CertifiedNo(_) => VerdictKind::CertifiedNo,
            Verdict::NoObstructionUpToBound(_) => VerdictKind::NoObstructionUpToBound,
        }
    }

    pub fn is_yes(&self) -> bool {
        matches!(self, Verdict::CertifiedYes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Verdict::CertifiedNo(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictKind {
    CertifiedYes,
    CertifiedNo,
    NoObstructionUpToBound,
}

impl VerdictKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            VerdictKind::CertifiedYes => "CertifiedYes",
            VerdictKind::CertifiedNo => "CertifiedNo",
            VerdictKind::NoObstructionUpToBound => "NoObstructionUpToBound",
        }
    }
}

impl fmt::Display for VerdictKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}
