//! Serializable mirrors of engine values. Field elements, exponents and
//! orders travel as strings in the engine's own text format so that a report
//! can be read back without loss.

use lipsat_core::parse::parse_constant;
use lipsat_core::puiseux::Branch;
use lipsat_core::series::Exponent;
use lipsat_core::verdict::{
    BranchOrder, BranchWitness, Certificate, CurveSide, DivisionCertificate, PairCurve, PairWitness, SearchBound,
    Verdict, Witness,
};
use lipsat_core::{parse_poly_with_vars, CycRat, Order, PSeries, Poly};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Version tag carried by every report.
pub const SCHEMA: &str = "lipsat/1";

fn bad(what: &str, detail: impl std::fmt::Display) -> CliError {
    CliError::Malformed(format!("{}: {}", what, detail))
}

pub fn exponent_str(e: Exponent) -> String {
    e.to_string()
}

pub fn parse_exponent(s: &str) -> CliResult<Exponent> {
    s.trim().parse::<Exponent>().map_err(|e| bad("exponent", format!("{} ({})", s, e)))
}

pub fn order_str(o: Order) -> String {
    o.to_string()
}

pub fn parse_order(s: &str) -> CliResult<Order> {
    match s.strip_prefix(">=") {
        Some(rest) => Ok(Order::AtLeast(parse_exponent(rest)?)),
        None => Ok(Order::Finite(parse_exponent(s)?)),
    }
}

pub fn parse_coeff(s: &str) -> CliResult<CycRat> {
    parse_constant(s).map_err(|e| bad("coefficient", format!("{} ({})", s, e)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub trunc: String,
    /// `[exponent, coefficient]` pairs in increasing exponent.
    pub terms: Vec<[String; 2]>,
}

impl From<&PSeries> for SeriesJson {
    fn from(s: &PSeries) -> Self {
        SeriesJson {
            trunc: exponent_str(s.trunc()),
            terms: s.terms().map(|(e, c)| [exponent_str(e), c.to_string()]).collect(),
        }
    }
}

impl SeriesJson {
    pub fn to_series(&self) -> CliResult<PSeries> {
        let trunc = parse_exponent(&self.trunc)?;
        let terms = self
            .terms
            .iter()
            .map(|[e, c]| Ok((parse_exponent(e)?, parse_coeff(c)?)))
            .collect::<CliResult<Vec<_>>>()?;
        Ok(PSeries::from_terms(trunc, terms))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchJson {
    pub display: String,
    pub vars: Vec<String>,
    pub mult: u32,
    pub exact: bool,
    pub comps: Vec<SeriesJson>,
}

impl From<&Branch> for BranchJson {
    fn from(b: &Branch) -> Self {
        BranchJson {
            display: b.to_string(),
            vars: b.vars.clone(),
            mult: b.mult,
            exact: b.exact,
            comps: b.comps.iter().map(SeriesJson::from).collect(),
        }
    }
}

impl BranchJson {
    pub fn to_branch(&self, source: &Poly) -> CliResult<Branch> {
        let comps = self.comps.iter().map(SeriesJson::to_series).collect::<CliResult<Vec<_>>>()?;
        Ok(Branch::new(self.vars.clone(), comps, source.clone(), self.exact)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SideJson {
    /// `null` for the constant map to the origin.
    pub branch: Option<usize>,
    pub coeff: String,
    pub exp: u32,
    /// Root-of-unity twist written `(zN)^k`.
    pub twist: Option<String>,
}

pub fn twist_str(n: u32, k: u32) -> String {
    format!("(z{})^{}", n, k)
}

fn parse_twist(s: &str) -> CliResult<(u32, u32)> {
    let inner = s
        .strip_prefix("(z")
        .and_then(|r| r.split_once(")^"))
        .ok_or_else(|| bad("twist", s))?;
    let n = inner.0.parse().map_err(|e| bad("twist", e))?;
    let k = inner.1.parse().map_err(|e| bad("twist", e))?;
    if n == 0 {
        return Err(bad("twist", s));
    }
    Ok((n, k))
}

impl From<&CurveSide> for SideJson {
    fn from(s: &CurveSide) -> Self {
        SideJson {
            branch: s.branch,
            coeff: s.coeff.to_string(),
            exp: s.exp,
            twist: s.twist.map(|(n, k)| twist_str(n, k)),
        }
    }
}

impl SideJson {
    /// A twist, when present, decides the coefficient.
    pub fn to_side(&self) -> CliResult<CurveSide> {
        let Some(branch) = self.branch else {
            return Ok(CurveSide::zero());
        };
        if self.exp == 0 {
            return Err(bad("curve side", "exponent must be positive"));
        }
        match &self.twist {
            Some(t) => {
                let (n, k) = parse_twist(t)?;
                Ok(CurveSide::twisted(branch, self.exp, n, k))
            }
            None => {
                let c = parse_coeff(&self.coeff)?;
                if c.is_one() {
                    Ok(CurveSide::plain(branch, self.exp))
                } else {
                    Ok(CurveSide::scaled(branch, self.exp, c))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveJson {
    pub first: SideJson,
    pub second: SideJson,
}

impl From<&PairCurve> for CurveJson {
    fn from(c: &PairCurve) -> Self {
        CurveJson {
            first: (&c.first).into(),
            second: (&c.second).into(),
        }
    }
}

impl CurveJson {
    pub fn to_curve(&self) -> CliResult<PairCurve> {
        Ok(PairCurve {
            first: self.first.to_side()?,
            second: self.second.to_side()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairWitnessJson {
    pub curve: CurveJson,
    pub branches: Vec<BranchJson>,
    pub target_orders: [String; 2],
    pub pivots: Vec<String>,
    pub residual: Vec<SeriesJson>,
    pub residual_valuation: String,
    pub contraction_valuation: String,
    pub contraction_target: String,
    pub trunc: String,
    pub gap: String,
}

impl From<&PairWitness> for PairWitnessJson {
    fn from(w: &PairWitness) -> Self {
        PairWitnessJson {
            curve: (&w.curve).into(),
            branches: w.branches.iter().map(BranchJson::from).collect(),
            target_orders: [order_str(w.target_orders[0]), order_str(w.target_orders[1])],
            pivots: w.pivots.iter().map(|p| exponent_str(*p)).collect(),
            residual: w.residual.iter().map(SeriesJson::from).collect(),
            residual_valuation: exponent_str(w.residual_valuation),
            contraction_valuation: order_str(w.contraction_valuation),
            contraction_target: order_str(w.contraction_target),
            trunc: exponent_str(w.trunc),
            gap: w.gap(),
        }
    }
}

impl PairWitnessJson {
    pub fn to_witness(&self, source: &Poly) -> CliResult<PairWitness> {
        Ok(PairWitness {
            curve: self.curve.to_curve()?,
            branches: self.branches.iter().map(|b| b.to_branch(source)).collect::<CliResult<_>>()?,
            target_orders: [parse_order(&self.target_orders[0])?, parse_order(&self.target_orders[1])?],
            pivots: self.pivots.iter().map(|p| parse_exponent(p)).collect::<CliResult<_>>()?,
            residual: self.residual.iter().map(SeriesJson::to_series).collect::<CliResult<_>>()?,
            residual_valuation: parse_exponent(&self.residual_valuation)?,
            contraction_valuation: parse_order(&self.contraction_valuation)?,
            contraction_target: parse_order(&self.contraction_target)?,
            trunc: parse_exponent(&self.trunc)?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchOrderJson {
    pub branch: usize,
    pub target: String,
    pub ideal: String,
}

impl From<&BranchOrder> for BranchOrderJson {
    fn from(r: &BranchOrder) -> Self {
        BranchOrderJson {
            branch: r.branch,
            target: order_str(r.target),
            ideal: exponent_str(r.ideal),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum WitnessJson {
    Branch {
        branch_index: usize,
        branch: BranchJson,
        target_order: String,
        ideal_order: String,
    },
    Residual {
        residual: Vec<SeriesJson>,
        valuation: String,
        pivots: Vec<String>,
    },
    PairCurve(PairWitnessJson),
}

impl From<&Witness> for WitnessJson {
    fn from(w: &Witness) -> Self {
        match w {
            Witness::Branch(BranchWitness {
                branch_index,
                branch,
                target_order,
                ideal_order,
            }) => WitnessJson::Branch {
                branch_index: *branch_index,
                branch: branch.into(),
                target_order: order_str(*target_order),
                ideal_order: exponent_str(*ideal_order),
            },
            Witness::Residual {
                residual,
                valuation,
                pivots,
            } => WitnessJson::Residual {
                residual: residual.iter().map(SeriesJson::from).collect(),
                valuation: exponent_str(*valuation),
                pivots: pivots.iter().map(|p| exponent_str(*p)).collect(),
            },
            Witness::PairCurve(p) => WitnessJson::PairCurve(p.as_ref().into()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DivisionJson {
    pub unit: String,
    pub coeffs: Vec<String>,
    pub relation_coeffs: Vec<String>,
}

impl From<&DivisionCertificate> for DivisionJson {
    fn from(d: &DivisionCertificate) -> Self {
        DivisionJson {
            unit: d.unit.to_string(),
            coeffs: d.coeffs.iter().map(|c| c.to_string()).collect(),
            relation_coeffs: d.relation_coeffs.iter().map(|c| c.to_string()).collect(),
        }
    }
}

impl DivisionJson {
    pub fn to_certificate(&self, vars: &[String]) -> CliResult<DivisionCertificate> {
        let p = |s: &String| parse_poly_with_vars(s, vars).map_err(|e| bad("certificate polynomial", e));
        Ok(DivisionCertificate {
            unit: p(&self.unit)?,
            coeffs: self.coeffs.iter().map(p).collect::<CliResult<_>>()?,
            relation_coeffs: self.relation_coeffs.iter().map(p).collect::<CliResult<_>>()?,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CertificateJson {
    Vacuous { reason: String },
    Generator { index: usize },
    BranchOrders { rows: Vec<BranchOrderJson> },
    Combination { coeffs: Vec<SeriesJson>, trunc: String },
    Division(DivisionJson),
    Each { items: Vec<CertificateJson> },
}

impl From<&Certificate> for CertificateJson {
    fn from(c: &Certificate) -> Self {
        match c {
            Certificate::Vacuous(r) => CertificateJson::Vacuous { reason: r.clone() },
            Certificate::Generator { index } => CertificateJson::Generator { index: *index },
            Certificate::BranchOrders(rows) => CertificateJson::BranchOrders {
                rows: rows.iter().map(BranchOrderJson::from).collect(),
            },
            Certificate::Combination { coeffs, trunc } => CertificateJson::Combination {
                coeffs: coeffs.iter().map(SeriesJson::from).collect(),
                trunc: exponent_str(*trunc),
            },
            Certificate::Division(d) => CertificateJson::Division(d.into()),
            Certificate::Each(items) => CertificateJson::Each {
                items: items.iter().map(CertificateJson::from).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundJson {
    pub exp: u32,
    pub root: u32,
    pub div: u32,
}

impl From<&SearchBound> for BoundJson {
    fn from(b: &SearchBound) -> Self {
        BoundJson {
            exp: b.exp,
            root: b.root,
            div: b.div,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum VerdictJson {
    CertifiedYes { certificate: CertificateJson },
    CertifiedNo { witness: WitnessJson },
    NoObstructionUpToBound { bound: BoundJson },
}

impl From<&Verdict> for VerdictJson {
    fn from(v: &Verdict) -> Self {
        match v {
            Verdict::CertifiedYes(c) => VerdictJson::CertifiedYes { certificate: c.into() },
            Verdict::CertifiedNo(w) => VerdictJson::CertifiedNo { witness: w.into() },
            Verdict::NoObstructionUpToBound(b) => VerdictJson::NoObstructionUpToBound { bound: b.into() },
        }
    }
}

/// An engine failure recorded in a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorJson {
    pub error: String,
    pub message: String,
}

/// Verdict or error, as stored in sweep rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OutcomeJson {
    Verdict(VerdictJson),
    Error(ErrorJson),
}

impl From<&lipsat_core::Result<Verdict>> for OutcomeJson {
    fn from(r: &lipsat_core::Result<Verdict>) -> Self {
        match r {
            Ok(v) => OutcomeJson::Verdict(v.into()),
            Err(e) => OutcomeJson::Error(ErrorJson {
                error: lipsat_core::conditions::error_name(e).to_string(),
                message: e.to_string(),
            }),
        }
    }
}
