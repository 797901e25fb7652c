//! Lipschitz and Whitney-type conditions for families of plane-curve
//! singularities `F(z, y) = 0` over a parameter space `Y = {z = 0}`.
//!
//! Family-level certificates (syntactic containment, explicit division in the
//! local ring at `(0, y₀)`) give `CertifiedYes`. Otherwise the check runs on
//! curves inside the single fiber over `y₀`: refutations there are sound for
//! the family, positive outcomes are only `NoObstructionUpToBound`.

use alloc::borrow::ToOwned;
use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::cyclotomic::CycRat;
use crate::division::{generator_index, local_division};
use crate::doubling::{double_ideal, saturation_membership};
use crate::error::{Error, Result};
use crate::icurve::{deepen, ic_membership, IdealOnCurve, Limits};
use crate::linalg;
use crate::poly::Poly;
use crate::puiseux::squarefree_part;
use crate::verdict::{Certificate, DivisionCertificate, SearchBound, Verdict, VerdictKind};

#[derive(Debug, Clone, PartialEq)]
pub struct Family {
    pub f: Poly,
    pub fiber_vars: Vec<String>,
    pub param_vars: Vec<String>,
    /// `∂F/∂z_i`
    pub jz: Vec<Poly>,
    /// `∂F/∂y_j`
    pub jy: Vec<Poly>,
    /// Generators of the ideal of `Y`: the fiber coordinates.
    pub my: Vec<Poly>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Condition {
    IlA,
    IlmY,
    W,
}

impl Condition {
    pub const ALL: [Condition; 3] = [Condition::IlA, Condition::IlmY, Condition::W];

    pub fn as_str(&self) -> &'static str {
        match self {
            Condition::IlA => "iL_A",
            Condition::IlmY => "iL_mY",
            Condition::W => "W",
        }
    }
}

/// Which module a cosupport rank refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleKind {
    Jz,
    MyJz,
}

fn zero_at(p: &Poly, vars: &[String]) -> Poly {
    let map: BTreeMap<String, Poly> = vars
        .iter()
        .map(|v| (v.clone(), Poly::zero(p.vars())))
        .collect();
    p.substitute(&map)
}

pub fn family_ideals(f: &Poly, fiber_vars: &[String], param_vars: &[String]) -> Result<Family> {
    if let Some(v) = fiber_vars.iter().find(|v| param_vars.contains(v)) {
        return Err(Error::InvalidArgument(format!("{} is both a fiber and a parameter variable", v)));
    }
    if let Some(v) = f
        .used_vars()
        .into_iter()
        .find(|v| !fiber_vars.contains(v) && !param_vars.contains(v))
    {
        return Err(Error::InvalidArgument(format!("variable {} is neither fiber nor parameter", v)));
    }
    if fiber_vars.is_empty() {
        return Err(Error::InvalidArgument("no fiber variables".into()));
    }
    let mut all = fiber_vars.to_vec();
    all.extend(param_vars.iter().cloned());
    let f = f.extend_vars(&all);
    let jz = fiber_vars.iter().map(|v| f.partial(v)).collect::<Result<Vec<_>>>()?;
    let jy = param_vars.iter().map(|v| f.partial(v)).collect::<Result<Vec<_>>>()?;
    if !zero_at(&f, fiber_vars).is_zero() {
        return Err(Error::NotAFamilyOverY(format!("F does not vanish on {{{} = 0}}", fiber_vars.join(" = "))));
    }
    for (v, d) in fiber_vars.iter().chain(param_vars).zip(jz.iter().chain(&jy)) {
        let r = zero_at(d, fiber_vars);
        if !r.is_zero() {
            return Err(Error::NotAFamilyOverY(format!("dF/d{} = {} on the parameter axis", v, r)));
        }
    }
    let my = fiber_vars.iter().map(|v| Poly::var(f.vars(), v)).collect();
    Ok(Family {
        f,
        fiber_vars: fiber_vars.to_vec(),
        param_vars: param_vars.to_vec(),
        jz,
        jy,
        my,
    })
}

impl Family {
    /// `m_Y·J_z(F)`, generated by the products `z_k·∂F/∂z_i`.
    pub fn my_jz(&self) -> Vec<Poly> {
        let mut out = Vec::new();
        for z in &self.my {
            for j in &self.jz {
                out.push(z.mul(j));
            }
        }
        out
    }

    pub fn module(&self, kind: ModuleKind) -> Vec<Poly> {
        match kind {
            ModuleKind::Jz => self.jz.clone(),
            ModuleKind::MyJz => self.my_jz(),
        }
    }

    fn check_params(&self, y0: &[CycRat]) -> Result<()> {
        if y0.len() != self.param_vars.len() {
            return Err(Error::InvalidArgument(format!(
                "{} parameter values given, {} expected",
                y0.len(),
                self.param_vars.len()
            )));
        }
        Ok(())
    }

    /// `p(z, y₀)` as a polynomial in the fiber variables.
    pub fn restrict(&self, p: &Poly, y0: &[CycRat]) -> Result<Poly> {
        self.check_params(y0)?;
        let map: BTreeMap<String, Poly> = self
            .param_vars
            .iter()
            .zip(y0)
            .map(|(v, c)| (v.clone(), Poly::constant(p.vars(), c.clone())))
            .collect();
        p.substitute(&map).with_vars(&self.fiber_vars)
    }

    /// `p(z, y₀ + y)`: moves the point `(0, y₀)` to the origin.
    pub fn translate(&self, p: &Poly, y0: &[CycRat]) -> Result<Poly> {
        self.check_params(y0)?;
        let map: BTreeMap<String, Poly> = self
            .param_vars
            .iter()
            .zip(y0)
            .map(|(v, c)| {
                let y = Poly::var(p.vars(), v);
                (v.clone(), y.add(&Poly::constant(p.vars(), c.clone())))
            })
            .collect();
        Ok(p.substitute(&map))
    }

    /// The fiber curve `f_{y₀}`, checked to be reduced (isolated singularity).
    pub fn fiber(&self, y0: &[CycRat]) -> Result<Poly> {
        let f0 = self.restrict(&self.f, y0)?;
        if self.fiber_vars.len() != 2 {
            return Err(Error::InvalidArgument("fibers must be plane curves".into()));
        }
        if f0.is_zero() {
            return Err(Error::NonIsolatedFiber("the fiber is the whole plane".into()));
        }
        let sq = squarefree_part(&f0)?;
        if sq.total_degree() != f0.total_degree() {
            return Err(Error::NonIsolatedFiber(format!("{} has a repeated factor", f0)));
        }
        Ok(f0)
    }
}

fn merge(verdicts: Vec<Verdict>, bound: &SearchBound) -> Verdict {
    if let Some(no) = verdicts.iter().find(|v| v.is_no()) {
        return no.clone();
    }
    if verdicts.iter().all(Verdict::is_yes) {
        let certs = verdicts
            .into_iter()
            .map(|v| match v {
                Verdict::CertifiedYes(c) => c,
                _ => unreachable!(),
            })
            .collect();
        return Verdict::CertifiedYes(Certificate::Each(certs));
    }
    Verdict::NoObstructionUpToBound(*bound)
}

/// Express a certificate over `z_k·J_i` in terms of the `J_i`.
fn absorb(cert: DivisionCertificate, my: &[Poly], nj: usize) -> DivisionCertificate {
    let vars = cert.unit.vars().to_vec();
    let mut coeffs = vec![Poly::zero(&vars); nj];
    for (idx, a) in cert.coeffs.iter().enumerate() {
        let (k, i) = (idx / nj, idx % nj);
        coeffs[i] = coeffs[i].add(&a.mul(&my[k]));
    }
    DivisionCertificate {
        unit: cert.unit,
        coeffs,
        relation_coeffs: cert.relation_coeffs,
    }
}

/// Family-level certificate that `g` lies in the module ideal at `(0, y₀)`.
fn family_certificate(
    fam: &Family,
    cond: Condition,
    g: &Poly,
    y0: &[CycRat],
    bound: &SearchBound,
) -> Result<Option<Certificate>> {
    let gens = match cond {
        Condition::IlA => fam.jz.clone(),
        Condition::IlmY | Condition::W => fam.my_jz(),
    };
    if let Some(index) = generator_index(g, &gens) {
        return Ok(Some(Certificate::Generator { index }));
    }
    let gt = fam.translate(g, y0)?;
    let ft = fam.translate(&fam.f, y0)?;
    let tr = |gs: &[Poly]| gs.iter().map(|p| fam.translate(p, y0)).collect::<Result<Vec<_>>>();
    if let Some(c) = local_division(&gt, &tr(&gens)?, core::slice::from_ref(&ft), bound.div) {
        return Ok(Some(Certificate::Division(c)));
    }
    if cond == Condition::IlA {
        // m_Y·J_z ⊆ J_z: keep every iL_mY certificate valid here as well.
        let my = tr(&fam.my)?;
        if let Some(c) = local_division(&gt, &tr(&fam.my_jz())?, core::slice::from_ref(&ft), bound.div) {
            return Ok(Some(Certificate::Division(absorb(c, &my, fam.jz.len()))));
        }
    }
    Ok(None)
}

/// One condition at the parameter value `y₀`.
pub fn check(fam: &Family, cond: Condition, y0: &[CycRat], bound: &SearchBound, limits: Limits) -> Result<Verdict> {
    let f0 = fam.fiber(y0)?;
    if fam.jy.is_empty() {
        return Ok(Verdict::CertifiedYes(Certificate::Vacuous("no parameter derivatives".into())));
    }
    let gens = match cond {
        Condition::IlA => fam.jz.clone(),
        Condition::IlmY | Condition::W => fam.my_jz(),
    };
    let gens0: Vec<Poly> = gens
        .iter()
        .map(|g| fam.restrict(g, y0))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .filter(|g| !g.is_zero())
        .collect();
    if gens0.is_empty() {
        return Err(Error::NonIsolatedFiber("the module vanishes on the fiber".into()));
    }
    let mut verdicts = Vec::with_capacity(fam.jy.len());
    for g in &fam.jy {
        if let Some(c) = family_certificate(fam, cond, g, y0, bound)? {
            verdicts.push(Verdict::CertifiedYes(c));
            continue;
        }
        let g0 = fam.restrict(g, y0)?;
        let v = deepen(&f0, limits, |t| {
            let ideal = IdealOnCurve::new(gens0.clone(), f0.clone(), t)?;
            match cond {
                Condition::W => ic_membership(&g0, &ideal),
                _ => saturation_membership(&g0, &ideal, bound),
            }
        })?;
        verdicts.push(match v {
            Verdict::CertifiedNo(w) => Verdict::CertifiedNo(w),
            _ => Verdict::NoObstructionUpToBound(*bound),
        });
        if verdicts.last().is_some_and(Verdict::is_no) {
            break;
        }
    }
    Ok(merge(verdicts, bound))
}

pub fn check_ila(fam: &Family, y0: &[CycRat], bound: &SearchBound, limits: Limits) -> Result<Verdict> {
    check(fam, Condition::IlA, y0, bound, limits)
}

pub fn check_ilmy(fam: &Family, y0: &[CycRat], bound: &SearchBound, limits: Limits) -> Result<Verdict> {
    check(fam, Condition::IlmY, y0, bound, limits)
}

pub fn check_w(fam: &Family, y0: &[CycRat], bound: &SearchBound, limits: Limits) -> Result<Verdict> {
    check(fam, Condition::W, y0, bound, limits)
}

/// Exact rank of the doubled module evaluated at `(z, z', y)`.
pub fn cosupport_rank(fam: &Family, kind: ModuleKind, z: &[CycRat], z2: &[CycRat], y: &[CycRat]) -> Result<usize> {
    fam.check_params(y)?;
    let n = fam.fiber_vars.len();
    if z.len() != n || z2.len() != n {
        return Err(Error::InvalidArgument(format!("points need {} fiber coordinates", n)));
    }
    let mut pt: BTreeMap<String, CycRat> = fam.param_vars.iter().cloned().zip(y.iter().cloned()).collect();
    for (side, coords) in [z, z2].into_iter().enumerate() {
        let mut p = pt.clone();
        for (v, c) in fam.fiber_vars.iter().zip(coords) {
            p.insert(v.clone(), c.clone());
        }
        if !fam.f.eval(&p)?.is_zero() {
            return Err(Error::NotOnVariety);
        }
        for (v, c) in fam.fiber_vars.iter().zip(coords) {
            let name = if side == 0 { v.clone() } else { crate::poly::prime(v) };
            pt.insert(name, c.clone());
        }
    }
    let m = double_ideal(&fam.module(kind), &fam.fiber_vars, &fam.param_vars)?;
    let mut rows = vec![Vec::new(), Vec::new()];
    for [a, b] in &m.gen_list {
        rows[0].push(a.eval(&pt)?);
        rows[1].push(b.eval(&pt)?);
    }
    Ok(linalg::rank(&rows))
}

/// Verdict kind or error name, used to compare sweep rows.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Outcome {
    Verdict(VerdictKind),
    Error(String),
}

impl Outcome {
    pub fn of(r: &Result<Verdict>) -> Outcome {
        match r {
            Ok(v) => Outcome::Verdict(v.kind()),
            Err(e) => Outcome::Error(error_name(e).to_owned()),
        }
    }
}

pub fn error_name(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "DivisionByZero",
        Error::UnknownVariable(_) => "UnknownVariable",
        Error::IllegalComposition => "IllegalComposition",
        Error::Parse { .. } => "Parse",
        Error::NoSingularPoint => "NoSingularPoint",
        Error::UnsupportedExtension(_) => "UnsupportedExtension",
        Error::TruncationInsufficient(_) => "TruncationInsufficient",
        Error::NotFiniteColength => "NotFiniteColength",
        Error::NotNested => "NotNested",
        Error::EmptyIdeal => "EmptyIdeal",
        Error::NotAFamilyOverY(_) => "NotAFamilyOverY",
        Error::NonIsolatedFiber(_) => "NonIsolatedFiber",
        Error::NonIsolatedSection(_) => "NonIsolatedSection",
        Error::NotOnVariety => "NotOnVariety",
        Error::DegenerateInput(_) => "DegenerateInput",
        Error::DegenerateCurve(_) => "DegenerateCurve",
        Error::InvalidArgument(_) => "InvalidArgument",
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub sample: Vec<CycRat>,
    /// In the order of [`Condition::ALL`].
    pub results: Vec<Result<Verdict>>,
}

impl SweepRow {
    pub fn signature(&self) -> Vec<Outcome> {
        self.results.iter().map(Outcome::of).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub rows: Vec<SweepRow>,
    pub majority: Vec<Outcome>,
    /// Indices of rows whose signature differs from the majority.
    pub exceptional: Vec<usize>,
}

pub fn parameter_sweep(fam: &Family, samples: &[Vec<CycRat>], bound: &SearchBound, limits: Limits) -> SweepReport {
    let rows: Vec<SweepRow> = samples
        .iter()
        .map(|y0| SweepRow {
            sample: y0.clone(),
            results: Condition::ALL
                .iter()
                .map(|c| check(fam, *c, y0, bound, limits))
                .collect(),
        })
        .collect();
    let sigs: Vec<Vec<Outcome>> = rows.iter().map(SweepRow::signature).collect();
    let mut majority: Vec<Outcome> = Vec::new();
    let mut best = 0;
    for s in &sigs {
        let n = sigs.iter().filter(|t| *t == s).count();
        if n > best {
            best = n;
            majority = s.clone();
        }
    }
    let exceptional = sigs
        .iter()
        .enumerate()
        .filter(|(_, s)| **s != majority)
        .map(|(i, _)| i)
        .collect();
    SweepReport {
        rows,
        majority,
        exceptional,
    }
}

/// A chart of the family of hyperplane sections `z_n = Σ a_i z_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannChart {
    /// `G = F∘β`
    pub g: Poly,
    pub chart_var: String,
    /// Coordinates kept by `β`, in order.
    pub fiber_vars: Vec<String>,
    /// `a_i`, one per kept coordinate.
    pub params: Vec<String>,
    /// `∂F/∂z_n ∘ β`
    pub dfn_beta: Poly,
    pub dgda: Vec<Poly>,
    pub jz: Vec<Poly>,
    /// `∂G/∂a_i = z_i·(∂F/∂z_n∘β)` for all `i`.
    pub dgda_identity: bool,
    /// `∂G/∂z_j = ∂F/∂z_j∘β + a_j·(∂F/∂z_n∘β)` for all `j`.
    pub jz_identity: bool,
}

pub fn grassmann_chart(f: &Poly, chart: usize) -> Result<GrassmannChart> {
    let vars = f.vars().to_vec();
    if chart >= vars.len() || vars.len() < 2 {
        return Err(Error::InvalidArgument(format!("chart {} invalid for {} variables", chart, vars.len())));
    }
    let chart_var = vars[chart].clone();
    let fiber_vars: Vec<String> = vars.iter().filter(|v| **v != chart_var).cloned().collect();
    let params: Vec<String> = (1..=fiber_vars.len()).map(|i| format!("a{}", i)).collect();
    if let Some(a) = params.iter().find(|a| vars.contains(a)) {
        return Err(Error::InvalidArgument(format!("parameter name {} clashes with a variable", a)));
    }
    let mut all = vars.clone();
    all.extend(params.iter().cloned());
    let mut lin = Poly::zero(&all);
    for (z, a) in fiber_vars.iter().zip(&params) {
        lin = lin.add(&Poly::var(&all, z).mul(&Poly::var(&all, a)));
    }
    let beta: BTreeMap<String, Poly> = [(chart_var.clone(), lin)].into_iter().collect();
    let compose = |p: &Poly| -> Result<Poly> {
        let out = p.extend_vars(&all).substitute(&beta);
        let mut keep = fiber_vars.clone();
        keep.extend(params.iter().cloned());
        out.with_vars(&keep)
    };
    let g = compose(f)?;
    let dfn_beta = compose(&f.partial(&chart_var)?)?;
    let dgda = params.iter().map(|a| g.partial(a)).collect::<Result<Vec<_>>>()?;
    let jz = fiber_vars.iter().map(|z| g.partial(z)).collect::<Result<Vec<_>>>()?;
    let dgda_identity = fiber_vars
        .iter()
        .zip(&dgda)
        .all(|(z, d)| *d == Poly::var(g.vars(), z).mul(&dfn_beta));
    let mut jz_identity = true;
    for ((z, a), j) in fiber_vars.iter().zip(&params).zip(&jz) {
        let rhs = compose(&f.partial(z)?)?.add(&Poly::var(g.vars(), a).mul(&dfn_beta));
        jz_identity &= *j == rhs;
    }
    Ok(GrassmannChart {
        g,
        chart_var,
        fiber_vars,
        params,
        dfn_beta,
        dgda,
        jz,
        dgda_identity,
        jz_identity,
    })
}

/// `z_i·∂F/∂z_n∘β ∈ (J_z(G))_S` on the section `z_n = Σ hᵢ z_i`.
pub fn hyperplane_section_check(
    f: &Poly,
    chart: usize,
    h: &[CycRat],
    bound: &SearchBound,
    limits: Limits,
) -> Result<Verdict> {
    if f.used_vars().len() > 3 || f.vars().len() != 3 {
        return Err(Error::InvalidArgument("hyperplane sections need F in three variables".into()));
    }
    if !f.vanishes_at_origin() {
        return Err(Error::NoSingularPoint);
    }
    let smooth = f
        .vars()
        .iter()
        .map(|v| f.partial(v))
        .collect::<Result<Vec<_>>>()?
        .iter()
        .any(|d| !d.vanishes_at_origin());
    if smooth {
        return Ok(Verdict::CertifiedYes(Certificate::Vacuous("F is smooth at the origin".into())));
    }
    let gc = grassmann_chart(f, chart)?;
    let fam = family_ideals(&gc.g, &gc.fiber_vars, &gc.params)?;
    let section = fam.restrict(&fam.f, h)?;
    if section.is_zero() {
        return Err(Error::NonIsolatedSection("the hyperplane lies in X".into()));
    }
    match check_ila(&fam, h, bound, limits) {
        Err(Error::NonIsolatedFiber(m)) => Err(Error::NonIsolatedSection(m)),
        r => r,
    }
}
