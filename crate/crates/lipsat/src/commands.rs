//! Subcommand dispatch and report assembly.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use lipsat_core::conditions::{
    check, cosupport_rank, family_ideals, grassmann_chart, hyperplane_section_check, parameter_sweep, Condition,
    Family, ModuleKind, Outcome,
};
use lipsat_core::division::{generator_index, verify_division};
use lipsat_core::doubling::{
    candidate_curves, closure_membership_on_curve, curve_trunc, double_ideal, replay_pair_witness,
    saturation_membership,
};
use lipsat_core::geometry::{
    hyperplane_distance, lipschitz_exponent_probe, tangent_commensurability_probe, DistanceMethod, Hyperplane,
};
use lipsat_core::icurve::{deepen, ic_membership, ideal_multiplicity, branch_orders, IdealOnCurve, Limits};
use lipsat_core::parse::{parse_constant, split_list};
use lipsat_core::puiseux::puiseux_branches;
use lipsat_core::verdict::{Certificate, CurveSide, PairCurve, SearchBound, Verdict, Witness};
use lipsat_core::{parse_poly, parse_poly_with_vars, CycRat, Poly};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::cli::{CheckArgs, Cli, Command, CurveArgs, FamilyArgs, MemberArgs, MethodArg, ModuleArg};
use crate::config::{FileConfig, Format, Settings, CEILING_ENV};
use crate::error::{exit, CliError, CliResult};
use crate::json::{
    exponent_str, order_str, twist_str, BoundJson, BranchJson, CertificateJson, CurveJson, OutcomeJson, VerdictJson,
    WitnessJson, SCHEMA,
};

/// Rendered report and exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitsJson {
    pub trunc: Option<i64>,
    pub ceiling: i64,
}

impl From<Limits> for LimitsJson {
    fn from(l: Limits) -> Self {
        LimitsJson {
            trunc: l.trunc,
            ceiling: l.ceiling,
        }
    }
}

impl From<LimitsJson> for Limits {
    fn from(l: LimitsJson) -> Self {
        Limits {
            trunc: l.trunc,
            ceiling: l.ceiling,
        }
    }
}

/// Envelope shared by every JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub command: String,
    pub seed: u64,
    pub bound: Option<BoundJson>,
    pub limits: LimitsJson,
    pub input: Value,
    pub result: Value,
}

struct Rendered {
    report: Report,
    text: String,
    csv: Option<String>,
    code: i32,
}

/// Resolve settings (file, then environment, then flags) and run one subcommand.
pub fn run(cli: &Cli) -> CliResult<Output> {
    let file = match &cli.global.config {
        Some(p) => FileConfig::load(p)?,
        None => FileConfig::default(),
    };
    let env = std::env::var(CEILING_ENV).ok();
    let settings = Settings::resolve(&file, env.as_deref(), &cli.global.overrides())?;
    let r = dispatch(&cli.command, &settings)?;
    let text = match settings.format {
        Format::Text => r.text,
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&r.report)?;
            s.push('\n');
            s
        }
        Format::Csv => r.csv.ok_or_else(|| {
            CliError::Usage(format!(
                "--format csv is available for sweep, probe-tangent and probe-lipschitz, not {}",
                cli.command.name()
            ))
        })?,
    };
    Ok(Output { text, code: r.code })
}

fn verdict_code(v: &Verdict) -> i32 {
    if v.is_no() {
        exit::NO
    } else {
        exit::OK
    }
}

fn report(command: &str, s: &Settings, bound: Option<SearchBound>, limits: Limits, input: Value, result: Value) -> Report {
    Report {
        schema: SCHEMA.to_string(),
        command: command.to_string(),
        seed: s.seed,
        bound: bound.as_ref().map(BoundJson::from),
        limits: limits.into(),
        input,
        result,
    }
}

fn dispatch(cmd: &Command, s: &Settings) -> CliResult<Rendered> {
    let name = cmd.name();
    match cmd {
        Command::Parametrize { f } => parametrize(f, s),
        Command::Iclosure(a) | Command::Saturation(a) => {
            let (f, gens, h) = member_inputs(a)?;
            let bound = s.bound(degree(&f));
            let v = decide_member(name, &f, &gens, &h, &bound, s.limits)?;
            Ok(verdict_rendered(report(name, s, Some(bound), s.limits, member_json(&f, &gens, &h), verdict_value(&v)?), &v))
        }
        Command::Mult(a) => mult(a, s),
        Command::CheckIla(a) | Command::CheckIlmy(a) | Command::CheckW(a) => {
            let cond = match cmd {
                Command::CheckIla(_) => Condition::IlA,
                Command::CheckIlmy(_) => Condition::IlmY,
                _ => Condition::W,
            };
            let (fam, y0) = check_inputs(a)?;
            let bound = s.bound(degree(&fam.f));
            let v = check(&fam, cond, &y0, &bound, s.limits)?;
            let input = check_json(&a.family, &a.at);
            Ok(verdict_rendered(report(name, s, Some(bound), s.limits, input, verdict_value(&v)?), &v))
        }
        Command::Cosupport {
            family,
            at,
            z,
            z2,
            module,
        } => {
            let fam = family_of(family)?;
            let y0 = constants(at)?;
            let kind = match module {
                ModuleArg::Jz => ModuleKind::Jz,
                ModuleArg::Myjz => ModuleKind::MyJz,
            };
            let r = cosupport_rank(&fam, kind, &constants(z)?, &constants(z2)?, &y0)?;
            let mut input = family_json(family);
            input["at"] = json!(at);
            input["z"] = json!(z);
            input["z2"] = json!(z2);
            input["module"] = json!(format!("{:?}", module).to_lowercase());
            Ok(Rendered {
                report: report(name, s, None, s.limits, input, json!({ "rank": r })),
                text: format!("rank {}\n", r),
                csv: None,
                code: exit::OK,
            })
        }
        Command::Sweep { family, samples } => sweep(family, samples, s),
        Command::Grassmann { total, chart } => grassmann(total, chart.as_deref(), s),
        Command::Section { total, chart, h } => {
            let f = parse_poly(total)?;
            let idx = chart_index(&f, chart.as_deref())?;
            let hs = constants(h)?;
            let bound = s.bound(degree(&f));
            let v = hyperplane_section_check(&f, idx, &hs, &bound, s.limits)?;
            let input = json!({ "F": total, "chart": f.vars()[idx], "h": h });
            Ok(verdict_rendered(report(name, s, Some(bound), s.limits, input, verdict_value(&v)?), &v))
        }
        Command::Distance { a, b, method } => distance(a, b, *method, s),
        Command::ProbeTangent { family, at, samples } => probe_tangent(family, at, *samples, s),
        Command::ProbeLipschitz(a) => probe_lipschitz(a, s),
        Command::Replay { witness } => {
            let text = std::fs::read_to_string(witness).map_err(|source| CliError::Io {
                path: witness.display().to_string(),
                source,
            })?;
            replay(&text, s)
        }
    }
}

fn degree(f: &Poly) -> u32 {
    f.total_degree().unwrap_or(1)
}

fn member_inputs(a: &MemberArgs) -> CliResult<(Poly, Vec<Poly>, Poly)> {
    let (f, gens) = curve_inputs(&a.curve)?;
    let h = parse_poly_with_vars(&a.h, f.vars())?;
    check_vars(&h, &f)?;
    Ok((f, gens, h))
}

fn check_vars(p: &Poly, f: &Poly) -> CliResult<()> {
    match p.used_vars().into_iter().find(|v| !f.vars().contains(v)) {
        Some(v) => Err(CliError::Usage(format!("variable {} does not occur in f = {}", v, f))),
        None => Ok(()),
    }
}

fn curve_inputs(a: &CurveArgs) -> CliResult<(Poly, Vec<Poly>)> {
    let f = parse_poly(&a.f)?;
    let gens = match &a.gens {
        Some(list) => {
            let gs = split_list(list)
                .iter()
                .map(|g| parse_poly_with_vars(g, f.vars()))
                .collect::<lipsat_core::Result<Vec<_>>>()?;
            for g in &gs {
                check_vars(g, &f)?;
            }
            gs.into_iter().map(|g| g.with_vars(f.vars())).collect::<lipsat_core::Result<Vec<_>>>()?
        }
        None => f.vars().iter().map(|v| f.partial(v)).collect::<lipsat_core::Result<Vec<_>>>()?,
    };
    Ok((f, gens))
}

fn member_json(f: &Poly, gens: &[Poly], h: &Poly) -> Value {
    json!({
        "f": f.to_string(),
        "gens": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
        "h": h.to_string(),
    })
}

fn decide_member(command: &str, f: &Poly, gens: &[Poly], h: &Poly, bound: &SearchBound, limits: Limits) -> CliResult<Verdict> {
    Ok(deepen(f, limits, |t| {
        let ideal = IdealOnCurve::new(gens.to_vec(), f.clone(), t)?;
        if command == "saturation" {
            saturation_membership(h, &ideal, bound)
        } else {
            ic_membership(h, &ideal)
        }
    })?)
}

fn family_of(a: &FamilyArgs) -> CliResult<Family> {
    let f = parse_poly(&a.total)?;
    Ok(family_ideals(&f, &split_list(&a.fiber), &split_list(&a.params))?)
}

fn constants(list: &str) -> CliResult<Vec<CycRat>> {
    Ok(split_list(list).iter().map(|c| parse_constant(c)).collect::<lipsat_core::Result<_>>()?)
}

fn check_inputs(a: &CheckArgs) -> CliResult<(Family, Vec<CycRat>)> {
    Ok((family_of(&a.family)?, constants(&a.at)?))
}

fn family_json(a: &FamilyArgs) -> Value {
    json!({ "F": a.total, "fiber": a.fiber, "params": a.params })
}

fn check_json(a: &FamilyArgs, at: &str) -> Value {
    let mut v = family_json(a);
    v["at"] = json!(at);
    v
}

fn verdict_value(v: &Verdict) -> CliResult<Value> {
    Ok(serde_json::to_value(VerdictJson::from(v))?)
}

fn verdict_rendered(report: Report, v: &Verdict) -> Rendered {
    Rendered {
        report,
        text: verdict_text(v),
        csv: None,
        code: verdict_code(v),
    }
}

fn side_text(s: &CurveSide) -> String {
    match s.branch {
        None => "0".into(),
        Some(b) => {
            let scale = match s.twist {
                Some((n, k)) => format!("{}*", twist_str(n, k)),
                None if s.coeff.is_one() => String::new(),
                None => format!("{}*", s.coeff),
            };
            let power = if s.exp == 1 { "t".to_string() } else { format!("t^{}", s.exp) };
            format!("branch {}({}{})", b, scale, power)
        }
    }
}

pub fn curve_text(c: &PairCurve) -> String {
    format!("({}, {})", side_text(&c.first), side_text(&c.second))
}

fn certificate_text(c: &Certificate, out: &mut String) {
    match c {
        Certificate::Vacuous(r) => writeln!(out, "certificate: vacuous ({})", r),
        Certificate::Generator { index } => writeln!(out, "certificate: generator {}", index),
        Certificate::BranchOrders(rows) => {
            let _ = writeln!(out, "certificate: branch orders");
            for r in rows {
                let _ = writeln!(out, "  branch {}: target {} >= ideal {}", r.branch, r.target, r.ideal);
            }
            Ok(())
        }
        Certificate::Combination { trunc, .. } => writeln!(out, "certificate: combination exact to t^{}", trunc),
        Certificate::Division(d) => {
            let _ = writeln!(out, "certificate: division with unit {}", d.unit);
            for (i, a) in d.coeffs.iter().enumerate() {
                let _ = writeln!(out, "  a{} = {}", i, a);
            }
            Ok(())
        }
        Certificate::Each(items) => {
            for c in items {
                certificate_text(c, out);
            }
            Ok(())
        }
    }
    .expect("writing to a string");
}

pub fn verdict_text(v: &Verdict) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", v.kind());
    match v {
        Verdict::CertifiedYes(c) => certificate_text(c, &mut out),
        Verdict::NoObstructionUpToBound(b) => {
            let _ = writeln!(out, "bound: {}", b);
        }
        Verdict::CertifiedNo(Witness::Branch(w)) => {
            let _ = writeln!(
                out,
                "witness: branch {} {}: target order {} < ideal order {}",
                w.branch_index, w.branch, w.target_order, w.ideal_order
            );
        }
        Verdict::CertifiedNo(Witness::Residual { valuation, pivots, .. }) => {
            let p: Vec<String> = pivots.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(out, "witness: residual of order {} against pivots [{}]", valuation, p.join(", "));
        }
        Verdict::CertifiedNo(Witness::PairCurve(w)) => {
            let _ = writeln!(out, "witness: pair-curve {}", curve_text(&w.curve));
            for (i, b) in w.branches.iter().enumerate() {
                let _ = writeln!(out, "  branch {}: {}", i, b);
            }
            let _ = writeln!(out, "  target orders: {}, {}", w.target_orders[0], w.target_orders[1]);
            let _ = writeln!(
                out,
                "  contraction: target {} vs module {}",
                w.contraction_target, w.contraction_valuation
            );
            let _ = writeln!(out, "gap: {}", w.gap());
        }
    }
    out
}

fn parametrize(src: &str, s: &Settings) -> CliResult<Rendered> {
    let f = parse_poly(src)?;
    let (branches, t) = deepen(&f, s.limits, |t| puiseux_branches(&f, t).map(|b| (b, t)))?;
    let mut text = String::new();
    for b in &branches {
        let _ = writeln!(text, "{}", b);
    }
    let result = json!({
        "trunc": t,
        "branches": branches.iter().map(BranchJson::from).collect::<Vec<_>>(),
    });
    Ok(Rendered {
        report: report("parametrize", s, None, s.limits, json!({ "f": f.to_string() }), result),
        text,
        csv: None,
        code: exit::OK,
    })
}

fn mult(a: &CurveArgs, s: &Settings) -> CliResult<Rendered> {
    let (f, gens) = curve_inputs(a)?;
    let (m, orders) = deepen(&f, s.limits, |t| {
        let ideal = IdealOnCurve::new(gens.clone(), f.clone(), t)?;
        Ok((ideal_multiplicity(&ideal)?, branch_orders(&ideal)?))
    })?;
    let mut text = format!("multiplicity {}\n", m);
    for (i, o) in orders.iter().enumerate() {
        let _ = writeln!(text, "  branch {}: order {}", i, o);
    }
    let input = json!({ "f": f.to_string(), "gens": gens.iter().map(|g| g.to_string()).collect::<Vec<_>>() });
    let result = json!({
        "multiplicity": m,
        "branch_orders": orders.iter().map(|o| exponent_str(*o)).collect::<Vec<_>>(),
    });
    Ok(Rendered {
        report: report("mult", s, None, s.limits, input, result),
        text,
        csv: None,
        code: exit::OK,
    })
}

/// `a..b` (inclusive integers) or a comma list of samples, `:` between parameters.
pub fn parse_samples(text: &str, params: usize) -> CliResult<Vec<Vec<CycRat>>> {
    if let Some((a, b)) = text.split_once("..") {
        let lo: i64 = a.trim().parse().map_err(|_| CliError::Usage(format!("bad range {:?}", text)))?;
        let hi: i64 = b.trim().parse().map_err(|_| CliError::Usage(format!("bad range {:?}", text)))?;
        if params != 1 || lo > hi {
            return Err(CliError::Usage(format!("range {:?} needs one parameter and lo <= hi", text)));
        }
        return Ok((lo..=hi).map(|k| vec![CycRat::from_int(k)]).collect());
    }
    split_list(text)
        .iter()
        .map(|sample| {
            let vals = sample
                .split(':')
                .map(|c| parse_constant(c.trim()))
                .collect::<lipsat_core::Result<Vec<_>>>()?;
            if vals.len() != params {
                return Err(CliError::Usage(format!("sample {:?} needs {} values", sample, params)));
            }
            Ok(vals)
        })
        .collect()
}

fn outcome_str(o: &Outcome) -> String {
    match o {
        Outcome::Verdict(k) => k.as_str().to_string(),
        Outcome::Error(e) => e.clone(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRowJson {
    pub sample: Vec<String>,
    pub results: BTreeMap<String, OutcomeJson>,
    pub exceptional: bool,
}

fn sweep(family: &FamilyArgs, samples_text: &str, s: &Settings) -> CliResult<Rendered> {
    let fam = family_of(family)?;
    let samples = parse_samples(samples_text, fam.param_vars.len())?;
    let bound = s.bound(degree(&fam.f));
    let rep = parameter_sweep(&fam, &samples, &bound, s.limits);
    let names: Vec<&str> = Condition::ALL.iter().map(Condition::as_str).collect();
    let mut rows = Vec::new();
    let mut text = String::new();
    let mut csv = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["sample"];
    header.extend(&names);
    header.push("exceptional");
    csv.write_record(&header)?;
    for (i, row) in rep.rows.iter().enumerate() {
        let sample: Vec<String> = row.sample.iter().map(|c| c.to_string()).collect();
        let exceptional = rep.exceptional.contains(&i);
        let sig: Vec<String> = row.signature().iter().map(outcome_str).collect();
        let cells: Vec<String> = names.iter().zip(&sig).map(|(n, o)| format!("{}={}", n, o)).collect();
        let _ = writeln!(
            text,
            "{}={}: {}{}",
            fam.param_vars.join(":"),
            sample.join(":"),
            cells.join(" "),
            if exceptional { "  [exceptional]" } else { "" }
        );
        let mut record = vec![sample.join(":")];
        record.extend(sig);
        record.push(exceptional.to_string());
        csv.write_record(&record)?;
        rows.push(SweepRowJson {
            sample,
            results: names.iter().zip(&row.results).map(|(n, r)| (n.to_string(), r.into())).collect(),
            exceptional,
        });
    }
    let majority: Vec<String> = rep.majority.iter().map(outcome_str).collect();
    let _ = writeln!(text, "majority: {}", majority.join(" "));
    let _ = writeln!(text, "exceptional: {:?}", rep.exceptional);
    let mut input = family_json(family);
    input["samples"] = json!(samples_text);
    let result = json!({ "rows": rows, "majority": majority, "exceptional": rep.exceptional });
    Ok(Rendered {
        report: report("sweep", s, Some(bound), s.limits, input, result),
        text,
        csv: Some(csv_string(csv)?),
        code: exit::OK,
    })
}

fn csv_string(w: csv::Writer<Vec<u8>>) -> CliResult<String> {
    let bytes = w.into_inner().map_err(|e| CliError::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn chart_index(f: &Poly, chart: Option<&str>) -> CliResult<usize> {
    match chart {
        None => Ok(f.vars().len().saturating_sub(1)),
        Some(c) => f
            .vars()
            .iter()
            .position(|v| v == c)
            .ok_or_else(|| CliError::Usage(format!("chart variable {} does not occur in F", c))),
    }
}

fn grassmann(total: &str, chart: Option<&str>, s: &Settings) -> CliResult<Rendered> {
    let f = parse_poly(total)?;
    let gc = grassmann_chart(&f, chart_index(&f, chart)?)?;
    let strs = |v: &[Poly]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    let mut text = format!("G = {}\ndF/d{} o beta = {}\n", gc.g, gc.chart_var, gc.dfn_beta);
    for (a, d) in gc.params.iter().zip(&gc.dgda) {
        let _ = writeln!(text, "dG/d{} = {}", a, d);
    }
    let _ = writeln!(text, "dG/da_i = z_i*(dF/dz_n o beta): {}", gc.dgda_identity);
    let _ = writeln!(text, "dG/dz_j = dF/dz_j o beta + a_j*(dF/dz_n o beta): {}", gc.jz_identity);
    let result = json!({
        "g": gc.g.to_string(),
        "chart_var": gc.chart_var,
        "fiber_vars": gc.fiber_vars,
        "params": gc.params,
        "dfn_beta": gc.dfn_beta.to_string(),
        "dgda": strs(&gc.dgda),
        "jz": strs(&gc.jz),
        "dgda_identity": gc.dgda_identity,
        "jz_identity": gc.jz_identity,
    });
    let input = json!({ "F": total, "chart": gc.chart_var });
    Ok(Rendered {
        report: report("grassmann", s, None, s.limits, input, result),
        text,
        csv: None,
        code: if gc.dgda_identity && gc.jz_identity { exit::OK } else { exit::NO },
    })
}

fn complex_list(src: &str) -> CliResult<Vec<Complex64>> {
    split_list(src)
        .iter()
        .map(|c| {
            c.replace(' ', "")
                .parse::<Complex64>()
                .map_err(|_| CliError::Usage(format!("not a complex number: {:?}", c)))
        })
        .collect()
}

fn distance(a: &str, b: &str, method: MethodArg, s: &Settings) -> CliResult<Rendered> {
    let ha = Hyperplane::new(complex_list(a)?)?;
    let hb = Hyperplane::new(complex_list(b)?)?;
    let want = |m: MethodArg| method == m || method == MethodArg::Both;
    let mut result = json!({ "norm_index": ha.norm_index });
    let mut text = String::new();
    if want(MethodArg::Sup) {
        let d = hyperplane_distance(&ha, &hb, DistanceMethod::SupFormula)?;
        result["sup_formula"] = json!(d);
        let _ = writeln!(text, "sup formula: {}", d);
    }
    if want(MethodArg::Inner) {
        let d = hyperplane_distance(&ha, &hb, DistanceMethod::InnerProductDef)?;
        result["inner_product_def"] = json!(d);
        let _ = writeln!(text, "inner-product definition: {}", d);
    }
    Ok(Rendered {
        report: report("distance", s, None, s.limits, json!({ "a": a, "b": b }), result),
        text,
        csv: None,
        code: exit::OK,
    })
}

fn probe_tangent(family: &FamilyArgs, at: &str, n: usize, s: &Settings) -> CliResult<Rendered> {
    let fam = family_of(family)?;
    let y0 = constants(at)?;
    let rows = tangent_commensurability_probe(&fam, &y0, n, s.seed)?;
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let min = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let max = ratios.iter().copied().fold(0.0, f64::max);
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["index", "t1", "t2", "point", "total", "fiber", "ratio"])?;
    let mut text = String::new();
    let mut samples = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let ratio = r.ratio.map(|x| x.to_string()).unwrap_or_default();
        csv.write_record([
            i.to_string(),
            r.t[0].to_string(),
            r.t[1].to_string(),
            r.point.to_string(),
            r.total.to_string(),
            r.fiber.to_string(),
            ratio.clone(),
        ])?;
        let _ = writeln!(
            text,
            "{:>3}  t=({}, {})  point {:.6e}  total {:.6e}  fiber {:.6e}  ratio {}",
            i, r.t[0], r.t[1], r.point, r.total, r.fiber, ratio
        );
        samples.push(json!({
            "t": r.t, "point": r.point, "total": r.total, "fiber": r.fiber, "ratio": r.ratio,
        }));
    }
    let summary = if ratios.is_empty() {
        json!({ "count": 0 })
    } else {
        json!({ "count": ratios.len(), "min_ratio": min, "max_ratio": max, "spread": if min > 0.0 { Some(max / min) } else { None } })
    };
    let _ = writeln!(text, "ratio range [{}, {}] over {} samples", min, max, ratios.len());
    let mut input = check_json(family, at);
    input["samples"] = json!(n);
    Ok(Rendered {
        report: report("probe-tangent", s, None, s.limits, input, json!({ "samples": samples, "summary": summary })),
        text,
        csv: Some(csv_string(csv)?),
        code: exit::OK,
    })
}

fn probe_lipschitz(a: &MemberArgs, s: &Settings) -> CliResult<Rendered> {
    let (f, gens, h) = member_inputs(a)?;
    let bound = s.bound(degree(&f));
    let ideal = deepen(&f, s.limits, |t| IdealOnCurve::new(gens.clone(), f.clone(), t))?;
    let coords = ideal.branches.first().map(|b| b.vars.clone()).unwrap_or_default();
    let m = double_ideal(&ideal.gens, &coords, &[])?;
    let mut csv = csv::Writer::from_writer(Vec::new());
    csv.write_record(["curve", "quotient_order", "coord_order", "exponent", "verdict"])?;
    let mut text = String::new();
    let (mut rows, mut skipped, mut negative) = (Vec::new(), 0, 0);
    for curve in candidate_curves(&ideal.branches, &bound) {
        let Ok(p) = lipschitz_exponent_probe(&h, &ideal, &curve) else {
            skipped += 1;
            continue;
        };
        let v = closure_membership_on_curve(&h, &m, &ideal.branches, &curve, curve_trunc(&curve, ideal.trunc))?;
        negative += p.is_negative() as usize;
        let ct = curve_text(&curve);
        let (qo, co, e) = (order_str(p.quotient_order), exponent_str(p.coord_order), order_str(p.exponent));
        csv.write_record([ct.as_str(), &qo, &co, &e, v.kind().as_str()])?;
        let _ = writeln!(text, "{}  exponent {}  ({})", ct, e, v.kind());
        rows.push(json!({
            "curve": CurveJson::from(&curve),
            "side_orders": [order_str(p.side_orders[0]), order_str(p.side_orders[1])],
            "quotient_order": qo,
            "coord_order": co,
            "exponent": e,
            "verdict": v.kind().as_str(),
        }));
    }
    let _ = writeln!(text, "{} curves, {} negative, {} skipped", rows.len(), negative, skipped);
    let result = json!({ "curves": rows, "negative": negative, "skipped": skipped });
    Ok(Rendered {
        report: report("probe-lipschitz", s, Some(bound), s.limits, member_json(&f, &gens, &h), result),
        text,
        csv: Some(csv_string(csv)?),
        code: if negative > 0 { exit::NO } else { exit::OK },
    })
}

fn field<'a>(v: &'a Value, key: &str) -> CliResult<&'a str> {
    v.get(key)
        .and_then(Value::as_str)
        .ok_or_else(|| CliError::Malformed(format!("input field {:?} missing", key)))
}

/// Recorded inputs of a membership report.
fn replay_member(input: &Value) -> CliResult<(Poly, Vec<Poly>, Poly)> {
    let f = parse_poly(field(input, "f")?)?;
    let gens = input
        .get("gens")
        .and_then(Value::as_array)
        .ok_or_else(|| CliError::Malformed("input field \"gens\" missing".into()))?
        .iter()
        .map(|g| {
            let s = g.as_str().ok_or_else(|| CliError::Malformed("generator is not a string".into()))?;
            Ok(parse_poly_with_vars(s, f.vars())?.with_vars(f.vars())?)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let h = parse_poly_with_vars(field(input, "h")?, f.vars())?;
    Ok((f, gens, h))
}

/// Re-run the recorded command with the recorded settings.
fn rerun(rep: &Report, bound: &SearchBound, limits: Limits) -> CliResult<Verdict> {
    let input = &rep.input;
    match rep.command.as_str() {
        "iclosure" | "saturation" => {
            let (f, gens, h) = replay_member(input)?;
            decide_member(&rep.command, &f, &gens, &h, bound, limits)
        }
        "check-ila" | "check-ilmy" | "check-w" => {
            let cond = match rep.command.as_str() {
                "check-ila" => Condition::IlA,
                "check-ilmy" => Condition::IlmY,
                _ => Condition::W,
            };
            let fam = family_ideals(
                &parse_poly(field(input, "F")?)?,
                &split_list(field(input, "fiber")?),
                &split_list(field(input, "params")?),
            )?;
            Ok(check(&fam, cond, &constants(field(input, "at")?)?, bound, limits)?)
        }
        "section" => {
            let f = parse_poly(field(input, "F")?)?;
            let idx = chart_index(&f, Some(field(input, "chart")?))?;
            Ok(hyperplane_section_check(&f, idx, &constants(field(input, "h")?)?, bound, limits)?)
        }
        other => Err(CliError::Malformed(format!("reports of {} carry no verdict to replay", other))),
    }
}

fn replay(text: &str, s: &Settings) -> CliResult<Rendered> {
    let rep: Report = serde_json::from_str(text)?;
    if rep.schema != SCHEMA {
        return Err(CliError::Malformed(format!("schema {:?}, expected {:?}", rep.schema, SCHEMA)));
    }
    let recorded: VerdictJson = serde_json::from_value(rep.result.clone())?;
    let bound_json = rep
        .bound
        .ok_or_else(|| CliError::Malformed("report records no search bound".into()))?;
    let bound = SearchBound {
        exp: bound_json.exp,
        root: bound_json.root,
        div: bound_json.div,
    };
    let limits: Limits = rep.limits.into();
    let member = matches!(rep.command.as_str(), "iclosure" | "saturation");
    let (confirmed, detail, replayed) = match &recorded {
        VerdictJson::CertifiedNo {
            witness: WitnessJson::PairCurve(w),
        } if member => {
            let (f, gens, h) = replay_member(&rep.input)?;
            let witness = w.to_witness(&f)?;
            let r = replay_pair_witness(&h, &gens, &witness)?;
            let gap = match &r.verdict {
                Verdict::CertifiedNo(Witness::PairCurve(rw)) => rw.gap(),
                _ => "none".to_string(),
            };
            let ok = r.confirmed && gap == w.gap;
            (ok, format!("recorded gap {}, replayed gap {}", w.gap, gap), r.verdict)
        }
        VerdictJson::CertifiedYes {
            certificate: CertificateJson::Division(d),
        } if member => {
            let (f, gens, h) = replay_member(&rep.input)?;
            let cert = d.to_certificate(f.vars())?;
            let ok = verify_division(&h, &gens, std::slice::from_ref(&f), &cert);
            let v = Verdict::CertifiedYes(Certificate::Division(cert));
            (ok, format!("division identity {}", if ok { "holds" } else { "fails" }), v)
        }
        VerdictJson::CertifiedYes {
            certificate: CertificateJson::Generator { index },
        } if member => {
            let (_, gens, h) = replay_member(&rep.input)?;
            let found = generator_index(&h, &gens);
            let ok = found == Some(*index);
            (ok, format!("target matches generator {:?}", found), Verdict::CertifiedYes(Certificate::Generator { index: *index }))
        }
        _ => {
            let v = rerun(&rep, &bound, limits)?;
            let ok = VerdictJson::from(&v) == recorded;
            (ok, "re-evaluated verdict compared with the record".to_string(), v)
        }
    };
    let mut text = format!("{}: {}\n", if confirmed { "confirmed" } else { "denied" }, detail);
    text.push_str(&verdict_text(&replayed));
    let result = json!({
        "confirmed": confirmed,
        "detail": detail,
        "replayed": VerdictJson::from(&replayed),
    });
    let input = json!({ "command": rep.command, "recorded": recorded });
    Ok(Rendered {
        report: report("replay", s, Some(bound), limits, input, result),
        text,
        csv: None,
        code: if confirmed { exit::OK } else { exit::NO },
    })
}
