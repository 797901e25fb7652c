//! Acceptance suite: one PASS/FAIL line per criterion. Runs without the
//! libtest harness so the lines are always printed.

mod common;

use std::time::{Duration, Instant};

use common::{min_minor_order, q, series, truncated_membership, IPoly, Sampler, Q};
use lipsat_core::conditions::{
    check_ila, check_ilmy, cosupport_rank, family_ideals, grassmann_chart, parameter_sweep, Condition, Family,
    ModuleKind, Outcome,
};
use lipsat_core::doubling::{
    candidate_curves, closure_membership_on_curve, curve_trunc, double_ideal, replay_pair_witness,
    saturation_membership,
};
use lipsat_core::dvr::{dvr_membership, pair_multiplicity_dvr, DvrMatrix};
use lipsat_core::geometry::{
    hyperplane_distance, lipschitz_exponent_probe, product_inequality_exact, product_inequality_probe,
    DistanceMethod, Hyperplane,
};
use lipsat_core::icurve::{ic_membership, IdealOnCurve, Limits};
use lipsat_core::poly::names;
use lipsat_core::puiseux::{default_trunc, puiseux_branches, verify_branch};
use lipsat_core::series::exp;
use lipsat_core::verdict::{Certificate, SearchBound, Verdict, Witness};
use lipsat_core::{parse_poly, parse_poly_with_vars, CycRat, Order, Poly};
use num_complex::Complex64;

type Outcome_ = Result<String, String>;

fn p(s: &str) -> Poly {
    parse_poly(s).unwrap()
}

fn jacobian(f: &Poly) -> Vec<Poly> {
    f.vars().iter().map(|v| f.partial(v).unwrap()).collect()
}

fn jac_ideal(f: &str) -> IdealOnCurve {
    let f = p(f);
    let t = default_trunc(&f);
    IdealOnCurve::new(jacobian(&f), f, t).unwrap()
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn golden() -> Outcome_ {
    let mut worst = Duration::ZERO;
    for pp in [5i64, 7, 9] {
        let start = Instant::now();
        let qq = (pp + 1) / 2;
        let i = jac_ideal(&format!("x^2+y^{}", pp));
        let h = p(&format!("y^{}", qq));
        match ic_membership(&h, &i).map_err(|e| e.to_string())? {
            Verdict::CertifiedYes(Certificate::BranchOrders(rows)) => {
                ensure(rows.len() == 1, || format!("p={}: {} branches", pp, rows.len()))?;
                ensure(rows[0].target == Order::Finite(exp(2 * qq)) && rows[0].ideal == exp(pp), || {
                    format!("p={}: branch orders {:?}", pp, rows[0])
                })?;
            }
            v => return Err(format!("p={}: ic verdict {:?}", pp, v.kind())),
        }
        let bound = SearchBound::for_degree(pp as u32);
        match saturation_membership(&h, &i, &bound).map_err(|e| e.to_string())? {
            Verdict::CertifiedNo(Witness::PairCurve(w)) => {
                ensure(w.contraction_valuation == Order::Finite(exp(pp + 2)), || {
                    format!("p={}: contraction valuation {}", pp, w.contraction_valuation)
                })?;
                ensure(w.contraction_target == Order::Finite(exp(pp + 1)), || {
                    format!("p={}: target valuation {}", pp, w.contraction_target)
                })?;
            }
            v => return Err(format!("p={}: saturation verdict {:?}", pp, v.kind())),
        }
        let el = start.elapsed();
        ensure(el <= Duration::from_secs(10), || format!("p={} took {:?}", pp, el))?;
        worst = worst.max(el);
    }
    Ok(format!("p=5,7,9 exact; slowest {:?} (limit 10s)", worst))
}

fn threshold() -> Outcome_ {
    let mut n = 0;
    for pp in [5i64, 7] {
        let i = jac_ideal(&format!("x^2+y^{}", pp));
        for qq in 1..=pp {
            let v = ic_membership(&p(&format!("y^{}", qq)), &i).map_err(|e| e.to_string())?;
            ensure(v.is_yes() == (2 * qq >= pp) && (v.is_yes() || v.is_no()), || {
                format!("p={} q={}: {:?}", pp, qq, v.kind())
            })?;
            n += 1;
        }
    }
    Ok(format!("{}/12 cases exact", n))
}

fn puiseux_soundness() -> Outcome_ {
    let corpus = ["x*y", "x^2-y^3", "x^2+y^5", "x^3+y^4", "x^3-y^7", "(x^2-y^3)*(x^2+y^5)"];
    let mut nb = 0;
    for s in corpus {
        let f = p(s);
        let t = 2 * default_trunc(&f);
        let bs = puiseux_branches(&f, t).map_err(|e| format!("{}: {}", s, e))?;
        for b in &bs {
            ensure(verify_branch(&f, b, t), || format!("{}: branch {} fails at {}", s, b, t))?;
        }
        let mult: i64 = bs
            .iter()
            .map(|b| b.comps.iter().filter_map(|c| c.order().finite()).min().unwrap().to_integer())
            .sum();
        let ord = f.order().unwrap() as i64;
        ensure(mult == ord, || format!("{}: multiplicities sum to {}, order {}", s, mult, ord))?;
        nb += bs.len();
    }
    Ok(format!("6 curves, {} branches verified at 2x default truncation", nb))
}

fn column(c: &[IPoly; 2], trunc: i64) -> Vec<lipsat_core::PSeries> {
    vec![series(&c[0], trunc), series(&c[1], trunc)]
}

fn padd(a: &IPoly, b: &IPoly) -> IPoly {
    (0..a.len().max(b.len()))
        .map(|k| a.get(k).copied().unwrap_or(0) + b.get(k).copied().unwrap_or(0))
        .collect()
}

fn pmul(a: &IPoly, b: &IPoly) -> IPoly {
    common::mul(&common::widen(a), &common::widen(b))
        .into_iter()
        .map(|c| i64::try_from(c).unwrap())
        .collect()
}

/// Columns `Σ_k cols[k]·a[k][j]`.
fn times(cols: &[[IPoly; 2]], a: &[Vec<IPoly>]) -> Vec<[IPoly; 2]> {
    (0..a[0].len())
        .map(|j| {
            let mut out = [vec![0], vec![0]];
            for (k, col) in cols.iter().enumerate() {
                for r in 0..2 {
                    out[r] = padd(&out[r], &pmul(&col[r], &a[k][j]));
                }
            }
            out
        })
        .collect()
}

const DVR_TRUNC: i64 = 64;

fn dvr_oracle() -> Outcome_ {
    let mut rng = Sampler::new(0xD0D0);
    let (mut done, mut yes, mut skipped) = (0, 0, 0);
    while done < 120 {
        let ncols = rng.range(1, 4) as usize;
        let cols: Vec<[IPoly; 2]> = (0..ncols).map(|_| [rng.ipoly(8, 3), rng.ipoly(8, 3)]).collect();
        let Some(colength) = min_minor_order(&cols) else {
            skipped += 1;
            continue;
        };
        let v: [IPoly; 2] = if rng.range(0, 1) == 0 {
            let a: Vec<Vec<IPoly>> = (0..ncols).map(|_| vec![rng.ipoly(3, 2)]).collect();
            let mut v = times(&cols, &a).remove(0);
            if rng.range(0, 2) == 0 {
                let k = rng.range(0, 8) as usize;
                v[rng.range(0, 1) as usize] = padd(&v[rng.range(0, 1) as usize], &{
                    let mut e = vec![0; k + 1];
                    e[k] = 1;
                    e
                });
            }
            v
        } else {
            [rng.ipoly(8, 3), rng.ipoly(8, 3)]
        };
        let expected = truncated_membership(&v, &cols, colength + 1);
        let m = DvrMatrix::new(2, cols.iter().map(|c| column(c, DVR_TRUNC)).collect()).unwrap();
        let got = dvr_membership(&column(&v, DVR_TRUNC), &m).map_err(|e| format!("instance {}: {}", done, e))?;
        ensure(got.is_yes() == expected && (got.is_yes() || got.is_no()), || {
            format!("instance {}: engine {:?}, oracle {}", done, got.kind(), expected)
        })?;
        yes += expected as usize;
        done += 1;
    }
    Ok(format!(
        "{}/{} agree ({} members, {} non-members, {} rank-deficient draws skipped)",
        done,
        done,
        yes,
        done - yes,
        skipped
    ))
}

fn random_square(rng: &mut Sampler, deg: usize) -> Vec<Vec<IPoly>> {
    loop {
        let a: Vec<Vec<IPoly>> = (0..2).map(|_| (0..2).map(|_| rng.ipoly(deg, 2)).collect()).collect();
        let cols = [[a[0][0].clone(), a[1][0].clone()], [a[0][1].clone(), a[1][1].clone()]];
        if min_minor_order(&cols).is_some() {
            return a;
        }
    }
}

fn additivity() -> Outcome_ {
    let mut rng = Sampler::new(0xADD);
    let mut max_e = 0;
    for n in 0..50 {
        let pc = times(&[[vec![1], vec![0]], [vec![0], vec![1]]], &random_square(&mut rng, 3));
        let nc = times(&pc, &random_square(&mut rng, 2));
        let mc = times(&nc, &random_square(&mut rng, 2));
        let mat = |c: &[[IPoly; 2]]| DvrMatrix::new(2, c.iter().map(|c| column(c, DVR_TRUNC)).collect()).unwrap();
        let (m, nn, pm) = (mat(&mc), mat(&nc), mat(&pc));
        let e = |a: &DvrMatrix, b: &DvrMatrix| pair_multiplicity_dvr(a, b).map_err(|e| format!("triple {}: {}", n, e));
        let (emp, emn, enp, emm) = (e(&m, &pm)?, e(&m, &nn)?, e(&nn, &pm)?, e(&m, &m)?);
        ensure(emp == emn + enp, || format!("triple {}: {} != {} + {}", n, emp, emn, enp))?;
        ensure(emm == exp(0), || format!("triple {}: e(M,M) = {}", n, emm))?;
        let oracle = |a: &[[IPoly; 2]], b: &[[IPoly; 2]]| {
            exp(min_minor_order(a).unwrap() as i64 - min_minor_order(b).unwrap() as i64)
        };
        ensure(emn == oracle(&mc, &nc) && enp == oracle(&nc, &pc), || {
            format!("triple {}: determinant oracle disagrees", n)
        })?;
        max_e = max_e.max(emp.to_integer());
    }
    Ok(format!("50 triples additive, e(M,M)=0, largest e(M,P)={}", max_e))
}

fn cosupport_family() -> Family {
    family_ideals(&p("x^2+y^5+w*y^4"), &names(&["x", "y"]), &names(&["w"])).unwrap()
}

/// The point `(y²s, y)` with `y = -w - s²` on `F = 0`.
fn on_variety(w: &Q, s: &Q) -> [CycRat; 2] {
    let y = -(w.clone() + s * s);
    [CycRat::from(y.clone() * y.clone() * s), CycRat::from(y)]
}

fn cosupport() -> Outcome_ {
    let fam = cosupport_family();
    let mut rng = Sampler::new(0xC05);
    let rat = |rng: &mut Sampler| loop {
        let r = Q::new(rng.range(-9, 9).into(), rng.range(1, 4).into());
        if r != q(0) {
            return r;
        }
    };
    let mut off = 0;
    while off < 20 {
        let w = rat(&mut rng);
        let (s1, s2) = (rat(&mut rng), rat(&mut rng));
        let (y1, y2) = (-(w.clone() + &s1 * &s1), -(w.clone() + &s2 * &s2));
        if s1 == s2 || y1 == q(0) || y2 == q(0) {
            continue;
        }
        let (a, b) = (on_variety(&w, &s1), on_variety(&w, &s2));
        for kind in [ModuleKind::Jz, ModuleKind::MyJz] {
            let r = cosupport_rank(&fam, kind, &a, &b, &[CycRat::from(w.clone())]).map_err(|e| e.to_string())?;
            ensure(r == 2, || format!("off-locus pair {:?} {:?} at w={}: rank {}", a, b, w, r))?;
        }
        off += 1;
    }
    let origin = [CycRat::zero(), CycRat::zero()];
    let mut on = 0;
    while on < 10 {
        let w = rat(&mut rng);
        let s = rat(&mut rng);
        if -(w.clone() + &s * &s) == q(0) {
            continue;
        }
        let a = on_variety(&w, &s);
        let pair = match on % 4 {
            0 => (a.clone(), a.clone()),
            1 => (origin.clone(), a.clone()),
            2 => (a.clone(), origin.clone()),
            _ => (origin.clone(), origin.clone()),
        };
        for kind in [ModuleKind::Jz, ModuleKind::MyJz] {
            let r = cosupport_rank(&fam, kind, &pair.0, &pair.1, &[CycRat::from(w.clone())]).map_err(|e| e.to_string())?;
            ensure(r <= 1, || format!("locus pair {:?} at w={}: rank {}", pair, w, r))?;
        }
        on += 1;
    }
    Ok("20 off-locus pairs rank 2, 10 locus pairs rank <= 1 (both modules)".into())
}

fn distance_lemma() -> Outcome_ {
    let mut rng = Sampler::new(0xD157);
    let mut worst: f64 = 0.0;
    for n in 0..1000 {
        let dim = rng.range(2, 5) as usize;
        let lead = rng.range(0, dim as i64 - 1) as usize;
        let plane = |rng: &mut Sampler| {
            let mut c: Vec<Complex64> = (0..dim)
                .map(|_| Complex64::new(2.0 * rng.unit() - 1.0, 2.0 * rng.unit() - 1.0) * 0.7)
                .collect();
            c[lead] = Complex64::new(1.0, 0.0);
            Hyperplane::new(c).unwrap()
        };
        let (a, b) = (plane(&mut rng), plane(&mut rng));
        let s = hyperplane_distance(&a, &b, DistanceMethod::SupFormula).map_err(|e| e.to_string())?;
        let i = hyperplane_distance(&a, &b, DistanceMethod::InnerProductDef).map_err(|e| e.to_string())?;
        worst = worst.max((s - i).abs());
        ensure((s - i).abs() <= 1e-10, || format!("pair {}: {} vs {}", n, s, i))?;
    }
    Ok(format!("1000 pairs, dims 2-5, max gap {:.2e} (limit 1e-10)", worst))
}

fn product_lemma() -> Outcome_ {
    let mut rng = Sampler::new(0x9D);
    let exact: Vec<[Q; 4]> = (0..1000)
        .map(|_| std::array::from_fn(|_| Q::new(rng.range(-50, 50).into(), rng.range(1, 12).into())))
        .collect();
    let re = product_inequality_exact(&exact);
    ensure(re.violations == 0, || format!("{} exact violations", re.violations))?;
    let float: Vec<[Complex64; 4]> = (0..100_000)
        .map(|_| std::array::from_fn(|_| Complex64::new(4.0 * rng.unit() - 2.0, 4.0 * rng.unit() - 2.0)))
        .collect();
    let rf = product_inequality_probe(&float, 1e-12);
    ensure(rf.violations == 0, || format!("{} float violations", rf.violations))?;
    Ok(format!(
        "exact 0/1000 violations, float 0/100000 violations (slack 1e-12), min float slack {:.2e}",
        rf.min_slack
    ))
}

fn grassmann() -> Outcome_ {
    let mut rng = Sampler::new(0x6A55);
    let vars = names(&["x", "y", "z"]);
    for n in 0..20 {
        let mut terms = Vec::new();
        for _ in 0..rng.range(2, 6) {
            let d = rng.range(1, 6);
            let i = rng.range(0, d);
            let j = rng.range(0, d - i);
            terms.push(format!("({})*x^{}*y^{}*z^{}", rng.range(-5, 5), i, j, d - i - j));
        }
        let f = parse_poly_with_vars(&terms.join("+"), &vars).unwrap();
        let ch = grassmann_chart(&f, 2).map_err(|e| e.to_string())?;
        ensure(ch.dgda_identity && ch.jz_identity, || format!("F{} = {}: identity flag false", n, f))?;
        for (i, (z, d)) in ch.fiber_vars.iter().zip(&ch.dgda).enumerate() {
            let diff = d.sub(&Poly::var(ch.g.vars(), z).mul(&ch.dfn_beta));
            ensure(diff.is_zero(), || format!("F{}: dG/da{} - z{}*dF/dz o beta = {}", n, i + 1, i + 1, diff))?;
        }
        // Evaluate at a rational point through F itself.
        let pt: Vec<Q> = (0..4).map(|_| Q::new(rng.range(-7, 7).into(), rng.range(1, 5).into())).collect();
        let zval = &pt[0] * &pt[2] + &pt[1] * &pt[3];
        let at_f = [("x", pt[0].clone()), ("y", pt[1].clone()), ("z", zval)]
            .into_iter()
            .map(|(v, c)| (v.to_string(), CycRat::from(c)))
            .collect();
        let at_g = [("x", &pt[0]), ("y", &pt[1]), ("a1", &pt[2]), ("a2", &pt[3])]
            .into_iter()
            .map(|(v, c)| (v.to_string(), CycRat::from(c.clone())))
            .collect();
        let dfz = f.partial("z").unwrap().eval(&at_f).unwrap();
        for (i, d) in ch.dgda.iter().enumerate() {
            let lhs = d.eval(&at_g).unwrap();
            let rhs = &CycRat::from(pt[i].clone()) * &dfz;
            ensure(lhs == rhs, || format!("F{}: pointwise check fails for a{}", n, i + 1))?;
        }
    }
    Ok("20 random F of degree <= 6: identity holds symbolically and pointwise".into())
}

fn sweep_samples() -> Vec<Vec<CycRat>> {
    [(1, 1), (2, 1), (3, 1), (-1, 1), (1, 2), (-2, 3), (5, 1), (7, 3), (-4, 1), (1, 5)]
        .iter()
        .map(|(a, b)| vec![CycRat::from_frac(*a, *b)])
        .collect()
}

fn coherence() -> Outcome_ {
    let corpus: [(&str, &[&str]); 3] = [
        ("x^2+y^5", &["y^2", "y^3", "y^4", "x", "x*y", "y^5"]),
        ("x^2+y^7", &["y^3", "y^4", "y^5", "x*y"]),
        ("x^3+y^4", &["y^2", "x^2", "x*y", "y^3"]),
    ];
    let (mut witnesses, mut probes) = (0, 0);
    for (f, hs) in corpus {
        let ideal = jac_ideal(f);
        let bound = SearchBound::for_degree(ideal.curve.total_degree().unwrap());
        let m = double_ideal(&ideal.gens, &ideal.branches[0].vars, &[]).unwrap();
        for h in hs.iter().map(|s| p(s)) {
            if let Verdict::CertifiedNo(Witness::PairCurve(w)) =
                saturation_membership(&h, &ideal, &bound).map_err(|e| e.to_string())?
            {
                let r = replay_pair_witness(&h, &ideal.gens, &w).map_err(|e| e.to_string())?;
                let gap = match &r.verdict {
                    Verdict::CertifiedNo(Witness::PairCurve(rw)) => rw.gap(),
                    _ => String::new(),
                };
                ensure(r.confirmed && gap == w.gap(), || format!("{} on {}: replay gap '{}' vs '{}'", h, f, gap, w.gap()))?;
                witnesses += 1;
            }
            for curve in candidate_curves(&ideal.branches, &bound) {
                let Ok(probe) = lipschitz_exponent_probe(&h, &ideal, &curve) else {
                    continue;
                };
                let t = curve_trunc(&curve, ideal.trunc);
                let v = closure_membership_on_curve(&h, &m, &ideal.branches, &curve, t).map_err(|e| e.to_string())?;
                ensure(probe.is_negative() == v.is_no(), || {
                    format!("{} on {} along {:?}: exponent {} but verdict {:?}", h, f, curve, probe.exponent, v.kind())
                })?;
                probes += 1;
            }
        }
    }
    let fam = cosupport_family();
    let bound = SearchBound::for_degree(5);
    let mut rows = 0;
    let mut samples = sweep_samples();
    samples.push(vec![CycRat::zero()]);
    for y0 in &samples {
        let ilmy = check_ilmy(&fam, y0, &bound, Limits::default());
        let ila = check_ila(&fam, y0, &bound, Limits::default());
        if matches!(ilmy, Ok(ref v) if v.is_yes()) {
            ensure(matches!(ila, Ok(ref v) if v.is_yes()), || format!("w={}: iL_mY yes but iL_A {:?}", y0[0], ila))?;
        }
        rows += 1;
    }
    Ok(format!(
        "{} witnesses replay to the same gap; probe sign matches on {} curves; implication holds on {} rows",
        witnesses, probes, rows
    ))
}

fn genericity() -> Outcome_ {
    let fam = cosupport_family();
    let samples = sweep_samples();
    let rep = parameter_sweep(&fam, &samples, &SearchBound::for_degree(5), Limits::default());
    let agree = rep.rows.iter().filter(|r| r.signature() == rep.majority).count();
    let deviating: Vec<usize> = (0..rep.rows.len()).filter(|i| rep.rows[*i].signature() != rep.majority).collect();
    ensure(deviating == rep.exceptional, || format!("exceptional set {:?}, deviating {:?}", rep.exceptional, deviating))?;
    ensure(agree >= 9, || format!("only {}/10 rows agree: {:?}", agree, rep.majority))?;
    let sig: Vec<String> = Condition::ALL
        .iter()
        .zip(&rep.majority)
        .map(|(c, o)| match o {
            Outcome::Verdict(k) => format!("{}={}", c.as_str(), k),
            Outcome::Error(e) => format!("{}={}", c.as_str(), e),
        })
        .collect();
    Ok(format!("{}/10 rows identical [{}], exceptional {:?}", agree, sig.join(", "), rep.exceptional))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome_); 11] = [
        ("golden example x^2+y^p", golden),
        ("integral-closure threshold", threshold),
        ("Newton-Puiseux soundness", puiseux_soundness),
        ("DVR oracle equivalence", dvr_oracle),
        ("pair-multiplicity additivity", additivity),
        ("cosupport ranks", cosupport),
        ("distance lemma", distance_lemma),
        ("product lemma", product_lemma),
        ("Grassmann chart identity", grassmann),
        ("verdict coherence", coherence),
        ("genericity plausibility", genericity),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let r = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(detail) => println!("PASS {:>2} {}: {} [{:.2?}]", n + 1, name, detail, start.elapsed()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {}: {} [{:.2?}]", n + 1, name, why, start.elapsed());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
