//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use contactlab::classify::{
    check_lc_equations, classify, f_constraint, integrability_check, rigidity_check, solve_s, transverse_lee, Candidates,
    Gauge, Tag,
};
use contactlab::conformal::{rescale, verify_corollary, ConformalChange, CorollaryCase};
use contactlab::corpus;
use contactlab::symplin::{lefschetz_summary, RANDOM_VECTOR_COUNT};
use contactlab::{parse, AlmostContactStructure, DiffForm, Expr, KForm, Rational, Scalar};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn e(s: &AlmostContactStructure, text: &str) -> Expr {
    parse(text, s.chart()).unwrap()
}

fn dx(s: &AlmostContactStructure, name: &str) -> KForm {
    DiffForm::dx(s.chart(), s.chart().index_of(name).unwrap())
}

fn runner(cases: u32) -> TestRunner {
    TestRunner::new_with_rng(Config { cases, ..Config::default() }, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn sample<S: Strategy>(r: &mut TestRunner, s: &S) -> S::Value {
    s.new_tree(r).expect("strategy generates").current()
}

fn example_dim3() -> Outcome {
    let entry = corpus::example_dim3();
    let s = &entry.structure;
    let rep = s.validate(&entry.samples);
    ensure!(rep.checks.iter().all(|c| c.residual.is_zero()), "axiom residuals are not zero:\n{rep}");
    ensure!(rep.volume_ok(), "eta ^ Phi vanishes");
    let phi = s.fundamental_form().map_err(|e| e.to_string())?;
    let expected = dx(s, "x").wedge(&dx(s, "y")).unwrap().scale(&e(s, "-exp(z)"));
    ensure!(phi == expected, "Phi = {phi}");
    let (f, w) = (e(s, "1/2*exp(-x)"), dx(s, "x"));
    let lc = check_lc_equations(s, &f, &w).map_err(|e| e.to_string())?;
    ensure!(lc.passed(), "structure equations fail: {:?}", lc);
    let i = integrability_check(s, &f, &w).map_err(|e| e.to_string())?;
    ensure!(i.df_equals_minus_f_omega(), "df + f omega = {}", i.one_form);
    let alpha = transverse_lee(s).alpha;
    ensure!(alpha == dx(s, "x") && !alpha.is_zero(), "alpha = {alpha}");
    let rig = rigidity_check(s, &w).map_err(|e| e.to_string())?;
    ensure!(!rig.proportional, "omega reported proportional to eta");
    Ok(format!("Phi = {phi}, alpha = {alpha}"))
}

fn example_dim5() -> Outcome {
    let entry = corpus::example_dim5(Some("z1")).map_err(|e| e.to_string())?;
    let s = &entry.structure;
    let (f, w) = (e(s, "1/2 - z1"), dx(s, "z1").scale(&e(s, "z1")));
    let lc = check_lc_equations(s, &f, &w).map_err(|e| e.to_string())?;
    ensure!(lc.d_omega.is_zero() && lc.first.is_zero() && lc.second.is_zero(), "residuals: {:?}", lc);
    let trace = solve_s(s).map_err(|e| e.to_string())?;
    ensure!(trace.passed() && trace.s == e(s, "1/2"), "s = {}", trace.s);
    let i = integrability_check(s, &f, &w).map_err(|e| e.to_string())?;
    let lambda = i.lambda.clone().ok_or("no lambda in dimension 5")?;
    ensure!(lambda == e(s, "-1 + z1*(1/2 - z1)"), "lambda = {lambda}");
    ensure!(i.consistent(), "integrability residual nonzero");
    let rig = rigidity_check(s, &w).map_err(|e| e.to_string())?;
    ensure!(rig.alpha.is_zero() && rig.h == e(s, "z1") && rig.proportional, "rigidity: h = {}, alpha = {}", rig.h, rig.alpha);
    Ok(format!("s = {}, lambda = {lambda}, h = {}", trace.s, rig.h))
}

fn example_product() -> Outcome {
    let entry = corpus::example_product();
    let s = &entry.structure;
    let rep = classify(s, &Candidates::default(), Gauge::Auto).map_err(|e| e.to_string())?;
    let phi = s.fundamental_form().map_err(|e| e.to_string())?;
    ensure!(rep.has(Tag::Cosymplectic), "tags {:?}", rep.tag_names());
    ensure!(s.eta.d().is_zero() && phi.d().is_zero() && s.is_normal(), "not closed or not normal");

    let change = ConformalChange::new(e(s, "theta")).map_err(|e| e.to_string())?;
    let r = rescale(s, &change).map_err(|e| e.to_string())?;
    let dtheta = dx(s, "theta");
    let phi_r = r.fundamental_form().map_err(|e| e.to_string())?;
    let deta_target = -&dtheta.wedge(&r.eta).unwrap();
    ensure!(r.eta.d() == deta_target, "d eta' = {}", r.eta.d());
    let dphi_target = dtheta.wedge(&phi_r).unwrap().scale_const(&Rational::from_i64(-2));
    ensure!(phi_r.d() == dphi_target, "d Phi' = {}", phi_r.d());
    let (f, w) = (e(s, "0"), -&dtheta);
    ensure!(check_lc_equations(&r, &f, &w).map_err(|e| e.to_string())?.passed(), "(0, -d theta) fails");
    let cands = Candidates { f: Some(f.clone()), omega: Some(w.clone()), sigma: None };
    let rep = classify(&r, &cands, Gauge::Auto).map_err(|e| e.to_string())?;
    ensure!(rep.has(Tag::LcAlmostGeneralizedFCosymplectic), "rescaled tags {:?}", rep.tag_names());
    ensure!(rep.f.as_ref() == Some(&f) && rep.omega.as_ref() == Some(&w), "f = {:?}, omega = {:?}", rep.f, rep.omega);
    Ok(format!("d Phi' = {}", phi_r.d()))
}

fn lefschetz() -> Outcome {
    let mut ranks = Vec::new();
    for n in 1..=5 {
        let s = lefschetz_summary(n).map_err(|e| e.to_string())?;
        ensure!(s.rank == 2 * n, "n = {n}: rank {}", s.rank);
        ensure!(s.columns_single_entry, "n = {n}: column support");
        ensure!(s.volume.holds(), "n = {n}: omitted-volume identities {:?}", s.volume.identities);
        ensure!(s.contraction_cases == 2 * n + RANDOM_VECTOR_COUNT, "n = {n}: {} vectors", s.contraction_cases);
        ensure!(s.contraction_ok, "n = {n}: contraction identity");
        ranks.push(format!("{}", s.rank));
    }
    Ok(format!("ranks {}", ranks.join(", ")))
}

fn calculus() -> Outcome {
    let ch = chart(&["x", "y", "z", "w"]);
    let cases = 100;
    let mut r = runner(cases);
    let pts = proptest::collection::vec(point(4), 10);
    let mut checked = 0usize;
    for case in 0..cases {
        let k = case as usize % 3;
        let a = sample(&mut r, &form(ch.clone(), k));
        ensure!(a.d().d().is_zero(), "d d a != 0 for a = {a}");

        let (p, q) = (1 + case as usize % 2, 2 - case as usize % 2);
        let (a, b) = (sample(&mut r, &form(ch.clone(), p)), sample(&mut r, &form(ch.clone(), q)));
        let lhs = a.wedge(&b).unwrap().d();
        let rhs = &a.d().wedge(&b).unwrap() + &a.wedge(&b.d()).unwrap().scale_const(&sign(p));
        ensure!(lhs == rhs, "Leibniz fails for {a}, {b}");

        let x = sample(&mut r, &field(ch.clone()));
        let lhs = a.wedge(&b).unwrap().interior(&x).unwrap();
        let rhs = &a.interior(&x).unwrap().wedge(&b).unwrap() + &a.wedge(&b.interior(&x).unwrap()).unwrap().scale_const(&sign(p));
        ensure!(lhs == rhs, "interior antiderivation fails");

        let (y, z) = (sample(&mut r, &field(ch.clone())), sample(&mut r, &field(ch.clone())));
        let br = |u: &contactlab::VectorField, v: &contactlab::VectorField| u.lie_bracket(v).unwrap();
        let jac = &(&br(&x, &br(&y, &z)) + &br(&y, &br(&z, &x))) + &br(&z, &br(&x, &y));
        ensure!(jac.is_zero(), "Jacobi fails");

        let f = sample(&mut r, &expr(ch.clone()));
        let one = sample(&mut r, &form(ch.clone(), 1));
        let d_one = one.d();
        for pt in sample(&mut r, &pts) {
            for i in 0..4 {
                let sym = f.partial(i).eval(&pt).unwrap();
                let num = fd(|q| f.eval(q).unwrap(), &pt, i);
                ensure!(close(sym, num), "partial_{i} of {f} at {pt:?}: {sym} vs {num}");
            }
            let values = d_one.eval(&pt).unwrap();
            for i in 0..4 {
                for j in i + 1..4 {
                    let (ai, aj) = (one.coefficient(&[i]), one.coefficient(&[j]));
                    let num = fd(|q| aj.eval(q).unwrap(), &pt, i) - fd(|q| ai.eval(q).unwrap(), &pt, j);
                    let sym = values.get(&vec![i, j]).copied().unwrap_or(0.0);
                    ensure!(close(sym, num), "(d a)_{i}{j} at {pt:?}: {sym} vs {num}");
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{cases} instances per identity, {checked} finite-difference comparisons"))
}

fn propositions() -> Outcome {
    let mut lc = 0;
    let mut generalized = 0;
    for entry in corpus::all() {
        let s = &entry.structure;
        let rep = classify(s, &entry.candidates, Gauge::Auto).map_err(|e| e.to_string())?;
        if rep.has(Tag::LcAlmostGeneralizedFCosymplectic) {
            let (f, w) = (rep.f.clone().unwrap(), rep.omega.clone().unwrap());
            let i = integrability_check(s, &f, &w).map_err(|e| e.to_string())?;
            ensure!(i.volume_identity.is_zero(), "{}: d(eta^Phi) - 3 omega^eta^Phi = {}", entry.name, i.volume_identity);
            ensure!(i.wedge.is_zero(), "{}: (df + f omega)^eta^Phi = {}", entry.name, i.wedge);
            lc += 1;
        }
        if s.dim() == 5 && rep.has(Tag::AlmostGeneralizedFCosymplectic) {
            let fc = f_constraint(s, rep.s.as_ref().unwrap()).map_err(|e| e.to_string())?;
            ensure!(fc.wedge.is_zero(), "{}: df^eta^Phi = {}", entry.name, fc.wedge);
            ensure!(fc.consistent() && fc.rho.is_some(), "{}: rho extraction", entry.name);
            generalized += 1;
        }
    }
    // Independent value: f' = (1/2 - z1) e^σ, ξ' = e^σ ∂z1, σ = z1²/2.
    let entry = corpus::example_dim5_rescaled(None).map_err(|e| e.to_string())?;
    let s = &entry.structure;
    let fc = f_constraint(s, &e(s, "(1/2 - z1)*exp(z1^2/2)")).map_err(|e| e.to_string())?;
    let rho = fc.rho.ok_or("no rho")?;
    ensure!(rho == e(s, "(-1 + z1/2 - z1^2)*exp(z1^2)"), "rho = {rho}");
    ensure!(lc >= 4 && generalized >= 3, "too few entries: {lc} lc, {generalized} generalized");
    Ok(format!("{lc} lc entries, {generalized} dim-5 generalized entries"))
}

fn gauge() -> Outcome {
    let entry = corpus::example_dim3();
    let s = &entry.structure;
    let base = classify(s, &entry.candidates, Gauge::Candidate).map_err(|e| e.to_string())?;
    let h0 = classify(s, &Candidates::default(), Gauge::H0).map_err(|e| e.to_string())?;
    ensure!(base.alpha == h0.alpha && base.s == h0.s, "h0 and candidate gauges disagree");
    for c in [1i64, -2] {
        let f = e(s, &format!("1/2*exp(-x) - ({c})*exp(-x)"));
        let w = &dx(s, "x") + &dx(s, "z").scale(&e(s, &c.to_string()));
        let lc = check_lc_equations(s, &f, &w).map_err(|e| e.to_string())?;
        ensure!(lc.passed(), "c = {c}: {:?}", lc);
        let cands = Candidates { f: Some(f), omega: Some(w), sigma: None };
        let rep = classify(s, &cands, Gauge::Candidate).map_err(|e| e.to_string())?;
        ensure!(rep.alpha == base.alpha, "c = {c}: alpha = {}", rep.alpha);
        ensure!(rep.s == base.s, "c = {c}: s = {:?}", rep.s);
    }
    Ok(format!("alpha = {}, s = {}", base.alpha, base.s.unwrap()))
}

fn conformal() -> Outcome {
    let mut r = runner(16);
    let mut count = 0;
    for entry in corpus::all() {
        let s = &entry.structure;
        for _ in 0..4 {
            let a = ConformalChange::new(sample(&mut r, &poly(s.chart().clone()))).unwrap();
            let b = ConformalChange::new(sample(&mut r, &poly(s.chart().clone()))).unwrap();
            let there = rescale(s, &a).map_err(|e| e.to_string())?;
            ensure!(&rescale(&there, &a.inverse()).map_err(|e| e.to_string())? == s, "{}: roundtrip", entry.name);
            let twice = rescale(&there, &b).map_err(|e| e.to_string())?;
            ensure!(twice == rescale(s, &a.then(&b)).map_err(|e| e.to_string())?, "{}: composition", entry.name);
            count += 1;
        }
    }
    let p = corpus::example_product_rescaled();
    let s = &p.structure;
    let zero = verify_corollary(s, &ConformalChange::new(e(s, "-theta")).unwrap(), &e(s, "0")).map_err(|e| e.to_string())?;
    ensure!(zero.case == CorollaryCase::Zero && zero.almost_cosymplectic(), "f = 0 case:\n{zero}");

    let q = corpus::example_dim5(Some("1/4")).map_err(|e| e.to_string())?;
    let s = &q.structure;
    let constant = verify_corollary(s, &ConformalChange::new(e(s, "z1/4")).unwrap(), &e(s, "1/4")).map_err(|e| e.to_string())?;
    ensure!(constant.case == CorollaryCase::Constant && constant.passed(), "f constant case:\n{constant}");
    ensure!(constant.f_prime == e(s, "1/4*exp(z1/4)"), "f exp(sigma) = {}", constant.f_prime);
    Ok(format!("{count} random changes, both corollary cases"))
}

fn rigidity() -> Outcome {
    let mut structures: Vec<(String, AlmostContactStructure, Candidates<Rational>)> = corpus::all()
        .into_iter()
        .filter(|c| c.structure.dim() == 5)
        .map(|c| (c.name, c.structure, c.candidates))
        .collect();
    for b in ["1/4", "z1^2", "1 - z1", "0"] {
        let c = corpus::example_dim5(Some(b)).map_err(|e| e.to_string())?;
        structures.push((format!("example-dim5 b = {b}"), c.structure, c.candidates));
        let c = corpus::example_dim5_rescaled(Some(b)).map_err(|e| e.to_string())?;
        structures.push((format!("example-dim5-rescaled b = {b}"), c.structure, c.candidates));
    }
    let mut swept = 0;
    for (name, s, cands) in &structures {
        let rep = classify(s, cands, Gauge::Auto).map_err(|e| e.to_string())?;
        if rep.has(Tag::LcAlmostGeneralizedFCosymplectic) {
            ensure!(rep.alpha.is_zero(), "{name}: alpha = {}", rep.alpha);
            let rig = rep.rigidity.as_ref().ok_or("no rigidity block")?;
            ensure!(rig.proportional && !rig.theorem_violation, "{name}: not proportional");
            swept += 1;
        }
    }
    let d3 = corpus::example_dim3();
    let alpha = transverse_lee(&d3.structure).alpha;
    ensure!(!alpha.is_zero(), "dimension 3 alpha vanished");
    Ok(format!("{swept} dim-5 structures with alpha = 0; dim 3 alpha = {alpha}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 9] = [
        ("1 example dim 3 end-to-end", example_dim3, Duration::from_secs(1)),
        ("2 example dim 5 end-to-end", example_dim5, Duration::from_secs(1)),
        ("3 product example and rescale", example_product, Duration::from_secs(1)),
        ("4 Lefschetz map", lefschetz, Duration::from_secs(5)),
        ("5 calculus properties", calculus, Duration::from_secs(10)),
        ("6 integrability identities", propositions, Duration::from_secs(2)),
        ("7 gauge properties", gauge, Duration::from_secs(1)),
        ("8 conformal coherence", conformal, Duration::from_secs(2)),
        ("9 rigidity sweep", rigidity, Duration::from_secs(1)),
    ];
    let mut failed = 0;
    let total = Instant::now();
    for (name, check, budget) in criteria {
        let start = Instant::now();
        let outcome = check();
        let took = start.elapsed();
        match outcome {
            Ok(detail) => {
                let note = if took > budget { format!(" [over {budget:?} budget]") } else { String::new() };
                println!("PASS {name} ({took:.2?}){note}: {detail}");
            }
            Err(why) => {
                failed += 1;
                println!("FAIL {name} ({took:.2?}): {why}");
            }
        }
    }
    println!("{} of 9 criteria passed in {:.2?}", 9 - failed, total.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
