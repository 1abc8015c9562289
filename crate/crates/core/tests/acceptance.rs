//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Runs without the libtest harness so the lines come out in order and
//! unbuffered. Exits nonzero if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use walgebra::diffpoly::{DiffPoly, Var};
use walgebra::hierarchy::{
    check_dressing, dressing_solve, principal_default_s, run_hierarchy, DsContext, KdvNormalization,
};
use walgebra::lie::{build_polarization, build_sl_n, triple_from_partition, LagrangianChoice, SlodowyFrame};
use walgebra::linalg::Vector;
use walgebra::pva::{kdv_bracket0, kdv_bracket1, LambdaPoly, PvaStructure};
use walgebra::rational::{rat, Rat};
use walgebra::walgebra::{
    affine_w_structure, finite_bracket, gf_element, monomials_up_to, FiniteBracketTable, FiniteReduction,
    ReductionRealization,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn frame(n: usize, parts: &[usize]) -> SlodowyFrame {
    let g = build_sl_n(n).unwrap();
    let t = triple_from_partition(&g, parts).unwrap();
    SlodowyFrame::build(&g, &t).unwrap()
}

fn e1n(fr: &SlodowyFrame) -> Vector {
    principal_default_s(&fr.alg).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, budget: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < budget, || format!("took {t:.1?}, budget {budget:?}"))
}

fn u(k: usize) -> DiffPoly {
    DiffPoly::var(Var::new(0, k))
}

/// Affine PVA of sl2 and sl3 on 50 seeded random polynomials.
fn pva_axioms() -> Outcome {
    let start = Instant::now();
    let mut checks = 0;
    for n in [2, 3] {
        let g = build_sl_n(n).unwrap();
        let s = principal_default_s(&g).unwrap();
        let v = PvaStructure::affine(&g, &s);
        let mut rng = ChaCha8Rng::seed_from_u64(2024 + n as u64);
        let samples: Vec<DiffPoly> = (0..50).map(|_| DiffPoly::random(&mut rng, g.dim(), 3, 3, 3)).collect();
        let report = v.verify_axioms(&samples).map_err(|e| e.to_string())?;
        ensure(report.passed(), || format!("sl{n}: {:?}", report.first_failure()))?;
        checks += report.checks;
    }
    within(start, Duration::from_secs(60))?;
    Ok(format!("{checks} exact checks in {:.1?}", start.elapsed()))
}

fn kdv_normalized(w: &PvaStructure, label: &str) -> Result<(KdvNormalization, Rat), String> {
    let nm = KdvNormalization::detect(w).ok_or_else(|| format!("{label}: not of KdV shape"))?;
    let (b0, b1) = nm.brackets(w).map_err(|e| e.to_string())?;
    ensure(b0.table == kdv_bracket0().table, || {
        format!("{label}: first bracket is not λ")
    })?;
    ensure(b1.table == kdv_bracket1(&nm.c).table, || {
        format!("{label}: second bracket is not u'+2uλ+cλ³")
    })?;
    let c = nm.c.clone();
    Ok((nm, c))
}

/// sl2 principal W-algebra through the closed formula and through the reduction.
fn kdv_pencil() -> Outcome {
    let start = Instant::now();
    let fr = frame(2, &[2]);
    let s = e1n(&fr);
    let monster = affine_w_structure(&fr, &s);
    let real = ReductionRealization::new(&fr, &s, LagrangianChoice::Greedy).map_err(|e| e.to_string())?;
    let reduced = real.w_structure().map_err(|e| e.to_string())?;
    let (nm, c) = kdv_normalized(&monster, "formula")?;
    let (nm2, _) = kdv_normalized(&reduced, "reduction")?;
    ensure(nm == nm2, || {
        "the two constructions need different normalizations".into()
    })?;
    within(start, Duration::from_secs(60))?;
    Ok(format!(
        "u = w, {{.}}_0 = {} (z^1 part), {{.}}_1 = {} (z^0 part), c = {}",
        walgebra::rational::fmt_rat(&nm.beta0),
        walgebra::rational::fmt_rat(&nm.beta1),
        walgebra::rational::fmt_rat(&c)
    ))
}

fn sl2_hierarchy(count: usize) -> Result<walgebra::hierarchy::HierarchyReport, String> {
    let fr = frame(2, &[2]);
    let s = e1n(&fr);
    let real = ReductionRealization::new(&fr, &s, LagrangianChoice::Greedy).map_err(|e| e.to_string())?;
    run_hierarchy(&real, &affine_w_structure(&fr, &s), count, None).map_err(|e| e.to_string())
}

/// Flow n = 1 is KdV, and both Hamiltonian forms give it.
fn kdv_flow() -> Outcome {
    let report = sl2_hierarchy(3)?;
    let c = report.normalization.as_ref().ok_or("no KdV normalization")?.c.clone();
    let expect = &(&u(0) * &u(1)).scale(&rat(3)) + &u(3).scale(&c);
    let flow = report.flows.get(1).ok_or("no flow n = 1")?;
    ensure(flow.equations == vec![expect.clone()], || {
        format!("flow 1 is {}, expected {}", flow.equations[0], expect)
    })?;
    ensure(flow.second_form == Some(true), || {
        "{g2}_0 and {g1}_1 give different flows".into()
    })?;
    Ok(format!("du/dt1 = {expect}"))
}

fn finite_oracle(n: usize, parts: &[usize]) -> Result<usize, String> {
    let fr = frame(n, parts);
    let table = FiniteBracketTable::build(&fr);
    let red = FiniteReduction::new(&fr, LagrangianChoice::Greedy).map_err(|e| e.to_string())?;
    let monos = monomials_up_to(fr.rank(), 3);
    let mut pairs = 0;
    for p in &monos {
        for q in &monos {
            let a = table.bracket(p, q).map_err(|e| e.to_string())?;
            ensure(a == red.bracket(p, q), || {
                format!("sl{n} {parts:?}: {{{p}, {q}}} differs")
            })?;
            pairs += 1;
        }
    }
    Ok(pairs)
}

/// Closed finite formula against the finite Hamiltonian reduction.
fn oracle_equivalence() -> Outcome {
    let start = Instant::now();
    let a = finite_oracle(2, &[2])?;
    let b = finite_oracle(3, &[2, 1])?;
    within(start, Duration::from_secs(300))?;
    Ok(format!(
        "{a} + {b} monomial pairs of degree <= 3 in {:.1?}",
        start.elapsed()
    ))
}

/// `{p, q} = [p, q]` for `q ∈ g^f_0`, sl3 minimal.
fn degree_zero_identity() -> Outcome {
    let fr = frame(3, &[2, 1]);
    let zero: Vec<usize> = (0..fr.rank()).filter(|&i| fr.delta2[i] == 0).collect();
    ensure(!zero.is_empty(), || "g^f_0 is empty".into())?;
    let mut checked = 0;
    for &j in &zero {
        for i in 0..fr.rank() {
            let (p, q) = (&fr.qf[i], &fr.qf[j]);
            let lhs = finite_bracket(&fr, p, q).map_err(|e| e.to_string())?;
            let rhs = gf_element(&fr, &fr.alg.bracket(p, q)).map_err(|e| e.to_string())?;
            ensure(lhs == rhs, || format!("q{} with q{}", i + 1, j + 1))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} pairs, dim g^f_0 = {}", zero.len()))
}

fn dressing_case(n: usize, depth: usize) -> Result<String, String> {
    let fr = frame(n, &[n]);
    let real = ReductionRealization::new(&fr, &e1n(&fr), LagrangianChoice::Greedy).map_err(|e| e.to_string())?;
    let ctx = DsContext::new(&real).map_err(|e| e.to_string())?;
    let one = rat(1);
    let (res, hk) = dressing_solve(&ctx, depth, &one, None).map_err(|e| e.to_string())?;
    let check = check_dressing(&ctx, &hk, &res, &one, false).map_err(|e| e.to_string())?;
    ensure(check.passed(), || format!("sl{n} depth {depth}: {check:?}"))?;
    Ok(format!("sl{n} depth {depth} window {:?}", ctx.window(depth)))
}

/// `e^{ad U}(∂ + Λ + q) = ∂ + Λ + h` through the window.
fn dressing_identity() -> Outcome {
    let start = Instant::now();
    let a = dressing_case(2, 5)?;
    let b = dressing_case(3, 4)?;
    within(start, Duration::from_secs(600))?;
    Ok(format!("{a}; {b}; zero residual in {:.1?}", start.elapsed()))
}

/// First four sl2 densities: recursion and pairwise involution.
fn lenard_magri() -> Outcome {
    let report = sl2_hierarchy(4)?;
    let lm = &report.lenard_magri;
    ensure(report.densities.iter().all(|d| d.holds()), || {
        "a density is not a W-element mod ∂".into()
    })?;
    ensure(lm.steps.len() == 3 && lm.involution.len() == 6, || {
        "wrong number of checks".into()
    })?;
    ensure(lm.passed(), || lm.failures().join("; "))?;
    Ok(format!(
        "{} recursion steps, {} pairs under both brackets",
        lm.steps.len(),
        lm.involution.len()
    ))
}

/// `f = 0`: finite bracket is Lie-Poisson, affine bracket is the current bracket.
fn degenerate() -> Outcome {
    let mut checked = 0;
    for n in [2, 3] {
        let parts = vec![1; n];
        let fr = frame(n, &parts);
        ensure(fr.rank() == fr.alg.dim(), || format!("sl{n}: g^f != g"))?;
        let pol = build_polarization(&fr, LagrangianChoice::Greedy).map_err(|e| e.to_string())?;
        ensure(pol.n_dim() == 0, || format!("sl{n}: n != 0"))?;
        // s = H1 is homogeneous since everything has degree 0
        let s = fr.alg.basis_vector(n * (n - 1) / 2);
        let w = affine_w_structure(&fr, &s);
        let real = ReductionRealization::new(&fr, &s, LagrangianChoice::Greedy).map_err(|e| e.to_string())?;
        let reduced = real.w_structure().map_err(|e| e.to_string())?;
        ensure(reduced.table == w.table, || format!("sl{n}: reduction differs"))?;
        for i in 0..fr.rank() {
            for j in 0..fr.rank() {
                let (a, b) = (&fr.qf[i], &fr.qf[j]);
                let ab = fr.alg.bracket(a, b);
                let lin = gf_element(&fr, &ab).map_err(|e| e.to_string())?;
                let fin = finite_bracket(&fr, a, b).map_err(|e| e.to_string())?;
                ensure(fin == lin, || format!("sl{n}: finite {i} {j}"))?;
                let z0 = LambdaPoly::from_coeffs(vec![lin, DiffPoly::constant(fr.alg.form(a, b))]);
                let z1 = LambdaPoly::constant(DiffPoly::constant(fr.alg.form(&s, &ab)));
                let e = w.entry(i, j);
                ensure(e.z0 == z0 && e.z1 == z1, || format!("sl{n}: affine {i} {j}"))?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} generator pairs for sl2 and sl3"))
}

/// Two isotropic subspaces for sl3 minimal give the same reduced tables.
fn ell_independence() -> Outcome {
    let fr = frame(3, &[2, 1]);
    // E12 spans g_1, so it commutes with n for either choice
    let s = fr.alg.basis_vector(0);
    let choices = [LagrangianChoice::Greedy, LagrangianChoice::GreedyReversed];
    let pols: Vec<_> = choices.iter().map(|&c| build_polarization(&fr, c).unwrap()).collect();
    ensure(pols[0].ell != pols[1].ell, || "the two choices coincide".into())?;
    let tables: Vec<PvaStructure> = choices
        .iter()
        .map(|&c| ReductionRealization::new(&fr, &s, c).and_then(|r| r.w_structure()))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(tables[0].table == tables[1].table, || "affine tables differ".into())?;
    let reds: Vec<FiniteReduction> = choices
        .iter()
        .map(|&c| FiniteReduction::new(&fr, c))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let monos = monomials_up_to(fr.rank(), 2);
    for p in &monos {
        for q in &monos {
            ensure(reds[0].bracket(p, q) == reds[1].bracket(p, q), || {
                format!("finite {{{p}, {q}}} differs")
            })?;
        }
    }
    let describe = |v: &[Vector]| v.iter().map(|x| fr.alg.describe(x)).collect::<Vec<_>>().join(",");
    Ok(format!(
        "ell = <{}> vs <{}>",
        describe(&pols[0].ell),
        describe(&pols[1].ell)
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("pva axiom suite", pva_axioms),
        ("kdv pencil", kdv_pencil),
        ("kdv flow", kdv_flow),
        ("finite oracle equivalence", oracle_equivalence),
        ("degree-zero identity", degree_zero_identity),
        ("dressing identity", dressing_identity),
        ("lenard-magri and involution", lenard_magri),
        ("degenerate f = 0", degenerate),
        ("isotropic choice independence", ell_independence),
    ];
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        match outcome {
            Ok(detail) => println!("PASS {}: {name}: {detail}", k + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {}: {name}: {why}", k + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
