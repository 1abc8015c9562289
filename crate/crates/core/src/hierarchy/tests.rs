use super::*;
use crate::lie::{build_sl_n, triple_from_partition};
use crate::rational::{frac, rat};
use crate::walgebra::affine_w_structure;

fn setup(n: usize, parts: &[usize], s: Option<Vector>) -> (SlodowyFrame, Vector, ReductionRealization) {
    let g = build_sl_n(n).unwrap();
    let t = triple_from_partition(&g, parts).unwrap();
    let fr = SlodowyFrame::build(&g, &t).unwrap();
    let s = s.unwrap_or_else(|| principal_default_s(&g).unwrap());
    let real = ReductionRealization::new(&fr, &s, LagrangianChoice::Greedy).unwrap();
    (fr, s, real)
}

fn u(n: usize) -> DiffPoly {
    DiffPoly::var(crate::diffpoly::Var::new(0, n))
}

#[test]
fn cyclic_elements() {
    let (fr, s, _) = setup(2, &[2], None);
    assert!(check_cyclic_element(&fr, &s).unwrap());
    assert!(!check_cyclic_element(&fr, &fr.alg.zero()).unwrap());
    let (fr3, s3, _) = setup(3, &[3], None);
    assert!(check_cyclic_element(&fr3, &s3).unwrap());
    let fs: Vector = fr3.triple.f.iter().zip(&s3).map(|(a, b)| a + b).collect();
    let m = fr3.alg.to_matrix(&fs).unwrap();
    assert_eq!(minimal_polynomial(&m), vec![rat(-1), rat(0), rat(0), rat(1)]);
    // e + h is not homogeneous
    let mixed: Vector = fr.triple.e.iter().zip(&fr.triple.x).map(|(a, b)| a + b).collect();
    assert!(matches!(check_cyclic_element(&fr, &mixed), Err(Error::Grading(_))));
}

#[test]
fn nilpotent_matrix_is_not_semisimple() {
    let mut m = Matrix::zeros(2, 2);
    m[(0, 1)] = rat(1);
    assert!(!is_semisimple_matrix(&m));
    assert!(is_semisimple_matrix(&Matrix::identity(3)));
}

#[test]
fn kernel_dimensions() {
    let (_, _, real) = setup(2, &[2], None);
    let ctx = DsContext::new(&real).unwrap();
    let hk = ctx.decomposition(12, None).unwrap();
    for (t, d) in hk.kernel_dims() {
        // h is spanned by (f+ze) z^k, in odd degrees
        assert_eq!(d, usize::from(t.rem_euclid(4) == 2), "degree {t}/2");
    }
    let (_, _, real3) = setup(3, &[3], None);
    let ctx3 = DsContext::new(&real3).unwrap();
    let hk3 = ctx3.decomposition(12, None).unwrap();
    for (t, d) in hk3.kernel_dims() {
        let expect = t % 2 == 0 && [1, 2].contains(&(t / 2).rem_euclid(3));
        assert_eq!(d, usize::from(expect), "degree {t}/2");
    }
}

#[test]
fn zero_nilpotent_kernel_is_cartan() {
    let g = build_sl_n(3).unwrap();
    let mut m = Matrix::zeros(3, 3);
    m[(0, 0)] = rat(1);
    m[(1, 1)] = rat(-1);
    let s = g.from_matrix(&m).unwrap();
    let (fr, _, real) = setup(3, &[1, 1, 1], Some(s.clone()));
    assert!(check_cyclic_element(&fr, &s).unwrap());
    let ctx = DsContext::new(&real).unwrap();
    let hk = ctx.decomposition(6, None).unwrap();
    for (t, d) in hk.kernel_dims() {
        assert_eq!(d, if t % 2 == 0 { 2 } else { 0 });
    }
}

#[test]
fn sl2_dressing_is_exact() {
    let (_, _, real) = setup(2, &[2], None);
    let ctx = DsContext::new(&real).unwrap();
    let one = rat(1);
    let (res, hk) = dressing_solve(&ctx, 3, &one, None).unwrap();
    let check = check_dressing(&ctx, &hk, &res, &one, true).unwrap();
    assert!(check.passed(), "{check:?}");
    assert_eq!(check.round_trip, Some(true));
    let (shuffled, _) = dressing_solve(&ctx, 3, &one, Some(7)).unwrap();
    assert_eq!(shuffled.h, res.h);
    assert_eq!(shuffled.u, res.u);
}

#[test]
fn trivial_operator_needs_no_dressing() {
    let (_, _, real) = setup(2, &[2], None);
    let ctx = DsContext::new(&real).unwrap();
    let (res, _) = dressing_solve(&ctx, 3, &rat(0), None).unwrap();
    assert!(res.u.is_zero());
    assert!(res.h.is_zero());
}

#[test]
fn kdv_hierarchy() {
    let (fr, s, real) = setup(2, &[2], None);
    let w = affine_w_structure(&fr, &s);
    let report = run_hierarchy(&real, &w, 4, None).unwrap();
    assert!(report.passed(), "{:?}", report.lenard_magri.failures());
    let nm = report.normalization.clone().unwrap();
    assert_eq!(nm.c, frac(-1, 2));
    let g = &report.lenard_magri.normalized;
    let c = nm.c.clone();
    assert_eq!(LocalFunctional::new(g[0].clone()), LocalFunctional::new(u(0)));
    assert_eq!(
        LocalFunctional::new(g[1].clone()),
        LocalFunctional::new(u(0).pow(2).scale(&frac(1, 2)))
    );
    let h2 = (&u(0).pow(3) + &(&u(0) * &u(2)).scale(&c)).scale(&frac(1, 2));
    assert_eq!(LocalFunctional::new(g[2].clone()), LocalFunctional::new(h2));
    assert_eq!(report.flows[0].equations, vec![u(1)]);
    let kdv = &(&u(0) * &u(1)).scale(&rat(3)) + &u(3).scale(&c);
    assert_eq!(report.flows[1].equations, vec![kdv]);
    assert!(report.flows.iter().filter_map(|f| f.second_form).all(|ok| ok));
}

#[test]
fn corrupted_density_breaks_the_recursion() {
    let b0 = crate::pva::kdv_bracket0();
    let c = frac(-1, 2);
    let b1 = crate::pva::kdv_bracket1(&c);
    let good = vec![
        u(0),
        u(0).pow(2).scale(&frac(1, 2)),
        (&u(0).pow(3) + &(&u(0) * &u(2)).scale(&c)).scale(&frac(1, 2)),
    ];
    assert!(lenard_magri_verify(&b0, &b1, &good).unwrap().passed());
    let mut bad = good.clone();
    bad[1] = &u(0).pow(2) + &u(1).pow(2);
    let report = lenard_magri_verify(&b0, &b1, &bad).unwrap();
    assert!(!report.passed());
    // adding a total derivative does not change the functional
    let mut same = good.clone();
    same[1] = &u(0).pow(2) + &u(1);
    assert!(lenard_magri_verify(&b0, &b1, &same).unwrap().passed());
}

#[test]
fn sl3_first_density_has_weight_two() {
    let (fr, s, real) = setup(3, &[3], None);
    let w = affine_w_structure(&fr, &s);
    let report = run_hierarchy(&real, &w, 2, None).unwrap();
    assert!(
        report.passed(),
        "{:?} {:?}",
        report.dressing,
        report.lenard_magri.failures()
    );
    let g0 = &report.densities[0].w_coords;
    // linear in the weight-2 generator q0 (δ = 1)
    assert_eq!(fr.delta2[0], 2);
    assert!(!g0.is_zero());
    assert!(g0
        .terms()
        .all(|(m, _)| m.is_one() || m.factors().eq([(crate::diffpoly::Var::new(0, 0), 1)])));
}

#[test]
fn center_must_commute_with_h() {
    let (_, _, real) = setup(2, &[2], None);
    let ctx = DsContext::new(&real).unwrap();
    let one = rat(1);
    let (res, hk) = dressing_solve(&ctx, 2, &one, None).unwrap();
    let h_only = ZGradedElement::from_vector(&real.polarization.adapted.basis_vector(0), 0, &DiffPoly::one());
    assert!(matches!(
        conserved_densities(&real, &ctx, &hk, &res, Some(&h_only), 1),
        Err(Error::InvalidCenter(_))
    ));
    assert!(conserved_densities(&real, &ctx, &hk, &res, None, 0).unwrap().is_empty());
    assert!(matches!(
        conserved_densities(&real, &ctx, &hk, &res, None, 5),
        Err(Error::Truncation(_))
    ));
}
