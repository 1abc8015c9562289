use proptest::prelude::*;

use walgebra::diffpoly::{DiffPoly, Monomial, Var};
use walgebra::lie::build_sl_n;
use walgebra::pva::PvaStructure;
use walgebra::rational::{fmt_rat, frac, parse_rat, rat};

fn poly(n_gens: usize, degree: usize, order: usize, terms: usize) -> impl Strategy<Value = DiffPoly> {
    let factor = (0..n_gens, 0..=order);
    let term = (-4i64..=4, prop::collection::vec(factor, 0..=degree));
    prop::collection::vec(term, 0..=terms).prop_map(|ts| {
        let mut p = DiffPoly::zero();
        for (c, fs) in ts {
            let m = Monomial::from_factors(fs.into_iter().map(|(g, o)| (Var::new(g, o), 1)));
            p.add_term(m, rat(c));
        }
        p
    })
}

fn sl2() -> PvaStructure {
    let g = build_sl_n(2).unwrap();
    PvaStructure::affine(&g, &g.basis_vector(0))
}

proptest! {
    #[test]
    fn ring_laws(p in poly(2, 2, 2, 4), q in poly(2, 2, 2, 4), r in poly(2, 2, 2, 4)) {
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
        prop_assert!((&p - &p).is_zero());
    }

    #[test]
    fn derivative_is_a_derivation(p in poly(2, 3, 2, 4), q in poly(2, 3, 2, 4)) {
        let lhs = (&p * &q).derivative();
        let rhs = &(&p.derivative() * &q) + &(&p * &q.derivative());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn total_derivatives_are_variationally_trivial(p in poly(2, 3, 2, 4)) {
        let d = p.derivative();
        for g in 0..2 {
            prop_assert!(d.variational(g).is_zero());
        }
        prop_assert!(d.is_total_derivative());
        let back = d.integrate().expect("exact");
        prop_assert_eq!(back.derivative(), d);
    }

    #[test]
    fn json_round_trip(p in poly(3, 3, 3, 5)) {
        prop_assert_eq!(DiffPoly::from_json(&p.to_json()).unwrap(), p);
    }

    #[test]
    fn rationals_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let q = frac(n, d);
        prop_assert_eq!(parse_rat(&fmt_rat(&q)).unwrap(), q);
    }

    #[test]
    fn bracket_is_bilinear(p in poly(3, 2, 2, 3), q in poly(3, 2, 2, 3), r in poly(3, 2, 2, 3)) {
        let v = sl2();
        let sum = v.bracket(&p, &(&q + &r)).unwrap();
        let (a, b) = (v.bracket(&p, &q).unwrap(), v.bracket(&p, &r).unwrap());
        prop_assert_eq!(sum.z0, a.z0.add(&b.z0));
        prop_assert_eq!(sum.z1, a.z1.add(&b.z1));
    }

    #[test]
    fn sl2_axioms_on_small_polynomials(a in poly(3, 2, 1, 2), b in poly(3, 2, 1, 2), c in poly(3, 2, 1, 2)) {
        let report = sl2().verify_axioms(&[a, b, c]).unwrap();
        prop_assert!(report.passed(), "{:?}", report.first_failure());
    }
}
