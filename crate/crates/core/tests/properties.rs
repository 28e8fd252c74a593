use proptest::prelude::*;

use sigmafix::arith::{
    is_square, Monomial, MultiPoly, QRatFunc, QuadElem, QuadRatFunc, Radicand, Rational, Var,
};
use sigmafix::decider::{decide, SurfaceSpec};
use sigmafix::hilbert::{candidate_places, global_hilbert, local_hilbert};
use sigmafix::quadfield::{ext_hilbert, squarefree_core};
use sigmafix::sigma::{apply_sigma, SigmaAction};
use sigmafix::solver::solve_norm_equation;

fn rat(max: i64) -> impl Strategy<Value = Rational> {
    (-max..=max, 1..=max).prop_map(|(n, d)| Rational::new(n, d).unwrap())
}

fn nonzero_rat(max: i64) -> impl Strategy<Value = Rational> {
    rat(max).prop_filter("nonzero", |r| !r.is_zero())
}

fn nonsquare_int(max: i64) -> impl Strategy<Value = Rational> {
    (-max..=max)
        .prop_map(Rational::from)
        .prop_filter("nonsquare", |r| !r.is_zero() && is_square(r).is_none())
}

type Terms = Vec<((i64, i64), (u32, u32))>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec(((-5i64..=5, -3i64..=3), (0u32..3, 0u32..3)), 1..5)
}

fn poly(ts: &Terms, rad: &Radicand) -> MultiPoly<QuadElem> {
    let (x, y) = (Var::new("x"), Var::new("y"));
    MultiPoly::from_terms(
        rad,
        ts.iter().map(|&((p, q), (i, j))| {
            (
                Monomial::from_pairs(vec![(x, i), (y, j)]),
                QuadElem::with_radicand(p.into(), q.into(), rad),
            )
        }),
    )
}

fn qpoly(ts: &Terms) -> MultiPoly<Rational> {
    let (x, y) = (Var::new("x"), Var::new("y"));
    MultiPoly::from_terms(
        &(),
        ts.iter()
            .map(|&((p, q), (i, j))| (Monomial::from_pairs(vec![(x, i), (y, j)]), Rational::new(p, q.abs() + 1).unwrap())),
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quad_norm_is_multiplicative(a in nonsquare_int(30), p1 in rat(50), q1 in rat(50), p2 in rat(50), q2 in rat(50)) {
        let rad = Radicand::new(a).unwrap();
        let x = QuadElem::with_radicand(p1, q1, &rad);
        let y = QuadElem::with_radicand(p2, q2, &rad);
        prop_assert_eq!((&x * &y).norm(), &x.norm() * &y.norm());
        prop_assert_eq!(x.conjugate().conjugate(), x);
    }

    #[test]
    fn squares_are_recognized(q in rat(1000)) {
        prop_assert_eq!(is_square(&q.square()), Some(q.abs()));
    }

    #[test]
    fn canonical_form_is_idempotent_and_inverse_works(n in terms(), d in terms()) {
        let (n, d) = (qpoly(&n), qpoly(&d));
        prop_assume!(!d.is_zero() && !n.is_zero());
        let f = QRatFunc::new(n, d).unwrap();
        prop_assert_eq!(f.normalize(), f.clone());
        prop_assert!(f.mul(&f.inv().unwrap()).sub(&QRatFunc::one(&())).is_zero());
        prop_assert!(f.sub(&f).is_zero());
        let g = f.add(&QRatFunc::one(&()));
        prop_assert_eq!(g.sub(&f), QRatFunc::one(&()));
    }

    #[test]
    fn sigma_is_an_involution(n in terms(), d in terms(), a in nonsquare_int(12), b in nonzero_rat(9), c in rat(9), dd in rat(9)) {
        prop_assume!(!(c.is_zero() && dd.is_zero()));
        let spec = SurfaceSpec::new(a.clone(), b, c, dd).unwrap();
        let act = SigmaAction::new(&spec);
        let rad = act.radicand().clone();
        let (n, d) = (poly(&n, &rad), poly(&d, &rad));
        prop_assume!(!d.is_zero());
        let f = QuadRatFunc::new(n, d).unwrap();
        let twice = apply_sigma(&apply_sigma(&f, &act).unwrap(), &act).unwrap();
        prop_assert_eq!(twice, f);
    }

    #[test]
    fn product_formula(a in nonzero_rat(1000), b in nonzero_rat(1000)) {
        let mut prod = 1i8;
        for v in candidate_places(&a, &b).unwrap() {
            prod *= local_hilbert(&a, &b, &v).unwrap();
        }
        prop_assert_eq!(prod, 1);
    }

    #[test]
    fn hilbert_symmetry_and_bilinearity(a in nonzero_rat(200), b1 in nonzero_rat(200), b2 in nonzero_rat(200)) {
        let b12 = &b1 * &b2;
        prop_assert_eq!(global_hilbert(&a, &b1).unwrap(), global_hilbert(&b1, &a).unwrap());
        let mut places = candidate_places(&a, &b1).unwrap();
        places.extend(candidate_places(&a, &b2).unwrap());
        for v in places {
            let lhs = local_hilbert(&a, &b12, &v).unwrap();
            let rhs = local_hilbert(&a, &b1, &v).unwrap() * local_hilbert(&a, &b2, &v).unwrap();
            prop_assert_eq!(lhs, rhs, "place {}", v);
        }
    }

    #[test]
    fn hilbert_square_class_invariance(a in nonzero_rat(300), b in nonzero_rat(300), k in nonzero_rat(40)) {
        let bk = &b * &k.square();
        prop_assert_eq!(global_hilbert(&a, &bk).unwrap(), global_hilbert(&a, &b).unwrap());
        // (a, -a) and (a, 1 - a) are split
        prop_assert!(global_hilbert(&a, &-&a).unwrap().is_empty());
        let one_minus = &Rational::one() - &a;
        if !one_minus.is_zero() {
            prop_assert!(global_hilbert(&a, &one_minus).unwrap().is_empty());
        }
    }

    #[test]
    fn ext_square_class_invariance(a in nonzero_rat(60), b in nonzero_rat(60), m in nonsquare_int(40), k in nonzero_rat(20)) {
        let field = squarefree_core(&m).unwrap();
        let plain = ext_hilbert(&a, &b, &field).unwrap();
        let scaled = ext_hilbert(&a, &(&b * &k.square()), &field).unwrap();
        prop_assert_eq!(plain.value, scaled.value);
        // splitting over Q survives base change
        if global_hilbert(&a, &b).unwrap().is_empty() {
            prop_assert!(plain.is_zero());
        }
    }

    #[test]
    fn norm_solver_is_deterministic_and_correct(a in nonsquare_int(200), b in nonzero_rat(500)) {
        let first = solve_norm_equation(&a, &b).unwrap();
        prop_assert_eq!(&first, &solve_norm_equation(&a, &b).unwrap());
        prop_assert_eq!(first.is_some(), global_hilbert(&a, &b).unwrap().is_empty());
        if let Some(s) = first {
            prop_assert!(s.satisfies(&a, &b));
        }
    }

    #[test]
    fn decisions_reverify(a in nonsquare_int(15), b in nonzero_rat(15), c in rat(15), d in rat(15)) {
        prop_assume!(!(c.is_zero() && d.is_zero()));
        let spec = SurfaceSpec::new(a, b, c, d).unwrap();
        let dec = decide(&spec).unwrap();
        prop_assert!(dec.reverify().unwrap());
        prop_assert_eq!(dec, decide(&spec).unwrap());
    }
}
