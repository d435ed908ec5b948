mod common;

use atdm::{GammaRatio, LinExp, Series};
use common::*;
use num_rational::BigRational;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn linexp_text_round_trip(e in linexp()) {
        prop_assert_eq!(e.to_string().parse::<LinExp>().unwrap(), e);
    }

    #[test]
    fn linexp_json_round_trip(e in linexp()) {
        let text = serde_json::to_string(&e).unwrap();
        prop_assert_eq!(serde_json::from_str::<LinExp>(&text).unwrap(), e);
    }

    #[test]
    fn series_text_round_trip(s in series()) {
        prop_assert_eq!(s.to_string().parse::<Series>().unwrap(), s);
    }

    #[test]
    fn series_json_round_trip(s in series()) {
        let text = serde_json::to_string(&s).unwrap();
        prop_assert_eq!(serde_json::from_str::<Series>(&text).unwrap(), s);
    }

    #[test]
    fn addition_is_a_commutative_group(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &Series::zero(), a.clone());
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &Series::from_int(1), a.clone());
        prop_assert!((&a * &Series::zero()).is_zero());
    }

    #[test]
    fn multiplication_distributes(a in series(), b in series(), c in series()) {
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
    }

    #[test]
    fn collect_is_idempotent_and_sum_preserving(terms in prop::collection::vec(term(), 0..8)) {
        let s = Series::from_terms(terms.clone());
        prop_assert_eq!(s.collect(), s.clone());
        prop_assert_eq!(s.collect().collect(), s.collect());
        let piecewise: Series = terms.into_iter().map(Series::from_term).sum();
        prop_assert_eq!(piecewise, s);
    }

    #[test]
    fn scaling_is_exact(s in series(), k in nonzero_rational()) {
        let back = s.scale(&k).scale(&(BigRational::from_integer(1.into()) / &k));
        prop_assert_eq!(back, s);
    }

    #[test]
    fn x_product_rule(a in series(), b in series()) {
        prop_assert_eq!((&a * &b).diff_x(), &(&a.diff_x() * &b) + &(&a * &b.diff_x()));
    }

    #[test]
    fn t_product_rule(a in smooth_series(), b in smooth_series()) {
        let lhs = (&a * &b).diff_t();
        let rhs = &(&a.diff_t() * &b) + &(&a * &b.diff_t());
        prop_assert!(numerically_equal(&lhs, &rhs, 1e-11));
    }

    #[test]
    fn mixed_partials_commute(s in smooth_series()) {
        prop_assert_eq!(s.diff_x().diff_t(), s.diff_t().diff_x());
    }

    #[test]
    fn gamma_normal_form_is_canonical(num in prop::collection::vec(gamma_arg(), 0..3), den in prop::collection::vec(gamma_arg(), 0..3)) {
        let (c1, g1) = GammaRatio::normalized(num.clone(), den.clone());
        let mut rnum = num.clone();
        rnum.reverse();
        let mut rden = den.clone();
        rden.reverse();
        let (c2, g2) = GammaRatio::normalized(rnum, rden);
        prop_assert_eq!(&c1, &c2);
        prop_assert_eq!(&g1, &g2);
        prop_assert!(g1.num().iter().chain(g1.den()).all(|a| a.as_integer().map_or(true, |n| n <= 0)));
        prop_assert!(g1.num().iter().all(|a| !g1.den().contains(a)));
        for beta in [0.3, 0.7, 1.0] {
            let direct = atdm::specfun::gamma_ratio(&num, &den, beta).unwrap();
            let folded = num_traits::ToPrimitive::to_f64(&c1).unwrap() * g1.eval(beta).unwrap();
            prop_assert!((direct - folded).abs() <= 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn evaluation_is_additive_and_multiplicative(a in series(), b in series()) {
        for (x, t, beta) in sample_points(3, 4) {
            let (va, vb) = (a.eval(x, t, beta).unwrap(), b.eval(x, t, beta).unwrap());
            let sum = (&a + &b).eval(x, t, beta).unwrap();
            let prod = (&a * &b).eval(x, t, beta).unwrap();
            prop_assert!((sum - (va + vb)).abs() <= 1e-10 * (1.0 + va.abs() + vb.abs()));
            prop_assert!((prod - va * vb).abs() <= 1e-10 * (1.0 + (va * vb).abs()));
        }
    }

    #[test]
    fn log_evaluation_agrees_with_direct(s in series()) {
        for (x, t, beta) in sample_points(5, 4) {
            let direct = s.eval(x, t, beta).unwrap();
            let logged = s.eval_log(x, t, beta).unwrap().value();
            prop_assert!((direct - logged).abs() <= 1e-9 * (1.0 + direct.abs()));
        }
    }

    #[test]
    fn beta_substitution_commutes_with_evaluation(s in series(), k in 1i64..=4) {
        let beta = num_rational::Rational64::new(k, 4);
        let at = s.substitute_beta(beta);
        prop_assert!(!at.depends_on_beta());
        let b = k as f64 / 4.0;
        for (x, t, _) in sample_points(9, 4) {
            let (p, q) = (s.eval(x, t, b).unwrap(), at.eval(x, t, b).unwrap());
            prop_assert!((p - q).abs() <= 1e-10 * (1.0 + p.abs()));
        }
    }
}

#[test]
fn zero_series_prints_as_zero() {
    assert_eq!(Series::zero().to_string(), "0");
    assert_eq!("0".parse::<Series>().unwrap(), Series::zero());
}

#[test]
fn malformed_text_is_rejected() {
    for bad in ["1 * x^2", "a * x^1 * t^(0+0*B) * G()/G()", "1 * x^2 * t^(1+0*B) * G(/G()"] {
        assert!(bad.parse::<Series>().is_err(), "{bad}");
    }
}
