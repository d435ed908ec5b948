mod common;

use atdm::ops::{caputo, rl_integral};
use atdm::specfun::{ln_gamma, mittag_leffler};
use atdm::transform::{aboodh, aboodh_derivative_rule, aboodh_inverse, composite_fractional_integral};
use atdm::{Error, FracOrder, LinExp, Series};
use common::*;
use num_rational::Rational64;
use proptest::prelude::*;

fn order(i: bool) -> FracOrder {
    if i {
        FracOrder::Beta
    } else {
        FracOrder::BetaPlusOne
    }
}

fn positive_mu() -> impl Strategy<Value = LinExp> {
    (0i64..=2, 1i64..=2, 0i64..=2)
        .prop_filter_map("positive on (0, 1]", |(a, q, b)| {
            let e = LinExp::new(Rational64::new(a, q), Rational64::from_integer(b));
            e.is_positive_on_unit().then_some(e)
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integral_semigroup(s in series(), m1 in positive_mu(), m2 in positive_mu()) {
        let lhs = rl_integral(&rl_integral(&s, m1).unwrap(), m2).unwrap();
        let rhs = rl_integral(&s, m1 + m2).unwrap();
        prop_assert!(numerically_equal(&lhs, &rhs, 1e-11));
    }

    #[test]
    fn integral_is_linear(a in series(), b in series(), k in rational(), o in any::<bool>()) {
        let lhs = rl_integral(&(&a.scale(&k) + &b), order(o)).unwrap();
        let rhs = &rl_integral(&a, order(o)).unwrap().scale(&k) + &rl_integral(&b, order(o)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn caputo_is_a_left_inverse(s in series(), o in any::<bool>()) {
        let back = caputo(&rl_integral(&s, order(o)).unwrap(), order(o)).unwrap();
        prop_assert!(numerically_equal(&back, &s, 1e-11));
    }

    #[test]
    fn caputo_annihilates_low_polynomials(c0 in rational(), c1 in rational()) {
        let linear = &Series::constant(c0) + &Series::monomial(c1, 2, LinExp::one());
        prop_assert!(caputo(&linear, FracOrder::BetaPlusOne).unwrap().is_zero());
        let constant = linear.substitute_beta(Rational64::from_integer(1)).diff_t();
        prop_assert!(caputo(&constant, FracOrder::Beta).unwrap().is_zero());
    }

    #[test]
    fn transform_path_matches_direct_integral(s in series(), o in any::<bool>()) {
        let via = composite_fractional_integral(&s, order(o)).unwrap();
        let direct = rl_integral(&s, order(o)).unwrap();
        prop_assert!(numerically_equal(&via, &direct, 1e-12));
    }

    #[test]
    fn aboodh_round_trip_is_exact(p in polynomial()) {
        prop_assert_eq!(aboodh_inverse(&aboodh(&p).unwrap()).unwrap(), p);
    }

    #[test]
    fn aboodh_derivative_rule_matches_forward(p in polynomial(), n in 1usize..=2) {
        let mut deriv = p.clone();
        let mut initial = Vec::new();
        for _ in 0..n {
            initial.push(deriv.substitute_beta(Rational64::from_integer(1)).iter()
                .filter(|(m, _)| m.tpow.is_zero())
                .map(|(m, c)| Series::monomial(c.clone(), m.xpow, LinExp::zero()))
                .sum::<Series>());
            deriv = deriv.diff_t();
        }
        let rule = aboodh_derivative_rule(n, &initial, &aboodh(&p).unwrap()).unwrap();
        let forward = aboodh(&deriv).unwrap();
        for (x, s) in [(0.5, 1.5), (1.3, 2.0), (2.0, 3.7)] {
            let (a, b) = (rule.eval(x, s, 1.0).unwrap(), forward.eval(x, s, 1.0).unwrap());
            prop_assert!((a - b).abs() <= 1e-10 * (1.0 + b.abs()));
        }
    }
}

#[test]
fn fractional_powers_have_no_integer_transform() {
    let s = Series::mono(1, 0, LinExp::ints(1, 1));
    assert!(matches!(aboodh(&s), Err(Error::NonIntegerExponent(_))));
}

#[test]
fn caputo_tends_to_the_time_derivative() {
    let s = Series::mono(1, 1, LinExp::ints(3, 0)) + Series::mono(2, 0, LinExp::ints(2, 0));
    let exact = s.diff_t();
    let mut last = f64::INFINITY;
    for eps in [0.2, 0.1, 0.05, 0.01, 0.001] {
        let d = caputo(&s, FracOrder::Beta).unwrap();
        let err = (d.eval(1.3, 0.6, 1.0 - eps).unwrap() - exact.eval(1.3, 0.6, 1.0).unwrap()).abs();
        assert!(err < last, "error {err} at eps = {eps} not below {last}");
        last = err;
    }
    assert!(last < 1e-2);
}

#[test]
fn mittag_leffler_order_one_is_exp() {
    for i in 0..=40 {
        let x = -2.0 + 0.1 * f64::from(i);
        let e = mittag_leffler(1.0, x, 1e-16).unwrap();
        assert!((e - x.exp()).abs() <= 1e-12 * x.exp().max(1.0), "x = {x}");
    }
}

#[test]
fn mittag_leffler_reference_values() {
    let cases = [
        (0.5, 1.0, 5.0089800807622834663),
        (0.75, -5.0, 0.067923974332643942),
        (0.75, -2.5, 0.15642695861194744),
        (0.75, 3.0, 100.86180177510028),
        (0.75, 5.0, 6888.1316797401478),
    ];
    for (beta, x, want) in cases {
        let got = mittag_leffler(beta, x, 1e-15).unwrap();
        assert!((got - want).abs() <= 1e-9 * want.abs(), "E_{beta}({x}) = {got}, want {want}");
    }
}

#[test]
fn mittag_leffler_order_two_is_cosh() {
    for x in [0.0f64, 0.5, 2.0, 6.0] {
        let e = mittag_leffler(2.0, x, 1e-16).unwrap();
        assert!((e - x.sqrt().cosh()).abs() <= 1e-12 * x.sqrt().cosh());
    }
}

#[test]
fn ln_gamma_matches_factorials() {
    let mut fact = 1.0f64;
    for n in 1..=30 {
        assert!((ln_gamma(f64::from(n)) - fact.ln()).abs() <= 1e-12 * fact.ln().max(1.0));
        fact *= f64::from(n);
    }
    assert!((ln_gamma(0.5) - std::f64::consts::PI.sqrt().ln()).abs() < 1e-14);
}
