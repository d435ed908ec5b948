#![allow(dead_code)]

use atdm::{LinExp, Series, Term};
use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use proptest::prelude::*;

pub fn rational() -> impl Strategy<Value = BigRational> {
    (-30i64..=30, 1i64..=8).prop_map(|(p, q)| BigRational::new(BigInt::from(p), BigInt::from(q)))
}

pub fn nonzero_rational() -> impl Strategy<Value = BigRational> {
    rational().prop_filter("non-zero", |r| *r != BigRational::from_integer(0.into()))
}

/// Any `a + bβ` with small rational parts.
pub fn linexp() -> impl Strategy<Value = LinExp> {
    (-6i64..=6, 1i64..=3, -3i64..=3, 1i64..=2).prop_map(|(a, p, b, q)| LinExp::new(Rational64::new(a, p), Rational64::new(b, q)))
}

/// Exponents non-negative on (0, 1].
pub fn tpow() -> impl Strategy<Value = LinExp> {
    (0i64..=4, 0i64..=2, prop::bool::ANY).prop_map(|(a, b, half)| {
        LinExp::new(Rational64::new(2 * a + i64::from(half), 2), Rational64::from_integer(b))
    })
}

/// Gamma arguments positive on (0, 1].
pub fn gamma_arg() -> impl Strategy<Value = LinExp> {
    (1i64..=5, 0i64..=2, prop::bool::ANY).prop_map(|(a, b, half)| {
        LinExp::new(Rational64::new(2 * a - i64::from(half), 2), Rational64::from_integer(b))
    })
}

pub fn term() -> impl Strategy<Value = Term> {
    (
        rational(),
        0i32..=4,
        tpow(),
        prop::collection::vec(gamma_arg(), 0..=1),
        prop::collection::vec(gamma_arg(), 0..=2),
    )
        .prop_map(|(c, x, t, num, den)| Term::new(c, x, t).with_gamma(num, den))
}

/// Plain terms: no Gamma factors, integer-or-β t-exponents.
pub fn plain_term() -> impl Strategy<Value = Term> {
    (rational(), 0i32..=4, 0i64..=4, 0i64..=2).prop_map(|(c, x, a, b)| Term::new(c, x, LinExp::ints(a, b)))
}

pub fn series() -> impl Strategy<Value = Series> {
    prop::collection::vec(term(), 0..=4).prop_map(Series::from_terms)
}

pub fn plain_series() -> impl Strategy<Value = Series> {
    prop::collection::vec(plain_term(), 0..=4).prop_map(Series::from_terms)
}

/// Series with integer, non-negative t-powers only.
pub fn polynomial() -> impl Strategy<Value = Series> {
    prop::collection::vec((rational(), 0i32..=4, 0i64..=6), 0..=4)
        .prop_map(|ts| Series::from_terms(ts.into_iter().map(|(c, x, n)| Term::new(c, x, LinExp::ints(n, 0)))))
}

/// Series whose t-exponents stay ≥ 1, so `∂ₜ` keeps them admissible.
pub fn smooth_series() -> impl Strategy<Value = Series> {
    series().prop_map(|s| s.mul_tpow(LinExp::one()))
}

/// Evaluation points `(x, t, β)` away from the singular corners.
pub fn sample_points(seed: u64, n: usize) -> Vec<(f64, f64, f64)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..n).map(|_| (rng.gen_range(0.2..2.0), rng.gen_range(0.05..1.0), rng.gen_range(0.2..=1.0))).collect()
}

pub fn numerically_equal(a: &Series, b: &Series, tol: f64) -> bool {
    atdm::series::equal_numeric(a, b, &sample_points(17, 12), tol).expect("admissible series evaluate")
}
