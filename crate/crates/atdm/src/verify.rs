//! Seeded property checks over the whole library, run as one suite.

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::adomian::{adomian_oracle, adomian_poly, DerivFactor, NonlinearitySpec, Var};
use crate::benchmarks::{regenerate, Benchmark, BenchmarkId, TableId};
use crate::engine::{residual_series_at, solve};
use crate::linexp::LinExp;
use crate::ops::{caputo, rl_integral, FracOrder};
use crate::series::{equal_numeric, Series, Term};
use crate::specfun::mittag_leffler;
use crate::table::ErrorTable;
use crate::transform::{aboodh, aboodh_inverse, composite_fractional_integral};

/// Outcome of one named check.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub cases: usize,
    pub failure: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

const SEED: u64 = 0x5eed_a7d3;
const CASES: usize = 40;

fn rat(rng: &mut StdRng) -> BigRational {
    let p = rng.gen_range(-9i64..=9);
    let q = rng.gen_range(1i64..=6);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// A small random series; `fractional` allows `β` in the t-exponent.
pub fn random_series(rng: &mut StdRng, fractional: bool, max_terms: usize) -> Series {
    let n = rng.gen_range(1..=max_terms);
    Series::from_terms((0..n).map(|_| {
        let a = rng.gen_range(0i64..=3);
        let b = if fractional { rng.gen_range(0i64..=2) } else { 0 };
        Term::new(rat(rng), rng.gen_range(0..=3), LinExp::ints(a, b))
    }))
}

/// Random series with t-exponents at least 1 (closed under `∂ₜ`).
fn random_smooth(rng: &mut StdRng) -> Series {
    random_series(rng, true, 3).mul_tpow(LinExp::one())
}

fn samples(rng: &mut StdRng, n: usize) -> Vec<(f64, f64, f64)> {
    (0..n).map(|_| (rng.gen_range(0.2..2.0), rng.gen_range(0.05..1.0), rng.gen_range(0.3..=1.0))).collect()
}

fn check<F>(name: &'static str, cases: usize, mut body: F) -> CheckOutcome
where
    F: FnMut(&mut StdRng, usize) -> Result<(), String>,
{
    let mut rng = StdRng::seed_from_u64(SEED ^ name.len() as u64);
    for i in 0..cases {
        if let Err(e) = body(&mut rng, i) {
            return CheckOutcome { name, cases: i + 1, failure: Some(format!("case {i}: {e}")) };
        }
    }
    CheckOutcome { name, cases, failure: None }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn close(a: &Series, b: &Series, rng: &mut StdRng, tol: f64) -> Result<bool, String> {
    equal_numeric(a, b, &samples(rng, 8), tol).map_err(|e| e.to_string())
}

/// The four bilinear nonlinearities of the benchmarks and the two trilinear
/// forms `v·u_x·v_x` and `v·u_x·u_tx`.
pub fn reference_nonlinearities() -> Vec<NonlinearitySpec> {
    let f = DerivFactor::new;
    vec![
        NonlinearitySpec::single(vec![f(Var::V, 0, 0), f(Var::U, 1, 0)]),
        NonlinearitySpec::single(vec![f(Var::U, 0, 0), f(Var::V, 1, 0)]),
        NonlinearitySpec::single(vec![f(Var::U, 0, 0), f(Var::U, 1, 0)]),
        NonlinearitySpec::single(vec![f(Var::V, 0, 0), f(Var::V, 1, 0)]),
        NonlinearitySpec::single(vec![f(Var::V, 0, 0), f(Var::U, 1, 0), f(Var::V, 1, 0)]),
        NonlinearitySpec::single(vec![f(Var::V, 0, 0), f(Var::U, 1, 0), f(Var::U, 1, 1)]),
    ]
}

fn ring_axioms() -> CheckOutcome {
    check("series ring axioms", CASES, |rng, _| {
        let (a, b, c) = (random_series(rng, true, 4), random_series(rng, true, 4), random_series(rng, true, 4));
        ensure(&a + &b == &b + &a, || "addition not commutative".into())?;
        ensure(&a * &b == &b * &a, || "multiplication not commutative".into())?;
        ensure(&(&a * &b) * &c == &a * &(&b * &c), || "multiplication not associative".into())?;
        ensure(&a * &(&b + &c) == &(&a * &b) + &(&a * &c), || "not distributive".into())?;
        let copy = a.clone();
        ensure((&a - &copy).is_zero(), || "a - a is not zero".into())
    })
}

fn derivative_rules() -> CheckOutcome {
    check("product rule and mixed partials", CASES, |rng, _| {
        let (a, b) = (random_smooth(rng), random_smooth(rng));
        let ab = &a * &b;
        ensure(ab.diff_x() == &(&a.diff_x() * &b) + &(&a * &b.diff_x()), || "x product rule".into())?;
        let rule = &(&a.diff_t() * &b) + &(&a * &b.diff_t());
        ensure(close(&ab.diff_t(), &rule, rng, 1e-11)?, || "t product rule".into())?;
        ensure(a.diff_x().diff_t() == a.diff_t().diff_x(), || "mixed partials differ".into())
    })
}

fn semigroup() -> CheckOutcome {
    check("fractional integral semigroup", CASES, |rng, _| {
        let s = random_series(rng, true, 3);
        let m1 = LinExp::ints(rng.gen_range(0..=1), 1);
        let m2 = LinExp::new(Rational64::new(rng.gen_range(1..=4), 2), Rational64::from_integer(0));
        let lhs = rl_integral(&rl_integral(&s, m1).map_err(|e| e.to_string())?, m2).map_err(|e| e.to_string())?;
        let rhs = rl_integral(&s, m1 + m2).map_err(|e| e.to_string())?;
        ensure(close(&lhs, &rhs, rng, 1e-11)?, || format!("J^{m2} J^{m1} != J^({})", m1 + m2))
    })
}

fn left_inverse() -> CheckOutcome {
    check("Caputo undoes the fractional integral", CASES, |rng, i| {
        let order = if i % 2 == 0 { FracOrder::Beta } else { FracOrder::BetaPlusOne };
        let s = random_series(rng, true, 3);
        let back = caputo(&rl_integral(&s, order).map_err(|e| e.to_string())?, order).map_err(|e| e.to_string())?;
        ensure(close(&back, &s, rng, 1e-11)?, || format!("D^{order} J^{order} s != s for s = {s}"))
    })
}

fn composite_path() -> CheckOutcome {
    check("transform path equals the fractional integral", CASES, |rng, i| {
        let order = if i % 2 == 0 { FracOrder::Beta } else { FracOrder::BetaPlusOne };
        let s = random_series(rng, true, 3);
        let via = composite_fractional_integral(&s, order).map_err(|e| e.to_string())?;
        let direct = rl_integral(&s, order).map_err(|e| e.to_string())?;
        ensure(close(&via, &direct, rng, 1e-12)?, || format!("mismatch for {s}"))
    })
}

fn aboodh_round_trip() -> CheckOutcome {
    check("Aboodh round trip on integer powers", CASES, |rng, _| {
        let s = random_series(rng, false, 4);
        let back = aboodh_inverse(&aboodh(&s).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(back == s, || format!("round trip changed {s}"))
    })
}

fn adomian_equivalence() -> CheckOutcome {
    let specs = reference_nonlinearities();
    check("Adomian polynomials match the graded expansion", specs.len() * 2, |rng, i| {
        let spec = &specs[i % specs.len()];
        let u: Vec<Series> = (0..=6).map(|_| random_smooth(rng)).collect();
        let v: Vec<Series> = (0..=6).map(|_| random_smooth(rng)).collect();
        for n in 0..=6 {
            let a = adomian_poly(spec, &u, &v, n).map_err(|e| e.to_string())?;
            let o = adomian_oracle(spec, &u, &v, n).map_err(|e| e.to_string())?;
            ensure(close(&a, &o, rng, 1e-11)?, || format!("A_{n} differs for product set {}", i % specs.len()))?;
        }
        Ok(())
    })
}

fn mittag_leffler_exp() -> CheckOutcome {
    check("Mittag-Leffler of order one is exp", 41, |_, i| {
        let x = -2.0 + 0.1 * i as f64;
        let e = mittag_leffler(1.0, x, 1e-16).map_err(|e| e.to_string())?;
        ensure((e - x.exp()).abs() <= 1e-12 * x.exp().max(1.0), || format!("E_1({x}) = {e}"))
    })
}

fn manufactured_residuals() -> CheckOutcome {
    check("exact solutions satisfy the benchmarks at beta = 1", 3, |_, i| {
        let b = Benchmark::load(BenchmarkId::ALL[i]);
        let (ru, rv) = residual_series_at(&b.spec, &b.exact_u, &b.exact_v, Rational64::from_integer(1))
            .map_err(|e| e.to_string())?;
        ensure(ru.is_zero() && rv.is_zero(), || format!("{}: residuals\n{ru}\n{rv}", b.id))
    })
}

fn increment_decay() -> CheckOutcome {
    check("example 1 components decay super-geometrically", 1, |_, _| {
        let b = Benchmark::load(BenchmarkId::Ex1);
        let sol = solve(&b.spec, 101).map_err(|e| e.to_string())?;
        let mut last = f64::INFINITY;
        for j in [10usize, 25, 50, 100] {
            let l = sol.u[j].eval_log(1.0, 0.1, 1.0).map_err(|e| e.to_string())?.log10_abs();
            ensure(l < last - 1.0, || format!("u_{j} at t = 0.1 is not 10x below the previous"))?;
            last = l;
        }
        Ok(())
    })
}

fn table_round_trip() -> CheckOutcome {
    check("error tables survive JSON and CSV round trips", 2, |_, i| {
        let id = [TableId::Table4, TableId::Table3][i];
        let t = regenerate(id).map_err(|e| e.to_string())?;
        let back = ErrorTable::parse_json(&t.emit_json()).map_err(|e| e.to_string())?;
        ensure(back == t, || format!("{id}: JSON round trip differs"))?;
        let csv = ErrorTable::parse_csv(&t.emit_csv()).map_err(|e| e.to_string())?;
        ensure(csv.emit_csv() == t.emit_csv(), || format!("{id}: CSV round trip differs"))
    })
}

/// Runs every check; deterministic for a given build.
pub fn run_all() -> Vec<CheckOutcome> {
    vec![
        ring_axioms(),
        derivative_rules(),
        semigroup(),
        left_inverse(),
        composite_path(),
        aboodh_round_trip(),
        adomian_equivalence(),
        mittag_leffler_exp(),
        manufactured_residuals(),
        increment_decay(),
        table_round_trip(),
    ]
}
