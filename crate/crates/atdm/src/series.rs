//! Exact sparse series of generalized power terms.
//!
//! A term is `c · x^m · t^γ · ΠΓ(num)/ΠΓ(den)` where `c` is an exact rational,
//! `m` a signed integer and `γ` plus every Gamma argument are [`LinExp`]s.
//! A [`Series`] is kept collected at all times: terms live in an ordered map
//! keyed by their [`Monomial`], so like terms merge on insertion and the
//! iteration order is the canonical output order.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::linexp::LinExp;
use crate::specfun;

/// A normalized Gamma ratio `ΠΓ(num)/ΠΓ(den)`.
///
/// Normal form: both multisets sorted, no argument shared between them, and
/// no positive-integer constant argument (those are folded into the rational
/// coefficient as factorials).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GammaRatio {
    num: Vec<LinExp>,
    den: Vec<LinExp>,
}

fn factorial(n: i64) -> BigInt {
    (2..=n).fold(BigInt::one(), |acc, k| acc * k)
}

/// Removes the multiset intersection of two sorted vectors.
fn cancel_sorted(num: Vec<LinExp>, den: Vec<LinExp>) -> (Vec<LinExp>, Vec<LinExp>) {
    let (mut i, mut j) = (0, 0);
    let mut n_out = Vec::with_capacity(num.len());
    let mut d_out = Vec::with_capacity(den.len());
    while i < num.len() && j < den.len() {
        match num[i].cmp(&den[j]) {
            std::cmp::Ordering::Less => {
                n_out.push(num[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                d_out.push(den[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    n_out.extend_from_slice(&num[i..]);
    d_out.extend_from_slice(&den[j..]);
    (n_out, d_out)
}

fn merge_sorted(a: &[LinExp], b: &[LinExp]) -> Vec<LinExp> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] <= b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl GammaRatio {
    pub fn one() -> Self {
        GammaRatio::default()
    }

    /// Normalizes an arbitrary ratio. The returned rational is the factor
    /// pulled out of integer arguments; the ratio's value is `factor · self`.
    pub fn normalized(num: Vec<LinExp>, den: Vec<LinExp>) -> (BigRational, GammaRatio) {
        let mut factor_num = BigInt::one();
        let mut factor_den = BigInt::one();
        let mut keep_num = Vec::with_capacity(num.len());
        let mut keep_den = Vec::with_capacity(den.len());
        for g in num {
            match g.as_integer() {
                Some(n) if n >= 1 => factor_num *= factorial(n - 1),
                _ => keep_num.push(g),
            }
        }
        for g in den {
            match g.as_integer() {
                Some(n) if n >= 1 => factor_den *= factorial(n - 1),
                _ => keep_den.push(g),
            }
        }
        keep_num.sort_unstable();
        keep_den.sort_unstable();
        let (num, den) = cancel_sorted(keep_num, keep_den);
        (BigRational::new(factor_num, factor_den), GammaRatio { num, den })
    }

    pub fn num(&self) -> &[LinExp] {
        &self.num
    }

    pub fn den(&self) -> &[LinExp] {
        &self.den
    }

    pub fn is_one(&self) -> bool {
        self.num.is_empty() && self.den.is_empty()
    }

    /// Product with another normalized ratio.
    pub fn times(&self, other: &GammaRatio) -> GammaRatio {
        let num = merge_sorted(&self.num, &other.num);
        let den = merge_sorted(&self.den, &other.den);
        let (num, den) = cancel_sorted(num, den);
        GammaRatio { num, den }
    }

    /// Multiplies by `Γ(extra_num)/Γ(extra_den)`, renormalizing.
    pub fn extended(&self, extra_num: &[LinExp], extra_den: &[LinExp]) -> (BigRational, GammaRatio) {
        let mut num = self.num.clone();
        num.extend_from_slice(extra_num);
        let mut den = self.den.clone();
        den.extend_from_slice(extra_den);
        GammaRatio::normalized(num, den)
    }

    /// Every argument positive on β ∈ (0, 1].
    pub fn is_admissible(&self) -> bool {
        self.num.iter().chain(&self.den).all(LinExp::is_positive_on_unit)
    }

    pub fn eval(&self, beta: f64) -> Result<f64> {
        specfun::gamma_ratio(&self.num, &self.den, beta)
    }

    pub fn ln_eval(&self, beta: f64) -> Result<f64> {
        specfun::ln_gamma_ratio(&self.num, &self.den, beta)
    }

    pub fn substitute(&self, beta: Rational64) -> (BigRational, GammaRatio) {
        GammaRatio::normalized(
            self.num.iter().map(|g| g.substitute(beta)).collect(),
            self.den.iter().map(|g| g.substitute(beta)).collect(),
        )
    }
}

fn fmt_args(f: &mut fmt::Formatter<'_>, args: &[LinExp]) -> fmt::Result {
    for (i, g) in args.iter().enumerate() {
        if i > 0 {
            write!(f, ", ")?;
        }
        write!(f, "{g}")?;
    }
    Ok(())
}

impl fmt::Display for GammaRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "G(")?;
        fmt_args(f, &self.num)?;
        write!(f, ")/G(")?;
        fmt_args(f, &self.den)?;
        write!(f, ")")
    }
}

/// The non-coefficient part of a term; the key under which like terms merge.
/// Field order gives the canonical term ordering.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial {
    pub xpow: i32,
    pub tpow: LinExp,
    pub gamma: GammaRatio,
}

impl Monomial {
    pub fn new(xpow: i32, tpow: LinExp) -> Self {
        Monomial { xpow, tpow, gamma: GammaRatio::one() }
    }
}

/// A single term in unnormalized, user-facing form.
#[derive(Clone, Debug, PartialEq)]
pub struct Term {
    pub coeff: BigRational,
    pub xpow: i32,
    pub tpow: LinExp,
    pub gnum: Vec<LinExp>,
    pub gden: Vec<LinExp>,
}

impl Term {
    pub fn new(coeff: BigRational, xpow: i32, tpow: LinExp) -> Self {
        Term { coeff, xpow, tpow, gnum: Vec::new(), gden: Vec::new() }
    }

    pub fn with_gamma(mut self, gnum: Vec<LinExp>, gden: Vec<LinExp>) -> Self {
        self.gnum = gnum;
        self.gden = gden;
        self
    }
}

/// Sign and log-magnitude of a real number; `sign == 0` encodes zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogValue {
    pub sign: i8,
    pub ln_abs: f64,
}

impl LogValue {
    pub fn zero() -> Self {
        LogValue { sign: 0, ln_abs: f64::NEG_INFINITY }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn value(&self) -> f64 {
        match self.sign {
            0 => 0.0,
            s => f64::from(s) * self.ln_abs.exp(),
        }
    }

    pub fn log10_abs(&self) -> f64 {
        self.ln_abs / std::f64::consts::LN_10
    }

    /// Sum of signed log-magnitudes, shifted by the largest magnitude.
    pub fn sum(parts: &[LogValue]) -> LogValue {
        let m = parts.iter().filter(|p| p.sign != 0).map(|p| p.ln_abs).fold(f64::NEG_INFINITY, f64::max);
        if m == f64::NEG_INFINITY {
            return LogValue::zero();
        }
        let s: f64 = parts.iter().filter(|p| p.sign != 0).map(|p| f64::from(p.sign) * (p.ln_abs - m).exp()).sum();
        if s == 0.0 {
            LogValue::zero()
        } else {
            LogValue { sign: if s > 0.0 { 1 } else { -1 }, ln_abs: m + s.abs().ln() }
        }
    }
}

fn ln_abs_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits < 1000 {
        n.to_f64().map(f64::abs).unwrap_or(f64::INFINITY).ln()
    } else {
        let shift = bits - 64;
        let top: BigInt = n.abs() >> shift;
        top.to_f64().unwrap_or(f64::INFINITY).ln() + shift as f64 * std::f64::consts::LN_2
    }
}

pub(crate) fn ln_abs_rational(r: &BigRational) -> f64 {
    ln_abs_bigint(r.numer()) - ln_abs_bigint(r.denom())
}

/// A collected sparse series.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Series {
    terms: BTreeMap<Monomial, BigRational>,
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Series {
    pub fn zero() -> Self {
        Series::default()
    }

    pub fn constant(c: BigRational) -> Self {
        Series::monomial(c, 0, LinExp::zero())
    }

    pub fn from_int(c: i64) -> Self {
        Series::constant(int(c))
    }

    /// `c · x^xpow · t^tpow`.
    pub fn monomial(c: BigRational, xpow: i32, tpow: LinExp) -> Self {
        let mut s = Series::zero();
        s.insert(Monomial::new(xpow, tpow), c);
        s
    }

    /// `c · x^xpow · t^tpow` with an integer coefficient.
    pub fn mono(c: i64, xpow: i32, tpow: LinExp) -> Self {
        Series::monomial(int(c), xpow, tpow)
    }

    pub fn from_term(term: Term) -> Self {
        Series::from_terms([term])
    }

    /// Collects an arbitrary list of terms.
    pub fn from_terms<I: IntoIterator<Item = Term>>(terms: I) -> Self {
        let mut s = Series::zero();
        for t in terms {
            let (factor, gamma) = GammaRatio::normalized(t.gnum, t.gden);
            s.insert(Monomial { xpow: t.xpow, tpow: t.tpow, gamma }, t.coeff * factor);
        }
        s
    }

    /// Adds `coeff · mono` in place, dropping the entry if it cancels.
    pub fn insert(&mut self, mono: Monomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn to_terms(&self) -> Vec<Term> {
        self.iter()
            .map(|(m, c)| Term {
                coeff: c.clone(),
                xpow: m.xpow,
                tpow: m.tpow,
                gnum: m.gamma.num.clone(),
                gden: m.gamma.den.clone(),
            })
            .collect()
    }

    /// Coefficient of an exact monomial, zero if absent.
    pub fn coeff_of(&self, mono: &Monomial) -> BigRational {
        self.terms.get(mono).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Merges like terms. Series are stored collected, so this is a copy;
    /// kept as an explicit operation for callers that build series by hand.
    pub fn collect(&self) -> Series {
        self.clone()
    }

    fn map_terms<F>(&self, mut f: F) -> Series
    where
        F: FnMut(&Monomial, &BigRational) -> Option<(Monomial, BigRational)>,
    {
        let mut out = Series::zero();
        for (m, c) in &self.terms {
            if let Some((m2, c2)) = f(m, c) {
                out.insert(m2, c2);
            }
        }
        out
    }

    pub fn scale(&self, k: &BigRational) -> Series {
        if k.is_zero() {
            return Series::zero();
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= k;
        }
        out
    }

    pub fn scale_int(&self, k: i64) -> Series {
        self.scale(&int(k))
    }

    /// Multiplies by `x^k`.
    pub fn mul_xpow(&self, k: i32) -> Series {
        let mut out = Series::zero();
        for (m, c) in &self.terms {
            out.terms.insert(Monomial { xpow: m.xpow + k, tpow: m.tpow, gamma: m.gamma.clone() }, c.clone());
        }
        out
    }

    /// Multiplies by `t^k`.
    pub fn mul_tpow(&self, k: LinExp) -> Series {
        let mut out = Series::zero();
        for (m, c) in &self.terms {
            out.terms.insert(Monomial { xpow: m.xpow, tpow: m.tpow + k, gamma: m.gamma.clone() }, c.clone());
        }
        out
    }

    pub fn add(&self, other: &Series) -> Series {
        let mut out = self.clone();
        out.add_assign_ref(other);
        out
    }

    pub fn add_assign_ref(&mut self, other: &Series) {
        for (m, c) in &other.terms {
            self.insert(m.clone(), c.clone());
        }
    }

    pub fn sub(&self, other: &Series) -> Series {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Series {
        self.scale(&int(-1))
    }

    pub fn mul(&self, other: &Series) -> Series {
        let mut out = Series::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mono = Monomial {
                    xpow: m1.xpow + m2.xpow,
                    tpow: m1.tpow + m2.tpow,
                    gamma: if m2.gamma.is_one() {
                        m1.gamma.clone()
                    } else if m1.gamma.is_one() {
                        m2.gamma.clone()
                    } else {
                        m1.gamma.times(&m2.gamma)
                    },
                };
                out.insert(mono, c1 * c2);
            }
        }
        out
    }

    /// ∂/∂x.
    pub fn diff_x(&self) -> Series {
        self.map_terms(|m, c| {
            (m.xpow != 0).then(|| {
                (Monomial { xpow: m.xpow - 1, tpow: m.tpow, gamma: m.gamma.clone() }, c * int(i64::from(m.xpow)))
            })
        })
    }

    /// ∂/∂t. A β-dependent factor γ is carried as `Γ(γ+1)/Γ(γ)`.
    ///
    /// # Panics
    /// If a t-exponent changes sign on (0, 1], which no admissible series has.
    pub fn diff_t(&self) -> Series {
        self.map_terms(|m, c| {
            let g = m.tpow;
            if g.is_zero() {
                return None;
            }
            let tpow = g.add_const(-1);
            if g.is_constant() {
                let a = BigRational::new(BigInt::from(*g.a.numer()), BigInt::from(*g.a.denom()));
                return Some((Monomial { xpow: m.xpow, tpow, gamma: m.gamma.clone() }, c * a));
            }
            let (pos, sign) = if g.is_positive_on_unit() {
                (g, 1)
            } else if (-g).is_positive_on_unit() {
                (-g, -1)
            } else {
                panic!("diff_t: exponent {g} changes sign on (0,1]");
            };
            let (factor, gamma) = m.gamma.extended(&[pos.add_const(1)], &[pos]);
            Some((Monomial { xpow: m.xpow, tpow, gamma }, c * factor * int(sign)))
        })
    }

    /// Replaces β by a rational value throughout, renormalizing Gamma factors.
    pub fn substitute_beta(&self, beta: Rational64) -> Series {
        self.map_terms(|m, c| {
            let (factor, gamma) = m.gamma.substitute(beta);
            Some((Monomial { xpow: m.xpow, tpow: m.tpow.substitute(beta), gamma }, c * factor))
        })
    }

    /// Every t-exponent non-negative and every Gamma argument positive on (0, 1].
    pub fn is_admissible(&self) -> bool {
        self.terms.keys().all(|m| m.tpow.is_nonnegative_on_unit() && m.gamma.is_admissible())
    }

    /// Smallest constant part among the t-exponents.
    pub fn min_tpow_constant(&self) -> Option<Rational64> {
        self.terms.keys().map(|m| m.tpow.a).min()
    }

    /// Whether any term carries a β-dependent exponent or Gamma argument.
    pub fn depends_on_beta(&self) -> bool {
        self.terms.keys().any(|m| !m.tpow.is_constant() || m.gamma.num.iter().chain(&m.gamma.den).any(|g| !g.is_constant()))
    }

    /// Whether the series involves `t` at all.
    pub fn is_t_free(&self) -> bool {
        self.terms.keys().all(|m| m.tpow.is_zero())
    }

    pub fn evaluator(&self, beta: f64) -> Result<Evaluator> {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| {
                Ok(Prepared {
                    coeff: c.to_f64().unwrap_or(f64::NAN),
                    ln_coeff: ln_abs_rational(c),
                    negative: c.is_negative(),
                    xpow: m.xpow,
                    tpow: m.tpow.value(beta),
                    gamma: m.gamma.eval(beta)?,
                    ln_gamma: m.gamma.ln_eval(beta)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Evaluator { terms })
    }

    /// Value at `(x, t)` for the given β.
    ///
    /// # Errors
    /// [`Error::SingularEvaluation`] for a negative x-power at `x = 0`, a
    /// negative t-power at `t = 0`, or `t < 0`.
    pub fn eval(&self, x: f64, t: f64, beta: f64) -> Result<f64> {
        self.evaluator(beta)?.eval(x, t)
    }

    /// Sign and log-magnitude of the value; usable far outside f64 range.
    pub fn eval_log(&self, x: f64, t: f64, beta: f64) -> Result<LogValue> {
        self.evaluator(beta)?.eval_log(x, t)
    }

    /// Parses the canonical text form produced by `Display`.
    pub fn parse_canonical(text: &str) -> Result<Series> {
        let mut terms = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if line == "0" {
                continue;
            }
            terms.push(parse_term(line)?);
        }
        Ok(Series::from_terms(terms))
    }
}

fn parse_args(s: &str) -> Result<Vec<LinExp>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(|a| a.trim().parse()).collect()
}

fn parse_term(line: &str) -> Result<Term> {
    let bad = || Error::Parse(format!("malformed term '{line}'"));
    let parts: Vec<&str> = line.split(" * ").collect();
    if parts.len() != 4 {
        return Err(bad());
    }
    let coeff = BigRational::from_str(parts[0].trim()).map_err(|_| bad())?;
    let xpow: i32 = parts[1].trim().strip_prefix("x^").ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let tpow: LinExp =
        parts[2].trim().strip_prefix("t^(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?.parse()?;
    let g = parts[3].trim().strip_prefix("G(").and_then(|r| r.strip_suffix(')')).ok_or_else(bad)?;
    let (num, den) = g.split_once(")/G(").ok_or_else(bad)?;
    Ok(Term::new(coeff, xpow, tpow).with_gamma(parse_args(num)?, parse_args(den)?))
}

impl fmt::Display for Series {
    /// One term per line: `coeff * x^m * t^(a+b*B) * G(args)/G(args)`;
    /// the empty series prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c} * x^{} * t^({}) * {}", m.xpow, m.tpow, m.gamma)?;
        }
        Ok(())
    }
}

impl FromStr for Series {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Series::parse_canonical(s)
    }
}

struct Prepared {
    coeff: f64,
    ln_coeff: f64,
    negative: bool,
    xpow: i32,
    tpow: f64,
    gamma: f64,
    ln_gamma: f64,
}

enum Part {
    Zero,
    Value { direct: f64, log: LogValue },
}

impl Prepared {
    fn part(&self, x: f64, t: f64) -> Result<Part> {
        let mut negative = self.negative;
        let (xp, ln_x) = if self.xpow == 0 {
            (1.0, 0.0)
        } else if x == 0.0 {
            if self.xpow < 0 {
                return Err(Error::SingularEvaluation(format!("x^{} at x = 0", self.xpow)));
            }
            return Ok(Part::Zero);
        } else {
            if x < 0.0 && self.xpow % 2 != 0 {
                negative = !negative;
            }
            (x.powi(self.xpow), f64::from(self.xpow) * x.abs().ln())
        };
        let (tp, ln_t) = if self.tpow == 0.0 {
            (1.0, 0.0)
        } else if t == 0.0 {
            if self.tpow < 0.0 {
                return Err(Error::SingularEvaluation(format!("t^{} at t = 0", self.tpow)));
            }
            return Ok(Part::Zero);
        } else {
            (t.powf(self.tpow), self.tpow * t.ln())
        };
        let log = LogValue { sign: if negative { -1 } else { 1 }, ln_abs: self.ln_coeff + ln_x + ln_t + self.ln_gamma };
        let direct = self.coeff * xp * tp * self.gamma;
        let direct = if direct.is_finite() && direct != 0.0 && direct.abs() > 1e-290 { direct } else { log.value() };
        Ok(Part::Value { direct, log })
    }
}

/// A series prepared for repeated evaluation at one fixed β.
pub struct Evaluator {
    terms: Vec<Prepared>,
}

impl Evaluator {
    fn check_t(t: f64) -> Result<()> {
        if t < 0.0 || t.is_nan() {
            return Err(Error::SingularEvaluation(format!("negative time t = {t}")));
        }
        Ok(())
    }

    pub fn eval(&self, x: f64, t: f64) -> Result<f64> {
        Self::check_t(t)?;
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for p in &self.terms {
            if let Part::Value { direct, .. } = p.part(x, t)? {
                let s = sum + direct;
                comp += if sum.abs() >= direct.abs() { (sum - s) + direct } else { (direct - s) + sum };
                sum = s;
            }
        }
        Ok(sum + comp)
    }

    pub fn eval_log(&self, x: f64, t: f64) -> Result<LogValue> {
        Self::check_t(t)?;
        let mut parts = Vec::with_capacity(self.terms.len());
        for p in &self.terms {
            if let Part::Value { log, .. } = p.part(x, t)? {
                parts.push(log);
            }
        }
        Ok(LogValue::sum(&parts))
    }
}

/// `|s1 − s2| ≤ tol·(1 + |s1|)` at every sample `(x, t, β)`.
pub fn equal_numeric(s1: &Series, s2: &Series, samples: &[(f64, f64, f64)], tol: f64) -> Result<bool> {
    for &(x, t, beta) in samples {
        let a = s1.eval(x, t, beta)?;
        let b = s2.eval(x, t, beta)?;
        if !((a - b).abs() <= tol * (1.0 + a.abs())) {
            return Ok(false);
        }
    }
    Ok(true)
}

impl Add for &Series {
    type Output = Series;
    fn add(self, o: &Series) -> Series {
        Series::add(self, o)
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, o: &Series) -> Series {
        Series::sub(self, o)
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, o: &Series) -> Series {
        Series::mul(self, o)
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(self)
    }
}

impl Add for Series {
    type Output = Series;
    fn add(mut self, o: Series) -> Series {
        self.add_assign_ref(&o);
        self
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, o: Series) -> Series {
        Series::sub(&self, &o)
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, o: Series) -> Series {
        Series::mul(&self, &o)
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series::neg(&self)
    }
}

impl AddAssign<&Series> for Series {
    fn add_assign(&mut self, o: &Series) {
        self.add_assign_ref(o);
    }
}

impl std::iter::Sum for Series {
    fn sum<I: Iterator<Item = Series>>(iter: I) -> Series {
        iter.fold(Series::zero(), |acc, s| acc + s)
    }
}

impl<'a> std::iter::Sum<&'a Series> for Series {
    fn sum<I: Iterator<Item = &'a Series>>(iter: I) -> Series {
        let mut acc = Series::zero();
        for s in iter {
            acc.add_assign_ref(s);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b() -> LinExp {
        LinExp::beta()
    }

    fn le(a: i64, bb: i64) -> LinExp {
        LinExp::ints(a, bb)
    }

    fn gt(c: i64, xpow: i32, tpow: LinExp, num: Vec<LinExp>, den: Vec<LinExp>) -> Series {
        Series::from_term(Term::new(int(c), xpow, tpow).with_gamma(num, den))
    }

    #[test]
    fn add_cancels_and_merges() {
        let x2 = Series::mono(1, 2, LinExp::zero());
        assert!((&x2 + &(-&x2)).is_zero());
        let a = gt(3, 0, b(), vec![], vec![le(1, 1)]);
        let c = gt(2, 0, b(), vec![], vec![le(1, 1)]);
        assert_eq!(&a + &c, gt(5, 0, b(), vec![], vec![le(1, 1)]));
        let exact = &Series::mono(1, 2, le(1, 0)) + &x2;
        assert_eq!(exact.len(), 2);
        assert!((exact.eval(4.0, 0.1, 0.5).unwrap() - 17.6).abs() < 1e-12);
    }

    #[test]
    fn multiplication_adds_exponents() {
        let p = &Series::mono(1, 1, le(1, 0)) * &Series::mono(1, 1, b());
        assert_eq!(p, Series::mono(1, 2, le(1, 1)));
        let u0 = Series::mono(1, 2, le(1, 0));
        assert_eq!(&u0 * &u0.diff_x(), Series::mono(2, 3, le(2, 0)));
        assert!((&gt(1, 0, b(), vec![], vec![le(1, 1)]) * &Series::zero()).is_zero());
    }

    #[test]
    fn derivatives() {
        assert_eq!(Series::mono(1, 2, LinExp::zero()).diff_x(), Series::mono(2, 1, LinExp::zero()));
        assert!(Series::from_int(6).diff_x().is_zero());
        assert!(Series::from_int(6).diff_t().is_zero());
        assert_eq!(Series::mono(1, 2, le(1, 0)).diff_t(), Series::mono(1, 2, LinExp::zero()));
        assert_eq!(Series::mono(1, 0, le(3, 0)).diff_t(), Series::mono(3, 0, le(2, 0)));
        let d = Series::mono(1, 0, le(1, 1)).diff_t();
        let (m, _) = d.iter().next().unwrap();
        assert_eq!(m.tpow, b());
        assert_eq!(m.gamma.num(), &[le(2, 1)]);
        assert_eq!(m.gamma.den(), &[le(1, 1)]);
        assert!((d.eval(1.0, 0.3, 1.0).unwrap() - 0.6).abs() < 1e-14);
    }

    #[test]
    fn integer_gamma_arguments_fold() {
        let s = gt(1, 0, le(3, 0), vec![le(4, 0)], vec![le(3, 0)]);
        assert_eq!(s, Series::mono(3, 0, le(3, 0)));
        let s = gt(1, 0, le(1, 1), vec![le(2, 1)], vec![le(2, 1)]);
        assert_eq!(s, Series::mono(1, 0, le(1, 1)));
    }

    #[test]
    fn substitution_folds_to_rationals() {
        let s = gt(4, 2, le(3, 1), vec![], vec![le(4, 1)]);
        let at1 = s.substitute_beta(Rational64::from_integer(1));
        assert_eq!(at1, Series::monomial(BigRational::new(1.into(), 6.into()), 2, le(4, 0)));
        assert!(!at1.depends_on_beta());
        assert!(s.depends_on_beta());
    }

    #[test]
    fn evaluation_guards() {
        let s = Series::mono(1, -1, LinExp::zero());
        assert!(matches!(s.eval(0.0, 0.1, 0.5), Err(Error::SingularEvaluation(_))));
        assert_eq!(Series::zero().eval(1.0, 1.0, 0.5).unwrap(), 0.0);
        assert_eq!(Series::mono(2, 0, b()).eval(1.0, 0.0, 0.5).unwrap(), 0.0);
        assert_eq!(Series::mono(2, 0, LinExp::zero()).eval(1.0, 0.0, 0.5).unwrap(), 2.0);
        assert!(Series::mono(1, 0, b()).eval(1.0, -0.1, 0.5).is_err());
        assert!((Series::mono(1, 2, le(1, 0)).eval(3.0, 0.2, 1.0).unwrap() - 1.8).abs() < 1e-14);
    }

    #[test]
    fn log_evaluation_beyond_f64() {
        // 2^100 x^2 t^(2+100β)/Γ(3+100β) at t = 1e-3, β = 1 is near 1e-440.
        let c = BigRational::from_integer(BigInt::one() << 100);
        let s = Series::from_term(Term::new(c, 2, le(2, 100)).with_gamma(vec![], vec![le(3, 100)]));
        let lv = s.eval_log(1.0, 1e-3, 1.0).unwrap();
        let expected = 100.0 * 2f64.ln() + 102.0 * (1e-3f64).ln() - specfun::ln_gamma(103.0);
        assert_eq!(lv.sign, 1);
        assert!((lv.ln_abs - expected).abs() < 1e-9 * expected.abs());
        assert_eq!(s.eval(1.0, 1e-3, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn canonical_text_round_trip() {
        let s = &gt(-3, 2, le(3, 2), vec![le(1, 1)], vec![le(4, 2)]) + &Series::from_int(7);
        let text = s.to_string();
        assert_eq!(text, "7 * x^0 * t^(0+0*B) * G()/G()\n-3 * x^2 * t^(3+2*B) * G(1+1*B)/G(4+2*B)");
        assert_eq!(Series::parse_canonical(&text).unwrap(), s);
        assert_eq!(Series::zero().to_string(), "0");
        assert!(Series::parse_canonical("1 * x^2").is_err());
    }

    #[test]
    fn equal_numeric_detects_perturbation() {
        let s1 = Series::mono(1, 2, LinExp::zero());
        let s2 = &s1 + &Series::monomial(BigRational::new(1.into(), 1_000_000_000.into()), 1, LinExp::zero());
        let samples = [(1.5, 0.2, 0.7)];
        assert!(!equal_numeric(&s1, &s2, &samples, 1e-12).unwrap());
        assert!(equal_numeric(&s1, &s1, &samples, 1e-12).unwrap());
    }
}
