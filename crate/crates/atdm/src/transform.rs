//! The Aboodh transform pair `A[u](s) = (1/s)∫₀^∞ u(t) e^{−st} dt` on series.
//!
//! Images are sums `c · x^m · ΠΓ(·)/ΠΓ(·) / s^p` with `p` linear in β.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linexp::LinExp;
use crate::ops::FracOrder;
use crate::series::{GammaRatio, Monomial, Series};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransformMonomial {
    pub xpow: i32,
    /// Power of `1/s`.
    pub spow: LinExp,
    pub gamma: GammaRatio,
}

/// A collected sum of transform-domain terms.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TransformSeries {
    terms: BTreeMap<TransformMonomial, BigRational>,
}

impl TransformSeries {
    pub fn zero() -> Self {
        TransformSeries::default()
    }

    /// `c · x^xpow / s^spow`.
    pub fn monomial(c: BigRational, xpow: i32, spow: LinExp) -> Self {
        let mut ts = TransformSeries::zero();
        ts.insert(TransformMonomial { xpow, spow, gamma: GammaRatio::one() }, c);
        ts
    }

    pub fn insert(&mut self, mono: TransformMonomial, coeff: BigRational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(mono).or_insert_with(BigRational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.retain(|_, c| !c.is_zero());
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

    pub fn iter(&self) -> impl Iterator<Item = (&TransformMonomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &TransformSeries) -> TransformSeries {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &TransformSeries) -> TransformSeries {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), -c.clone());
        }
        out
    }

    /// Multiplies by `s^k`.
    pub fn mul_s(&self, k: LinExp) -> TransformSeries {
        let mut out = TransformSeries::zero();
        for (m, c) in &self.terms {
            out.insert(TransformMonomial { xpow: m.xpow, spow: m.spow - k, gamma: m.gamma.clone() }, c.clone());
        }
        out
    }

    /// Value at real `s > 0`, for cross-checks against quadrature.
    pub fn eval(&self, x: f64, s: f64, beta: f64) -> Result<f64> {
        let mut sum = 0.0;
        for (m, c) in &self.terms {
            let c: f64 = num_traits::ToPrimitive::to_f64(c).unwrap_or(f64::NAN);
            sum += c * x.powi(m.xpow) * s.powf(-m.spow.value(beta)) * m.gamma.eval(beta)?;
        }
        Ok(sum)
    }
}

impl fmt::Display for TransformSeries {
    /// One term per line: `coeff * x^m / s^(a+b*B) * G(args)/G(args)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{c} * x^{} / s^({}) * {}", m.xpow, m.spow, m.gamma)?;
        }
        Ok(())
    }
}

/// Forward transform of a series with non-negative integer t-powers:
/// `tⁿ ↦ n!/s^(n+2)`.
///
/// # Errors
/// [`Error::NonIntegerExponent`] for any other t-power.
pub fn aboodh(s: &Series) -> Result<TransformSeries> {
    for (m, _) in s.iter() {
        match m.tpow.as_integer() {
            Some(n) if n >= 0 => {}
            _ => return Err(Error::NonIntegerExponent(m.tpow.to_string())),
        }
    }
    aboodh_general(s)
}

/// `t^γ ↦ Γ(γ+1)/s^(γ+2)`, valid for any `γ > −1`.
pub(crate) fn aboodh_general(s: &Series) -> Result<TransformSeries> {
    let mut out = TransformSeries::zero();
    for (m, c) in s.iter() {
        let g1 = m.tpow.add_const(1);
        if !g1.is_positive_on_unit() {
            return Err(Error::InvalidExponent(format!("transform of t^({}) does not exist", m.tpow)));
        }
        let (factor, gamma) = m.gamma.extended(&[g1], &[]);
        out.insert(TransformMonomial { xpow: m.xpow, spow: m.tpow.add_const(2), gamma }, c * factor);
    }
    Ok(out)
}

/// Inverse transform, `1/s^p ↦ t^(p−2)/Γ(p−1)`.
///
/// # Errors
/// [`Error::InvalidSPower`] if some `p` drops below 2 on (0, 1].
pub fn aboodh_inverse(ts: &TransformSeries) -> Result<Series> {
    let mut out = Series::zero();
    for (m, c) in ts.iter() {
        let tpow = m.spow.add_const(-2);
        if !tpow.is_nonnegative_on_unit() {
            return Err(Error::InvalidSPower(m.spow.to_string()));
        }
        let (factor, gamma) = m.gamma.extended(&[], &[m.spow.add_const(-1)]);
        out.insert(Monomial { xpow: m.xpow, tpow, gamma }, c * factor);
    }
    Ok(out)
}

/// `A[∂ⁿu/∂tⁿ] = sⁿ U − Σ_{j<n} u⁽ʲ⁾(0) / s^(2−n+j)`.
///
/// `initial[j]` is the t-free series `∂ʲu/∂tʲ` at `t = 0`.
pub fn aboodh_derivative_rule(n: usize, initial: &[Series], u: &TransformSeries) -> Result<TransformSeries> {
    if n == 0 {
        return Err(Error::InvalidArgument("derivative order must be at least 1".into()));
    }
    if initial.len() < n {
        return Err(Error::MissingInitialData { order: n, given: initial.len() });
    }
    let n_i = n as i64;
    let mut out = u.mul_s(LinExp::from(n_i));
    for (j, init) in initial.iter().take(n).enumerate() {
        if !init.is_t_free() {
            return Err(Error::InvalidArgument(format!("initial series {j} depends on t")));
        }
        let spow = LinExp::from(2 - n_i + j as i64);
        for (m, c) in init.iter() {
            out.insert(TransformMonomial { xpow: m.xpow, spow, gamma: m.gamma.clone() }, -c.clone());
        }
    }
    Ok(out)
}

/// `A⁻¹[s^(−μ) A[·]]`, evaluated through the transform domain. Equal to
/// [`crate::ops::rl_integral`] on admissible series.
pub fn composite_fractional_integral(s: &Series, order: FracOrder) -> Result<Series> {
    aboodh_inverse(&aboodh_general(s)?.mul_s(-order.mu()))
}
