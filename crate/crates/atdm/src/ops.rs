//! Riemann–Liouville integral and Caputo derivative on [`Series`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linexp::LinExp;
use crate::series::{Monomial, Series};

/// The two fractional orders used by the systems: `β` and `β + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FracOrder {
    #[serde(rename = "beta")]
    Beta,
    #[serde(rename = "beta+1")]
    BetaPlusOne,
}

impl FracOrder {
    pub fn mu(self) -> LinExp {
        match self {
            FracOrder::Beta => LinExp::ints(0, 1),
            FracOrder::BetaPlusOne => LinExp::ints(1, 1),
        }
    }

    /// Smallest integer ≥ μ on (0, 1].
    pub fn ceiling(self) -> u32 {
        match self {
            FracOrder::Beta => 1,
            FracOrder::BetaPlusOne => 2,
        }
    }
}

impl From<FracOrder> for LinExp {
    fn from(o: FracOrder) -> LinExp {
        o.mu()
    }
}

impl std::fmt::Display for FracOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FracOrder::Beta => write!(f, "beta"),
            FracOrder::BetaPlusOne => write!(f, "beta+1"),
        }
    }
}

/// `J^μ`: `t^γ ↦ Γ(γ+1)/Γ(γ+1+μ) · t^(γ+μ)`, term by term.
///
/// # Errors
/// [`Error::InvalidExponent`] if `μ` is not positive on (0, 1] or a term's
/// `γ + 1` is not.
pub fn rl_integral(s: &Series, mu: impl Into<LinExp>) -> Result<Series> {
    let mu = mu.into();
    if mu.is_zero() {
        return Ok(s.clone());
    }
    if !mu.is_positive_on_unit() {
        return Err(Error::InvalidExponent(format!("integral order {mu} is not positive on (0,1]")));
    }
    let mut out = Series::zero();
    for (m, c) in s.iter() {
        let g1 = m.tpow.add_const(1);
        if !g1.is_positive_on_unit() {
            return Err(Error::InvalidExponent(format!("J^({mu}) of t^({}) diverges at t = 0", m.tpow)));
        }
        let (factor, gamma) = m.gamma.extended(&[g1], &[g1 + mu]);
        out.insert(Monomial { xpow: m.xpow, tpow: m.tpow + mu, gamma }, c * factor);
    }
    Ok(out)
}

/// Caputo derivative of order β or β + 1.
///
/// Integer powers `t^n` with `n` below the ceiling are annihilated; every other
/// term maps as `t^γ ↦ Γ(γ+1)/Γ(γ+1−μ) · t^(γ−μ)`.
///
/// # Errors
/// [`Error::InvalidExponent`] if the result would need a Gamma argument that is
/// not positive on (0, 1] (the derivative does not exist for that input).
pub fn caputo(s: &Series, order: FracOrder) -> Result<Series> {
    caputo_with(s, order.mu(), order.ceiling())
}

pub(crate) fn caputo_with(s: &Series, mu: LinExp, ceiling: u32) -> Result<Series> {
    let mut out = Series::zero();
    for (m, c) in s.iter() {
        if let Some(n) = m.tpow.as_integer() {
            if (0..i64::from(ceiling)).contains(&n) {
                continue;
            }
        }
        let g1 = m.tpow.add_const(1);
        let lowered = g1 - mu;
        if !g1.is_positive_on_unit() || !lowered.is_positive_on_unit() {
            return Err(Error::InvalidExponent(format!(
                "Caputo derivative of order {mu} of t^({}) is not defined",
                m.tpow
            )));
        }
        let (factor, gamma) = m.gamma.extended(&[g1], &[lowered]);
        out.insert(Monomial { xpow: m.xpow, tpow: m.tpow - mu, gamma }, c * factor);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    use crate::series::Term;

    fn le(a: i64, b: i64) -> LinExp {
        LinExp::ints(a, b)
    }

    #[test]
    fn ordinary_integral_at_beta_one() {
        let j = rl_integral(&Series::mono(1, 0, le(1, 0)), FracOrder::Beta).unwrap();
        assert!((j.eval(2.0, 0.6, 1.0).unwrap() - 0.18).abs() < 1e-14);
    }

    #[test]
    fn integral_examples() {
        let j = rl_integral(&Series::mono(2, 2, le(2, 0)), FracOrder::BetaPlusOne).unwrap();
        let expected = Series::from_term(Term::new(BigRational::from_integer(BigInt::from(4)), 2, le(3, 1)).with_gamma(vec![], vec![le(4, 1)]));
        assert_eq!(j, expected);
        let j = rl_integral(&Series::mono(3, 2, LinExp::zero()), FracOrder::Beta).unwrap();
        let expected = Series::from_term(Term::new(BigRational::from_integer(BigInt::from(3)), 2, le(0, 1)).with_gamma(vec![], vec![le(1, 1)]));
        assert_eq!(j, expected);
    }

    #[test]
    fn integral_rejects_bad_input() {
        assert!(rl_integral(&Series::mono(1, 0, le(-1, 0)), FracOrder::Beta).is_err());
        assert!(rl_integral(&Series::mono(1, 0, le(0, 0)), le(1, -1)).is_err());
        assert_eq!(rl_integral(&Series::mono(1, 0, le(1, 0)), LinExp::zero()).unwrap(), Series::mono(1, 0, le(1, 0)));
    }

    #[test]
    fn caputo_annihilates_low_powers() {
        assert!(caputo(&Series::from_int(5), FracOrder::Beta).unwrap().is_zero());
        assert!(caputo(&Series::mono(1, 2, le(1, 0)), FracOrder::BetaPlusOne).unwrap().is_zero());
        let d = caputo(&Series::mono(1, 0, le(2, 0)), FracOrder::Beta).unwrap();
        assert!((d.eval(1.0, 0.4, 1.0).unwrap() - 0.8).abs() < 1e-14);
        assert!(!caputo(&Series::mono(1, 0, le(1, 0)), FracOrder::Beta).unwrap().is_zero());
    }

    #[test]
    fn caputo_rejects_divergent_input() {
        let e = caputo(&Series::mono(1, 0, le(0, 1)), FracOrder::BetaPlusOne).unwrap_err();
        assert!(matches!(e, Error::InvalidExponent(_)));
    }

    #[test]
    fn order_classes() {
        assert_eq!(FracOrder::Beta.ceiling(), 1);
        assert_eq!(FracOrder::BetaPlusOne.ceiling(), 2);
        assert_eq!(LinExp::from(FracOrder::BetaPlusOne), le(1, 1));
        assert_eq!(serde_json::to_string(&FracOrder::BetaPlusOne).unwrap(), "\"beta+1\"");
    }
}
