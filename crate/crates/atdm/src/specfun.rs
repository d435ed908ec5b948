//! Gamma-function ratios with arguments linear in β, and the Mittag-Leffler function.

use crate::error::{Error, Result};
use crate::linexp::LinExp;

/// Largest integer shift between paired arguments evaluated as a finite product.
const MAX_PAIR_SHIFT: i64 = 64;

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> f64 {
    libm::lgamma(x)
}

/// A Gamma ratio split as `prod · exp(ln_rest)`.
///
/// Arguments in numerator and denominator that differ by an integer (and share
/// their β-coefficient) are turned into rising products, which is exact up to
/// rounding. Only the unpaired remainder goes through ln Γ.
struct Split {
    prod: f64,
    ln_rest: f64,
}

impl Split {
    fn ln(&self) -> f64 {
        self.prod.ln() + self.ln_rest
    }

    fn value(&self) -> f64 {
        self.prod * self.ln_rest.exp()
    }
}

fn check_args(args: &[LinExp], beta: f64) -> Result<()> {
    for g in args {
        let v = g.value(beta);
        if !(v > 0.0) {
            return Err(Error::NonPositiveGammaArgument { arg: g.to_string(), beta });
        }
    }
    Ok(())
}

fn split(numerators: &[LinExp], denominators: &[LinExp], beta: f64) -> Result<Split> {
    check_args(numerators, beta)?;
    check_args(denominators, beta)?;

    let mut den: Vec<Option<LinExp>> = denominators.iter().copied().map(Some).collect();
    let mut prod = 1.0f64;
    let mut ln_rest = 0.0f64;

    let absorb = |prod: &mut f64, ln_rest: &mut f64| {
        if !(1e-200..=1e200).contains(&prod.abs()) {
            *ln_rest += prod.ln();
            *prod = 1.0;
        }
    };

    for n in numerators {
        let partner = den.iter().position(|d| match d {
            Some(d) if d.b == n.b => {
                let k = n.a - d.a;
                k.is_integer() && k.to_integer().abs() <= MAX_PAIR_SHIFT
            }
            _ => false,
        });
        match partner {
            Some(i) => {
                let d = den[i].take().expect("paired slot");
                let k = (n.a - d.a).to_integer();
                if k > 0 {
                    // Γ(d+k)/Γ(d) = d (d+1) ... (d+k-1)
                    let base = d.value(beta);
                    for i in 0..k {
                        prod *= base + i as f64;
                    }
                } else if k < 0 {
                    let base = n.value(beta);
                    for i in 0..(-k) {
                        prod /= base + i as f64;
                    }
                }
                absorb(&mut prod, &mut ln_rest);
            }
            None => ln_rest += ln_gamma(n.value(beta)),
        }
    }
    for d in den.into_iter().flatten() {
        ln_rest -= ln_gamma(d.value(beta));
    }
    Ok(Split { prod, ln_rest })
}

/// `ΠΓ(numerators) / ΠΓ(denominators)` at the given β.
///
/// # Errors
/// [`Error::NonPositiveGammaArgument`] if any argument is ≤ 0 at `beta`.
pub fn gamma_ratio(numerators: &[LinExp], denominators: &[LinExp], beta: f64) -> Result<f64> {
    Ok(split(numerators, denominators, beta)?.value())
}

/// Natural logarithm of [`gamma_ratio`]; stays finite when the ratio itself
/// overflows or underflows.
pub fn ln_gamma_ratio(numerators: &[LinExp], denominators: &[LinExp], beta: f64) -> Result<f64> {
    Ok(split(numerators, denominators, beta)?.ln())
}

/// Summation limits for [`mittag_leffler_with`].
#[derive(Clone, Copy, Debug)]
pub struct MittagLefflerConfig {
    pub max_terms: usize,
}

impl Default for MittagLefflerConfig {
    fn default() -> Self {
        MittagLefflerConfig { max_terms: 10_000 }
    }
}

/// One-parameter Mittag-Leffler function `E_β(x) = Σ x^j / Γ(βj + 1)`.
pub fn mittag_leffler(beta: f64, x: f64, tol: f64) -> Result<f64> {
    mittag_leffler_with(beta, x, tol, MittagLefflerConfig::default())
}

/// [`mittag_leffler`] with an explicit term cap.
///
/// Terms are formed in log space and accumulated with compensated summation.
/// Summation stops once the next term is below `tol` in magnitude and the
/// geometric tail bound built from the current term ratio is below `tol` too.
pub fn mittag_leffler_with(beta: f64, x: f64, tol: f64, cfg: MittagLefflerConfig) -> Result<f64> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidArgument(format!("Mittag-Leffler order must be positive, got {beta}")));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {tol}")));
    }
    if x == 0.0 {
        return Ok(1.0);
    }
    let ln_x = x.abs().ln();
    let term = |j: usize| -> f64 {
        let mag = (j as f64 * ln_x - ln_gamma(beta * j as f64 + 1.0)).exp();
        if x < 0.0 && j % 2 == 1 {
            -mag
        } else {
            mag
        }
    };

    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut current = term(0);
    for j in 0..cfg.max_terms {
        let t = sum + current;
        comp += if sum.abs() >= current.abs() { (sum - t) + current } else { (current - t) + sum };
        sum = t;

        let next = term(j + 1);
        let ratio = if current != 0.0 { (next / current).abs() } else { 0.0 };
        if next.abs() < tol && ratio < 1.0 {
            let tail = next.abs() / (1.0 - ratio);
            if tail < tol {
                return Ok(sum + comp + next);
            }
        }
        current = next;
    }
    Err(Error::NoConvergence { terms: cfg.max_terms })
}
