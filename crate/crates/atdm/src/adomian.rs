//! Multilinear nonlinearities and their Adomian polynomials.

use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::Series;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Var {
    U,
    V,
}

impl std::fmt::Display for Var {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Var::U => "u",
            Var::V => "v",
        })
    }
}

impl std::str::FromStr for Var {
    type Err = Error;
    fn from_str(s: &str) -> Result<Var> {
        match s.trim() {
            "u" | "U" => Ok(Var::U),
            "v" | "V" => Ok(Var::V),
            other => Err(Error::Parse(format!("unknown variable '{other}'"))),
        }
    }
}

/// `∂ₓ^dx ∂ₜ^dt w` for one of the unknowns.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DerivFactor {
    pub var: Var,
    #[serde(default)]
    pub dx: u32,
    #[serde(default)]
    pub dt: u32,
}

impl DerivFactor {
    pub fn new(var: Var, dx: u32, dt: u32) -> Self {
        DerivFactor { var, dx, dt }
    }

    /// Time derivatives first, then space (the two commute on this term class).
    pub fn apply(&self, w: &Series) -> Series {
        let mut out = w.clone();
        for _ in 0..self.dt {
            out = out.diff_t();
        }
        for _ in 0..self.dx {
            out = out.diff_x();
        }
        out
    }

    fn pick<'a>(&self, u: &'a [Series], v: &'a [Series]) -> &'a [Series] {
        match self.var {
            Var::U => u,
            Var::V => v,
        }
    }
}

/// `scale · Π factors`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Product {
    #[serde(with = "crate::problem::rational_text")]
    pub scale: BigRational,
    pub factors: Vec<DerivFactor>,
}

impl Product {
    pub fn new(factors: Vec<DerivFactor>) -> Self {
        Product { scale: BigRational::one(), factors }
    }

    pub fn scaled(scale: BigRational, factors: Vec<DerivFactor>) -> Self {
        Product { scale, factors }
    }
}

/// A sum of products of derivative factors.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NonlinearitySpec {
    pub products: Vec<Product>,
}

impl NonlinearitySpec {
    pub fn new(products: Vec<Product>) -> Self {
        NonlinearitySpec { products }
    }

    /// A single unit-scale product.
    pub fn single(factors: Vec<DerivFactor>) -> Self {
        NonlinearitySpec { products: vec![Product::new(factors)] }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, p) in self.products.iter().enumerate() {
            if p.factors.len() < 2 {
                return Err(Error::InvalidSpec(format!(
                    "nonlinear product {i} has {} factor(s); linear terms belong in the linear operator",
                    p.factors.len()
                )));
            }
            if p.factors.iter().any(|f| f.dx > 2 || f.dt > 1) {
                return Err(Error::InvalidSpec(format!("nonlinear product {i} exceeds derivative orders dx <= 2, dt <= 1")));
            }
        }
        Ok(())
    }

    /// Direct substitution `N(u, v)`.
    pub fn evaluate(&self, u: &Series, v: &Series) -> Series {
        let mut out = Series::zero();
        for p in &self.products {
            let mut acc = Series::constant(p.scale.clone());
            for f in &p.factors {
                let w = match f.var {
                    Var::U => u,
                    Var::V => v,
                };
                acc = &acc * &f.apply(w);
            }
            out += &acc;
        }
        out
    }
}

/// All compositions `k₁ + … + k_m = n` into non-negative parts, in
/// lexicographic order.
pub fn compositions(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, m: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if m == 1 {
            prefix.push(n);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in 0..=n {
            prefix.push(k);
            rec(n - k, m - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(n, m, &mut Vec::with_capacity(m), &mut out);
    out
}

/// One summand of `Aₙ`: `scale · Π D_i(w_{k_i})`.
#[derive(Clone, Debug, PartialEq)]
pub struct AdomianSummand {
    pub scale: BigRational,
    pub factors: Vec<(DerivFactor, usize)>,
}

/// Symbolic listing of the summands of `Aₙ`, in deterministic order.
pub fn adomian_summands(spec: &NonlinearitySpec, n: usize) -> Vec<AdomianSummand> {
    let mut out = Vec::new();
    for p in &spec.products {
        for ks in compositions(n, p.factors.len()) {
            out.push(AdomianSummand { scale: p.scale.clone(), factors: p.factors.iter().copied().zip(ks).collect() });
        }
    }
    out
}

fn check_lengths(u: &[Series], v: &[Series], n: usize) -> Result<()> {
    let available = u.len().min(v.len());
    if available < n + 1 {
        return Err(Error::InsufficientComponents { needed: n + 1, available });
    }
    Ok(())
}

/// `Aₙ` from the composition-indexed convolution formula.
///
/// # Errors
/// [`Error::InsufficientComponents`] if fewer than `n + 1` components of either
/// unknown are supplied.
pub fn adomian_poly(spec: &NonlinearitySpec, u: &[Series], v: &[Series], n: usize) -> Result<Series> {
    check_lengths(u, v, n)?;
    let mut out = Series::zero();
    for p in &spec.products {
        // Derivatives of components 0..=n, one table per factor.
        let tables: Vec<Vec<Series>> =
            p.factors.iter().map(|f| f.pick(u, v)[..=n].iter().map(|w| f.apply(w)).collect()).collect();
        for ks in compositions(n, p.factors.len()) {
            if ks.iter().zip(&tables).any(|(&k, t)| t[k].is_zero()) {
                continue;
            }
            let mut acc = Series::constant(p.scale.clone());
            for (&k, t) in ks.iter().zip(&tables) {
                acc = &acc * &t[k];
            }
            out += &acc;
        }
    }
    Ok(out)
}

/// `N(Σ ℘ᵏ u_k, Σ ℘ᵏ v_k)` for `k ≤ n_max`, fully expanded and graded by
/// powers of ℘. Entry `d` is the coefficient of `℘ᵈ`.
pub fn graded_expansion(spec: &NonlinearitySpec, u: &[Series], v: &[Series], n_max: usize) -> Result<Vec<Series>> {
    check_lengths(u, v, n_max)?;
    let max_factors = spec.products.iter().map(|p| p.factors.len()).max().unwrap_or(0);
    let mut total = vec![Series::zero(); n_max * max_factors + 1];
    for p in &spec.products {
        let mut poly: Vec<Series> = vec![Series::constant(p.scale.clone())];
        for f in &p.factors {
            let w = f.pick(u, v);
            let factor: Vec<Series> = (0..=n_max).map(|k| f.apply(&w[k])).collect();
            let mut next = vec![Series::zero(); poly.len() + n_max];
            for (i, a) in poly.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, b) in factor.iter().enumerate() {
                    if !b.is_zero() {
                        next[i + k] += &(a * b);
                    }
                }
            }
            poly = next;
        }
        for (d, s) in poly.into_iter().enumerate() {
            total[d] += &s;
        }
    }
    Ok(total)
}

/// `Aₙ` as the ℘ⁿ coefficient of the formal expansion; an independent check
/// on [`adomian_poly`].
pub fn adomian_oracle(spec: &NonlinearitySpec, u: &[Series], v: &[Series], n: usize) -> Result<Series> {
    let graded = graded_expansion(spec, u, v, n)?;
    Ok(graded.into_iter().nth(n).unwrap_or_default())
}
