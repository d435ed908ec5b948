//! The decomposition recurrence for coupled two-unknown systems.
//!
//! Systems are written in normal form
//!
//! ```text
//! D^(β+1) u = Σ linear_u + Σ nonlinear_u + source_u
//! D^β     v = Σ linear_v + Σ nonlinear_v + source_v
//! ```
//!
//! with `u(x,0) = f0`, `u_t(x,0) = f1`, `v(x,0) = g0`. Each new component is
//! the fractional integral of the right-hand side evaluated on the previous
//! components, nonlinear parts entering through Adomian polynomials.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};

use crate::adomian::{adomian_poly, DerivFactor, NonlinearitySpec, Var};
use crate::error::{Error, Result};
use crate::linexp::LinExp;
use crate::ops::{caputo, caputo_with, rl_integral, FracOrder};
use crate::series::Series;

/// Outer operator wrapped around a linear term or a nonlinearity.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OuterOp {
    #[default]
    #[serde(rename = "none")]
    None,
    /// `∂ₓ w`
    #[serde(rename = "dx")]
    Dx,
    /// `(1/x) ∂ₓ(x w) = w_x + w/x`
    #[serde(rename = "div_x_x")]
    DivXX,
    /// `(1/x²) ∂ₓ(x² w_x) = w_xx + (2/x) w_x`
    #[serde(rename = "div_x2_x2")]
    DivX2X2,
}

impl OuterOp {
    pub fn apply(&self, w: &Series) -> Series {
        match self {
            OuterOp::None => w.clone(),
            OuterOp::Dx => w.diff_x(),
            OuterOp::DivXX => &w.diff_x() + &w.mul_xpow(-1),
            OuterOp::DivX2X2 => {
                let wx = w.diff_x();
                &wx.diff_x() + &wx.mul_xpow(-1).scale_int(2)
            }
        }
    }
}

/// `coeff(x) · form(∂ₓ^dx ∂ₜ^dt w)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearTermSpec {
    pub coeff: Series,
    pub var: Var,
    #[serde(default)]
    pub dx: u32,
    #[serde(default)]
    pub dt: u32,
    #[serde(default)]
    pub form: OuterOp,
}

impl LinearTermSpec {
    pub fn new(coeff: Series, var: Var, dx: u32, dt: u32, form: OuterOp) -> Self {
        LinearTermSpec { coeff, var, dx, dt, form }
    }

    pub fn apply(&self, u: &Series, v: &Series) -> Series {
        let w = match self.var {
            Var::U => u,
            Var::V => v,
        };
        let inner = DerivFactor::new(self.var, self.dx, self.dt).apply(w);
        &self.coeff * &self.form.apply(&inner)
    }
}

/// A nonlinearity with an optional outer operator, e.g. `∂ₓ(v u_x)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonlinearTerm {
    #[serde(default)]
    pub form: OuterOp,
    #[serde(flatten)]
    pub spec: NonlinearitySpec,
}

impl NonlinearTerm {
    pub fn new(form: OuterOp, spec: NonlinearitySpec) -> Self {
        NonlinearTerm { form, spec }
    }
}

/// Where the integrated sources enter the decomposition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SourcePlacement {
    /// `J^μ[source]` is part of the zeroth component.
    #[serde(rename = "in_w0")]
    InW0,
    /// The source is added to the right-hand side of the first step.
    #[default]
    #[serde(rename = "in_w1")]
    InW1,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub name: String,
    #[serde(default = "order_u")]
    pub u_order: FracOrder,
    #[serde(default = "order_v")]
    pub v_order: FracOrder,
    #[serde(default)]
    pub f0: Series,
    #[serde(default)]
    pub f1: Series,
    #[serde(default)]
    pub g0: Series,
    #[serde(default)]
    pub source_u: Series,
    #[serde(default)]
    pub source_v: Series,
    #[serde(default)]
    pub linear_u: Vec<LinearTermSpec>,
    #[serde(default)]
    pub linear_v: Vec<LinearTermSpec>,
    #[serde(default)]
    pub nonlinear_u: Vec<NonlinearTerm>,
    #[serde(default)]
    pub nonlinear_v: Vec<NonlinearTerm>,
    #[serde(default)]
    pub source_placement: SourcePlacement,
}

fn order_u() -> FracOrder {
    FracOrder::BetaPlusOne
}

fn order_v() -> FracOrder {
    FracOrder::Beta
}

impl ProblemSpec {
    /// A problem with zero data and no operators.
    pub fn empty(name: &str) -> Self {
        ProblemSpec {
            name: name.to_string(),
            u_order: order_u(),
            v_order: order_v(),
            f0: Series::zero(),
            f1: Series::zero(),
            g0: Series::zero(),
            source_u: Series::zero(),
            source_v: Series::zero(),
            linear_u: Vec::new(),
            linear_v: Vec::new(),
            nonlinear_u: Vec::new(),
            nonlinear_v: Vec::new(),
            source_placement: SourcePlacement::InW1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.u_order != FracOrder::BetaPlusOne || self.v_order != FracOrder::Beta {
            return Err(Error::InvalidSpec("u must have order beta+1 and v order beta".into()));
        }
        for (name, s) in [("f0", &self.f0), ("f1", &self.f1), ("g0", &self.g0)] {
            if !s.is_t_free() {
                return Err(Error::InvalidSpec(format!("initial data {name} must not depend on t")));
            }
        }
        for (name, s) in [("source_u", &self.source_u), ("source_v", &self.source_v)] {
            if !s.is_admissible() {
                return Err(Error::InvalidSpec(format!("{name} has a negative t-power or invalid Gamma argument")));
            }
        }
        for l in self.linear_u.iter().chain(&self.linear_v) {
            if !l.coeff.is_t_free() {
                return Err(Error::InvalidSpec("linear coefficients must not depend on t".into()));
            }
            if l.dx > 2 || l.dt > 1 {
                return Err(Error::InvalidSpec("linear terms allow dx <= 2 and dt <= 1".into()));
            }
        }
        for n in self.nonlinear_u.iter().chain(&self.nonlinear_v) {
            n.spec.validate()?;
        }
        Ok(())
    }
}

/// Components `u_0, u_1, …` and `v_0, v_1, …`; the solution is their sum.
#[derive(Clone, Debug, PartialEq)]
pub struct ComponentSolution {
    pub u: Vec<Series>,
    pub v: Vec<Series>,
    pub u_order: FracOrder,
    pub v_order: FracOrder,
    /// Components are generic in β (no value substituted).
    pub beta_symbolic: bool,
}

impl ComponentSolution {
    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    fn check(&self, n: usize) -> Result<()> {
        if n > self.len() {
            return Err(Error::InsufficientComponents { needed: n, available: self.len() });
        }
        Ok(())
    }

    /// `Σ_{j<n} u_j` as a series.
    pub fn prefix_u(&self, n: usize) -> Result<Series> {
        self.check(n)?;
        Ok(self.u[..n].iter().sum())
    }

    pub fn prefix_v(&self, n: usize) -> Result<Series> {
        self.check(n)?;
        Ok(self.v[..n].iter().sum())
    }
}

fn in_w0(spec: &ProblemSpec) -> bool {
    spec.source_placement == SourcePlacement::InW0
}

/// `u₀ = f0 + t·f1`, `v₀ = g0`, plus the integrated sources for `in_w0`.
pub fn initial_components(spec: &ProblemSpec) -> Result<(Series, Series)> {
    let mut u0 = &spec.f0 + &spec.f1.mul_tpow(LinExp::one());
    let mut v0 = spec.g0.clone();
    if in_w0(spec) {
        u0 += &rl_integral(&spec.source_u, spec.u_order)?;
        v0 += &rl_integral(&spec.source_v, spec.v_order)?;
    }
    Ok((u0, v0))
}

fn rhs_component(
    linear: &[LinearTermSpec],
    nonlinear: &[NonlinearTerm],
    u: &[Series],
    v: &[Series],
    j: usize,
) -> Result<Series> {
    let mut rhs = Series::zero();
    for l in linear {
        rhs += &l.apply(&u[j], &v[j]);
    }
    for n in nonlinear {
        rhs += &n.form.apply(&adomian_poly(&n.spec, &u[..=j], &v[..=j], j)?);
    }
    Ok(rhs)
}

fn admissible_or_divergent(s: &Series, component: usize) -> Result<()> {
    if s.is_admissible() {
        return Ok(());
    }
    let bad = s
        .iter()
        .find(|(m, _)| !(m.tpow.is_nonnegative_on_unit() && m.gamma.is_admissible()))
        .map(|(m, _)| format!("t^({}) * {}", m.tpow, m.gamma))
        .unwrap_or_default();
    Err(Error::DivergentComponent { component, detail: bad })
}

/// Components `j + 1` of both unknowns from components `0..=j`.
pub fn next_components(spec: &ProblemSpec, current: &ComponentSolution, j: usize) -> Result<(Series, Series)> {
    if current.len() < j + 1 {
        return Err(Error::InsufficientComponents { needed: j + 1, available: current.len() });
    }
    let (u, v) = (&current.u, &current.v);
    let mut ru = rhs_component(&spec.linear_u, &spec.nonlinear_u, u, v, j)?;
    let mut rv = rhs_component(&spec.linear_v, &spec.nonlinear_v, u, v, j)?;
    if j == 0 && !in_w0(spec) {
        ru += &spec.source_u;
        rv += &spec.source_v;
    }
    admissible_or_divergent(&ru, j + 1)?;
    admissible_or_divergent(&rv, j + 1)?;
    let wrap = |e: Error| match e {
        Error::InvalidExponent(detail) => Error::DivergentComponent { component: j + 1, detail },
        other => other,
    };
    Ok((rl_integral(&ru, spec.u_order).map_err(wrap)?, rl_integral(&rv, spec.v_order).map_err(wrap)?))
}

/// The first `n_components` components of both unknowns.
pub fn solve(spec: &ProblemSpec, n_components: usize) -> Result<ComponentSolution> {
    if n_components == 0 {
        return Err(Error::InvalidArgument("at least one component is required".into()));
    }
    spec.validate()?;
    let (u0, v0) = initial_components(spec)?;
    let mut sol = ComponentSolution {
        u: vec![u0],
        v: vec![v0],
        u_order: spec.u_order,
        v_order: spec.v_order,
        beta_symbolic: true,
    };
    for j in 0..n_components - 1 {
        let (un, vn) = next_components(spec, &sol, j)?;
        sol.u.push(un);
        sol.v.push(vn);
    }
    Ok(sol)
}

/// `(Σ_{j<n} u_j, Σ_{j<n} v_j)` at a point.
pub fn truncated_eval(sol: &ComponentSolution, n: usize, x: f64, t: f64, beta: f64) -> Result<(f64, f64)> {
    sol.check(n)?;
    let mut u = 0.0;
    let mut v = 0.0;
    for j in 0..n {
        u += sol.u[j].eval(x, t, beta)?;
        v += sol.v[j].eval(x, t, beta)?;
    }
    Ok((u, v))
}

/// Symbolic residuals `D^μ w − RHS(u, v)` of both equations for given `u`, `v`.
pub fn residual_series(spec: &ProblemSpec, u: &Series, v: &Series) -> Result<(Series, Series)> {
    residual_with(spec, u, v, caputo)
}

/// [`residual_series`] with β replaced by a rational value throughout, so
/// that a residual which vanishes identically collects to the empty series.
pub fn residual_series_at(spec: &ProblemSpec, u: &Series, v: &Series, beta: Rational64) -> Result<(Series, Series)> {
    let u = u.substitute_beta(beta);
    let v = v.substitute_beta(beta);
    let (ru, rv) = residual_with(spec, &u, &v, |s, o| caputo_with(s, o.mu().substitute(beta), o.ceiling()))?;
    Ok((ru.substitute_beta(beta), rv.substitute_beta(beta)))
}

fn residual_with<F>(spec: &ProblemSpec, u: &Series, v: &Series, deriv: F) -> Result<(Series, Series)>
where
    F: Fn(&Series, FracOrder) -> Result<Series>,
{
    let side = |linear: &[LinearTermSpec], nonlinear: &[NonlinearTerm], source: &Series| {
        let mut rhs = source.clone();
        for l in linear {
            rhs += &l.apply(u, v);
        }
        for n in nonlinear {
            rhs += &n.form.apply(&n.spec.evaluate(u, v));
        }
        rhs
    };
    let ru = &deriv(u, spec.u_order)? - &side(&spec.linear_u, &spec.nonlinear_u, &spec.source_u);
    let rv = &deriv(v, spec.v_order)? - &side(&spec.linear_v, &spec.nonlinear_v, &spec.source_v);
    Ok((ru, rv))
}

/// Absolute residuals of the `n`-term truncation at a point.
pub fn residual(spec: &ProblemSpec, sol: &ComponentSolution, n: usize, x: f64, t: f64, beta: f64) -> Result<(f64, f64)> {
    let (ru, rv) = residual_series(spec, &sol.prefix_u(n)?, &sol.prefix_v(n)?)?;
    Ok((ru.eval(x, t, beta)?.abs(), rv.eval(x, t, beta)?.abs()))
}
