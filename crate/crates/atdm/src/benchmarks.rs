//! The three coupled thermoelastic benchmarks, their exact solutions, and
//! regeneration of the published error tables.

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::ToPrimitive;
use rayon::prelude::*;

use crate::adomian::Var;
use crate::engine::{solve, ComponentSolution, ProblemSpec};
use crate::error::{Error, Result};
use crate::fixtures::{self, PublishedAeTable, AE_BETAS, COMPARISON_BETAS, L2_JS};
use crate::problem::{spec_hash, ProblemFile};
use crate::series::{Evaluator, LogValue, Series};
use crate::table::{AeRow, ComparisonRow, ErrorTable, GridSpec, L2Row, TableMeta};

pub const EX1_JSON: &str = include_str!("../problems/ex1.json");
pub const EX2_JSON: &str = include_str!("../problems/ex2.json");
pub const EX3_JSON: &str = include_str!("../problems/ex3.json");

/// Largest truncation order tried by [`calibrate_n`].
pub const MAX_CALIBRATION_N: usize = 12;
/// A calibration fails if no order gets below this deviation.
pub const CALIBRATION_THRESHOLD: f64 = 1e-5;
/// Orders whose deviation is within this of the best count as tied; half the
/// printed resolution of the tables.
pub const CALIBRATION_TIE: f64 = 5e-11;
/// Time level of the method comparison.
pub const COMPARISON_T: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BenchmarkId {
    Ex1,
    Ex2,
    Ex3,
}

impl BenchmarkId {
    pub const ALL: [BenchmarkId; 3] = [BenchmarkId::Ex1, BenchmarkId::Ex2, BenchmarkId::Ex3];

    pub fn json(&self) -> &'static str {
        match self {
            BenchmarkId::Ex1 => EX1_JSON,
            BenchmarkId::Ex2 => EX2_JSON,
            BenchmarkId::Ex3 => EX3_JSON,
        }
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchmarkId::Ex1 => "ex1",
            BenchmarkId::Ex2 => "ex2",
            BenchmarkId::Ex3 => "ex3",
        })
    }
}

impl FromStr for BenchmarkId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ex1" => Ok(BenchmarkId::Ex1),
            "ex2" => Ok(BenchmarkId::Ex2),
            "ex3" => Ok(BenchmarkId::Ex3),
            _ => Err(Error::InvalidArgument(format!("unknown benchmark '{s}'"))),
        }
    }
}

/// A problem together with its exact solution and table abscissa.
#[derive(Clone, Debug, PartialEq)]
pub struct Benchmark {
    pub id: BenchmarkId,
    pub spec: ProblemSpec,
    pub exact_u: Series,
    pub exact_v: Series,
    pub table_x: BigRational,
}

impl Benchmark {
    pub fn load(id: BenchmarkId) -> Benchmark {
        let file = ProblemFile::parse(id.json()).expect("builtin problems parse");
        let reference = file.reference.expect("builtin problems carry a reference solution");
        Benchmark {
            id,
            spec: file.spec,
            exact_u: reference.exact_u,
            exact_v: reference.exact_v,
            table_x: reference.table_x.expect("builtin problems carry a table abscissa"),
        }
    }

    pub fn table_x_f64(&self) -> f64 {
        self.table_x.to_f64().unwrap_or(f64::NAN)
    }

    pub fn exact(&self, var: Var) -> &Series {
        match var {
            Var::U => &self.exact_u,
            Var::V => &self.exact_v,
        }
    }
}

/// Printed absolute error of one variable at one time level.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceAe {
    pub variable: Var,
    pub t: f64,
    pub ae: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Calibration {
    pub n: usize,
    pub deviation: f64,
    /// `(N, max deviation)` for every order tried.
    pub scan: Vec<(usize, f64)>,
}

/// Component evaluators at one β, for cheap prefix sums.
struct PrefixEvaluator {
    u: Vec<Evaluator>,
    v: Vec<Evaluator>,
}

impl PrefixEvaluator {
    fn new(sol: &ComponentSolution, n: usize, beta: f64) -> Result<Self> {
        let prep = |c: &[Series]| c[..n].iter().map(|s| s.evaluator(beta)).collect::<Result<Vec<_>>>();
        Ok(PrefixEvaluator { u: prep(&sol.u)?, v: prep(&sol.v)? })
    }

    /// Partial sums of `var` with `1..=n` terms.
    fn partial_sums(&self, var: Var, x: f64, t: f64) -> Result<Vec<f64>> {
        let comps = match var {
            Var::U => &self.u,
            Var::V => &self.v,
        };
        let mut acc = 0.0;
        comps
            .iter()
            .map(|e| {
                acc += e.eval(x, t)?;
                Ok(acc)
            })
            .collect()
    }
}

fn checked_n(sol: &ComponentSolution, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("truncation order must be at least 1".into()));
    }
    if n > sol.len() {
        return Err(Error::InsufficientComponents { needed: n, available: sol.len() });
    }
    Ok(())
}

fn meta(b: &Benchmark, id: &str, n: usize, x: Option<f64>, grid: String) -> TableMeta {
    TableMeta { id: id.into(), benchmark: b.id.to_string(), n_components: n, x, grid, spec_hash: spec_hash(&b.spec) }
}

/// AE rows from already computed components, ordered by variable, t, β.
pub fn ae_rows(b: &Benchmark, sol: &ComponentSolution, betas: &[f64], ts: &[f64], n: usize) -> Result<Vec<AeRow>> {
    checked_n(sol, n)?;
    let x = b.table_x_f64();
    let per_beta: Vec<Vec<(Var, f64, f64, f64, f64)>> = betas
        .par_iter()
        .map(|&beta| {
            let pe = PrefixEvaluator::new(sol, n, beta)?;
            let mut out = Vec::new();
            for var in [Var::U, Var::V] {
                for &t in ts {
                    let approx = pe.partial_sums(var, x, t)?[n - 1];
                    out.push((var, t, beta, b.exact(var).eval(x, t, beta)?, approx));
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::with_capacity(betas.len() * ts.len() * 2);
    for var in [Var::U, Var::V] {
        for &t in ts {
            for cells in &per_beta {
                for &(v, tt, beta, exact, approx) in cells {
                    if v == var && tt == t {
                        rows.push(AeRow { variable: var, x, t, beta, exact, approx, reference_ae: None });
                    }
                }
            }
        }
    }
    Ok(rows)
}

/// `|exact − Σ_{j<N} w_j|` at the table abscissa for every (variable, t, β).
pub fn absolute_error_table(b: &Benchmark, betas: &[f64], ts: &[f64], n: usize) -> Result<ErrorTable> {
    if ts.iter().any(|t| !(0.0..=0.35 + 1e-12).contains(t)) {
        return Err(Error::InvalidArgument("time levels must lie in [0, 0.35]".into()));
    }
    let sol = solve(&b.spec, n.max(1))?;
    let rows = ae_rows(b, &sol, betas, ts, n)?;
    let grid = format!("t in {ts:?}, beta in {betas:?}");
    Ok(ErrorTable { meta: meta(b, "absolute_error", n, Some(b.table_x_f64()), grid), rows, ..Default::default() })
}

/// Largest deviation of computed β = 1 errors from the reference, for every
/// truncation order `1..=sol.len()`.
pub fn deviation_scan(b: &Benchmark, sol: &ComponentSolution, reference: &[ReferenceAe]) -> Result<Vec<(usize, f64)>> {
    let x = b.table_x_f64();
    let pe = PrefixEvaluator::new(sol, sol.len(), 1.0)?;
    let mut worst = vec![0.0f64; sol.len()];
    for r in reference {
        let exact = b.exact(r.variable).eval(x, r.t, 1.0)?;
        for (k, s) in pe.partial_sums(r.variable, x, r.t)?.into_iter().enumerate() {
            worst[k] = worst[k].max(((exact - s).abs() - r.ae).abs());
        }
    }
    Ok(worst.into_iter().enumerate().map(|(k, d)| (k + 1, d)).collect())
}

/// Smallest truncation order whose β = 1 errors best match the reference.
///
/// # Errors
/// [`Error::NoCalibration`] when no order reaches [`CALIBRATION_THRESHOLD`].
pub fn calibrate_n(b: &Benchmark, reference: &[ReferenceAe]) -> Result<Calibration> {
    let sol = solve(&b.spec, MAX_CALIBRATION_N)?;
    calibrate_with(b, &sol, reference)
}

pub fn calibrate_with(b: &Benchmark, sol: &ComponentSolution, reference: &[ReferenceAe]) -> Result<Calibration> {
    let scan = deviation_scan(b, sol, reference)?;
    let (best_n, best) = scan.iter().copied().fold((0, f64::INFINITY), |acc, (n, d)| if d < acc.1 { (n, d) } else { acc });
    if !(best < CALIBRATION_THRESHOLD) {
        return Err(Error::NoCalibration { threshold: CALIBRATION_THRESHOLD, best_n, best_deviation: best });
    }
    let (n, deviation) = scan.iter().copied().find(|&(_, d)| d <= best + CALIBRATION_TIE).expect("the best order qualifies");
    Ok(Calibration { n, deviation, scan })
}

/// The β = 1 column of a published table as calibration reference.
pub fn reference_column(table: &PublishedAeTable) -> Vec<ReferenceAe> {
    table.rows.iter().map(|r| ReferenceAe { variable: r.variable, t: r.t, ae: r.ae[3] }).collect()
}

/// `log10 √(Σ_x w²)` for a component `w`, computed in log space.
fn log10_l2(e: &Evaluator, xs: &[f64], t: f64) -> Result<f64> {
    let squares = xs
        .iter()
        .map(|&x| {
            let w = e.eval_log(x, t)?;
            Ok(if w.is_zero() { LogValue::zero() } else { LogValue { sign: 1, ln_abs: 2.0 * w.ln_abs } })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = LogValue::sum(&squares);
    Ok(if total.is_zero() { f64::NEG_INFINITY } else { 0.5 * total.ln_abs / std::f64::consts::LN_10 })
}

/// Discrete L2 norm of `u_j = u^{(j+1)} − u^{(j)}` over `xs` at β = 1.
pub fn l2_increment_table(b: &Benchmark, ts: &[f64], js: &[usize], xs: &[f64]) -> Result<ErrorTable> {
    let needed = js.iter().max().map_or(1, |j| j + 1);
    let sol = solve(&b.spec, needed)?;
    l2_rows_from(b, &sol, ts, js, xs)
}

fn l2_rows_from(b: &Benchmark, sol: &ComponentSolution, ts: &[f64], js: &[usize], xs: &[f64]) -> Result<ErrorTable> {
    checked_n(sol, js.iter().max().map_or(1, |j| j + 1))?;
    let evals = js.iter().map(|&j| sol.u[j].evaluator(1.0)).collect::<Result<Vec<_>>>()?;
    let rows = ts
        .par_iter()
        .map(|&t| {
            js.iter()
                .zip(&evals)
                .map(|(&j, e)| Ok(L2Row { t, j, log10_norm: log10_l2(e, xs, t)?, reference_log10: None }))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    let grid = format!("{} x-points on [{}, {}], t in {ts:?}", xs.len(), xs.first().unwrap_or(&0.0), xs.last().unwrap_or(&0.0));
    Ok(ErrorTable { meta: meta(b, "l2_increment", sol.len(), None, grid), l2_rows: rows, ..Default::default() })
}

/// Proposed-method AE at `t = 0.1` across `xs` and `betas`, beside the
/// published comparison values where they exist.
pub fn lrpsm_comparison(b: &Benchmark, betas: &[f64], xs: &[f64], n: usize) -> Result<ErrorTable> {
    let sol = solve(&b.spec, n.max(1))?;
    checked_n(&sol, n)?;
    let published = if b.id == BenchmarkId::Ex2 { fixtures::table3() } else { Vec::new() };
    let t = COMPARISON_T;
    let cells = betas
        .par_iter()
        .map(|&beta| {
            let pe = PrefixEvaluator::new(&sol, n, beta)?;
            let mut out = Vec::new();
            for var in [Var::U, Var::V] {
                for &x in xs {
                    let ae = (b.exact(var).eval(x, t, beta)? - pe.partial_sums(var, x, t)?[n - 1]).abs();
                    out.push((var, x, beta, ae));
                }
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::new();
    for var in [Var::U, Var::V] {
        for &x in xs {
            for (bi, &beta) in betas.iter().enumerate() {
                let &(_, _, _, ae) = cells[bi].iter().find(|c| c.0 == var && c.1 == x).expect("cell computed");
                let col = COMPARISON_BETAS.iter().position(|p| (p - beta).abs() < 1e-12);
                let pubrow = published.iter().find(|r| r.variable == var && (r.x - x).abs() < 1e-9);
                rows.push(ComparisonRow {
                    variable: var,
                    x,
                    t,
                    beta,
                    proposed_ae: ae,
                    published_proposed_ae: col.and_then(|c| pubrow.map(|r| r.proposed[c])),
                    lrpsm_ae: col.and_then(|c| pubrow.map(|r| r.lrpsm[c])),
                });
            }
        }
    }
    let grid = format!("t = {t}, x in {xs:?}, beta in {betas:?}");
    Ok(ErrorTable { meta: meta(b, "lrpsm_comparison", n, None, grid), comparison_rows: rows, ..Default::default() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TableId {
    Table1,
    Table2,
    Table3,
    Table4,
    Table5,
}

impl TableId {
    pub const ALL: [TableId; 5] = [TableId::Table1, TableId::Table2, TableId::Table3, TableId::Table4, TableId::Table5];

    pub fn benchmark(&self) -> BenchmarkId {
        match self {
            TableId::Table1 | TableId::Table2 => BenchmarkId::Ex1,
            TableId::Table3 | TableId::Table4 => BenchmarkId::Ex2,
            TableId::Table5 => BenchmarkId::Ex3,
        }
    }

    /// The published AE table used for calibration.
    fn published_ae(&self) -> Option<PublishedAeTable> {
        match self {
            TableId::Table2 => Some(fixtures::table2()),
            TableId::Table3 | TableId::Table4 => Some(fixtures::table4()),
            TableId::Table5 => Some(fixtures::table5()),
            TableId::Table1 => None,
        }
    }
}

impl fmt::Display for TableId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = TableId::ALL.iter().position(|t| t == self).expect("listed") + 1;
        write!(f, "table{k}")
    }
}

impl FromStr for TableId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TableId::ALL
            .iter()
            .copied()
            .find(|t| t.to_string() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::InvalidArgument(format!("unknown table '{s}' (expected table1..table5)")))
    }
}

/// Uniform grid of `steps + 1` points on `[0, 1]`.
pub fn unit_grid(steps: usize) -> Vec<f64> {
    GridSpec { x_min: 0.0, x_max: 1.0, x_steps: steps, t_min: 0.0, t_max: 0.0, t_steps: 1 }.xs()
}

/// Recomputes a published table, with the published values attached.
pub fn regenerate(id: TableId) -> Result<ErrorTable> {
    let b = Benchmark::load(id.benchmark());
    let mut table = match id {
        TableId::Table1 => {
            let published = fixtures::table1();
            let ts: Vec<f64> = published.iter().map(|r| r.t).collect();
            let mut table = l2_increment_table(&b, &ts, &L2_JS, &unit_grid(10))?;
            for row in &mut table.l2_rows {
                let col = L2_JS.iter().position(|&j| j == row.j);
                let pubrow = published.iter().find(|r| (r.t - row.t).abs() < 1e-9);
                row.reference_log10 = col.and_then(|c| pubrow.and_then(|r| r.values.get(c)).map(|s| s.log10()));
            }
            table
        }
        TableId::Table3 => {
            let n = calibrate_n(&b, &reference_column(&fixtures::table4()))?.n;
            lrpsm_comparison(&b, &COMPARISON_BETAS, &unit_grid(10), n)?
        }
        TableId::Table2 | TableId::Table4 | TableId::Table5 => {
            let published = id.published_ae().expect("AE tables have fixtures");
            let sol = solve(&b.spec, MAX_CALIBRATION_N)?;
            let cal = calibrate_with(&b, &sol, &reference_column(&published))?;
            let ts = published.ts();
            let mut rows = ae_rows(&b, &sol, &AE_BETAS, &ts, cal.n)?;
            for row in &mut rows {
                row.reference_ae = published.ae(row.variable, row.t, row.beta);
            }
            let grid = format!("t in {ts:?}, beta in {:?}", AE_BETAS);
            ErrorTable { meta: meta(&b, "", cal.n, Some(b.table_x_f64()), grid), rows, ..Default::default() }
        }
    };
    table.meta.id = id.to_string();
    Ok(table)
}
