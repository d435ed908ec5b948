//! Published reference values, shipped as CSV files and compiled in.

use crate::adomian::Var;
use crate::error::{Error, Result};

pub const TABLE1_CSV: &str = include_str!("../fixtures/table1.csv");
pub const TABLE2_CSV: &str = include_str!("../fixtures/table2.csv");
pub const TABLE3_CSV: &str = include_str!("../fixtures/table3.csv");
pub const TABLE4_CSV: &str = include_str!("../fixtures/table4.csv");
pub const TABLE5_CSV: &str = include_str!("../fixtures/table5.csv");

/// β labels of the absolute-error columns, as printed.
pub const AE_BETAS: [f64; 4] = [0.97, 0.98, 0.99, 1.0];
/// Iteration indices of the increment columns.
pub const L2_JS: [usize; 5] = [25, 50, 100, 250, 500];
/// β values of the method-comparison columns.
pub const COMPARISON_BETAS: [f64; 3] = [0.5, 0.7, 0.9];

#[derive(Clone, Debug, PartialEq)]
pub struct PublishedAeRow {
    pub variable: Var,
    pub t: f64,
    pub exact_printed: f64,
    pub approximate_printed: f64,
    /// Absolute errors in the order of [`AE_BETAS`].
    pub ae: [f64; 4],
}

#[derive(Clone, Debug, PartialEq)]
pub struct PublishedAeTable {
    pub rows: Vec<PublishedAeRow>,
}

impl PublishedAeTable {
    pub fn row(&self, variable: Var, t: f64) -> Option<&PublishedAeRow> {
        self.rows.iter().find(|r| r.variable == variable && (r.t - t).abs() < 1e-9)
    }

    /// Printed AE for `(variable, t, β)` if that column exists.
    pub fn ae(&self, variable: Var, t: f64, beta: f64) -> Option<f64> {
        let col = AE_BETAS.iter().position(|b| (b - beta).abs() < 1e-12)?;
        self.row(variable, t).map(|r| r.ae[col])
    }

    pub fn ts(&self) -> Vec<f64> {
        self.rows.iter().filter(|r| r.variable == Var::U).map(|r| r.t).collect()
    }
}

/// A value written as `m × 10^e`; kept split because some underflow f64.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scientific {
    pub mantissa: f64,
    pub exponent: i32,
}

impl Scientific {
    pub fn log10(&self) -> f64 {
        self.mantissa.log10() + f64::from(self.exponent)
    }

    pub fn parse(s: &str) -> Result<Scientific> {
        let (m, e) = s.trim().split_once(['e', 'E']).ok_or_else(|| Error::Parse(format!("not scientific: '{s}'")))?;
        Ok(Scientific {
            mantissa: m.parse().map_err(|_| Error::Parse(format!("bad mantissa in '{s}'")))?,
            exponent: e.parse().map_err(|_| Error::Parse(format!("bad exponent in '{s}'")))?,
        })
    }

    /// From a base-10 logarithm, with a 4-significant-digit mantissa.
    pub fn from_log10(l: f64) -> Scientific {
        let mut exponent = l.floor() as i32;
        let mut mantissa = (10f64.powf(l - f64::from(exponent)) * 1000.0).round() / 1000.0;
        if mantissa >= 10.0 {
            mantissa /= 10.0;
            exponent += 1;
        }
        Scientific { mantissa, exponent }
    }
}

impl std::fmt::Display for Scientific {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:.3}e{}", self.mantissa, self.exponent)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PublishedL2Row {
    pub t: f64,
    /// Values in the order of [`L2_JS`].
    pub values: Vec<Scientific>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PublishedComparisonRow {
    pub variable: Var,
    pub x: f64,
    /// Proposed-method AE in the order of [`COMPARISON_BETAS`].
    pub proposed: [f64; 3],
    pub lrpsm: [f64; 3],
}

fn records(text: &str) -> Result<Vec<csv::StringRecord>> {
    let mut rdr = csv::ReaderBuilder::new().comment(Some(b'#')).trim(csv::Trim::All).from_reader(text.as_bytes());
    rdr.records().map(|r| r.map_err(|e| Error::Parse(e.to_string()))).collect()
}

fn num(rec: &csv::StringRecord, i: usize) -> Result<f64> {
    rec.get(i)
        .ok_or_else(|| Error::Parse(format!("missing column {i}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad number in column {i}: {rec:?}")))
}

fn var(rec: &csv::StringRecord) -> Result<Var> {
    rec.get(0).unwrap_or_default().parse()
}

pub fn parse_ae_table(text: &str) -> Result<PublishedAeTable> {
    let rows = records(text)?
        .iter()
        .map(|r| {
            Ok(PublishedAeRow {
                variable: var(r)?,
                t: num(r, 1)?,
                exact_printed: num(r, 2)?,
                approximate_printed: num(r, 3)?,
                ae: [num(r, 4)?, num(r, 5)?, num(r, 6)?, num(r, 7)?],
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PublishedAeTable { rows })
}

pub fn parse_l2_table(text: &str) -> Result<Vec<PublishedL2Row>> {
    records(text)?
        .iter()
        .map(|r| {
            Ok(PublishedL2Row {
                t: num(r, 0)?,
                values: (1..=L2_JS.len()).map(|i| Scientific::parse(r.get(i).unwrap_or_default())).collect::<Result<_>>()?,
            })
        })
        .collect()
}

pub fn parse_comparison_table(text: &str) -> Result<Vec<PublishedComparisonRow>> {
    records(text)?
        .iter()
        .map(|r| {
            Ok(PublishedComparisonRow {
                variable: var(r)?,
                x: num(r, 1)?,
                proposed: [num(r, 2)?, num(r, 4)?, num(r, 6)?],
                lrpsm: [num(r, 3)?, num(r, 5)?, num(r, 7)?],
            })
        })
        .collect()
}

pub fn table1() -> Vec<PublishedL2Row> {
    parse_l2_table(TABLE1_CSV).expect("bundled fixture parses")
}

pub fn table2() -> PublishedAeTable {
    parse_ae_table(TABLE2_CSV).expect("bundled fixture parses")
}

pub fn table3() -> Vec<PublishedComparisonRow> {
    parse_comparison_table(TABLE3_CSV).expect("bundled fixture parses")
}

pub fn table4() -> PublishedAeTable {
    parse_ae_table(TABLE4_CSV).expect("bundled fixture parses")
}

pub fn table5() -> PublishedAeTable {
    parse_ae_table(TABLE5_CSV).expect("bundled fixture parses")
}
