//! Error tables and evaluation grids, with CSV and JSON serialization.
//!
//! CSV output starts with `# key: value` metadata lines, followed by one
//! section per row kind (a header line and its rows), sections separated by a
//! blank line. Floats are written with 10 decimals; increments, which span
//! hundreds of decades, in 4-digit scientific notation. JSON carries full
//! precision.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::adomian::Var;
use crate::error::{Error, Result};
use crate::fixtures::Scientific;

/// Fixed 10-decimal formatting; negative zero prints as zero.
pub fn fmt10(v: f64) -> String {
    let s = format!("{v:.10}");
    if s.starts_with('-') && s[1..].chars().all(|c| c == '0' || c == '.') {
        s[1..].to_string()
    } else {
        s
    }
}

/// Uniform tensor grid; `steps` intervals give `steps + 1` points per axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub x_steps: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub t_steps: usize,
}

fn axis(lo: f64, hi: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| lo + (hi - lo) * i as f64 / steps as f64).collect()
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        if self.x_steps == 0 || self.t_steps == 0 {
            return Err(Error::InvalidArgument("grid steps must be at least 1".into()));
        }
        if !(self.x_min <= self.x_max) || !(self.t_min <= self.t_max) {
            return Err(Error::InvalidArgument("grid bounds must satisfy min <= max".into()));
        }
        if self.t_min < 0.0 {
            return Err(Error::InvalidArgument("time grid must start at t >= 0".into()));
        }
        Ok(())
    }

    pub fn xs(&self) -> Vec<f64> {
        axis(self.x_min, self.x_max, self.x_steps)
    }

    pub fn ts(&self) -> Vec<f64> {
        axis(self.t_min, self.t_max, self.t_steps)
    }

    pub fn describe(&self) -> String {
        format!(
            "x in [{}, {}] ({} steps), t in [{}, {}] ({} steps)",
            self.x_min, self.x_max, self.x_steps, self.t_min, self.t_max, self.t_steps
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TableMeta {
    pub id: String,
    pub benchmark: String,
    pub n_components: usize,
    pub x: Option<f64>,
    pub grid: String,
    pub spec_hash: String,
}

/// One (variable, x, t, β) point; the absolute error is always recomputed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AeRow {
    pub variable: Var,
    pub x: f64,
    pub t: f64,
    pub beta: f64,
    pub exact: f64,
    pub approx: f64,
    #[serde(default)]
    pub reference_ae: Option<f64>,
}

impl AeRow {
    pub fn abs_error(&self) -> f64 {
        (self.exact - self.approx).abs()
    }
}

/// Discrete L2 norm of one component over an x-grid, held as log10.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct L2Row {
    pub t: f64,
    pub j: usize,
    pub log10_norm: f64,
    #[serde(default)]
    pub reference_log10: Option<f64>,
}

impl L2Row {
    /// `√‖u_j‖` in log10, the tabulated increment.
    pub fn log10_increment(&self) -> f64 {
        0.5 * self.log10_norm
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub variable: Var,
    pub x: f64,
    pub t: f64,
    pub beta: f64,
    pub proposed_ae: f64,
    #[serde(default)]
    pub published_proposed_ae: Option<f64>,
    #[serde(default)]
    pub lrpsm_ae: Option<f64>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ErrorTable {
    pub meta: TableMeta,
    #[serde(default)]
    pub rows: Vec<AeRow>,
    #[serde(default)]
    pub l2_rows: Vec<L2Row>,
    #[serde(default)]
    pub comparison_rows: Vec<ComparisonRow>,
}

const AE_HEADER: &str = "variable,x,time_level_t,beta,exact_solution,approximate_solution,absolute_error,published_absolute_error";
const L2_HEADER: &str = "time_level_t,j,l2_norm,l2_increment,published_increment";
const CMP_HEADER: &str = "variable,x,time_level_t,beta,proposed_method_ae,published_proposed_method_ae,lrpsm_ae";

fn opt10(v: Option<f64>) -> String {
    v.map(fmt10).unwrap_or_default()
}

fn sci(l: f64) -> String {
    if l.is_finite() {
        Scientific::from_log10(l).to_string()
    } else {
        "0".into()
    }
}

#[derive(Serialize)]
struct AeRowOut<'a> {
    #[serde(flatten)]
    row: &'a AeRow,
    abs_error: f64,
}

#[derive(Serialize)]
struct TableOut<'a> {
    meta: &'a TableMeta,
    rows: Vec<AeRowOut<'a>>,
    l2_rows: &'a [L2Row],
    comparison_rows: &'a [ComparisonRow],
}

impl ErrorTable {
    pub fn emit_csv(&self) -> String {
        let m = &self.meta;
        let mut out = String::new();
        let _ = writeln!(out, "# id: {}", m.id);
        let _ = writeln!(out, "# benchmark: {}", m.benchmark);
        let _ = writeln!(out, "# n_components: {}", m.n_components);
        let _ = writeln!(out, "# x: {}", m.x.map(|x| x.to_string()).unwrap_or_default());
        let _ = writeln!(out, "# grid: {}", m.grid);
        let _ = writeln!(out, "# spec_hash: {}", m.spec_hash);
        let mut sections = Vec::new();
        if !self.rows.is_empty() {
            let mut s = String::from(AE_HEADER);
            for r in &self.rows {
                let _ = write!(
                    s,
                    "\n{},{},{},{},{},{},{},{}",
                    r.variable,
                    fmt10(r.x),
                    fmt10(r.t),
                    fmt10(r.beta),
                    fmt10(r.exact),
                    fmt10(r.approx),
                    fmt10(r.abs_error()),
                    opt10(r.reference_ae)
                );
            }
            sections.push(s);
        }
        if !self.l2_rows.is_empty() {
            let mut s = String::from(L2_HEADER);
            for r in &self.l2_rows {
                let _ = write!(
                    s,
                    "\n{},{},{},{},{}",
                    fmt10(r.t),
                    r.j,
                    sci(r.log10_norm),
                    sci(r.log10_increment()),
                    r.reference_log10.map(sci).unwrap_or_default()
                );
            }
            sections.push(s);
        }
        if !self.comparison_rows.is_empty() {
            let mut s = String::from(CMP_HEADER);
            for r in &self.comparison_rows {
                let _ = write!(
                    s,
                    "\n{},{},{},{},{},{},{}",
                    r.variable,
                    fmt10(r.x),
                    fmt10(r.t),
                    fmt10(r.beta),
                    fmt10(r.proposed_ae),
                    opt10(r.published_proposed_ae),
                    opt10(r.lrpsm_ae)
                );
            }
            sections.push(s);
        }
        out.push_str(&sections.join("\n\n"));
        out.push('\n');
        out
    }

    pub fn emit_json(&self) -> String {
        let out = TableOut {
            meta: &self.meta,
            rows: self.rows.iter().map(|row| AeRowOut { row, abs_error: row.abs_error() }).collect(),
            l2_rows: &self.l2_rows,
            comparison_rows: &self.comparison_rows,
        };
        serde_json::to_string_pretty(&out).expect("tables always serialize")
    }

    pub fn parse_json(text: &str) -> Result<ErrorTable> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    /// Reads the CSV layout written by [`ErrorTable::emit_csv`]. Values come
    /// back at the written precision.
    pub fn parse_csv(text: &str) -> Result<ErrorTable> {
        let mut table = ErrorTable::default();
        let mut body = String::new();
        for line in text.lines() {
            if let Some(meta) = line.strip_prefix("# ") {
                let (k, v) = meta.split_once(": ").unwrap_or((meta.trim_end_matches(':'), ""));
                let v = v.trim();
                match k {
                    "id" => table.meta.id = v.into(),
                    "benchmark" => table.meta.benchmark = v.into(),
                    "n_components" => table.meta.n_components = v.parse().map_err(|_| Error::Parse("bad n_components".into()))?,
                    "x" => table.meta.x = if v.is_empty() { None } else { Some(parse_f(v)?) },
                    "grid" => table.meta.grid = v.into(),
                    "spec_hash" => table.meta.spec_hash = v.into(),
                    _ => {}
                }
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        for section in body.split("\n\n").map(str::trim).filter(|s| !s.is_empty()) {
            let header = section.lines().next().unwrap_or_default();
            let mut rdr = csv::ReaderBuilder::new().from_reader(section.as_bytes());
            for rec in rdr.records() {
                let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
                let f = |i: usize| parse_f(rec.get(i).unwrap_or_default());
                let of = |i: usize| -> Result<Option<f64>> {
                    match rec.get(i).unwrap_or_default() {
                        "" => Ok(None),
                        s => parse_f(s).map(Some),
                    }
                };
                match header {
                    AE_HEADER => table.rows.push(AeRow {
                        variable: rec.get(0).unwrap_or_default().parse()?,
                        x: f(1)?,
                        t: f(2)?,
                        beta: f(3)?,
                        exact: f(4)?,
                        approx: f(5)?,
                        reference_ae: of(7)?,
                    }),
                    L2_HEADER => table.l2_rows.push(L2Row {
                        t: f(0)?,
                        j: rec.get(1).unwrap_or_default().parse().map_err(|_| Error::Parse("bad j".into()))?,
                        log10_norm: parse_sci(rec.get(2).unwrap_or_default())?,
                        reference_log10: match rec.get(4).unwrap_or_default() {
                            "" => None,
                            s => Some(parse_sci(s)?),
                        },
                    }),
                    CMP_HEADER => table.comparison_rows.push(ComparisonRow {
                        variable: rec.get(0).unwrap_or_default().parse()?,
                        x: f(1)?,
                        t: f(2)?,
                        beta: f(3)?,
                        proposed_ae: f(4)?,
                        published_proposed_ae: of(5)?,
                        lrpsm_ae: of(6)?,
                    }),
                    other => return Err(Error::Parse(format!("unknown table header '{other}'"))),
                }
            }
        }
        Ok(table)
    }
}

fn parse_f(s: &str) -> Result<f64> {
    s.trim().parse().map_err(|_| Error::Parse(format!("bad number '{s}'")))
}

fn parse_sci(s: &str) -> Result<f64> {
    if s.trim() == "0" {
        return Ok(f64::NEG_INFINITY);
    }
    Ok(Scientific::parse(s)?.log10())
}

/// A plain numeric grid with named columns (solution and residual dumps).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GridTable {
    pub meta: BTreeMap<String, String>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl GridTable {
    pub fn emit_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            let _ = writeln!(out, "# {k}: {v}");
        }
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&r.iter().map(|v| fmt10(*v)).collect::<Vec<_>>().join(","));
            out.push('\n');
        }
        out
    }

    pub fn emit_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("grids always serialize")
    }
}
