//! `atdm`: solve fractional coupled systems, regenerate the error tables,
//! dump series components and run the property checks.

use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use atdm::benchmarks::{regenerate, BenchmarkId, TableId};
use atdm::engine::{residual_series, solve};
use atdm::problem::{spec_hash, ProblemFile};
use atdm::table::{GridSpec, GridTable};
use atdm::{Error, ProblemSpec, Series};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

#[derive(Parser)]
#[command(name = "atdm", version, about = "Aboodh transform decomposition solver")]
struct Cli {
    /// Worker threads for grid and table evaluation (default: all cores).
    #[arg(long, global = true, env = "ATDM_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the truncated series solution on a grid.
    Solve(GridArgs),
    /// Evaluate the residuals of the truncated solution on a grid.
    Residual(GridArgs),
    /// Regenerate one of the published tables.
    Table {
        #[arg(long)]
        id: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Print the components u_0..u_n and v_0..v_n in canonical text form.
    Components {
        #[arg(long)]
        problem: String,
        /// Highest component index.
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the seeded property checks.
    Verify,
}

#[derive(Args)]
struct GridArgs {
    /// Builtin problem (ex1, ex2, ex3) or path to a problem file.
    #[arg(long)]
    problem: String,
    /// Fractional order; repeat for several values.
    #[arg(long = "beta", default_value = "1")]
    betas: Vec<f64>,
    /// Highest component index; `--n 0` keeps the initial data only.
    #[arg(long, default_value_t = 5)]
    n: usize,
    #[arg(long, default_value_t = 0.0)]
    x_min: f64,
    #[arg(long, default_value_t = 1.0)]
    x_max: f64,
    #[arg(long, default_value_t = 10)]
    x_steps: usize,
    #[arg(long, default_value_t = 0.0)]
    t_min: f64,
    #[arg(long, default_value_t = 0.35)]
    t_max: f64,
    #[arg(long, default_value_t = 7)]
    t_steps: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

enum Failure {
    Config(String),
    Computation(String),
    Verification(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Computation(_) => 3,
            Failure::Verification(_) => 4,
        }
    }

    fn report(&self) -> String {
        let (kind, msg) = match self {
            Failure::Config(m) => ("config", m),
            Failure::Computation(m) => ("computation", m),
            Failure::Verification(m) => ("verification", m),
        };
        format!("error[{kind}]: {msg}")
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_) | Error::InvalidSpec(_) | Error::InvalidArgument(_) => Failure::Config(e.to_string()),
            other => Failure::Computation(other.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

struct Problem {
    label: String,
    spec: ProblemSpec,
    exact: Option<(Series, Series)>,
}

fn load_problem(arg: &str) -> Result<Problem, Failure> {
    let (label, text) = match arg.parse::<BenchmarkId>() {
        Ok(id) => (id.to_string(), id.json().to_string()),
        Err(_) => {
            let text = fs::read_to_string(arg).map_err(|e| Failure::Config(format!("cannot read problem '{arg}': {e}")))?;
            (arg.to_string(), text)
        }
    };
    let file = ProblemFile::parse(&text)?;
    Ok(Problem { label, spec: file.spec, exact: file.reference.map(|r| (r.exact_u, r.exact_v)) })
}

fn emit(out: &Option<PathBuf>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Config(format!("cannot write '{}': {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn grid_of(a: &GridArgs) -> Result<GridSpec, Failure> {
    if let Some(b) = a.betas.iter().find(|b| !(**b > 0.0 && **b <= 1.0)) {
        return Err(Failure::Config(format!("beta must lie in (0, 1], got {b}")));
    }
    let g = GridSpec {
        x_min: a.x_min,
        x_max: a.x_max,
        x_steps: a.x_steps,
        t_min: a.t_min,
        t_max: a.t_max,
        t_steps: a.t_steps,
    };
    g.validate()?;
    Ok(g)
}

fn grid_table(a: &GridArgs, residuals: bool) -> Result<GridTable, Failure> {
    let grid = grid_of(a)?;
    let p = load_problem(&a.problem)?;
    let count = a.n + 1;
    let sol = solve(&p.spec, count)?;
    let (u, v) = (sol.prefix_u(count)?, sol.prefix_v(count)?);
    let mut fields = vec![u, v];
    let mut columns = vec!["beta", "x", "t"];
    if residuals {
        let (ru, rv) = residual_series(&p.spec, &fields[0], &fields[1])?;
        fields = vec![ru, rv];
        columns.extend(["residual_u", "residual_v"]);
    } else {
        columns.extend(["u", "v"]);
        if let Some((eu, ev)) = &p.exact {
            fields.extend([eu.clone(), ev.clone()]);
            columns.extend(["exact_u", "exact_v", "abs_error_u", "abs_error_v"]);
        }
    }
    let (xs, ts) = (grid.xs(), grid.ts());
    let blocks = a
        .betas
        .par_iter()
        .map(|&beta| {
            let evals = fields.iter().map(|s| s.evaluator(beta)).collect::<atdm::Result<Vec<_>>>()?;
            let mut rows = Vec::with_capacity(xs.len() * ts.len());
            for &x in &xs {
                for &t in &ts {
                    let mut row = vec![beta, x, t];
                    for e in &evals {
                        row.push(e.eval(x, t)?);
                    }
                    if evals.len() == 4 {
                        row.push((row[5] - row[3]).abs());
                        row.push((row[6] - row[4]).abs());
                    }
                    rows.push(row);
                }
            }
            Ok(rows)
        })
        .collect::<atdm::Result<Vec<_>>>()?;
    let meta = BTreeMap::from([
        ("problem".to_string(), p.label),
        ("spec_hash".to_string(), spec_hash(&p.spec)),
        ("n_components".to_string(), count.to_string()),
        ("grid".to_string(), grid.describe()),
    ]);
    Ok(GridTable { meta, columns: columns.into_iter().map(String::from).collect(), rows: blocks.concat() })
}

fn components_text(problem: &str, n: usize) -> Result<String, Failure> {
    let p = load_problem(problem)?;
    let sol = solve(&p.spec, n + 1)?;
    let mut out = format!("# problem: {}\n# spec_hash: {}\n", p.label, spec_hash(&p.spec));
    for (name, comps) in [("u", &sol.u), ("v", &sol.v)] {
        for (j, s) in comps.iter().enumerate() {
            out.push_str(&format!("\n{name}_{j}:\n{s}\n"));
        }
    }
    Ok(out)
}

fn verify() -> Outcome {
    let outcomes = atdm::verify::run_all();
    let mut failed = 0;
    for o in &outcomes {
        match &o.failure {
            None => println!("PASS  {} ({} cases)", o.name, o.cases),
            Some(why) => {
                failed += 1;
                println!("FAIL  {}: {why}", o.name);
            }
        }
    }
    println!("{} passed, {failed} failed", outcomes.len() - failed);
    if failed > 0 {
        return Err(Failure::Verification(format!("{failed} check(s) failed")));
    }
    Ok(())
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Solve(a) => {
            let t = grid_table(&a, false)?;
            emit(&a.out, &if a.format == Format::Csv { t.emit_csv() } else { t.emit_json() })
        }
        Command::Residual(a) => {
            let t = grid_table(&a, true)?;
            emit(&a.out, &if a.format == Format::Csv { t.emit_csv() } else { t.emit_json() })
        }
        Command::Table { id, out, format } => {
            let id: TableId = id.parse()?;
            let t = regenerate(id)?;
            emit(&out, &if format == Format::Csv { t.emit_csv() } else { t.emit_json() })
        }
        Command::Components { problem, n, out } => emit(&out, &components_text(&problem, n)?),
        Command::Verify => verify(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        if n == 0 {
            eprintln!("{}", Failure::Config("--threads must be at least 1".into()).report());
            return ExitCode::from(2);
        }
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("{}", Failure::Computation(format!("cannot start worker pool: {e}")).report());
            return ExitCode::from(3);
        }
    };
    match pool.install(|| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.report());
            ExitCode::from(f.code())
        }
    }
}
