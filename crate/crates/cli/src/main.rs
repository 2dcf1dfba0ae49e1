use std::fs;
use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use graph_complex::catalog::{
    self, cohomology_report, format_table, parse_constraint, solve_cocycle, verify_cocycle,
};
use graph_complex::enumerate::{enumerate_basis, enumerate_counts_only, BasisSpec};
use graph_complex::graph::parse_sum_text;
use graph_complex::linalg::{RankMode, DEFAULT_PRIME};
use graph_complex::rational::format_rational;
use graph_complex::{
    bracket_sums, canonicalize, differential, serialize_graph, CatalogError, Graph, GraphSum,
    Rational,
};

#[derive(Parser)]
#[command(
    name = "gc",
    version,
    about = "Exact computations in the non-oriented graph complex"
)]
struct Cli {
    /// Emit one JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Worker thread cap.
    #[arg(long, global = true, env = "GC_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced differential of a graph sum.
    Diff { file: String },
    /// Canonicalize, drop zero graphs and collect like terms.
    Reduce { file: String },
    /// Graded bracket of two graph sums.
    Bracket { first: String, second: String },
    /// Zero-graph test for every term.
    IsZero { file: String },
    /// Connected graphs on n vertices and e edges up to isomorphism.
    Enumerate {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        e: usize,
        #[arg(long, default_value_t = 1)]
        min_valency: usize,
        #[arg(long)]
        count_only: bool,
    },
    /// Dimension-table row at bi-grading (n, 2n-2).
    Cohomology {
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        min_valency: usize,
        #[arg(long, value_enum, default_value_t = Mode::Modular)]
        rank_mode: Mode,
        /// Permit the n = 9 unrestricted run.
        #[arg(long)]
        allow_big: bool,
    },
    /// Check that an embedded cocycle (gamma3, gamma5, gamma7) or a file is closed.
    Verify { target: String },
    /// Particular cocycle at (n, e) with graphs pinned by `--fix "EDGES"=COEFF`.
    Solve {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        e: usize,
        #[arg(long = "fix", required = true)]
        fix: Vec<String>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Exact,
    Modular,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: 2,
            message: message.to_string(),
        }
    }
}

impl From<CatalogError> for Failure {
    fn from(err: CatalogError) -> Self {
        let code = match err {
            CatalogError::ResourceGate { .. } => 3,
            _ => 2,
        };
        Failure {
            code,
            message: err.to_string(),
        }
    }
}

/// Result text and exit code of a successful run.
struct Outcome {
    text: String,
    json: Value,
    code: u8,
}

impl Outcome {
    fn ok(text: String, json: Value) -> Self {
        Outcome {
            text,
            json,
            code: 0,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(k) = cli.threads {
        if let Err(err) = rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build_global()
        {
            eprintln!("gc: {err}");
            return ExitCode::from(2);
        }
    }
    match run(&cli.command) {
        Ok(outcome) => {
            if cli.json {
                println!("{}", outcome.json);
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::from(outcome.code)
        }
        Err(failure) => {
            if cli.json {
                println!(
                    "{}",
                    json!({ "error": failure.message, "exit_code": failure.code })
                );
            }
            eprintln!("gc: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(command: &Command) -> Result<Outcome, Failure> {
    match command {
        Command::Diff { file } => {
            let input = read_sum(file)?;
            let out = differential(&input).map_err(Failure::usage)?;
            Ok(sum_outcome("diff", input.len(), &out))
        }
        Command::Reduce { file } => {
            let raw = read_terms(file)?;
            let sum = to_sum(&raw);
            Ok(sum_outcome("reduce", raw.len(), &sum))
        }
        Command::Bracket { first, second } => {
            let a = read_sum(first)?;
            let b = read_sum(second)?;
            let out = bracket_sums(&a, &b).map_err(Failure::usage)?;
            Ok(sum_outcome("bracket", a.len() + b.len(), &out))
        }
        Command::IsZero { file } => {
            let raw = read_terms(file)?;
            let mut text = String::new();
            let mut rows = Vec::new();
            for (_, g) in &raw {
                let zero = canonicalize(g).is_zero();
                let word = if zero { "zero" } else { "nonzero" };
                text += &format!("{word} ; {}\n", g.edge_field());
                rows.push(json!({ "edges": g.edge_field(), "zero": zero }));
            }
            Ok(Outcome::ok(
                text,
                json!({ "command": "is-zero", "terms": rows }),
            ))
        }
        Command::Enumerate {
            n,
            e,
            min_valency,
            count_only,
        } => enumerate(*n, *e, *min_valency, *count_only),
        Command::Cohomology {
            n,
            min_valency,
            rank_mode,
            allow_big,
        } => {
            let mode = match rank_mode {
                Mode::Exact => RankMode::Exact,
                Mode::Modular => RankMode::Modular(DEFAULT_PRIME),
            };
            if *n == 9 && *allow_big {
                eprintln!("gc: n = 9 run started; this can take a long time");
            }
            let report = cohomology_report(*n, *min_valency, mode, *allow_big)?;
            let json = serde_json::to_value(&report).expect("report serializes");
            Ok(Outcome::ok(format_table(&[report]), json))
        }
        Command::Verify { target } => verify(target),
        Command::Solve { n, e, fix } => solve(*n, *e, fix),
    }
}

fn read_source(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::usage(format!("stdin: {e}")))?;
        Ok(text)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::usage(format!("{path}: {e}")))
    }
}

fn read_terms(path: &str) -> Result<Vec<(Rational, Graph)>, Failure> {
    let text = read_source(path)?;
    parse_sum_text(&text).map_err(|e| Failure::usage(format!("{path}: {e}")))
}

fn read_sum(path: &str) -> Result<GraphSum, Failure> {
    Ok(to_sum(&read_terms(path)?))
}

fn to_sum(terms: &[(Rational, Graph)]) -> GraphSum {
    let mut sum = GraphSum::new();
    for (c, g) in terms {
        sum.add_assign(&GraphSum::single(g.clone()).scale(c));
    }
    sum
}

fn sum_text(sum: &GraphSum) -> String {
    if sum.is_empty() {
        "# empty sum\n".to_string()
    } else {
        sum.to_text()
    }
}

fn sum_json(sum: &GraphSum) -> Value {
    Value::Array(
        sum.iter()
            .map(|(g, c)| json!({ "coeff": format_rational(c), "edges": g.edge_field() }))
            .collect(),
    )
}

fn sum_outcome(command: &str, input_terms: usize, sum: &GraphSum) -> Outcome {
    Outcome::ok(
        sum_text(sum),
        json!({ "command": command, "input_terms": input_terms, "terms": sum_json(sum) }),
    )
}

fn enumerate(n: usize, e: usize, min_valency: usize, count_only: bool) -> Result<Outcome, Failure> {
    let spec = BasisSpec::new(n, e, min_valency).ok_or_else(|| {
        Failure::usage(format!(
            "no simple graphs with n = {n}, e = {e}, min valency {min_valency}"
        ))
    })?;
    if count_only {
        let (total, zero) = enumerate_counts_only(spec);
        let nonzero = total - zero;
        return Ok(Outcome::ok(
            format!("total={total} zero={zero} nonzero={nonzero}\n"),
            json!({ "command": "enumerate", "n": n, "e": e, "min_valency": min_valency,
                    "total": total, "zero": zero, "nonzero": nonzero }),
        ));
    }
    let report = enumerate_basis(spec);
    let nonzero = report.nonzero_basis.len();
    let text = format!(
        "# total={} zero={} nonzero={}\n{}",
        report.total,
        report.zero,
        nonzero,
        report.dump()
    );
    let basis: Vec<String> = report.nonzero_basis.iter().map(Graph::edge_field).collect();
    Ok(Outcome::ok(
        text,
        json!({ "command": "enumerate", "n": n, "e": e, "min_valency": min_valency,
                "total": report.total, "zero": report.zero, "nonzero": nonzero, "basis": basis }),
    ))
}

fn verify(target: &str) -> Result<Outcome, Failure> {
    let (sum, input_terms) = match catalog::named_cocycle(target) {
        Some(sum) => {
            let terms = match target {
                "gamma7" => catalog::gamma7_terms().len(),
                _ => sum.len(),
            };
            (sum, terms)
        }
        None => {
            let raw = read_terms(target)?;
            (to_sum(&raw), raw.len())
        }
    };
    let verdict = verify_cocycle(&sum)?;
    let residual_terms = verdict.residual.len();
    let (text, code) = if verdict.is_cocycle {
        (
            format!("verified: {input_terms} input terms, differential is empty\n"),
            0,
        )
    } else {
        (
            format!(
                "not a cocycle: {input_terms} input terms, residual has {residual_terms} terms\n{}",
                verdict.residual.to_text()
            ),
            1,
        )
    };
    Ok(Outcome {
        text,
        json: json!({ "command": "verify", "target": target, "input_terms": input_terms,
                      "is_cocycle": verdict.is_cocycle, "residual": sum_json(&verdict.residual) }),
        code,
    })
}

fn solve(n: usize, e: usize, fix: &[String]) -> Result<Outcome, Failure> {
    let fixed = fix
        .iter()
        .map(|f| parse_constraint(f).map_err(|err| Failure::usage(format!("--fix {f}: {err}"))))
        .collect::<Result<Vec<_>, _>>()?;
    for (g, _) in &fixed {
        if (g.vertex_count(), g.edge_count()) != (n, e) {
            return Err(Failure::usage(format!(
                "--fix graph {} is not in bi-grading ({n}, {e})",
                g.edge_field()
            )));
        }
    }
    let report = solve_cocycle(n, e, &fixed)?;
    let mut text = format!(
        "# free_parameters={} nullity={} terms={}\n",
        report.free_parameter_count,
        report.nullity,
        report.solution.len()
    );
    for (g, c) in report.solution.iter() {
        text += &serialize_graph(c, g);
        text.push('\n');
    }
    Ok(Outcome::ok(
        text,
        json!({ "command": "solve", "n": n, "e": e,
                "free_parameter_count": report.free_parameter_count,
                "nullity": report.nullity, "terms": sum_json(&report.solution) }),
    ))
}
