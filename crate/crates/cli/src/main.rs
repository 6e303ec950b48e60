//! Command-line front end. Results go to stdout (or --out PATH) as
//! single-line JSON, matrices optionally as csv; diagnostics go to stderr.
//! Exit codes: 0 success, 1 for a negative verification result (array not
//! doubly stochastic, support not forced, conditions violated), 2 for usage
//! errors and invalid input.

use std::error::Error;
use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use dsarray::io::{
    catalog_to_jsonl, matrix_from_csv, matrix_from_json, matrix_to_csv, matrix_to_json,
    support_from_json, tree_from_json, tree_to_json,
};
use dsarray::{
    array_to_tree, check_support_conditions, count_extremal_formula, count_tree_classes,
    enumerate_extremal_parallel, enumeration_summary, equivalence_classes, euclid_array,
    extremal_with_support_size, lemma_array, loukaki_pair, min_support_array, min_support_size,
    solve_support, trapezoid_array, tree_to_array, verify_report, BlockMethod, ExactMatrix,
    Rational, SolveOutcome,
};

#[derive(Parser)]
#[command(
    name = "dsarray",
    version,
    about = "Construct, verify, and enumerate doubly stochastic arrays in exact arithmetic"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Construct an extremal n x m array
    Construct {
        #[arg(long, value_enum)]
        method: Method,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        /// Connected component count, for the lemma and support-size methods
        #[arg(long)]
        s: Option<usize>,
        /// Coprime-block construction used inside min-support
        #[arg(long, value_enum)]
        block_method: Option<BlockMethodArg>,
        #[command(flatten)]
        output: MatrixOutput,
    },
    /// Report whether an array is doubly stochastic and extremal
    Verify {
        /// Matrix file (JSON or csv, detected by content), or - for stdin
        #[arg(default_value = "-")]
        input: String,
        /// Exit nonzero unless the array is extremal, not merely doubly stochastic
        #[arg(long)]
        require_extremal: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Solve for the doubly stochastic array with support exactly S
    SolveSupport {
        /// Support file (JSON), or - for stdin
        #[arg(default_value = "-")]
        support: String,
        #[command(flatten)]
        output: Output,
    },
    /// Build the extremal n x (n+1) array of an edge-labeled tree
    TreeToArray {
        /// Tree file (JSON), or - for stdin
        #[arg(default_value = "-")]
        tree: String,
        #[command(flatten)]
        output: MatrixOutput,
    },
    /// Recover the edge-labeled tree of an extremal n x (n+1) array
    ArrayToTree {
        /// Matrix file (JSON or csv, detected by content), or - for stdin
        #[arg(default_value = "-")]
        input: String,
        #[command(flatten)]
        output: Output,
    },
    /// Check the two conditions a support of an extremal n x (kn+1) array must satisfy
    SupportCheck {
        #[arg(long)]
        k: usize,
        /// Support file (JSON), or - for stdin
        #[arg(default_value = "-")]
        support: String,
        #[command(flatten)]
        output: Output,
    },
    /// Enumerate every extremal array on an n x m grid (guarded to n*m <= 30)
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Emit only the number of extremal arrays
        #[arg(long)]
        count_only: bool,
        /// Group the catalog into row/column-permutation classes
        #[arg(long)]
        classes: bool,
        /// Also write the full catalog to this file, one JSON matrix per line
        #[arg(long, value_name = "PATH")]
        catalog: Option<PathBuf>,
        #[command(flatten)]
        output: Output,
    },
    /// Count extremal n x (n+1) arrays by closed formula, without enumerating
    Count {
        #[arg(long)]
        n: usize,
        /// Also count permutation classes (guarded to n <= 7)
        #[arg(long)]
        classes: bool,
        #[command(flatten)]
        output: Output,
    },
    /// Emit two inequivalent extremal n x (n+1) arrays with equal entry multisets
    Loukaki {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        output: Output,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    /// Division-chain construction, minimal support, works for every n, m
    Euclid,
    /// Trapezoid-profile construction, coprime n, m only
    Trapezoid,
    /// Minimal support n + m - gcd(n, m) via coprime blocks
    MinSupport,
    /// Connected array on an n x (n + d) grid with d = m - n dividing n
    Lemma,
    /// Extremal array with support size exactly n + m - s
    SupportSize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BlockMethodArg {
    Euclid,
    Trapezoid,
}

impl From<BlockMethodArg> for BlockMethod {
    fn from(arg: BlockMethodArg) -> Self {
        match arg {
            BlockMethodArg::Euclid => BlockMethod::Euclid,
            BlockMethodArg::Trapezoid => BlockMethod::Trapezoid,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

/// Destination shared by every subcommand.
#[derive(Args)]
struct Output {
    /// Write the result to this file instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Destination plus format, for subcommands whose payload is one matrix.
#[derive(Args)]
struct MatrixOutput {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    target: Output,
}

type CmdResult = Result<u8, Box<dyn Error>>;

fn main() -> ExitCode {
    match run(Cli::parse().command) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> CmdResult {
    match command {
        Command::Construct {
            method,
            n,
            m,
            s,
            block_method,
            output,
        } => construct(method, n, m, s, block_method, output),
        Command::Verify {
            input,
            require_extremal,
            output,
        } => verify(&input, require_extremal, output),
        Command::SolveSupport { support, output } => solve(&support, output),
        Command::TreeToArray { tree, output } => tree_to_array_cmd(&tree, output),
        Command::ArrayToTree { input, output } => array_to_tree_cmd(&input, output),
        Command::SupportCheck { k, support, output } => support_check(k, &support, output),
        Command::Enumerate {
            n,
            m,
            threads,
            count_only,
            classes,
            catalog,
            output,
        } => enumerate(n, m, threads, count_only, classes, catalog, output),
        Command::Count { n, classes, output } => count(n, classes, output),
        Command::Loukaki { n, output } => loukaki(n, output),
    }
}

fn read_input(path: &str) -> Result<String, Box<dyn Error>> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        Ok(fs::read_to_string(path).map_err(|e| format!("{path}: {e}"))?)
    }
}

fn read_matrix(path: &str) -> Result<ExactMatrix, Box<dyn Error>> {
    let text = read_input(path)?;
    Ok(if text.trim_start().starts_with('{') {
        matrix_from_json(&text)?
    } else {
        matrix_from_csv(&text)?
    })
}

fn emit(text: &str, output: &Output) -> Result<(), Box<dyn Error>> {
    match &output.out {
        Some(path) => {
            fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn emit_line(body: &impl Serialize, output: &Output) -> Result<(), Box<dyn Error>> {
    emit(&format!("{}\n", serde_json::to_string(body)?), output)
}

fn emit_matrix(matrix: &ExactMatrix, output: &MatrixOutput) -> CmdResult {
    let text = match output.format {
        Format::Json => format!("{}\n", matrix_to_json(matrix)),
        Format::Csv => matrix_to_csv(matrix)?,
    };
    emit(&text, &output.target)?;
    Ok(0)
}

/// Matrix embedded in a larger report; same shape as the standalone format.
#[derive(Serialize)]
struct MatrixBody {
    n: usize,
    m: usize,
    entries: Vec<Vec<Rational>>,
}

impl From<&ExactMatrix> for MatrixBody {
    fn from(matrix: &ExactMatrix) -> Self {
        MatrixBody {
            n: matrix.n(),
            m: matrix.m(),
            entries: matrix.rows().map(<[_]>::to_vec).collect(),
        }
    }
}

fn construct(
    method: Method,
    n: usize,
    m: usize,
    s: Option<usize>,
    block_method: Option<BlockMethodArg>,
    output: MatrixOutput,
) -> CmdResult {
    if block_method.is_some() && method != Method::MinSupport {
        return Err("--block-method applies only to the min-support method".into());
    }
    if s.is_some() && !matches!(method, Method::Lemma | Method::SupportSize) {
        return Err("--s applies only to the lemma and support-size methods".into());
    }
    let need_s = || s.ok_or("this method needs --s (number of connected components)");
    let matrix = match method {
        Method::Euclid => euclid_array(n, m)?,
        Method::Trapezoid => trapezoid_array(n, m)?,
        Method::MinSupport => {
            min_support_array(n, m, block_method.unwrap_or(BlockMethodArg::Euclid).into())?
        }
        Method::Lemma => {
            let d = m
                .checked_sub(n)
                .filter(|&d| d >= 2 && n.is_multiple_of(d))
                .ok_or_else(|| {
                    format!("lemma shape needs m - n >= 2 and dividing n; got {n} x {m}")
                })?;
            lemma_array(d, n / d, need_s()?)?
        }
        Method::SupportSize => extremal_with_support_size(n, m, need_s()?)?,
    };
    emit_matrix(&matrix, &output)
}

fn verify(input: &str, require_extremal: bool, output: Output) -> CmdResult {
    let matrix = read_matrix(input)?;
    let report = verify_report(&matrix);
    emit_line(&report, &output)?;
    let accepted = report.is_doubly_stochastic && (report.is_extremal || !require_extremal);
    Ok(u8::from(!accepted))
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "lowercase")]
enum SolveBody {
    Forced { matrix: MatrixBody },
    Infeasible { reason: String },
    Underdetermined { cycle: Vec<[usize; 2]> },
}

fn solve(path: &str, output: Output) -> CmdResult {
    let support = support_from_json(&read_input(path)?)?;
    let (body, code) = match solve_support(&support) {
        SolveOutcome::Forced(matrix) => (
            SolveBody::Forced {
                matrix: MatrixBody::from(&matrix),
            },
            0,
        ),
        SolveOutcome::Infeasible(reason) => (
            SolveBody::Infeasible {
                reason: reason.to_string(),
            },
            1,
        ),
        SolveOutcome::Underdetermined { cycle } => (
            SolveBody::Underdetermined {
                cycle: cycle.iter().map(|&(r, c)| [r + 1, c + 1]).collect(),
            },
            1,
        ),
    };
    emit_line(&body, &output)?;
    Ok(code)
}

fn tree_to_array_cmd(path: &str, output: MatrixOutput) -> CmdResult {
    let tree = tree_from_json(&read_input(path)?)?;
    emit_matrix(&tree_to_array(&tree), &output)
}

fn array_to_tree_cmd(path: &str, output: Output) -> CmdResult {
    let matrix = read_matrix(path)?;
    match array_to_tree(&matrix) {
        Ok(tree) => {
            emit(&format!("{}\n", tree_to_json(&tree)), &output)?;
            Ok(0)
        }
        Err(err @ dsarray::Error::NotExtremal { .. }) => {
            eprintln!("error: {err}");
            Ok(1)
        }
        Err(err) => Err(err.into()),
    }
}

#[derive(Serialize)]
struct CheckBody {
    ok: bool,
    expected_row_cells: usize,
    row_violations: Vec<RowViolationBody>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cycle: Option<Vec<[usize; 2]>>,
}

#[derive(Serialize)]
struct RowViolationBody {
    row: usize,
    found: usize,
}

fn support_check(k: usize, path: &str, output: Output) -> CmdResult {
    let support = support_from_json(&read_input(path)?)?;
    let report = check_support_conditions(k, &support)?;
    let body = CheckBody {
        ok: report.ok(),
        expected_row_cells: report.expected_row_cells,
        row_violations: report
            .row_violations
            .iter()
            .map(|v| RowViolationBody {
                row: v.row + 1,
                found: v.found,
            })
            .collect(),
        cycle: report
            .cycle
            .as_ref()
            .map(|cells| cells.iter().map(|&(r, c)| [r + 1, c + 1]).collect()),
    };
    emit_line(&body, &output)?;
    Ok(u8::from(!report.ok()))
}

#[derive(Serialize)]
struct EnumerateBody {
    n: usize,
    m: usize,
    count: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    support_size_spectrum: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    min_support_size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lower_bound_ok: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    classes: Option<Vec<ClassBody>>,
}

#[derive(Serialize)]
struct ClassBody {
    size: usize,
    representative: MatrixBody,
}

fn enumerate(
    n: usize,
    m: usize,
    threads: usize,
    count_only: bool,
    classes: bool,
    catalog_path: Option<PathBuf>,
    output: Output,
) -> CmdResult {
    if count_only && classes {
        return Err("--count-only and --classes are mutually exclusive".into());
    }
    let mut body = if classes || catalog_path.is_some() {
        let catalog = enumerate_extremal_parallel(n, m, threads)?;
        if let Some(path) = catalog_path {
            fs::write(&path, catalog_to_jsonl(&catalog))
                .map_err(|e| format!("{}: {e}", path.display()))?;
        }
        let spectrum: std::collections::BTreeSet<usize> = catalog
            .matrices()
            .iter()
            .map(|matrix| dsarray::support(matrix).len())
            .collect();
        let class_bodies = classes
            .then(|| equivalence_classes(&catalog))
            .transpose()?
            .map(|classes| {
                classes
                    .iter()
                    .map(|class| ClassBody {
                        size: class.size,
                        representative: MatrixBody::from(&class.representative),
                    })
                    .collect()
            });
        EnumerateBody {
            n,
            m,
            count: catalog.matrices().len() as u64,
            support_size_spectrum: Some(spectrum.into_iter().collect()),
            min_support_size: None,
            lower_bound_ok: None,
            classes: class_bodies,
        }
    } else {
        let summary = enumeration_summary(n, m, threads)?;
        EnumerateBody {
            n,
            m,
            count: summary.count,
            support_size_spectrum: (!count_only).then_some(summary.spectrum),
            min_support_size: None,
            lower_bound_ok: None,
            classes: None,
        }
    };
    if let Some(spectrum) = &body.support_size_spectrum {
        let bound = min_support_size(n, m);
        body.min_support_size = Some(bound);
        body.lower_bound_ok = Some(spectrum.first() == Some(&bound));
    }
    emit_line(&body, &output)?;
    Ok(0)
}

#[derive(Serialize)]
struct CountBody {
    count: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    classes: Option<usize>,
}

fn count(n: usize, classes: bool, output: Output) -> CmdResult {
    if n == 0 {
        return Err("row count must be positive".into());
    }
    let body = CountBody {
        count: count_extremal_formula(n).to_string(),
        classes: classes.then(|| count_tree_classes(n)).transpose()?,
    };
    emit_line(&body, &output)?;
    Ok(0)
}

#[derive(Serialize)]
struct PairBody {
    n: usize,
    m: usize,
    first: MatrixBody,
    second: MatrixBody,
}

fn loukaki(n: usize, output: Output) -> CmdResult {
    let (first, second) = loukaki_pair(n)?;
    let body = PairBody {
        n,
        m: n + 1,
        first: MatrixBody::from(&first),
        second: MatrixBody::from(&second),
    };
    emit_line(&body, &output)?;
    Ok(0)
}
