//! `qdn`: build operators, solve them, reduce symbols and run the
//! consistency suites from the command line.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use quantum_dn::dnbuild::{dn_operator, quantum_operator, restrict_r_n, specialize, DNConfig, Specialization};
use quantum_dn::frobenius::{log_solutions, newton_solve, FrobeniusError, LogSolution, PerturbedSeries};
use quantum_dn::gwring::{universal_i, GWSymbol, GwError, Reducer};
use quantum_dn::verify::{run_suite, Report, SuiteParams, SUITES};
use quantum_dn::weyl::{QDOperator, WeylError};
use quantum_dn::Error;

#[derive(Parser, Debug)]
#[command(name = "qdn", version, about = "Quantum differential operators and abstract Gromov-Witten symbols")]
struct Cli {
    /// Read the job from a JSON file instead of the command line.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand, Deserialize, Debug)]
#[serde(tag = "command", rename_all = "lowercase")]
enum Command {
    /// Print an operator.
    Operator(OperatorArgs),
    /// Solve an operator as a perturbed power series.
    Solve(SolveArgs),
    /// Reduce a symbol such as "<t1 H^2, H^1, H_0>" to a polynomial in the couplings.
    Reduce(ReduceArgs),
    /// Print the universal series I or its regularization.
    Universal(UniversalArgs),
    /// Run a named consistency suite.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
enum Kind {
    /// det_right(D - A)
    Quantum,
    /// The quantum operator with q^k P(D) replaced by q^k P(D) (D+1)...(D+k).
    Regularized,
    /// The operator of type DN.
    #[default]
    Dn,
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq, Default)]
#[serde(rename_all = "lowercase")]
enum Format {
    #[default]
    Text,
    Json,
    Latex,
}

#[derive(Args, Deserialize, Debug, Default)]
#[serde(default, deny_unknown_fields)]
struct OperatorSelection {
    /// Size parameter N (matrices are (N+1) x (N+1)).
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_enum)]
    kind: Option<Kind>,
    /// Drop a_0_0 (the geometric convention).
    #[arg(long)]
    geometric: bool,
    /// Impose a_ij = a_{N-j,N-i}.
    #[arg(long)]
    symmetrize: bool,
    /// JSON file of coupling values, e.g. {"assign": {"a_0_2": 27}}.
    #[arg(long, value_name = "FILE")]
    spec: Option<PathBuf>,
    /// Projective space P^N: sets N and the matching specialization.
    #[arg(long, value_name = "N")]
    pn: Option<u32>,
}

#[derive(Args, Deserialize, Debug, Default)]
#[serde(default, deny_unknown_fields)]
struct OperatorArgs {
    #[command(flatten)]
    #[serde(flatten)]
    select: OperatorSelection,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Deserialize, Debug, Default)]
#[serde(default, deny_unknown_fields)]
struct SolveArgs {
    #[command(flatten)]
    #[serde(flatten)]
    select: OperatorSelection,
    /// Highest power of q kept.
    #[arg(long, default_value_t = 6)]
    #[serde(default = "default_qmax")]
    qmax: usize,
    /// Number of powers of h kept; defaults to the order of the operator.
    #[arg(long)]
    hmax: Option<usize>,
    /// Print the logarithmic solutions S_0, S_1, ... instead.
    #[arg(long)]
    log: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

fn default_qmax() -> usize {
    6
}

#[derive(Args, Deserialize, Debug, Default)]
#[serde(default, deny_unknown_fields)]
struct ReduceArgs {
    symbol: String,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args, Deserialize, Debug, Default)]
#[serde(default, deny_unknown_fields)]
struct UniversalArgs {
    #[arg(long, default_value_t = 4)]
    #[serde(default = "default_universal_qmax")]
    qmax: usize,
    #[arg(long, default_value_t = 3)]
    #[serde(default = "default_universal_hmax")]
    hmax: usize,
    /// Print the regularized series instead of I.
    #[arg(long)]
    regularized: bool,
    /// Restrict to size N (couplings a_ij with j > N and a_0_0 set to zero).
    #[arg(long)]
    n: Option<u32>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

fn default_universal_qmax() -> usize {
    4
}

fn default_universal_hmax() -> usize {
    3
}

#[derive(Args, Deserialize, Debug, Default)]
#[serde(default, deny_unknown_fields)]
struct VerifyArgs {
    /// One of paths, restriction, universality, appendix, flatness, confluence.
    suite: String,
    /// Seed for the randomized suites.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

/// Exit status 2: the input could not be used.
/// Exit status 3: an internal consistency assertion failed.
enum Failure {
    Config(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Gw(
                GwError::MeasureNotDecreasing { .. } | GwError::DegreeNonzero { .. } | GwError::PreconditionFailed(_),
            )
            | Error::Weyl(WeylError::NotLeftDivisible { .. }) => Failure::Internal(e.to_string()),
            _ => Failure::Config(e.to_string()),
        }
    }
}

impl From<GwError> for Failure {
    fn from(e: GwError) -> Self {
        Error::from(e).into()
    }
}

impl From<WeylError> for Failure {
    fn from(e: WeylError) -> Self {
        Error::from(e).into()
    }
}

impl From<FrobeniusError> for Failure {
    fn from(e: FrobeniusError) -> Self {
        Error::from(e).into()
    }
}

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| config(format!("{}: {e}", path.display())))
}

fn json<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

struct Selected {
    n: u32,
    kind: Kind,
    op: QDOperator,
}

fn select_operator(sel: &OperatorSelection, default_kind: Kind) -> Result<Selected, Failure> {
    let n = match (sel.n, sel.pn) {
        (Some(n), Some(p)) if n != p => return Err(config(format!("--n {n} conflicts with --pn {p}"))),
        (Some(n), _) | (None, Some(n)) => n,
        (None, None) => return Err(config("--n is required")),
    };
    if n == 0 {
        return Err(config("N must be at least 1"));
    }
    let kind = sel.kind.unwrap_or(default_kind);
    let cfg = DNConfig { n, include_a00: !sel.geometric, symmetrize: sel.symmetrize };
    let mut op = match kind {
        Kind::Quantum => quantum_operator(&cfg),
        Kind::Regularized => quantum_operator(&cfg).regularize(),
        Kind::Dn => dn_operator(&cfg)?,
    };
    if sel.pn.is_some() {
        op = specialize(&op, &Specialization::projective_space(n));
    }
    if let Some(path) = &sel.spec {
        let s: Specialization = read_json(path)?;
        op = specialize(&op, &s);
    }
    Ok(Selected { n, kind, op })
}

fn cmd_operator(args: &OperatorArgs) -> Result<String, Failure> {
    let op = select_operator(&args.select, Kind::Dn)?.op;
    Ok(match args.format {
        Format::Text => format!("{op}\n"),
        Format::Json => json(&op),
        Format::Latex => format!("{}\n", op.to_latex()),
    })
}

fn series_latex(s: &PerturbedSeries) -> String {
    let mut out = String::new();
    for (i, m, c) in s.nonzero_terms() {
        let _ = writeln!(out, "h^{{{i}}} q^{{{m}}}: {}", c.to_latex());
    }
    out
}

#[derive(Serialize)]
struct LogTerm {
    t: usize,
    q: usize,
    poly: quantum_dn::exactalg::CoefPoly,
}

#[derive(Serialize)]
struct LogJson {
    k: usize,
    terms: Vec<LogTerm>,
}

fn log_json(logs: &[LogSolution]) -> String {
    let out: Vec<LogJson> = logs
        .iter()
        .map(|l| LogJson {
            k: l.k,
            terms: l
                .components
                .iter()
                .enumerate()
                .flat_map(|(t, series)| {
                    series.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(q, c)| LogTerm {
                        t,
                        q,
                        poly: c.clone(),
                    })
                })
                .collect(),
        })
        .collect();
    json(&out)
}

fn cmd_solve(args: &SolveArgs) -> Result<String, Failure> {
    let default_kind = if args.select.pn.is_some() { Kind::Regularized } else { Kind::Dn };
    let sel = select_operator(&args.select, default_kind)?;
    if args.qmax == 0 {
        return Err(config("--qmax must be at least 1"));
    }
    let order = match sel.kind {
        Kind::Dn => sel.n as usize,
        Kind::Quantum | Kind::Regularized => sel.n as usize + 1,
    };
    let hmax = args.hmax.unwrap_or(order);
    if hmax == 0 {
        return Err(config("--hmax must be at least 1"));
    }
    let series = newton_solve(&sel.op, hmax, args.qmax)?;
    if args.log {
        let logs = log_solutions(&series);
        return Ok(match args.format {
            Format::Json => log_json(&logs),
            Format::Text | Format::Latex => logs.iter().map(ToString::to_string).collect(),
        });
    }
    Ok(match args.format {
        Format::Text => series.to_string(),
        Format::Json => json(&series),
        Format::Latex => series_latex(&series),
    })
}

fn cmd_reduce(args: &ReduceArgs) -> Result<String, Failure> {
    let s: GWSymbol = args.symbol.parse().map_err(|e: GwError| config(e.to_string()))?;
    if s.is_trivially_zero() {
        eprintln!("note: {s} has a negative entry or negative degree and vanishes");
    }
    let v = Reducer::default().reduce(&s)?;
    Ok(match args.format {
        Format::Text => format!("{v}\n"),
        Format::Json => json(&v),
        Format::Latex => format!("{}\n", v.to_latex()),
    })
}

fn cmd_universal(args: &UniversalArgs) -> Result<String, Failure> {
    if args.qmax == 0 || args.hmax == 0 {
        return Err(config("--qmax and --hmax must be at least 1"));
    }
    let (i, tilde) = universal_i(&Reducer::default(), args.qmax, args.hmax)?;
    let mut series = if args.regularized { tilde } else { i };
    if let Some(n) = args.n {
        series = restrict_r_n(&series, n, true);
    }
    Ok(match args.format {
        Format::Text => series.to_string(),
        Format::Json => json(&series),
        Format::Latex => series_latex(&series),
    })
}

fn report_text(r: &Report) -> String {
    let mut out = String::new();
    for c in &r.checks {
        let mark = if c.passed { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "[{mark}] {}", c.label);
        if !c.passed && !c.detail.is_empty() {
            let _ = writeln!(out, "       {}", c.detail);
        }
    }
    let _ = writeln!(out, "{}: {}", r.suite, if r.passed { "passed" } else { "FAILED" });
    out
}

fn cmd_verify(args: &VerifyArgs) -> Result<(String, bool), Failure> {
    let mut params = SuiteParams::default();
    if let Some(seed) = args.seed {
        params.seed = seed;
    }
    let report = run_suite(&args.suite, &params)?
        .ok_or_else(|| config(format!("unknown suite {:?}; expected one of {}", args.suite, SUITES.join(", "))))?;
    let text = match args.format {
        Format::Json => json(&report),
        Format::Text => report_text(&report),
        Format::Latex => return Err(config("verify reports are text or json")),
    };
    Ok((text, report.passed))
}

fn run(cli: Cli) -> Result<(String, bool), Failure> {
    let command = match (cli.command, cli.config) {
        (Some(c), None) => c,
        (None, Some(path)) => read_json(&path)?,
        _ => return Err(config("give a subcommand or --config FILE")),
    };
    match &command {
        Command::Operator(a) => cmd_operator(a).map(|s| (s, true)),
        Command::Solve(a) => cmd_solve(a).map(|s| (s, true)),
        Command::Reduce(a) => cmd_reduce(a).map(|s| (s, true)),
        Command::Universal(a) => cmd_universal(a).map(|s| (s, true)),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok((out, passed)) => {
            print!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Config(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
