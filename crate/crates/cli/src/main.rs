//! Command-line front end for the meanvar library.
//!
//! Every subcommand reads exactly one input (a model JSON file or a return
//! CSV), writes machine-first JSON to standard output (tables with
//! `--pretty`, plot-ready CSV where noted), and exits with:
//!
//! - 0 on success,
//! - 1 on usage or I/O errors (grammar and message on standard error),
//! - 2 on validation errors (malformed or inconsistent input),
//! - 3 on degenerate-math errors (well-formed input for which the requested
//!   quantity does not exist, such as an undefined tangency).
//!
//! Validation and degenerate-math errors serialize their kind, message, and
//! certificate (when present) as JSON on standard output.

use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use meanvar::{
    beta, capm_expected_return, cml_line, combine_funds_with, default_labels, frontier_csv,
    max_sharpe_portfolio, min_variance_for_return, min_variance_portfolio,
    min_variance_with_riskfree, sample_frontier, sml_classify, tangent_line, tol, validate_model,
    verify_max_sharpe, verify_min_variance, verify_target_return, CombineOptions,
    CombinedPortfolio, Ddof, FrontierPoint, LineSpec, MarketModel, OracleReport, PortfolioSolution,
    SmlClass, SpdMode, ValidatedModel, Warning,
};
use serde::{Deserialize, Serialize};

#[derive(Parser)]
#[command(
    name = "meanvar",
    version,
    about = "Mean-variance portfolio analytics on model files and return CSVs"
)]
struct Cli {
    /// Render human-readable tables instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a model file: shape, finiteness, symmetry, positive definiteness.
    Validate(ValidateArgs),
    /// Estimate mean vector and covariance matrix from a return CSV.
    Estimate(EstimateArgs),
    /// Global minimum-variance portfolio.
    Minvar(ModelArg),
    /// Maximum-Sharpe (tangency) portfolio and its tangent line.
    Tangency(TangencyArgs),
    /// Minimum-variance portfolio for a target mean return.
    Target(TargetArgs),
    /// Sample the minimum-variance frontier.
    Frontier(FrontierArgs),
    /// Combine frontier funds and check the result for efficiency.
    Separate(SeparateArgs),
    /// Expected return and mispricing classification on the security market line.
    Capm(CapmArgs),
    /// Monte Carlo scan for random portfolios beating a closed-form solution.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct ModelArg {
    /// Model JSON file: {"labels": [...], "mu": [...], "sigma": [[...], ...], "rf": 0.015}.
    #[arg(long)]
    model: PathBuf,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    model: ModelArg,
    /// Allowed absolute asymmetry |S[i,j] - S[j,i]| before rejection.
    #[arg(long, default_value_t = tol::SYM_TOL)]
    sym_tol: f64,
    /// Relative Cholesky pivot floor; overrides the library default.
    #[arg(long)]
    pivot_floor: Option<f64>,
}

#[derive(Args)]
struct EstimateArgs {
    /// Return CSV: one row per period, one column per asset.
    #[arg(long)]
    returns: PathBuf,
    /// Treat the first row as asset labels.
    #[arg(long)]
    has_header: bool,
    /// Delta degrees of freedom: 0 divides by T, 1 by T-1.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    ddof: u8,
    /// Risk-free rate to embed in the emitted model.
    #[arg(long)]
    rf: Option<f64>,
}

#[derive(Args)]
struct TangencyArgs {
    #[command(flatten)]
    model: ModelArg,
    /// Risk-free rate; falls back to the model file's rf field.
    #[arg(long)]
    rf: Option<f64>,
}

#[derive(Args)]
struct TargetArgs {
    #[command(flatten)]
    model: ModelArg,
    /// Target mean return the portfolio must realize.
    #[arg(long)]
    mu0: f64,
    /// Risk-free rate; switches to the mixed risky/risk-free allocation.
    #[arg(long)]
    rf: Option<f64>,
}

#[derive(Args)]
struct FrontierArgs {
    #[command(flatten)]
    model: ModelArg,
    /// Lowest sampled mean return.
    #[arg(long)]
    lo: f64,
    /// Highest sampled mean return.
    #[arg(long)]
    hi: f64,
    /// Number of evenly spaced samples (at least 2).
    #[arg(long)]
    k: usize,
    /// Risk-free rate; adds the capital market line to JSON output. Falls
    /// back to the model file's rf field.
    #[arg(long)]
    rf: Option<f64>,
    /// Keep points on the inefficient lower branch instead of dropping them.
    #[arg(long)]
    full: bool,
    /// Output format; csv emits the plot-ready mu,sigma,efficient table.
    #[arg(long, value_enum, default_value_t = Format::Json, conflicts_with = "pretty")]
    format: Format,
}

#[derive(Args)]
struct SeparateArgs {
    #[command(flatten)]
    model: ModelArg,
    /// Funds JSON file: {"funds": [[w11, ...], [w21, ...], ...]}.
    #[arg(long)]
    funds: PathBuf,
    /// Combination coefficients, one per fund, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    coeffs: Vec<f64>,
    /// Allowed |sum(coefficients) - 1|.
    #[arg(long, default_value_t = tol::COEFF_SUM_TOL)]
    coeff_tol: f64,
    /// Allowed |sum(fund weights) - 1| per fund.
    #[arg(long, default_value_t = tol::COEFF_SUM_TOL)]
    fund_budget_tol: f64,
    /// Relative sigma gap under which the combination counts as efficient.
    #[arg(long, default_value_t = tol::EFFICIENCY_REL_TOL)]
    efficiency_tol: f64,
}

#[derive(Args)]
#[command(group(ArgGroup::new("beta_source").required(true).args(["beta", "cov_as"])))]
struct CapmArgs {
    /// Risk-free rate (the line's intercept).
    #[arg(long)]
    rf: f64,
    /// Expected return of the systemic (market) portfolio.
    #[arg(long)]
    mus: f64,
    /// Asset beta, given directly.
    #[arg(long, conflicts_with_all = ["cov_as", "var_s"])]
    beta: Option<f64>,
    /// Covariance of the asset with the systemic portfolio; needs --var-s.
    #[arg(long, requires = "var_s")]
    cov_as: Option<f64>,
    /// Variance of the systemic portfolio; needs --cov-as.
    #[arg(long, requires = "cov_as")]
    var_s: Option<f64>,
    /// Observed mean return to classify against the line.
    #[arg(long)]
    observed: Option<f64>,
    /// Half-width of the band classified as fairly priced.
    #[arg(long, default_value_t = tol::SML_CLASSIFY_TOL)]
    tol: f64,
}

#[derive(Args)]
struct OracleArgs {
    #[command(flatten)]
    model: ModelArg,
    /// Closed form to scan against.
    #[arg(long, value_enum)]
    objective: Objective,
    /// Number of random feasible portfolios to draw.
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    /// RNG seed; identical seeds reproduce reports bit for bit.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Target mean return; required for the target objective.
    #[arg(long)]
    mu0: Option<f64>,
    /// Risk-free rate for the sharpe objective; falls back to the model's rf.
    #[arg(long)]
    rf: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Objective {
    Minvar,
    Sharpe,
    Target,
}

/// Failures ranked by exit code: usage and I/O problems go to standard error
/// with code 1; library errors serialize to standard output with code 2
/// (validation) or 3 (degenerate math).
enum Failure {
    Usage(String),
    Io(String),
    Math(meanvar::Error),
}

impl From<meanvar::Error> for Failure {
    fn from(e: meanvar::Error) -> Self {
        Failure::Math(e)
    }
}

/// Rust ignores SIGPIPE by default, turning a closed pipe (`meanvar ... |
/// head`) into a printing panic. Restore the default so the process dies
/// quietly like any other stream-producing tool.
#[cfg(unix)]
fn reset_sigpipe() {
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
}

#[cfg(not(unix))]
fn reset_sigpipe() {}

fn main() -> ExitCode {
    reset_sigpipe();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version render to standard output with code 0; real
            // usage errors render the grammar to standard error.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) | Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Math(e)) => {
            println!("{}", error_json(&e));
            ExitCode::from(if e.is_degenerate() { 3 } else { 2 })
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Validate(args) => {
            let mode = match args.pivot_floor {
                Some(f) => SpdMode::PivotFloor(f),
                None => SpdMode::Default,
            };
            let vm = validate_model(load_model(&args.model.model)?, args.sym_tol, mode)?;
            if pretty {
                print_model_pretty(vm.model());
            } else {
                println!("{}", vm.model().to_json());
            }
            Ok(())
        }
        Command::Estimate(args) => {
            let file = File::open(&args.returns)
                .map_err(|e| Failure::Io(format!("{}: {e}", args.returns.display())))?;
            let series = meanvar::ingest_csv(file, args.has_header)?;
            let ddof = if args.ddof == 0 {
                Ddof::Population
            } else {
                Ddof::Sample
            };
            let mut model = meanvar::estimate_moments(&series, ddof);
            model.rf = args.rf;
            if pretty {
                print_model_pretty(&model);
            } else {
                println!("{}", model.to_json());
            }
            Ok(())
        }
        Command::Minvar(args) => {
            let vm = load_validated(&args)?;
            let sol = min_variance_portfolio(&vm);
            emit_solution(&vm, &sol, pretty)
        }
        Command::Tangency(args) => {
            let vm = load_validated(&args.model)?;
            let rf = args.rf.or(vm.rf()).ok_or_else(|| {
                Failure::Usage("tangency needs --rf or an rf field in the model file".into())
            })?;
            let portfolio = max_sharpe_portfolio(&vm, rf)?;
            let line = tangent_line(&vm, rf)?;
            if pretty {
                print_solution_pretty(&vm, &portfolio);
                println!("{:<12} {:>14.6}", "line slope", line.slope);
                println!("{:<12} {:>14.6}", "intercept", line.intercept);
            } else {
                emit(&TangencyReport { portfolio, line })?;
            }
            Ok(())
        }
        Command::Target(args) => {
            let vm = load_validated(&args.model)?;
            let sol = match args.rf {
                Some(rf) => min_variance_with_riskfree(&vm, rf, args.mu0)?,
                None => min_variance_for_return(&vm, args.mu0)?,
            };
            emit_solution(&vm, &sol, pretty)
        }
        Command::Frontier(args) => {
            let vm = load_validated(&args.model)?;
            let points = sample_frontier(&vm, args.lo, args.hi, args.k, args.full)?;
            let rf = args.rf.or(vm.rf());
            match args.format {
                Format::Csv => {
                    if args.rf.is_some() {
                        return Err(Failure::Usage(
                            "the capital market line is only part of JSON output; \
                             drop --rf or use --format json"
                                .into(),
                        ));
                    }
                    print!("{}", frontier_csv(&points));
                }
                Format::Json if pretty => {
                    println!("{:>12} {:>12} {:>10}", "mu", "sigma", "efficient");
                    for p in &points {
                        println!("{:>12.6} {:>12.6} {:>10}", p.mu, p.sigma, p.efficient);
                    }
                    if let Some(rf) = rf {
                        let line = cml_line(&vm, rf)?;
                        println!("{:<12} {:>14.6}", "cml slope", line.slope);
                        println!("{:<12} {:>14.6}", "intercept", line.intercept);
                    }
                }
                Format::Json => {
                    let cml = match rf {
                        Some(rf) => Some(cml_line(&vm, rf)?),
                        None => None,
                    };
                    emit(&FrontierReport { points, cml })?;
                }
            }
            Ok(())
        }
        Command::Separate(args) => {
            let vm = load_validated(&args.model)?;
            let funds = load_funds(&args.funds)?;
            let opts = CombineOptions {
                coeff_sum_tol: args.coeff_tol,
                fund_budget_tol: args.fund_budget_tol,
                efficiency_rel_tol: args.efficiency_tol,
            };
            let combined = combine_funds_with(&vm, &funds, &args.coeffs, &opts)?;
            if pretty {
                print_combined_pretty(&vm, &combined);
            } else {
                emit(&combined)?;
            }
            Ok(())
        }
        Command::Capm(args) => {
            let b = match args.beta {
                Some(b) => b,
                // The group guarantees cov_as, and requires-chains give var_s.
                None => beta(
                    args.cov_as.expect("clap group"),
                    args.var_s.expect("clap requires"),
                )?,
            };
            let expected = capm_expected_return(args.rf, b, args.mus);
            let class = args.observed.map(|o| sml_classify(o, expected, args.tol));
            let report = CapmReport {
                beta: b,
                expected_return: expected,
                observed: args.observed,
                class,
            };
            if pretty {
                println!("{:<16} {:>12.6}", "beta", report.beta);
                println!("{:<16} {:>12.6}", "expected return", report.expected_return);
                if let (Some(o), Some(c)) = (report.observed, report.class) {
                    println!("{:<16} {:>12.6}", "observed", o);
                    println!("{:<16} {:>12}", "class", c.to_string());
                }
            } else {
                emit(&report)?;
            }
            Ok(())
        }
        Command::OracleCheck(args) => {
            let vm = load_validated(&args.model)?;
            let report = match args.objective {
                Objective::Minvar => verify_min_variance(&vm, args.samples, args.seed),
                Objective::Sharpe => {
                    let rf = args.rf.or(vm.rf()).ok_or_else(|| {
                        Failure::Usage(
                            "the sharpe objective needs --rf or an rf field in the model file"
                                .into(),
                        )
                    })?;
                    verify_max_sharpe(&vm, rf, args.samples, args.seed)?
                }
                Objective::Target => {
                    let mu0 = args
                        .mu0
                        .ok_or_else(|| Failure::Usage("the target objective needs --mu0".into()))?;
                    verify_target_return(&vm, mu0, args.samples, args.seed)?
                }
            };
            if pretty {
                print_oracle_pretty(&report);
            } else {
                emit(&report)?;
            }
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct TangencyReport {
    portfolio: PortfolioSolution,
    line: LineSpec,
}

#[derive(Serialize)]
struct FrontierReport {
    points: Vec<FrontierPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    cml: Option<LineSpec>,
}

#[derive(Serialize)]
struct CapmReport {
    beta: f64,
    expected_return: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    observed: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    class: Option<SmlClass>,
}

#[derive(Deserialize)]
struct FundsFile {
    funds: Vec<Vec<f64>>,
}

fn load_model(path: &PathBuf) -> Result<MarketModel, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    Ok(MarketModel::from_json(&text)?)
}

fn load_validated(args: &ModelArg) -> Result<ValidatedModel, Failure> {
    Ok(validate_model(
        load_model(&args.model)?,
        tol::SYM_TOL,
        SpdMode::Default,
    )?)
}

fn load_funds(path: &PathBuf) -> Result<Vec<Vec<f64>>, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let file: FundsFile = serde_json::from_str(&text).map_err(|e| {
        Failure::Math(meanvar::Error::MalformedInput {
            detail: format!("funds JSON: {e}"),
        })
    })?;
    Ok(file.funds)
}

fn emit<T: Serialize>(value: &T) -> Result<(), Failure> {
    println!(
        "{}",
        serde_json::to_string(value).expect("report serialization cannot fail")
    );
    Ok(())
}

fn emit_solution(
    vm: &ValidatedModel,
    sol: &PortfolioSolution,
    pretty: bool,
) -> Result<(), Failure> {
    if pretty {
        print_solution_pretty(vm, sol);
        Ok(())
    } else {
        emit(sol)
    }
}

fn error_json(e: &meanvar::Error) -> String {
    let mut error = serde_json::json!({
        "kind": e.kind(),
        "message": e.to_string(),
    });
    if let meanvar::Error::NotPositiveDefinite {
        column,
        pivot,
        certificate,
    } = e
    {
        error["column"] = serde_json::json!(column);
        error["pivot"] = serde_json::json!(pivot);
        error["certificate"] = serde_json::json!(certificate);
    }
    serde_json::json!({ "error": error }).to_string()
}

fn labels_for(model: &MarketModel) -> Vec<String> {
    if model.labels.is_empty() {
        default_labels(model.n())
    } else {
        model.labels.clone()
    }
}

fn warning_label(w: Warning) -> &'static str {
    match w {
        Warning::NegativeTangency => {
            "negative tangency: the stationary portfolio lies on the inefficient branch"
        }
        Warning::InefficientBranch => {
            "target below the frontier vertex: the solution is on the inefficient branch"
        }
    }
}

fn print_model_pretty(model: &MarketModel) {
    println!("{:<10} {:>12} {:>12}", "asset", "mu", "sigma");
    let labels = labels_for(model);
    for (i, label) in labels.iter().enumerate() {
        println!(
            "{:<10} {:>12.6} {:>12.6}",
            label,
            model.mu[i],
            model.sigma[(i, i)].sqrt()
        );
    }
    if let Some(rf) = model.rf {
        println!("{:<10} {:>12.6}", "rf", rf);
    }
}

fn print_solution_pretty(vm: &ValidatedModel, sol: &PortfolioSolution) {
    println!("{:<10} {:>12}", "asset", "weight");
    for (label, w) in labels_for(vm.model()).iter().zip(&sol.weights) {
        println!("{:<10} {:>12.6}", label, w);
    }
    if let Some(wf) = sol.wf {
        println!("{:<10} {:>12.6}", "risk-free", wf);
    }
    println!("{:<10} {:>12.6}", "mu", sol.mu);
    println!("{:<10} {:>12.6}", "sigma", sol.sigma);
    if let Some(s) = sol.sharpe {
        println!("{:<10} {:>12.6}", "sharpe", s);
    }
    println!("{:<10} {:>12.3e}", "kkt", sol.kkt_residual);
    for w in &sol.warnings {
        println!("warning: {}", warning_label(*w));
    }
}

fn print_combined_pretty(vm: &ValidatedModel, combined: &CombinedPortfolio) {
    print_solution_pretty(vm, &combined.solution);
    println!(
        "{:<16} {:>12.6}",
        "realized target", combined.realized_target
    );
    println!("{:<16} {:>12}", "efficient", combined.efficient);
    println!(
        "{:<16} {:>12.3e}",
        "efficiency gap", combined.efficiency_gap
    );
}

fn print_oracle_pretty(report: &OracleReport) {
    println!("{:<14} {:>18}", "objective", report.objective);
    println!("{:<14} {:>18}", "samples", report.samples);
    println!("{:<14} {:>18}", "seed", report.seed);
    println!(
        "{:<14} {:>18.12}",
        "closed form", report.closed_form_objective
    );
    println!("{:<14} {:>18.12}", "best sampled", report.best_objective);
    println!("{:<14} {:>18.3e}", "margin", report.margin);
    let beaten = report.margin < 0.0;
    println!("{:<14} {:>18}", "beaten", beaten);
}
