use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use scanstat::exactnum::{parse_rational, to_f64, Rational};
use scanstat::genseries::verify_series;
use scanstat::measures::{verify_measures, MeasureRow, MeasureSuiteConfig};
use scanstat::montecarlo::{coverage_dual, empirical_cdf, CdfEstimate, Geometry, SimConfig, DEFAULT_STREAMS};
use scanstat::report::{SuiteReport, SCHEMA_VERSION};
use scanstat::scanprob::{
    cross_check, evaluate, rational_grid, tabulate, CrossCheckConfig, Mode, ProbValue, Regime, StatKind,
};

#[derive(Parser)]
#[command(name = "scanstat", version, about = "Exact distributions of continuous scan statistics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one distribution function at one width.
    Eval {
        #[arg(long, value_parser = parse_stat)]
        stat: StatKind,
        /// Number of points.
        #[arg(long = "N")]
        n: i64,
        /// Window width as "p/q" or an exact decimal.
        #[arg(long, value_parser = parse_w)]
        w: Rational,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long, value_enum, default_value_t = EvalFormat::Text)]
        format: EvalFormat,
    },
    /// Tabulate exact and float values over a grid of N and w.
    Table {
        #[arg(long, value_parser = parse_stat)]
        stat: StatKind,
        /// Point counts: "3,5,8" or an inclusive range "3..12".
        #[arg(long = "N", value_parser = parse_ns)]
        ns: Ns,
        /// Widths as comma-separated rationals.
        #[arg(long, value_delimiter = ',', value_parser = parse_w, conflicts_with = "grid")]
        w: Vec<Rational>,
        /// Use the widths j/(grid+1) for j = 1..grid.
        #[arg(long)]
        grid: Option<i64>,
        #[arg(long, value_enum, default_value_t = RowFormat::Csv)]
        format: RowFormat,
    },
    /// Monte Carlo estimates of the minimum window width distribution.
    Simulate {
        #[arg(long = "N")]
        n: usize,
        /// Points the window must hold.
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value_t = GeometryArg::Circular)]
        geometry: GeometryArg,
        /// Widths as comma-separated rationals.
        #[arg(long, value_delimiter = ',', value_parser = parse_w, required = true)]
        w: Vec<Rational>,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STREAMS)]
        streams: u64,
        /// Estimate the circular survival through arc coverage instead.
        #[arg(long)]
        coverage: bool,
        /// Fail unless every exact value lies in the Wilson interval at this
        /// many standard normal quantiles.
        #[arg(long, value_name = "SIGMAS")]
        check: Option<f64>,
        #[arg(long, value_enum, default_value_t = RowFormat::Csv)]
        format: RowFormat,
    },
    /// Symbolic checks of the generating-function machinery.
    VerifySeries {
        #[arg(long, default_value_t = 10)]
        order: usize,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Closed-form measures against their numerical oracles.
    VerifyMeasures {
        #[arg(long, default_value_t = 5)]
        n_max: i64,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Skip the deterministic recursion oracle.
        #[arg(long)]
        no_recursion: bool,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
    /// Identities and invariants of the three distribution functions.
    CrossCheck {
        #[arg(long, default_value_t = 40)]
        n_max: i64,
        #[arg(long, default_value_t = 50)]
        grid: i64,
        #[arg(long, default_value_t = 12)]
        pathway_n_max: i64,
        #[arg(long, default_value_t = 20)]
        pathway_points: i64,
        #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
        format: ReportFormat,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Clone, Copy, ValueEnum)]
enum GeometryArg {
    Linear,
    Circular,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum EvalFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum RowFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Clone, Debug)]
struct Ns(Vec<i64>);

fn parse_stat(s: &str) -> Result<StatKind, String> {
    s.parse().map_err(|e: scanstat::Error| e.to_string())
}

fn parse_w(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_ns(s: &str) -> Result<Ns, String> {
    let num = |t: &str| t.trim().parse::<i64>().map_err(|_| format!("bad point count {t:?}"));
    if let Some((lo, hi)) = s.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi)?);
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        return Ok(Ns((lo..=hi).collect()));
    }
    s.split(',').map(num).collect::<Result<_, _>>().map(Ns)
}

enum Failure {
    Domain(String),
    Verification,
}

impl From<scanstat::Error> for Failure {
    fn from(e: scanstat::Error) -> Self {
        Self::Domain(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Self::Domain(format!("write failed: {e}"))
    }
}

type Outcome = Result<(), Failure>;

fn regime_label(r: Regime) -> &'static str {
    match r {
        Regime::BelowThreshold => "BELOW_THRESHOLD",
        Regime::Saturated => "SATURATED",
    }
}

#[derive(Serialize)]
struct EvalOutput {
    schema: u32,
    stat: StatKind,
    #[serde(rename = "N")]
    n: i64,
    w: String,
    mode: Mode,
    p: Option<String>,
    p_float: f64,
    survival: Option<String>,
    survival_float: f64,
    regime: Regime,
    active_terms: usize,
}

fn eval_output(stat: StatKind, n: i64, w: &Rational, mode: ModeArg) -> Result<EvalOutput, Failure> {
    let base = |mode, p: Option<String>, pf, s: Option<String>, sf, regime, terms| EvalOutput {
        schema: SCHEMA_VERSION,
        stat,
        n,
        w: w.to_string(),
        mode,
        p,
        p_float: pf,
        survival: s,
        survival_float: sf,
        regime,
        active_terms: terms,
    };
    let out = match mode {
        ModeArg::Exact => {
            let v: ProbValue<Rational> = evaluate(stat, n, w)?;
            base(
                Mode::Exact,
                Some(v.p.to_string()),
                to_f64(&v.p),
                Some(v.survival.to_string()),
                to_f64(&v.survival),
                v.regime,
                v.active_terms,
            )
        }
        ModeArg::Float => {
            let v: ProbValue<f64> = evaluate(stat, n, w)?;
            base(Mode::Float, None, v.p, None, v.survival, v.regime, v.active_terms)
        }
    };
    // a value outside [0, 1] means the evaluator itself is wrong
    let slack = if mode_is_float(mode) { 1e-9 } else { 0.0 };
    if !(-slack..=1.0 + slack).contains(&out.p_float) {
        eprintln!("internal check failed: p = {} is not a probability", out.p_float);
        return Err(Failure::Verification);
    }
    Ok(out)
}

fn mode_is_float(mode: ModeArg) -> bool {
    matches!(mode, ModeArg::Float)
}

fn print_json<T: Serialize>(value: &T) -> Outcome {
    let text = serde_json::to_string_pretty(value).map_err(|e| Failure::Domain(e.to_string()))?;
    writeln!(io::stdout().lock(), "{text}")?;
    Ok(())
}

fn write_csv<T: Serialize>(rows: &[T]) -> Outcome {
    let mut w = csv::Writer::from_writer(io::stdout().lock());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::Domain(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

fn run_eval(stat: StatKind, n: i64, w: &Rational, mode: ModeArg, format: EvalFormat) -> Outcome {
    let out = eval_output(stat, n, w, mode)?;
    if format == EvalFormat::Json {
        return print_json(&out);
    }
    let mut stdout = io::stdout().lock();
    writeln!(stdout, "stat: {}", out.stat)?;
    writeln!(stdout, "N: {}", out.n)?;
    writeln!(stdout, "w: {}", out.w)?;
    match (&out.p, &out.survival) {
        (Some(p), Some(s)) => {
            writeln!(stdout, "p = {p} ({})", out.p_float)?;
            writeln!(stdout, "survival = {s} ({})", out.survival_float)?;
        }
        _ => {
            writeln!(stdout, "p = {}", out.p_float)?;
            writeln!(stdout, "survival = {}", out.survival_float)?;
        }
    }
    writeln!(stdout, "regime: {}", regime_label(out.regime))?;
    Ok(())
}

#[derive(Serialize)]
struct TableCsvRow {
    schema: u32,
    stat: StatKind,
    #[serde(rename = "N")]
    n: i64,
    w: String,
    p_exact: Option<String>,
    p_exact_value: Option<f64>,
    p_float: Option<f64>,
    regime: Option<&'static str>,
    active_terms: Option<usize>,
    agree: bool,
}

#[derive(Serialize)]
struct Rows<T> {
    schema: u32,
    rows: Vec<T>,
}

fn run_table(stat: StatKind, ns: &[i64], ws: Vec<Rational>, grid: Option<i64>, format: RowFormat) -> Outcome {
    if let Some(&n) = ns.iter().find(|&&n| n < 3) {
        return Err(Failure::Domain(format!("N must be at least 3, got {n}")));
    }
    let ws = match grid {
        Some(g) if g < 1 => return Err(Failure::Domain(format!("grid must be at least 1, got {g}"))),
        Some(g) => rational_grid(g),
        None if ws.is_empty() => return Err(Failure::Domain("give --w or --grid".into())),
        None => ws,
    };
    let rows = tabulate(stat, ns, &ws);
    if let Some(e) = rows.iter().find_map(|r| r.error.clone()) {
        return Err(Failure::Domain(e));
    }
    match format {
        RowFormat::Json => print_json(&Rows {
            schema: SCHEMA_VERSION,
            rows: rows.clone(),
        })?,
        RowFormat::Csv => write_csv(
            &rows
                .iter()
                .map(|r| TableCsvRow {
                    schema: SCHEMA_VERSION,
                    stat: r.kind,
                    n: r.n,
                    w: r.w.clone(),
                    p_exact: r.p_exact.clone(),
                    p_exact_value: r.p_exact_value,
                    p_float: r.p_float,
                    regime: r.regime.map(regime_label),
                    active_terms: r.active_terms,
                    agree: r.agree,
                })
                .collect::<Vec<_>>(),
        )?,
    }
    if rows.iter().all(|r| r.agree) {
        Ok(())
    } else {
        eprintln!("float and exact columns disagree on some rows");
        Err(Failure::Verification)
    }
}

#[derive(Serialize)]
struct SimRow {
    schema: u32,
    #[serde(rename = "N")]
    n: usize,
    k: usize,
    geometry: Geometry,
    /// `cdf` for `P(W ≤ w)`, `survival` for the coverage estimate of `P(W > w)`.
    target: &'static str,
    w: String,
    p_hat: f64,
    ci_low: f64,
    ci_high: f64,
    samples: u64,
    successes: u64,
    seed: u64,
    streams: u64,
    /// Exact value of the same target when a closed form covers it.
    exact: Option<f64>,
}

/// The closed form matching `(N, k, geometry)`, if there is one.
fn exact_kind(n: usize, k: usize, geometry: Geometry) -> Option<StatKind> {
    match geometry {
        Geometry::Circular if k == 3 => Some(StatKind::Pc3),
        Geometry::Circular if k + 1 == n => Some(StatKind::PcNm1),
        Geometry::Linear if k == 3 => Some(StatKind::P3),
        _ => None,
    }
}

#[allow(clippy::too_many_arguments)]
fn run_simulate(
    n: usize,
    k: usize,
    geometry: Geometry,
    ws: &[Rational],
    samples: u64,
    seed: u64,
    streams: u64,
    coverage: bool,
    check: Option<f64>,
    format: RowFormat,
) -> Outcome {
    let config = SimConfig::new(n, k, samples, seed, streams)?;
    if coverage && geometry != Geometry::Circular {
        return Err(Failure::Domain("coverage estimates need --geometry circular".into()));
    }
    let grid: Vec<f64> = ws.iter().map(to_f64).collect();
    let estimates: Vec<CdfEstimate> = if coverage {
        grid.iter()
            .map(|&w| coverage_dual(n, k, w, samples, seed))
            .collect::<Result<_, _>>()?
    } else {
        empirical_cdf(&config, geometry, &grid)?
    };
    let kind = exact_kind(n, k, geometry).filter(|_| n >= 3);
    let mut rows = Vec::with_capacity(ws.len());
    for (est, w) in estimates.iter().zip(ws) {
        let exact = match kind {
            Some(kind) => {
                let p = to_f64(&evaluate::<Rational>(kind, n as i64, w)?.p);
                Some(if coverage { 1.0 - p } else { p })
            }
            None => None,
        };
        rows.push(SimRow {
            schema: SCHEMA_VERSION,
            n,
            k,
            geometry,
            target: if coverage { "survival" } else { "cdf" },
            w: w.to_string(),
            p_hat: est.p_hat,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            samples: est.samples,
            successes: est.successes,
            seed,
            streams: if coverage { DEFAULT_STREAMS } else { streams },
            exact,
        });
    }
    let missed: Vec<String> = match check {
        Some(z) => estimates
            .iter()
            .zip(&rows)
            .filter(|(est, row)| row.exact.is_some_and(|p| !est.brackets(p, z)))
            .map(|(_, row)| row.w.clone())
            .collect(),
        None => Vec::new(),
    };
    match format {
        RowFormat::Json => print_json(&Rows {
            schema: SCHEMA_VERSION,
            rows,
        })?,
        RowFormat::Csv => write_csv(&rows)?,
    }
    if missed.is_empty() {
        Ok(())
    } else {
        eprintln!("exact value outside the interval at w in {missed:?}");
        Err(Failure::Verification)
    }
}

fn finish_report(report: &SuiteReport, format: ReportFormat) -> Outcome {
    match format {
        ReportFormat::Json => print_json(report)?,
        ReportFormat::Text => writeln!(io::stdout().lock(), "{report}")?,
    }
    verdict(report.all_passed())
}

fn verdict(passed: bool) -> Outcome {
    if passed {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

#[derive(Serialize)]
struct MeasureOutput<'a> {
    schema: u32,
    report: &'a SuiteReport,
    rows: &'a [MeasureRow],
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Eval {
            stat,
            n,
            w,
            mode,
            format,
        } => run_eval(stat, n, &w, mode, format),
        Command::Table {
            stat,
            ns,
            w,
            grid,
            format,
        } => run_table(stat, &ns.0, w, grid, format),
        Command::Simulate {
            n,
            k,
            geometry,
            w,
            samples,
            seed,
            streams,
            coverage,
            check,
            format,
        } => {
            let geometry = match geometry {
                GeometryArg::Linear => Geometry::Linear,
                GeometryArg::Circular => Geometry::Circular,
            };
            run_simulate(n, k, geometry, &w, samples, seed, streams, coverage, check, format)
        }
        Command::VerifySeries { order, format } => finish_report(&verify_series(order)?, format),
        Command::VerifyMeasures {
            n_max,
            samples,
            seed,
            no_recursion,
            format,
        } => {
            let suite = verify_measures(MeasureSuiteConfig {
                n_max,
                samples,
                seed,
                recursion: !no_recursion,
            })?;
            match format {
                ReportFormat::Json => print_json(&MeasureOutput {
                    schema: SCHEMA_VERSION,
                    report: &suite.report,
                    rows: &suite.rows,
                })?,
                ReportFormat::Text => writeln!(io::stdout().lock(), "{}", suite.report)?,
            }
            verdict(suite.report.all_passed())
        }
        Command::CrossCheck {
            n_max,
            grid,
            pathway_n_max,
            pathway_points,
            format,
        } => {
            if n_max < 4 || grid < 1 || pathway_n_max < 3 || pathway_points < 1 {
                return Err(Failure::Domain(
                    "need --n-max >= 4, --grid >= 1, --pathway-n-max >= 3, --pathway-points >= 1".into(),
                ));
            }
            let report = cross_check(CrossCheckConfig {
                n_max,
                grid,
                pathway_n_max,
                pathway_points,
            })?;
            finish_report(&report, format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Verification) => {
            eprintln!("verification failed");
            ExitCode::from(3)
        }
    }
}
