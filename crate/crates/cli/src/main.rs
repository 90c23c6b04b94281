//! Command-line front end: analyze a single rule, sweep quota grids,
//! pick efficiency-constrained optima, and evaluate the closed-form
//! quota approximation.
//!
//! Machine-readable results go to files and standard output; progress
//! chatter goes to standard error. Exit codes: 0 success, 1
//! configuration error, 2 computation capacity error, 3 I/O error, 4 no
//! tuple satisfies the efficiency floor.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;

use banzhaf::data::{self, ExportFormat, SweepSeries};
use banzhaf::decimal;
use banzhaf::{
    assess, banzhaf_dp_with_budget, banzhaf_enumeration, banzhaf_exact, banzhaf_monte_carlo,
    ideal_distribution, make_jc_rule, make_lisbon_rule, make_nice_rule, sz_quota, Council, Error,
    FairnessAssessment, IntRange, PowerReport, Quota, QuotaGrid, RuleFamily, SweepDim, SweepGrid,
    SweepMode, SweepResult, VotingRule,
};

#[derive(Parser)]
#[command(
    name = "banzhaf",
    about = "Exact voting-power analysis and quota optimization for composite voting rules",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute power indices and fairness metrics for one rule.
    Analyze(AnalyzeArgs),
    /// Evaluate a quota grid and report the error-minimizing tuple.
    Sweep(SweepArgs),
    /// Sweep, then pick the best tuple meeting an efficiency floor.
    Optimize(OptimizeArgs),
    /// Print the closed-form approximate optimal quota.
    SzQuota(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Dataset: a built-in name ("eu27-2008") or a CSV path.
    #[arg(long, default_value = "eu27-2008")]
    data: String,
    /// Directory for report files.
    #[arg(long, default_value = ".")]
    out_dir: PathBuf,
    /// Report file format.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Worker threads (0 = available parallelism). Overridden by
    /// BANZHAF_WORKERS.
    #[arg(long, default_value_t = 0)]
    workers: usize,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum)]
    rule: RuleArg,
    /// Negotiated-weight quota (nice; default 255).
    #[arg(long)]
    quota_weight: Option<u64>,
    /// Member-count quota (nice default 14, lisbon default 15).
    #[arg(long)]
    quota_count: Option<u64>,
    /// Population quota as a decimal fraction (nice default 0.62,
    /// lisbon default 0.65).
    #[arg(long)]
    quota_pop: Option<String>,
    /// Square-root-weight quota as a decimal fraction (default 0.615).
    #[arg(long)]
    quota: Option<String>,
    /// Add the blocking-minority-of-four override (lisbon only).
    #[arg(long)]
    blocking_clause: bool,
    #[arg(long, value_enum, default_value_t = BackendArg::Auto)]
    backend: BackendArg,
    /// Monte Carlo sample count.
    #[arg(long, default_value_t = 10_000_000)]
    samples: u64,
    /// Monte Carlo seed.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// DP table budget in bytes.
    #[arg(long)]
    dp_budget: Option<u128>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long, value_enum)]
    rule: RuleArg,
    /// Member-count quota or range lo:hi[:step].
    #[arg(long)]
    count: Option<String>,
    /// Negotiated-weight quota range lo:hi[:step] (nice only).
    #[arg(long)]
    weights: Option<String>,
    /// Population quota range lo:hi[:step] in decimal fractions.
    #[arg(long)]
    pop: Option<String>,
    #[arg(long, value_enum, default_value_t = ModeArg::Shared)]
    mode: ModeArg,
}

#[derive(Args)]
struct OptimizeArgs {
    #[command(flatten)]
    sweep: SweepArgs,
    /// Efficiency floor as a decimal fraction, e.g. 0.1039.
    #[arg(long)]
    min_efficiency: String,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RuleArg {
    Nice,
    Lisbon,
    Jc,
    JcPlus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum BackendArg {
    Auto,
    Enum,
    Dp,
    Mc,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Shared,
    PerTuple,
}

impl From<FormatArg> for ExportFormat {
    fn from(value: FormatArg) -> Self {
        match value {
            FormatArg::Csv => ExportFormat::Csv,
            FormatArg::Json => ExportFormat::Json,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // Help and version are normal exits; everything else is a
            // configuration error.
            use clap::error::ErrorKind;
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Config(_) | Error::Parse { .. } | Error::MemberMismatch(_) | Error::EmptySweep => 1,
        Error::Capacity { .. } | Error::DpIneligible(_) => 2,
        Error::Io { .. } => 3,
        Error::NoFeasibleTuple { .. } => 4,
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Analyze(args) => {
            configure_workers(&args.common)?;
            analyze(args)
        }
        Command::Sweep(args) => {
            configure_workers(&args.common)?;
            let (result, grid) = execute_sweep(&args)?;
            let best = result.optimize_error()?;
            println!("argmin {}", tuple_line(best));
            write_sweep_files(&args.common, &grid, &result)
        }
        Command::Optimize(args) => {
            configure_workers(&args.sweep.common)?;
            let floor = parse_decimal_fraction(&args.min_efficiency)?;
            let floor = BigRational::new(BigInt::from(floor.0), BigInt::from(floor.1));
            let (result, grid) = execute_sweep(&args.sweep)?;
            let best = result.optimize_with_efficiency_floor(&floor)?;
            println!("optimum {}", tuple_line(best));
            write_sweep_files(&args.sweep.common, &grid, &result)?;
            Ok(())
        }
        Command::SzQuota(common) => {
            configure_workers(&common)?;
            let council = load_data(&common)?;
            println!("sz_quota_percent={:.4}", sz_quota(&council) * 100.0);
            Ok(())
        }
    }
}

fn configure_workers(common: &CommonArgs) -> Result<(), Error> {
    let workers = match std::env::var("BANZHAF_WORKERS") {
        Ok(raw) => raw
            .parse::<usize>()
            .map_err(|_| Error::config(format!("BANZHAF_WORKERS='{raw}' is not a number")))?,
        Err(_) => common.workers,
    };
    if workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build_global()
            .map_err(|e| Error::config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

/// Resolves the dataset argument: built-in name, explicit path, or a
/// file under BANZHAF_DATA_DIR.
fn load_data(common: &CommonArgs) -> Result<Council, Error> {
    if common.data == data::BUILTIN_EU27 {
        return Ok(data::builtin_eu27());
    }
    let direct = Path::new(&common.data);
    if !direct.is_absolute() && !direct.exists() {
        if let Ok(dir) = std::env::var("BANZHAF_DATA_DIR") {
            let joined = Path::new(&dir).join(direct);
            if joined.exists() {
                return data::load_csv(&joined);
            }
        }
    }
    data::load_csv(direct)
}

/// `0.615` -> (615, 1000); integers stay over denominator 1.
fn parse_decimal_fraction(raw: &str) -> Result<(u64, u64), Error> {
    let bad = || Error::config(format!("'{raw}' is not a decimal fraction"));
    let raw = raw.trim();
    let (int_part, frac_part) = match raw.split_once('.') {
        Some((i, f)) => (i, f),
        None => (raw, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
        || frac_part.len() > 12
    {
        return Err(bad());
    }
    let den = 10u64.pow(frac_part.len() as u32);
    let int_value: u64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad())?
    };
    let frac_value: u64 = if frac_part.is_empty() {
        0
    } else {
        frac_part.parse().map_err(|_| bad())?
    };
    Ok((int_value * den + frac_value, den))
}

/// `lo:hi[:step]` over decimals, normalized to one denominator.
fn parse_quota_range(raw: &str, default_step: (u64, u64)) -> Result<QuotaGrid, Error> {
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.is_empty() || parts.len() > 3 {
        return Err(Error::config(format!("'{raw}' is not a quota range")));
    }
    let lo = parse_decimal_fraction(parts[0])?;
    let hi = if parts.len() > 1 {
        parse_decimal_fraction(parts[1])?
    } else {
        lo
    };
    let step = if parts.len() > 2 {
        parse_decimal_fraction(parts[2])?
    } else {
        default_step
    };
    let den = lcm(lcm(lo.1, hi.1), step.1);
    QuotaGrid::new(
        lo.0 * (den / lo.1),
        hi.0 * (den / hi.1),
        step.0 * (den / step.1),
        den,
    )
}

fn parse_int_range(raw: &str) -> Result<IntRange, Error> {
    let bad = || Error::config(format!("'{raw}' is not an integer range"));
    let parts: Vec<&str> = raw.split(':').collect();
    if parts.is_empty() || parts.len() > 3 {
        return Err(bad());
    }
    let lo: u64 = parts[0].trim().parse().map_err(|_| bad())?;
    let hi: u64 = if parts.len() > 1 {
        parts[1].trim().parse().map_err(|_| bad())?
    } else {
        lo
    };
    let step: u64 = if parts.len() > 2 {
        parts[2].trim().parse().map_err(|_| bad())?
    } else {
        1
    };
    IntRange::new(lo, hi, step)
}

fn lcm(a: u64, b: u64) -> u64 {
    fn gcd(mut a: u64, mut b: u64) -> u64 {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    }
    a / gcd(a, b) * b
}

fn create_out_file(dir: &Path, name: &str) -> Result<std::fs::File, Error> {
    let path = dir.join(name);
    std::fs::File::create(&path).map_err(|e| Error::io(path, e))
}

fn analyze(args: AnalyzeArgs) -> Result<(), Error> {
    let council = load_data(&args.common)?;
    let rule = build_rule(&args, &council)?;
    let report = run_backend(&args, &council, &rule)?;
    let ideal = ideal_distribution(&council);
    let assessment = assess(&report, &ideal)?;

    let format: ExportFormat = args.common.format.into();
    let ext = match format {
        ExportFormat::Csv => "csv",
        ExportFormat::Json => "json",
    };
    let mut power_out = create_out_file(&args.common.out_dir, &format!("power_report.{ext}"))?;
    data::write_power_report(&report, format, &mut power_out)
        .map_err(|e| Error::io(args.common.out_dir.join(format!("power_report.{ext}")), e))?;
    let mut fairness_out = create_out_file(&args.common.out_dir, &format!("fairness.{ext}"))?;
    data::write_fairness(&assessment, format, &mut fairness_out)
        .map_err(|e| Error::io(args.common.out_dir.join(format!("fairness.{ext}")), e))?;

    println!("{}", summary_line(&args, &report, &assessment));
    Ok(())
}

fn build_rule(args: &AnalyzeArgs, council: &Council) -> Result<VotingRule, Error> {
    let pop_quota = |raw: &Option<String>, default: (u64, u64)| -> Result<Quota, Error> {
        let (num, den) = match raw {
            Some(raw) => parse_decimal_fraction(raw)?,
            None => default,
        };
        Quota::relative(num, den)
    };
    match args.rule {
        RuleArg::Nice => {
            reject_flag(args.quota.is_some(), "--quota applies to jc rules")?;
            reject_flag(args.blocking_clause, "--blocking-clause applies to lisbon")?;
            make_nice_rule(
                council,
                args.quota_weight.unwrap_or(255),
                args.quota_count.unwrap_or(14),
                pop_quota(&args.quota_pop, (62, 100))?,
            )
        }
        RuleArg::Lisbon => {
            reject_flag(args.quota.is_some(), "--quota applies to jc rules")?;
            reject_flag(
                args.quota_weight.is_some(),
                "--quota-weight applies to nice",
            )?;
            make_lisbon_rule(
                args.quota_count.unwrap_or(15),
                pop_quota(&args.quota_pop, (65, 100))?,
                args.blocking_clause,
            )
        }
        RuleArg::Jc | RuleArg::JcPlus => {
            reject_flag(
                args.quota_weight.is_some(),
                "--quota-weight applies to nice",
            )?;
            reject_flag(
                args.quota_count.is_some(),
                "--quota-count applies to nice/lisbon",
            )?;
            reject_flag(args.quota_pop.is_some(), "use --quota for jc rules")?;
            reject_flag(args.blocking_clause, "--blocking-clause applies to lisbon")?;
            make_jc_rule(
                council,
                pop_quota(&args.quota, (615, 1000))?,
                args.rule == RuleArg::JcPlus,
            )
        }
    }
}

fn reject_flag(present: bool, msg: &str) -> Result<(), Error> {
    if present {
        Err(Error::config(msg.to_string()))
    } else {
        Ok(())
    }
}

fn run_backend(
    args: &AnalyzeArgs,
    council: &Council,
    rule: &VotingRule,
) -> Result<PowerReport, Error> {
    match args.backend {
        BackendArg::Auto => banzhaf_exact(council, rule),
        BackendArg::Enum => banzhaf_enumeration(council, rule),
        BackendArg::Dp => banzhaf_dp_with_budget(
            council,
            rule,
            args.dp_budget
                .unwrap_or(banzhaf::power::DEFAULT_DP_TABLE_BYTES),
        ),
        BackendArg::Mc => banzhaf_monte_carlo(council, rule, args.samples, args.seed),
    }
}

fn summary_line(
    args: &AnalyzeArgs,
    report: &PowerReport,
    assessment: &FairnessAssessment,
) -> String {
    let rule_name = match args.rule {
        RuleArg::Nice => "nice",
        RuleArg::Lisbon => "lisbon",
        RuleArg::Jc => "jc",
        RuleArg::JcPlus => "jc-plus",
    };
    let backend = match report.backend {
        banzhaf::PowerBackend::Enumeration => "enumeration",
        banzhaf::PowerBackend::Dp => "dp",
        banzhaf::PowerBackend::MonteCarlo => "monte_carlo",
        banzhaf::PowerBackend::BruteForce => "brute_force",
    };
    let thousand = BigRational::from_integer(BigInt::from(1000));
    let hundred = BigRational::from_integer(BigInt::from(100));
    format!(
        "rule={} backend={} sigma2={}\u{2030} eff={}% max_dev={}% ({})",
        rule_name,
        backend,
        decimal::fixed(&(&assessment.error_rate * &thousand), 4),
        decimal::fixed(&(&report.efficiency * &hundred), 2),
        decimal::fixed(&(&assessment.max_relative_deviation * &hundred), 2),
        assessment.max_relative_deviation_member,
    )
}

fn family_of(rule: RuleArg) -> RuleFamily {
    match rule {
        RuleArg::Nice => RuleFamily::Nice,
        RuleArg::Lisbon => RuleFamily::Lisbon,
        RuleArg::Jc => RuleFamily::Jc {
            count_majority: false,
        },
        RuleArg::JcPlus => RuleFamily::Jc {
            count_majority: true,
        },
    }
}

fn build_grid(args: &SweepArgs) -> Result<SweepGrid, Error> {
    let family = family_of(args.rule);
    // Population-step defaults follow the published grids: 1% for the
    // triple majority, 0.1% otherwise.
    let default_step = match family {
        RuleFamily::Nice => (1, 100),
        _ => (1, 1000),
    };
    let pop_quotas = match &args.pop {
        Some(raw) => parse_quota_range(raw, default_step)?,
        None => parse_quota_range("0.51:0.85", default_step)?,
    };
    let count_quotas = match (&args.count, family) {
        (Some(raw), _) => Some(parse_int_range(raw)?),
        (None, RuleFamily::Nice) => Some(IntRange::single(14)),
        (None, RuleFamily::Lisbon) => Some(IntRange::new(14, 18, 1)?),
        (None, RuleFamily::Jc { .. }) => None,
    };
    let weight_quotas = match (&args.weights, family) {
        (Some(raw), RuleFamily::Nice) => Some(parse_int_range(raw)?),
        (Some(_), _) => return Err(Error::config("--weights applies to the nice family only")),
        (None, RuleFamily::Nice) => Some(IntRange::new(190, 275, 1)?),
        (None, _) => None,
    };
    if matches!(family, RuleFamily::Jc { .. }) && args.count.is_some() {
        return Err(Error::config(
            "jc sweeps fix the count criterion; drop --count or use --rule jc-plus",
        ));
    }
    Ok(SweepGrid {
        family,
        count_quotas,
        weight_quotas,
        pop_quotas,
    })
}

fn execute_sweep(args: &SweepArgs) -> Result<(SweepResult, SweepGrid), Error> {
    let council = load_data(&args.common)?;
    let grid = build_grid(args)?;
    let mode = match args.mode {
        ModeArg::Shared => SweepMode::Shared,
        ModeArg::PerTuple => SweepMode::PerTuple,
    };
    let started = Instant::now();
    let last_report_ms = AtomicU64::new(0);
    let progress = move |done: u64, total: u64| {
        let elapsed = started.elapsed().as_millis() as u64;
        let last = last_report_ms.load(Ordering::Relaxed);
        if elapsed.saturating_sub(last) >= 1000
            && last_report_ms
                .compare_exchange(last, elapsed, Ordering::Relaxed, Ordering::Relaxed)
                .is_ok()
        {
            eprintln!("progress: {done}/{total} work units");
        }
    };
    let result = banzhaf::run_sweep_with_progress(&council, &grid, mode, Some(&progress))?;
    Ok((result, grid))
}

fn tuple_line(row: &banzhaf::SweepRow) -> String {
    let mut line = String::new();
    if let Some(c) = row.count_quota {
        line.push_str(&format!("count={c} "));
    }
    if let Some(w) = row.weight_quota {
        line.push_str(&format!("weight={w} "));
    }
    let thousand = BigRational::from_integer(BigInt::from(1000));
    let hundred = BigRational::from_integer(BigInt::from(100));
    line.push_str(&format!(
        "pop={} sigma2={}\u{2030} max_dev={}% eff={}%",
        row.pop_quota_decimal(),
        decimal::significant(&(&row.sigma2 * &thousand), 5),
        decimal::fixed(&(&row.max_deviation * &hundred), 2),
        decimal::fixed(&(&row.efficiency * &hundred), 4),
    ));
    line
}

fn write_sweep_files(
    common: &CommonArgs,
    grid: &SweepGrid,
    result: &SweepResult,
) -> Result<(), Error> {
    let format: ExportFormat = common.format.into();
    let ext = match format {
        ExportFormat::Csv => "csv",
        ExportFormat::Json => "json",
    };
    let io_err = |name: &str, e: std::io::Error| Error::io(common.out_dir.join(name), e);

    let name = format!("sweep_rows.{ext}");
    let mut out = create_out_file(&common.out_dir, &name)?;
    data::write_sweep(result, format, &mut out).map_err(|e| io_err(&name, e))?;

    let group_by: &[SweepDim] = match grid.family {
        RuleFamily::Nice => &[SweepDim::Count, SweepDim::Weight],
        RuleFamily::Lisbon => &[SweepDim::Count],
        RuleFamily::Jc { .. } => &[SweepDim::Count],
    };
    let mut out = create_out_file(&common.out_dir, "sweep_slice_optima.csv")?;
    data::write_sweep_slices(result, group_by, &mut out)
        .map_err(|e| io_err("sweep_slice_optima.csv", e))?;

    let mut out = create_out_file(&common.out_dir, "sweep_sigma2_series.csv")?;
    data::write_sweep_series(result, SweepSeries::ErrorRate, &mut out)
        .map_err(|e| io_err("sweep_sigma2_series.csv", e))?;
    let mut out = create_out_file(&common.out_dir, "sweep_efficiency_series.csv")?;
    data::write_sweep_series(result, SweepSeries::Efficiency, &mut out)
        .map_err(|e| io_err("sweep_efficiency_series.csv", e))?;
    std::io::stdout().flush().ok();
    Ok(())
}
