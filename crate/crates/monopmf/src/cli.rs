//! Command-line front end: estimate on user data, compare estimators side by
//! side, and run simulation experiments with CSV/SVG output.
//!
//! Exit codes: 0 success, 2 input parse error, 3 flat-region/support
//! mismatch, 4 unwritable output directory, 1 anything else. Data goes to
//! stdout, diagnostics to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::estimators::{
    empirical_estimator, flat_mle, grenander_estimator, rearrangement_estimator,
};
use crate::metrics::{hellinger_squared, l1, l2_squared};
use crate::pmf::mixture_of_uniforms;
use crate::report::{fmt_num, losses_csv, summary_csv, svg_boxplot};
use crate::simulate::{run_experiment, BoxStats, EstimatorKind, ExperimentConfig, MetricKind};
use crate::{CountVector, FlatSpec, Pmf};

pub const EXIT_PARSE: i32 = 2;
pub const EXIT_FLATS_MISMATCH: i32 = 3;
pub const EXIT_OUTPUT_DIR: i32 = 4;

#[derive(Debug)]
struct CliError {
    code: i32,
    message: String,
}

impl CliError {
    fn parse(message: impl Into<String>) -> Self {
        CliError { code: EXIT_PARSE, message: message.into() }
    }

    fn flats(message: impl Into<String>) -> Self {
        CliError { code: EXIT_FLATS_MISMATCH, message: message.into() }
    }

    fn outdir(message: impl Into<String>) -> Self {
        CliError { code: EXIT_OUTPUT_DIR, message: message.into() }
    }

    fn other(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "monopmf",
    about = "Monotone pmf estimation with known flat regions",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate a pmf from a data file
    Estimate(EstimateArgs),
    /// Run all estimators on one data file and tabulate pairwise distances
    Compare(CompareArgs),
    /// Run a Monte Carlo risk-comparison experiment
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DataMode {
    /// Decide by content: lines with a comma are counts, otherwise samples
    Auto,
    /// Lines of "index,count" with indices 1..k
    Counts,
    /// One observed value per line
    Samples,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct EstimateArgs {
    /// Input data file
    #[arg(long)]
    input: PathBuf,
    /// Estimator to apply
    #[arg(long)]
    estimator: String,
    /// Comma-separated flat-region lengths, e.g. "2,3" (required for flat)
    #[arg(long)]
    flats: Option<String>,
    #[arg(long, value_enum, default_value_t = DataMode::Auto)]
    mode: DataMode,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Args)]
struct CompareArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated flat-region lengths; omit to skip the flat estimator
    #[arg(long)]
    flats: Option<String>,
    #[arg(long, value_enum, default_value_t = DataMode::Auto)]
    mode: DataMode,
}

#[derive(Args)]
struct SimulateArgs {
    /// Output directory for CSV/SVG files
    #[arg(long)]
    out: PathBuf,
    /// Experiment config file ("key = value" lines)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Builtin preset: "paper-fig1" runs the three reference mixtures at
    /// n = 20 and n = 100 with 1000 replicates
    #[arg(long)]
    preset: Option<String>,
    /// Mixture components as "mass:top,mass:top,..."
    #[arg(long)]
    components: Option<String>,
    /// Comma-separated sample sizes
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma-separated estimator names
    #[arg(long)]
    estimators: Option<String>,
    /// Comma-separated metric names
    #[arg(long)]
    metrics: Option<String>,
    /// Also write SVG boxplots, one per (metric, sample size)
    #[arg(long)]
    svg: bool,
    /// Append closed-form limit-risk oracle columns to the summary CSV
    #[arg(long)]
    check_asymptotics: bool,
}

/// Parse `std::env::args`, dispatch, and return the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Estimate(args) => cmd_estimate(&args),
        Command::Compare(args) => cmd_compare(&args),
        Command::Simulate(args) => cmd_simulate(&args),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

fn parse_flats(s: &str) -> CliResult<FlatSpec> {
    let lengths: Vec<usize> = s
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| CliError::parse(format!("bad region length '{}' in --flats", t.trim())))
        })
        .collect::<CliResult<_>>()?;
    FlatSpec::new(lengths).map_err(|e| CliError::parse(e.to_string()))
}

fn read_data_file(path: &Path, mode: DataMode) -> CliResult<CountVector> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect();
    if lines.is_empty() {
        return Err(CliError::parse(format!("{}: no data lines", path.display())));
    }
    let counts_mode = match mode {
        DataMode::Counts => true,
        DataMode::Samples => false,
        DataMode::Auto => lines.iter().any(|(_, l)| l.contains(',')),
    };
    if counts_mode {
        let mut pairs = Vec::with_capacity(lines.len());
        for (lineno, line) in &lines {
            let (idx, count) = line.split_once(',').ok_or_else(|| {
                CliError::parse(format!("line {lineno}: expected 'index,count', got '{line}'"))
            })?;
            let idx: usize = idx.trim().parse().map_err(|_| {
                CliError::parse(format!("line {lineno}: bad index '{}'", idx.trim()))
            })?;
            let count: u64 = count.trim().parse().map_err(|_| {
                CliError::parse(format!("line {lineno}: bad count '{}'", count.trim()))
            })?;
            if idx == 0 {
                return Err(CliError::parse(format!("line {lineno}: index 0, support starts at 1")));
            }
            pairs.push((lineno, idx, count));
        }
        let k = pairs.len();
        let mut counts = vec![None; k];
        for (lineno, idx, count) in pairs {
            if idx > k {
                return Err(CliError::parse(format!(
                    "line {lineno}: index {idx} out of range, expected each of 1..{k} exactly once"
                )));
            }
            if counts[idx - 1].replace(count).is_some() {
                return Err(CliError::parse(format!("line {lineno}: duplicate index {idx}")));
            }
        }
        let counts: Vec<u64> = counts.into_iter().map(Option::unwrap).collect();
        CountVector::new(counts).map_err(|e| CliError::parse(e.to_string()))
    } else {
        let mut samples = Vec::with_capacity(lines.len());
        for (lineno, line) in &lines {
            let x: u64 = line.parse().map_err(|_| {
                CliError::parse(format!("line {lineno}: bad sample value '{line}'"))
            })?;
            if x == 0 {
                return Err(CliError::parse(format!("line {lineno}: sample value 0, support starts at 1")));
            }
            samples.push(x);
        }
        CountVector::from_samples(&samples).map_err(|e| CliError::parse(e.to_string()))
    }
}

fn check_flats_support(spec: &FlatSpec, counts: &CountVector) -> CliResult<()> {
    if spec.support_size() != counts.support_size() {
        return Err(CliError::flats(format!(
            "flat regions cover {} support points but the data has support size {}",
            spec.support_size(),
            counts.support_size()
        )));
    }
    Ok(())
}

fn estimate_by_name(
    name: &str,
    counts: &CountVector,
    spec: Option<&FlatSpec>,
) -> CliResult<Pmf> {
    let kind = EstimatorKind::from_str(name).map_err(|e| CliError::parse(e.to_string()))?;
    match kind {
        EstimatorKind::Empirical => Ok(empirical_estimator(counts)),
        EstimatorKind::Rearrangement => Ok(rearrangement_estimator(counts)),
        EstimatorKind::Grenander => Ok(grenander_estimator(counts)),
        EstimatorKind::Flat => {
            let spec = spec.ok_or_else(|| {
                CliError::parse("--flats is required for the flat estimator")
            })?;
            check_flats_support(spec, counts)?;
            flat_mle(counts, spec).map_err(|e| CliError::other(e.to_string()))
        }
    }
}

#[derive(Serialize)]
struct EstimateOutput<'a> {
    estimator: &'a str,
    n: u64,
    k: usize,
    probs: Vec<f64>,
}

fn cmd_estimate(args: &EstimateArgs) -> CliResult<()> {
    let counts = read_data_file(&args.input, args.mode)?;
    let spec = args.flats.as_deref().map(parse_flats).transpose()?;
    let pmf = estimate_by_name(&args.estimator, &counts, spec.as_ref())?;
    match args.format {
        OutputFormat::Csv => {
            println!("# estimator = {}", args.estimator);
            println!("# n = {}", counts.total());
            println!("# k = {}", counts.support_size());
            println!("index,probability");
            for (i, &p) in pmf.probs().iter().enumerate() {
                println!("{},{}", i + 1, fmt_num(p));
            }
        }
        OutputFormat::Json => {
            let out = EstimateOutput {
                estimator: &args.estimator,
                n: counts.total(),
                k: counts.support_size(),
                probs: pmf.probs().to_vec(),
            };
            println!("{}", serde_json::to_string_pretty(&out).expect("output serializes"));
        }
    }
    Ok(())
}

fn cmd_compare(args: &CompareArgs) -> CliResult<()> {
    let counts = read_data_file(&args.input, args.mode)?;
    let spec = args.flats.as_deref().map(parse_flats).transpose()?;
    if let Some(spec) = &spec {
        check_flats_support(spec, &counts)?;
    }

    let mut estimates: Vec<(&str, Pmf)> = vec![
        ("empirical", empirical_estimator(&counts)),
        ("rearrangement", rearrangement_estimator(&counts)),
        ("grenander", grenander_estimator(&counts)),
    ];
    if let Some(spec) = &spec {
        estimates.push((
            "flat",
            flat_mle(&counts, spec).map_err(|e| CliError::other(e.to_string()))?,
        ));
    }

    println!("# n = {}", counts.total());
    println!("# k = {}", counts.support_size());
    let header: Vec<&str> = estimates.iter().map(|(name, _)| *name).collect();
    println!("index,{}", header.join(","));
    for i in 0..counts.support_size() {
        let row: Vec<String> = estimates
            .iter()
            .map(|(_, p)| fmt_num(p.probs()[i]))
            .collect();
        println!("{},{}", i + 1, row.join(","));
    }

    println!();
    println!("estimator_a,estimator_b,l2_squared,hellinger_squared,l1");
    for a in 0..estimates.len() {
        for b in a + 1..estimates.len() {
            let (name_a, pa) = &estimates[a];
            let (name_b, pb) = &estimates[b];
            let l2 = l2_squared(pa, pb).map_err(|e| CliError::other(e.to_string()))?;
            let h2 = hellinger_squared(pa, pb).map_err(|e| CliError::other(e.to_string()))?;
            let d1 = l1(pa, pb).map_err(|e| CliError::other(e.to_string()))?;
            println!(
                "{name_a},{name_b},{},{},{}",
                fmt_num(l2),
                fmt_num(h2),
                fmt_num(d1)
            );
        }
    }
    Ok(())
}

fn parse_components(s: &str) -> CliResult<Vec<(f64, usize)>> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            let (mass, top) = t
                .split_once(':')
                .ok_or_else(|| CliError::parse(format!("bad component '{t}', expected mass:top")))?;
            let mass: f64 = mass
                .trim()
                .parse()
                .map_err(|_| CliError::parse(format!("bad mass in component '{t}'")))?;
            let top: usize = top
                .trim()
                .parse()
                .map_err(|_| CliError::parse(format!("bad top in component '{t}'")))?;
            Ok((mass, top))
        })
        .collect()
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<T>()
                .map_err(|_| CliError::parse(format!("bad {what} '{}'", t.trim())))
        })
        .collect()
}

fn default_config() -> ExperimentConfig {
    ExperimentConfig {
        components: vec![(0.2, 4), (0.8, 8)],
        sample_sizes: vec![20, 100],
        replications: 1000,
        seed: 1234,
        estimators: EstimatorKind::ALL.to_vec(),
        metrics: vec![MetricKind::L2, MetricKind::Hellinger],
    }
}

/// Parse a "key = value" config file. Recognized keys: components,
/// sample_sizes, replications, seed, estimators, metrics. Lines starting
/// with '#' and blank lines are ignored.
fn parse_config_file(path: &Path) -> CliResult<ExperimentConfig> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::parse(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = default_config();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::parse(format!("line {}: expected 'key = value'", lineno + 1))
        })?;
        let value = value.trim();
        match key.trim() {
            "components" => cfg.components = parse_components(value)?,
            "sample_sizes" => cfg.sample_sizes = parse_list(value, "sample size")?,
            "replications" => {
                cfg.replications = value.parse().map_err(|_| {
                    CliError::parse(format!("line {}: bad replications", lineno + 1))
                })?
            }
            "seed" => {
                cfg.seed = value
                    .parse()
                    .map_err(|_| CliError::parse(format!("line {}: bad seed", lineno + 1)))?
            }
            "estimators" => cfg.estimators = parse_list(value, "estimator")?,
            "metrics" => cfg.metrics = parse_list(value, "metric")?,
            other => {
                return Err(CliError::parse(format!(
                    "line {}: unknown key '{other}'",
                    lineno + 1
                )))
            }
        }
    }
    Ok(cfg)
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .map_err(|e| CliError::outdir(format!("cannot write {}: {e}", path.display())))
}

fn run_and_write(cfg: &ExperimentConfig, out: &Path, prefix: &str, args: &SimulateArgs) -> CliResult<()> {
    cfg.validate().map_err(|e| CliError::parse(e.to_string()))?;
    let summaries = run_experiment(cfg).map_err(|e| CliError::other(e.to_string()))?;

    let (truth, spec) =
        mixture_of_uniforms::<f64>(&cfg.components).map_err(|e| CliError::parse(e.to_string()))?;
    let oracle = if args.check_asymptotics {
        Some((&truth, &spec))
    } else {
        None
    };

    write_file(&out.join(format!("{prefix}losses.csv")), &losses_csv(&summaries))?;
    let summary = summary_csv(&summaries, oracle).map_err(|e| CliError::other(e.to_string()))?;
    write_file(&out.join(format!("{prefix}summary.csv")), &summary)?;

    if args.svg {
        for &metric in &cfg.metrics {
            for &n in &cfg.sample_sizes {
                let groups: Vec<(String, BoxStats)> = summaries
                    .iter()
                    .filter(|s| s.metric == metric && s.sample_size == n)
                    .map(|s| (s.estimator.to_string(), s.stats))
                    .collect();
                let svg = svg_boxplot(&format!("{metric}, n = {n}"), &groups);
                write_file(&out.join(format!("{prefix}{metric}_n{n}.svg")), &svg)?;
            }
        }
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> CliResult<()> {
    fs::create_dir_all(&args.out).map_err(|e| {
        CliError::outdir(format!("cannot create output directory {}: {e}", args.out.display()))
    })?;

    let seed_override = match std::env::var("MONOPMF_SEED") {
        Ok(v) => Some(
            v.parse::<u64>()
                .map_err(|_| CliError::parse(format!("MONOPMF_SEED is not a valid seed: '{v}'")))?,
        ),
        Err(_) => args.seed,
    };

    if let Some(preset) = &args.preset {
        if preset != "paper-fig1" {
            return Err(CliError::parse(format!("unknown preset '{preset}'")));
        }
        let mixtures: [Vec<(f64, usize)>; 3] = [
            vec![(0.2, 4), (0.8, 8)],
            vec![(0.15, 4), (0.1, 8), (0.75, 12)],
            vec![(0.25, 2), (0.2, 4), (0.15, 6), (0.4, 8)],
        ];
        for (i, components) in mixtures.into_iter().enumerate() {
            let mut cfg = default_config();
            cfg.components = components;
            if let Some(reps) = args.reps {
                cfg.replications = reps;
            }
            if let Some(seed) = seed_override {
                cfg.seed = seed;
            }
            run_and_write(&cfg, &args.out, &format!("mixture{}_", i + 1), args)?;
        }
        return Ok(());
    }

    let mut cfg = match &args.config {
        Some(path) => parse_config_file(path)?,
        None => default_config(),
    };
    if let Some(components) = &args.components {
        cfg.components = parse_components(components)?;
    }
    if let Some(sizes) = &args.sizes {
        cfg.sample_sizes = parse_list(sizes, "sample size")?;
    }
    if let Some(reps) = args.reps {
        cfg.replications = reps;
    }
    if let Some(estimators) = &args.estimators {
        cfg.estimators = parse_list(estimators, "estimator")?;
    }
    if let Some(metrics) = &args.metrics {
        cfg.metrics = parse_list(metrics, "metric")?;
    }
    if let Some(seed) = seed_override {
        cfg.seed = seed;
    }
    run_and_write(&cfg, &args.out, "", args)
}
