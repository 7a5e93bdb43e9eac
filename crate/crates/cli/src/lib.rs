//! Command-line front end: configuration I/O, single determinant
//! evaluations, randomized campaigns and the `|D|` minimizer, all seeded and
//! reproducible.
//!
//! Exit statuses: 0 success (including runs that flag candidate
//! counterexamples — those are findings, not failures), 1 usage/I-O/schema
//! errors, 2 degenerate configurations, 3 violations of proven properties
//! (gauge non-invariance, broken delta pattern, projective singularity).

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use sha2::{Digest, Sha256};
use stardet::geom::Space;
use stardet::io::{ConfigDoc, DetReportDoc, MinimizeReportDoc};
use stardet::maps::{normalized_determinant, ConstructionMode};
use stardet::verify::{
    cp1_delta_check, minimize_abs_d, run_conjecture_scan, run_gauge_campaign,
    run_invariance_campaign, CampaignReport, CampaignSpec,
};
use std::fs;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;

#[derive(Parser)]
#[command(
    name = "stardet",
    version,
    about = "Polynomial maps on point configurations and their normalized determinants",
    long_about = "Computes the observer-based and star-based polynomial families attached to a \
configuration of n distinct points (Euclidean 3-space, hyperbolic 3-space, or the Riemann \
sphere), evaluates the gauge-invariant normalized determinant D, verifies the projective \
delta-pairing identities, and probes the linear-independence and |D| >= 1 conjectures with \
seeded random sampling and derivative-free minimization."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the normalized determinant D of a configuration file
    Det(DetArgs),
    /// Re-evaluate D under random gauges, relabelings and similarity maps
    Sample(SampleArgs),
    /// Record |D| over random configurations; flag values below 1
    Scan(ScanArgs),
    /// Minimize |D| by Nelder-Mead with random restarts
    Minimize(MinimizeArgs),
    /// Check the projective delta pairing and nonsingularity on random draws
    Cp1Verify(Cp1VerifyArgs),
    /// Gauge-only invariance campaign
    GaugeTest(GaugeTestArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    /// Fix d observers, product over the stars
    Observer,
    /// Fix each star, product over the observers
    Star,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SpaceArg {
    Euclidean,
    Hyperbolic,
    Cp1,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Space {
        match s {
            SpaceArg::Euclidean => Space::Euclidean,
            SpaceArg::Hyperbolic => Space::Hyperbolic,
            SpaceArg::Cp1 => Space::Cp1,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
}

fn mode_for(space: Space, mode: ModeArg) -> ConstructionMode {
    ConstructionMode::for_space(space, mode == ModeArg::Star)
}

#[derive(Args)]
struct DetArgs {
    /// Configuration file: {"space": "euclidean"|"hyperbolic"|"cp1",
    /// "points": [[x,y,z], ...] or [[re,im], ..., "inf"]}
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Number of observers d in the split n = d + k
    #[arg(long, default_value_t = 1)]
    d: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Observer)]
    mode: ModeArg,
    /// Also re-evaluate D under this many random symplectic gauges and
    /// report the relative spread
    #[arg(long, default_value_t = 0)]
    gauge_checks: usize,
    /// Seed for the gauge re-randomizations
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct CampaignArgs {
    /// Number of points
    #[arg(long)]
    n: usize,
    /// Number of observers d in the split n = d + k
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum)]
    space: SpaceArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Observer)]
    mode: ModeArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads for the trial loop (default: machine parallelism)
    #[arg(long)]
    threads: Option<usize>,
    /// Write the report here instead of stdout
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    common: CampaignArgs,
    /// Tolerance on the relative spread of D across random gauges
    #[arg(long, default_value_t = 1e-9)]
    gauge_tol: f64,
    /// Tolerance on the relative change of D under relabelings
    #[arg(long, default_value_t = 1e-9)]
    perm_tol: f64,
    /// Tolerance on the relative change of D under similarity maps
    #[arg(long, default_value_t = 1e-9)]
    iso_tol: f64,
    /// json: full report; csv: one |D| row per trial
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    common: CampaignArgs,
    /// json: full report; csv: one |D| row per trial
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    format: FormatArg,
}

#[derive(Args)]
struct MinimizeArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum)]
    space: SpaceArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Observer)]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of Nelder-Mead restarts
    #[arg(long, default_value_t = 10)]
    budget: usize,
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct Cp1VerifyArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Observer)]
    mode: ModeArg,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_name = "FILE")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct GaugeTestArgs {
    #[command(flatten)]
    common: CampaignArgs,
    /// Tolerance on the relative spread of D across random gauges
    #[arg(long, default_value_t = 1e-9)]
    gauge_tol: f64,
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp
                | ErrorKind::DisplayVersion
                | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => EXIT_OK,
                _ => EXIT_ERROR,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
    }
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: EXIT_ERROR, message: message.into() }
    }
}

impl From<stardet::Error> for Failure {
    fn from(e: stardet::Error) -> Self {
        let code = if e.is_degenerate() { EXIT_DEGENERATE } else { EXIT_ERROR };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_ERROR, message: e.to_string() }
    }
}

fn dispatch(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Det(args) => cmd_det(args),
        Command::Sample(args) => cmd_sample(args),
        Command::Scan(args) => cmd_scan(args),
        Command::Minimize(args) => cmd_minimize(args),
        Command::Cp1Verify(args) => cmd_cp1_verify(args),
        Command::GaugeTest(args) => cmd_gauge_test(args),
    }
}

fn with_threads<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> Result<R, Failure> {
    match threads {
        None => Ok(f()),
        Some(t) => {
            if t == 0 {
                return Err(Failure::usage("--threads must be at least 1"));
            }
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Failure::usage(format!("could not build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn write_output(text: &str, output: Option<&Path>) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text.as_bytes())?,
        None => println!("{text}"),
    }
    Ok(())
}

fn cmd_det(args: DetArgs) -> Result<i32, Failure> {
    let raw = fs::read_to_string(&args.config)?;
    let doc = ConfigDoc::from_json(&raw)?;
    let cfg: stardet::Configuration64 = doc.to_configuration()?;
    let mode = mode_for(cfg.space(), args.mode);
    let report = normalized_determinant(&cfg, args.d, mode, args.seed, args.gauge_checks)?;
    let doc = DetReportDoc::from_report(&report);
    let json = serde_json::to_string_pretty(&doc).expect("det reports always serialize");
    write_output(&json, args.output.as_deref())?;
    Ok(EXIT_OK)
}

fn campaign_spec(args: &CampaignArgs, mode_arg: ModeArg) -> CampaignSpec {
    let space: Space = args.space.into();
    CampaignSpec::new(args.n, args.d, mode_for(space, mode_arg), space)
        .with_trials(args.trials)
        .with_seed(args.seed)
}

fn campaign_csv(report: &CampaignReport, with_candidates: bool) -> String {
    let mut out = String::new();
    if with_candidates {
        out.push_str("trial,abs_d,candidate\n");
        let flagged: std::collections::HashSet<usize> =
            report.candidates.iter().map(|c| c.trial).collect();
        for (trial, abs) in report.abs_d.iter().enumerate() {
            out.push_str(&format!("{trial},{abs},{}\n", flagged.contains(&trial) as u8));
        }
    } else {
        out.push_str("trial,abs_d\n");
        for (trial, abs) in report.abs_d.iter().enumerate() {
            out.push_str(&format!("{trial},{abs}\n"));
        }
    }
    out
}

fn emit_campaign(
    report: &CampaignReport,
    format: FormatArg,
    output: Option<&Path>,
    with_candidates: bool,
) -> Result<(), Failure> {
    let text = match format {
        FormatArg::Json => report.to_json(),
        FormatArg::Csv => campaign_csv(report, with_candidates),
    };
    write_output(&text, output)
}

fn report_violations(report: &CampaignReport) -> i32 {
    if report.passed() {
        EXIT_OK
    } else {
        for v in &report.violations {
            eprintln!(
                "violation: trial {} {} deviation {:.3e} exceeds {:.1e}",
                v.trial, v.invariant, v.measured, v.tolerance
            );
        }
        EXIT_VIOLATION
    }
}

fn cmd_sample(args: SampleArgs) -> Result<i32, Failure> {
    let mut spec = campaign_spec(&args.common, args.common.mode);
    spec.gauge_tol = args.gauge_tol;
    spec.perm_tol = args.perm_tol;
    spec.iso_tol = args.iso_tol;
    let report =
        with_threads(args.common.threads, || run_invariance_campaign::<f64>(&spec))??;
    emit_campaign(&report, args.format, args.common.output.as_deref(), false)?;
    Ok(report_violations(&report))
}

/// Directory for standalone counterexample artifacts: `STARDET_OUT_DIR` if
/// set, else next to the report file, else the working directory.
fn artifact_dir(output: Option<&Path>) -> PathBuf {
    if let Ok(dir) = std::env::var("STARDET_OUT_DIR") {
        return PathBuf::from(dir);
    }
    output
        .and_then(Path::parent)
        .filter(|p| !p.as_os_str().is_empty())
        .map(Path::to_path_buf)
        .unwrap_or_else(|| PathBuf::from("."))
}

fn cmd_scan(args: ScanArgs) -> Result<i32, Failure> {
    let spec = campaign_spec(&args.common, args.common.mode);
    let report = with_threads(args.common.threads, || run_conjecture_scan::<f64>(&spec))??;
    emit_campaign(&report, args.format, args.common.output.as_deref(), true)?;

    if !report.candidates.is_empty() {
        let dir = artifact_dir(args.common.output.as_deref());
        for cand in &report.candidates {
            let json = serde_json::to_string_pretty(cand).expect("candidates serialize");
            let mut hasher = Sha256::new();
            hasher.update(json.as_bytes());
            let digest = hasher.finalize();
            let hash: String = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
            let path = dir.join(format!("counterexample-{hash}.json"));
            fs::write(&path, &json)?;
            eprintln!(
                "candidate counterexample: trial {} |D| = {:.12} saved to {}",
                cand.trial,
                cand.abs_d,
                path.display()
            );
        }
    }
    // candidates are findings; the scan itself succeeded
    Ok(EXIT_OK)
}

fn cmd_minimize(args: MinimizeArgs) -> Result<i32, Failure> {
    let space: Space = args.space.into();
    let mode = mode_for(space, args.mode);
    let result = minimize_abs_d::<f64>(args.n, args.d, mode, space, args.seed, args.budget)?;
    let doc = MinimizeReportDoc::from_result(&result, args.d, mode, args.seed, args.budget);
    let json = serde_json::to_string_pretty(&doc).expect("minimize reports always serialize");
    write_output(&json, args.output.as_deref())?;
    Ok(EXIT_OK)
}

fn cmd_cp1_verify(args: Cp1VerifyArgs) -> Result<i32, Failure> {
    let mode = mode_for(Space::Cp1, args.mode);
    let report = with_threads(args.threads, || {
        cp1_delta_check::<f64>(args.n, args.d, mode, args.trials, args.seed)
    })??;
    write_output(&report.to_json(), args.output.as_deref())?;
    Ok(report_violations(&report))
}

fn cmd_gauge_test(args: GaugeTestArgs) -> Result<i32, Failure> {
    let mut spec = campaign_spec(&args.common, args.common.mode);
    spec.gauge_tol = args.gauge_tol;
    let report = with_threads(args.common.threads, || run_gauge_campaign::<f64>(&spec))??;
    write_output(&report.to_json(), args.common.output.as_deref())?;
    Ok(report_violations(&report))
}
