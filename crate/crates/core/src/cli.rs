//! `qsteer` command line.
//!
//! Exit codes: 0 success, 1 a bound violation was found (`verify` only),
//! 2 bad flags or input.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::harness::{
    run_falsification, run_family_sweep, run_region_scan, run_scatter, with_workers,
    write_curve_csv, write_region_csv, write_scatter_csv, write_sweep_csv, FalsificationSummary,
    Family, GridSpec, Theorems,
};
use crate::linalg::Qubit;
use crate::measures::MeasureReport;
use crate::qstate::{parse_state_json, Measure, RankPolicy, SamplerConfig};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VIOLATION: u8 = 1;
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "qsteer",
    version,
    about = "Two-qubit concurrence and steerability toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Report every measure of one state read from a JSON file.
    Analyze(AnalyzeArgs),
    /// Sample random states and write scatter.csv rows.
    Sample(SampleArgs),
    /// Compare a state family against its closed forms; writes sweep.csv rows.
    ChannelSweep(SweepArgs),
    /// Classify the (purity, C) plane of Werner-unitary states; writes region.csv rows.
    WuScan(ScanArgs),
    /// Check both steerability bounds on random states. Exit 1 on any violation.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TargetArg {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TheoremArg {
    Lower,
    Upper,
    Both,
}

#[derive(Debug, Args)]
pub struct SamplerArgs {
    #[arg(long)]
    pub count: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long, default_value = "ginibre")]
    pub measure: Measure,
    /// 1, 2, 3, 4 or uniform.
    #[arg(long, default_value = "uniform")]
    pub ranks: RankPolicy,
    /// Worker threads; 0 uses every core. Output does not depend on it.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
}

impl SamplerArgs {
    fn config(&self) -> SamplerConfig {
        SamplerConfig {
            measure: self.measure,
            ranks: self.ranks,
            seed: self.seed,
            count: self.count,
        }
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// ad, pd or wu.
    #[arg(long)]
    pub family: Family,
    /// Fix θ instead of sweeping it (ad/pd).
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long, default_value_t = 50)]
    pub theta_steps: usize,
    #[arg(long, default_value_t = 50)]
    pub eta_steps: usize,
    /// p resolution of the wu grid.
    #[arg(long, default_value_t = 50)]
    pub p_steps: usize,
    /// For wu: draw this many random (p, θ, U) triples instead of a grid.
    #[arg(long)]
    pub count: Option<u64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Qubit the damping channel acts on.
    #[arg(long, value_enum, default_value = "a")]
    pub target: TargetArg,
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// Grid resolution along both purity and C.
    #[arg(long, default_value_t = 400)]
    pub grid: usize,
    /// Also writes <stem>_boundary.csv and <stem>_envelope.csv next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub sampler: SamplerArgs,
    #[arg(long, value_enum, default_value = "both")]
    pub theorems: TheoremArg,
    #[arg(long, value_enum, default_value = "table")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Input(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::Input(e.to_string())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::Input(e.to_string())
    }
}

type CliResult = std::result::Result<u8, CliError>;

fn open_out(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn reject_format(f: Format, allowed: &[Format]) -> std::result::Result<(), CliError> {
    if allowed.contains(&f) {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "format {f:?} is not supported by this command"
        )))
    }
}

#[derive(Serialize)]
struct AnalyzeOutput<'a> {
    #[serde(flatten)]
    report: &'a MeasureReport,
    lower_bound_verdict: String,
    direct_verdict: String,
}

fn lower_bound_verdict(r: &MeasureReport) -> String {
    if r.lower_bound_certifies {
        "steerable because C^2 + purity > 1".into()
    } else {
        "not certified: C^2 + purity <= 1".into()
    }
}

fn direct_verdict(r: &MeasureReport) -> String {
    if r.steerability > 0.0 {
        "steerable: S > 0".into()
    } else {
        "no CJWR violation: S = 0".into()
    }
}

fn analyze(args: &AnalyzeArgs) -> CliResult {
    reject_format(args.format, &[Format::Json, Format::Table])?;
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| CliError::Input(format!("{}: {e}", args.input.display())))?;
    let rho = parse_state_json(&text)?;
    let r = MeasureReport::new(&rho);
    let mut out = open_out(args.out.as_deref())?;
    match args.format {
        Format::Json => {
            let doc = AnalyzeOutput {
                report: &r,
                lower_bound_verdict: lower_bound_verdict(&r),
                direct_verdict: direct_verdict(&r),
            };
            serde_json::to_writer_pretty(&mut out, &doc).map_err(io::Error::from)?;
            writeln!(out)?;
        }
        _ => {
            let t = r.singular_values;
            let l = r.lambda;
            let rows = [
                ("concurrence C", r.concurrence.to_string()),
                ("CJWR F", r.f_value.to_string()),
                ("steerability S", r.steerability.to_string()),
                ("purity", r.purity.to_string()),
                ("Q", r.q_value.to_string()),
                ("D_A", r.coherence_a.to_string()),
                ("D_B", r.coherence_b.to_string()),
                ("lower bound", r.lower_bound.to_string()),
                ("upper bound", r.upper_bound.to_string()),
                ("t1 t2 t3", format!("{} {} {}", t[0], t[1], t[2])),
                ("lambda", format!("{} {} {} {}", l[0], l[1], l[2], l[3])),
                ("classification", r.classification.as_str().to_string()),
                ("lower-bound criterion", lower_bound_verdict(&r)),
                ("direct S > 0", direct_verdict(&r)),
            ];
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in rows {
                writeln!(out, "{k:<width$}  {v}")?;
            }
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn sample(args: &SampleArgs) -> CliResult {
    reject_format(args.format, &[Format::Csv, Format::Json])?;
    let cfg = args.sampler.config();
    let records = with_workers(args.sampler.threads, || run_scatter(&cfg))?;
    let mut out = open_out(args.out.as_deref())?;
    if args.format == Format::Json {
        serde_json::to_writer(&mut out, &records).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        write_scatter_csv(&records, &mut out)?;
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn channel_sweep(args: &SweepArgs) -> CliResult {
    reject_format(args.format, &[Format::Csv, Format::Json])?;
    let target = match args.target {
        TargetArg::A => Qubit::A,
        TargetArg::B => Qubit::B,
    };
    let grid = match (args.family, args.count) {
        (Family::Wu, Some(count)) => GridSpec::WernerRandom {
            count,
            seed: args.seed,
        },
        (Family::Wu, None) => GridSpec::WernerGrid {
            p_steps: args.p_steps,
            theta_steps: args.theta_steps,
            seed: args.seed,
        },
        (_, Some(_)) => {
            return Err(CliError::Input(
                "--count only applies to --family wu".into(),
            ))
        }
        (_, None) => GridSpec::Channel {
            theta: args.theta,
            theta_steps: args.theta_steps,
            eta_steps: args.eta_steps,
            target,
        },
    };
    let records = with_workers(args.threads, || run_family_sweep(args.family, grid))?;
    let mut out = open_out(args.out.as_deref())?;
    if args.format == Format::Json {
        serde_json::to_writer(&mut out, &records).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        write_sweep_csv(&records, &mut out)?;
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("region");
    path.with_file_name(format!("{stem}_{suffix}.csv"))
}

fn wu_scan(args: &ScanArgs) -> CliResult {
    reject_format(args.format, &[Format::Csv, Format::Json])?;
    let scan = run_region_scan(args.grid, args.grid)?;
    let mut out = open_out(args.out.as_deref())?;
    if args.format == Format::Json {
        serde_json::to_writer(&mut out, &scan).map_err(io::Error::from)?;
        writeln!(out)?;
    } else {
        write_region_csv(&scan.grid, &mut out)?;
        if let Some(path) = &args.out {
            let mut b = BufWriter::new(File::create(sibling(path, "boundary"))?);
            write_curve_csv(&scan.boundary, &mut b)?;
            b.flush()?;
            let mut e = BufWriter::new(File::create(sibling(path, "envelope"))?);
            write_curve_csv(&scan.envelope, &mut e)?;
            e.flush()?;
        }
    }
    out.flush()?;
    Ok(EXIT_OK)
}

fn write_summary(s: &FalsificationSummary, format: Format, out: &mut dyn Write) -> io::Result<()> {
    if format == Format::Json {
        serde_json::to_writer_pretty(&mut *out, s)?;
        return writeln!(out);
    }
    writeln!(out, "checked                      {}", s.checked)?;
    writeln!(
        out,
        "worst margin lower (S - lb)  {:.3e}",
        s.worst_margin_lower
    )?;
    writeln!(
        out,
        "worst margin upper (ub - S)  {:.3e}",
        s.worst_margin_upper
    )?;
    writeln!(
        out,
        "worst C - S                  {:.3e}",
        s.worst_margin_upper_c_branch
    )?;
    writeln!(
        out,
        "worst coherence identity     {:.3e}",
        s.worst_coherence_identity
    )?;
    writeln!(
        out,
        "worst coherence inequality   {:.3e}",
        s.worst_coherence_inequality
    )?;
    writeln!(out, "violations                   {}", s.violations.len())?;
    for v in &s.violations {
        writeln!(
            out,
            "  seed {} index {} {:?} margin {}",
            v.seed, v.index, v.bound, v.margin
        )?;
    }
    Ok(())
}

fn verify(args: &VerifyArgs) -> CliResult {
    reject_format(args.format, &[Format::Json, Format::Table])?;
    let theorems = match args.theorems {
        TheoremArg::Lower => Theorems {
            lower: true,
            upper: false,
        },
        TheoremArg::Upper => Theorems {
            lower: false,
            upper: true,
        },
        TheoremArg::Both => Theorems::BOTH,
    };
    let cfg = args.sampler.config();
    let summary = with_workers(args.sampler.threads, || run_falsification(&cfg, theorems))?;
    let mut out = open_out(args.out.as_deref())?;
    write_summary(&summary, args.format, &mut out)?;
    out.flush()?;
    Ok(if summary.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    })
}

/// Run a parsed command and return its exit code.
pub fn execute(cli: &Cli) -> u8 {
    let result = match &cli.command {
        Command::Analyze(a) => analyze(a),
        Command::Sample(a) => sample(a),
        Command::ChannelSweep(a) => channel_sweep(a),
        Command::WuScan(a) => wu_scan(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Input(msg)) => {
            eprintln!("error: {msg}");
            EXIT_INPUT
        }
    }
}

/// Parse `std::env::args` and run. Usage errors exit with code 2.
pub fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    ExitCode::from(execute(&cli))
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_definition_is_valid() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_documented_flags() {
        let cli = Cli::try_parse_from([
            "qsteer",
            "sample",
            "--count",
            "10",
            "--seed",
            "7",
            "--measure",
            "haar-pure",
            "--ranks",
            "3",
            "--out",
            "x.csv",
        ])
        .unwrap();
        match cli.command {
            Command::Sample(a) => {
                assert_eq!(a.sampler.count, 10);
                assert_eq!(a.sampler.measure, Measure::HaarPure);
                assert_eq!(a.sampler.ranks, RankPolicy::Fixed(3));
            }
            other => panic!("{other:?}"),
        }
        let cli = Cli::try_parse_from([
            "qsteer",
            "channel-sweep",
            "--family",
            "pd",
            "--theta-steps",
            "5",
        ])
        .unwrap();
        assert!(matches!(
            cli.command,
            Command::ChannelSweep(SweepArgs {
                family: Family::Bpd,
                ..
            })
        ));
    }

    #[test]
    fn rejects_unknown_and_missing_flags() {
        assert!(Cli::try_parse_from([
            "qsteer", "verify", "--count", "1", "--seed", "1", "--bogus"
        ])
        .is_err());
        assert!(Cli::try_parse_from(["qsteer", "verify", "--count", "1"]).is_err());
        assert!(Cli::try_parse_from([
            "qsteer", "sample", "--count", "1", "--seed", "1", "--ranks", "7"
        ])
        .is_err());
    }
}
