use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use orbgrand_core::channel::RNG_ALGORITHM;
use orbgrand_core::code::{Code, CodeChecker};
use orbgrand_core::error::{GrandError, Result};
use orbgrand_core::pattern::{read_patterns, write_patterns};
use orbgrand_core::schedule::Schedule;
use orbgrand_core::sim::{
    csv_row, dump_patterns, estimate_empirical_schedule, parse_ebn0_list, run_bler, verify_schedule, SimConfig,
    StopReason, CSV_HEADER,
};

#[derive(Parser)]
#[command(name = "orbgrand", version, about = "ORBGRAND schedules, decoding and BLER simulation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo BLER over a range of Eb/N0 values, written as CSV.
    Simulate(SimulateArgs),
    /// Write the first patterns of a schedule in the pattern text format.
    DumpPatterns(DumpArgs),
    /// Report duplicates and UPO-violating pairs in a pattern file.
    VerifySchedule(VerifyArgs),
    /// Rank observed sorted-space error patterns by frequency.
    EmpiricalSchedule(EmpiricalArgs),
}

#[derive(Args)]
struct ScheduleArgs {
    /// lwo, ilwo, ilwo-approx, file (with --pattern-file) or file:<path>
    #[arg(long, default_value = "ilwo")]
    schedule: String,
    #[arg(long)]
    pattern_file: Option<PathBuf>,
    /// Maximum Hamming weight of queried patterns, or "none".
    #[arg(long, default_value = "none", value_parser = parse_hmax)]
    hmax: HMax,
}

impl ScheduleArgs {
    fn resolve(&self) -> Result<Schedule> {
        match (self.schedule.as_str(), &self.pattern_file) {
            ("file", Some(path)) => Ok(Schedule::File(path.clone())),
            ("file", None) => Err(GrandError::Config("--schedule file needs --pattern-file".into())),
            (name, None) => name.parse(),
            (_, Some(_)) => Err(GrandError::Config("--pattern-file requires --schedule file".into())),
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// bch127, polar128 or a code config file
    #[arg(long, default_value = "bch127")]
    code: String,
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// start:step:stop, a comma list, or one value (dB)
    #[arg(long, default_value = "5.0:0.5:8.0")]
    ebn0: String,
    #[arg(long, default_value_t = 1000)]
    qmax: u64,
    #[arg(long, default_value_t = 100)]
    min_errors: u64,
    #[arg(long, default_value_t = 1_000_000)]
    max_blocks: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    /// Share noise realizations across schedules at equal seed.
    #[arg(long)]
    paired: bool,
    /// CSV destination; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DumpArgs {
    #[command(flatten)]
    schedule: ScheduleArgs,
    /// Block length; taken from --code when omitted.
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "bch127")]
    code: String,
    /// Number of patterns to write.
    #[arg(long, default_value_t = 200)]
    qmax: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    pattern_file: PathBuf,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, default_value = "bch127")]
    code: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EmpiricalArgs {
    #[arg(long, default_value = "bch127")]
    code: String,
    /// Single Eb/N0 value in dB.
    #[arg(long, default_value_t = 6.0)]
    ebn0: f64,
    #[arg(long, default_value_t = 100_000)]
    max_blocks: u64,
    /// Number of patterns to keep, all-zero included.
    #[arg(long, default_value_t = 35)]
    qmax: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = default_workers())]
    workers: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Clone, Copy)]
struct HMax(Option<usize>);

fn parse_hmax(s: &str) -> std::result::Result<HMax, String> {
    match s {
        "none" => Ok(HMax(None)),
        _ => s.parse().map(|h| HMax(Some(h))).map_err(|e| format!("expected a number or \"none\": {e}")),
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| GrandError::File {
            path: p.clone(),
            source,
        })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn block_length(n: Option<usize>, code: &str) -> Result<usize> {
    match n {
        Some(n) => Ok(n),
        None => Ok(Code::load(code)?.n()),
    }
}

fn simulate(args: SimulateArgs) -> Result<()> {
    let code = Code::load(&args.code)?;
    let cfg = SimConfig {
        schedule: args.schedule.resolve()?,
        ebn0_list: parse_ebn0_list(&args.ebn0)?,
        q_max: args.qmax,
        h_max: args.schedule.hmax.0,
        min_block_errors: args.min_errors,
        max_blocks: args.max_blocks,
        seed: args.seed,
        workers: args.workers,
        paired_noise: args.paired,
    };
    cfg.validate()?;
    eprintln!("rng: {RNG_ALGORITHM}");
    let results = run_bler(&code, &cfg)?;
    let mut out = open_out(&args.out)?;
    writeln!(out, "{CSV_HEADER}")?;
    for r in &results {
        writeln!(out, "{}", csv_row(code.name(), &cfg, r))?;
        let why = match r.stop {
            StopReason::MinErrors => "min-errors",
            StopReason::MaxBlocks => "max-blocks",
        };
        eprintln!("{:.2} dB: stopped by {why} after {:.1}s", r.ebn0_db, r.wall_seconds);
    }
    out.flush()?;
    Ok(())
}

fn dump(args: DumpArgs) -> Result<()> {
    let n = block_length(args.n, &args.code)?;
    let mut out = open_out(&args.out)?;
    dump_patterns(&mut out, &args.schedule.resolve()?, n, args.qmax, args.schedule.hmax.0)?;
    out.flush()?;
    Ok(())
}

fn verify(args: VerifyArgs) -> Result<()> {
    let n = block_length(args.n, &args.code)?;
    let file = File::open(&args.pattern_file).map_err(|source| GrandError::File {
        path: args.pattern_file.clone(),
        source,
    })?;
    let patterns = read_patterns(BufReader::new(file), n)?;
    let report = verify_schedule(&patterns);
    let mut out = open_out(&args.out)?;
    for (first, dup) in &report.duplicates {
        writeln!(out, "duplicate: line {dup} repeats line {first}")?;
    }
    for (early, late) in &report.violations {
        writeln!(
            out,
            "violation: line {late} ({}) precedes line {early} ({}) in the UPO but comes later",
            patterns[late - 1],
            patterns[early - 1]
        )?;
    }
    if report.is_compliant() {
        writeln!(out, "compliant: {} patterns", patterns.len())?;
    }
    out.flush()?;
    Ok(())
}

fn empirical(args: EmpiricalArgs) -> Result<()> {
    let code = Code::load(&args.code)?;
    eprintln!("rng: {RNG_ALGORITHM}");
    let patterns = estimate_empirical_schedule(&code, args.ebn0, args.max_blocks, args.qmax, args.seed, args.workers)?;
    let mut out = open_out(&args.out)?;
    write_patterns(&mut out, &patterns)?;
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(a) => simulate(a),
        Command::DumpPatterns(a) => dump(a),
        Command::VerifySchedule(a) => verify(a),
        Command::EmpiricalSchedule(a) => empirical(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
