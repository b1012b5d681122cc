//! Command-line entry point: `decode` one frame, `simulate` an SNR sweep,
//! or `verify` the randomized equivalence suites.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use lclp_core::sim::{self, CodewordSource, DecoderChoice, SimConfig};
use lclp_core::{
    selftest, BasicConfig, DecodeStatus, Kappa, LlrMatrix, Modulation, ParityCheckMatrix,
    StepSchedule, SubgradConfig,
};

mod settings;

use settings::Settings;

#[derive(Parser)]
#[command(
    name = "lclp",
    version,
    about = "Low-complexity LP decoding of nonbinary LDPC codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode a single frame from an LLR file or a received-vector file.
    Decode(DecodeArgs),
    /// Monte-Carlo FER/SER sweep over AWGN with direct PSK mapping.
    Simulate(SimulateArgs),
    /// Run the randomized oracle-equivalence and invariant suites.
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum DecoderKind {
    Basic,
    Subgrad,
    Ml,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum StepRuleKind {
    Constant,
    Staircase,
}

#[derive(Args)]
struct DecoderFlags {
    /// Decoding algorithm.
    #[arg(long, value_enum)]
    decoder: Option<DecoderKind>,
    /// Softening parameter: `inf` or a positive float.
    #[arg(long)]
    kappa: Option<String>,
    /// Iteration budget.
    #[arg(long)]
    max_iters: Option<usize>,
    /// Subgradient step-size rule.
    #[arg(long, value_enum)]
    step_rule: Option<StepRuleKind>,
    /// Initial step size (defaults: 0.15 staircase, 0.08 constant).
    #[arg(long)]
    theta1: Option<f64>,
    /// Basic decoder: compute one marginal set per row visit and reuse it
    /// across the row's edges.
    #[arg(long)]
    reuse_marginals: bool,
    /// Subgradient decoder: stop when successive dual values differ by
    /// less than this (0 disables).
    #[arg(long)]
    early_stop_eps: Option<f64>,
}

#[derive(Args)]
struct DecodeArgs {
    /// Parity-check matrix file.
    #[arg(long)]
    matrix: PathBuf,
    /// LLR file: one line of q-1 reals per symbol, element order.
    #[arg(long, conflicts_with = "received")]
    llr: Option<PathBuf>,
    /// Received-vector file: one line `re im` per symbol.
    #[arg(long, requires = "snr_db")]
    received: Option<PathBuf>,
    /// Es/N0 in dB used to demodulate `--received`.
    #[arg(long)]
    snr_db: Option<f64>,
    #[command(flatten)]
    flags: DecoderFlags,
}

#[derive(Args)]
struct SimulateArgs {
    /// Flat key=value settings file; command-line flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Parity-check matrix file.
    #[arg(long)]
    matrix: Option<PathBuf>,
    /// Comma-separated Es/N0 points in dB.
    #[arg(long)]
    snr_db: Option<String>,
    /// Frame cap per SNR point.
    #[arg(long)]
    frames: Option<u64>,
    /// Frame-error target per point: one value, or one per SNR point.
    #[arg(long)]
    target_fe: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    workers: Option<usize>,
    /// Codeword list file (one word per line); default transmits the
    /// all-zero word.
    #[arg(long)]
    codewords: Option<PathBuf>,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Measure wall time per point (makes the CSV non-reproducible).
    #[arg(long)]
    timing: bool,
    #[command(flatten)]
    flags: DecoderFlags,
}

#[derive(Args)]
struct VerifyArgs {
    /// Randomized instances for the marginal-equivalence suite.
    #[arg(long, default_value_t = 1000)]
    instances: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Decode(args) => decode(args),
        Command::Simulate(args) => simulate(args),
        Command::Verify(args) => verify(args),
    }
}

fn load_matrix(path: &Path) -> Result<ParityCheckMatrix> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading matrix file {}", path.display()))?;
    Ok(ParityCheckMatrix::parse(&text)?)
}

struct ResolvedDecoder {
    choice: DecoderChoice,
    echo: Vec<(String, String)>,
}

fn resolve_decoder(flags: &DecoderFlags, file: &Settings) -> Result<ResolvedDecoder> {
    let kind = match flags.decoder {
        Some(k) => k,
        None => match file.get("decoder") {
            Some("basic") => DecoderKind::Basic,
            Some("subgrad") => DecoderKind::Subgrad,
            Some("ml") => DecoderKind::Ml,
            Some(other) => bail!("unknown decoder {other:?} in config file"),
            None => DecoderKind::Basic,
        },
    };
    let kappa = match &flags.kappa {
        Some(s) => Kappa::parse(s)?,
        None => match file.get("kappa") {
            Some(s) => Kappa::parse(s)?,
            None => Kappa::Inf,
        },
    };
    let max_iters = match flags.max_iters {
        Some(v) => v,
        None => file.parse_or("max_iters", 100)?,
    };
    let step_rule = match flags.step_rule {
        Some(r) => r,
        None => match file.get("step_rule") {
            Some("constant") => StepRuleKind::Constant,
            Some("staircase") => StepRuleKind::Staircase,
            Some(other) => bail!("unknown step rule {other:?} in config file"),
            None => StepRuleKind::Staircase,
        },
    };
    let theta1 = match flags.theta1 {
        Some(v) => Some(v),
        None => file.parse_opt("theta1")?,
    };
    let reuse = flags.reuse_marginals || file.parse_or("reuse_marginals", false)?;
    let early_stop_eps = match flags.early_stop_eps {
        Some(v) => v,
        None => file.parse_or("early_stop_eps", 0.0)?,
    };

    let mut echo = Vec::new();
    let choice = match kind {
        DecoderKind::Basic => {
            echo.push(("decoder".into(), "basic".into()));
            echo.push(("kappa".into(), kappa.to_string()));
            echo.push(("max_iters".into(), max_iters.to_string()));
            echo.push(("reuse_marginals".into(), reuse.to_string()));
            DecoderChoice::Basic(BasicConfig {
                kappa,
                max_iters,
                reuse_row_marginals: reuse,
                ..BasicConfig::default()
            })
        }
        DecoderKind::Subgrad => {
            let (rule_name, schedule) = match step_rule {
                StepRuleKind::Constant => {
                    ("constant", StepSchedule::constant(theta1.unwrap_or(0.08))?)
                }
                StepRuleKind::Staircase => {
                    ("staircase", StepSchedule::staircase(theta1.unwrap_or(0.15))?)
                }
            };
            echo.push(("decoder".into(), "subgrad".into()));
            echo.push(("step_rule".into(), rule_name.into()));
            echo.push(("theta1".into(), schedule.theta1.to_string()));
            echo.push(("max_iters".into(), max_iters.to_string()));
            echo.push(("early_stop_eps".into(), early_stop_eps.to_string()));
            DecoderChoice::Subgrad(SubgradConfig {
                schedule,
                max_iters,
                early_stop_eps,
                record_trace: false,
            })
        }
        DecoderKind::Ml => {
            echo.push(("decoder".into(), "ml".into()));
            DecoderChoice::OracleMl
        }
    };
    Ok(ResolvedDecoder { choice, echo })
}

fn decode(args: DecodeArgs) -> Result<ExitCode> {
    let matrix = load_matrix(&args.matrix)?;
    let resolved = resolve_decoder(&args.flags, &Settings::default())?;

    let llr = if let Some(path) = &args.llr {
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading LLR file {}", path.display()))?;
        LlrMatrix::parse(&text)?
    } else if let Some(path) = &args.received {
        let snr = args.snr_db.expect("clap enforces --snr-db with --received");
        let text = fs::read_to_string(path)
            .with_context(|| format!("reading received file {}", path.display()))?;
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 2 {
                bail!("received file line {}: expected `re im`", lineno + 1);
            }
            let re: f64 = parts[0]
                .parse()
                .with_context(|| format!("received file line {}", lineno + 1))?;
            let im: f64 = parts[1]
                .parse()
                .with_context(|| format!("received file line {}", lineno + 1))?;
            points.push(num_complex::Complex64::new(re, im));
        }
        let modulation = Modulation::psk(matrix.ring().q())?;
        let sigma = lclp_core::channel::sigma_from_es_n0_db(snr);
        LlrMatrix::from_received(&modulation, &points, sigma)?
    } else {
        bail!("decode needs --llr or --received");
    };

    eprintln!("# matrix={}", args.matrix.display());
    for (k, v) in &resolved.echo {
        eprintln!("# {k}={v}");
    }
    if let Some(path) = &args.llr {
        eprintln!("# llr={}", path.display());
    }
    if let Some(path) = &args.received {
        eprintln!("# received={}", path.display());
        eprintln!("# snr_db={}", args.snr_db.unwrap_or_default());
    }

    let (symbols, status, iterations) = match resolved.choice {
        DecoderChoice::Basic(cfg) => {
            let res = lclp_core::BasicDecoder::new(matrix, cfg)?.decode(&llr)?;
            (res.symbols, res.status, res.iterations)
        }
        DecoderChoice::Subgrad(cfg) => {
            let res = lclp_core::SubgradDecoder::new(matrix, cfg)?.decode(&llr)?;
            (res.symbols, res.status, res.iterations)
        }
        DecoderChoice::OracleMl => {
            let (word, _) = lclp_core::oracle::exhaustive_ml(&matrix, &llr)?;
            (
                word.into_iter().map(Some).collect(),
                DecodeStatus::Codeword,
                0,
            )
        }
    };

    let rendered: Vec<String> = symbols
        .iter()
        .map(|s| match s {
            Some(c) => c.to_string(),
            None => "?".to_string(),
        })
        .collect();
    println!("{}", rendered.join(" "));
    println!(
        "status {}",
        match status {
            DecodeStatus::Codeword => "codeword",
            DecodeStatus::MaxIters => "max-iters",
        }
    );
    println!("iterations {iterations}");
    Ok(ExitCode::SUCCESS)
}

fn simulate(args: SimulateArgs) -> Result<ExitCode> {
    let file = match &args.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::default(),
    };
    let matrix_path = args
        .matrix
        .clone()
        .or_else(|| file.get("matrix").map(PathBuf::from))
        .context("simulate needs --matrix (or `matrix` in the config file)")?;
    let matrix = load_matrix(&matrix_path)?;
    let resolved = resolve_decoder(&args.flags, &file)?;

    let snr_spec = args
        .snr_db
        .clone()
        .or_else(|| file.get("snr_db").map(str::to_string))
        .context("simulate needs --snr-db (or `snr_db` in the config file)")?;
    let snr_db = parse_f64_list(&snr_spec).context("parsing --snr-db")?;
    let target_spec = args
        .target_fe
        .clone()
        .or_else(|| file.get("target_fe").map(str::to_string));
    let target_frame_errors = match target_spec {
        Some(s) => parse_u64_list(&s).context("parsing --target-fe")?,
        None => vec![100],
    };
    let max_frames = match args.frames {
        Some(v) => v,
        None => file.parse_or("frames", 1_000_000u64)?,
    };
    let seed = match args.seed {
        Some(v) => v,
        None => file.parse_or("seed", 0u64)?,
    };
    let workers = match args.workers {
        Some(v) => v,
        None => file.parse_or("workers", 1usize)?,
    };
    let timing = args.timing || file.parse_or("timing", false)?;
    let codewords_path = args
        .codewords
        .clone()
        .or_else(|| file.get("codewords").map(PathBuf::from));
    let source = match &codewords_path {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading codeword file {}", path.display()))?;
            CodewordSource::List(sim::parse_codewords(&text, &matrix)?)
        }
        None => CodewordSource::AllZero,
    };

    let config = SimConfig {
        matrix,
        decoder: resolved.choice,
        snr_db: snr_db.clone(),
        max_frames,
        target_frame_errors: target_frame_errors.clone(),
        seed,
        source,
        workers,
        measure_time: timing,
    };

    eprintln!("# matrix={}", matrix_path.display());
    for (k, v) in &resolved.echo {
        eprintln!("# {k}={v}");
    }
    eprintln!(
        "# snr_db={}",
        snr_db.iter().map(f64::to_string).collect::<Vec<_>>().join(",")
    );
    eprintln!(
        "# target_fe={}",
        target_frame_errors
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    eprintln!("# frames={max_frames}");
    eprintln!("# seed={seed}");
    eprintln!("# workers={workers}");
    eprintln!("# timing={timing}");
    eprintln!(
        "# codewords={}",
        codewords_path
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "all-zero".into())
    );

    let points = sim::run_sweep(&config)?;
    match &args.out {
        Some(path) => {
            let mut f = fs::File::create(path)
                .with_context(|| format!("creating output file {}", path.display()))?;
            sim::write_csv(&points, &mut f)?;
            f.flush()?;
        }
        None => {
            let stdout = std::io::stdout();
            sim::write_csv(&points, stdout.lock())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode> {
    eprintln!("# instances={}", args.instances);
    eprintln!("# seed={}", args.seed);
    let reports = selftest::run_all(args.instances, args.seed);
    let mut all_passed = true;
    for report in &reports {
        println!("{report}");
        all_passed &= report.passed;
    }
    println!(
        "{}: {} of {} suites passed",
        if all_passed { "OK" } else { "FAILED" },
        reports.iter().filter(|r| r.passed).count(),
        reports.len()
    );
    Ok(if all_passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .with_context(|| format!("bad number {tok:?}"))
        })
        .collect()
}

fn parse_u64_list(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<u64>()
                .with_context(|| format!("bad count {tok:?}"))
        })
        .collect()
}
