use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use geoseq::error::Error;
use geoseq::fibonacci::{cassini, cassini_expected, fhat_transform_log, fib_sum, FibCache};
use geoseq::harness::run_suite;
use geoseq::io::{
    emit, parse_sequence_file, read_sequence_file, Domain, FibReport, Format, Report, RunConfig,
    SequenceFile,
};
use geoseq::stat::{stat_converges_with, stat_density};
use geoseq::summability::{classify_with, paranorm, LambdaSeq};
use geoseq::GeoScalar;

const EXIT_USAGE: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_CHECK: u8 = 3;
const EXIT_RANGE: u8 = 4;

#[derive(Parser)]
#[command(name = "geoseq", version, about = "Geometric-calculus sequence spaces")]
struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Text)]
    format: OutFormat,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
    Text,
}

impl From<OutFormat> for Format {
    fn from(f: OutFormat) -> Self {
        match f {
            OutFormat::Json => Format::Json,
            OutFormat::Csv => Format::Csv,
            OutFormat::Text => Format::Text,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum OutDomain {
    Geo,
    Log,
}

#[derive(Subcommand)]
enum Command {
    /// Print f_0..f_K.
    Fib {
        #[arg(long)]
        n: usize,
        /// Also check the Cassini and sum identities exactly.
        #[arg(long)]
        check_identities: bool,
    },
    /// Apply the Fibonacci difference transform to a sequence file.
    Transform {
        #[arg(long = "in")]
        input: PathBuf,
        /// Output domain (defaults to the input's).
        #[arg(long, value_enum)]
        domain: Option<OutDomain>,
        /// Write here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Membership report for the configured space.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Paranorm of a sequence (zero variant).
    Paranorm {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Statistical density trace and verdict.
    Stat {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Geometric threshold (> 1).
        #[arg(long)]
        epsilon: f64,
        /// Geometric limit candidate (> 0).
        #[arg(long)]
        ell: f64,
    },
    /// Run the randomized inequality suite; exits 3 on any failure.
    Verify {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trials: Option<usize>,
    },
}

enum Failure {
    Lib(Error),
    Check(Vec<u8>),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Self::Lib(e)
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Error> {
    match path {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

fn run(cli: Cli) -> Result<Vec<u8>, Failure> {
    let format: Format = cli.format.into();
    match cli.command {
        Command::Fib {
            n,
            check_identities,
        } => {
            let cache = FibCache::new(n + 1);
            let values = cache.values()[..=n].to_vec();
            let identities = check_identities.then(|| {
                (0..=n)
                    .map(|k| {
                        let cas = k == 0 || cassini(k) == cassini_expected(k);
                        let sum = fib_sum(k) + 1u32 == *cache.fib(k + 2);
                        (k, cas, sum)
                    })
                    .collect()
            });
            let rep = FibReport { values, identities };
            let out = emit(&Report::Fib(&rep), format)?;
            if rep.identities_hold() {
                Ok(out)
            } else {
                Err(Failure::Check(out))
            }
        }
        Command::Transform { input, domain, out } => {
            let file = read_sequence_file(&input)?;
            let in_domain = file.domain;
            let x = file.into_sequence()?;
            let y = fhat_transform_log(&x.to_log());
            let domain = match domain {
                Some(OutDomain::Geo) => Domain::Geometric,
                Some(OutDomain::Log) => Domain::Log,
                None => in_domain,
            };
            let values = match domain {
                Domain::Log => y,
                Domain::Geometric => y
                    .iter()
                    .map(|&v| GeoScalar::from_log(v)?.value())
                    .collect::<Result<_, _>>()?,
            };
            let seq = SequenceFile {
                domain,
                values,
                name: None,
                description: Some("Fibonacci difference transform".into()),
            };
            let mut text = seq.to_json();
            text.push('\n');
            match out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(Error::from)?;
                    log::info!("wrote {}", path.display());
                    Ok(Vec::new())
                }
                None => Ok(text.into_bytes()),
            }
        }
        Command::Analyze { input, config } => {
            let cfg = load_config(config.as_deref())?;
            let x = parse_sequence_file(&input)?;
            let rep = classify_with(&x, &cfg.space(), cfg.classify_options())?;
            Ok(emit(&Report::Membership(&rep), format)?)
        }
        Command::Paranorm { input, config } => {
            let cfg = load_config(config.as_deref())?;
            let x = parse_sequence_file(&input)?;
            let p = paranorm(&x, &cfg.space())?;
            Ok(emit(&Report::Paranorm(&p), format)?)
        }
        Command::Stat {
            input,
            config,
            epsilon,
            ell,
        } => {
            let cfg = load_config(config.as_deref())?;
            let x = parse_sequence_file(&input)?;
            let lambda = LambdaSeq::new(&cfg.lambda, x.len().saturating_sub(1))?;
            let trace = stat_density(&x, &lambda, GeoScalar::new(ell)?, GeoScalar::new(epsilon)?)?;
            let verdict = stat_converges_with(&trace, cfg.classify_options());
            Ok(emit(&Report::Density(&trace, verdict), format)?)
        }
        Command::Verify {
            config,
            seed,
            trials,
        } => {
            let cfg = load_config(config.as_deref())?;
            let mut tc = cfg.trial_config();
            if let Some(s) = seed {
                tc.seed = s;
            }
            if let Some(t) = trials {
                tc.trials = t;
            }
            let rep = run_suite(&tc)?;
            let out = emit(&Report::Suite(&rep), format)?;
            if rep.passed() {
                Ok(out)
            } else {
                Err(Failure::Check(out))
            }
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Range { .. } => EXIT_RANGE,
        _ => EXIT_INPUT,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("GEOSEQ_LOG_LEVEL", "warn"))
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let mut stdout = std::io::stdout().lock();
    match run(cli) {
        Ok(out) => {
            let _ = stdout.write_all(&out);
            ExitCode::SUCCESS
        }
        Err(Failure::Check(out)) => {
            let _ = stdout.write_all(&out);
            log::error!("checks failed");
            ExitCode::from(EXIT_CHECK)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
