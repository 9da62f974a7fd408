//! The `conserve` command line: stream conversion, exact analysis, parameter
//! sweeps and verification.
//!
//! Exit codes: 0 success, 1 usage or spec error, 2 bad input data,
//! 3 verification failure.

mod spec_file;
mod sweep;

use std::ffi::OsString;
use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::analysis::{chi_square_prefixes, verify_reduction_exact, verify_reduction_lazy};
use crate::combinators::epoch_stats;
use crate::dist::{ratio_string, Ratio};
use crate::error::Error;
use crate::sampler::ExactSampler;

pub use spec_file::{
    explicit_from_spec, parse_exact, ArbitraryUniform, BiasedUniform, Compose, Explicit, Loaded, ProtocolSpecFile,
    RationalPair, Rule, Serial, UniformArbitrary, UniformRational, UniformUniform,
};
pub use sweep::{sweep_rows, SweepFamily, SweepRow, CSV_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CmdOutput {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    /// Verification ran and failed; the report is still printed.
    #[error("verification failed")]
    Failed(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "conserve",
    version,
    about = "Entropy-conserving conversions between random sources"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a protocol over an input stream and print the output glyphs.
    Convert(ConvertArgs),
    /// Print exact per-iteration statistics of a restart protocol as JSON.
    Analyze {
        /// Spec file path, or inline JSON.
        spec: String,
    },
    /// Tabulate statistics of a family over a range of block lengths.
    Sweep(sweep::SweepArgs),
    /// Check that a protocol produces the target distribution.
    Verify(VerifyArgs),
}

#[derive(Args, Debug)]
struct ConvertArgs {
    /// Spec file path, or inline JSON.
    spec: String,
    /// Sample the input from the spec's source distribution with this seed.
    #[arg(long, conflicts_with = "stdin_symbols", requires = "count")]
    seed: Option<u64>,
    /// Number of input symbols to sample.
    #[arg(short = 'n', long = "count")]
    count: Option<usize>,
    /// Read input glyphs from standard input (the default).
    #[arg(long)]
    stdin_symbols: bool,
    /// Report consumed and produced symbol counts on standard error.
    #[arg(long)]
    stats: bool,
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["exact", "chi2", "lazy"])))]
struct VerifyArgs {
    /// Spec file path, or inline JSON.
    spec: String,
    /// Exact check of every output prefix up to this length.
    #[arg(long, value_name = "L")]
    exact: Option<usize>,
    /// Chi-squared test of output prefixes of this length.
    #[arg(long, value_name = "L")]
    chi2: Option<usize>,
    #[arg(long, default_value_t = 10_000)]
    trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Check a staged protocol following this many stages.
    #[arg(long, value_name = "DEPTH")]
    lazy: Option<usize>,
    /// Prefix length for --lazy; defaults to the block length.
    #[arg(long, value_name = "L")]
    length: Option<usize>,
    /// Largest acceptable deviation bound for --lazy, decimal or fraction.
    #[arg(long, default_value = "0")]
    tolerance: String,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdin: &mut dyn Read) -> CmdOutput
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if e.use_stderr() {
                CmdOutput {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                CmdOutput {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let mut out = CmdOutput::default();
    let result = match cli.command {
        Command::Convert(args) => convert(args, stdin, &mut out),
        Command::Analyze { spec } => analyze(&spec, &mut out),
        Command::Sweep(args) => sweep::sweep(args, &mut out).map_err(CliError::Usage),
        Command::Verify(args) => verify(args, &mut out),
    };
    match result {
        Ok(()) => out.code = EXIT_OK,
        Err(CliError::Usage(msg)) => {
            out.code = EXIT_USAGE;
            out.stderr.push_str(&format!("error: {msg}\n"));
        }
        Err(CliError::Input(msg)) => {
            out.code = EXIT_INPUT;
            out.stderr.push_str(&format!("error: {msg}\n"));
        }
        Err(CliError::Failed(msg)) => {
            out.code = EXIT_FAILED;
            out.stderr.push_str(&format!("verification failed: {msg}\n"));
        }
    }
    out
}

fn read_spec(arg: &str) -> Result<ProtocolSpecFile, CliError> {
    let text = if arg.trim_start().starts_with('{') {
        arg.to_string()
    } else {
        std::fs::read_to_string(arg).map_err(|e| CliError::Usage(format!("{arg}: {e}")))?
    };
    ProtocolSpecFile::from_json(&text).map_err(|e| CliError::Usage(format!("invalid spec at {e}")))
}

fn load(arg: &str) -> Result<Loaded, CliError> {
    Ok(read_spec(arg)?.load()?)
}

fn convert(args: ConvertArgs, stdin: &mut dyn Read, out: &mut CmdOutput) -> Result<(), CliError> {
    let loaded = load(&args.spec)?;
    let input = match args.seed {
        Some(seed) => {
            let n = args.count.expect("clap requires a count with a seed");
            ExactSampler::new(&loaded.mu, seed)?.fill(n)
        }
        None => {
            let mut text = String::new();
            stdin
                .read_to_string(&mut text)
                .map_err(|e| CliError::Input(format!("reading input: {e}")))?;
            let mut word = Vec::with_capacity(text.len());
            for (pos, ch) in text.chars().enumerate().filter(|(_, c)| !c.is_whitespace()) {
                match loaded.input.symbol_of(ch) {
                    Some(s) => word.push(s),
                    None => return Err(CliError::Input(format!("unknown glyph {ch:?} at position {pos}"))),
                }
            }
            word
        }
    };
    let (_, emitted) = loaded.protocol.step_word(loaded.protocol.start(), &input)?;
    out.stdout.push_str(&loaded.output.render(&emitted)?);
    out.stdout.push('\n');
    if args.stats {
        out.stderr.push_str(&format!(
            "{}\n",
            json!({ "consumed": input.len(), "produced": emitted.len() })
        ));
    }
    Ok(())
}

fn analyze(arg: &str, out: &mut CmdOutput) -> Result<(), CliError> {
    let spec = read_spec(arg)?
        .restart_spec()?
        .ok_or_else(|| CliError::Usage("analyze needs a single restart protocol".into()))?;
    let st = epoch_stats(&spec);
    let doc = json!({
        "productive": st.is_productive(),
        "c": ratio_string(&st.consumption),
        "p": ratio_string(&st.production),
        "p_succ": ratio_string(&st.success),
        "latency": st.latency.as_ref().map(ratio_string),
        "m": st.max_consumption,
        "entropy_in": round9(st.entropy_in),
        "entropy_out": round9(st.entropy_out),
        "efficiency_bits": round9(st.efficiency_bits),
    });
    out.stdout.push_str(&serde_json::to_string_pretty(&doc).expect("json"));
    out.stdout.push('\n');
    Ok(())
}

pub(crate) fn round9(x: f64) -> serde_json::Value {
    let text = format!("{x:.9}");
    serde_json::from_str(&text).unwrap_or(serde_json::Value::Null)
}

fn verify(args: VerifyArgs, out: &mut CmdOutput) -> Result<(), CliError> {
    let loaded = load(&args.spec)?;
    if let Some(len) = args.exact {
        let spec = loaded
            .restart
            .as_ref()
            .ok_or_else(|| CliError::Usage("--exact needs a single restart protocol".into()))?;
        let report = match verify_reduction_exact(spec, len) {
            Ok(r) => r,
            Err(Error::Unproductive) => return Err(CliError::Failed("the protocol never emits".into())),
            Err(e) => return Err(e.into()),
        };
        out.stdout
            .push_str(&serde_json::to_string_pretty(&report.to_json()).expect("json"));
        out.stdout.push('\n');
        return if report.is_exact() {
            Ok(())
        } else {
            Err(CliError::Failed(format!(
                "deviation {}",
                ratio_string(&report.max_deviation)
            )))
        };
    }
    if let Some(len) = args.chi2 {
        let report = chi_square_prefixes(
            loaded.protocol.as_ref(),
            &loaded.mu,
            &loaded.nu,
            len,
            args.trials,
            args.seed,
        )?;
        out.stdout
            .push_str(&serde_json::to_string_pretty(&report).expect("json"));
        out.stdout.push('\n');
        return if report.passed {
            Ok(())
        } else {
            Err(CliError::Failed(format!(
                "statistic {:.3} above {:.3}",
                report.statistic, report.threshold
            )))
        };
    }
    let depth = args.lazy.expect("clap requires a mode");
    let staged = loaded
        .staged
        .as_ref()
        .ok_or_else(|| CliError::Usage("--lazy needs a uniform_arbitrary protocol".into()))?;
    let tolerance: Ratio = parse_exact(&args.tolerance).map_err(CliError::Usage)?;
    let len = args.length.unwrap_or(staged.block_len());
    let report = verify_reduction_lazy(staged, &loaded.nu, len, depth)?;
    out.stdout
        .push_str(&serde_json::to_string_pretty(&report.to_json()).expect("json"));
    out.stdout.push('\n');
    if report.within(&tolerance) {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "deviation bound {} exceeds tolerance {}",
            ratio_string(&report.deviation_bound),
            ratio_string(&tolerance)
        )))
    }
}
