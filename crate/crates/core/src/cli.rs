//! `inbl` command-line front end.
//!
//! Exit codes: 0 success, 2 usage error, 3 decode/oracle mismatch or
//! differing traces, 4 I/O failure.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::analysis::{decode_product, decode_superposition, trace_universe_stats};
use crate::error::{InblError, MAX_NOISE_BITS};
use crate::format::{self, TraceFormat};
use crate::gates::{apply_not, xnor_pair, xnor_targeted, xor_pair, xor_targeted, TargetSet};
use crate::hyperspace::{realize, superpose, synthesize, universe, BitString};
use crate::reference::ReferenceSystem;
use crate::symbolic::{within_gate_table, GateKind, SymbolicSuperposition};
use crate::trace::Trace;

/// Environment variable that overrides the default seed.
pub const SEED_ENV: &str = "INBL_SEED";
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_CLOCKS: usize = 128;
pub const DEFAULT_NOISE_BITS: usize = 4;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MISMATCH: i32 = 3;
pub const EXIT_IO: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "inbl",
    version,
    about = "Squeezed instantaneous noise-based logic simulator"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Noise-bit count M (1..=62)
    #[arg(long = "m", global = true, default_value_t = DEFAULT_NOISE_BITS,
          value_parser = parse_noise_bits)]
    pub noise_bits: usize,

    /// Clock cycles T; more than 100 keeps accidental agreement below 2^-100
    #[arg(long = "t", global = true, default_value_t = DEFAULT_CLOCKS,
          value_parser = parse_clocks)]
    pub clocks: usize,

    /// Reference system seed
    #[arg(long, global = true, env = SEED_ENV, default_value_t = DEFAULT_SEED)]
    pub seed: u64,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Output directory
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
}

fn parse_noise_bits(s: &str) -> Result<usize, String> {
    let m: usize = s.parse().map_err(|e| format!("{e}"))?;
    if m == 0 || m > MAX_NOISE_BITS {
        return Err(format!("M must be in 1..={MAX_NOISE_BITS}"));
    }
    Ok(m)
}

fn parse_clocks(s: &str) -> Result<usize, String> {
    let t: usize = s.parse().map_err(|e| format!("{e}"))?;
    if t == 0 {
        return Err("T must be at least 1".into());
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl From<OutputFormat> for TraceFormat {
    fn from(f: OutputFormat) -> Self {
        match f {
            OutputFormat::Csv => TraceFormat::Csv,
            OutputFormat::Json => TraceFormat::Json,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the M high reference traces and the constant low trace
    Refs,
    /// Write the hyperspace vector of each string
    Synth {
        /// Bit strings: `1100`, `0b100` or `0d12`
        #[arg(required = true)]
        strings: Vec<String>,
        /// Also write the sum of all vectors
        #[arg(long)]
        superpose: bool,
    },
    /// Write the universe trace and its statistics
    Universe,
    /// Apply a gate, decode the result and check it against the oracle
    Gate(GateArgs),
    /// Compare two trace files sample by sample
    Compare { a: PathBuf, b: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateName {
    Not,
    Xor,
    Xnor,
}

#[derive(Debug, Args)]
pub struct GateArgs {
    pub gate: GateName,

    /// First operand: `s1+s2+k*s3`
    #[arg(long = "a", visible_alias = "input")]
    pub a: String,

    /// Second operand for pairwise XOR/XNOR
    #[arg(long = "b")]
    pub b: Option<String>,

    /// NOT targets, e.g. `1,3`
    #[arg(long)]
    pub targets: Option<String>,

    /// Noise-bit for targeted XOR/XNOR
    #[arg(long)]
    pub target: Option<usize>,

    /// Bit value XOR-ed/XNOR-ed into the targeted noise-bit
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub bit: u8,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Mismatch(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Mismatch(_) => EXIT_MISMATCH,
            CliError::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Mismatch(m) | CliError::Io(m) => m,
        }
    }
}

impl From<InblError> for CliError {
    fn from(e: InblError) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

/// A parsed operand: its symbolic form and the engine-built trace.
struct Operand {
    symbolic: SymbolicSuperposition,
    trace: Trace,
}

/// Parses `s1+s2+k*s3` and synthesizes it term by term.
fn parse_operand(sys: &ReferenceSystem, text: &str) -> Result<Operand, CliError> {
    let m = sys.noise_bits();
    let mut symbolic = SymbolicSuperposition::new(m);
    let mut parts = Vec::new();
    for piece in text.split('+') {
        let piece = piece.trim();
        let (k, s) = match piece.split_once('*') {
            Some((k, s)) => (
                k.trim()
                    .parse::<i64>()
                    .map_err(|e| CliError::Usage(format!("bad multiplicity `{k}`: {e}")))?,
                s.trim(),
            ),
            None => (1, piece),
        };
        let s = BitString::parse_with_width(s, m)?;
        symbolic.add_term(s.to_term(), k)?;
        parts.push(synthesize(sys, &s)?.scaled(k));
    }
    let trace = superpose(sys.clocks(), &parts)?.with_label(text.to_string());
    Ok(Operand { symbolic, trace })
}

struct Output<'a> {
    dir: &'a Path,
    format: TraceFormat,
}

impl Output<'_> {
    fn write_trace(&self, stem: &str, trace: &Trace) -> Result<PathBuf, CliError> {
        fs::create_dir_all(self.dir).map_err(|e| io_err(self.dir, e))?;
        let path = self.dir.join(format!("{stem}.{}", self.format.extension()));
        fs::write(&path, format::encode(trace, self.format)).map_err(|e| io_err(&path, e))?;
        Ok(path)
    }

    fn write_json(&self, name: &str, value: &impl serde::Serialize) -> Result<PathBuf, CliError> {
        fs::create_dir_all(self.dir).map_err(|e| io_err(self.dir, e))?;
        let path = self.dir.join(name);
        let mut text = serde_json::to_string_pretty(value).expect("serializable");
        text.push('\n');
        fs::write(&path, text).map_err(|e| io_err(&path, e))?;
        Ok(path)
    }
}

fn read_trace(path: &Path) -> Result<Trace, CliError> {
    let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
    format::decode(&bytes, TraceFormat::from_path(path)).map_err(|e| io_err(path, e))
}

fn cmd_refs(sys: &ReferenceSystem, out: &Output) -> Result<(), CliError> {
    for (k, high) in sys.highs().iter().enumerate() {
        let path = out.write_trace(&format!("ref_high_{}", k + 1), high)?;
        println!("{}", path.display());
    }
    let path = out.write_trace("ref_low", &sys.low())?;
    println!("{}", path.display());
    Ok(())
}

fn cmd_synth(
    sys: &ReferenceSystem,
    out: &Output,
    strings: &[String],
    with_sum: bool,
) -> Result<(), CliError> {
    let mut traces = Vec::with_capacity(strings.len());
    for text in strings {
        let s = BitString::parse_with_width(text, sys.noise_bits())?;
        let trace = synthesize(sys, &s)?;
        let path = out.write_trace(&format!("synth_{s}"), &trace)?;
        println!("{}", path.display());
        traces.push(trace);
    }
    if with_sum {
        let sum = superpose(sys.clocks(), &traces)?.with_label(strings.join("+"));
        let path = out.write_trace("synth_superposition", &sum)?;
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_universe(sys: &ReferenceSystem, out: &Output) -> Result<(), CliError> {
    let u = universe(sys);
    let stats = trace_universe_stats(sys.noise_bits(), &u);
    let path = out.write_trace("universe", &u)?;
    println!("{}", path.display());
    let path = out.write_json("universe_stats.json", &stats)?;
    println!("{}", path.display());
    println!(
        "{}",
        serde_json::to_string(&stats).expect("serializable stats")
    );
    Ok(())
}

fn set_view(sup: &SymbolicSuperposition) -> Option<String> {
    let strings = sup.strings();
    if strings.iter().all(|(_, c)| *c == 1) {
        let names: Vec<String> = strings.iter().map(|(s, _)| s.to_string()).collect();
        Some(format!("{{{}}}", names.join(", ")))
    } else {
        None
    }
}

/// Reads the gate output back: as a single string when it is a pure
/// product state, otherwise as a superposition.
fn decode_output(sys: &ReferenceSystem, trace: &Trace) -> Result<SymbolicSuperposition, InblError> {
    if trace.is_bipolar() {
        match decode_product(sys, trace) {
            Ok(s) => return Ok(SymbolicSuperposition::vector(&s)),
            Err(InblError::NoMatch) => {}
            Err(e) => return Err(e),
        }
    }
    decode_superposition(sys, trace)
}

fn cmd_gate(sys: &ReferenceSystem, out: &Output, args: &GateArgs) -> Result<(), CliError> {
    let a = parse_operand(sys, &args.a)?;
    let (name, numeric, oracle) = match args.gate {
        GateName::Not => {
            let targets: TargetSet = args
                .targets
                .as_deref()
                .ok_or_else(|| CliError::Usage("`gate not` needs --targets".into()))?
                .parse()?;
            if args.b.is_some() || args.target.is_some() {
                return Err(CliError::Usage("`gate not` takes only --a and --targets".into()));
            }
            let numeric = apply_not(sys, &targets, &a.trace)?;
            let oracle = a.symbolic.gate(GateKind::Not, targets.to_term()?)?;
            ("not", numeric, oracle)
        }
        GateName::Xor | GateName::Xnor => {
            let (kind, name) = if args.gate == GateName::Xor {
                (GateKind::Xor, "xor")
            } else {
                (GateKind::Xnor, "xnor")
            };
            if args.targets.is_some() {
                return Err(CliError::Usage(
                    "--targets is for `gate not`; use --target/--bit".into(),
                ));
            }
            match (&args.b, args.target) {
                (Some(b), None) => {
                    let b = parse_operand(sys, b)?;
                    if !within_gate_table(&a.symbolic, &b.symbolic) {
                        println!(
                            "note: both operands are superpositions; the product is \
                             well defined but has no set-level gate meaning"
                        );
                    }
                    let numeric = match kind {
                        GateKind::Xnor => xnor_pair(sys, &a.trace, &b.trace)?,
                        _ => xor_pair(&a.trace, &b.trace)?,
                    };
                    (name, numeric, a.symbolic.pairwise(kind, &b.symbolic)?)
                }
                (None, Some(index)) => {
                    let bit = args.bit == 1;
                    let numeric = match kind {
                        GateKind::Xnor => xnor_targeted(sys, &a.trace, index, bit)?,
                        _ => xor_targeted(sys, &a.trace, index, bit)?,
                    };
                    (name, numeric, a.symbolic.targeted(kind, index, bit)?)
                }
                _ => {
                    return Err(CliError::Usage(format!(
                        "`gate {name}` needs exactly one of --b or --target"
                    )))
                }
            }
        }
    };

    let path = out.write_trace(&format!("gate_{name}"), &numeric.clone().with_label(name))?;
    println!("trace:   {}", path.display());
    println!("oracle:  {oracle}");
    if let Some(set) = set_view(&oracle) {
        println!("set:     {set}");
    }

    let expected = realize(sys, &oracle)?;
    if let Some(clock) = expected.first_divergence(&numeric)? {
        return Err(CliError::Mismatch(format!(
            "engine output differs from the oracle at clock {clock}: {} vs {}",
            numeric.samples()[clock],
            expected.samples()[clock]
        )));
    }

    match decode_output(sys, &numeric) {
        Ok(decoded) => {
            match decoded.as_vector() {
                Some(t) => println!(
                    "decoded: {}",
                    BitString::from_term(t, sys.noise_bits())?
                ),
                None => println!("decoded: {decoded}"),
            }
            if decoded != oracle {
                return Err(CliError::Mismatch(
                    "decoded output disagrees with the oracle".into(),
                ));
            }
        }
        Err(e) => println!("decoded: unavailable ({e})"),
    }
    Ok(())
}

fn cmd_compare(a: &Path, b: &Path) -> Result<(), CliError> {
    let ta = read_trace(a)?;
    let tb = read_trace(b)?;
    match ta.first_divergence(&tb) {
        Err(_) => Err(CliError::Mismatch(format!(
            "length mismatch: {} has T = {}, {} has T = {}",
            a.display(),
            ta.len(),
            b.display(),
            tb.len()
        ))),
        Ok(None) => {
            println!("identical (T = {})", ta.len());
            Ok(())
        }
        Ok(Some(clock)) => Err(CliError::Mismatch(format!(
            "first divergence at clock {clock}: {} vs {}",
            ta.samples()[clock],
            tb.samples()[clock]
        ))),
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let config = &cli.config;
    if let Command::Compare { a, b } = &cli.command {
        return cmd_compare(a, b);
    }
    let sys = ReferenceSystem::generate(config.noise_bits, config.clocks, config.seed)?;
    let out = Output {
        dir: &config.out,
        format: config.format.into(),
    };
    match &cli.command {
        Command::Refs => cmd_refs(&sys, &out),
        Command::Synth { strings, superpose } => cmd_synth(&sys, &out, strings, *superpose),
        Command::Universe => cmd_universe(&sys, &out),
        Command::Gate(args) => cmd_gate(&sys, &out, args),
        Command::Compare { .. } => unreachable!("handled above"),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
