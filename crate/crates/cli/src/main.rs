use std::fmt::Display;
use std::fs::File;
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cubesplit::baselines::distortion_bounds;
use cubesplit::bench::{complex_intermediate_report, sweep, uniformity_report, KsReport};
use cubesplit::line::sample_uniform_complex;
use cubesplit::textio::{format_complex, format_real, parse_complex, parse_real};
use cubesplit::{
    BitAllocation, BitString, ComplexLine, CubeSplit, QuantizerConfig, RealLine, Scheme, SeededRng,
};

/// Inputs this close to unit norm are renormalized without comment.
const SILENT_NORM_TOL: f64 = 1e-6;
/// Inputs this close are renormalized with a warning; anything further is rejected.
const WARN_NORM_TOL: f64 = 1e-3;

#[derive(Parser)]
#[command(
    name = "cubesplit",
    version,
    about = "Cube-split quantization of real and complex lines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Quantize one vector per input line into a '0'/'1' codeword.
    Encode(CodecArgs),
    /// Reconstruct one vector per codeword line.
    Decode(CodecArgs),
    /// Monte Carlo distortion estimate, written as CSV. Repeat --bits for a sweep.
    Bench(BenchArgs),
    /// Lower and upper bounds on the optimal distortion.
    Bounds(BoundsArgs),
    /// KS test of the companded coordinates against Uniform[0, 1].
    Uniformity(UniformityArgs),
    /// Quick built-in consistency checks.
    Selftest,
}

#[derive(Args)]
struct QuantArgs {
    #[arg(long, value_parser = parse_scheme)]
    scheme: Scheme,
    /// Real dimension d for `real`, complex dimension D otherwise.
    #[arg(long)]
    dim: usize,
}

#[derive(Args)]
struct CodecArgs {
    #[command(flatten)]
    quant: QuantArgs,
    /// Bits per cube coordinate: one integer, or a comma-separated list.
    #[arg(long)]
    bits: String,
    #[arg(long = "in")]
    input: Option<PathBuf>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    quant: QuantArgs,
    #[arg(long, required = true)]
    bits: Vec<String>,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    dim: u64,
    /// Total codeword length in bits.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    bits: u64,
}

#[derive(Args)]
struct UniformityArgs {
    #[command(flatten)]
    quant: QuantArgs,
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(100..))]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl Failure {
    fn data(e: impl Display) -> Self {
        Failure::Data(e.to_string())
    }

    fn usage(e: impl Display) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

type CmdResult = Result<(), Failure>;

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse::<Scheme>().map_err(|e| e.to_string())
}

fn parse_bits(spec: &str, scheme: Scheme, dim: usize) -> Result<QuantizerConfig, Failure> {
    let fields = spec
        .split(',')
        .map(|f| f.trim().parse::<u32>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::usage(format!("--bits {spec:?}: {e}")))?;
    let cfg = if let [b] = fields[..] {
        QuantizerConfig::uniform(scheme, dim, b)
    } else {
        BitAllocation::new(fields).and_then(|alloc| QuantizerConfig::new(scheme, dim, alloc))
    };
    cfg.map_err(Failure::usage)
}

fn open_input(path: Option<&Path>) -> Result<Box<dyn BufRead>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufReader::new(
            File::open(p).map_err(|e| Failure::data(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(io::stdin().lock()),
    })
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Failure::data(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Scale factor that brings a vector of squared norm `norm_sqr` to unit norm,
/// applying the renormalization policy.
fn unit_scale(norm_sqr: f64, line_no: usize) -> Result<f64, Failure> {
    let norm = norm_sqr.sqrt();
    let dev = (norm - 1.0).abs();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Failure::Data(format!(
            "line {line_no}: zero or non-finite vector"
        )));
    }
    if dev > WARN_NORM_TOL {
        return Err(Failure::Data(format!(
            "line {line_no}: norm {norm} is not 1"
        )));
    }
    if dev > SILENT_NORM_TOL {
        eprintln!("warning: line {line_no}: norm {norm} renormalized");
    }
    Ok(1.0 / norm)
}

fn read_real(line: &str, dim: usize, line_no: usize) -> Result<RealLine, Failure> {
    let v = parse_real(line).map_err(|e| Failure::Data(format!("line {line_no}: {e}")))?;
    if v.len() != dim {
        return Err(Failure::Data(format!(
            "line {line_no}: expected {dim} numbers, found {}",
            v.len()
        )));
    }
    let s = unit_scale(v.iter().map(|x| x * x).sum(), line_no)?;
    RealLine::from_vector(v.into_iter().map(|x| x * s).collect())
        .map_err(|e| Failure::Data(format!("line {line_no}: {e}")))
}

fn read_complex(line: &str, dim: usize, line_no: usize) -> Result<ComplexLine, Failure> {
    let v = parse_complex(line).map_err(|e| Failure::Data(format!("line {line_no}: {e}")))?;
    if v.len() != dim {
        return Err(Failure::Data(format!(
            "line {line_no}: expected {} numbers, found {}",
            2 * dim,
            2 * v.len()
        )));
    }
    let s = unit_scale(v.iter().map(|z| z.norm_sqr()).sum(), line_no)?;
    ComplexLine::from_vector(v.into_iter().map(|z| z * s).collect())
        .map_err(|e| Failure::Data(format!("line {line_no}: {e}")))
}

/// Runs `f` on every non-blank input line, writing its result as one output line.
fn stream(
    args: &CodecArgs,
    mut f: impl FnMut(&str, usize) -> Result<String, Failure>,
) -> CmdResult {
    let input = open_input(args.input.as_deref())?;
    let mut out = open_output(args.out.as_deref())?;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let text = f(line, i + 1)?;
        writeln!(out, "{text}")?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_encode(args: &CodecArgs) -> CmdResult {
    let QuantArgs { scheme, dim } = args.quant;
    let q = CubeSplit::new(parse_bits(&args.bits, scheme, dim)?);
    stream(args, |line, n| {
        let code = if scheme.is_complex() {
            q.encode_complex(&read_complex(line, dim, n)?)
        } else {
            q.encode_real(&read_real(line, dim, n)?)
        };
        code.map(|c| c.to_string())
            .map_err(|e| Failure::Data(format!("line {n}: {e}")))
    })
}

fn cmd_decode(args: &CodecArgs) -> CmdResult {
    let QuantArgs { scheme, dim } = args.quant;
    let q = CubeSplit::new(parse_bits(&args.bits, scheme, dim)?);
    stream(args, |line, n| {
        let decoded = line.parse::<BitString>().and_then(|bits| {
            if scheme.is_complex() {
                q.decode_complex(&bits)
                    .map(|x| format_complex(x.as_slice()))
            } else {
                q.decode_real(&bits).map(|y| format_real(y.as_slice()))
            }
        });
        decoded.map_err(|e| Failure::Data(format!("line {n}: {e}")))
    })
}

fn cmd_bench(args: &BenchArgs) -> CmdResult {
    let QuantArgs { scheme, dim } = args.quant;
    let configs = args
        .bits
        .iter()
        .map(|b| parse_bits(b, scheme, dim))
        .collect::<Result<Vec<_>, _>>()?;
    let csv = sweep(&configs, args.samples as usize, args.seed).map_err(Failure::data)?;
    let mut out = open_output(args.out.as_deref())?;
    out.write_all(csv.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn cmd_bounds(args: &BoundsArgs) -> CmdResult {
    let b = distortion_bounds(args.dim as usize, args.bits).map_err(Failure::usage)?;
    println!("{} {}", b.lower, b.upper);
    Ok(())
}

fn write_ks(out: &mut dyn Write, label: &str, r: &KsReport) -> io::Result<()> {
    writeln!(
        out,
        "{label}{:<4} n={} ks={:.6} critical={:.6} {}",
        r.coordinate,
        r.n,
        r.statistic,
        r.critical_001,
        if r.passes() { "pass" } else { "FAIL" }
    )
}

fn cmd_uniformity(args: &UniformityArgs) -> CmdResult {
    let QuantArgs { scheme, dim } = args.quant;
    let n = args.samples as usize;
    let reports = uniformity_report(scheme, dim, n, args.seed).map_err(Failure::usage)?;
    let mut out = open_output(args.out.as_deref())?;
    for r in &reports {
        write_ks(&mut out, "a", r)?;
    }
    let mut failures = reports.iter().filter(|r| !r.passes()).count();
    if scheme.is_complex() {
        let laws = complex_intermediate_report(dim, n, args.seed).map_err(Failure::usage)?;
        for (t, w) in &laws {
            write_ks(&mut out, "|t|^2 ", t)?;
            write_ks(&mut out, "|w| ", w)?;
            failures += usize::from(!t.passes()) + usize::from(!w.passes());
        }
    }
    writeln!(out, "{failures} statistics above the 1% critical value")?;
    out.flush()?;
    Ok(())
}

fn check(out: &mut dyn Write, name: &str, ok: bool) -> io::Result<bool> {
    writeln!(out, "{} {name}", if ok { "ok  " } else { "FAIL" })?;
    Ok(ok)
}

fn cmd_selftest() -> CmdResult {
    let mut out = BufWriter::new(io::stdout().lock());
    let mut all = true;

    let cfg = QuantizerConfig::uniform(Scheme::Real, 3, 3).map_err(Failure::data)?;
    let code = CubeSplit::new(cfg.clone())
        .encode_real(&RealLine::basis(3, 1).map_err(Failure::data)?)
        .map_err(Failure::data)?;
    all &= check(
        &mut out,
        "real encode of e1",
        code.to_string() == "00100100",
    )?;
    all &= check(&mut out, "192 codewords", cfg.codebook_size() == Some(192))?;

    let cfg = QuantizerConfig::uniform(Scheme::ComplexScheme2, 4, 1).map_err(Failure::data)?;
    let code = CubeSplit::new(cfg)
        .encode_complex(&ComplexLine::basis(4, 2).map_err(Failure::data)?)
        .map_err(Failure::data)?;
    all &= check(
        &mut out,
        "scheme-2 encode of e2",
        code.to_string() == "01111111",
    )?;

    let b = distortion_bounds(4, 12).map_err(Failure::data)?;
    all &= check(
        &mut out,
        "bounds at d=4, 12 bits",
        b.lower == 0.046875 && (b.upper - 0.0558112).abs() < 1e-7,
    )?;

    let cfg = QuantizerConfig::uniform(Scheme::ComplexScheme2, 8, 4).map_err(Failure::data)?;
    let q = CubeSplit::new(cfg);
    let mut rng = SeededRng::new(0, 0);
    let mut stable = 0;
    for _ in 0..1000 {
        let x = sample_uniform_complex(8, &mut rng).map_err(Failure::data)?;
        let c = q.encode_complex(&x).map_err(Failure::data)?;
        let again = q
            .decode_complex(&c)
            .and_then(|xh| q.encode_complex(&xh))
            .map_err(Failure::data)?;
        stable += usize::from(again == c);
    }
    all &= check(&mut out, "re-encoding is stable", stable >= 999)?;

    let ks = uniformity_report(Scheme::ComplexScheme2, 2, 10_000, 0).map_err(Failure::data)?;
    all &= check(
        &mut out,
        "uniform marginals at D=2",
        ks.iter().all(|r| r.passes()),
    )?;
    out.flush()?;
    if all {
        Ok(())
    } else {
        Err(Failure::Data("self-test failed".into()))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match &cli.command {
        Command::Encode(a) => cmd_encode(a),
        Command::Decode(a) => cmd_decode(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Uniformity(a) => cmd_uniformity(a),
        Command::Selftest => cmd_selftest(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
