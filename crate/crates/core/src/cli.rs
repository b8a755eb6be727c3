//! The `kkp` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::epsilon::Epsilon;
use crate::error::{Error, Result};
use crate::fptas::fptas_solve_detailed;
use crate::growth::{
    count_lattice_with_ceiling, d_max, CSV_HEADER as COUNT_HEADER, DEFAULT_CEILING,
};
use crate::instance::normalize;
use crate::io::{parse_auto, write_json, write_text};
use crate::lp::half_approx;
use crate::ptas::{ptas_solve_with, PtasOptions};
use crate::rounding::{parallel_reduce, RoundingContext};
use crate::workbench::bench::{bench_suite, to_csv, Suite};
use crate::workbench::{generate_detailed, solve, Algorithm, GeneratorSpec};

#[derive(Parser, Debug)]
#[command(
    name = "kkp",
    version,
    about = "Approximation schemes for the k-item knapsack problem"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve an instance.
    Solve(SolveArgs),
    /// Dump the reduced item set N_γ as JSON.
    Reduce(ReduceArgs),
    /// Generate an instance.
    Gen(GenArgs),
    /// Count lattice points of the growth construction.
    Count(CountArgs),
    /// Run a benchmark suite.
    Bench(BenchArgs),
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    alg: String,
    #[arg(long)]
    eps: Option<Epsilon>,
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    json: bool,
    /// Write the FPTAS pair table as CSV `a,l,weight`.
    #[arg(long)]
    dump_pairs: Option<PathBuf>,
    /// Complete PTAS prefixes with cardinality k − ℓ.
    #[arg(long)]
    literal_residual: bool,
    /// Print peak resident memory to stderr.
    #[arg(long)]
    stats: bool,
}

#[derive(Args, Debug)]
struct ReduceArgs {
    #[arg(long)]
    gamma: usize,
    #[arg(long)]
    eps: Epsilon,
    #[arg(long)]
    input: PathBuf,
    /// Use this P^H instead of running H½.
    #[arg(long)]
    p_h: Option<u64>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Uniform,
    WeaklyCorrelated,
    ArithTight,
    GeoTight,
    Theorem4,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args, Debug)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    c: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    profit_min: u64,
    #[arg(long, default_value_t = 1000)]
    profit_max: u64,
    #[arg(long, default_value_t = 1)]
    weight_min: u64,
    #[arg(long, default_value_t = 1000)]
    weight_max: u64,
    #[arg(long, default_value_t = 100)]
    spread: u64,
    #[arg(long)]
    eps: Option<Epsilon>,
    #[arg(long)]
    gamma: Option<usize>,
    #[arg(long)]
    p_h: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CountArgs {
    #[arg(long)]
    eps: Epsilon,
    /// Single dimension; default is every d up to d_max.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CEILING)]
    ceiling: u64,
}

#[derive(Args, Debug)]
struct BenchArgs {
    #[arg(long)]
    suite: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn write(path: Option<&Path>, body: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, body).map_err(|e| Error::Parse(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .map_err(|e| Error::Internal(format!("stdout: {e}")))
        }
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T> {
    v.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required for this kind")))
}

/// `VmHWM` from `/proc/self/status`, in kB.
pub fn peak_rss_kb() -> Option<u64> {
    let status = fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    line.split_whitespace().nth(1)?.parse().ok()
}

fn cmd_solve(a: SolveArgs) -> Result<()> {
    let alg: Algorithm = a.alg.parse()?;
    let inst = parse_auto(&read(&a.input)?)?;
    let (_, log) = normalize(&inst)?;
    for m in log.messages() {
        eprintln!("note: {m}");
    }
    let report = match alg {
        Algorithm::Fptas => {
            let eps = need(a.eps, "eps")?;
            let out = fptas_solve_detailed(&inst, eps)?;
            if let Some(path) = &a.dump_pairs {
                let csv = out
                    .pairs
                    .as_ref()
                    .map(|t| t.to_csv())
                    .unwrap_or_else(|| "a,l,weight\n".into());
                write(Some(path), &csv)?;
            }
            out.report
        }
        Algorithm::Ptas => ptas_solve_with(
            &inst,
            need(a.eps, "eps")?,
            PtasOptions {
                literal_residual: a.literal_residual,
            },
        )?,
        _ => solve(&inst, alg, a.eps)?,
    };
    if a.json {
        let mut s = serde_json::to_string(&report).map_err(|e| Error::Internal(e.to_string()))?;
        s.push('\n');
        write(None, &s)?;
    } else {
        let ids: Vec<String> = report.item_ids.iter().map(|i| i.to_string()).collect();
        write(
            None,
            &format!(
                "value {}\nitems {}\nweight {}\nfeasible {}\n",
                report.value,
                ids.join(" "),
                report.weight,
                report.feasible
            ),
        )?;
    }
    if a.stats {
        if let Some(kb) = peak_rss_kb() {
            eprintln!("peak_rss_kb {kb}");
        }
        eprintln!("wall_ns {}", report.wall_ns);
    }
    Ok(())
}

fn cmd_reduce(a: ReduceArgs) -> Result<()> {
    let (inst, _) = normalize(&parse_auto(&read(&a.input)?)?)?;
    if a.gamma == 0 || a.gamma > inst.cardinality_bound() {
        return Err(Error::InvalidParameter(format!(
            "gamma must lie in 1..={}",
            inst.cardinality_bound()
        )));
    }
    let p_h = match a.p_h {
        Some(p) => p,
        None => half_approx(&inst)?.value,
    };
    let reduced = parallel_reduce(&inst, RoundingContext::new(a.eps, a.gamma, p_h)?)?;
    let mut s = serde_json::to_string_pretty(&reduced.report())
        .map_err(|e| Error::Internal(e.to_string()))?;
    s.push('\n');
    write(None, &s)
}

fn cmd_gen(a: GenArgs) -> Result<()> {
    let spec = match a.kind {
        Kind::Uniform => GeneratorSpec::Uniform {
            n: need(a.n, "n")?,
            k: need(a.k, "k")?,
            capacity: a.c,
            profit: (a.profit_min, a.profit_max),
            weight: (a.weight_min, a.weight_max),
            seed: a.seed,
        },
        Kind::WeaklyCorrelated => GeneratorSpec::WeaklyCorrelated {
            n: need(a.n, "n")?,
            k: need(a.k, "k")?,
            capacity: a.c,
            weight: (a.weight_min, a.weight_max),
            spread: a.spread,
            seed: a.seed,
        },
        Kind::ArithTight => GeneratorSpec::ArithTight {
            epsilon: need(a.eps, "eps")?,
            gamma: need(a.gamma, "gamma")?,
            p_h: need(a.p_h, "p-h")?,
            k: a.k,
            seed: a.seed,
        },
        Kind::GeoTight => GeneratorSpec::GeoTight {
            epsilon: need(a.eps, "eps")?,
            gamma: need(a.gamma, "gamma")?,
            p_h: need(a.p_h, "p-h")?,
            k: a.k,
            seed: a.seed,
        },
        Kind::Theorem4 => GeneratorSpec::Theorem4 {
            epsilon: need(a.eps, "eps")?,
            p_h: need(a.p_h, "p-h")?,
            k: need(a.k, "k")?,
        },
    };
    let g = generate_detailed(&spec)?;
    if g.scale != 1 || g.p_h.is_some() {
        eprintln!(
            "scale {} p_h {}",
            g.scale,
            g.p_h.map(|p| p.to_string()).unwrap_or_default()
        );
    }
    let body = match a.format {
        Format::Text => write_text(&g.instance),
        Format::Json => write_json(&g.instance),
    };
    write(a.out.as_deref(), &body)
}

fn cmd_count(a: CountArgs) -> Result<()> {
    let dims: Vec<usize> = match a.dim {
        Some(d) => vec![d],
        None => (1..=d_max(a.eps).max(1)).collect(),
    };
    let mut out = format!("{COUNT_HEADER}\n");
    for d in dims {
        let r = count_lattice_with_ceiling(a.eps, d, a.ceiling)?;
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    write(a.csv.as_deref(), &out)
}

fn cmd_bench(a: BenchArgs) -> Result<()> {
    let suite: Suite =
        serde_json::from_str(&read(&a.suite)?).map_err(|e| Error::Parse(format!("suite: {e}")))?;
    let rows = bench_suite(&suite)?;
    write(a.out.as_deref(), &to_csv(&rows))
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Count(a) => cmd_count(a),
        Command::Bench(a) => cmd_bench(a),
    }
}

fn thread_pool() -> Result<Option<rayon::ThreadPool>> {
    let Ok(raw) = std::env::var("KKP_THREADS") else {
        return Ok(None);
    };
    let n: usize = raw.trim().parse().map_err(|_| {
        Error::InvalidParameter(format!("KKP_THREADS must be an integer, got '{raw}'"))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n.max(1))
        .build()
        .map(Some)
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))
}

/// Runs the CLI on `argv` (program name first) and returns the exit code:
/// 0 on success, 1 on bad input or usage, 2 on an internal failure.
pub fn run_cli<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match thread_pool() {
        Ok(Some(pool)) => pool.install(|| dispatch(cli)),
        Ok(None) => dispatch(cli),
        Err(e) => Err(e),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_input_error() {
                1
            } else {
                2
            }
        }
    }
}
