use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use codecirc::certify::certify;
use codecirc::combtree::{reduced_generator, CombinationOrder};
use codecirc::feasibility::{Backend, CoordinateFunctions, ExternalSolver, SearchConfig};
use codecirc::lexicode::greedy_synthesize;
use codecirc::netlist::{build_circuit, Netlist};
use codecirc::partitions::{enumerate_partitions, PartitionOrder};
use codecirc::synth::{synthesize, SynthConfig};

mod bench;

/// Exit status when the time budget ran out and the result is best-effort.
const EXIT_TIMEOUT: u8 = 3;

#[derive(Parser)]
#[command(name = "codecirc", version, about = "Synthesize small circuits for binary linear systematic codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Search for a code with the fewest individual inputs.
    Synth(SynthArgs),
    /// Build the greedy lexicode baseline only.
    Greedy(GreedyArgs),
    /// Check a netlist file.
    Verify(VerifyArgs),
    /// Run a benchmark sweep and write CSV.
    Bench(bench::BenchArgs),
    /// Print the partitions of M into R parts bounded by K.
    Partitions(PartitionArgs),
    /// Print the input combinations for one partition.
    Combinations(CombinationArgs),
}

#[derive(Args, Clone)]
pub(crate) struct SearchArgs {
    #[arg(long, default_value = "asc", value_parser = parse_partition_order)]
    partition_order: PartitionOrder,
    #[arg(long, default_value = "size", value_parser = parse_comb_order)]
    comb_order: CombinationOrder,
    #[arg(long, default_value = "on", value_parser = parse_switch, action = clap::ArgAction::Set)]
    reduction: bool,
    /// `builtin` or `smtlib:<solver command>`.
    #[arg(long, default_value = "builtin")]
    backend: String,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Per-query limit for an external solver, in seconds.
    #[arg(long, default_value_t = 60)]
    solver_timeout: u64,
    /// Write every generated SMT-LIB script into this directory.
    #[arg(long)]
    dump_smt: Option<PathBuf>,
}

impl SearchArgs {
    pub(crate) fn config(&self) -> anyhow::Result<SearchConfig> {
        let backend = match self.backend.as_str() {
            "builtin" => {
                if self.dump_smt.is_some() {
                    bail!("--dump-smt needs an smtlib backend");
                }
                Backend::Builtin
            }
            spec => {
                let Some(cmd) = spec.strip_prefix("smtlib:") else {
                    bail!("unknown backend {spec:?}; expected builtin or smtlib:<path>");
                };
                let mut solver = ExternalSolver::from_spec(cmd)?;
                solver.timeout = Duration::from_secs(self.solver_timeout);
                solver.dump_dir = self.dump_smt.clone();
                Backend::External(solver)
            }
        };
        if self.jobs == 0 {
            bail!("--jobs must be at least 1");
        }
        Ok(SearchConfig {
            partition_order: self.partition_order,
            combination_order: self.comb_order,
            reduction: self.reduction,
            backend,
            jobs: self.jobs,
            deadline: None,
        })
    }
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[command(flatten)]
    search: SearchArgs,
    /// Wall-clock budget in seconds; the best circuit so far is kept.
    #[arg(long)]
    timeout: Option<f64>,
    /// Netlist JSON output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    verilog: Option<PathBuf>,
    /// Synthesis report JSON with counters and the search trace.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct GreedyArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    d: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    verilog: Option<PathBuf>,
    /// Write the message/parity table, one "message parity" line per message.
    #[arg(long)]
    truth_table: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    netlist: PathBuf,
    #[arg(long)]
    d: usize,
    /// Write the full report as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct PartitionArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    r: usize,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "asc", value_parser = parse_partition_order)]
    order: PartitionOrder,
}

#[derive(Args)]
struct CombinationArgs {
    /// Part sizes, e.g. `2,1,1`.
    #[arg(long, value_delimiter = ',', required = true)]
    partition: Vec<usize>,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value = "on", value_parser = parse_switch, action = clap::ArgAction::Set)]
    reduce: bool,
    #[arg(long, default_value = "size", value_parser = parse_comb_order)]
    comb_order: CombinationOrder,
}

fn parse_partition_order(s: &str) -> Result<PartitionOrder, String> {
    s.parse().map_err(|e: codecirc::Error| e.to_string())
}

fn parse_comb_order(s: &str) -> Result<CombinationOrder, String> {
    s.parse().map_err(|e: codecirc::Error| e.to_string())
}

fn parse_switch(s: &str) -> Result<bool, String> {
    match s {
        "on" => Ok(true),
        "off" => Ok(false),
        _ => Err(format!("expected on or off, got {s:?}")),
    }
}

fn write_file(path: &Path, contents: &str) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

pub(crate) fn summary_line(n_in: usize, r: usize, net: &Netlist) -> anyhow::Result<String> {
    Ok(format!(
        "#In {n_in}, r {r}, Area {}, Len {}",
        net.area(),
        net.longest_len()?
    ))
}

/// Builds, certifies and optionally writes the circuit for `functions`.
fn emit(
    functions: &CoordinateFunctions,
    d: usize,
    out: Option<&Path>,
    verilog: Option<&Path>,
) -> anyhow::Result<Netlist> {
    let net = build_circuit(functions, d)?;
    let cert = certify(&net, d);
    if !cert.passed() {
        bail!("generated circuit failed its own checks: {cert}");
    }
    if let Some(p) = out {
        write_file(p, &net.to_json()?)?;
    }
    if let Some(p) = verilog {
        write_file(p, &net.to_verilog())?;
    }
    Ok(net)
}

fn cmd_synth(args: SynthArgs) -> anyhow::Result<ExitCode> {
    let timeout = match args.timeout {
        Some(t) if !(t.is_finite() && t >= 0.0) => bail!("--timeout must be a non-negative number"),
        t => t.map(Duration::from_secs_f64),
    };
    let config = SynthConfig {
        search: args.search.config()?,
        timeout,
    };
    let report = synthesize(args.k, args.d, &config)?;
    let net = emit(&report.solution, args.d, args.out.as_deref(), args.verilog.as_deref())?;
    if let Some(p) = &args.report {
        write_file(p, &report.to_json()?)?;
    }
    println!("{}", summary_line(report.n_in, report.r, &net)?);
    if report.optimal {
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!("time budget exhausted; result is the best found, not proven optimal");
        Ok(ExitCode::from(EXIT_TIMEOUT))
    }
}

fn cmd_greedy(args: GreedyArgs) -> anyhow::Result<ExitCode> {
    let g = greedy_synthesize(args.k, args.d)?;
    if let Some(p) = &args.truth_table {
        write_file(p, &g.dump_truth_table())?;
    }
    let functions = CoordinateFunctions::from_pgm(g.pgm.clone())?;
    let net = emit(&functions, args.d, args.out.as_deref(), args.verilog.as_deref())?;
    println!("{}", summary_line(g.n_base, g.r_base, &net)?);
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(args: VerifyArgs) -> anyhow::Result<ExitCode> {
    let text = fs::read_to_string(&args.netlist)
        .with_context(|| format!("reading {}", args.netlist.display()))?;
    let net: Netlist = serde_json::from_str(&text)
        .with_context(|| format!("parsing {}", args.netlist.display()))?;
    let cert = certify(&net, args.d);
    println!("{cert}");
    for c in cert.failures() {
        println!("  {}: {}", c.name, c.detail);
    }
    if let Some(p) = &args.json {
        write_file(p, &serde_json::to_string_pretty(&cert)?)?;
    }
    Ok(if cert.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn cmd_partitions(args: PartitionArgs) -> ExitCode {
    for p in enumerate_partitions(args.m, args.r, args.k, args.order) {
        println!("{p}");
    }
    ExitCode::SUCCESS
}

fn cmd_combinations(args: CombinationArgs) -> anyhow::Result<ExitCode> {
    if args.k == 0 || args.k > 64 || args.partition.iter().any(|&n| n == 0 || n > args.k) {
        bail!("every part must lie in 1..=k with k in 1..=64");
    }
    for c in reduced_generator(&args.partition, args.k, args.comb_order, args.reduce) {
        println!("{c}");
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Synth(a) => cmd_synth(a),
        Command::Greedy(a) => cmd_greedy(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => bench::run(a),
        Command::Partitions(a) => Ok(cmd_partitions(a)),
        Command::Combinations(a) => cmd_combinations(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
