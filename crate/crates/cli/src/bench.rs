//! Table sweeps written as CSV.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;
use std::time::{Duration, Instant};

use anyhow::{bail, Context};
use clap::{Args, ValueEnum};
use codecirc::certify::certify;
use codecirc::combtree::CombinationOrder;
use codecirc::feasibility::CoordinateFunctions;
use codecirc::lexicode::greedy_synthesize;
use codecirc::netlist::build_circuit;
use codecirc::partitions::PartitionOrder;
use codecirc::synth::{synthesize, SynthConfig};

use crate::SearchArgs;

pub(crate) const HEADER: &str = "k,d,tool,n_in,r,area,len,parts,combs,seconds,optimal";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum Suite {
    /// Search counters under ascending and descending partition order.
    Table1,
    /// Search counters with and without pruning, and under count ordering.
    Table2,
    /// Greedy baseline against the search result.
    Table3,
}

#[derive(Args)]
pub(crate) struct BenchArgs {
    #[arg(long, value_enum)]
    suite: Suite,
    /// Output file; standard output when absent.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Comma-separated conditions on k and d, e.g. `k<=4,d=3`.
    #[arg(long, default_value = "")]
    kd_filter: String,
    /// Per-row time budget in seconds.
    #[arg(long, default_value_t = 600.0)]
    budget: f64,
    /// Leave the seconds column empty so that repeated runs compare equal.
    #[arg(long)]
    omit_time: bool,
    #[command(flatten)]
    search: SearchArgs,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Op {
    Eq,
    Le,
    Ge,
    Lt,
    Gt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Condition {
    on_k: bool,
    op: Op,
    value: usize,
}

/// Conjunction of simple comparisons on `k` and `d`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct KdFilter(Vec<Condition>);

impl FromStr for KdFilter {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> anyhow::Result<Self> {
        let mut conds = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let on_k = match item.chars().next() {
                Some('k') => true,
                Some('d') => false,
                _ => bail!("filter {item:?} must start with k or d"),
            };
            let rest = &item[1..];
            let (op, num) = [("<=", Op::Le), (">=", Op::Ge), ("=", Op::Eq), ("<", Op::Lt), (">", Op::Gt)]
                .iter()
                .find_map(|&(tok, op)| rest.strip_prefix(tok).map(|n| (op, n)))
                .with_context(|| format!("filter {item:?} lacks a comparison"))?;
            let value = num
                .trim()
                .parse()
                .with_context(|| format!("filter {item:?} has a bad number"))?;
            conds.push(Condition { on_k, op, value });
        }
        Ok(KdFilter(conds))
    }
}

impl KdFilter {
    pub(crate) fn accepts(&self, k: usize, d: usize) -> bool {
        self.0.iter().all(|c| {
            let x = if c.on_k { k } else { d };
            match c.op {
                Op::Eq => x == c.value,
                Op::Le => x <= c.value,
                Op::Ge => x >= c.value,
                Op::Lt => x < c.value,
                Op::Gt => x > c.value,
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub(crate) struct Row {
    pub k: usize,
    pub d: usize,
    pub tool: String,
    pub n_in: usize,
    pub r: usize,
    pub area: usize,
    pub len: usize,
    pub parts: Option<u64>,
    pub combs: Option<u64>,
    pub seconds: Option<f64>,
    pub optimal: Option<bool>,
}

impl Row {
    pub(crate) fn csv(&self) -> String {
        let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            self.k,
            self.d,
            self.tool,
            self.n_in,
            self.r,
            self.area,
            self.len,
            opt(self.parts),
            opt(self.combs),
            self.seconds.map(|s| format!("{s:.3}")).unwrap_or_default(),
            self.optimal.map(|b| b.to_string()).unwrap_or_default(),
        )
    }
}

/// One search setting of a suite, named in the tool column.
struct Variant {
    tool: &'static str,
    partition_order: Option<PartitionOrder>,
    combination_order: Option<CombinationOrder>,
    reduction: Option<bool>,
}

const fn variant(
    tool: &'static str,
    partition_order: Option<PartitionOrder>,
    combination_order: Option<CombinationOrder>,
    reduction: Option<bool>,
) -> Variant {
    Variant {
        tool,
        partition_order,
        combination_order,
        reduction,
    }
}

fn plan(suite: Suite) -> (Vec<(usize, usize)>, bool, Vec<Variant>) {
    let grid = |ks: std::ops::RangeInclusive<usize>, ds: std::ops::RangeInclusive<usize>| {
        ks.flat_map(|k| ds.clone().map(move |d| (k, d))).collect::<Vec<_>>()
    };
    match suite {
        Suite::Table1 => (
            grid(2..=6, 3..=5),
            false,
            vec![
                variant("search", Some(PartitionOrder::LexAscending), None, None),
                variant("search-desc", Some(PartitionOrder::LexDescending), None, None),
            ],
        ),
        Suite::Table2 => (
            grid(2..=6, 3..=5),
            false,
            vec![
                variant("search", None, None, Some(true)),
                variant("search-noreduce", None, None, Some(false)),
                variant("search-count", None, Some(CombinationOrder::CombinationCountDesc), Some(true)),
            ],
        ),
        Suite::Table3 => (grid(1..=6, 2..=5), true, vec![variant("search", None, None, None)]),
    }
}

fn greedy_row(k: usize, d: usize) -> anyhow::Result<(Row, bool)> {
    let start = Instant::now();
    let g = greedy_synthesize(k, d)?;
    let functions = CoordinateFunctions::from_pgm(g.pgm.clone())?;
    let net = build_circuit(&functions, d)?;
    let verified = certify(&net, d).passed();
    Ok((
        Row {
            k,
            d,
            tool: "greedy".into(),
            n_in: g.n_base,
            r: g.r_base,
            area: net.area(),
            len: net.longest_len()?,
            parts: None,
            combs: None,
            seconds: Some(start.elapsed().as_secs_f64()),
            optimal: None,
        },
        verified,
    ))
}

fn search_row(k: usize, d: usize, v: &Variant, base: &SynthConfig) -> anyhow::Result<(Row, bool)> {
    let mut config = base.clone();
    if let Some(o) = v.partition_order {
        config.search.partition_order = o;
    }
    if let Some(o) = v.combination_order {
        config.search.combination_order = o;
    }
    if let Some(on) = v.reduction {
        config.search.reduction = on;
    }
    let report = synthesize(k, d, &config)?;
    let net = build_circuit(&report.solution, d)?;
    let verified = certify(&net, d).passed();
    Ok((
        Row {
            k,
            d,
            tool: v.tool.into(),
            n_in: report.n_in,
            r: report.r,
            area: net.area(),
            len: net.longest_len()?,
            parts: Some(report.counters.partitions),
            combs: Some(report.counters.combinations),
            seconds: Some(report.seconds),
            optimal: Some(report.optimal),
        },
        verified,
    ))
}

pub(crate) fn run(args: BenchArgs) -> anyhow::Result<ExitCode> {
    let filter: KdFilter = args.kd_filter.parse()?;
    if !(args.budget.is_finite() && args.budget > 0.0) {
        bail!("--budget must be positive");
    }
    let base = SynthConfig {
        search: args.search.config()?,
        timeout: Some(Duration::from_secs_f64(args.budget)),
    };
    let (cells, with_greedy, variants) = plan(args.suite);
    let mut out = String::new();
    writeln!(out, "{HEADER}")?;
    if args.csv.is_none() {
        println!("{HEADER}");
    }
    let mut all_verified = true;
    let flush = |out: &str| -> anyhow::Result<()> {
        match &args.csv {
            Some(p) => std::fs::write(p, out).with_context(|| format!("writing {}", p.display())),
            None => Ok(()),
        }
    };
    for (k, d) in cells.into_iter().filter(|&(k, d)| filter.accepts(k, d)) {
        let mut rows = Vec::new();
        if with_greedy {
            rows.push(greedy_row(k, d)?);
        }
        for v in &variants {
            rows.push(search_row(k, d, v, &base)?);
        }
        for (mut row, verified) in rows {
            if !verified {
                eprintln!("({k},{d}) {}: circuit failed verification; row skipped", row.tool);
                all_verified = false;
                continue;
            }
            if row.optimal == Some(false) {
                eprintln!("({k},{d}) {}: budget of {}s exceeded", row.tool, args.budget);
            }
            if args.omit_time {
                row.seconds = None;
            }
            let line = row.csv();
            if args.csv.is_none() {
                println!("{line}");
            }
            writeln!(out, "{line}")?;
        }
        flush(&out)?;
    }
    flush(&out)?;
    Ok(if all_verified {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn filter_grammar() {
        let f: KdFilter = "k<=4, d=3".parse().unwrap();
        assert!(f.accepts(4, 3));
        assert!(!f.accepts(5, 3));
        assert!(!f.accepts(2, 4));
        assert!("".parse::<KdFilter>().unwrap().accepts(6, 5));
        let g: KdFilter = "k>1,k<3,d>=4".parse().unwrap();
        assert!(g.accepts(2, 4) && g.accepts(2, 5) && !g.accepts(1, 4) && !g.accepts(2, 3));
        assert!("x=1".parse::<KdFilter>().is_err());
        assert!("k~1".parse::<KdFilter>().is_err());
        assert!("k=a".parse::<KdFilter>().is_err());
    }

    #[test]
    fn row_format() {
        let row = Row {
            k: 2,
            d: 3,
            tool: "search".into(),
            n_in: 4,
            r: 3,
            area: 5,
            len: 4,
            parts: Some(1),
            combs: Some(2),
            seconds: None,
            optimal: Some(true),
        };
        assert_eq!(row.csv(), "2,3,search,4,3,5,4,1,2,,true");
    }
}
