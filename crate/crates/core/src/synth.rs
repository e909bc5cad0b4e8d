//! The optimization driver: start from the greedy code, shrink the parity
//! size, then shrink the number of individual inputs, allowing one extra
//! parity bit when that helps.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::feasibility::{
    exists_pgm, find_coor_func, Backend, CoordinateFunctions, SearchConfig, SearchCounters,
    SearchOutcome,
};
use crate::gf2::{self, ParityGeneratorMatrix};
use crate::lexicode::greedy_synthesize;

#[derive(Clone, Debug, Default)]
pub struct SynthConfig {
    pub search: SearchConfig,
    /// Wall-clock budget for the whole run.
    pub timeout: Option<Duration>,
}

/// Which of the three loops issued a query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    ShrinkParity,
    ShrinkInputs,
    GrowParity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum TraceEvent {
    /// Existence of any suitable matrix with `r` columns.
    Exists { r: usize, found: bool },
    /// A search for `m` inputs over `r` outputs.
    Search {
        phase: Phase,
        m: usize,
        r: usize,
        verdict: &'static str,
        partitions: u64,
        combinations: u64,
    },
    /// Input target raised by one after the parity size dropped.
    InputsRaised { n_in: usize },
    /// Input target stepped past the greedy baseline at its parity size.
    BaselineSkip { n_in: usize, r: usize },
    /// Parity size raised after an input reduction at the previous size.
    ParityRaised { r: usize },
    /// Parity size raised while still below the greedy baseline.
    ParityRaisedBelowBaseline { r: usize },
}

#[derive(Clone, Debug, Serialize)]
pub struct ConfigEcho {
    pub partition_order: String,
    pub combination_order: String,
    pub reduction: bool,
    pub backend: String,
    pub jobs: usize,
    pub timeout_seconds: Option<f64>,
}

impl ConfigEcho {
    fn new(config: &SynthConfig) -> Self {
        let s = &config.search;
        ConfigEcho {
            partition_order: match s.partition_order {
                crate::partitions::PartitionOrder::LexAscending => "asc".into(),
                crate::partitions::PartitionOrder::LexDescending => "desc".into(),
            },
            combination_order: match s.combination_order {
                crate::combtree::CombinationOrder::ComponentSizeDesc => "size".into(),
                crate::combtree::CombinationOrder::CombinationCountDesc => "count".into(),
            },
            reduction: s.reduction,
            backend: match &s.backend {
                Backend::Builtin => "builtin".into(),
                Backend::External(e) => format!("smtlib:{}", e.program.display()),
            },
            jobs: s.jobs,
            timeout_seconds: config.timeout.map(|t| t.as_secs_f64()),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SynthesisReport {
    pub k: usize,
    pub d: usize,
    pub n_in: usize,
    pub r: usize,
    pub n_base: usize,
    pub r_base: usize,
    /// 1-based support of each parity output.
    pub functions: Vec<Vec<usize>>,
    pub counters: SearchCounters,
    /// False when the time budget ran out before the search finished.
    pub optimal: bool,
    pub seconds: f64,
    pub config: ConfigEcho,
    pub trace: Vec<TraceEvent>,
    #[serde(skip)]
    pub solution: CoordinateFunctions,
}

impl SynthesisReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

struct Driver<'a> {
    k: usize,
    d: usize,
    config: &'a SearchConfig,
    counters: SearchCounters,
    trace: Vec<TraceEvent>,
    timed_out: bool,
}

impl Driver<'_> {
    fn search(&mut self, phase: Phase, m: usize, r: usize) -> Result<Option<CoordinateFunctions>> {
        let before = self.counters;
        let outcome = find_coor_func(self.k, self.d, m, r, self.config, &mut self.counters)?;
        let verdict = match &outcome {
            SearchOutcome::Found(_) => "sat",
            SearchOutcome::Infeasible => "infeasible",
            SearchOutcome::TimedOut => "timeout",
        };
        self.trace.push(TraceEvent::Search {
            phase,
            m,
            r,
            verdict,
            partitions: self.counters.partitions - before.partitions,
            combinations: self.counters.combinations - before.combinations,
        });
        Ok(match outcome {
            SearchOutcome::Found(f) => Some(f),
            SearchOutcome::Infeasible => None,
            SearchOutcome::TimedOut => {
                self.timed_out = true;
                None
            }
        })
    }
}

/// Runs the full synthesis for `(k, d)`.
pub fn synthesize(k: usize, d: usize, config: &SynthConfig) -> Result<SynthesisReport> {
    let start = Instant::now();
    if !(1..=16).contains(&k) {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..=16")));
    }
    let greedy = greedy_synthesize(k, d)?;
    let mut search = config.search.clone();
    if let Some(t) = config.timeout {
        let deadline = start + t;
        search.deadline = Some(search.deadline.map_or(deadline, |d| d.min(deadline)));
    }
    let mut drv = Driver {
        k,
        d,
        config: &search,
        counters: SearchCounters::default(),
        trace: Vec::new(),
        timed_out: false,
    };

    let n_base = greedy.n_base;
    let r_base = greedy.r_base;
    let mut n_in = n_base;
    let mut r = r_base;
    let mut best = CoordinateFunctions::from_pgm(greedy.pgm.clone())?;

    while r > k.max(d - 1) {
        let found = exists_pgm(k, d, r - 1);
        drv.trace.push(TraceEvent::Exists { r: r - 1, found });
        if found {
            r -= 1;
        } else {
            break;
        }
    }
    if r < r_base {
        n_in += 1;
        drv.trace.push(TraceEvent::InputsRaised { n_in });
    }

    'run: {
        while n_in > k.max(r) {
            match drv.search(Phase::ShrinkInputs, n_in - 1, r)? {
                Some(f) => {
                    best = f;
                    n_in -= 1;
                }
                None if drv.timed_out => break 'run,
                None => break,
            }
        }
        let mut old_in = n_in;
        while n_in > k.max(r + 1) {
            if r + 1 == r_base && n_in - 1 == n_base {
                old_in = n_in;
                n_in -= 1;
                drv.trace.push(TraceEvent::BaselineSkip { n_in, r: r + 1 });
            }
            match drv.search(Phase::GrowParity, n_in.saturating_sub(1), r + 1)? {
                Some(f) => {
                    best = f;
                    n_in -= 1;
                }
                None if drv.timed_out => break 'run,
                None if n_in < old_in => {
                    old_in = n_in;
                    r += 1;
                    drv.trace.push(TraceEvent::ParityRaised { r });
                }
                None if r < r_base && n_in - 1 == n_base => {
                    r += 1;
                    drv.trace.push(TraceEvent::ParityRaisedBelowBaseline { r });
                }
                None => break,
            }
        }
    }

    Ok(SynthesisReport {
        k,
        d,
        n_in: best.individual_inputs(),
        r: best.r(),
        n_base,
        r_base,
        functions: best.supports(),
        counters: drv.counters,
        optimal: !drv.timed_out,
        seconds: start.elapsed().as_secs_f64(),
        config: ConfigEcho::new(config),
        trace: drv.trace,
        solution: best,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Optimality {
    /// No smaller solution exists; `checked` candidate matrices were examined.
    Confirmed { checked: u64 },
    /// A matrix with fewer inputs and at most one extra parity bit.
    Refuted { witness: ParityGeneratorMatrix },
    BudgetExceeded { checked: u64 },
}

/// Exhaustively looks for an injective matrix of distance `d` with at most
/// `r + 1` nonzero columns and fewer than `m` ones in total.
///
/// Columns are enumerated as non-decreasing sequences of `r + 1` values;
/// zero columns stand in for absent parity bits.
pub fn verify_local_optimality(k: usize, d: usize, m: usize, r: usize, budget: u64) -> Optimality {
    if k == 0 || k > 8 || m == 0 || r + 1 + k > 64 {
        return Optimality::BudgetExceeded { checked: 0 };
    }
    let width = r + 1;
    let mut cols = Vec::with_capacity(width);
    let mut checked = 0u64;
    match optimality_walk(k, d as u32, width, m - 1, 0, &mut cols, &mut checked, budget) {
        Walk::Found(witness) => Optimality::Refuted { witness },
        Walk::Budget => Optimality::BudgetExceeded { checked },
        Walk::Done => Optimality::Confirmed { checked },
    }
}

enum Walk {
    Done,
    Found(ParityGeneratorMatrix),
    Budget,
}

#[allow(clippy::too_many_arguments)]
fn optimality_walk(
    k: usize,
    d: u32,
    width: usize,
    ones_left: usize,
    min_col: u64,
    cols: &mut Vec<u64>,
    checked: &mut u64,
    budget: u64,
) -> Walk {
    if cols.len() == width {
        *checked += 1;
        if *checked > budget {
            return Walk::Budget;
        }
        let nonzero: Vec<u64> = cols.iter().copied().filter(|&c| c != 0).collect();
        if nonzero.len() < k {
            return Walk::Done;
        }
        let g = ParityGeneratorMatrix::new(k, nonzero).expect("columns fit in k bits");
        if gf2::is_injective(&g) && gf2::min_distance(&g) >= d {
            return Walk::Found(g);
        }
        return Walk::Done;
    }
    for c in min_col..1u64 << k {
        let w = c.count_ones() as usize;
        if w > ones_left {
            continue;
        }
        cols.push(c);
        let res = optimality_walk(k, d, width, ones_left - w, c, cols, checked, budget);
        cols.pop();
        if !matches!(res, Walk::Done) {
            return res;
        }
    }
    Walk::Done
}
