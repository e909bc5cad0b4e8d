//! Deciding whether an input combination admits linear coordinate functions
//! that form an injective parity generator matrix with distance `d`, and the
//! search over all combinations with a given number of individual inputs.

use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::combtree::{reduced_generator, CombinationOrder, InputCombination};
use crate::error::{Error, Result};
use crate::gf2::{self, semantic_support, ParityGeneratorMatrix, TruthTable};
use crate::partitions::{count_partitions, enumerate_partitions, PartitionOrder};
use crate::smt;

/// A satisfying assignment: one linear function per parity bit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoordinateFunctions {
    /// The support sets the search committed to.
    pub combination: InputCombination,
    pub functions: Vec<TruthTable>,
    pub pgm: ParityGeneratorMatrix,
}

impl CoordinateFunctions {
    /// Builds the XOR functions of the columns of `pgm`.
    pub fn from_pgm(pgm: ParityGeneratorMatrix) -> Result<Self> {
        let k = pgm.k();
        let combination = InputCombination::new(k, pgm.columns().to_vec())?;
        let functions = pgm
            .columns()
            .iter()
            .map(|&c| TruthTable::linear(k, c))
            .collect::<Result<_>>()?;
        Ok(CoordinateFunctions {
            combination,
            functions,
            pgm,
        })
    }

    fn from_tables(combination: InputCombination, functions: Vec<TruthTable>) -> Result<Self> {
        let columns = functions
            .iter()
            .map(|f| {
                f.linear_mask()
                    .ok_or_else(|| Error::Model(format!("non-linear function for {combination}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let pgm = ParityGeneratorMatrix::new(combination.k(), columns)?;
        Ok(CoordinateFunctions {
            combination,
            functions,
            pgm,
        })
    }

    pub fn k(&self) -> usize {
        self.pgm.k()
    }

    pub fn r(&self) -> usize {
        self.pgm.r()
    }

    /// Sum over functions of their semantic support sizes.
    pub fn individual_inputs(&self) -> usize {
        self.functions.iter().map(|f| semantic_support(f).len()).sum()
    }

    /// 1-based support of each function.
    pub fn supports(&self) -> Vec<Vec<usize>> {
        self.functions
            .iter()
            .map(|f| semantic_support(f).into_iter().map(|i| i + 1).collect())
            .collect()
    }
}

/// Evaluates the three constraint families directly on truth tables, over
/// every pair of messages: linearity of each function, distance `d` for
/// every nonzero message, and distinct parities for distinct messages.
pub fn satisfies_constraints(functions: &[TruthTable], k: usize, d: usize) -> bool {
    if functions.is_empty() || functions.iter().any(|f| f.arity() != k) {
        return false;
    }
    let n = 1u64 << k;
    let parity = |x: u64| -> u64 {
        functions
            .iter()
            .enumerate()
            .fold(0, |p, (i, f)| p | ((f.eval(x) as u64) << i))
    };
    let table: Vec<u64> = (0..n).map(parity).collect();
    for x in 0..n {
        for y in 0..n {
            if table[x as usize] ^ table[y as usize] != table[(x ^ y) as usize] {
                return false;
            }
            if x != y && table[x as usize] == table[y as usize] {
                return false;
            }
        }
        if x != 0 && (x.count_ones() + table[x as usize].count_ones()) < d as u32 {
            return false;
        }
    }
    true
}

/// External SMT-LIB solver reading the script on standard input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalSolver {
    pub program: PathBuf,
    pub args: Vec<String>,
    pub timeout: Duration,
    /// Require every argument of every function to be essential.
    pub exact_support: bool,
    /// Directory receiving a copy of each generated script.
    pub dump_dir: Option<PathBuf>,
}

impl ExternalSolver {
    /// `z3` needs `-in` to read standard input; other solvers get no
    /// arguments unless given.
    pub fn new(program: impl Into<PathBuf>) -> Self {
        let program = program.into();
        let is_z3 = program
            .file_stem()
            .and_then(|s| s.to_str())
            .is_some_and(|s| s.starts_with("z3"));
        ExternalSolver {
            args: if is_z3 { vec!["-in".into()] } else { Vec::new() },
            program,
            timeout: Duration::from_secs(60),
            exact_support: false,
            dump_dir: None,
        }
    }

    /// Parses `<path> [args...]`.
    pub fn from_spec(spec: &str) -> Result<Self> {
        let mut words = spec.split_whitespace();
        let program = words
            .next()
            .ok_or_else(|| Error::InvalidParameter("empty solver command".into()))?;
        let mut solver = ExternalSolver::new(program);
        let args: Vec<String> = words.map(str::to_string).collect();
        if !args.is_empty() {
            solver.args = args;
        }
        Ok(solver)
    }

    fn run(&self, comb: &InputCombination, d: usize) -> Result<smt::SolverResponse> {
        let script = smt::generate_script(comb, d, self.exact_support);
        if let Some(dir) = &self.dump_dir {
            std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
            let name: String = comb
                .to_string()
                .chars()
                .map(|c| if c.is_ascii_digit() { c } else { '_' })
                .collect();
            let path = dir.join(format!("k{}_d{}_{}.smt2", comb.k(), d, name.trim_matches('_')));
            std::fs::write(&path, &script).map_err(|e| Error::io(&path, e))?;
        }
        let fail = |reason: String| Error::Solver {
            combination: comb.to_string(),
            reason,
        };
        let mut child = Command::new(&self.program)
            .args(&self.args)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .map_err(|e| fail(format!("cannot start {}: {e}", self.program.display())))?;
        let mut stdin = child.stdin.take().expect("piped stdin");
        let mut stdout = child.stdout.take().expect("piped stdout");
        let mut stderr = child.stderr.take().expect("piped stderr");
        let writer = std::thread::spawn(move || stdin.write_all(script.as_bytes()));
        let reader = std::thread::spawn(move || {
            let mut s = String::new();
            stdout.read_to_string(&mut s).map(|_| s)
        });
        let err_reader = std::thread::spawn(move || {
            let mut s = String::new();
            let _ = stderr.read_to_string(&mut s);
            s
        });
        let deadline = Instant::now() + self.timeout;
        let status = loop {
            match child.try_wait() {
                Ok(Some(status)) => break status,
                Ok(None) if Instant::now() >= deadline => {
                    let _ = child.kill();
                    let _ = child.wait();
                    return Err(Error::SolverTimeout {
                        combination: comb.to_string(),
                        seconds: self.timeout.as_secs(),
                    });
                }
                Ok(None) => std::thread::sleep(Duration::from_millis(2)),
                Err(e) => return Err(fail(format!("wait failed: {e}"))),
            }
        };
        // A solver may exit before reading all input; that is its business.
        let _ = writer.join();
        let out = reader
            .join()
            .map_err(|_| fail("reader thread panicked".into()))?
            .map_err(|e| fail(format!("reading output: {e}")))?;
        let err = err_reader.join().unwrap_or_default();
        let response = smt::parse_response(&out).map_err(|e| {
            fail(format!("{e}; exit status {status}; stderr: {}", err.trim()))
        })?;
        Ok(response)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum Backend {
    /// Each function is the XOR of its whole support set.
    #[default]
    Builtin,
    External(ExternalSolver),
}

/// Decides one combination. `Ok(None)` means infeasible.
pub fn check_combination(
    comb: &InputCombination,
    d: usize,
    backend: &Backend,
) -> Result<Option<CoordinateFunctions>> {
    match backend {
        Backend::Builtin => {
            let pgm = ParityGeneratorMatrix::new(comb.k(), comb.sets().to_vec())?;
            if gf2::is_injective(&pgm) && gf2::distance_at_least(&pgm, d as u32) {
                Ok(Some(CoordinateFunctions::from_pgm(pgm)?))
            } else {
                Ok(None)
            }
        }
        Backend::External(solver) => {
            let response = solver.run(comb, d)?;
            match response.status {
                smt::SatStatus::Unsat => Ok(None),
                smt::SatStatus::Unknown => Err(Error::Solver {
                    combination: comb.to_string(),
                    reason: "solver answered unknown".into(),
                }),
                smt::SatStatus::Sat => {
                    let tables = smt::functions_from_model(comb, &response.definitions)?;
                    if !satisfies_constraints(&tables, comb.k(), d) {
                        return Err(Error::Model(format!(
                            "model for {comb} violates the constraints"
                        )));
                    }
                    Ok(Some(CoordinateFunctions::from_tables(comb.clone(), tables)?))
                }
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub partition_order: PartitionOrder,
    pub combination_order: CombinationOrder,
    pub reduction: bool,
    pub backend: Backend,
    pub jobs: usize,
    /// Wall-clock limit for the whole synthesis, checked between combinations.
    pub deadline: Option<Instant>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            partition_order: PartitionOrder::LexAscending,
            combination_order: CombinationOrder::ComponentSizeDesc,
            reduction: true,
            backend: Backend::Builtin,
            jobs: 1,
            deadline: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchCounters {
    /// Partitions of every queried `m`, whether or not all were explored.
    pub partitions: u64,
    /// Combinations whose verdicts were committed, up to and including a success.
    pub combinations: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(CoordinateFunctions),
    Infeasible,
    TimedOut,
}

fn expired(deadline: Option<Instant>) -> bool {
    deadline.is_some_and(|d| Instant::now() >= d)
}

/// All combinations for `m` inputs over `r` functions, in enumeration order.
fn combinations(
    k: usize,
    m: usize,
    r: usize,
    config: &SearchConfig,
) -> impl Iterator<Item = InputCombination> + Send + 'static {
    let (order, reduce) = (config.combination_order, config.reduction);
    enumerate_partitions(m, r, k, config.partition_order)
        .flat_map(move |p| reduced_generator(p.parts(), k, order, reduce))
}

/// Searches for coordinate functions with `m` total inputs over `r` outputs.
///
/// The first success in enumeration order is returned regardless of
/// `config.jobs`, and the counters only include committed verdicts.
pub fn find_coor_func(
    k: usize,
    d: usize,
    m: usize,
    r: usize,
    config: &SearchConfig,
    counters: &mut SearchCounters,
) -> Result<SearchOutcome> {
    if r == 0 || m < r || m > k * r {
        return Ok(SearchOutcome::Infeasible);
    }
    counters.partitions += count_partitions(m, r, k);
    if config.jobs <= 1 {
        for comb in combinations(k, m, r, config) {
            if expired(config.deadline) {
                return Ok(SearchOutcome::TimedOut);
            }
            counters.combinations += 1;
            if let Some(f) = check_combination(&comb, d, &config.backend)? {
                return Ok(SearchOutcome::Found(f));
            }
        }
        return Ok(SearchOutcome::Infeasible);
    }
    parallel_search(k, d, m, r, config, counters)
}

type ChunkResult = (u64, Vec<(InputCombination, Result<Option<CoordinateFunctions>>)>);

fn parallel_search(
    k: usize,
    d: usize,
    m: usize,
    r: usize,
    config: &SearchConfig,
    counters: &mut SearchCounters,
) -> Result<SearchOutcome> {
    let chunk_size = match config.backend {
        Backend::Builtin => 256,
        Backend::External(_) => 1,
    };
    let stop = AtomicBool::new(false);
    let (work_tx, work_rx) = crossbeam_channel::bounded::<(u64, Vec<InputCombination>)>(config.jobs * 4);
    let (done_tx, done_rx) = crossbeam_channel::unbounded::<ChunkResult>();
    let source = combinations(k, m, r, config);

    std::thread::scope(|scope| {
        let stop = &stop;
        scope.spawn(move || {
            let mut source = source;
            let mut seq = 0u64;
            loop {
                if stop.load(Ordering::Relaxed) {
                    break;
                }
                let chunk: Vec<InputCombination> = source.by_ref().take(chunk_size).collect();
                if chunk.is_empty() || work_tx.send((seq, chunk)).is_err() {
                    break;
                }
                seq += 1;
            }
        });
        for _ in 0..config.jobs {
            let work_rx = work_rx.clone();
            let done_tx = done_tx.clone();
            let backend = &config.backend;
            scope.spawn(move || {
                for (seq, chunk) in work_rx {
                    let mut verdicts = Vec::with_capacity(chunk.len());
                    if !stop.load(Ordering::Relaxed) {
                        for comb in chunk {
                            let v = check_combination(&comb, d, backend);
                            // Later entries of the chunk can never be committed.
                            let last = !matches!(v, Ok(None));
                            verdicts.push((comb, v));
                            if last {
                                break;
                            }
                        }
                    }
                    if done_tx.send((seq, verdicts)).is_err() {
                        break;
                    }
                }
            });
        }
        drop(done_tx);
        drop(work_rx);

        let mut pending: BTreeMap<u64, Vec<_>> = BTreeMap::new();
        let mut next = 0u64;
        let mut outcome = Ok(SearchOutcome::Infeasible);
        'commit: for (seq, verdicts) in done_rx.iter() {
            pending.insert(seq, verdicts);
            while let Some(verdicts) = pending.remove(&next) {
                next += 1;
                for (_, verdict) in verdicts {
                    if expired(config.deadline) {
                        outcome = Ok(SearchOutcome::TimedOut);
                        break 'commit;
                    }
                    counters.combinations += 1;
                    match verdict {
                        Ok(None) => {}
                        Ok(Some(f)) => {
                            outcome = Ok(SearchOutcome::Found(f));
                            break 'commit;
                        }
                        Err(e) => {
                            outcome = Err(e);
                            break 'commit;
                        }
                    }
                }
            }
        }
        stop.store(true, Ordering::Relaxed);
        // Drain so that blocked workers and the producer can finish.
        for _ in done_rx.iter() {}
        outcome
    })
}

/// Whether any injective k×r matrix reaches distance `d`.
///
/// Rows can be permuted and columns can be permuted without changing either
/// property, so the search fixes the lightest row to `1^w 0^(r-w)` and lists
/// the remaining rows in increasing order.
pub fn exists_pgm(k: usize, d: usize, r: usize) -> bool {
    find_pgm(k, d, r).is_some()
}

/// A witness for [`exists_pgm`].
pub fn find_pgm(k: usize, d: usize, r: usize) -> Option<ParityGeneratorMatrix> {
    if k == 0 || r == 0 || r < k || d < 2 || r < d - 1 || k + r > 64 || r > 24 {
        return None;
    }
    for w in d - 1..=r {
        let first = gf2::mask(w);
        // Sums over subsets of the chosen rows, with the subset sizes.
        let mut span = vec![(0u64, 0u32), (first, 1u32)];
        let mut rows = vec![first];
        if extend_rows(k, d as u32, r, w as u32, &mut rows, &mut span, 1) {
            return ParityGeneratorMatrix::from_rows(r, &rows).ok();
        }
    }
    None
}

fn extend_rows(
    k: usize,
    d: u32,
    r: usize,
    w: u32,
    rows: &mut Vec<u64>,
    span: &mut Vec<(u64, u32)>,
    start: u64,
) -> bool {
    if rows.len() == k {
        return true;
    }
    let first = rows[0];
    let len = span.len();
    for g in start..1u64 << r {
        if g == first || g.count_ones() < w {
            continue;
        }
        // Every new codeword combines g with some subset of earlier rows.
        let ok = span[..len]
            .iter()
            .all(|&(s, c)| g != s && (g ^ s).count_ones() + c + 1 >= d);
        if !ok {
            continue;
        }
        for i in 0..len {
            let (s, c) = span[i];
            span.push((g ^ s, c + 1));
        }
        rows.push(g);
        if extend_rows(k, d, r, w, rows, span, g + 1) {
            return true;
        }
        rows.pop();
        span.truncate(len);
    }
    false
}
