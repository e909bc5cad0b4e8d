//! Fault-injection simulation: every error of weight below `d` must be
//! detected, and every error of weight below `d / 2` must decode back to the
//! original codeword.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::combtree::binomial;
use crate::gf2::{self, ParityGeneratorMatrix};

/// Above this many elementary checks the simulation switches to sampling.
pub const EXHAUSTIVE_LIMIT: u64 = 100_000_000;
pub const SAMPLES: u64 = 1_000_000;
pub const DEFAULT_SEED: u64 = 0x5eed_c0de;
const MAX_WITNESSES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaultWitness {
    /// Codeword and error as bit strings, message bits first.
    pub codeword: String,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaultReport {
    pub k: usize,
    pub r: usize,
    pub d: usize,
    pub detect_checked: u64,
    pub correct_checked: u64,
    pub failure_count: u64,
    /// At most a handful of failing cases.
    pub failures: Vec<FaultWitness>,
    pub exhaustive: bool,
    pub seed: Option<u64>,
    pub verdict: Verdict,
}

impl FaultReport {
    fn new(g: &ParityGeneratorMatrix, d: usize) -> Self {
        FaultReport {
            k: g.k(),
            r: g.r(),
            d,
            detect_checked: 0,
            correct_checked: 0,
            failure_count: 0,
            failures: Vec::new(),
            exhaustive: true,
            seed: None,
            verdict: Verdict::Pass,
        }
    }

    fn fail(&mut self, n: usize, c: u64, e: u64) {
        self.failure_count += 1;
        self.verdict = Verdict::Fail;
        if self.failures.len() < MAX_WITNESSES {
            let s = |v: u64| -> String {
                (0..n).map(|i| if (v >> i) & 1 == 1 { '1' } else { '0' }).collect()
            };
            self.failures.push(FaultWitness {
                codeword: s(c),
                error: s(e),
            });
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

struct Code {
    k: usize,
    n: usize,
    words: Vec<u64>,
    g: ParityGeneratorMatrix,
}

impl Code {
    fn new(g: &ParityGeneratorMatrix) -> Self {
        let k = g.k();
        let words = (0..1u64 << k).map(|x| x | (g.parity_bits(x) << k)).collect();
        Code {
            k,
            n: k + g.r(),
            words,
            g: g.clone(),
        }
    }

    fn contains(&self, y: u64) -> bool {
        let msg = y & gf2::mask(self.k);
        (y >> self.k) == self.g.parity_bits(msg)
    }

    /// The unique nearest codeword, or `None` on a tie.
    fn decode(&self, y: u64) -> Option<u64> {
        let mut best = u32::MAX;
        let mut winner = None;
        for &c in &self.words {
            let dist = (c ^ y).count_ones();
            if dist < best {
                best = dist;
                winner = Some(c);
            } else if dist == best {
                winner = None;
            }
        }
        winner
    }
}

/// Calls `f` on every `n`-bit word of weight `w`.
fn for_each_weight(n: usize, w: usize, f: &mut impl FnMut(u64)) {
    if w == 0 || w > n {
        return;
    }
    let mut e: u128 = (1u128 << w) - 1;
    let limit = 1u128 << n;
    while e < limit {
        f(e as u64);
        // Next word with the same popcount.
        let c = e & e.wrapping_neg();
        let r = e + c;
        e = (((r ^ e) >> 2) / c) | r;
    }
}

fn random_error(rng: &mut ChaCha8Rng, n: usize, weights: &[(usize, u64)]) -> u64 {
    let total: u64 = weights.iter().map(|w| w.1).sum();
    let mut pick = rng.gen_range(0..total);
    let w = weights
        .iter()
        .find(|&&(_, c)| {
            if pick < c {
                true
            } else {
                pick -= c;
                false
            }
        })
        .map(|w| w.0)
        .unwrap_or(1);
    let mut positions: Vec<usize> = (0..n).collect();
    let mut e = 0u64;
    for i in 0..w {
        let j = rng.gen_range(i..n);
        positions.swap(i, j);
        e |= 1 << positions[i];
    }
    e
}

fn run(
    g: &ParityGeneratorMatrix,
    d: usize,
    max_weight: usize,
    cost_per_check: u64,
    mut check: impl FnMut(&Code, u64, u64) -> bool,
) -> (FaultReport, u64) {
    let code = Code::new(g);
    let n = code.n;
    let mut report = FaultReport::new(g, d);
    let weights: Vec<(usize, u64)> = (1..=max_weight.min(n))
        .map(|w| (w, binomial(n, w)))
        .collect();
    let errors: u64 = weights.iter().map(|w| w.1).sum();
    let total = errors
        .saturating_mul(code.words.len() as u64)
        .saturating_mul(cost_per_check);
    let mut checked = 0u64;
    if total <= EXHAUSTIVE_LIMIT {
        for &c in &code.words {
            for &(w, _) in &weights {
                for_each_weight(n, w, &mut |e| {
                    checked += 1;
                    if !check(&code, c, e) {
                        report.fail(n, c, e);
                    }
                });
            }
        }
    } else {
        report.exhaustive = false;
        report.seed = Some(DEFAULT_SEED);
        let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
        for _ in 0..SAMPLES {
            let c = code.words[rng.gen_range(0..code.words.len())];
            let e = random_error(&mut rng, n, &weights);
            checked += 1;
            if !check(&code, c, e) {
                report.fail(n, c, e);
            }
        }
    }
    (report, checked)
}

/// Every error of weight `1..=d-1` turns a codeword into a non-codeword.
pub fn verify_detection(g: &ParityGeneratorMatrix, d: usize) -> FaultReport {
    let (mut report, checked) = run(g, d, d.saturating_sub(1), 1, |code, c, e| !code.contains(c ^ e));
    report.detect_checked = checked;
    report
}

/// Every error of weight `1..=ceil(d/2)-1` decodes to the original codeword.
pub fn verify_correction(g: &ParityGeneratorMatrix, d: usize) -> FaultReport {
    let t = d.div_ceil(2).saturating_sub(1);
    let cost = 1u64 << g.k();
    let (mut report, checked) = run(g, d, t, cost, |code, c, e| code.decode(c ^ e) == Some(c));
    report.correct_checked = checked;
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Capability {
    pub distance: u32,
    /// All `(t_d, t_c)` with `t_d + t_c < d` and `t_d > t_c >= 0`.
    pub pairs: Vec<(u32, u32)>,
    /// Pairs not dominated in both coordinates by another pair.
    pub frontier: Vec<(u32, u32)>,
}

pub fn capability(g: &ParityGeneratorMatrix) -> Capability {
    let d = gf2::min_distance(g);
    let mut pairs = Vec::new();
    for tc in 0..d {
        for td in tc + 1..d {
            if td + tc < d {
                pairs.push((td, tc));
            }
        }
    }
    let frontier = pairs
        .iter()
        .copied()
        .filter(|&(a, b)| {
            !pairs
                .iter()
                .any(|&(x, y)| (x, y) != (a, b) && x >= a && y >= b)
        })
        .collect();
    Capability {
        distance: d,
        pairs,
        frontier,
    }
}
