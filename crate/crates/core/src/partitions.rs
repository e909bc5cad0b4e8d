//! Non-increasing partitions of `m` into `r` parts, each part in `1..=k`.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(Vec<usize>);

impl Partition {
    /// Checks the ordering and bounds; returns `None` if violated.
    pub fn new(parts: Vec<usize>, k: usize) -> Option<Self> {
        let ok = !parts.is_empty()
            && parts.iter().all(|&p| (1..=k).contains(&p))
            && parts.windows(2).all(|w| w[0] >= w[1]);
        ok.then_some(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PartitionOrder {
    #[default]
    LexAscending,
    LexDescending,
}

impl FromStr for PartitionOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "asc" => Ok(PartitionOrder::LexAscending),
            "desc" => Ok(PartitionOrder::LexDescending),
            _ => Err(Error::Parse(format!("unknown partition order {s:?}"))),
        }
    }
}

/// Lazy cursor over the partitions in the requested lexicographic order.
#[derive(Clone, Debug)]
pub struct Partitions {
    m: usize,
    k: usize,
    order: PartitionOrder,
    current: Option<Vec<usize>>,
    started: bool,
}

pub fn enumerate_partitions(m: usize, r: usize, k: usize, order: PartitionOrder) -> Partitions {
    let feasible = r >= 1 && k >= 1 && r <= m && m <= k * r;
    let current = feasible.then(|| {
        let mut parts = vec![0; r];
        fill(&mut parts, 0, m, k, order);
        parts
    });
    Partitions {
        m,
        k,
        order,
        current,
        started: false,
    }
}

/// Fills `parts[from..]` with the extreme completion (smallest for ascending,
/// largest for descending) summing to `rest`, each part at most `bound`.
fn fill(parts: &mut [usize], from: usize, mut rest: usize, mut bound: usize, order: PartitionOrder) {
    let len = parts.len();
    for i in from..len {
        let slots = len - i;
        let v = match order {
            PartitionOrder::LexAscending => rest.div_ceil(slots),
            PartitionOrder::LexDescending => bound.min(rest - (slots - 1)),
        };
        parts[i] = v;
        rest -= v;
        bound = v;
    }
}

impl Partitions {
    fn advance(&mut self) {
        let Some(parts) = self.current.as_mut() else {
            return;
        };
        let r = parts.len();
        let mut prefix: Vec<usize> = Vec::with_capacity(r);
        let mut acc = 0;
        for &p in parts.iter() {
            prefix.push(acc);
            acc += p;
        }
        for i in (0..r.saturating_sub(1)).rev() {
            let bound = if i == 0 { self.k } else { parts[i - 1] };
            let v = match self.order {
                PartitionOrder::LexAscending => parts[i] + 1,
                PartitionOrder::LexDescending => parts[i] - 1,
            };
            if v == 0 || v > bound {
                continue;
            }
            let slots = r - i - 1;
            let Some(rest) = self.m.checked_sub(prefix[i] + v) else {
                continue;
            };
            if slots <= rest && rest <= slots * v {
                parts[i] = v;
                fill(parts, i + 1, rest, v, self.order);
                return;
            }
        }
        self.current = None;
    }
}

impl Iterator for Partitions {
    type Item = Partition;

    fn next(&mut self) -> Option<Partition> {
        if self.started {
            self.advance();
        }
        self.started = true;
        self.current.clone().map(Partition)
    }
}

/// Number of partitions, by the recurrence on the largest admissible part.
pub fn count_partitions(m: usize, r: usize, k: usize) -> u64 {
    fn go(m: usize, r: usize, k: usize, memo: &mut HashMap<(usize, usize, usize), u64>) -> u64 {
        if r > m || m > k * r {
            return 0;
        }
        if r == m || m == k * r {
            return 1;
        }
        if let Some(&c) = memo.get(&(m, r, k)) {
            return c;
        }
        // Either some part equals k (drop it) or every part is below k.
        let with_k = if m >= k { go(m - k, r - 1, k, memo) } else { 0 };
        let c = with_k + if k > 1 { go(m, r, k - 1, memo) } else { 0 };
        memo.insert((m, r, k), c);
        c
    }
    go(m, r, k, &mut HashMap::new())
}
