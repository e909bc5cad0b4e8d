//! Input combinations for a partition, generated depth-first from a
//! conceptual combination tree with sibling-equivalence pruning.
//!
//! Level `t` of the tree picks the support set of coordinate function `t`.
//! Two siblings are equivalent when some bijection between their differing
//! elements respects membership in every ancestor label; only the first
//! sibling of each class is expanded, and inside a run of equal part sizes a
//! label already covered by an earlier class at a higher level is skipped.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::mask;

/// Support sets `(X_1, ..., X_r)`, each stored as a bit mask over `[k]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InputCombination {
    k: usize,
    sets: Vec<u64>,
}

impl InputCombination {
    pub fn new(k: usize, sets: Vec<u64>) -> Result<Self> {
        if k == 0 || k > 64 {
            return Err(Error::InvalidParameter(format!("k = {k} outside 1..=64")));
        }
        if sets.iter().any(|&s| s == 0 || s & !mask(k) != 0) {
            return Err(Error::InvalidParameter(
                "support sets must be nonempty subsets of [k]".into(),
            ));
        }
        Ok(InputCombination { k, sets })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sets(&self) -> &[u64] {
        &self.sets
    }

    pub fn r(&self) -> usize {
        self.sets.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(|s| s.count_ones() as usize).collect()
    }

    pub fn total_inputs(&self) -> usize {
        self.sets.iter().map(|s| s.count_ones() as usize).sum()
    }

    pub fn covers_all_inputs(&self) -> bool {
        self.sets.iter().fold(0, |a, s| a | s) == mask(self.k)
    }

    /// 0-based members of set `j` in ascending order.
    pub fn indices(&self, j: usize) -> Vec<usize> {
        bits_of(self.sets[j])
    }
}

fn bits_of(mut s: u64) -> Vec<usize> {
    let mut v = Vec::with_capacity(s.count_ones() as usize);
    while s != 0 {
        v.push(s.trailing_zeros() as usize);
        s &= s - 1;
    }
    v
}

/// `(1,2)(1)(2)` with 1-based indices.
impl fmt::Display for InputCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.sets {
            f.write_str("(")?;
            for (n, i) in bits_of(s).into_iter().enumerate() {
                if n > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", i + 1)?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CombinationOrder {
    /// Larger support sets first.
    #[default]
    ComponentSizeDesc,
    /// Parts with more candidate subsets, `C(k, n)`, first; ties by larger part.
    CombinationCountDesc,
}

impl FromStr for CombinationOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "size" => Ok(CombinationOrder::ComponentSizeDesc),
            "count" => Ok(CombinationOrder::CombinationCountDesc),
            _ => Err(Error::Parse(format!("unknown combination order {s:?}"))),
        }
    }
}

pub(crate) fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// The level sizes of the tree for `parts` under `order`.
pub fn arrange(parts: &[usize], k: usize, order: CombinationOrder) -> Vec<usize> {
    let mut sizes = parts.to_vec();
    match order {
        CombinationOrder::ComponentSizeDesc => sizes.sort_by(|a, b| b.cmp(a)),
        CombinationOrder::CombinationCountDesc => {
            sizes.sort_by(|&a, &b| binomial(k, b).cmp(&binomial(k, a)).then(b.cmp(&a)))
        }
    }
    sizes
}

/// All `n`-subsets of `[k]` as masks, in lexicographic order of their
/// ascending index tuples.
pub fn subsets_lex(k: usize, n: usize) -> Vec<u64> {
    fn go(start: usize, k: usize, n: usize, acc: u64, out: &mut Vec<u64>) {
        if n == 0 {
            out.push(acc);
            return;
        }
        for i in start..=k - n {
            go(i + 1, k, n - 1, acc | (1 << i), out);
        }
    }
    let mut out = Vec::new();
    if n <= k {
        go(0, k, n, 0, &mut out);
    }
    out
}

/// Membership pattern of each element across the ancestor labels; two
/// siblings are equivalent iff their labels have equal pattern multisets.
fn class_key(label: u64, ancestors: &[u64]) -> Vec<u64> {
    let mut key: Vec<u64> = bits_of(label)
        .into_iter()
        .map(|e| {
            ancestors
                .iter()
                .enumerate()
                .fold(0u64, |sig, (t, a)| sig | (((a >> e) & 1) << t))
        })
        .collect();
    key.sort_unstable();
    key
}

/// Whether two children with the given labels are equivalent under the
/// ancestor labels `path` (root first, parent last).
pub fn sibling_equivalent(path: &[u64], a: u64, b: u64) -> Result<bool> {
    if a.count_ones() != b.count_ones() {
        return Err(Error::InvalidParameter(
            "siblings must have labels of equal size".into(),
        ));
    }
    if path.len() > 64 {
        return Err(Error::InvalidParameter("path deeper than 64 levels".into()));
    }
    Ok(class_key(a, path) == class_key(b, path))
}

/// For each child, the index of the first sibling in its class.
pub fn sibling_classes(children: &[u64], path: &[u64]) -> Vec<usize> {
    let keys: Vec<Vec<u64>> = children.iter().map(|&c| class_key(c, path)).collect();
    (0..children.len())
        .map(|i| (0..=i).find(|&j| keys[j] == keys[i]).unwrap_or(i))
        .collect()
}

/// Smallest image of the combination under all input permutations, with the
/// sets sorted so that their order does not matter.
fn canonical_form(k: usize, sets: &[u64]) -> Vec<u64> {
    let mut perm: Vec<usize> = (0..k).collect();
    let mut best: Option<Vec<u64>> = None;
    loop {
        let mut image: Vec<u64> = sets
            .iter()
            .map(|&s| bits_of(s).into_iter().fold(0u64, |m, i| m | (1 << perm[i])))
            .collect();
        image.sort_unstable();
        if best.as_ref().map_or(true, |b| image < *b) {
            best = Some(image);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap_or(i);
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Largest `k` accepted by the permutation-based equivalence test.
pub const MAX_EQUIVALENCE_K: usize = 8;

/// Equivalence of combinations up to reordering the sets (keeping sizes) and
/// renaming the inputs.
pub fn equivalent_combinations(a: &InputCombination, b: &InputCombination) -> Result<bool> {
    let (mut sa, mut sb) = (a.sizes(), b.sizes());
    sa.sort_unstable();
    sb.sort_unstable();
    if a.k() != b.k() || sa != sb {
        return Err(Error::InvalidParameter(format!(
            "combinations {a} and {b} come from different partitions"
        )));
    }
    if a.k() > MAX_EQUIVALENCE_K {
        return Err(Error::InvalidParameter(format!(
            "equivalence test supports k <= {MAX_EQUIVALENCE_K}"
        )));
    }
    Ok(canonical_form(a.k(), a.sets()) == canonical_form(b.k(), b.sets()))
}

/// Canonical representative used to bucket combinations by equivalence class.
pub fn equivalence_key(c: &InputCombination) -> Result<Vec<u64>> {
    if c.k() > MAX_EQUIVALENCE_K {
        return Err(Error::InvalidParameter(format!(
            "equivalence test supports k <= {MAX_EQUIVALENCE_K}"
        )));
    }
    Ok(canonical_form(c.k(), c.sets()))
}

#[derive(Clone, Debug)]
struct Frame {
    /// Index into `CombinationGenerator::children`.
    level: usize,
    classes: Vec<usize>,
    /// Labels barred at this level by earlier classes higher up in the run.
    forbidden: Vec<u64>,
    /// Union of the labels chosen above this level.
    covered: u64,
    next: usize,
}

/// Lazy depth-first walk of the combination tree.
#[derive(Clone, Debug)]
pub struct CombinationGenerator {
    k: usize,
    sizes: Vec<usize>,
    reduce: bool,
    run_start: Vec<usize>,
    /// `remaining[t]`: total size of levels `t..`.
    remaining: Vec<usize>,
    children: Vec<Vec<u64>>,
    path: Vec<u64>,
    frames: Vec<Frame>,
}

/// Combinations of `parts` over `[k]` whose sets cover every input.
///
/// With `reduce` the first set is fixed to the lowest indices and sibling
/// pruning is applied. Without it the first set ranges over all subsets too.
pub fn reduced_generator(
    parts: &[usize],
    k: usize,
    order: CombinationOrder,
    reduce: bool,
) -> CombinationGenerator {
    let sizes = arrange(parts, k, order);
    let r = sizes.len();
    let valid = r > 0 && k > 0 && k <= 64 && sizes.iter().all(|&n| (1..=k).contains(&n));
    let mut run_start = vec![0; r];
    for t in 1..r {
        run_start[t] = if sizes[t] == sizes[t - 1] { run_start[t - 1] } else { t };
    }
    let mut remaining = vec![0; r + 1];
    for t in (0..r).rev() {
        remaining[t] = remaining[t + 1] + sizes[t];
    }
    let children: Vec<Vec<u64>> = if valid {
        sizes
            .iter()
            .enumerate()
            .map(|(t, &n)| {
                if t == 0 && reduce {
                    vec![mask(n)]
                } else {
                    subsets_lex(k, n)
                }
            })
            .collect()
    } else {
        Vec::new()
    };
    let mut generator = CombinationGenerator {
        k,
        sizes,
        reduce,
        run_start,
        remaining,
        children,
        path: Vec::with_capacity(r),
        frames: Vec::with_capacity(r),
    };
    if valid {
        let n0 = generator.children[0].len();
        generator.frames.push(Frame {
            level: 0,
            classes: (0..n0).collect(),
            forbidden: Vec::new(),
            covered: 0,
            next: 0,
        });
    }
    generator
}

impl CombinationGenerator {
    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    fn admissible(&self, frame: &Frame, i: usize) -> bool {
        let label = self.children[frame.level][i];
        if self.reduce && (frame.classes[i] != i || frame.forbidden.contains(&label)) {
            return false;
        }
        // Skip subtrees that can no longer cover all inputs.
        let covered = frame.covered | label;
        let missing = self.k - covered.count_ones() as usize;
        missing <= self.remaining[frame.level + 1]
    }
}

impl Iterator for CombinationGenerator {
    type Item = InputCombination;

    fn next(&mut self) -> Option<InputCombination> {
        let r = self.sizes.len();
        loop {
            let frame = self.frames.last()?;
            let t = frame.level;
            let count = self.children[t].len();
            let pick = (frame.next..count).find(|&i| self.admissible(frame, i));
            // The label for this level is re-chosen, so drop the old one.
            self.path.truncate(t);
            let Some(i) = pick else {
                self.frames.pop();
                continue;
            };
            let label = self.children[t][i];
            let covered = frame.covered | label;
            let next_forbidden = if self.reduce && t + 1 < r && self.run_start[t + 1] != t + 1 {
                let mut f = frame.forbidden.clone();
                for (j, &c) in frame.classes.iter().enumerate() {
                    if c < i {
                        f.push(self.children[t][j]);
                    }
                }
                Some(f)
            } else {
                None
            };
            self.frames.last_mut().expect("frame exists").next = i + 1;
            self.path.push(label);
            if t + 1 == r {
                return Some(InputCombination {
                    k: self.k,
                    sets: self.path.clone(),
                });
            }
            let kids = &self.children[t + 1];
            let classes = if self.reduce {
                sibling_classes(kids, &self.path)
            } else {
                (0..kids.len()).collect()
            };
            let forbidden = next_forbidden.unwrap_or_default();
            self.frames.push(Frame {
                level: t + 1,
                classes,
                forbidden,
                covered,
                next: 0,
            });
        }
    }
}

/// Number of combinations the generator emits.
pub fn count_combinations(parts: &[usize], k: usize, order: CombinationOrder, reduce: bool) -> u64 {
    reduced_generator(parts, k, order, reduce).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;

    fn comb(k: usize, sets: &[&[usize]]) -> InputCombination {
        let sets = sets
            .iter()
            .map(|s| s.iter().fold(0u64, |m, &i| m | (1 << (i - 1))))
            .collect();
        InputCombination::new(k, sets).unwrap()
    }

    fn m(ix: &[usize]) -> u64 {
        ix.iter().fold(0, |m, &i| m | (1 << (i - 1)))
    }

    #[test]
    fn worked_equivalence_examples() {
        let a = comb(3, &[&[1, 2], &[1, 3], &[2]]);
        let b = comb(3, &[&[1, 2], &[1, 3], &[3]]);
        let c = comb(3, &[&[1, 2], &[1, 3], &[1]]);
        assert!(equivalent_combinations(&a, &b).unwrap());
        assert!(!equivalent_combinations(&a, &c).unwrap());
        assert!(equivalent_combinations(&a, &a).unwrap());
        let d = comb(3, &[&[1, 2], &[1], &[2]]);
        assert!(equivalent_combinations(&a, &d).is_err());
    }

    #[test]
    fn worked_sibling_examples() {
        let path = [m(&[1, 2, 3]), m(&[2, 3])];
        assert!(!sibling_equivalent(&path, m(&[1]), m(&[2])).unwrap());
        assert!(sibling_equivalent(&path, m(&[3]), m(&[2])).unwrap());
        assert!(sibling_equivalent(&path, m(&[1, 3]), m(&[1, 3])).unwrap());
        assert!(sibling_equivalent(&path, m(&[1]), m(&[1, 2])).is_err());
    }

    #[test]
    fn two_one_one_over_two_inputs() {
        let on: Vec<String> = reduced_generator(&[2, 1, 1], 2, CombinationOrder::ComponentSizeDesc, true)
            .map(|c| c.to_string())
            .collect();
        assert_eq!(on, vec!["(1,2)(1)(1)", "(1,2)(1)(2)"]);
        assert_eq!(count_combinations(&[2, 1, 1], 2, CombinationOrder::ComponentSizeDesc, false), 4);
    }

    #[test]
    fn single_part() {
        let all: Vec<_> = reduced_generator(&[4], 4, CombinationOrder::ComponentSizeDesc, true).collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].sets(), &[0b1111]);
        assert_eq!(count_combinations(&[3], 4, CombinationOrder::ComponentSizeDesc, true), 0);
    }

    #[test]
    fn unreduced_counts_only_covering_tuples() {
        // (1)(1)(1) over k = 2: 8 tuples, minus the two that miss an input.
        assert_eq!(count_combinations(&[1, 1, 1], 2, CombinationOrder::ComponentSizeDesc, false), 6);
    }

    #[test]
    fn subsets_in_tuple_order() {
        let s: Vec<String> = subsets_lex(4, 2)
            .into_iter()
            .map(|x| InputCombination::new(4, vec![x]).unwrap().to_string())
            .collect();
        assert_eq!(s, ["(1,2)", "(1,3)", "(1,4)", "(2,3)", "(2,4)", "(3,4)"]);
    }

    #[test]
    fn arrangement_orders() {
        assert_eq!(arrange(&[3, 2, 1], 4, CombinationOrder::ComponentSizeDesc), vec![3, 2, 1]);
        // C(4,2)=6 > C(4,3)=C(4,1)=4; the tie goes to the larger part.
        assert_eq!(arrange(&[3, 2, 1], 4, CombinationOrder::CombinationCountDesc), vec![2, 3, 1]);
    }

    #[test]
    fn display_and_parse_of_orders() {
        assert_eq!(comb(3, &[&[1, 2], &[3]]).to_string(), "(1,2)(3)");
        assert_eq!("size".parse::<CombinationOrder>().unwrap(), CombinationOrder::ComponentSizeDesc);
        assert!("other".parse::<CombinationOrder>().is_err());
    }
}
