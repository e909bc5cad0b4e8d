//! Bit vectors over GF(2) and the code-theoretic primitives built on them.
//!
//! Vectors are written 1-indexed; component `x_i` lives at bit `i - 1`.
//! Everything in this crate uses 0-based bit positions internally and only
//! switches to 1-based indices when printing.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Widest word supported; rows of a parity generator matrix fit in one `u64`.
pub const MAX_WIDTH: usize = 64;

#[inline]
pub(crate) fn mask(width: usize) -> u64 {
    if width >= 64 {
        u64::MAX
    } else {
        (1u64 << width) - 1
    }
}

#[inline]
pub(crate) fn parity(x: u64) -> u64 {
    (x.count_ones() & 1) as u64
}

/// Fixed-width bit vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    bits: u64,
    width: usize,
}

impl Word {
    pub fn new(bits: u64, width: usize) -> Result<Self> {
        if width == 0 || width > MAX_WIDTH {
            return Err(Error::InvalidParameter(format!(
                "word width {width} outside 1..={MAX_WIDTH}"
            )));
        }
        if bits & !mask(width) != 0 {
            return Err(Error::InvalidParameter(format!(
                "value {bits:#x} does not fit in {width} bits"
            )));
        }
        Ok(Word { bits, width })
    }

    pub fn zero(width: usize) -> Result<Self> {
        Word::new(0, width)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    pub fn width(self) -> usize {
        self.width
    }

    /// Bit at 0-based position `i`.
    pub fn get(self, i: usize) -> bool {
        i < self.width && (self.bits >> i) & 1 == 1
    }

    /// `self ‖ tail`: `self` occupies the low bits, `tail` follows.
    pub fn concat(self, tail: Word) -> Result<Word> {
        let width = self.width + tail.width;
        if width > MAX_WIDTH {
            return Err(Error::InvalidParameter(format!(
                "concatenation of width {width} exceeds {MAX_WIDTH}"
            )));
        }
        Ok(Word {
            bits: self.bits | (tail.bits << self.width),
            width,
        })
    }

    pub fn xor(self, other: Word) -> Result<Word> {
        if self.width != other.width {
            return Err(Error::WidthMismatch {
                expected: self.width,
                actual: other.width,
            });
        }
        Ok(Word {
            bits: self.bits ^ other.bits,
            width: self.width,
        })
    }
}

/// Prints component `x_1` first.
impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.width {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

pub fn hamming_weight(x: Word) -> u32 {
    x.bits.count_ones()
}

/// Message size, distance and parity size of a code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeParams {
    pub k: usize,
    pub d: usize,
    pub r: usize,
    pub n: usize,
}

impl CodeParams {
    pub fn new(k: usize, d: usize, r: usize) -> Result<Self> {
        if k == 0 || k > MAX_WIDTH {
            return Err(Error::InvalidParameter(format!("k = {k} outside 1..={MAX_WIDTH}")));
        }
        if d < 2 {
            return Err(Error::InvalidParameter(format!("d = {d} must be at least 2")));
        }
        if r < k.max(d - 1) {
            return Err(Error::InvalidParameter(format!(
                "r = {r} below max(k, d-1) = {}",
                k.max(d - 1)
            )));
        }
        Ok(CodeParams { k, d, r, n: k + r })
    }
}

/// The k×r matrix `G` with codeword `x ‖ xG`, stored column-major.
///
/// Column `j` is the characteristic vector of the message bits feeding parity `j`.
/// Row `i` is bit `i` across all columns.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParityGeneratorMatrix {
    k: usize,
    columns: Vec<u64>,
}

impl ParityGeneratorMatrix {
    pub fn new(k: usize, columns: Vec<u64>) -> Result<Self> {
        if k == 0 || k > MAX_WIDTH {
            return Err(Error::InvalidParameter(format!("k = {k} outside 1..={MAX_WIDTH}")));
        }
        if columns.is_empty() {
            return Err(Error::InvalidParameter("matrix needs at least one column".into()));
        }
        if k + columns.len() > MAX_WIDTH {
            return Err(Error::InvalidParameter(format!(
                "codeword length {} exceeds {MAX_WIDTH}",
                k + columns.len()
            )));
        }
        if let Some(c) = columns.iter().find(|&&c| c & !mask(k) != 0) {
            return Err(Error::InvalidParameter(format!(
                "column {c:#x} has bits beyond k = {k}"
            )));
        }
        Ok(ParityGeneratorMatrix { k, columns })
    }

    /// Build from rows given as r-bit words (bit `j` of row `i` is `G[i][j]`).
    pub fn from_rows(r: usize, rows: &[u64]) -> Result<Self> {
        let columns = (0..r)
            .map(|j| {
                rows.iter()
                    .enumerate()
                    .fold(0u64, |c, (i, row)| c | (((row >> j) & 1) << i))
            })
            .collect();
        ParityGeneratorMatrix::new(rows.len(), columns)
    }

    pub fn identity(k: usize) -> Result<Self> {
        ParityGeneratorMatrix::new(k, (0..k).map(|i| 1u64 << i).collect())
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.columns.len()
    }

    pub fn columns(&self) -> &[u64] {
        &self.columns
    }

    pub fn entry(&self, row: usize, col: usize) -> bool {
        (self.columns[col] >> row) & 1 == 1
    }

    /// Row `i` as an r-bit integer.
    pub fn row(&self, i: usize) -> u64 {
        self.columns
            .iter()
            .enumerate()
            .fold(0, |acc, (j, c)| acc | (((c >> i) & 1) << j))
    }

    /// Total number of ones, i.e. the individual-input count of the XOR circuit.
    pub fn support_sum(&self) -> usize {
        self.columns.iter().map(|c| c.count_ones() as usize).sum()
    }

    /// Parity bits `msg · G` on raw bits.
    #[inline]
    pub fn parity_bits(&self, msg: u64) -> u64 {
        self.columns
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &c)| acc | (parity(msg & c) << j))
    }
}

impl fmt::Display for ParityGeneratorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.k {
            for j in 0..self.r() {
                f.write_str(if self.entry(i, j) { "1" } else { "0" })?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Parses the debug text form: k lines of r characters `0`/`1`.
impl FromStr for ParityGeneratorMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lines: Vec<&str> = s.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
        let r = lines
            .first()
            .map(|l| l.chars().count())
            .ok_or_else(|| Error::Parse("empty matrix".into()))?;
        if r == 0 || r > MAX_WIDTH {
            return Err(Error::Parse(format!("row width {r} outside 1..={MAX_WIDTH}")));
        }
        if lines.len() > MAX_WIDTH {
            return Err(Error::Parse(format!("{} rows exceed {MAX_WIDTH}", lines.len())));
        }
        let mut rows = Vec::with_capacity(lines.len());
        for (i, line) in lines.iter().enumerate() {
            let mut row = 0u64;
            let mut len = 0;
            for (j, ch) in line.chars().enumerate() {
                match ch {
                    '0' => {}
                    '1' if j < MAX_WIDTH => row |= 1 << j,
                    '1' => {}
                    other => {
                        return Err(Error::Parse(format!(
                            "row {}: unexpected character {other:?}",
                            i + 1
                        )))
                    }
                }
                len += 1;
            }
            if len != r {
                return Err(Error::Parse(format!(
                    "row {} has {len} entries, expected {r}",
                    i + 1
                )));
            }
            rows.push(row);
        }
        ParityGeneratorMatrix::from_rows(r, &rows).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Codeword `msg ‖ msg·G` of width k + r.
pub fn encode(g: &ParityGeneratorMatrix, msg: Word) -> Result<Word> {
    if msg.width() != g.k() {
        return Err(Error::WidthMismatch {
            expected: g.k(),
            actual: msg.width(),
        });
    }
    msg.concat(Word::new(g.parity_bits(msg.bits()), g.r())?)
}

/// Least weight over all nonzero codewords.
pub fn min_distance(g: &ParityGeneratorMatrix) -> u32 {
    let k = g.k();
    let mut best = u32::MAX;
    // Gray-code walk keeps the parity update to one XOR per message.
    let rows: Vec<u64> = (0..k).map(|i| g.row(i)).collect();
    let mut p = 0u64;
    for step in 1u64..(1u64 << k) {
        let bit = step.trailing_zeros() as usize;
        p ^= rows[bit];
        let msg = step ^ (step >> 1);
        let w = msg.count_ones() + p.count_ones();
        if w < best {
            best = w;
        }
    }
    best
}

/// Whether `min_distance(g) >= d`, stopping at the first light codeword.
pub fn distance_at_least(g: &ParityGeneratorMatrix, d: u32) -> bool {
    let k = g.k();
    let rows: Vec<u64> = (0..k).map(|i| g.row(i)).collect();
    let mut p = 0u64;
    for step in 1u64..(1u64 << k) {
        let bit = step.trailing_zeros() as usize;
        p ^= rows[bit];
        let msg = step ^ (step >> 1);
        if msg.count_ones() + p.count_ones() < d {
            return false;
        }
    }
    true
}

/// GF(2) rank of a set of vectors.
pub fn rank(vectors: &[u64]) -> usize {
    let mut basis = [0u64; 64];
    let mut rank = 0;
    for &v in vectors {
        let mut x = v;
        while x != 0 {
            let top = 63 - x.leading_zeros() as usize;
            if basis[top] == 0 {
                basis[top] = x;
                rank += 1;
                break;
            }
            x ^= basis[top];
        }
    }
    rank
}

/// True iff no nonzero message maps to the all-zero parity.
pub fn is_injective(g: &ParityGeneratorMatrix) -> bool {
    rank(g.columns()) == g.k()
}

/// Truth table of a single-output function; entry `a` is the value at the
/// assignment whose bit `i` is input `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruthTable {
    arity: usize,
    values: Vec<bool>,
}

impl TruthTable {
    pub fn new(arity: usize, values: Vec<bool>) -> Result<Self> {
        if arity > 20 {
            return Err(Error::InvalidParameter(format!("truth table arity {arity} too large")));
        }
        if values.len() != 1 << arity {
            return Err(Error::MalformedTable {
                arity,
                expected: 1 << arity,
                actual: values.len(),
            });
        }
        Ok(TruthTable { arity, values })
    }

    pub fn from_fn(arity: usize, f: impl Fn(u64) -> bool) -> Result<Self> {
        TruthTable::new(arity, (0..1u64 << arity).map(f).collect())
    }

    /// XOR of the inputs in `mask`.
    pub fn linear(arity: usize, mask: u64) -> Result<Self> {
        TruthTable::from_fn(arity, |a| parity(a & mask) == 1)
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn eval(&self, assignment: u64) -> bool {
        self.values[assignment as usize]
    }

    /// Assignments where the function is true.
    pub fn on_set(&self) -> impl Iterator<Item = u64> + '_ {
        self.values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v)
            .map(|(a, _)| a as u64)
    }

    /// If the function is linear with f(0) = 0, its XOR mask.
    pub fn linear_mask(&self) -> Option<u64> {
        if self.values[0] {
            return None;
        }
        let m = (0..self.arity).fold(0u64, |m, i| m | ((self.values[1 << i] as u64) << i));
        (0..self.values.len() as u64)
            .all(|a| self.values[a as usize] == (parity(a & m) == 1))
            .then_some(m)
    }
}

/// 0-based inputs whose flip changes the output for some assignment.
pub fn semantic_support(f: &TruthTable) -> Vec<usize> {
    (0..f.arity())
        .filter(|&i| {
            let bit = 1u64 << i;
            (0..f.values().len() as u64)
                .filter(|a| a & bit == 0)
                .any(|a| f.eval(a) != f.eval(a | bit))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c84() -> ParityGeneratorMatrix {
        "1100\n1010\n1110\n1001".parse().unwrap()
    }

    fn c52() -> ParityGeneratorMatrix {
        "110\n101".parse().unwrap()
    }

    fn w(s: &str) -> Word {
        let bits = s
            .chars()
            .enumerate()
            .fold(0u64, |b, (i, c)| b | (((c == '1') as u64) << i));
        Word::new(bits, s.len()).unwrap()
    }

    #[test]
    fn weights() {
        assert_eq!(hamming_weight(Word::zero(7).unwrap()), 0);
        assert_eq!(hamming_weight(w("10110")), 3);
        assert_eq!(hamming_weight(w("10001100")), 3);
    }

    #[test]
    fn word_rejects_stray_bits() {
        assert!(Word::new(0b100, 2).is_err());
        assert!(Word::new(0, 0).is_err());
        assert!(Word::new(0, 65).is_err());
    }

    #[test]
    fn encode_examples() {
        assert_eq!(encode(&c52(), w("10")).unwrap(), w("10110"));
        assert_eq!(encode(&c84(), w("0001")).unwrap(), w("00011001"));
        assert_eq!(encode(&c84(), w("0000")).unwrap(), w("00000000"));
        assert!(matches!(
            encode(&c84(), w("000")),
            Err(Error::WidthMismatch { expected: 4, actual: 3 })
        ));
    }

    #[test]
    fn distances() {
        assert_eq!(min_distance(&c84()), 3);
        assert_eq!(min_distance(&c52()), 3);
        for k in 1..=6 {
            assert_eq!(min_distance(&ParityGeneratorMatrix::identity(k).unwrap()), 2);
        }
        assert!(distance_at_least(&c84(), 3));
        assert!(!distance_at_least(&c84(), 4));
    }

    #[test]
    fn injectivity() {
        assert!(is_injective(&c52()));
        assert!(is_injective(&c84()));
        assert!(!is_injective(&ParityGeneratorMatrix::new(3, vec![0, 0, 0, 0]).unwrap()));
        assert!(!is_injective(&ParityGeneratorMatrix::new(2, vec![3, 3, 3]).unwrap()));
    }

    #[test]
    fn text_form_round_trips() {
        let g = c84();
        assert_eq!(g.to_string(), "1100\n1010\n1110\n1001\n");
        assert_eq!(g.to_string().parse::<ParityGeneratorMatrix>().unwrap(), g);
        assert_eq!(g.row(3), 0b1001);
        assert!("10\n1".parse::<ParityGeneratorMatrix>().is_err());
        assert!("1x".parse::<ParityGeneratorMatrix>().is_err());
        assert!("".parse::<ParityGeneratorMatrix>().is_err());
    }

    #[test]
    fn supports() {
        let xor = TruthTable::linear(2, 0b11).unwrap();
        assert_eq!(semantic_support(&xor), vec![0, 1]);
        let zero = TruthTable::from_fn(3, |_| false).unwrap();
        assert!(semantic_support(&zero).is_empty());
        let x1 = TruthTable::from_fn(3, |a| a & 1 == 1).unwrap();
        assert_eq!(semantic_support(&x1), vec![0]);
        assert!(matches!(
            TruthTable::new(2, vec![false; 3]),
            Err(Error::MalformedTable { .. })
        ));
    }

    #[test]
    fn linear_mask_detection() {
        assert_eq!(TruthTable::linear(4, 0b1010).unwrap().linear_mask(), Some(0b1010));
        let or = TruthTable::from_fn(2, |a| a != 0).unwrap();
        assert_eq!(or.linear_mask(), None);
    }

    #[test]
    fn params_bounds() {
        assert!(CodeParams::new(3, 5, 3).is_err());
        assert!(CodeParams::new(3, 1, 3).is_err());
        assert_eq!(CodeParams::new(3, 3, 4).unwrap().n, 7);
    }
}
