//! Greedy lexicographic code construction, the baseline for the search.

use crate::error::{Error, Result};
use crate::gf2::{self, semantic_support, CodeParams, ParityGeneratorMatrix, TruthTable, MAX_WIDTH};

#[derive(Clone, Debug)]
pub struct GreedyResult {
    pub params: CodeParams,
    pub pgm: ParityGeneratorMatrix,
    /// `(message, parity)` for every message in ascending order.
    pub truth_table: Vec<(u64, u64)>,
    pub n_base: usize,
    pub r_base: usize,
}

impl GreedyResult {
    /// One line per message, `"msg_bits parity_bits"`, first component leftmost.
    pub fn dump_truth_table(&self) -> String {
        let bits = |v: u64, w: usize| -> String {
            (0..w).map(|i| if (v >> i) & 1 == 1 { '1' } else { '0' }).collect()
        };
        self.truth_table
            .iter()
            .map(|&(x, p)| format!("{} {}\n", bits(x, self.params.k), bits(p, self.r_base)))
            .collect()
    }

    /// Per-output truth tables of the parity map.
    pub fn functions(&self) -> Vec<TruthTable> {
        (0..self.r_base)
            .map(|j| {
                let values = self.truth_table.iter().map(|&(_, p)| (p >> j) & 1 == 1).collect();
                TruthTable::new(self.params.k, values).expect("table has 2^k rows")
            })
            .collect()
    }
}

fn bit_length(x: u64) -> usize {
    64 - x.leading_zeros() as usize
}

/// Each message in ascending order receives the least parity that keeps
/// distance at least `d` to every earlier codeword and differs from every
/// earlier parity.
pub fn greedy_synthesize(k: usize, d: usize) -> Result<GreedyResult> {
    if k == 0 || k > MAX_WIDTH {
        return Err(Error::InvalidParameter(format!("k = {k} outside 1..={MAX_WIDTH}")));
    }
    if k > 24 {
        return Err(Error::InvalidParameter(format!(
            "k = {k}: greedy table of 2^k rows is not tractable"
        )));
    }
    if d < 2 {
        return Err(Error::InvalidParameter(format!("d = {d} must be at least 2")));
    }
    let d = d as u32;
    let mut table: Vec<(u64, u64)> = Vec::with_capacity(1 << k);
    for x in 0..1u64 << k {
        let mut p = 0u64;
        // Leading zeros carry no weight, so comparing parities as integers is
        // the same as zero-extending them to a common width.
        while table
            .iter()
            .any(|&(y, q)| p == q || (x ^ y).count_ones() + (p ^ q).count_ones() < d)
        {
            p = p.checked_add(1).ok_or(Error::ParityOverflow { message: x })?;
        }
        table.push((x, p));
    }
    let r = table.iter().map(|&(_, p)| bit_length(p)).max().unwrap_or(0);
    if k + r > MAX_WIDTH {
        return Err(Error::ParityOverflow {
            message: table.iter().max_by_key(|e| e.1).map(|e| e.0).unwrap_or(0),
        });
    }

    // Read G off the unit messages, then confirm that it reproduces the table.
    let rows: Vec<u64> = (0..k).map(|i| table[1 << i].1).collect();
    let pgm = ParityGeneratorMatrix::from_rows(r, &rows)?;
    for &(x, p) in &table {
        if pgm.parity_bits(x) != p {
            let a = 1u64 << x.trailing_zeros();
            return Err(Error::NonLinearLexicode { a, b: x ^ a });
        }
    }
    debug_assert!(gf2::distance_at_least(&pgm, d));

    let mut result = GreedyResult {
        params: CodeParams::new(k, d as usize, r)?,
        pgm,
        truth_table: table,
        n_base: 0,
        r_base: r,
    };
    result.n_base = individual_inputs(&result.functions());
    Ok(result)
}

/// Sum over outputs of the number of inputs each one actually depends on.
pub fn individual_inputs(functions: &[TruthTable]) -> usize {
    functions.iter().map(|f| semantic_support(f).len()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_baselines() {
        let g = greedy_synthesize(1, 2).unwrap();
        assert_eq!((g.n_base, g.r_base), (1, 1));
        let g = greedy_synthesize(2, 3).unwrap();
        assert_eq!((g.n_base, g.r_base), (4, 3));
        let g = greedy_synthesize(3, 3).unwrap();
        assert_eq!((g.n_base, g.r_base), (7, 3));
    }

    #[test]
    fn zero_message_has_zero_parity() {
        for k in 1..=4 {
            for d in 2..=5 {
                let g = greedy_synthesize(k, d).unwrap();
                assert_eq!(g.truth_table[0], (0, 0));
                assert!(gf2::min_distance(&g.pgm) >= d as u32);
                assert!(gf2::is_injective(&g.pgm));
                assert_eq!(g.n_base, g.pgm.support_sum());
            }
        }
    }

    #[test]
    fn dump_format() {
        let g = greedy_synthesize(2, 3).unwrap();
        let dump = g.dump_truth_table();
        let lines: Vec<&str> = dump.lines().collect();
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[0], "00 000");
        assert!(lines.iter().all(|l| l.len() == 6));
    }

    #[test]
    fn counts_inputs() {
        let f = vec![
            TruthTable::linear(2, 0b11).unwrap(),
            TruthTable::linear(2, 0b01).unwrap(),
            TruthTable::linear(2, 0b10).unwrap(),
        ];
        assert_eq!(individual_inputs(&f), 4);
        let id: Vec<_> = (0..4).map(|i| TruthTable::linear(4, 1 << i).unwrap()).collect();
        assert_eq!(individual_inputs(&id), 4);
        let consts = vec![TruthTable::from_fn(3, |_| true).unwrap(); 3];
        assert_eq!(individual_inputs(&consts), 0);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(greedy_synthesize(0, 3).is_err());
        assert!(greedy_synthesize(2, 1).is_err());
        assert!(greedy_synthesize(65, 3).is_err());
    }
}
