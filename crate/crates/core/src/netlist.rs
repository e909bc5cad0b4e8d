//! Gate-level circuits for coordinate functions.
//!
//! Each output gets its own sub-circuit built from a minimal sum of products:
//! one NOT per negated literal occurrence, a right-nested AND chain per
//! product term and an OR tree over the terms. Only input vertices are
//! shared between outputs.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::feasibility::CoordinateFunctions;
use crate::gf2::TruthTable;

/// `(input index, positive)`; indices are 0-based.
pub type Literal = (usize, bool);

/// Product term with literals in ascending input order. An empty term is the
/// constant 1.
pub type Term = Vec<Literal>;

/// Sum of products over `arity` inputs. No terms means the constant 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SopForm {
    pub arity: usize,
    pub terms: Vec<Term>,
}

impl SopForm {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.iter().any(Vec::is_empty)
    }

    pub fn eval(&self, x: u64) -> bool {
        self.terms
            .iter()
            .any(|t| t.iter().all(|&(i, pos)| ((x >> i) & 1 == 1) == pos))
    }
}

/// Cube with fixed bits `value` outside the don't-care mask `dc`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
struct Implicant {
    value: u64,
    dc: u64,
}

impl Implicant {
    fn covers(self, m: u64) -> bool {
        (m & !self.dc) == self.value
    }

    fn term(self, n: usize) -> Term {
        (0..n)
            .filter(|i| (self.dc >> i) & 1 == 0)
            .map(|i| (i, (self.value >> i) & 1 == 1))
            .collect()
    }
}

fn prime_implicants(minterms: &[u64]) -> Vec<Implicant> {
    let mut current: BTreeSet<Implicant> =
        minterms.iter().map(|&m| Implicant { value: m, dc: 0 }).collect();
    let mut primes = BTreeSet::new();
    while !current.is_empty() {
        let list: Vec<Implicant> = current.iter().copied().collect();
        let mut merged = vec![false; list.len()];
        let mut next = BTreeSet::new();
        for a in 0..list.len() {
            for b in a + 1..list.len() {
                let (x, y) = (list[a], list[b]);
                if x.dc != y.dc {
                    continue;
                }
                let diff = x.value ^ y.value;
                if diff.count_ones() == 1 {
                    merged[a] = true;
                    merged[b] = true;
                    next.insert(Implicant {
                        value: x.value & !diff,
                        dc: x.dc | diff,
                    });
                }
            }
        }
        for (i, imp) in list.iter().enumerate() {
            if !merged[i] {
                primes.insert(*imp);
            }
        }
        current = next;
    }
    primes.into_iter().collect()
}

/// Minimal sum of products by Quine–McCluskey with an exact cover search.
///
/// Among minimum covers, the first one found is kept, where primes are
/// tried in order of the lowest minterm they cover and then of their
/// literal lists.
pub fn quine_mccluskey(f: &TruthTable) -> Result<SopForm> {
    let n = f.arity();
    if n > 8 {
        return Err(Error::InvalidParameter(format!("minimization limited to 8 inputs, got {n}")));
    }
    let minterms: Vec<u64> = f.on_set().collect();
    if minterms.is_empty() {
        return Ok(SopForm { arity: n, terms: Vec::new() });
    }
    let mut primes = prime_implicants(&minterms);
    let key = |p: &Implicant| {
        let low = minterms.iter().copied().find(|&m| p.covers(m)).unwrap_or(u64::MAX);
        (low, p.term(n))
    };
    primes.sort_by_key(key);
    let covers: Vec<Vec<usize>> = minterms
        .iter()
        .map(|&m| (0..primes.len()).filter(|&p| primes[p].covers(m)).collect())
        .collect();
    let mut best: Option<Vec<usize>> = None;
    let mut chosen = Vec::new();
    cover_search(&covers, &primes, &minterms, &mut chosen, &mut best);
    let mut picked = best.expect("primes cover every minterm");
    picked.sort_unstable();
    Ok(SopForm {
        arity: n,
        terms: picked.into_iter().map(|p| primes[p].term(n)).collect(),
    })
}

fn cover_search(
    covers: &[Vec<usize>],
    primes: &[Implicant],
    minterms: &[u64],
    chosen: &mut Vec<usize>,
    best: &mut Option<Vec<usize>>,
) {
    if best.as_ref().is_some_and(|b| chosen.len() >= b.len()) {
        return;
    }
    // Branch on the uncovered minterm with the fewest candidates, so that
    // essential primes are taken first.
    let open = (0..minterms.len())
        .filter(|&i| !chosen.iter().any(|&p| primes[p].covers(minterms[i])))
        .min_by_key(|&i| (covers[i].len(), i));
    let Some(i) = open else {
        *best = Some(chosen.clone());
        return;
    };
    for &p in &covers[i] {
        chosen.push(p);
        cover_search(covers, primes, minterms, chosen, best);
        chosen.pop();
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Input,
    Output,
    Not,
    And,
    Or,
}

impl VertexKind {
    fn is_gate(self) -> bool {
        matches!(self, VertexKind::Not | VertexKind::And | VertexKind::Or)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Vertex {
    pub id: usize,
    pub kind: VertexKind,
    #[serde(default)]
    pub args: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Label of an output vertex with no driver that is tied to a constant.
pub const CONST0_LABEL: &str = "const0";
pub const CONST1_LABEL: &str = "const1";

/// Gate-level DAG. Vertex `i` has id `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Netlist {
    pub k: usize,
    pub d: usize,
    pub r: usize,
    /// Column `j` of the generator matrix, first input leftmost.
    pub generator_columns: Vec<String>,
    pub vertices: Vec<Vertex>,
    pub outputs: Vec<usize>,
}

struct Builder {
    vertices: Vec<Vertex>,
}

impl Builder {
    fn add(&mut self, kind: VertexKind, args: Vec<usize>, label: Option<String>) -> usize {
        let id = self.vertices.len();
        self.vertices.push(Vertex { id, kind, args, label });
        id
    }

    fn term(&mut self, term: &Term) -> usize {
        let lits: Vec<usize> = term
            .iter()
            .map(|&(i, pos)| if pos { i } else { self.add(VertexKind::Not, vec![i], None) })
            .collect();
        let (&last, init) = lits.split_last().expect("term has literals");
        init.iter()
            .rev()
            .fold(last, |acc, &l| self.add(VertexKind::And, vec![l, acc], None))
    }

    fn or_tree(&mut self, terms: &[usize]) -> usize {
        if let [a, b, c, e] = *terms {
            let left = self.add(VertexKind::Or, vec![a, b], None);
            let right = self.add(VertexKind::Or, vec![c, e], None);
            return self.add(VertexKind::Or, vec![left, right], None);
        }
        let (&first, rest) = terms.split_first().expect("at least one term");
        rest.iter()
            .fold(first, |acc, &t| self.add(VertexKind::Or, vec![t, acc], None))
    }
}

/// Pattern value with the first input as most significant bit; don't-cares
/// count as zero.
fn pattern_key(term: &Term, n: usize) -> u64 {
    term.iter()
        .filter(|&&(_, pos)| pos)
        .fold(0u64, |acc, &(i, _)| acc | 1 << (n - 1 - i))
}

fn bitstring(v: u64, width: usize) -> String {
    (0..width).map(|i| if (v >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Builds the per-output circuits for `functions`.
pub fn build_circuit(functions: &CoordinateFunctions, d: usize) -> Result<Netlist> {
    let k = functions.k();
    let mut b = Builder {
        vertices: Vec::new(),
    };
    for i in 0..k {
        b.add(VertexKind::Input, Vec::new(), Some(format!("x{i}")));
    }
    let mut outputs = Vec::with_capacity(functions.r());
    for (j, f) in functions.functions.iter().enumerate() {
        let sop = quine_mccluskey(f)?;
        let label = Some(format!("p{j}"));
        let out = if sop.is_zero() {
            b.add(VertexKind::Output, Vec::new(), Some(CONST0_LABEL.into()))
        } else if sop.is_one() {
            b.add(VertexKind::Output, Vec::new(), Some(CONST1_LABEL.into()))
        } else {
            let mut terms = sop.terms.clone();
            terms.sort_by_key(|t| std::cmp::Reverse(pattern_key(t, k)));
            let roots: Vec<usize> = terms.iter().map(|t| b.term(t)).collect();
            let root = b.or_tree(&roots);
            b.add(VertexKind::Output, vec![root], label)
        };
        outputs.push(out);
    }
    let netlist = Netlist {
        k,
        d,
        r: functions.r(),
        generator_columns: functions.pgm.columns().iter().map(|&c| bitstring(c, k)).collect(),
        vertices: b.vertices,
        outputs,
    };
    netlist.validate()?;
    Ok(netlist)
}

impl Netlist {
    /// Checks ids, fan-in, edge directions, acyclicity and the output list.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidNetlist(m));
        if self.k == 0 || self.k > 64 {
            return bad(format!("k = {} outside 1..=64", self.k));
        }
        for (i, v) in self.vertices.iter().enumerate() {
            if v.id != i {
                return bad(format!("vertex at position {i} has id {}", v.id));
            }
            let want = match v.kind {
                VertexKind::Input => 0,
                VertexKind::Not => 1,
                VertexKind::And | VertexKind::Or => 2,
                VertexKind::Output => {
                    let constant = matches!(v.label.as_deref(), Some(CONST0_LABEL | CONST1_LABEL));
                    if constant {
                        0
                    } else {
                        1
                    }
                }
            };
            if v.args.len() != want {
                return bad(format!("vertex {i} ({:?}) has fan-in {}, expected {want}", v.kind, v.args.len()));
            }
            for &a in &v.args {
                match self.vertices.get(a) {
                    None => return bad(format!("vertex {i} refers to missing vertex {a}")),
                    Some(u) if u.kind == VertexKind::Output => {
                        return bad(format!("output vertex {a} drives vertex {i}"))
                    }
                    Some(_) => {}
                }
            }
        }
        let inputs = self.inputs();
        if inputs.len() != self.k {
            return bad(format!("{} input vertices for k = {}", inputs.len(), self.k));
        }
        if self.outputs.len() != self.r {
            return bad(format!("{} outputs listed for r = {}", self.outputs.len(), self.r));
        }
        let mut seen = BTreeSet::new();
        for &o in &self.outputs {
            if self.vertices.get(o).map(|v| v.kind) != Some(VertexKind::Output) {
                return bad(format!("listed output {o} is not an output vertex"));
            }
            if !seen.insert(o) {
                return bad(format!("output {o} listed twice"));
            }
        }
        if self.vertices.iter().filter(|v| v.kind == VertexKind::Output).count() != self.r {
            return bad("unlisted output vertex".into());
        }
        self.topological_order().map(|_| ())
    }

    pub fn inputs(&self) -> Vec<usize> {
        self.vertices
            .iter()
            .filter(|v| v.kind == VertexKind::Input)
            .map(|v| v.id)
            .collect()
    }

    fn topological_order(&self) -> Result<Vec<usize>> {
        // 0 = unvisited, 1 = on stack, 2 = done
        let mut state = vec![0u8; self.vertices.len()];
        let mut order = Vec::with_capacity(self.vertices.len());
        for root in 0..self.vertices.len() {
            if state[root] != 0 {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            state[root] = 1;
            while let Some((v, next)) = stack.pop() {
                if let Some(&a) = self.vertices[v].args.get(next) {
                    stack.push((v, next + 1));
                    match state[a] {
                        0 => {
                            state[a] = 1;
                            stack.push((a, 0));
                        }
                        1 => return Err(Error::InvalidNetlist(format!("cycle through vertex {a}"))),
                        _ => {}
                    }
                } else {
                    state[v] = 2;
                    order.push(v);
                }
            }
        }
        Ok(order)
    }

    /// Parity bits for message `x`, bit `j` for output `j`.
    pub fn evaluate(&self, x: u64) -> Result<u64> {
        let order = self.topological_order()?;
        let mut val = vec![false; self.vertices.len()];
        let mut input_pos: HashMap<usize, usize> = HashMap::new();
        for (pos, id) in self.inputs().into_iter().enumerate() {
            input_pos.insert(id, pos);
        }
        for v in order {
            let vx = &self.vertices[v];
            val[v] = match vx.kind {
                VertexKind::Input => (x >> input_pos[&v]) & 1 == 1,
                VertexKind::Not => !val[vx.args[0]],
                VertexKind::And => val[vx.args[0]] && val[vx.args[1]],
                VertexKind::Or => val[vx.args[0]] || val[vx.args[1]],
                VertexKind::Output => match vx.args.first() {
                    Some(&a) => val[a],
                    None => vx.label.as_deref() == Some(CONST1_LABEL),
                },
            };
        }
        Ok(self
            .outputs
            .iter()
            .enumerate()
            .fold(0u64, |acc, (j, &o)| acc | ((val[o] as u64) << j)))
    }

    /// Parity bits for every message, indexed by message; `k` at most 24.
    pub fn simulate_all(&self) -> Result<Vec<u64>> {
        if self.k > 24 {
            return Err(Error::InvalidParameter(format!("k = {} too large to simulate", self.k)));
        }
        let order = self.topological_order()?;
        let inputs = self.inputs();
        let mut val = vec![false; self.vertices.len()];
        let mut out = Vec::with_capacity(1 << self.k);
        for x in 0..1u64 << self.k {
            for (pos, &id) in inputs.iter().enumerate() {
                val[id] = (x >> pos) & 1 == 1;
            }
            for &v in &order {
                let vx = &self.vertices[v];
                val[v] = match vx.kind {
                    VertexKind::Input => continue,
                    VertexKind::Not => !val[vx.args[0]],
                    VertexKind::And => val[vx.args[0]] && val[vx.args[1]],
                    VertexKind::Or => val[vx.args[0]] || val[vx.args[1]],
                    VertexKind::Output => match vx.args.first() {
                        Some(&a) => val[a],
                        None => vx.label.as_deref() == Some(CONST1_LABEL),
                    },
                };
            }
            out.push(
                self.outputs
                    .iter()
                    .enumerate()
                    .fold(0u64, |acc, (j, &o)| acc | ((val[o] as u64) << j)),
            );
        }
        Ok(out)
    }

    /// Declared generator columns as bit masks.
    pub fn declared_columns(&self) -> Result<Vec<u64>> {
        if self.generator_columns.len() != self.r {
            return Err(Error::InvalidNetlist(format!(
                "{} generator columns for r = {}",
                self.generator_columns.len(),
                self.r
            )));
        }
        self.generator_columns
            .iter()
            .map(|c| {
                if c.len() != self.k {
                    return Err(Error::InvalidNetlist(format!("column {c:?} is not {} bits", self.k)));
                }
                c.chars().enumerate().try_fold(0u64, |acc, (i, ch)| match ch {
                    '0' => Ok(acc),
                    '1' => Ok(acc | 1 << i),
                    _ => Err(Error::InvalidNetlist(format!("bad character {ch:?} in column {c:?}"))),
                })
            })
            .collect()
    }

    /// Number of NOT, AND and OR gates.
    pub fn area(&self) -> usize {
        self.vertices.iter().filter(|v| v.kind.is_gate()).count()
    }

    /// Most edges on any path from an input vertex to an output vertex.
    pub fn longest_len(&self) -> Result<usize> {
        let order = self.topological_order()?;
        let mut dist: Vec<Option<usize>> = vec![None; self.vertices.len()];
        for v in order {
            let vx = &self.vertices[v];
            dist[v] = if vx.kind == VertexKind::Input {
                Some(0)
            } else {
                vx.args.iter().filter_map(|&a| dist[a]).max().map(|d| d + 1)
            };
        }
        Ok(self.outputs.iter().filter_map(|&o| dist[o]).max().unwrap_or(0))
    }

    /// For each vertex, the set of outputs it reaches, as positions in `outputs`.
    fn reached_outputs(&self) -> Result<Vec<BTreeSet<usize>>> {
        let order = self.topological_order()?;
        let mut reach = vec![BTreeSet::new(); self.vertices.len()];
        for (j, &o) in self.outputs.iter().enumerate() {
            reach[o].insert(j);
        }
        for &v in order.iter().rev() {
            let here = reach[v].clone();
            for &a in &self.vertices[v].args {
                reach[a].extend(here.iter().copied());
            }
        }
        Ok(reach)
    }

    /// True iff no gate feeds more than one output.
    pub fn check_independence(&self) -> Result<bool> {
        let reach = self.reached_outputs()?;
        Ok(self
            .vertices
            .iter()
            .all(|v| !v.kind.is_gate() || reach[v.id].len() <= 1))
    }

    /// Gates that feed more than one output.
    pub fn shared_gates(&self) -> Result<Vec<usize>> {
        let reach = self.reached_outputs()?;
        Ok(self
            .vertices
            .iter()
            .filter(|v| v.kind.is_gate() && reach[v.id].len() > 1)
            .map(|v| v.id)
            .collect())
    }

    /// Sum over outputs of the input vertices each one structurally reaches.
    pub fn support_inputs(&self) -> Result<usize> {
        let reach = self.reached_outputs()?;
        Ok(self.inputs().into_iter().map(|i| reach[i].len()).sum())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Parses and validates a JSON netlist.
    pub fn from_json(text: &str) -> Result<Netlist> {
        let n: Netlist = serde_json::from_str(text)?;
        n.validate()?;
        Ok(n)
    }

    /// Structural Verilog using `~`, `&` and `|`.
    pub fn to_verilog(&self) -> String {
        let mut s = String::new();
        let name = |v: &Vertex| -> String {
            match v.kind {
                VertexKind::Input => {
                    let pos = self.inputs().iter().position(|&i| i == v.id).unwrap_or(0);
                    format!("x{pos}")
                }
                VertexKind::Output => {
                    let pos = self.outputs.iter().position(|&o| o == v.id).unwrap_or(0);
                    format!("p{pos}")
                }
                _ => format!("g{}", v.id),
            }
        };
        let _ = writeln!(s, "module code_k{}_d{} (x, p);", self.k, self.d);
        let _ = writeln!(s, "  input [{}:0] x;", self.k - 1);
        let _ = writeln!(s, "  output [{}:0] p;", self.r.max(1) - 1);
        for i in 0..self.k {
            let _ = writeln!(s, "  wire x{i};");
            let _ = writeln!(s, "  assign x{i} = x[{i}];");
        }
        for j in 0..self.r {
            let _ = writeln!(s, "  wire p{j};");
            let _ = writeln!(s, "  assign p[{j}] = p{j};");
        }
        for v in &self.vertices {
            if v.kind.is_gate() {
                let _ = writeln!(s, "  wire {};", name(v));
            }
        }
        for v in &self.vertices {
            let arg = |n: usize| name(&self.vertices[v.args[n]]);
            let rhs = match v.kind {
                VertexKind::Input => continue,
                VertexKind::Not => format!("~{}", arg(0)),
                VertexKind::And => format!("{} & {}", arg(0), arg(1)),
                VertexKind::Or => format!("{} | {}", arg(0), arg(1)),
                VertexKind::Output => match v.args.first() {
                    Some(_) => arg(0),
                    None if v.label.as_deref() == Some(CONST1_LABEL) => "1'b1".into(),
                    None => "1'b0".into(),
                },
            };
            let _ = writeln!(s, "  assign {} = {};", name(v), rhs);
        }
        s.push_str("endmodule\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::ParityGeneratorMatrix;

    fn xor_net(k: usize, columns: Vec<u64>) -> Netlist {
        let f = CoordinateFunctions::from_pgm(ParityGeneratorMatrix::new(k, columns).unwrap()).unwrap();
        build_circuit(&f, 2).unwrap()
    }

    #[test]
    fn qm_examples() {
        let xor = quine_mccluskey(&TruthTable::linear(2, 0b11).unwrap()).unwrap();
        assert_eq!(xor.terms, vec![vec![(0, true), (1, false)], vec![(0, false), (1, true)]]);
        let id = quine_mccluskey(&TruthTable::linear(1, 1).unwrap()).unwrap();
        assert_eq!(id.terms, vec![vec![(0, true)]]);
        let or = quine_mccluskey(&TruthTable::from_fn(2, |a| a != 0).unwrap()).unwrap();
        assert_eq!(or.terms, vec![vec![(0, true)], vec![(1, true)]]);
        assert!(quine_mccluskey(&TruthTable::from_fn(3, |_| false).unwrap()).unwrap().is_zero());
        assert!(quine_mccluskey(&TruthTable::from_fn(3, |_| true).unwrap()).unwrap().is_one());
    }

    #[test]
    fn xor_calibration() {
        let expect = [(0, 1), (5, 4), (17, 6), (47, 12), (119, 21), (287, 38)];
        for (n, &(area, len)) in (1..=6).zip(expect.iter()) {
            let net = xor_net(n, vec![(1u64 << n) - 1]);
            assert_eq!((net.area(), net.longest_len().unwrap()), (area, len), "XOR{n}");
        }
    }

    #[test]
    fn c52_circuit() {
        let net = xor_net(2, vec![0b11, 0b01, 0b10]);
        assert_eq!(net.area(), 5);
        assert_eq!(net.longest_len().unwrap(), 4);
        assert!(net.check_independence().unwrap());
        assert_eq!(net.support_inputs().unwrap(), 4);
        for x in 0..4 {
            let p = net.evaluate(x).unwrap();
            assert_eq!(p, ((x & 1) ^ (x >> 1)) | (x & 1) << 1 | (x >> 1) << 2);
        }
        let v: serde_json::Value = serde_json::from_str(&net.to_json().unwrap()).unwrap();
        let count = |kind: &str| v["vertices"].as_array().unwrap().iter().filter(|x| x["kind"] == kind).count();
        assert_eq!(count("not") + count("and") + count("or"), 5);
        assert_eq!(count("input"), 2);
        // The single-literal outputs count too; the XOR output is one of three.
        assert_eq!(count("output"), 3);
    }

    #[test]
    fn identity_verilog() {
        let net = xor_net(3, vec![1, 2, 4]);
        assert_eq!((net.area(), net.longest_len().unwrap()), (0, 1));
        let v = net.to_verilog();
        assert!(v.contains("module code_k3_d2 (x, p);"));
        assert!(v.contains("input [2:0] x;"));
        assert!(v.contains("output [2:0] p;"));
        assert!(v.contains("assign p0 = x0;"));
    }

    #[test]
    fn json_round_trip() {
        let net = xor_net(3, vec![0b111, 0b011, 0b101, 0b110]);
        let back = Netlist::from_json(&net.to_json().unwrap()).unwrap();
        for x in 0..8 {
            assert_eq!(net.evaluate(x).unwrap(), back.evaluate(x).unwrap());
        }
    }

    #[test]
    fn shared_gate_breaks_independence() {
        let mut net = xor_net(2, vec![0b11, 0b11]);
        // Point the second output at the first output's OR gate.
        let first_driver = net.vertices[net.outputs[0]].args[0];
        let second = net.outputs[1];
        net.vertices[second].args[0] = first_driver;
        assert!(net.validate().is_ok());
        assert!(!net.check_independence().unwrap());
        assert_eq!(net.shared_gates().unwrap().len(), 5);
    }

    #[test]
    fn rejects_malformed() {
        let mut net = xor_net(2, vec![0b11, 0b01]);
        net.vertices[2].args.push(0);
        assert!(net.validate().is_err());
        let mut net = xor_net(2, vec![0b11, 0b01]);
        let o = net.outputs[0];
        net.vertices[2].args[0] = o;
        assert!(net.validate().is_err());
        let mut net = xor_net(2, vec![0b11, 0b01]);
        // AND feeding itself.
        let and = net.vertices.iter().position(|v| v.kind == VertexKind::And).unwrap();
        net.vertices[and].args[1] = and;
        assert!(net.validate().is_err());
        assert!(Netlist::from_json("{").is_err());
        assert!(Netlist::from_json("{\"k\":1}").is_err());
    }

    #[test]
    fn constant_outputs() {
        let f = CoordinateFunctions::from_pgm(ParityGeneratorMatrix::identity(1).unwrap()).unwrap();
        let mut net = build_circuit(&f, 2).unwrap();
        let o = net.outputs[0];
        net.vertices[o].args.clear();
        net.vertices[o].label = Some(CONST0_LABEL.into());
        net.validate().unwrap();
        assert_eq!(net.evaluate(1).unwrap(), 0);
        assert!(net.to_verilog().contains("assign p0 = 1'b0;"));
    }
}
