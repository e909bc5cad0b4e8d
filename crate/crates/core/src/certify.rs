//! End-to-end checks on a finished netlist: structure, agreement with the
//! declared generator, linearity, injectivity, distance, independence and the
//! fault simulations.

use std::fmt;

use serde::Serialize;

use crate::faultcheck::{self, FaultReport};
use crate::gf2::{self, ParityGeneratorMatrix};
use crate::netlist::Netlist;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub k: usize,
    pub r: usize,
    pub d: usize,
    pub checks: Vec<Check>,
    pub detection: Option<FaultReport>,
    pub correction: Option<FaultReport>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{verdict} k={} r={} d={}", self.k, self.r, self.d)?;
        if let Some(det) = &self.detection {
            write!(f, " detect_checked={}", det.detect_checked)?;
        }
        if let Some(cor) = &self.correction {
            write!(f, " correct_checked={}", cor.correct_checked)?;
        }
        let failed: Vec<&str> = self.failures().map(|c| c.name).collect();
        if !failed.is_empty() {
            write!(f, " failed={}", failed.join(","))?;
        }
        Ok(())
    }
}

fn bits(v: u64, width: usize) -> String {
    (0..width).map(|i| if (v >> i) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Runs every check; never stops early so that all failures are listed.
pub fn certify(netlist: &Netlist, d: usize) -> Certificate {
    let mut cert = Certificate {
        k: netlist.k,
        r: netlist.r,
        d,
        checks: Vec::new(),
        detection: None,
        correction: None,
    };
    let push = |cert: &mut Certificate, name, passed, detail: String| {
        cert.checks.push(Check { name, passed, detail });
    };

    if let Err(e) = netlist.validate() {
        push(&mut cert, "structure", false, e.to_string());
        return cert;
    }
    push(&mut cert, "structure", true, format!("{} vertices", netlist.vertices.len()));

    match netlist.shared_gates() {
        Ok(shared) if shared.is_empty() => push(&mut cert, "independence", true, String::new()),
        Ok(shared) => push(&mut cert, "independence", false, format!("gates {shared:?} feed several outputs")),
        Err(e) => push(&mut cert, "independence", false, e.to_string()),
    }

    let table = match netlist.simulate_all() {
        Ok(t) => t,
        Err(e) => {
            push(&mut cert, "simulation", false, e.to_string());
            return cert;
        }
    };
    let k = netlist.k;

    // The matrix the circuit actually implements, read off the unit messages.
    let derived: Vec<u64> = (0..netlist.r)
        .map(|j| (0..k).fold(0u64, |acc, i| acc | ((table[1 << i] >> j) & 1) << i))
        .collect();
    let implemented = match ParityGeneratorMatrix::new(k, derived.clone()) {
        Ok(g) => g,
        Err(e) => {
            push(&mut cert, "linearity", false, e.to_string());
            return cert;
        }
    };

    match netlist.declared_columns() {
        Ok(cols) if cols == derived => push(&mut cert, "equivalence", true, String::new()),
        Ok(cols) => {
            let declared = ParityGeneratorMatrix::new(k, cols);
            let bad = declared.ok().and_then(|g| {
                (0..table.len() as u64).find(|&x| g.parity_bits(x) != table[x as usize])
            });
            let detail = match bad {
                Some(x) => format!("message {} gives {}", bits(x, k), bits(table[x as usize], netlist.r)),
                None => "declared columns differ from the circuit".into(),
            };
            push(&mut cert, "equivalence", false, detail)
        }
        Err(e) => push(&mut cert, "equivalence", false, e.to_string()),
    }

    match (0..table.len() as u64).find(|&x| implemented.parity_bits(x) != table[x as usize]) {
        None => push(&mut cert, "linearity", true, String::new()),
        Some(x) => push(
            &mut cert,
            "linearity",
            false,
            format!("message {} is not the sum of its unit images", bits(x, k)),
        ),
    }

    let injective = gf2::is_injective(&implemented);
    push(
        &mut cert,
        "injectivity",
        injective,
        format!("rank {} of {k}", gf2::rank(implemented.columns())),
    );

    // Lightest nonzero codeword, found directly from the simulated table.
    let (weight, witness) = (1..table.len() as u64)
        .map(|x| (x.count_ones() + table[x as usize].count_ones(), x))
        .min()
        .unwrap_or((u32::MAX, 0));
    let detail = if table.len() > 1 {
        format!("distance {weight}, lightest message {}", bits(witness, k))
    } else {
        String::new()
    };
    push(&mut cert, "distance", weight as usize >= d, detail);

    let det = faultcheck::verify_detection(&implemented, d);
    push(
        &mut cert,
        "detection",
        det.passed(),
        format!("{} checked, {} failures", det.detect_checked, det.failure_count),
    );
    let cor = faultcheck::verify_correction(&implemented, d);
    push(
        &mut cert,
        "correction",
        cor.passed(),
        format!("{} checked, {} failures", cor.correct_checked, cor.failure_count),
    );
    cert.detection = Some(det);
    cert.correction = Some(cor);
    cert
}
