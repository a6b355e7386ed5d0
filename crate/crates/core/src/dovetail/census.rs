//! Halting censuses, incompressibility counts, and the busy-beaver table.

use super::{
    cutoff, omega_to_halting, scan_programs, BudgetPolicy, DovetailError, HaltingTable,
    ProgramRunner, ProgramStatus,
};
use crate::bits::BitString;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;

/// Halting counts and the incompressibility census at one length.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Census {
    pub n: usize,
    pub c: usize,
    /// Halting programs of length exactly k, for k = 0..=n.
    pub omega_prime: Vec<u64>,
    /// Halting programs of length at most n.
    pub omega_n: u64,
    /// Strings of length n whose estimated complexity is at least n - c.
    pub incompressible_count: u64,
    /// The counting bound 2^n - 2^(n-c) + 1 the census must meet or beat.
    pub incompressible_bound: u64,
    /// Counts are exact (budgeted semantics, full cutoffs) rather than
    /// budget-limited bounds.
    pub exact: bool,
}

/// Count halting programs by length and the strings of length `n` that no
/// discovered program shorter than `n - c` produces. The estimated
/// complexity only upper-bounds the true one, so the reported count is at
/// least the true incompressible count, which in turn meets the bound.
pub fn census(
    runner: &dyn ProgramRunner,
    policy: BudgetPolicy,
    n: usize,
    c: usize,
    max_phase: u64,
) -> Census {
    let aux = BitString::empty();
    let table = scan_programs(runner, policy, &aux, n, max_phase);

    let mut omega_prime = vec![0u64; n + 1];
    for (p, status) in &table.entries {
        if matches!(status, ProgramStatus::Halts { .. }) {
            omega_prime[p.len()] += 1;
        }
    }
    let omega_n = omega_prime.iter().sum();

    // A string of length n is marked compressible by any halting program of
    // length < n - c that outputs it.
    let short_cap = n.saturating_sub(c); // programs of length < short_cap
    let mut compressible: HashSet<&BitString> = HashSet::new();
    for (p, status) in &table.entries {
        if p.len() >= short_cap {
            continue;
        }
        if let ProgramStatus::Halts { output, .. } = status {
            if output.len() == n {
                compressible.insert(output);
            }
        }
    }
    let incompressible_count = (1u64 << n) - compressible.len() as u64;

    let incompressible_bound = if c >= n {
        1u64 << n
    } else {
        (1u64 << n) - (1u64 << (n - c)) + 1
    };

    Census {
        n,
        c,
        omega_prime,
        omega_n,
        incompressible_count,
        incompressible_bound,
        exact: policy == BudgetPolicy::Budgeted && max_phase >= cutoff(n),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BusyBeaverRow {
    pub n: usize,
    /// Max run time over halting programs of length <= n (0 when none halt).
    pub b: u64,
    pub witness: Option<BitString>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BusyBeaverTable {
    pub rows: Vec<BusyBeaverRow>,
    /// Values are exact under budgeted semantics with full cutoffs;
    /// otherwise they are lower bounds.
    pub exact: bool,
}

/// B(m) for every m <= n.
pub fn busy_beaver(
    runner: &dyn ProgramRunner,
    policy: BudgetPolicy,
    n: usize,
    max_phase: u64,
) -> BusyBeaverTable {
    let aux = BitString::empty();
    let table = scan_programs(runner, policy, &aux, n, max_phase);
    BusyBeaverTable {
        rows: (0..=n).map(|m| bb_row(&table, m)).collect(),
        exact: policy == BudgetPolicy::Budgeted && max_phase >= cutoff(n),
    }
}

fn bb_row(table: &HaltingTable, m: usize) -> BusyBeaverRow {
    let mut best: Option<(u64, &BitString)> = None;
    for (p, status) in &table.entries {
        if p.len() > m {
            continue;
        }
        if let ProgramStatus::Halts { steps, .. } = status {
            if best.map_or(true, |(b, _)| *steps > b) {
                best = Some((*steps, p));
            }
        }
    }
    BusyBeaverRow {
        n: m,
        b: best.map_or(0, |(b, _)| b),
        witness: best.map(|(_, p)| p.clone()),
    }
}

/// Recover B(n) from a claimed n-bit prefix of the halting probability: the
/// prefix pins down the halting table, and the busy-beaver value is its
/// maximal run time.
pub fn bb_from_omega(
    runner: &dyn ProgramRunner,
    policy: BudgetPolicy,
    omega_prefix: &BitString,
    n: usize,
    max_len: usize,
    max_phase: u64,
) -> Result<u64, DovetailError> {
    let recovery = omega_to_halting(runner, policy, omega_prefix, n, max_len, max_phase)?;
    Ok(bb_row(&recovery.table, n).b)
}
