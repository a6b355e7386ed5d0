//! Halting-probability machinery: the exact accumulator, lower
//! semi-computation, and recovery of halting tables from a claimed prefix
//! of the halting probability.

use super::{
    dovetail, BudgetPolicy, DovetailError, HaltEvent, HaltingTable, ProgramRunner, ProgramStatus,
};
use crate::bits::{BitString, DyadicRational};
use std::collections::BTreeSet;

/// Exact running sum of 2^-|p| over credited halting programs; each program
/// is credited at most once and the sum never exceeds 1 on a prefix-free
/// domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OmegaAccumulator {
    sum: DyadicRational,
    credited: BTreeSet<BitString>,
}

impl Default for OmegaAccumulator {
    fn default() -> Self {
        OmegaAccumulator::new()
    }
}

impl OmegaAccumulator {
    pub fn new() -> Self {
        OmegaAccumulator {
            sum: DyadicRational::zero(),
            credited: BTreeSet::new(),
        }
    }

    /// Credit a halting program. Returns false when already credited.
    pub fn credit(&mut self, p: &BitString) -> bool {
        if !self.credited.insert(p.clone()) {
            return false;
        }
        self.sum += DyadicRational::pow2_neg(p.len() as u64);
        assert!(
            self.sum <= DyadicRational::one(),
            "halting mass exceeded 1: the program set is not prefix-free"
        );
        true
    }

    pub fn sum(&self) -> &DyadicRational {
        &self.sum
    }

    pub fn credited(&self) -> impl Iterator<Item = &BitString> {
        self.credited.iter()
    }

    pub fn credited_count(&self) -> usize {
        self.credited.len()
    }
}

#[derive(Debug, Clone)]
pub struct OmegaRun {
    pub accumulator: OmegaAccumulator,
    pub table: HaltingTable,
    pub events: Vec<HaltEvent>,
    /// Exact sums after each event, in canonical order.
    pub partial_sums: Vec<DyadicRational>,
}

impl OmegaRun {
    pub fn sum(&self) -> &DyadicRational {
        self.accumulator.sum()
    }

    /// First `n` fraction bits of the final sum.
    pub fn prefix_bits(&self, n: u64) -> BitString {
        self.sum().fraction_bits(n)
    }
}

/// Lower semi-compute the halting probability over programs of length
/// <= max_len: every discovered halting program contributes 2^-|p| exactly.
/// Requires a prefix-semantics family, otherwise the sum is meaningless.
pub fn omega_lower(
    runner: &dyn ProgramRunner,
    policy: BudgetPolicy,
    max_len: usize,
    max_phase: u64,
) -> Result<OmegaRun, DovetailError> {
    if !runner.prefix_semantics() {
        return Err(DovetailError::RequiresPrefixSemantics {
            family: runner.family().to_string(),
        });
    }
    let aux = BitString::empty();
    let events = dovetail(runner, policy, &aux, max_len, max_phase);
    let table = super::scan_programs(runner, policy, &aux, max_len, max_phase);
    let mut accumulator = OmegaAccumulator::new();
    let mut partial_sums = Vec::with_capacity(events.len());
    for e in &events {
        let fresh = accumulator.credit(&e.program);
        assert!(fresh, "event stream repeated a program");
        partial_sums.push(accumulator.sum().clone());
    }
    Ok(OmegaRun {
        accumulator,
        table,
        events,
        partial_sums,
    })
}

#[derive(Debug, Clone)]
pub struct OmegaRecovery {
    /// Statuses for every program of length <= n: discovered halts plus
    /// certified non-halting for the rest.
    pub table: HaltingTable,
    /// Events consumed before the stop rule fired.
    pub events_processed: usize,
    /// The sum at the moment the stop rule fired.
    pub sum_at_stop: DyadicRational,
    /// The sum over the whole explored stream.
    pub final_sum: DyadicRational,
    /// Set when the stream's mass leaves the claimed prefix's window
    /// [0.prefix, 0.prefix + 2^-n): the claim cannot be a prefix of the
    /// true value.
    pub inconsistent: bool,
}

/// Recover the halting table for programs of length <= n from a claimed
/// n-bit prefix of the halting probability: dovetail until the running sum
/// reaches the claimed value, then declare everything undiscovered
/// non-halting. Under budgeted semantics with the exact prefix this equals
/// the exhaustive table.
pub fn omega_to_halting(
    runner: &dyn ProgramRunner,
    policy: BudgetPolicy,
    omega_prefix: &BitString,
    n: usize,
    max_len: usize,
    max_phase: u64,
) -> Result<OmegaRecovery, DovetailError> {
    if !runner.prefix_semantics() {
        return Err(DovetailError::RequiresPrefixSemantics {
            family: runner.family().to_string(),
        });
    }
    if n > max_len {
        return Err(DovetailError::PrefixTooLong {
            prefix_len: n,
            max_len,
        });
    }
    let target = DyadicRational::from_parts(
        omega_prefix.numeral_value(),
        omega_prefix.len() as u64,
    );
    let aux = BitString::empty();
    let events = dovetail(runner, policy, &aux, max_len, max_phase);

    let mut sum = DyadicRational::zero();
    let mut stop: Option<(usize, DyadicRational)> = None;
    if sum >= target {
        stop = Some((0, sum.clone()));
    }
    let mut processed = 0usize;
    for e in &events {
        if stop.is_some() {
            // Keep summing: the full stream mass feeds the consistency flag.
            sum += DyadicRational::pow2_neg(e.program.len() as u64);
            continue;
        }
        processed += 1;
        sum += DyadicRational::pow2_neg(e.program.len() as u64);
        if sum >= target {
            stop = Some((processed, sum.clone()));
        }
    }
    let final_sum = sum;

    let Some((events_processed, sum_at_stop)) = stop else {
        return Err(match policy {
            BudgetPolicy::Budgeted => DovetailError::PrefixInconsistent {
                final_sum: final_sum.to_binary_string(),
                target: target.to_binary_string(),
            },
            BudgetPolicy::Unbounded => DovetailError::PrefixInconclusive {
                final_sum: final_sum.to_binary_string(),
                target: target.to_binary_string(),
                cap: max_phase,
            },
        });
    };

    let window = target.clone() + DyadicRational::pow2_neg(n as u64);
    let inconsistent = final_sum >= window;

    let discovered: std::collections::HashMap<&BitString, (u64, &BitString)> = events
        [..events_processed]
        .iter()
        .map(|e| (&e.program, (e.steps, &e.output)))
        .collect();
    let entries: Vec<(BitString, ProgramStatus)> = BitString::all_up_to_len(n)
        .map(|p| {
            let status = match discovered.get(&p) {
                Some(&(steps, output)) => ProgramStatus::Halts {
                    steps,
                    output: output.clone(),
                },
                None => ProgramStatus::ProvenNonHalting,
            };
            (p, status)
        })
        .collect();

    Ok(OmegaRecovery {
        table: HaltingTable {
            max_len: n,
            entries,
        },
        events_processed,
        sum_at_stop,
        final_sum,
        inconsistent,
    })
}
