//! Dovetailed execution over program space and everything built on it:
//! halting tables, halting-probability lower semi-computation, complexity
//! upper bounds, busy beaver, and censuses.
//!
//! The schedule is the canonical interleaving: in phase k, every program of
//! length at most k runs for k steps, so a program p halting in t steps is
//! first revealed in phase max(|p|, t). Deterministic machines make the
//! phase-by-phase replay equivalent to running each program once against
//! its final budget; workers may therefore run programs in any order, and
//! events are merged in canonical (phase, program) order before any state
//! is touched.

mod census;
mod complexity;
mod interp;
mod omega;

pub use census::{bb_from_omega, busy_beaver, census, BusyBeaverTable, Census};
pub use complexity::{complexity_upper, invariance_gap, ComplexityEstimate, GapReport, GapRow};
pub use interp::{copy_program, Interp, FAMILY_PLAIN, FAMILY_PREFIX, PLAIN_PRINT_OVERHEAD};
pub use omega::{omega_lower, omega_to_halting, OmegaAccumulator, OmegaRecovery, OmegaRun};

use crate::bits::{string_to_number, BitString};
use crate::machine::{universal_run, Enumeration, MachineDescription, RunOutcome};
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::sync::Arc;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DovetailError {
    #[error("this operation needs a machine family with prefix semantics (got {family})")]
    RequiresPrefixSemantics { family: String },
    #[error("claimed prefix value never reached: final sum {final_sum} < target {target} after the exhaustive budgeted stream")]
    PrefixInconsistent { final_sum: String, target: String },
    #[error("claimed prefix value not reached within the phase cap {cap}: sum {final_sum} < target {target}; raise the cap or switch to budgeted semantics")]
    PrefixInconclusive {
        final_sum: String,
        target: String,
        cap: u64,
    },
    #[error("prefix longer than the explored program space ({prefix_len} > {max_len})")]
    PrefixTooLong { prefix_len: usize, max_len: usize },
}

/// Result of running one program to a budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProgramOutcome {
    Halted { output: BitString, steps: u64 },
    OutOfBudget { steps: u64 },
    /// Definitively outside the halting domain: an overshoot or early halt
    /// under prefix semantics, an explicit divergence, or a configuration
    /// loop.
    ProvenDiverges,
}

/// A machine family: program semantics plus bookkeeping.
pub trait ProgramRunner: Sync + Send {
    fn run_program(&self, program: &BitString, aux: &BitString, budget: u64) -> ProgramOutcome;
    /// Whether successful programs form a prefix-free set.
    fn prefix_semantics(&self) -> bool;
    /// Version identifier recorded in reports.
    fn family(&self) -> &'static str;
    /// Literal-output program for `x`, when the family has one.
    fn print_program(&self, x: &BitString) -> Option<BitString> {
        let _ = x;
        None
    }
}

/// Budget discipline for program runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BudgetPolicy {
    /// A program is divergent unless it halts within 2^|p| steps. Halting
    /// becomes decidable, so tables, the halting-probability sum, and the
    /// busy-beaver values are exact once every program has been run to its
    /// cutoff.
    Budgeted,
    /// Honest semi-computation: undecided programs stay unknown.
    Unbounded,
}

impl BudgetPolicy {
    /// Step cutoff for a program of length `len` in phase-limited runs.
    pub fn budget_for(&self, len: usize, max_phase: u64) -> u64 {
        match self {
            BudgetPolicy::Budgeted => cutoff(len).min(max_phase),
            BudgetPolicy::Unbounded => max_phase,
        }
    }
}

/// The budgeted-semantics cutoff 2^|p| (saturating).
pub fn cutoff(len: usize) -> u64 {
    1u64.checked_shl(len as u32).unwrap_or(u64::MAX)
}

/// Phase at which the budgeted stream over programs of length <= max_len is
/// provably complete.
pub fn exhaustive_phase(max_len: usize) -> u64 {
    cutoff(max_len).max(max_len as u64)
}

/// One discovered halting program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HaltEvent {
    pub program: BitString,
    pub output: BitString,
    pub steps: u64,
    /// First phase of the schedule that reveals this halt.
    pub phase: u64,
}

/// Run every program of length <= max_len through phases 1..=max_phase and
/// return the halting events in canonical (phase, program) order.
pub fn dovetail(
    runner: &dyn ProgramRunner,
    policy: BudgetPolicy,
    aux: &BitString,
    max_len: usize,
    max_phase: u64,
) -> Vec<HaltEvent> {
    let table = scan_programs(runner, policy, aux, max_len, max_phase);
    let mut events: Vec<HaltEvent> = table
        .entries
        .into_iter()
        .filter_map(|(p, status)| match status {
            ProgramStatus::Halts { steps, output } => {
                let phase = steps.max(p.len() as u64);
                (phase <= max_phase).then_some(HaltEvent {
                    program: p,
                    output,
                    steps,
                    phase,
                })
            }
            _ => None,
        })
        .collect();
    events.sort_by(|a, b| a.phase.cmp(&b.phase).then_with(|| a.program.cmp(&b.program)));
    events
}

/// Halting status of one program.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "status")]
pub enum ProgramStatus {
    Halts { steps: u64, output: BitString },
    UnknownAtBudget,
    ProvenNonHalting,
}

/// Statuses for every program of length <= max_len, ordered by the
/// string/number bijection (rank 1 = the empty string).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HaltingTable {
    pub max_len: usize,
    pub entries: Vec<(BitString, ProgramStatus)>,
}

impl HaltingTable {
    pub fn status_of(&self, p: &BitString) -> Option<&ProgramStatus> {
        let rank = string_to_number(p).to_usize()?;
        self.entries.get(rank - 1).map(|(_, s)| s)
    }

    /// Characteristic bits: entry per program in bijection order, 1 iff the
    /// program halts. Programs of length <= n give the first 2^(n+1)-1 bits.
    pub fn chi_bits(&self) -> BitString {
        BitString::from_bits(
            self.entries
                .iter()
                .map(|(_, s)| matches!(s, ProgramStatus::Halts { .. })),
        )
    }

    pub fn halting_count(&self) -> u64 {
        self.entries
            .iter()
            .filter(|(_, s)| matches!(s, ProgramStatus::Halts { .. }))
            .count() as u64
    }

    /// Restrict to programs of length <= n.
    pub fn restricted(&self, n: usize) -> HaltingTable {
        assert!(n <= self.max_len);
        let count = (1usize << (n + 1)) - 1;
        HaltingTable {
            max_len: n,
            entries: self.entries[..count].to_vec(),
        }
    }
}

/// Decide every program of length <= max_len at the given phase limit.
pub fn scan_programs(
    runner: &dyn ProgramRunner,
    policy: BudgetPolicy,
    aux: &BitString,
    max_len: usize,
    max_phase: u64,
) -> HaltingTable {
    let programs: Vec<BitString> = BitString::all_up_to_len(max_len).collect();
    let entries: Vec<(BitString, ProgramStatus)> = programs
        .into_par_iter()
        .map(|p| {
            let status = if (p.len() as u64) > max_phase {
                // Never scheduled inside the phase limit.
                ProgramStatus::UnknownAtBudget
            } else {
                let budget = policy.budget_for(p.len(), max_phase);
                match runner.run_program(&p, aux, budget) {
                    ProgramOutcome::Halted { output, steps } => {
                        ProgramStatus::Halts { steps, output }
                    }
                    ProgramOutcome::ProvenDiverges => ProgramStatus::ProvenNonHalting,
                    ProgramOutcome::OutOfBudget { .. } => {
                        if policy == BudgetPolicy::Budgeted && cutoff(p.len()) <= max_phase {
                            // Ran to the full cutoff: divergent by the
                            // budgeted-semantics rule.
                            ProgramStatus::ProvenNonHalting
                        } else {
                            ProgramStatus::UnknownAtBudget
                        }
                    }
                }
            };
            (p, status)
        })
        .collect();
    HaltingTable { max_len, entries }
}

/// Run `f` on a dedicated pool with `workers` threads (0 = default pool).
pub fn with_workers<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> T {
    if workers == 0 {
        return f();
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .expect("thread pool")
        .install(f)
}

/// The literal enumerated universal machine as a (plain) family.
pub struct LiteralUniversal {
    enumeration: Arc<Enumeration>,
}

impl LiteralUniversal {
    pub fn new(enumeration: Arc<Enumeration>) -> Self {
        LiteralUniversal { enumeration }
    }
}

impl ProgramRunner for LiteralUniversal {
    fn run_program(&self, program: &BitString, _aux: &BitString, budget: u64) -> ProgramOutcome {
        match universal_run(&self.enumeration, program, budget) {
            Ok(RunOutcome::Halted { output, steps }) => ProgramOutcome::Halted { output, steps },
            Ok(RunOutcome::BudgetExceeded { steps }) => ProgramOutcome::OutOfBudget { steps },
            Ok(RunOutcome::ProvenLooping { .. }) => ProgramOutcome::ProvenDiverges,
            // A program that is not bar(i)j never simulates anything.
            Err(crate::machine::MachineError::BadProgram(msg)) if msg.contains("cap") => {
                ProgramOutcome::OutOfBudget { steps: 0 }
            }
            Err(_) => ProgramOutcome::ProvenDiverges,
        }
    }

    fn prefix_semantics(&self) -> bool {
        false
    }

    fn family(&self) -> &'static str {
        "literal-u-v1"
    }
}

/// One fixed machine run directly on its input, as a (plain) family.
pub struct SingleMachine {
    machine: MachineDescription,
}

impl SingleMachine {
    pub fn new(machine: MachineDescription) -> Self {
        SingleMachine { machine }
    }
}

impl ProgramRunner for SingleMachine {
    fn run_program(&self, program: &BitString, _aux: &BitString, budget: u64) -> ProgramOutcome {
        match crate::machine::run(&self.machine, program, budget) {
            RunOutcome::Halted { output, steps } => ProgramOutcome::Halted { output, steps },
            RunOutcome::BudgetExceeded { steps } => ProgramOutcome::OutOfBudget { steps },
            RunOutcome::ProvenLooping { .. } => ProgramOutcome::ProvenDiverges,
        }
    }

    fn prefix_semantics(&self) -> bool {
        false
    }

    fn family(&self) -> &'static str {
        "literal-machine"
    }
}
