//! Three-tape self-delimiting machines.
//!
//! The program tape is one-way and read-only: a bit is consumed only when a
//! rule asks for one, and there is no end marker to sense. A computation is
//! successful exactly when the machine halts having consumed the whole
//! program and nothing more; halting after a proper prefix, or asking for a
//! bit past the end of the supplied program, is a failure. Successful
//! programs of a fixed machine (and auxiliary string) therefore form a
//! prefix-free set.

use super::{Action, MachineError, StateId, Symbol};
use crate::bits::BitString;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

/// What a rule does: act on the work tape, emit an output bit, or consume
/// one program bit and branch on it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Act3 {
    Work { action: Action, next: StateId },
    Emit { bit: bool, next: StateId },
    ReadProg { on_zero: StateId, on_one: StateId },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule3 {
    pub state: StateId,
    pub work_scanned: Symbol,
    pub act: Act3,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreeTapeMachine {
    rules: Vec<Rule3>,
}

impl ThreeTapeMachine {
    pub fn new(rules: Vec<Rule3>) -> Result<Self, MachineError> {
        for i in 0..rules.len() {
            for j in (i + 1)..rules.len() {
                if rules[i].state == rules[j].state
                    && rules[i].work_scanned == rules[j].work_scanned
                {
                    return Err(MachineError::NondeterministicPair(i, j));
                }
            }
        }
        Ok(ThreeTapeMachine { rules })
    }

    pub fn rules(&self) -> &[Rule3] {
        &self.rules
    }

    pub fn start_state(&self) -> Option<StateId> {
        self.rules.first().map(|r| r.state)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelfDelimStatus {
    /// Halted with the program head exactly on the last bit.
    Success,
    /// Halted early, or asked for a bit past the end of the program.
    Failure,
    /// Budget exhausted.
    OutOfBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelfDelimRun {
    pub consumed: u64,
    pub aux: BitString,
    pub output: BitString,
    pub status: SelfDelimStatus,
    pub steps: u64,
}

impl SelfDelimRun {
    pub fn success(&self) -> bool {
        self.status == SelfDelimStatus::Success
    }
}

/// Run a three-tape machine on a program and auxiliary string for at most
/// `budget` steps.
pub fn selfdelim_run(
    m: &ThreeTapeMachine,
    program: &BitString,
    aux: &BitString,
    budget: u64,
) -> SelfDelimRun {
    let mut table: HashMap<(StateId, Symbol), Act3> = HashMap::new();
    for r in m.rules() {
        table.insert((r.state, r.work_scanned), r.act);
    }

    let mut work: HashMap<i64, Symbol> = HashMap::new();
    for (i, bit) in aux.iter().enumerate() {
        work.insert(i as i64, if bit { Symbol::One } else { Symbol::Zero });
    }
    let mut head: i64 = 0;
    let mut output = BitString::empty();
    let mut consumed: u64 = 0;
    let mut steps: u64 = 0;

    let finish = |status, consumed, output, steps| SelfDelimRun {
        consumed,
        aux: aux.clone(),
        output,
        status,
        steps,
    };

    let mut state = match m.start_state() {
        Some(q) => q,
        None => {
            let status = if program.is_empty() {
                SelfDelimStatus::Success
            } else {
                SelfDelimStatus::Failure
            };
            return finish(status, 0, output, 0);
        }
    };

    loop {
        let scanned = *work.get(&head).unwrap_or(&Symbol::Blank);
        let Some(&act) = table.get(&(state, scanned)) else {
            let status = if consumed == program.len() as u64 {
                SelfDelimStatus::Success
            } else {
                SelfDelimStatus::Failure
            };
            return finish(status, consumed, output, steps);
        };
        if steps == budget {
            return finish(SelfDelimStatus::OutOfBudget, consumed, output, steps);
        }
        steps += 1;
        match act {
            Act3::Work { action, next } => {
                match action {
                    Action::Write(Symbol::Blank) => {
                        work.remove(&head);
                    }
                    Action::Write(s) => {
                        work.insert(head, s);
                    }
                    Action::MoveLeft => head -= 1,
                    Action::MoveRight => head += 1,
                }
                state = next;
            }
            Act3::Emit { bit, next } => {
                output.push(bit);
                state = next;
            }
            Act3::ReadProg { on_zero, on_one } => {
                match program.get(consumed as usize) {
                    None => {
                        // Overshoot: the head may not move past the program.
                        return finish(SelfDelimStatus::Failure, consumed, output, steps);
                    }
                    Some(bit) => {
                        consumed += 1;
                        state = if bit { on_one } else { on_zero };
                    }
                }
            }
        }
    }
}
