//! Single-tape machines: rule lists, budgeted execution with loop proofs,
//! the canonical bit encoding of rule lists, the effective enumeration, the
//! universal machine, and the three-tape self-delimiting variant.

mod encoding;
mod enumeration;
mod three_tape;

pub use encoding::{decode_machine, encode_machine, parse_program, program_for};
pub use enumeration::{universal_run, Enumeration, MachineIndex};
pub use three_tape::{selfdelim_run, Act3, Rule3, SelfDelimRun, ThreeTapeMachine};

use crate::bits::BitString;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MachineError {
    #[error("rules {0} and {1} share a (state, scanned) pair")]
    NondeterministicPair(usize, usize),
    #[error("cannot encode a machine with no rules")]
    NoRules,
    #[error("invalid encoding at bit {position}: {reason}")]
    BadEncoding { position: usize, reason: String },
    #[error("line {line}: {reason}")]
    BadRuleText { line: usize, reason: String },
    #[error("program does not parse as a pair: {0}")]
    BadProgram(String),
}

/// Tape symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Symbol {
    Zero,
    One,
    Blank,
}

impl Symbol {
    pub fn as_str(&self) -> &'static str {
        match self {
            Symbol::Zero => "0",
            Symbol::One => "1",
            Symbol::Blank => "B",
        }
    }
}

/// One of the five per-step actions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Action {
    Write(Symbol),
    MoveLeft,
    MoveRight,
}

impl Action {
    pub fn as_str(&self) -> &'static str {
        match self {
            Action::Write(Symbol::Zero) => "0",
            Action::Write(Symbol::One) => "1",
            Action::Write(Symbol::Blank) => "B",
            Action::MoveLeft => "L",
            Action::MoveRight => "R",
        }
    }
}

pub type StateId = u32;

/// `(q, s, a, q')`: in state `q` scanning `s`, perform `a` and enter `q'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Rule {
    pub state: StateId,
    pub scanned: Symbol,
    pub action: Action,
    pub next: StateId,
}

/// An ordered rule list. The start state is the state of the first rule;
/// a (state, scanned) pair with no rule halts the machine.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MachineDescription {
    rules: Vec<Rule>,
}

impl MachineDescription {
    pub fn new(rules: Vec<Rule>) -> Result<Self, MachineError> {
        for i in 0..rules.len() {
            for j in (i + 1)..rules.len() {
                if rules[i].state == rules[j].state && rules[i].scanned == rules[j].scanned {
                    return Err(MachineError::NondeterministicPair(i, j));
                }
            }
        }
        Ok(MachineDescription { rules })
    }

    pub fn empty() -> Self {
        MachineDescription { rules: Vec::new() }
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn start_state(&self) -> Option<StateId> {
        self.rules.first().map(|r| r.state)
    }

    /// Distinct states in order of first appearance across the rule list
    /// (q then q' per rule).
    pub fn states_in_appearance_order(&self) -> Vec<StateId> {
        let mut seen = Vec::new();
        for r in &self.rules {
            if !seen.contains(&r.state) {
                seen.push(r.state);
            }
            if !seen.contains(&r.next) {
                seen.push(r.next);
            }
        }
        seen
    }

    pub fn state_count(&self) -> usize {
        self.states_in_appearance_order().len()
    }

    /// Rules renumbered so states are 0,1,2,... in first-appearance order.
    pub fn canonicalized(&self) -> MachineDescription {
        let order = self.states_in_appearance_order();
        let renumber: HashMap<StateId, StateId> = order
            .iter()
            .enumerate()
            .map(|(i, &q)| (q, i as StateId))
            .collect();
        MachineDescription {
            rules: self
                .rules
                .iter()
                .map(|r| Rule {
                    state: renumber[&r.state],
                    scanned: r.scanned,
                    action: r.action,
                    next: renumber[&r.next],
                })
                .collect(),
        }
    }

    /// Text format: one rule per line, `q s a q'`, states as identifiers.
    pub fn parse_text(text: &str) -> Result<Self, MachineError> {
        let mut names: Vec<String> = Vec::new();
        let mut id_of = |name: &str| -> StateId {
            if let Some(i) = names.iter().position(|n| n == name) {
                i as StateId
            } else {
                names.push(name.to_string());
                (names.len() - 1) as StateId
            }
        };
        let mut rules = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 {
                return Err(MachineError::BadRuleText {
                    line: lineno + 1,
                    reason: format!("expected 4 fields, found {}", parts.len()),
                });
            }
            let scanned = parse_symbol(parts[1]).ok_or_else(|| MachineError::BadRuleText {
                line: lineno + 1,
                reason: format!("bad scanned symbol {:?}", parts[1]),
            })?;
            let action = parse_action(parts[2]).ok_or_else(|| MachineError::BadRuleText {
                line: lineno + 1,
                reason: format!("bad action {:?}", parts[2]),
            })?;
            rules.push(Rule {
                state: id_of(parts[0]),
                scanned,
                action,
                next: id_of(parts[3]),
            });
        }
        MachineDescription::new(rules)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.rules {
            out.push_str(&format!(
                "q{} {} {} q{}\n",
                r.state,
                r.scanned.as_str(),
                r.action.as_str(),
                r.next
            ));
        }
        out
    }
}

fn parse_symbol(s: &str) -> Option<Symbol> {
    match s {
        "0" => Some(Symbol::Zero),
        "1" => Some(Symbol::One),
        "B" | "b" => Some(Symbol::Blank),
        _ => None,
    }
}

fn parse_action(s: &str) -> Option<Action> {
    match s {
        "0" => Some(Action::Write(Symbol::Zero)),
        "1" => Some(Action::Write(Symbol::One)),
        "B" | "b" => Some(Action::Write(Symbol::Blank)),
        "L" | "l" => Some(Action::MoveLeft),
        "R" | "r" => Some(Action::MoveRight),
        _ => None,
    }
}

/// Three-valued result of a budgeted run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RunOutcome {
    /// The machine reached a (state, scanned) pair with no rule. The output
    /// is the maximal blank-free block under the head.
    Halted { output: BitString, steps: u64 },
    /// Budget exhausted without a verdict.
    BudgetExceeded { steps: u64 },
    /// A head-translation-normalized configuration repeated: the machine
    /// can never halt.
    ProvenLooping { period: u64 },
}

impl fmt::Display for RunOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunOutcome::Halted { output, steps } => write!(f, "halted({output}, {steps} steps)"),
            RunOutcome::BudgetExceeded { steps } => write!(f, "budget-exceeded({steps} steps)"),
            RunOutcome::ProvenLooping { period } => write!(f, "proven-looping(period {period})"),
        }
    }
}

/// Sparse two-way-infinite tape.
struct Tape {
    cells: HashMap<i64, Symbol>,
    head: i64,
}

impl Tape {
    fn new(input: &BitString) -> Self {
        let mut cells = HashMap::new();
        for (i, bit) in input.iter().enumerate() {
            cells.insert(i as i64, if bit { Symbol::One } else { Symbol::Zero });
        }
        Tape { cells, head: 0 }
    }

    fn scan(&self) -> Symbol {
        *self.cells.get(&self.head).unwrap_or(&Symbol::Blank)
    }

    fn apply(&mut self, action: Action) {
        match action {
            Action::Write(Symbol::Blank) => {
                self.cells.remove(&self.head);
            }
            Action::Write(s) => {
                self.cells.insert(self.head, s);
            }
            Action::MoveLeft => self.head -= 1,
            Action::MoveRight => self.head += 1,
        }
    }

    /// Maximal blank-free block containing the head; blank under the head
    /// gives the empty string.
    fn output(&self) -> BitString {
        if self.scan() == Symbol::Blank {
            return BitString::empty();
        }
        let mut lo = self.head;
        while self.cells.contains_key(&(lo - 1)) {
            lo -= 1;
        }
        let mut hi = self.head;
        while self.cells.contains_key(&(hi + 1)) {
            hi += 1;
        }
        BitString::from_bits((lo..=hi).map(|i| self.cells[&i] == Symbol::One))
    }

    /// Written cells relative to the head, for translation-normalized
    /// configuration comparison.
    fn normalized(&self, state: StateId) -> Vec<(StateId, i64, u8)> {
        let mut v: Vec<(StateId, i64, u8)> = self
            .cells
            .iter()
            .map(|(&pos, &sym)| (state, pos - self.head, sym as u8))
            .collect();
        v.sort_unstable();
        if v.is_empty() {
            v.push((state, 0, 255));
        }
        v
    }
}

/// Loop detection is recorded only while the written region stays small and
/// the run is young; beyond the caps the run continues without recording and
/// budget exhaustion is reported honestly.
const LOOP_TRACK_MAX_CELLS: usize = 64;
const LOOP_TRACK_MAX_STEPS: u64 = 4096;

/// Execute `m` on `input` for at most `budget` steps.
///
/// Deterministic: a halt is final (any larger budget returns the identical
/// outcome), and a loop proof requires an exact translation-normalized
/// configuration repeat.
pub fn run(m: &MachineDescription, input: &BitString, budget: u64) -> RunOutcome {
    let mut table: HashMap<(StateId, Symbol), (Action, StateId)> = HashMap::new();
    for r in m.rules() {
        table.insert((r.state, r.scanned), (r.action, r.next));
    }
    let mut tape = Tape::new(input);
    let mut state = match m.start_state() {
        Some(q) => q,
        None => {
            return RunOutcome::Halted {
                output: tape.output(),
                steps: 0,
            }
        }
    };

    let mut seen: HashMap<Vec<(StateId, i64, u8)>, u64> = HashMap::new();
    let mut steps: u64 = 0;
    loop {
        if steps <= LOOP_TRACK_MAX_STEPS && tape.cells.len() <= LOOP_TRACK_MAX_CELLS {
            let config = tape.normalized(state);
            if let Some(&first) = seen.get(&config) {
                return RunOutcome::ProvenLooping {
                    period: steps - first,
                };
            }
            seen.insert(config, steps);
        }
        let scanned = tape.scan();
        let Some(&(action, next)) = table.get(&(state, scanned)) else {
            return RunOutcome::Halted {
                output: tape.output(),
                steps,
            };
        };
        if steps == budget {
            return RunOutcome::BudgetExceeded { steps };
        }
        tape.apply(action);
        state = next;
        steps += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn empty_machine_halts_immediately_on_its_input() {
        let m = MachineDescription::empty();
        assert_eq!(
            run(&m, &bs("101"), 100),
            RunOutcome::Halted {
                output: bs("101"),
                steps: 0
            }
        );
    }

    #[test]
    fn single_rewrite_then_halt() {
        let m = MachineDescription::new(vec![Rule {
            state: 0,
            scanned: Symbol::One,
            action: Action::Write(Symbol::Zero),
            next: 0,
        }])
        .unwrap();
        assert_eq!(
            run(&m, &bs("1"), 100),
            RunOutcome::Halted {
                output: bs("0"),
                steps: 1
            }
        );
    }

    #[test]
    fn pure_drift_is_a_proven_loop() {
        let m = MachineDescription::new(vec![Rule {
            state: 0,
            scanned: Symbol::Blank,
            action: Action::MoveRight,
            next: 0,
        }])
        .unwrap();
        assert_eq!(
            run(&m, &BitString::empty(), 1000),
            RunOutcome::ProvenLooping { period: 1 }
        );
    }

    #[test]
    fn two_state_ping_pong_is_a_proven_loop() {
        let m = MachineDescription::parse_text("a B R b\nb B L a\n").unwrap();
        assert!(matches!(
            run(&m, &BitString::empty(), 1000),
            RunOutcome::ProvenLooping { period: 2 }
        ));
    }

    #[test]
    fn budget_exhaustion_is_reported() {
        // A counter-ish machine that keeps writing 1s rightward: the written
        // region grows forever, so no loop proof and no halt.
        let m = MachineDescription::parse_text("a B 1 b\nb 1 R a\n").unwrap();
        assert_eq!(
            run(&m, &BitString::empty(), 500),
            RunOutcome::BudgetExceeded { steps: 500 }
        );
    }

    #[test]
    fn budget_monotonicity_of_halts() {
        let m = MachineDescription::parse_text("a 1 0 a\na 0 R b\nb 1 B b\n").unwrap();
        let full = run(&m, &bs("11"), 1_000);
        let RunOutcome::Halted { steps, .. } = full.clone() else {
            panic!("expected halt, got {full:?}");
        };
        for b in steps..steps + 5 {
            assert_eq!(run(&m, &bs("11"), b), full);
        }
        assert!(matches!(
            run(&m, &bs("11"), steps - 1),
            RunOutcome::BudgetExceeded { .. }
        ));
    }

    #[test]
    fn output_is_the_block_under_the_head() {
        // Walk right past the input, then halt on the blank after it.
        let m = MachineDescription::parse_text("a 1 R a\na 0 R a\n").unwrap();
        assert_eq!(
            run(&m, &bs("10"), 100),
            RunOutcome::Halted {
                output: BitString::empty(),
                steps: 2
            }
        );
    }

    #[test]
    fn text_format_round_trip() {
        let text = "q0 0 R q1\nq1 1 L q0\nq1 B 0 q1\n";
        let m = MachineDescription::parse_text(text).unwrap();
        assert_eq!(m.to_text(), text);
        assert_eq!(m.rules().len(), 3);
        assert!(matches!(
            MachineDescription::parse_text("q0 0 R\n"),
            Err(MachineError::BadRuleText { line: 1, .. })
        ));
        assert!(matches!(
            MachineDescription::parse_text("q0 2 R q1\n"),
            Err(MachineError::BadRuleText { .. })
        ));
    }

    #[test]
    fn determinism_is_enforced() {
        let dup = vec![
            Rule {
                state: 0,
                scanned: Symbol::Zero,
                action: Action::MoveRight,
                next: 0,
            },
            Rule {
                state: 0,
                scanned: Symbol::Zero,
                action: Action::MoveLeft,
                next: 0,
            },
        ];
        assert_eq!(
            MachineDescription::new(dup),
            Err(MachineError::NondeterministicPair(0, 1))
        );
    }

    #[test]
    fn identical_runs_are_bit_identical() {
        let m = MachineDescription::parse_text("a B 1 b\nb 1 R a\n").unwrap();
        let a = run(&m, &bs("01"), 333);
        let b = run(&m, &bs("01"), 333);
        assert_eq!(a, b);
    }
}
