//! The reference machine family: a fixed bit-code interpreter, family id
//! `bci-1`. Complexity experiments run against this family instead of the
//! literal enumerated machines, whose print programs are astronomically
//! long; the enumeration is kept for small-scale cross-checks and the gap
//! between families is measured, never assumed.
//!
//! Programs are bit strings executed left to right. Opcodes are 3 bits:
//!
//! | bits | op      | effect                                              |
//! |------|---------|-----------------------------------------------------|
//! | 000  | HALT    | stop                                                |
//! | 001  | OUT0    | append 0 to the output                              |
//! | 010  | OUT1    | append 1 to the output                              |
//! | 011  | OUTN    | read `1^k 0 w` (k = |w|), then n = number(w) raw    |
//! |      |         | bits; append them to the output                     |
//! | 100  | OUTREST | append every remaining program bit, then stop       |
//! | 101  | CPY     | append the auxiliary string to the output           |
//! | 110  | REP     | read 2 bits k; output := output repeated k+2 times  |
//! | 111  | LOOP    | diverge                                             |
//!
//! Cost model: one step per program bit consumed, one per output bit
//! appended, one per opcode dispatched (CPY charges the length of the
//! auxiliary string when appending it).
//!
//! The same opcodes run under two disciplines. Under *prefix* semantics
//! bits are handed out one at a time with no end marker: asking for a bit
//! past the end is a failure, and HALT succeeds only with the whole program
//! consumed, so the successful programs form a prefix-free set; OUTREST
//! can never succeed (it always asks for one more bit). Under *plain*
//! semantics the end of the program is sensible: HALT succeeds anywhere
//! and OUTREST is the constant-overhead literal-output program, which is
//! exactly why plain complexity is bounded by length plus a constant while
//! the prefix bound needs a length header.

use super::{ProgramOutcome, ProgramRunner};
use crate::bits::{number_to_string, string_to_number, BitString, Natural};
use crate::codes::{selfdelim_encode, Scheme};
use num_traits::ToPrimitive;

pub const FAMILY_PLAIN: &str = "bci-1-plain";
pub const FAMILY_PREFIX: &str = "bci-1-prefix";

/// Overhead of the plain literal-output program `OUTREST x`.
pub const PLAIN_PRINT_OVERHEAD: usize = 3;

/// The `CPY HALT` program, a constant-size copy of the auxiliary string.
pub fn copy_program() -> BitString {
    "101000".parse().unwrap()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interp {
    prefix: bool,
}

impl Interp {
    pub fn plain() -> Self {
        Interp { prefix: false }
    }

    pub fn prefix() -> Self {
        Interp { prefix: true }
    }

    pub fn is_prefix(&self) -> bool {
        self.prefix
    }
}

struct Exec<'a> {
    program: &'a BitString,
    aux: &'a BitString,
    budget: u64,
    consumed: usize,
    steps: u64,
    output: Vec<bool>,
}

enum Stop {
    Budget,
    Fail,
}

impl<'a> Exec<'a> {
    fn charge(&mut self, n: u64) -> Result<(), Stop> {
        if self.budget - self.steps < n {
            self.steps = self.budget;
            return Err(Stop::Budget);
        }
        self.steps += n;
        Ok(())
    }

    fn read_bit(&mut self) -> Result<bool, Stop> {
        match self.program.get(self.consumed) {
            None => Err(Stop::Fail),
            Some(b) => {
                self.charge(1)?;
                self.consumed += 1;
                Ok(b)
            }
        }
    }

    fn read_bits(&mut self, n: usize) -> Result<Vec<bool>, Stop> {
        (0..n).map(|_| self.read_bit()).collect()
    }
}

fn run_interp(prefix: bool, program: &BitString, aux: &BitString, budget: u64) -> ProgramOutcome {
    let mut ex = Exec {
        program,
        aux,
        budget,
        consumed: 0,
        steps: 0,
        output: Vec::new(),
    };
    match exec_loop(prefix, &mut ex) {
        Ok(()) => ProgramOutcome::Halted {
            output: BitString::from_bits(ex.output.iter().copied()),
            steps: ex.steps,
        },
        Err(Stop::Budget) => ProgramOutcome::OutOfBudget { steps: ex.steps },
        Err(Stop::Fail) => ProgramOutcome::ProvenDiverges,
    }
}

fn exec_loop(prefix: bool, ex: &mut Exec) -> Result<(), Stop> {
    loop {
        let op = ex.read_bits(3)?;
        let code = (u8::from(op[0]) << 2) | (u8::from(op[1]) << 1) | u8::from(op[2]);
        ex.charge(1)?;
        match code {
            0b000 => {
                if prefix && ex.consumed != ex.program.len() {
                    return Err(Stop::Fail);
                }
                return Ok(());
            }
            0b001 => {
                ex.charge(1)?;
                ex.output.push(false);
            }
            0b010 => {
                ex.charge(1)?;
                ex.output.push(true);
            }
            0b011 => {
                // Operand 1^k 0 w with |w| = k; n = number(w) payload bits.
                let mut k = 0usize;
                while ex.read_bit()? {
                    k += 1;
                }
                let w = BitString::from_bits(ex.read_bits(k)?.into_iter());
                let n = string_to_number(&w)
                    .to_usize()
                    .ok_or(Stop::Fail)?;
                for _ in 0..n {
                    let b = ex.read_bit()?;
                    ex.charge(1)?;
                    ex.output.push(b);
                }
            }
            0b100 => {
                if prefix {
                    // No end marker to sense: consume everything, then the
                    // inevitable extra request fails.
                    loop {
                        match ex.read_bit() {
                            Ok(_) => {}
                            Err(Stop::Budget) => return Err(Stop::Budget),
                            Err(Stop::Fail) => return Err(Stop::Fail),
                        }
                    }
                }
                while ex.consumed < ex.program.len() {
                    let b = ex.read_bit()?;
                    ex.charge(1)?;
                    ex.output.push(b);
                }
                return Ok(());
            }
            0b101 => {
                ex.charge(ex.aux.len() as u64)?;
                let aux_bits: Vec<bool> = ex.aux.iter().collect();
                ex.output.extend(aux_bits);
            }
            0b110 => {
                let hi = ex.read_bit()?;
                let lo = ex.read_bit()?;
                let copies = 2 + ((u64::from(hi) << 1) | u64::from(lo));
                let len = ex.output.len() as u64;
                ex.charge(len * (copies - 1))?;
                let base = ex.output.clone();
                for _ in 1..copies {
                    ex.output.extend(base.iter().copied());
                }
            }
            0b111 => return Err(Stop::Fail),
            _ => unreachable!(),
        }
    }
}

impl ProgramRunner for Interp {
    fn run_program(&self, program: &BitString, aux: &BitString, budget: u64) -> ProgramOutcome {
        run_interp(self.prefix, program, aux, budget)
    }

    fn prefix_semantics(&self) -> bool {
        self.prefix
    }

    fn family(&self) -> &'static str {
        if self.prefix {
            FAMILY_PREFIX
        } else {
            FAMILY_PLAIN
        }
    }

    fn print_program(&self, x: &BitString) -> Option<BitString> {
        if !self.prefix {
            // OUTREST x
            return Some("100".parse::<BitString>().unwrap().concat(x));
        }
        // OUTN bar(L) x HALT, with L the string of the number |x|.
        if x.is_empty() {
            return Some("000".parse().unwrap());
        }
        let l = number_to_string(&Natural::from(x.len())).ok()?;
        let header = selfdelim_encode(&l, Scheme::E1Bar).ok()?;
        Some(
            "011"
                .parse::<BitString>()
                .unwrap()
                .concat(&header)
                .concat(x)
                .concat(&"000".parse().unwrap()),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    fn run_prefix(p: &str) -> ProgramOutcome {
        Interp::prefix().run_program(&bs(p), &BitString::empty(), 1 << 20)
    }

    #[test]
    fn bare_halt_succeeds_in_both_modes() {
        for interp in [Interp::plain(), Interp::prefix()] {
            match interp.run_program(&bs("000"), &BitString::empty(), 100) {
                ProgramOutcome::Halted { output, .. } => assert!(output.is_empty()),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn prefix_mode_rejects_unconsumed_tail_and_plain_accepts_it() {
        let p = bs("000111"); // HALT then junk
        assert!(matches!(
            Interp::prefix().run_program(&p, &BitString::empty(), 100),
            ProgramOutcome::ProvenDiverges
        ));
        assert!(matches!(
            Interp::plain().run_program(&p, &BitString::empty(), 100),
            ProgramOutcome::Halted { .. }
        ));
    }

    #[test]
    fn out_bits_and_rep() {
        // OUT1 REP(k=3 -> x5) HALT : output 11111
        match run_prefix("01011011000") {
            ProgramOutcome::Halted { output, .. } => assert_eq!(output, bs("11111")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn loop_op_diverges_structurally() {
        assert!(matches!(run_prefix("111"), ProgramOutcome::ProvenDiverges));
    }

    #[test]
    fn truncated_opcode_is_an_overshoot() {
        assert!(matches!(run_prefix("01"), ProgramOutcome::ProvenDiverges));
        assert!(matches!(run_prefix(""), ProgramOutcome::ProvenDiverges));
    }

    #[test]
    fn print_programs_reproduce_their_strings() {
        for interp in [Interp::plain(), Interp::prefix()] {
            for x in BitString::all_up_to_len(8) {
                let p = interp.print_program(&x).unwrap();
                match interp.run_program(&p, &BitString::empty(), 1 << 16) {
                    ProgramOutcome::Halted { output, .. } => {
                        assert_eq!(output, x, "family {}", interp.family())
                    }
                    other => panic!("print program failed for {x}: {other:?}"),
                }
            }
        }
    }

    #[test]
    fn plain_print_overhead_is_three_bits() {
        let interp = Interp::plain();
        for x in BitString::all_up_to_len(8) {
            let p = interp.print_program(&x).unwrap();
            assert_eq!(p.len(), x.len() + PLAIN_PRINT_OVERHEAD);
        }
    }

    #[test]
    fn copy_program_copies_aux_under_prefix_semantics() {
        let interp = Interp::prefix();
        for aux in BitString::all_up_to_len(8) {
            match interp.run_program(&copy_program(), &aux, 1 << 16) {
                ProgramOutcome::Halted { output, .. } => assert_eq!(output, aux),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn outrest_never_succeeds_under_prefix_semantics() {
        for tail in BitString::all_up_to_len(6) {
            let p = bs("100").concat(&tail);
            assert!(matches!(
                Interp::prefix().run_program(&p, &BitString::empty(), 1 << 12),
                ProgramOutcome::ProvenDiverges
            ));
        }
    }

    #[test]
    fn prefix_success_set_is_prefix_free() {
        let interp = Interp::prefix();
        let successes: Vec<BitString> = BitString::all_up_to_len(12)
            .filter(|p| {
                matches!(
                    interp.run_program(p, &BitString::empty(), 1 << 12),
                    ProgramOutcome::Halted { .. }
                )
            })
            .collect();
        assert!(!successes.is_empty());
        for a in &successes {
            for b in &successes {
                assert!(a == b || !a.is_prefix_of(b), "{a} prefixes {b}");
            }
        }
    }

    #[test]
    fn budgeted_cutoff_is_respected_by_halting_programs() {
        // Every successful prefix program of length <= 12 halts within
        // 2^|p| steps, so the budgeted and unbounded domains agree here.
        let interp = Interp::prefix();
        for p in BitString::all_up_to_len(12) {
            let unbounded = interp.run_program(&p, &BitString::empty(), 1 << 20);
            if let ProgramOutcome::Halted { steps, .. } = unbounded {
                assert!(steps <= 1 << p.len().max(3), "{p} took {steps} steps");
            }
        }
    }

    #[test]
    fn determinism() {
        let interp = Interp::prefix();
        for p in BitString::all_up_to_len(10) {
            let a = interp.run_program(&p, &bs("01"), 512);
            let b = interp.run_program(&p, &bs("01"), 512);
            assert_eq!(a, b);
        }
    }
}
