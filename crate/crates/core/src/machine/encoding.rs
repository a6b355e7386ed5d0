//! Canonical bit encoding of rule lists.
//!
//! A machine with r rules over |Q| states is encoded as
//! `bar(s) bar(r) e(q1)e(s1)e(a1)e(q'1) ... e(qr)e(sr)e(ar)e(q'r)` where
//! `s = ceil(log2(|Q|+5))` is the fixed field width, `bar` is the
//! self-delimiting `1^|x| 0 x` form over the string/number identification,
//! and `e` assigns the k-th distinct state (first-appearance order) the code
//! k-1 and the symbols 0, 1, B, L, R the five codes after the states. The
//! 0-based assignment is what makes every code fit in `s` bits.

use super::{Action, MachineDescription, MachineError, Rule, Symbol};
use crate::bits::{number_to_string, string_to_number, BitString, Natural};
use crate::codes::{pair_decode, selfdelim_encode, Scheme};
use num_traits::ToPrimitive;

pub(super) fn ceil_log2(n: u64) -> u64 {
    debug_assert!(n >= 1);
    64 - (n - 1).leading_zeros() as u64
}

fn bar_of_number(k: u64) -> BitString {
    let s = number_to_string(&Natural::from(k)).expect("k >= 1");
    selfdelim_encode(&s, Scheme::E1Bar).expect("bar is total")
}

fn field(code: u64, width: u64) -> impl Iterator<Item = bool> {
    (0..width).rev().map(move |i| (code >> i) & 1 == 1)
}

fn symbol_offset(sym: Symbol) -> u64 {
    match sym {
        Symbol::Zero => 0,
        Symbol::One => 1,
        Symbol::Blank => 2,
    }
}

fn action_offset(act: Action) -> u64 {
    match act {
        Action::Write(s) => symbol_offset(s),
        Action::MoveLeft => 3,
        Action::MoveRight => 4,
    }
}

/// Canonical encoding of the rule list. States are renumbered into
/// first-appearance order, so `decode(encode(m))` equals `m.canonicalized()`.
pub fn encode_machine(m: &MachineDescription) -> Result<BitString, MachineError> {
    if m.rules().is_empty() {
        return Err(MachineError::NoRules);
    }
    let canonical = m.canonicalized();
    let q = canonical.state_count() as u64;
    let s = ceil_log2(q + 5);
    let r = canonical.rules().len() as u64;

    let mut out = bar_of_number(s).concat(&bar_of_number(r));
    for rule in canonical.rules() {
        let mut bits: Vec<bool> = Vec::with_capacity(4 * s as usize);
        bits.extend(field(rule.state as u64, s));
        bits.extend(field(q + symbol_offset(rule.scanned), s));
        bits.extend(field(q + action_offset(rule.action), s));
        bits.extend(field(rule.next as u64, s));
        out = out.concat(&BitString::from_bits(bits));
    }
    Ok(out)
}

/// Strict inverse of [`encode_machine`]: rejects non-canonical state
/// numbering, wrong field widths, nondeterminism, and trailing bits, so the
/// valid encodings are exactly the image of `encode_machine`.
pub fn decode_machine(e: &BitString) -> Result<MachineDescription, MachineError> {
    let bad = |position: usize, reason: &str| MachineError::BadEncoding {
        position,
        reason: reason.to_string(),
    };

    let (s_str, used_s) = crate::codes::selfdelim_decode(e, Scheme::E1Bar)
        .map_err(|err| bad(0, &format!("width header: {err}")))?;
    let s = string_to_number(&s_str)
        .to_u64()
        .ok_or_else(|| bad(0, "width header out of range"))?;
    let rest = e.slice(used_s, e.len());
    let (r_str, used_r) = crate::codes::selfdelim_decode(&rest, Scheme::E1Bar)
        .map_err(|err| bad(used_s, &format!("rule-count header: {err}")))?;
    let r = string_to_number(&r_str)
        .to_u64()
        .ok_or_else(|| bad(used_s, "rule count out of range"))?;
    let body_start = used_s + used_r;

    if s == 0 || s > 32 {
        return Err(bad(0, "field width must be between 1 and 32"));
    }
    let body_len = e.len() - body_start;
    let expected = (4 * r * s) as usize;
    if body_len < expected {
        return Err(bad(e.len(), "encoding truncated inside the rule fields"));
    }
    if body_len > expected {
        return Err(bad(body_start + expected, "trailing bits after the last rule"));
    }

    let read_field = |k: usize| -> u64 {
        let start = body_start + k * s as usize;
        let mut v = 0u64;
        for i in 0..s as usize {
            v = (v << 1) | u64::from(e.get(start + i) == Some(true));
        }
        v
    };

    // First pass: recover the state set from the q/q' fields and check the
    // first-appearance numbering 0,1,2,...
    let mut next_fresh = 0u64;
    for rule_idx in 0..r as usize {
        for field_idx in [0usize, 3] {
            let code = read_field(rule_idx * 4 + field_idx);
            if code > next_fresh {
                return Err(bad(
                    body_start + (rule_idx * 4 + field_idx) * s as usize,
                    "state codes must appear in first-appearance order",
                ));
            }
            if code == next_fresh {
                next_fresh += 1;
            }
        }
    }
    let q = next_fresh;
    if q == 0 {
        return Err(bad(body_start, "no rules"));
    }
    if ceil_log2(q + 5) != s {
        return Err(bad(0, "field width does not match the state count"));
    }

    let mut rules = Vec::with_capacity(r as usize);
    for rule_idx in 0..r as usize {
        let offset = body_start + rule_idx * 4 * s as usize;
        let state = read_field(rule_idx * 4);
        let scanned_code = read_field(rule_idx * 4 + 1);
        let action_code = read_field(rule_idx * 4 + 2);
        let next = read_field(rule_idx * 4 + 3);
        let scanned = match scanned_code.checked_sub(q) {
            Some(0) => Symbol::Zero,
            Some(1) => Symbol::One,
            Some(2) => Symbol::Blank,
            _ => return Err(bad(offset + s as usize, "scanned field is not a tape symbol")),
        };
        let action = match action_code.checked_sub(q) {
            Some(0) => Action::Write(Symbol::Zero),
            Some(1) => Action::Write(Symbol::One),
            Some(2) => Action::Write(Symbol::Blank),
            Some(3) => Action::MoveLeft,
            Some(4) => Action::MoveRight,
            _ => return Err(bad(offset + 2 * s as usize, "action field is not an action")),
        };
        rules.push(Rule {
            state: state as u32,
            scanned,
            action,
            next: next as u32,
        });
    }

    MachineDescription::new(rules).map_err(|e| match e {
        MachineError::NondeterministicPair(i, j) => MachineError::BadEncoding {
            position: body_start + j * 4 * s as usize,
            reason: format!("rules {i} and {j} share a (state, scanned) pair"),
        },
        other => other,
    })
}

/// `bar(i) j` for the universal machine, with `i` the machine index.
pub fn program_for(index: &Natural, input: &BitString) -> Result<BitString, MachineError> {
    let i_str = number_to_string(index).map_err(|_| MachineError::BadProgram("index 0".into()))?;
    Ok(selfdelim_encode(&i_str, Scheme::E1Bar)
        .expect("bar is total")
        .concat(input))
}

/// Split `bar(i) j` into the machine index and its input.
pub fn parse_program(p: &BitString) -> Result<(Natural, BitString), MachineError> {
    let (i_str, j) = pair_decode(p).map_err(|e| MachineError::BadProgram(e.to_string()))?;
    Ok((string_to_number(&i_str), j))
}
