//! Effective enumeration of valid encodings and the universal machine.
//!
//! Valid encodings are listed in shortlex order and numbered from 1. An
//! encoding's length depends only on its two headers (field width s, rule
//! count r), so generation proceeds group by group in increasing length;
//! same-length groups are generated together and sorted bitwise. Within a
//! group, rule lists are produced by backtracking under the canonicity and
//! determinism constraints, which keeps the search tree tight.

use super::encoding::{decode_machine, encode_machine, parse_program};
use super::{MachineDescription, MachineError, RunOutcome};
use crate::bits::{number_to_string, BitString, Natural};
use num_traits::ToPrimitive;
use std::collections::HashMap;
use std::sync::Mutex;

/// 1-based position in the enumeration of valid encodings.
pub type MachineIndex = u64;

/// Safety cap: how many encodings the enumeration will materialize before
/// refusing (the universal machine can be pointed at astronomically large
/// indices through its program).
pub const DEFAULT_MATERIALIZE_CAP: usize = 4_000_000;

struct EnumState {
    /// Valid encodings with length <= frontier_len, in shortlex order.
    ordered: Vec<BitString>,
    positions: HashMap<BitString, usize>,
    frontier_len: usize,
}

/// Lazily materialized enumeration, shareable across threads.
pub struct Enumeration {
    state: Mutex<EnumState>,
    cap: usize,
}

impl Default for Enumeration {
    fn default() -> Self {
        Enumeration::new()
    }
}

impl Enumeration {
    pub fn new() -> Self {
        Enumeration::with_cap(DEFAULT_MATERIALIZE_CAP)
    }

    pub fn with_cap(cap: usize) -> Self {
        Enumeration {
            state: Mutex::new(EnumState {
                ordered: Vec::new(),
                positions: HashMap::new(),
                frontier_len: 0,
            }),
            cap,
        }
    }

    /// The i-th machine (i >= 1).
    pub fn machine_by_index(&self, i: MachineIndex) -> Result<MachineDescription, MachineError> {
        let e = self.encoding_by_index(i)?;
        decode_machine(&e)
    }

    /// The i-th valid encoding (i >= 1).
    pub fn encoding_by_index(&self, i: MachineIndex) -> Result<BitString, MachineError> {
        if i == 0 {
            return Err(MachineError::BadProgram("machine indices start at 1".into()));
        }
        let mut st = self.state.lock().unwrap();
        while (st.ordered.len() as u64) < i {
            if st.ordered.len() >= self.cap {
                return Err(MachineError::BadProgram(format!(
                    "index {i} exceeds the enumeration cap of {}",
                    self.cap
                )));
            }
            extend_one_length(&mut st);
        }
        Ok(st.ordered[(i - 1) as usize].clone())
    }

    /// Position of a machine in the enumeration.
    pub fn index_of_machine(&self, m: &MachineDescription) -> Result<MachineIndex, MachineError> {
        let e = encode_machine(m)?;
        let mut st = self.state.lock().unwrap();
        while st.frontier_len < e.len() {
            if st.ordered.len() >= self.cap {
                return Err(MachineError::BadProgram(format!(
                    "encoding of length {} exceeds the enumeration cap",
                    e.len()
                )));
            }
            extend_one_length(&mut st);
        }
        st.positions
            .get(&e)
            .map(|&p| (p + 1) as MachineIndex)
            .ok_or_else(|| MachineError::BadEncoding {
                position: 0,
                reason: "encoding not found in the enumeration".into(),
            })
    }

    /// First `n` valid encodings.
    pub fn first_encodings(&self, n: usize) -> Result<Vec<BitString>, MachineError> {
        (1..=n as u64).map(|i| self.encoding_by_index(i)).collect()
    }
}

/// Lengths a (width, rule-count) group occupies: |bar(s)| + |bar(r)| + 4rs,
/// with |bar(k)| = 2 floor(log2 k) + 1 under the number identification.
fn group_len(s: u64, r: u64) -> usize {
    let header = |k: u64| 2 * (63 - k.leading_zeros() as usize) + 1;
    header(s) + header(r) + (4 * r * s) as usize
}

/// Materialize every group whose encodings have the next unexplored length.
fn extend_one_length(st: &mut EnumState) {
    // Find the smallest group length beyond the frontier. For fixed width
    // the length grows with the rule count, so each width's scan can stop at
    // the first candidate beyond the current best.
    let mut next_len = usize::MAX;
    let mut groups: Vec<(u64, u64)> = Vec::new();
    for s in 3..=16u64 {
        let max_q = (1u64 << s) - 5;
        for r in 1..=(3 * max_q) {
            let len = group_len(s, r);
            if len <= st.frontier_len {
                continue;
            }
            match len.cmp(&next_len) {
                std::cmp::Ordering::Less => {
                    next_len = len;
                    groups = vec![(s, r)];
                }
                std::cmp::Ordering::Equal => groups.push((s, r)),
                std::cmp::Ordering::Greater => {}
            }
            if len >= next_len {
                break;
            }
        }
    }
    assert!(next_len < usize::MAX, "no further groups");

    let mut batch: Vec<BitString> = Vec::new();
    for (s, r) in groups {
        generate_group(s, r, &mut batch);
    }
    batch.sort();
    for e in batch {
        debug_assert!(decode_machine(&e).is_ok(), "generated invalid encoding {e}");
        let pos = st.ordered.len();
        st.positions.insert(e.clone(), pos);
        st.ordered.push(e);
    }
    st.frontier_len = next_len;
}

/// All valid machines with field width `s` and `r` rules, encoded.
fn generate_group(s: u64, r: u64, out: &mut Vec<BitString>) {
    // States usable under this width: ceil(log2(q+5)) == s, and a rule list
    // of r rules touches at most 2r distinct states while determinism allows
    // at most 3q rules.
    let q_lo = ((1u64 << (s - 1)) + 1).saturating_sub(5).max(1);
    let q_hi = (1u64 << s) - 5;
    for q in q_lo..=q_hi {
        if q > 2 * r || r > 3 * q {
            continue;
        }
        let mut rules: Vec<(u64, u64, u64, u64)> = Vec::with_capacity(r as usize);
        let mut used: Vec<(u64, u64)> = Vec::new();
        backtrack(s, r, q, 0, &mut rules, &mut used, out);
    }
}

/// Extend the partial rule list in lexicographic field order.
fn backtrack(
    s: u64,
    r: u64,
    q_target: u64,
    fresh: u64,
    rules: &mut Vec<(u64, u64, u64, u64)>,
    used: &mut Vec<(u64, u64)>,
    out: &mut Vec<BitString>,
) {
    if rules.len() as u64 == r {
        if fresh == q_target {
            out.push(encode_raw(s, rules));
        }
        return;
    }
    let remaining_rules = r - rules.len() as u64 - 1;
    for state in 0..=fresh.min(q_target - 1) {
        let fresh_after_state = fresh.max(state + 1);
        for scanned in 0..3u64 {
            if used.contains(&(state, scanned)) {
                continue;
            }
            for action in 0..5u64 {
                for next in 0..=fresh_after_state.min(q_target - 1) {
                    let fresh_after = fresh_after_state.max(next + 1);
                    // Every remaining rule can introduce at most 2 states.
                    if q_target - fresh_after > 2 * remaining_rules {
                        continue;
                    }
                    rules.push((state, scanned, action, next));
                    used.push((state, scanned));
                    backtrack(s, r, q_target, fresh_after, rules, used, out);
                    used.pop();
                    rules.pop();
                }
            }
        }
    }
}

fn encode_raw(s: u64, rules: &[(u64, u64, u64, u64)]) -> BitString {
    // Assemble the encoding directly; q is implied by the rule fields.
    let q = rules
        .iter()
        .flat_map(|&(a, _, _, d)| [a, d])
        .max()
        .unwrap()
        + 1;
    let header = |k: u64| {
        let ks = number_to_string(&Natural::from(k)).unwrap();
        crate::codes::selfdelim_encode(&ks, crate::codes::Scheme::E1Bar).unwrap()
    };
    let mut bits: Vec<bool> = Vec::new();
    bits.extend(header(s).iter());
    bits.extend(header(rules.len() as u64).iter());
    for &(state, scanned, action, next) in rules {
        for code in [state, q + scanned, q + action, next] {
            for i in (0..s).rev() {
                bits.push((code >> i) & 1 == 1);
            }
        }
    }
    BitString::from_bits(bits)
}

/// Simulate the machine named by the program's `bar(i)` head on the rest of
/// the program, counting steps in the simulated machine's time.
pub fn universal_run(
    enumeration: &Enumeration,
    p: &BitString,
    budget: u64,
) -> Result<RunOutcome, MachineError> {
    let (index, input) = parse_program(p)?;
    let i = index
        .to_u64()
        .ok_or_else(|| MachineError::BadProgram(format!("index {index} out of range")))?;
    let m = enumeration.machine_by_index(i)?;
    Ok(super::run(&m, &input, budget))
}
