//! Unique-decodability decision with witness reconstruction.
//!
//! A code fails unique decodability exactly when two distinct codeword
//! sequences produce the same bit stream. The search runs over "dangling
//! suffix" states: one parse is ahead of the other by the suffix. Reaching a
//! state whose suffix is itself a codeword closes an ambiguous stream. A
//! shortest ambiguous stream is found with Dijkstra over the stream length
//! (extending the stream costs bits; absorbing a codeword inside the current
//! suffix costs nothing).

use super::{AmbiguityWitness, Code};
use crate::bits::BitString;
use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};

#[derive(Clone, PartialEq, Eq, Hash)]
struct State {
    /// How far the leading parse is ahead of the trailing one.
    suffix: BitString,
    /// Which parse is ahead: `false` = A ahead, `true` = B ahead.
    ahead: bool,
}

#[derive(Clone)]
enum Origin {
    /// Initial pair: codeword `long` (side A, ahead) vs codeword `short`.
    Start { long: String, short: String },
    /// The side trailing in `prev` consumed `symbol`.
    Step {
        prev: State,
        symbol: String,
        consumer_is_b: bool,
    },
}

/// Shortest bit stream with two distinct codeword parses, or `None` when the
/// code is uniquely decodable. The code must be nonsingular.
pub fn shortest_ambiguous_stream(code: &Code) -> Option<AmbiguityWitness> {
    let words: Vec<(&str, &BitString)> = code
        .entries()
        .iter()
        .map(|(s, w)| (s.as_str(), w))
        .collect();

    // Dijkstra over (stream length, state), with parent links for
    // reconstruction.
    let mut dist: HashMap<State, usize> = HashMap::new();
    let mut parent: HashMap<State, Origin> = HashMap::new();
    let mut heap: BinaryHeap<Reverse<(usize, Vec<u8>, bool)>> = BinaryHeap::new();
    let key = |s: &BitString| -> Vec<u8> { s.iter().map(u8::from).collect() };
    let unkey = |k: &[u8]| -> BitString { BitString::from_bits(k.iter().map(|&b| b == 1)) };

    for (sym_long, w_long) in &words {
        for (sym_short, w_short) in &words {
            if w_long == w_short {
                continue;
            }
            if w_short.is_prefix_of(w_long) {
                let suffix = w_long.slice(w_short.len(), w_long.len());
                let st = State {
                    suffix: suffix.clone(),
                    ahead: false,
                };
                let d = w_long.len();
                if dist.get(&st).map_or(true, |&old| d < old) {
                    dist.insert(st.clone(), d);
                    parent.insert(
                        st,
                        Origin::Start {
                            long: sym_long.to_string(),
                            short: sym_short.to_string(),
                        },
                    );
                    heap.push(Reverse((d, key(&suffix), false)));
                }
            }
        }
    }

    let mut goal: Option<(usize, State, String)> = None;
    while let Some(Reverse((d, suffix_key, ahead))) = heap.pop() {
        let state = State {
            suffix: unkey(&suffix_key),
            ahead,
        };
        if dist.get(&state) != Some(&d) {
            continue;
        }
        // Close: the trailing side consumes the suffix as one codeword.
        for (sym, w) in &words {
            if *w == &state.suffix {
                match &goal {
                    Some((best, _, _)) if *best <= d => {}
                    _ => goal = Some((d, state.clone(), sym.to_string())),
                }
            }
        }
        for (sym, w) in &words {
            let (next, extra) = if state.suffix.is_prefix_of(w) {
                if w.len() == state.suffix.len() {
                    continue; // handled as a close above
                }
                // Trailing side overtakes: roles swap, stream grows.
                let next_suffix = w.slice(state.suffix.len(), w.len());
                (
                    State {
                        suffix: next_suffix,
                        ahead: !state.ahead,
                    },
                    w.len() - state.suffix.len(),
                )
            } else if w.is_prefix_of(&state.suffix) {
                // Trailing side consumes part of the suffix; stream unchanged.
                let next_suffix = state.suffix.slice(w.len(), state.suffix.len());
                (
                    State {
                        suffix: next_suffix,
                        ahead: state.ahead,
                    },
                    0,
                )
            } else {
                continue;
            };
            let nd = d + extra;
            if dist.get(&next).map_or(true, |&old| nd < old) {
                dist.insert(next.clone(), nd);
                parent.insert(
                    next.clone(),
                    Origin::Step {
                        prev: state.clone(),
                        symbol: sym.to_string(),
                        consumer_is_b: !state.ahead,
                    },
                );
                heap.push(Reverse((nd, key(&next.suffix), next.ahead)));
            }
        }
    }

    let (_, end_state, closing_symbol) = goal?;
    Some(reconstruct(code, &parent, end_state, closing_symbol))
}

fn reconstruct(
    code: &Code,
    parent: &HashMap<State, Origin>,
    end: State,
    closing_symbol: String,
) -> AmbiguityWitness {
    // Walk back to the start, collecting consumed symbols with the side that
    // consumed them. The close is consumed by the side trailing in `end`.
    let mut trail: Vec<(bool, String)> = vec![(!end.ahead, closing_symbol)];
    let mut cur = end;
    let (first_long, first_short) = loop {
        match parent.get(&cur).expect("parent chain broken") {
            Origin::Start { long, short } => break (long.clone(), short.clone()),
            Origin::Step {
                prev,
                symbol,
                consumer_is_b,
            } => {
                trail.push((*consumer_is_b, symbol.clone()));
                cur = prev.clone();
            }
        }
    };

    // Side A starts ahead with `first_long`; side B with `first_short`.
    let mut parse_a = vec![first_long];
    let mut parse_b = vec![first_short];
    for (consumer_is_b, sym) in trail.into_iter().rev() {
        if consumer_is_b {
            parse_b.push(sym);
        } else {
            parse_a.push(sym);
        }
    }

    let encode = |symbols: &[String]| -> BitString {
        let mut out = BitString::empty();
        for s in symbols {
            let (_, w) = code
                .entries()
                .iter()
                .find(|(sym, _)| sym == s)
                .expect("symbol in code");
            out = out.concat(w);
        }
        out
    };
    let stream = encode(&parse_a);
    debug_assert_eq!(stream, encode(&parse_b));
    AmbiguityWitness {
        stream,
        parse_a,
        parse_b,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::BitString;

    fn code(entries: &[(&str, &str)]) -> Code {
        Code::new(
            entries
                .iter()
                .map(|(s, w)| (s.to_string(), w.parse().unwrap()))
                .collect(),
        )
    }

    /// Count distinct codeword factorizations of `stream`.
    fn parse_count(code: &Code, stream: &BitString) -> u64 {
        let n = stream.len();
        let mut ways = vec![0u64; n + 1];
        ways[0] = 1;
        for i in 0..n {
            if ways[i] == 0 {
                continue;
            }
            for (_, w) in code.entries() {
                let end = i + w.len();
                if end <= n && stream.slice(i, end) == *w {
                    ways[end] += ways[i];
                }
            }
        }
        ways[n]
    }

    fn brute_shortest_ambiguous(code: &Code, max_len: usize) -> Option<usize> {
        for len in 1..=max_len {
            for stream in BitString::all_of_len(len) {
                if parse_count(code, &stream) >= 2 {
                    return Some(len);
                }
            }
        }
        None
    }

    #[test]
    fn witnesses_agree_with_brute_force_on_random_codes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let mut ambiguous_seen = 0;
        for _ in 0..300 {
            let n = rng.gen_range(2..=4);
            let entries: Vec<(String, BitString)> = (0..n)
                .map(|i| {
                    let len = rng.gen_range(1..=4);
                    let bits: Vec<bool> = (0..len).map(|_| rng.gen()).collect();
                    (format!("s{i}"), BitString::from_bits(bits))
                })
                .collect();
            let c = Code::new(entries);
            // Skip singular codes; the decision procedure presumes
            // nonsingularity.
            let distinct: std::collections::HashSet<String> =
                c.entries().iter().map(|(_, w)| w.to_string()).collect();
            if distinct.len() != c.len() {
                continue;
            }
            let witness = shortest_ambiguous_stream(&c);
            let brute = brute_shortest_ambiguous(&c, 12);
            match (&witness, brute) {
                (Some(w), Some(len)) => {
                    assert!(w.is_valid_for(&c), "invalid witness for {:?}", c);
                    assert_eq!(w.stream.len(), len, "not shortest for {:?}", c);
                    ambiguous_seen += 1;
                }
                (None, None) => {}
                (Some(w), None) => {
                    // Witness longer than the brute-force horizon.
                    assert!(w.is_valid_for(&c));
                    assert!(w.stream.len() > 12, "brute force missed {:?}", c);
                }
                (None, Some(len)) => panic!("missed ambiguity of length {len} in {:?}", c),
            }
        }
        assert!(ambiguous_seen > 30, "corpus too tame: {ambiguous_seen}");
    }

    #[test]
    fn suffix_code_is_uniquely_decodable() {
        let c = code(&[("A", "0"), ("B", "01"), ("C", "011"), ("D", "111")]);
        assert!(shortest_ambiguous_stream(&c).is_none());
    }
}
