//! Self-delimiting encodings of bit strings and the pairing codec.
//!
//! Five schemes:
//!
//! - `E0`: unary with end marker, `0^x 1`, where the repetition count is the
//!   number associated with the string (capped; it is exponentially long).
//! - `E1-zeros`: `0^|x| 1 x`.
//! - `E1-bar`: `1^|x| 0 x` (the bar form used by pairing and by machine rule
//!   encodings).
//! - `E2`: `0^||x|| 1 L x` where `L` is the string associated with the
//!   number |x| and ||x|| is its length.
//! - `prime`: `bar(L) x`, same `L`.
//!
//! E2 and prime encode the length |x| through the string/number
//! identification, which starts at 1, so the empty string (length 0) is not
//! encodable under those two schemes.

use super::CodesError;
use crate::bits::{number_to_string, string_to_number, BitString, Natural};
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    E0,
    E1Zeros,
    E1Bar,
    E2,
    Prime,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [
        Scheme::E0,
        Scheme::E1Zeros,
        Scheme::E1Bar,
        Scheme::E2,
        Scheme::Prime,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Scheme::E0 => "E0",
            Scheme::E1Zeros => "E1-zeros",
            Scheme::E1Bar => "E1-bar",
            Scheme::E2 => "E2",
            Scheme::Prime => "prime",
        }
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "E0" | "e0" => Ok(Scheme::E0),
            "E1-zeros" | "e1-zeros" => Ok(Scheme::E1Zeros),
            "E1-bar" | "e1-bar" | "bar" => Ok(Scheme::E1Bar),
            "E2" | "e2" => Ok(Scheme::E2),
            "prime" => Ok(Scheme::Prime),
            other => Err(format!("unknown scheme {other:?}")),
        }
    }
}

/// Default cap on the unary scheme: values above this would produce
/// encodings longer than a megabit.
pub const E0_DEFAULT_CAP: u64 = 1 << 20;

/// The string associated with the length of `x` (lengths use the
/// string/number identification, starting at 1).
fn length_string(x: &BitString) -> Result<BitString, CodesError> {
    if x.is_empty() {
        return Err(CodesError::EmptyStringLength(x.clone()));
    }
    number_to_string(&Natural::from(x.len())).map_err(|_| CodesError::EmptyStringLength(x.clone()))
}

/// `bar(x) = 1^|x| 0 x`.
pub fn bar(x: &BitString) -> BitString {
    let mut out = BitString::ones(x.len());
    out.push(false);
    out.concat(x)
}

pub fn selfdelim_encode(x: &BitString, scheme: Scheme) -> Result<BitString, CodesError> {
    selfdelim_encode_capped(x, scheme, E0_DEFAULT_CAP)
}

pub fn selfdelim_encode_capped(
    x: &BitString,
    scheme: Scheme,
    e0_cap: u64,
) -> Result<BitString, CodesError> {
    match scheme {
        Scheme::E0 => {
            let n = string_to_number(x);
            let count = n.to_u64().filter(|&v| v <= e0_cap).ok_or_else(|| {
                CodesError::UnaryCap {
                    value: n.to_string(),
                    cap: e0_cap.to_string(),
                }
            })?;
            let mut out = BitString::zeros(count as usize);
            out.push(true);
            Ok(out)
        }
        Scheme::E1Zeros => {
            let mut out = BitString::zeros(x.len());
            out.push(true);
            Ok(out.concat(x))
        }
        Scheme::E1Bar => Ok(bar(x)),
        Scheme::E2 => {
            let l = length_string(x)?;
            let mut out = BitString::zeros(l.len());
            out.push(true);
            Ok(out.concat(&l).concat(x))
        }
        Scheme::Prime => {
            let l = length_string(x)?;
            Ok(bar(&l).concat(x))
        }
    }
}

/// Decode one codeword from the front of `stream`; returns the decoded
/// string and the number of bits consumed.
pub fn selfdelim_decode(stream: &BitString, scheme: Scheme) -> Result<(BitString, usize), CodesError> {
    match scheme {
        Scheme::E0 => {
            let (count, pos) = read_unary(stream, false, 0)?;
            let n = Natural::from(count);
            let x = number_to_string(&n).map_err(|_| CodesError::Decode {
                position: pos,
                reason: "unary count 0 has no associated string".into(),
            })?;
            Ok((x, pos + 1))
        }
        Scheme::E1Zeros => {
            let (count, pos) = read_unary(stream, false, 0)?;
            let x = read_block(stream, pos + 1, count as usize)?;
            Ok((x, pos + 1 + count as usize))
        }
        Scheme::E1Bar => {
            let (count, pos) = read_unary(stream, true, 0)?;
            let x = read_block(stream, pos + 1, count as usize)?;
            Ok((x, pos + 1 + count as usize))
        }
        Scheme::E2 => {
            let (count, pos) = read_unary(stream, false, 0)?;
            let l = read_block(stream, pos + 1, count as usize)?;
            let after_l = pos + 1 + count as usize;
            let len = decode_length(&l, after_l)?;
            let x = read_block(stream, after_l, len)?;
            Ok((x, after_l + len))
        }
        Scheme::Prime => {
            let (count, pos) = read_unary(stream, true, 0)?;
            let l = read_block(stream, pos + 1, count as usize)?;
            let after_l = pos + 1 + count as usize;
            let len = decode_length(&l, after_l)?;
            let x = read_block(stream, after_l, len)?;
            Ok((x, after_l + len))
        }
    }
}

fn decode_length(l: &BitString, position: usize) -> Result<usize, CodesError> {
    string_to_number(l)
        .to_usize()
        .ok_or_else(|| CodesError::Decode {
            position,
            reason: "length field too large".into(),
        })
}

/// Count leading `marker` bits; the terminator is the opposite bit.
/// Returns (count, index of terminator).
fn read_unary(stream: &BitString, marker: bool, start: usize) -> Result<(u64, usize), CodesError> {
    let mut i = start;
    loop {
        match stream.get(i) {
            Some(b) if b == marker => i += 1,
            Some(_) => return Ok(((i - start) as u64, i)),
            None => {
                return Err(CodesError::Decode {
                    position: i,
                    reason: "stream ended inside a unary run".into(),
                })
            }
        }
    }
}

fn read_block(stream: &BitString, start: usize, len: usize) -> Result<BitString, CodesError> {
    if start + len > stream.len() {
        return Err(CodesError::Decode {
            position: stream.len(),
            reason: format!("stream ended inside a {len}-bit block starting at {start}"),
        });
    }
    Ok(stream.slice(start, start + len))
}

/// `<i, j> = bar(i) j`.
pub fn pair_encode(i: &BitString, j: &BitString) -> BitString {
    bar(i).concat(j)
}

/// Split `bar(i) j`; `j` is the remainder of the stream.
pub fn pair_decode(stream: &BitString) -> Result<(BitString, BitString), CodesError> {
    let (i, consumed) = selfdelim_decode(stream, Scheme::E1Bar)?;
    Ok((i, stream.slice(consumed, stream.len())))
}
