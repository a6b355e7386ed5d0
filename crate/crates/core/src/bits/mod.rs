//! Bit-string substrate: finite binary strings, the shortlex string/number
//! bijection, cylinders, exact dyadic arithmetic, and the prunable prefix
//! tree used by code construction and node allocation.

mod dyadic;
mod tree;

pub use dyadic::DyadicRational;
pub use tree::PrefixTree;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Arbitrary-precision nonnegative integer.
pub type Natural = BigUint;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BitsError {
    #[error("0 has no associated string; the numbering starts at 1")]
    ZeroHasNoString,
    #[error("invalid bit character {0:?} (expected '0', '1', or the empty-string literal \"e\")")]
    InvalidBitChar(char),
    #[error("value {0} is not a fraction in (0, 1]")]
    LeadingOneDomain(String),
    #[error("invalid dyadic literal {0:?}")]
    InvalidDyadicLiteral(String),
    #[error("no unallocated, unpruned node left at depth {depth}")]
    TreeExhausted { depth: u64 },
}

/// A finite string over {0, 1}. The empty string is written `e`.
///
/// `Ord` is the lexicographic-by-length (shortlex) order, so sorting agrees
/// with the string/number bijection.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    bits: Vec<u8>,
}

impl BitString {
    pub fn empty() -> Self {
        BitString { bits: Vec::new() }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        BitString {
            bits: iter.into_iter().map(u8::from).collect(),
        }
    }

    /// `k` zeros.
    pub fn zeros(k: usize) -> Self {
        BitString { bits: vec![0; k] }
    }

    /// `k` ones.
    pub fn ones(k: usize) -> Self {
        BitString { bits: vec![1; k] }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// Bit at position `i` (0-based from the left).
    pub fn get(&self, i: usize) -> Option<bool> {
        self.bits.get(i).map(|&b| b == 1)
    }

    pub fn push(&mut self, bit: bool) {
        self.bits.push(u8::from(bit));
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().map(|&b| b == 1)
    }

    pub fn concat(&self, other: &BitString) -> BitString {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitString { bits }
    }

    pub fn slice(&self, start: usize, end: usize) -> BitString {
        BitString {
            bits: self.bits[start..end].to_vec(),
        }
    }

    pub fn is_prefix_of(&self, other: &BitString) -> bool {
        other.bits.len() >= self.bits.len() && other.bits[..self.bits.len()] == self.bits[..]
    }

    pub fn child(&self, bit: bool) -> BitString {
        let mut bits = self.bits.clone();
        bits.push(u8::from(bit));
        BitString { bits }
    }

    /// Number of ones.
    pub fn weight(&self) -> usize {
        self.bits.iter().filter(|&&b| b == 1).count()
    }

    /// The bits read as a plain binary numeral (empty string reads as 0).
    pub fn numeral_value(&self) -> Natural {
        if self.bits.len() <= 120 {
            let mut v: u128 = 0;
            for &b in &self.bits {
                v = (v << 1) | u128::from(b);
            }
            BigUint::from(v)
        } else {
            let mut v = BigUint::zero();
            for &b in &self.bits {
                v = (v << 1u8) | BigUint::from(b);
            }
            v
        }
    }

    /// All strings of exactly `len` bits, in lexicographic order.
    pub fn all_of_len(len: usize) -> impl Iterator<Item = BitString> {
        assert!(len < 64, "exhaustive iteration is meant for short strings");
        (0u64..(1u64 << len)).map(move |v| {
            BitString {
                bits: (0..len).rev().map(|i| ((v >> i) & 1) as u8).collect(),
            }
        })
    }

    /// All strings of length at most `max_len`, in shortlex order.
    pub fn all_up_to_len(max_len: usize) -> impl Iterator<Item = BitString> {
        (0..=max_len).flat_map(BitString::all_of_len)
    }
}

impl Ord for BitString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bits
            .len()
            .cmp(&other.bits.len())
            .then_with(|| self.bits.cmp(&other.bits))
    }
}

impl PartialOrd for BitString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits.is_empty() {
            return f.write_str("e");
        }
        for &b in &self.bits {
            write!(f, "{}", b)?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

impl FromStr for BitString {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "e" || s.is_empty() {
            return Ok(BitString::empty());
        }
        let mut bits = Vec::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => bits.push(0),
                '1' => bits.push(1),
                other => return Err(BitsError::InvalidBitChar(other)),
            }
        }
        Ok(BitString { bits })
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Rank of `x` in the shortlex order starting at 1; equals the value of the
/// binary numeral `1x`.
pub fn string_to_number(x: &BitString) -> Natural {
    if x.len() <= 120 {
        let mut v: u128 = 1;
        for b in x.iter() {
            v = (v << 1) | u128::from(b);
        }
        BigUint::from(v)
    } else {
        let mut v = BigUint::one();
        for b in x.iter() {
            v = (v << 1u8) | BigUint::from(u8::from(b));
        }
        v
    }
}

/// Inverse of [`string_to_number`]: binary numeral of `n` with its leading 1
/// removed. `n` must be at least 1.
pub fn number_to_string(n: &Natural) -> Result<BitString, BitsError> {
    if n.is_zero() {
        return Err(BitsError::ZeroHasNoString);
    }
    let digits = n.to_radix_be(2);
    Ok(BitString {
        bits: digits[1..].to_vec(),
    })
}

/// The interval of reals whose binary expansion begins with a given string.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    pub base: BitString,
    pub lower: DyadicRational,
    pub width: DyadicRational,
}

impl Cylinder {
    pub fn upper(&self) -> DyadicRational {
        self.lower.clone() + self.width.clone()
    }

    pub fn contains(&self, other: &Cylinder) -> bool {
        self.base.is_prefix_of(&other.base)
    }

    pub fn is_disjoint_from(&self, other: &Cylinder) -> bool {
        self.upper() <= other.lower || other.upper() <= self.lower
    }
}

/// `[0.x, 0.x + 2^-|x|)`.
pub fn cylinder_of(x: &BitString) -> Cylinder {
    let lower = DyadicRational::from_parts(x.numeral_value(), x.len() as u64);
    let width = DyadicRational::pow2_neg(x.len() as u64);
    Cylinder {
        base: x.clone(),
        lower,
        width,
    }
}

/// Position of the leading 1 in the binary expansion of `a`, i.e. the `i`
/// with `a` in `[2^-i, 2^-i+1)`. Defined for `0 < a <= 1`.
pub fn leading_one_position(a: &DyadicRational) -> Result<u64, BitsError> {
    a.leading_one_position()
        .ok_or_else(|| BitsError::LeadingOneDomain(a.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn numbering_matches_the_table() {
        let cases = [
            ("e", 1u32),
            ("0", 2),
            ("1", 3),
            ("00", 4),
            ("01", 5),
            ("10", 6),
            ("11", 7),
            ("000", 8),
        ];
        for (s, n) in cases {
            assert_eq!(string_to_number(&bs(s)), BigUint::from(n), "rank of {s}");
            assert_eq!(number_to_string(&BigUint::from(n)).unwrap(), bs(s));
        }
    }

    #[test]
    fn zero_has_no_string() {
        assert_eq!(
            number_to_string(&BigUint::zero()),
            Err(BitsError::ZeroHasNoString)
        );
    }

    #[test]
    fn bijection_round_trip_exhaustive() {
        // Round trip over every string of length <= 20.
        let mut n = BigUint::one();
        for len in 0..=20usize {
            for x in BitString::all_of_len(len) {
                let r = string_to_number(&x);
                assert_eq!(r, n);
                assert_eq!(number_to_string(&r).unwrap(), x);
                n += 1u32;
            }
        }
    }

    #[test]
    fn length_is_floor_log() {
        // |number_to_string(n)| = floor(log2 n) for 1 <= n <= 2^20.
        let mut expected_len = 0usize;
        let mut next_power = 2u64;
        for n in 1u64..=(1 << 20) {
            if n == next_power {
                expected_len += 1;
                next_power <<= 1;
            }
            let s = number_to_string(&BigUint::from(n)).unwrap();
            assert_eq!(s.len(), expected_len, "n = {n}");
        }
    }

    #[test]
    fn shortlex_order_matches_numbering() {
        let mut all: Vec<BitString> = BitString::all_up_to_len(6).collect();
        let by_rank = all.clone();
        all.sort();
        assert_eq!(all, by_rank);
    }

    #[test]
    fn cylinder_examples() {
        let c = cylinder_of(&bs("1"));
        assert_eq!(c.lower, DyadicRational::from_parts(1u32.into(), 1));
        assert_eq!(c.width, DyadicRational::pow2_neg(1));

        let c = cylinder_of(&bs("01"));
        assert_eq!(c.lower, DyadicRational::from_parts(1u32.into(), 2));
        assert_eq!(c.upper(), DyadicRational::from_parts(1u32.into(), 1));

        let c = cylinder_of(&BitString::empty());
        assert_eq!(c.lower, DyadicRational::zero());
        assert_eq!(c.width, DyadicRational::one());
    }

    #[test]
    fn cylinders_are_disjoint_or_nested() {
        let all: Vec<BitString> = BitString::all_up_to_len(8).collect();
        for x in &all {
            let cx = cylinder_of(x);
            for y in &all {
                let cy = cylinder_of(y);
                let nested = cx.contains(&cy) || cy.contains(&cx);
                let prefix_related = x.is_prefix_of(y) || y.is_prefix_of(x);
                assert_eq!(nested, prefix_related);
                assert!(nested || cx.is_disjoint_from(&cy), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn leading_one_examples() {
        let a = DyadicRational::from_parts(1u32.into(), 3); // 0.001
        assert_eq!(leading_one_position(&a).unwrap(), 3);
        let a = DyadicRational::from_parts(1u32.into(), 5); // 0.00001
        assert_eq!(leading_one_position(&a).unwrap(), 5);
        let a = DyadicRational::from_parts(3u32.into(), 6); // 0.000011
        assert_eq!(leading_one_position(&a).unwrap(), 5);
    }

    #[test]
    fn leading_one_of_powers_of_two() {
        for k in 1..=64u64 {
            let a = DyadicRational::pow2_neg(k);
            assert_eq!(leading_one_position(&a).unwrap(), k);
        }
        assert_eq!(leading_one_position(&DyadicRational::one()).unwrap(), 0);
    }

    #[test]
    fn leading_one_domain_errors() {
        assert!(leading_one_position(&DyadicRational::zero()).is_err());
        let two = DyadicRational::from_parts(2u32.into(), 0);
        assert!(leading_one_position(&two).is_err());
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(bs("e"), BitString::empty());
        assert_eq!(BitString::empty().to_string(), "e");
        assert_eq!(bs("0101").to_string(), "0101");
        assert!("01x2".parse::<BitString>().is_err());
    }
}
