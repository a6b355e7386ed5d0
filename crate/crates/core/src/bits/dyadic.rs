//! Exact binary fractions `numerator / 2^exponent`.

use super::{BitsError, BitString};
use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign};
use std::str::FromStr;

/// A nonnegative dyadic rational, stored normalized: the numerator is odd,
/// or the value is zero with exponent zero. All arithmetic is exact.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DyadicRational {
    numerator: BigUint,
    exponent: u64,
}

impl DyadicRational {
    pub fn zero() -> Self {
        DyadicRational {
            numerator: BigUint::zero(),
            exponent: 0,
        }
    }

    pub fn one() -> Self {
        DyadicRational {
            numerator: BigUint::one(),
            exponent: 0,
        }
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u64) -> Self {
        DyadicRational {
            numerator: BigUint::one(),
            exponent: k,
        }
    }

    /// `numerator / 2^exponent`, normalized.
    pub fn from_parts(numerator: BigUint, exponent: u64) -> Self {
        let mut d = DyadicRational {
            numerator,
            exponent,
        };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        let shift = self.numerator.trailing_zeros().unwrap_or(0).min(self.exponent);
        if shift > 0 {
            self.numerator >>= shift;
            self.exponent -= shift;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// True when the value is exactly `2^-k` for some k >= 0.
    pub fn is_power_of_two(&self) -> bool {
        self.numerator.is_one()
    }

    pub fn checked_sub(&self, other: &DyadicRational) -> Option<DyadicRational> {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &other.numerator << (e - other.exponent);
        if a < b {
            return None;
        }
        Some(DyadicRational::from_parts(a - b, e))
    }

    /// Position of the leading 1 in the binary expansion, for values in
    /// (0, 1]. `None` outside that range.
    pub fn leading_one_position(&self) -> Option<u64> {
        if self.numerator.is_zero() {
            return None;
        }
        let top = self.numerator.bits() - 1; // floor(log2 numerator)
        if top > self.exponent {
            return None; // value > 1
        }
        Some(self.exponent - top)
    }

    /// Largest multiple of `2^-n` that is <= self (the first `n` fraction
    /// bits, with the integer part kept).
    pub fn truncate_fraction(&self, n: u64) -> DyadicRational {
        if self.exponent <= n {
            return self.clone();
        }
        DyadicRational::from_parts(&self.numerator >> (self.exponent - n), n)
    }

    /// First `n` bits after the binary point, as a bit string. The value
    /// must be strictly below 1.
    pub fn fraction_bits(&self, n: u64) -> BitString {
        assert!(
            self.leading_one_position() != Some(0) || self.is_zero(),
            "fraction_bits needs a value < 1"
        );
        let shifted = if self.exponent <= n {
            &self.numerator << (n - self.exponent)
        } else {
            &self.numerator >> (self.exponent - n)
        };
        let digits = shifted.to_radix_be(2);
        let mut bits = vec![0u8; (n as usize).saturating_sub(digits.len())];
        bits.extend_from_slice(&digits);
        if bits.len() > n as usize {
            bits.truncate(n as usize);
        }
        let rendered: String = bits.iter().map(|b| if *b == 1 { '1' } else { '0' }).collect();
        if n == 0 {
            BitString::empty()
        } else {
            rendered.parse().unwrap()
        }
    }

    /// Binary-fraction rendering: `"0.001011"`, `"1"`, `"1.1"`, `"0"`.
    pub fn to_binary_string(&self) -> String {
        if self.exponent == 0 {
            return self.numerator.to_str_radix(2);
        }
        let int_part = &self.numerator >> self.exponent;
        let frac_mask = (BigUint::one() << self.exponent) - BigUint::one();
        let frac = &self.numerator & frac_mask;
        let digits = frac.to_radix_be(2);
        let mut frac_str = String::new();
        for _ in 0..(self.exponent as usize - digits.len()) {
            frac_str.push('0');
        }
        for d in digits {
            frac_str.push(if d == 1 { '1' } else { '0' });
        }
        format!("{}.{}", int_part.to_str_radix(2), frac_str)
    }

    pub fn parse_binary(s: &str) -> Result<Self, BitsError> {
        let bad = || BitsError::InvalidDyadicLiteral(s.to_string());
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let mut numerator = BigUint::zero();
        for c in int_part.chars().chain(frac_part.chars()) {
            match c {
                '0' => numerator = numerator << 1u8,
                '1' => numerator = (numerator << 1u8) | BigUint::one(),
                _ => return Err(bad()),
            }
        }
        Ok(DyadicRational::from_parts(numerator, frac_part.len() as u64))
    }
}

impl Add for DyadicRational {
    type Output = DyadicRational;

    fn add(self, other: DyadicRational) -> DyadicRational {
        let e = self.exponent.max(other.exponent);
        let a = self.numerator << (e - self.exponent);
        let b = other.numerator << (e - other.exponent);
        DyadicRational::from_parts(a + b, e)
    }
}

impl AddAssign for DyadicRational {
    fn add_assign(&mut self, other: DyadicRational) {
        *self = self.clone() + other;
    }
}

impl Ord for DyadicRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        let a = &self.numerator << (e - self.exponent);
        let b = &other.numerator << (e - other.exponent);
        a.cmp(&b)
    }
}

impl PartialOrd for DyadicRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_binary_string())
    }
}

impl fmt::Debug for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_binary_string())
    }
}

impl FromStr for DyadicRational {
    type Err = BitsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        DyadicRational::parse_binary(s)
    }
}

impl Serialize for DyadicRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_binary_string())
    }
}

impl<'de> Deserialize<'de> for DyadicRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        DyadicRational::parse_binary(&s).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str) -> DyadicRational {
        DyadicRational::parse_binary(s).unwrap()
    }

    #[test]
    fn normalization() {
        let a = DyadicRational::from_parts(4u32.into(), 4);
        assert_eq!(a, DyadicRational::pow2_neg(2));
        assert_eq!(a.numerator(), &BigUint::one());
        assert_eq!(a.exponent(), 2);
        assert_eq!(DyadicRational::from_parts(0u32.into(), 7).exponent(), 0);
    }

    #[test]
    fn addition_is_exact() {
        // 2^-5 + 2^-6 + 2^-3 = 0.001011
        let s = DyadicRational::pow2_neg(5) + DyadicRational::pow2_neg(6) + DyadicRational::pow2_neg(3);
        assert_eq!(s, d("0.001011"));
        assert_eq!(s.to_binary_string(), "0.001011");
    }

    #[test]
    fn subtraction_and_ordering() {
        let s = d("0.001011");
        assert_eq!(s.checked_sub(&d("0.001")).unwrap(), d("0.000011"));
        assert_eq!(d("0.001").checked_sub(&s), None);
        assert!(d("0.0001") < d("0.001"));
        assert!(d("1") > d("0.111111"));
    }

    #[test]
    fn render_and_parse_round_trip() {
        for s in ["0", "1", "0.0001", "0.001011", "1.1", "10.01"] {
            assert_eq!(d(s).to_binary_string(), s);
        }
        assert!(DyadicRational::parse_binary("0.21").is_err());
        assert!(DyadicRational::parse_binary("").is_err());
    }

    #[test]
    fn truncation_and_fraction_bits() {
        let s = d("0.001011");
        assert_eq!(s.truncate_fraction(3), d("0.001"));
        assert_eq!(s.truncate_fraction(6), s);
        assert_eq!(s.fraction_bits(4).to_string(), "0010");
        assert_eq!(s.fraction_bits(8).to_string(), "00101100");
        assert_eq!(DyadicRational::zero().fraction_bits(3).to_string(), "000");
    }
}
