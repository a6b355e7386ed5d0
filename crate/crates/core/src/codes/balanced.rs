//! Enumerative codec for fixed-weight strings: rank/unrank in the
//! lexicographic order of all n-bit strings with k ones. Ranking a balanced
//! string into ceil(log C(n, n/2)) bits beats the n-bit identity encoding,
//! which is the compressibility-given-n demonstration.

use super::CodesError;
use crate::bits::{BitString, Natural};
use num_traits::{One, Zero};

/// Binomial coefficient C(n, k).
pub fn binomial(n: u64, k: u64) -> Natural {
    if k > n {
        return Natural::zero();
    }
    let k = k.min(n - k);
    let mut result = Natural::one();
    for i in 1..=k {
        result = result * Natural::from(n - (k - i)) / Natural::from(i);
    }
    result
}

/// Position of `x` in the lexicographic order of all strings with its
/// length and weight.
pub fn balanced_rank(x: &BitString) -> Natural {
    let n = x.len() as u64;
    let mut ones_left = x.weight() as u64;
    let mut rank = Natural::zero();
    for (i, bit) in x.iter().enumerate() {
        let remaining = n - i as u64 - 1;
        if bit {
            // Every string with a 0 here (and the same prefix) comes first.
            rank += binomial(remaining, ones_left);
            ones_left -= 1;
        }
    }
    rank
}

/// Inverse of [`balanced_rank`]: the `rank`-th n-bit string with `k` ones.
pub fn balanced_unrank(n: u64, k: u64, rank: &Natural) -> Result<BitString, CodesError> {
    let count = binomial(n, k);
    if *rank >= count {
        return Err(CodesError::RankOutOfRange {
            rank: rank.to_string(),
            count: count.to_string(),
        });
    }
    let mut rank = rank.clone();
    let mut ones_left = k;
    let mut out = BitString::empty();
    for i in 0..n {
        let remaining = n - i - 1;
        let zero_block = binomial(remaining, ones_left);
        if rank < zero_block {
            out.push(false);
        } else {
            rank -= zero_block;
            out.push(true);
            ones_left -= 1;
        }
    }
    Ok(out)
}

/// Validate the weight of `x` against `k` before ranking.
pub fn checked_rank(x: &BitString, k: usize) -> Result<Natural, CodesError> {
    if x.weight() != k {
        return Err(CodesError::WrongWeight {
            expected: k,
            actual: x.weight(),
        });
    }
    Ok(balanced_rank(x))
}

/// Codeword length of the enumerative code for n-bit strings with k ones.
pub fn rank_code_length(n: u64, k: u64) -> u64 {
    let count = binomial(n, k);
    if count <= Natural::one() {
        0
    } else {
        (count - Natural::one()).bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bs(s: &str) -> BitString {
        s.parse().unwrap()
    }

    #[test]
    fn two_bit_examples() {
        assert_eq!(balanced_rank(&bs("01")), Natural::zero());
        assert_eq!(balanced_rank(&bs("10")), Natural::one());
    }

    #[test]
    fn four_choose_two() {
        assert_eq!(binomial(4, 2), Natural::from(6u32));
        assert_eq!(rank_code_length(4, 2), 3); // ceil(log 6) = 3 < 4
        assert_eq!(balanced_unrank(4, 2, &Natural::zero()).unwrap(), bs("0011"));
    }

    #[test]
    fn rank_matches_enumeration_order() {
        // Oracle: enumerate all 6-bit strings of weight 3 lexicographically.
        let mut expected = 0u32;
        for x in BitString::all_of_len(6) {
            if x.weight() == 3 {
                assert_eq!(balanced_rank(&x), Natural::from(expected));
                assert_eq!(balanced_unrank(6, 3, &Natural::from(expected)).unwrap(), x);
                expected += 1;
            }
        }
        assert_eq!(Natural::from(expected), binomial(6, 3));
    }

    #[test]
    fn round_trip_exhaustive() {
        for n in 0..=16usize {
            for x in BitString::all_of_len(n) {
                let k = x.weight() as u64;
                let r = balanced_rank(&x);
                assert_eq!(balanced_unrank(n as u64, k, &r).unwrap(), x);
            }
        }
    }

    #[test]
    fn weight_and_range_errors() {
        assert!(matches!(
            checked_rank(&bs("0011"), 3),
            Err(CodesError::WrongWeight { expected: 3, actual: 2 })
        ));
        assert!(matches!(
            balanced_unrank(4, 2, &Natural::from(6u32)),
            Err(CodesError::RankOutOfRange { .. })
        ));
    }

    #[test]
    fn code_length_beats_identity_for_balanced_strings() {
        for n in (2..=16u64).step_by(2) {
            assert!(rank_code_length(n, n / 2) < n);
        }
    }
}
