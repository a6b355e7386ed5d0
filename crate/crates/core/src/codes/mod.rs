//! Code tables and codecs: classification into the four code classes, Kraft
//! verification and construction, self-delimiting and pairing codecs, and
//! the enumerative balanced-string codec.

mod balanced;
mod sardinas;
mod selfdelim;

pub use balanced::{balanced_rank, balanced_unrank, binomial, checked_rank, rank_code_length};
pub use selfdelim::{pair_decode, pair_encode, selfdelim_decode, selfdelim_encode, Scheme};

use crate::bits::{BitString, DyadicRational, PrefixTree};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CodesError {
    #[error("empty code")]
    EmptyCode,
    #[error("codeword lengths must be >= 1 (the empty codeword prefixes everything)")]
    ZeroLength,
    #[error("length profile violates the Kraft inequality (sum {sum})")]
    KraftViolation { sum: String },
    #[error("decode error at bit {position}: {reason}")]
    Decode { position: usize, reason: String },
    #[error("{0} cannot be encoded in this scheme: its length 0 has no numeral")]
    EmptyStringLength(BitString),
    #[error("value {value} exceeds the unary-encoding cap {cap}")]
    UnaryCap { value: String, cap: String },
    #[error("string has {actual} ones, expected {expected}")]
    WrongWeight { expected: usize, actual: usize },
    #[error("rank {rank} out of range: only {count} strings of this shape")]
    RankOutOfRange { rank: String, count: String },
}

/// A code table: an ordered source alphabet and one codeword per symbol.
/// Duplicate codewords are representable (singular codes).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Code {
    entries: Vec<(String, BitString)>,
}

impl Code {
    pub fn new(entries: Vec<(String, BitString)>) -> Self {
        Code { entries }
    }

    pub fn entries(&self) -> &[(String, BitString)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn codewords(&self) -> impl Iterator<Item = &BitString> {
        self.entries.iter().map(|(_, w)| w)
    }

    pub fn length_profile(&self) -> LengthProfile {
        LengthProfile::new(self.codewords().map(|w| w.len() as u64).collect())
    }

    /// Symbols in table order as a map for JSON interchange.
    pub fn to_map(&self) -> BTreeMap<String, String> {
        self.entries
            .iter()
            .map(|(s, w)| (s.clone(), w.to_string()))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeClass {
    Singular,
    NonsingularNotUd,
    UniquelyDecodableNotPrefix,
    Prefix,
}

impl std::fmt::Display for CodeClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CodeClass::Singular => "singular",
            CodeClass::NonsingularNotUd => "nonsingular-not-UD",
            CodeClass::UniquelyDecodableNotPrefix => "uniquely-decodable-not-prefix",
            CodeClass::Prefix => "prefix",
        };
        f.write_str(s)
    }
}

/// Two distinct symbol sequences whose encodings are the same bit stream.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmbiguityWitness {
    pub stream: BitString,
    pub parse_a: Vec<String>,
    pub parse_b: Vec<String>,
}

impl AmbiguityWitness {
    /// Both parses must re-encode to the witness stream and must differ.
    pub fn is_valid_for(&self, code: &Code) -> bool {
        if self.parse_a == self.parse_b {
            return false;
        }
        let encode = |symbols: &[String]| -> Option<BitString> {
            let mut out = BitString::empty();
            for s in symbols {
                let (_, w) = code.entries.iter().find(|(sym, _)| sym == s)?;
                out = out.concat(w);
            }
            Some(out)
        };
        encode(&self.parse_a).as_ref() == Some(&self.stream)
            && encode(&self.parse_b).as_ref() == Some(&self.stream)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub class: CodeClass,
    pub witness: Option<AmbiguityWitness>,
}

/// Exact class of a code, with a shortest ambiguous stream as witness when
/// the code is nonsingular but not uniquely decodable.
pub fn classify(code: &Code) -> Result<ClassificationResult, CodesError> {
    if code.is_empty() {
        return Err(CodesError::EmptyCode);
    }

    let mut seen: BTreeMap<&BitString, &str> = BTreeMap::new();
    for (sym, w) in &code.entries {
        if seen.insert(w, sym).is_some() {
            return Ok(ClassificationResult {
                class: CodeClass::Singular,
                witness: None,
            });
        }
    }

    let words: Vec<&BitString> = code.codewords().collect();
    let is_prefix = words
        .iter()
        .enumerate()
        .all(|(i, w)| !words.iter().enumerate().any(|(j, v)| i != j && w.is_prefix_of(v)));
    if is_prefix {
        return Ok(ClassificationResult {
            class: CodeClass::Prefix,
            witness: None,
        });
    }

    match sardinas::shortest_ambiguous_stream(code) {
        None => Ok(ClassificationResult {
            class: CodeClass::UniquelyDecodableNotPrefix,
            witness: None,
        }),
        Some(witness) => {
            debug_assert!(witness.is_valid_for(code));
            Ok(ClassificationResult {
                class: CodeClass::NonsingularNotUd,
                witness: Some(witness),
            })
        }
    }
}

/// Multiset of codeword lengths.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LengthProfile(Vec<u64>);

impl LengthProfile {
    pub fn new(lengths: Vec<u64>) -> Self {
        LengthProfile(lengths)
    }

    pub fn lengths(&self) -> &[u64] {
        &self.0
    }
}

/// Exact Kraft sum and whether the profile is achievable by a prefix code.
pub fn kraft_sum(profile: &LengthProfile) -> Result<(DyadicRational, bool), CodesError> {
    let mut sum = DyadicRational::zero();
    for &l in profile.lengths() {
        if l == 0 {
            return Err(CodesError::ZeroLength);
        }
        sum += DyadicRational::pow2_neg(l);
    }
    let satisfiable = sum <= DyadicRational::one();
    Ok((sum, satisfiable))
}

/// Build prefix codewords with exactly the requested lengths, assigning the
/// lexicographically first node at each depth in nondecreasing length order.
pub fn kraft_construct(profile: &LengthProfile) -> Result<Vec<BitString>, CodesError> {
    let (sum, satisfiable) = kraft_sum(profile)?;
    if !satisfiable {
        return Err(CodesError::KraftViolation {
            sum: sum.to_binary_string(),
        });
    }
    let mut lengths = profile.lengths().to_vec();
    lengths.sort_unstable();
    let mut tree = PrefixTree::new();
    let mut words = Vec::with_capacity(lengths.len());
    for l in lengths {
        let node = tree
            .allocate_first_available(l)
            .map_err(|_| CodesError::KraftViolation {
                sum: sum.to_binary_string(),
            })?;
        words.push(node);
    }
    Ok(words)
}
