//! Prunable binary prefix tree, represented sparsely.
//!
//! The tree tracks which node addresses are allocated and which subtrees are
//! cut. Free space is kept as maximal aligned dyadic blocks ordered by their
//! left endpoint, so "lexicographically first available node at depth d" is
//! the leftmost free block that still fits a depth-d cell.

use super::{BitsError, BitString, DyadicRational};
use num_bigint::BigUint;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone)]
pub struct PrefixTree {
    allocated: BTreeSet<BitString>,
    pruned: BTreeSet<BitString>,
    /// Free blocks: left endpoint -> depth of the block.
    free: BTreeMap<DyadicRational, u64>,
    mass: DyadicRational,
}

impl Default for PrefixTree {
    fn default() -> Self {
        PrefixTree::new()
    }
}

impl PrefixTree {
    pub fn new() -> Self {
        let mut free = BTreeMap::new();
        free.insert(DyadicRational::zero(), 0);
        PrefixTree {
            allocated: BTreeSet::new(),
            pruned: BTreeSet::new(),
            free,
            mass: DyadicRational::zero(),
        }
    }

    /// Allocate the lexicographically first available node at `depth`:
    /// the least depth-`depth` address with no allocated ancestor or
    /// descendant and no pruned ancestor. The node's subtree is cut.
    pub fn allocate_first_available(&mut self, depth: u64) -> Result<BitString, BitsError> {
        let key = self
            .free
            .iter()
            .find(|(_, &d)| d <= depth)
            .map(|(lower, _)| lower.clone())
            .ok_or(BitsError::TreeExhausted { depth })?;
        let block_depth = self.free.remove(&key).unwrap();

        // Carve the leftmost depth-d cell; the right sibling at every split
        // level becomes a new free block.
        for level in block_depth..depth {
            let buddy = key.clone() + DyadicRational::pow2_neg(level + 1);
            self.free.insert(buddy, level + 1);
        }

        let node = address_of(&key, depth);
        self.allocated.insert(node.clone());
        self.pruned.insert(node.child(false));
        self.pruned.insert(node.child(true));
        self.mass += DyadicRational::pow2_neg(depth);
        Ok(node)
    }

    /// Exact sum of `2^-depth` over allocated nodes.
    pub fn mass(&self) -> &DyadicRational {
        &self.mass
    }

    pub fn allocated(&self) -> impl Iterator<Item = &BitString> {
        self.allocated.iter()
    }

    pub fn allocated_count(&self) -> usize {
        self.allocated.len()
    }

    pub fn is_allocated(&self, node: &BitString) -> bool {
        self.allocated.contains(node)
    }

    /// Pruned subtree roots (children of allocated nodes).
    pub fn pruned(&self) -> impl Iterator<Item = &BitString> {
        self.pruned.iter()
    }

    /// Check that no allocated address is a prefix of another.
    pub fn is_prefix_free(&self) -> bool {
        let v: Vec<&BitString> = self.allocated.iter().collect();
        for i in 0..v.len() {
            for j in 0..v.len() {
                if i != j && v[i].is_prefix_of(v[j]) {
                    return false;
                }
            }
        }
        true
    }
}

fn address_of(lower: &DyadicRational, depth: u64) -> BitString {
    // lower is aligned to 2^-depth; the address is lower * 2^depth written
    // in `depth` bits.
    debug_assert!(lower.exponent() <= depth);
    let shifted: BigUint = lower.numerator() << (depth - lower.exponent());
    let digits = if lower.is_zero() {
        Vec::new()
    } else {
        shifted.to_radix_be(2)
    };
    let mut bits = Vec::with_capacity(depth as usize);
    bits.resize((depth as usize).saturating_sub(digits.len()), 0u8);
    bits.extend_from_slice(&digits);
    BitString::from_bits(bits.into_iter().map(|b| b == 1))
}
