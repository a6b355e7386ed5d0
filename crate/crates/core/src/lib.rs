//! Executable algorithmic information theory at desk scale.
//!
//! The crate is organized around six subsystems:
//!
//! - [`bits`]: finite bit strings, the string/number bijection, cylinders,
//!   exact dyadic arithmetic, and the prunable prefix tree.
//! - [`codes`]: code tables and their classification, Kraft verification and
//!   construction, self-delimiting codecs, pairing, and the balanced-string
//!   enumerative codec.
//! - [`entropy`]: Shannon entropy functionals, chain-rule and
//!   data-processing probes, and Shannon-Fano code construction.
//! - [`machine`]: single-tape machines, their canonical bit encoding and
//!   effective enumeration, the universal machine, and the three-tape
//!   self-delimiting variant.
//! - [`dovetail`]: interleaved execution over program space, halting tables,
//!   halting-probability lower semi-computation, complexity upper bounds,
//!   busy beaver, and censuses.
//! - [`coding`]: the node-allocation machine that turns halting events into
//!   prefix codewords, and the semimeasure-to-programs interval construction.

pub mod bits;
pub mod codes;
pub mod coding;
pub mod dovetail;
pub mod entropy;
pub mod machine;
