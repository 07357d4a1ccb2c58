//! Convex-hull dynamics of cyclic permutations and exact discretization of
//! piecewise-linear covering systems.
//!
//! - [`perm`] and [`charseq`]: cyclic permutations, `convf`, characteristic
//!   numbers and sequences.
//! - [`markov`]: the containment digraph on adjacent pairs.
//! - [`enumerate`] and [`verify`]: exhaustive, sharded checking of the index
//!   bound and partition witnesses.
//! - [`covering`]: rational PL maps, saturation, snapping, discrete covers and
//!   exact periodic points.

pub mod charseq;
pub mod covering;
pub mod enumerate;
pub mod markov;
pub mod perm;
pub mod verify;

pub use charseq::{
    characteristic_number, characteristic_sequence, characteristic_sequence_unchecked,
    check_index_bound, convf, BoundCheck, CharNumber, CharSeq,
};
pub use enumerate::{cyclic_count, CyclicPerms};
pub use markov::{CycleLength, MarkovGraph};
pub use perm::{CyclicPerm, IndexInterval, PermError};
pub use verify::{
    check_partition, exhaustive_partition_check, verify_degree, Partition, VerifyReport, Witness14,
};
