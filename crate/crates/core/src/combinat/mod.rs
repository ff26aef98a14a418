//! Exact enumerators: pairings of `[[2n]]` with their weight statistic, maps
//! with prescribed fiber sizes with the inversion statistic, compositions and
//! partitions.

mod compositions;
mod fiber;
mod pairing;

pub use compositions::{
    compositions, partitions_at_most, Composition, CompositionIter, PartitionIter,
    MAX_COMPOSITION_TOTAL,
};
pub use fiber::{
    enumerate_fiber_maps, inv_generating, inversions, FiberMap, FiberMapIter, MAX_FIBER_TOTAL,
};
pub use pairing::{
    enumerate_pairings, pairing_count, pairing_json_line, pairing_weight, sum_pairing_weights,
    Pairing, PairingIter, MAX_PAIRING_N,
};

#[cfg(test)]
pub(crate) use fiber::next_permutation;
pub(crate) use pairing::{histogram_to_poly, weight_histogram};
