//! Fixtures for the benchmark targets: inputs big enough to measure, small
//! enough to iterate quickly.

use abpair::{canonical_map, BilinearMap, FinAbGroup};

pub fn group(factors: &[u64]) -> FinAbGroup {
    FinAbGroup::new(factors.to_vec()).expect("benchmark fixtures use valid factors")
}

/// Canonical map with a nontrivial kernel on both sides, so quotienting it
/// does real coset work.
pub fn degenerate_map() -> BilinearMap {
    canonical_map(&group(&[16, 3]), &group(&[4, 9]))
}
