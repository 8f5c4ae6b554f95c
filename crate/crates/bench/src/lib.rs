//! Shared fixtures for the benchmarks.

use transversal_core::experiments::gen_random_collection;
use transversal_core::DigraphCollection;

/// A seeded collection at semi-degree at least ⌈n/2⌉.
pub fn dirac_collection(n: usize, seed: u64) -> DigraphCollection {
    gen_random_collection(n, n, 0.3, Some(n.div_ceil(2)), seed).expect("valid parameters").0
}
