//! Shared inputs for the audit benchmarks.

use propclust::generate::{generate, Family, GenSpec};
use propclust::Instance;

/// A seeded Euclidean instance with `N = C`.
pub fn euclidean(n: usize, k: usize, seed: u64) -> Instance {
    generate(&GenSpec::new(Family::Euclidean, n, k, seed)).and_then(|f| f.to_instance()).expect("generated instance is valid")
}
