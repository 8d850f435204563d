//! Shared fixtures for the criterion benchmarks.

use fracsq::{build_squeeze_chain, SqueezeOrder, TridiagonalChain};

/// Squeeze chain for benchmarking; panics on invalid input.
pub fn chain(n: f64, size: usize) -> TridiagonalChain {
    build_squeeze_chain(SqueezeOrder::new(n).expect("order"), size).expect("chain")
}
