//! Fixtures shared by the benchmarks.

use qig_core::verify::{rng_for, sample_state, sample_tangent};
use qig_core::{HermitianMatrix, StateMatrix};

/// Deterministic density pair and traceless tangent of dimension `n`.
pub fn fixture(n: usize) -> (StateMatrix, StateMatrix, HermitianMatrix) {
    let mut rng = rng_for(2024, n as u64);
    let a = sample_state(&mut rng, n, true).expect("valid dimension");
    let b = sample_state(&mut rng, n, true).expect("valid dimension");
    let h = sample_tangent(&mut rng, n, true).expect("valid dimension");
    (a, b, h)
}

/// Dimensions swept by the benchmarks.
pub const DIMS: [usize; 4] = [2, 4, 8, 16];
