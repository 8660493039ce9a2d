//! Seeded instances shared by the benchmarks.

use std::sync::Arc;

use lipfree::random::{random_space, random_vector, rng};
use lipfree::FreeVector;

/// A nonzero random vector on a random `n`-point space.
pub fn instance(n: usize, seed: u64) -> FreeVector {
    let mut r = rng(seed);
    let space = Arc::new(random_space(&mut r, n));
    loop {
        let m = random_vector(&mut r, &space);
        if !m.is_zero() {
            return m;
        }
    }
}
