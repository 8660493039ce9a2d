//! Reproducible random instances.
//!
//! All generators draw from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! a `u64` via `SeedableRng::seed_from_u64`, so a seed fully determines the
//! output on every platform.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::free_vec::FreeVector;
use crate::lipschitz::{LipschitzFunction, WeightFunction};
use crate::metric::PointedMetricSpace;
use crate::scalar::{ratio, Rational};

pub type InstanceRng = ChaCha8Rng;

pub const DEFAULT_SEED: u64 = 42;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn small_rational(rng: &mut InstanceRng, lo: i64, hi: i64) -> Rational {
    ratio(rng.gen_range(lo..=hi), rng.gen_range(1..=4))
}

/// A random rational metric on `n` points: the shortest-path closure of
/// random positive edge weights. The base point is the first point.
pub fn random_space(rng: &mut InstanceRng, n: usize) -> PointedMetricSpace {
    assert!(n >= 1);
    let mut d = vec![vec![Rational::from_integer(0.into()); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = small_rational(rng, 1, 12);
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    let labels = (0..n).map(|i| format!("x{i}")).collect();
    PointedMetricSpace::validate(labels, d, 0).expect("shortest-path closure is a metric")
}

/// Random signed coefficients on a random subset of the non-base points.
pub fn random_vector(rng: &mut InstanceRng, space: &Arc<PointedMetricSpace>) -> FreeVector {
    let raw: Vec<_> = space
        .non_base()
        .filter_map(|i| rng.gen_bool(0.7).then(|| (i, small_rational(rng, -6, 6))))
        .collect();
    FreeVector::canonicalize(space.clone(), raw).expect("indices in range")
}

/// Like [`random_vector`] with positive coefficients; never zero when the
/// space has a non-base point.
pub fn random_positive_vector(
    rng: &mut InstanceRng,
    space: &Arc<PointedMetricSpace>,
) -> FreeVector {
    let pts: Vec<usize> = space.non_base().collect();
    let mut raw: Vec<_> = pts
        .iter()
        .filter_map(|&i| rng.gen_bool(0.6).then(|| (i, small_rational(rng, 1, 6))))
        .collect();
    if raw.is_empty() && !pts.is_empty() {
        let i = pts[rng.gen_range(0..pts.len())];
        raw.push((i, small_rational(rng, 1, 6)));
    }
    FreeVector::canonicalize(space.clone(), raw).expect("indices in range")
}

/// Random values vanishing at the base point.
pub fn random_function(
    rng: &mut InstanceRng,
    space: &Arc<PointedMetricSpace>,
) -> LipschitzFunction {
    let values = (0..space.len())
        .map(|i| {
            if i == space.base() {
                Rational::from_integer(0.into())
            } else {
                small_rational(rng, -6, 6)
            }
        })
        .collect();
    LipschitzFunction::new(space.clone(), values).expect("zero at base")
}

/// Random weight with values in `[0, 1]`, often zero.
pub fn random_weight(rng: &mut InstanceRng, space: &Arc<PointedMetricSpace>) -> WeightFunction {
    let values = (0..space.len())
        .map(|_| {
            if rng.gen_bool(0.3) {
                Rational::from_integer(0.into())
            } else {
                let q = rng.gen_range(1..=6);
                ratio(rng.gen_range(0..=q), q)
            }
        })
        .collect();
    WeightFunction::new(space.clone(), values).expect("one value per point")
}

/// `len` molecules `(x, y, a)` with `x != y` and `a >= 0`.
pub fn random_molecule_family(
    rng: &mut InstanceRng,
    space: &PointedMetricSpace,
    len: usize,
) -> Vec<(usize, usize, Rational)> {
    let n = space.len();
    assert!(n >= 2);
    (0..len)
        .map(|_| {
            let x = rng.gen_range(0..n);
            let mut y = rng.gen_range(0..n - 1);
            if y >= x {
                y += 1;
            }
            (x, y, small_rational(rng, 0, 5))
        })
        .collect()
}

/// Random number of points in `lo..=hi`.
pub fn random_size(rng: &mut InstanceRng, lo: usize, hi: usize) -> usize {
    rng.gen_range(lo..=hi)
}
