//! The standard dyadic weights `H_n`, `G_n`, `Lambda_n` and `Pi_n`.
//!
//! All four are functions of `rho = d(., 0)` only. `H_n` is 1 on the ball of
//! radius `2^n`, 0 outside the ball of radius `2^{n+1}` and linear in `rho`
//! in between.

use std::ops::RangeInclusive;
use std::sync::Arc;

use num_traits::One;

use crate::lipschitz::WeightFunction;
use crate::metric::PointedMetricSpace;
use crate::scalar::{ceil_log2, floor_log2, pow2, Rational};

/// Which standard weight to build.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    H,
    G,
    Lambda,
    Pi,
}

impl WeightKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "H" | "h" => Some(Self::H),
            "G" | "g" => Some(Self::G),
            "Lambda" | "lambda" | "L" => Some(Self::Lambda),
            "Pi" | "pi" | "P" => Some(Self::Pi),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::H => "H",
            Self::G => "G",
            Self::Lambda => "Lambda",
            Self::Pi => "Pi",
        }
    }

    /// Operator-norm ceiling for `T_h` with `h` of this kind.
    pub fn norm_ceiling(&self) -> Rational {
        let c = match self {
            Self::H => 3,
            Self::G => 4,
            Self::Lambda => 5,
            Self::Pi => 12,
        };
        crate::scalar::int(c)
    }

    /// Builds the weight; `Pi` requires `n >= 0`.
    pub fn build(&self, space: &Arc<PointedMetricSpace>, n: i64) -> Option<WeightFunction> {
        match self {
            Self::H => Some(weight_h(space, n)),
            Self::G => Some(weight_g(space, n)),
            Self::Lambda => Some(weight_lambda(space, n)),
            Self::Pi => u32::try_from(n).ok().map(|n| weight_pi(space, n)),
        }
    }
}

/// `H_n` evaluated at a point with `rho(x) = r`.
pub fn h_at(r: &Rational, n: i64) -> Rational {
    let lo = pow2(n);
    if *r <= lo {
        Rational::one()
    } else if *r >= pow2(n + 1) {
        Rational::from_integer(0.into())
    } else {
        Rational::from_integer(2.into()) - r / lo
    }
}

fn from_rho(space: &Arc<PointedMetricSpace>, f: impl Fn(&Rational) -> Rational) -> WeightFunction {
    let values = (0..space.len()).map(|i| f(space.rho(i))).collect();
    WeightFunction::new(space.clone(), values).expect("one value per point")
}

pub fn weight_h(space: &Arc<PointedMetricSpace>, n: i64) -> WeightFunction {
    from_rho(space, |r| h_at(r, n))
}

/// `G_n = 1 - H_n`.
pub fn weight_g(space: &Arc<PointedMetricSpace>, n: i64) -> WeightFunction {
    from_rho(space, |r| Rational::one() - h_at(r, n))
}

/// `Lambda_n = G_{n-1} H_n`.
pub fn weight_lambda(space: &Arc<PointedMetricSpace>, n: i64) -> WeightFunction {
    from_rho(space, |r| (Rational::one() - h_at(r, n - 1)) * h_at(r, n))
}

/// `Pi_n = G_{-(n+1)} H_n`.
pub fn weight_pi(space: &Arc<PointedMetricSpace>, n: u32) -> WeightFunction {
    let n = i64::from(n);
    from_rho(space, |r| {
        (Rational::one() - h_at(r, -(n + 1))) * h_at(r, n)
    })
}

/// Indices `n` for which `H_n`, `G_n` or `Lambda_n` is not constant on
/// the non-base points, padded by one on each side; outside this range the
/// operators are `0` or the identity. `None` when there is no non-base point.
pub fn relevant_indices(space: &PointedMetricSpace) -> Option<RangeInclusive<i64>> {
    let lo = space.non_base().map(|i| space.rho(i)).min()?;
    let hi = space.non_base().map(|i| space.rho(i)).max()?;
    Some(floor_log2(lo) - 2..=ceil_log2(hi) + 1)
}

/// Indices `n >= 0` for which `Pi_n` differs from its limit, plus one.
pub fn relevant_pi_indices(space: &PointedMetricSpace) -> RangeInclusive<u32> {
    let top = relevant_indices(space).map_or(0, |r| r.start().abs().max(r.end().abs()));
    0..=top as u32 + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use num_traits::Zero;

    fn line(coords: &[Rational]) -> Arc<PointedMetricSpace> {
        let names = (0..coords.len()).map(|i| format!("p{i}")).collect();
        Arc::new(PointedMetricSpace::from_line(names, coords, 0).unwrap())
    }

    fn sample_space() -> Arc<PointedMetricSpace> {
        line(&[
            int(0),
            ratio(1, 16),
            ratio(3, 16),
            ratio(1, 2),
            int(1),
            int(3),
            int(4),
            int(7),
            int(13),
        ])
    }

    #[test]
    fn middle_branch() {
        assert_eq!(h_at(&int(3), 1), ratio(1, 2));
        assert_eq!(h_at(&int(2), 1), int(1));
        assert_eq!(h_at(&int(4), 1), int(0));
        assert_eq!(h_at(&ratio(3, 2), 0), ratio(1, 2));
    }

    #[test]
    fn inside_ball_h_is_one_and_g_zero() {
        let s = sample_space();
        for n in -3..4 {
            let h = weight_h(&s, n);
            let g = weight_g(&s, n);
            for i in 0..s.len() {
                if *s.rho(i) <= pow2(n) {
                    assert_eq!(h.value(i), &int(1));
                    assert!(g.value(i).is_zero());
                }
            }
        }
    }

    #[test]
    fn pi_is_sum_of_lambdas() {
        let s = sample_space();
        for n in 0..5u32 {
            let pi = weight_pi(&s, n);
            for i in 0..s.len() {
                let sum: Rational = (-(n as i64)..=n as i64)
                    .map(|k| weight_lambda(&s, k).value(i).clone())
                    .sum();
                assert_eq!(pi.value(i), &sum, "n={n} point {i}");
            }
        }
    }

    #[test]
    fn lipschitz_and_range_bounds() {
        let s = sample_space();
        for n in -4..5 {
            let h = weight_h(&s, n);
            assert!(*h.lip_constant() <= pow2(-n));
            assert!(h.values().iter().all(|v| *v >= int(0) && *v <= int(1)));
            assert!(*h.support_radius() <= pow2(n + 1));
        }
    }

    #[test]
    fn semigroup_identities() {
        let s = sample_space();
        for m in -3..4 {
            for n in (-3..4).filter(|&n| n != m) {
                let hh = weight_h(&s, m).product(&weight_h(&s, n)).unwrap();
                assert_eq!(hh, weight_h(&s, m.min(n)));
                let gg = weight_g(&s, m).product(&weight_g(&s, n)).unwrap();
                assert_eq!(gg, weight_g(&s, m.max(n)));
            }
        }
        for m in 0..4u32 {
            for n in (0..4u32).filter(|&n| n != m) {
                let pp = weight_pi(&s, m).product(&weight_pi(&s, n)).unwrap();
                assert_eq!(pp, weight_pi(&s, m.min(n)));
            }
        }
    }

    #[test]
    fn equal_indices_are_not_idempotent() {
        // rho(p2) = 3/16 lies on the ramp of H_{-3}
        let s = sample_space();
        let h = weight_h(&s, -3);
        assert_eq!(h.value(2), &ratio(1, 2));
        assert_eq!(h.product(&h).unwrap().value(2), &ratio(1, 4));
    }

    #[test]
    fn lambdas_sum_to_one_off_base() {
        let s = sample_space();
        for i in s.non_base() {
            let sum: Rational = (-8..8).map(|k| weight_lambda(&s, k).value(i).clone()).sum();
            assert_eq!(sum, int(1));
        }
    }
}
