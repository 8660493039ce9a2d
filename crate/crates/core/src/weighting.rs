//! Weighting operators `T_h(f) = f h` and their adjoints on `F(M)`.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::free_vec::FreeVector;
use crate::lipschitz::{same_space, LipschitzFunction, WeightFunction};
use crate::metric::PointedMetricSpace;
use crate::scalar::{ceil_log2, Rational};
use crate::transport::norm;
use crate::weights::{weight_g, weight_h, weight_lambda, weight_pi};

/// `T_h` for a weight `h`, with the a-priori bound
/// `||h||_inf + rad(supp h) Lip(h)` cached.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightOperator {
    h: WeightFunction,
    bound: Rational,
}

impl WeightOperator {
    pub fn new(h: WeightFunction) -> Self {
        let bound = h.operator_norm_bound();
        Self { h, bound }
    }

    pub fn weight(&self) -> &WeightFunction {
        &self.h
    }

    pub fn space(&self) -> &Arc<PointedMetricSpace> {
        self.h.space()
    }

    pub fn norm_bound(&self) -> &Rational {
        &self.bound
    }

    /// `f h`.
    pub fn apply_to_function(&self, f: &LipschitzFunction) -> Result<LipschitzFunction> {
        f.multiply(&self.h)
    }

    /// `m ∘ T_h`: each coefficient `a_i` becomes `a_i h(x_i)`.
    pub fn adjoint_apply(&self, m: &FreeVector) -> Result<FreeVector> {
        if !same_space(m.space(), self.h.space()) {
            return Err(Error::SpaceMismatch);
        }
        Ok(m.map_coeffs(|i, a| a * self.h.value(i)))
    }

    /// Exact `||T_h||` as the largest norm of `m ∘ T_h` over molecules `m`.
    ///
    /// The unit ball of `F(M)` is the closed convex hull of molecules and
    /// `m -> ||m ∘ T_h||` is convex, so the supremum is attained there.
    pub fn operator_norm(&self) -> OperatorNorm {
        let space = self.space();
        let mut best = OperatorNorm {
            value: Rational::zero(),
            witness: None,
        };
        for x in 0..space.len() {
            for y in x + 1..space.len() {
                let mol = FreeVector::molecule(space.clone(), x, y);
                let v = norm(&self.adjoint_apply(&mol).expect("same space"));
                if v > best.value {
                    best = OperatorNorm {
                        value: v,
                        witness: Some((x, y)),
                    };
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorNorm {
    pub value: Rational,
    /// Molecule endpoints attaining the norm; `None` for the zero operator.
    pub witness: Option<(usize, usize)>,
}

/// One nonzero piece `m ∘ T_{Lambda_n}` of the dyadic decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct KaltonPart {
    pub n: i64,
    pub part: FreeVector,
    pub norm: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KaltonDecomposition {
    pub parts: Vec<KaltonPart>,
    pub norm: Rational,
    pub sum_of_norms: Rational,
}

impl KaltonDecomposition {
    /// `sum_n ||m ∘ T_{Lambda_n}|| / ||m||`, `None` for `m = 0`.
    pub fn ratio(&self) -> Option<Rational> {
        (!self.norm.is_zero()).then(|| &self.sum_of_norms / &self.norm)
    }

    pub fn reassemble(&self, space: &Arc<PointedMetricSpace>) -> FreeVector {
        self.parts
            .iter()
            .fold(FreeVector::zero(space.clone()), |acc, p| {
                acc.add(&p.part).expect("same space")
            })
    }
}

/// Index range outside of which every `m ∘ T_{Lambda_n}` vanishes on `supp m`.
pub fn kalton_range(m: &FreeVector) -> Option<(i64, i64)> {
    let space = m.space();
    let rhos: Vec<&Rational> = m.support().into_iter().map(|i| space.rho(i)).collect();
    let lo = rhos.iter().min()?;
    let hi = rhos.iter().max()?;
    Some((ceil_log2(lo) - 1, ceil_log2(hi)))
}

/// `{ m ∘ T_{Lambda_n} }` over the finitely many `n` giving a nonzero part.
pub fn kalton_parts(m: &FreeVector) -> KaltonDecomposition {
    let space = m.space();
    let total = norm(m);
    let mut parts = Vec::new();
    if let Some((lo, hi)) = kalton_range(m) {
        for n in lo..=hi {
            let op = WeightOperator::new(weight_lambda(space, n));
            let part = op.adjoint_apply(m).expect("same space");
            if !part.is_zero() {
                let pn = norm(&part);
                parts.push(KaltonPart { n, part, norm: pn });
            }
        }
    }
    let sum_of_norms = parts.iter().map(|p| p.norm.clone()).sum();
    KaltonDecomposition {
        parts,
        norm: total,
        sum_of_norms,
    }
}

/// Finite evaluation of the six separation classes, with witnesses.
#[derive(Debug, Clone, PartialEq)]
pub struct SeparationClassReport {
    pub concentrated_at_infinity: bool,
    pub avoids_infinity: bool,
    /// Smallest `n >= 1` with `m ∘ T_{H_n} = m`.
    pub strongly_bounded: Option<i64>,
    pub concentrated_at_zero: bool,
    pub avoids_zero: bool,
    /// Smallest `n >= 1` with `m ∘ T_{G_{-n}} = m`.
    pub avoids_zero_strongly: Option<i64>,
    /// Part at the base point, `lim m ∘ T_{H_{-n}}`.
    pub part_at_zero: FreeVector,
    /// Part away from 0 and infinity, `lim m ∘ T_{Pi_n}`.
    pub part_finite: FreeVector,
    /// Part at infinity, `lim m ∘ T_{G_n}`.
    pub part_at_infinity: FreeVector,
    pub norm: Rational,
    pub norm_at_zero: Rational,
    pub norm_finite: Rational,
    pub norm_at_infinity: Rational,
}

impl SeparationClassReport {
    /// `||m|| = ||m_0|| + ||m_s|| + ||m_inf||`.
    pub fn norms_add_up(&self) -> bool {
        self.norm == &self.norm_at_zero + &self.norm_finite + &self.norm_at_infinity
    }
}

/// Smallest `n >= 1` with `2^{1-n} <= rho(x) <= 2^n` for every `x != 0`.
/// From there on every weight sequence used below is constant on the space.
fn stabilization_index(space: &PointedMetricSpace) -> i64 {
    let mut n = 1;
    for i in space.non_base() {
        let r = space.rho(i);
        n = n.max(ceil_log2(r)).max(1 - crate::scalar::floor_log2(r));
    }
    n
}

pub fn class_report(m: &FreeVector) -> SeparationClassReport {
    let space = m.space();
    let stop = stabilization_index(space);
    let apply = |h: WeightFunction| WeightOperator::new(h).adjoint_apply(m).expect("same space");

    let h_parts: Vec<FreeVector> = (1..=stop).map(|n| apply(weight_h(space, n))).collect();
    let g_neg_parts: Vec<FreeVector> = (1..=stop).map(|n| apply(weight_g(space, -n))).collect();

    let concentrated_at_infinity = h_parts.iter().all(FreeVector::is_zero);
    let avoids_infinity = h_parts.last().expect("stop >= 1") == m;
    let strongly_bounded = h_parts.iter().position(|p| p == m).map(|k| k as i64 + 1);
    let concentrated_at_zero = g_neg_parts.iter().all(FreeVector::is_zero);
    let avoids_zero = g_neg_parts.last().expect("stop >= 1") == m;
    let avoids_zero_strongly = g_neg_parts
        .iter()
        .position(|p| p == m)
        .map(|k| k as i64 + 1);

    let part_at_zero = apply(weight_h(space, -stop));
    let part_at_infinity = apply(weight_g(space, stop));
    let part_finite = apply(weight_pi(space, stop as u32));

    SeparationClassReport {
        concentrated_at_infinity,
        avoids_infinity,
        strongly_bounded,
        concentrated_at_zero,
        avoids_zero,
        avoids_zero_strongly,
        norm: norm(m),
        norm_at_zero: norm(&part_at_zero),
        norm_finite: norm(&part_finite),
        norm_at_infinity: norm(&part_at_infinity),
        part_at_zero,
        part_finite,
        part_at_infinity,
    }
}

/// Identity weight `h ≡ 1`.
pub fn identity(space: Arc<PointedMetricSpace>) -> WeightOperator {
    WeightOperator::new(WeightFunction::constant(space, Rational::one()))
}

/// Whether `h` is a valid weight for the standard-family checks (`0 <= h <= 1`).
pub fn is_unit_range(h: &WeightFunction) -> bool {
    h.values()
        .iter()
        .all(|v| !v.is_negative() && *v <= Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, pow2, ratio};
    use crate::weights::h_at;

    fn triangle() -> Arc<PointedMetricSpace> {
        let d = [[0, 1, 2], [1, 0, 1], [2, 1, 0]];
        Arc::new(
            PointedMetricSpace::validate(
                vec!["0".into(), "a".into(), "b".into()],
                d.iter()
                    .map(|r| r.iter().map(|&x| int(x)).collect())
                    .collect(),
                0,
            )
            .unwrap(),
        )
    }

    fn line(coords: &[Rational]) -> Arc<PointedMetricSpace> {
        let names = (0..coords.len()).map(|i| format!("p{i}")).collect();
        Arc::new(PointedMetricSpace::from_line(names, coords, 0).unwrap())
    }

    #[test]
    fn identity_weight() {
        let s = triangle();
        let id = identity(s.clone());
        let rho = LipschitzFunction::rho(s.clone());
        assert_eq!(id.apply_to_function(&rho).unwrap(), rho);
        let m = FreeVector::canonicalize(s.clone(), [(1, int(2)), (2, int(-1))]).unwrap();
        assert_eq!(id.adjoint_apply(&m).unwrap(), m);
        assert_eq!(id.operator_norm().value, int(1));
    }

    #[test]
    fn large_h_is_identity() {
        let s = triangle();
        let op = WeightOperator::new(weight_h(&s, 1));
        let rho = LipschitzFunction::rho(s.clone());
        assert_eq!(op.apply_to_function(&rho).unwrap(), rho);
    }

    #[test]
    fn nonbase_indicator_weight_fixes_rho() {
        let s = triangle();
        let h = WeightFunction::new(s.clone(), vec![int(0), int(1), int(1)]).unwrap();
        let rho = LipschitzFunction::rho(s.clone());
        assert_eq!(WeightOperator::new(h).apply_to_function(&rho).unwrap(), rho);
    }

    #[test]
    fn adjoint_zeroes_outside_weight_support() {
        let s = triangle();
        let h = WeightFunction::new(s.clone(), vec![int(1), int(1), int(0)]).unwrap();
        let m = FreeVector::canonicalize(s.clone(), [(1, int(2)), (2, int(-1))]).unwrap();
        let out = WeightOperator::new(h).adjoint_apply(&m).unwrap();
        assert_eq!(out.support(), vec![1]);
    }

    #[test]
    fn adjoint_with_middle_branch() {
        // rho(a) = 2 = 2^1 (H_1 = 1), rho(b) = 3 in the ramp (H_1 = 1/2)
        let s = line(&[int(0), int(2), int(3)]);
        let m = FreeVector::canonicalize(s.clone(), [(1, int(1)), (2, int(1))]).unwrap();
        let out = WeightOperator::new(weight_h(&s, 1))
            .adjoint_apply(&m)
            .unwrap();
        assert_eq!(out.coeff(1), int(1));
        assert_eq!(out.coeff(2), int(2) - ratio(1, 2) * int(3));
        assert_eq!(out.coeff(2), h_at(&int(3), 1));
    }

    #[test]
    fn standard_operator_norms_respect_constants() {
        let s = line(&[int(0), ratio(1, 4), ratio(3, 4), int(1), int(3), int(5)]);
        for n in -3..4 {
            assert!(WeightOperator::new(weight_h(&s, n)).operator_norm().value <= int(3));
            assert!(WeightOperator::new(weight_g(&s, n)).operator_norm().value <= int(4));
            assert!(
                WeightOperator::new(weight_lambda(&s, n))
                    .operator_norm()
                    .value
                    <= int(5)
            );
        }
        for n in 0..4 {
            assert!(WeightOperator::new(weight_pi(&s, n)).operator_norm().value <= int(12));
        }
    }

    #[test]
    fn kalton_single_part_on_dyadic_radius() {
        for k in -3..4 {
            let s = line(&[int(0), pow2(k)]);
            let dec = kalton_parts(&FreeVector::delta(s.clone(), 1));
            assert_eq!(dec.parts.len(), 1);
            assert_eq!(dec.parts[0].n, k);
        }
        let s = triangle();
        assert!(kalton_parts(&FreeVector::zero(s)).parts.is_empty());
    }

    #[test]
    fn kalton_reassembles() {
        let s = line(&[int(0), ratio(1, 3), ratio(5, 7), int(2), int(3), int(11)]);
        let m = FreeVector::canonicalize(
            s.clone(),
            [
                (1, int(2)),
                (2, int(-3)),
                (3, ratio(1, 2)),
                (4, int(1)),
                (5, int(-1)),
            ],
        )
        .unwrap();
        let dec = kalton_parts(&m);
        assert_eq!(dec.reassemble(&s), m);
        assert!(dec.sum_of_norms <= int(45) * &dec.norm);
    }

    #[test]
    fn class_report_examples() {
        let s = triangle();
        let r = class_report(&FreeVector::delta(s.clone(), 1));
        assert!(!r.concentrated_at_infinity && !r.concentrated_at_zero);
        assert!(r.avoids_infinity && r.avoids_zero);
        assert_eq!(r.strongly_bounded, Some(1));
        // G_{-n}(a) = 1 iff rho(a) = 1 >= 2^{1-n}, first at n = 1
        assert_eq!(r.avoids_zero_strongly, Some(1));
        assert!(r.part_at_zero.is_zero() && r.part_at_infinity.is_zero());
        assert_eq!(r.part_finite, FreeVector::delta(s.clone(), 1));
        assert!(r.norms_add_up());

        let s2 = line(&[int(0), ratio(1, 5)]);
        let r = class_report(&FreeVector::delta(s2.clone(), 1));
        // 1/5 >= 2^{1-n} first at n = 4
        assert_eq!(r.avoids_zero_strongly, Some(4));

        let r = class_report(&FreeVector::zero(s));
        assert!(r.concentrated_at_infinity && r.concentrated_at_zero);
        assert!(r.avoids_infinity && r.avoids_zero);
    }
}
