//! Lipschitz functions on a finite pointed metric space.
//!
//! [`LipschitzFunction`] is an element of `Lip0(M)` (vanishes at the base
//! point). [`WeightFunction`] is an element of `Lip(M)` with no constraint at
//! the base point; multiplying by a weight is the weighting operator.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::metric::PointedMetricSpace;
use crate::scalar::Rational;

pub(crate) fn same_space(a: &Arc<PointedMetricSpace>, b: &Arc<PointedMetricSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// `max_{i != j} |v_i - v_j| / d(i, j)`; zero on a singleton.
pub fn lip_constant_of(space: &PointedMetricSpace, values: &[Rational]) -> Rational {
    let n = space.len();
    let mut best = Rational::zero();
    for i in 0..n {
        for j in i + 1..n {
            let r = (&values[i] - &values[j]).abs() / space.dist(i, j);
            if r > best {
                best = r;
            }
        }
    }
    best
}

fn check_len(space: &PointedMetricSpace, values: &[Rational]) -> Result<()> {
    if values.len() != space.len() {
        return Err(Error::LengthMismatch {
            expected: space.len(),
            got: values.len(),
        });
    }
    Ok(())
}

/// An element of `Lip0(M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LipschitzFunction {
    space: Arc<PointedMetricSpace>,
    values: Vec<Rational>,
    lip: Rational,
}

impl LipschitzFunction {
    pub fn new(space: Arc<PointedMetricSpace>, values: Vec<Rational>) -> Result<Self> {
        check_len(&space, &values)?;
        if !values[space.base()].is_zero() {
            return Err(Error::NonzeroAtBase);
        }
        let lip = lip_constant_of(&space, &values);
        Ok(Self { space, values, lip })
    }

    pub fn zero(space: Arc<PointedMetricSpace>) -> Self {
        let values = vec![Rational::zero(); space.len()];
        Self {
            space,
            values,
            lip: Rational::zero(),
        }
    }

    /// `rho(x) = d(x, 0)`.
    pub fn rho(space: Arc<PointedMetricSpace>) -> Self {
        let values = (0..space.len()).map(|i| space.rho(i).clone()).collect();
        Self::new(space, values).expect("rho vanishes at the base point")
    }

    pub fn space(&self) -> &Arc<PointedMetricSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn lip_constant(&self) -> &Rational {
        &self.lip
    }

    pub fn sup(&self) -> &Rational {
        self.values.iter().max().expect("nonempty space")
    }

    pub fn inf(&self) -> &Rational {
        self.values.iter().min().expect("nonempty space")
    }

    pub fn is_nonnegative(&self) -> bool {
        self.values.iter().all(|v| !v.is_negative())
    }

    fn map(&self, f: impl Fn(&Rational) -> Rational) -> Self {
        let values: Vec<_> = self.values.iter().map(f).collect();
        Self::new(self.space.clone(), values).expect("pointwise map preserves f(0) = 0")
    }

    fn zip(&self, other: &Self, f: impl Fn(&Rational, &Rational) -> Rational) -> Result<Self> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| f(a, b))
            .collect();
        Self::new(self.space.clone(), values)
    }

    /// Pointwise minimum `f ∧ g`.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.min(b).clone())
    }

    /// Pointwise maximum `f ∨ g`.
    pub fn join(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a.max(b).clone())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip(other, |a, b| a - b)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        self.map(|a| a * c)
    }

    pub fn abs(&self) -> Self {
        self.map(|a| a.abs())
    }

    pub fn pos_part(&self) -> Self {
        self.map(|a| {
            if a.is_positive() {
                a.clone()
            } else {
                Rational::zero()
            }
        })
    }

    pub fn neg_part(&self) -> Self {
        self.map(|a| {
            if a.is_negative() {
                -a
            } else {
                Rational::zero()
            }
        })
    }

    /// The product `f h`, i.e. `T_h(f)`.
    pub fn multiply(&self, h: &WeightFunction) -> Result<Self> {
        if !same_space(&self.space, &h.space) {
            return Err(Error::SpaceMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&h.values)
            .map(|(a, b)| a * b)
            .collect();
        Self::new(self.space.clone(), values)
    }

    /// Reinterprets the function as a weight in `Lip(M)`.
    pub fn to_weight(&self) -> WeightFunction {
        WeightFunction::new(self.space.clone(), self.values.clone()).expect("same length")
    }
}

/// McShane extension of `values` given on `subset`, clamped to the range of
/// the data. Returns values on the whole space.
fn mcshane_values(
    space: &PointedMetricSpace,
    subset: &[usize],
    values: &[Rational],
) -> Vec<Rational> {
    let mut lip = Rational::zero();
    for (a, &i) in subset.iter().enumerate() {
        for (b, &j) in subset.iter().enumerate().skip(a + 1) {
            if i != j {
                let r = (&values[a] - &values[b]).abs() / space.dist(i, j);
                if r > lip {
                    lip = r;
                }
            }
        }
    }
    let hi = values.iter().max().expect("nonempty subset").clone();
    let lo = values.iter().min().expect("nonempty subset").clone();
    (0..space.len())
        .map(|x| {
            let inf_conv = subset
                .iter()
                .zip(values)
                .map(|(&y, fy)| fy + &lip * space.dist(x, y))
                .min()
                .expect("nonempty subset");
            inf_conv.max(lo.clone()).min(hi.clone())
        })
        .collect()
}

/// Extends `f` from `subset` (which must contain the base point, where `f`
/// vanishes) to the whole space with the same Lipschitz constant, supremum
/// and infimum.
pub fn mcshane_extend(
    space: Arc<PointedMetricSpace>,
    subset: &[usize],
    values: &[Rational],
) -> Result<LipschitzFunction> {
    if subset.is_empty() {
        return Err(Error::EmptySubset);
    }
    if subset.len() != values.len() {
        return Err(Error::LengthMismatch {
            expected: subset.len(),
            got: values.len(),
        });
    }
    if let Some(&bad) = subset.iter().find(|&&i| i >= space.len()) {
        return Err(Error::UnknownPoint(bad.to_string()));
    }
    let base_pos = subset
        .iter()
        .position(|&i| i == space.base())
        .ok_or(Error::BaseNotInSubset)?;
    if !values[base_pos].is_zero() {
        return Err(Error::NonzeroAtBase);
    }
    for (a, &i) in subset.iter().enumerate() {
        for (b, &j) in subset.iter().enumerate() {
            if i == j && values[a] != values[b] {
                return Err(Error::Precondition(format!(
                    "conflicting values at {}",
                    space.label(i)
                )));
            }
        }
    }
    let ext = mcshane_values(&space, subset, values);
    LipschitzFunction::new(space, ext)
}

/// An element of `Lip(M)` used as a multiplier.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightFunction {
    space: Arc<PointedMetricSpace>,
    values: Vec<Rational>,
    lip: Rational,
    support: Vec<usize>,
    support_radius: Rational,
}

impl WeightFunction {
    pub fn new(space: Arc<PointedMetricSpace>, values: Vec<Rational>) -> Result<Self> {
        check_len(&space, &values)?;
        let lip = lip_constant_of(&space, &values);
        let support: Vec<usize> = (0..values.len())
            .filter(|&i| !values[i].is_zero())
            .collect();
        let support_radius = if support.is_empty() {
            Rational::zero()
        } else {
            space.radius(&support)?
        };
        Ok(Self {
            space,
            values,
            lip,
            support,
            support_radius,
        })
    }

    pub fn constant(space: Arc<PointedMetricSpace>, c: Rational) -> Self {
        let values = vec![c; space.len()];
        Self::new(space, values).expect("length matches")
    }

    pub fn space(&self) -> &Arc<PointedMetricSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Rational {
        &self.values[i]
    }

    pub fn lip_constant(&self) -> &Rational {
        &self.lip
    }

    /// `{x : h(x) != 0}` in index order.
    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// `rad(supp h)`, zero for the zero weight.
    pub fn support_radius(&self) -> &Rational {
        &self.support_radius
    }

    pub fn sup_norm(&self) -> Rational {
        self.values
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// `||h||_inf + rad(supp h) * Lip(h)`, an upper bound for `||T_h||`.
    pub fn operator_norm_bound(&self) -> Rational {
        self.sup_norm() + &self.support_radius * &self.lip
    }

    pub fn product(&self, other: &Self) -> Result<Self> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a * b)
            .collect();
        Self::new(self.space.clone(), values)
    }

    /// `1 - h`.
    pub fn complement(&self) -> Self {
        let values = self.values.iter().map(|v| Rational::one() - v).collect();
        Self::new(self.space.clone(), values).expect("length matches")
    }
}
