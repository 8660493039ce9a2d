//! Finitely supported elements of the free space `F(M)`.
//!
//! An element is stored by its unique representing measure: nonzero
//! coefficients on non-base points. The evaluation functional at the base
//! point is zero, so it never carries a coefficient.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::lipschitz::{same_space, LipschitzFunction};
use crate::metric::PointedMetricSpace;
use crate::scalar::Rational;

/// `sum_i a_i δ(x_i)` in canonical form.
#[derive(Debug, Clone, PartialEq)]
pub struct FreeVector {
    space: Arc<PointedMetricSpace>,
    coeffs: BTreeMap<usize, Rational>,
}

impl FreeVector {
    pub fn zero(space: Arc<PointedMetricSpace>) -> Self {
        Self {
            space,
            coeffs: BTreeMap::new(),
        }
    }

    /// Merges duplicates, drops the base point and zero coefficients.
    pub fn canonicalize(
        space: Arc<PointedMetricSpace>,
        raw: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Result<Self> {
        let mut coeffs: BTreeMap<usize, Rational> = BTreeMap::new();
        for (i, a) in raw {
            if i >= space.len() {
                return Err(Error::UnknownPoint(i.to_string()));
            }
            if i == space.base() {
                continue;
            }
            *coeffs.entry(i).or_insert_with(Rational::zero) += a;
        }
        coeffs.retain(|_, a| !a.is_zero());
        Ok(Self { space, coeffs })
    }

    /// Like [`canonicalize`](Self::canonicalize) with points given by label.
    pub fn from_labels<'a>(
        space: Arc<PointedMetricSpace>,
        raw: impl IntoIterator<Item = (&'a str, Rational)>,
    ) -> Result<Self> {
        let raw = raw
            .into_iter()
            .map(|(l, a)| space.index_of(l).map(|i| (i, a)))
            .collect::<Result<Vec<_>>>()?;
        Self::canonicalize(space, raw)
    }

    /// The evaluation functional `δ(x)`.
    pub fn delta(space: Arc<PointedMetricSpace>, x: usize) -> Self {
        Self::canonicalize(space, [(x, Rational::from_integer(1.into()))])
            .expect("point index in range")
    }

    /// The molecule `(δ(x) - δ(y)) / d(x, y)`.
    pub fn molecule(space: Arc<PointedMetricSpace>, x: usize, y: usize) -> Self {
        assert_ne!(x, y, "molecule needs distinct points");
        let w = Rational::from_integer(1.into()) / space.dist(x, y);
        Self::canonicalize(space, [(x, w.clone()), (y, -w)]).expect("point indices in range")
    }

    pub fn space(&self) -> &Arc<PointedMetricSpace> {
        &self.space
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, Rational> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(&i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `<m, f> = sum_i a_i f(x_i)`.
    pub fn pair(&self, f: &LipschitzFunction) -> Result<Rational> {
        if !same_space(&self.space, f.space()) {
            return Err(Error::SpaceMismatch);
        }
        Ok(self.coeffs.iter().map(|(&i, a)| a * f.value(i)).sum())
    }

    /// Total mass of the representing measure.
    pub fn norm1(&self) -> Rational {
        self.coeffs.values().map(|a| a.abs()).sum()
    }

    /// Points carrying a nonzero coefficient, in index order.
    pub fn support(&self) -> Vec<usize> {
        self.coeffs.keys().copied().collect()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.values().all(|a| a.is_positive())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if !same_space(&self.space, &other.space) {
            return Err(Error::SpaceMismatch);
        }
        let raw = self
            .coeffs
            .iter()
            .chain(&other.coeffs)
            .map(|(&i, a)| (i, a.clone()));
        Self::canonicalize(self.space.clone(), raw)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.negate())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let raw = self.coeffs.iter().map(|(&i, a)| (i, a * c));
        Self::canonicalize(self.space.clone(), raw).expect("same support")
    }

    pub fn negate(&self) -> Self {
        self.scale(&Rational::from_integer((-1).into()))
    }

    /// Coefficientwise map, re-canonicalized.
    pub(crate) fn map_coeffs(&self, f: impl Fn(usize, &Rational) -> Rational) -> Self {
        let raw = self.coeffs.iter().map(|(&i, a)| (i, f(i, a)));
        Self::canonicalize(self.space.clone(), raw).expect("same support")
    }

    /// Splits `m` into molecules by greedily matching the largest positive
    /// coefficient with the most negative one. Whatever remains of one sign is
    /// returned as molecules to the base point.
    pub fn molecule_decompose(&self) -> MoleculeDecomposition {
        let mut rest = self.coeffs.clone();
        let mut molecules = Vec::new();
        loop {
            let pos = rest
                .iter()
                .filter(|(_, a)| a.is_positive())
                .fold(None::<(usize, &Rational)>, |best, (&i, a)| match best {
                    Some((_, b)) if b >= a => best,
                    _ => Some((i, a)),
                })
                .map(|(i, _)| i);
            let neg = rest
                .iter()
                .filter(|(_, a)| a.is_negative())
                .fold(None::<(usize, &Rational)>, |best, (&i, a)| match best {
                    Some((_, b)) if b <= a => best,
                    _ => Some((i, a)),
                })
                .map(|(i, _)| i);
            let (Some(x), Some(y)) = (pos, neg) else {
                break;
            };
            let t = rest[&x].clone().min(-rest[&y].clone());
            molecules.push(Molecule {
                x,
                y,
                weight: &t * self.space.dist(x, y),
            });
            for (i, delta) in [(x, -t.clone()), (y, t)] {
                let a = rest.get_mut(&i).expect("present");
                *a += delta;
                if a.is_zero() {
                    rest.remove(&i);
                }
            }
        }
        let base = self.space.base();
        let residuals = rest
            .into_iter()
            .map(|(x, c)| Molecule {
                x,
                y: base,
                weight: c * self.space.rho(x),
            })
            .collect();
        MoleculeDecomposition {
            molecules,
            residuals,
        }
    }
}

/// `weight * (δ(x) - δ(y)) / d(x, y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Molecule {
    pub x: usize,
    pub y: usize,
    pub weight: Rational,
}

impl Molecule {
    pub fn to_vector(&self, space: &Arc<PointedMetricSpace>) -> FreeVector {
        FreeVector::molecule(space.clone(), self.x, self.y).scale(&self.weight)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MoleculeDecomposition {
    /// Molecules between two non-base points.
    pub molecules: Vec<Molecule>,
    /// Leftover single-signed mass, written as molecules to the base point.
    pub residuals: Vec<Molecule>,
}

impl MoleculeDecomposition {
    pub fn reassemble(&self, space: &Arc<PointedMetricSpace>) -> FreeVector {
        self.molecules
            .iter()
            .chain(&self.residuals)
            .fold(FreeVector::zero(space.clone()), |acc, m| {
                acc.add(&m.to_vector(space)).expect("same space")
            })
    }

    /// `sum |weight|`, an upper bound for the free-space norm.
    pub fn total_weight(&self) -> Rational {
        self.molecules
            .iter()
            .chain(&self.residuals)
            .map(|m| m.weight.abs())
            .sum()
    }
}
