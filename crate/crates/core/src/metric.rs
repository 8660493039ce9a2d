//! Finite pointed metric spaces.

use std::collections::HashMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::Rational;

/// A validated finite metric space with a distinguished base point.
///
/// Distances are exact rationals. Points are addressed by their index in
/// input order; labels are kept for reporting.
#[derive(Debug, Clone)]
pub struct PointedMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
    base: usize,
    index: HashMap<String, usize>,
}

impl PartialEq for PointedMetricSpace {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.base == other.base && self.dist == other.dist
    }
}

impl Eq for PointedMetricSpace {}

impl PointedMetricSpace {
    /// Checks every metric axiom and returns the space, or the first violation.
    pub fn validate(labels: Vec<String>, dist: Vec<Vec<Rational>>, base: usize) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::EmptySpace);
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::ShapeMismatch {
                labels: n,
                rows: dist.len(),
                cols: dist.iter().map(Vec::len).find(|&c| c != n).unwrap_or(n),
            });
        }
        let mut index = HashMap::with_capacity(n);
        for (i, l) in labels.iter().enumerate() {
            if index.insert(l.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        if base >= n {
            return Err(Error::BadBaseIndex(base.to_string()));
        }
        let lab = |i: usize| labels[i].clone();
        for i in 0..n {
            if !dist[i][i].is_zero() {
                return Err(Error::NonzeroDiagonal(lab(i)));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if dist[i][j].is_negative() {
                    return Err(Error::NegativeDistance(lab(i), lab(j)));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if dist[i][j] != dist[j][i] {
                    return Err(Error::AsymmetricDistance(lab(i), lab(j)));
                }
                if dist[i][j].is_zero() {
                    return Err(Error::ZeroDistanceDistinctPoints(lab(i), lab(j)));
                }
            }
        }
        for i in 0..n {
            for k in i + 1..n {
                for j in 0..n {
                    if dist[i][k] > &dist[i][j] + &dist[j][k] {
                        return Err(Error::TriangleViolation(lab(i), lab(j), lab(k)));
                    }
                }
            }
        }
        Ok(Self {
            labels,
            dist,
            base,
            index,
        })
    }

    /// Like [`validate`](Self::validate) but the base point is given by label.
    pub fn validate_labeled(
        labels: Vec<String>,
        dist: Vec<Vec<Rational>>,
        base: &str,
    ) -> Result<Self> {
        let b = labels
            .iter()
            .position(|l| l == base)
            .ok_or_else(|| Error::BadBaseIndex(base.to_string()))?;
        Self::validate(labels, dist, b)
    }

    /// Points on the real line; `base` indexes into `coords`.
    pub fn from_line(labels: Vec<String>, coords: &[Rational], base: usize) -> Result<Self> {
        let dist = coords
            .iter()
            .map(|a| coords.iter().map(|b| (a - b).abs()).collect())
            .collect();
        Self::validate(labels, dist, base)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn dist(&self, i: usize, j: usize) -> &Rational {
        &self.dist[i][j]
    }

    pub fn matrix(&self) -> &[Vec<Rational>] {
        &self.dist
    }

    /// Distance to the base point.
    pub fn rho(&self, i: usize) -> &Rational {
        &self.dist[i][self.base]
    }

    /// Indices of all points except the base, in input order.
    pub fn non_base(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| i != self.base)
    }

    fn check_subset(&self, set: &[usize]) -> Result<()> {
        match set.iter().find(|&&i| i >= self.len()) {
            Some(i) => Err(Error::UnknownPoint(i.to_string())),
            None => Ok(()),
        }
    }

    /// `rad(A) = max_{a in A} d(a, 0)`.
    pub fn radius(&self, set: &[usize]) -> Result<Rational> {
        self.check_subset(set)?;
        set.iter()
            .map(|&a| self.rho(a))
            .max()
            .cloned()
            .ok_or(Error::EmptySet)
    }

    /// `diam(A) = max_{a,b in A} d(a, b)`.
    pub fn diameter(&self, set: &[usize]) -> Result<Rational> {
        self.check_subset(set)?;
        if set.is_empty() {
            return Err(Error::EmptySet);
        }
        Ok(set
            .iter()
            .flat_map(|&a| set.iter().map(move |&b| (a, b)))
            .map(|(a, b)| self.dist(a, b))
            .max()
            .cloned()
            .unwrap_or_else(Rational::zero))
    }

    /// `d(x, A)`; `None` stands for `+inf` when `A` is empty.
    pub fn dist_to_set(&self, x: usize, set: &[usize]) -> Option<Rational> {
        set.iter().map(|&a| self.dist(x, a)).min().cloned()
    }

    /// Largest `alpha` with `d(x,y) >= alpha * d(x,0)` for all distinct `x, y`.
    pub fn radial_alpha(&self) -> Result<RadialReport> {
        if self.len() < 2 {
            return Err(Error::TooFewPoints(2));
        }
        let mut best: Option<(Rational, usize, usize)> = None;
        let mut vacuous = true;
        for x in self.non_base() {
            for y in 0..self.len() {
                if y == x {
                    continue;
                }
                if y != self.base {
                    vacuous = false;
                }
                let ratio = self.dist(x, y) / self.rho(x);
                if best.as_ref().map_or(true, |(b, _, _)| ratio < *b) {
                    best = Some((ratio, x, y));
                }
            }
        }
        // every x != 0 has the pair (x, 0) with ratio 1, so best is at most 1
        let (alpha, x, y) = best.expect("at least one non-base point");
        debug_assert!(alpha <= Rational::one());
        Ok(RadialReport {
            is_radially_discrete: alpha.is_positive(),
            alpha,
            witness: (x, y),
            vacuous,
        })
    }

    /// `theta(M)`: the smallest distance between distinct points.
    pub fn uniform_separation(&self) -> Result<Rational> {
        if self.len() < 2 {
            return Err(Error::TooFewPoints(2));
        }
        Ok((0..self.len())
            .flat_map(|i| (i + 1..self.len()).map(move |j| (i, j)))
            .map(|(i, j)| self.dist(i, j))
            .min()
            .cloned()
            .expect("at least one pair"))
    }

    pub fn is_uniformly_discrete(&self) -> Result<bool> {
        Ok(self.uniform_separation()?.is_positive())
    }

    pub fn is_radially_uniformly_discrete(&self) -> Result<bool> {
        Ok(self.radial_alpha()?.is_radially_discrete && self.is_uniformly_discrete()?)
    }

    /// Builds `M ∪ {0}` from an unpointed space by adding a new base point
    /// at distance `r` from every original point. The new point gets index 0.
    pub fn attach_base_point(
        labels: Vec<String>,
        dist: Vec<Vec<Rational>>,
        base_label: &str,
        r: &Rational,
    ) -> Result<Self> {
        let n = labels.len();
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::ShapeMismatch {
                labels: n,
                rows: dist.len(),
                cols: dist.first().map_or(0, Vec::len),
            });
        }
        let mut all = Vec::with_capacity(n + 1);
        all.push(base_label.to_string());
        all.extend(labels);
        let mut matrix = Vec::with_capacity(n + 1);
        let mut first = vec![Rational::zero()];
        first.extend(std::iter::repeat(r.clone()).take(n));
        matrix.push(first);
        for row in dist {
            let mut full = Vec::with_capacity(n + 1);
            full.push(r.clone());
            full.extend(row);
            matrix.push(full);
        }
        Self::validate(all, matrix, 0)
    }
}

/// Outcome of the radial discreteness scan.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialReport {
    pub alpha: Rational,
    /// The ordered pair `(x, y)` attaining `alpha`.
    pub witness: (usize, usize),
    /// True when no pair of two non-base points exists, so only the
    /// base-point pairs constrain `alpha` and it is capped at 1.
    pub vacuous: bool,
    pub is_radially_discrete: bool,
}
