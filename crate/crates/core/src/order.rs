//! Order structure: positivity, minimum majorants and variation.
//!
//! Over a finite space an element is positive exactly when its canonical
//! coefficients are nonnegative. The LP route tests positivity from the
//! definition instead and serves as an independent check.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::free_vec::FreeVector;
use crate::lipschitz::{same_space, LipschitzFunction};
use crate::scalar::Rational;
use crate::transport::lp::{maximize, Constraint};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    Coefficients,
    Lp,
}

/// Minimizer of `<m, f>` over `{ f >= 0, f(0) = 0, Lip(f) <= 1 }`.
#[derive(Debug, Clone, PartialEq)]
pub struct LpPositivity {
    pub min_value: Rational,
    pub minimizer: LipschitzFunction,
}

impl LpPositivity {
    pub fn is_positive(&self) -> bool {
        !self.min_value.is_negative()
    }
}

/// Solves the positivity LP; the minimizer certifies non-positivity when the
/// value is negative.
pub fn positivity_lp(m: &FreeVector) -> LpPositivity {
    let space = m.space();
    let pts: Vec<usize> = space.non_base().collect();
    let one = Rational::from_integer(1.into());
    let mut constraints = Vec::new();
    for (a, &i) in pts.iter().enumerate() {
        for (b, &j) in pts.iter().enumerate() {
            if a != b {
                constraints.push(Constraint {
                    coeffs: vec![(a, one.clone()), (b, -one.clone())],
                    rhs: space.dist(i, j).clone(),
                });
            }
        }
        // pair with the base point; f >= 0 makes the other direction vacuous
        constraints.push(Constraint {
            coeffs: vec![(a, one.clone())],
            rhs: space.rho(i).clone(),
        });
    }
    let objective: Vec<Rational> = pts.iter().map(|&i| -m.coeff(i)).collect();
    let sol = maximize(&objective, &constraints).expect("bounded feasible LP");
    let mut values = vec![Rational::zero(); space.len()];
    for (a, &i) in pts.iter().enumerate() {
        values[i] = sol.x[a].clone();
    }
    LpPositivity {
        min_value: -sol.value,
        minimizer: LipschitzFunction::new(space.clone(), values).expect("zero at base"),
    }
}

pub fn is_positive(m: &FreeVector, route: Route) -> bool {
    match route {
        Route::Coefficients => m.is_nonnegative(),
        Route::Lp => positivity_lp(m).is_positive(),
    }
}

/// Jordan split of the representing measure.
#[derive(Debug, Clone, PartialEq)]
pub struct MinimumMajorant {
    /// Minimum majorant of `m`.
    pub plus: FreeVector,
    /// Minimum majorant of `-m`.
    pub minus: FreeVector,
}

pub fn minimum_majorant(m: &FreeVector) -> MinimumMajorant {
    let zero = Rational::zero();
    MinimumMajorant {
        plus: m.map_coeffs(|_, a| a.max(&zero).clone()),
        minus: m.map_coeffs(|_, a| (-a).max(zero.clone())),
    }
}

/// `|m| = m⁺ + m⁻`.
pub fn variation(m: &FreeVector) -> FreeVector {
    m.map_coeffs(|_, a| a.abs())
}

/// The three support sets of `|m|`, `m⁺ ∪ m⁻` and `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct SupportIdentities {
    pub variation: Vec<usize>,
    pub jordan_union: Vec<usize>,
    pub original: Vec<usize>,
}

impl SupportIdentities {
    pub fn holds(&self) -> bool {
        self.variation == self.jordan_union && self.jordan_union == self.original
    }
}

pub fn support_identities(m: &FreeVector) -> SupportIdentities {
    let mm = minimum_majorant(m);
    let mut union: Vec<usize> = mm.plus.support();
    union.extend(mm.minus.support());
    union.sort_unstable();
    union.dedup();
    SupportIdentities {
        variation: variation(m).support(),
        jordan_union: union,
        original: m.support(),
    }
}

/// Why a candidate majorant was rejected.
#[derive(Debug, Clone, PartialEq)]
pub enum MajorantFailure {
    /// `psi` itself is not positive: `<psi, f> < 0` for this `f >= 0`.
    NotPositive(LipschitzFunction),
    /// `psi - m` is not positive: `<m, f> > <psi, f>` for this `f >= 0`.
    NotAbove(LipschitzFunction),
}

#[derive(Debug, Clone, PartialEq)]
pub struct MajorantCheck {
    pub is_majorant: bool,
    pub failure: Option<MajorantFailure>,
}

/// Whether `psi` is a positive element with `psi >= m`, decided by the LP
/// route so that rejections carry a certificate `f >= 0`.
pub fn check_majorant(m: &FreeVector, psi: &FreeVector) -> Result<MajorantCheck> {
    if !same_space(m.space(), psi.space()) {
        return Err(Error::SpaceMismatch);
    }
    let own = positivity_lp(psi);
    if !own.is_positive() {
        return Ok(MajorantCheck {
            is_majorant: false,
            failure: Some(MajorantFailure::NotPositive(own.minimizer)),
        });
    }
    let gap = positivity_lp(&psi.sub(m)?);
    if !gap.is_positive() {
        return Ok(MajorantCheck {
            is_majorant: false,
            failure: Some(MajorantFailure::NotAbove(gap.minimizer)),
        });
    }
    Ok(MajorantCheck {
        is_majorant: true,
        failure: None,
    })
}
