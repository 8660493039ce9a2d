//! Independent check of the free-space norm: the dual LP over the Lipschitz
//! ball, solved with a dense general-purpose simplex.

use num_traits::Zero;

use super::lp::{maximize, Constraint};
use crate::error::{Error, Result};
use crate::free_vec::FreeVector;
use crate::scalar::Rational;

pub const ORACLE_MAX_POINTS: usize = 8;

/// `max <m, f>` over `{ f : f(0) = 0, |f(i) - f(j)| <= d(i, j) }`.
///
/// Substituting `g = f + rho` makes every variable nonnegative and every
/// right-hand side nonnegative (by the triangle inequality).
pub fn oracle_norm(m: &FreeVector) -> Result<Rational> {
    let space = m.space();
    if space.len() > ORACLE_MAX_POINTS {
        return Err(Error::TooLarge {
            limit: ORACLE_MAX_POINTS,
            got: space.len(),
        });
    }
    if m.is_zero() {
        return Ok(Rational::zero());
    }
    let pts: Vec<usize> = space.non_base().collect();
    let one = Rational::from_integer(1.into());
    let mut constraints = Vec::new();
    for (a, &i) in pts.iter().enumerate() {
        for (b, &j) in pts.iter().enumerate() {
            if a == b {
                continue;
            }
            constraints.push(Constraint {
                coeffs: vec![(a, one.clone()), (b, -one.clone())],
                rhs: space.dist(i, j) + space.rho(i) - space.rho(j),
            });
        }
        constraints.push(Constraint {
            coeffs: vec![(a, one.clone())],
            rhs: space.rho(i) * Rational::from_integer(2.into()),
        });
    }
    let objective: Vec<Rational> = pts.iter().map(|&i| m.coeff(i)).collect();
    let shift: Rational = pts.iter().map(|&i| m.coeff(i) * space.rho(i)).sum();
    let sol = maximize(&objective, &constraints).expect("bounded feasible LP");
    Ok(sol.value - shift)
}
