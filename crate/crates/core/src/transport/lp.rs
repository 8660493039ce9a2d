//! Dense tableau simplex over exact rationals.
//!
//! Only the shape `max c.x  s.t.  A x <= b, x >= 0` with `b >= 0` is
//! supported, so the slack basis is an initial feasible vertex. Bland's rule
//! on both entering and leaving variables rules out cycling.

use num_traits::{Signed, Zero};

use crate::scalar::Rational;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: Rational,
    pub x: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpError {
    Unbounded,
    NegativeRhs,
}

/// A single constraint `sum coeffs[k].1 * x[coeffs[k].0] <= rhs`.
#[derive(Debug, Clone)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rational)>,
    pub rhs: Rational,
}

pub fn maximize(objective: &[Rational], constraints: &[Constraint]) -> Result<LpSolution, LpError> {
    let nvar = objective.len();
    let m = constraints.len();
    let width = nvar + m;
    if constraints.iter().any(|c| c.rhs.is_negative()) {
        return Err(LpError::NegativeRhs);
    }
    let mut rows: Vec<Vec<Rational>> = constraints
        .iter()
        .enumerate()
        .map(|(r, c)| {
            let mut row = vec![Rational::zero(); width];
            for (j, a) in &c.coeffs {
                row[*j] += a;
            }
            row[nvar + r] = Rational::from_integer(1.into());
            row
        })
        .collect();
    let mut rhs: Vec<Rational> = constraints.iter().map(|c| c.rhs.clone()).collect();
    let mut basis: Vec<usize> = (nvar..width).collect();
    // reduced objective row: entering candidates have negative entries
    let mut obj: Vec<Rational> = objective.iter().map(|c| -c).collect();
    obj.resize(width, Rational::zero());
    let mut value = Rational::zero();

    loop {
        let Some(col) = (0..width).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut pick: Option<(usize, Rational)> = None;
        for r in 0..m {
            let a = &rows[r][col];
            if !a.is_positive() {
                continue;
            }
            let ratio = &rhs[r] / a;
            let better = match &pick {
                None => true,
                Some((p, best)) => ratio < *best || (ratio == *best && basis[r] < basis[*p]),
            };
            if better {
                pick = Some((r, ratio));
            }
        }
        let Some((prow, _)) = pick else {
            return Err(LpError::Unbounded);
        };

        let piv = rows[prow][col].clone();
        for v in rows[prow].iter_mut() {
            if !v.is_zero() {
                *v /= &piv;
            }
        }
        rhs[prow] /= &piv;
        let nz: Vec<usize> = (0..width).filter(|&j| !rows[prow][j].is_zero()).collect();
        let prow_vals: Vec<Rational> = nz.iter().map(|&j| rows[prow][j].clone()).collect();
        let prhs = rhs[prow].clone();
        for r in 0..m {
            if r == prow || rows[r][col].is_zero() {
                continue;
            }
            let factor = rows[r][col].clone();
            for (&j, v) in nz.iter().zip(&prow_vals) {
                rows[r][j] -= &factor * v;
            }
            rhs[r] -= &factor * &prhs;
        }
        if !obj[col].is_zero() {
            let factor = obj[col].clone();
            for (&j, v) in nz.iter().zip(&prow_vals) {
                obj[j] -= &factor * v;
            }
            value -= &factor * &prhs;
        }
        basis[prow] = col;
    }

    let mut x = vec![Rational::zero(); nvar];
    for (r, &b) in basis.iter().enumerate() {
        if b < nvar {
            x[b] = rhs[r].clone();
        }
    }
    Ok(LpSolution { value, x })
}
