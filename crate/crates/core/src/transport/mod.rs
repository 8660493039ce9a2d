//! The free-space norm as a base-pointed transportation problem.
//!
//! For `m = sum a_i δ(x_i)` put supply `a_i` on each point and `-sum a_i` on
//! the base point. The minimum transport cost equals
//! `||m|| = sup { <m, f> : Lip(f) <= 1, f(0) = 0 }`, and optimal node
//! potentials normalized to vanish at the base are a norming function.

pub mod lp;
pub mod network_simplex;
mod oracle;

use std::sync::Arc;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::free_vec::FreeVector;
use crate::lipschitz::LipschitzFunction;
use crate::metric::PointedMetricSpace;
use crate::scalar::{to_f64, Mode, Rational, Scalar, Value};

pub use network_simplex::{NetworkSimplex, PivotRule, Status};
pub use oracle::{oracle_norm, ORACLE_MAX_POINTS};

/// Net supply per point; the base point absorbs the imbalance.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportInstance {
    space: Arc<PointedMetricSpace>,
    supply: Vec<Rational>,
}

impl TransportInstance {
    pub fn new(m: &FreeVector) -> Self {
        let space = m.space().clone();
        let mut supply = vec![Rational::zero(); space.len()];
        for (&i, a) in m.coeffs() {
            supply[i] = a.clone();
        }
        supply[space.base()] = -m.coeffs().values().sum::<Rational>();
        Self { space, supply }
    }

    pub fn space(&self) -> &Arc<PointedMetricSpace> {
        &self.space
    }

    pub fn supply(&self) -> &[Rational] {
        &self.supply
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flow<T> {
    pub from: usize,
    pub to: usize,
    pub amount: T,
}

/// An optimal flow together with an optimal dual potential.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPlan<T> {
    pub space: Arc<PointedMetricSpace>,
    pub flow: Vec<Flow<T>>,
    /// Primal cost, i.e. the norm.
    pub cost: T,
    /// Optimal dual function, zero at the base and 1-Lipschitz.
    pub potentials: Vec<T>,
    /// `|cost - <m, potentials>|`.
    pub gap: T,
    pub pivots: usize,
}

impl TransportPlan<Rational> {
    pub fn dual_function(&self) -> LipschitzFunction {
        LipschitzFunction::new(self.space.clone(), self.potentials.clone())
            .expect("potentials vanish at the base point")
    }
}

/// Result of [`kr_norm`] in either arithmetic mode.
#[derive(Debug, Clone, PartialEq)]
pub enum Plan {
    Exact(TransportPlan<Rational>),
    Float(TransportPlan<f64>),
}

impl Plan {
    pub fn norm(&self) -> Value {
        match self {
            Plan::Exact(p) => Value::Exact(p.cost.clone()),
            Plan::Float(p) => Value::Float(p.cost),
        }
    }

    pub fn mode(&self) -> &'static str {
        match self {
            Plan::Exact(_) => "exact",
            Plan::Float(_) => "float",
        }
    }
}

fn cost_matrix<T: Scalar>(space: &PointedMetricSpace) -> Vec<Vec<T>> {
    space
        .matrix()
        .iter()
        .map(|row| row.iter().map(T::from_rational).collect())
        .collect()
}

fn pivot_budget(n: usize) -> usize {
    // generous; Bland terminates regardless, this guards float runs
    50 * n * n + 1000
}

/// Shifts optimal potentials to the pointwise smallest optimal dual.
///
/// Given an optimal flow, the optimal duals are the solutions of
/// `p_i - p_j <= c_ij` (all arcs) and `p_i - p_j = c_ij` (arcs with flow),
/// with `p_root = 0`. This is a system of difference constraints, so its
/// pointwise minimum exists and equals minus the shortest-path distances
/// from the root in the constraint graph. The current potentials give
/// nonnegative reduced weights, so dense Dijkstra applies.
fn smallest_dual<T: Scalar>(
    cost: &[Vec<T>],
    flows: &[(usize, usize, T)],
    potentials: &[T],
    root: usize,
) -> Vec<T> {
    let n = potentials.len();
    let mut carries = vec![vec![false; n]; n];
    for (i, j, _) in flows {
        carries[*i][*j] = true;
    }
    // edge u -> v with reduced weight: 0 if v -> u carries flow,
    // else c_uv - p_u + p_v (>= 0 up to rounding)
    let weight = |u: usize, v: usize| -> T {
        if carries[v][u] {
            return T::zero();
        }
        let w = cost[u][v].clone() - potentials[u].clone() + potentials[v].clone();
        if w < T::zero() {
            T::zero()
        } else {
            w
        }
    };
    let mut dist: Vec<Option<T>> = vec![None; n];
    let mut done = vec![false; n];
    dist[root] = Some(T::zero());
    for _ in 0..n {
        let mut pick: Option<usize> = None;
        for v in 0..n {
            if done[v] {
                continue;
            }
            if let Some(dv) = &dist[v] {
                if pick.map_or(true, |p| dist[p].as_ref().map_or(true, |dp| dv < dp)) {
                    pick = Some(v);
                }
            }
        }
        let Some(u) = pick else { break };
        done[u] = true;
        let du = dist[u].clone().expect("picked nodes are reached");
        for v in 0..n {
            if done[v] || v == u {
                continue;
            }
            let cand = du.clone() + weight(u, v);
            if dist[v].as_ref().map_or(true, |dv| cand < *dv) {
                dist[v] = Some(cand);
            }
        }
    }
    // g = reduced distance - p, minimal potential = -g
    (0..n)
        .map(|v| {
            let d = dist[v].clone().expect("complete graph is connected");
            potentials[v].clone() - d
        })
        .collect()
}

fn solve<T: Scalar>(
    instance: &TransportInstance,
    eps: T,
    rule: PivotRule,
) -> Option<TransportPlan<T>> {
    let space = instance.space();
    let n = space.len();
    let cost: Vec<Vec<T>> = cost_matrix(space);
    let supply: Vec<T> = instance.supply().iter().map(T::from_rational).collect();
    let mut ns = NetworkSimplex::new(cost.clone(), supply.clone(), space.base(), eps, rule);
    if ns.run(pivot_budget(n)) != Status::Optimal {
        return None;
    }
    let flows = ns.flows();
    let potentials = smallest_dual(&cost, &flows, ns.potentials(), space.base());
    let total: T = flows.iter().fold(T::zero(), |acc, (i, j, f)| {
        acc + f.clone() * cost[*i][*j].clone()
    });
    let dual: T = supply
        .iter()
        .zip(&potentials)
        .fold(T::zero(), |acc, (b, p)| acc + b.clone() * p.clone());
    Some(TransportPlan {
        space: space.clone(),
        flow: flows
            .into_iter()
            .map(|(from, to, amount)| Flow { from, to, amount })
            .collect(),
        gap: (total.clone() - dual).abs(),
        cost: total,
        potentials,
        pivots: ns.pivots(),
    })
}

/// Largest violation of `|p_i - p_j| <= d_ij` over all pairs.
fn lipschitz_violation(space: &PointedMetricSpace, potentials: &[f64]) -> f64 {
    let n = space.len();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let v = potentials[i] - potentials[j] - to_f64(space.dist(i, j));
                worst = worst.max(v);
            }
        }
    }
    worst
}

/// Exact free-space norm with certificates. Never fails.
pub fn kr_norm_exact(m: &FreeVector) -> TransportPlan<Rational> {
    let instance = TransportInstance::new(m);
    let plan = solve(&instance, Rational::zero(), PivotRule::Bland)
        .expect("Bland's rule terminates on exact data");
    assert!(plan.gap.is_zero(), "nonzero duality gap in exact mode");
    plan
}

/// Float free-space norm; the relative duality gap and dual infeasibility
/// must stay within `tolerance`, with one retry under a different pivot rule.
pub fn kr_norm_float(m: &FreeVector, tolerance: f64) -> Result<TransportPlan<f64>> {
    let instance = TransportInstance::new(m);
    let space = instance.space();
    let scale = space
        .matrix()
        .iter()
        .flatten()
        .map(to_f64)
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);
    let eps = 1e-12 * scale;
    let mut worst = f64::INFINITY;
    for rule in [PivotRule::StronglyFeasible, PivotRule::Bland] {
        let Some(plan) = solve::<f64>(&instance, eps, rule) else {
            continue;
        };
        let rel_gap = plan.gap / plan.cost.abs().max(1.0);
        let infeas = lipschitz_violation(space, &plan.potentials) / scale;
        let err = rel_gap.max(infeas);
        if err <= tolerance {
            return Ok(plan);
        }
        worst = worst.min(err);
    }
    Err(Error::NumericalInstability {
        gap: worst,
        tolerance,
    })
}

/// `||m||` with a certifying plan in the requested mode.
pub fn kr_norm(m: &FreeVector, mode: Mode) -> Result<Plan> {
    match mode {
        Mode::Exact => Ok(Plan::Exact(kr_norm_exact(m))),
        Mode::Float { tolerance } => kr_norm_float(m, tolerance).map(Plan::Float),
    }
}

/// Exact norm only.
pub fn norm(m: &FreeVector) -> Rational {
    kr_norm_exact(m).cost
}

/// A 1-Lipschitz `f` with `f(0) = 0` and `<m, f> = ||m||`.
///
/// Among all such functions this returns the pointwise smallest one.
pub fn dual_optimal_function(m: &FreeVector) -> Result<LipschitzFunction> {
    if m.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(kr_norm_exact(m).dual_function())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};

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

    fn vec_of(s: &Arc<PointedMetricSpace>, c: &[(usize, i64)]) -> FreeVector {
        FreeVector::canonicalize(s.clone(), c.iter().map(|&(i, a)| (i, int(a)))).unwrap()
    }

    #[test]
    fn supply_balances() {
        let s = triangle();
        let inst = TransportInstance::new(&vec_of(&s, &[(1, 2), (2, -1)]));
        assert_eq!(inst.supply(), &[int(-1), int(2), int(-1)]);
    }

    #[test]
    fn norm_examples() {
        let s = triangle();
        assert_eq!(norm(&FreeVector::delta(s.clone(), 2)), int(2));
        assert_eq!(norm(&vec_of(&s, &[(1, 1), (2, -1)])), int(1));
        assert_eq!(norm(&vec_of(&s, &[(1, 2), (2, -1)])), int(2));
        assert_eq!(norm(&vec_of(&s, &[(1, 1), (2, 1)])), int(3));
        assert_eq!(norm(&FreeVector::zero(s)), int(0));
    }

    #[test]
    fn dual_function_examples() {
        let s = triangle();
        let f = dual_optimal_function(&vec_of(&s, &[(1, 1), (2, 1)])).unwrap();
        assert_eq!(f.value(1), &int(1));
        assert_eq!(f.value(2), &int(2));

        let f = dual_optimal_function(&vec_of(&s, &[(1, 1), (2, -1)])).unwrap();
        assert_eq!(f.value(1) - f.value(2), int(1));
        assert!(*f.lip_constant() <= int(1));

        let f = dual_optimal_function(&vec_of(&s, &[(1, 2), (2, -1)])).unwrap();
        assert_eq!(f.values(), &[int(0), int(1), int(0)]);

        let two = Arc::new(
            PointedMetricSpace::validate(
                vec!["0".into(), "a".into()],
                vec![vec![int(0), ratio(3, 2)], vec![ratio(3, 2), int(0)]],
                0,
            )
            .unwrap(),
        );
        let f = dual_optimal_function(&FreeVector::delta(two.clone(), 1)).unwrap();
        assert_eq!(f, LipschitzFunction::rho(two.clone()));
        assert_eq!(
            dual_optimal_function(&FreeVector::zero(two)),
            Err(Error::ZeroVector)
        );
    }

    #[test]
    fn complementary_slackness() {
        let s = triangle();
        let plan = kr_norm_exact(&vec_of(&s, &[(1, 3), (2, -5)]));
        for fl in &plan.flow {
            assert_eq!(
                &plan.potentials[fl.from] - &plan.potentials[fl.to],
                s.dist(fl.from, fl.to).clone()
            );
        }
        assert!(plan.gap.is_zero());
    }

    #[test]
    fn float_mode_agrees() {
        let s = triangle();
        let m = vec_of(&s, &[(1, 2), (2, -1)]);
        let plan = kr_norm_float(&m, 1e-9).unwrap();
        assert!((plan.cost - 2.0).abs() < 1e-12);
        assert_eq!(
            kr_norm(&m, Mode::float()).unwrap().norm(),
            Value::Float(plan.cost)
        );
    }
}
