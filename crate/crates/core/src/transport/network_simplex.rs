//! Primal network simplex for uncapacitated transportation on a complete
//! digraph.
//!
//! Solves `min sum c_ij x_ij` subject to `out(i) - in(i) = b_i`, `x >= 0`,
//! with dual `max sum b_i p_i` subject to `p_i - p_j <= c_ij`. The root node
//! has `p = 0`. The initial basis connects every node to the root, oriented
//! along its supply, which is feasible for any balanced supply vector.

use crate::scalar::Scalar;

/// Entering/leaving arc rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PivotRule {
    /// Smallest-index entering arc, smallest-index leaving arc among ties.
    /// Never cycles, so it is used with exact arithmetic.
    Bland,
    /// Most negative reduced cost entering; the leaving arc keeps the tree
    /// strongly feasible (last blocking arc met from the cycle apex).
    StronglyFeasible,
}

#[derive(Debug, Clone)]
struct TreeArc<T> {
    from: usize,
    to: usize,
    flow: T,
}

#[derive(Debug, Clone)]
pub struct NetworkSimplex<T> {
    n: usize,
    root: usize,
    cost: Vec<Vec<T>>,
    supply: Vec<T>,
    eps: T,
    rule: PivotRule,
    arcs: Vec<TreeArc<T>>,
    parent: Vec<usize>,
    // index into `arcs` of the arc joining a node to its parent
    parent_arc: Vec<usize>,
    depth: Vec<usize>,
    potential: Vec<T>,
    pivots: usize,
}

/// Solver status after [`NetworkSimplex::run`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Optimal,
    IterationLimit,
}

impl<T: Scalar> NetworkSimplex<T> {
    /// `cost` is an `n x n` matrix; `supply` must sum to zero.
    /// `eps` is the zero threshold (use zero for exact scalars).
    pub fn new(cost: Vec<Vec<T>>, supply: Vec<T>, root: usize, eps: T, rule: PivotRule) -> Self {
        let n = supply.len();
        assert_eq!(cost.len(), n);
        assert!(root < n);
        let arcs = (0..n)
            .filter(|&i| i != root)
            .map(|i| {
                if supply[i] > T::zero() {
                    TreeArc {
                        from: i,
                        to: root,
                        flow: supply[i].clone(),
                    }
                } else {
                    // zero-flow arcs point away from the root: strongly feasible
                    TreeArc {
                        from: root,
                        to: i,
                        flow: -supply[i].clone(),
                    }
                }
            })
            .collect();
        let mut s = Self {
            n,
            root,
            cost,
            supply,
            eps,
            rule,
            arcs,
            parent: vec![usize::MAX; n],
            parent_arc: vec![usize::MAX; n],
            depth: vec![0; n],
            potential: vec![T::zero(); n],
            pivots: 0,
        };
        s.rebuild();
        s
    }

    /// Recomputes parent pointers, depths and potentials from the arc list.
    fn rebuild(&mut self) {
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); self.n];
        for (k, a) in self.arcs.iter().enumerate() {
            adj[a.from].push(k);
            adj[a.to].push(k);
        }
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::with_capacity(self.n);
        seen[self.root] = true;
        self.parent[self.root] = usize::MAX;
        self.parent_arc[self.root] = usize::MAX;
        self.depth[self.root] = 0;
        self.potential[self.root] = T::zero();
        queue.push_back(self.root);
        while let Some(u) = queue.pop_front() {
            for &k in &adj[u] {
                let a = &self.arcs[k];
                let v = if a.from == u { a.to } else { a.from };
                if seen[v] {
                    continue;
                }
                seen[v] = true;
                self.parent[v] = u;
                self.parent_arc[v] = k;
                self.depth[v] = self.depth[u] + 1;
                // tree arcs are tight: p_from - p_to = c
                self.potential[v] = if a.from == u {
                    self.potential[u].clone() - self.cost[u][v].clone()
                } else {
                    self.potential[u].clone() + self.cost[v][u].clone()
                };
                queue.push_back(v);
            }
        }
        debug_assert!(seen.iter().all(|&s| s), "basis is not a spanning tree");
    }

    fn reduced_cost(&self, i: usize, j: usize) -> T {
        self.cost[i][j].clone() - self.potential[i].clone() + self.potential[j].clone()
    }

    fn entering(&self) -> Option<(usize, usize)> {
        let threshold = -self.eps.clone();
        match self.rule {
            PivotRule::Bland => {
                for i in 0..self.n {
                    for j in 0..self.n {
                        if i != j && self.reduced_cost(i, j) < threshold {
                            return Some((i, j));
                        }
                    }
                }
                None
            }
            PivotRule::StronglyFeasible => {
                let mut best: Option<(T, usize, usize)> = None;
                for i in 0..self.n {
                    for j in 0..self.n {
                        if i == j {
                            continue;
                        }
                        let r = self.reduced_cost(i, j);
                        if r < threshold && best.as_ref().map_or(true, |(b, _, _)| r < *b) {
                            best = Some((r, i, j));
                        }
                    }
                }
                best.map(|(_, i, j)| (i, j))
            }
        }
    }

    /// One pivot with entering arc `k -> l`.
    fn pivot(&mut self, k: usize, l: usize) {
        // Cycle orientation follows k -> l. Walking from l up to the apex the
        // traversal direction is child -> parent; from the apex down to k it
        // is parent -> child.
        let mut up_l = Vec::new(); // tree arc indices on l's side, from l upward
        let mut up_k = Vec::new(); // on k's side, from k upward
        let (mut a, mut b) = (l, k);
        while self.depth[a] > self.depth[b] {
            up_l.push(self.parent_arc[a]);
            a = self.parent[a];
        }
        while self.depth[b] > self.depth[a] {
            up_k.push(self.parent_arc[b]);
            b = self.parent[b];
        }
        while a != b {
            up_l.push(self.parent_arc[a]);
            a = self.parent[a];
            up_k.push(self.parent_arc[b]);
            b = self.parent[b];
        }

        // (arc index, forward?) in the order met when walking the cycle from
        // the apex: down to k, across k -> l, up to the apex.
        let mut cycle: Vec<(usize, bool)> = Vec::with_capacity(up_l.len() + up_k.len());
        for &arc in up_k.iter().rev() {
            // walking parent -> child; forward iff the arc points to the child
            let child = self.child_of(arc);
            cycle.push((arc, self.arcs[arc].to == child));
        }
        for &arc in &up_l {
            let child = self.child_of(arc);
            cycle.push((arc, self.arcs[arc].from == child));
        }

        let mut delta: Option<T> = None;
        let mut leave: Option<usize> = None; // position in `cycle`
        for (pos, &(arc, forward)) in cycle.iter().enumerate() {
            if forward {
                continue;
            }
            let f = &self.arcs[arc].flow;
            let better = match &delta {
                None => true,
                Some(d) => {
                    if f < d {
                        true
                    } else if f == d {
                        match self.rule {
                            // later in the walk wins
                            PivotRule::StronglyFeasible => true,
                            PivotRule::Bland => {
                                let cur = &self.arcs[cycle[leave.unwrap()].0];
                                let cand = &self.arcs[arc];
                                (cand.from, cand.to) < (cur.from, cur.to)
                            }
                        }
                    } else {
                        false
                    }
                }
            };
            if better {
                delta = Some(f.clone());
                leave = Some(pos);
            }
        }
        let (delta, leave) = match (delta, leave) {
            (Some(d), Some(p)) => (d, cycle[p].0),
            // a cycle with no backward arc would mean an unbounded problem,
            // impossible with nonnegative costs
            _ => unreachable!("negative-cost cycle in a metric cost matrix"),
        };
        for &(arc, forward) in &cycle {
            let f = &mut self.arcs[arc].flow;
            if forward {
                *f += delta.clone();
            } else {
                *f -= delta.clone();
                if *f < T::zero() && -f.clone() <= self.eps {
                    *f = T::zero();
                }
            }
        }
        self.arcs[leave] = TreeArc {
            from: k,
            to: l,
            flow: delta,
        };
        self.rebuild();
        self.pivots += 1;
    }

    fn child_of(&self, arc: usize) -> usize {
        let a = &self.arcs[arc];
        if self.parent[a.from] == a.to && self.parent_arc[a.from] == arc {
            a.from
        } else {
            a.to
        }
    }

    /// Pivots until optimal or until `max_pivots` is reached.
    pub fn run(&mut self, max_pivots: usize) -> Status {
        while let Some((k, l)) = self.entering() {
            if self.pivots >= max_pivots {
                return Status::IterationLimit;
            }
            self.pivot(k, l);
        }
        Status::Optimal
    }

    pub fn pivots(&self) -> usize {
        self.pivots
    }

    pub fn potentials(&self) -> &[T] {
        &self.potential
    }

    /// Basic arcs with positive flow as `(from, to, flow)`.
    pub fn flows(&self) -> Vec<(usize, usize, T)> {
        let mut out: Vec<_> = self
            .arcs
            .iter()
            .filter(|a| a.flow > self.eps)
            .map(|a| (a.from, a.to, a.flow.clone()))
            .collect();
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    pub fn supply(&self) -> &[T] {
        &self.supply
    }

    pub fn cost_matrix(&self) -> &[Vec<T>] {
        &self.cost
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    fn line_costs(xs: &[i64]) -> Vec<Vec<Rational>> {
        xs.iter()
            .map(|a| xs.iter().map(|b| int((a - b).abs())).collect())
            .collect()
    }

    #[test]
    fn ships_along_the_line() {
        let cost = line_costs(&[0, 1, 2]);
        let supply = vec![int(-1), int(2), int(-1)];
        for rule in [PivotRule::Bland, PivotRule::StronglyFeasible] {
            let mut ns = NetworkSimplex::new(cost.clone(), supply.clone(), 0, int(0), rule);
            assert_eq!(ns.run(1000), Status::Optimal);
            let total: Rational = ns.flows().iter().map(|(i, j, f)| f * &cost[*i][*j]).sum();
            assert_eq!(total, int(2));
            let dual: Rational = supply.iter().zip(ns.potentials()).map(|(b, p)| b * p).sum();
            assert_eq!(dual, int(2));
        }
    }

    #[test]
    fn float_matches_exact_on_small_instance() {
        let xs = [0i64, 3, 7, 8, 15];
        let cost_f: Vec<Vec<f64>> = xs
            .iter()
            .map(|a| xs.iter().map(|b| (a - b).abs() as f64).collect())
            .collect();
        let supply = vec![-1.0, 2.0, -3.0, 4.0, -2.0];
        let mut ns = NetworkSimplex::new(
            cost_f.clone(),
            supply,
            0,
            1e-12,
            PivotRule::StronglyFeasible,
        );
        assert_eq!(ns.run(10_000), Status::Optimal);
        let total: f64 = ns.flows().iter().map(|(i, j, f)| f * cost_f[*i][*j]).sum();
        let mut ex = NetworkSimplex::new(
            line_costs(&xs),
            vec![int(-1), int(2), int(-3), int(4), int(-2)],
            0,
            int(0),
            PivotRule::Bland,
        );
        ex.run(10_000);
        let exact: Rational = ex
            .flows()
            .iter()
            .map(|(i, j, f)| f * &line_costs(&xs)[*i][*j])
            .sum();
        assert!((total - crate::scalar::to_f64(&exact)).abs() < 1e-12);
    }
}
