//! Named invariant checks behind the `verify` command.
//!
//! Every check draws from its own generator seeded by the run seed and the
//! check id, so results do not depend on scheduling. Checks run on scoped
//! threads; the report is assembled in manifest order.

use std::sync::Arc;
use std::thread;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::experiments::{
    gen_ambrosio, gen_gallery, gen_weaver, radial_majorant_bound, GalleryEntry, EXACT_N_CAP,
};
use crate::free_vec::FreeVector;
use crate::io::{parse_space, space_json};
use crate::lipschitz::{lip_constant_of, mcshane_extend, LipschitzFunction, WeightFunction};
use crate::metric::PointedMetricSpace;
use crate::order::{
    check_majorant, is_positive, minimum_majorant, support_identities, variation, Route,
};
use crate::random::{
    random_function, random_molecule_family, random_positive_vector, random_size, random_space,
    random_vector, random_weight, rng, InstanceRng,
};
use crate::scalar::{int, pow2, ratio, to_f64, Rational};
use crate::transport::{
    dual_optimal_function, kr_norm_exact, kr_norm_float, norm, oracle_norm, ORACLE_MAX_POINTS,
};
use crate::weighting::{class_report, kalton_parts, WeightOperator};
use crate::weights::{
    relevant_indices, relevant_pi_indices, weight_g, weight_h, weight_lambda, weight_pi, WeightKind,
};

/// Number of cases, or a description of the first failure.
type Outcome = std::result::Result<usize, String>;

pub struct Invariant {
    pub id: &'static str,
    pub module: &'static str,
    /// What the invariant states, in words.
    pub anchor: &'static str,
    check: fn(&mut InstanceRng) -> Outcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub id: &'static str,
    pub module: &'static str,
    pub anchor: &'static str,
    pub passed: bool,
    pub cases: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub results: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> usize {
        self.results.iter().filter(|r| !r.passed).count()
    }

    /// Fixed-width pass/fail table.
    pub fn table(&self) -> String {
        let w = self.results.iter().map(|r| r.id.len()).max().unwrap_or(0);
        let mut out = String::new();
        for r in &self.results {
            let status = if r.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!(
                "{status}  {:<12} {:<w$}  {:>5} cases",
                r.module, r.id, r.cases
            ));
            if !r.passed {
                out.push_str("  ");
                out.push_str(&r.detail);
            }
            out.push('\n');
        }
        out.push_str(&format!(
            "{} of {} invariants passed\n",
            self.results.len() - self.failures(),
            self.results.len()
        ));
        out
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn seed_for(seed: u64, id: &str) -> u64 {
    // FNV-1a over the id, mixed with the run seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h ^ seed
}

pub fn modules() -> &'static [&'static str] {
    &[
        "metric_core",
        "lip_fn",
        "free_vec",
        "kr_solver",
        "weighting",
        "order",
        "experiments",
        "cli",
    ]
}

/// Runs every invariant of `suite` (`"all"` or a module name).
pub fn run(suite: &str, seed: u64) -> Result<SuiteReport> {
    let selected: Vec<Invariant> = manifest()
        .into_iter()
        .filter(|inv| suite == "all" || inv.module == suite)
        .collect();
    if selected.is_empty() {
        return Err(Error::Precondition(format!("unknown suite {suite}")));
    }
    let results = thread::scope(|scope| {
        let handles: Vec<_> = selected
            .iter()
            .map(|inv| {
                scope.spawn(move || {
                    let mut r = rng(seed_for(seed, inv.id));
                    (inv.check)(&mut r)
                })
            })
            .collect();
        selected
            .iter()
            .zip(handles)
            .map(|(inv, h)| {
                let outcome = h
                    .join()
                    .unwrap_or_else(|_| Err("check panicked".to_string()));
                CheckResult {
                    id: inv.id,
                    module: inv.module,
                    anchor: inv.anchor,
                    passed: outcome.is_ok(),
                    cases: *outcome.as_ref().unwrap_or(&0),
                    detail: outcome.err().unwrap_or_default(),
                }
            })
            .collect()
    });
    Ok(SuiteReport {
        suite: suite.to_string(),
        seed,
        results,
    })
}

macro_rules! inv {
    ($id:literal, $module:literal, $anchor:literal, $check:expr) => {
        Invariant {
            id: $id,
            module: $module,
            anchor: $anchor,
            check: $check,
        }
    };
}

pub fn manifest() -> Vec<Invariant> {
    vec![
        inv!("space-roundtrip", "metric_core", "validate after serialize is the identity on valid spaces", space_roundtrip),
        inv!("space-axioms", "metric_core", "validated spaces are symmetric, positive off the diagonal and satisfy the triangle inequality", space_axioms),
        inv!("radial-alpha", "metric_core", "alpha d(x,0) <= d(x,y) for all x != y", radial_alpha),
        inv!("attach-valid", "metric_core", "attaching a base point at distance r >= diam/2 yields a valid space", attach_valid),
        inv!("attach-norm", "metric_core", "on the attached space Lip0 norm equals max(Lip constant on S, sup |f|)", attach_norm),
        inv!("lattice-lip", "lip_fn", "Lip of meet and join is at most the larger Lip constant", lattice_lip),
        inv!("mcshane", "lip_fn", "McShane extension agrees on the subset and preserves Lip, sup and inf", mcshane),
        inv!("weight-bounds", "lip_fn", "0 <= H_n <= 1 and Lip(H_n) <= 2^-n", weight_bounds),
        inv!("weight-semigroup", "lip_fn", "H_m H_n = H_min, G_m G_n = G_max, Pi_m Pi_n = Pi_min pointwise for m != n", weight_semigroup),
        inv!("abs-split", "lip_fn", "|f| = f+ + f-", abs_split),
        inv!("canonical-pairing", "free_vec", "raw inputs with the same canonical form pair identically", canonical_pairing),
        inv!("canonical-separation", "free_vec", "distinct canonical forms are separated by a McShane bump", canonical_separation),
        inv!("support-test", "free_vec", "functions agreeing on the support pair identically with m", support_test),
        inv!("support-minimal", "free_vec", "a bump at any support point pairs nonzero with m", support_minimal),
        inv!("pairing-bound", "free_vec", "|<m,f>| <= ||m|| Lip(f)", pairing_bound),
        inv!("molecule-reassembly", "free_vec", "the greedy molecule decomposition reassembles to m", molecule_reassembly),
        inv!("zero-gap", "kr_solver", "exact plans have zero duality gap, balanced flow and complementary slackness", zero_gap),
        inv!("oracle-agreement", "kr_solver", "network simplex and dense LP oracle give the same norm", oracle_agreement),
        inv!("norm-axioms", "kr_solver", "norm is definite, homogeneous and subadditive", norm_axioms),
        inv!("molecule-isometry", "kr_solver", "||δ(x) - δ(y)|| = d(x,y) and molecules have norm 1 on every gallery space", molecule_isometry),
        inv!("positive-norm", "kr_solver", "positive elements have ||m|| = <rho, m>", positive_norm),
        inv!("norm1-radius", "kr_solver", "||m|| <= norm1(m) rad(supp m)", norm1_radius),
        inv!("float-agreement", "kr_solver", "float mode matches exact mode to relative 1e-9", float_agreement),
        inv!("adjointness", "weighting", "<T_h* m, f> = <m, T_h f>", adjointness),
        inv!("operator-bound", "weighting", "||T_h|| <= ||h||_inf + rad(supp h) Lip(h)", operator_bound),
        inv!("operator-constants", "weighting", "||T_H|| <= 3, ||T_G|| <= 4, ||T_Lambda|| <= 5, ||T_Pi|| <= 12", operator_constants),
        inv!("kalton", "weighting", "Lambda parts reassemble exactly and their norms sum to at most 45 ||m||", kalton),
        inv!("operator-semigroup", "weighting", "adjoints of H_m then H_n equal the adjoint of H_min (and G, Pi analogues) for m != n", operator_semigroup),
        inv!("finite-classes", "weighting", "on a finite space every element is strongly bounded, avoids 0 strongly and is all finite part", finite_classes),
        inv!("positivity-routes", "order", "coefficient and LP positivity tests agree", positivity_routes),
        inv!("jordan-minimal", "order", "psi - m+ is positive for every positive majorant psi of m", jordan_minimal),
        inv!("jordan-norms", "order", "||m+|| + ||m-|| = || |m| ||", jordan_norms),
        inv!("support-identities", "order", "supp|m| = supp m+ ∪ supp m- = supp m", support_identity),
        inv!("modulus", "order", "|<m,f>| <= <|m|, |f|>", modulus),
        inv!("norming-function", "order", "the dual optimal function of a positive m equals rho on its support", norming_function),
        inv!("ambrosio", "experiments", "Ambrosio net: norm1(m_N) = N and norm1/||m_N|| >= 2N", ambrosio),
        inv!("weaver", "experiments", "Weaver net: <m_N+, h> = N and ||m_N|| <= 1/9", weaver),
        inv!("gallery-constants", "experiments", "gallery alpha and theta match the hand-derived values", gallery_constants),
        inv!("radial-majorant", "experiments", "the radial majorant is a positive majorant with norm <= (1/alpha) sum a_n", radial_majorant),
        inv!("report-determinism", "cli", "the same seed produces byte-identical instances and reports", report_determinism),
    ]
}

// instance helpers

fn gallery() -> Vec<GalleryEntry> {
    gen_gallery()
}

fn small_space(r: &mut InstanceRng) -> Arc<PointedMetricSpace> {
    let n = random_size(r, 3, 7);
    Arc::new(random_space(r, n))
}

fn nonzero_vector(r: &mut InstanceRng, s: &Arc<PointedMetricSpace>) -> FreeVector {
    loop {
        let m = random_vector(r, s);
        if !m.is_zero() {
            return m;
        }
    }
}

/// Lipschitz bump: 1 at `x`, 0 on `zeros` (which must contain the base).
fn bump(s: &Arc<PointedMetricSpace>, x: usize, zeros: &[usize]) -> LipschitzFunction {
    let mut subset = vec![x];
    let mut values = vec![Rational::one()];
    for &z in zeros {
        if z != x && !subset.contains(&z) {
            subset.push(z);
            values.push(Rational::zero());
        }
    }
    mcshane_extend(s.clone(), &subset, &values).expect("base in subset, values consistent")
}

fn labels_of(s: &PointedMetricSpace) -> String {
    s.labels().join(",")
}

// metric_core

fn space_roundtrip(r: &mut InstanceRng) -> Outcome {
    let mut spaces: Vec<PointedMetricSpace> =
        gallery().into_iter().map(|g| (*g.space).clone()).collect();
    for _ in 0..40 {
        let n = random_size(r, 1, 8);
        spaces.push(random_space(r, n));
    }
    for s in &spaces {
        let text = space_json(s).to_string();
        let back = parse_space(&text).map_err(|e| format!("{}: {e}", labels_of(s)))?;
        ensure(&back == s, || {
            format!("round trip changed {}", labels_of(s))
        })?;
    }
    Ok(spaces.len())
}

fn space_axioms(r: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    for _ in 0..40 {
        let s = small_space(r);
        let n = s.len();
        for i in 0..n {
            ensure(s.dist(i, i).is_zero(), || "nonzero diagonal".into())?;
            for j in 0..n {
                ensure(s.dist(i, j) == s.dist(j, i), || "asymmetric".into())?;
                ensure(i == j || s.dist(i, j).is_positive(), || {
                    "zero distance".into()
                })?;
                for k in 0..n {
                    ensure(s.dist(i, k) <= &(s.dist(i, j) + s.dist(j, k)), || {
                        "triangle inequality".into()
                    })?;
                }
            }
        }
        cases += 1;
    }
    // a violated triangle is rejected
    let bad = PointedMetricSpace::validate(
        vec!["0".into(), "a".into(), "b".into()],
        vec![
            vec![int(0), int(1), int(3)],
            vec![int(1), int(0), int(1)],
            vec![int(3), int(1), int(0)],
        ],
        0,
    );
    ensure(matches!(bad, Err(Error::TriangleViolation(..))), || {
        format!("expected a triangle violation, got {bad:?}")
    })?;
    Ok(cases + 1)
}

fn radial_alpha(r: &mut InstanceRng) -> Outcome {
    let mut spaces: Vec<Arc<PointedMetricSpace>> = gallery().into_iter().map(|g| g.space).collect();
    for _ in 0..30 {
        spaces.push(small_space(r));
    }
    for s in &spaces {
        let alpha = s.radial_alpha().map_err(|e| e.to_string())?.alpha;
        for x in s.non_base() {
            for y in 0..s.len() {
                if y != x {
                    ensure(&alpha * s.rho(x) <= *s.dist(x, y), || {
                        format!("{}: pair ({x},{y})", labels_of(s))
                    })?;
                }
            }
        }
    }
    Ok(spaces.len())
}

fn attached(r: &mut InstanceRng) -> (PointedMetricSpace, PointedMetricSpace) {
    let n = random_size(r, 1, 6);
    let raw = random_space(r, n);
    let all: Vec<usize> = (0..n).collect();
    let diam = raw.diameter(&all).expect("nonempty");
    let scale = if diam.is_zero() {
        int(1)
    } else {
        int(2) / diam
    };
    let dist = raw
        .matrix()
        .iter()
        .map(|row| row.iter().map(|d| d * &scale).collect())
        .collect();
    let s = PointedMetricSpace::validate(raw.labels().to_vec(), dist, 0).expect("scaled metric");
    let m0 = PointedMetricSpace::attach_base_point(
        s.labels().to_vec(),
        s.matrix().to_vec(),
        "base",
        &int(1),
    )
    .expect("diam <= 2 with r = 1");
    (s, m0)
}

fn attach_valid(r: &mut InstanceRng) -> Outcome {
    for k in 0..40 {
        let (_, m0) = attached(r);
        let again =
            PointedMetricSpace::validate(m0.labels().to_vec(), m0.matrix().to_vec(), m0.base());
        ensure(again.is_ok(), || format!("case {k}: {again:?}"))?;
    }
    Ok(40)
}

fn attach_norm(r: &mut InstanceRng) -> Outcome {
    for k in 0..40 {
        let (s, m0) = attached(r);
        let m0 = Arc::new(m0);
        let vals: Vec<Rational> = (0..s.len())
            .map(|_| ratio(rand::Rng::gen_range(r, -8..=8), 4))
            .collect();
        let on_s = lip_constant_of(&s, &vals);
        let sup = vals
            .iter()
            .map(|v| v.abs())
            .max()
            .unwrap_or_else(Rational::zero);
        // the attached base point is index 0, S follows in order
        let mut ext = vec![Rational::zero()];
        ext.extend(vals);
        let f = LipschitzFunction::new(m0, ext).map_err(|e| e.to_string())?;
        let expected = if on_s > sup { on_s } else { sup };
        ensure(*f.lip_constant() == expected, || {
            format!("case {k}: Lip {} vs {}", f.lip_constant(), expected)
        })?;
    }
    Ok(40)
}

// lip_fn

fn lattice_lip(r: &mut InstanceRng) -> Outcome {
    for _ in 0..60 {
        let s = small_space(r);
        let f = random_function(r, &s);
        let g = random_function(r, &s);
        let top = f.lip_constant().max(g.lip_constant()).clone();
        let meet = f.meet(&g).map_err(|e| e.to_string())?;
        let join = f.join(&g).map_err(|e| e.to_string())?;
        ensure(
            *meet.lip_constant() <= top && *join.lip_constant() <= top,
            || format!("Lip(f)={} Lip(g)={}", f.lip_constant(), g.lip_constant()),
        )?;
    }
    Ok(60)
}

fn mcshane(r: &mut InstanceRng) -> Outcome {
    for k in 0..60 {
        let s = small_space(r);
        let f = random_function(r, &s);
        let mut subset = vec![s.base()];
        subset.extend(s.non_base().filter(|_| rand::Rng::gen_bool(r, 0.5)));
        let values: Vec<Rational> = subset.iter().map(|&i| f.value(i).clone()).collect();
        let restricted = PointedMetricSpace::validate(
            subset.iter().map(|&i| s.label(i).to_string()).collect(),
            subset
                .iter()
                .map(|&i| subset.iter().map(|&j| s.dist(i, j).clone()).collect())
                .collect(),
            0,
        )
        .map_err(|e| e.to_string())?;
        let lip_n = lip_constant_of(&restricted, &values);
        let ext = mcshane_extend(s.clone(), &subset, &values).map_err(|e| e.to_string())?;
        let agrees = subset.iter().zip(&values).all(|(&i, v)| ext.value(i) == v);
        let sup = values.iter().max().expect("base in subset");
        let inf = values.iter().min().expect("base in subset");
        ensure(agrees, || {
            format!("case {k}: extension moved a prescribed value")
        })?;
        ensure(*ext.lip_constant() == lip_n, || {
            format!("case {k}: Lip {} vs {lip_n}", ext.lip_constant())
        })?;
        ensure(ext.sup() == sup && ext.inf() == inf, || {
            format!("case {k}: range changed")
        })?;
    }
    Ok(60)
}

fn weight_bounds(r: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    let mut spaces: Vec<Arc<PointedMetricSpace>> = gallery().into_iter().map(|g| g.space).collect();
    for _ in 0..10 {
        spaces.push(small_space(r));
    }
    for s in &spaces {
        for n in relevant_indices(s).expect("non-base point") {
            let h = weight_h(s, n);
            ensure(*h.lip_constant() <= pow2(-n), || {
                format!("n={n}: Lip {}", h.lip_constant())
            })?;
            ensure(
                h.values()
                    .iter()
                    .all(|v| !v.is_negative() && *v <= Rational::one()),
                || format!("n={n}: value outside [0,1]"),
            )?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn weight_semigroup(r: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    for _ in 0..10 {
        let s = small_space(r);
        let range: Vec<i64> = relevant_indices(&s).expect("non-base point").collect();
        for &m in &range {
            for &n in range.iter().filter(|&&n| n != m) {
                let hh = weight_h(&s, m)
                    .product(&weight_h(&s, n))
                    .expect("same space");
                ensure(hh == weight_h(&s, m.min(n)), || format!("H: m={m} n={n}"))?;
                let gg = weight_g(&s, m)
                    .product(&weight_g(&s, n))
                    .expect("same space");
                ensure(gg == weight_g(&s, m.max(n)), || format!("G: m={m} n={n}"))?;
                cases += 2;
            }
        }
        let pis: Vec<u32> = relevant_pi_indices(&s).collect();
        for &m in &pis {
            for &n in pis.iter().filter(|&&n| n != m) {
                let pp = weight_pi(&s, m)
                    .product(&weight_pi(&s, n))
                    .expect("same space");
                ensure(pp == weight_pi(&s, m.min(n)), || format!("Pi: m={m} n={n}"))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn abs_split(r: &mut InstanceRng) -> Outcome {
    for _ in 0..60 {
        let s = small_space(r);
        let f = random_function(r, &s);
        let sum = f.pos_part().add(&f.neg_part()).map_err(|e| e.to_string())?;
        ensure(sum == f.abs(), || "f+ + f- != |f|".into())?;
    }
    Ok(60)
}

// free_vec

fn canonical_pairing(r: &mut InstanceRng) -> Outcome {
    let mut pairings = 0;
    for _ in 0..20 {
        let s = small_space(r);
        let m = random_vector(r, &s);
        // split every coefficient in two, add a base-point term, reverse
        let mut raw: Vec<(usize, Rational)> = Vec::new();
        for (&i, a) in m.coeffs() {
            let part = ratio(rand::Rng::gen_range(r, -3..=3), 2);
            raw.push((i, a - &part));
            raw.push((i, part));
        }
        raw.push((s.base(), int(5)));
        raw.reverse();
        let other = FreeVector::canonicalize(s.clone(), raw).map_err(|e| e.to_string())?;
        ensure(other == m, || "canonical forms differ".into())?;
        for _ in 0..50 {
            let f = random_function(r, &s);
            ensure(m.pair(&f) == other.pair(&f), || "pairings differ".into())?;
            pairings += 1;
        }
    }
    Ok(pairings)
}

fn canonical_separation(r: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    for _ in 0..60 {
        let s = small_space(r);
        let a = random_vector(r, &s);
        let b = random_vector(r, &s);
        if a == b {
            continue;
        }
        let diff = a.sub(&b).map_err(|e| e.to_string())?;
        let x = diff.support()[0];
        let mut zeros = vec![s.base()];
        zeros.extend(diff.support());
        let f = bump(&s, x, &zeros);
        let (pa, pb) = (a.pair(&f).expect("same"), b.pair(&f).expect("same"));
        ensure(pa != pb, || format!("bump at {x} does not separate"))?;
        cases += 1;
    }
    Ok(cases)
}

fn support_test(r: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    let spaces: Vec<Arc<PointedMetricSpace>> = gallery().into_iter().map(|g| g.space).collect();
    for s in &spaces {
        for _ in 0..15 {
            let m = random_vector(r, s);
            let f = random_function(r, s);
            let g = random_function(r, s);
            // g overwritten by f on the support
            let mut vals = g.values().to_vec();
            for i in m.support() {
                vals[i] = f.value(i).clone();
            }
            let g = LipschitzFunction::new(s.clone(), vals).expect("zero at base");
            ensure(m.pair(&f) == m.pair(&g), || {
                "pairing sees outside the support".into()
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn support_minimal(r: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    let spaces: Vec<Arc<PointedMetricSpace>> = gallery().into_iter().map(|g| g.space).collect();
    for s in &spaces {
        for _ in 0..15 {
            let m = random_vector(r, s);
            let mut zeros = vec![s.base()];
            zeros.extend(m.support());
            for x in m.support() {
                let f = bump(s, x, &zeros);
                ensure(!m.pair(&f).expect("same").is_zero(), || {
                    format!("bump at {} pairs to zero", s.label(x))
                })?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn pairing_bound(r: &mut InstanceRng) -> Outcome {
    for _ in 0..60 {
        let s = small_space(r);
        let m = random_vector(r, &s);
        let f = random_function(r, &s);
        let lhs = m.pair(&f).expect("same").abs();
        ensure(lhs <= norm(&m) * f.lip_constant(), || {
            "pairing exceeds bound".into()
        })?;
    }
    Ok(60)
}

fn molecule_reassembly(r: &mut InstanceRng) -> Outcome {
    for _ in 0..60 {
        let s = small_space(r);
        let m = random_vector(r, &s);
        let d = m.molecule_decompose();
        ensure(d.reassemble(&s) == m, || "reassembly differs".into())?;
    }
    Ok(60)
}

// kr_solver

fn zero_gap(r: &mut InstanceRng) -> Outcome {
    for k in 0..60 {
        let s = small_space(r);
        let m = random_vector(r, &s);
        let plan = kr_norm_exact(&m);
        ensure(plan.gap.is_zero(), || format!("case {k}: gap {}", plan.gap))?;
        let mut div = vec![Rational::zero(); s.len()];
        let mut cost = Rational::zero();
        for fl in &plan.flow {
            ensure(!fl.amount.is_negative(), || "negative flow".into())?;
            div[fl.from] += &fl.amount;
            div[fl.to] -= &fl.amount;
            cost += &fl.amount * s.dist(fl.from, fl.to);
            let slack =
                s.dist(fl.from, fl.to) - (&plan.potentials[fl.from] - &plan.potentials[fl.to]);
            ensure(fl.amount.is_zero() || slack.is_zero(), || {
                format!("case {k}: slack on ({},{})", fl.from, fl.to)
            })?;
        }
        let supply: Vec<Rational> = (0..s.len())
            .map(|i| {
                if i == s.base() {
                    -m.coeffs().values().sum::<Rational>()
                } else {
                    m.coeff(i)
                }
            })
            .collect();
        ensure(div == supply, || format!("case {k}: flow not balanced"))?;
        ensure(cost == plan.cost, || format!("case {k}: cost mismatch"))?;
        let f = plan.dual_function();
        ensure(*f.lip_constant() <= Rational::one(), || {
            "dual not 1-Lipschitz".into()
        })?;
        ensure(m.pair(&f).expect("same") == plan.cost, || {
            "dual value differs".into()
        })?;
    }
    Ok(60)
}

fn oracle_agreement(r: &mut InstanceRng) -> Outcome {
    for k in 0..60 {
        let n = random_size(r, 3, ORACLE_MAX_POINTS);
        let s = Arc::new(random_space(r, n));
        let m = random_vector(r, &s);
        let a = norm(&m);
        let b = oracle_norm(&m).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("case {k}: simplex {a} vs oracle {b}"))?;
    }
    Ok(60)
}

fn norm_axioms(r: &mut InstanceRng) -> Outcome {
    for k in 0..60 {
        let s = small_space(r);
        let m1 = random_vector(r, &s);
        let m2 = random_vector(r, &s);
        let c = ratio(
            rand::Rng::gen_range(r, -5..=5),
            rand::Rng::gen_range(r, 1..=3),
        );
        let n1 = norm(&m1);
        ensure(!n1.is_negative(), || "negative norm".into())?;
        ensure(n1.is_zero() == m1.is_zero(), || {
            format!("case {k}: definiteness")
        })?;
        ensure(norm(&m1.scale(&c)) == c.abs() * &n1, || {
            format!("case {k}: homogeneity")
        })?;
        let sum = norm(&m1.add(&m2).expect("same"));
        ensure(sum <= &n1 + norm(&m2), || {
            format!("case {k}: triangle inequality")
        })?;
    }
    Ok(60)
}

fn molecule_isometry(_: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    for g in gallery() {
        let s = &g.space;
        for x in 0..s.len() {
            for y in x + 1..s.len() {
                let d = FreeVector::delta(s.clone(), x)
                    .sub(&FreeVector::delta(s.clone(), y))
                    .expect("same space");
                ensure(norm(&d) == *s.dist(x, y), || {
                    format!("{}: ({x},{y})", g.name)
                })?;
                let m = FreeVector::molecule(s.clone(), x, y);
                ensure(norm(&m).is_one(), || {
                    format!("{}: molecule ({x},{y})", g.name)
                })?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn positive_norm(r: &mut InstanceRng) -> Outcome {
    for k in 0..60 {
        let s = small_space(r);
        let m = random_positive_vector(r, &s);
        let rho = LipschitzFunction::rho(s.clone());
        ensure(norm(&m) == m.pair(&rho).expect("same"), || {
            format!("case {k}")
        })?;
    }
    Ok(60)
}

fn norm1_radius(r: &mut InstanceRng) -> Outcome {
    for k in 0..60 {
        let s = small_space(r);
        let m = nonzero_vector(r, &s);
        let rad = s.radius(&m.support()).map_err(|e| e.to_string())?;
        ensure(norm(&m) <= m.norm1() * rad, || format!("case {k}"))?;
    }
    Ok(60)
}

fn float_agreement(r: &mut InstanceRng) -> Outcome {
    for k in 0..60 {
        let s = small_space(r);
        let m = nonzero_vector(r, &s);
        let exact = to_f64(&norm(&m));
        let float = kr_norm_float(&m, 1e-9).map_err(|e| e.to_string())?.cost;
        ensure((float - exact).abs() <= 1e-9 * exact, || {
            format!("case {k}: {float} vs {exact}")
        })?;
    }
    Ok(60)
}

// weighting

fn adjointness(r: &mut InstanceRng) -> Outcome {
    for _ in 0..60 {
        let s = small_space(r);
        let m = random_vector(r, &s);
        let f = random_function(r, &s);
        let w = WeightOperator::new(random_weight(r, &s));
        let lhs = w.adjoint_apply(&m).expect("same").pair(&f).expect("same");
        let rhs = m
            .pair(&w.apply_to_function(&f).expect("same"))
            .expect("same");
        ensure(lhs == rhs, || format!("{lhs} != {rhs}"))?;
    }
    Ok(60)
}

fn standard_weights(s: &Arc<PointedMetricSpace>) -> Vec<(WeightKind, i64, WeightFunction)> {
    let mut out = Vec::new();
    for n in relevant_indices(s).expect("non-base point") {
        out.push((WeightKind::H, n, weight_h(s, n)));
        out.push((WeightKind::G, n, weight_g(s, n)));
        out.push((WeightKind::Lambda, n, weight_lambda(s, n)));
    }
    for n in relevant_pi_indices(s) {
        out.push((WeightKind::Pi, i64::from(n), weight_pi(s, n)));
    }
    out
}

fn operator_bound(r: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    for g in gallery() {
        for (kind, n, h) in standard_weights(&g.space) {
            let w = WeightOperator::new(h);
            let value = w.operator_norm().value;
            ensure(value <= *w.norm_bound(), || {
                format!(
                    "{} {}_{n}: {value} > {}",
                    g.name,
                    kind.name(),
                    w.norm_bound()
                )
            })?;
            cases += 1;
        }
    }
    for _ in 0..30 {
        let s = small_space(r);
        let w = WeightOperator::new(random_weight(r, &s));
        ensure(w.operator_norm().value <= *w.norm_bound(), || {
            "random weight".into()
        })?;
        cases += 1;
    }
    Ok(cases)
}

fn operator_constants(_: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    for g in gallery() {
        for (kind, n, h) in standard_weights(&g.space) {
            let value = WeightOperator::new(h).operator_norm().value;
            ensure(value <= kind.norm_ceiling(), || {
                format!("{} {}_{n}: {value}", g.name, kind.name())
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn kalton(r: &mut InstanceRng) -> Outcome {
    let spaces: Vec<Arc<PointedMetricSpace>> = gallery().into_iter().map(|g| g.space).collect();
    let mut cases = 0;
    for s in &spaces {
        for _ in 0..8 {
            let m = random_vector(r, s);
            let d = kalton_parts(&m);
            ensure(d.reassemble(s) == m, || "parts do not reassemble".into())?;
            ensure(d.sum_of_norms <= int(45) * &d.norm, || {
                format!("sum {} vs norm {}", d.sum_of_norms, d.norm)
            })?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn operator_semigroup(r: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    for _ in 0..6 {
        let s = small_space(r);
        let m = random_vector(r, &s);
        let adj = |h: WeightFunction, v: &FreeVector| {
            WeightOperator::new(h).adjoint_apply(v).expect("same")
        };
        let range: Vec<i64> = relevant_indices(&s).expect("non-base point").collect();
        for &a in &range {
            for &b in range.iter().filter(|&&b| b != a) {
                let hh = adj(weight_h(&s, b), &adj(weight_h(&s, a), &m));
                ensure(hh == adj(weight_h(&s, a.min(b)), &m), || {
                    format!("H: {a},{b}")
                })?;
                let gg = adj(weight_g(&s, b), &adj(weight_g(&s, a), &m));
                ensure(gg == adj(weight_g(&s, a.max(b)), &m), || {
                    format!("G: {a},{b}")
                })?;
                cases += 2;
            }
        }
        let pis: Vec<u32> = relevant_pi_indices(&s).collect();
        for &a in &pis {
            for &b in pis.iter().filter(|&&b| b != a) {
                let pp = adj(weight_pi(&s, b), &adj(weight_pi(&s, a), &m));
                ensure(pp == adj(weight_pi(&s, a.min(b)), &m), || {
                    format!("Pi: {a},{b}")
                })?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

fn finite_classes(r: &mut InstanceRng) -> Outcome {
    for k in 0..40 {
        let s = small_space(r);
        let m = random_vector(r, &s);
        let rep = class_report(&m);
        ensure(
            rep.strongly_bounded.is_some() && rep.avoids_infinity,
            || format!("case {k}: not strongly bounded"),
        )?;
        ensure(
            rep.avoids_zero_strongly.is_some() && rep.avoids_zero,
            || format!("case {k}: does not avoid 0 strongly"),
        )?;
        ensure(rep.concentrated_at_infinity == m.is_zero(), || {
            format!("case {k}")
        })?;
        ensure(rep.concentrated_at_zero == m.is_zero(), || {
            format!("case {k}")
        })?;
        ensure(
            rep.part_at_zero.is_zero() && rep.part_at_infinity.is_zero() && rep.part_finite == m,
            || format!("case {k}: decomposition"),
        )?;
        ensure(rep.norms_add_up(), || format!("case {k}: norms"))?;
    }
    Ok(40)
}

// order

fn positivity_routes(r: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    for g in gallery() {
        for _ in 0..40 {
            let m = if rand::Rng::gen_bool(r, 0.5) {
                random_positive_vector(r, &g.space)
            } else {
                random_vector(r, &g.space)
            };
            ensure(
                is_positive(&m, Route::Coefficients) == is_positive(&m, Route::Lp),
                || format!("{}: routes disagree", g.name),
            )?;
            cases += 1;
        }
    }
    Ok(cases)
}

/// A positive majorant of `m`: `m+` plus a random positive element.
fn random_majorant(r: &mut InstanceRng, m: &FreeVector) -> FreeVector {
    let extra = if rand::Rng::gen_bool(r, 0.3) {
        FreeVector::zero(m.space().clone())
    } else {
        random_positive_vector(r, m.space())
    };
    minimum_majorant(m).plus.add(&extra).expect("same space")
}

fn jordan_minimal(r: &mut InstanceRng) -> Outcome {
    for k in 0..40 {
        let s = small_space(r);
        let m = random_vector(r, &s);
        let psi = random_majorant(r, &m);
        let check = check_majorant(&m, &psi).map_err(|e| e.to_string())?;
        ensure(check.is_majorant, || format!("case {k}: psi rejected"))?;
        let gap = psi.sub(&minimum_majorant(&m).plus).expect("same");
        ensure(is_positive(&gap, Route::Lp), || {
            format!("case {k}: psi - m+ not positive")
        })?;
    }
    Ok(40)
}

fn jordan_norms(r: &mut InstanceRng) -> Outcome {
    for k in 0..60 {
        let s = small_space(r);
        let m = random_vector(r, &s);
        let mm = minimum_majorant(&m);
        ensure(
            norm(&mm.plus) + norm(&mm.minus) == norm(&variation(&m)),
            || format!("case {k}"),
        )?;
    }
    Ok(60)
}

fn support_identity(r: &mut InstanceRng) -> Outcome {
    for k in 0..60 {
        let s = small_space(r);
        let m = random_vector(r, &s);
        ensure(support_identities(&m).holds(), || format!("case {k}"))?;
    }
    Ok(60)
}

fn modulus(r: &mut InstanceRng) -> Outcome {
    for k in 0..60 {
        let s = small_space(r);
        let m = random_vector(r, &s);
        let f = random_function(r, &s);
        let lhs = m.pair(&f).expect("same").abs();
        let rhs = variation(&m).pair(&f.abs()).expect("same");
        ensure(lhs <= rhs, || format!("case {k}: {lhs} > {rhs}"))?;
    }
    Ok(60)
}

fn norming_function(r: &mut InstanceRng) -> Outcome {
    for k in 0..60 {
        let s = small_space(r);
        let m = random_positive_vector(r, &s);
        let f = dual_optimal_function(&m).map_err(|e| e.to_string())?;
        for i in m.support() {
            ensure(f.value(i) == s.rho(i), || {
                format!("case {k}: point {}", s.label(i))
            })?;
        }
    }
    Ok(60)
}

// experiments

fn ambrosio(_: &mut InstanceRng) -> Outcome {
    for n in 1..=EXACT_N_CAP {
        let inst = gen_ambrosio(n).map_err(|e| e.to_string())?;
        let nm = norm(&inst.vector);
        ensure(inst.vector.norm1() == int(n as i64), || {
            format!("N={n}: norm1")
        })?;
        ensure(nm < ratio(1, 2), || format!("N={n}: norm {nm}"))?;
        ensure(inst.vector.norm1() >= int(2 * n as i64) * &nm, || {
            format!("N={n}: ratio")
        })?;
    }
    Ok(EXACT_N_CAP)
}

fn weaver(_: &mut InstanceRng) -> Outcome {
    for n in 1..=EXACT_N_CAP {
        let inst = gen_weaver(n).map_err(|e| e.to_string())?;
        let plus = minimum_majorant(&inst.vector).plus;
        let p = plus.pair(&inst.h).expect("same");
        ensure(p == int(n as i64), || format!("N={n}: <m+,h> = {p}"))?;
        let nm = norm(&inst.vector);
        ensure(nm <= ratio(1, 9), || format!("N={n}: norm {nm}"))?;
    }
    Ok(EXACT_N_CAP)
}

fn gallery_constants(_: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    for g in gallery() {
        if let Some(a) = &g.expected_alpha {
            let got = g.space.radial_alpha().map_err(|e| e.to_string())?.alpha;
            ensure(got == *a, || format!("{}: alpha {got} vs {a}", g.name))?;
            cases += 1;
        }
        if let Some(t) = &g.expected_theta {
            let got = g.space.uniform_separation().map_err(|e| e.to_string())?;
            ensure(got == *t, || format!("{}: theta {got} vs {t}", g.name))?;
            cases += 1;
        }
    }
    Ok(cases)
}

fn radial_majorant(r: &mut InstanceRng) -> Outcome {
    let mut cases = 0;
    for g in gallery() {
        for _ in 0..10 {
            let len = random_size(r, 1, 6);
            let fam = random_molecule_family(r, &g.space, len);
            let rep = radial_majorant_bound(&g.space, &fam).map_err(|e| e.to_string())?;
            ensure(rep.all_hold(), || format!("{}: {rep:?}", g.name))?;
            cases += 1;
        }
    }
    Ok(cases)
}

// cli

fn report_determinism(r: &mut InstanceRng) -> Outcome {
    let seed: u64 = rand::Rng::gen(r);
    let make = || {
        let mut a = rng(seed);
        let s = Arc::new(random_space(&mut a, 6));
        let m = random_vector(&mut a, &s);
        format!(
            "{}\n{}\n{}",
            space_json(&s),
            crate::io::vector_json(&m),
            crate::io::plan_json(&crate::transport::Plan::Exact(kr_norm_exact(&m)))
        )
    };
    ensure(make() == make(), || "instances differ".into())?;
    Ok(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_ids_are_unique_and_modules_known() {
        let m = manifest();
        let mut ids: Vec<_> = m.iter().map(|i| i.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), m.len());
        for module in modules() {
            assert!(m.iter().any(|i| i.module == *module), "{module}");
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run("nope", 1).is_err());
    }

    #[test]
    fn single_module_runs() {
        let rep = run("metric_core", 42).unwrap();
        assert!(rep.all_passed(), "{}", rep.table());
        assert_eq!(rep, run("metric_core", 42).unwrap());
    }
}
