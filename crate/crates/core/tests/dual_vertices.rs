//! Brute-force check of the norm by enumerating vertices of the dual
//! polytope { f : f(0) = 0, f(x) - f(y) <= d(x, y) }.
//!
//! For three points the free variables are f(a), f(b); every vertex is the
//! intersection of two tight constraints, so it is enough to intersect all
//! constraint pairs and keep the feasible points.

use std::sync::Arc;

use num_traits::Zero;

use lipfree::scalar::{int, ratio};
use lipfree::{norm, FreeVector, PointedMetricSpace, Rational};

/// Constraint `c0 * u + c1 * v <= rhs`.
type Row = (Rational, Rational, Rational);

fn constraints(s: &PointedMetricSpace) -> Vec<Row> {
    let (a, b) = (1, 2);
    let one = int(1);
    let zero = Rational::zero();
    vec![
        (one.clone(), zero.clone(), s.dist(a, 0).clone()),
        (-one.clone(), zero.clone(), s.dist(a, 0).clone()),
        (zero.clone(), one.clone(), s.dist(b, 0).clone()),
        (zero.clone(), -one.clone(), s.dist(b, 0).clone()),
        (one.clone(), -one.clone(), s.dist(a, b).clone()),
        (-one.clone(), one, s.dist(a, b).clone()),
    ]
}

fn vertex_max(s: &PointedMetricSpace, ca: &Rational, cb: &Rational) -> Rational {
    let rows = constraints(s);
    let mut best: Option<Rational> = None;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            let (a1, b1, r1) = &rows[i];
            let (a2, b2, r2) = &rows[j];
            let det = a1 * b2 - a2 * b1;
            if det.is_zero() {
                continue;
            }
            let u = (r1 * b2 - r2 * b1) / &det;
            let v = (a1 * r2 - a2 * r1) / &det;
            if rows.iter().all(|(p, q, r)| p * &u + q * &v <= *r) {
                let val = ca * &u + cb * &v;
                if best.as_ref().is_none_or(|b| val > *b) {
                    best = Some(val);
                }
            }
        }
    }
    best.expect("bounded nonempty polytope has a vertex")
}

fn triangle(dab: i64) -> Arc<PointedMetricSpace> {
    Arc::new(
        PointedMetricSpace::validate(
            vec!["0".into(), "a".into(), "b".into()],
            vec![
                vec![int(0), int(1), int(2)],
                vec![int(1), int(0), int(dab)],
                vec![int(2), int(dab), int(0)],
            ],
            0,
        )
        .unwrap(),
    )
}

#[test]
fn three_point_example() {
    let s = triangle(1);
    let (ca, cb) = (int(2), int(-1));
    assert_eq!(vertex_max(&s, &ca, &cb), int(2));
    let m = FreeVector::canonicalize(s.clone(), [(1, ca), (2, cb)]).unwrap();
    assert_eq!(norm(&m), int(2));
}

#[test]
fn sweep_of_coefficients() {
    for dab in 1..=3 {
        let s = triangle(dab);
        for p in -4..=4 {
            for q in -4..=4 {
                let (ca, cb) = (ratio(p, 2), ratio(q, 3));
                let m = FreeVector::canonicalize(s.clone(), [(1, ca.clone()), (2, cb.clone())])
                    .unwrap();
                assert_eq!(
                    norm(&m),
                    vertex_max(&s, &ca, &cb),
                    "d(a,b)={dab} p={p} q={q}"
                );
            }
        }
    }
}
