//! Acceptance criteria, one pass/fail line each.
//!
//! Runs without the libtest harness so every line is printed even when all
//! criteria pass. Exits nonzero when any criterion fails.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::{Duration, Instant};

use num_traits::{One, Signed, Zero};
use rand::Rng;

use lipfree::experiments::{gen_ambrosio, gen_gallery, gen_weaver, radial_majorant_bound};
use lipfree::order::{check_majorant, is_positive, minimum_majorant, support_identities, Route};
use lipfree::random::{
    random_molecule_family, random_positive_vector, random_size, random_space, random_vector,
    random_weight, rng, InstanceRng,
};
use lipfree::scalar::{int, ratio, to_f64};
use lipfree::transport::{kr_norm_float, ORACLE_MAX_POINTS};
use lipfree::weights::{
    relevant_indices, relevant_pi_indices, weight_g, weight_h, weight_lambda, weight_pi,
};
use lipfree::{
    dual_optimal_function, kalton_parts, norm, oracle_norm, FreeVector, LipschitzFunction,
    PointedMetricSpace, Rational, WeightKind, WeightOperator,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, took: Duration, what: &str) -> Result<(), String> {
    ensure(took < limit, || {
        format!("{what} took {took:?}, limit {limit:?}")
    })
}

fn delta_diff(s: &Arc<PointedMetricSpace>, x: usize, y: usize) -> FreeVector {
    FreeVector::delta(s.clone(), x)
        .sub(&FreeVector::delta(s.clone(), y))
        .unwrap()
}

/// 200 random spaces with 3..=8 points, five vectors each.
fn corpus() -> Vec<FreeVector> {
    let mut r = rng(1);
    let mut out = Vec::new();
    for _ in 0..200 {
        let n = random_size(&mut r, 3, ORACLE_MAX_POINTS);
        let s = Arc::new(random_space(&mut r, n));
        for _ in 0..5 {
            out.push(random_vector(&mut r, &s));
        }
    }
    out
}

fn duality_gap_zero(corpus: &[FreeVector]) -> Check {
    let start = Instant::now();
    for (k, m) in corpus.iter().enumerate() {
        let a = norm(m);
        let b = oracle_norm(m).map_err(|e| e.to_string())?;
        ensure(a == b, || {
            format!("instance {k}: simplex {a} vs oracle {b}")
        })?;
    }
    within(Duration::from_secs(60), start.elapsed(), "corpus")?;
    Ok(format!(
        "{} instances in {:.2?}",
        corpus.len(),
        start.elapsed()
    ))
}

fn molecule_isometry() -> Check {
    let mut pairs = 0;
    for g in gen_gallery() {
        let s = &g.space;
        for x in 0..s.len() {
            for y in 0..s.len() {
                if x != y {
                    let got = norm(&delta_diff(s, x, y));
                    ensure(got == *s.dist(x, y), || {
                        format!("{} ({x},{y}): {got} vs {}", g.name, s.dist(x, y))
                    })?;
                    pairs += 1;
                }
            }
        }
    }
    Ok(format!("{pairs} ordered pairs"))
}

fn positive_norm_identity() -> Check {
    let mut r = rng(3);
    for k in 0..200 {
        let n = random_size(&mut r, 2, 8);
        let s = Arc::new(random_space(&mut r, n));
        let m = random_positive_vector(&mut r, &s);
        let rho = LipschitzFunction::rho(s.clone());
        let pairing = m.pair(&rho).unwrap();
        ensure(norm(&m) == pairing, || format!("vector {k}"))?;
        let m2 = random_positive_vector(&mut r, &s);
        let sum = norm(&m.add(&m2).unwrap());
        ensure(sum == norm(&m) + norm(&m2), || {
            format!("pair {k}: not additive")
        })?;
    }
    Ok("200 vectors, 200 pairs".into())
}

fn operator_constants() -> Check {
    let mut checked = 0;
    let mut worst = [
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
        Rational::zero(),
    ];
    for g in gen_gallery() {
        let s = &g.space;
        let mut weights = Vec::new();
        for n in relevant_indices(s).unwrap() {
            weights.push((WeightKind::H, 0, n, weight_h(s, n)));
            weights.push((WeightKind::G, 1, n, weight_g(s, n)));
            weights.push((WeightKind::Lambda, 2, n, weight_lambda(s, n)));
        }
        for n in relevant_pi_indices(s) {
            weights.push((WeightKind::Pi, 3, i64::from(n), weight_pi(s, n)));
        }
        for (kind, slot, n, h) in weights {
            let op = WeightOperator::new(h);
            let v = op.operator_norm().value;
            ensure(v <= kind.norm_ceiling(), || {
                format!("{} {}_{n}: {v}", g.name, kind.name())
            })?;
            ensure(v <= *op.norm_bound(), || {
                format!("{} {}_{n}: above bound", g.name, kind.name())
            })?;
            if v > worst[slot] {
                worst[slot] = v;
            }
            checked += 1;
        }
    }
    let mut r = rng(4);
    for k in 0..100 {
        let n = random_size(&mut r, 2, 7);
        let s = Arc::new(random_space(&mut r, n));
        let op = WeightOperator::new(random_weight(&mut r, &s));
        let v = op.operator_norm().value;
        ensure(v <= *op.norm_bound(), || {
            format!("random weight {k}: {v} > {}", op.norm_bound())
        })?;
    }
    Ok(format!(
        "{checked} standard operators (max H {}, G {}, Lambda {}, Pi {}), 100 random weights",
        to_f64(&worst[0]),
        to_f64(&worst[1]),
        to_f64(&worst[2]),
        to_f64(&worst[3])
    ))
}

fn kalton_suite() -> Check {
    let gallery = gen_gallery();
    let mut r = rng(5);
    let mut max_ratio = 0.0f64;
    for k in 0..200 {
        let s = &gallery[k % gallery.len()].space;
        let m = random_vector(&mut r, s);
        let d = kalton_parts(&m);
        ensure(d.reassemble(s) == m, || {
            format!("vector {k}: parts do not reassemble")
        })?;
        ensure(d.sum_of_norms <= int(45) * &d.norm, || {
            format!("vector {k}: {} > 45 * {}", d.sum_of_norms, d.norm)
        })?;
        if let Some(q) = d.ratio() {
            max_ratio = max_ratio.max(to_f64(&q));
        }
    }
    Ok(format!("200 vectors, largest ratio {max_ratio:.4}"))
}

fn positivity_equivalence() -> Check {
    let mut r = rng(6);
    let gallery = gen_gallery();
    let mut positives = 0;
    for g in &gallery {
        for k in 0..500 {
            let m = if r.gen_bool(0.5) {
                random_positive_vector(&mut r, &g.space)
            } else {
                random_vector(&mut r, &g.space)
            };
            let a = is_positive(&m, Route::Coefficients);
            ensure(a == is_positive(&m, Route::Lp), || {
                format!("{} vector {k}", g.name)
            })?;
            positives += usize::from(a);
        }
    }
    Ok(format!(
        "{} vectors over {} spaces, {positives} positive",
        500 * gallery.len(),
        gallery.len()
    ))
}

fn jordan_minimality() -> Check {
    let mut r = rng(7);
    for k in 0..100 {
        let n = random_size(&mut r, 2, 7);
        let s = Arc::new(random_space(&mut r, n));
        let m = random_vector(&mut r, &s);
        let plus = minimum_majorant(&m).plus;
        let psi = plus.add(&random_positive_vector(&mut r, &s)).unwrap();
        ensure(check_majorant(&m, &psi).unwrap().is_majorant, || {
            format!("case {k}: psi is not a positive majorant")
        })?;
        ensure(is_positive(&psi.sub(&plus).unwrap(), Route::Lp), || {
            format!("case {k}: psi - m+ is not positive")
        })?;
        ensure(support_identities(&m).holds(), || {
            format!("case {k}: supports")
        })?;
    }
    Ok("100 (m, psi) pairs".into())
}

fn ambrosio_divergence() -> Check {
    let start = Instant::now();
    let mut last = String::new();
    for n in 1..=14usize {
        let inst = gen_ambrosio(n).map_err(|e| e.to_string())?;
        let nm = norm(&inst.vector);
        let n1 = inst.vector.norm1();
        ensure(nm < ratio(1, 2), || format!("N={n}: norm {nm}"))?;
        ensure(n1 == int(n as i64), || format!("N={n}: norm1 {n1}"))?;
        ensure(n1 >= int(2 * n as i64) * &nm, || {
            format!("N={n}: ratio below 2N")
        })?;
        last = format!("N=14 norm {nm}, ratio {:.2}", to_f64(&(&n1 / &nm)));
    }
    within(Duration::from_secs(5), start.elapsed(), "Ambrosio run")?;
    Ok(format!("{last}, {:.2?}", start.elapsed()))
}

fn weaver_divergence() -> Check {
    let start = Instant::now();
    let mut last = String::new();
    for n in 1..=14usize {
        let inst = gen_weaver(n).map_err(|e| e.to_string())?;
        let plus = minimum_majorant(&inst.vector).plus;
        let p = plus.pair(&inst.h).unwrap();
        let nm = norm(&inst.vector);
        ensure(p == int(n as i64), || format!("N={n}: <m+, h> = {p}"))?;
        ensure(nm <= ratio(1, 9), || format!("N={n}: norm {nm}"))?;
        last = format!(
            "N=14 norm {:.6}, ||m+|| {:.3}",
            to_f64(&nm),
            to_f64(&norm(&plus))
        );
    }
    within(Duration::from_secs(10), start.elapsed(), "Weaver run")?;
    Ok(format!("{last}, {:.2?}", start.elapsed()))
}

fn radial_bound() -> Check {
    let mut r = rng(10);
    let gallery = gen_gallery();
    for g in &gallery {
        for k in 0..100 {
            let len = random_size(&mut r, 1, 8);
            let fam = random_molecule_family(&mut r, &g.space, len);
            let rep = radial_majorant_bound(&g.space, &fam).map_err(|e| e.to_string())?;
            ensure(rep.bound_holds, || {
                format!(
                    "{} family {k}: {} > {}",
                    g.name, rep.majorant_norm, rep.bound
                )
            })?;
            ensure(rep.majorant_positive && rep.dominates, || {
                format!("{} family {k}: not a positive majorant", g.name)
            })?;
        }
    }
    Ok(format!("100 families on each of {} spaces", gallery.len()))
}

fn norming_function() -> Check {
    let mut r = rng(11);
    for k in 0..100 {
        let n = random_size(&mut r, 2, 8);
        let s = Arc::new(random_space(&mut r, n));
        let m = random_positive_vector(&mut r, &s);
        let f = dual_optimal_function(&m).map_err(|e| e.to_string())?;
        ensure(*f.lip_constant() <= Rational::one(), || {
            format!("case {k}: Lip > 1")
        })?;
        for i in m.support() {
            ensure(f.value(i) == s.rho(i), || {
                format!(
                    "case {k}: f*({}) = {} vs rho {}",
                    s.label(i),
                    f.value(i),
                    s.rho(i)
                )
            })?;
        }
    }
    Ok("100 positive vectors".into())
}

fn float_soundness(corpus: &[FreeVector]) -> Check {
    let mut worst = 0.0f64;
    for (k, m) in corpus.iter().enumerate() {
        let exact = to_f64(&norm(m));
        let float = kr_norm_float(m, 1e-9)
            .map_err(|e| format!("instance {k}: {e}"))?
            .cost;
        let err = if exact == 0.0 {
            float.abs()
        } else {
            (float - exact).abs() / exact
        };
        ensure(err <= 1e-9, || format!("instance {k}: {float} vs {exact}"))?;
        worst = worst.max(err);
    }
    let mut r: InstanceRng = rng(12);
    let s = Arc::new(random_space(&mut r, 50));
    let m = random_vector(&mut r, &s);
    ensure(
        !m.is_zero() && m.coeffs().values().any(|a| a.is_negative()),
        || "50-point vector is degenerate".into(),
    )?;
    let start = Instant::now();
    let plan = kr_norm_float(&m, 1e-9).map_err(|e| e.to_string())?;
    let took = start.elapsed();
    within(Duration::from_secs(1), took, "50-point float solve")?;
    Ok(format!(
        "largest relative error {worst:.1e}; 50 points in {took:.2?} ({} pivots)",
        plan.pivots
    ))
}

fn main() -> ExitCode {
    let corpus = corpus();
    let criteria: Vec<(&str, Box<dyn Fn() -> Check + '_>)> = vec![
        ("1 duality gap zero", Box::new(|| duality_gap_zero(&corpus))),
        ("2 molecule isometry", Box::new(molecule_isometry)),
        ("3 positive-norm identity", Box::new(positive_norm_identity)),
        (
            "4 weighting-operator constants",
            Box::new(operator_constants),
        ),
        ("5 Kalton suite", Box::new(kalton_suite)),
        ("6 positivity equivalence", Box::new(positivity_equivalence)),
        ("7 Jordan minimality", Box::new(jordan_minimality)),
        ("8 Ambrosio divergence", Box::new(ambrosio_divergence)),
        ("9 Weaver divergence", Box::new(weaver_divergence)),
        ("10 radial bound", Box::new(radial_bound)),
        ("11 norming-function agreement", Box::new(norming_function)),
        (
            "12 float-mode soundness",
            Box::new(|| float_soundness(&corpus)),
        ),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
