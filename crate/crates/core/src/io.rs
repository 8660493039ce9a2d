//! JSON and CSV file formats.
//!
//! Scalars are written as strings: `"p"` or `"p/q"` in exact mode and the
//! shortest round-trip decimal in float mode. On input, strings in either
//! form, decimals and JSON numbers are all parsed exactly.

use std::sync::Arc;

use serde::Deserialize;
use serde_json::{json, Map, Value as Json};

use crate::error::{Error, Result};
use crate::experiments::ExperimentRow;
use crate::free_vec::{FreeVector, MoleculeDecomposition};
use crate::lipschitz::{LipschitzFunction, WeightFunction};
use crate::metric::{PointedMetricSpace, RadialReport};
use crate::order::{MajorantCheck, MajorantFailure, SupportIdentities};
use crate::scalar::{format_rational, rational_from_json, Rational, Value};
use crate::transport::{Plan, TransportPlan};
use crate::weighting::{KaltonDecomposition, SeparationClassReport};

fn s(r: &Rational) -> Json {
    Json::String(format_rational(r))
}

pub fn value_json(v: &Value) -> Json {
    match v {
        Value::Exact(r) => s(r),
        Value::Float(x) => Json::String(x.to_string()),
    }
}

#[derive(Deserialize)]
struct SpaceFile {
    points: Vec<String>,
    base: String,
    dist: Vec<Vec<Json>>,
}

pub fn parse_space(text: &str) -> Result<PointedMetricSpace> {
    let file: SpaceFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let dist = file
        .dist
        .iter()
        .map(|row| {
            row.iter()
                .map(rational_from_json)
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    PointedMetricSpace::validate_labeled(file.points, dist, &file.base)
}

pub fn space_json(space: &PointedMetricSpace) -> Json {
    json!({
        "points": space.labels(),
        "base": space.label(space.base()),
        "dist": space
            .matrix()
            .iter()
            .map(|row| row.iter().map(s).collect::<Vec<_>>())
            .collect::<Vec<_>>(),
    })
}

fn label_map(text: &str) -> Result<Vec<(String, Rational)>> {
    let map: Map<String, Json> =
        serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    map.iter()
        .map(|(k, v)| rational_from_json(v).map(|r| (k.clone(), r)))
        .collect()
}

/// `{"coeffs": {"label": scalar}}`.
pub fn parse_vector(space: &Arc<PointedMetricSpace>, text: &str) -> Result<FreeVector> {
    #[derive(Deserialize)]
    struct VectorFile {
        coeffs: Map<String, Json>,
    }
    let file: VectorFile = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
    let raw = file
        .coeffs
        .iter()
        .map(|(k, v)| Ok((space.index_of(k)?, rational_from_json(v)?)))
        .collect::<Result<Vec<_>>>()?;
    FreeVector::canonicalize(space.clone(), raw)
}

pub fn coeffs_json(m: &FreeVector) -> Json {
    let space = m.space();
    let mut map = Map::new();
    for (&i, a) in m.coeffs() {
        map.insert(space.label(i).to_string(), s(a));
    }
    Json::Object(map)
}

pub fn vector_json(m: &FreeVector) -> Json {
    json!({ "coeffs": coeffs_json(m) })
}

fn values_json(space: &PointedMetricSpace, values: &[Rational]) -> Json {
    let mut map = Map::new();
    for (i, v) in values.iter().enumerate() {
        map.insert(space.label(i).to_string(), s(v));
    }
    Json::Object(map)
}

/// `{"label": value}` for every point.
pub fn function_json(f: &LipschitzFunction) -> Json {
    values_json(f.space(), f.values())
}

pub fn weight_json(h: &WeightFunction) -> Json {
    values_json(h.space(), h.values())
}

/// A `{"label": value}` map, possibly covering only some points.
pub fn parse_partial_function(
    space: &PointedMetricSpace,
    text: &str,
) -> Result<Vec<(usize, Rational)>> {
    label_map(text)?
        .into_iter()
        .map(|(l, v)| Ok((space.index_of(&l)?, v)))
        .collect()
}

/// A `{"label": value}` map covering every point.
pub fn parse_function(space: &Arc<PointedMetricSpace>, text: &str) -> Result<LipschitzFunction> {
    let partial = parse_partial_function(space, text)?;
    let mut values: Vec<Option<Rational>> = vec![None; space.len()];
    for (i, v) in partial {
        values[i] = Some(v);
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::Format(format!("no value for point {}", space.label(i))))
        })
        .collect::<Result<Vec<_>>>()?;
    LipschitzFunction::new(space.clone(), values)
}

fn plan_body<T>(plan: &TransportPlan<T>, fmt: impl Fn(&T) -> Json, mode: &str) -> Json {
    let space = &plan.space;
    let flow: Vec<Json> = plan
        .flow
        .iter()
        .map(|f| {
            json!({
                "from": space.label(f.from),
                "to": space.label(f.to),
                "amount": fmt(&f.amount),
            })
        })
        .collect();
    let mut dual = Map::new();
    for (i, p) in plan.potentials.iter().enumerate() {
        dual.insert(space.label(i).to_string(), fmt(p));
    }
    json!({
        "norm": fmt(&plan.cost),
        "flow": flow,
        "dual": dual,
        "gap": fmt(&plan.gap),
        "mode": mode,
    })
}

/// `{"norm", "flow": [{"from","to","amount"}], "dual", "gap", "mode"}`.
pub fn plan_json(plan: &Plan) -> Json {
    match plan {
        Plan::Exact(p) => plan_body(p, s, "exact"),
        Plan::Float(p) => plan_body(p, |x| Json::String(x.to_string()), "float"),
    }
}

pub fn radial_json(space: &PointedMetricSpace, r: &RadialReport) -> Result<Json> {
    Ok(json!({
        "alpha": s(&r.alpha),
        "witness": [space.label(r.witness.0), space.label(r.witness.1)],
        "vacuous": r.vacuous,
        "is_radially_discrete": r.is_radially_discrete,
        "theta": s(&space.uniform_separation()?),
        "is_uniformly_discrete": space.is_uniformly_discrete()?,
        "is_radially_uniformly_discrete": space.is_radially_uniformly_discrete()?,
    }))
}

fn labels(space: &PointedMetricSpace, set: &[usize]) -> Json {
    Json::Array(set.iter().map(|&i| json!(space.label(i))).collect())
}

pub fn support_json(m: &FreeVector) -> Json {
    labels(m.space(), &m.support())
}

pub fn molecules_json(space: &PointedMetricSpace, d: &MoleculeDecomposition) -> Json {
    let one = |m: &crate::free_vec::Molecule| json!({"x": space.label(m.x), "y": space.label(m.y), "weight": s(&m.weight)});
    json!({
        "molecules": d.molecules.iter().map(one).collect::<Vec<_>>(),
        "residuals": d.residuals.iter().map(one).collect::<Vec<_>>(),
    })
}

pub fn kalton_json(d: &KaltonDecomposition) -> Json {
    json!({
        "norm": s(&d.norm),
        "sum_of_part_norms": s(&d.sum_of_norms),
        "ratio": d.ratio().as_ref().map(s),
        "parts": d.parts.iter().map(|p| json!({
            "n": p.n,
            "coeffs": coeffs_json(&p.part),
            "norm": s(&p.norm),
        })).collect::<Vec<_>>(),
    })
}

pub fn class_report_json(r: &SeparationClassReport) -> Json {
    json!({
        "concentrated_at_infinity": r.concentrated_at_infinity,
        "avoids_infinity": r.avoids_infinity,
        "strongly_bounded": r.strongly_bounded.is_some(),
        "strongly_bounded_witness": r.strongly_bounded,
        "concentrated_at_zero": r.concentrated_at_zero,
        "avoids_zero": r.avoids_zero,
        "avoids_zero_strongly": r.avoids_zero_strongly.is_some(),
        "avoids_zero_strongly_witness": r.avoids_zero_strongly,
        "decomposition": {
            "at_zero": coeffs_json(&r.part_at_zero),
            "finite": coeffs_json(&r.part_finite),
            "at_infinity": coeffs_json(&r.part_at_infinity),
        },
        "norms": {
            "total": s(&r.norm),
            "at_zero": s(&r.norm_at_zero),
            "finite": s(&r.norm_finite),
            "at_infinity": s(&r.norm_at_infinity),
        },
        "norms_add_up": r.norms_add_up(),
    })
}

pub fn support_identities_json(space: &PointedMetricSpace, r: &SupportIdentities) -> Json {
    json!({
        "variation": labels(space, &r.variation),
        "plus_union_minus": labels(space, &r.jordan_union),
        "vector": labels(space, &r.original),
        "holds": r.holds(),
    })
}

pub fn majorant_check_json(r: &MajorantCheck) -> Json {
    let (kind, cert) = match &r.failure {
        None => (Json::Null, Json::Null),
        Some(MajorantFailure::NotPositive(f)) => (json!("not_positive"), function_json(f)),
        Some(MajorantFailure::NotAbove(f)) => (json!("not_above"), function_json(f)),
    };
    json!({ "is_majorant": r.is_majorant, "failure": kind, "certificate": cert })
}

/// CSV table for an experiment; `timing = false` blanks the wall-time column.
pub fn experiment_csv(diagnostic_name: &str, rows: &[ExperimentRow], timing: bool) -> String {
    let mut out = format!("N,norm,{diagnostic_name},wall_time_s,mode\n");
    for r in rows {
        let t = if timing {
            format!("{:.6}", r.seconds)
        } else {
            String::new()
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.n,
            match &r.norm {
                Value::Exact(q) => format_rational(q),
                Value::Float(x) => x.to_string(),
            },
            format_rational(&r.diagnostic),
            t,
            r.mode
        ));
    }
    out
}

pub fn experiment_json(diagnostic_name: &str, rows: &[ExperimentRow], timing: bool) -> Json {
    Json::Array(
        rows.iter()
            .map(|r| {
                let mut o = Map::new();
                o.insert("N".into(), json!(r.n));
                o.insert("norm".into(), value_json(&r.norm));
                o.insert(diagnostic_name.into(), s(&r.diagnostic));
                if timing {
                    o.insert("wall_time_s".into(), json!(r.seconds));
                }
                o.insert("mode".into(), json!(r.mode));
                Json::Object(o)
            })
            .collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, ratio};
    use crate::transport::kr_norm;

    const SPACE: &str = r#"{"points": ["0", "a", "b"], "base": "0",
        "dist": [["0", "1", "2"], ["1", 0, "1.0"], [2, "2/2", "0"]]}"#;

    #[test]
    fn reads_space_with_mixed_scalars() {
        let s = parse_space(SPACE).unwrap();
        assert_eq!(s.dist(1, 2), &int(1));
        assert_eq!(s.base(), 0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_space("{"), Err(Error::Format(_))));
        let bad = SPACE.replace("\"base\": \"0\"", "\"base\": \"z\"");
        assert_eq!(parse_space(&bad), Err(Error::BadBaseIndex("z".into())));
        let bad = SPACE.replace("\"1.0\"", "\"x\"");
        assert!(matches!(parse_space(&bad), Err(Error::BadScalar(_))));
    }

    #[test]
    fn vector_and_plan() {
        let s = Arc::new(parse_space(SPACE).unwrap());
        let m = parse_vector(&s, r#"{"coeffs": {"a": "2", "b": -1, "0": 5}}"#).unwrap();
        assert_eq!(m.coeff(1), int(2));
        assert_eq!(m.coeff(2), int(-1));
        let j = plan_json(&kr_norm(&m, crate::Mode::Exact).unwrap());
        assert_eq!(j["norm"], "2");
        assert_eq!(j["mode"], "exact");
        assert_eq!(j["gap"], "0");
        assert_eq!(j["dual"]["a"], "1");
        assert!(parse_vector(&s, r#"{"coeffs": {"q": 1}}"#).is_err());
    }

    #[test]
    fn function_maps() {
        let s = Arc::new(parse_space(SPACE).unwrap());
        let f = parse_function(&s, r#"{"0": 0, "a": "1/2", "b": "0.25"}"#).unwrap();
        assert_eq!(f.value(1), &ratio(1, 2));
        assert_eq!(function_json(&f)["b"], "1/4");
        assert!(parse_function(&s, r#"{"0": 0, "a": 1}"#).is_err());
    }
}
