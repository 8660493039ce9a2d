use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value as Json};

use lipfree::experiments::{
    ambrosio_row, gen_ambrosio, gen_gallery, gen_weaver, ExperimentRow, EXACT_N_CAP,
};
use lipfree::io;
use lipfree::order::{
    check_majorant, minimum_majorant, positivity_lp, support_identities, variation,
};
use lipfree::random::{random_positive_vector, random_space, random_vector, rng};
use lipfree::scalar::format_rational;
use lipfree::{
    class_report, kalton_parts, kr_norm, mcshane_extend, norm, suite, FreeVector, Mode,
    PointedMetricSpace, WeightKind, WeightOperator,
};

use crate::args::{
    Cli, Command, DecomposeArg, ExperimentArg, GenCommand, ModeArg, OutFormat, WeightArg,
};
use crate::CliError;

pub const MODE_ENV: &str = "LIPFREE_MODE";

/// What a command produced.
struct Output {
    result: Json,
    summary: String,
    csv: Option<String>,
    /// Print the summary even without `--report`.
    summary_first: bool,
    exit: u8,
}

impl Output {
    fn new(result: Json, summary: impl Into<String>) -> Self {
        Self {
            result,
            summary: summary.into(),
            csv: None,
            summary_first: false,
            exit: 0,
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load_space(path: &Path) -> Result<Arc<PointedMetricSpace>, CliError> {
    Ok(Arc::new(io::parse_space(&read(path)?)?))
}

fn load_pair(space: &Path, vector: &Path) -> Result<FreeVector, CliError> {
    let s = load_space(space)?;
    Ok(io::parse_vector(&s, &read(vector)?)?)
}

/// Mode from `--mode`, else `$LIPFREE_MODE`, else exact; with its source.
fn resolve_mode(cli: &Cli) -> Result<(Mode, &'static str), CliError> {
    let float = Mode::Float {
        tolerance: cli.global.tolerance,
    };
    if let Some(m) = cli.global.mode {
        return Ok((
            if m == ModeArg::Float {
                float
            } else {
                Mode::Exact
            },
            "flag",
        ));
    }
    match std::env::var(MODE_ENV) {
        Ok(v) if v == "exact" => Ok((Mode::Exact, "env")),
        Ok(v) if v == "float" => Ok((float, "env")),
        Ok(v) => Err(CliError::Usage(format!(
            "{MODE_ENV}={v} is not exact or float"
        ))),
        Err(_) => Ok((Mode::Exact, "default")),
    }
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Validate(_) => "validate",
        Command::Norm(_) => "norm",
        Command::Pair { .. } => "pair",
        Command::Support(_) => "support",
        Command::Extend { .. } => "extend",
        Command::Weights { .. } => "weights",
        Command::Decompose { .. } => "decompose",
        Command::Positivity(_) => "positivity",
        Command::Majorant { .. } => "majorant",
        Command::Variation(_) => "variation",
        Command::Radial(_) => "radial",
        Command::Gen { .. } => "gen",
        Command::Experiment { .. } => "experiment",
        Command::Verify { .. } => "verify",
    }
}

pub fn run(cli: &Cli) -> Result<u8, CliError> {
    let (mode, source) = resolve_mode(cli)?;
    let out = execute(cli, mode)?;
    let mut header = json!({
        "command": command_name(&cli.command),
        "version": env!("CARGO_PKG_VERSION"),
        "mode": mode.name(),
        "mode_source": source,
        "seed": cli.global.seed,
    });
    if let Mode::Float { tolerance } = mode {
        header["tolerance"] = json!(tolerance);
    }
    if source == "env" {
        header["env"] = json!(format!("{MODE_ENV}={}", mode.name()));
    }
    let report = json!({ "header": header, "result": out.result });
    let pretty = serde_json::to_string_pretty(&report).expect("json values serialize");

    if let Some(path) = &cli.global.report {
        fs::write(path, pretty.clone() + "\n").map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }
    match (cli.global.out, &out.csv) {
        (OutFormat::Csv, Some(csv)) => print!("{csv}"),
        (OutFormat::Csv, None) => {
            return Err(CliError::Usage(
                "csv output is only available for experiment".into(),
            ))
        }
        (OutFormat::Json, _) => {
            if cli.global.report.is_some() || out.summary_first {
                println!("{}", out.summary);
            } else {
                println!("{pretty}");
            }
        }
    }
    Ok(out.exit)
}

fn execute(cli: &Cli, mode: Mode) -> Result<Output, CliError> {
    let seed = cli.global.seed;
    Ok(match &cli.command {
        Command::Validate(a) => {
            let s = load_space(&a.space)?;
            Output::new(
                json!({"valid": true, "points": s.len(), "base": s.label(s.base())}),
                format!("valid: {} points", s.len()),
            )
        }
        Command::Norm(a) => {
            let m = load_pair(&a.space, &a.vector)?;
            let plan = kr_norm(&m, mode)?;
            Output::new(io::plan_json(&plan), format!("norm = {}", plan.norm()))
        }
        Command::Pair { sv, function } => {
            let s = load_space(&sv.space)?;
            let m = io::parse_vector(&s, &read(&sv.vector)?)?;
            let f = io::parse_function(&s, &read(function)?)?;
            let p = format_rational(&m.pair(&f)?);
            Output::new(json!({ "pairing": p }), format!("<m, f> = {p}"))
        }
        Command::Support(a) => {
            let m = load_pair(&a.space, &a.vector)?;
            let sup = io::support_json(&m);
            Output::new(json!({ "support": sup }), format!("support = {sup}"))
        }
        Command::Extend { space, function } => {
            let s = load_space(&space.space)?;
            let partial = io::parse_partial_function(&s, &read(function)?)?;
            let (subset, values): (Vec<_>, Vec<_>) = partial.into_iter().unzip();
            let f = mcshane_extend(s, &subset, &values)?;
            let lip = format_rational(f.lip_constant());
            Output::new(
                json!({ "extension": io::function_json(&f), "lip_constant": lip }),
                format!("extended, Lip = {lip}"),
            )
        }
        Command::Weights {
            space,
            kind,
            n,
            vector,
        } => weights(space, *kind, *n, vector.as_deref())?,
        Command::Decompose { sv, kind } => {
            let m = load_pair(&sv.space, &sv.vector)?;
            match kind {
                DecomposeArg::Molecules => {
                    let d = m.molecule_decompose();
                    Output::new(
                        io::molecules_json(m.space(), &d),
                        format!(
                            "{} molecules, {} residuals",
                            d.molecules.len(),
                            d.residuals.len()
                        ),
                    )
                }
                DecomposeArg::Kalton => {
                    let d = kalton_parts(&m);
                    Output::new(
                        io::kalton_json(&d),
                        format!(
                            "{} parts, sum of norms {} for norm {}",
                            d.parts.len(),
                            format_rational(&d.sum_of_norms),
                            format_rational(&d.norm)
                        ),
                    )
                }
                DecomposeArg::Classes => {
                    let r = class_report(&m);
                    Output::new(
                        io::class_report_json(&r),
                        format!("norms add up: {}", r.norms_add_up()),
                    )
                }
            }
        }
        Command::Positivity(a) => {
            let m = load_pair(&a.space, &a.vector)?;
            let lp = positivity_lp(&m);
            let by_coeffs = m.is_nonnegative();
            Output::new(
                json!({
                    "coefficients": by_coeffs,
                    "lp": lp.is_positive(),
                    "lp_min": format_rational(&lp.min_value),
                    "lp_minimizer": io::function_json(&lp.minimizer),
                    "routes_agree": by_coeffs == lp.is_positive(),
                }),
                format!("positive = {by_coeffs}"),
            )
        }
        Command::Majorant { sv, candidate } => {
            let s = load_space(&sv.space)?;
            let m = io::parse_vector(&s, &read(&sv.vector)?)?;
            let mm = minimum_majorant(&m);
            let mut result = json!({
                "plus": io::coeffs_json(&mm.plus),
                "minus": io::coeffs_json(&mm.minus),
            });
            let mut summary = format!("m+ = {}", io::coeffs_json(&mm.plus));
            if let Some(path) = candidate {
                let psi = io::parse_vector(&s, &read(path)?)?;
                let check = check_majorant(&m, &psi)?;
                summary = format!("candidate is a majorant: {}", check.is_majorant);
                result["candidate"] = io::majorant_check_json(&check);
            }
            Output::new(result, summary)
        }
        Command::Variation(a) => {
            let m = load_pair(&a.space, &a.vector)?;
            let v = variation(&m);
            let mm = minimum_majorant(&m);
            let ids = support_identities(&m);
            let (np, nm, nv) = (norm(&mm.plus), norm(&mm.minus), norm(&v));
            Output::new(
                json!({
                    "variation": io::coeffs_json(&v),
                    "norm_plus": format_rational(&np),
                    "norm_minus": format_rational(&nm),
                    "norm_variation": format_rational(&nv),
                    "norms_add_up": &np + &nm == nv,
                    "supports": io::support_identities_json(m.space(), &ids),
                }),
                format!("|m| = {}", io::coeffs_json(&v)),
            )
        }
        Command::Radial(a) => {
            let s = load_space(&a.space)?;
            let r = s.radial_alpha()?;
            Output::new(
                io::radial_json(&s, &r)?,
                format!("alpha = {}", format_rational(&r.alpha)),
            )
        }
        Command::Gen { what } => generate(what, seed)?,
        Command::Experiment {
            which,
            n,
            no_timing,
        } => experiment(*which, *n, !no_timing, mode)?,
        Command::Verify { suite, manifest } => {
            if *manifest {
                let rows: Vec<Json> = suite::manifest()
                    .iter()
                    .filter(|i| suite == "all" || i.module == suite)
                    .map(|i| json!({"id": i.id, "module": i.module, "anchor": i.anchor}))
                    .collect();
                let summary = rows
                    .iter()
                    .map(|r| format!("{}  {}  {}", r["module"], r["id"], r["anchor"]))
                    .collect::<Vec<_>>()
                    .join("\n");
                let mut out = Output::new(Json::Array(rows), summary);
                out.summary_first = true;
                out
            } else {
                let rep = suite::run(suite, seed)?;
                let mut out = Output::new(
                    serde_json::to_value(&rep).expect("report serializes"),
                    rep.table().trim_end().to_string(),
                );
                out.summary_first = true;
                out.exit = if rep.all_passed() { 0 } else { 2 };
                out
            }
        }
    })
}

fn weights(
    space: &Path,
    kind: WeightArg,
    n: i64,
    vector: Option<&Path>,
) -> Result<Output, CliError> {
    let s = load_space(space)?;
    let kind = match kind {
        WeightArg::H => WeightKind::H,
        WeightArg::G => WeightKind::G,
        WeightArg::Lambda => WeightKind::Lambda,
        WeightArg::Pi => WeightKind::Pi,
    };
    let h = kind
        .build(&s, n)
        .ok_or_else(|| CliError::Usage(format!("{} needs n >= 0", kind.name())))?;
    let op = WeightOperator::new(h);
    let on = op.operator_norm();
    let h = op.weight();
    let mut result = json!({
        "kind": kind.name(),
        "n": n,
        "values": io::weight_json(h),
        "lip_constant": format_rational(h.lip_constant()),
        "support": h.support().iter().map(|&i| s.label(i)).collect::<Vec<_>>(),
        "support_radius": format_rational(h.support_radius()),
        "norm_bound": format_rational(op.norm_bound()),
        "operator_norm": format_rational(&on.value),
        "witness": on.witness.map(|(x, y)| [s.label(x), s.label(y)]),
        "ceiling": format_rational(&kind.norm_ceiling()),
    });
    if let Some(path) = vector {
        let m = io::parse_vector(&s, &read(path)?)?;
        result["weighted"] = io::coeffs_json(&op.adjoint_apply(&m)?);
    }
    Ok(Output::new(
        result,
        format!("||T_{}_{n}|| = {}", kind.name(), format_rational(&on.value)),
    ))
}

fn generate(what: &GenCommand, seed: u64) -> Result<Output, CliError> {
    let mut r = rng(seed);
    Ok(match what {
        GenCommand::Space { points } => {
            if *points == 0 {
                return Err(CliError::Usage("--points must be at least 1".into()));
            }
            let s = random_space(&mut r, *points);
            Output::new(io::space_json(&s), format!("{points} points"))
        }
        GenCommand::Vector { space, positive } => {
            let s = load_space(space)?;
            let m = if *positive {
                random_positive_vector(&mut r, &s)
            } else {
                random_vector(&mut r, &s)
            };
            Output::new(
                io::vector_json(&m),
                format!("{} coefficients", m.coeffs().len()),
            )
        }
        GenCommand::Ambrosio { n } => {
            let inst = gen_ambrosio(*n)?;
            Output::new(
                json!({"space": io::space_json(&inst.space), "vector": io::vector_json(&inst.vector)}),
                format!("ambrosio net with {n} points"),
            )
        }
        GenCommand::Weaver { n } => {
            let inst = gen_weaver(*n)?;
            Output::new(
                json!({
                    "space": io::space_json(&inst.space),
                    "vector": io::vector_json(&inst.vector),
                    "h": io::function_json(&inst.h),
                }),
                format!("weaver net with {n} pairs"),
            )
        }
        GenCommand::Gallery { name } => {
            let all = gen_gallery();
            match name {
                Some(name) => {
                    let g = all
                        .iter()
                        .find(|g| &g.name == name)
                        .ok_or_else(|| CliError::Usage(format!("no gallery space {name}")))?;
                    Output::new(io::space_json(&g.space), g.name.clone())
                }
                None => {
                    let names: Vec<&str> = all.iter().map(|g| g.name.as_str()).collect();
                    let spaces: serde_json::Map<String, Json> = all
                        .iter()
                        .map(|g| (g.name.clone(), io::space_json(&g.space)))
                        .collect();
                    Output::new(Json::Object(spaces), names.join(" "))
                }
            }
        }
    })
}

fn experiment(
    which: ExperimentArg,
    n: usize,
    timing: bool,
    mode: Mode,
) -> Result<Output, CliError> {
    if n == 0 {
        return Err(CliError::Usage("--n must be at least 1".into()));
    }
    if mode == Mode::Exact && n > EXACT_N_CAP {
        return Err(CliError::Usage(format!(
            "exact mode runs N <= {EXACT_N_CAP}; use --mode float beyond"
        )));
    }
    let (diag, row): (&str, fn(usize, Mode) -> lipfree::Result<ExperimentRow>) = match which {
        ExperimentArg::Ambrosio => ("norm1", ambrosio_row),
        ExperimentArg::Weaver => ("plus_pairing_h", lipfree::experiments::weaver_row),
    };
    let rows = (1..=n)
        .map(|k| row(k, mode))
        .collect::<lipfree::Result<Vec<_>>>()?;
    let csv = io::experiment_csv(diag, &rows, timing);
    let last = rows.last().expect("n >= 1");
    let mut out = Output::new(
        io::experiment_json(diag, &rows, timing),
        format!(
            "N = {}: norm {}, {diag} {}",
            last.n,
            last.norm,
            format_rational(&last.diagnostic)
        ),
    );
    out.csv = Some(csv);
    Ok(out)
}
