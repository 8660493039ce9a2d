//! Finite-net generators and divergence experiments.
//!
//! Every generator embeds its points in the real line, so distances are
//! exact rationals and the triangle inequality holds by construction.

use std::sync::Arc;
use std::time::Instant;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::free_vec::FreeVector;
use crate::lipschitz::{mcshane_extend, LipschitzFunction};
use crate::metric::PointedMetricSpace;
use crate::order::{check_majorant, is_positive, minimum_majorant, Route};
use crate::random::{random_space, rng};
use crate::scalar::{int, pow2, ratio, Mode, Rational, Value};
use crate::transport::{kr_norm, norm};

/// Largest `N` run in exact mode; denominators grow like `4^N`.
pub const EXACT_N_CAP: usize = 14;

fn line_space(labels: Vec<String>, coords: &[Rational]) -> Arc<PointedMetricSpace> {
    Arc::new(PointedMetricSpace::from_line(labels, coords, 0).expect("distinct points on a line"))
}

/// Points `x_k = 2^{-k-1}` accumulating at the base point, with
/// `m_N = sum_k δ(x_k)`.
#[derive(Debug, Clone)]
pub struct AmbrosioInstance {
    pub space: Arc<PointedMetricSpace>,
    pub vector: FreeVector,
    /// `g_n ∘ rho` for `n = 1..=N`: 1 on `x_1..x_n`, 0 on the rest, so
    /// `<m_N, g_n ∘ rho> = n`.
    pub tests: Vec<LipschitzFunction>,
}

pub fn gen_ambrosio(n: usize) -> Result<AmbrosioInstance> {
    if n == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let mut labels = vec!["0".to_string()];
    let mut coords = vec![Rational::zero()];
    for k in 1..=n {
        labels.push(format!("x{k}"));
        coords.push(pow2(-(k as i64) - 1));
    }
    let space = line_space(labels, &coords);
    let vector = FreeVector::canonicalize(space.clone(), (1..=n).map(|k| (k, Rational::one())))?;
    let tests = (1..=n)
        .map(|j| {
            // ramp in rho from (just below) rho(x_{j+1}) up to rho(x_j)
            let upper = coords[j].clone();
            let lower = if j < n {
                coords[j + 1].clone()
            } else {
                &coords[j] / int(2)
            };
            let values = coords
                .iter()
                .map(|t| {
                    if *t >= upper {
                        Rational::one()
                    } else if *t <= lower {
                        Rational::zero()
                    } else {
                        (t - &lower) / (&upper - &lower)
                    }
                })
                .collect();
            LipschitzFunction::new(space.clone(), values).expect("zero at base")
        })
        .collect();
    Ok(AmbrosioInstance {
        space,
        vector,
        tests,
    })
}

/// Points `x_k = 1 + 4^{-k}`, `y_k = x_k + 4^{-k-1}` clustering at `c = 1`,
/// with `m_N = sum_k (δ(x_k) - δ(y_k))`.
#[derive(Debug, Clone)]
pub struct WeaverInstance {
    pub space: Arc<PointedMetricSpace>,
    pub vector: FreeVector,
    /// McShane extension of `h(0) = 0, h(c) = 1`; equals 1 on the cluster.
    pub h: LipschitzFunction,
    /// `f_n = 1` on `x_1..x_n`, 0 elsewhere; `f_n <= h`, `<m_N, f_n> = n`.
    pub tests: Vec<LipschitzFunction>,
    pub x: Vec<usize>,
    pub y: Vec<usize>,
}

pub fn gen_weaver(n: usize) -> Result<WeaverInstance> {
    if n == 0 {
        return Err(Error::Precondition("N must be at least 1".into()));
    }
    let mut labels = vec!["0".to_string(), "c".to_string()];
    let mut coords = vec![Rational::zero(), Rational::one()];
    let (mut xs, mut ys) = (Vec::new(), Vec::new());
    for k in 1..=n as i64 {
        let x = Rational::one() + pow2(-2 * k);
        let y = &x + pow2(-2 * k - 2);
        xs.push(coords.len());
        labels.push(format!("x{k}"));
        coords.push(x);
        ys.push(coords.len());
        labels.push(format!("y{k}"));
        coords.push(y);
    }
    let space = line_space(labels, &coords);
    let raw = xs
        .iter()
        .map(|&i| (i, Rational::one()))
        .chain(ys.iter().map(|&i| (i, -Rational::one())));
    let vector = FreeVector::canonicalize(space.clone(), raw)?;
    let h = mcshane_extend(space.clone(), &[0, 1], &[Rational::zero(), Rational::one()])?;
    let tests = (1..=n)
        .map(|j| {
            let mut values = vec![Rational::zero(); space.len()];
            for &i in &xs[..j] {
                values[i] = Rational::one();
            }
            LipschitzFunction::new(space.clone(), values).expect("zero at base")
        })
        .collect();
    Ok(WeaverInstance {
        space,
        vector,
        h,
        tests,
        x: xs,
        y: ys,
    })
}

/// One line of an experiment table.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRow {
    pub n: usize,
    pub norm: Value,
    /// `norm1(m_N)` for the Ambrosio net, `<m_N⁺, h>` for the Weaver net.
    pub diagnostic: Rational,
    pub seconds: f64,
    pub mode: &'static str,
}

pub fn ambrosio_row(n: usize, mode: Mode) -> Result<ExperimentRow> {
    let start = Instant::now();
    let inst = gen_ambrosio(n)?;
    let plan = kr_norm(&inst.vector, mode)?;
    Ok(ExperimentRow {
        n,
        norm: plan.norm(),
        diagnostic: inst.vector.norm1(),
        seconds: start.elapsed().as_secs_f64(),
        mode: plan.mode(),
    })
}

pub fn weaver_row(n: usize, mode: Mode) -> Result<ExperimentRow> {
    let start = Instant::now();
    let inst = gen_weaver(n)?;
    let plan = kr_norm(&inst.vector, mode)?;
    let plus = minimum_majorant(&inst.vector).plus;
    Ok(ExperimentRow {
        n,
        norm: plan.norm(),
        diagnostic: plus.pair(&inst.h)?,
        seconds: start.elapsed().as_secs_f64(),
        mode: plan.mode(),
    })
}

/// A named test space with hand-derived discreteness constants.
#[derive(Debug, Clone)]
pub struct GalleryEntry {
    pub name: String,
    pub space: Arc<PointedMetricSpace>,
    pub expected_alpha: Option<Rational>,
    pub expected_theta: Option<Rational>,
}

fn entry(
    name: &str,
    space: PointedMetricSpace,
    alpha: Option<Rational>,
    theta: Option<Rational>,
) -> GalleryEntry {
    GalleryEntry {
        name: name.to_string(),
        space: Arc::new(space),
        expected_alpha: alpha,
        expected_theta: theta,
    }
}

/// `{0, 1, ..., k}` with base 0: `theta = 1`, `alpha = 1/k`.
pub fn naturals_prefix(k: usize) -> PointedMetricSpace {
    let coords: Vec<Rational> = (0..=k as i64).map(int).collect();
    let labels = (0..=k).map(|i| i.to_string()).collect();
    PointedMetricSpace::from_line(labels, &coords, 0).expect("distinct integers")
}

/// `{0} ∪ {2^{-j} : 1 <= j <= k}`: `alpha = 1/2` for `k >= 2`, `theta = 2^{-k}`.
pub fn inward_net(k: usize) -> PointedMetricSpace {
    let mut coords = vec![Rational::zero()];
    coords.extend((1..=k as i64).map(|j| pow2(-j)));
    let labels = (0..=k).map(|j| format!("p{j}")).collect();
    PointedMetricSpace::from_line(labels, &coords, 0).expect("distinct dyadics")
}

/// The fixed test gallery.
pub fn gen_gallery() -> Vec<GalleryEntry> {
    let tri = PointedMetricSpace::validate(
        vec!["0".into(), "a".into(), "b".into()],
        vec![
            vec![int(0), int(1), int(2)],
            vec![int(1), int(0), int(1)],
            vec![int(2), int(1), int(0)],
        ],
        0,
    )
    .expect("triangle");

    // unit square corners under the l1 metric, based at a corner
    let corners = [(0, 0), (1, 0), (0, 1), (1, 1)];
    let l1: Vec<Vec<Rational>> = corners
        .iter()
        .map(|a| {
            corners
                .iter()
                .map(|b| int(((a.0 - b.0) as i64).abs() + ((a.1 - b.1) as i64).abs()))
                .collect()
        })
        .collect();
    let square = PointedMetricSpace::validate(
        vec!["00".into(), "10".into(), "01".into(), "11".into()],
        l1,
        0,
    )
    .expect("l1 square");

    let pair = PointedMetricSpace::attach_base_point(
        vec!["u".into(), "v".into()],
        vec![vec![int(0), int(2)], vec![int(2), int(0)]],
        "0",
        &int(1),
    )
    .expect("diam 2 with r = 1");

    // random space rescaled to diameter 2, then given a new base at distance 1
    let mut r = rng(7);
    let raw = random_space(&mut r, 5);
    let all: Vec<usize> = (0..raw.len()).collect();
    let scale = int(2) / raw.diameter(&all).expect("nonempty");
    let scaled: Vec<Vec<Rational>> = raw
        .matrix()
        .iter()
        .map(|row| row.iter().map(|d| d * &scale).collect())
        .collect();
    let attached =
        PointedMetricSpace::attach_base_point(raw.labels().to_vec(), scaled, "o", &int(1))
            .expect("diam 2 with r = 1");

    let mut r = rng(11);
    let random_a = random_space(&mut r, 6);
    let random_b = random_space(&mut r, 7);

    vec![
        entry("triangle", tri, Some(ratio(1, 2)), Some(int(1))),
        entry(
            "naturals_6",
            naturals_prefix(6),
            Some(ratio(1, 6)),
            Some(int(1)),
        ),
        entry(
            "inward_net_6",
            inward_net(6),
            Some(ratio(1, 2)),
            Some(pow2(-6)),
        ),
        entry("l1_square", square, Some(ratio(1, 2)), Some(int(1))),
        entry("attached_pair", pair, Some(int(1)), Some(int(1))),
        entry("attached_random_6", attached, None, None),
        entry("random_6", random_a, None, None),
        entry("random_7", random_b, None, None),
    ]
}

/// Outcome of the radially-discrete majorant construction for
/// `m = sum a_n (δ(x_n) - δ(y_n)) / d(x_n, y_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MajorantBoundReport {
    pub alpha: Rational,
    pub vector: FreeVector,
    /// `m' = sum (a_n / d(x_n, y_n)) δ(x_n)`.
    pub majorant: FreeVector,
    pub majorant_norm: Rational,
    /// `(1/alpha) sum a_n`.
    pub bound: Rational,
    pub majorant_positive: bool,
    pub dominates: bool,
    pub bound_holds: bool,
}

impl MajorantBoundReport {
    pub fn all_hold(&self) -> bool {
        self.majorant_positive && self.dominates && self.bound_holds
    }
}

pub fn radial_majorant_bound(
    space: &Arc<PointedMetricSpace>,
    family: &[(usize, usize, Rational)],
) -> Result<MajorantBoundReport> {
    let alpha = space.radial_alpha()?.alpha;
    if !alpha.is_positive() {
        return Err(Error::Precondition(
            "radial constant must be positive".into(),
        ));
    }
    let mut raw_m = Vec::new();
    let mut raw_p = Vec::new();
    let mut total = Rational::zero();
    for (x, y, a) in family {
        if *x >= space.len() || *y >= space.len() {
            return Err(Error::UnknownPoint(x.max(y).to_string()));
        }
        if x == y {
            return Err(Error::Precondition("molecule endpoints must differ".into()));
        }
        if a.is_negative() {
            return Err(Error::Precondition(
                "coefficients must be nonnegative".into(),
            ));
        }
        let w = a / space.dist(*x, *y);
        raw_m.push((*x, w.clone()));
        raw_m.push((*y, -w.clone()));
        raw_p.push((*x, w));
        total += a;
    }
    let vector = FreeVector::canonicalize(space.clone(), raw_m)?;
    let majorant = FreeVector::canonicalize(space.clone(), raw_p)?;
    let majorant_norm = norm(&majorant);
    let bound = &total / &alpha;
    Ok(MajorantBoundReport {
        majorant_positive: is_positive(&majorant, Route::Lp),
        dominates: check_majorant(&vector, &majorant)?.is_majorant,
        bound_holds: majorant_norm <= bound,
        alpha,
        vector,
        majorant,
        majorant_norm,
        bound,
    })
}
