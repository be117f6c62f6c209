//! Bertrand / Mannheim classification and mate construction for regular
//! non-degenerate space curves, covering every pairing of tangent,
//! principal-normal and bi-normal lines.
//!
//! Classifiers decide feasibility from sampled curvature data; constructions
//! build the mate pointwise and verify it against a stencil-based apparatus
//! that shares no code with the symbolic derivative path.

use crate::diff;
use crate::discrete::{self, DiscreteSample};
use crate::frenet::FrenetSample;
use crate::geom::Vec3;
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BertrandError {
    #[error("input apparatus is unusable: {0}")]
    DegenerateInput(String),
    #[error("no feasible constant: {0}")]
    NoFeasibleConstant(String),
    #[error("formula domain error (division by zero) at parameter {0}")]
    DivisionByZeroDomain(f64),
    #[error("mate verification failed at parameter {param}: residual {residual:e}")]
    VerificationFailed { param: f64, residual: f64 },
    #[error("kind {0} admits no mate for any curve")]
    ImpossibleKind(PairKind),
}

/// One of the three Frenet directions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrameAxis {
    T,
    N,
    B,
}

impl FrameAxis {
    fn letter(self) -> char {
        match self {
            FrameAxis::T => 't',
            FrameAxis::N => 'n',
            FrameAxis::B => 'b',
        }
    }

    fn of(self, s: &FrenetSample) -> Vec3 {
        match self {
            FrameAxis::T => s.t,
            FrameAxis::N => s.n,
            FrameAxis::B => s.b,
        }
    }

    fn of_discrete(self, s: &DiscreteSample) -> Vec3 {
        match self {
            FrameAxis::T => s.t,
            FrameAxis::N => s.n,
            FrameAxis::B => s.b,
        }
    }
}

/// An ordered pair (v, w-bar): the base direction the mate is offset along,
/// and the mate direction required to span the same line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairKind {
    pub v: FrameAxis,
    pub w: FrameAxis,
}

impl PairKind {
    pub const ALL: [PairKind; 9] = [
        PairKind::new(FrameAxis::T, FrameAxis::T),
        PairKind::new(FrameAxis::T, FrameAxis::N),
        PairKind::new(FrameAxis::T, FrameAxis::B),
        PairKind::new(FrameAxis::N, FrameAxis::T),
        PairKind::new(FrameAxis::N, FrameAxis::N),
        PairKind::new(FrameAxis::N, FrameAxis::B),
        PairKind::new(FrameAxis::B, FrameAxis::T),
        PairKind::new(FrameAxis::B, FrameAxis::N),
        PairKind::new(FrameAxis::B, FrameAxis::B),
    ];

    pub const fn new(v: FrameAxis, w: FrameAxis) -> Self {
        PairKind { v, w }
    }
}

impl fmt::Display for PairKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.v.letter(), self.w.letter())
    }
}

impl FromStr for PairKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let axis = |c: &str| match c {
            "t" => Ok(FrameAxis::T),
            "n" => Ok(FrameAxis::N),
            "b" => Ok(FrameAxis::B),
            other => Err(format!("unknown frame axis `{other}` (want t, n or b)")),
        };
        let (v, w) = s
            .split_once('-')
            .ok_or_else(|| format!("pair kind `{s}` must look like `n-n`"))?;
        Ok(PairKind::new(axis(v)?, axis(w)?))
    }
}

impl Serialize for PairKind {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for PairKind {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Feasible,
    Infeasible,
    IdenticallySatisfied,
}

/// Fitted constants of a feasible classification.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BertrandConstants {
    /// The offset constant: A for the normal/bi-normal kinds, lambda for the
    /// planar Bertrand branch, c for the involute kind.
    pub a: f64,
    /// Second constant B when the condition has one.
    pub b: Option<f64>,
    /// False when the fitted constants lie on a line of solutions.
    pub unique: bool,
    /// Maximum residual of the defining condition over the grid.
    pub residual: f64,
}

/// Everything a classification or construction reports.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MateReport {
    pub kind: PairKind,
    pub verdict: Verdict,
    pub constants: Option<BertrandConstants>,
    /// Offset function lambda at each sample (empty when infeasible).
    pub offset: Vec<f64>,
    /// Constructed mate points (empty when infeasible).
    pub mate: Vec<Vec3>,
    /// Mate curvature/torsion from the closed-form propositions.
    pub mate_kappa: Vec<f64>,
    pub mate_tau: Vec<f64>,
    /// max |w_bar x v| over samples, plus the offset-line residual.
    pub line_residual: Option<f64>,
    /// Parameter where the line residual peaks.
    pub line_residual_at: Option<f64>,
    /// max mismatch between proposition curvature and the stencil oracle.
    pub curvature_residual: Option<f64>,
    /// Parameter where the curvature mismatch peaks.
    pub curvature_residual_at: Option<f64>,
    /// Human-readable grounds for the verdict.
    pub reason: String,
}

impl MateReport {
    fn infeasible(kind: PairKind, reason: impl Into<String>) -> MateReport {
        MateReport {
            kind,
            verdict: Verdict::Infeasible,
            constants: None,
            offset: Vec::new(),
            mate: Vec::new(),
            mate_kappa: Vec::new(),
            mate_tau: Vec::new(),
            line_residual: None,
            line_residual_at: None,
            curvature_residual: None,
            curvature_residual_at: None,
            reason: reason.into(),
        }
    }
}

/// User-supplied constants for classification / construction.
#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct MateParams {
    /// Offset constant (lambda or A) when the caller wants to pin it.
    pub a: Option<f64>,
    pub b: Option<f64>,
    /// Involute constant c.
    pub c: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BertrandBranch {
    Generic,
    Planar,
}

// ---------------------------------------------------------------------------
// sampled-condition helpers
// ---------------------------------------------------------------------------

struct Arrays {
    params: Vec<f64>,
    kappa: Vec<f64>,
    tau: Vec<f64>,
    speed: Vec<f64>,
    /// Cumulative arc length anchored at the first sample.
    s: Vec<f64>,
    h: f64,
    kappa_max: f64,
    tau_max: f64,
}

impl Arrays {
    fn build(app: &[FrenetSample]) -> Result<Arrays, BertrandError> {
        if app.len() < 8 {
            return Err(BertrandError::DegenerateInput(format!(
                "need at least 8 samples, got {}",
                app.len()
            )));
        }
        let params: Vec<f64> = app.iter().map(|s| s.param).collect();
        let h = params[1] - params[0];
        if params
            .windows(2)
            .any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h.abs())
        {
            return Err(BertrandError::DegenerateInput(
                "apparatus must be sampled on a uniform grid".into(),
            ));
        }
        let kappa: Vec<f64> = app.iter().map(|s| s.kappa).collect();
        let tau: Vec<f64> = app.iter().map(|s| s.tau).collect();
        let speed: Vec<f64> = app.iter().map(|s| s.speed).collect();
        if kappa.iter().any(|&k| !(k > 0.0)) {
            return Err(BertrandError::DegenerateInput(
                "kappa must be positive at every sample".into(),
            ));
        }
        let s = diff::cumulative_integral(&speed, h);
        let kappa_max = kappa.iter().cloned().fold(0.0, f64::max);
        let tau_max = tau.iter().map(|t| t.abs()).fold(0.0, f64::max);
        Ok(Arrays {
            params,
            kappa,
            tau,
            speed,
            s,
            h,
            kappa_max,
            tau_max,
        })
    }

    /// Derivative with respect to arc length of a per-sample array.
    fn d_ds(&self, values: &[f64]) -> Vec<f64> {
        diff::derivative(values, self.h)
            .into_iter()
            .zip(&self.speed)
            .map(|(d, v)| d / v)
            .collect()
    }

    fn planar(&self, tol: &Tolerances) -> bool {
        self.tau_max <= tol.zero_function(self.kappa_max)
    }
}

/// Decide whether a sampled function stays away from zero on the whole
/// interval: no sign change, no dip below 1e-7 of its own peak, and a peak
/// that clears an absolute floor tied to the problem scale.
fn nonvanishing(values: &[f64], natural_scale: f64, tol: &Tolerances) -> bool {
    let max = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if max <= tol.scale * 1e-12 * natural_scale {
        return false;
    }
    if values.windows(2).any(|w| w[0] * w[1] < 0.0) {
        return false;
    }
    let min = values.iter().map(|v| v.abs()).fold(f64::INFINITY, f64::min);
    min > 1e-7 * max
}

/// Log-spaced scan of a non-zero constant over +-[1e-3, 1e3], candidates
/// ordered with |a| = 1 first, followed by golden-section refinement of
/// log10|a| around the best candidate.
pub(crate) fn scan_constant(f: impl Fn(f64) -> f64) -> (f64, f64) {
    const STEPS: i32 = 30;
    let mut candidates: Vec<f64> = Vec::new();
    for k in 0..=2 * STEPS {
        let u = (k - STEPS) as f64 * 3.0 / STEPS as f64;
        candidates.push(u);
    }
    candidates.sort_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap());

    let mut best = (1.0_f64, f64::INFINITY);
    for &u in &candidates {
        for sign in [1.0, -1.0] {
            let a = sign * 10f64.powf(u);
            let r = f(a);
            if r < best.1 {
                best = (a, r);
            }
        }
    }
    // refine log10|a| in a one-step window around the best point
    let sign = best.0.signum();
    let u0 = best.0.abs().log10();
    let step = 3.0 / STEPS as f64;
    let (mut lo, mut hi) = (u0 - step, u0 + step);
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    let g = |u: f64| f(sign * 10f64.powf(u));
    let mut u1 = hi - phi * (hi - lo);
    let mut u2 = lo + phi * (hi - lo);
    let (mut f1, mut f2) = (g(u1), g(u2));
    for _ in 0..60 {
        if f1 <= f2 {
            hi = u2;
            u2 = u1;
            f2 = f1;
            u1 = hi - phi * (hi - lo);
            f1 = g(u1);
        } else {
            lo = u1;
            u1 = u2;
            f1 = f2;
            u2 = lo + phi * (hi - lo);
            f2 = g(u2);
        }
    }
    let u = 0.5 * (lo + hi);
    let a = sign * 10f64.powf(u);
    let r = g(u);
    if r < best.1 {
        (a, r)
    } else {
        best
    }
}

// ---------------------------------------------------------------------------
// mate curvature formulas
// ---------------------------------------------------------------------------

/// Mate curvature and torsion of a classical Bertrand mate gamma + A n.
///
/// Generic branch: kappa-bar = |B kappa - A tau| / ((A^2+B^2) |tau|),
/// tau-bar = 1 / ((A^2+B^2) tau). Planar branch: kappa-bar =
/// kappa / |1 - A kappa|, tau-bar = 0.
pub fn bertrand_mate_curvature(
    params: &[f64],
    kappa: &[f64],
    tau: &[f64],
    a: f64,
    b: f64,
    branch: BertrandBranch,
) -> Result<(Vec<f64>, Vec<f64>), BertrandError> {
    let n = kappa.len();
    let mut kb = Vec::with_capacity(n);
    let mut tb = Vec::with_capacity(n);
    match branch {
        BertrandBranch::Generic => {
            let denom = a * a + b * b;
            for i in 0..n {
                if tau[i].abs() < 1e-300 {
                    return Err(BertrandError::DivisionByZeroDomain(params[i]));
                }
                kb.push((b * kappa[i] - a * tau[i]).abs() / (denom * tau[i].abs()));
                tb.push(1.0 / (denom * tau[i]));
            }
        }
        BertrandBranch::Planar => {
            for i in 0..n {
                let d = 1.0 - a * kappa[i];
                if d.abs() < 1e-300 {
                    return Err(BertrandError::DivisionByZeroDomain(params[i]));
                }
                kb.push(kappa[i] / d.abs());
                tb.push(0.0);
            }
        }
    }
    Ok((kb, tb))
}

/// Mate curvature and torsion of a Mannheim mate gamma + A n:
/// kappa-bar = kappa |kappa tau' - kappa' tau| / (|A tau| (tau^2+kappa^2)^{3/2}),
/// tau-bar = (kappa^2 + tau^2) / tau, with ' = d/ds taken by stencils.
pub fn mannheim_mate_curvature(
    params: &[f64],
    kappa: &[f64],
    tau: &[f64],
    speed: &[f64],
    a: f64,
) -> Result<(Vec<f64>, Vec<f64>), BertrandError> {
    let n = kappa.len();
    let h = params[1] - params[0];
    let dk: Vec<f64> = diff::derivative(kappa, h)
        .into_iter()
        .zip(speed)
        .map(|(d, v)| d / v)
        .collect();
    let dt: Vec<f64> = diff::derivative(tau, h)
        .into_iter()
        .zip(speed)
        .map(|(d, v)| d / v)
        .collect();
    let mut kb = Vec::with_capacity(n);
    let mut tb = Vec::with_capacity(n);
    for i in 0..n {
        if tau[i].abs() < 1e-300 || a == 0.0 {
            return Err(BertrandError::DivisionByZeroDomain(params[i]));
        }
        let w = kappa[i] * kappa[i] + tau[i] * tau[i];
        let wr = kappa[i] * dt[i] - dk[i] * tau[i];
        kb.push(kappa[i] * wr.abs() / ((a * tau[i]).abs() * w.powf(1.5)));
        tb.push(w / tau[i]);
    }
    Ok((kb, tb))
}

// ---------------------------------------------------------------------------
// classification
// ---------------------------------------------------------------------------

/// Classify one (v, w-bar) pairing and, when feasible, construct and verify
/// the mate.
pub fn classify_bertrand_type(
    app: &[FrenetSample],
    kind: PairKind,
    params: &MateParams,
    tol: &Tolerances,
) -> Result<MateReport, BertrandError> {
    use FrameAxis::{B, N, T};
    let arrays = Arrays::build(app)?;
    match (kind.v, kind.w) {
        (T, T) => Ok(MateReport::infeasible(
            kind,
            "no curve admits a (t, t-bar) mate",
        )),
        (T, B) => Ok(MateReport::infeasible(
            kind,
            "no curve admits a (t, b-bar) mate",
        )),
        (B, T) => Ok(MateReport::infeasible(
            kind,
            "no curve admits a (b, t-bar) mate",
        )),
        (N, N) => classify_bertrand_inner(app, &arrays, params, tol),
        (N, B) => classify_mannheim_inner(app, &arrays, params, tol),
        (T, N) => classify_involute(app, &arrays, params, tol),
        (N, T) => classify_evolute(app, &arrays, tol),
        (B, N) => classify_binormal_normal(app, &arrays, params, tol),
        (B, B) => classify_binormal_binormal(app, &arrays, params, tol),
    }
}

/// Classical Bertrand classification, the (n, n-bar) pairing.
pub fn classify_bertrand(
    app: &[FrenetSample],
    params: &MateParams,
    tol: &Tolerances,
) -> Result<MateReport, BertrandError> {
    classify_bertrand_type(app, PairKind::new(FrameAxis::N, FrameAxis::N), params, tol)
}

/// Classical Mannheim classification, the (n, b-bar) pairing.
pub fn classify_mannheim(
    app: &[FrenetSample],
    params: &MateParams,
    tol: &Tolerances,
) -> Result<MateReport, BertrandError> {
    classify_bertrand_type(app, PairKind::new(FrameAxis::N, FrameAxis::B), params, tol)
}

fn classify_bertrand_inner(
    app: &[FrenetSample],
    arrays: &Arrays,
    params: &MateParams,
    tol: &Tolerances,
) -> Result<MateReport, BertrandError> {
    let kind = PairKind::new(FrameAxis::N, FrameAxis::N);
    let n = arrays.kappa.len();

    if arrays.planar(tol) {
        // torsion vanishes identically: always a Bertrand curve; any
        // constant lambda with 1 - lambda kappa != 0 works, negative by
        // default
        let kappa_min = arrays.kappa.iter().cloned().fold(f64::INFINITY, f64::min);
        let lambda = params.a.unwrap_or(-1.0 / kappa_min);
        let clearance = arrays
            .kappa
            .iter()
            .map(|k| (1.0 - lambda * k).abs())
            .fold(f64::INFINITY, f64::min);
        if lambda == 0.0 || clearance <= 1e-9 * (1.0 + lambda.abs() * arrays.kappa_max) {
            return Err(BertrandError::NoFeasibleConstant(format!(
                "lambda = {lambda} hits 1 - lambda kappa = 0 on the grid"
            )));
        }
        let constants = BertrandConstants {
            a: lambda,
            b: None,
            unique: false,
            residual: 0.0,
        };
        let mut report = construct_mate(app, kind, &constants, tol)?;
        report.verdict = Verdict::IdenticallySatisfied;
        report.reason = "torsion vanishes identically: planar curves are always Bertrand".into();
        return Ok(report);
    }

    // caller-pinned constants bypass the fit but still face the checks
    if let (Some(a), Some(b)) = (params.a, params.b) {
        let residual = (0..n)
            .map(|i| (a * arrays.kappa[i] + b * arrays.tau[i] - 1.0).abs())
            .fold(0.0, f64::max);
        if residual >= tol.fit(n) {
            return Ok(MateReport::infeasible(
                kind,
                format!("supplied constants leave A kappa + B tau = 1 unsatisfied (residual {residual:.3e})"),
            ));
        }
        let factor: Vec<f64> = (0..n)
            .map(|i| arrays.tau[i] * (b * arrays.kappa[i] - a * arrays.tau[i]))
            .collect();
        let scale = (arrays.kappa_max + arrays.tau_max)
            * (b.abs() * arrays.kappa_max + a.abs() * arrays.tau_max)
            + f64::MIN_POSITIVE;
        if a == 0.0 || !nonvanishing(&factor, scale, tol) {
            return Ok(MateReport::infeasible(
                kind,
                "supplied constants leave tau (B kappa - A tau) = 0 somewhere",
            ));
        }
        let constants = BertrandConstants {
            a,
            b: Some(b),
            unique: true,
            residual,
        };
        return construct_mate(app, kind, &constants, tol);
    }

    // least-squares fit of A kappa + B tau = 1 over the grid
    let (mut a, mut b, unique) = {
        let (mut skk, mut skt, mut stt, mut sk, mut st) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for i in 0..n {
            let (k, t) = (arrays.kappa[i], arrays.tau[i]);
            skk += k * k;
            skt += k * t;
            stt += t * t;
            sk += k;
            st += t;
        }
        // eigendecomposition of the symmetric normal matrix
        let tr = skk + stt;
        let det = skk * stt - skt * skt;
        let disc = (tr * tr / 4.0 - det).max(0.0).sqrt();
        let (l1, l2) = (tr / 2.0 + disc, tr / 2.0 - disc);
        if l2 <= 1e-12 * l1 {
            // rank one: minimum-norm solution along the dominant eigenvector
            let v = if skt.abs() > 1e-300 {
                Vec3::new(l1 - stt, skt, 0.0)
            } else if skk >= stt {
                Vec3::new(1.0, 0.0, 0.0)
            } else {
                Vec3::new(0.0, 1.0, 0.0)
            };
            let v = v / v.norm();
            let proj = (v.x * sk + v.y * st) / l1;
            (proj * v.x, proj * v.y, false)
        } else {
            (
                (stt * sk - skt * st) / det,
                (skk * st - skt * sk) / det,
                true,
            )
        }
    };

    let residual_of = |a: f64, b: f64| -> f64 {
        (0..n)
            .map(|i| (a * arrays.kappa[i] + b * arrays.tau[i] - 1.0).abs())
            .fold(0.0, f64::max)
    };
    let nonvanish_scale =
        |a: f64, b: f64| (arrays.kappa_max + arrays.tau_max) * (b.abs() * arrays.kappa_max + a.abs() * arrays.tau_max) + f64::MIN_POSITIVE;
    let factor_of = |a: f64, b: f64| -> Vec<f64> {
        (0..n)
            .map(|i| arrays.tau[i] * (b * arrays.kappa[i] - a * arrays.tau[i]))
            .collect()
    };

    let mut residual = residual_of(a, b);
    if residual >= tol.fit(n) {
        return Ok(MateReport::infeasible(
            kind,
            format!("no constants satisfy A kappa + B tau = 1 (residual {residual:.3e})"),
        ));
    }

    let a_floor = 1e-9 * (a.abs() + b.abs()).max(1.0 / arrays.kappa_max.max(f64::MIN_POSITIVE));
    let mut ok = a.abs() > a_floor
        && nonvanishing(&factor_of(a, b), nonvanish_scale(a, b), tol);
    if !ok && !unique {
        // slide along the solution line (direction = null eigenvector) to
        // restore A != 0 and tau (B kappa - A tau) != 0
        let g = Vec3::new(arrays.kappa[0], arrays.tau[0], 0.0);
        let d = Vec3::new(g.y, -g.x, 0.0) / g.norm();
        let l0 = (a * a + b * b).sqrt().max(1.0);
        for step in [1.0, -1.0, 2.0, -2.0, 0.5, -0.5] {
            let (ca, cb) = (a + step * l0 * d.x, b + step * l0 * d.y);
            let r = residual_of(ca, cb);
            if r < tol.fit(n)
                && ca.abs() > a_floor
                && nonvanishing(&factor_of(ca, cb), nonvanish_scale(ca, cb), tol)
            {
                a = ca;
                b = cb;
                residual = r;
                ok = true;
                break;
            }
        }
    }
    if !ok {
        return Ok(MateReport::infeasible(
            kind,
            "constants fitting A kappa + B tau = 1 leave tau (B kappa - A tau) = 0 somewhere",
        ));
    }

    let constants = BertrandConstants {
        a,
        b: Some(b),
        unique,
        residual,
    };
    construct_mate(app, kind, &constants, tol)
}

fn classify_mannheim_inner(
    app: &[FrenetSample],
    arrays: &Arrays,
    params: &MateParams,
    tol: &Tolerances,
) -> Result<MateReport, BertrandError> {
    let kind = PairKind::new(FrameAxis::N, FrameAxis::B);
    let n = arrays.kappa.len();
    if arrays.planar(tol) {
        return Ok(MateReport::infeasible(
            kind,
            "torsion vanishes identically, so tau (kappa tau' - kappa' tau) = 0",
        ));
    }
    // least squares for A (kappa^2 + tau^2) = kappa
    let a = params.a.unwrap_or_else(|| {
        let (mut num, mut den) = (0.0, 0.0);
        for i in 0..n {
            let w = arrays.kappa[i] * arrays.kappa[i] + arrays.tau[i] * arrays.tau[i];
            num += arrays.kappa[i] * w;
            den += w * w;
        }
        num / den
    });
    let residual = (0..n)
        .map(|i| {
            let w = arrays.kappa[i] * arrays.kappa[i] + arrays.tau[i] * arrays.tau[i];
            (a * w - arrays.kappa[i]).abs()
        })
        .fold(0.0, f64::max)
        / arrays.kappa_max;
    if residual >= tol.fit(n) {
        return Ok(MateReport::infeasible(
            kind,
            format!("no constant satisfies A (kappa^2 + tau^2) = kappa (residual {residual:.3e})"),
        ));
    }
    if a == 0.0 {
        return Ok(MateReport::infeasible(kind, "fitted constant A is zero"));
    }
    let dk = arrays.d_ds(&arrays.kappa);
    let dt = arrays.d_ds(&arrays.tau);
    let factor: Vec<f64> = (0..n)
        .map(|i| arrays.tau[i] * (arrays.kappa[i] * dt[i] - dk[i] * arrays.tau[i]))
        .collect();
    let d_scale = dk
        .iter()
        .chain(&dt)
        .map(|v| v.abs())
        .fold(0.0, f64::max);
    let scale = arrays.tau_max * (arrays.kappa_max + arrays.tau_max) * d_scale + f64::MIN_POSITIVE;
    if !nonvanishing(&factor, scale, tol) {
        return Ok(MateReport::infeasible(
            kind,
            "tau (kappa tau' - kappa' tau) vanishes on the interval",
        ));
    }
    let constants = BertrandConstants {
        a,
        b: None,
        unique: true,
        residual,
    };
    construct_mate(app, kind, &constants, tol)
}

fn classify_involute(
    app: &[FrenetSample],
    arrays: &Arrays,
    params: &MateParams,
    tol: &Tolerances,
) -> Result<MateReport, BertrandError> {
    let kind = PairKind::new(FrameAxis::T, FrameAxis::N);
    if !arrays.planar(tol) {
        return Ok(MateReport::infeasible(
            kind,
            "torsion must vanish identically for a (t, n-bar) mate",
        ));
    }
    let s_end = *arrays.s.last().unwrap();
    // default keeps -s + c positive on the whole arc
    let c = params.c.unwrap_or(s_end + 0.1 * s_end);
    let clearance = arrays
        .s
        .iter()
        .map(|&s| (c - s).abs())
        .fold(f64::INFINITY, f64::min);
    if clearance <= 1e-9 * s_end.max(1.0) {
        return Err(BertrandError::NoFeasibleConstant(format!(
            "c = {c} makes -s + c vanish on the arc-length range [0, {s_end}]"
        )));
    }
    let constants = BertrandConstants {
        a: c,
        b: None,
        unique: false,
        residual: 0.0,
    };
    construct_mate(app, kind, &constants, tol)
}

fn classify_evolute(
    app: &[FrenetSample],
    arrays: &Arrays,
    tol: &Tolerances,
) -> Result<MateReport, BertrandError> {
    let kind = PairKind::new(FrameAxis::N, FrameAxis::T);
    if !arrays.planar(tol) {
        return Ok(MateReport::infeasible(
            kind,
            "torsion must vanish identically for a (n, t-bar) mate",
        ));
    }
    let dk = arrays.d_ds(&arrays.kappa);
    let s_range = *arrays.s.last().unwrap();
    if !nonvanishing(&dk, arrays.kappa_max / s_range.max(f64::MIN_POSITIVE), tol) {
        return Ok(MateReport::infeasible(
            kind,
            "kappa' vanishes somewhere, the evolute is not regular",
        ));
    }
    let constants = BertrandConstants {
        a: 0.0,
        b: None,
        unique: true,
        residual: 0.0,
    };
    construct_mate(app, kind, &constants, tol)
}

fn classify_binormal_normal(
    app: &[FrenetSample],
    arrays: &Arrays,
    params: &MateParams,
    tol: &Tolerances,
) -> Result<MateReport, BertrandError> {
    let kind = PairKind::new(FrameAxis::B, FrameAxis::N);
    let n = arrays.kappa.len();
    // tau must be non-zero at every sample (pointwise, on the grid)
    let tau_floor = tol.scale * 1e-9 * (arrays.kappa_max + arrays.tau_max);
    if let Some(i) = (0..n).find(|&i| arrays.tau[i].abs() <= tau_floor) {
        return Ok(MateReport::infeasible(
            kind,
            format!("tau vanishes at parameter {}", arrays.params[i]),
        ));
    }
    let dt = arrays.d_ds(&arrays.tau);
    let dt_max = dt.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let residual_of = |a: f64| -> f64 {
        let scale =
            a.abs() * dt_max + arrays.kappa_max * (a * a * arrays.tau_max * arrays.tau_max + 1.0);
        (0..n)
            .map(|i| {
                (a * dt[i]
                    - arrays.kappa[i] * (a * a * arrays.tau[i] * arrays.tau[i] + 1.0))
                    .abs()
            })
            .fold(0.0, f64::max)
            / scale
    };
    let (a, residual) = match params.a {
        Some(a) => (a, residual_of(a)),
        None => {
            let (a0, r0) = scan_constant(residual_of);
            // polish with the integrated form of the condition,
            // A (tau(s) - tau(s0)) = A^2 int kappa tau^2 ds + int kappa ds,
            // whose noise floor is quadrature- rather than stencil-limited;
            // the mate construction at near-inflection samples is acutely
            // sensitive to the constant
            let f2: Vec<f64> = (0..n)
                .map(|i| arrays.kappa[i] * arrays.tau[i] * arrays.tau[i] * arrays.speed[i])
                .collect();
            let f0: Vec<f64> = (0..n)
                .map(|i| arrays.kappa[i] * arrays.speed[i])
                .collect();
            let i2 = diff::cumulative_integral(&f2, arrays.h);
            let i0 = diff::cumulative_integral(&f0, arrays.h);
            let dtau: Vec<f64> = arrays.tau.iter().map(|t| t - arrays.tau[0]).collect();
            let mut a = a0;
            for _ in 0..50 {
                let (mut g, mut gg) = (0.0, 0.0);
                for i in 0..n {
                    let r = a * dtau[i] - a * a * i2[i] - i0[i];
                    let dr = dtau[i] - 2.0 * a * i2[i];
                    g += r * dr;
                    gg += dr * dr;
                }
                if gg == 0.0 {
                    break;
                }
                let step = g / gg;
                a -= step;
                if step.abs() <= 1e-16 * a.abs().max(1e-300) {
                    break;
                }
            }
            let ra = if a.is_finite() && a != 0.0 {
                residual_of(a)
            } else {
                f64::INFINITY
            };
            // accept the polished constant whenever the differential-form
            // residual stays acceptable
            if ra < tol.fit(n) || ra <= r0 {
                (a, ra)
            } else {
                (a0, r0)
            }
        }
    };
    if residual >= tol.fit(n) {
        return Ok(MateReport::infeasible(
            kind,
            format!("no constant satisfies A tau' = kappa (A^2 tau^2 + 1) (residual {residual:.3e})"),
        ));
    }
    let constants = BertrandConstants {
        a,
        b: None,
        unique: true,
        residual,
    };
    construct_mate(app, kind, &constants, tol)
}

fn classify_binormal_binormal(
    app: &[FrenetSample],
    arrays: &Arrays,
    params: &MateParams,
    tol: &Tolerances,
) -> Result<MateReport, BertrandError> {
    let kind = PairKind::new(FrameAxis::B, FrameAxis::B);
    if !arrays.planar(tol) {
        return Ok(MateReport::infeasible(
            kind,
            "torsion must vanish identically for a (b, b-bar) mate",
        ));
    }
    let a = params.a.unwrap_or(1.0);
    if a == 0.0 {
        return Err(BertrandError::NoFeasibleConstant(
            "the bi-normal translation constant must be non-zero".into(),
        ));
    }
    let constants = BertrandConstants {
        a,
        b: None,
        unique: false,
        residual: 0.0,
    };
    construct_mate(app, kind, &constants, tol)
}

// ---------------------------------------------------------------------------
// construction and verification
// ---------------------------------------------------------------------------

/// Per-kind tolerance for the formula-vs-oracle curvature comparison, from
/// the derivative depth of the formulas involved.
fn curvature_tolerance(kind: PairKind, tol: &Tolerances) -> f64 {
    use FrameAxis::{B, N};
    match (kind.v, kind.w) {
        (N, B) => tol.scale * 1e-3,
        (B, N) => tol.scale * 1e-3,
        _ => tol.scale * 1e-4,
    }
}

/// Build the mate gamma + lambda v for a feasible classification, then
/// verify line coincidence and the mate-curvature propositions against the
/// stencil apparatus.
pub fn construct_mate(
    app: &[FrenetSample],
    kind: PairKind,
    constants: &BertrandConstants,
    tol: &Tolerances,
) -> Result<MateReport, BertrandError> {
    use FrameAxis::{B, N, T};
    let arrays = Arrays::build(app)?;
    let n = app.len();

    // offset function lambda per kind
    let offset: Vec<f64> = match (kind.v, kind.w) {
        (T, T) | (T, B) | (B, T) => return Err(BertrandError::ImpossibleKind(kind)),
        (N, N) | (N, B) => vec![constants.a; n],
        (B, N) | (B, B) => vec![constants.a; n],
        (T, N) => arrays.s.iter().map(|&s| constants.a - s).collect(),
        (N, T) => arrays.kappa.iter().map(|&k| 1.0 / k).collect(),
    };
    // lambda must not be identically zero
    let lambda_scale = offset.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if lambda_scale <= tol.not_identically_zero(1.0) {
        return Err(BertrandError::NoFeasibleConstant(
            "offset function lambda is identically zero".into(),
        ));
    }

    let mate: Vec<Vec3> = app
        .iter()
        .zip(&offset)
        .map(|(s, &l)| s.gamma + kind.v.of(s) * l)
        .collect();

    // closed-form mate curvature
    let (mate_kappa, mate_tau) = match (kind.v, kind.w) {
        (N, N) => {
            if arrays.planar(tol) {
                bertrand_mate_curvature(
                    &arrays.params,
                    &arrays.kappa,
                    &arrays.tau,
                    constants.a,
                    0.0,
                    BertrandBranch::Planar,
                )?
            } else {
                bertrand_mate_curvature(
                    &arrays.params,
                    &arrays.kappa,
                    &arrays.tau,
                    constants.a,
                    constants.b.unwrap_or(0.0),
                    BertrandBranch::Generic,
                )?
            }
        }
        (N, B) => mannheim_mate_curvature(
            &arrays.params,
            &arrays.kappa,
            &arrays.tau,
            &arrays.speed,
            constants.a,
        )?,
        (T, N) => {
            let kb: Vec<f64> = offset.iter().map(|l| 1.0 / l.abs()).collect();
            (kb, vec![0.0; n])
        }
        (N, T) => {
            let dk = arrays.d_ds(&arrays.kappa);
            let mut kb = Vec::with_capacity(n);
            for i in 0..n {
                if dk[i].abs() < 1e-300 {
                    return Err(BertrandError::DivisionByZeroDomain(arrays.params[i]));
                }
                kb.push(arrays.kappa[i].powi(3) / dk[i].abs());
            }
            (kb, vec![0.0; n])
        }
        (B, N) => {
            let a = constants.a;
            let mut kb = Vec::with_capacity(n);
            let mut tb = Vec::with_capacity(n);
            for i in 0..n {
                let t2 = arrays.tau[i] * arrays.tau[i];
                kb.push(a.abs() * t2 / (1.0 + a * a * t2));
                tb.push(arrays.tau[i] / (1.0 + a * a * t2));
            }
            (kb, tb)
        }
        (B, B) => (arrays.kappa.clone(), vec![0.0; n]),
        _ => unreachable!(),
    };

    // independent oracle: stencil apparatus on the constructed points
    let measured = discrete::discrete_apparatus(&arrays.params, &mate);

    // (a) the offset stays on the v line (exact by construction, checked to
    //     keep the report honest), (b) the mate's w direction spans it too;
    //     the direction bound is widened by the local conditioning of the
    //     measured frame, since near-inflection samples cannot pin the line
    //     any tighter than that
    let mut line_residual: f64 = 0.0;
    let mut worst_param = arrays.params[0];
    let mut worst_excess: f64 = 0.0;
    for i in 0..n {
        let d = mate[i] - app[i].gamma;
        let dn = d.norm();
        if dn > 0.0 {
            let r = d.cross(kind.v.of(&app[i])).norm() / dn;
            line_residual = line_residual.max(r);
            if r / tol.line() > worst_excess {
                worst_excess = r / tol.line();
                worst_param = arrays.params[i];
            }
        }
        if !measured[i].ok {
            return Err(BertrandError::VerificationFailed {
                param: arrays.params[i],
                residual: f64::INFINITY,
            });
        }
        let w = kind.w.of_discrete(&measured[i]);
        let r = w.cross(kind.v.of(&app[i])).norm();
        line_residual = line_residual.max(r);
        let allowed = tol.line() * discrete::direction_conditioning(&measured[i]);
        if r / allowed > worst_excess {
            worst_excess = r / allowed;
            worst_param = arrays.params[i];
        }
    }
    if worst_excess > 1.0 {
        return Err(BertrandError::VerificationFailed {
            param: worst_param,
            residual: line_residual,
        });
    }

    // formula vs oracle over fully-centered samples; the oracle recovers
    // curvature from the measured frames, which stays conditioned through
    // near-inflection samples
    let (oracle_kappa, oracle_tau) = discrete::frame_route_curvature(&arrays.params, &measured);
    let ctol = curvature_tolerance(kind, tol);
    let mut curvature_residual: f64 = 0.0;
    let mut worst_curv_param = arrays.params[0];
    for i in discrete::interior_range(n) {
        let rk = (mate_kappa[i] - oracle_kappa[i]).abs() / (1.0 + mate_kappa[i].abs());
        let rt = (mate_tau[i] - oracle_tau[i]).abs() / (1.0 + mate_tau[i].abs());
        let r = rk.max(rt);
        if r > curvature_residual {
            curvature_residual = r;
            worst_curv_param = arrays.params[i];
        }
    }
    if curvature_residual > ctol {
        return Err(BertrandError::VerificationFailed {
            param: worst_curv_param,
            residual: curvature_residual,
        });
    }

    Ok(MateReport {
        kind,
        verdict: Verdict::Feasible,
        constants: Some(*constants),
        offset,
        mate,
        mate_kappa,
        mate_tau,
        line_residual: Some(line_residual),
        line_residual_at: Some(worst_param),
        curvature_residual: Some(curvature_residual),
        curvature_residual_at: Some(worst_curv_param),
        reason: "constructed mate passed line and curvature verification".into(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::CurveSpec;
    use crate::frenet::{frenet_apparatus, integrate_frenet, FrenetInit};
    use crate::geom::Grid;
    use crate::Expr;
    use std::collections::BTreeMap;
    use std::f64::consts::PI;

    fn helix_apparatus() -> Vec<FrenetSample> {
        let spec =
            CurveSpec::from_strs("cos(t)", "sin(t)", "t", 0.0, 2.0 * PI, BTreeMap::new()).unwrap();
        let grid = Grid::uniform(0.0, 2.0 * PI, 256).unwrap();
        frenet_apparatus(&spec, &grid, &Tolerances::default()).unwrap()
    }

    fn circle_apparatus(radius: f64) -> Vec<FrenetSample> {
        let spec = CurveSpec::from_strs(
            "r*cos(t)",
            "r*sin(t)",
            "0",
            0.0,
            2.0 * PI,
            [("r".to_string(), radius)].into_iter().collect(),
        )
        .unwrap();
        let grid = Grid::uniform(0.0, 2.0 * PI, 256).unwrap();
        frenet_apparatus(&spec, &grid, &Tolerances::default()).unwrap()
    }

    #[test]
    fn helix_bertrand_min_norm_then_reselected() {
        let app = helix_apparatus();
        let report =
            classify_bertrand(&app, &MateParams::default(), &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Feasible);
        let c = report.constants.unwrap();
        // kappa = tau = 1/2 puts (A, B) on the line A + B = 2; the min-norm
        // point (1, 1) kills B kappa - A tau, so the classifier slides to
        // (2, 0)
        assert!(!c.unique);
        assert!((c.a - 2.0).abs() < 1e-9, "A = {}", c.a);
        assert!(c.b.unwrap().abs() < 1e-9, "B = {:?}", c.b);
        // proposition values for (A, B) = (2, 0): kappa-bar = tau-bar = 1/2
        for (kb, tb) in report.mate_kappa.iter().zip(&report.mate_tau) {
            assert!((kb - 0.5).abs() < 1e-9);
            assert!((tb - 0.5).abs() < 1e-9);
        }
    }

    #[test]
    fn planar_circle_is_identically_satisfied() {
        let app = circle_apparatus(2.0);
        let report =
            classify_bertrand(&app, &MateParams::default(), &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::IdenticallySatisfied);
        // canonical lambda = -1 / min kappa = -2
        assert!((report.constants.unwrap().a + 2.0).abs() < 1e-9);
    }

    #[test]
    fn circle_bertrand_mate_with_lambda_minus_one() {
        let app = circle_apparatus(2.0);
        let params = MateParams {
            a: Some(-1.0),
            ..Default::default()
        };
        let report = classify_bertrand(&app, &params, &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::IdenticallySatisfied);
        // mate is the concentric radius-3 circle
        for p in &report.mate {
            assert!((p.norm() - 3.0).abs() < 1e-9, "|p| = {}", p.norm());
        }
        for kb in &report.mate_kappa {
            assert!((kb - 1.0 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn constant_kappa_varying_tau_is_bertrand() {
        // kappa = 1 with non-vanishing tau satisfies A kappa + B tau = 1
        // exactly with (A, B) = (1, 0)
        let kappa = Expr::parse("1").unwrap();
        let tau = Expr::parse("1+0.5*sin(t)").unwrap();
        let grid = Grid::uniform(0.0, 4.0, 512).unwrap();
        let app = integrate_frenet(
            &kappa,
            &tau,
            &BTreeMap::new(),
            &FrenetInit::standard(),
            &grid,
        )
        .unwrap();
        let report =
            classify_bertrand(&app, &MateParams::default(), &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Feasible, "{}", report.reason);
        let c = report.constants.unwrap();
        assert!((c.a - 1.0).abs() < 1e-6, "A = {}", c.a);
        assert!(c.b.unwrap().abs() < 1e-6, "B = {:?}", c.b);
    }

    #[test]
    fn affinely_independent_curvatures_are_infeasible() {
        let kappa = Expr::parse("1+0.3*sin(t)").unwrap();
        let tau = Expr::parse("1+0.5*cos(t)").unwrap();
        let grid = Grid::uniform(0.0, 4.0, 512).unwrap();
        let app = integrate_frenet(
            &kappa,
            &tau,
            &BTreeMap::new(),
            &FrenetInit::standard(),
            &grid,
        )
        .unwrap();
        let report =
            classify_bertrand(&app, &MateParams::default(), &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Infeasible);
    }

    #[test]
    fn helix_is_not_mannheim() {
        let app = helix_apparatus();
        let report =
            classify_mannheim(&app, &MateParams::default(), &Tolerances::default()).unwrap();
        // A = 1 fits exactly but kappa tau' - kappa' tau is identically zero
        assert_eq!(report.verdict, Verdict::Infeasible);
    }

    #[test]
    fn planar_curve_is_not_mannheim() {
        let app = circle_apparatus(2.0);
        let report =
            classify_mannheim(&app, &MateParams::default(), &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Infeasible);
    }

    #[test]
    fn mannheim_fixture_classifies_and_verifies() {
        // tau^2 = kappa - kappa^2 forces A (kappa^2 + tau^2) = kappa with
        // A = 1
        let kappa = Expr::parse("0.5+0.25*sin(t)").unwrap();
        let tau = Expr::parse("sqrt((0.5+0.25*sin(t))-(0.5+0.25*sin(t))^2)").unwrap();
        let grid = Grid::uniform(0.2, 1.2, 512).unwrap();
        let app = integrate_frenet(
            &kappa,
            &tau,
            &BTreeMap::new(),
            &FrenetInit::standard(),
            &grid,
        )
        .unwrap();
        let report =
            classify_mannheim(&app, &MateParams::default(), &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Feasible, "{}", report.reason);
        let c = report.constants.unwrap();
        assert!((c.a - 1.0).abs() < 1e-6, "A = {}", c.a);
        assert!(report.curvature_residual.unwrap() < 1e-3);
    }

    #[test]
    fn impossible_kinds_are_always_infeasible() {
        let app = helix_apparatus();
        for (v, w) in [
            (FrameAxis::T, FrameAxis::T),
            (FrameAxis::T, FrameAxis::B),
            (FrameAxis::B, FrameAxis::T),
        ] {
            let report = classify_bertrand_type(
                &app,
                PairKind::new(v, w),
                &MateParams::default(),
                &Tolerances::default(),
            )
            .unwrap();
            assert_eq!(report.verdict, Verdict::Infeasible);
        }
    }

    #[test]
    fn circle_involute_feasible_with_user_constant() {
        // unit circle arc on [0.1, 3.0] in arc length, c = -1 keeps
        // -s + c != 0
        let spec = CurveSpec::from_strs(
            "cos(t)",
            "sin(t)",
            "0",
            0.1,
            3.0,
            BTreeMap::new(),
        )
        .unwrap();
        let grid = Grid::uniform(0.1, 3.0, 512).unwrap();
        let app = frenet_apparatus(&spec, &grid, &Tolerances::default()).unwrap();
        let params = MateParams {
            c: Some(-1.0),
            ..Default::default()
        };
        let report = classify_bertrand_type(
            &app,
            PairKind::new(FrameAxis::T, FrameAxis::N),
            &params,
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Feasible, "{}", report.reason);
        assert!(report.line_residual.unwrap() < 1e-6);
    }

    #[test]
    fn circle_has_no_evolute_mate() {
        let app = circle_apparatus(2.0);
        let report = classify_bertrand_type(
            &app,
            PairKind::new(FrameAxis::N, FrameAxis::T),
            &MateParams::default(),
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Infeasible);
    }

    #[test]
    fn ellipse_quarter_evolute_feasible() {
        let spec = CurveSpec::from_strs(
            "2*cos(t)",
            "sin(t)",
            "0",
            0.2,
            1.37,
            BTreeMap::new(),
        )
        .unwrap();
        let grid = Grid::uniform(0.2, 1.37, 512).unwrap();
        let app = frenet_apparatus(&spec, &grid, &Tolerances::default()).unwrap();
        let report = classify_bertrand_type(
            &app,
            PairKind::new(FrameAxis::N, FrameAxis::T),
            &MateParams::default(),
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Feasible, "{}", report.reason);
    }

    #[test]
    fn planar_translation_mate() {
        let app = circle_apparatus(2.0);
        let report = classify_bertrand_type(
            &app,
            PairKind::new(FrameAxis::B, FrameAxis::B),
            &MateParams::default(),
            &Tolerances::default(),
        )
        .unwrap();
        assert_eq!(report.verdict, Verdict::Feasible);
        // rigid translate: curvature unchanged
        for (kb, s) in report.mate_kappa.iter().zip(&app) {
            assert_eq!(*kb, s.kappa);
        }
    }

    #[test]
    fn mismatched_constants_fail_verification() {
        let app = helix_apparatus();
        let bad = BertrandConstants {
            a: 0.7,
            b: Some(0.1),
            unique: true,
            residual: 0.0,
        };
        let err = construct_mate(
            &app,
            PairKind::new(FrameAxis::N, FrameAxis::N),
            &bad,
            &Tolerances::default(),
        );
        assert!(matches!(
            err,
            Err(BertrandError::VerificationFailed { .. })
        ));
    }

    #[test]
    fn pair_kind_round_trips() {
        for kind in PairKind::ALL {
            let s = kind.to_string();
            assert_eq!(s.parse::<PairKind>().unwrap(), kind);
        }
        assert!("x-y".parse::<PairKind>().is_err());
        assert!("nn".parse::<PairKind>().is_err());
    }
}

#[cfg(test)]
mod formula_pole_tests {
    use super::*;

    #[test]
    fn vanishing_torsion_is_a_formula_pole() {
        let params = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7];
        let kappa = [1.0; 8];
        let tau = [0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.5, 0.5];
        let speed = [1.0; 8];
        assert!(matches!(
            bertrand_mate_curvature(&params, &kappa, &tau, 1.0, 1.0, BertrandBranch::Generic),
            Err(BertrandError::DivisionByZeroDomain(p)) if p == 0.2
        ));
        assert!(matches!(
            mannheim_mate_curvature(&params, &kappa, &tau, &speed, 1.0),
            Err(BertrandError::DivisionByZeroDomain(_))
        ));
        // planar branch pole: 1 - A kappa = 0
        assert!(matches!(
            bertrand_mate_curvature(&params, &kappa, &tau, 1.0, 0.0, BertrandBranch::Planar),
            Err(BertrandError::DivisionByZeroDomain(_))
        ));
    }

    #[test]
    fn constant_curvatures_zero_out_mannheim_mate_kappa() {
        // kappa tau' - kappa' tau vanishes identically for constants, so
        // the mate curvature numerator is exactly zero
        let params: Vec<f64> = (0..16).map(|i| 0.1 * i as f64).collect();
        let kappa = vec![0.5; 16];
        let tau = vec![0.5; 16];
        let speed = vec![1.0; 16];
        let (kb, tb) = mannheim_mate_curvature(&params, &kappa, &tau, &speed, 1.0).unwrap();
        for k in kb {
            assert_eq!(k, 0.0);
        }
        for t in tb {
            assert_eq!(t, 1.0);
        }
    }
}

#[cfg(test)]
mod pinned_constants_tests {
    use super::*;
    use crate::frenet::frenet_apparatus;
    use crate::geom::Grid;
    use crate::Tolerances;
    use std::collections::BTreeMap;
    use std::f64::consts::PI;

    #[test]
    fn pinned_bertrand_constants_are_honored() {
        let spec = crate::expr::CurveSpec::from_strs(
            "cos(t)",
            "sin(t)",
            "t",
            0.0,
            2.0 * PI,
            BTreeMap::new(),
        )
        .unwrap();
        let grid = Grid::uniform(0.0, 2.0 * PI, 256).unwrap();
        let app = frenet_apparatus(&spec, &grid, &Tolerances::default()).unwrap();
        // any point of the solution line A + B = 2 with B kappa != A tau
        let params = MateParams {
            a: Some(0.5),
            b: Some(1.5),
            ..Default::default()
        };
        let report = classify_bertrand(&app, &params, &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Feasible, "{}", report.reason);
        let c = report.constants.unwrap();
        assert_eq!((c.a, c.b), (0.5, Some(1.5)));
        // off the line: rejected before construction
        let params = MateParams {
            a: Some(0.3),
            b: Some(0.3),
            ..Default::default()
        };
        let report = classify_bertrand(&app, &params, &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Infeasible);
        // on the line but killing B kappa - A tau
        let params = MateParams {
            a: Some(1.0),
            b: Some(1.0),
            ..Default::default()
        };
        let report = classify_bertrand(&app, &params, &Tolerances::default()).unwrap();
        assert_eq!(report.verdict, Verdict::Infeasible);
    }
}
