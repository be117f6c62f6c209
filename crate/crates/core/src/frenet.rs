//! Frenet apparatus of regular non-degenerate curves, arc-length
//! reparametrization, and realization of a curve from prescribed curvature
//! and torsion.

use crate::expr::{CurveSpec, EvalError, Expr, NotDifferentiable};
use crate::geom::{FramePair, GeomError, Grid, Vec3};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FrenetError {
    #[error("curve is not regular at t = {0}: |gamma'| below threshold")]
    NotRegular(f64),
    #[error("curve is degenerate at t = {0}: |gamma' x gamma''| below threshold")]
    Degenerate(f64),
    #[error("initial frame is not orthonormal right-handed (defect {defect:e})")]
    InvalidInit { defect: f64 },
    #[error("curvature must stay positive: kappa({at}) = {value}")]
    NonPositiveCurvature { at: f64, value: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Symbolic(#[from] NotDifferentiable),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// The full Frenet data at one parameter value.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FrenetSample {
    pub param: f64,
    pub gamma: Vec3,
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub kappa: f64,
    pub tau: f64,
    pub speed: f64,
}

/// Outcome of the non-degeneracy scan over a grid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NondegeneracyReport {
    pub ok: bool,
    /// Parameter of the first failing sample, when any.
    pub witness: Option<f64>,
    pub min_cross_norm: f64,
}

/// First three symbolic derivatives of each coordinate of a curve.
struct CurveJet {
    d1: [Expr; 3],
    d2: [Expr; 3],
    d3: [Expr; 3],
}

impl CurveJet {
    fn build(curve: &CurveSpec) -> Result<CurveJet, NotDifferentiable> {
        let d = |e: &Expr, k| e.derivative(k);
        Ok(CurveJet {
            d1: [
                d(&curve.x, 1)?,
                d(&curve.y, 1)?,
                d(&curve.z, 1)?,
            ],
            d2: [
                d(&curve.x, 2)?,
                d(&curve.y, 2)?,
                d(&curve.z, 2)?,
            ],
            d3: [
                d(&curve.x, 3)?,
                d(&curve.y, 3)?,
                d(&curve.z, 3)?,
            ],
        })
    }

    fn eval3(
        exprs: &[Expr; 3],
        t: f64,
        constants: &BTreeMap<String, f64>,
    ) -> Result<Vec3, EvalError> {
        Ok(Vec3::new(
            exprs[0].eval(t, constants)?,
            exprs[1].eval(t, constants)?,
            exprs[2].eval(t, constants)?,
        ))
    }
}

/// All raw derivative data over a grid, before frame assembly.
struct RawJetSamples {
    gamma: Vec<Vec3>,
    v1: Vec<Vec3>,
    v2: Vec<Vec3>,
    v3: Vec<Vec3>,
    speed_scale: f64,
}

fn raw_jet_samples(curve: &CurveSpec, grid: &Grid) -> Result<RawJetSamples, FrenetError> {
    let jet = CurveJet::build(curve)?;
    let n = grid.len();
    let mut gamma = Vec::with_capacity(n);
    let mut v1 = Vec::with_capacity(n);
    let mut v2 = Vec::with_capacity(n);
    let mut v3 = Vec::with_capacity(n);
    for &t in grid.values() {
        gamma.push(curve.position(t)?);
        v1.push(CurveJet::eval3(&jet.d1, t, &curve.constants)?);
        v2.push(CurveJet::eval3(&jet.d2, t, &curve.constants)?);
        v3.push(CurveJet::eval3(&jet.d3, t, &curve.constants)?);
    }
    let speed_scale = v1
        .iter()
        .map(|v| v.norm())
        .fold(0.0_f64, f64::max);
    Ok(RawJetSamples {
        gamma,
        v1,
        v2,
        v3,
        speed_scale,
    })
}

/// Scan |gamma' x gamma''| over the grid without failing.
pub fn nondegeneracy_report(
    curve: &CurveSpec,
    grid: &Grid,
    tol: &Tolerances,
) -> Result<NondegeneracyReport, FrenetError> {
    let raw = raw_jet_samples(curve, grid)?;
    let threshold = tol.degeneracy(raw.speed_scale);
    let mut min_cross = f64::INFINITY;
    let mut witness = None;
    for (i, &t) in grid.values().iter().enumerate() {
        let c = raw.v1[i].cross(raw.v2[i]).norm();
        if c < min_cross {
            min_cross = c;
        }
        if c <= threshold && witness.is_none() {
            witness = Some(t);
        }
    }
    Ok(NondegeneracyReport {
        ok: witness.is_none(),
        witness,
        min_cross_norm: min_cross,
    })
}

/// Frenet apparatus over a grid from symbolic derivatives.
///
/// Uses the general-parameter formulas: kappa = |g' x g''| / |g'|^3 and
/// tau = det(g', g'', g''') / |g' x g''|^2, with b = (g' x g'')/|g' x g''|
/// and n = b x t.
pub fn frenet_apparatus(
    curve: &CurveSpec,
    grid: &Grid,
    tol: &Tolerances,
) -> Result<Vec<FrenetSample>, FrenetError> {
    let raw = raw_jet_samples(curve, grid)?;
    apparatus_from_raw(&raw, grid, tol)
}

fn apparatus_from_raw(
    raw: &RawJetSamples,
    grid: &Grid,
    tol: &Tolerances,
) -> Result<Vec<FrenetSample>, FrenetError> {
    let tol_reg = tol.regularity(raw.speed_scale);
    let tol_deg = tol.degeneracy(raw.speed_scale);
    let mut out = Vec::with_capacity(grid.len());
    for (i, &t) in grid.values().iter().enumerate() {
        let (d1, d2, d3) = (raw.v1[i], raw.v2[i], raw.v3[i]);
        let speed = d1.norm();
        if speed <= tol_reg {
            return Err(FrenetError::NotRegular(t));
        }
        let cross = d1.cross(d2);
        let cross_norm = cross.norm();
        if cross_norm <= tol_deg {
            return Err(FrenetError::Degenerate(t));
        }
        let tangent = d1 / speed;
        let binormal = cross / cross_norm;
        let normal = binormal.cross(tangent);
        let kappa = cross_norm / (speed * speed * speed);
        let tau = Vec3::triple(d1, d2, d3) / (cross_norm * cross_norm);
        out.push(FrenetSample {
            param: t,
            gamma: raw.gamma[i],
            t: tangent,
            n: normal,
            b: binormal,
            kappa,
            tau,
            speed,
        });
    }
    Ok(out)
}

/// Monotone arc-length table and the apparatus resampled at unit speed.
#[derive(Debug, Clone)]
pub struct ArcLengthReparam {
    /// (t_i, s(t_i)) at the original grid points.
    pub table: Vec<(f64, f64)>,
    pub total_length: f64,
    /// Apparatus sampled uniformly in arc length; `param` is s and
    /// `speed` = 1.
    pub samples: Vec<FrenetSample>,
    /// Largest |s(t(s_j)) - s_j| left by the Newton inversion.
    pub inversion_residual: f64,
}

/// Adaptive Simpson quadrature of `f` over [a, b].
fn adaptive_simpson(f: &impl Fn(f64) -> Result<f64, EvalError>, a: f64, b: f64, tol: f64)
    -> Result<f64, EvalError>
{
    fn recurse(
        f: &impl Fn(f64) -> Result<f64, EvalError>,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        m: f64,
        fm: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> Result<f64, EvalError> {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = f(lm)?;
        let frm = f(rm)?;
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            Ok(left + right + delta / 15.0)
        } else {
            let l = recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1)?;
            let r = recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1)?;
            Ok(l + r)
        }
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(f, a, fa, b, fb, m, fm, whole, tol, 40)
}

/// Arc-length reparametrization of a regular curve.
pub fn arc_length_reparam(
    curve: &CurveSpec,
    grid: &Grid,
    tol: &Tolerances,
) -> Result<ArcLengthReparam, FrenetError> {
    let jet = CurveJet::build(curve)?;
    let constants = curve.constants.clone();
    let speed_fn = |t: f64| -> Result<f64, EvalError> {
        Ok(CurveJet::eval3(&jet.d1, t, &constants)?.norm())
    };

    // regularity scan on the grid before integrating
    let raw = raw_jet_samples(curve, grid)?;
    let tol_reg = tol.regularity(raw.speed_scale);
    for (i, &t) in grid.values().iter().enumerate() {
        if raw.v1[i].norm() <= tol_reg {
            return Err(FrenetError::NotRegular(t));
        }
    }

    // cumulative s(t) at grid points by adaptive Simpson per subinterval
    let quad_tol = 1e-13 * raw.speed_scale * (grid.t1 - grid.t0).max(1.0);
    let ts = grid.values();
    let mut table = Vec::with_capacity(ts.len());
    let mut s = 0.0;
    table.push((ts[0], 0.0));
    for w in ts.windows(2) {
        s += adaptive_simpson(&speed_fn, w[0], w[1], quad_tol)?;
        table.push((w[1], s));
    }
    let total_length = s;

    // invert t(s) on a uniform s-grid by Newton, seeded from the table
    let n = ts.len();
    let s_grid = Grid::uniform(0.0, total_length, n)?;
    let mut params_t = Vec::with_capacity(n);
    let mut inversion_residual: f64 = 0.0;
    let newton_tol = 1e-13 * total_length.max(1.0);
    let mut k = 0usize;
    for &sj in s_grid.values() {
        while k + 1 < n && table[k + 1].1 < sj {
            k += 1;
        }
        let (t_lo, s_lo) = table[k];
        let (t_hi, s_hi) = table[(k + 1).min(n - 1)];
        let mut t = if s_hi > s_lo {
            t_lo + (t_hi - t_lo) * (sj - s_lo) / (s_hi - s_lo)
        } else {
            t_lo
        };
        t = t.clamp(grid.t0, grid.t1);
        let mut residual = f64::INFINITY;
        for _ in 0..60 {
            let s_t = table[k].1 + adaptive_simpson(&speed_fn, t_lo, t, quad_tol)?;
            residual = s_t - sj;
            if residual.abs() <= newton_tol {
                break;
            }
            let v = speed_fn(t)?;
            t = (t - residual / v).clamp(grid.t0, grid.t1);
        }
        inversion_residual = inversion_residual.max(residual.abs());
        params_t.push(t);
    }

    // apparatus at the inverted parameters, reported in arc length
    let mut samples = Vec::with_capacity(n);
    for (j, (&sj, &tj)) in s_grid.values().iter().zip(&params_t).enumerate() {
        let d1 = CurveJet::eval3(&jet.d1, tj, &constants)?;
        let d2 = CurveJet::eval3(&jet.d2, tj, &constants)?;
        let d3 = CurveJet::eval3(&jet.d3, tj, &constants)?;
        let speed = d1.norm();
        let cross = d1.cross(d2);
        let cross_norm = cross.norm();
        if cross_norm <= tol.degeneracy(raw.speed_scale) {
            return Err(FrenetError::Degenerate(tj));
        }
        let tangent = d1 / speed;
        let binormal = cross / cross_norm;
        let normal = binormal.cross(tangent);
        let _ = j;
        samples.push(FrenetSample {
            param: sj,
            gamma: curve.position(tj)?,
            t: tangent,
            n: normal,
            b: binormal,
            kappa: cross_norm / (speed * speed * speed),
            tau: Vec3::triple(d1, d2, d3) / (cross_norm * cross_norm),
            // unit by construction; the inversion residual bounds the error
            speed: 1.0,
        });
    }

    Ok(ArcLengthReparam {
        table,
        total_length,
        samples,
        inversion_residual,
    })
}

/// Initial data for the Frenet ODE.
#[derive(Debug, Clone, Copy)]
pub struct FrenetInit {
    pub gamma0: Vec3,
    pub t0: Vec3,
    pub n0: Vec3,
    pub b0: Vec3,
}

impl FrenetInit {
    /// Standard frame at the origin.
    pub fn standard() -> Self {
        FrenetInit {
            gamma0: Vec3::ZERO,
            t0: Vec3::EX,
            n0: Vec3::EY,
            b0: Vec3::EZ,
        }
    }

    fn defect(&self) -> f64 {
        let pair = FramePair::new(self.t0, self.n0);
        pair.defect().max((self.b0 - self.t0.cross(self.n0)).norm())
    }
}

/// Realize a curve with prescribed curvature kappa(s) > 0 and torsion tau(s)
/// by integrating the arc-length Frenet system
/// (gamma' = t, t' = kappa n, n' = -kappa t + tau b, b' = -tau n)
/// with fixed-step RK4 and per-step Gram-Schmidt re-orthonormalization.
pub fn integrate_frenet(
    kappa: &Expr,
    tau: &Expr,
    constants: &BTreeMap<String, f64>,
    init: &FrenetInit,
    grid: &Grid,
) -> Result<Vec<FrenetSample>, FrenetError> {
    if init.defect() > 1e-9 {
        return Err(FrenetError::InvalidInit {
            defect: init.defect(),
        });
    }

    #[derive(Clone, Copy)]
    struct State {
        gamma: Vec3,
        t: Vec3,
        n: Vec3,
        b: Vec3,
    }

    let rhs = |s: f64, y: &State| -> Result<State, FrenetError> {
        let k = kappa.eval(s, constants)?;
        let ta = tau.eval(s, constants)?;
        Ok(State {
            gamma: y.t,
            t: y.n * k,
            n: y.b * ta - y.t * k,
            b: -(y.n) * ta,
        })
    };
    let axpy = |y: &State, h: f64, d: &State| State {
        gamma: y.gamma + d.gamma * h,
        t: y.t + d.t * h,
        n: y.n + d.n * h,
        b: y.b + d.b * h,
    };

    let ss = grid.values();
    let mut y = State {
        gamma: init.gamma0,
        t: init.t0,
        n: init.n0,
        b: init.b0,
    };
    let mut out = Vec::with_capacity(ss.len());
    let sample_at = |s: f64, y: &State| -> Result<FrenetSample, FrenetError> {
        let k = kappa.eval(s, constants)?;
        if k <= 0.0 {
            return Err(FrenetError::NonPositiveCurvature { at: s, value: k });
        }
        Ok(FrenetSample {
            param: s,
            gamma: y.gamma,
            t: y.t,
            n: y.n,
            b: y.b,
            kappa: k,
            tau: tau.eval(s, constants)?,
            speed: 1.0,
        })
    };
    out.push(sample_at(ss[0], &y)?);
    for w in ss.windows(2) {
        let (s, h) = (w[0], w[1] - w[0]);
        let k1 = rhs(s, &y)?;
        let k2 = rhs(s + 0.5 * h, &axpy(&y, 0.5 * h, &k1))?;
        let k3 = rhs(s + 0.5 * h, &axpy(&y, 0.5 * h, &k2))?;
        let k4 = rhs(s + h, &axpy(&y, h, &k3))?;
        let step = State {
            gamma: (k1.gamma + (k2.gamma + k3.gamma) * 2.0 + k4.gamma) * (h / 6.0),
            t: (k1.t + (k2.t + k3.t) * 2.0 + k4.t) * (h / 6.0),
            n: (k1.n + (k2.n + k3.n) * 2.0 + k4.n) * (h / 6.0),
            b: (k1.b + (k2.b + k3.b) * 2.0 + k4.b) * (h / 6.0),
        };
        y = State {
            gamma: y.gamma + step.gamma,
            t: y.t + step.t,
            n: y.n + step.n,
            b: y.b + step.b,
        };
        let pair = crate::geom::project_to_delta(&FramePair::new(y.t, y.n))?;
        y.t = pair.nu1;
        y.n = pair.nu2;
        y.b = y.t.cross(y.n);
        out.push(sample_at(w[1], &y)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    fn helix() -> CurveSpec {
        CurveSpec::from_strs("cos(t)", "sin(t)", "t", 0.0, 2.0 * PI, BTreeMap::new()).unwrap()
    }

    fn circle2() -> CurveSpec {
        CurveSpec::from_strs(
            "2*cos(t)",
            "2*sin(t)",
            "0",
            0.0,
            2.0 * PI,
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn circle_apparatus() {
        let grid = Grid::uniform(0.0, 2.0 * PI, 128).unwrap();
        let app = frenet_apparatus(&circle2(), &grid, &Tolerances::default()).unwrap();
        for s in &app {
            assert!((s.kappa - 0.5).abs() < 1e-12);
            assert!(s.tau.abs() < 1e-12);
            assert!((s.speed - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn helix_apparatus() {
        let grid = Grid::uniform(0.0, 2.0 * PI, 128).unwrap();
        let app = frenet_apparatus(&helix(), &grid, &Tolerances::default()).unwrap();
        for s in &app {
            assert!((s.kappa - 0.5).abs() < 1e-12);
            assert!((s.tau - 0.5).abs() < 1e-12);
            assert!((s.speed - SQRT_2).abs() < 1e-12);
            assert!((s.b - s.t.cross(s.n)).norm() < 1e-12);
        }
    }

    #[test]
    fn line_is_degenerate() {
        let line =
            CurveSpec::from_strs("t", "0", "0", 0.0, 1.0, BTreeMap::new()).unwrap();
        let grid = Grid::uniform(0.0, 1.0, 64).unwrap();
        match frenet_apparatus(&line, &grid, &Tolerances::default()) {
            Err(FrenetError::Degenerate(_)) => {}
            other => panic!("expected Degenerate, got {other:?}"),
        }
        let report = nondegeneracy_report(&line, &grid, &Tolerances::default()).unwrap();
        assert!(!report.ok);
        assert!(report.min_cross_norm < 1e-15);
    }

    #[test]
    fn helix_arc_length() {
        let grid = Grid::uniform(0.0, 2.0 * PI, 256).unwrap();
        let r = arc_length_reparam(&helix(), &grid, &Tolerances::default()).unwrap();
        assert!(
            (r.total_length - 2.0 * PI * SQRT_2).abs() < 1e-9,
            "length {}",
            r.total_length
        );
        assert!(r.inversion_residual < 1e-10);
        for s in &r.samples {
            assert_eq!(s.speed, 1.0);
            assert!((s.kappa - 0.5).abs() < 1e-10);
        }
    }

    #[test]
    fn circle_circumference() {
        let grid = Grid::uniform(0.0, 2.0 * PI, 256).unwrap();
        let r = arc_length_reparam(&circle2(), &grid, &Tolerances::default()).unwrap();
        assert!((r.total_length - 4.0 * PI).abs() < 1e-9);
    }

    #[test]
    fn unit_speed_input_is_identity() {
        let unit_helix = CurveSpec::from_strs(
            "cos(t/s2)",
            "sin(t/s2)",
            "t/s2",
            0.0,
            4.0,
            [("s2".to_string(), SQRT_2)].into_iter().collect(),
        )
        .unwrap();
        let grid = Grid::uniform(0.0, 4.0, 128).unwrap();
        let r = arc_length_reparam(&unit_helix, &grid, &Tolerances::default()).unwrap();
        for (t, s) in &r.table {
            assert!((s - t).abs() < 1e-10, "s({t}) = {s}");
        }
    }

    #[test]
    fn integrate_constant_curvature_is_circle() {
        let kappa = Expr::parse("1").unwrap();
        let tau = Expr::parse("0").unwrap();
        let grid = Grid::uniform(0.0, 2.0 * PI, 512).unwrap();
        let samples = integrate_frenet(
            &kappa,
            &tau,
            &BTreeMap::new(),
            &FrenetInit::standard(),
            &grid,
        )
        .unwrap();
        // unit circle in the t-n plane centered at gamma0 + n0
        let center = Vec3::EY;
        for s in &samples {
            assert!(
                (s.gamma.distance(center) - 1.0).abs() < 1e-7,
                "at s={}: {:?}",
                s.param,
                s.gamma
            );
        }
    }

    #[test]
    fn integrate_helix_curvature_roundtrip() {
        // kappa = tau = 1/2 realizes a curve congruent to the standard helix
        let kappa = Expr::parse("0.5").unwrap();
        let tau = Expr::parse("0.5").unwrap();
        let grid = Grid::uniform(0.0, 4.0, 512).unwrap();
        let samples = integrate_frenet(
            &kappa,
            &tau,
            &BTreeMap::new(),
            &FrenetInit::standard(),
            &grid,
        )
        .unwrap();
        let h = grid.spacing();
        // recover kappa and tau from the integrated frames by finite
        // differences and compare with the prescription
        let ts: Vec<Vec3> = samples.iter().map(|s| s.t).collect();
        let ns: Vec<Vec3> = samples.iter().map(|s| s.n).collect();
        let dt = crate::diff::derivative_vec3(&ts, h);
        let dn = crate::diff::derivative_vec3(&ns, h);
        for i in 0..samples.len() {
            let k = dt[i].dot(samples[i].n);
            let ta = dn[i].dot(samples[i].b);
            assert!((k - 0.5).abs() < 1e-5 * 0.5, "kappa at {i}: {k}");
            assert!((ta - 0.5).abs() < 1e-5 * 0.5, "tau at {i}: {ta}");
        }
    }

    #[test]
    fn integrate_rejects_bad_init() {
        let kappa = Expr::parse("1").unwrap();
        let tau = Expr::parse("0").unwrap();
        let grid = Grid::uniform(0.0, 1.0, 64).unwrap();
        let bad = FrenetInit {
            gamma0: Vec3::ZERO,
            t0: Vec3::EX,
            n0: Vec3::new(0.5, 1.0, 0.0),
            b0: Vec3::EZ,
        };
        assert!(matches!(
            integrate_frenet(&kappa, &tau, &BTreeMap::new(), &bad, &grid),
            Err(FrenetError::InvalidInit { .. })
        ));
    }
}
