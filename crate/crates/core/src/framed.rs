//! Framed curves: possibly-singular space curves carried by an orthonormal
//! frame pair, with curvature quadruple (l, m, n, alpha).
//!
//! The frame satisfies nu1' = l nu2 + m mu, nu2' = -l nu1 + n mu,
//! mu' = -m nu1 - n nu2 and gamma' = alpha mu, where mu = nu1 x nu2.
//! alpha vanishes exactly at the singular points of gamma.

use crate::diff;
use crate::expr::{EvalError, Expr};
use crate::geom::{project_to_delta, FramePair, GeomError, Grid, Vec3};
use crate::tol::Tolerances;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FramedError {
    #[error("initial frame pair is not orthonormal (defect {defect:e})")]
    InvalidInit { defect: f64 },
    #[error("frame pair leaves the orthonormal manifold at sample {index} (defect {defect:e})")]
    FrameDefect { index: usize, defect: f64 },
    #[error("sample arrays disagree in length")]
    LengthMismatch,
    #[error("framed curves live on different grids")]
    GridMismatch,
    #[error("frame condition gamma' . nu{which} = 0 fails: residual {residual:e} at t = {at}")]
    NotFramed { which: u8, residual: f64, at: f64 },
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Sampled framed curve. `mu` is stored explicitly so mate constructions can
/// copy a designated frame vector bit-for-bit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FramedCurve {
    pub grid: Grid,
    pub gamma: Vec<Vec3>,
    pub nu1: Vec<Vec3>,
    pub nu2: Vec<Vec3>,
    pub mu: Vec<Vec3>,
}

impl FramedCurve {
    /// Build from gamma and the frame pair arrays; mu is derived.
    pub fn from_parts(
        grid: Grid,
        gamma: Vec<Vec3>,
        nu1: Vec<Vec3>,
        nu2: Vec<Vec3>,
        tol: &Tolerances,
    ) -> Result<FramedCurve, FramedError> {
        let mu = nu1.iter().zip(&nu2).map(|(a, b)| a.cross(*b)).collect();
        Self::with_mu(grid, gamma, nu1, nu2, mu, tol)
    }

    /// Build with an explicit mu array (used when mu is a copied frame
    /// vector of a mate construction).
    pub fn with_mu(
        grid: Grid,
        gamma: Vec<Vec3>,
        nu1: Vec<Vec3>,
        nu2: Vec<Vec3>,
        mu: Vec<Vec3>,
        tol: &Tolerances,
    ) -> Result<FramedCurve, FramedError> {
        let n = grid.len();
        if gamma.len() != n || nu1.len() != n || nu2.len() != n || mu.len() != n {
            return Err(FramedError::LengthMismatch);
        }
        for i in 0..n {
            let pair = FramePair::new(nu1[i], nu2[i]);
            let defect = pair
                .defect()
                .max((mu[i] - pair.mu()).norm());
            if defect > tol.frame() {
                return Err(FramedError::FrameDefect { index: i, defect });
            }
        }
        Ok(FramedCurve {
            grid,
            gamma,
            nu1,
            nu2,
            mu,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Check the defining conditions gamma' . nu1 = gamma' . nu2 = 0 with
    /// stencil derivatives.
    pub fn validate_framed_condition(&self, tol: &Tolerances) -> Result<(), FramedError> {
        let h = self.grid.spacing();
        let dgamma = diff::derivative_vec3(&self.gamma, h);
        let scale = dgamma.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let threshold = tol.scale * 1e-5 * scale.max(f64::MIN_POSITIVE);
        for i in 0..self.len() {
            let r1 = dgamma[i].dot(self.nu1[i]).abs();
            let r2 = dgamma[i].dot(self.nu2[i]).abs();
            if r1 > threshold {
                return Err(FramedError::NotFramed {
                    which: 1,
                    residual: r1,
                    at: self.grid.values()[i],
                });
            }
            if r2 > threshold {
                return Err(FramedError::NotFramed {
                    which: 2,
                    residual: r2,
                    at: self.grid.values()[i],
                });
            }
        }
        Ok(())
    }
}

/// Curvature quadruple as sample arrays.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurvatureSamples {
    pub l: Vec<f64>,
    pub m: Vec<f64>,
    pub n: Vec<f64>,
    pub alpha: Vec<f64>,
}

impl CurvatureSamples {
    pub fn len(&self) -> usize {
        self.l.len()
    }

    pub fn is_empty(&self) -> bool {
        self.l.is_empty()
    }

    /// Largest absolute value across all four components.
    pub fn scale(&self) -> f64 {
        self.l
            .iter()
            .chain(&self.m)
            .chain(&self.n)
            .chain(&self.alpha)
            .map(|v| v.abs())
            .fold(0.0, f64::max)
    }
}

/// Curvature quadruple as expressions, for integration.
#[derive(Debug, Clone)]
pub struct CurvatureExprs {
    pub l: Expr,
    pub m: Expr,
    pub n: Expr,
    pub alpha: Expr,
    pub constants: BTreeMap<String, f64>,
}

impl CurvatureExprs {
    pub fn eval(&self, t: f64) -> Result<[f64; 4], EvalError> {
        Ok([
            self.l.eval(t, &self.constants)?,
            self.m.eval(t, &self.constants)?,
            self.n.eval(t, &self.constants)?,
            self.alpha.eval(t, &self.constants)?,
        ])
    }

    pub fn sample(&self, grid: &Grid) -> Result<CurvatureSamples, EvalError> {
        let n = grid.len();
        let mut out = CurvatureSamples {
            l: Vec::with_capacity(n),
            m: Vec::with_capacity(n),
            n: Vec::with_capacity(n),
            alpha: Vec::with_capacity(n),
        };
        for &t in grid.values() {
            let [l, m, nn, a] = self.eval(t)?;
            out.l.push(l);
            out.m.push(m);
            out.n.push(nn);
            out.alpha.push(a);
        }
        Ok(out)
    }
}

/// Initial data for the frame ODE.
#[derive(Debug, Clone, Copy)]
pub struct FramedInit {
    pub gamma0: Vec3,
    pub pair0: FramePair,
}

/// Integration result with the orthonormality drift diagnostic.
#[derive(Debug, Clone)]
pub struct FramedIntegration {
    pub curve: FramedCurve,
    /// Largest frame defect observed before each per-step
    /// re-orthonormalization.
    pub max_drift: f64,
}

/// Realize a framed curve with prescribed curvature by fixed-step RK4 with
/// per-step Gram-Schmidt projection of the frame pair.
pub fn integrate_framed(
    curv: &CurvatureExprs,
    init: &FramedInit,
    grid: &Grid,
    tol: &Tolerances,
) -> Result<FramedIntegration, FramedError> {
    let defect = init.pair0.defect();
    if defect > 1e-9 {
        return Err(FramedError::InvalidInit { defect });
    }

    #[derive(Clone, Copy)]
    struct State {
        gamma: Vec3,
        nu1: Vec3,
        nu2: Vec3,
    }

    let rhs = |t: f64, y: &State| -> Result<State, EvalError> {
        let [l, m, n, a] = curv.eval(t)?;
        let mu = y.nu1.cross(y.nu2);
        Ok(State {
            gamma: mu * a,
            nu1: y.nu2 * l + mu * m,
            nu2: mu * n - y.nu1 * l,
        })
    };
    let axpy = |y: &State, h: f64, d: &State| State {
        gamma: y.gamma + d.gamma * h,
        nu1: y.nu1 + d.nu1 * h,
        nu2: y.nu2 + d.nu2 * h,
    };

    let ts = grid.values();
    let n = ts.len();
    let mut y = State {
        gamma: init.gamma0,
        nu1: init.pair0.nu1,
        nu2: init.pair0.nu2,
    };
    let mut gamma = Vec::with_capacity(n);
    let mut nu1 = Vec::with_capacity(n);
    let mut nu2 = Vec::with_capacity(n);
    let mut max_drift: f64 = 0.0;
    gamma.push(y.gamma);
    nu1.push(y.nu1);
    nu2.push(y.nu2);
    for w in ts.windows(2) {
        let (t, h) = (w[0], w[1] - w[0]);
        let k1 = rhs(t, &y)?;
        let k2 = rhs(t + 0.5 * h, &axpy(&y, 0.5 * h, &k1))?;
        let k3 = rhs(t + 0.5 * h, &axpy(&y, 0.5 * h, &k2))?;
        let k4 = rhs(t + h, &axpy(&y, h, &k3))?;
        y = State {
            gamma: y.gamma + (k1.gamma + (k2.gamma + k3.gamma) * 2.0 + k4.gamma) * (h / 6.0),
            nu1: y.nu1 + (k1.nu1 + (k2.nu1 + k3.nu1) * 2.0 + k4.nu1) * (h / 6.0),
            nu2: y.nu2 + (k1.nu2 + (k2.nu2 + k3.nu2) * 2.0 + k4.nu2) * (h / 6.0),
        };
        let pair = FramePair::new(y.nu1, y.nu2);
        max_drift = max_drift.max(pair.defect());
        let projected = project_to_delta(&pair)?;
        y.nu1 = projected.nu1;
        y.nu2 = projected.nu2;
        gamma.push(y.gamma);
        nu1.push(y.nu1);
        nu2.push(y.nu2);
    }
    let curve = FramedCurve::from_parts(grid.clone(), gamma, nu1, nu2, tol)?;
    Ok(FramedIntegration { curve, max_drift })
}

/// Recover the curvature quadruple from samples with stencil derivatives:
/// l = nu1' . nu2, m = nu1' . mu, n = nu2' . mu, alpha = gamma' . mu.
pub fn recompute_curvature(fc: &FramedCurve) -> CurvatureSamples {
    let h = fc.grid.spacing();
    let dnu1 = diff::derivative_vec3(&fc.nu1, h);
    let dnu2 = diff::derivative_vec3(&fc.nu2, h);
    let dgamma = diff::derivative_vec3(&fc.gamma, h);
    let n = fc.len();
    let mut out = CurvatureSamples {
        l: Vec::with_capacity(n),
        m: Vec::with_capacity(n),
        n: Vec::with_capacity(n),
        alpha: Vec::with_capacity(n),
    };
    for i in 0..n {
        out.l.push(dnu1[i].dot(fc.nu2[i]));
        out.m.push(dnu1[i].dot(fc.mu[i]));
        out.n.push(dnu2[i].dot(fc.mu[i]));
        out.alpha.push(dgamma[i].dot(fc.mu[i]));
    }
    out
}

/// Rotate the frame pair by theta(t) = integral of l, making the first
/// curvature component vanish. mu is unchanged.
pub fn adapted_frame(fc: &FramedCurve, tol: &Tolerances) -> Result<FramedCurve, FramedError> {
    let curv = recompute_curvature(fc);
    let theta = diff::cumulative_integral(&curv.l, fc.grid.spacing());
    let n = fc.len();
    let mut nu1 = Vec::with_capacity(n);
    let mut nu2 = Vec::with_capacity(n);
    for i in 0..n {
        let (s, c) = theta[i].sin_cos();
        nu1.push(fc.nu1[i] * c - fc.nu2[i] * s);
        nu2.push(fc.nu1[i] * s + fc.nu2[i] * c);
    }
    FramedCurve::with_mu(
        fc.grid.clone(),
        fc.gamma.clone(),
        nu1,
        nu2,
        fc.mu.clone(),
        tol,
    )
}

/// The frame-swapped curve (gamma, nu2, nu1); its curvature is
/// (-l, -n, -m, -alpha).
pub fn swap_frame(fc: &FramedCurve) -> FramedCurve {
    FramedCurve {
        grid: fc.grid.clone(),
        gamma: fc.gamma.clone(),
        nu1: fc.nu2.clone(),
        nu2: fc.nu1.clone(),
        mu: fc.mu.iter().map(|v| -*v).collect(),
    }
}

/// Congruence decision via the uniqueness theorem: two framed curves are
/// congruent exactly when their curvature quadruples coincide, so no
/// rigid-motion search is performed.
pub fn congruent(
    fc1: &FramedCurve,
    fc2: &FramedCurve,
    tol: &Tolerances,
) -> Result<(bool, f64), FramedError> {
    if fc1.grid != fc2.grid {
        return Err(FramedError::GridMismatch);
    }
    let c1 = recompute_curvature(fc1);
    let c2 = recompute_curvature(fc2);
    let mut max_dev: f64 = 0.0;
    for (a, b) in [
        (&c1.l, &c2.l),
        (&c1.m, &c2.m),
        (&c1.n, &c2.n),
        (&c1.alpha, &c2.alpha),
    ] {
        for (x, y) in a.iter().zip(b.iter()) {
            let dev = (x - y).abs() / x.abs().max(y.abs()).max(1.0);
            max_dev = max_dev.max(dev);
        }
    }
    Ok((max_dev <= tol.scale * 1e-4, max_dev))
}

/// Parameters of the singular points of gamma: the zeros of the recovered
/// alpha.
pub fn singular_points(fc: &FramedCurve, tol: &Tolerances) -> Vec<f64> {
    let curv = recompute_curvature(fc);
    let alpha_scale = curv.alpha.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let touch = tol.scale * 1e-4 * alpha_scale.max(f64::MIN_POSITIVE);
    diff::sampled_zeros(fc.grid.values(), &curv.alpha, touch)
}
