//! Reference fixtures used across the test and benchmark suites: standard
//! curves with known Frenet data and the framed-curve example with curvature
//! (0, p cos t, p sin t, sin qt).

use crate::expr::{CurveSpec, Expr};
use crate::framed::{CurvatureExprs, FramedCurve, FramedInit};
use crate::geom::{FramePair, GeomError, Grid, Vec3};
use crate::tol::Tolerances;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Unit-pitch circular helix (cos t, sin t, t) on [0, 2 pi]:
/// kappa = tau = 1/2, speed = sqrt(2).
pub fn helix() -> CurveSpec {
    CurveSpec::from_strs("cos(t)", "sin(t)", "t", 0.0, 2.0 * PI, BTreeMap::new())
        .expect("static fixture")
}

/// Planar circle of the given radius on [0, 2 pi].
pub fn circle(radius: f64) -> CurveSpec {
    CurveSpec::from_strs(
        "r*cos(t)",
        "r*sin(t)",
        "0",
        0.0,
        2.0 * PI,
        [("r".to_string(), radius)].into_iter().collect(),
    )
    .expect("static fixture")
}

/// Quarter-ish arc of the ellipse (2 cos t, sin t) staying away from the
/// vertices, where kappa' does not vanish.
pub fn ellipse_quarter() -> CurveSpec {
    CurveSpec::from_strs("2*cos(t)", "sin(t)", "0", 0.2, 1.37, BTreeMap::new())
        .expect("static fixture")
}

/// Prescribed curvature kappa = 1, tau = tan s on an interval inside
/// (-pi/2, pi/2); satisfies A tau' = kappa (A^2 tau^2 + 1) with A = 1.
pub fn tan_torsion() -> (Expr, Expr) {
    (
        Expr::parse("1").expect("static fixture"),
        Expr::parse("tan(t)").expect("static fixture"),
    )
}

/// Framed curvature (0, p cos t, p sin t, sin qt) with the initial frame of
/// the explicit parametrization whose mu has constant z-component
/// 1 / sqrt(1 + p^2).
pub fn framed_example(p: f64, q: f64) -> (CurvatureExprs, FramedInit) {
    let mut constants = BTreeMap::new();
    constants.insert("p".to_string(), p);
    constants.insert("q".to_string(), q);
    let curv = CurvatureExprs {
        l: Expr::parse("0").expect("static fixture"),
        m: Expr::parse("p*cos(t)").expect("static fixture"),
        n: Expr::parse("p*sin(t)").expect("static fixture"),
        alpha: Expr::parse("sin(q*t)").expect("static fixture"),
        constants,
    };
    let r = (1.0 + p * p).sqrt();
    let init = FramedInit {
        gamma0: Vec3::new(p * q / (r * (q * q - r * r)), 0.0, -1.0 / (q * r)),
        pair0: FramePair::new(Vec3::EY, Vec3::new(-1.0 / r, 0.0, -p / r)),
    };
    (curv, init)
}

/// Grid covering [0, 2 pi) with n samples (the right endpoint is one step
/// short of 2 pi, so periodic fixtures do not duplicate t = 0).
pub fn half_open_period_grid(n: usize) -> Result<Grid, GeomError> {
    Grid::uniform(0.0, 2.0 * PI * (n as f64 - 1.0) / n as f64, n)
}

/// Spherical Legendre pair (gamma, nu) along a small circle at latitude
/// phi, assembled as the framed curve (gamma, gamma, nu) with curvature
/// pattern (0, m, n, m).
pub fn spherical_legendre(phi: f64, grid: &Grid, tol: &Tolerances) -> FramedCurve {
    let mut gamma = Vec::with_capacity(grid.len());
    let mut nu = Vec::with_capacity(grid.len());
    for &t in grid.values() {
        gamma.push(Vec3::new(
            phi.cos() * t.cos(),
            phi.cos() * t.sin(),
            phi.sin(),
        ));
        nu.push(Vec3::new(
            -phi.sin() * t.cos(),
            -phi.sin() * t.sin(),
            phi.cos(),
        ));
    }
    FramedCurve::from_parts(grid.clone(), gamma.clone(), gamma, nu, tol)
        .expect("static fixture is framed")
}
