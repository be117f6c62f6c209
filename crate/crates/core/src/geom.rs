//! 3-vector algebra, orthonormal frame pairs, and sampling grids.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Div, Mul, Neg, Sub};
use thiserror::Error;

/// Unit-vector tolerance used when projecting onto the frame manifold.
pub const TOL_UNIT: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeomError {
    #[error("frame pair is degenerate: nu1 and nu2 are parallel within {0:e}")]
    DegeneratePair(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

/// A point or vector in Euclidean 3-space.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const EX: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const EY: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const EZ: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, other: Vec3) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Vector product, cofactor expansion along the canonical basis.
    pub fn cross(self, other: Vec3) -> Vec3 {
        Vec3::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_squared().sqrt()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    pub fn distance(self, other: Vec3) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Scalar triple product det(a, b, c).
    pub fn triple(a: Vec3, b: Vec3, c: Vec3) -> f64 {
        a.cross(b).dot(c)
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        [v.x, v.y, v.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

/// An ordered pair of orthonormal unit vectors (a point of the manifold of
/// such pairs once projected).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FramePair {
    pub nu1: Vec3,
    pub nu2: Vec3,
}

impl FramePair {
    pub fn new(nu1: Vec3, nu2: Vec3) -> Self {
        FramePair { nu1, nu2 }
    }

    /// Maximum deviation from the orthonormal-pair conditions.
    pub fn defect(&self) -> f64 {
        let u = (self.nu1.norm() - 1.0).abs();
        let v = (self.nu2.norm() - 1.0).abs();
        let d = self.nu1.dot(self.nu2).abs();
        u.max(v).max(d)
    }

    pub fn is_orthonormal(&self, tol: f64) -> bool {
        self.defect() <= tol
    }

    /// Third frame vector nu1 x nu2.
    pub fn mu(&self) -> Vec3 {
        self.nu1.cross(self.nu2)
    }
}

/// Gram-Schmidt re-orthonormalization: nu1 is normalized first, then nu2 is
/// orthogonalized against it. Inputs already on the manifold pass through
/// unchanged up to rounding.
///
/// The second vector gets a second orthogonalization pass: for inputs close
/// to parallel, one pass leaves a defect of order eps |nu2| / |w|, which can
/// dwarf the unit tolerance.
pub fn project_to_delta(pair: &FramePair) -> Result<FramePair, GeomError> {
    let n1 = pair.nu1.norm();
    if n1 <= TOL_UNIT {
        return Err(GeomError::DegeneratePair(TOL_UNIT));
    }
    let u1 = pair.nu1 / n1;
    let w = pair.nu2 - u1 * pair.nu2.dot(u1);
    let nw = w.norm();
    if nw <= TOL_UNIT * pair.nu2.norm().max(1.0) {
        return Err(GeomError::DegeneratePair(TOL_UNIT));
    }
    let mut u2 = w / nw;
    let drift = u2.dot(u1);
    if drift != 0.0 {
        let w2 = u2 - u1 * drift;
        u2 = w2 / w2.norm();
    }
    Ok(FramePair::new(u1, u2))
}

/// A strictly increasing sampling of a parameter interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub t0: f64,
    pub t1: f64,
    pub n_samples: usize,
    values: Vec<f64>,
}

impl Grid {
    /// Minimum number of samples for any grid.
    pub const MIN_SAMPLES: usize = 8;

    /// Uniform grid with `n` samples; endpoints are exact.
    pub fn uniform(t0: f64, t1: f64, n: usize) -> Result<Grid, GeomError> {
        if !(t0.is_finite() && t1.is_finite()) {
            return Err(GeomError::InvalidGrid("endpoints must be finite".into()));
        }
        if t1 <= t0 {
            return Err(GeomError::InvalidGrid(format!(
                "interval is degenerate: t0 = {t0}, t1 = {t1}"
            )));
        }
        if n < Self::MIN_SAMPLES {
            return Err(GeomError::InvalidGrid(format!(
                "need at least {} samples, got {n}",
                Self::MIN_SAMPLES
            )));
        }
        let h = (t1 - t0) / (n - 1) as f64;
        let mut values: Vec<f64> = (0..n).map(|i| t0 + h * i as f64).collect();
        values[0] = t0;
        values[n - 1] = t1;
        Ok(Grid {
            t0,
            t1,
            n_samples: n,
            values,
        })
    }

    /// Grid from explicit sample values; must be strictly increasing.
    pub fn from_values(values: Vec<f64>) -> Result<Grid, GeomError> {
        if values.len() < Self::MIN_SAMPLES {
            return Err(GeomError::InvalidGrid(format!(
                "need at least {} samples, got {}",
                Self::MIN_SAMPLES,
                values.len()
            )));
        }
        if values.windows(2).any(|w| !(w[1] > w[0])) || values.iter().any(|v| !v.is_finite()) {
            return Err(GeomError::InvalidGrid(
                "values must be finite and strictly increasing".into(),
            ));
        }
        Ok(Grid {
            t0: values[0],
            t1: *values.last().unwrap(),
            n_samples: values.len(),
            values,
        })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Mean spacing; equals the exact step for uniform grids.
    pub fn spacing(&self) -> f64 {
        (self.t1 - self.t0) / (self.n_samples - 1) as f64
    }

    /// True when all steps agree with the mean spacing to relative 1e-9.
    pub fn is_uniform(&self) -> bool {
        let h = self.spacing();
        self.values
            .windows(2)
            .all(|w| ((w[1] - w[0]) - h).abs() <= 1e-9 * h.abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_canonical_basis() {
        assert_eq!(Vec3::EX.cross(Vec3::EY), Vec3::EZ);
    }

    #[test]
    fn cross_self_is_zero() {
        let v = Vec3::new(1.3, -0.7, 2.2);
        assert_eq!(v.cross(v), Vec3::ZERO);
    }

    #[test]
    fn cross_cofactor_example() {
        let r = Vec3::new(1.0, 1.0, 0.0).cross(Vec3::new(0.0, 1.0, 1.0));
        assert_eq!(r, Vec3::new(1.0, -1.0, 1.0));
    }

    #[test]
    fn cross_orthogonality_residual() {
        // a.(a x b) and b.(a x b) vanish to rounding.
        let a = Vec3::new(0.3, -1.9, 2.7);
        let b = Vec3::new(-4.1, 0.2, 0.9);
        let c = a.cross(b);
        let scale = a.norm() * b.norm();
        assert!(a.dot(c).abs() < 1e-14 * scale);
        assert!(b.dot(c).abs() < 1e-14 * scale);
    }

    #[test]
    fn project_identity_on_delta() {
        let p = FramePair::new(Vec3::EX, Vec3::EY);
        let q = project_to_delta(&p).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn project_rescales() {
        let p = FramePair::new(Vec3::new(2.0, 0.0, 0.0), Vec3::new(0.0, 3.0, 0.0));
        let q = project_to_delta(&p).unwrap();
        assert_eq!(q, FramePair::new(Vec3::EX, Vec3::EY));
    }

    #[test]
    fn project_gram_schmidt() {
        let p = FramePair::new(Vec3::EX, Vec3::new(1e-13, 1.0, 0.0));
        let q = project_to_delta(&p).unwrap();
        assert!((q.nu1 - Vec3::EX).norm() < 1e-12);
        assert!((q.nu2 - Vec3::EY).norm() < 1e-12);
        assert!(q.is_orthonormal(TOL_UNIT));
    }

    #[test]
    fn project_rejects_parallel() {
        let p = FramePair::new(Vec3::EX, Vec3::new(2.0, 1e-14, 0.0));
        assert!(matches!(
            project_to_delta(&p),
            Err(GeomError::DegeneratePair(_))
        ));
    }

    #[test]
    fn project_is_idempotent() {
        let p = FramePair::new(Vec3::new(0.3, 0.4, 1.2), Vec3::new(-0.9, 0.1, 0.6));
        let once = project_to_delta(&p).unwrap();
        let twice = project_to_delta(&once).unwrap();
        assert!((once.nu1 - twice.nu1).norm() < 1e-14);
        assert!((once.nu2 - twice.nu2).norm() < 1e-14);
    }

    #[test]
    fn uniform_grid_hits_endpoints() {
        let g = Grid::uniform(0.0, 1.0, 11).unwrap();
        assert_eq!(g.values()[0], 0.0);
        assert_eq!(*g.values().last().unwrap(), 1.0);
        assert!(g.is_uniform());
    }

    #[test]
    fn grid_rejects_small_or_degenerate() {
        assert!(Grid::uniform(0.0, 1.0, 4).is_err());
        assert!(Grid::uniform(1.0, 1.0, 16).is_err());
        assert!(Grid::from_values(vec![0.0, 0.1, 0.1, 0.3, 0.4, 0.5, 0.6, 0.7]).is_err());
    }
}
