//! Frenet data recovered from bare point samples by local polynomial
//! stencils.
//!
//! This is the verification path for constructed mates: it never sees the
//! symbolic derivatives or the formulas it is used to check. Derivatives come
//! from 7-point stencils (6th order for the first two derivatives, 4th order
//! for the third), windows shifted near the ends.

use crate::diff::{stencil_coeffs, WINDOW};
use crate::geom::Vec3;

/// Per-sample Frenet data estimated from points alone. Samples where the
/// curve looks degenerate keep `ok = false` and a zero frame.
#[derive(Debug, Clone)]
pub struct DiscreteSample {
    pub param: f64,
    pub t: Vec3,
    pub n: Vec3,
    pub b: Vec3,
    pub kappa: f64,
    pub tau: f64,
    pub speed: f64,
    pub cross_norm: f64,
    /// Norm of the measured second derivative, for conditioning estimates.
    pub d2_norm: f64,
    pub ok: bool,
}

fn window_start(i: usize, n: usize) -> usize {
    i.saturating_sub(WINDOW / 2).min(n - WINDOW)
}

fn derivative_at(pts: &[Vec3], i: usize, m: usize, h: f64) -> Vec3 {
    let n = pts.len();
    let lo = window_start(i, n);
    let offsets: Vec<i64> = (0..WINDOW).map(|k| (lo + k) as i64).collect();
    let c = stencil_coeffs(&offsets, i as i64, m);
    let mut acc = Vec3::ZERO;
    for (k, ck) in c.iter().enumerate() {
        acc = acc + pts[lo + k] * *ck;
    }
    acc / h.powi(m as i32)
}

/// Apparatus from uniformly spaced point samples.
pub fn discrete_apparatus(params: &[f64], pts: &[Vec3]) -> Vec<DiscreteSample> {
    let n = pts.len();
    assert!(n >= WINDOW, "need at least {WINDOW} samples");
    assert_eq!(params.len(), n);
    let h = params[1] - params[0];
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let d1 = derivative_at(pts, i, 1, h);
        let d2 = derivative_at(pts, i, 2, h);
        let d3 = derivative_at(pts, i, 3, h);
        let speed = d1.norm();
        let cross = d1.cross(d2);
        let cross_norm = cross.norm();
        if speed == 0.0 || cross_norm == 0.0 {
            out.push(DiscreteSample {
                param: params[i],
                t: Vec3::ZERO,
                n: Vec3::ZERO,
                b: Vec3::ZERO,
                kappa: 0.0,
                tau: 0.0,
                speed,
                cross_norm,
                d2_norm: d2.norm(),
                ok: false,
            });
            continue;
        }
        let t = d1 / speed;
        let b = cross / cross_norm;
        let nrm = b.cross(t);
        out.push(DiscreteSample {
            param: params[i],
            t,
            n: nrm,
            b,
            kappa: cross_norm / (speed * speed * speed),
            tau: Vec3::triple(d1, d2, d3) / (cross_norm * cross_norm),
            speed,
            cross_norm,
            d2_norm: d2.norm(),
            ok: true,
        });
    }
    out
}

/// Index range untouched by the shifted end windows (fully centered
/// stencils); verification loops that quote "interior samples" use this.
pub fn interior_range(n: usize) -> std::ops::Range<usize> {
    (WINDOW / 2)..(n - WINDOW / 2)
}

/// Condition number of the measured bi-normal direction: |d1| |d2| /
/// |d1 x d2|. Near-inflection samples can only pin the frame lines to this
/// amplification of the input noise.
pub fn direction_conditioning(sample: &DiscreteSample) -> f64 {
    if sample.cross_norm == 0.0 {
        return f64::INFINITY;
    }
    (sample.speed * sample.d2_norm / sample.cross_norm).max(1.0)
}

/// Curvature and torsion recovered from the frame arrays through the
/// Frenet-system identities kappa = t' . n / speed and tau = -b' . n /
/// speed.
///
/// Near inflection-like samples the determinant route divides by the square
/// of a vanishing cross product; the frame directions stay well conditioned
/// there, so this route is the preferred oracle for mate verification.
pub fn frame_route_curvature(
    params: &[f64],
    samples: &[DiscreteSample],
) -> (Vec<f64>, Vec<f64>) {
    let h = params[1] - params[0];
    let ts: Vec<Vec3> = samples.iter().map(|s| s.t).collect();
    let bs: Vec<Vec3> = samples.iter().map(|s| s.b).collect();
    let dt = crate::diff::derivative_vec3(&ts, h);
    let db = crate::diff::derivative_vec3(&bs, h);
    let mut kappa = Vec::with_capacity(samples.len());
    let mut tau = Vec::with_capacity(samples.len());
    for (i, s) in samples.iter().enumerate() {
        kappa.push(dt[i].dot(s.n) / s.speed);
        tau.push(-db[i].dot(s.n) / s.speed);
    }
    (kappa, tau)
}
