//! Finite-difference stencils and cumulative quadrature on uniform sample
//! arrays.
//!
//! First derivatives come from 7-point stencils (6th order, windows shifted
//! near the ends) so endpoint accuracy comfortably exceeds the RK4
//! integrators these derivatives are checked against.

use crate::geom::Vec3;

pub(crate) const WINDOW: usize = 7;

/// Stencil coefficients (in units of h^-m) for the m-th derivative at
/// relative offset `at` inside a window at the given integer offsets.
///
/// Solves the moment system sum_k c_k (o_k - at)^j = m! [j = m].
pub(crate) fn stencil_coeffs(offsets: &[i64], at: i64, m: usize) -> Vec<f64> {
    let p = offsets.len();
    let mut a = vec![vec![0.0; p + 1]; p];
    for (j, row) in a.iter_mut().enumerate() {
        for (k, o) in offsets.iter().enumerate() {
            row[k] = ((o - at) as f64).powi(j as i32);
        }
        row[p] = if j == m {
            (1..=m).product::<usize>() as f64
        } else {
            0.0
        };
    }
    // Gauss-Jordan with partial pivoting
    for col in 0..p {
        let piv = (col..p)
            .max_by(|&r1, &r2| a[r1][col].abs().partial_cmp(&a[r2][col].abs()).unwrap())
            .unwrap();
        a.swap(col, piv);
        let d = a[col][col];
        for j in col..=p {
            a[col][j] /= d;
        }
        for row in 0..p {
            if row != col {
                let f = a[row][col];
                if f != 0.0 {
                    for j in col..=p {
                        a[row][j] -= f * a[col][j];
                    }
                }
            }
        }
    }
    (0..p).map(|k| a[k][p]).collect()
}

fn apply_first<T, F>(values: &[T], h: f64, read: F) -> Vec<f64>
where
    F: Fn(&T) -> f64,
{
    let n = values.len();
    assert!(n >= WINDOW, "need at least {WINDOW} samples");
    let offsets: Vec<i64> = (0..WINDOW as i64).collect();
    // coefficients keyed by the evaluation position inside the window
    let coeffs: Vec<Vec<f64>> = (0..WINDOW)
        .map(|at| stencil_coeffs(&offsets, at as i64, 1))
        .collect();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(WINDOW / 2).min(n - WINDOW);
            let c = &coeffs[i - lo];
            c.iter()
                .enumerate()
                .map(|(k, ck)| ck * read(&values[lo + k]))
                .sum::<f64>()
                / h
        })
        .collect()
}

/// First derivative of a scalar sample array on a uniform grid of spacing
/// `h`.
pub fn derivative(values: &[f64], h: f64) -> Vec<f64> {
    apply_first(values, h, |v| *v)
}

/// First derivative of a `Vec3` sample array, componentwise.
pub fn derivative_vec3(values: &[Vec3], h: f64) -> Vec<Vec3> {
    let x = apply_first(values, h, |v| v.x);
    let y = apply_first(values, h, |v| v.y);
    let z = apply_first(values, h, |v| v.z);
    x.into_iter()
        .zip(y)
        .zip(z)
        .map(|((x, y), z)| Vec3::new(x, y, z))
        .collect()
}

/// Third derivative of a scalar sample array (7-point stencils, 4th order).
fn third_derivative(values: &[f64], h: f64) -> Vec<f64> {
    let n = values.len();
    assert!(n >= WINDOW, "need at least {WINDOW} samples");
    let offsets: Vec<i64> = (0..WINDOW as i64).collect();
    let coeffs: Vec<Vec<f64>> = (0..WINDOW)
        .map(|at| stencil_coeffs(&offsets, at as i64, 3))
        .collect();
    let h3 = h * h * h;
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(WINDOW / 2).min(n - WINDOW);
            let c = &coeffs[i - lo];
            c.iter()
                .enumerate()
                .map(|(k, ck)| ck * values[lo + k])
                .sum::<f64>()
                / h3
        })
        .collect()
}

/// Cumulative integral anchored at the first sample.
///
/// Per-interval trapezoid with the first two Euler-Maclaurin
/// endpoint-derivative corrections (h^2/12 and h^4/720), using the stencil
/// derivatives above; the result is accurate to roughly O(h^6).
pub fn cumulative_integral(values: &[f64], h: f64) -> Vec<f64> {
    let d1 = derivative(values, h);
    let d3 = third_derivative(values, h);
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    out.push(0.0);
    for i in 1..values.len() {
        acc += 0.5 * h * (values[i - 1] + values[i])
            - h * h / 12.0 * (d1[i] - d1[i - 1])
            + h.powi(4) / 720.0 * (d3[i] - d3[i - 1]);
        out.push(acc);
    }
    out
}

/// Locations where a sampled function crosses or touches zero.
///
/// Sign changes between neighbours are refined on a local cubic interpolant
/// by bisection; samples with |f| below `touch_tol` and no sign change count
/// as tangential zeros at the sample location. Roots closer than half a step
/// are merged.
pub fn sampled_zeros(params: &[f64], values: &[f64], touch_tol: f64) -> Vec<f64> {
    let n = values.len();
    let h = if n > 1 { params[1] - params[0] } else { 1.0 };
    let mut roots: Vec<f64> = Vec::new();
    let push = |t: f64, roots: &mut Vec<f64>| {
        if roots.iter().all(|r| (r - t).abs() > 0.5 * h) {
            roots.push(t);
        }
    };
    for i in 0..n - 1 {
        let (a, b) = (values[i], values[i + 1]);
        if a == 0.0 {
            push(params[i], &mut roots);
        } else if a * b < 0.0 {
            let t = refine_root(params, values, i);
            push(t, &mut roots);
        }
    }
    if *values.last().unwrap() == 0.0 {
        push(*params.last().unwrap(), &mut roots);
    }
    // tangential zeros: local minima of |f| under the touch tolerance, away
    // from any sign change (those are handled above)
    for i in 0..n {
        let crossing_left = i > 0 && values[i - 1] * values[i] < 0.0;
        let crossing_right = i + 1 < n && values[i] * values[i + 1] < 0.0;
        if values[i].abs() <= touch_tol && !crossing_left && !crossing_right {
            let left = i == 0 || values[i - 1].abs() >= values[i].abs();
            let right = i + 1 == n || values[i + 1].abs() >= values[i].abs();
            if left && right {
                push(params[i], &mut roots);
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}

/// Bisection for the sign change in `[params[i], params[i+1]]` on a cubic
/// through the four nearest samples.
fn refine_root(params: &[f64], values: &[f64], i: usize) -> f64 {
    let n = values.len();
    let lo = i.saturating_sub(1).min(n - 4);
    let ts = &params[lo..lo + 4];
    let fs = &values[lo..lo + 4];
    let eval = |t: f64| -> f64 {
        // Lagrange cubic
        let mut acc = 0.0;
        for j in 0..4 {
            let mut l = fs[j];
            for k in 0..4 {
                if k != j {
                    l *= (t - ts[k]) / (ts[j] - ts[k]);
                }
            }
            acc += l;
        }
        acc
    };
    let (mut a, mut b) = (params[i], params[i + 1]);
    let (mut fa, fb) = (eval(a), eval(b));
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    if fa * fb > 0.0 {
        // interpolant lost the crossing; fall back to the secant on samples
        let (va, vb) = (values[i], values[i + 1]);
        return params[i] + (params[i + 1] - params[i]) * va / (va - vb);
    }
    for _ in 0..80 {
        let m = 0.5 * (a + b);
        let fm = eval(m);
        if fm == 0.0 {
            return m;
        }
        if fa * fm < 0.0 {
            b = m;
        } else {
            a = m;
            fa = fm;
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> (Vec<f64>, Vec<f64>, f64) {
        let h = (b - a) / (n - 1) as f64;
        let ts: Vec<f64> = (0..n).map(|i| a + h * i as f64).collect();
        let vs: Vec<f64> = ts.iter().map(|&t| f(t)).collect();
        (ts, vs, h)
    }

    #[test]
    fn derivative_matches_cosine_everywhere() {
        let (ts, vs, h) = sample(f64::sin, 0.0, 3.0, 301);
        let d = derivative(&vs, h);
        for (t, dv) in ts.iter().zip(&d) {
            assert!(
                (dv - t.cos()).abs() < 1e-11,
                "at t={t}: {dv} vs {}",
                t.cos()
            );
        }
    }

    #[test]
    fn derivative_exact_on_degree_six() {
        let (ts, vs, h) = sample(|t| t.powi(6) - 2.0 * t.powi(3), -1.0, 1.0, 41);
        let d = derivative(&vs, h);
        for (t, dv) in ts.iter().zip(&d) {
            let want = 6.0 * t.powi(5) - 6.0 * t * t;
            assert!((dv - want).abs() < 1e-10, "at t={t}: {dv} vs {want}");
        }
    }

    #[test]
    fn vec3_derivative_matches_componentwise() {
        let (ts, _, h) = sample(|t| t, 0.0, 2.0, 65);
        let vs: Vec<Vec3> = ts
            .iter()
            .map(|&t| Vec3::new(t.sin(), t.cos(), t * t))
            .collect();
        let d = derivative_vec3(&vs, h);
        for (t, dv) in ts.iter().zip(&d) {
            assert!((dv.x - t.cos()).abs() < 1e-9);
            assert!((dv.y + t.sin()).abs() < 1e-9);
            assert!((dv.z - 2.0 * t).abs() < 1e-9);
        }
    }

    #[test]
    fn cumulative_integral_matches_antiderivative() {
        let (ts, vs, h) = sample(f64::cos, 0.0, 2.0, 257);
        let integral = cumulative_integral(&vs, h);
        for (t, s) in ts.iter().zip(&integral) {
            assert!((s - t.sin()).abs() < 1e-10, "at t={t}: {s} vs {}", t.sin());
        }
    }

    #[test]
    fn zeros_of_sine() {
        let (ts, vs, _) = sample(|t| (2.0 * t).sin(), 0.0, std::f64::consts::PI, 257);
        let zeros = sampled_zeros(&ts, &vs, 1e-9);
        let expected = [0.0, std::f64::consts::FRAC_PI_2, std::f64::consts::PI];
        assert_eq!(zeros.len(), expected.len(), "zeros: {zeros:?}");
        for (z, e) in zeros.iter().zip(expected) {
            assert!((z - e).abs() < 1e-8, "{z} vs {e}");
        }
    }

    #[test]
    fn tangential_zero_detected() {
        let (ts, vs, _) = sample(|t| (t - 1.0) * (t - 1.0), 0.0, 2.0, 201);
        let zeros = sampled_zeros(&ts, &vs, 1e-4);
        assert_eq!(zeros.len(), 1);
        assert!((zeros[0] - 1.0).abs() < 1e-2);
    }
}
