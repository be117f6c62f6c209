//! Tolerance policy shared by the classifiers and verifiers.
//!
//! Every threshold is expressed relative to a problem scale and multiplied by
//! a single global factor, so one knob (`--tol` / `BERTRAND_LAB_TOL`) widens
//! or tightens the whole battery coherently.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Tolerances {
    /// Global multiplier applied to every derived threshold.
    pub scale: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { scale: 1.0 }
    }
}

impl Tolerances {
    pub fn with_scale(scale: f64) -> Self {
        Tolerances { scale }
    }

    /// Regularity threshold on |gamma'|: 1e-9 times the speed scale.
    pub fn regularity(&self, speed_scale: f64) -> f64 {
        self.scale * 1e-9 * speed_scale
    }

    /// Non-degeneracy threshold on |gamma' x gamma''|: 1e-9 times speed^2.
    pub fn degeneracy(&self, speed_scale: f64) -> f64 {
        self.scale * 1e-9 * speed_scale * speed_scale
    }

    /// Least-squares fit acceptance: 1e-6 * sqrt(n).
    pub fn fit(&self, n_samples: usize) -> f64 {
        self.scale * 1e-6 * (n_samples as f64).sqrt()
    }

    /// Identically-zero test for a curvature-like function against its
    /// natural scale: max|f| < 1e-7 * scale.
    pub fn zero_function(&self, fn_scale: f64) -> f64 {
        self.scale * 1e-7 * fn_scale.max(f64::MIN_POSITIVE)
    }

    /// Pointwise non-vanishing threshold for products such as
    /// tau (B kappa - A tau), relative to the squared curvature scale.
    pub fn nonvanishing(&self, fn_scale: f64) -> f64 {
        self.scale * 1e-9 * fn_scale * fn_scale
    }

    /// Line-coincidence tolerance for constructed mates.
    pub fn line(&self) -> f64 {
        self.scale * 1e-5
    }

    /// "Not identically zero" surrogate: max|f| > 1e-9 * scale.
    pub fn not_identically_zero(&self, fn_scale: f64) -> f64 {
        self.scale * 1e-9 * fn_scale.max(f64::MIN_POSITIVE)
    }

    /// Orthonormality acceptance for sampled frames.
    pub fn frame(&self) -> f64 {
        self.scale * 1e-8
    }
}
