//! Report document and CSV sample emission. Reports serialize with a fixed
//! field order and ordered maps, so identical jobs produce identical bytes.

use bertrand_lab::framed::{CurvatureSamples, FramedCurve};
use bertrand_lab::frenet::FrenetSample;
use bertrand_lab::geom::Vec3;
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize)]
pub struct ToolStamp {
    pub name: &'static str,
    pub version: &'static str,
}

impl Default for ToolStamp {
    fn default() -> Self {
        ToolStamp {
            name: "bertrand-lab",
            version: env!("CARGO_PKG_VERSION"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct GridStamp {
    pub t0: f64,
    pub t1: f64,
    pub n: usize,
}

/// A residual maximum with the parameter where it occurs.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualStat {
    pub max: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub at: Option<f64>,
}

/// The top-level report document, one per job.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: ToolStamp,
    pub mode: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridStamp>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub constants: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub residuals: BTreeMap<String, ResidualStat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// Mode-specific scalar details (extrema, counts, fitted values).
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub details: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples_csv: Option<String>,
}

impl Report {
    pub fn new(mode: &'static str) -> Report {
        Report {
            tool: ToolStamp::default(),
            mode,
            grid: None,
            kind: None,
            verdict: None,
            constants: BTreeMap::new(),
            residuals: BTreeMap::new(),
            reason: None,
            details: BTreeMap::new(),
            samples_csv: None,
        }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut bytes = serde_json::to_vec_pretty(self).expect("report serializes");
        bytes.push(b'\n');
        bytes
    }
}

/// Full-precision float formatting for CSV re-verification (17 significant
/// digits).
pub fn full(v: f64) -> String {
    format!("{v:.16e}")
}

fn vec3_cols(v: Vec3) -> String {
    format!("{},{},{}", full(v.x), full(v.y), full(v.z))
}

/// CSV of a Frenet apparatus: parameter, position, frame, curvatures.
pub fn frenet_csv(samples: &[FrenetSample]) -> String {
    let mut out = String::from(
        "t,gamma_x,gamma_y,gamma_z,t_x,t_y,t_z,n_x,n_y,n_z,b_x,b_y,b_z,kappa,tau,speed\n",
    );
    for s in samples {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            full(s.param),
            vec3_cols(s.gamma),
            vec3_cols(s.t),
            vec3_cols(s.n),
            vec3_cols(s.b),
            full(s.kappa),
            full(s.tau),
            full(s.speed),
        ));
    }
    out
}

/// CSV of a constructed regular mate: parameter, offset, point and the
/// proposition curvature.
pub fn mate_csv(params: &[f64], offset: &[f64], mate: &[Vec3], kappa: &[f64], tau: &[f64]) -> String {
    let mut out = String::from("t,lambda,mate_x,mate_y,mate_z,kappa_bar,tau_bar\n");
    for i in 0..params.len() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            full(params[i]),
            full(offset[i]),
            vec3_cols(mate[i]),
            full(kappa[i]),
            full(tau[i]),
        ));
    }
    out
}

/// CSV of a framed curve with its curvature quadruple.
pub fn framed_csv(fc: &FramedCurve, curv: &CurvatureSamples) -> String {
    let mut out = String::from(
        "t,gamma_x,gamma_y,gamma_z,nu1_x,nu1_y,nu1_z,nu2_x,nu2_y,nu2_z,mu_x,mu_y,mu_z,l,m,n,alpha\n",
    );
    for (i, &t) in fc.grid.values().iter().enumerate() {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{}\n",
            full(t),
            vec3_cols(fc.gamma[i]),
            vec3_cols(fc.nu1[i]),
            vec3_cols(fc.nu2[i]),
            vec3_cols(fc.mu[i]),
            full(curv.l[i]),
            full(curv.m[i]),
            full(curv.n[i]),
            full(curv.alpha[i]),
        ));
    }
    out
}
