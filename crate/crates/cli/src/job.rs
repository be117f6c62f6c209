//! The JSON job format and its validation.

use bertrand_lab::bertrand::PairKind;
use bertrand_lab::bertrand_framed::FramedPairKind;
use bertrand_lab::expr::CurveSpecSource;
use bertrand_lab::geom::{FramePair, GeomError, Grid, Vec3};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("spec is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field `{field}`: {message}")]
    Field { field: &'static str, message: String },
}

impl SpecError {
    pub fn field(field: &'static str, message: impl Into<String>) -> SpecError {
        SpecError::Field {
            field,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Frenet,
    Classify,
    Mate,
    FramedIntegrate,
    FramedClassify,
    FramedMate,
    Verify,
}

impl Mode {
    pub fn label(self) -> &'static str {
        match self {
            Mode::Frenet => "frenet",
            Mode::Classify => "classify",
            Mode::Mate => "mate",
            Mode::FramedIntegrate => "framed-integrate",
            Mode::FramedClassify => "framed-classify",
            Mode::FramedMate => "framed-mate",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn wants_json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }
    pub fn wants_csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

impl std::str::FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            "both" => Ok(Format::Both),
            other => Err(format!("unknown format `{other}` (want json, csv or both)")),
        }
    }
}

/// Framed curvature source: four expressions plus shared constants.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FramedCurvatureSource {
    pub l: String,
    pub m: String,
    pub n: String,
    pub alpha: String,
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GridSource {
    #[serde(default)]
    pub t0: Option<f64>,
    #[serde(default)]
    pub t1: Option<f64>,
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputSource {
    pub path: String,
    #[serde(default)]
    pub format: Option<Format>,
}

/// One batch job: a mode plus its mode-specific inputs. Unknown fields are
/// rejected so typos surface as validation errors.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub mode: Mode,
    #[serde(default)]
    pub curve: Option<CurveSpecSource>,
    #[serde(default)]
    pub framed_curvature: Option<FramedCurvatureSource>,
    /// Initial frame for framed integration: nu1, nu2, gamma0 row-major.
    #[serde(default)]
    pub init: Option<[f64; 9]>,
    #[serde(default)]
    pub kind: Option<String>,
    /// Mode constants: A, B, c, lambda, anchor.
    #[serde(default)]
    pub constants: BTreeMap<String, f64>,
    #[serde(default)]
    pub grid: Option<GridSource>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub count: Option<usize>,
    #[serde(default)]
    pub output: Option<OutputSource>,
}

impl JobSpec {
    pub fn parse(src: &str) -> Result<JobSpec, SpecError> {
        Ok(serde_json::from_str(src)?)
    }

    pub fn curve(&self) -> Result<&CurveSpecSource, SpecError> {
        self.curve
            .as_ref()
            .ok_or_else(|| SpecError::field("curve", "required by this mode"))
    }

    pub fn framed_curvature(&self) -> Result<&FramedCurvatureSource, SpecError> {
        self.framed_curvature
            .as_ref()
            .ok_or_else(|| SpecError::field("framed_curvature", "required by this mode"))
    }

    pub fn regular_kind(&self) -> Result<PairKind, SpecError> {
        let raw = self
            .kind
            .as_ref()
            .ok_or_else(|| SpecError::field("kind", "required by this mode"))?;
        raw.parse()
            .map_err(|e: String| SpecError::field("kind", e))
    }

    pub fn framed_kind(&self) -> Result<FramedPairKind, SpecError> {
        let raw = self
            .kind
            .as_ref()
            .ok_or_else(|| SpecError::field("kind", "required by this mode"))?;
        raw.parse()
            .map_err(|e: String| SpecError::field("kind", e))
    }

    /// Resolve the grid; curve modes default the interval to the curve's.
    pub fn resolve_grid(&self) -> Result<Grid, SpecError> {
        let grid = self
            .grid
            .as_ref()
            .ok_or_else(|| SpecError::field("grid", "required by this mode"))?;
        let (t0, t1) = match (&self.curve, grid.t0, grid.t1) {
            (_, Some(t0), Some(t1)) => (t0, t1),
            (Some(curve), _, _) => (grid.t0.unwrap_or(curve.t0), grid.t1.unwrap_or(curve.t1)),
            (None, _, _) => {
                return Err(SpecError::field(
                    "grid.t0",
                    "t0 and t1 are required when no curve provides an interval",
                ))
            }
        };
        Grid::uniform(t0, t1, grid.n)
            .map_err(|e: GeomError| SpecError::field("grid", e.to_string()))
    }

    pub fn init_frame(&self) -> Result<(Vec3, FramePair), SpecError> {
        let raw = self
            .init
            .ok_or_else(|| SpecError::field("init", "required by this mode"))?;
        let nu1 = Vec3::new(raw[0], raw[1], raw[2]);
        let nu2 = Vec3::new(raw[3], raw[4], raw[5]);
        let gamma0 = Vec3::new(raw[6], raw[7], raw[8]);
        let pair = FramePair::new(nu1, nu2);
        if pair.defect() > 1e-9 {
            return Err(SpecError::field(
                "init",
                format!(
                    "nu1, nu2 must be an orthonormal pair (defect {:.3e})",
                    pair.defect()
                ),
            ));
        }
        Ok((gamma0, pair))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_classify_spec_parses() {
        let src = r#"{
            "mode": "classify",
            "curve": {"x": "cos(t)", "y": "sin(t)", "z": "t", "t0": 0.0, "t1": 6.28},
            "kind": "n-n",
            "grid": {"n": 64}
        }"#;
        let job = JobSpec::parse(src).unwrap();
        assert_eq!(job.mode, Mode::Classify);
        assert_eq!(job.regular_kind().unwrap().to_string(), "n-n");
        let grid = job.resolve_grid().unwrap();
        assert_eq!((grid.t0, grid.t1, grid.len()), (0.0, 6.28, 64));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let src = r#"{"mode": "verify", "seeed": 4}"#;
        assert!(matches!(JobSpec::parse(src), Err(SpecError::Json(_))));
    }

    #[test]
    fn missing_fields_carry_a_path() {
        let job = JobSpec::parse(r#"{"mode": "classify"}"#).unwrap();
        match job.curve() {
            Err(SpecError::Field { field, .. }) => assert_eq!(field, "curve"),
            other => panic!("expected field error, got {other:?}"),
        }
        match job.resolve_grid() {
            Err(SpecError::Field { field, .. }) => assert_eq!(field, "grid"),
            other => panic!("expected field error, got {other:?}"),
        }
    }

    #[test]
    fn framed_grid_needs_an_interval() {
        let job = JobSpec::parse(
            r#"{"mode": "framed-integrate",
                "framed_curvature": {"l": "0", "m": "0", "n": "0", "alpha": "1"},
                "init": [1,0,0, 0,1,0, 0,0,0],
                "grid": {"n": 64}}"#,
        )
        .unwrap();
        assert!(job.resolve_grid().is_err());
        let (gamma0, pair) = job.init_frame().unwrap();
        assert_eq!(gamma0, Vec3::ZERO);
        assert!(pair.is_orthonormal(1e-12));
    }

    #[test]
    fn skewed_init_frame_is_rejected() {
        let job = JobSpec::parse(
            r#"{"mode": "framed-integrate",
                "framed_curvature": {"l": "0", "m": "0", "n": "0", "alpha": "1"},
                "init": [1,0,0, 0.4,1,0, 0,0,0],
                "grid": {"t0": 0, "t1": 1, "n": 64}}"#,
        )
        .unwrap();
        assert!(matches!(
            job.init_frame(),
            Err(SpecError::Field { field: "init", .. })
        ));
    }
}
