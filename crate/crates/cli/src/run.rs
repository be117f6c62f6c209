//! Job execution: one job in, a report plus optional sample CSV out.

use crate::job::{Format, JobSpec, Mode, SpecError};
use crate::report::{frenet_csv, framed_csv, mate_csv, GridStamp, Report, ResidualStat};
use bertrand_lab::bertrand::{classify_bertrand_type, MateParams, MateReport, Verdict};
use bertrand_lab::bertrand_framed::{
    classify_and_construct, classify_framed, FramedMateParams, FramedMateReport,
};
use bertrand_lab::expr::CurveSpec;
use bertrand_lab::framed::{integrate_framed, recompute_curvature, singular_points, CurvatureExprs, FramedInit};
use bertrand_lab::frenet::{frenet_apparatus, nondegeneracy_report};
use bertrand_lab::geom::Grid;
use bertrand_lab::verify::{equivalence_sweep, impossibility_sweep};
use bertrand_lab::Tolerances;
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("{0}")]
    Spec(#[from] SpecError),
    #[error("curve does not compile: {0}")]
    Curve(#[from] bertrand_lab::expr::CurveSpecParseError),
    #[error("expression does not compile: {0}")]
    Expr(#[from] bertrand_lab::expr::ParseError),
    #[error(transparent)]
    Frenet(#[from] bertrand_lab::frenet::FrenetError),
    #[error(transparent)]
    Bertrand(#[from] bertrand_lab::bertrand::BertrandError),
    #[error(transparent)]
    Framed(#[from] bertrand_lab::framed::FramedError),
    #[error(transparent)]
    FramedMate(#[from] bertrand_lab::bertrand_framed::FramedMateError),
}

/// Everything a finished job hands back to the driver.
pub struct JobOutcome {
    pub report: Report,
    pub samples_csv: Option<String>,
    /// Unix-style status: 0 success, 2 infeasible verdict.
    pub exit_code: i32,
}

fn verdict_label(v: Verdict) -> &'static str {
    match v {
        Verdict::Feasible => "feasible",
        Verdict::Infeasible => "infeasible",
        Verdict::IdenticallySatisfied => "identically-satisfied",
    }
}

fn grid_stamp(grid: &Grid) -> GridStamp {
    GridStamp {
        t0: grid.t0,
        t1: grid.t1,
        n: grid.len(),
    }
}

fn compile_curve(job: &JobSpec) -> Result<CurveSpec, RunError> {
    Ok(job.curve()?.compile()?)
}

fn compile_framed(job: &JobSpec) -> Result<CurvatureExprs, RunError> {
    let src = job.framed_curvature()?;
    Ok(CurvatureExprs {
        l: src.l.parse()?,
        m: src.m.parse()?,
        n: src.n.parse()?,
        alpha: src.alpha.parse()?,
        constants: src.constants.clone(),
    })
}

fn mate_params(job: &JobSpec) -> MateParams {
    MateParams {
        a: job.constants.get("A").copied(),
        b: job.constants.get("B").copied(),
        c: job.constants.get("c").copied(),
    }
}

fn framed_mate_params(job: &JobSpec) -> FramedMateParams {
    FramedMateParams {
        lambda: job.constants.get("lambda").copied(),
        integral_anchor: job.constants.get("anchor").copied(),
    }
}

fn fill_regular_report(report: &mut Report, mate: &MateReport) {
    report.kind = Some(mate.kind.to_string());
    report.verdict = Some(verdict_label(mate.verdict).to_string());
    report.reason = Some(mate.reason.clone());
    if let Some(c) = &mate.constants {
        report.constants.insert("A".into(), c.a);
        if let Some(b) = c.b {
            report.constants.insert("B".into(), b);
        }
        report
            .residuals
            .insert("fit".into(), ResidualStat { max: c.residual, at: None });
        report
            .details
            .insert("constants_unique".into(), json!(c.unique));
    }
    if let Some(r) = mate.line_residual {
        report.residuals.insert(
            "line".into(),
            ResidualStat {
                max: r,
                at: mate.line_residual_at,
            },
        );
    }
    if let Some(r) = mate.curvature_residual {
        report.residuals.insert(
            "curvature".into(),
            ResidualStat {
                max: r,
                at: mate.curvature_residual_at,
            },
        );
    }
}

fn fill_framed_report(report: &mut Report, mate: &FramedMateReport) {
    report.kind = Some(mate.kind.to_string());
    report.verdict = Some(verdict_label(mate.verdict).to_string());
    report.reason = Some(mate.reason.clone());
    if let Some(r) = mate.condition_residual {
        report
            .residuals
            .insert("condition".into(), ResidualStat { max: r, at: None });
    }
    if let Some(r) = mate.curvature_residual {
        report.residuals.insert(
            "curvature".into(),
            ResidualStat {
                max: r,
                at: mate.curvature_residual_at,
            },
        );
    }
    if let Some(r) = mate.orthogonality_residual {
        report
            .residuals
            .insert("orthogonality".into(), ResidualStat { max: r, at: None });
    }
    if let Some(r) = mate.w_exactness {
        report
            .residuals
            .insert("w_exactness".into(), ResidualStat { max: r, at: None });
    }
    if !mate.lambda.is_empty() {
        let max_lambda = mate.lambda.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let min_lambda = mate.lambda.iter().cloned().fold(f64::INFINITY, f64::min);
        report.details.insert("lambda_min".into(), json!(min_lambda));
        report.details.insert("lambda_max".into(), json!(max_lambda));
    }
    if !mate.theta.is_empty() {
        report
            .details
            .insert("theta_start".into(), json!(mate.theta[0]));
        report
            .details
            .insert("theta_end".into(), json!(mate.theta[mate.theta.len() - 1]));
    }
}

/// Execute one job under the given tolerance policy.
pub fn run(job: &JobSpec, tol: &Tolerances, want: Format) -> Result<JobOutcome, RunError> {
    match job.mode {
        Mode::Frenet => {
            let curve = compile_curve(job)?;
            let grid = job.resolve_grid()?;
            let nondeg = nondegeneracy_report(&curve, &grid, tol)?;
            let app = frenet_apparatus(&curve, &grid, tol)?;
            let mut report = Report::new("frenet");
            report.grid = Some(grid_stamp(&grid));
            let (mut kmin, mut kmax, mut tmin, mut tmax) =
                (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
            for s in &app {
                kmin = kmin.min(s.kappa);
                kmax = kmax.max(s.kappa);
                tmin = tmin.min(s.tau);
                tmax = tmax.max(s.tau);
            }
            report.details.insert("kappa_min".into(), json!(kmin));
            report.details.insert("kappa_max".into(), json!(kmax));
            report.details.insert("tau_min".into(), json!(tmin));
            report.details.insert("tau_max".into(), json!(tmax));
            report
                .details
                .insert("min_cross_norm".into(), json!(nondeg.min_cross_norm));
            let csv = want.wants_csv().then(|| frenet_csv(&app));
            Ok(JobOutcome {
                report,
                samples_csv: csv,
                exit_code: 0,
            })
        }

        Mode::Classify | Mode::Mate => {
            let curve = compile_curve(job)?;
            let grid = job.resolve_grid()?;
            let kind = job.regular_kind()?;
            let app = frenet_apparatus(&curve, &grid, tol)?;
            let mate = classify_bertrand_type(&app, kind, &mate_params(job), tol)?;
            let mut report = Report::new(match job.mode {
                Mode::Mate => "mate",
                _ => "classify",
            });
            report.grid = Some(grid_stamp(&grid));
            fill_regular_report(&mut report, &mate);
            let exit_code = if mate.verdict == Verdict::Infeasible { 2 } else { 0 };
            let csv = (job.mode == Mode::Mate
                && want.wants_csv()
                && !mate.mate.is_empty())
            .then(|| {
                let params: Vec<f64> = app.iter().map(|s| s.param).collect();
                mate_csv(
                    &params,
                    &mate.offset,
                    &mate.mate,
                    &mate.mate_kappa,
                    &mate.mate_tau,
                )
            });
            Ok(JobOutcome {
                report,
                samples_csv: csv,
                exit_code,
            })
        }

        Mode::FramedIntegrate => {
            let curv = compile_framed(job)?;
            let grid = job.resolve_grid()?;
            let (gamma0, pair0) = job.init_frame()?;
            let integ = integrate_framed(&curv, &FramedInit { gamma0, pair0 }, &grid, tol)?;
            let rec = recompute_curvature(&integ.curve);
            let zeros = singular_points(&integ.curve, tol);
            let mut report = Report::new("framed-integrate");
            report.grid = Some(grid_stamp(&grid));
            report
                .details
                .insert("max_frame_drift".into(), json!(integ.max_drift));
            report
                .details
                .insert("singular_points".into(), json!(zeros));
            let csv = want.wants_csv().then(|| framed_csv(&integ.curve, &rec));
            Ok(JobOutcome {
                report,
                samples_csv: csv,
                exit_code: 0,
            })
        }

        Mode::FramedClassify | Mode::FramedMate => {
            let curv = compile_framed(job)?;
            let grid = job.resolve_grid()?;
            let (gamma0, pair0) = job.init_frame()?;
            let kind = job.framed_kind()?;
            let integ = integrate_framed(&curv, &FramedInit { gamma0, pair0 }, &grid, tol)?;
            let samples = curv.sample(&grid).map_err(|e| {
                RunError::Framed(bertrand_lab::framed::FramedError::Eval(e))
            })?;
            let params = framed_mate_params(job);
            let mate = if job.mode == Mode::FramedMate {
                classify_and_construct(&integ.curve, &samples, kind, &params, tol)?
            } else {
                classify_framed(&integ.curve, &samples, kind, &params, tol)?
            };
            let mut report = Report::new(match job.mode {
                Mode::FramedMate => "framed-mate",
                _ => "framed-classify",
            });
            report.grid = Some(grid_stamp(&grid));
            fill_framed_report(&mut report, &mate);
            let exit_code = if mate.verdict == Verdict::Infeasible { 2 } else { 0 };
            let csv = match (&mate.mate, &mate.mate_curvature) {
                (Some(fc), Some(mc)) if job.mode == Mode::FramedMate && want.wants_csv() => {
                    Some(framed_csv(fc, mc))
                }
                _ => None,
            };
            Ok(JobOutcome {
                report,
                samples_csv: csv,
                exit_code,
            })
        }

        Mode::Verify => {
            let seed = job.seed.unwrap_or(0);
            let count = job.count.unwrap_or(100);
            let imp = impossibility_sweep(seed, count, tol);
            let equiv = equivalence_sweep(seed.wrapping_add(1), count.min(50), tol);
            let mut report = Report::new("verify");
            report.details.insert("seed".into(), json!(seed));
            report
                .details
                .insert("impossibility_cases".into(), json!(imp.cases));
            report
                .details
                .insert("impossibility_failures".into(), json!(imp.failures));
            report
                .details
                .insert("equivalence_cases".into(), json!(equiv.cases));
            report
                .details
                .insert("equivalence_failures".into(), json!(equiv.failures));
            let ok = imp.passed() && equiv.passed();
            report.verdict = Some(if ok { "pass" } else { "fail" }.to_string());
            Ok(JobOutcome {
                report,
                samples_csv: None,
                exit_code: if ok { 0 } else { 1 },
            })
        }
    }
}
