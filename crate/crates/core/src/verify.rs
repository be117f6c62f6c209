//! Seeded randomized verification batteries: the impossibility sweep over
//! random curves and the framed equivalence-theorem sweep over random
//! curvature quadruples.

use crate::bertrand::{classify_bertrand_type, FrameAxis, MateParams, PairKind, Verdict};
use crate::bertrand_framed::{classify_framed, FramedAxis, FramedMateParams, FramedPairKind};
use crate::expr::CurveSpec;
use crate::framed::{integrate_framed, CurvatureExprs, FramedInit};
use crate::frenet::{frenet_apparatus, nondegeneracy_report};
use crate::geom::{FramePair, Grid, Vec3};
use crate::tol::Tolerances;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Outcome of one randomized battery.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepOutcome {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl SweepOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A random non-degenerate curve written in the expression DSL, with the
/// source strings kept for reporting.
pub struct RandomCurve {
    pub spec: CurveSpec,
    pub sources: [String; 3],
}

fn random_component(rng: &mut ChaCha8Rng) -> String {
    let a = rng.random_range(-1.5..1.5);
    let b = rng.random_range(-1.5..1.5);
    let c = rng.random_range(-0.5..0.5);
    let w1: i32 = rng.random_range(1..4);
    let w2: i32 = rng.random_range(1..4);
    format!("{a:.4}*cos({w1}*t)+{b:.4}*sin({w2}*t)+{c:.4}*t")
}

/// Draw DSL curves until one passes the non-degeneracy scan.
pub fn random_nondegenerate_curve(
    rng: &mut ChaCha8Rng,
    grid: &Grid,
    tol: &Tolerances,
) -> Option<RandomCurve> {
    for _ in 0..50 {
        let sources = [
            random_component(rng),
            random_component(rng),
            random_component(rng),
        ];
        let spec = CurveSpec::from_strs(
            &sources[0],
            &sources[1],
            &sources[2],
            grid.t0,
            grid.t1,
            BTreeMap::new(),
        )
        .expect("generated source always parses");
        if let Ok(report) = nondegeneracy_report(&spec, grid, tol) {
            // demand clear margin so the apparatus is well conditioned
            if report.ok && report.min_cross_norm > 1e-3 {
                return Some(RandomCurve { spec, sources });
            }
        }
    }
    None
}

/// The impossibility sweep: for random non-degenerate curves, the pairings
/// (t, t-bar), (t, b-bar) and (b, t-bar) must always come back infeasible.
pub fn impossibility_sweep(seed: u64, cases: usize, tol: &Tolerances) -> SweepOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = Grid::uniform(0.0, 2.0, 64).expect("static grid");
    let kinds = [
        PairKind::new(FrameAxis::T, FrameAxis::T),
        PairKind::new(FrameAxis::T, FrameAxis::B),
        PairKind::new(FrameAxis::B, FrameAxis::T),
    ];
    let mut failures = Vec::new();
    let mut done = 0;
    while done < cases {
        let Some(curve) = random_nondegenerate_curve(&mut rng, &grid, tol) else {
            failures.push("could not draw a non-degenerate curve".to_string());
            break;
        };
        let app = match frenet_apparatus(&curve.spec, &grid, tol) {
            Ok(app) => app,
            Err(_) => continue,
        };
        for kind in kinds {
            match classify_bertrand_type(&app, kind, &MateParams::default(), tol) {
                Ok(report) if report.verdict == Verdict::Infeasible => {}
                Ok(report) => failures.push(format!(
                    "case {done}: kind {kind} returned {:?} on x={} y={} z={}",
                    report.verdict, curve.sources[0], curve.sources[1], curve.sources[2]
                )),
                Err(e) => failures.push(format!("case {done}: kind {kind} errored: {e}")),
            }
        }
        done += 1;
    }
    SweepOutcome {
        name: "impossibility".to_string(),
        cases: done,
        failures,
    }
}

fn random_curvature_exprs(rng: &mut ChaCha8Rng) -> CurvatureExprs {
    let mut component = |allow_const: bool| -> String {
        let a = rng.random_range(-1.0..1.0);
        let b = rng.random_range(-1.0..1.0);
        let c = if allow_const {
            rng.random_range(-0.5..0.5)
        } else {
            0.0
        };
        let w: i32 = rng.random_range(1..3);
        format!("{c:.4}+{a:.4}*cos({w}*t)+{b:.4}*sin(t)")
    };
    CurvatureExprs {
        l: crate::Expr::parse(&component(true)).expect("generated source parses"),
        m: crate::Expr::parse(&component(true)).expect("generated source parses"),
        n: crate::Expr::parse(&component(true)).expect("generated source parses"),
        alpha: crate::Expr::parse(&component(true)).expect("generated source parses"),
        constants: BTreeMap::new(),
    }
}

/// The equivalence sweep: classification verdicts must agree across the
/// theorem-equivalent pairings (mu, nu2-bar) = (mu, nu1-bar),
/// (nu2, nu2-bar) = (nu2, nu1-bar) and (nu1, nu2-bar) = (nu1, nu1-bar).
pub fn equivalence_sweep(seed: u64, cases: usize, tol: &Tolerances) -> SweepOutcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = Grid::uniform(0.0, 2.0 * std::f64::consts::PI, 128).expect("static grid");
    let init = FramedInit {
        gamma0: Vec3::ZERO,
        pair0: FramePair::new(Vec3::EX, Vec3::EY),
    };
    let pairs = [
        (
            FramedPairKind::new(FramedAxis::Mu, FramedAxis::Nu2),
            FramedPairKind::new(FramedAxis::Mu, FramedAxis::Nu1),
        ),
        (
            FramedPairKind::new(FramedAxis::Nu2, FramedAxis::Nu2),
            FramedPairKind::new(FramedAxis::Nu2, FramedAxis::Nu1),
        ),
        (
            FramedPairKind::new(FramedAxis::Nu1, FramedAxis::Nu2),
            FramedPairKind::new(FramedAxis::Nu1, FramedAxis::Nu1),
        ),
    ];
    let mut failures = Vec::new();
    for case in 0..cases {
        let curv = random_curvature_exprs(&mut rng);
        let integ = match integrate_framed(&curv, &init, &grid, tol) {
            Ok(i) => i,
            Err(e) => {
                failures.push(format!("case {case}: integration failed: {e}"));
                continue;
            }
        };
        let samples = match curv.sample(&grid) {
            Ok(s) => s,
            Err(e) => {
                failures.push(format!("case {case}: sampling failed: {e}"));
                continue;
            }
        };
        for (ka, kb) in pairs {
            let va = classify_framed(&integ.curve, &samples, ka, &FramedMateParams::default(), tol)
                .map(|r| r.verdict);
            let vb = classify_framed(&integ.curve, &samples, kb, &FramedMateParams::default(), tol)
                .map(|r| r.verdict);
            match (va, vb) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(a), Ok(b)) => {
                    failures.push(format!("case {case}: {ka} = {a:?} but {kb} = {b:?}"))
                }
                (a, b) => failures.push(format!(
                    "case {case}: classification errored: {ka} -> {:?}, {kb} -> {:?}",
                    a.err().map(|e| e.to_string()),
                    b.err().map(|e| e.to_string())
                )),
            }
        }
    }
    SweepOutcome {
        name: "equivalence".to_string(),
        cases,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn impossibility_sweep_small() {
        let out = impossibility_sweep(7, 5, &Tolerances::default());
        assert_eq!(out.cases, 5);
        assert!(out.passed(), "{:?}", out.failures);
    }

    #[test]
    fn equivalence_sweep_small() {
        let out = equivalence_sweep(11, 3, &Tolerances::default());
        assert!(out.passed(), "{:?}", out.failures);
    }

    #[test]
    fn random_curves_are_deterministic_per_seed() {
        let grid = Grid::uniform(0.0, 2.0, 64).unwrap();
        let tol = Tolerances::default();
        let mut r1 = ChaCha8Rng::seed_from_u64(42);
        let mut r2 = ChaCha8Rng::seed_from_u64(42);
        let a = random_nondegenerate_curve(&mut r1, &grid, &tol).unwrap();
        let b = random_nondegenerate_curve(&mut r2, &grid, &tol).unwrap();
        assert_eq!(a.sources, b.sources);
    }
}
