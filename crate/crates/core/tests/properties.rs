//! Property-based invariants: parser totality, pretty-print round-trips,
//! symbolic-vs-numeric derivative agreement, and vector algebra identities.

use bertrand_lab::expr::Expr;
use bertrand_lab::geom::{project_to_delta, FramePair, Vec3};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn finite(range: std::ops::Range<f64>) -> impl Strategy<Value = f64> {
    range.prop_filter("finite", |x| x.is_finite())
}

fn vec3() -> impl Strategy<Value = Vec3> {
    (finite(-10.0..10.0), finite(-10.0..10.0), finite(-10.0..10.0))
        .prop_map(|(x, y, z)| Vec3::new(x, y, z))
}

/// Random differentiable expression source (polynomials and trig
/// compositions only, so the symbolic derivative always exists).
fn differentiable_source() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        Just("t".to_string()),
        (-3i32..4).prop_map(|k| format!("{k}")),
        (1u32..4).prop_map(|k| format!("t^{k}")),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})+({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})-({b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("({a})*({b})")),
            inner.clone().prop_map(|a| format!("sin({a})")),
            inner.clone().prop_map(|a| format!("cos({a})")),
            inner.prop_map(|a| format!("exp(0.1*({a}))")),
        ]
    })
}

proptest! {
    // Every string either parses or reports a structured error; no panics.
    #[test]
    fn parser_is_total(src in ".{0,64}") {
        let _ = Expr::parse(&src);
    }

    #[test]
    fn parser_is_total_on_token_soup(
        parts in prop::collection::vec(
            prop_oneof![
                Just("sin".to_string()),
                Just("(".to_string()),
                Just(")".to_string()),
                Just("+".to_string()),
                Just("-".to_string()),
                Just("*".to_string()),
                Just("/".to_string()),
                Just("^".to_string()),
                Just("t".to_string()),
                Just("1.5".to_string()),
                Just("2e3".to_string()),
                Just(",".to_string()),
                Just("q".to_string()),
            ],
            0..24
        )
    ) {
        let src = parts.join(" ");
        let _ = Expr::parse(&src);
    }

    // Pretty-print then re-parse evaluates identically.
    #[test]
    fn print_parse_roundtrip(src in differentiable_source(), t in -1.0..1.0f64) {
        let consts = BTreeMap::new();
        if let Ok(e) = Expr::parse(&src) {
            let printed = e.to_string();
            let re = Expr::parse(&printed).expect("printed form must parse");
            match (e.eval(t, &consts), re.eval(t, &consts)) {
                (Ok(a), Ok(b)) => {
                    prop_assert!(
                        (a - b).abs() <= 1e-9 * a.abs().max(1.0),
                        "{src} -> {printed}: {a} vs {b}"
                    );
                }
                (Err(_), Err(_)) => {}
                (a, b) => prop_assert!(false, "{src} -> {printed}: {a:?} vs {b:?}"),
            }
        }
    }

    // Symbolic derivative matches central differences to O(h^2).
    #[test]
    fn derivative_matches_finite_differences(src in differentiable_source(), t in -1.0..1.0f64) {
        let consts = BTreeMap::new();
        let e = Expr::parse(&src).expect("generated source parses");
        let d = e.derivative(1).expect("generated source is differentiable");
        let h = 1e-5 * (1.0 + t.abs());
        let (fp, fm, dv) = match (
            e.eval(t + h, &consts),
            e.eval(t - h, &consts),
            d.eval(t, &consts),
        ) {
            (Ok(a), Ok(b), Ok(c)) => (a, b, c),
            // poles are legitimate; nothing to compare there
            _ => return Ok(()),
        };
        let fd = (fp - fm) / (2.0 * h);
        // O(h^2) truncation with a curvature-scale constant; skip wildly
        // oscillating third derivatives by bounding the magnitude
        if fd.abs() < 1e6 && dv.abs() < 1e6 {
            prop_assert!(
                (fd - dv).abs() <= 1e-6 * (1.0 + fd.abs().max(dv.abs())) + 1e3 * h * h,
                "{src} at t={t}: symbolic {dv} vs fd {fd}"
            );
        }
    }

    // a . (a x b) = 0 and b . (a x b) = 0 up to rounding.
    #[test]
    fn cross_product_orthogonality(a in vec3(), b in vec3()) {
        let c = a.cross(b);
        let scale = a.norm() * b.norm();
        prop_assert!(a.dot(c).abs() <= 1e-14 * scale.max(1e-300));
        prop_assert!(b.dot(c).abs() <= 1e-14 * scale.max(1e-300));
    }

    // |a x b| = |a||b| sin(angle), via the Gram identity.
    #[test]
    fn cross_norm_gram_identity(a in vec3(), b in vec3()) {
        let c = a.cross(b).norm_squared();
        let gram = a.norm_squared() * b.norm_squared() - a.dot(b) * a.dot(b);
        prop_assert!((c - gram).abs() <= 1e-11 * (1.0 + a.norm_squared() * b.norm_squared()));
    }

    // Projection onto the orthonormal-pair manifold is idempotent.
    #[test]
    fn projection_is_idempotent(a in vec3(), b in vec3()) {
        let pair = FramePair::new(a, b);
        if let Ok(once) = project_to_delta(&pair) {
            prop_assert!(once.is_orthonormal(1e-12));
            let twice = project_to_delta(&once).expect("projection of a projected pair");
            prop_assert!((once.nu1 - twice.nu1).norm() <= 1e-14);
            prop_assert!((once.nu2 - twice.nu2).norm() <= 1e-14);
        }
    }
}
