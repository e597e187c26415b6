//! The reference identity list: decompositions of elementary functions with
//! known closed forms, checked against the numerical projections.
//!
//! Every expected value here is a closed form written independently of the
//! quadrature path it is compared with.

use std::f64::consts::E;

use crate::decompose::{decompose_unchecked, idempotency_defects, psi_lift};
use crate::expr::parse;
use crate::field::{grid, ScalarField};
use crate::quadrature::{inner_product, QuadratureRule};
use crate::report::{ReportEntry, VerificationReport};

/// Grid used for pointwise comparisons of `Q f` and `ψ`.
pub const COMPARISON_POINTS: usize = 11;

type Closed = Box<dyn Fn(f64) -> f64>;

/// A reference function with the closed forms of its parts.
struct Reference {
    /// Label used inside identity names.
    label: String,
    source: String,
    location: &'static str,
    mean: f64,
    fluctuation: Closed,
    /// `(‖f‖², ‖Qf‖²)` when the norm identity belongs to the list.
    norms: Option<(f64, f64)>,
    /// Closed-form lift and its label, when part of the list.
    lift: Option<(String, Closed)>,
}

fn references() -> Vec<Reference> {
    let sin1 = 1f64.sin();
    let cos1 = 1f64.cos();
    let mut refs = vec![
        Reference {
            label: "x".into(),
            source: "x".into(),
            location: "decomposition of x",
            mean: 0.5,
            fluctuation: Box::new(|x| x - 0.5),
            norms: Some((1.0 / 3.0, 1.0 / 12.0)),
            lift: Some(("x^2/2 - x/2".into(), Box::new(|x| x * x / 2.0 - x / 2.0))),
        },
        Reference {
            label: "x^2".into(),
            source: "x^2".into(),
            location: "decomposition of x^2",
            mean: 1.0 / 3.0,
            fluctuation: Box::new(|x| x * x - 1.0 / 3.0),
            norms: Some((1.0 / 5.0, 1.0 / 5.0 - 1.0 / 9.0)),
            lift: Some((
                "x^3/3 - x/3".into(),
                Box::new(|x| x.powi(3) / 3.0 - x / 3.0),
            )),
        },
    ];
    for n in 3..=10 {
        let m = 1.0 / (n as f64 + 1.0);
        refs.push(Reference {
            label: format!("x^{n}"),
            source: format!("x^{n}"),
            location: "decomposition of monomials",
            mean: m,
            fluctuation: Box::new(move |x| x.powi(n) - m),
            norms: Some((1.0 / (2 * n + 1) as f64, 1.0 / (2 * n + 1) as f64 - m * m)),
            lift: None,
        });
    }
    let exp_sq = (E * E - 1.0) / 2.0;
    refs.push(Reference {
        label: "e^x".into(),
        source: "exp(x)".into(),
        location: "decomposition of the exponential",
        mean: E - 1.0,
        fluctuation: Box::new(|x| x.exp() + 1.0 - E),
        norms: Some((exp_sq, exp_sq - (E - 1.0).powi(2))),
        lift: None,
    });
    let cos_sq = 0.5 + 2f64.sin() / 4.0;
    refs.push(Reference {
        label: "cos x".into(),
        source: "cos(x)".into(),
        location: "decomposition of the cosine",
        mean: sin1,
        fluctuation: Box::new(move |x| x.cos() - sin1),
        norms: Some((cos_sq, cos_sq - sin1 * sin1)),
        lift: Some((
            "sin x - (sin 1)x".into(),
            Box::new(move |x| x.sin() - sin1 * x),
        )),
    });
    refs.push(Reference {
        label: "sin x".into(),
        source: "sin(x)".into(),
        location: "decomposition of the sine",
        mean: 1.0 - cos1,
        fluctuation: Box::new(move |x| x.sin() + cos1 - 1.0),
        norms: None,
        lift: None,
    });
    refs
}

fn sup_diff(field: &ScalarField, closed: &dyn Fn(f64) -> f64) -> f64 {
    grid(COMPARISON_POINTS)
        .into_iter()
        .map(|x| (field.value(x) - closed(x)).abs())
        .fold(0.0, |acc, d| if d.is_nan() { f64::NAN } else { acc.max(d) })
}

/// Run the whole identity list with `rule`, judging every defect against `tol`.
pub fn verify_reference_identities(rule: &QuadratureRule, tol: f64) -> VerificationReport {
    let mut entries = Vec::new();
    let mut push = |identity: String, location: &str, defect: f64| {
        entries.push(ReportEntry::new(identity, location, defect, tol));
    };

    for r in references() {
        let f: ScalarField = parse(&r.source).expect("reference source parses").into();
        let d = decompose_unchecked(&f, rule);
        let l = &r.label;

        push(
            format!("P({l}) = closed form"),
            r.location,
            d.mean_part - r.mean,
        );
        push(
            format!("Q({l}) = closed form"),
            r.location,
            sup_diff(&d.fluctuation, &r.fluctuation),
        );
        if let Some((psi_label, psi)) = &r.lift {
            let lift = psi_lift(&f, rule);
            push(
                format!("psi({l}) = {psi_label}"),
                r.location,
                sup_diff(&lift, psi),
            );
        }
        push(
            format!("psi({l}) vanishes at 0 and 1"),
            "traceless lift",
            d.trace_defect,
        );
        if let Some((norm_sq, fluct_sq)) = r.norms {
            push(
                format!("||{l}||^2 = ||P({l})||^2 + ||Q({l})||^2"),
                "Pythagorean identity",
                d.pythagoras_defect,
            );
            let measured_norm = inner_product(&f, &f, rule);
            let measured_fluct = inner_product(&d.fluctuation, &d.fluctuation, rule);
            let component = (measured_norm - norm_sq)
                .abs()
                .max((d.mean_part * d.mean_part - r.mean * r.mean).abs())
                .max((measured_fluct - fluct_sq).abs());
            push(
                format!("||{l}||^2, ||P({l})||^2, ||Q({l})||^2 = closed forms"),
                "Pythagorean identity",
                component,
            );
        }
        push(
            format!("<P({l}), Q({l})> = 0"),
            "orthogonality of P and Q",
            d.orthogonality_defect,
        );
        let (pq, pp, qq) = idempotency_defects(&f, rule);
        push(format!("P(Q({l})) = 0"), "idempotency of P and Q", pq);
        push(format!("P(P({l})) = P({l})"), "idempotency of P and Q", pp);
        push(format!("Q(Q({l})) = Q({l})"), "idempotency of P and Q", qq);
    }

    // the monomial family stated as one formula
    for n in 1..=10 {
        let f = ScalarField::polynomial(
            (0..=n)
                .map(|k| if k == n { 1.0 } else { 0.0 })
                .collect::<Vec<_>>(),
        );
        let mean = crate::decompose::project_mean(&f, rule);
        push(
            format!("P(x^{n}) = 1/{}", n + 1),
            "decomposition of monomials",
            mean - 1.0 / (n as f64 + 1.0),
        );
    }

    VerificationReport::new(rule.config(), entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::gauss_rule;

    #[test]
    fn passes_at_default_order() {
        let r = verify_reference_identities(&gauss_rule(64, 1).unwrap(), 1e-10);
        let failed: Vec<_> = r.failures().map(|e| (&e.identity, e.defect)).collect();
        assert!(r.overall_passed, "{failed:?}");
        assert!(r.entries.len() >= 25);
        let mut names: Vec<_> = r.entries.iter().map(|e| &e.identity).collect();
        names.dedup();
        assert_eq!(names.len(), r.entries.len(), "identity names are unique");
    }

    #[test]
    fn below_floating_point_floor_fails() {
        let r = verify_reference_identities(&gauss_rule(64, 1).unwrap(), 1e-18);
        assert!(!r.overall_passed);
    }

    #[test]
    fn two_point_rule_misses_high_monomials() {
        let r = verify_reference_identities(&gauss_rule(2, 1).unwrap(), 1e-9);
        let entry = r
            .entries
            .iter()
            .find(|e| e.identity == "P(x^10) = 1/11")
            .unwrap();
        assert!(!entry.passed);
        let entry = r
            .entries
            .iter()
            .find(|e| e.identity == "P(x^3) = 1/4")
            .unwrap();
        assert!(entry.passed, "degree 3 is within the exactness of 2 points");
    }
}
