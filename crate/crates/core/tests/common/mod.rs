#![allow(dead_code)]

use hsplit_core::{Expr, Primitive};
use proptest::prelude::*;

/// Random expressions small enough that derivatives stay moderate on [0, 1].
pub fn arb_expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        (-2.0f64..2.0).prop_map(Expr::Constant),
        Just(Expr::Variable),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sum(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::product(a, b)),
            (inner.clone(), 0u32..4).prop_map(|(a, n)| Expr::power(a, n)),
            inner.clone().prop_map(Expr::negate),
            (
                prop_oneof![
                    Just(Primitive::Exp),
                    Just(Primitive::Sin),
                    Just(Primitive::Cos)
                ],
                inner
            )
                .prop_map(|(p, a)| Expr::apply(p, a)),
        ]
    })
}

/// Coefficients in ascending degree, each in [-1, 1].
pub fn arb_poly(max_degree: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..=max_degree + 1)
}

/// `∫₀¹ Σ cₖ xᵏ dx` in closed form.
pub fn poly_integral(c: &[f64]) -> f64 {
    c.iter()
        .enumerate()
        .map(|(k, a)| a / (k as f64 + 1.0))
        .sum()
}

/// Central difference of `f` at `x` with step `h`.
pub fn central_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    (f(x + h) - f(x - h)) / (2.0 * h)
}
