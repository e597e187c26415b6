//! Real-valued fields on `[0, 1]`.
//!
//! A [`ScalarField`] is a small algebra of evaluatable functions: parsed
//! expressions, polynomials by coefficient, constants, numeric
//! antiderivatives `F(x) = ∫₀ˣ h`, Dirichlet Green's potentials
//! `u(x) = ∫₀¹ G(x,t) h(t) dt`, and finite linear combinations. Every
//! variant has a derivative inside the algebra, so derivatives never fail.

use std::sync::Arc;

use thiserror::Error;

use crate::expr::Expr;
use crate::quadrature::{Interval, QuadratureRule};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FieldError {
    #[error("evaluation point {0} lies outside [0, 1]")]
    OutOfDomain(f64),
}

#[derive(Debug, Clone)]
pub enum ScalarField {
    Expr(Arc<Expr>),
    /// Coefficients in ascending degree.
    Polynomial(Arc<[f64]>),
    Constant(f64),
    /// `F(x) = ∫₀ˣ integrand(t) dt`, integrated with `rule` mapped to `[0, x]`.
    Antiderivative {
        integrand: Arc<ScalarField>,
        rule: QuadratureRule,
    },
    /// `u(x) = ∫₀¹ G(x,t) source(t) dt` with `G(x,t) = min(x,t)(max(x,t) − 1)`,
    /// integrated separately over `[0, x]` and `[x, 1]`.
    GreenPotential {
        source: Arc<ScalarField>,
        rule: QuadratureRule,
    },
    LinearCombination(Arc<[(f64, ScalarField)]>),
}

impl From<Expr> for ScalarField {
    fn from(e: Expr) -> Self {
        ScalarField::Expr(Arc::new(e))
    }
}

impl From<f64> for ScalarField {
    fn from(c: f64) -> Self {
        ScalarField::Constant(c)
    }
}

impl ScalarField {
    pub fn constant(c: f64) -> Self {
        ScalarField::Constant(c)
    }

    pub fn zero() -> Self {
        ScalarField::Constant(0.0)
    }

    /// The identity function `x`.
    pub fn identity() -> Self {
        ScalarField::Expr(Arc::new(Expr::Variable))
    }

    pub fn polynomial(coefficients: impl Into<Vec<f64>>) -> Self {
        ScalarField::Polynomial(coefficients.into().into())
    }

    pub fn antiderivative(integrand: ScalarField, rule: &QuadratureRule) -> Self {
        ScalarField::Antiderivative {
            integrand: Arc::new(integrand),
            rule: rule.clone(),
        }
    }

    pub fn green_potential(source: ScalarField, rule: &QuadratureRule) -> Self {
        ScalarField::GreenPotential {
            source: Arc::new(source),
            rule: rule.clone(),
        }
    }

    pub fn linear_combination(terms: impl IntoIterator<Item = (f64, ScalarField)>) -> Self {
        ScalarField::LinearCombination(terms.into_iter().collect::<Vec<_>>().into())
    }

    /// `self − other`.
    pub fn minus(&self, other: &ScalarField) -> Self {
        Self::linear_combination([(1.0, self.clone()), (-1.0, other.clone())])
    }

    /// `a·self`.
    pub fn scaled(&self, a: f64) -> Self {
        Self::linear_combination([(a, self.clone())])
    }

    /// Value at `x ∈ [0, 1]`.
    pub fn evaluate(&self, x: f64) -> Result<f64, FieldError> {
        if !Interval::contains(x) {
            return Err(FieldError::OutOfDomain(x));
        }
        Ok(self.value(x))
    }

    /// Value without the domain check. Expression and polynomial fields
    /// extend smoothly past the endpoints; quadrature-backed fields do not
    /// promise anything there.
    pub fn value(&self, x: f64) -> f64 {
        match self {
            ScalarField::Expr(e) => e.eval(x),
            ScalarField::Polynomial(c) => horner(c, x),
            ScalarField::Constant(c) => *c,
            ScalarField::Antiderivative { integrand, rule } => match **integrand {
                // closed form; keeps constants exactly inside the mean space
                ScalarField::Constant(c) => c * x,
                _ => rule.integrate_over(0.0, x, |t| integrand.value(t)),
            },
            ScalarField::GreenPotential { source, rule } => {
                let left = rule.integrate_over(0.0, x, |t| t * source.value(t));
                let right = rule.integrate_over(x, 1.0, |t| (t - 1.0) * source.value(t));
                (x - 1.0) * left + x * right
            }
            ScalarField::LinearCombination(terms) => {
                terms.iter().map(|(a, f)| a * f.value(x)).sum()
            }
        }
    }

    pub fn derivative(&self) -> ScalarField {
        match self {
            ScalarField::Expr(e) => ScalarField::Expr(Arc::new(e.differentiate())),
            ScalarField::Polynomial(c) => {
                if c.len() <= 1 {
                    return ScalarField::zero();
                }
                let d: Vec<f64> = c
                    .iter()
                    .enumerate()
                    .skip(1)
                    .map(|(k, a)| k as f64 * a)
                    .collect();
                ScalarField::Polynomial(d.into())
            }
            ScalarField::Constant(_) => ScalarField::zero(),
            ScalarField::Antiderivative { integrand, .. } => (**integrand).clone(),
            ScalarField::GreenPotential { source, rule } => {
                // u'(x) = ∫₀ˣ t h + ∫ₓ¹ (t − 1) h = H(x) + ∫₀¹ (t − 1) h
                let offset = rule.integrate_fn(|t| (t - 1.0) * source.value(t));
                ScalarField::linear_combination([
                    (1.0, ScalarField::antiderivative((**source).clone(), rule)),
                    (offset, ScalarField::constant(1.0)),
                ])
            }
            ScalarField::LinearCombination(terms) => {
                ScalarField::linear_combination(terms.iter().map(|(a, f)| (*a, f.derivative())))
            }
        }
    }

    /// `(f(0), f(1))`.
    pub fn boundary_trace(&self) -> (f64, f64) {
        (self.value(Interval::LOWER), self.value(Interval::UPPER))
    }

    /// Values at `points` equispaced nodes covering `[0, 1]`, endpoints included.
    pub fn sample(&self, points: usize) -> Vec<(f64, f64)> {
        grid(points)
            .into_iter()
            .map(|x| (x, self.value(x)))
            .collect()
    }
}

/// `points` equispaced abscissae from 0 to 1 inclusive. A single point is `0`.
pub fn grid(points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![0.0],
        n => (0..n).map(|i| i as f64 / (n - 1) as f64).collect(),
    }
}

fn horner(coefficients: &[f64], x: f64) -> f64 {
    coefficients.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}
