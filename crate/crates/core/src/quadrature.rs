//! Gauss–Legendre quadrature on the unit interval.
//!
//! Nodes of the `n`-point rule are the roots of the Legendre polynomial
//! `P_n`, found by Newton iteration from Chebyshev-like initial guesses and
//! mirrored so the rule is exactly symmetric. The reference rule on
//! `[-1, 1]` is mapped affinely onto each of `panels` equal subintervals of
//! `[0, 1]`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::ScalarField;

pub const MAX_ORDER: usize = 128;
pub const MAX_PANELS: usize = 4096;

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

/// The fixed integration domain `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interval;

impl Interval {
    pub const LOWER: f64 = 0.0;
    pub const UPPER: f64 = 1.0;

    pub fn contains(x: f64) -> bool {
        (Self::LOWER..=Self::UPPER).contains(&x)
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadratureError {
    #[error("quadrature order {0} is outside [1, {MAX_ORDER}]")]
    OrderOutOfRange(usize),
    #[error("panel count {0} is outside [1, {MAX_PANELS}]")]
    PanelsOutOfRange(usize),
    #[error("Newton iteration for Legendre root {index} of order {order} did not converge")]
    NoConvergence { order: usize, index: usize },
    #[error("malformed quadrature spec `{0}`; expected ORDER or ORDER:PANELS")]
    BadSpec(String),
}

/// Order and panel count of a composite rule, as written `ORDER[:PANELS]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub order: usize,
    pub panels: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            order: 64,
            panels: 1,
        }
    }
}

impl QuadratureConfig {
    pub fn new(order: usize, panels: usize) -> Result<Self, QuadratureError> {
        if !(1..=MAX_ORDER).contains(&order) {
            return Err(QuadratureError::OrderOutOfRange(order));
        }
        if !(1..=MAX_PANELS).contains(&panels) {
            return Err(QuadratureError::PanelsOutOfRange(panels));
        }
        Ok(Self { order, panels })
    }

    pub fn rule(&self) -> Result<QuadratureRule, QuadratureError> {
        gauss_rule(self.order, self.panels)
    }
}

impl FromStr for QuadratureConfig {
    type Err = QuadratureError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || QuadratureError::BadSpec(s.to_string());
        let s = s.trim();
        let (order, panels) = match s.split_once(':') {
            Some((o, p)) => (o.trim(), p.trim()),
            None => (s, "1"),
        };
        let order = order.parse::<usize>().map_err(|_| bad())?;
        let panels = panels.parse::<usize>().map_err(|_| bad())?;
        Self::new(order, panels)
    }
}

impl fmt::Display for QuadratureConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.order, self.panels)
    }
}

/// Composite Gauss–Legendre rule on `[0, 1]`. Cheap to clone.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Arc<[f64]>,
    weights: Arc<[f64]>,
    order: usize,
    panels: usize,
}

impl QuadratureRule {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn config(&self) -> QuadratureConfig {
        QuadratureConfig {
            order: self.order,
            panels: self.panels,
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ wᵢ f(xᵢ)` over `[0, 1]`.
    pub fn integrate_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }

    /// The same rule mapped affinely onto `[a, b]`.
    ///
    /// An empty range yields exactly zero.
    pub fn integrate_over(&self, a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
        let len = b - a;
        if len == 0.0 {
            return 0.0;
        }
        len * self.iter().map(|(t, w)| w * f(a + len * t)).sum::<f64>()
    }
}

/// Gauss–Legendre rule with `order` points per panel on `panels` equal
/// subintervals of `[0, 1]`.
pub fn gauss_rule(order: usize, panels: usize) -> Result<QuadratureRule, QuadratureError> {
    QuadratureConfig::new(order, panels)?;
    let (ref_nodes, ref_weights) = legendre_nodes_weights(order)?;

    let h = 1.0 / panels as f64;
    let mut nodes = Vec::with_capacity(order * panels);
    let mut weights = Vec::with_capacity(order * panels);
    for k in 0..panels {
        let left = k as f64 * h;
        for (t, w) in ref_nodes.iter().zip(&ref_weights) {
            nodes.push(left + 0.5 * h * (1.0 + t));
            weights.push(0.5 * h * w);
        }
    }
    Ok(QuadratureRule {
        nodes: nodes.into(),
        weights: weights.into(),
        order,
        panels,
    })
}

/// Nodes (ascending) and weights of the `n`-point rule on `[-1, 1]`.
pub fn legendre_nodes_weights(n: usize) -> Result<(Vec<f64>, Vec<f64>), QuadratureError> {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        // i-th largest root
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, dp) = legendre_with_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(QuadratureError::NoConvergence { order: n, index: i });
        }
        let (_, dp) = legendre_with_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        let upper = n - 1 - i;
        if upper == i {
            // middle root of an odd rule
            nodes[i] = 0.0;
            weights[i] = w;
        } else {
            nodes[upper] = x;
            nodes[i] = -x;
            weights[upper] = w;
            weights[i] = w;
        }
    }
    Ok((nodes, weights))
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
pub fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let k = k as f64;
        let next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
        p_prev = p;
        p = next;
    }
    let n = n as f64;
    let dp = n * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// `∫₀¹ f dx` as `Σ wᵢ f(xᵢ)`. Constants are integrated in closed form.
pub fn integrate(f: &ScalarField, rule: &QuadratureRule) -> f64 {
    match f {
        ScalarField::Constant(c) => *c,
        _ => rule.integrate_fn(|x| f.value(x)),
    }
}

/// `⟨f, g⟩ = ∫₀¹ f g dx`.
pub fn inner_product(f: &ScalarField, g: &ScalarField, rule: &QuadratureRule) -> f64 {
    match (f, g) {
        (ScalarField::Constant(a), ScalarField::Constant(b)) => a * b,
        _ => rule.integrate_fn(|x| f.value(x) * g.value(x)),
    }
}

pub fn l2_norm(f: &ScalarField, rule: &QuadratureRule) -> f64 {
    inner_product(f, f, rule).max(0.0).sqrt()
}

/// `√(‖f‖² + ‖f′‖²)`.
pub fn sobolev_norm(f: &ScalarField, rule: &QuadratureRule) -> f64 {
    let d = f.derivative();
    (inner_product(f, f, rule) + inner_product(&d, &d, rule))
        .max(0.0)
        .sqrt()
}
