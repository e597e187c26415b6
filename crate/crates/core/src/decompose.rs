//! Splitting `f ∈ L²(0,1)` into its mean and a mean-zero derivative part.
//!
//! `f = Pf + Qf` where `Pf = ∫₀¹ f` is the projection onto constants and
//! `Qf = f − Pf = ψ′` is the derivative of the traceless lift
//! `ψ(x) = F(x) − x·F(1)`, `F(x) = ∫₀ˣ f`. The lift is the unique solution
//! of `ψ″ = f′` with `ψ(0) = ψ(1) = 0`; [`green_inverse`] solves the same
//! Dirichlet problem through its Green's kernel and serves as an
//! independent check of the lift.

use thiserror::Error;

use crate::field::{grid, ScalarField};
use crate::quadrature::{inner_product, integrate, QuadratureRule};

/// Sample count used by the pointwise defects.
pub const SAMPLE_POINTS: usize = 20;

pub const DEFAULT_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DefectKind {
    Orthogonality,
    Pythagoras,
    Trace,
}

impl DefectKind {
    pub const ALL: [DefectKind; 3] = [Self::Orthogonality, Self::Pythagoras, Self::Trace];

    pub fn name(self) -> &'static str {
        match self {
            DefectKind::Orthogonality => "orthogonality",
            DefectKind::Pythagoras => "pythagoras",
            DefectKind::Trace => "trace",
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum DecomposeError {
    #[error("tolerance must be positive and finite, got {0}")]
    InvalidTolerance(f64),
    #[error("{} defect {defect:e} exceeds tolerance {tolerance:e}", kind.name())]
    DefectExceedsTolerance {
        kind: DefectKind,
        defect: f64,
        tolerance: f64,
        decomposition: Box<Decomposition>,
    },
}

/// `f = g ⊎ η` with `g` constant and `η = ψ′`, plus the measured defects.
#[derive(Debug, Clone)]
pub struct Decomposition {
    pub input: ScalarField,
    pub mean_part: f64,
    pub fluctuation: ScalarField,
    pub lift: ScalarField,
    /// `⟨Pf, Qf⟩`, signed.
    pub orthogonality_defect: f64,
    pub pythagoras_defect: f64,
    /// `max(|ψ(0)|, |ψ(1)|)`.
    pub trace_defect: f64,
}

impl Decomposition {
    pub fn defect(&self, kind: DefectKind) -> f64 {
        match kind {
            DefectKind::Orthogonality => self.orthogonality_defect.abs(),
            DefectKind::Pythagoras => self.pythagoras_defect,
            DefectKind::Trace => self.trace_defect,
        }
    }

    /// The first defect (in [`DefectKind::ALL`] order) above `tol`, if any.
    pub fn first_violation(&self, tol: f64) -> Option<(DefectKind, f64)> {
        DefectKind::ALL
            .into_iter()
            .map(|k| (k, self.defect(k)))
            .find(|&(_, d)| d.is_nan() || d > tol)
    }

    /// The mean part as a field.
    pub fn mean_field(&self) -> ScalarField {
        ScalarField::constant(self.mean_part)
    }
}

/// `Pf = ∫₀¹ f`.
pub fn project_mean(f: &ScalarField, rule: &QuadratureRule) -> f64 {
    integrate(f, rule)
}

/// `Qf = f − Pf`.
pub fn project_fluct(f: &ScalarField, rule: &QuadratureRule) -> ScalarField {
    let mean = project_mean(f, rule);
    ScalarField::linear_combination([(1.0, f.clone()), (-mean, ScalarField::constant(1.0))])
}

/// `ψ(x) = F(x) − x·F(1)` with `F` the antiderivative of `f` vanishing at 0.
pub fn psi_lift(f: &ScalarField, rule: &QuadratureRule) -> ScalarField {
    if let ScalarField::Constant(_) = f {
        return ScalarField::zero();
    }
    let antiderivative = ScalarField::antiderivative(f.clone(), rule);
    let total = antiderivative.value(1.0);
    ScalarField::linear_combination([(1.0, antiderivative), (-total, ScalarField::identity())])
}

/// Solution of `u″ = h`, `u(0) = u(1) = 0`, as a Green's potential.
pub fn green_inverse(h: &ScalarField, rule: &QuadratureRule) -> ScalarField {
    ScalarField::green_potential(h.clone(), rule)
}

/// Decompose `f` and check every defect against `tol`.
///
/// A defect above `tol` is returned as
/// [`DecomposeError::DefectExceedsTolerance`], which still carries the full
/// decomposition.
pub fn decompose(
    f: &ScalarField,
    rule: &QuadratureRule,
    tol: f64,
) -> Result<Decomposition, DecomposeError> {
    if !(tol > 0.0 && tol.is_finite()) {
        return Err(DecomposeError::InvalidTolerance(tol));
    }
    let d = decompose_unchecked(f, rule);
    match d.first_violation(tol) {
        None => Ok(d),
        Some((kind, defect)) => Err(DecomposeError::DefectExceedsTolerance {
            kind,
            defect,
            tolerance: tol,
            decomposition: Box::new(d),
        }),
    }
}

/// Decompose `f` and measure the defects without judging them.
pub fn decompose_unchecked(f: &ScalarField, rule: &QuadratureRule) -> Decomposition {
    let mean_part = project_mean(f, rule);
    let lift = psi_lift(f, rule);
    let fluctuation = lift.derivative();
    let (left, right) = lift.boundary_trace();
    let mut d = Decomposition {
        input: f.clone(),
        mean_part,
        fluctuation,
        lift,
        orthogonality_defect: 0.0,
        pythagoras_defect: 0.0,
        trace_defect: left.abs().max(right.abs()),
    };
    d.orthogonality_defect = orthogonality_defect(&d, rule);
    d.pythagoras_defect = pythagoras_defect(&d, rule);
    d
}

/// `⟨Pf, Qf⟩`.
pub fn orthogonality_defect(d: &Decomposition, rule: &QuadratureRule) -> f64 {
    inner_product(&d.mean_field(), &d.fluctuation, rule)
}

/// `|‖f‖² − (Pf)² − ‖Qf‖²|`.
pub fn pythagoras_defect(d: &Decomposition, rule: &QuadratureRule) -> f64 {
    let total = inner_product(&d.input, &d.input, rule);
    let fluct = inner_product(&d.fluctuation, &d.fluctuation, rule);
    (total - d.mean_part * d.mean_part - fluct).abs()
}

/// `(|P(Qf)|, |P(Pf) − Pf|, sup |Q(Qf) − Qf|)`, the last over
/// [`SAMPLE_POINTS`] equispaced points.
pub fn idempotency_defects(f: &ScalarField, rule: &QuadratureRule) -> (f64, f64, f64) {
    let mean = project_mean(f, rule);
    let fluct = project_fluct(f, rule);

    let pq = project_mean(&fluct, rule).abs();
    let pp = (project_mean(&ScalarField::constant(mean), rule) - mean).abs();
    let qq_field = project_fluct(&fluct, rule);
    let qq = grid(SAMPLE_POINTS)
        .into_iter()
        .map(|x| (qq_field.value(x) - fluct.value(x)).abs())
        .fold(0.0, f64::max);
    (pq, pp, qq)
}
