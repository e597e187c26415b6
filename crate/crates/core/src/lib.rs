//! Orthogonal splitting of square-integrable functions on `[0, 1]` into a
//! constant and the derivative of a function vanishing at both endpoints.
//!
//! ```
//! use hsplit_core::{decompose, gauss_rule, parse, ScalarField};
//!
//! let rule = gauss_rule(64, 1).unwrap();
//! let f = ScalarField::from(parse("x^2").unwrap());
//! let d = decompose(&f, &rule, 1e-10).unwrap();
//! assert!((d.mean_part - 1.0 / 3.0).abs() < 1e-14);
//! assert!((d.fluctuation.value(1.0) - 2.0 / 3.0).abs() < 1e-14);
//! ```

pub mod decompose;
pub mod expr;
pub mod field;
pub mod quadrature;
pub mod report;
pub mod verify;

pub use decompose::{
    decompose, decompose_unchecked, green_inverse, idempotency_defects, orthogonality_defect,
    project_fluct, project_mean, psi_lift, pythagoras_defect, DecomposeError, Decomposition,
    DefectKind, DEFAULT_TOLERANCE,
};
pub use expr::{parse, Expr, ParseError, Primitive};
pub use field::{grid, FieldError, ScalarField};
pub use quadrature::{
    gauss_rule, inner_product, integrate, l2_norm, sobolev_norm, Interval, QuadratureConfig,
    QuadratureError, QuadratureRule,
};
pub use report::{ReportEntry, VerificationReport};
pub use verify::verify_reference_identities;
