//! Fields over `R^3`, the operator `D`, and its uniform-grid
//! discretization.

mod field;
mod grid;
mod operator;

pub use field::{Matrix3C, Point, QuatField, ScalarField};
pub use grid::{Ball, GridField, GridSpec};
pub use operator::{
    apply_d, apply_d_scalar, apply_d_twice, curl, d_squared_plus_laplacian, divergence,
    gauge_identity_residual, gradient_scalar_part, leibniz_residual, vector_form_d,
};
