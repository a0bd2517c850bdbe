//! Pointwise evaluators for the first-order operator
//! `D f = i1 d1 f + i2 d2 f + i3 d3 f` and its identities.
//!
//! Two evaluation routes are provided. [`apply_d`] sums quaternion products
//! `i_k (d_k f)`; [`vector_form_d`] assembles `-div f + grad f0 + rot f`
//! directly from the component gradients. They are algebraically the same
//! operator evaluated in different orders, which makes their agreement a
//! useful consistency check.

use num_complex::Complex64;

use crate::biquat::{vadd, Biquaternion, Vec3C};
use crate::error::Result;

use super::field::{Point, QuatField, ScalarField};

/// `D f` at `x`, as the sum of unit-times-partial products.
pub fn apply_d(f: &QuatField, x: Point) -> Result<Biquaternion> {
    f.ensure_regular(x)?;
    let parts = f.jacobian(x)?;
    let mut out = Biquaternion::ZERO;
    for (k, p) in parts.iter().enumerate() {
        out += Biquaternion::basis(k + 1) * *p;
    }
    Ok(out)
}

/// Divergence of the vector part at `x`.
pub fn divergence(f: &QuatField, x: Point) -> Result<Complex64> {
    f.ensure_regular(x)?;
    let mut out = Complex64::new(0.0, 0.0);
    for k in 0..3 {
        out += f.component(k + 1).grad(x)?[k];
    }
    Ok(out)
}

/// Gradient of the scalar part at `x`.
pub fn gradient_scalar_part(f: &QuatField, x: Point) -> Result<Vec3C> {
    f.ensure_regular(x)?;
    f.component(0).grad(x)
}

/// Curl of the vector part at `x`.
pub fn curl(f: &QuatField, x: Point) -> Result<Vec3C> {
    f.ensure_regular(x)?;
    let g1 = f.component(1).grad(x)?;
    let g2 = f.component(2).grad(x)?;
    let g3 = f.component(3).grad(x)?;
    Ok([g3[1] - g2[2], g1[2] - g3[0], g2[0] - g1[1]])
}

/// `D f` at `x` in vector form: `-div f + grad f0 + rot f`.
pub fn vector_form_d(f: &QuatField, x: Point) -> Result<Biquaternion> {
    let div = divergence(f, x)?;
    let grad = gradient_scalar_part(f, x)?;
    let rot = curl(f, x)?;
    Ok(Biquaternion::new(-div, vadd(grad, rot)))
}

/// `D u` for a scalar field (`D u = grad u`, purely vectorial).
pub fn apply_d_scalar(u: &ScalarField, x: Point) -> Result<Biquaternion> {
    u.ensure_regular(x)?;
    Ok(Biquaternion::from_vector(u.grad(x)?))
}

/// `D (D f)` at `x`, expanded over second partials:
/// `D^2 f = sum_{j,k} i_j i_k (d_j d_k f)`.
pub fn apply_d_twice(f: &QuatField, x: Point) -> Result<Biquaternion> {
    f.ensure_regular(x)?;
    let mut out = Biquaternion::ZERO;
    for j in 0..3 {
        for k in 0..3 {
            let p = f.second_partial_at(j, k, x)?;
            out += Biquaternion::basis(j + 1) * (Biquaternion::basis(k + 1) * p);
        }
    }
    Ok(out)
}

/// `D (D u) + lap u` for scalar `u`; zero when the Hessian oracle is
/// symmetric and traces to the Laplacian oracle.
pub fn d_squared_plus_laplacian(u: &ScalarField, x: Point) -> Result<Biquaternion> {
    u.ensure_regular(x)?;
    let f = QuatField::from_scalar(u.clone());
    Ok(apply_d_twice(&f, x)? + Biquaternion::from_scalar(u.lap(x)?))
}

/// Product-rule residual `D(phi f) - (D phi . f + phi . D f)` at `x`.
///
/// The first term differentiates the product field built by the combinator
/// layer, so the residual checks that layer against the directly assembled
/// right-hand side.
pub fn leibniz_residual(phi: &ScalarField, f: &QuatField, x: Point) -> Result<Biquaternion> {
    phi.ensure_regular(x)?;
    f.ensure_regular(x)?;
    let product = f.scale_by(phi);
    let lhs = apply_d(&product, x)?;
    // phi is scalar-valued, so phi . D f is plain complex scaling
    let rhs = apply_d_scalar(phi, x)? * f.eval(x) + apply_d(f, x)? * phi.eval(x);
    Ok(lhs - rhs)
}

/// Residual of the left-multiplier identity
/// `(D - (grad phi / phi) . ) f = phi D(phi^-1 f)` at `x`,
/// where `grad phi / phi` acts by multiplication from the left.
pub fn gauge_identity_residual(phi: &ScalarField, f: &QuatField, x: Point) -> Result<Biquaternion> {
    phi.ensure_regular(x)?;
    f.ensure_regular(x)?;
    let phi_x = phi.eval(x);
    if phi_x == Complex64::new(0.0, 0.0) {
        return Err(crate::error::Error::SingularPoint { point: x });
    }
    let alpha = Biquaternion::from_vector(phi.grad(x)?) * phi_x.inv();
    let lhs = apply_d(f, x)? - alpha * f.eval(x);
    let rhs = apply_d(&f.scale_by(&phi.recip()), x)? * phi_x;
    Ok(lhs - rhs)
}
