//! Complex quaternions and their arithmetic.
//!
//! An element is stored as a complex scalar part plus a complex 3-vector
//! part, `q = q0 + q1 i1 + q2 i2 + q3 i3`. The units multiply by the
//! right-handed table `i1 i2 = i3`, `i2 i3 = i1`, `i3 i1 = i2`,
//! `ik ik = -1`, extended bilinearly over the complex coefficients; the
//! complex imaginary unit commutes with everything.
//!
//! The product of `p` and `q` is computed in the scalar/vector form
//!
//! ```text
//! p q = p0 q0 - <p, q>  +  p x q + p0 q + q0 p
//! ```
//!
//! with the (bilinear, non-Hermitian) scalar product `<.,.>` and the cross
//! product on the vector parts. [`mul_via_basis_table`] expands the same
//! product over the 16 basis pairs instead; the two routes are compared in
//! the verification suites.
//!
//! The algebra has zero divisors — `(i1 + i*i2)^2 = 0` — so no division is
//! provided; any future inverse must be explicit and partial.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// Complex 3-vector; identified with the vector part of a [`Biquaternion`].
pub type Vec3C = [Complex64; 3];

pub(crate) const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const C_ONE: Complex64 = Complex64::new(1.0, 0.0);
pub(crate) const C_I: Complex64 = Complex64::new(0.0, 1.0);
pub(crate) const V_ZERO: Vec3C = [C_ZERO; 3];

/// A quaternion with complex coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Biquaternion {
    /// Coefficient of the unit element.
    pub scalar: Complex64,
    /// Coefficients of the imaginary units `i1, i2, i3`.
    pub vector: Vec3C,
}

impl Biquaternion {
    pub const ZERO: Self = Self { scalar: C_ZERO, vector: V_ZERO };
    pub const ONE: Self = Self { scalar: C_ONE, vector: V_ZERO };
    pub const I1: Self = Self { scalar: C_ZERO, vector: [C_ONE, C_ZERO, C_ZERO] };
    pub const I2: Self = Self { scalar: C_ZERO, vector: [C_ZERO, C_ONE, C_ZERO] };
    pub const I3: Self = Self { scalar: C_ZERO, vector: [C_ZERO, C_ZERO, C_ONE] };

    pub fn new(scalar: Complex64, vector: Vec3C) -> Self {
        Self { scalar, vector }
    }

    pub fn from_scalar(scalar: Complex64) -> Self {
        Self { scalar, vector: V_ZERO }
    }

    pub fn from_real(scalar: f64) -> Self {
        Self::from_scalar(Complex64::new(scalar, 0.0))
    }

    pub fn from_vector(vector: Vec3C) -> Self {
        Self { scalar: C_ZERO, vector }
    }

    /// Basis element `i_k` for `k` in `0..=3` (`i0` is the unit).
    pub fn basis(k: usize) -> Self {
        match k {
            0 => Self::ONE,
            1 => Self::I1,
            2 => Self::I2,
            3 => Self::I3,
            _ => panic!("basis index {k} out of range"),
        }
    }

    /// Component `q_k` in the storage order `(q0, q1, q2, q3)`.
    pub fn component(&self, k: usize) -> Complex64 {
        match k {
            0 => self.scalar,
            1..=3 => self.vector[k - 1],
            _ => panic!("component index {k} out of range"),
        }
    }

    pub fn components(&self) -> [Complex64; 4] {
        [self.scalar, self.vector[0], self.vector[1], self.vector[2]]
    }

    pub fn from_components(c: [Complex64; 4]) -> Self {
        Self { scalar: c[0], vector: [c[1], c[2], c[3]] }
    }

    /// Scalar part as a biquaternion (`q0`).
    pub fn scalar_part(&self) -> Self {
        Self::from_scalar(self.scalar)
    }

    /// Vector part as a biquaternion (`q - q0`).
    pub fn vector_part(&self) -> Self {
        Self::from_vector(self.vector)
    }

    /// A biquaternion is purely vectorial iff its scalar part is zero.
    pub fn is_pure_vector(&self) -> bool {
        self.scalar == C_ZERO
    }

    /// View a purely vectorial value as a `C^3` vector.
    pub fn to_vector(&self) -> Result<Vec3C> {
        if self.is_pure_vector() {
            Ok(self.vector)
        } else {
            Err(Error::contract(format!(
                "expected purely vectorial biquaternion, scalar part is {}",
                self.scalar
            )))
        }
    }

    /// Max absolute value over the eight real components.
    pub fn norm_inf(&self) -> f64 {
        self.components()
            .iter()
            .map(|c| cnorm_inf(*c))
            .fold(0.0, f64::max)
    }
}

impl Add for Biquaternion {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { scalar: self.scalar + rhs.scalar, vector: vadd(self.vector, rhs.vector) }
    }
}

impl AddAssign for Biquaternion {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for Biquaternion {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { scalar: self.scalar - rhs.scalar, vector: vsub(self.vector, rhs.vector) }
    }
}

impl SubAssign for Biquaternion {
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

impl Neg for Biquaternion {
    type Output = Self;
    fn neg(self) -> Self {
        Self { scalar: -self.scalar, vector: vneg(self.vector) }
    }
}

impl Mul for Biquaternion {
    type Output = Self;
    fn mul(self, q: Self) -> Self {
        Self {
            scalar: self.scalar * q.scalar - dot(self.vector, q.vector),
            vector: vadd(
                cross(self.vector, q.vector),
                vadd(vscale(self.scalar, q.vector), vscale(q.scalar, self.vector)),
            ),
        }
    }
}

impl Mul<Complex64> for Biquaternion {
    type Output = Self;
    fn mul(self, c: Complex64) -> Self {
        Self { scalar: self.scalar * c, vector: vscale(c, self.vector) }
    }
}

impl Mul<Biquaternion> for Complex64 {
    type Output = Biquaternion;
    fn mul(self, q: Biquaternion) -> Biquaternion {
        q * self
    }
}

impl Mul<f64> for Biquaternion {
    type Output = Self;
    fn mul(self, c: f64) -> Self {
        self * Complex64::new(c, 0.0)
    }
}

/// Unit products `i_a i_b = coeff * i_idx`, row `a`, column `b`.
const BASIS_TABLE: [[(f64, usize); 4]; 4] = [
    [(1.0, 0), (1.0, 1), (1.0, 2), (1.0, 3)],
    [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
    [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
    [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
];

/// The same product as `p * q`, expanded over the 16 basis pairs.
///
/// Used as the second route of the product consistency check; the summation
/// order differs from the scalar/vector formula, so agreement is only up to
/// rounding.
pub fn mul_via_basis_table(p: Biquaternion, q: Biquaternion) -> Biquaternion {
    let pc = p.components();
    let qc = q.components();
    let mut out = [C_ZERO; 4];
    for (a, pa) in pc.iter().enumerate() {
        for (b, qb) in qc.iter().enumerate() {
            let (sign, idx) = BASIS_TABLE[a][b];
            out[idx] += pa * qb * sign;
        }
    }
    Biquaternion::from_components(out)
}

/// Bilinear scalar product `<p, q> = sum p_k q_k` (no conjugation).
pub fn dot(p: Vec3C, q: Vec3C) -> Complex64 {
    p[0] * q[0] + p[1] * q[1] + p[2] * q[2]
}

/// Cross product on complex 3-vectors.
pub fn cross(p: Vec3C, q: Vec3C) -> Vec3C {
    [
        p[1] * q[2] - p[2] * q[1],
        p[2] * q[0] - p[0] * q[2],
        p[0] * q[1] - p[1] * q[0],
    ]
}

/// Operator of multiplication from the left-hand side: `left_mul(p)(q) = p q`.
pub fn left_mul(p: Biquaternion) -> impl Fn(Biquaternion) -> Biquaternion {
    move |q| p * q
}

/// Operator of multiplication from the right-hand side: `right_mul(p)(q) = q p`.
pub fn right_mul(p: Biquaternion) -> impl Fn(Biquaternion) -> Biquaternion {
    move |q| q * p
}

/// Scalar product recovered from the anticommutator,
/// `<p, q> = -1/2 (p q + q p)` for purely vectorial `p`, `q`.
///
/// The full anticommutator has zero vector part; only the scalar part is
/// returned here.
pub fn dot_via_anticommutator(p: Vec3C, q: Vec3C) -> Complex64 {
    let bp = Biquaternion::from_vector(p);
    let bq = Biquaternion::from_vector(q);
    let anti = bp * bq + bq * bp;
    anti.scalar * -0.5
}

pub(crate) fn cnorm_inf(c: Complex64) -> f64 {
    c.re.abs().max(c.im.abs())
}

pub(crate) fn vnorm_inf(v: Vec3C) -> f64 {
    v.iter().map(|c| cnorm_inf(*c)).fold(0.0, f64::max)
}

pub(crate) fn vadd(a: Vec3C, b: Vec3C) -> Vec3C {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn vsub(a: Vec3C, b: Vec3C) -> Vec3C {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub(crate) fn vscale(c: Complex64, v: Vec3C) -> Vec3C {
    [c * v[0], c * v[1], c * v[2]]
}

pub(crate) fn vneg(v: Vec3C) -> Vec3C {
    [-v[0], -v[1], -v[2]]
}
