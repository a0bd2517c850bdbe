//! Analytic fields over `R^3` with explicit derivative oracles.
//!
//! A [`ScalarField`] bundles independent closures for its value, gradient,
//! Hessian and Laplacian. The oracles are hand-derived per primitive family
//! (exponentials, trigonometric waves, linear forms, radial profiles) and
//! propagated through combinators by the textbook calculus rules, so a
//! derivative oracle is never obtained by differentiating the value closure
//! numerically — finite differences stay available as an independent
//! cross-check.
//!
//! Derivative oracles are optional: fields produced by [`ScalarField::partial`]
//! or by sampling lose the layers they cannot supply, and operations that
//! need a missing oracle fail with [`Error::MissingOracle`].

use std::sync::Arc;

use num_complex::Complex64;

use crate::biquat::{cnorm_inf, dot, vadd, vscale, Biquaternion, Vec3C, C_ONE, C_ZERO, V_ZERO};
use crate::error::{Error, Result};

/// A point of `R^3`.
pub type Point = [f64; 3];

/// Complex 3x3 matrix, used for Hessians.
pub type Matrix3C = [[Complex64; 3]; 3];

type ValueFn = Arc<dyn Fn(Point) -> Complex64 + Send + Sync>;
type GradientFn = Arc<dyn Fn(Point) -> Vec3C + Send + Sync>;
type HessianFn = Arc<dyn Fn(Point) -> Matrix3C + Send + Sync>;
type SingularFn = Arc<dyn Fn(Point) -> bool + Send + Sync>;

const M_ZERO: Matrix3C = [V_ZERO; 3];

fn cdot_real(a: Vec3C, x: Point) -> Complex64 {
    a[0] * x[0] + a[1] * x[1] + a[2] * x[2]
}

pub(crate) fn radius(x: Point) -> f64 {
    (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]).sqrt()
}

/// Complex-valued field on `R^3` with explicit derivative oracles.
#[derive(Clone)]
pub struct ScalarField {
    value: ValueFn,
    gradient: Option<GradientFn>,
    hessian: Option<HessianFn>,
    laplacian: Option<ValueFn>,
    singular: Option<SingularFn>,
}

impl ScalarField {
    /// Field from a value closure alone; no derivative oracles.
    pub fn from_value(value: impl Fn(Point) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { value: Arc::new(value), gradient: None, hessian: None, laplacian: None, singular: None }
    }

    /// Field with the full oracle set.
    pub fn with_oracles(
        value: impl Fn(Point) -> Complex64 + Send + Sync + 'static,
        gradient: impl Fn(Point) -> Vec3C + Send + Sync + 'static,
        hessian: impl Fn(Point) -> Matrix3C + Send + Sync + 'static,
        laplacian: impl Fn(Point) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            value: Arc::new(value),
            gradient: Some(Arc::new(gradient)),
            hessian: Some(Arc::new(hessian)),
            laplacian: Some(Arc::new(laplacian)),
            singular: None,
        }
    }

    /// Attach a singular-locus predicate (`true` means the point is singular).
    pub fn with_singularity(mut self, pred: impl Fn(Point) -> bool + Send + Sync + 'static) -> Self {
        self.singular = Some(Arc::new(pred));
        self
    }

    pub fn constant(c: Complex64) -> Self {
        Self::with_oracles(move |_| c, |_| V_ZERO, |_| M_ZERO, |_| C_ZERO)
    }

    pub fn zero() -> Self {
        Self::constant(C_ZERO)
    }

    pub fn one() -> Self {
        Self::constant(C_ONE)
    }

    /// Complex linear form `a . x + d`.
    pub fn linear(a: Vec3C, d: Complex64) -> Self {
        Self::with_oracles(move |x| cdot_real(a, x) + d, move |_| a, |_| M_ZERO, |_| C_ZERO)
    }

    /// Coordinate function `x_k` for `k` in `0..3`.
    pub fn coordinate(axis: usize) -> Self {
        assert!(axis < 3, "coordinate axis {axis} out of range");
        let mut a = V_ZERO;
        a[axis] = C_ONE;
        Self::linear(a, C_ZERO)
    }

    /// Exponential of a complex linear form, `exp(a . x + d)`.
    pub fn exp_linear(a: Vec3C, d: Complex64) -> Self {
        let aa = dot(a, a);
        Self::with_oracles(
            move |x| (cdot_real(a, x) + d).exp(),
            move |x| vscale((cdot_real(a, x) + d).exp(), a),
            move |x| {
                let v = (cdot_real(a, x) + d).exp();
                let mut h = M_ZERO;
                for j in 0..3 {
                    for k in 0..3 {
                        h[j][k] = a[j] * a[k] * v;
                    }
                }
                h
            },
            move |x| aa * (cdot_real(a, x) + d).exp(),
        )
    }

    /// `sin(a . x + d)` with complex coefficients.
    pub fn sin_linear(a: Vec3C, d: Complex64) -> Self {
        let aa = dot(a, a);
        Self::with_oracles(
            move |x| (cdot_real(a, x) + d).sin(),
            move |x| vscale((cdot_real(a, x) + d).cos(), a),
            move |x| {
                let s = (cdot_real(a, x) + d).sin();
                let mut h = M_ZERO;
                for j in 0..3 {
                    for k in 0..3 {
                        h[j][k] = -a[j] * a[k] * s;
                    }
                }
                h
            },
            move |x| -aa * (cdot_real(a, x) + d).sin(),
        )
    }

    /// `cos(a . x + d)` with complex coefficients.
    pub fn cos_linear(a: Vec3C, d: Complex64) -> Self {
        let aa = dot(a, a);
        Self::with_oracles(
            move |x| (cdot_real(a, x) + d).cos(),
            move |x| vscale(-(cdot_real(a, x) + d).sin(), a),
            move |x| {
                let cv = (cdot_real(a, x) + d).cos();
                let mut h = M_ZERO;
                for j in 0..3 {
                    for k in 0..3 {
                        h[j][k] = -a[j] * a[k] * cv;
                    }
                }
                h
            },
            move |x| -aa * (cdot_real(a, x) + d).cos(),
        )
    }

    /// Radial field `u(x) = g(|x|)` from the 1-d profile `g` and its first
    /// two derivatives. Singular at the origin.
    ///
    /// Oracles follow the radial chain rule: `grad u = g' x/r`,
    /// `H[j][k] = g'' x_j x_k / r^2 + g' (d_jk / r - x_j x_k / r^3)`,
    /// `lap u = g'' + 2 g' / r`.
    pub fn radial(
        g: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        g1: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
        g2: impl Fn(f64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        let g1 = Arc::new(g1);
        let g2 = Arc::new(g2);
        let (g1g, g1h, g1l) = (g1.clone(), g1.clone(), g1);
        let (g2h, g2l) = (g2.clone(), g2);
        Self::with_oracles(
            move |x| g(radius(x)),
            move |x| {
                let r = radius(x);
                let s = g1g(r) / r;
                [s * x[0], s * x[1], s * x[2]]
            },
            move |x| {
                let r = radius(x);
                let d2 = g2h(r);
                let d1 = g1h(r);
                let mut h = M_ZERO;
                for j in 0..3 {
                    for k in 0..3 {
                        let xjxk = Complex64::new(x[j] * x[k], 0.0);
                        h[j][k] = d2 * xjxk / (r * r) - d1 * xjxk / (r * r * r);
                        if j == k {
                            h[j][k] += d1 / r;
                        }
                    }
                }
                h
            },
            move |x| {
                let r = radius(x);
                g2l(r) + 2.0 * g1l(r) / r
            },
        )
        .with_singularity(|x| radius(x) == 0.0)
    }

    /// Random trigonometric polynomial: `terms` waves with integer wave
    /// vectors in `[-2, 2]^3` and complex amplitudes in the unit box.
    pub fn random_trig(rng: &mut impl rand::Rng, terms: usize) -> Self {
        let mut f = ScalarField::zero();
        for _ in 0..terms.max(1) {
            let mut a = V_ZERO;
            loop {
                for c in &mut a {
                    *c = Complex64::new(rng.gen_range(-2..=2i32) as f64, 0.0);
                }
                if a != V_ZERO {
                    break;
                }
            }
            let phase = Complex64::new(rng.gen_range(-1.0..=1.0), 0.0);
            let amp = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
            let wave = if rng.gen_bool(0.5) {
                ScalarField::sin_linear(a, phase)
            } else {
                ScalarField::cos_linear(a, phase)
            };
            f = f.add(&wave.scale(amp));
        }
        f
    }

    /// Evaluate the field value. Evaluation at singular points is the
    /// caller's responsibility; see [`ScalarField::ensure_regular`].
    pub fn eval(&self, x: Point) -> Complex64 {
        (self.value)(x)
    }

    pub fn grad(&self, x: Point) -> Result<Vec3C> {
        match &self.gradient {
            Some(g) => Ok(g(x)),
            None => Err(Error::MissingOracle { oracle: "gradient" }),
        }
    }

    pub fn hess(&self, x: Point) -> Result<Matrix3C> {
        match &self.hessian {
            Some(h) => Ok(h(x)),
            None => Err(Error::MissingOracle { oracle: "hessian" }),
        }
    }

    pub fn lap(&self, x: Point) -> Result<Complex64> {
        match &self.laplacian {
            Some(l) => Ok(l(x)),
            None => Err(Error::MissingOracle { oracle: "laplacian" }),
        }
    }

    pub fn has_gradient(&self) -> bool {
        self.gradient.is_some()
    }

    pub fn has_hessian(&self) -> bool {
        self.hessian.is_some()
    }

    pub fn has_laplacian(&self) -> bool {
        self.laplacian.is_some()
    }

    pub fn is_singular(&self, x: Point) -> bool {
        self.singular.as_ref().is_some_and(|s| s(x))
    }

    pub fn ensure_regular(&self, x: Point) -> Result<()> {
        if self.is_singular(x) {
            Err(Error::SingularPoint { point: x })
        } else {
            Ok(())
        }
    }

    fn merged_singular(&self, rhs: &Self) -> Option<SingularFn> {
        match (&self.singular, &rhs.singular) {
            (None, None) => None,
            (Some(s), None) | (None, Some(s)) => Some(s.clone()),
            (Some(a), Some(b)) => {
                let (a, b) = (a.clone(), b.clone());
                Some(Arc::new(move |x| a(x) || b(x)))
            }
        }
    }

    /// Pointwise sum.
    pub fn add(&self, rhs: &Self) -> Self {
        let (va, vb) = (self.value.clone(), rhs.value.clone());
        Self {
            value: Arc::new(move |x| va(x) + vb(x)),
            gradient: pair(&self.gradient, &rhs.gradient)
                .map(|(a, b)| -> GradientFn { Arc::new(move |x| vadd(a(x), b(x))) }),
            hessian: pair(&self.hessian, &rhs.hessian)
                .map(|(a, b)| -> HessianFn { Arc::new(move |x| madd(a(x), b(x))) }),
            laplacian: pair(&self.laplacian, &rhs.laplacian)
                .map(|(a, b)| -> ValueFn { Arc::new(move |x| a(x) + b(x)) }),
            singular: self.merged_singular(rhs),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Pointwise scaling by a complex constant.
    pub fn scale(&self, c: Complex64) -> Self {
        let v = self.value.clone();
        Self {
            value: Arc::new(move |x| c * v(x)),
            gradient: self.gradient.clone().map(|g| -> GradientFn { Arc::new(move |x| vscale(c, g(x))) }),
            hessian: self.hessian.clone().map(|h| -> HessianFn { Arc::new(move |x| mscale(c, h(x))) }),
            laplacian: self.laplacian.clone().map(|l| -> ValueFn { Arc::new(move |x| c * l(x)) }),
            singular: self.singular.clone(),
        }
    }

    pub fn neg(&self) -> Self {
        self.scale(Complex64::new(-1.0, 0.0))
    }

    /// Pointwise product, with oracles assembled by the product rule:
    /// `grad(fg) = f grad g + g grad f`,
    /// `H(fg) = f Hg + grad f (x) grad g + grad g (x) grad f + g Hf`,
    /// `lap(fg) = f lap g + 2 <grad f, grad g> + g lap f`.
    pub fn mul(&self, rhs: &Self) -> Self {
        let (fa, fb) = (self.value.clone(), rhs.value.clone());
        let value: ValueFn = Arc::new(move |x| fa(x) * fb(x));

        let gradient = pair(&self.gradient, &rhs.gradient).map(|(ga, gb)| -> GradientFn {
            let (fa, fb) = (self.value.clone(), rhs.value.clone());
            Arc::new(move |x| vadd(vscale(fa(x), gb(x)), vscale(fb(x), ga(x))))
        });

        let hessian = pair(&self.hessian, &rhs.hessian)
            .zip(pair(&self.gradient, &rhs.gradient))
            .map(|((ha, hb), (ga, gb))| -> HessianFn {
                let (fa, fb) = (self.value.clone(), rhs.value.clone());
                Arc::new(move |x| {
                    let (a, b) = (fa(x), fb(x));
                    let (da, db) = (ga(x), gb(x));
                    let (mha, mhb) = (ha(x), hb(x));
                    let mut h = M_ZERO;
                    for j in 0..3 {
                        for k in 0..3 {
                            h[j][k] = a * mhb[j][k] + da[j] * db[k] + db[j] * da[k] + b * mha[j][k];
                        }
                    }
                    h
                })
            });

        let laplacian = pair(&self.laplacian, &rhs.laplacian)
            .zip(pair(&self.gradient, &rhs.gradient))
            .map(|((la, lb), (ga, gb))| -> ValueFn {
                let (fa, fb) = (self.value.clone(), rhs.value.clone());
                Arc::new(move |x| fa(x) * lb(x) + 2.0 * dot(ga(x), gb(x)) + fb(x) * la(x))
            });

        Self { value, gradient, hessian, laplacian, singular: self.merged_singular(rhs) }
    }

    /// Pointwise reciprocal `1/f`. Zeros of `f` are not tracked as a
    /// singular locus; callers guard evaluation where `f` may vanish.
    pub fn recip(&self) -> Self {
        let f = self.value.clone();
        let value: ValueFn = Arc::new(move |x| f(x).inv());

        let gradient = self.gradient.clone().map(|g| -> GradientFn {
            let f = self.value.clone();
            Arc::new(move |x| {
                let v = f(x);
                vscale(-(v * v).inv(), g(x))
            })
        });

        let hessian = pair(&self.hessian, &self.gradient).map(|(h, g)| -> HessianFn {
            let f = self.value.clone();
            Arc::new(move |x| {
                let v = f(x);
                let dg = g(x);
                let hh = h(x);
                let inv2 = (v * v).inv();
                let inv3 = inv2 / v;
                let mut out = M_ZERO;
                for j in 0..3 {
                    for k in 0..3 {
                        out[j][k] = 2.0 * dg[j] * dg[k] * inv3 - hh[j][k] * inv2;
                    }
                }
                out
            })
        });

        let laplacian = pair(&self.laplacian, &self.gradient).map(|(l, g)| -> ValueFn {
            let f = self.value.clone();
            Arc::new(move |x| {
                let v = f(x);
                let dg = g(x);
                2.0 * dot(dg, dg) / (v * v * v) - l(x) / (v * v)
            })
        });

        Self { value, gradient, hessian, laplacian, singular: self.singular.clone() }
    }

    /// Pointwise quotient `f / g`.
    pub fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.recip())
    }

    /// Partial derivative along `axis` as a field.
    ///
    /// The result's value is this field's gradient component and its
    /// gradient is the corresponding Hessian row; Hessian and Laplacian of
    /// the derivative are not available.
    pub fn partial(&self, axis: usize) -> Result<Self> {
        assert!(axis < 3, "axis {axis} out of range");
        let g = self
            .gradient
            .clone()
            .ok_or(Error::MissingOracle { oracle: "gradient" })?;
        let gradient = self.hessian.clone().map(|h| -> GradientFn { Arc::new(move |x| h(x)[axis]) });
        Ok(Self {
            value: Arc::new(move |x| g(x)[axis]),
            gradient,
            hessian: None,
            laplacian: None,
            singular: self.singular.clone(),
        })
    }
}

fn pair<T: Clone, U: Clone>(a: &Option<T>, b: &Option<U>) -> Option<(T, U)> {
    match (a, b) {
        (Some(x), Some(y)) => Some((x.clone(), y.clone())),
        _ => None,
    }
}

fn madd(a: Matrix3C, b: Matrix3C) -> Matrix3C {
    let mut out = M_ZERO;
    for j in 0..3 {
        out[j] = vadd(a[j], b[j]);
    }
    out
}

fn mscale(c: Complex64, m: Matrix3C) -> Matrix3C {
    let mut out = M_ZERO;
    for j in 0..3 {
        out[j] = vscale(c, m[j]);
    }
    out
}

/// Quaternion-valued field: four scalar component fields.
#[derive(Clone)]
pub struct QuatField {
    components: [ScalarField; 4],
}

impl QuatField {
    pub fn new(components: [ScalarField; 4]) -> Self {
        Self { components }
    }

    /// Purely vectorial field with an exactly zero scalar component.
    pub fn pure_vector(vector: [ScalarField; 3]) -> Self {
        let [v1, v2, v3] = vector;
        Self::new([ScalarField::zero(), v1, v2, v3])
    }

    pub fn from_scalar(f: ScalarField) -> Self {
        Self::new([f, ScalarField::zero(), ScalarField::zero(), ScalarField::zero()])
    }

    pub fn constant(q: Biquaternion) -> Self {
        let c = q.components();
        Self::new([
            ScalarField::constant(c[0]),
            ScalarField::constant(c[1]),
            ScalarField::constant(c[2]),
            ScalarField::constant(c[3]),
        ])
    }

    pub fn zero() -> Self {
        Self::constant(Biquaternion::ZERO)
    }

    pub fn component(&self, k: usize) -> &ScalarField {
        &self.components[k]
    }

    pub fn eval(&self, x: Point) -> Biquaternion {
        Biquaternion::from_components([
            self.components[0].eval(x),
            self.components[1].eval(x),
            self.components[2].eval(x),
            self.components[3].eval(x),
        ])
    }

    pub fn is_singular(&self, x: Point) -> bool {
        self.components.iter().any(|c| c.is_singular(x))
    }

    pub fn ensure_regular(&self, x: Point) -> Result<()> {
        if self.is_singular(x) {
            Err(Error::SingularPoint { point: x })
        } else {
            Ok(())
        }
    }

    /// Partial derivative `d_axis f` as a biquaternion, from the component
    /// gradient oracles.
    pub fn partial_at(&self, axis: usize, x: Point) -> Result<Biquaternion> {
        let mut out = [C_ZERO; 4];
        for (k, c) in self.components.iter().enumerate() {
            out[k] = c.grad(x)?[axis];
        }
        Ok(Biquaternion::from_components(out))
    }

    /// All three partial derivatives at `x`.
    pub fn jacobian(&self, x: Point) -> Result<[Biquaternion; 3]> {
        Ok([self.partial_at(0, x)?, self.partial_at(1, x)?, self.partial_at(2, x)?])
    }

    /// Second partials `d_j d_k f` as biquaternions, from Hessian oracles.
    pub fn second_partial_at(&self, j: usize, k: usize, x: Point) -> Result<Biquaternion> {
        let mut out = [C_ZERO; 4];
        for (m, c) in self.components.iter().enumerate() {
            out[m] = c.hess(x)?[j][k];
        }
        Ok(Biquaternion::from_components(out))
    }

    /// Multiply every component by the scalar field `phi`.
    pub fn scale_by(&self, phi: &ScalarField) -> Self {
        Self::new([
            self.components[0].mul(phi),
            self.components[1].mul(phi),
            self.components[2].mul(phi),
            self.components[3].mul(phi),
        ])
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self::new([
            self.components[0].add(&rhs.components[0]),
            self.components[1].add(&rhs.components[1]),
            self.components[2].add(&rhs.components[2]),
            self.components[3].add(&rhs.components[3]),
        ])
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self::new([
            self.components[0].sub(&rhs.components[0]),
            self.components[1].sub(&rhs.components[1]),
            self.components[2].sub(&rhs.components[2]),
            self.components[3].sub(&rhs.components[3]),
        ])
    }

    /// Vector part at `x`, with a tolerance-guarded purity contract.
    pub fn vector_at(&self, x: Point) -> Result<Vec3C> {
        let q = self.eval(x);
        if cnorm_inf(q.scalar) > 1e-12 * (1.0 + q.norm_inf()) {
            return Err(Error::contract(format!(
                "field is not purely vectorial at [{}, {}, {}]: scalar part {}",
                x[0], x[1], x[2], q.scalar
            )));
        }
        Ok(q.vector)
    }

    /// Random purely vectorial trigonometric field.
    pub fn random_vector_trig(rng: &mut impl rand::Rng, terms: usize) -> Self {
        Self::pure_vector([
            ScalarField::random_trig(rng, terms),
            ScalarField::random_trig(rng, terms),
            ScalarField::random_trig(rng, terms),
        ])
    }
}
