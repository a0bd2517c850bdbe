//! Material profiles and the derived quaternionic coupling quantities.
//!
//! A [`MediumProfile`] holds nonvanishing complex permittivity and
//! permeability fields. [`transform`] derives from them the quantities the
//! quaternionic form of the field equations is written in: smooth square
//! roots of the material coefficients, the purely vectorial logarithmic
//! derivatives `grad(sqrt eps)/sqrt eps` and `grad(sqrt mu)/sqrt mu`, and
//! the wavenumber field `k = omega sqrt(eps mu)`.
//!
//! Square-root branches: catalog profiles carry analytically continued
//! square roots in closed form (for the exponential family
//! `sqrt(exp(L)) = exp(L/2)`, which agrees with the principal branch
//! wherever `Im L/2` lies in `(-pi/2, pi/2]` and continues it smoothly
//! elsewhere). Custom profiles without such a branch fall back to the
//! pointwise principal square root; the fallback is validated on a sample
//! lattice and fails loudly with a [`Error::BranchCut`] when the material
//! path crosses the negative real axis, rather than silently flipping sign.

use std::sync::Arc;

use num_complex::Complex64;

use crate::biquat::{cnorm_inf, vnorm_inf, vscale, vsub, Biquaternion, Vec3C, C_ONE, C_ZERO, V_ZERO};
use crate::calculus::{Point, QuatField, ScalarField};
use crate::darboux::fundamental_psi;
use crate::error::{Error, Result};

/// A named medium: permittivity and permeability fields, optionally with
/// analytically continued square roots.
#[derive(Clone)]
pub struct MediumProfile {
    pub name: String,
    pub eps: ScalarField,
    pub mu: ScalarField,
    sqrt_eps: Option<ScalarField>,
    sqrt_mu: Option<ScalarField>,
}

impl MediumProfile {
    /// `eps = mu = 1`.
    pub fn vacuum() -> Self {
        Self {
            name: "vacuum".to_string(),
            eps: ScalarField::one(),
            mu: ScalarField::one(),
            sqrt_eps: Some(ScalarField::one()),
            sqrt_mu: Some(ScalarField::one()),
        }
    }

    /// `eps = exp(a . x + d)`, `mu = 1`.
    pub fn exponential(a: Vec3C, d: Complex64) -> Self {
        let half_a = vscale(Complex64::new(0.5, 0.0), a);
        Self {
            name: format!("exp(a={}, d={})", fmt_vec(a), d),
            eps: ScalarField::exp_linear(a, d),
            mu: ScalarField::one(),
            sqrt_eps: Some(ScalarField::exp_linear(half_a, d * 0.5)),
            sqrt_mu: Some(ScalarField::one()),
        }
    }

    /// `eps = exp(a . x)`, `mu = exp(b . x)`.
    pub fn product_exponential(a: Vec3C, b: Vec3C) -> Self {
        let half = Complex64::new(0.5, 0.0);
        Self {
            name: format!("product-exp(a={}, b={})", fmt_vec(a), fmt_vec(b)),
            eps: ScalarField::exp_linear(a, C_ZERO),
            mu: ScalarField::exp_linear(b, C_ZERO),
            sqrt_eps: Some(ScalarField::exp_linear(vscale(half, a), C_ZERO)),
            sqrt_mu: Some(ScalarField::exp_linear(vscale(half, b), C_ZERO)),
        }
    }

    /// Medium generated by the plane-wave scalar `phi = exp(i c . x)` taken
    /// as `sqrt eps`, so `eps = exp(2 i c . x)`, `mu = 1`.
    pub fn planewave_phi(c: [f64; 3]) -> Self {
        let ic: Vec3C = [
            Complex64::new(0.0, c[0]),
            Complex64::new(0.0, c[1]),
            Complex64::new(0.0, c[2]),
        ];
        let two_ic = vscale(Complex64::new(2.0, 0.0), ic);
        Self {
            name: format!("planewave-phi(c={},{},{})", c[0], c[1], c[2]),
            eps: ScalarField::exp_linear(two_ic, C_ZERO),
            mu: ScalarField::one(),
            sqrt_eps: Some(ScalarField::exp_linear(ic, C_ZERO)),
            sqrt_mu: Some(ScalarField::one()),
        }
    }

    /// Medium generated by the radial scalar
    /// `phi(x) = exp(i c |x|) / (4 pi |x|)` taken as `sqrt eps`; singular at
    /// the origin, `mu = 1`.
    pub fn spherical(c: Complex64) -> Self {
        let phi = fundamental_psi(c);
        Self {
            name: format!("spherical(c={c})"),
            eps: phi.mul(&phi),
            mu: ScalarField::one(),
            sqrt_eps: Some(phi),
            sqrt_mu: Some(ScalarField::one()),
        }
    }

    /// Profile from raw fields without an analytic square-root branch; the
    /// principal-branch fallback applies at [`transform`] time.
    pub fn custom(name: impl Into<String>, eps: ScalarField, mu: ScalarField) -> Self {
        Self { name: name.into(), eps, mu, sqrt_eps: None, sqrt_mu: None }
    }

    /// The analytically continued `sqrt eps`, when the profile carries one.
    pub fn sqrt_eps_field(&self) -> Option<&ScalarField> {
        self.sqrt_eps.as_ref()
    }

    pub fn sqrt_mu_field(&self) -> Option<&ScalarField> {
        self.sqrt_mu.as_ref()
    }

    pub fn is_singular(&self, x: Point) -> bool {
        self.eps.is_singular(x) || self.mu.is_singular(x)
    }

    /// Named default-parameter profiles used by the verification suites.
    pub fn catalog() -> Vec<MediumProfile> {
        vec![
            Self::vacuum(),
            Self::exponential([C_ONE, C_ZERO, C_ZERO], C_ZERO),
            Self::product_exponential(
                [C_ONE, Complex64::new(2.0, 0.0), C_ZERO],
                [C_ZERO, C_ZERO, C_ONE],
            ),
            Self::planewave_phi([0.0, 0.0, 1.0]),
            Self::spherical(C_ONE),
        ]
    }

    /// Parse a CLI profile spec of the form `name:param=v1,v2,...` —
    /// e.g. `vacuum`, `exp:a=1,0,0`, `exp:a=1,0,0,d=0.5`,
    /// `product-exp:a=1,2,0,b=0,0,1`, `planewave-phi:c=0,0,1`,
    /// `spherical:c=2`.
    pub fn parse(spec: &str) -> Result<MediumProfile> {
        let (name, rest) = match spec.split_once(':') {
            Some((n, r)) => (n, Some(r)),
            None => (spec, None),
        };
        let params = parse_params(rest.unwrap_or(""))?;
        let get_vec = |key: &str| -> Option<Vec3C> {
            params.get(key).map(|v| {
                let mut out = V_ZERO;
                for (i, x) in v.iter().take(3).enumerate() {
                    out[i] = Complex64::new(*x, 0.0);
                }
                out
            })
        };
        let get_real3 = |key: &str| -> Option<[f64; 3]> {
            params.get(key).map(|v| {
                let mut out = [0.0; 3];
                for (i, x) in v.iter().take(3).enumerate() {
                    out[i] = *x;
                }
                out
            })
        };
        let get_scalar = |key: &str| -> Option<f64> { params.get(key).and_then(|v| v.first().copied()) };

        match name {
            "vacuum" => Ok(Self::vacuum()),
            "exp" => {
                let a = get_vec("a")
                    .ok_or_else(|| Error::config("profile `exp` needs a=a1,a2,a3".to_string()))?;
                let d = Complex64::new(get_scalar("d").unwrap_or(0.0), 0.0);
                Ok(Self::exponential(a, d))
            }
            "product-exp" => {
                let a = get_vec("a").ok_or_else(|| {
                    Error::config("profile `product-exp` needs a=a1,a2,a3".to_string())
                })?;
                let b = get_vec("b").ok_or_else(|| {
                    Error::config("profile `product-exp` needs b=b1,b2,b3".to_string())
                })?;
                Ok(Self::product_exponential(a, b))
            }
            "planewave-phi" => {
                let c = get_real3("c").ok_or_else(|| {
                    Error::config("profile `planewave-phi` needs c=c1,c2,c3".to_string())
                })?;
                Ok(Self::planewave_phi(c))
            }
            "spherical" => {
                let c = get_scalar("c")
                    .ok_or_else(|| Error::config("profile `spherical` needs c=value".to_string()))?;
                Ok(Self::spherical(Complex64::new(c, 0.0)))
            }
            other => Err(Error::config(format!("unknown profile `{other}`"))),
        }
    }
}

fn fmt_vec(v: Vec3C) -> String {
    format!("{},{},{}", v[0].re, v[1].re, v[2].re)
}

/// Parse `key=v1,v2,...,key2=w1,...` into named float lists. A token
/// containing `=` starts a new parameter; bare tokens extend the previous
/// one.
pub(crate) fn parse_params(s: &str) -> Result<std::collections::BTreeMap<String, Vec<f64>>> {
    let mut out = std::collections::BTreeMap::new();
    if s.is_empty() {
        return Ok(out);
    }
    let mut current: Option<String> = None;
    for token in s.split(',') {
        if let Some((key, first)) = token.split_once('=') {
            let vals: Vec<f64> = if first.is_empty() {
                Vec::new()
            } else {
                vec![first
                    .parse()
                    .map_err(|_| Error::config(format!("bad number `{first}` in `{s}`")))?]
            };
            out.insert(key.to_string(), vals);
            current = Some(key.to_string());
        } else {
            let key = current
                .clone()
                .ok_or_else(|| Error::config(format!("dangling value `{token}` in `{s}`")))?;
            let v: f64 = token
                .parse()
                .map_err(|_| Error::config(format!("bad number `{token}` in `{s}`")))?;
            out.get_mut(&key).unwrap().push(v);
        }
    }
    Ok(out)
}

/// Purely vectorial logarithmic derivative `grad phi / phi` with oracles
/// assembled from `phi`'s.
pub fn log_derivative_vector(phi: &ScalarField) -> Result<QuatField> {
    let components = [
        phi.partial(0)?.div(phi),
        phi.partial(1)?.div(phi),
        phi.partial(2)?.div(phi),
    ];
    Ok(QuatField::pure_vector(components))
}

/// Quantities derived from a medium for the quaternionic system.
#[derive(Clone)]
pub struct TransformedQuantities {
    pub sqrt_eps: ScalarField,
    pub sqrt_mu: ScalarField,
    /// `grad(sqrt eps)/sqrt eps`, purely vectorial.
    pub eps_vec: QuatField,
    /// `grad(sqrt mu)/sqrt mu`, purely vectorial.
    pub mu_vec: QuatField,
    /// `k = omega sqrt(eps mu)`, evaluated as `omega sqrt_eps sqrt_mu`.
    pub wavenumber: ScalarField,
    pub omega: Complex64,
}

/// Lattice of validation points used when deriving transformed quantities:
/// `{-1, -0.6, -0.2, 0.2, 0.6, 1}^3`, chosen to avoid the origin.
pub fn validation_points() -> Vec<Point> {
    let axis = [-1.0, -0.6, -0.2, 0.2, 0.6, 1.0];
    let mut out = Vec::with_capacity(axis.len().pow(3));
    for &x in &axis {
        for &y in &axis {
            for &z in &axis {
                out.push([x, y, z]);
            }
        }
    }
    out
}

/// Derive the transformed quantities of a medium at frequency `omega`.
///
/// Uses the profile's analytic square roots when present (verifying
/// `sqrt^2 = value` on the validation lattice), otherwise falls back to the
/// pointwise principal branch with derived oracles and loud branch-cut
/// detection.
pub fn transform(m: &MediumProfile, omega: Complex64) -> Result<TransformedQuantities> {
    let points: Vec<Point> = validation_points()
        .into_iter()
        .filter(|&x| !m.is_singular(x))
        .collect();
    if points.is_empty() {
        return Err(Error::config(format!(
            "profile `{}` is singular on the whole validation lattice",
            m.name
        )));
    }

    for &x in &points {
        for (label, f) in [("eps", &m.eps), ("mu", &m.mu)] {
            let v = f.eval(x);
            if v.norm() < 1e-14 {
                return Err(Error::contract(format!(
                    "{label} of profile `{}` vanishes at [{}, {}, {}]",
                    m.name, x[0], x[1], x[2]
                )));
            }
        }
    }

    let sqrt_eps = branch_sqrt(&m.eps, m.sqrt_eps.as_ref(), &points, "eps")?;
    let sqrt_mu = branch_sqrt(&m.mu, m.sqrt_mu.as_ref(), &points, "mu")?;
    let eps_vec = log_derivative_vector(&sqrt_eps)?;
    let mu_vec = log_derivative_vector(&sqrt_mu)?;
    let wavenumber = sqrt_eps.mul(&sqrt_mu).scale(omega);

    // cross-checks: the logarithmic derivative is branch independent
    for &x in &points {
        let direct = eps_vec.eval(x).vector;
        let via_eps = vscale(
            Complex64::new(0.5, 0.0) / m.eps.eval(x),
            m.eps.grad(x)?,
        );
        if vnorm_inf(vsub(direct, via_eps)) > 1e-12 * (1.0 + vnorm_inf(direct)) {
            return Err(Error::contract(format!(
                "eps_vec disagrees with grad(eps)/(2 eps) at [{}, {}, {}]",
                x[0], x[1], x[2]
            )));
        }
        let k = wavenumber.eval(x);
        let k2_direct = omega * omega * m.eps.eval(x) * m.mu.eval(x);
        if cnorm_inf(k * k - k2_direct) > 1e-12 * (1.0 + cnorm_inf(k2_direct)) {
            return Err(Error::contract(format!(
                "wavenumber square disagrees with omega^2 eps mu at [{}, {}, {}]",
                x[0], x[1], x[2]
            )));
        }
    }

    Ok(TransformedQuantities { sqrt_eps, sqrt_mu, eps_vec, mu_vec, wavenumber, omega })
}

fn branch_sqrt(
    field: &ScalarField,
    analytic: Option<&ScalarField>,
    points: &[Point],
    label: &str,
) -> Result<ScalarField> {
    if let Some(sqrt) = analytic {
        for &x in points {
            let s = sqrt.eval(x);
            let v = field.eval(x);
            if cnorm_inf(s * s - v) > 1e-12 * (1.0 + cnorm_inf(v)) {
                return Err(Error::contract(format!(
                    "analytic sqrt({label}) does not square back at [{}, {}, {}]",
                    x[0], x[1], x[2]
                )));
            }
        }
        return Ok(sqrt.clone());
    }
    principal_sqrt(field, points, label)
}

/// Pointwise principal-branch square root with oracles derived from the
/// base field:
/// `grad sqrt(f) = grad f / (2 sqrt f)`,
/// `lap sqrt(f) = lap f / (2 sqrt f) - <grad f, grad f> / (4 f sqrt f)`.
///
/// The derived oracles are only valid away from the branch cut; each
/// validation point is checked both for proximity to the negative real axis
/// and for gradient/value consistency by finite differences, so a cut
/// crossing fails loudly instead of silently flipping the sign.
fn principal_sqrt(field: &ScalarField, points: &[Point], label: &str) -> Result<ScalarField> {
    let base = field.clone();
    let value = move |x: Point| base.eval(x).sqrt();
    let base_g = field.clone();
    let gradient = move |x: Point| {
        let s = base_g.eval(x).sqrt();
        vscale((2.0 * s).inv(), base_g.grad(x).expect("gradient oracle"))
    };
    let base_h = field.clone();
    let hessian = move |x: Point| {
        let v = base_h.eval(x);
        let s = v.sqrt();
        let g = base_h.grad(x).expect("gradient oracle");
        let h = base_h.hess(x).expect("hessian oracle");
        let mut out = [[C_ZERO; 3]; 3];
        for j in 0..3 {
            for k in 0..3 {
                out[j][k] = h[j][k] / (2.0 * s) - g[j] * g[k] / (4.0 * v * s);
            }
        }
        out
    };
    let base_l = field.clone();
    let laplacian = move |x: Point| {
        let v = base_l.eval(x);
        let s = v.sqrt();
        let g = base_l.grad(x).expect("gradient oracle");
        base_l.lap(x).expect("laplacian oracle") / (2.0 * s) - crate::biquat::dot(g, g) / (4.0 * v * s)
    };

    if !(field.has_gradient() && field.has_hessian() && field.has_laplacian()) {
        return Err(Error::MissingOracle { oracle: "gradient/hessian/laplacian (principal sqrt fallback)" });
    }

    let sqrt = ScalarField::with_oracles(value, gradient, hessian, laplacian);
    let sqrt = match field_singular_clone(field) {
        Some(pred) => sqrt.with_singularity(move |x| pred(x)),
        None => sqrt,
    };

    for &x in points {
        let v = field.eval(x);
        // wedge around the negative real axis where the principal branch
        // jumps between nearby samples
        if v.re < 0.0 && v.im.abs() < 0.2 * v.re.abs() {
            return Err(Error::BranchCut {
                point: x,
                detail: format!("{label} = {v} lies in the principal-branch cut wedge"),
            });
        }
        // finite-difference consistency of the derived gradient: a cut
        // crossing between x-h and x+h breaks the O(h^2) agreement
        let g = sqrt.grad(x)?;
        for axis in 0..3 {
            let h = 1e-4;
            let mut xp = x;
            let mut xm = x;
            xp[axis] += h;
            xm[axis] -= h;
            let fd = (sqrt.eval(xp) - sqrt.eval(xm)) / (2.0 * h);
            if cnorm_inf(fd - g[axis]) > 1e-4 * (1.0 + cnorm_inf(g[axis])) {
                return Err(Error::BranchCut {
                    point: x,
                    detail: format!(
                        "principal sqrt({label}) gradient inconsistent with samples along axis {axis}"
                    ),
                });
            }
        }
    }
    Ok(sqrt)
}

fn field_singular_clone(f: &ScalarField) -> Option<Arc<dyn Fn(Point) -> bool + Send + Sync>> {
    // ScalarField does not expose its predicate; rebuild one from the public API
    let f = f.clone();
    Some(Arc::new(move |x| f.is_singular(x)))
}

/// Rescaled field pair `(sqrt_eps * E, sqrt_mu * H)`.
pub fn scale_fields(
    e: &QuatField,
    h: &QuatField,
    t: &TransformedQuantities,
) -> (QuatField, QuatField) {
    (e.scale_by(&t.sqrt_eps), h.scale_by(&t.sqrt_mu))
}

/// Inverse of [`scale_fields`].
pub fn unscale_fields(
    escaled: &QuatField,
    hscaled: &QuatField,
    t: &TransformedQuantities,
) -> (QuatField, QuatField) {
    (
        escaled.scale_by(&t.sqrt_eps.recip()),
        hscaled.scale_by(&t.sqrt_mu.recip()),
    )
}

type ChargeFn = Arc<dyn Fn(Point) -> Complex64 + Send + Sync>;
type CurrentFn = Arc<dyn Fn(Point) -> Vec3C + Send + Sync>;

/// Charge and current data entering the field equations.
#[derive(Clone)]
pub struct SourceData {
    charge: ChargeFn,
    current: CurrentFn,
    pub omega: Complex64,
}

impl SourceData {
    pub fn new(
        charge: impl Fn(Point) -> Complex64 + Send + Sync + 'static,
        current: impl Fn(Point) -> Vec3C + Send + Sync + 'static,
        omega: Complex64,
    ) -> Self {
        Self { charge: Arc::new(charge), current: Arc::new(current), omega }
    }

    pub fn zero(omega: Complex64) -> Self {
        Self::new(|_| C_ZERO, |_| V_ZERO, omega)
    }

    /// Manufacture sources from a field pair so that `(E, H)` solves the
    /// classical system exactly: `rho = div(eps E)`,
    /// `j = rot H - i omega eps E`.
    pub fn manufactured(
        e: &QuatField,
        h: &QuatField,
        m: &MediumProfile,
        omega: Complex64,
    ) -> Result<SourceData> {
        for k in 0..4 {
            if !e.component(k).has_gradient() || !h.component(k).has_gradient() {
                return Err(Error::MissingOracle { oracle: "gradient (manufactured sources)" });
            }
        }
        let (eps, e_field) = (m.eps.clone(), e.clone());
        let charge = move |x: Point| {
            // div(eps E) = <grad eps, E> + eps div E
            let ev = e_field.eval(x).vector;
            let grad_eps = eps.grad(x).expect("gradient oracle");
            let mut div_e = C_ZERO;
            for k in 0..3 {
                div_e += e_field.component(k + 1).grad(x).expect("gradient oracle")[k];
            }
            crate::biquat::dot(grad_eps, ev) + eps.eval(x) * div_e
        };
        let (eps_j, e_j, h_field) = (m.eps.clone(), e.clone(), h.clone());
        let current = move |x: Point| {
            let g1 = h_field.component(1).grad(x).expect("gradient oracle");
            let g2 = h_field.component(2).grad(x).expect("gradient oracle");
            let g3 = h_field.component(3).grad(x).expect("gradient oracle");
            let rot_h: Vec3C = [g3[1] - g2[2], g1[2] - g3[0], g2[0] - g1[1]];
            let scale = Complex64::new(0.0, 1.0) * omega * eps_j.eval(x);
            vsub(rot_h, vscale(scale, e_j.eval(x).vector))
        };
        Ok(Self::new(charge, current, omega))
    }

    pub fn charge_at(&self, x: Point) -> Complex64 {
        (self.charge)(x)
    }

    pub fn current_at(&self, x: Point) -> Vec3C {
        (self.current)(x)
    }

    /// Current as a purely vectorial biquaternion.
    pub fn current_biquat(&self, x: Point) -> Biquaternion {
        Biquaternion::from_vector(self.current_at(x))
    }
}
