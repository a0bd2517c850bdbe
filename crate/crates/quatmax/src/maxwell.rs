//! Residual evaluators for the classical and quaternionic forms of the
//! time-harmonic field equations, and the exact algebraic map between them.
//!
//! Classical residuals (zero exactly on a solution):
//!
//! ```text
//! s1 = div(eps E) - rho        s2 = rot E + i omega mu H
//! s3 = div(mu H)               s4 = rot H - i omega eps E - j
//! ```
//!
//! Quaternionic residuals for the rescaled fields `Es = sqrt(eps) E`,
//! `Hs = sqrt(mu) H`, with the coupling vectors acting by multiplication
//! from the right:
//!
//! ```text
//! R1 = D Es + Es . eps_vec + i k Hs + rho / sqrt(eps)
//! R2 = D Hs + Hs . mu_vec  - i k Es - sqrt(mu) j
//! ```
//!
//! The two residual sets determine each other pointwise through an
//! invertible linear map ([`equivalence_map`], [`classical_from_quaternionic`]):
//!
//! ```text
//! R1 = -s1/sqrt(eps) + sqrt(eps) s2      R2 = -s3/sqrt(mu) + sqrt(mu) s4
//! ```
//!
//! The map holds for arbitrary smooth fields, not only solutions; the
//! verification suites exercise exactly that.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::biquat::{dot, vadd, vscale, vsub, Biquaternion, Vec3C, C_I};
use crate::calculus::{apply_d, curl, divergence, GridSpec, Point, QuatField};
use crate::error::{Error, Result};
use crate::media::{MediumProfile, SourceData, TransformedQuantities};

/// Residuals of the classical first-order system at a point.
#[derive(Clone, Copy, Debug)]
pub struct ClassicalResiduals {
    /// `div(eps E) - rho`
    pub gauss_electric: Complex64,
    /// `rot E + i omega mu H`
    pub faraday: Vec3C,
    /// `div(mu H)`
    pub gauss_magnetic: Complex64,
    /// `rot H - i omega eps E - j`
    pub ampere: Vec3C,
}

impl ClassicalResiduals {
    pub fn norm_inf(&self) -> f64 {
        let s = crate::biquat::cnorm_inf(self.gauss_electric)
            .max(crate::biquat::cnorm_inf(self.gauss_magnetic));
        s.max(crate::biquat::vnorm_inf(self.faraday))
            .max(crate::biquat::vnorm_inf(self.ampere))
    }
}

/// Residuals of the quaternionic system at a point.
#[derive(Clone, Copy, Debug)]
pub struct QuaternionicResiduals {
    pub electric: Biquaternion,
    pub magnetic: Biquaternion,
}

impl QuaternionicResiduals {
    pub fn norm_inf(&self) -> f64 {
        self.electric.norm_inf().max(self.magnetic.norm_inf())
    }
}

/// Evaluate the classical residuals for purely vectorial `E`, `H`.
pub fn classical_residuals(
    e: &QuatField,
    h: &QuatField,
    m: &MediumProfile,
    src: &SourceData,
    x: Point,
) -> Result<ClassicalResiduals> {
    e.ensure_regular(x)?;
    h.ensure_regular(x)?;
    if m.is_singular(x) {
        return Err(Error::SingularPoint { point: x });
    }
    let ev = e.vector_at(x)?;
    let hv = h.vector_at(x)?;
    let i_omega = C_I * src.omega;

    let eps = m.eps.eval(x);
    let grad_eps = m.eps.grad(x)?;
    let mu = m.mu.eval(x);
    let grad_mu = m.mu.grad(x)?;

    let gauss_electric = dot(grad_eps, ev) + eps * divergence(e, x)? - src.charge_at(x);
    let faraday = vadd(curl(e, x)?, vscale(i_omega * mu, hv));
    let gauss_magnetic = dot(grad_mu, hv) + mu * divergence(h, x)?;
    let ampere = vsub(
        vsub(curl(h, x)?, vscale(i_omega * eps, ev)),
        src.current_at(x),
    );

    Ok(ClassicalResiduals { gauss_electric, faraday, gauss_magnetic, ampere })
}

/// Evaluate the quaternionic residuals for the rescaled, purely vectorial
/// pair `(Es, Hs)`.
pub fn quaternionic_residuals(
    escaled: &QuatField,
    hscaled: &QuatField,
    t: &TransformedQuantities,
    src: &SourceData,
    x: Point,
) -> Result<QuaternionicResiduals> {
    if src.omega != t.omega {
        return Err(Error::contract(format!(
            "source omega {} differs from transformed omega {}",
            src.omega, t.omega
        )));
    }
    escaled.ensure_regular(x)?;
    hscaled.ensure_regular(x)?;
    let es = Biquaternion::from_vector(escaled.vector_at(x)?);
    let hs = Biquaternion::from_vector(hscaled.vector_at(x)?);
    let eps_vec = Biquaternion::from_vector(t.eps_vec.vector_at(x)?);
    let mu_vec = Biquaternion::from_vector(t.mu_vec.vector_at(x)?);
    let ik = C_I * t.wavenumber.eval(x);

    let electric = apply_d(escaled, x)?
        + es * eps_vec
        + hs * ik
        + Biquaternion::from_scalar(src.charge_at(x) / t.sqrt_eps.eval(x));
    let magnetic = apply_d(hscaled, x)?
        + hs * mu_vec
        - es * ik
        - Biquaternion::from_vector(src.current_at(x)) * t.sqrt_mu.eval(x);

    Ok(QuaternionicResiduals { electric, magnetic })
}

/// Map classical residuals to quaternionic residuals at `x`:
/// `R1 = -s1/sqrt(eps) + sqrt(eps) s2`, `R2 = -s3/sqrt(mu) + sqrt(mu) s4`.
pub fn equivalence_map(
    c: &ClassicalResiduals,
    t: &TransformedQuantities,
    x: Point,
) -> QuaternionicResiduals {
    let se = t.sqrt_eps.eval(x);
    let sm = t.sqrt_mu.eval(x);
    QuaternionicResiduals {
        electric: Biquaternion::new(-c.gauss_electric / se, vscale(se, c.faraday)),
        magnetic: Biquaternion::new(-c.gauss_magnetic / sm, vscale(sm, c.ampere)),
    }
}

/// Inverse of [`equivalence_map`].
pub fn classical_from_quaternionic(
    q: &QuaternionicResiduals,
    t: &TransformedQuantities,
    x: Point,
) -> ClassicalResiduals {
    let se = t.sqrt_eps.eval(x);
    let sm = t.sqrt_mu.eval(x);
    ClassicalResiduals {
        gauss_electric: -se * q.electric.scalar,
        faraday: vscale(se.inv(), q.electric.vector),
        gauss_magnetic: -sm * q.magnetic.scalar,
        ampere: vscale(sm.inv(), q.magnetic.vector),
    }
}

/// Static (`omega = 0`) electric residual `D Es + Es . eps_vec + rho/sqrt(eps)`.
pub fn static_electric_residual(
    escaled: &QuatField,
    t: &TransformedQuantities,
    src: &SourceData,
    x: Point,
) -> Result<Biquaternion> {
    ensure_static(src)?;
    escaled.ensure_regular(x)?;
    let es = Biquaternion::from_vector(escaled.vector_at(x)?);
    let eps_vec = Biquaternion::from_vector(t.eps_vec.vector_at(x)?);
    Ok(apply_d(escaled, x)?
        + es * eps_vec
        + Biquaternion::from_scalar(src.charge_at(x) / t.sqrt_eps.eval(x)))
}

/// Static (`omega = 0`) magnetic residual `D Hs + Hs . mu_vec - sqrt(mu) j`.
pub fn static_magnetic_residual(
    hscaled: &QuatField,
    t: &TransformedQuantities,
    src: &SourceData,
    x: Point,
) -> Result<Biquaternion> {
    ensure_static(src)?;
    hscaled.ensure_regular(x)?;
    let hs = Biquaternion::from_vector(hscaled.vector_at(x)?);
    let mu_vec = Biquaternion::from_vector(t.mu_vec.vector_at(x)?);
    Ok(apply_d(hscaled, x)?
        + hs * mu_vec
        - Biquaternion::from_vector(src.current_at(x)) * t.sqrt_mu.eval(x))
}

fn ensure_static(src: &SourceData) -> Result<()> {
    if src.omega != Complex64::new(0.0, 0.0) {
        return Err(Error::contract(format!(
            "static residuals need omega = 0, got {}",
            src.omega
        )));
    }
    Ok(())
}

/// Aggregated residual magnitudes over a grid sweep.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ResidualNorms {
    pub linf: f64,
    pub l2: f64,
}

/// Outcome of a grid sweep: norms plus the number of contributing nodes.
#[derive(Clone, Copy, Debug)]
pub struct SweepOutcome {
    pub norms: ResidualNorms,
    pub nodes: usize,
}

/// Evaluate a pointwise residual over every non-excluded node of `spec` and
/// aggregate max and Euclidean norms of the per-node max-magnitudes.
///
/// The evaluator may return `Ok(None)` to skip a node (e.g. outside the
/// region of interest). Per-node magnitudes are reduced with a pairwise
/// tree sum in storage order, so the result does not depend on the worker
/// count.
pub fn sweep<F>(spec: &GridSpec, eval: F) -> Result<SweepOutcome>
where
    F: Fn(Point) -> Result<Option<Biquaternion>> + Sync,
{
    let nodes: Vec<Point> = spec
        .iter_indices()
        .map(|(i, j, k)| spec.node(i, j, k))
        .filter(|&p| !spec.excluded(p))
        .collect();

    let evaluated: Vec<Result<Option<f64>>> = nodes
        .par_iter()
        .map(|&p| eval(p).map(|r| r.map(|q| q.norm_inf())))
        .collect();

    let mut magnitudes = Vec::with_capacity(evaluated.len());
    for r in evaluated {
        if let Some(m) = r? {
            magnitudes.push(m);
        }
    }
    if magnitudes.is_empty() {
        return Err(Error::config("grid sweep has no valid nodes".to_string()));
    }
    let linf = magnitudes.iter().copied().fold(0.0, f64::max);
    let squares: Vec<f64> = magnitudes.iter().map(|m| m * m).collect();
    let l2 = pairwise_sum(&squares).sqrt();
    Ok(SweepOutcome { norms: ResidualNorms { linf, l2 }, nodes: magnitudes.len() })
}

fn pairwise_sum(v: &[f64]) -> f64 {
    match v.len() {
        0 => 0.0,
        1 => v[0],
        n => {
            let (a, b) = v.split_at(n / 2);
            pairwise_sum(a) + pairwise_sum(b)
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
struct ComplexParts {
    re: f64,
    im: f64,
}

impl From<Complex64> for ComplexParts {
    fn from(c: Complex64) -> Self {
        Self { re: c.re, im: c.im }
    }
}

#[derive(Clone, Debug, Serialize)]
struct GridMeta {
    h: f64,
    counts: [usize; 3],
    exclusion: Option<crate::calculus::Ball>,
}

/// Residual norms over a grid, with enough metadata to reproduce the run.
/// Serializes to the documented JSON layout
/// `{profile, omega, grid:{h,counts,exclusion}, residuals:{s1:{linf,l2},...}}`.
#[derive(Clone, Debug, Serialize)]
pub struct ResidualReport {
    profile: String,
    omega: ComplexParts,
    grid: GridMeta,
    residuals: BTreeMap<String, ResidualNorms>,
}

impl ResidualReport {
    pub fn new(profile: impl Into<String>, omega: Complex64, spec: &GridSpec) -> Self {
        Self {
            profile: profile.into(),
            omega: omega.into(),
            grid: GridMeta { h: spec.spacing, counts: spec.counts, exclusion: spec.exclusion },
            residuals: BTreeMap::new(),
        }
    }

    /// Record norms under a residual key (`s1`..`s4`, `R1`, `R2`).
    pub fn record(&mut self, key: &str, norms: ResidualNorms) {
        self.residuals.insert(key.to_string(), norms);
    }

    pub fn norms(&self, key: &str) -> Option<ResidualNorms> {
        self.residuals.get(key).copied()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}
