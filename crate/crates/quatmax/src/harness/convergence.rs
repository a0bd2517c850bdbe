//! Grid refinement studies for the discretized operator.

use num_complex::Complex64;
use serde::Serialize;

use crate::biquat::{Biquaternion, C_ZERO};
use crate::calculus::{GridField, GridSpec, Point, QuatField, ScalarField};
use crate::darboux::{darboux_transform, GeneratingFunction, SchrodingerSolution};
use crate::error::{Error, Result};

use super::report::unix_now;

/// Operations a refinement study can target.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
#[clap(rename_all = "kebab-case")]
pub enum ConvergenceOp {
    /// Grid `D` on `sin(x1)` against the exact derivative.
    D,
    /// Grid `D` on the linear field `x1`; central differences are exact, so
    /// the study reports `exact` instead of an order.
    Linear,
    /// Grid-differenced residual of a transformed field (exact residual is
    /// zero, so the observed error is pure truncation).
    Darboux,
}

impl ConvergenceOp {
    pub fn name(&self) -> &'static str {
        match self {
            ConvergenceOp::D => "d",
            ConvergenceOp::Linear => "linear",
            ConvergenceOp::Darboux => "darboux",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ConvergenceLevel {
    pub h: f64,
    pub nodes_per_axis: usize,
    pub linf: f64,
}

/// Outcome of a refinement study. `passed` means every observed order fell
/// in `[1.8, 2.2]`, or the errors were at rounding level (`exact`).
#[derive(Clone, Debug, Serialize)]
pub struct ConvergenceReport {
    pub op: String,
    pub levels: Vec<ConvergenceLevel>,
    pub orders: Vec<f64>,
    pub exact: bool,
    pub monotone: bool,
    pub passed: bool,
    pub timestamp_unix: u64,
}

impl ConvergenceReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

const ORDER_WINDOW: (f64, f64) = (1.8, 2.2);
const EXACT_FLOOR: f64 = 1e-12;

/// Run the study on `[-1, 1]^3`, starting at spacing `base_h` and halving
/// it `levels - 1` times.
pub fn run_convergence(op: ConvergenceOp, base_h: f64, levels: usize) -> Result<ConvergenceReport> {
    if levels < 2 {
        return Err(Error::config("a refinement study needs at least 2 levels".to_string()));
    }
    if !(base_h.is_finite() && base_h > 0.0 && base_h <= 0.5) {
        return Err(Error::config(format!(
            "base spacing must be in (0, 0.5], got {base_h}"
        )));
    }

    let mut reported = Vec::new();
    let mut h = base_h;
    for _ in 0..levels {
        let n = (2.0 / h).round() as usize + 1;
        let spec = GridSpec::new([-1.0, -1.0, -1.0], 2.0 / (n - 1) as f64, [n, n, n])?;
        let linf = level_error(op, &spec)?;
        reported.push(ConvergenceLevel { h: spec.spacing, nodes_per_axis: n, linf });
        h /= 2.0;
    }

    let exact = reported.iter().all(|l| l.linf <= EXACT_FLOOR);
    let monotone = reported.windows(2).all(|w| w[1].linf < w[0].linf);
    let orders: Vec<f64> = if exact {
        Vec::new()
    } else {
        reported.windows(2).map(|w| (w[0].linf / w[1].linf).log2()).collect()
    };
    let orders_ok = orders
        .iter()
        .all(|&o| (ORDER_WINDOW.0..=ORDER_WINDOW.1).contains(&o));
    let passed = exact || (monotone && orders_ok);

    Ok(ConvergenceReport {
        op: op.name().to_string(),
        levels: reported,
        orders,
        exact,
        monotone,
        passed,
        timestamp_unix: unix_now(),
    })
}

fn level_error(op: ConvergenceOp, spec: &GridSpec) -> Result<f64> {
    match op {
        ConvergenceOp::D => {
            let mut a = [C_ZERO; 3];
            a[0] = Complex64::new(1.0, 0.0);
            let f = QuatField::from_scalar(ScalarField::sin_linear(a, C_ZERO));
            let sampled = GridField::sample(spec, &f);
            let df = sampled.apply_d()?;
            Ok(df.max_error_vs(|p: Point| Biquaternion::I1 * Complex64::new(p[0].cos(), 0.0)))
        }
        ConvergenceOp::Linear => {
            let f = QuatField::from_scalar(ScalarField::coordinate(0));
            let sampled = GridField::sample(spec, &f);
            let df = sampled.apply_d()?;
            Ok(df.max_error_vs(|_| Biquaternion::I1))
        }
        ConvergenceOp::Darboux => {
            let i = Complex64::new(0.0, 1.0);
            let samples: Vec<Point> = vec![[0.3, -0.5, 0.7], [-0.8, 0.2, 0.1], [0.5, 0.9, -0.4]];
            let g = GeneratingFunction::new(
                ScalarField::exp_linear([C_ZERO, C_ZERO, i], C_ZERO),
                samples.clone(),
            )?;
            let s = SchrodingerSolution::new(
                ScalarField::exp_linear([i, C_ZERO, C_ZERO], C_ZERO),
                g.potential().clone(),
                &samples,
            )?;
            let f = darboux_transform(&g, &s)?;
            let sampled = GridField::sample(spec, &f);
            let df = sampled.apply_d()?;
            let mut linf: f64 = 0.0;
            for (ii, jj, kk) in spec.iter_indices() {
                if !df.is_valid(ii, jj, kk) {
                    continue;
                }
                let p = spec.node(ii, jj, kk);
                let residual = df.value(ii, jj, kk)
                    + Biquaternion::from_vector(f.vector_at(p)?)
                        * Biquaternion::from_vector(g.alpha().vector_at(p)?);
                linf = linf.max(residual.norm_inf());
            }
            Ok(linf)
        }
    }
}
