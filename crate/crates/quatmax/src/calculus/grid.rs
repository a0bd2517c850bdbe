//! Uniform Cartesian grids, grid sampling of quaternion fields, and the
//! second-order central-difference discretization of the operator `D`.
//!
//! Nodes that cannot be evaluated (inside the exclusion ball or on a
//! declared singular locus) and nodes whose difference stencil would reach
//! such a neighbor or the grid boundary are flagged invalid rather than
//! patched with one-sided stencils, so residual norms over the valid set
//! carry only interior second-order error.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::biquat::Biquaternion;
use crate::error::{Error, Result};

use super::field::{Point, QuatField};

/// Ball removed from grid evaluation.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Ball {
    pub center: Point,
    pub radius: f64,
}

impl Ball {
    pub fn contains(&self, p: Point) -> bool {
        let dx = p[0] - self.center[0];
        let dy = p[1] - self.center[1];
        let dz = p[2] - self.center[2];
        (dx * dx + dy * dy + dz * dz).sqrt() <= self.radius
    }
}

/// Uniform grid specification: `counts[k]` nodes along axis `k` starting at
/// `origin` with spacing `spacing`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GridSpec {
    pub origin: Point,
    pub spacing: f64,
    pub counts: [usize; 3],
    pub exclusion: Option<Ball>,
}

impl GridSpec {
    pub fn new(origin: Point, spacing: f64, counts: [usize; 3]) -> Result<Self> {
        if !(spacing.is_finite() && spacing > 0.0) {
            return Err(Error::config(format!("grid spacing must be positive, got {spacing}")));
        }
        if counts.iter().any(|&n| n == 0) {
            return Err(Error::config("grid counts must be positive".to_string()));
        }
        Ok(Self { origin, spacing, counts, exclusion: None })
    }

    /// Cube `[-half, half]^3` with `n` nodes per axis.
    pub fn centered_cube(half: f64, n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::config("centered cube needs at least 2 nodes per axis".to_string()));
        }
        let spacing = 2.0 * half / (n - 1) as f64;
        Self::new([-half, -half, -half], spacing, [n, n, n])
    }

    /// Attach an exclusion ball; it must lie strictly inside the box.
    pub fn with_exclusion(mut self, ball: Ball) -> Result<Self> {
        for k in 0..3 {
            let lo = self.origin[k];
            let hi = self.origin[k] + self.spacing * (self.counts[k] - 1) as f64;
            if ball.center[k] - ball.radius <= lo || ball.center[k] + ball.radius >= hi {
                return Err(Error::config(format!(
                    "exclusion ball (center {:?}, radius {}) is not strictly inside the grid box",
                    ball.center, ball.radius
                )));
            }
        }
        self.exclusion = Some(ball);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.counts[0] * self.counts[1] * self.counts[2]
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn index(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.counts[1] + j) * self.counts[2] + k
    }

    pub fn node(&self, i: usize, j: usize, k: usize) -> Point {
        [
            self.origin[0] + self.spacing * i as f64,
            self.origin[1] + self.spacing * j as f64,
            self.origin[2] + self.spacing * k as f64,
        ]
    }

    pub fn excluded(&self, p: Point) -> bool {
        self.exclusion.as_ref().is_some_and(|b| b.contains(p))
    }

    /// Iterate over `(i, j, k)` triples in storage order.
    pub fn iter_indices(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let [n1, n2, n3] = self.counts;
        (0..n1).flat_map(move |i| (0..n2).flat_map(move |j| (0..n3).map(move |k| (i, j, k))))
    }
}

/// A quaternion field sampled on a grid, with a per-node validity flag.
#[derive(Clone, Debug)]
pub struct GridField {
    pub spec: GridSpec,
    values: Vec<Biquaternion>,
    valid: Vec<bool>,
}

impl GridField {
    /// Sample `f` on `spec`. Nodes inside the exclusion ball or on the
    /// field's singular locus are flagged invalid and hold zero.
    pub fn sample(spec: &GridSpec, f: &QuatField) -> Self {
        let mut values = Vec::with_capacity(spec.len());
        let mut valid = Vec::with_capacity(spec.len());
        for (i, j, k) in spec.iter_indices() {
            let p = spec.node(i, j, k);
            if spec.excluded(p) || f.is_singular(p) {
                values.push(Biquaternion::ZERO);
                valid.push(false);
            } else {
                values.push(f.eval(p));
                valid.push(true);
            }
        }
        Self { spec: spec.clone(), values, valid }
    }

    pub fn value(&self, i: usize, j: usize, k: usize) -> Biquaternion {
        self.values[self.spec.index(i, j, k)]
    }

    pub fn is_valid(&self, i: usize, j: usize, k: usize) -> bool {
        self.valid[self.spec.index(i, j, k)]
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Central-difference `D` on interior nodes whose full 6-point stencil
    /// is valid; every other node is flagged invalid.
    pub fn apply_d(&self) -> Result<GridField> {
        let [n1, n2, n3] = self.spec.counts;
        if n1 < 3 || n2 < 3 || n3 < 3 {
            return Err(Error::config(format!(
                "central differences need at least 3 nodes per axis, grid is {n1}x{n2}x{n3}"
            )));
        }
        let h = self.spec.spacing;
        let mut values = vec![Biquaternion::ZERO; self.spec.len()];
        let mut valid = vec![false; self.spec.len()];
        for (i, j, k) in self.spec.iter_indices() {
            if i == 0 || j == 0 || k == 0 || i == n1 - 1 || j == n2 - 1 || k == n3 - 1 {
                continue;
            }
            let stencil_ok = self.is_valid(i, j, k)
                && self.is_valid(i - 1, j, k)
                && self.is_valid(i + 1, j, k)
                && self.is_valid(i, j - 1, k)
                && self.is_valid(i, j + 1, k)
                && self.is_valid(i, j, k - 1)
                && self.is_valid(i, j, k + 1);
            if !stencil_ok {
                continue;
            }
            let dx = (self.value(i + 1, j, k) - self.value(i - 1, j, k)) * (0.5 / h);
            let dy = (self.value(i, j + 1, k) - self.value(i, j - 1, k)) * (0.5 / h);
            let dz = (self.value(i, j, k + 1) - self.value(i, j, k - 1)) * (0.5 / h);
            let idx = self.spec.index(i, j, k);
            values[idx] = Biquaternion::I1 * dx + Biquaternion::I2 * dy + Biquaternion::I3 * dz;
            valid[idx] = true;
        }
        Ok(GridField { spec: self.spec.clone(), values, valid })
    }

    /// Max-norm of the difference to `exact` over valid nodes.
    pub fn max_error_vs(&self, exact: impl Fn(Point) -> Biquaternion) -> f64 {
        let mut err: f64 = 0.0;
        for (i, j, k) in self.spec.iter_indices() {
            if self.is_valid(i, j, k) {
                let p = self.spec.node(i, j, k);
                err = err.max((self.value(i, j, k) - exact(p)).norm_inf());
            }
        }
        err
    }

    /// Write the sampled field as CSV with the fixed column schema
    /// `x1,x2,x3,q0_re,q0_im,q1_re,q1_im,q2_re,q2_im,q3_re,q3_im,valid`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "x1,x2,x3,q0_re,q0_im,q1_re,q1_im,q2_re,q2_im,q3_re,q3_im,valid")?;
        for (i, j, k) in self.spec.iter_indices() {
            let p = self.spec.node(i, j, k);
            let q = self.value(i, j, k).components();
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{},{}",
                p[0],
                p[1],
                p[2],
                q[0].re,
                q[0].im,
                q[1].re,
                q[1].im,
                q[2].re,
                q[2].im,
                q[3].re,
                q[3].im,
                u8::from(self.is_valid(i, j, k)),
            )?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = File::create(path)?;
        self.write_csv(BufWriter::new(file))
    }
}
