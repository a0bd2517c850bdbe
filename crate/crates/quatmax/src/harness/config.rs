//! Run configuration shared by the CLI subcommands.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::calculus::{Ball, GridSpec, Point, ScalarField};
use crate::darboux::fundamental_psi;
use crate::error::{Error, Result};
use crate::media::parse_params;

/// Configuration of a verification or generation run. Every randomized
/// suite draws from a generator seeded with `seed`, which is echoed in the
/// report.
#[derive(Clone, Debug)]
pub struct RunConfig {
    /// Raw profile spec string (`exp:a=1,0,0`, ...); suite-specific default
    /// when absent.
    pub profile: Option<String>,
    pub omega: Complex64,
    /// Grid override; suites fall back to their documented defaults.
    pub grid: Option<GridSpec>,
    pub seed: u64,
    /// Parameter of the constant-potential fundamental solution.
    pub c: Complex64,
    /// Per-check tolerance overrides keyed by check name.
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            profile: None,
            omega: Complex64::new(1.0, 0.0),
            grid: None,
            seed: 42,
            c: Complex64::new(1.0, 0.0),
            tolerances: BTreeMap::new(),
        }
    }
}

impl RunConfig {
    /// Default verification grid: `[-1, 1]^3`, 33 nodes per axis (h = 1/16).
    pub fn default_grid() -> GridSpec {
        GridSpec::centered_cube(1.0, 33).expect("static grid parameters")
    }

    /// Default grid for fundamental-solution runs: `[-2, 2]^3`, 33 nodes
    /// per axis, exclusion ball of radius 0.1 at the origin.
    pub fn fundamental_grid() -> GridSpec {
        GridSpec::centered_cube(2.0, 33)
            .expect("static grid parameters")
            .with_exclusion(Ball { center: [0.0; 3], radius: 0.1 })
            .expect("static exclusion parameters")
    }

    pub fn tolerance(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }
}

/// Parse a complex scalar given as `re` or `re,im`.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').collect();
    let bad = || Error::config(format!("expected `re` or `re,im`, got `{s}`"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(re.trim().parse().map_err(|_| bad())?, 0.0)),
        [re, im] => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad())?,
            im.trim().parse().map_err(|_| bad())?,
        )),
        _ => Err(bad()),
    }
}

/// Parse `o=x,y,z,h=H,n=N1,N2,N3` (or `n=N` for a cube) into a grid spec.
pub fn parse_grid(s: &str) -> Result<GridSpec> {
    let params = parse_params(s)?;
    let origin = params
        .get("o")
        .filter(|v| v.len() == 3)
        .map(|v| [v[0], v[1], v[2]])
        .ok_or_else(|| Error::config(format!("grid spec `{s}` needs o=x,y,z")))?;
    let spacing = params
        .get("h")
        .and_then(|v| v.first().copied())
        .ok_or_else(|| Error::config(format!("grid spec `{s}` needs h=spacing")))?;
    let counts = params
        .get("n")
        .filter(|v| v.len() == 1 || v.len() == 3)
        .map(|v| {
            if v.len() == 1 {
                [v[0] as usize; 3]
            } else {
                [v[0] as usize, v[1] as usize, v[2] as usize]
            }
        })
        .ok_or_else(|| Error::config(format!("grid spec `{s}` needs n=N or n=N1,N2,N3")))?;
    GridSpec::new(origin, spacing, counts)
}

/// Parse `c=x,y,z,r=R` into an exclusion ball.
pub fn parse_exclusion(s: &str) -> Result<Ball> {
    let params = parse_params(s)?;
    let center = params
        .get("c")
        .filter(|v| v.len() == 3)
        .map(|v| [v[0], v[1], v[2]])
        .ok_or_else(|| Error::config(format!("exclusion spec `{s}` needs c=x,y,z")))?;
    let radius = params
        .get("r")
        .and_then(|v| v.first().copied())
        .ok_or_else(|| Error::config(format!("exclusion spec `{s}` needs r=radius")))?;
    if radius <= 0.0 {
        return Err(Error::config(format!("exclusion radius must be positive, got {radius}")));
    }
    Ok(Ball { center, radius })
}

/// Parse `name=value` tolerance overrides.
pub fn parse_tolerances(items: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in items {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Error::config(format!("tolerance override `{item}` needs name=value")))?;
        let v: f64 = value
            .parse()
            .map_err(|_| Error::config(format!("bad tolerance value in `{item}`")))?;
        if v <= 0.0 {
            return Err(Error::config(format!("tolerance in `{item}` must be positive")));
        }
        out.insert(name.to_string(), v);
    }
    Ok(out)
}

/// A named scalar seed solution for generation commands.
pub struct PsiSpec {
    pub name: String,
    pub field: ScalarField,
}

/// Parse a seed-solution spec:
/// `wave:c=c1,c2,c3` for `exp(i c . x)`, `exp:a=a1,a2,a3[,d=D]` for
/// `exp(a . x + d)`, `radial:c=C` for the radial kernel, and
/// `linear:a=a1,a2,a3` for the harmonic form `a . x`.
pub fn parse_psi(s: &str) -> Result<PsiSpec> {
    let (name, rest) = match s.split_once(':') {
        Some((n, r)) => (n, r),
        None => (s, ""),
    };
    let params = parse_params(rest)?;
    let vec3 = |key: &str| -> Option<[f64; 3]> {
        params.get(key).filter(|v| v.len() == 3).map(|v| [v[0], v[1], v[2]])
    };
    match name {
        "wave" => {
            let c = vec3("c").ok_or_else(|| Error::config(format!("psi `{s}` needs c=c1,c2,c3")))?;
            let ic = [
                Complex64::new(0.0, c[0]),
                Complex64::new(0.0, c[1]),
                Complex64::new(0.0, c[2]),
            ];
            Ok(PsiSpec {
                name: format!("wave(c={},{},{})", c[0], c[1], c[2]),
                field: ScalarField::exp_linear(ic, Complex64::new(0.0, 0.0)),
            })
        }
        "exp" => {
            let a = vec3("a").ok_or_else(|| Error::config(format!("psi `{s}` needs a=a1,a2,a3")))?;
            let d = params.get("d").and_then(|v| v.first().copied()).unwrap_or(0.0);
            let av = [
                Complex64::new(a[0], 0.0),
                Complex64::new(a[1], 0.0),
                Complex64::new(a[2], 0.0),
            ];
            Ok(PsiSpec {
                name: format!("exp(a={},{},{}, d={d})", a[0], a[1], a[2]),
                field: ScalarField::exp_linear(av, Complex64::new(d, 0.0)),
            })
        }
        "radial" => {
            let c = params
                .get("c")
                .and_then(|v| v.first().copied())
                .ok_or_else(|| Error::config(format!("psi `{s}` needs c=value")))?;
            Ok(PsiSpec {
                name: format!("radial(c={c})"),
                field: fundamental_psi(Complex64::new(c, 0.0)),
            })
        }
        "linear" => {
            let a = vec3("a").ok_or_else(|| Error::config(format!("psi `{s}` needs a=a1,a2,a3")))?;
            let av = [
                Complex64::new(a[0], 0.0),
                Complex64::new(a[1], 0.0),
                Complex64::new(a[2], 0.0),
            ];
            Ok(PsiSpec {
                name: format!("linear(a={},{},{})", a[0], a[1], a[2]),
                field: ScalarField::linear(av, Complex64::new(0.0, 0.0)),
            })
        }
        other => Err(Error::config(format!("unknown psi kind `{other}`"))),
    }
}

/// Uniform sample points in `[-half, half]^3` with `|x| > min_radius`,
/// drawn from the given generator.
pub fn sample_points(
    rng: &mut impl rand::Rng,
    n: usize,
    half: f64,
    min_radius: f64,
) -> Vec<Point> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = [
            rng.gen_range(-half..=half),
            rng.gen_range(-half..=half),
            rng.gen_range(-half..=half),
        ];
        if (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() > min_radius {
            out.push(p);
        }
    }
    out
}
