//! Seeded verification suites behind `quatmax verify`.
//!
//! Each suite turns one cluster of library invariants into named checks
//! with pinned tolerances. Sample counts are fixed (10^5 algebra triples,
//! 10^4 algebra pairs, 10^3 field points per case) and all randomness comes
//! from a recorded seed, so reports are reproducible.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::biquat::{
    cnorm_inf, dot, dot_via_anticommutator, mul_via_basis_table, vnorm_inf, vsub, Biquaternion,
    C_ONE, C_ZERO,
};
use crate::calculus::{
    apply_d, d_squared_plus_laplacian, gauge_identity_residual, leibniz_residual, vector_form_d,
    GridField, GridSpec, Point, QuatField, ScalarField,
};
use crate::darboux::{
    darboux_transform, dirac_residual, factorization_residual, fundamental_psi,
    fundamental_solution, helmholtz_residual, potential_from_phi, riccati_residual,
    static_maxwell_solution, GeneratingFunction, SchrodingerSolution,
};
use crate::error::{Error, Result};
use crate::maxwell::{
    classical_from_quaternionic, classical_residuals, equivalence_map, quaternionic_residuals,
    sweep, ClassicalResiduals,
};
use crate::media::{log_derivative_vector, scale_fields, transform, MediumProfile, SourceData};

use super::config::{sample_points, RunConfig};
use super::report::{CheckResult, SuiteReport};

/// The named verification suites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
#[clap(rename_all = "kebab-case")]
pub enum Suite {
    Algebra,
    Identities,
    Riccati,
    Darboux,
    Equivalence,
    Fundamental,
    All,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Algebra => "algebra",
            Suite::Identities => "identities",
            Suite::Riccati => "riccati",
            Suite::Darboux => "darboux",
            Suite::Equivalence => "equivalence",
            Suite::Fundamental => "fundamental",
            Suite::All => "all",
        }
    }
}

/// Run a suite and assemble its report.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<SuiteReport> {
    let checks = match suite {
        Suite::Algebra => algebra_checks(cfg)?,
        Suite::Identities => identities_checks(cfg)?,
        Suite::Riccati => riccati_checks(cfg)?,
        Suite::Darboux => darboux_checks(cfg)?,
        Suite::Equivalence => equivalence_checks(cfg)?,
        Suite::Fundamental => fundamental_checks(cfg)?,
        Suite::All => {
            let mut all = Vec::new();
            all.extend(algebra_checks(cfg)?);
            all.extend(identities_checks(cfg)?);
            all.extend(equivalence_checks(cfg)?);
            all.extend(riccati_checks(cfg)?);
            all.extend(darboux_checks(cfg)?);
            all.extend(fundamental_checks(cfg)?);
            all
        }
    };
    Ok(SuiteReport::new(
        suite.name(),
        cfg.seed,
        cfg.omega,
        cfg.profile.clone(),
        checks,
    ))
}

/// Track the largest magnitude seen and where it occurred.
struct MaxTracker {
    max: f64,
    at: Option<String>,
}

impl MaxTracker {
    fn new() -> Self {
        Self { max: 0.0, at: None }
    }

    fn update(&mut self, value: f64, location: impl FnOnce() -> String) {
        if value > self.max || self.at.is_none() {
            self.max = value;
            self.at = Some(location());
        }
    }

    fn detail(&self) -> Option<String> {
        self.at.as_ref().map(|loc| format!("worst at {loc}"))
    }
}

fn fmt_point(x: Point) -> String {
    format!("[{:.4}, {:.4}, {:.4}]", x[0], x[1], x[2])
}

fn random_biquat(rng: &mut impl Rng) -> Biquaternion {
    let mut parts = [C_ZERO; 4];
    for p in &mut parts {
        *p = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
    }
    Biquaternion::from_components(parts)
}

fn suite_rng(cfg: &RunConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(salt))
}

/// Profiles a suite iterates over: the single `--profile` when given,
/// otherwise the full catalog.
fn suite_profiles(cfg: &RunConfig) -> Result<Vec<MediumProfile>> {
    match &cfg.profile {
        Some(spec) => Ok(vec![MediumProfile::parse(spec)?]),
        None => Ok(MediumProfile::catalog()),
    }
}

/// Keep sample points away from the origin for profiles singular there.
fn profile_min_radius(m: &MediumProfile) -> f64 {
    if m.is_singular([0.0; 3]) {
        0.1
    } else {
        0.0
    }
}

// ---------------------------------------------------------------- algebra

fn algebra_checks(cfg: &RunConfig) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();
    let mut rng = suite_rng(cfg, 1);

    // all 16 unit products, exactly
    let mut table_defect: f64 = 0.0;
    const EXPECTED: [[(f64, usize); 4]; 4] = [
        [(1.0, 0), (1.0, 1), (1.0, 2), (1.0, 3)],
        [(1.0, 1), (-1.0, 0), (1.0, 3), (-1.0, 2)],
        [(1.0, 2), (-1.0, 3), (-1.0, 0), (1.0, 1)],
        [(1.0, 3), (1.0, 2), (-1.0, 1), (-1.0, 0)],
    ];
    for a in 0..4 {
        for b in 0..4 {
            let (sign, idx) = EXPECTED[a][b];
            let product = Biquaternion::basis(a) * Biquaternion::basis(b);
            let defect = (product - Biquaternion::basis(idx) * sign).norm_inf();
            table_defect = table_defect.max(defect);
        }
    }
    checks.push(CheckResult::upper(
        "algebra.basis-table",
        table_defect,
        cfg.tolerance("algebra.basis-table", 0.0),
        16,
        None,
    ));

    let triples = 100_000;
    let mut assoc = MaxTracker::new();
    let mut distrib = MaxTracker::new();
    for i in 0..triples {
        let p = random_biquat(&mut rng);
        let q = random_biquat(&mut rng);
        let r = random_biquat(&mut rng);
        let scale = 1.0 + p.norm_inf() * q.norm_inf() * r.norm_inf();
        assoc.update(
            ((p * q) * r - p * (q * r)).norm_inf() / scale,
            || format!("triple {i}"),
        );
        let lambda = Complex64::new(rng.gen_range(-1.0..=1.0), rng.gen_range(-1.0..=1.0));
        let d1 = ((p + q) * r - (p * r + q * r)).norm_inf();
        let d2 = ((p * lambda) * q - (p * q) * lambda).norm_inf();
        let d3 = (p * (q * lambda) - (p * q) * lambda).norm_inf();
        distrib.update(d1.max(d2).max(d3) / scale, || format!("triple {i}"));
    }
    checks.push(CheckResult::upper(
        "algebra.associativity",
        assoc.max,
        cfg.tolerance("algebra.associativity", 1e-12),
        triples,
        assoc.detail(),
    ));
    checks.push(CheckResult::upper(
        "algebra.distributivity",
        distrib.max,
        cfg.tolerance("algebra.distributivity", 1e-12),
        triples,
        distrib.detail(),
    ));

    let pairs = 10_000;
    let mut formula = MaxTracker::new();
    let mut anti_dot = MaxTracker::new();
    let mut anti_purity = MaxTracker::new();
    for i in 0..pairs {
        let p = random_biquat(&mut rng);
        let q = random_biquat(&mut rng);
        let a = p * q;
        let b = mul_via_basis_table(p, q);
        formula.update((a - b).norm_inf() / (1.0 + a.norm_inf()), || format!("pair {i}"));

        let pv = p.vector;
        let qv = q.vector;
        anti_dot.update(
            cnorm_inf(dot(pv, qv) - dot_via_anticommutator(pv, qv)),
            || format!("pair {i}"),
        );
        let bp = Biquaternion::from_vector(pv);
        let bq = Biquaternion::from_vector(qv);
        let anti = bp * bq + bq * bp;
        anti_purity.update(vnorm_inf(anti.vector), || format!("pair {i}"));
    }
    checks.push(CheckResult::upper(
        "algebra.formula-vs-table",
        formula.max,
        cfg.tolerance("algebra.formula-vs-table", 1e-14),
        pairs,
        formula.detail(),
    ));
    checks.push(CheckResult::upper(
        "algebra.anticommutator-dot",
        anti_dot.max,
        cfg.tolerance("algebra.anticommutator-dot", 1e-14),
        pairs,
        anti_dot.detail(),
    ));
    checks.push(CheckResult::upper(
        "algebra.anticommutator-purity",
        anti_purity.max,
        cfg.tolerance("algebra.anticommutator-purity", 1e-14),
        pairs,
        anti_purity.detail(),
    ));
    Ok(checks)
}

// ------------------------------------------------------------- identities

fn identities_checks(cfg: &RunConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(cfg, 2);
    let profiles = suite_profiles(cfg)?;
    let points_per_profile = 1000;

    let mut d_forms = MaxTracker::new();
    let mut leibniz = MaxTracker::new();
    let mut gauge = MaxTracker::new();
    let mut d_squared = MaxTracker::new();
    let mut total_points = 0usize;

    for m in &profiles {
        let min_r = profile_min_radius(m);
        let pts = sample_points(&mut rng, points_per_profile, 1.0, min_r);
        total_points += pts.len();

        let f_full = QuatField::new([
            ScalarField::random_trig(&mut rng, 2),
            ScalarField::random_trig(&mut rng, 2),
            ScalarField::random_trig(&mut rng, 2),
            ScalarField::random_trig(&mut rng, 2),
        ]);
        let f_vec = QuatField::random_vector_trig(&mut rng, 2);
        let u_trig = ScalarField::random_trig(&mut rng, 3);

        let mut phis: Vec<(&'static str, ScalarField)> = vec![("eps", m.eps.clone())];
        if let Some(se) = m.sqrt_eps_field() {
            phis.push(("sqrt-eps", se.clone()));
        }

        for &x in &pts {
            let a = apply_d(&f_full, x)?;
            let b = vector_form_d(&f_full, x)?;
            d_forms.update((a - b).norm_inf(), || format!("{} {}", m.name, fmt_point(x)));

            for (label, phi) in &phis {
                for f in [&f_full, &f_vec] {
                    let r = leibniz_residual(phi, f, x)?;
                    leibniz.update(r.norm_inf(), || {
                        format!("{} phi={label} {}", m.name, fmt_point(x))
                    });
                    let r = gauge_identity_residual(phi, f, x)?;
                    gauge.update(r.norm_inf(), || {
                        format!("{} phi={label} {}", m.name, fmt_point(x))
                    });
                }
                let r = d_squared_plus_laplacian(phi, x)?;
                d_squared.update(r.norm_inf(), || {
                    format!("{} u={label} {}", m.name, fmt_point(x))
                });
            }
            let r = d_squared_plus_laplacian(&u_trig, x)?;
            d_squared.update(r.norm_inf(), || format!("{} u=trig {}", m.name, fmt_point(x)));
        }
    }

    Ok(vec![
        CheckResult::upper(
            "identities.d-forms-agree",
            d_forms.max,
            cfg.tolerance("identities.d-forms-agree", 1e-13),
            total_points,
            d_forms.detail(),
        ),
        CheckResult::upper(
            "identities.leibniz",
            leibniz.max,
            cfg.tolerance("identities.leibniz", 1e-10),
            total_points,
            leibniz.detail(),
        ),
        CheckResult::upper(
            "identities.gauge",
            gauge.max,
            cfg.tolerance("identities.gauge", 1e-10),
            total_points,
            gauge.detail(),
        ),
        CheckResult::upper(
            "identities.d-squared",
            d_squared.max,
            cfg.tolerance("identities.d-squared", 1e-10),
            total_points,
            d_squared.detail(),
        ),
    ])
}

// ------------------------------------------------------------ equivalence

fn equivalence_checks(cfg: &RunConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(cfg, 3);
    let media = match &cfg.profile {
        Some(spec) => vec![MediumProfile::parse(spec)?],
        None => vec![
            MediumProfile::vacuum(),
            MediumProfile::exponential([C_ONE, C_ZERO, C_ZERO], C_ZERO),
            MediumProfile::product_exponential(
                [C_ONE, Complex64::new(2.0, 0.0), C_ZERO],
                [C_ZERO, C_ZERO, C_ONE],
            ),
        ],
    };
    let omega = cfg.omega;
    let points_per_medium = 1000;

    let mut map_vs_direct = MaxTracker::new();
    let mut round_trip = MaxTracker::new();
    let mut split = MaxTracker::new();
    let mut total = 0usize;

    for m in &media {
        let t = transform(m, omega)?;
        let min_r = profile_min_radius(m);
        let pts = sample_points(&mut rng, points_per_medium, 1.0, min_r);
        total += pts.len();

        let e = QuatField::random_vector_trig(&mut rng, 2);
        let h = QuatField::random_vector_trig(&mut rng, 2);
        let sources = [
            SourceData::zero(omega),
            SourceData::new(
                |x| Complex64::new(x[0].cos(), 0.3 * x[1]),
                |x| {
                    [
                        Complex64::new(x[2].sin(), 0.0),
                        C_ZERO,
                        Complex64::new(0.0, x[0]),
                    ]
                },
                omega,
            ),
        ];
        let (es, hs) = scale_fields(&e, &h, &t);

        for &x in &pts {
            for src in &sources {
                let classical = classical_residuals(&e, &h, m, src, x)?;
                let direct = quaternionic_residuals(&es, &hs, &t, src, x)?;
                let mapped = equivalence_map(&classical, &t, x);
                let diff = (direct.electric - mapped.electric)
                    .norm_inf()
                    .max((direct.magnetic - mapped.magnetic).norm_inf());
                map_vs_direct.update(diff, || format!("{} {}", m.name, fmt_point(x)));

                let back = classical_from_quaternionic(&direct, &t, x);
                let rt = cnorm_inf(back.gauss_electric - classical.gauss_electric)
                    .max(vnorm_inf(vsub(back.faraday, classical.faraday)))
                    .max(cnorm_inf(back.gauss_magnetic - classical.gauss_magnetic))
                    .max(vnorm_inf(vsub(back.ampere, classical.ampere)));
                round_trip.update(rt, || format!("{} {}", m.name, fmt_point(x)));

                // scalar inputs produce scalar outputs and vector inputs
                // produce vector outputs
                let scalars_only = ClassicalResiduals {
                    gauss_electric: classical.gauss_electric,
                    faraday: [C_ZERO; 3],
                    gauss_magnetic: classical.gauss_magnetic,
                    ampere: [C_ZERO; 3],
                };
                let q = equivalence_map(&scalars_only, &t, x);
                let leak_v = vnorm_inf(q.electric.vector).max(vnorm_inf(q.magnetic.vector));
                let vectors_only = ClassicalResiduals {
                    gauss_electric: C_ZERO,
                    faraday: classical.faraday,
                    gauss_magnetic: C_ZERO,
                    ampere: classical.ampere,
                };
                let q = equivalence_map(&vectors_only, &t, x);
                let leak_s = cnorm_inf(q.electric.scalar).max(cnorm_inf(q.magnetic.scalar));
                split.update(leak_v.max(leak_s), || format!("{} {}", m.name, fmt_point(x)));
            }
        }
    }

    Ok(vec![
        CheckResult::upper(
            "equivalence.map-vs-direct",
            map_vs_direct.max,
            cfg.tolerance("equivalence.map-vs-direct", 1e-11),
            total,
            map_vs_direct.detail(),
        ),
        CheckResult::upper(
            "equivalence.inverse-round-trip",
            round_trip.max,
            cfg.tolerance("equivalence.inverse-round-trip", 1e-12),
            total,
            round_trip.detail(),
        ),
        CheckResult::upper(
            "equivalence.scalar-vector-split",
            split.max,
            cfg.tolerance("equivalence.scalar-vector-split", 1e-13),
            total,
            split.detail(),
        ),
    ])
}

// ---------------------------------------------------------------- riccati

fn riccati_checks(cfg: &RunConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(cfg, 4);
    let profiles = suite_profiles(cfg)?;
    let points_per_profile = 1000;

    let mut log_derivative = MaxTracker::new();
    let mut factorization = MaxTracker::new();
    // worst (smallest) witness over perturbable profiles
    let mut witness_min = f64::INFINITY;
    let mut witness_at: Option<String> = None;
    let mut witness_profiles = 0usize;
    let mut total = 0usize;

    for m in &profiles {
        let Some(phi) = m.sqrt_eps_field() else { continue };
        let alpha = log_derivative_vector(phi)?;
        let v = potential_from_phi(phi)?;
        let min_r = profile_min_radius(m);
        let pts = sample_points(&mut rng, points_per_profile, 1.0, min_r);
        total += pts.len();

        for &x in &pts {
            let r = riccati_residual(&alpha, &v, x)?;
            log_derivative.update(r.norm_inf(), || format!("{} {}", m.name, fmt_point(x)));
        }

        // perturbation direction with the largest mean coupling component
        let probes = sample_points(&mut rng, 32, 1.0, min_r.max(0.2));
        let mut means = [0.0f64; 3];
        for &x in &probes {
            let a = alpha.eval(x);
            for k in 0..3 {
                means[k] += cnorm_inf(a.vector[k]);
            }
        }
        let best_axis = (0..3).max_by(|&a, &b| means[a].total_cmp(&means[b])).unwrap();
        if means[best_axis] > 1e-12 {
            witness_profiles += 1;
            let direction = Biquaternion::basis(best_axis + 1) * 0.01;
            let perturbed = alpha.add(&QuatField::constant(direction));
            let mut profile_witness: f64 = 0.0;
            for &x in &pts {
                profile_witness =
                    profile_witness.max(riccati_residual(&perturbed, &v, x)?.norm_inf());
            }
            if profile_witness < witness_min {
                witness_min = profile_witness;
                witness_at = Some(format!("profile {}", m.name));
            }
        }

        let us = [
            ScalarField::one(),
            ScalarField::coordinate(0),
            ScalarField::random_trig(&mut rng, 3),
        ];
        for &x in &pts {
            for u in &us {
                let r = factorization_residual(u, &alpha, &v, x)?;
                factorization.update(r.norm_inf(), || format!("{} {}", m.name, fmt_point(x)));
            }
        }
    }

    let mut checks = vec![CheckResult::upper(
        "riccati.log-derivative",
        log_derivative.max,
        cfg.tolerance("riccati.log-derivative", 1e-10),
        total,
        log_derivative.detail(),
    )];
    if witness_profiles > 0 {
        checks.push(CheckResult::lower(
            "riccati.perturbation-witness",
            witness_min,
            cfg.tolerance("riccati.perturbation-witness", 1e-3),
            witness_profiles,
            witness_at.map(|w| format!("weakest witness: {w}")),
        ));
    }
    checks.push(CheckResult::upper(
        "riccati.factorization",
        factorization.max,
        cfg.tolerance("riccati.factorization", 1e-9),
        total,
        factorization.detail(),
    ));
    Ok(checks)
}

// ---------------------------------------------------------------- darboux

struct TransformPair {
    name: &'static str,
    phi: ScalarField,
    psi: ScalarField,
    min_radius: f64,
}

fn builtin_pairs() -> Vec<TransformPair> {
    let i = Complex64::new(0.0, 1.0);
    let re = |v: f64| Complex64::new(v, 0.0);
    vec![
        TransformPair {
            name: "exp-real",
            phi: ScalarField::exp_linear([C_ONE, C_ZERO, C_ZERO], C_ZERO),
            psi: ScalarField::exp_linear([re(-1.0), C_ZERO, C_ZERO], C_ZERO),
            min_radius: 0.0,
        },
        TransformPair {
            name: "plane-wave",
            phi: ScalarField::exp_linear([C_ZERO, C_ZERO, i], C_ZERO),
            psi: ScalarField::exp_linear([i, C_ZERO, C_ZERO], C_ZERO),
            min_radius: 0.0,
        },
        TransformPair {
            name: "tilted-exp",
            phi: ScalarField::exp_linear([re(0.6), re(0.8), C_ZERO], C_ZERO),
            psi: ScalarField::exp_linear([re(-0.6), re(-0.8), C_ZERO], C_ZERO),
            min_radius: 0.0,
        },
        TransformPair {
            name: "product-exp",
            phi: ScalarField::exp_linear([C_ONE, re(2.0), C_ZERO], C_ZERO),
            psi: ScalarField::exp_linear([C_ZERO, C_ONE, re(2.0)], C_ZERO),
            min_radius: 0.0,
        },
        TransformPair {
            name: "radial-seed",
            phi: ScalarField::exp_linear([C_ZERO, C_ZERO, i], C_ZERO),
            psi: fundamental_psi(C_ONE),
            min_radius: 0.1,
        },
        TransformPair {
            name: "radial-generator",
            phi: fundamental_psi(C_ONE),
            psi: ScalarField::exp_linear([i, C_ZERO, C_ZERO], C_ZERO),
            min_radius: 0.1,
        },
    ]
}

fn darboux_checks(cfg: &RunConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(cfg, 5);
    let mut checks = Vec::new();

    let mut smooth = MaxTracker::new();
    let mut singular = MaxTracker::new();
    let mut identity = MaxTracker::new();
    let (mut smooth_n, mut singular_n, mut identity_n) = (0usize, 0usize, 0usize);

    for pair in builtin_pairs() {
        let samples = sample_points(&mut rng, 48, 1.0, pair.min_radius.max(0.15));
        let g = GeneratingFunction::new(pair.phi.clone(), samples.clone())?;
        let s = SchrodingerSolution::new(pair.psi.clone(), g.potential().clone(), &samples)?;
        let f = darboux_transform(&g, &s)?;
        let pts = sample_points(&mut rng, 1000, 1.0, pair.min_radius);
        for &x in &pts {
            let r = dirac_residual(&f, g.alpha(), x)?;
            if pair.min_radius > 0.0 {
                singular.update(r.norm_inf(), || format!("{} {}", pair.name, fmt_point(x)));
                singular_n += 1;
            } else {
                smooth.update(r.norm_inf(), || format!("{} {}", pair.name, fmt_point(x)));
                smooth_n += 1;
            }
        }

        // transforming the generator itself gives the zero field
        if pair.min_radius == 0.0 {
            let self_sol =
                SchrodingerSolution::new(pair.phi.clone(), g.potential().clone(), &samples)?;
            let f0 = darboux_transform(&g, &self_sol)?;
            for &x in pts.iter().take(200) {
                identity.update(f0.eval(x).norm_inf(), || {
                    format!("{} {}", pair.name, fmt_point(x))
                });
                identity_n += 1;
            }
        }
    }

    checks.push(CheckResult::upper(
        "darboux.annihilation",
        smooth.max,
        cfg.tolerance("darboux.annihilation", 1e-10),
        smooth_n,
        smooth.detail(),
    ));
    checks.push(CheckResult::upper(
        "darboux.annihilation-singular",
        singular.max,
        cfg.tolerance("darboux.annihilation-singular", 1e-8),
        singular_n,
        singular.detail(),
    ));
    checks.push(CheckResult::upper(
        "darboux.identity-pair",
        identity.max,
        cfg.tolerance("darboux.identity-pair", 1e-14),
        identity_n,
        identity.detail(),
    ));

    checks.push(grid_order_check(cfg)?);
    checks.extend(static_solution_checks(cfg, &mut rng)?);
    Ok(checks)
}

/// Residual of a transformed field under the grid-differenced operator:
/// truncation error is O(h^2), so halving h quarters the max residual.
fn grid_order_check(cfg: &RunConfig) -> Result<CheckResult> {
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

    let mut errors = Vec::new();
    for n in [9usize, 17, 33] {
        let spec = GridSpec::centered_cube(1.0, n)?;
        let sampled = GridField::sample(&spec, &f);
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
        errors.push(linf);
    }
    let orders: Vec<f64> = errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect();
    let worst = orders.iter().map(|o| (o - 2.0).abs()).fold(0.0, f64::max);
    let detail = format!(
        "errors {:.3e} / {:.3e} / {:.3e}, orders {:.3} / {:.3}",
        errors[0], errors[1], errors[2], orders[0], orders[1]
    );
    Ok(CheckResult::upper(
        "darboux.grid-order",
        worst,
        cfg.tolerance("darboux.grid-order", 0.2),
        errors.len(),
        Some(detail),
    ))
}

/// Fields built by the static construction must satisfy the classical
/// source-free static equations `div(eps E) = 0`, `rot E = 0`.
fn static_solution_checks(cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<CheckResult>> {
    let i = Complex64::new(0.0, 1.0);
    let re = |v: f64| Complex64::new(v, 0.0);
    let omega0 = C_ZERO;
    let src = SourceData::zero(omega0);

    // (profile, psi, annulus radius)
    let cases: Vec<(MediumProfile, ScalarField, f64, &'static str)> = vec![
        (
            MediumProfile::vacuum(),
            ScalarField::coordinate(0),
            0.0,
            "vacuum-harmonic",
        ),
        (
            MediumProfile::exponential([C_ONE, C_ZERO, C_ZERO], C_ZERO),
            ScalarField::exp_linear([re(-0.5), C_ZERO, C_ZERO], C_ZERO),
            0.0,
            "exp-decaying",
        ),
        (
            MediumProfile::planewave_phi([0.0, 0.0, 1.0]),
            ScalarField::exp_linear([i, C_ZERO, C_ZERO], C_ZERO),
            0.0,
            "planewave-crossed",
        ),
        (
            MediumProfile::planewave_phi([0.0, 0.0, 1.0]),
            fundamental_psi(C_ONE),
            0.1,
            "planewave-radial",
        ),
    ];

    let mut smooth = MaxTracker::new();
    let mut singular = MaxTracker::new();
    let (mut smooth_n, mut singular_n) = (0usize, 0usize);

    for (m, psi, min_r, label) in cases {
        let samples = sample_points(rng, 48, 1.0, min_r.max(0.15));
        let sqrt_eps = m.sqrt_eps_field().expect("catalog profile");
        let g = GeneratingFunction::new(sqrt_eps.clone(), samples.clone())?;
        let s = SchrodingerSolution::new(psi, g.potential().clone(), &samples)?;
        let e_field = static_maxwell_solution(&m, &s, &samples)?;
        let h_field = QuatField::zero();
        let pts = sample_points(rng, 1000, 1.0, min_r);
        for &x in &pts {
            let r = classical_residuals(&e_field, &h_field, &m, &src, x)?;
            let magnitude = cnorm_inf(r.gauss_electric).max(vnorm_inf(r.faraday));
            if min_r > 0.0 {
                singular.update(magnitude, || format!("{label} {}", fmt_point(x)));
                singular_n += 1;
            } else {
                smooth.update(magnitude, || format!("{label} {}", fmt_point(x)));
                smooth_n += 1;
            }
        }
    }

    Ok(vec![
        CheckResult::upper(
            "darboux.static-classical",
            smooth.max,
            cfg.tolerance("darboux.static-classical", 1e-9),
            smooth_n,
            smooth.detail(),
        ),
        CheckResult::upper(
            "darboux.static-classical-singular",
            singular.max,
            cfg.tolerance("darboux.static-classical-singular", 1e-8),
            singular_n,
            singular.detail(),
        ),
    ])
}

// ------------------------------------------------------------ fundamental

fn fundamental_checks(cfg: &RunConfig) -> Result<Vec<CheckResult>> {
    let mut rng = suite_rng(cfg, 6);
    let profile_spec = cfg
        .profile
        .clone()
        .unwrap_or_else(|| "planewave-phi:c=0,0,1".to_string());
    let m = MediumProfile::parse(&profile_spec)?;
    let phi = m.sqrt_eps_field().ok_or_else(|| {
        Error::contract(format!("profile `{}` has no smooth square root", m.name))
    })?;
    let c = cfg.c;
    let outer_radius = 2.0;

    let gen_samples = sample_points(&mut rng, 64, 1.5, 0.2);
    let g = GeneratingFunction::new(phi.clone(), gen_samples.clone())?;
    let psi = fundamental_psi(c);
    let s = SchrodingerSolution::new(psi.clone(), g.potential().clone(), &gen_samples)?;
    let f = darboux_transform(&g, &s)?;

    let pts: Vec<Point> = sample_points(&mut rng, 4000, outer_radius, 0.1)
        .into_iter()
        .filter(|p| (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt() <= outer_radius)
        .take(1000)
        .collect();

    let mut kernel = MaxTracker::new();
    let mut route = MaxTracker::new();
    for &x in &pts {
        kernel.update(cnorm_inf(helmholtz_residual(c, &psi, x)?), || fmt_point(x));
        let closed = fundamental_solution(&g, c, x)?;
        let transformed = f.eval(x);
        route.update((closed - transformed).norm_inf(), || fmt_point(x));
    }

    let spec = cfg.grid.clone().unwrap_or_else(RunConfig::fundamental_grid);
    let outcome = sweep(&spec, |p| {
        let r = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
        if r > outer_radius || f.is_singular(p) {
            return Ok(None);
        }
        dirac_residual(&f, g.alpha(), p).map(Some)
    })?;

    Ok(vec![
        CheckResult::upper(
            "fundamental.kernel-helmholtz",
            kernel.max,
            cfg.tolerance("fundamental.kernel-helmholtz", 1e-9),
            pts.len(),
            kernel.detail(),
        ),
        CheckResult::upper(
            "fundamental.route-equality",
            route.max,
            cfg.tolerance("fundamental.route-equality", 1e-11),
            pts.len(),
            route.detail(),
        ),
        CheckResult::upper(
            "fundamental.dirac-grid",
            outcome.norms.linf,
            cfg.tolerance("fundamental.dirac-grid", 1e-8),
            outcome.nodes,
            Some(format!(
                "l2={:.3e} over {} grid nodes, h={}",
                outcome.norms.l2, outcome.nodes, spec.spacing
            )),
        ),
    ])
}
