//! Biquaternionic formulation of time-harmonic Maxwell systems in
//! inhomogeneous media.
//!
//! The crate packages four thin layers:
//!
//! - [`biquat`] — the algebra of complex quaternions (arithmetic,
//!   multiplication table, scalar-product identities).
//! - [`calculus`] — analytic scalar/quaternion fields over `R^3` with
//!   explicit derivative oracles, the first-order operator
//!   `D = i1 d1 + i2 d2 + i3 d3`, and a uniform-grid discretization of it.
//! - [`media`] and [`maxwell`] — permittivity/permeability profiles, the
//!   rescaled field quantities they induce, and residual evaluators for the
//!   classical and quaternionic forms of the time-harmonic Maxwell system,
//!   including the exact algebraic map between the two residual sets.
//! - [`darboux`] — the static-case machinery: logarithmic-derivative
//!   coupling vectors, the transform sending scalar Schrodinger solutions to
//!   solutions of the vector equation `(D + M^a) f = 0`, the quaternionic
//!   Riccati residual, and an explicit fundamental solution for constant
//!   potential.
//!
//! Everything is designed for verification at desk scale: every identity in
//! the library has a residual evaluator, and [`harness`] wires those into
//! seeded, reproducible pass/fail suites behind the `quatmax` CLI. A
//! narrative walkthrough with runnable snippets lives in the [`guide`]
//! module and in `book/` (mdBook sources; the snippets double as doc-tests).

pub mod biquat;
pub mod calculus;
pub mod darboux;
pub mod error;
pub mod harness;
pub mod maxwell;
pub mod media;

pub use biquat::{Biquaternion, Vec3C};
pub use error::{Error, Result};

/// Cap the worker-thread count used by grid sweeps.
///
/// `0` leaves the default (one worker per core). Returns `false` when the
/// global pool was already initialized, in which case the cap has no effect.
pub fn configure_threads(n: usize) -> bool {
    if n == 0 {
        return true;
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .is_ok()
}
