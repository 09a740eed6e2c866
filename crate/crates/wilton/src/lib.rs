//! Alpha-continued-fraction dynamics and the Wilton function.
//!
//! This crate evaluates the one-parameter family of continued-fraction
//! algorithms interpolating the Gauss map (alpha = 1), the nearest-integer
//! map (alpha = 1/2) and the by-excess map (alpha = 0), together with the
//! analytic objects built on top of them:
//!
//! - exact rational orbits, convergents and beta products ([`dynamics`]);
//! - the Wilton and Brjuno series with controlled truncation ([`eval`]);
//! - exact matching detection for rational parameters via the 2x2 integer
//!   matrix identity, pseudocenters and local forms ([`matching`]);
//! - classification of rational singularities into the two average types
//!   and the mean-oscillation failure witness ([`singularity`]);
//! - the four-state automaton synchronizing an alpha-orbit against the
//!   nearest-integer orbit, its inequality monitors, and the difference
//!   series at alpha = 2/5 ([`sync`]);
//! - seeded metric-entropy estimation and invariant histograms
//!   ([`entropy`]).
//!
//! The `examples/` directory is the primary tour of the crate, one
//! runnable program per capability:
//!
//! ```text
//! cargo run --release -p wilton --example orbit_expansion
//! cargo run --release -p wilton --example wilton_curve
//! cargo run --release -p wilton --example matching_scan
//! cargo run --release -p wilton --example singularity_probe
//! cargo run --release -p wilton --example sync_states
//! cargo run --release -p wilton --example difference_norm
//! cargo run --release -p wilton --example entropy_plateau
//! ```
//!
//! A thin `wilton` binary exposes the same operations as subcommands with
//! CSV/JSON output; see the crate README.

pub mod cli;
pub mod dyadic;
pub mod dynamics;
pub mod entropy;
pub mod eval;
pub mod exact;
pub mod matching;
pub mod rng;
pub mod singularity;
pub mod sync;

pub use dyadic::Dyadic;
pub use dynamics::{AlphaParam, Digit, OrbitStep, OrbitTrace, Scalar};
pub use exact::{ExtendedRational, Mat2, Rational, RcfExpansion};
