//! Spin estimation for table-tennis balls.
//!
//! A flying ball's rotation can be read in two independent ways:
//!
//! - **From its trajectory.** The Magnus force bends the flight path in
//!   proportion to `omega x v`. Fitting per-axis cubic polynomials to the
//!   observed positions provides smoothed velocity and acceleration, and
//!   a small least-squares system recovers the spin vector
//!   ([`magnus_fit`]).
//! - **From the brand logo.** At a high camera rate the printed logo is
//!   a visible orientation landmark. Its direction traces a circle whose
//!   plane normal is the spin axis and whose angular rate is the spin
//!   magnitude ([`logo_spin`]), including a circular-segment correction
//!   for logos cut off at the edge of the visible hemisphere.
//!
//! A deterministic flight and logo simulator ([`physics`]) doubles as
//! the test oracle, [`rotmath`] supplies rotation representations and
//! metrics, and [`eval`] runs bounce-prediction and spin-classification
//! benchmarks over a synthetic settings catalog. The `spinfit` binary
//! exposes all of it behind `simulate`, `fit-spin`, `logo-spin`, and
//! `evaluate` subcommands ([`cli`]).
//!
//! ```
//! use spinfit::linalg::Vec3;
//! use spinfit::magnus_fit::{estimate_spin, FitConfig};
//! use spinfit::physics::{simulate_observations, BallState, PhysicalConstants, SpinVector};
//!
//! let constants = PhysicalConstants::standard();
//! let launch = BallState::new(0.0, Vec3::new(-1.2, 0.0, 0.35), Vec3::new(5.0, 0.0, 1.8));
//! let spin = SpinVector::new(Vec3::new(0.0, 150.0, 0.0)).unwrap(); // topspin, rad/s
//!
//! // Simulate what the cameras would see, then recover the spin.
//! let observed = simulate_observations(&launch, &spin, &constants, 380.0, 0.25, 0.0, 7).unwrap();
//! let estimate = estimate_spin(&observed, &constants, &FitConfig::default()).unwrap();
//! assert!((estimate.omega.omega - spin.omega).norm() < 1.0);
//! ```

// Negated comparisons like `!(x > 0.0)` are deliberate in validation
// code: they reject NaN, which the un-negated forms would let through.
// Index loops are kept where they mirror the matrix arithmetic.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod eval;
pub mod io;
pub mod linalg;
pub mod logo_spin;
pub mod magnus_fit;
pub mod physics;
pub mod rotmath;

pub mod guide;

pub use error::{Error, Result};
pub use linalg::Vec3;
pub use logo_spin::{LogoConfig, LogoInput, LogoObservation};
pub use magnus_fit::{FitConfig, SpinEstimate, SpinMethod};
pub use physics::{BallObservation, BallState, PhysicalConstants, SpinVector, Trajectory};
pub use rotmath::{AxisAngle, Quat, RotMatrix};
