//! The book chapters under `book/src/` double as doc-tests: every Rust
//! code block in the guide compiles and runs against the current API, so
//! the narrative can never drift out of sync with the library.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}

#[doc = include_str!("../../../book/src/ball-flight.md")]
pub mod ball_flight {}

#[doc = include_str!("../../../book/src/trajectory-spin.md")]
pub mod trajectory_spin {}

#[doc = include_str!("../../../book/src/logo-spin.md")]
pub mod logo_spin {}

#[doc = include_str!("../../../book/src/rotations.md")]
pub mod rotations {}

#[doc = include_str!("../../../book/src/experiments.md")]
pub mod experiments {}

#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
