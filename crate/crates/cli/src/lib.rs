//! Command-line front end for the `deltaquot-core` toolkit.
//!
//! The binary is `deltaquot`; see [`app::run`] for the argument grammar
//! and exit-code contract, [`output`] for the serialization formats, and
//! [`selftest`] for the built-in verification battery (which the
//! acceptance tests run at full scale).

pub mod app;
pub mod output;
pub mod selftest;
