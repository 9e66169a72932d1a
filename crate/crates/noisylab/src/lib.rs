//! A simulation laboratory for approximating operators from adaptive
//! measurements that are corrupted by deterministic (adversarial) noise.
//!
//! Every measurement is a functional with values in `[-1, 1]`, and an observed
//! value may deviate from the true one by at most a noise level `delta < 1`.
//! The library provides, on top of that channel model:
//!
//! * recovery policies — quantized encoders, cover bisection, iterated
//!   coordinate refinement, diagonal-operator truncation and budget
//!   allocation ([`algorithms`]);
//! * covering/packing machinery and entropy-number estimates that sandwich
//!   what any policy can achieve ([`entropy`]);
//! * adversaries and lower-bound certificates that show the sandwiches are
//!   tight ([`bounds`]);
//! * a worst-case search harness, sweep/compare experiment drivers and the
//!   `noisylab` command-line front end ([`harness`]).
//!
//! Each major capability has a runnable demo under `examples/`, e.g.
//! `cargo run --example encoder_roundtrip`.

pub mod algorithms;
pub mod bounds;
pub mod entropy;
mod error;
pub mod harness;
pub mod measurement;
pub mod spaces;
pub(crate) mod util;

pub use error::{Error, Result};
