//! Weakly singular Fredholm integral equations of the second kind on sampled
//! metric measure spaces.
//!
//! The crate works with finite samplings of a compact metric measure set:
//! points, pairwise distances, and quadrature weights. On top of that it
//! provides
//!
//! - upper Ahlfors regularity estimation and the integral bounds it implies
//!   ([`ahlfors`]),
//! - potential-type kernel classes with a smoothness seminorm, measured on a
//!   sampling ([`kernels`]),
//! - the exponent calculus for composing such classes, smoothing orders, and
//!   the continuity moduli attached to them ([`class_calculus`]),
//! - Nystrom discretization, direct and Neumann solves, kernel iteration, and
//!   the bootstrap identity ([`operator`]),
//! - Holder regularity experiments for solutions of `mu = A[mu] + g`
//!   ([`regularity`]).
//!
//! Everything is deterministic: fixed summation orders, seeded sampling, and
//! byte-stable report serialization (see [`report`]). The `fredholm-metric`
//! binary exposes the same operations as subcommands; the `examples/`
//! directory shows one end-to-end program per capability.

pub mod ahlfors;
pub mod class_calculus;
pub mod cli;
pub mod error;
mod exec;
pub mod kernels;
pub mod operator;
pub mod regularity;
pub mod report;
pub mod space;

pub use error::{Error, Result};
pub use space::SampledMeasureSpace;
