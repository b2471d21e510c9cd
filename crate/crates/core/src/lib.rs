//! Hermite spectral toolkit for the quantum harmonic oscillator H = −Δ + |x|².

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod hermite;
pub mod norms;
pub mod propagators;
pub mod quadrature;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
pub use hermite::{enumerate_level, enumerate_up_to, hermite_eval, level, Basis, MultiIndex};
pub use quadrature::{gauss_hermite, QuadratureGrid, QuadratureRule1D, WeightConvention};
pub use spectral::{analyze, synthesize, LevelSamples, Multiplier, Sampler, SpectralField};
pub use verify::{Suite, SuiteParams, VerificationReport};
