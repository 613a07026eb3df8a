//! Exact Gabor systems, spectral sets and tilings over `Z_p^d`.
//!
//! All decisions are made in the cyclotomic field `Q(ζ_p)`; a complex
//! floating-point backend shares the same [`Scalar`] interface as a
//! cross-check. The crate is `no_std` and needs only `alloc`.

#![no_std]

extern crate alloc;

pub mod cyclotomic;
pub mod error;
pub mod fourier;
pub mod gabor;
pub mod group;
pub mod pairs;
pub mod rational;
pub mod scalar;
pub mod search;
pub mod verdict;

pub use cyclotomic::{gauss_sum, legendre, CycNum};
pub use error::{Error, Result};
pub use fourier::{dft, idft, plancherel_check, Window};
pub use gabor::{is_orthonormal_basis, GaborSystem, NormMode};
pub use group::{GroupParams, Point, PointSet};
pub use rational::Rational;
pub use scalar::{Backend, Scalar, Value, FLOAT_TOLERANCE};
pub use verdict::{Atom, Certificate, Verdict, Witness};
