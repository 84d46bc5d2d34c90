//! Scattering poles of the sphere and the transparent obstacle in odd
//! dimensions, together with the sharp counting constant A_{S^{n-1}}.

pub mod asymconst;
pub mod counting;
pub mod error;
pub mod io;
pub mod olvermap;
pub mod quad;
pub mod specfun;
pub mod sphere;
pub mod transparent;
pub mod winding;

pub use error::{Error, Result};

/// Complex numbers used for z, λ, ρ and ζ.
pub type ComplexValue = num_complex::Complex64;
