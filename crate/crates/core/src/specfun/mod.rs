//! Half-integer order Bessel and Hankel functions, reverse Bessel
//! polynomials, the Airy function and Olver's leading-order approximations.
//!
//! For odd n every order ν = l + n/2 − 1 is a half-integer L + 1/2 and
//! J_ν(z) = √(2z/π)·j_L(z), H_ν(z) = √(2z/π)·h_L(z) with the spherical
//! functions j_L, h_L. Values can under- or overflow long before the zeros
//! of interest do, so the core routines return a [`Scaled`] value whose true
//! size is `e^{log_scale}` times the stored mantissa.

mod airy;
mod bessel;
mod olver;
mod realzeros;
mod revbessel;

pub use airy::{airy_leading, airy_zero_approx};
pub use bessel::{
    bessel_j, bessel_j_scaled, hankel_h, hankel_h_scaled, spherical_h, spherical_j, HankelKind,
};
pub use olver::{olver_leading_h2, olver_leading_j};
pub use realzeros::bessel_real_zeros;
pub use revbessel::{reverse_bessel, reverse_bessel_coefficients};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ComplexValue;

/// Half-integer order ν = l + n/2 − 1, stored as the odd integer 2ν.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfIntOrder {
    twice_nu: u32,
    l: u32,
    n: u32,
}

impl HalfIntOrder {
    /// Order attached to angular momentum `l` in odd dimension `n`.
    pub fn new(l: u32, n: u32) -> Result<Self> {
        if n < 3 || n.is_multiple_of(2) {
            return Err(Error::OutOfRange(format!(
                "dimension must be odd and at least 3, got {n}"
            )));
        }
        Ok(HalfIntOrder {
            twice_nu: 2 * l + n - 2,
            l,
            n,
        })
    }

    /// Order ν = twice_nu/2, labelled as the n = 3 order with l = ν − 1/2.
    pub fn from_twice_nu(twice_nu: u32) -> Result<Self> {
        if twice_nu.is_multiple_of(2) {
            return Err(Error::OutOfRange(format!(
                "2nu must be odd and positive, got {twice_nu}"
            )));
        }
        HalfIntOrder::new((twice_nu - 1) / 2, 3)
    }

    pub fn twice_nu(&self) -> u32 {
        self.twice_nu
    }

    pub fn nu(&self) -> f64 {
        f64::from(self.twice_nu) / 2.0
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Index L = ν − 1/2 of the spherical Bessel function; also the degree of
    /// the reverse Bessel polynomial attached to this order.
    pub fn spherical_index(&self) -> u32 {
        (self.twice_nu - 1) / 2
    }
}

impl std::fmt::Display for HalfIntOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}/2", self.twice_nu)
    }
}

/// A cylinder function value and its derivative with respect to the argument.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylValue {
    pub value: ComplexValue,
    pub derivative: ComplexValue,
}

/// `e^{log_scale}·(value, derivative)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub log_scale: f64,
    pub value: ComplexValue,
    pub derivative: ComplexValue,
}

impl Scaled {
    /// Multiply out the scale. Fails if the result is not representable.
    pub fn unscaled(&self) -> Result<CylValue> {
        let f = self.log_scale.exp();
        let out = CylValue {
            value: self.value * f,
            derivative: self.derivative * f,
        };
        let finite = |z: ComplexValue| z.re.is_finite() && z.im.is_finite();
        if !(finite(out.value) && finite(out.derivative)) {
            return Err(Error::OutOfRange(format!(
                "value overflows (log magnitude {:.1})",
                self.log_scale
            )));
        }
        Ok(out)
    }

    /// Natural log of |value|.
    pub fn log_abs(&self) -> f64 {
        self.log_scale + self.value.norm().ln()
    }

    pub(crate) fn normalized(mut self) -> Self {
        let m = self.value.norm().max(self.derivative.norm());
        if m > 0.0 && m.is_finite() {
            self.value /= m;
            self.derivative /= m;
            self.log_scale += m.ln();
        }
        self
    }
}
