use num_complex::Complex64;

use super::Scaled;
use crate::error::{Error, Result};
use crate::ComplexValue;

const RESCALE: f64 = 1e150;

/// Coefficients of the reverse Bessel polynomial θ_L, lowest degree first.
///
/// θ_0 = 1, θ_1 = x + 1, θ_m = (2m − 1)θ_{m−1} + x²θ_{m−2}. The spherical
/// Hankel function is h_L^{(1)}(z) = −i·e^{iz}·θ_L(−iz)/z^{L+1}, so the zeros
/// of H^{(1)}_{L+1/2} are the points i·x with θ_L(x) = 0.
pub fn reverse_bessel_coefficients(degree: u32) -> Result<Vec<f64>> {
    let mut older = vec![1.0];
    if degree == 0 {
        return Ok(older);
    }
    let mut old = vec![1.0, 1.0];
    for m in 2..=degree {
        let mut next = vec![0.0; m as usize + 1];
        for (k, c) in old.iter().enumerate() {
            next[k] += f64::from(2 * m - 1) * c;
        }
        for (k, c) in older.iter().enumerate() {
            next[k + 2] += c;
        }
        older = old;
        old = next;
    }
    if old.iter().any(|c| !c.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "reverse Bessel coefficients of degree {degree} overflow"
        )));
    }
    Ok(old)
}

/// θ_L(x) and θ_L′(x) by the forward three-term recurrence, scaled.
pub fn reverse_bessel(degree: u32, x: ComplexValue) -> Scaled {
    let x2 = x * x;
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    let (mut p0, mut d0) = (one, zero);
    if degree == 0 {
        return Scaled { log_scale: 0.0, value: p0, derivative: d0 };
    }
    let (mut p1, mut d1) = (x + 1.0, one);
    let mut log_scale = 0.0;
    for m in 2..=degree {
        let a = f64::from(2 * m - 1);
        let p2 = p1 * a + x2 * p0;
        let d2 = d1 * a + 2.0 * x * p0 + x2 * d0;
        p0 = p1;
        d0 = d1;
        p1 = p2;
        d1 = d2;
        if p1.norm().max(d1.norm()) > RESCALE {
            p0 /= RESCALE;
            d0 /= RESCALE;
            p1 /= RESCALE;
            d1 /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    Scaled { log_scale, value: p1, derivative: d1 }.normalized()
}

#[cfg(test)]
mod tests {
    use super::super::{spherical_h, HankelKind};
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn low_degree_polynomials() {
        assert_eq!(reverse_bessel_coefficients(0).unwrap(), vec![1.0]);
        assert_eq!(reverse_bessel_coefficients(1).unwrap(), vec![1.0, 1.0]);
        assert_eq!(reverse_bessel_coefficients(2).unwrap(), vec![3.0, 3.0, 1.0]);
        assert_eq!(reverse_bessel_coefficients(3).unwrap(), vec![15.0, 15.0, 6.0, 1.0]);
    }

    #[test]
    fn degree_matches_order() {
        for degree in [0, 1, 5, 40, 100] {
            let coeffs = reverse_bessel_coefficients(degree).unwrap();
            assert_eq!(coeffs.len() as u32, degree + 1);
            assert_eq!(*coeffs.last().unwrap(), 1.0);
        }
        assert!(reverse_bessel_coefficients(200).is_err());
    }

    #[test]
    fn recurrence_matches_coefficients() {
        let coeffs = reverse_bessel_coefficients(12).unwrap();
        let x = c(-3.0, 1.5);
        let horner = coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * x + a);
        let dhorner = coeffs
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(c(0.0, 0.0), |acc, (k, &a)| acc * x + a * k as f64);
        let r = reverse_bessel(12, x);
        let s = r.log_scale.exp();
        assert!((r.value * s - horner).norm() < 1e-12 * horner.norm());
        assert!((r.derivative * s - dhorner).norm() < 1e-12 * dhorner.norm());
    }

    #[test]
    fn relation_to_spherical_hankel() {
        let i = c(0.0, 1.0);
        for l in [0u32, 1, 5, 17] {
            for z in [c(2.0, 0.5), c(-1.0, 3.0), c(7.0, -2.0)] {
                let h = spherical_h(HankelKind::First, l, z).unwrap();
                let t = reverse_bessel(l, -i * z);
                let lhs = h.value * (h.log_scale - t.log_scale).exp();
                let rhs = -i * (i * z).exp() * t.value / z.powu(l + 1);
                assert!((lhs - rhs).norm() < 1e-11 * rhs.norm(), "l = {l}, z = {z}");
            }
        }
    }

    #[test]
    fn known_zeros() {
        // θ_1(−1) = 0 gives the zero −i of H^{(1)}_{3/2}
        assert_eq!(reverse_bessel(1, c(-1.0, 0.0)).value, c(0.0, 0.0));
        // x² + 3x + 3 = 0
        let x = c(-1.5, 3f64.sqrt() / 2.0);
        assert!(reverse_bessel(2, x).value.norm() < 1e-15);
    }
}
