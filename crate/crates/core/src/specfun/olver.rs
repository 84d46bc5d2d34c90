use std::f64::consts::PI;

use num_complex::Complex64;

use super::{airy_leading, HalfIntOrder};
use crate::error::{Error, Result};
use crate::olvermap::{sqrt_one_minus_sq, zeta};
use crate::ComplexValue;

/// (4ζ/(1 − z²))^{1/4} on the branch positive for z > 0, together with ζ.
fn zeta_and_prefactor(z: ComplexValue) -> Result<(ComplexValue, ComplexValue)> {
    if z.arg().abs() > PI - 0.05 || z.norm() == 0.0 {
        return Err(Error::Domain(format!(
            "Olver approximation needs |arg z| <= pi - 0.05 and z != 0, got {z}"
        )));
    }
    let zt = zeta(z)?;
    if (z - 1.0).norm() < 1e-8 {
        // ζ ≈ 2^{1/3}(1 − z) and 1 − z² ≈ 2(1 − z)
        return Ok((zt, Complex64::new(2f64.powf(1.0 / 3.0), 0.0)));
    }
    let upper = z.im >= 0.0;
    let mut arg = zt.arg();
    if upper && arg > PI / 2.0 {
        arg -= 2.0 * PI;
    } else if !upper && arg < -PI / 2.0 {
        arg += 2.0 * PI;
    }
    let quarter = Complex64::from_polar(zt.norm().powf(0.25), arg / 4.0);
    let s = sqrt_one_minus_sq(z);
    let s = if !upper && z.im == 0.0 { s.conj() } else { s };
    Ok((zt, 2f64.sqrt() * quarter / s.sqrt()))
}

/// Leading term of Olver's uniform expansion:
/// J_ν(νz) ≈ (4ζ/(1−z²))^{1/4}·Ai(ν^{2/3}ζ)/ν^{1/3}.
pub fn olver_leading_j(nu: HalfIntOrder, z: ComplexValue) -> Result<ComplexValue> {
    let nu = nu.nu();
    let (zt, pre) = zeta_and_prefactor(z)?;
    let (ai, _) = airy_leading(zt * nu.powf(2.0 / 3.0));
    Ok(pre * ai / nu.cbrt())
}

/// Leading term for the second Hankel function:
/// H^{(2)}_ν(νz) ≈ 2e^{iπ/3}(4ζ/(1−z²))^{1/4}·Ai(e^{−2πi/3}ν^{2/3}ζ)/ν^{1/3}.
pub fn olver_leading_h2(nu: HalfIntOrder, z: ComplexValue) -> Result<ComplexValue> {
    let nu = nu.nu();
    let (zt, pre) = zeta_and_prefactor(z)?;
    let rot = Complex64::from_polar(1.0, -2.0 * PI / 3.0);
    let (ai, _) = airy_leading(rot * zt * nu.powf(2.0 / 3.0));
    Ok(2.0 * Complex64::from_polar(1.0, PI / 3.0) * pre * ai / nu.cbrt())
}

#[cfg(test)]
mod tests {
    use super::super::{bessel_j_scaled, hankel_h_scaled, HankelKind};
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn order(twice_nu: u32) -> HalfIntOrder {
        HalfIntOrder::from_twice_nu(twice_nu).unwrap()
    }

    fn j_rel_error(tn: u32, z: Complex64) -> f64 {
        let o = order(tn);
        let exact = bessel_j_scaled(o, z * o.nu()).unwrap();
        let approx = olver_leading_j(o, z).unwrap();
        let exact_v = exact.value * exact.log_scale.exp();
        (approx - exact_v).norm() / exact_v.norm()
    }

    #[test]
    fn leading_j_within_three_over_nu() {
        for z in [c(0.9, 0.0), c(0.0, 2.0), c(0.5, 0.5), c(1.0, 0.0), c(1.3, 0.0)] {
            let e = j_rel_error(101, z);
            assert!(e <= 3.0 / 50.5, "z = {z}: {e}");
        }
        assert!(j_rel_error(201, c(0.5, 0.5)) <= 1e-2);
    }

    #[test]
    fn leading_j_error_decreases_with_order() {
        let grid = [c(0.5, 0.0), c(0.9, 0.0), c(0.3, 0.4), c(0.0, 1.5), c(-0.5, 0.7), c(0.8, -0.3)];
        let worst = |tn| grid.iter().map(|&z| j_rel_error(tn, z)).fold(0.0, f64::max);
        let (a, b, cc) = (worst(61), worst(123), worst(247));
        assert!(a > b && b > cc, "{a} {b} {cc}");
    }

    #[test]
    fn leading_h2_within_three_over_nu() {
        let o = order(101);
        for z in [c(0.9, 0.0), c(0.0, 2.0), c(0.5, -0.5), c(1.4, 0.2), c(-0.6, 0.6)] {
            let exact = hankel_h_scaled(HankelKind::Second, o, z * o.nu()).unwrap();
            let exact_v = exact.value * exact.log_scale.exp();
            let approx = olver_leading_h2(o, z).unwrap();
            let e = (approx - exact_v).norm() / exact_v.norm();
            assert!(e <= 3.0 / 50.5, "z = {z}: {e}");
        }
    }

    #[test]
    fn excluded_ray() {
        assert!(olver_leading_j(order(11), c(-1.0, 0.01)).is_err());
        assert!(olver_leading_j(order(11), c(0.0, 0.0)).is_err());
    }
}
