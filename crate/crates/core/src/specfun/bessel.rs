use std::f64::consts::{LN_10, PI};

use num_complex::Complex64;

use super::{CylValue, HalfIntOrder, Scaled};
use crate::error::{Error, Result};
use crate::ComplexValue;

const RESCALE: f64 = 1e150;
const LN_RESCALE: f64 = 150.0 * LN_10;
const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HankelKind {
    First,
    Second,
}

fn check_argument(z: ComplexValue) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.norm() < 1e-100 {
        return Err(Error::Domain(format!("argument {z} too close to zero")));
    }
    Ok(())
}

/// (log scale, j_L, j_{L−1}) by Miller's downward recurrence, normalized
/// against j_0 = sin z/z or j_{−1} = cos z/z, whichever is larger.
fn sph_j_pair(l: u32, z: ComplexValue) -> Result<(f64, ComplexValue, ComplexValue)> {
    check_argument(z)?;
    let inv_z = z.inv();
    let m = f64::from(l).max(z.norm());
    let top = (m + 50.0 + 8.0 * m.cbrt()).ceil() as u32;

    let mut next = Complex64::new(0.0, 0.0);
    let mut cur = Complex64::new(1.0, 0.0);
    let mut shift = 0.0;
    let mut stored = (cur, cur, 0.0);
    for k in (0..=top).rev() {
        let prev = cur * (inv_z * f64::from(2 * k + 1)) - next;
        if k == l {
            stored = (cur, prev, shift);
        }
        next = cur;
        cur = prev;
        if cur.norm() > RESCALE {
            cur /= RESCALE;
            next /= RESCALE;
            shift += LN_RESCALE;
        }
    }
    // next = j_0 and cur = j_{−1}, up to a common factor.
    let y = z.im.abs();
    let eiz = Complex64::from_polar((-z.im - y).exp(), z.re);
    let emiz = Complex64::from_polar((z.im - y).exp(), -z.re);
    let sin_s = (eiz - emiz) / (2.0 * I);
    let cos_s = (eiz + emiz) / 2.0;
    let factor = if sin_s.norm() >= cos_s.norm() {
        sin_s * inv_z / next
    } else {
        cos_s * inv_z / cur
    };
    let (jl, jlm1, shift_at_store) = stored;
    Ok((y + shift_at_store - shift, jl * factor, jlm1 * factor))
}

/// (log scale, h_L, h_{L−1}).
///
/// The upward recurrence on the polynomial part of h = e^{±iz}·p/z is only
/// accurate where e^{±iz} is not large; in the other half-plane the pair is
/// formed as 2j − h of the other kind.
fn sph_h_pair(kind: HankelKind, l: u32, z: ComplexValue) -> Result<(f64, ComplexValue, ComplexValue)> {
    check_argument(z)?;
    let reflect = match kind {
        HankelKind::First => z.im < 0.0,
        HankelKind::Second => z.im > 0.0,
    };
    if !reflect {
        return sph_h_pair_direct(kind, l, z);
    }
    let other = match kind {
        HankelKind::First => HankelKind::Second,
        HankelKind::Second => HankelKind::First,
    };
    let (sj, jl, jlm1) = sph_j_pair(l, z)?;
    let (so, hl, hlm1) = sph_h_pair_direct(other, l, z)?;
    let top = sj.max(so);
    let (wj, wo) = ((sj - top).exp(), (so - top).exp());
    Ok((top, 2.0 * wj * jl - wo * hl, 2.0 * wj * jlm1 - wo * hlm1))
}

fn sph_h_pair_direct(kind: HankelKind, l: u32, z: ComplexValue) -> Result<(f64, ComplexValue, ComplexValue)> {
    let inv_z = z.inv();
    let mut prev = Complex64::new(1.0, 0.0);
    let mut cur = match kind {
        HankelKind::First => -I,
        HankelKind::Second => I,
    };
    let mut shift = 0.0;
    for k in 0..l {
        let next = cur * (inv_z * f64::from(2 * k + 1)) - prev;
        prev = cur;
        cur = next;
        if cur.norm() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            shift += LN_RESCALE;
        }
    }
    let (log_mod, phase) = match kind {
        HankelKind::First => (-z.im, Complex64::from_polar(1.0, z.re)),
        HankelKind::Second => (z.im, Complex64::from_polar(1.0, -z.re)),
    };
    let pre = phase * inv_z;
    Ok((shift + log_mod, cur * pre, prev * pre))
}

fn spherical_from_pair(l: u32, z: ComplexValue, pair: (f64, ComplexValue, ComplexValue)) -> Scaled {
    let (log_scale, f, fm1) = pair;
    Scaled {
        log_scale,
        value: f,
        derivative: fm1 - f * (f64::from(l + 1) / z),
    }
    .normalized()
}

/// Spherical Bessel j_L(z) and j_L′(z), scaled.
pub fn spherical_j(l: u32, z: ComplexValue) -> Result<Scaled> {
    Ok(spherical_from_pair(l, z, sph_j_pair(l, z)?))
}

/// Spherical Hankel h_L^{(1,2)}(z) and its derivative, scaled.
pub fn spherical_h(kind: HankelKind, l: u32, z: ComplexValue) -> Result<Scaled> {
    Ok(spherical_from_pair(l, z, sph_h_pair(kind, l, z)?))
}

fn cylinder_from_pair(nu: HalfIntOrder, z: ComplexValue, pair: (f64, ComplexValue, ComplexValue)) -> Scaled {
    // C_ν = √(2z/π)·c_L,  C_ν′ = √(2z/π)·(c_{L−1} − (L + 1/2)/z·c_L)
    let (log_scale, f, fm1) = pair;
    let root = (2.0 * z / PI).sqrt();
    Scaled {
        log_scale,
        value: root * f,
        derivative: root * (fm1 - f * (nu.nu() / z)),
    }
    .normalized()
}

/// J_ν(z) and J_ν′(z) with the scale factored out.
pub fn bessel_j_scaled(nu: HalfIntOrder, z: ComplexValue) -> Result<Scaled> {
    let pair = sph_j_pair(nu.spherical_index(), z)?;
    Ok(cylinder_from_pair(nu, z, pair))
}

/// H_ν^{(1,2)}(z) and its derivative with the scale factored out.
pub fn hankel_h_scaled(kind: HankelKind, nu: HalfIntOrder, z: ComplexValue) -> Result<Scaled> {
    let pair = sph_h_pair(kind, nu.spherical_index(), z)?;
    Ok(cylinder_from_pair(nu, z, pair))
}

/// J_ν(z) and J_ν′(z) for half-integer ν, principal branch of √z.
pub fn bessel_j(nu: HalfIntOrder, z: ComplexValue) -> Result<CylValue> {
    bessel_j_scaled(nu, z)?.unscaled()
}

/// H_ν^{(1)}(z) or H_ν^{(2)}(z) and the derivative, principal branch of √z.
pub fn hankel_h(kind: HankelKind, nu: HalfIntOrder, z: ComplexValue) -> Result<CylValue> {
    hankel_h_scaled(kind, nu, z)?.unscaled()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn order(twice_nu: u32) -> HalfIntOrder {
        HalfIntOrder::from_twice_nu(twice_nu).unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    fn sample_points(count: usize) -> Vec<Complex64> {
        // golden-ratio sequence over 0.3 ≤ |z| ≤ 60, all arguments
        let g = 0.618_033_988_749_894_9;
        (0..count)
            .map(|k| {
                let a = (k as f64 * g).fract();
                let b = (k as f64 * g * g + 0.37).fract();
                let r = 0.3 * (200.0f64).powf(a);
                Complex64::from_polar(r, PI * (2.0 * b - 1.0) * 0.98)
            })
            .collect()
    }

    #[test]
    fn half_order_closed_forms() {
        let j = bessel_j(order(1), c(2.0, 0.0)).unwrap();
        assert!((j.value.re - 0.513_016_136_561_828).abs() < 1e-14);
        let z = c(1.0, 1.0);
        let h = hankel_h(HankelKind::First, order(1), z).unwrap();
        let expect = -I * (2.0 / (PI * z)).sqrt() * (I * z).exp();
        assert!(rel(h.value, expect) < 1e-14);
        // derivative of √(2/(πz)) sin z
        let jd = bessel_j(order(1), z).unwrap().derivative;
        let f = |w: Complex64| (2.0 / (PI * w)).sqrt() * w.sin();
        let fd = (f(z + 1e-6) - f(z - 1e-6)) / 2e-6;
        assert!(rel(jd, fd) < 1e-8);
    }

    #[test]
    fn spherical_j_small_and_large_arguments() {
        let s = spherical_j(5, c(0.01, 0.0)).unwrap().unscaled().unwrap();
        let series = 1e-10 / 10395.0 * (1.0 - 1e-4 / 26.0 + 1e-8 / 1560.0);
        assert!((s.value.re - series).abs() < 1e-12 * series);
        let z = c(10.0, 300.0);
        let s0 = spherical_j(0, z).unwrap().unscaled().unwrap();
        assert!(rel(s0.value, z.sin() / z) < 1e-12);
        let s1 = spherical_j(1, z).unwrap().unscaled().unwrap();
        assert!(rel(s1.value, z.sin() / (z * z) - z.cos() / z) < 1e-12);
    }

    #[test]
    fn reflection_symmetry() {
        for z in sample_points(20) {
            for tn in [1, 5, 21] {
                let h1 = hankel_h_scaled(HankelKind::First, order(tn), z.conj()).unwrap();
                let h2 = hankel_h_scaled(HankelKind::Second, order(tn), z).unwrap();
                assert!((h1.log_scale - h2.log_scale).abs() < 1e-9);
                assert!((h1.value - h2.value.conj()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn wronskian_identity() {
        // For Im z >> 1 both J and H^(2) carry e^{Im z} and the identity
        // cancels to ~e^{-2 Im z}; keep to the region where it is well posed.
        let points: Vec<Complex64> = sample_points(400).into_iter().filter(|z| z.im <= 2.0).take(100).collect();
        assert_eq!(points.len(), 100);
        for tn in [1, 5, 21, 101] {
            for &z in &points {
                let j = bessel_j_scaled(order(tn), z).unwrap();
                let h = hankel_h_scaled(HankelKind::Second, order(tn), z).unwrap();
                let w = (j.value * h.derivative - j.derivative * h.value)
                    * (j.log_scale + h.log_scale).exp();
                let expect = -2.0 * I / (PI * z);
                assert!(rel(w, expect) < 1e-9, "nu = {tn}/2, z = {z}: {w} vs {expect}");
            }
        }
    }

    #[test]
    fn three_term_recurrence() {
        for z in sample_points(40) {
            for tn in [3, 11, 41] {
                let nu = f64::from(tn) / 2.0;
                for kind in [None, Some(HankelKind::Second)] {
                    let get = |t: u32| match kind {
                        None => bessel_j_scaled(order(t), z).unwrap(),
                        Some(k) => hankel_h_scaled(k, order(t), z).unwrap(),
                    };
                    let (a, b, d) = (get(tn - 2), get(tn), get(tn + 2));
                    let base = b.log_scale;
                    let lift = |s: &Scaled| s.value * (s.log_scale - base).exp();
                    let lhs = lift(&d);
                    let rhs = lift(&b) * (2.0 * nu / z) - lift(&a);
                    let size = lhs.norm().max(lift(&a).norm());
                    assert!((lhs - rhs).norm() <= 1e-9 * size, "nu = {nu}, z = {z}");
                }
            }
        }
    }

    #[test]
    fn hankel_in_its_growing_half_plane() {
        // 30-digit reference values
        let o = order(101);
        let cases = [
            (c(0.0, 30.3), c(-27.919_260_295_654_289, -27.919_260_295_654_289)),
            (c(-30.3, 30.3), c(-150.763_962_666_953_56, 266.495_105_928_717_9)),
            (c(-30.3, 15.15), c(302.192_059_862_237_35, -132.503_264_025_543_67)),
        ];
        for (z, expect) in cases {
            let h = hankel_h(HankelKind::Second, o, z).unwrap();
            assert!(rel(h.value, expect) < 1e-10, "{z}: {} vs {expect}", h.value);
            let h1 = hankel_h(HankelKind::First, o, z.conj()).unwrap();
            assert!(rel(h1.value, expect.conj()) < 1e-10);
        }
    }

    #[test]
    fn zero_argument_is_rejected() {
        assert!(bessel_j(order(1), c(0.0, 0.0)).is_err());
        assert!(hankel_h(HankelKind::First, order(3), c(0.0, 0.0)).is_err());
    }
}
