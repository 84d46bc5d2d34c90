use std::f64::consts::{FRAC_PI_3, FRAC_PI_4, PI};

use num_complex::Complex64;

use crate::ComplexValue;

const AI0: f64 = 0.355_028_053_887_817_239;
const AIP0: f64 = -0.258_819_403_792_806_798;

// Maclaurin series inside this radius, asymptotic series beyond the outer
// one, Taylor stepping of Ai'' = z·Ai in between.
const SERIES_RADIUS: f64 = 4.5;
const ASYMPTOTIC_RADIUS: f64 = 9.0;

type Pair = (ComplexValue, ComplexValue);

fn maclaurin(z: ComplexValue) -> Pair {
    let z3 = z * z * z;
    let mut f = Complex64::new(1.0, 0.0);
    let mut g = z;
    let mut df = Complex64::new(0.0, 0.0);
    let mut dg = Complex64::new(1.0, 0.0);
    let (mut tf, mut tg) = (f, g);
    let mut tdf = z * z / 2.0;
    let mut tdg = dg;
    for k in 1..200u32 {
        let k3 = 3.0 * f64::from(k);
        if k > 1 {
            tdf *= z3 / ((k3 - 1.0) * (k3 - 3.0));
        }
        tf *= z3 / ((k3 - 1.0) * k3);
        tg *= z3 / (k3 * (k3 + 1.0));
        tdg *= z3 / (k3 * (k3 - 2.0));
        f += tf;
        g += tg;
        df += tdf;
        dg += tdg;
        let small = tf.norm() + tg.norm() + tdf.norm() + tdg.norm();
        if small <= 1e-18 * (f.norm() + g.norm() + df.norm() + dg.norm()) {
            break;
        }
    }
    (AI0 * f + AIP0 * g, AI0 * df + AIP0 * dg)
}

fn u_coefficients() -> [f64; 40] {
    let mut u = [0.0; 40];
    u[0] = 1.0;
    for k in 1..40 {
        let kf = k as f64;
        u[k] = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
    }
    u
}

fn v_coefficient(u: &[f64; 40], k: usize) -> f64 {
    if k == 0 {
        1.0
    } else {
        let kf = k as f64;
        -(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * u[k]
    }
}

// Σ_k (±1)^k c_k x^k stopped at the smallest term.
fn truncated_sum(coeff: impl Fn(usize) -> f64, x: ComplexValue, alternate: bool) -> ComplexValue {
    let mut sum = Complex64::new(0.0, 0.0);
    let mut pow = Complex64::new(1.0, 0.0);
    let mut last = f64::INFINITY;
    for k in 0..40 {
        let sign = if alternate && k % 2 == 1 { -1.0 } else { 1.0 };
        let term = pow * (sign * coeff(k));
        let size = term.norm();
        if size > last {
            break;
        }
        sum += term;
        if size <= 1e-17 * sum.norm() {
            break;
        }
        last = size;
        pow *= x;
    }
    sum
}

fn asymptotic(z: ComplexValue) -> Pair {
    let u = u_coefficients();
    let sqrt_pi = PI.sqrt();
    if z.arg().abs() <= 2.0 * FRAC_PI_3 {
        let zeta = 2.0 / 3.0 * z.powf(1.5);
        let q = z.powf(0.25);
        let e = (-zeta).exp() / (2.0 * sqrt_pi);
        let inv = zeta.inv();
        let su = truncated_sum(|k| u[k], inv, true);
        let sv = truncated_sum(|k| v_coefficient(&u, k), inv, true);
        (e / q * su, -e * q * sv)
    } else {
        let w = -z;
        let zeta = 2.0 / 3.0 * w.powf(1.5);
        let q = w.powf(0.25);
        let inv2 = (zeta * zeta).inv();
        let inv = zeta.inv();
        let ue = truncated_sum(|k| u[2 * k], inv2, true);
        let uo = truncated_sum(|k| u[2 * k + 1], inv2, true) * inv;
        let ve = truncated_sum(|k| v_coefficient(&u, 2 * k), inv2, true);
        let vo = truncated_sum(|k| v_coefficient(&u, 2 * k + 1), inv2, true) * inv;
        let (s, c) = ((zeta - FRAC_PI_4).sin(), (zeta - FRAC_PI_4).cos());
        let ai = (c * ue + s * uo) / (sqrt_pi * q);
        let dai = (q / sqrt_pi) * (s * ve - c * vo);
        (ai, dai)
    }
}

fn taylor_step(z0: ComplexValue, y: Pair, h: ComplexValue) -> Pair {
    let (y0, d0) = y;
    let mut a_km1 = y0;
    let mut a_k = d0;
    let mut a_kp1 = z0 * y0 / 2.0;
    let mut value = y0 + d0 * h;
    let mut deriv = d0;
    let mut hp = h;
    let scale = y0.norm() + (d0 * h).norm();
    let mut k = 1.0;
    loop {
        // a_{k+1} is the coefficient of h^{k+1}
        value += a_kp1 * hp * h;
        deriv += a_kp1 * hp * (k + 1.0);
        let next = (z0 * a_k + a_km1) / ((k + 2.0) * (k + 1.0));
        a_km1 = a_k;
        a_k = a_kp1;
        a_kp1 = next;
        hp *= h;
        k += 1.0;
        if k > 80.0 || ((a_k * hp).norm() + (a_kp1 * hp * h).norm() <= 1e-18 * scale && k > 4.0) {
            break;
        }
    }
    (value, deriv)
}

fn integrate(from: ComplexValue, start: Pair, to: ComplexValue) -> Pair {
    let steps = ((to - from).norm() / 0.5).ceil().max(1.0) as usize;
    let h = (to - from) / steps as f64;
    let mut y = start;
    for j in 0..steps {
        y = taylor_step(from + h * j as f64, y, h);
    }
    y
}

/// Ai(z) and Ai′(z).
///
/// Maclaurin series for |z| ≤ 4.5 and the asymptotic expansions for
/// |z| ≥ 9 (exponential form for |arg z| ≤ 2π/3, oscillatory form beyond).
/// In between the Airy equation is stepped along the ray through z, from
/// whichever end makes Ai the growing solution.
pub fn airy_leading(z: ComplexValue) -> (ComplexValue, ComplexValue) {
    let r = z.norm();
    if r <= SERIES_RADIUS {
        return maclaurin(z);
    }
    if r >= ASYMPTOTIC_RADIUS {
        return asymptotic(z);
    }
    let dir = z / r;
    if z.arg().abs() < FRAC_PI_3 {
        let far = dir * ASYMPTOTIC_RADIUS;
        integrate(far, asymptotic(far), z)
    } else {
        let near = dir * SERIES_RADIUS;
        integrate(near, maclaurin(near), z)
    }
}

/// a_k = (3/2·(kπ − π/4))^{2/3}, the approximate k-th zero of Ai(−z).
pub fn airy_zero_approx(k: u32) -> f64 {
    (1.5 * (f64::from(k) * PI - FRAC_PI_4)).powf(2.0 / 3.0)
}
