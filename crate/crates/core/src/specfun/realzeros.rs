use super::{spherical_j, HalfIntOrder};
use num_complex::Complex64;

// j_L(x) and j_L′(x) up to a common positive factor.
fn eval(l: u32, x: f64) -> (f64, f64) {
    let s = spherical_j(l, Complex64::new(x, 0.0)).expect("positive argument");
    (s.value.re, s.derivative.re)
}

/// Positive zeros of J_ν not exceeding `up_to`, in increasing order.
///
/// All zeros exceed ν and consecutive zeros are more than π apart, so a
/// unit grid starting at ν brackets each zero in its own cell.
pub fn bessel_real_zeros(nu: HalfIntOrder, up_to: f64) -> Vec<f64> {
    let l = nu.spherical_index();
    let mut zeros = Vec::new();
    let start = nu.nu().max(0.5);
    if !(up_to > start) {
        return zeros;
    }
    let cells = (up_to - start).ceil() as usize + 1;
    let mut a = start;
    let mut fa = eval(l, a).0;
    for j in 1..=cells {
        let b = start + j as f64;
        let fb = eval(l, b).0;
        if fa == 0.0 {
            zeros.push(a);
        } else if fa * fb < 0.0 {
            zeros.push(refine(l, a, b, fa));
        }
        a = b;
        fa = fb;
    }
    zeros.retain(|&x| x <= up_to);
    zeros
}

fn refine(l: u32, mut lo: f64, mut hi: f64, f_lo: f64) -> f64 {
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        let (f, df) = eval(l, x);
        if f == 0.0 {
            return x;
        }
        if (f > 0.0) == (f_lo > 0.0) {
            lo = x;
        } else {
            hi = x;
        }
        let mut next = x - f / df;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - x).abs() <= 1e-15 * x {
            return next;
        }
        x = next;
    }
    x
}
