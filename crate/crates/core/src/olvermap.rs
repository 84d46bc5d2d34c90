//! Olver's maps ρ and ζ, the eye-shaped domain K and the sector weight h_n(θ).
//!
//! Branch conventions used throughout the crate:
//!
//! * `√(1−z²)` is `√(1−z)·√(1+z)` with principal roots, so it is positive on
//!   (−1, 1) and has positive real part off the real axis. On the real axis
//!   outside [−1, 1] the value is the limit from the upper half-plane.
//! * `ρ(z) = log((1+√(1−z²))/z) − √(1−z²)` with the principal logarithm,
//!   real and positive on (0, 1).
//! * `ζ = (3ρ/2)^{2/3}` is real on (0, ∞), analytic in the plane cut along
//!   (−∞, 0], and takes values in the closed lower half-plane for Im z ≥ 0.
//!
//! K is the bounded region where Re ρ ≥ 0; in the upper half-plane its
//! boundary ∂K₊ runs from z = 1 through i·0.6627 to z = −1.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{self, QuadOptions};
use crate::ComplexValue;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Radius of the disk about z = 1 where ζ is taken from its power series.
const ZETA_SERIES_RADIUS: f64 = 0.25;
const ZETA_SERIES_TERMS: usize = 48;

fn check_domain(z: ComplexValue) -> Result<()> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Domain(format!("non-finite argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 {
        return Err(Error::Domain(format!(
            "argument {z} is zero or on the cut arg z = ±π"
        )));
    }
    Ok(())
}

/// `√(1−z²)` on the branch described in the module docs.
pub fn sqrt_one_minus_sq(z: ComplexValue) -> ComplexValue {
    if z.im == 0.0 {
        let x = z.re;
        if x.abs() <= 1.0 {
            return Complex64::new(((1.0 - x) * (1.0 + x)).sqrt(), 0.0);
        }
        let w = ((x - 1.0) * (x + 1.0)).sqrt();
        return if x > 0.0 {
            Complex64::new(0.0, -w)
        } else {
            Complex64::new(0.0, w)
        };
    }
    (1.0 - z).sqrt() * (1.0 + z).sqrt()
}

/// ρ(z), on the branch real for z ∈ (0, 1).
pub fn rho(z: ComplexValue) -> Result<ComplexValue> {
    check_domain(z)?;
    Ok(rho_unchecked(z))
}

fn rho_unchecked(z: ComplexValue) -> ComplexValue {
    let s = sqrt_one_minus_sq(z);
    ((1.0 + s) / z).ln() - s
}

/// dρ/dz = −√(1−z²)/z.
pub fn rho_prime(z: ComplexValue) -> Result<ComplexValue> {
    check_domain(z)?;
    Ok(-sqrt_one_minus_sq(z) / z)
}

/// Taylor coefficients of Q(u), where ζ = u·Q(u) and u = 1 − z.
///
/// dρ/du = √u·√(2−u)/(1−u), so ρ = u^{3/2}·Σ g_k u^k/(k+3/2) with g the
/// coefficients of √(2−u)/(1−u). Then 3ρ/2 = u^{3/2}·P(u) and Q = P^{2/3}.
fn zeta_series() -> &'static [f64] {
    static COEFFS: OnceLock<Vec<f64>> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let m = ZETA_SERIES_TERMS;
        // √(1 − u/2) = Σ binom(1/2, k) (−1/2)^k u^k
        let mut sqrt_part = vec![0.0; m];
        let mut c = 1.0;
        for (k, slot) in sqrt_part.iter_mut().enumerate() {
            *slot = c;
            let kf = k as f64;
            c *= (0.5 - kf) / (kf + 1.0) * (-0.5);
        }
        let mut g = vec![0.0; m];
        let mut acc = 0.0;
        for k in 0..m {
            acc += sqrt_part[k];
            g[k] = std::f64::consts::SQRT_2 * acc;
        }
        let p: Vec<f64> = g
            .iter()
            .enumerate()
            .map(|(k, gk)| 1.5 * gk / (k as f64 + 1.5))
            .collect();
        series_power(&p, 2.0 / 3.0)
    })
}

/// Coefficients of A(u)^alpha for a power series A with A(0) > 0.
fn series_power(a: &[f64], alpha: f64) -> Vec<f64> {
    let mut b = vec![0.0; a.len()];
    b[0] = a[0].powf(alpha);
    for k in 1..a.len() {
        let mut sum = 0.0;
        for j in 1..=k {
            sum += ((alpha + 1.0) * j as f64 - k as f64) * a[j] * b[k - j];
        }
        b[k] = sum / (k as f64 * a[0]);
    }
    b
}

fn zeta_series_eval(z: ComplexValue) -> (ComplexValue, ComplexValue) {
    let u = 1.0 - z;
    let coeffs = zeta_series();
    let mut q = Complex64::new(0.0, 0.0);
    let mut dq = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dq = dq * u + q;
        q = q * u + c;
    }
    // dζ/dz = −(Q + u·Q′)
    (u * q, -(q + u * dq))
}

/// ζ(z) with ρ(z) = (2/3)ζ^{3/2}; analytic across z = 1.
pub fn zeta(z: ComplexValue) -> Result<ComplexValue> {
    check_domain(z)?;
    Ok(zeta_unchecked(z))
}

fn zeta_unchecked(z: ComplexValue) -> ComplexValue {
    if (z - 1.0).norm() < ZETA_SERIES_RADIUS {
        return zeta_series_eval(z).0;
    }
    if z.im < 0.0 {
        return zeta_upper(z.conj()).conj();
    }
    zeta_upper(z)
}

fn zeta_upper(z: ComplexValue) -> ComplexValue {
    let w = 1.5 * rho_unchecked(z);
    // For Im z ≥ 0 the true argument of 3ρ/2 lies in [−3π/2, 0].
    let mut phase = w.arg();
    if phase > FRAC_PI_4 {
        phase -= 2.0 * PI;
    }
    Complex64::from_polar(w.norm().powf(2.0 / 3.0), 2.0 * phase / 3.0)
}

/// dζ/dz.
pub fn zeta_prime(z: ComplexValue) -> Result<ComplexValue> {
    check_domain(z)?;
    if (z - 1.0).norm() < ZETA_SERIES_RADIUS {
        return Ok(zeta_series_eval(z).1);
    }
    let zeta = zeta_unchecked(z);
    Ok(-sqrt_one_minus_sq(z) / z / zeta_sqrt(zeta, z.im >= 0.0))
}

/// ζ^{1/2} with argument in [−π/2, 0] when z is in the upper half-plane.
fn zeta_sqrt(zeta: ComplexValue, upper: bool) -> ComplexValue {
    let r = zeta.sqrt();
    if (upper && r.im > 0.0) || (!upper && r.im < 0.0) {
        -r
    } else {
        r
    }
}

/// ζ^{3/2} on the same branch, so that (2/3)·zeta_pow_three_halves = ρ.
pub fn zeta_pow_three_halves(zeta: ComplexValue, upper: bool) -> ComplexValue {
    zeta * zeta_sqrt(zeta, upper)
}

/// `[−Re ρ]₊ = max(−Re ρ(z), 0)` for Im z > 0.
pub fn neg_re_rho_plus(z: ComplexValue) -> Result<f64> {
    if !(z.im > 0.0) {
        return Err(Error::Domain(format!(
            "[-Re rho]+ is defined on the open upper half-plane, got {z}"
        )));
    }
    Ok((-rho(z)?.re).max(0.0))
}

/// The positive root of t = coth t, i.e. t·tanh t = 1.
pub fn eye_t0() -> f64 {
    static T0: OnceLock<f64> = OnceLock::new();
    *T0.get_or_init(|| {
        let (mut lo, mut hi) = (1.0_f64, 1.5_f64);
        let mut t = 1.2_f64;
        for _ in 0..100 {
            let f = t * t.tanh() - 1.0;
            if f > 0.0 {
                hi = t;
            } else {
                lo = t;
            }
            let df = t.tanh() + t / t.cosh().powi(2);
            let mut next = t - f / df;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - t).abs() <= 1e-16 * t {
                t = next;
                break;
            }
            t = next;
        }
        t
    })
}

// t·coth t − t² and t² − t·tanh t, with series for small t.
fn eye_components(t: f64) -> (f64, f64) {
    if t < 0.05 {
        let t2 = t * t;
        let a = 1.0 + t2 / 3.0 - t2 * t2 / 45.0 + 2.0 * t2 * t2 * t2 / 945.0 - t2;
        let b = t2 * t2 * (1.0 / 3.0 - t2 * (2.0 / 15.0 - t2 * (17.0 / 315.0 - t2 * 62.0 / 2835.0)));
        return (a, b);
    }
    let a = t * (t.cosh() - t * t.sinh()) / t.sinh();
    let b = t * (t - t.tanh());
    (a.max(0.0), b.max(0.0))
}

/// Point of the right half of ∂K₊ at parameter t ∈ [0, t₀].
pub fn eye_point(t: f64) -> ComplexValue {
    if t <= 0.0 {
        return Complex64::new(1.0, 0.0);
    }
    let t0 = eye_t0();
    if t >= t0 {
        return Complex64::new(0.0, (t0 * t0 - 1.0).sqrt());
    }
    let (a, b) = eye_components(t);
    Complex64::new(a.sqrt(), b.sqrt())
}

/// dz/dt along the right half of ∂K₊, for 0 ≤ t < t₀.
pub fn eye_point_derivative(t: f64) -> ComplexValue {
    if t <= 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    let (a, b) = eye_components(t);
    let da = 1.0 / t.tanh() - t / t.sinh().powi(2) - 2.0 * t;
    let db = if t < 0.05 {
        let t2 = t * t;
        t * t2 * (4.0 / 3.0 - t2 * (12.0 / 15.0 - t2 * 136.0 / 315.0))
    } else {
        2.0 * t - t.tanh() - t / t.cosh().powi(2)
    };
    Complex64::new(da / (2.0 * a.sqrt()), db / (2.0 * b.sqrt()))
}

/// One sample of the right half of ∂K₊.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundarySample {
    pub t: f64,
    pub z: ComplexValue,
    /// −Im ρ(z); runs from 0 at z = 1 to π/2 on the imaginary axis.
    pub s: f64,
}

/// Sampled right half of ∂K₊, ordered by t from z = 1 to z = i·0.6627.
#[derive(Debug, Clone, PartialEq)]
pub struct EyeBoundary {
    pub t0: f64,
    pub samples: Vec<BoundarySample>,
}

/// Sample the right half of ∂K₊ at `n_samples` parameters.
///
/// Parameters are t = t₀(1 − v²) with v uniform, which spreads the points
/// evenly along the arc near the imaginary axis where dz/dt blows up.
pub fn eye_boundary(n_samples: usize) -> Result<EyeBoundary> {
    if n_samples < 2 {
        return Err(Error::OutOfRange(format!(
            "eye boundary needs at least 2 samples, got {n_samples}"
        )));
    }
    let t0 = eye_t0();
    let last = (n_samples - 1) as f64;
    let samples = (0..n_samples)
        .map(|j| {
            let v = 1.0 - j as f64 / last;
            let t = if j == n_samples - 1 { t0 } else { t0 * (1.0 - v * v) };
            let z = eye_point(t);
            let s = if j == 0 {
                0.0
            } else if j == n_samples - 1 {
                FRAC_PI_2
            } else {
                -rho_unchecked(z).im
            };
            BoundarySample { t, z, s }
        })
        .collect();
    Ok(EyeBoundary { t0, samples })
}

impl EyeBoundary {
    /// Linear interpolation of z as a function of s ∈ [0, π/2].
    pub fn interpolate(&self, s: f64) -> ComplexValue {
        let idx = self.samples.partition_point(|p| p.s < s);
        if idx == 0 {
            return self.samples[0].z;
        }
        if idx >= self.samples.len() {
            return self.samples[self.samples.len() - 1].z;
        }
        let (p, q) = (self.samples[idx - 1], self.samples[idx]);
        let w = if q.s > p.s { (s - p.s) / (q.s - p.s) } else { 0.0 };
        p.z + (q.z - p.z) * w
    }
}

fn cached_eye() -> &'static EyeBoundary {
    static EYE: OnceLock<EyeBoundary> = OnceLock::new();
    EYE.get_or_init(|| eye_boundary(513).expect("valid sample count"))
}

/// The point z on ∂K₊ with ρ(z) = −i·s, for s ∈ [0, π].
///
/// s ≤ π/2 gives the right half (Re z ≥ 0); s > π/2 the mirror image
/// −z̄ of the point at π − s.
pub fn rho_inverse_boundary(s: f64) -> Result<ComplexValue> {
    if !(s >= 0.0) || s > PI + 1e-9 {
        return Err(Error::OutOfRange(format!(
            "boundary parameter {s} outside [0, pi]"
        )));
    }
    let s = s.min(PI);
    if s > FRAC_PI_2 {
        return Ok(-rho_inverse_boundary(PI - s)?.conj());
    }
    if s == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    let target = Complex64::from_polar((1.5 * s).powf(2.0 / 3.0), -PI / 3.0);
    let mut z = cached_eye().interpolate(s);
    let mut converged = false;
    for _ in 0..60 {
        let f = zeta_unchecked(z) - target;
        let step = f / zeta_prime(z)?;
        z -= step;
        if step.norm() <= 1e-15 * z.norm() {
            converged = true;
            break;
        }
    }
    // Polish on ρ itself away from z = 1, where ρ′ is well conditioned.
    if s > 1e-3 {
        for _ in 0..3 {
            let step = (rho_unchecked(z) + I * s) / (-sqrt_one_minus_sq(z) / z);
            z -= step;
        }
    }
    let residual = (rho_unchecked(z) + I * s).norm();
    if !converged && residual > 1e-10 {
        return Err(Error::NoConvergence(format!(
            "boundary inverse at s = {s}: residual {residual:e}"
        )));
    }
    Ok(z)
}

/// Dense polyline of the whole ∂K₊, from z = 1 to z = −1.
fn boundary_polyline() -> &'static [ComplexValue] {
    static LINE: OnceLock<Vec<ComplexValue>> = OnceLock::new();
    LINE.get_or_init(|| {
        let right = eye_boundary(4097).expect("valid sample count");
        let mut pts: Vec<ComplexValue> = right.samples.iter().map(|p| p.z).collect();
        let mirrored: Vec<ComplexValue> = right.samples.iter().rev().skip(1).map(|p| -p.z.conj()).collect();
        pts.extend(mirrored);
        pts
    })
}

/// Euclidean distance from z to ∂K, using the boundary arc in the same
/// half-plane as z.
pub fn distance_to_eye(z: ComplexValue) -> f64 {
    let w = if z.im < 0.0 { z.conj() } else { z };
    boundary_polyline()
        .windows(2)
        .map(|seg| {
            let (a, b) = (seg[0], seg[1]);
            let d = b - a;
            let len2 = d.norm_sqr();
            let proj = if len2 > 0.0 {
                ((w - a) * d.conj()).re / len2
            } else {
                0.0
            };
            (w - (a + d * proj.clamp(0.0, 1.0))).norm()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Radial crossing t*(θ) of ∂K along the ray t·e^{iθ}, 0 < θ < π.
pub fn radial_crossing(theta: f64) -> f64 {
    let dir = Complex64::from_polar(1.0, theta);
    let (mut lo, mut hi) = (0.1, 1.1);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if rho_unchecked(dir * mid).re > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

fn check_odd_dimension(n: u32) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "dimension must be odd and at least 3, got {n}"
        )));
    }
    Ok(())
}

/// h_n(θ) = 4/(n−2)! ∫₀^∞ [−Re ρ]₊(t e^{iθ}) t^{−(n+1)} dt.
///
/// The integrand vanishes for t < t*(θ); the rest of the half-line is mapped
/// to (0, 1] by t = t*/u, which makes the integrand bounded and smooth at
/// u = 0 since −Re ρ grows linearly in t.
pub fn h_n_theta(theta: f64, n: u32) -> Result<f64> {
    h_n_theta_tol(theta, n, 1e-10)
}

pub fn h_n_theta_tol(theta: f64, n: u32, rel_tol: f64) -> Result<f64> {
    check_odd_dimension(n)?;
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::OutOfRange(format!("theta = {theta} outside (0, pi)")));
    }
    let dir = Complex64::from_polar(1.0, theta);
    let t_star = radial_crossing(theta);
    let scale = t_star.powi(n as i32);
    let integrand = |u: f64| {
        if u <= 0.0 {
            return 0.0;
        }
        let t = t_star / u;
        let v = (-rho_unchecked(dir * t).re).max(0.0);
        v * u.powi(n as i32 - 1) / scale
    };
    let q = quad::integrate_with_breaks(
        integrand,
        &[0.0, 0.5, 0.9, 0.99, 1.0],
        QuadOptions {
            rel_tol,
            abs_tol: 1e-15,
            max_intervals: 2000,
        },
    )?;
    Ok(4.0 / factorial(n - 2) * q.value)
}

/// Closed form of h₃(θ) from integrating by parts twice:
/// h₃(θ) = 4 Re (1−z²)^{3/2} / (9|z|³) + 4 sin(3θ)/9 with z = z(θ) on ∂K₊.
///
/// The sin(3θ) part is the contribution of the upper limit t → ∞ and
/// integrates over (0, π) to exactly 2τ₃.
pub fn h3_closed_form(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < PI) {
        return Err(Error::OutOfRange(format!("theta = {theta} outside (0, pi)")));
    }
    let z = Complex64::from_polar(radial_crossing(theta), theta);
    let s = sqrt_one_minus_sq(z);
    Ok(4.0 * (s * s * s).re / (9.0 * z.norm().powi(3)) + 4.0 * (3.0 * theta).sin() / 9.0)
}
