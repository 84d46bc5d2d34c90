//! The Weyl constant τ_n and the sharp constant A_{S^{n−1}}.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;

use crate::olvermap::{eye_point, eye_point_derivative, eye_t0, h_n_theta_tol, neg_re_rho_plus, rho};
use crate::quad::{self, QuadOptions, Quadrature};
use crate::{Error, Result};

fn check_odd(n: u32) -> Result<()> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "dimension must be odd and at least 3, got {n}"
        )));
    }
    Ok(())
}

fn factorial(k: u32) -> f64 {
    (1..=k).map(f64::from).product()
}

/// Volume of the unit ball in R^n.
pub fn unit_ball_volume(n: u32) -> f64 {
    let half = f64::from(n) / 2.0;
    PI.powf(half) / gamma(half + 1.0)
}

/// τ_n = (2π)^{−n} vol²(B(0, 1)).
pub fn tau(n: u32) -> Result<f64> {
    check_odd(n)?;
    let v = unit_ball_volume(n);
    Ok(v * v / (2.0 * PI).powi(n as i32))
}

/// A_{S^{n−1}} from the area integral, as (n/2π)∫₀^π h_n(θ)dθ − 2τ_n.
///
/// Each h_n(θ) is a radial integral from the crossing of ∂K to infinity.
pub fn a_area(n: u32) -> Result<f64> {
    Ok(a_area_quadrature(n, 1e-9)?.value)
}

/// Area route with the outer θ-quadrature at relative tolerance `rel_tol`;
/// the returned error estimate is for A itself.
pub fn a_area_quadrature(n: u32, rel_tol: f64) -> Result<Quadrature> {
    check_odd(n)?;
    let inner_tol = (rel_tol * 1e-2).max(1e-12);
    let failure = std::cell::Cell::new(None);
    let q = quad::integrate_with_breaks(
        |theta| match h_n_theta_tol(theta, n, inner_tol) {
            Ok(v) => v,
            Err(e) => {
                failure.set(Some(e));
                0.0
            }
        },
        &[0.0, PI / 4.0, PI / 2.0, 3.0 * PI / 4.0, PI],
        QuadOptions::rel(rel_tol),
    )?;
    if let Some(e) = failure.take() {
        return Err(e);
    }
    let factor = f64::from(n) / (2.0 * PI);
    Ok(Quadrature {
        value: factor * q.value - 2.0 * tau(n)?,
        abs_error: factor * q.abs_error,
        evaluations: q.evaluations,
    })
}

// Angle in (0, π/2) where the circle |z| = t leaves K; zero for t ≥ 1.
fn exit_angle(t: f64) -> f64 {
    if t >= 1.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, PI / 2.0);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        let inside = rho(Complex64::from_polar(t, mid)).map(|r| r.re > 0.0).unwrap_or(false);
        if inside {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The area route with the order of integration swapped: angular first,
/// then radial over t from the imaginary-axis intercept of ∂K to infinity.
pub fn a_area_swapped(n: u32, rel_tol: f64) -> Result<f64> {
    check_odd(n)?;
    let t_min = eye_point(eye_t0()).im;
    let inner_opts = QuadOptions::rel(rel_tol * 1e-2);
    let ring = |t: f64| -> f64 {
        let a = exit_angle(t);
        let b = PI - a;
        if b <= a {
            return 0.0;
        }
        let f = |theta: f64| neg_re_rho_plus(Complex64::from_polar(t, theta)).unwrap_or(0.0);
        quad::integrate(f, a, b, inner_opts).map(|q| q.value).unwrap_or(f64::NAN)
    };
    let np1 = n as i32 + 1;
    let opts = QuadOptions::rel(rel_tol);
    let near = quad::integrate_with_breaks(|t| ring(t) / t.powi(np1), &[t_min, 0.8, 0.95, 1.0], opts)?;
    // t = 1/u on [1, ∞)
    let far = quad::integrate(
        |u| {
            if u <= 0.0 {
                return 0.0;
            }
            ring(1.0 / u) * u.powi(np1 - 2)
        },
        0.0,
        1.0,
        opts,
    )?;
    let total = near.value + far.value;
    if !total.is_finite() {
        return Err(Error::Quadrature {
            achieved: f64::INFINITY,
            requested: rel_tol,
        });
    }
    let nf = f64::from(n);
    Ok(2.0 * nf / (PI * factorial(n - 2)) * total - 2.0 * tau(n)?)
}

/// A_{S^{n−1}} as the line integral of |1−z²|^{1/2}/|z|^{n+1} over ∂K₊.
pub fn a_boundary(n: u32) -> Result<f64> {
    Ok(a_boundary_quadrature(n, 1e-12)?.value)
}

// ∫ over the right half of ∂K₊ with t = t₀(1 − u²), which absorbs the
// inverse square-root growth of |dz/dt| at the imaginary axis.
fn right_half_line_integral(n: u32, rel_tol: f64) -> Result<Quadrature> {
    let t0 = eye_t0();
    let np1 = n as i32 + 1;
    quad::integrate_with_breaks(
        |u| {
            let t = t0 * (1.0 - u * u);
            if t <= 0.0 || u <= 0.0 {
                return 0.0;
            }
            let z = eye_point(t);
            let speed = eye_point_derivative(t).norm() * 2.0 * t0 * u;
            (1.0 - z * z).norm().sqrt() / z.norm().powi(np1) * speed
        },
        &[0.0, 0.25, 0.5, 0.75, 1.0],
        QuadOptions {
            rel_tol,
            abs_tol: 1e-300,
            max_intervals: 4000,
        },
    )
}

pub fn a_boundary_quadrature(n: u32, rel_tol: f64) -> Result<Quadrature> {
    check_odd(n)?;
    let half = right_half_line_integral(n, rel_tol)?;
    // both halves of ∂K₊ contribute equally
    let factor = 4.0 / (PI * f64::from(n) * factorial(n - 2));
    Ok(Quadrature {
        value: factor * half.value,
        abs_error: factor * half.abs_error,
        evaluations: half.evaluations,
    })
}

/// ∫₁^∞ √(t²−1)/t^{n+1} dt by quadrature, and its Gamma-function value
/// √π Γ((n−1)/2)/(2nΓ(n/2)).
pub fn radial_identity(n: u32) -> Result<(f64, f64)> {
    check_odd(n)?;
    // t = 1/s gives ∫₀¹ √(1−s²) s^{n−2} ds; s = sin φ removes the root
    let q = quad::integrate(
        |phi: f64| phi.cos().powi(2) * phi.sin().powi(n as i32 - 2),
        0.0,
        PI / 2.0,
        QuadOptions::rel(1e-14),
    )?;
    let nf = f64::from(n);
    let rhs = PI.sqrt() * gamma((nf - 1.0) / 2.0) / (2.0 * nf * gamma(nf / 2.0));
    Ok((q.value, rhs))
}

/// Everything computed for one dimension, with the residuals of the
/// identities that tie the routes together.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantReport {
    pub n: u32,
    pub tau_n: f64,
    pub a_area: f64,
    pub a_boundary: f64,
    pub radial_integral: f64,
    pub a_area_error: f64,
    pub a_boundary_error: f64,
    pub identity_residuals: BTreeMap<String, f64>,
}

/// Compute τ_n and A_{S^{n−1}} by both routes with the area quadrature at
/// relative tolerance `rel_tol`.
pub fn constant_report(n: u32, rel_tol: f64) -> Result<ConstantReport> {
    check_odd(n)?;
    let tau_n = tau(n)?;
    let area = a_area_quadrature(n, rel_tol)?;
    let boundary = a_boundary_quadrature(n, 1e-12)?;
    let (lhs, rhs) = radial_identity(n)?;
    let swapped = a_area_swapped(n, rel_tol.max(1e-9))?;
    let nf = f64::from(n);
    let k = 2.0 / (PI * nf * factorial(n - 2));
    let mut residuals = BTreeMap::new();
    residuals.insert("radial_integral".to_string(), (lhs - rhs).abs());
    residuals.insert("duplication".to_string(), (k * rhs - tau_n).abs() / tau_n);
    residuals.insert(
        "area_vs_boundary".to_string(),
        (area.value - boundary.value).abs() / boundary.value,
    );
    residuals.insert(
        "integration_order".to_string(),
        (swapped - area.value).abs() / area.value,
    );
    residuals.insert(
        "green_formula".to_string(),
        ((boundary.value + 2.0 * k * lhs) - (area.value + 2.0 * tau_n)).abs() / (area.value + 2.0 * tau_n),
    );
    Ok(ConstantReport {
        n,
        tau_n,
        a_area: area.value,
        a_boundary: boundary.value,
        radial_integral: lhs,
        a_area_error: area.abs_error,
        a_boundary_error: boundary.abs_error,
        identity_residuals: residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tau_values() {
        let t3 = tau(3).unwrap();
        assert!((t3 - 2.0 / (9.0 * PI)).abs() < 1e-14 * t3);
        let t5 = tau(5).unwrap();
        let v5 = 8.0 * PI * PI / 15.0;
        assert!((t5 - v5 * v5 / (2.0 * PI).powi(5)).abs() < 1e-14 * t5);
        let ts: Vec<f64> = [3, 5, 7, 9].iter().map(|&n| tau(n).unwrap()).collect();
        assert!(ts.iter().all(|&t| t > 0.0));
        assert!(ts.windows(2).all(|w| w[1] < w[0]));
        assert!(tau(4).is_err());
    }

    #[test]
    fn boundary_route_for_the_two_sphere() {
        let a = a_boundary(3).unwrap();
        assert!(a > 1.73 && a < 1.75);
        assert!((a - 1.748_335_165_171_967).abs() < 1e-9);
        // 522772 poles below 67
        assert!((a - 522_772.0 / 67f64.powi(3)).abs() < 0.03);
    }

    #[test]
    fn left_half_of_the_eye_gives_the_same_integral() {
        let right = right_half_line_integral(3, 1e-12).unwrap().value;
        // z ↦ −z̄ traversed with its own parameter
        let t0 = eye_t0();
        let left = quad::integrate_with_breaks(
            |u| {
                let t = t0 * (1.0 - u * u);
                if t <= 0.0 || u <= 0.0 {
                    return 0.0;
                }
                let z = -eye_point(t).conj();
                let dz = -eye_point_derivative(t).conj();
                (1.0 - z * z).norm().sqrt() / z.norm().powi(4) * dz.norm() * 2.0 * t0 * u
            },
            &[0.0, 0.5, 1.0],
            QuadOptions::rel(1e-12),
        )
        .unwrap()
        .value;
        assert!((right - left).abs() <= 1e-9 * right);
    }

    #[test]
    fn two_routes_agree() {
        for n in [3, 5, 7] {
            let area = a_area(n).unwrap();
            let boundary = a_boundary(n).unwrap();
            assert!(area > 0.0 && boundary > 0.0);
            assert!((area - boundary).abs() <= 1e-4 * boundary, "n = {n}: {area} vs {boundary}");
        }
        assert!((a_boundary(5).unwrap() - 0.346_037_865_791_252).abs() < 1e-9);
        assert!((a_boundary(7).unwrap() - 0.025_048_373_167_308).abs() < 1e-10);
    }

    #[test]
    fn integration_order_does_not_matter() {
        for n in [3, 5] {
            let swapped = a_area_swapped(n, 1e-8).unwrap();
            let area = a_area(n).unwrap();
            assert!((swapped - area).abs() <= 2e-4 * area, "n = {n}: {swapped} vs {area}");
        }
    }

    #[test]
    fn radial_identity_values() {
        let (lhs, rhs) = radial_identity(3).unwrap();
        assert!((lhs - 1.0 / 3.0).abs() < 1e-12);
        assert!((rhs - 1.0 / 3.0).abs() < 1e-14);
        let (lhs, rhs) = radial_identity(5).unwrap();
        assert!((rhs - 2.0 / 15.0).abs() < 1e-14);
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn duplication_formula() {
        for n in [3, 5, 7] {
            let (_, rhs) = radial_identity(n).unwrap();
            let k = 2.0 / (PI * f64::from(n) * factorial(n - 2));
            let t = tau(n).unwrap();
            assert!((k * rhs - t).abs() <= 1e-12 * t);
        }
    }

    #[test]
    fn report_is_consistent() {
        let r = constant_report(3, 1e-6).unwrap();
        assert_eq!(r.n, 3);
        assert!(r.a_area > 1.73 && r.a_area < 1.75);
        for (name, v) in &r.identity_residuals {
            assert!(*v < 2e-4, "{name} = {v}");
        }
    }
}
