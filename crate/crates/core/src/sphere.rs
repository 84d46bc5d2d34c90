//! Resonances of the sphere of radius R₀ with Dirichlet conditions.
//!
//! For angular momentum l in dimension n the resonances are the zeros of
//! H^{(1)}_ν(λR₀), ν = l + n/2 − 1, each with the multiplicity m(l) of the
//! degree-l spherical harmonics. Since H^{(1)}_{L+1/2}(z) is e^{iz} times a
//! polynomial in 1/z, these are the points λ = i·x/R₀ where x runs over the
//! L = ν − 1/2 zeros of the reverse Bessel polynomial θ_L.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::olvermap::rho_inverse_boundary;
use crate::specfun::{spherical_h, HalfIntOrder, HankelKind};
use crate::winding::{circle, winding_number, PhaseSteps};
use crate::ComplexValue;

/// Where a resonance record comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    SphereExact,
    SphereOlver,
    TransparentBoundary,
    TransparentInterior,
}

impl Family {
    pub fn as_str(&self) -> &'static str {
        match self {
            Family::SphereExact => "sphere_exact",
            Family::SphereOlver => "sphere_olver",
            Family::TransparentBoundary => "transparent_boundary",
            Family::TransparentInterior => "transparent_interior",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        [
            Family::SphereExact,
            Family::SphereOlver,
            Family::TransparentBoundary,
            Family::TransparentInterior,
        ]
        .into_iter()
        .find(|f| f.as_str() == s)
    }

    /// Transparent-obstacle records hold zeros in the upper half-plane; the
    /// resonances are their conjugates.
    pub fn stores_conjugate(&self) -> bool {
        matches!(self, Family::TransparentBoundary | Family::TransparentInterior)
    }
}

/// One zero λ with its angular data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResonanceRecord {
    pub l: u32,
    pub nu: HalfIntOrder,
    pub lambda: ComplexValue,
    pub multiplicity: u64,
    pub family: Family,
}

impl ResonanceRecord {
    /// The resonance itself, in the lower half-plane.
    pub fn resonance(&self) -> ComplexValue {
        if self.family.stores_conjugate() {
            self.lambda.conj()
        } else {
            self.lambda
        }
    }
}

/// Dimension of the space of degree-l spherical harmonics on S^{n−1}:
/// (2l + n − 2)/(n − 2)·C(l + n − 3, n − 3).
pub fn multiplicity_m(l: u32, n: u32) -> Result<u64> {
    if n < 3 || n.is_multiple_of(2) {
        return Err(Error::OutOfRange(format!(
            "dimension must be odd and at least 3, got {n}"
        )));
    }
    let (l, n) = (u128::from(l), u128::from(n));
    let mut binom: u128 = 1;
    for k in 1..=(n - 3) {
        binom = binom * (l + k) / k;
    }
    let m = (2 * l + n - 2) * binom / (n - 2);
    u64::try_from(m).map_err(|_| Error::OutOfRange(format!("multiplicity overflows for l = {l}")))
}

/// Olver's approximations λ_νk = ν·ρ^{−1}(−i(k − 1/4)π/ν), k = 1, …, ν − 1/2,
/// conjugated into the lower half-plane and ordered by k.
pub fn olver_approx_resonances(nu: HalfIntOrder) -> Result<Vec<ComplexValue>> {
    let v = nu.nu();
    (1..=nu.spherical_index())
        .map(|k| {
            let s = (f64::from(k) - 0.25) * PI / v;
            Ok((rho_inverse_boundary(s)? * v).conj())
        })
        .collect()
}

// θ_L/θ_L' at x through h^{(1)}_L(z), z = ix:
// θ_L'/θ_L = i((L+1)/z − i + h'/h).
fn newton_ratio(degree: u32, x: Complex64) -> Option<Complex64> {
    let z = Complex64::i() * x;
    let h = spherical_h(HankelKind::First, degree, z).ok()?;
    if h.value.norm() == 0.0 {
        return None;
    }
    let log_deriv = Complex64::i() * ((f64::from(degree) + 1.0) / z - Complex64::i() + h.derivative / h.value);
    Some(log_deriv.inv())
}

// Updates stall at the rounding level of h near its zeros; a few sweeps
// below 1e−10 are accepted and the roots polished afterwards.
fn aberth(degree: u32, mut x: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let d = x.len();
    let mut settled = 0;
    for _ in 0..500 {
        let mut worst: f64 = 0.0;
        for j in 0..d {
            let Some(ratio) = newton_ratio(degree, x[j]) else {
                continue;
            };
            let repulsion: Complex64 = (0..d).filter(|&k| k != j).map(|k| (x[j] - x[k]).inv()).sum();
            let w = ratio / (1.0 - ratio * repulsion);
            x[j] -= w;
            worst = worst.max(w.norm() / x[j].norm());
        }
        if worst < 1e-10 {
            settled += 1;
        }
        if worst < 1e-14 || settled >= 4 {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence(format!(
        "simultaneous iteration for degree {degree} did not settle"
    )))
}

// Newton on the spherical Hankel function itself, which is evaluated stably
// in the lower half-plane.
fn polish(l: u32, lambda: Complex64) -> Complex64 {
    let mut z = lambda;
    for _ in 0..3 {
        let Ok(h) = spherical_h(HankelKind::First, l, z) else {
            return z;
        };
        let step = h.value / h.derivative;
        if !(step.norm() < 1e-6 * z.norm()) {
            return z;
        }
        z -= step;
        if step.norm() < 1e-15 * z.norm() {
            break;
        }
    }
    z
}

// Each root must sit alone in a small disk that winds once.
fn validate(degree: u32, lambdas: &[Complex64]) -> Result<()> {
    let xs: Vec<Complex64> = lambdas.iter().map(|&z| -Complex64::i() * z).collect();
    for (j, &x) in xs.iter().enumerate() {
        let gap = xs
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != j)
            .map(|(_, &y)| (x - y).norm())
            .fold(x.norm(), f64::min);
        let radius = 0.3 * gap;
        let steps = PhaseSteps {
            max_step: radius / 4.0,
            min_step: radius * 1e-8,
        };
        // θ_L(x) and h^{(1)}_L(ix) differ by a factor without zeros or poles in the disk
        let h = |x: Complex64| spherical_h(HankelKind::First, degree, Complex64::i() * x).map(|h| h.value);
        let w = winding_number(h, &circle(x, radius, 16), steps)?;
        if w != 1 {
            return Err(Error::RootCount {
                l: degree,
                expected: 1,
                found: w.max(0) as usize,
            });
        }
    }
    Ok(())
}

/// All ν − 1/2 zeros of H^{(1)}_ν(λR₀), ν = l + n/2 − 1, sorted by Re λ.
pub fn sphere_zeros(l: u32, n: u32, r0: f64) -> Result<Vec<ComplexValue>> {
    if !(r0 > 0.0) {
        return Err(Error::OutOfRange(format!("radius must be positive, got {r0}")));
    }
    let nu = HalfIntOrder::new(l, n)?;
    let degree = nu.spherical_index();
    if degree == 0 {
        return Ok(Vec::new());
    }
    let seeds: Vec<Complex64> = olver_approx_resonances(nu)?
        .into_iter()
        .map(|lam| -Complex64::i() * lam)
        .collect();
    let xs = aberth(degree, seeds)?;
    let mut lambdas: Vec<Complex64> = xs
        .into_iter()
        .map(|x| polish(degree, Complex64::i() * x))
        .collect();
    validate(degree, &lambdas)?;
    if lambdas.len() != degree as usize || lambdas.iter().any(|z| !(z.im < 0.0)) {
        return Err(Error::RootCount {
            l,
            expected: degree as usize,
            found: lambdas.iter().filter(|z| z.im < 0.0).count(),
        });
    }
    lambdas.sort_by(|a, b| a.re.total_cmp(&b.re));
    Ok(lambdas.into_iter().map(|z| z / r0).collect())
}

/// Lower bound ν·0.6627 for the modulus of zeros of H^{(1)}_ν, from the
/// imaginary-axis intercept of the eye boundary.
pub const EYE_INTERCEPT: f64 = 0.6627;

/// Zeros within 1e−9 of the cutoff radius count as inside.
pub const TIE_TOLERANCE: f64 = 1e-9;

/// Number of orders past the cutoff that are checked to be empty.
pub const GUARD_ORDERS: u32 = 3;

/// All sphere resonances with |λ| < r_max, sorted by (l, Re λ).
pub fn sphere_table(n: u32, r0: f64, r_max: f64) -> Result<Vec<ResonanceRecord>> {
    if !(r_max > 0.0) {
        return Err(Error::OutOfRange(format!("r_max must be positive, got {r_max}")));
    }
    if !(r0 > 0.0) {
        return Err(Error::OutOfRange(format!("radius must be positive, got {r0}")));
    }
    let order_bound = r_max * r0 / EYE_INTERCEPT;
    // first l whose order exceeds the bound
    let first_empty = (0u32..)
        .find(|&l| HalfIntOrder::new(l, n).map(|o| o.nu() > order_bound).unwrap_or(true))
        .unwrap_or(0);
    let per_l = |l: u32| -> Result<Vec<ResonanceRecord>> {
        let nu = HalfIntOrder::new(l, n)?;
        let m = multiplicity_m(l, n)?;
        Ok(sphere_zeros(l, n, r0)?
            .into_iter()
            .filter(|z| z.norm() < r_max + TIE_TOLERANCE)
            .map(|lambda| ResonanceRecord {
                l,
                nu,
                lambda,
                multiplicity: m,
                family: Family::SphereExact,
            })
            .collect())
    };
    let mut end = first_empty + GUARD_ORDERS;
    let mut blocks: Vec<Vec<ResonanceRecord>> = (0..end).into_par_iter().map(per_l).collect::<Result<_>>()?;
    // extend until the last GUARD_ORDERS orders are all empty
    while blocks[blocks.len() - GUARD_ORDERS as usize..].iter().any(|b| !b.is_empty()) {
        blocks.push(per_l(end)?);
        end += 1;
    }
    Ok(blocks.into_iter().flatten().collect())
}

/// Newton step |h_L(R₀λ)/h_L′(R₀λ)| relative to |R₀λ| at a sphere record.
pub fn relative_residual(record: &ResonanceRecord, r0: f64) -> Result<f64> {
    let z = record.resonance() * r0;
    let h = spherical_h(HankelKind::First, record.nu.spherical_index(), z)?;
    Ok((h.value / h.derivative).norm() / z.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn multiplicities() {
        assert_eq!(multiplicity_m(0, 3).unwrap(), 1);
        assert_eq!(multiplicity_m(5, 3).unwrap(), 11);
        assert_eq!(multiplicity_m(1, 5).unwrap(), 5);
        assert_eq!(multiplicity_m(0, 5).unwrap(), 1);
        assert_eq!(multiplicity_m(2, 5).unwrap(), 14);
        assert_eq!(multiplicity_m(1, 7).unwrap(), 7);
        // m(l)(n−2)!/(2l^{n−2}) = (1 + 3/(2l))(1 + 1/l)(1 + 2/l) for n = 5
        for l in [200u32, 400, 1000] {
            let m = multiplicity_m(l, 5).unwrap() as f64;
            let lf = f64::from(l);
            let ratio = m * 6.0 / (2.0 * lf.powi(3));
            let exact = (1.0 + 1.5 / lf) * (1.0 + 1.0 / lf) * (1.0 + 2.0 / lf);
            assert!((ratio - exact).abs() < 1e-12);
            assert!(ratio - 1.0 < 5.0 / lf);
        }
        assert!(multiplicity_m(3, 4).is_err());
    }

    #[test]
    fn small_orders() {
        assert!(sphere_zeros(0, 3, 1.0).unwrap().is_empty());
        let z1 = sphere_zeros(1, 3, 1.0).unwrap();
        assert_eq!(z1.len(), 1);
        assert!((z1[0] - c(0.0, -1.0)).norm() < 1e-14);
        let z2 = sphere_zeros(2, 3, 1.0).unwrap();
        let r3 = 3f64.sqrt();
        assert!((z2[0] - c(-r3 / 2.0, -1.5)).norm() < 1e-14);
        assert!((z2[1] - c(r3 / 2.0, -1.5)).norm() < 1e-14);
        let z2_half = sphere_zeros(2, 3, 2.0).unwrap();
        assert!((z2_half[1] - z2[1] / 2.0).norm() < 1e-15);
    }

    #[test]
    fn zeros_are_zeros_of_both_hankel_forms() {
        for l in [3u32, 10, 40] {
            let zs = sphere_zeros(l, 3, 1.0).unwrap();
            assert_eq!(zs.len() as u32, l);
            for z in zs {
                let h1 = spherical_h(HankelKind::First, l, z).unwrap();
                assert!(h1.value.norm() < 1e-10 * h1.derivative.norm() * z.norm());
                // conjugates are zeros of h^(2)
                let h2 = spherical_h(HankelKind::Second, l, z.conj()).unwrap();
                assert!(h2.value.norm() < 1e-10 * h2.derivative.norm() * z.norm());
            }
        }
    }

    #[test]
    fn dimension_five_shifts_the_order() {
        // n = 5, l = 1 has ν = 5/2, the same zeros as n = 3, l = 2
        let a = sphere_zeros(1, 5, 1.0).unwrap();
        let b = sphere_zeros(2, 3, 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn olver_seed_counts() {
        for tn in [3u32, 21, 61] {
            let nu = HalfIntOrder::from_twice_nu(tn).unwrap();
            let seeds = olver_approx_resonances(nu).unwrap();
            assert_eq!(seeds.len() as u32, (tn - 1) / 2);
            assert!(seeds.iter().all(|z| z.im < 0.0));
        }
    }

    #[test]
    fn tiny_table() {
        let t = sphere_table(3, 1.0, 1.2).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].l, 1);
        assert_eq!(t[0].multiplicity, 3);
        assert!(sphere_table(3, 1.0, 0.5).unwrap().is_empty());
    }

    #[test]
    fn residuals_of_a_scaled_table() {
        for r in sphere_table(3, 2.0, 8.0).unwrap() {
            assert!(relative_residual(&r, 2.0).unwrap() < 1e-12);
        }
        let mut off = sphere_table(3, 1.0, 1.2).unwrap()[0];
        off.lambda += 0.01;
        assert!(relative_residual(&off, 1.0).unwrap() > 1e-3);
    }
}
