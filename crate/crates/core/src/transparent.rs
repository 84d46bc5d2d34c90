//! Resonances of the transparent obstacle: wave speed c inside the ball of
//! radius R₀ and 1 outside, with transmission conditions on the sphere.
//!
//! With j_l(t) = t^{1−n/2}J_ν(t), h_l(t) = t^{1−n/2}H^{(2)}_ν(t) the zeros
//! of c h_l′(λ)j_l(λ/c) − h_l(λ)j_l′(λ/c) are the conjugates of the
//! resonances. Writing ν = L + 1/2, the powers of t cancel and the
//! determinant is (2/π)c^p λ^{−2p}·D(λ) with p = (n−3)/2 and
//!
//!   D(λ) = c h_L′(λ) j_L(λ/c) − h_L(λ) j_L′(λ/c)
//!
//! in spherical Bessel functions. D has a double pole at 0 and λ²D is
//! entire and nonzero there, so λ²D is what the argument principle sees.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::olvermap::distance_to_eye;
use crate::specfun::{bessel_real_zeros, spherical_h, spherical_j, HalfIntOrder, HankelKind};
use crate::sphere::{multiplicity_m, sphere_zeros, Family, ResonanceRecord, EYE_INTERCEPT, GUARD_ORDERS};
use crate::winding::{rectangle, winding_number, PhaseSteps};
use crate::ComplexValue;

fn check_speed(c: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) || c == 1.0 {
        return Err(Error::OutOfRange(format!(
            "wave speed must be positive and different from 1, got {c}"
        )));
    }
    Ok(())
}

// u'' = −(2/t)u' − (1 − L(L+1)/t²)u for spherical Bessel functions.
fn second_derivative(degree: u32, t: Complex64, u: Complex64, du: Complex64) -> Complex64 {
    let ll = f64::from(degree) * (f64::from(degree) + 1.0);
    -du * (2.0 / t) - u * (1.0 - ll / (t * t))
}

/// D(λ), D′(λ) and |c h′ j| + |h j′|, all with a common positive factor
/// removed.
#[derive(Debug, Clone, Copy)]
struct DetValue {
    log_scale: f64,
    value: Complex64,
    derivative: Complex64,
    reference: f64,
}

#[derive(Debug, Clone, Copy)]
struct Transmission {
    degree: u32,
    c: f64,
}

impl Transmission {
    fn eval(&self, lambda: Complex64) -> Result<DetValue> {
        let t = lambda / self.c;
        let h = spherical_h(HankelKind::Second, self.degree, lambda)?;
        let j = spherical_j(self.degree, t)?;
        let h2 = second_derivative(self.degree, lambda, h.value, h.derivative);
        let j2 = second_derivative(self.degree, t, j.value, j.derivative);
        let a = h.derivative * j.value * self.c;
        let b = h.value * j.derivative;
        Ok(DetValue {
            log_scale: h.log_scale + j.log_scale,
            value: a - b,
            derivative: h2 * j.value * self.c - h.value * j2 / self.c,
            reference: a.norm() + b.norm(),
        })
    }

    // phase carrier for the argument principle
    fn phase(&self, lambda: Complex64) -> Result<Complex64> {
        Ok(self.eval(lambda)?.value * lambda * lambda)
    }
}

fn check_lambda(lambda: ComplexValue) -> Result<()> {
    if lambda.norm() == 0.0 {
        return Err(Error::Domain("the transmission determinant is singular at 0".into()));
    }
    Ok(())
}

/// The transmission determinant c h_l′(λ)j_l(λ/c) − h_l(λ)j_l′(λ/c) with
/// h_l built on H^{(2)}.
pub fn transmission_det(l: u32, n: u32, c: f64, lambda: ComplexValue) -> Result<ComplexValue> {
    check_speed(c)?;
    check_lambda(lambda)?;
    let nu = HalfIntOrder::new(l, n)?;
    let p = f64::from(n - 3) / 2.0;
    let d = Transmission {
        degree: nu.spherical_index(),
        c,
    }
    .eval(lambda)?;
    let log_pre = (2.0 / PI).ln() + p * c.ln() - 2.0 * p * lambda.norm().ln() + d.log_scale;
    let phase = Complex64::from_polar(1.0, -2.0 * p * lambda.arg());
    let v = d.value * phase * log_pre.exp();
    if !(v.re.is_finite() && v.im.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "determinant overflows at {lambda} (log magnitude {log_pre:.1})"
        )));
    }
    Ok(v)
}

/// The transmission condition in log-derivative form,
/// λh_l′(λ)/h_l(λ) − (λ/c)j_l′(λ/c)/j_l(λ/c).
pub fn transmission_log_derivative(l: u32, n: u32, c: f64, lambda: ComplexValue) -> Result<ComplexValue> {
    check_speed(c)?;
    check_lambda(lambda)?;
    let degree = HalfIntOrder::new(l, n)?.spherical_index();
    let t = lambda / c;
    let h = spherical_h(HankelKind::Second, degree, lambda)?;
    let j = spherical_j(degree, t)?;
    // the t^{1−n/2} factors contribute the same constant to both terms
    Ok(lambda * h.derivative / h.value - t * j.derivative / j.value)
}

/// |D(λ)| / (|c h′j| + |h j′|) at λ, the residual used to accept zeros.
pub fn relative_residual(l: u32, n: u32, c: f64, lambda: ComplexValue) -> Result<f64> {
    check_speed(c)?;
    check_lambda(lambda)?;
    let degree = HalfIntOrder::new(l, n)?.spherical_index();
    let d = Transmission { degree, c }.eval(lambda)?;
    Ok(d.value.norm() / d.reference)
}

/// An axis-aligned search rectangle with the winding number of λ²D
/// around it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchBox {
    pub lo_re: f64,
    pub hi_re: f64,
    pub lo_im: f64,
    pub hi_im: f64,
    pub winding: i64,
    pub depth: u32,
}

impl SearchBox {
    fn contains(&self, z: Complex64) -> bool {
        z.re > self.lo_re && z.re < self.hi_re && z.im > self.lo_im && z.im < self.hi_im
    }

    fn width(&self) -> f64 {
        self.hi_re - self.lo_re
    }

    fn height(&self) -> f64 {
        self.hi_im - self.lo_im
    }
}

/// Zeros found in a region together with the leaf boxes that certified
/// their count.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionZeros {
    pub zeros: Vec<ComplexValue>,
    pub region: SearchBox,
    pub leaves: Vec<SearchBox>,
}

const MAX_DEPTH: u32 = 40;
const RESIDUAL: f64 = 1e-10;

struct Solver {
    tr: Transmission,
    max_step: f64,
}

impl Solver {
    fn new(degree: u32, c: f64) -> Self {
        // D oscillates like e^{±iλ(1 + 1/c)} along the real direction
        Solver {
            tr: Transmission { degree, c },
            max_step: 0.3 / (1.0 + 1.0 / c),
        }
    }

    fn winding(&self, lo_re: f64, hi_re: f64, lo_im: f64, hi_im: f64) -> Result<i64> {
        let size = (hi_re - lo_re).max(hi_im - lo_im);
        let steps = PhaseSteps {
            max_step: self.max_step.min(size / 4.0),
            min_step: 1e-10 * size.max(1.0),
        };
        winding_number(|z| self.tr.phase(z), &rectangle(lo_re, hi_re, lo_im, hi_im), steps)
    }

    fn make_box(&self, lo_re: f64, hi_re: f64, lo_im: f64, hi_im: f64, depth: u32) -> Result<SearchBox> {
        Ok(SearchBox {
            lo_re,
            hi_re,
            lo_im,
            hi_im,
            winding: self.winding(lo_re, hi_re, lo_im, hi_im)?,
            depth,
        })
    }

    fn newton(&self, start: Complex64) -> Option<Complex64> {
        let mut z = start;
        for _ in 0..80 {
            if z.norm() < 1e-8 {
                return None;
            }
            let d = self.tr.eval(z).ok()?;
            if d.derivative.norm() == 0.0 {
                return None;
            }
            let mut step = d.value / d.derivative;
            if !(step.re.is_finite() && step.im.is_finite()) {
                return None;
            }
            if step.norm() > 1.0 {
                step /= step.norm();
            }
            z -= step;
            if step.norm() <= 1e-14 * z.norm().max(1.0) {
                break;
            }
        }
        let d = self.tr.eval(z).ok()?;
        (d.value.norm() <= RESIDUAL * d.reference).then_some(z)
    }

    // Zeros whose imaginary part is below the rounding level of D are
    // refined on the real axis: with h^{(2)} = j − iy there, D = A − iB
    // for real A, B, and the zero sits at x₀ − iA(x₀)/B′(x₀) with B(x₀) = 0.
    fn refine_near_real(&self, z: Complex64) -> Complex64 {
        if !(z.im.abs() < 1e-6 * z.norm()) || z.re <= 0.0 {
            return z;
        }
        let parts = |x: f64| -> Option<(f64, f64)> {
            let xc = Complex64::new(x, 0.0);
            let tc = xc / self.tr.c;
            let h1 = spherical_h(HankelKind::First, self.tr.degree, xc).ok()?;
            let j = spherical_j(self.tr.degree, xc).ok()?;
            let ji = spherical_j(self.tr.degree, tc).ok()?;
            let (y, dy) = (h1.value.im, h1.derivative.im);
            let d2y = second_derivative(self.tr.degree, xc, Complex64::new(y, 0.0), Complex64::new(dy, 0.0)).re;
            let (big_j, dbig_j) = (ji.value.re, ji.derivative.re);
            let d2big_j = second_derivative(self.tr.degree, tc, ji.value, ji.derivative).re;
            let b = self.tr.c * dy * big_j - y * dbig_j;
            let db = self.tr.c * d2y * big_j - y * d2big_j / self.tr.c;
            let a = self.tr.c * j.derivative.re * big_j - j.value.re * dbig_j;
            // A carries e^{s_j}, B carries e^{s_h}
            Some((b / db, a / db * (j.log_scale - h1.log_scale).exp()))
        };
        let mut x = z.re;
        for _ in 0..8 {
            let Some((ratio, _)) = parts(x) else {
                return z;
            };
            x -= ratio;
            if ratio.abs() <= 1e-15 * x {
                break;
            }
        }
        match parts(x) {
            Some((_, a_over_db)) if -a_over_db >= 0.0 && (x - z.re).abs() < 1e-6 * z.norm() => {
                Complex64::new(x, -a_over_db)
            }
            _ => z,
        }
    }

    fn is_known(known: &[Complex64], z: Complex64) -> bool {
        known.iter().any(|&w| (w - z).norm() <= 1e-7 * z.norm().max(1.0))
    }

    // Split positions away from known roots, first choice the midpoint.
    fn split_candidates(lo: f64, hi: f64) -> impl Iterator<Item = f64> {
        [0.5, 0.463, 0.537, 0.418, 0.582, 0.377, 0.623]
            .into_iter()
            .map(move |f| lo + f * (hi - lo))
    }

    fn solve_box(&self, b: SearchBox, known: &mut Vec<Complex64>, leaves: &mut Vec<SearchBox>) -> Result<()> {
        let inside = known.iter().filter(|&&z| b.contains(z)).count() as i64;
        if inside == b.winding {
            leaves.push(b);
            return Ok(());
        }
        if inside > b.winding {
            return Err(Error::RootCount {
                l: self.tr.degree,
                expected: b.winding.max(0) as usize,
                found: inside as usize,
            });
        }
        if b.winding == 1 && inside == 0 {
            let center = Complex64::new(0.5 * (b.lo_re + b.hi_re), 0.5 * (b.lo_im + b.hi_im));
            if let Some(z) = self.newton(center) {
                let z = self.refine_near_real(z);
                if b.contains(z) && !Self::is_known(known, z) {
                    known.push(z);
                    leaves.push(b);
                    return Ok(());
                }
            }
        }
        if b.depth >= MAX_DEPTH {
            return Err(Error::NoConvergence(format!(
                "box subdivision for degree {} reached depth {MAX_DEPTH} at {:?}",
                self.tr.degree, b
            )));
        }
        let horizontal = b.width() >= b.height();
        let (lo, hi) = if horizontal { (b.lo_re, b.hi_re) } else { (b.lo_im, b.hi_im) };
        let margin = 1e-3 * (hi - lo);
        let mut last_err = None;
        for cut in Self::split_candidates(lo, hi) {
            let near_root = known.iter().any(|z| {
                let coord = if horizontal { z.re } else { z.im };
                (coord - cut).abs() < margin
            });
            if near_root {
                continue;
            }
            let children = if horizontal {
                (
                    self.make_box(b.lo_re, cut, b.lo_im, b.hi_im, b.depth + 1),
                    self.make_box(cut, b.hi_re, b.lo_im, b.hi_im, b.depth + 1),
                )
            } else {
                (
                    self.make_box(b.lo_re, b.hi_re, b.lo_im, cut, b.depth + 1),
                    self.make_box(b.lo_re, b.hi_re, cut, b.hi_im, b.depth + 1),
                )
            };
            match children {
                (Ok(first), Ok(second)) if first.winding + second.winding == b.winding => {
                    self.solve_box(first, known, leaves)?;
                    return self.solve_box(second, known, leaves);
                }
                (Ok(first), Ok(second)) => {
                    last_err = Some(Error::Winding(format!(
                        "child windings {} + {} differ from parent {}",
                        first.winding, second.winding, b.winding
                    )));
                }
                (Err(e), _) | (_, Err(e)) => last_err = Some(e),
            }
        }
        Err(last_err.unwrap_or_else(|| Error::Winding("no admissible split".into())))
    }

    fn solve(&self, region: SearchBox, seeds: &[Complex64]) -> Result<RegionZeros> {
        let mut known: Vec<Complex64> = Vec::new();
        for &s in seeds {
            if let Some(z) = self.newton(s) {
                let z = self.refine_near_real(z);
                if region.contains(z) && !Self::is_known(&known, z) {
                    known.push(z);
                }
            }
        }
        let mut leaves = Vec::new();
        self.solve_box(region, &mut known, &mut leaves)?;
        known.retain(|&z| region.contains(z));
        if known.len() as i64 != region.winding {
            return Err(Error::RootCount {
                l: self.tr.degree,
                expected: region.winding.max(0) as usize,
                found: known.len(),
            });
        }
        known.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok(RegionZeros {
            zeros: known,
            region,
            leaves,
        })
    }

    // Try the region, then slightly enlarged copies if a zero sits on its
    // boundary.
    fn boxed_region(&self, lo_re: f64, hi_re: f64, lo_im: f64, hi_im: f64) -> Result<SearchBox> {
        let size = (hi_re - lo_re).max(hi_im - lo_im);
        let mut last = None;
        for k in 0..4 {
            let d = size * 1e-6 * f64::from(k) * 1.37;
            match self.make_box(lo_re - d, hi_re + d, lo_im - d, hi_im + d, 0) {
                Ok(b) => return Ok(b),
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one attempt"))
    }
}

/// Seeds from the two zero families: the conjugated sphere zeros and the
/// midpoints between them, and c times the real zeros of J_ν and the
/// midpoints between them, lifted by the leading imaginary part.
fn seeds(l: u32, n: u32, c: f64, reach: f64) -> Result<Vec<Complex64>> {
    let nu = HalfIntOrder::new(l, n)?;
    let mut out = Vec::new();
    let boundary: Vec<Complex64> = sphere_zeros(l, n, 1.0)?.into_iter().map(|z| z.conj()).collect();
    for w in boundary.windows(2) {
        out.push(0.5 * (w[0] + w[1]));
    }
    out.extend(boundary.iter().copied());
    let v = nu.nu();
    let lift = |x: f64| -> f64 {
        // leading imaginary part (c/2s_c)·log|(q+1)/(q−1)|, q = c s₁/s_c,
        // where both h and j(·/c) oscillate
        let (s1, sc) = (1.0 - (v / x).powi(2), 1.0 - (c * v / x).powi(2));
        if s1 <= 0.0 || sc <= 0.0 {
            return 0.0;
        }
        let (s1, sc) = (s1.sqrt(), sc.sqrt());
        let q = c * s1 / sc;
        if (q - 1.0).abs() < 1e-3 {
            return 1.0;
        }
        (c / (2.0 * sc) * ((q + 1.0) / (q - 1.0)).abs().ln()).min(reach)
    };
    let interior: Vec<f64> = bessel_real_zeros(nu, reach / c + 4.0).into_iter().map(|x| c * x).collect();
    let mut reals: Vec<f64> = interior.clone();
    reals.extend(interior.windows(2).map(|w| 0.5 * (w[0] + w[1])));
    if let Some(&first) = interior.first() {
        reals.push(first - 0.5 * c * PI);
    }
    for x in reals {
        out.push(Complex64::new(x, lift(x)));
    }
    Ok(out)
}

/// All zeros of the transmission determinant inside the rectangle
/// [lo_re, hi_re] × [lo_im, hi_im], with the leaf boxes of the search.
pub fn search_region(l: u32, n: u32, c: f64, lo_re: f64, hi_re: f64, lo_im: f64, hi_im: f64) -> Result<RegionZeros> {
    check_speed(c)?;
    if !(lo_re < hi_re && lo_im < hi_im) || ![lo_re, hi_re, lo_im, hi_im].iter().all(|x| x.is_finite()) {
        return Err(Error::OutOfRange(format!(
            "empty or unbounded region [{lo_re}, {hi_re}] x [{lo_im}, {hi_im}]"
        )));
    }
    let nu = HalfIntOrder::new(l, n)?;
    let solver = Solver::new(nu.spherical_index(), c);
    let region = solver.boxed_region(lo_re, hi_re, lo_im, hi_im)?;
    let reach = hi_re.abs().max(lo_re.abs()).max(hi_im.abs()).max(lo_im.abs());
    let s = seeds(l, n, c, reach)?;
    solver.solve(region, &s)
}

/// Zeros of the transmission determinant inside a rectangle.
pub fn zeros_in_region(l: u32, n: u32, c: f64, lo_re: f64, hi_re: f64, lo_im: f64, hi_im: f64) -> Result<Vec<ComplexValue>> {
    Ok(search_region(l, n, c, lo_re, hi_re, lo_im, hi_im)?.zeros)
}

/// Boundary family when λ/ν is at least as close to ∂K₊ as to the real
/// axis, interior family otherwise.
pub fn classify(nu: HalfIntOrder, lambda: ComplexValue) -> Family {
    let z = lambda / nu.nu();
    if distance_to_eye(z) <= z.im.abs() {
        Family::TransparentBoundary
    } else {
        Family::TransparentInterior
    }
}

/// Left edge and floor of the per-order search rectangle; the left edge
/// keeps zeros on the imaginary axis inside, the floor sits below the
/// zeros hugging the real axis.
const LEFT_EDGE: f64 = -0.5137;
const FLOOR: f64 = -0.0913;
const REACH_MARGIN: f64 = 0.731;

/// All zeros with |λ| < r_max in the closed upper half-plane for one order,
/// including both halves of the symmetric set.
pub fn transparent_zeros(l: u32, n: u32, c: f64, r_max: f64) -> Result<Vec<ComplexValue>> {
    let reach = r_max + REACH_MARGIN;
    let found = search_region(l, n, c, LEFT_EDGE, reach, FLOOR, reach)?.zeros;
    let on_axis = |z: &Complex64| z.re.abs() <= 1e-9 * z.norm().max(1.0);
    let mut out: Vec<Complex64> = Vec::new();
    for &z in &found {
        if on_axis(&z) {
            out.push(Complex64::new(0.0, z.im));
        } else if z.re > 0.0 {
            out.push(z);
            out.push(-z.conj());
        }
    }
    // the zeros found left of the axis must be mirrors of right ones
    for z in found.iter().filter(|z| !on_axis(z) && z.re < 0.0) {
        let mirror = -z.conj();
        if !found.iter().any(|w| (w - mirror).norm() <= 1e-6 * z.norm().max(1.0)) {
            return Err(Error::RootCount {
                l,
                expected: found.len() + 1,
                found: found.len(),
            });
        }
    }
    out.retain(|z| z.norm() < r_max + crate::sphere::TIE_TOLERANCE);
    out.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(out)
}

/// All transparent-obstacle records with |λ| < r_max, sorted by (l, Re λ).
/// The stored λ are zeros in the upper half-plane; the resonances are their
/// conjugates.
pub fn transparent_table(n: u32, c: f64, r0: f64, r_max: f64) -> Result<Vec<ResonanceRecord>> {
    check_speed(c)?;
    if !(r_max > 0.0 && r0 > 0.0) {
        return Err(Error::OutOfRange(format!(
            "radius and r_max must be positive, got R0 = {r0}, r_max = {r_max}"
        )));
    }
    let scaled_max = r_max * r0;
    // zeros of order ν stay above ν·min(0.66, c) up to O(ν^{1/3})
    let order_bound = scaled_max / (EYE_INTERCEPT.min(c) * 0.9);
    let first_empty = (0u32..)
        .find(|&l| HalfIntOrder::new(l, n).map(|o| o.nu() > order_bound).unwrap_or(true))
        .unwrap_or(0);
    let per_l = |l: u32| -> Result<Vec<ResonanceRecord>> {
        let nu = HalfIntOrder::new(l, n)?;
        let m = multiplicity_m(l, n)?;
        Ok(transparent_zeros(l, n, c, scaled_max)?
            .into_iter()
            .map(|lambda| ResonanceRecord {
                l,
                nu,
                lambda: lambda / r0,
                multiplicity: m,
                family: classify(nu, lambda),
            })
            .collect())
    };
    let mut end = first_empty + GUARD_ORDERS;
    let mut blocks: Vec<Vec<ResonanceRecord>> = (0..end).into_par_iter().map(per_l).collect::<Result<_>>()?;
    while blocks[blocks.len() - GUARD_ORDERS as usize..].iter().any(|b| !b.is_empty()) {
        blocks.push(per_l(end)?);
        end += 1;
    }
    Ok(blocks.into_iter().flatten().collect())
}
