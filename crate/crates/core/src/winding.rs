//! Argument-principle zero counting by phase continuation.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_8, PI};

use crate::error::{Error, Result};
use crate::ComplexValue;

/// Step control for [`winding_number`].
#[derive(Debug, Clone, Copy)]
pub struct PhaseSteps {
    /// Longest step taken along the path.
    pub max_step: f64,
    /// Steps are halved while the phase change exceeds π/2; below this
    /// length the path is declared to pass through a zero.
    pub min_step: f64,
}

/// Winding number of `f` around the closed polygon through `vertices`.
///
/// Only the phase of `f` is used, so `f` may return values with any
/// positive real factor removed.
pub fn winding_number<F>(f: F, vertices: &[ComplexValue], steps: PhaseSteps) -> Result<i64>
where
    F: Fn(ComplexValue) -> Result<ComplexValue>,
{
    let mut total = 0.0;
    let eval = |z: ComplexValue| -> Result<ComplexValue> {
        let v = f(z)?;
        if v.norm() == 0.0 || !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Winding(format!("function vanishes or is not finite at {z}")));
        }
        Ok(v)
    };
    for (k, &a) in vertices.iter().enumerate() {
        let b = vertices[(k + 1) % vertices.len()];
        let len = (b - a).norm();
        if len == 0.0 {
            continue;
        }
        let mut t = 0.0;
        let mut h = (steps.max_step / len).min(1.0);
        let mut fa = eval(a)?;
        while t < 1.0 {
            let t1 = (t + h).min(1.0);
            let f1 = eval(a + (b - a) * t1)?;
            let d = (f1 / fa).arg();
            if d.abs() > FRAC_PI_2 {
                if h * len < steps.min_step {
                    return Err(Error::Winding(format!(
                        "phase continuation stalled near {}",
                        a + (b - a) * t
                    )));
                }
                h /= 2.0;
                continue;
            }
            total += d;
            t = t1;
            fa = f1;
            if d.abs() < FRAC_PI_8 {
                h = (2.0 * h).min(steps.max_step / len);
            }
        }
    }
    let turns = total / (2.0 * PI);
    let rounded = turns.round();
    if (turns - rounded).abs() > 1e-6 {
        return Err(Error::Winding(format!("non-integer winding {turns}")));
    }
    Ok(rounded as i64)
}

/// Vertices of a regular polygon inscribed in a circle, counter-clockwise.
pub fn circle(center: ComplexValue, radius: f64, sides: usize) -> Vec<ComplexValue> {
    (0..sides)
        .map(|k| center + ComplexValue::from_polar(radius, 2.0 * PI * k as f64 / sides as f64))
        .collect()
}

/// Corners of an axis-aligned rectangle, counter-clockwise.
pub fn rectangle(lo_re: f64, hi_re: f64, lo_im: f64, hi_im: f64) -> Vec<ComplexValue> {
    vec![
        ComplexValue::new(lo_re, lo_im),
        ComplexValue::new(hi_re, lo_im),
        ComplexValue::new(hi_re, hi_im),
        ComplexValue::new(lo_re, hi_im),
    ]
}
