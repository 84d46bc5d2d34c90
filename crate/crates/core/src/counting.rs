//! Counting functions N(r), M(r) and the Dirichlet-ball reference count.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymconst::{a_boundary, tau};
use crate::error::{Error, Result};
use crate::specfun::{bessel_real_zeros, HalfIntOrder};
use crate::sphere::{multiplicity_m, ResonanceRecord};

/// Sorted distinct moduli with their multiplicities and running sums.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountingFunction {
    pub n: u32,
    moduli: Vec<f64>,
    multiplicities: Vec<u64>,
    // cumulative Σ m and Σ m·log|λ| up to and including each entry
    cum_count: Vec<u64>,
    cum_log: Vec<f64>,
}

impl CountingFunction {
    /// Build from (modulus, multiplicity) pairs; equal moduli are merged.
    pub fn new(n: u32, entries: impl IntoIterator<Item = (f64, u64)>) -> Result<Self> {
        let mut raw: Vec<(f64, u64)> = entries.into_iter().collect();
        if let Some(&(m, k)) = raw.iter().find(|&&(m, k)| !(m > 0.0 && m.is_finite()) || k == 0) {
            return Err(Error::OutOfRange(format!(
                "entries need a positive finite modulus and multiplicity, got ({m}, {k})"
            )));
        }
        raw.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut moduli: Vec<f64> = Vec::with_capacity(raw.len());
        let mut multiplicities: Vec<u64> = Vec::with_capacity(raw.len());
        for (m, k) in raw {
            if moduli.last() == Some(&m) {
                *multiplicities.last_mut().expect("nonempty") += k;
            } else {
                moduli.push(m);
                multiplicities.push(k);
            }
        }
        let mut cum_count = Vec::with_capacity(moduli.len());
        let mut cum_log = Vec::with_capacity(moduli.len());
        let (mut c, mut s) = (0u64, 0.0f64);
        for (&m, &k) in moduli.iter().zip(&multiplicities) {
            c += k;
            s += k as f64 * m.ln();
            cum_count.push(c);
            cum_log.push(s);
        }
        Ok(CountingFunction {
            n,
            moduli,
            multiplicities,
            cum_count,
            cum_log,
        })
    }

    pub fn from_records(n: u32, records: &[ResonanceRecord]) -> Result<Self> {
        Self::new(n, records.iter().map(|r| (r.lambda.norm(), r.multiplicity)))
    }

    pub fn entries(&self) -> impl Iterator<Item = (f64, u64)> + '_ {
        self.moduli.iter().copied().zip(self.multiplicities.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.moduli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.moduli.is_empty()
    }

    // number of entries with modulus < r
    fn below(&self, r: f64) -> usize {
        self.moduli.partition_point(|&m| m < r)
    }

    /// N(r): resonances with modulus strictly below r, with multiplicity.
    pub fn count_n(&self, r: f64) -> u64 {
        match self.below(r) {
            0 => 0,
            k => self.cum_count[k - 1],
        }
    }

    /// M(r) = n Σ_{|λ|<r} m·log(r/|λ|).
    pub fn regularized_m(&self, r: f64) -> f64 {
        match self.below(r) {
            0 => 0.0,
            k => f64::from(self.n) * (self.cum_count[k - 1] as f64 * r.ln() - self.cum_log[k - 1]),
        }
    }
}

/// N^♯(r) for the Dirichlet Laplacian on the ball of radius R: the number
/// of zeros of J_{l+n/2−1} in (0, rR], each counted m(l) times.
pub fn weyl_ball_count(n: u32, big_r: f64, r: f64) -> Result<u64> {
    if !(big_r > 0.0 && r > 0.0) {
        return Err(Error::OutOfRange(format!(
            "radius and r must be positive, got R = {big_r}, r = {r}"
        )));
    }
    HalfIntOrder::new(0, n)?;
    let x = r * big_r;
    // J_ν has no zeros below ν
    let orders: Vec<u32> = (0u32..)
        .take_while(|&l| HalfIntOrder::new(l, n).map(|o| o.nu() < x).unwrap_or(false))
        .collect();
    orders
        .into_par_iter()
        .map(|l| -> Result<u64> {
            let nu = HalfIntOrder::new(l, n)?;
            Ok(multiplicity_m(l, n)? * bessel_real_zeros(nu, x).len() as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Both sides of |M(r) − 2(N^♯(r) − τ_nRⁿrⁿ)| ≤ (2τ_n + A_{S^{n−1}})R₀ⁿrⁿ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Theorem2Gap {
    pub lhs: f64,
    pub rhs: f64,
    pub m: f64,
    pub weyl: u64,
}

pub fn theorem2_gap(cf: &CountingFunction, n: u32, r0: f64, big_r: f64, r: f64) -> Result<Theorem2Gap> {
    if !(big_r > r0 && r0 > 0.0) {
        return Err(Error::OutOfRange(format!(
            "need R > R0 > 0, got R0 = {r0}, R = {big_r}"
        )));
    }
    let t = tau(n)?;
    let weyl = weyl_ball_count(n, big_r, r)?;
    let m = cf.regularized_m(r);
    let nn = n as i32;
    let lhs = (m - 2.0 * (weyl as f64 - t * big_r.powi(nn) * r.powi(nn))).abs();
    let rhs = (2.0 * t + a_boundary(n)?) * r0.powi(nn) * r.powi(nn);
    Ok(Theorem2Gap { lhs, rhs, m, weyl })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_counts_nothing() {
        let cf = CountingFunction::new(3, []).unwrap();
        assert!(cf.is_empty());
        assert_eq!(cf.count_n(10.0), 0);
        assert_eq!(cf.regularized_m(10.0), 0.0);
    }

    #[test]
    fn strict_inequality_and_merging() {
        let cf = CountingFunction::new(3, [(2.0, 1), (1.0, 3), (2.0, 4)]).unwrap();
        assert_eq!(cf.len(), 2);
        assert_eq!(cf.count_n(1.0), 0);
        assert_eq!(cf.count_n(1.5), 3);
        assert_eq!(cf.count_n(2.0), 3);
        assert_eq!(cf.count_n(2.0 + 1e-12), 8);
        assert!(CountingFunction::new(3, [(0.0, 1)]).is_err());
        assert!(CountingFunction::new(3, [(1.0, 0)]).is_err());
    }

    #[test]
    fn single_entry_m() {
        let cf = CountingFunction::new(3, [(1.0, 1)]).unwrap();
        assert!((cf.regularized_m(2.0) - 3.0 * 2f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn m_is_the_integral_of_n() {
        let cf = CountingFunction::new(3, [(0.5, 2), (1.3, 1), (2.0, 7), (2.9, 3)]).unwrap();
        // step function integrated panel by panel
        let breaks = [0.5, 1.3, 2.0, 2.9, 3.3];
        let mut integral = 0.0;
        for w in breaks.windows(2) {
            integral += cf.count_n(0.5 * (w[0] + w[1])) as f64 * (w[1] / w[0]).ln();
        }
        assert!((cf.regularized_m(3.3) - 3.0 * integral).abs() < 1e-12);
    }

    #[test]
    fn weyl_l0_zeros() {
        // the order-1/2 zeros π, 2π, 3π below 10, plus the higher orders
        let zeros = bessel_real_zeros(HalfIntOrder::new(0, 3).unwrap(), 10.0);
        assert_eq!(zeros.len(), 3);
        let total = weyl_ball_count(3, 1.0, 10.0).unwrap();
        let mut by_hand = 0;
        for l in 0..10u32 {
            let nu = HalfIntOrder::new(l, 3).unwrap();
            by_hand += (2 * l as u64 + 1) * bessel_real_zeros(nu, 10.0).len() as u64;
        }
        assert_eq!(total, by_hand);
        assert!(weyl_ball_count(3, 1.0, 1.0).unwrap() == 0);
    }

    #[test]
    fn weyl_count_is_monotone() {
        let mut last = 0;
        for k in 1..30 {
            let c = weyl_ball_count(3, 1.0, f64::from(k)).unwrap();
            assert!(c >= last);
            last = c;
        }
    }

    #[test]
    fn theorem2_on_empty_data() {
        let cf = CountingFunction::new(3, []).unwrap();
        let g = theorem2_gap(&cf, 3, 1.0, 1.01, 10.0).unwrap();
        let t = tau(3).unwrap();
        let expected = 2.0 * (g.weyl as f64 - t * 1.01f64.powi(3) * 1000.0).abs();
        assert!((g.lhs - expected).abs() < 1e-9);
        assert!(theorem2_gap(&cf, 3, 1.0, 0.9, 10.0).is_err());
    }
}
