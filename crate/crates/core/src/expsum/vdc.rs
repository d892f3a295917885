//! The `q`-analogue of van der Corput: splitting `u₁² = q₁q₂`, the partial
//! sums `Σ(R, u₁²; h) = Σ_{r≤R} K(r, h; u₁²)`, and the shifted rewriting.

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use super::parts::mod_parts;
use super::sums::{CompensatedSum, ModContext};
use crate::arith::{gcd, gcd_infinity, mod_inv, mulmod, reduce};
use crate::error::{domain, Error, Result};
use crate::rng::keyed_rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VdcSplit {
    pub u1: u64,
    pub u0: u64,
    /// `(u₀, (u₁/u₀)^∞)`.
    pub d: u64,
    pub q1: u64,
    pub q2: u64,
}

pub fn vdc_split(u1: u64, u0: u64) -> Result<VdcSplit> {
    if u1 == 0 || u0 == 0 || !u1.is_multiple_of(u0) {
        return domain(format!("{u0} does not divide {u1}"));
    }
    let d = gcd_infinity(u0, u1 / u0);
    let q1 = (u0 / d).pow(2);
    Ok(VdcSplit {
        u1,
        u0,
        d,
        q1,
        q2: u1 * u1 / q1,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VdcPath {
    Direct,
    /// Average over shifts `r → r + u₀²ℓ`, `1 ≤ ℓ ≤ ⌊R/u₀²⌋`, with each
    /// `K` factored through the split `q₁q₂`.
    Shifted {
        u0: u64,
    },
}

/// `Σ_{r≤R} K(r, h; u₁²)`.
pub fn vdc_partial_sum(r_max: u64, u1: u64, h: i64, path: VdcPath) -> Result<Complex64> {
    if u1 == 0 || u1.is_multiple_of(2) {
        return domain(format!("u1 = {u1} must be odd"));
    }
    match path {
        VdcPath::Direct => Ok(direct(r_max, u1, h)),
        VdcPath::Shifted { u0 } => shifted(r_max, u1, h, u0),
    }
}

fn direct(r_max: u64, u1: u64, h: i64) -> Complex64 {
    let q = u1 * u1;
    let ctx = ModContext::new(q);
    let table: Vec<Complex64> = (0..q.min(r_max + 1))
        .map(|r| ctx.kloos_k(r as i64, h))
        .collect();
    (1..=r_max)
        .map(|r| table[(r % q) as usize])
        .collect::<CompensatedSum>()
        .value()
}

fn shifted(r_max: u64, u1: u64, h: i64, u0: u64) -> Result<Complex64> {
    let split = vdc_split(u1, u0)?;
    let step = u0 * u0;
    let shifts = r_max / step;
    if shifts == 0 {
        return domain(format!("R = {r_max} is smaller than u0^2 = {step}"));
    }
    let (q1, q2) = (split.q1, split.q2);
    let h1 = crt_twist(h, q2, q1);
    let h2 = crt_twist(h, q1, q2);
    let (c1, c2) = (ModContext::new(q1), ModContext::new(q2));
    let k1: Vec<Complex64> = (0..q1).map(|r| c1.kloos_k(r as i64, h1)).collect();
    let k2: Vec<Complex64> = (0..q2).map(|r| c2.kloos_k(r as i64, h2)).collect();
    let mut acc = CompensatedSum::default();
    for l in 1..=shifts {
        let off = (step * l) as i64;
        for r in 1 - off..=r_max as i64 - off {
            let a = k1[reduce(r as i128, q1) as usize];
            let b = k2[reduce((r + off) as i128, q2) as usize];
            acc.add(a * b);
        }
    }
    Ok(acc.value() / shifts as f64)
}

/// `h · (other⁻¹)³ mod q`.
pub fn crt_twist(h: i64, other: u64, q: u64) -> i64 {
    let inv = mod_inv(other as i128, q).expect("coprime split");
    let cube = mulmod(mulmod(inv, inv, q), inv, q);
    mulmod(reduce(h as i128, q), cube, q) as i64
}

/// `u₁^ε R^{1/2} {u₀u₁ + u₀R^{1/2}(u₀, u₁/u₀) + d^{1/2}(h, u₀²)^{1/2} u₁^{3/2} (u₁♯)^{1/4} / u₀^{1/2}}`.
pub fn vdc_bound(r: f64, u1: u64, u0: u64, h: i64, eps: f64) -> Result<f64> {
    let split = vdc_split(u1, u0)?;
    if u1.is_multiple_of(2) {
        return domain(format!("u1 = {u1} must be odd"));
    }
    let (u0f, u1f) = (u0 as f64, u1 as f64);
    let bracket = u0f * u1f
        + u0f * r.sqrt() * gcd(u0, u1 / u0) as f64
        + (split.d as f64).sqrt()
            * (crate::arith::gcd_with(&[h], u0 * u0) as f64).sqrt()
            * u1f.powf(1.5)
            * (mod_parts(u1).sharp as f64).powf(0.25)
            / u0f.sqrt();
    Ok(u1f.powf(eps) * r.sqrt() * bracket)
}

#[derive(Debug, Clone, Serialize)]
pub struct CrtReport {
    pub points: usize,
    pub max_deviation: f64,
}

/// Deviation threshold for [`crt_identities`].
pub const IDENTITY_TOLERANCE: f64 = 1e-8;

/// Check, on a seeded grid of odd `u₁ ≤ 200`:
/// `K(2r, 4̄h; u₁²) = K(r, h; u₁²)`, `T(4̄h, u₁²) = T(h, u₁²)`, and the
/// factorization `K(r + u₀²ℓ, h; u₁²) = K(r, h q̄₂³; q₁) K(r + u₀²ℓ, h q̄₁³; q₂)`.
pub fn crt_identities(seed: u64, points: usize) -> Result<CrtReport> {
    let mut worst: f64 = 0.0;
    for i in 0..points {
        let mut rng = keyed_rng(seed, "crt", 0, i as u64);
        let u1 = 2 * rng.random_range(1..=100u64) - 1;
        let divs = crate::arith::divisors(u1);
        let u0 = divs[rng.random_range(0..divs.len())];
        let r = rng.random_range(-500i64..=500);
        let h = rng.random_range(-500i64..=500);
        let l = rng.random_range(0i64..=20);
        worst = worst.max(identity_point(u1, u0, r, h, l)?);
    }
    if worst > IDENTITY_TOLERANCE {
        return Err(Error::IdentityViolation(format!("max deviation {worst:e}")));
    }
    Ok(CrtReport {
        points,
        max_deviation: worst,
    })
}

/// Largest deviation among the three identities at one grid point.
pub fn identity_point(u1: u64, u0: u64, r: i64, h: i64, l: i64) -> Result<f64> {
    let q = u1 * u1;
    let ctx = ModContext::new(q);
    let inv4 = mod_inv(4, q).unwrap() as i64;
    let h4 = mulmod(inv4 as u64, reduce(h as i128, q), q) as i64;
    let d1 = (ctx.kloos_k(2 * r, h4) - ctx.kloos_k(r, h)).norm();
    let d2 = (ctx.gauss_t(h4) - ctx.gauss_t(h)).norm();
    let s = vdc_split(u1, u0)?;
    let shifted = r + (u0 * u0) as i64 * l;
    let lhs = ctx.kloos_k(shifted, h);
    let rhs = ModContext::new(s.q1).kloos_k(r, crt_twist(h, s.q2, s.q1))
        * ModContext::new(s.q2).kloos_k(shifted, crt_twist(h, s.q1, s.q2));
    Ok(d1.max(d2).max((lhs - rhs).norm()))
}
