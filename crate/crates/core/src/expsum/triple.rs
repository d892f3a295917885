use num_complex::Complex64;
use serde::Serialize;

use super::bump::{smooth_bump, BumpFunction};
use super::sums::{CompensatedSum, ModContext};
use crate::arith::{gcd, mulmod, SpfSieve};
use crate::error::{domain, Error, Result};
use crate::exec::Exec;

/// Upper limit on `⌊H⌋ · U₁ · U₂`.
pub const TRIPLE_BUDGET: f64 = 1e9;

#[derive(Debug, Clone, Serialize)]
pub struct TripleSumConfig {
    pub u1: f64,
    pub u2: f64,
    pub h: f64,
    pub theta: f64,
    pub x: f64,
    pub eps: f64,
    /// `R = U₁^{2+ε} / U₂`.
    pub r: f64,
    pub delta: f64,
}

impl TripleSumConfig {
    /// Chooses `x` so that `H = U₁U₂ x^{−1/2+ε}`.
    pub fn new(u1: f64, u2: f64, h: f64, theta: f64, eps: f64) -> Result<Self> {
        if !(u1 >= 1.0 && u2 >= 1.0 && h > 0.0) {
            return domain("U1, U2 must be at least 1 and H positive");
        }
        if !(theta > 0.0 && theta < 0.5) || !(eps > 0.0 && eps < 0.5) {
            return domain("theta and eps must lie in (0, 1/2)");
        }
        let x = (u1 * u2 / h).powf(1.0 / (0.5 - eps));
        Ok(TripleSumConfig {
            u1,
            u2,
            h,
            theta,
            x,
            eps,
            r: u1.powf(2.0 + eps) / u2,
            delta: 0.1,
        })
    }

    /// `L = ⌊R / u₀²⌋`.
    pub fn shift_count(&self, u0: u64) -> u64 {
        (self.r / (u0 * u0) as f64).floor() as u64
    }

    /// Largest `ε₀ ≥ 0` with `U₁^{(8+2θ)/3} U₂ ≤ x^{1−2ε₀}` and `U₂ ≤ U₁ x^{1/2−5ε₀}`.
    pub fn eps0(&self) -> f64 {
        let lx = self.x.ln();
        let a = (1.0 - ((8.0 + 2.0 * self.theta) / 3.0 * self.u1.ln() + self.u2.ln()) / lx) / 2.0;
        let b = (0.5 - (self.u2.ln() - self.u1.ln()) / lx) / 5.0;
        a.min(b).max(0.0)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TripleSumResult {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub terms: u64,
    /// `|𝔖| / (U₁U₂)`.
    pub ratio: f64,
    pub eps0: f64,
    /// `|𝔖| / (U₁U₂ x^{−ε₀})`.
    pub target_ratio: f64,
}

impl TripleSumResult {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

/// `𝔖(U₁, U₂, H) = Σ_{1≤h≤H} Σ_{U₁<u₁≤2U₁} Σ_{u₂} g₁(u₂/U₂) e(h ū₂² / u₁²)`
/// over odd coprime `u₁, u₂`; with `smooth` only `U₁^θ`-smooth `u₁` count.
pub fn triple_sum(config: &TripleSumConfig, smooth: bool, exec: Exec) -> Result<TripleSumResult> {
    let hmax = config.h.floor().max(0.0) as i64;
    let work = hmax as f64 * config.u1 * config.u2;
    if work > TRIPLE_BUDGET {
        return Err(Error::Budget(format!(
            "{work:.3e} iterations exceed {TRIPLE_BUDGET:.0e}"
        )));
    }
    let g = smooth_bump(config.delta)?;
    let u1_lo = config.u1.floor() as u64 + 1;
    let u1_hi = (2.0 * config.u1).floor() as u64;
    let sieve = SpfSieve::new(u1_hi.max(2));
    let y = config.u1.powf(config.theta);
    let moduli: Vec<u64> = (u1_lo..=u1_hi)
        .filter(|&u| u % 2 == 1)
        .filter(|&u| !smooth || u == 1 || sieve.factorize(u).last().unwrap().0 as f64 <= y)
        .collect();
    let u2_lo = config.u2.floor() as u64 + 1;
    let u2_hi = (2.0 * config.u2).ceil() as u64;
    let weights: Vec<(u64, f64)> = (u2_lo..=u2_hi)
        .filter(|&u| u % 2 == 1)
        .map(|u| (u, g1_weight(&g, u as f64 / config.u2)))
        .filter(|&(_, w)| w > 0.0)
        .collect();

    let parts = exec.map(&moduli, |&u1| per_modulus(u1, hmax, &weights));
    let mut acc = CompensatedSum::default();
    let mut terms = 0;
    for (v, t) in parts {
        acc.add(v);
        terms += t;
    }
    let value = acc.value();
    let base = config.u1 * config.u2;
    let eps0 = config.eps0();
    Ok(TripleSumResult {
        re: value.re,
        im: value.im,
        abs: value.norm(),
        terms,
        ratio: value.norm() / base,
        eps0,
        target_ratio: value.norm() / (base * config.x.powf(-eps0)),
    })
}

fn g1_weight(g: &BumpFunction, y: f64) -> f64 {
    g.g1(y)
}

fn per_modulus(u1: u64, hmax: i64, weights: &[(u64, f64)]) -> (Complex64, u64) {
    let q = u1 * u1;
    let ctx = ModContext::new(q);
    let mut acc = CompensatedSum::default();
    let mut terms = 0;
    for &(u2, w) in weights {
        if gcd(u1, u2) != 1 {
            continue;
        }
        let inv = ctx.inverse(u2).unwrap();
        let s = mulmod(inv, inv, q);
        for h in 1..=hmax as u64 {
            acc.add(ctx.char(mulmod(h % q, s, q)) * w);
            terms += 1;
        }
    }
    (acc.value(), terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reported_configuration() {
        let cfg = TripleSumConfig::new(16.0, 64.0, 2.0, 0.49, 0.01).unwrap();
        assert!((cfg.u1 * cfg.u2 * cfg.x.powf(-0.5 + cfg.eps) - 2.0).abs() < 1e-9);
        let full = triple_sum(&cfg, false, Exec::Sequential).unwrap();
        let restricted = triple_sum(&cfg, true, Exec::Sequential).unwrap();
        assert!(full.terms >= restricted.terms && restricted.terms > 0);
        assert!(full.ratio.is_finite() && full.ratio < 1.0);
        let par = triple_sum(&cfg, true, Exec::Parallel).unwrap();
        assert!((par.value() - restricted.value()).norm() < 1e-9);
    }

    #[test]
    fn empty_h_range() {
        let cfg = TripleSumConfig::new(16.0, 64.0, 0.5, 0.3, 0.01).unwrap();
        let r = triple_sum(&cfg, false, Exec::Sequential).unwrap();
        assert_eq!((r.terms, r.abs), (0, 0.0));
    }

    #[test]
    fn direct_small_case() {
        let cfg = TripleSumConfig::new(4.0, 8.0, 3.0, 0.4, 0.05).unwrap();
        let g = smooth_bump(0.1).unwrap();
        let mut want = Complex64::new(0.0, 0.0);
        for h in 1..=3u64 {
            for u1 in [5u64, 7] {
                for u2 in (9..16u64).step_by(2) {
                    if gcd(u1, u2) != 1 {
                        continue;
                    }
                    let q = u1 * u1;
                    let inv = crate::arith::mod_inv(u2 as i128, q).unwrap();
                    let k = (h * inv * inv) % q;
                    want += super::super::sums::e(k as f64 / q as f64) * g.g1(u2 as f64 / 8.0);
                }
            }
        }
        let got = triple_sum(&cfg, false, Exec::Sequential).unwrap();
        assert!((got.value() - want).norm() < 1e-10);
    }

    #[test]
    fn budget_guard() {
        let cfg = TripleSumConfig::new(1e4, 1e4, 20.0, 0.3, 0.01).unwrap();
        assert!(matches!(
            triple_sum(&cfg, false, Exec::Sequential),
            Err(Error::Budget(_))
        ));
    }
}
