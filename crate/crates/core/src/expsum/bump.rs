//! A smooth bump `g` with `0 ≤ g ≤ 1_{[-1/2, 1/2]}` and `∫g = 1 − δ`,
//! its Fourier transform, and a numerical Poisson-summation check.
//!
//! `g` is the indicator of `[−a, a]`, `a = (1 − δ)/2`, convolved with the
//! kernel `k(t) ∝ exp(−1/(1 − t²))` dilated to width `w = δ/2`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use super::sums::{e, CompensatedSum};
use crate::error::{domain, Error, Result};
use crate::quad::gauss_kronrod;

const GRID: usize = 256;
const QUAD_TOL: f64 = 1e-16;

fn kernel(t: f64) -> f64 {
    if t.abs() < 1.0 {
        (-1.0 / (1.0 - t * t)).exp()
    } else {
        0.0
    }
}

#[derive(Debug, Clone)]
pub struct BumpFunction {
    delta: f64,
    norm: f64,
    /// Unnormalized kernel CDF at `−1 + 2i/GRID`.
    cdf: Vec<f64>,
}

pub fn smooth_bump(delta: f64) -> Result<BumpFunction> {
    if !(delta > 0.0 && delta < 1.0) {
        return domain(format!("delta = {delta} must lie in (0, 1)"));
    }
    let h = 2.0 / GRID as f64;
    let mut cdf = Vec::with_capacity(GRID + 1);
    cdf.push(0.0);
    let mut acc = 0.0;
    for i in 0..GRID {
        let a = -1.0 + i as f64 * h;
        acc += gauss_kronrod(kernel, a, a + h, QUAD_TOL);
        cdf.push(acc);
    }
    Ok(BumpFunction {
        delta,
        norm: acc,
        cdf,
    })
}

impl BumpFunction {
    pub fn delta(&self) -> f64 {
        self.delta
    }

    fn half_width(&self) -> f64 {
        (1.0 - self.delta) / 2.0
    }

    fn kernel_width(&self) -> f64 {
        self.delta / 2.0
    }

    /// Normalized kernel CDF on `[−1, 1]`.
    fn kernel_cdf(&self, t: f64) -> f64 {
        if t <= -1.0 {
            return 0.0;
        }
        if t >= 1.0 {
            return 1.0;
        }
        let h = 2.0 / GRID as f64;
        let i = (((t + 1.0) / h) as usize).min(GRID - 1);
        let node = -1.0 + i as f64 * h;
        (self.cdf[i] + gauss_kronrod(kernel, node, t, QUAD_TOL)) / self.norm
    }

    pub fn g(&self, y: f64) -> f64 {
        let (a, w) = (self.half_width(), self.kernel_width());
        (self.kernel_cdf((y + a) / w) - self.kernel_cdf((y - a) / w)).clamp(0.0, 1.0)
    }

    /// `g₁(y) = g(y − 3/2)`, supported on `[1, 2]`.
    pub fn g1(&self, y: f64) -> f64 {
        self.g(y - 1.5)
    }

    /// `∫ g` by quadrature.
    pub fn integral(&self) -> f64 {
        gauss_kronrod(|y| self.g(y), -0.5, 0.5, 1e-13)
    }

    /// `∫_{−1}^{1} k(t) cos(2πηt) dt / ∫k`.
    fn kernel_hat(&self, eta: f64) -> f64 {
        if eta == 0.0 {
            return 1.0;
        }
        2.0 * gauss_kronrod(|t| kernel(t) * (2.0 * PI * eta * t).cos(), 0.0, 1.0, 1e-17) / self.norm
    }

    /// `ĝ(ξ) = ∫ g(y) e(−ξy) dy`, real because `g` is even.
    pub fn g_hat(&self, xi: f64) -> f64 {
        let a = self.half_width();
        let box_hat = if xi == 0.0 {
            2.0 * a
        } else {
            (2.0 * PI * a * xi).sin() / (PI * xi)
        };
        box_hat * self.kernel_hat(self.kernel_width() * xi)
    }
}

/// Frozen constant for `|ĝ(y)| ≤ C_A (1 + |y|)^{−4}` on `[1, 100]` at `δ = 0.1`.
pub const DECAY_CONSTANT_A4: f64 = 567.36;

/// Maximum of `|ĝ(y)| (1 + y)^A` over `y ∈ [lo, hi]` with the given step.
pub fn decay_profile(g: &BumpFunction, a: i32, lo: f64, hi: f64, step: f64) -> f64 {
    let n = ((hi - lo) / step).round() as usize;
    (0..=n)
        .map(|i| lo + i as f64 * step)
        .map(|y| g.g_hat(y).abs() * (1.0 + y).powi(a))
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Serialize)]
pub struct PoissonReport {
    pub deviation: f64,
    pub terms: i64,
    pub lhs: f64,
}

/// Deviation above which [`poisson_check`] reports insufficient truncation.
pub const POISSON_THRESHOLD: f64 = 1e-6;

/// Compare `Σ_{t ≡ t0 (q)} g((t − c)/W)` with
/// `(W/q) Σ_{|h| ≤ K} ĝ(hW/q) e(h(t0 − c)/q)`.
///
/// `K` starts at `⌈50 (q/W) ln W⌉` and doubles while the newest block of
/// terms is not negligible.
pub fn poisson_check(
    g: &BumpFunction,
    q: u64,
    t0: i64,
    center: f64,
    width: f64,
) -> Result<PoissonReport> {
    if q == 0 || width < q as f64 {
        return domain(format!("width {width} must be at least q = {q}"));
    }
    let qf = q as f64;
    let lo = ((center - width / 2.0 - t0 as f64) / qf).ceil() as i64;
    let hi = ((center + width / 2.0 - t0 as f64) / qf).floor() as i64;
    let lhs: f64 = (lo..=hi)
        .map(|m| g.g((t0 as f64 + qf * m as f64 - center) / width))
        .sum();

    let term = |h: i64| -> f64 {
        let phase = e(h as f64 * (t0 as f64 - center) / qf);
        2.0 * g.g_hat(h as f64 * width / qf) * phase.re
    };
    let mut acc = CompensatedSum::default();
    acc.add(Complex64::new(g.g_hat(0.0), 0.0));
    let start = (50.0 * qf / width * width.max(2.0).ln()).ceil().max(1.0) as i64;
    let mut done = 0i64;
    let mut k = start;
    loop {
        let mut block = 0.0f64;
        for h in done + 1..=k {
            let t = term(h);
            block = block.max(t.abs());
            acc.add(Complex64::new(t, 0.0));
        }
        done = k;
        if block * width / qf < 1e-14 || k >= 64 * start {
            break;
        }
        k *= 2;
    }
    let rhs = width / qf * acc.value().re;
    let deviation = (lhs - rhs).abs();
    if deviation > POISSON_THRESHOLD {
        return Err(Error::Truncation {
            deviation,
            terms: done,
        });
    }
    Ok(PoissonReport {
        deviation,
        terms: done,
        lhs,
    })
}
