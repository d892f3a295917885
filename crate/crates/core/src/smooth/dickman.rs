//! The Dickman function.
//!
//! On each interval `(k, k + 1]` with `k >= 2`, ρ is the fixed point of
//! `ρ(u) = (1/u) ∫_{u−1}^{u} ρ(t) dt`. The right side only involves
//! positive quantities, so relative accuracy is preserved far into the
//! tail. The fixed point is found by Picard iteration on a Chebyshev
//! interpolant of the piece; the part of the integral lying in the previous
//! interval uses the already converged piece.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{domain, Result};
use crate::quad::gauss_kronrod;

/// Largest argument supported by [`dickman_rho`].
pub const RHO_MAX_U: f64 = 64.0;
const DEGREE: usize = 32;
const QUAD_REL_TOL: f64 = 1e-17;
const PICARD_REL_TOL: f64 = 1e-15;
const PICARD_MAX_ITER: usize = 200;
/// Spacing of the tabulated grid exposed through [`DickmanTable::values`].
pub const TABLE_STEP: f64 = 1.0 / 256.0;

#[derive(Debug, Clone)]
struct ChebPiece {
    start: f64,
    coeffs: Vec<f64>,
}

impl ChebPiece {
    fn eval(&self, u: f64) -> f64 {
        let s = 2.0 * (u - self.start) - 1.0;
        let (mut b1, mut b2) = (0.0, 0.0);
        for &c in self.coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * s * b1 - b2 + c;
            b2 = b1;
            b1 = b0;
        }
        s * b1 - b2 + self.coeffs[0]
    }

    fn fit(start: f64, f: impl Fn(f64) -> f64) -> Self {
        let n = DEGREE;
        let samples: Vec<f64> = (0..n)
            .map(|j| {
                let s = (PI * (j as f64 + 0.5) / n as f64).cos();
                f(start + 0.5 * (s + 1.0))
            })
            .collect();
        let coeffs = (0..n)
            .map(|m| {
                let sum: f64 = samples
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v * (PI * m as f64 * (j as f64 + 0.5) / n as f64).cos())
                    .sum();
                let c = 2.0 * sum / n as f64;
                if m == 0 {
                    0.5 * c
                } else {
                    c
                }
            })
            .collect();
        ChebPiece { start, coeffs }
    }
}

/// ρ tabulated on `[0, RHO_MAX_U]` plus the piecewise interpolants behind it.
#[derive(Debug, Clone)]
pub struct DickmanTable {
    pub step: f64,
    pub values: Vec<f64>,
    /// `pieces[k]` covers `[k + 2, k + 3]`.
    pieces: Vec<ChebPiece>,
}

impl DickmanTable {
    fn build() -> Self {
        let mut pieces: Vec<ChebPiece> = Vec::new();
        let last = RHO_MAX_U as usize;
        for k in 2..last {
            let start = k as f64;
            let prev = |t: f64| -> f64 {
                if k == 2 {
                    1.0 - t.ln()
                } else {
                    pieces[k - 3].eval(t)
                }
            };
            let rho_k = prev(start);
            let mut cur = ChebPiece::fit(start, |_| rho_k);
            for _ in 0..PICARD_MAX_ITER {
                let next = ChebPiece::fit(start, |u| {
                    let scale = rho_k * QUAD_REL_TOL;
                    let older = gauss_kronrod(prev, u - 1.0, start, scale);
                    let newer = gauss_kronrod(|t| cur.eval(t), start, u, scale);
                    (older + newer) / u
                });
                let change = next
                    .coeffs
                    .iter()
                    .zip(&cur.coeffs)
                    .map(|(a, b)| (a - b).abs())
                    .sum::<f64>();
                cur = next;
                if change <= PICARD_REL_TOL * cur.eval(start + 1.0) {
                    break;
                }
            }
            pieces.push(cur);
        }
        let mut table = DickmanTable {
            step: TABLE_STEP,
            values: Vec::new(),
            pieces,
        };
        let n = (RHO_MAX_U / TABLE_STEP).round() as usize;
        table.values = (0..=n).map(|i| table.eval(i as f64 * TABLE_STEP)).collect();
        table
    }

    fn eval(&self, u: f64) -> f64 {
        if u <= 1.0 {
            1.0
        } else if u <= 2.0 {
            1.0 - u.ln()
        } else {
            let k = (u.ceil() as usize).max(3) - 3;
            self.pieces[k].eval(u)
        }
    }

    /// Largest `|u ρ′(u) + ρ(u − 1)|` over grid points of `[lo, hi]`, with
    /// `ρ′` from a central difference of half-width `1e-6`.
    pub fn delay_residual(&self, lo: f64, hi: f64) -> f64 {
        const H: f64 = 1e-6;
        let i0 = (lo.max(1.0) / self.step).ceil() as usize;
        let i1 = ((hi.min(RHO_MAX_U - 2.0 * H) / self.step).floor()) as usize;
        (i0..=i1)
            .map(|i| {
                let u = i as f64 * self.step;
                let d = (self.eval(u + H) - self.eval(u - H)) / (2.0 * H);
                (u * d + self.eval(u - 1.0)).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// The shared, lazily built table.
pub fn dickman_table() -> &'static DickmanTable {
    static TABLE: OnceLock<DickmanTable> = OnceLock::new();
    TABLE.get_or_init(DickmanTable::build)
}

/// `ρ(u)` for `0 < u <= 64`.
pub fn dickman_rho(u: f64) -> Result<f64> {
    if !(u > 0.0 && u <= RHO_MAX_U) {
        return domain(format!("rho needs 0 < u <= {RHO_MAX_U}, got {u}"));
    }
    Ok(dickman_table().eval(u))
}

/// The closed form `1 − ln u + ∫_2^u ln(t − 1)/t dt` on `(2, 3]`.
pub fn rho_closed_form_2_3(u: f64) -> Result<f64> {
    if !(u > 2.0 && u <= 3.0) {
        return domain(format!("closed form needs u in (2, 3], got {u}"));
    }
    Ok(1.0 - u.ln() + gauss_kronrod(|t| (t - 1.0).ln() / t, 2.0, u, 1e-15))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        assert_eq!(dickman_rho(0.5).unwrap(), 1.0);
        assert_eq!(dickman_rho(1.0).unwrap(), 1.0);
        assert!((dickman_rho(2.0).unwrap() - 0.306_852_819_440_055).abs() < 1e-14);
        let golden = [
            (2.5, 0.130_319_561_832_251),
            (3.0, 0.048_608_388_291_131_567),
            (3.5, 0.016_229_593_243_236),
            (4.0, 0.004_910_925_647_761),
        ];
        for (u, v) in golden {
            let r = dickman_rho(u).unwrap();
            assert!((r - v).abs() < 1e-13, "rho({u}) = {r}");
        }
        assert!((dickman_rho(3.0).unwrap() - rho_closed_form_2_3(3.0).unwrap()).abs() < 1e-9);
        // Far tail, from an independent power-series evaluation.
        let tail = [
            (7.9, 4.529_221_781_020_033e-8),
            (10.0, 2.770_171_837_725_959e-11),
            (20.5, 2.523_531_909_988_075e-30),
            (40.3, 1.353_645_704_871_853e-73),
            (63.7, 1.871_819_280_976_371e-131),
        ];
        for (u, v) in tail {
            let r = dickman_rho(u).unwrap();
            assert!(((r - v) / v).abs() < 1e-9, "rho({u}) = {r:e}");
        }
        assert!(dickman_rho(0.0).is_err());
        assert!(dickman_rho(65.0).is_err());
    }

    #[test]
    fn table_invariants() {
        let t = dickman_table();
        assert!(t.delay_residual(1.1, 10.0) < 1e-6);
        let i1 = (1.0 / t.step) as usize;
        for w in t.values[i1..].windows(2) {
            assert!(w[1] < w[0] && w[1] > 0.0);
        }
    }

    #[test]
    fn integral_average_form() {
        // ρ(u) = (1/u) ∫_{u−1}^{u} ρ(t) dt, integrated piecewise between integers.
        let rho = |t: f64| dickman_rho(t).unwrap();
        for &u in &[1.5f64, 2.7, 4.2, 7.9, 20.5, 40.3] {
            let k = u.floor();
            let r = rho(u);
            let tol = 1e-14 * r;
            let avg = (gauss_kronrod(rho, u - 1.0, k, tol) + gauss_kronrod(rho, k, u, tol)) / u;
            assert!((r - avg).abs() < 1e-10 * r, "u = {u}: {r} vs {avg}");
        }
    }
}
