//! Largest prime factors, `Ψ(x, y)` and segmented multiplicative sieves.

use serde::Serialize;

use crate::arith::{factorize, isqrt, primes_up_to};
use crate::error::{domain, Error, Result};
use crate::exec::Exec;

/// Largest `x` accepted by [`psi`].
pub const PSI_LIMIT: f64 = 1e8;
pub(crate) const SEGMENT: u64 = 1 << 16;

/// `n` together with its largest prime factor (`1` for `n = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SmoothnessCertificate {
    pub n: u64,
    pub largest_prime_factor: u64,
}

impl SmoothnessCertificate {
    pub fn is_y_smooth(&self, y: f64) -> bool {
        self.largest_prime_factor as f64 <= y
    }

    /// `P(n) <= n^θ`.
    pub fn is_self_smooth(&self, theta: f64) -> bool {
        self_smooth(self.n, self.largest_prime_factor, theta)
    }
}

/// `P(n) <= n^θ`, decided exactly for `θ = 1/2`.
pub(crate) fn self_smooth(n: u64, lpf: u64, theta: f64) -> bool {
    if lpf <= 1 {
        return true;
    }
    if theta == 0.5 {
        return (lpf as u128) * (lpf as u128) <= n as u128;
    }
    (lpf as f64).ln() <= theta * (n as f64).ln() + 1e-12
}

pub fn smoothness(n: u64) -> Result<SmoothnessCertificate> {
    if n == 0 {
        return domain("n must be >= 1");
    }
    Ok(SmoothnessCertificate {
        n,
        largest_prime_factor: factorize(n).last().map_or(1, |&(p, _)| p),
    })
}

/// Per-integer data for a block `[lo, hi)`.
#[derive(Debug, Clone)]
pub(crate) struct FactorBlock {
    pub lo: u64,
    pub phi: Vec<u64>,
    pub lpf: Vec<u64>,
    /// Squarefull part `n♯`.
    pub sharp: Vec<u64>,
}

/// Sieve `[lo, hi)` with `primes` covering `sqrt(hi)`.
pub(crate) fn factor_block(lo: u64, hi: u64, primes: &[u64]) -> FactorBlock {
    let len = (hi - lo) as usize;
    let mut rem: Vec<u64> = (lo..hi).collect();
    let mut phi = rem.clone();
    let mut lpf = vec![1u64; len];
    let mut sharp = vec![1u64; len];
    for &p in primes {
        if p * p >= hi {
            break;
        }
        let first = lo.div_ceil(p) * p;
        let mut m = first.max(p);
        while m < hi {
            let i = (m - lo) as usize;
            let mut pe = 1;
            while rem[i].is_multiple_of(p) {
                rem[i] /= p;
                pe *= p;
            }
            phi[i] = phi[i] / p * (p - 1);
            lpf[i] = p;
            if pe > p {
                sharp[i] *= pe;
            }
            m += p;
        }
    }
    for i in 0..len {
        let r = rem[i];
        if r > 1 {
            phi[i] = phi[i] / r * (r - 1);
            lpf[i] = r;
        }
    }
    if lo == 0 && len > 0 {
        phi[0] = 0;
        lpf[0] = 0;
    }
    FactorBlock {
        lo,
        phi,
        lpf,
        sharp,
    }
}

/// Run `f` on consecutive blocks covering `[lo, hi]` and collect the results in order.
pub(crate) fn map_blocks<R: Send>(
    lo: u64,
    hi: u64,
    exec: Exec,
    f: impl Fn(&FactorBlock) -> R + Sync + Send,
) -> Vec<R> {
    let primes = primes_up_to(isqrt(hi) + 1);
    exec.map_chunks(lo, hi + 1, SEGMENT, |a, b| f(&factor_block(a, b, &primes)))
}

fn psi_guard(x: f64, y: f64) -> Result<u64> {
    if !(x >= 1.0) || !(y >= 2.0) {
        return domain(format!("psi needs x >= 1 and y >= 2, got x={x}, y={y}"));
    }
    if x > PSI_LIMIT {
        return Err(Error::Budget(format!("psi limited to x <= {PSI_LIMIT:e}")));
    }
    Ok(x.floor() as u64)
}

/// `Ψ(x, y)`: integers `n <= x` whose prime factors are all `<= y`.
///
/// Each block is divided by the primes up to `min(y, √x)`; the cofactor
/// left over is then either `1`, or (when `y >= √x`) a single prime to be
/// compared with `y`.
pub fn psi(x: f64, y: f64) -> Result<u64> {
    psi_with(x, y, Exec::default())
}

pub fn psi_with(x: f64, y: f64, exec: Exec) -> Result<u64> {
    let n = psi_guard(x, y)?;
    let root = isqrt(n);
    let ycap = y.floor() as u64;
    let small = primes_up_to(ycap.min(root));
    let big_y = ycap >= root;
    Ok(exec.sum_chunks(1, n + 1, SEGMENT, |lo, hi| {
        let mut rem: Vec<u64> = (lo..hi).collect();
        for &p in &small {
            let mut m = lo.div_ceil(p) * p;
            while m < hi {
                let i = (m - lo) as usize;
                while rem[i].is_multiple_of(p) {
                    rem[i] /= p;
                }
                m += p;
            }
        }
        rem.iter()
            .filter(|&&r| r == 1 || (big_y && r <= ycap))
            .count() as u64
    }))
}

/// `Ψ(x, y)` from a full largest-prime-factor table (independent check).
pub fn psi_lpf(x: f64, y: f64) -> Result<u64> {
    let n = psi_guard(x, y)? as usize;
    let mut lpf = vec![0u32; n + 1];
    for p in 2..=n {
        if lpf[p] == 0 {
            let mut m = p;
            while m <= n {
                lpf[m] = p as u32;
                m += p;
            }
        }
    }
    Ok(1 + lpf[2..].iter().filter(|&&p| p as f64 <= y).count() as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smooth::dickman_rho;

    #[test]
    fn certificates() {
        let c = smoothness(1).unwrap();
        assert_eq!(c.largest_prime_factor, 1);
        assert!(c.is_y_smooth(2.0));
        assert_eq!(smoothness(96).unwrap().largest_prime_factor, 3);
        assert_eq!(smoothness(97).unwrap().largest_prime_factor, 97);
        assert!(smoothness(0).is_err());
        assert!(smoothness(36).unwrap().is_self_smooth(0.5));
        assert!(!smoothness(35).unwrap().is_self_smooth(0.5));
    }

    #[test]
    fn psi_small() {
        assert_eq!(psi(10.0, 2.0).unwrap(), 4);
        assert_eq!(psi(1000.0, 1000.0).unwrap(), 1000);
        assert_eq!(psi(1000.5, 2000.0).unwrap(), 1000);
        assert!(psi(0.5, 2.0).is_err());
        assert!(psi(2e8, 2.0).is_err());
    }

    #[test]
    fn two_sieves_agree() {
        for &(x, y) in &[
            (1e5, 2.0),
            (1e5, 7.0),
            (1e5, 100.0),
            (1e5, 316.0),
            (1e5, 317.0),
            (99_991.0, 5000.0),
        ] {
            assert_eq!(psi(x, y).unwrap(), psi_lpf(x, y).unwrap(), "x={x}, y={y}");
        }
    }

    #[test]
    fn psi_against_rho() {
        let v = psi(1e6, 100.0).unwrap();
        assert_eq!(v, 72_271);
        let dev = (v as f64 / 1e6 - dickman_rho(3.0).unwrap()).abs();
        assert!(dev <= 1.0 / 100f64.ln());
    }

    #[test]
    fn blocks_match_factorization() {
        let blocks = map_blocks(0, 200_000, Exec::Parallel, |b| b.clone());
        for b in blocks {
            for (i, n) in (b.lo..b.lo + b.phi.len() as u64).enumerate().step_by(37) {
                if n == 0 {
                    continue;
                }
                let f = factorize(n);
                let phi: u64 = f.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product();
                let sharp: u64 = f
                    .iter()
                    .filter(|x| x.1 >= 2)
                    .map(|&(p, e)| p.pow(e))
                    .product();
                assert_eq!(b.phi[i], phi, "n = {n}");
                assert_eq!(b.sharp[i], sharp, "n = {n}");
                assert_eq!(b.lpf[i], f.last().map_or(1, |x| x.0), "n = {n}");
            }
        }
    }
}
