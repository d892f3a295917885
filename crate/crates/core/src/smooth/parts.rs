//! Squarefree/squarefull parts and divisors in a multiplicative window.

use serde::Serialize;

use super::sieve::smoothness;
use crate::arith::{factorize, gcd_infinity};
use crate::error::{domain, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PartFunctions {
    /// `n♭`, the product of primes dividing `n` exactly once.
    pub flat: u64,
    /// `n♯ = n / n♭`.
    pub sharp: u64,
    /// `(n, q^∞)`.
    pub gcd_infty_q: u64,
}

pub fn part_functions(n: u64, q: u64) -> Result<PartFunctions> {
    if n == 0 || q == 0 {
        return domain("n and q must be >= 1");
    }
    let flat: u64 = factorize(n)
        .iter()
        .filter(|&&(_, e)| e == 1)
        .map(|&(p, _)| p)
        .product();
    Ok(PartFunctions {
        flat,
        sharp: n / flat,
        gcd_infty_q: gcd_infinity(n, q),
    })
}

/// A divisor `d | n` with `n^θ₀ <= d <= n^(θ₀ + θ)`, for `n` that is `n^θ`-smooth.
///
/// Prime factors are multiplied in increasing order until the product first
/// reaches `n^θ₀`; since every factor is at most `n^θ` the product cannot
/// overshoot `n^(θ₀ + θ)`.
pub fn divisor_in_window(n: u64, theta0: f64, theta: f64) -> Result<u64> {
    if n == 0 {
        return domain("n must be >= 1");
    }
    if !(theta > 0.0 && theta <= 1.0) || !(theta0 >= 0.0) || theta0 > 1.0 - theta + 1e-12 {
        return domain(format!(
            "need 0 < theta <= 1 and 0 <= theta0 <= 1 - theta, got theta={theta}, theta0={theta0}"
        ));
    }
    if !smoothness(n)?.is_self_smooth(theta) {
        return domain(format!("{n} is not n^{theta}-smooth"));
    }
    let nf = n as f64;
    let target = nf.powf(theta0) * (1.0 - 1e-12);
    let mut d = 1u64;
    for (p, e) in factorize(n) {
        for _ in 0..e {
            if d as f64 >= target {
                return Ok(d);
            }
            d *= p;
        }
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let p = part_functions(12, 10).unwrap();
        assert_eq!((p.flat, p.sharp, p.gcd_infty_q), (3, 4, 4));
        let p = part_functions(7, 10).unwrap();
        assert_eq!((p.flat, p.sharp, p.gcd_infty_q), (7, 1, 1));
        assert_eq!(part_functions(540, 6).unwrap().gcd_infty_q, 108);
    }

    #[test]
    fn window_examples() {
        assert_eq!(divisor_in_window(1024, 0.5, 0.11).unwrap(), 32);
        assert_eq!(divisor_in_window(96, 0.4, 0.25).unwrap(), 8);
        assert_eq!(divisor_in_window(96, 0.0, 0.25).unwrap(), 1);
        assert!(divisor_in_window(97, 0.3, 0.5).is_err());
        assert!(divisor_in_window(96, 0.9, 0.25).is_err());
    }

    #[test]
    fn parts_multiply_back() {
        for n in (1..=1_000_000u64).step_by(97) {
            let p = part_functions(n, 30).unwrap();
            assert_eq!(p.flat * p.sharp, n);
            let co = n / p.gcd_infty_q;
            assert!(
                !co.is_multiple_of(2) && !co.is_multiple_of(3) && !co.is_multiple_of(5),
                "n = {n}"
            );
        }
    }

    #[test]
    fn window_invariant() {
        for &theta in &[0.2, 0.34, 0.49] {
            for &theta0 in &[0.0, 0.3, 1.0 - theta] {
                for n in 1..=20_000u64 {
                    if !smoothness(n).unwrap().is_self_smooth(theta) {
                        continue;
                    }
                    let d = divisor_in_window(n, theta0, theta).unwrap();
                    let nf = n as f64;
                    assert_eq!(n % d, 0);
                    assert!(d as f64 >= nf.powf(theta0) * (1.0 - 1e-9), "n={n}");
                    assert!(d as f64 <= nf.powf(theta0 + theta) * (1.0 + 1e-9), "n={n}");
                }
            }
        }
    }
}
