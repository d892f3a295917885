//! Weil-type upper bounds for the complete sums.

use super::parts::mod_parts;
use super::poly::{gcd_conventions, RationalFunctionPair};
use crate::arith::gcd_with;
use crate::error::{domain, Result};

fn require_odd(q: u64) -> Result<()> {
    if q == 0 || q.is_multiple_of(2) {
        return domain(format!("modulus {q} must be odd"));
    }
    Ok(())
}

/// `3^ω(q) (m, n, q) √q`.
pub fn bound_k(m: i64, n: i64, q: u64) -> Result<f64> {
    require_odd(q)?;
    let p = mod_parts(q);
    Ok(3f64.powi(p.omega as i32) * gcd_with(&[m, n], q) as f64 * (q as f64).sqrt())
}

pub fn bound_b(m: i64, n: i64, l: i64, u: i64, q: u64) -> Result<f64> {
    require_odd(q)?;
    let p = mod_parts(q);
    let g1 = |c: u64| gcd_with(&[l, m, n], c) as f64;
    let g2 = |c: u64| gcd_with(&[l, m + n, u], c) as f64;
    Ok(3.0
        * (q as f64).sqrt()
        * (g1(p.flat) * g2(p.flat)).sqrt()
        * g1(p.ddagger)
        * g2(p.ddagger)
        * 18f64.powi(p.omega as i32)
        * (p.xi as f64).sqrt())
}

pub fn bound_general(lambda: &RationalFunctionPair, q: u64) -> Result<f64> {
    if q == 0 {
        return domain("modulus must be positive");
    }
    let d = lambda.degree();
    if d == 0 {
        return domain("constant rational function");
    }
    let p = mod_parts(q);
    let flat = gcd_conventions(lambda, p.flat);
    let prime = gcd_conventions(lambda, p.ddagger).prime;
    Ok((q as f64).sqrt()
        * (flat.plain as f64).sqrt()
        * (flat.star as f64).sqrt()
        * prime as f64
        * ((2 * d) as f64).powi(p.omega as i32)
        * (p.xi as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::poly::{two_pole_lambda, IntPolynomial};
    use crate::expsum::sums::{b_sum, kloos_K, rational_exp_sum};

    #[test]
    fn bound_k_examples() {
        assert!((bound_k(1, 1, 5).unwrap() - 6.708_203_932_499_369).abs() < 1e-12);
        assert_eq!(bound_k(0, 0, 9).unwrap(), 81.0);
        assert!((bound_k(3, 6, 15).unwrap() - 27.0 * 15f64.sqrt()).abs() < 1e-12);
        assert!(bound_k(1, 1, 8).is_err());
        assert!(kloos_K(0, 0, 9).norm() <= 81.0);
    }

    #[test]
    fn bound_b_examples() {
        assert!((bound_b(1, 1, 1, 1, 9).unwrap() - 162.0).abs() < 1e-12);
        assert!((bound_b(1, 1, 1, 1, 1).unwrap() - 3.0).abs() < 1e-12);
        assert!((bound_b(3, 3, 3, 3, 27).unwrap() - 1458.0).abs() < 1e-9);
        assert!(bound_b(1, 1, 1, 1, 4).is_err());
    }

    #[test]
    fn bound_general_examples() {
        assert!((bound_general(&two_pole_lambda(1, 1, 1, 1), 9).unwrap() - 54.0).abs() < 1e-12);
        let lam = two_pole_lambda(2, 3, 4, 5);
        assert_eq!(bound_general(&lam, 1).unwrap(), 1.0);
        let x = RationalFunctionPair::polynomial(IntPolynomial::monomial(1));
        assert!(bound_general(&x, 25).unwrap() >= rational_exp_sum(&x, 25).norm());
        let c = RationalFunctionPair::polynomial(IntPolynomial::from_i64(&[3]));
        assert!(bound_general(&c, 25).is_err());
    }

    #[test]
    fn bounds_hold_on_small_odd_moduli() {
        for q in (1..200u64).step_by(2) {
            for (m, n, l, u) in [
                (1, 2, 3, 4),
                (5, -5, 0, 0),
                (q as i64, 3, 1, 9),
                (7, 7, 7, 7),
            ] {
                assert!(kloos_K(m, n, q).norm() <= bound_k(m, n, q).unwrap() + 1e-6);
                let b = b_sum(m, n, l, u, q).norm();
                assert!(
                    b <= bound_b(m, n, l, u, q).unwrap() + 1e-6,
                    "q={q} {:?}",
                    (m, n, l, u)
                );
                let lam = two_pole_lambda(m, n, l, u);
                assert!(b <= bound_general(&lam, q).unwrap() + 1e-6);
            }
        }
    }
}
