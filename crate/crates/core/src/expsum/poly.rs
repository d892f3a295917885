//! Integer polynomials, rational functions `λ = λ₁/λ₂`, and the gcd
//! invariants attached to them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};

/// Polynomial with big-integer coefficients, `coeffs[i]` multiplying `x^i`.
/// Trailing zero coefficients are always trimmed.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    /// From low-to-high `i64` coefficients.
    pub fn from_i64(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_i64(&[1])
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        Self::new(c)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Self::new(c)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * BigInt::from(i))
                .collect(),
        )
    }

    /// Coefficients reduced into `[0, q)`, low to high.
    pub fn reduce_mod(&self, q: u64) -> Vec<u64> {
        let qb = BigInt::from(q);
        self.coeffs
            .iter()
            .map(|c| c.mod_floor(&qb).to_u64().unwrap())
            .collect()
    }

    /// gcd of the coefficients with index in `range` together with `c`.
    pub fn gcd_coeffs_with(&self, from: usize, c: u64) -> u64 {
        let g = self
            .coeffs
            .iter()
            .skip(from)
            .fold(BigInt::from(c), |g, a| g.gcd(a));
        g.to_u64().unwrap_or(c)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "x")?,
                (1, false) => write!(f, "{a}x")?,
                (_, true) => write!(f, "x^{i}")?,
                (_, false) => write!(f, "{a}x^{i}")?,
            }
        }
        Ok(())
    }
}

/// Determinant of a square big-integer matrix by fraction-free elimination.
fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Resultant of `p` and `q` via the Sylvester matrix.
pub fn resultant(p: &IntPolynomial, q: &IntPolynomial) -> BigInt {
    let (Some(dp), Some(dq)) = (p.degree(), q.degree()) else {
        return BigInt::zero();
    };
    if dp == 0 && dq == 0 {
        return BigInt::one();
    }
    let n = dp + dq;
    let mut m = vec![vec![BigInt::zero(); n]; n];
    for r in 0..dq {
        for (i, c) in p.coeffs.iter().rev().enumerate() {
            m[r][r + i] = c.clone();
        }
    }
    for r in 0..dp {
        for (i, c) in q.coeffs.iter().rev().enumerate() {
            m[dq + r][r + i] = c.clone();
        }
    }
    bareiss_det(m)
}

/// `λ = λ₁ / λ₂` with integer polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalFunctionPair {
    pub num: IntPolynomial,
    pub den: IntPolynomial,
}

impl RationalFunctionPair {
    /// Requires a nonzero denominator and `Res(λ₁, λ₂) != 0`.
    pub fn new(num: IntPolynomial, den: IntPolynomial) -> Result<Self> {
        let pair = Self::new_unchecked(num, den)?;
        if !pair.is_coprime() {
            return domain(format!(
                "{} and {} share a common factor",
                pair.num, pair.den
            ));
        }
        Ok(pair)
    }

    /// Only requires a nonzero denominator.
    pub fn new_unchecked(num: IntPolynomial, den: IntPolynomial) -> Result<Self> {
        if den.is_zero() {
            return domain("zero denominator");
        }
        Ok(RationalFunctionPair { num, den })
    }

    /// The polynomial `λ = p` (denominator 1).
    pub fn polynomial(p: IntPolynomial) -> Self {
        RationalFunctionPair {
            num: p,
            den: IntPolynomial::one(),
        }
    }

    pub fn is_coprime(&self) -> bool {
        !resultant(&self.num, &self.den).is_zero()
    }

    /// `d(λ) = deg λ₁ + deg λ₂`.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0) + self.den.degree().unwrap_or(0)
    }

    /// Numerator of `λ′`: `λ₁′λ₂ − λ₁λ₂′`.
    pub fn derivative_numerator(&self) -> IntPolynomial {
        self.num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()))
    }
}

/// `m/x² + n/(x+u)² + ℓx` written over the common denominator `x²(x+u)²`.
///
/// The pair is returned without the coprimality check: for `u = 0` the
/// two polynomials share the factor `x²`.
pub fn two_pole_lambda(m: i64, n: i64, l: i64, u: i64) -> RationalFunctionPair {
    let (m, n, l, u) = (
        BigInt::from(m),
        BigInt::from(n),
        BigInt::from(l),
        BigInt::from(u),
    );
    let two = BigInt::from(2);
    let num = IntPolynomial::new(vec![
        &m * &u * &u,
        &two * &m * &u,
        &m + &n,
        &l * &u * &u,
        &two * &l * &u,
        l.clone(),
    ]);
    let den = IntPolynomial::new(vec![
        BigInt::zero(),
        BigInt::zero(),
        &u * &u,
        &two * &u,
        BigInt::one(),
    ]);
    RationalFunctionPair { num, den }
}

/// The three gcd invariants of `λ` relative to a modulus `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GcdConventions {
    /// gcd of all coefficients of `λ₁` and `c`.
    pub star: u64,
    /// gcd of the non-constant coefficients of `λ₁` and `λ₂`, and `c`.
    pub plain: u64,
    /// gcd of the coefficients of `λ₁′λ₂ − λ₁λ₂′` and `c`.
    pub prime: u64,
}

pub fn gcd_conventions(lambda: &RationalFunctionPair, c: u64) -> GcdConventions {
    let plain = lambda
        .den
        .gcd_coeffs_with(1, lambda.num.gcd_coeffs_with(1, c));
    GcdConventions {
        star: lambda.num.gcd_coeffs_with(0, c),
        plain,
        prime: lambda.derivative_numerator().gcd_coeffs_with(0, c),
    }
}

/// A reference closed form for `λ₁′λ₂ − λ₁λ₂′` of [`two_pole_lambda`], with
/// its own sign pattern on the `x⁶` and `x³` coefficients.
pub fn reference_lambda_prime(m: i64, n: i64, l: i64, u: i64) -> IntPolynomial {
    let (m, n, l, u) = (
        BigInt::from(m),
        BigInt::from(n),
        BigInt::from(l),
        BigInt::from(u),
    );
    let b = |v: i64| BigInt::from(v);
    let u2 = &u * &u;
    let u3 = &u2 * &u;
    let u4 = &u3 * &u;
    IntPolynomial::new(vec![
        BigInt::zero(),
        b(-2) * &m * &u4,
        b(-8) * &m * &u3,
        (b(2) * &n - b(10) * &m) * &u2,
        &l * &u4 - b(2) * &n * &u - b(8) * &m * &u,
        -(b(2) * &m + b(2) * &n - b(4) * &l * &u3),
        b(-6) * &l * &u2,
        b(4) * &l * &u,
        l.clone(),
    ])
}

/// Whether the reference expansion agrees coefficient-wise with exact arithmetic.
pub fn verify_lambda_prime(m: i64, n: i64, l: i64, u: i64) -> bool {
    two_pole_lambda(m, n, l, u).derivative_numerator() == reference_lambda_prime(m, n, l, u)
}

/// Degrees at which the reference expansion and the exact one differ.
pub fn lambda_prime_mismatches(m: i64, n: i64, l: i64, u: i64) -> Vec<usize> {
    let exact = two_pole_lambda(m, n, l, u).derivative_numerator();
    let reference = reference_lambda_prime(m, n, l, u);
    (0..=8)
        .filter(|&i| exact.coeff(i) != reference.coeff(i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn two_pole_lambda_shapes() {
        let p = two_pole_lambda(0, 0, 1, 0);
        assert_eq!(p.num, IntPolynomial::monomial(5));
        assert_eq!(p.den, IntPolynomial::monomial(4));
        let p = two_pole_lambda(1, 1, 1, 1);
        assert_eq!(p.num, IntPolynomial::from_i64(&[1, 2, 2, 1, 2, 1]));
        assert_eq!(p.degree(), 9);
        assert!(two_pole_lambda(1, 2, 3, 4).is_coprime());
        assert!(!two_pole_lambda(1, 2, 3, 0).is_coprime());
    }

    #[test]
    fn exact_lambda_prime() {
        // Exact expansion, coefficients of x^0..x^8.
        let (m, n, l, u): (i64, i64, i64, i64) = (2, 3, 5, 7);
        let want = [
            0,
            -2 * m * u.pow(4),
            -8 * m * u.pow(3),
            -12 * m * u * u,
            l * u.pow(4) - 8 * m * u - 2 * n * u,
            4 * l * u.pow(3) - 2 * m - 2 * n,
            6 * l * u * u,
            4 * l * u,
            l,
        ];
        let got = two_pole_lambda(m, n, l, u).derivative_numerator();
        assert_eq!(got, IntPolynomial::from_i64(&want));
    }

    #[test]
    fn reference_expansion_mismatch() {
        assert!(verify_lambda_prime(0, 0, 0, 5));
        assert!(!verify_lambda_prime(1, 1, 1, 1));
        assert_eq!(lambda_prime_mismatches(1, 1, 1, 1), vec![3, 6]);
        assert!(verify_lambda_prime(3, -3, 0, 2));
    }

    #[test]
    fn gcd_convention_examples() {
        let lam = two_pole_lambda(2, 3, 4, 1);
        let g = gcd_conventions(&lam, 15);
        assert_eq!(
            g,
            GcdConventions {
                star: 1,
                plain: 1,
                prime: 1
            }
        );
    }

    #[test]
    fn resultant_basics() {
        let x = IntPolynomial::monomial(1);
        let xm1 = IntPolynomial::from_i64(&[-1, 1]);
        let xp2 = IntPolynomial::from_i64(&[2, 1]);
        assert_eq!(resultant(&xm1, &xp2), BigInt::from(3));
        assert_eq!(resultant(&x, &IntPolynomial::one()), BigInt::one());
        let sq = xm1.mul(&xm1);
        assert!(resultant(&sq, &xm1.mul(&xp2)).is_zero());
        // Res(x^2 + 1, x^2 - 2) = 9.
        let a = IntPolynomial::from_i64(&[1, 0, 1]);
        let b = IntPolynomial::from_i64(&[-2, 0, 1]);
        assert_eq!(resultant(&a, &b), BigInt::from(9));
    }

    #[test]
    fn display() {
        assert_eq!(
            IntPolynomial::from_i64(&[1, -2, 0, 3]).to_string(),
            "3x^3 - 2x + 1"
        );
        assert_eq!(IntPolynomial::zero().to_string(), "0");
    }

    proptest! {
        #[test]
        fn derivative_numerator_gcd_identity(
            m in -50i64..50, n in -50i64..50, l in -50i64..50, u in -50i64..50,
            c in prop::sample::select(vec![3u64, 5, 7, 9, 15, 21, 45, 105, 225]),
        ) {
            let lam = two_pole_lambda(m, n, l, u);
            let g = gcd_conventions(&lam, c).prime;
            let alt = crate::arith::gcd_with(&[l, m + n, 3 * m * u, 6 * m * u * u, m * u * u * u], c);
            prop_assert_eq!(g, alt);
        }
    }
}
