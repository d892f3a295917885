use std::f64::consts::TAU;

use num_complex::Complex64;

use super::poly::RationalFunctionPair;
use crate::arith::{gcd, mod_inv, mulmod, reduce};

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

fn neumaier(acc: &mut (f64, f64), x: f64) {
    let t = acc.0 + x;
    if acc.0.abs() >= x.abs() {
        acc.1 += (acc.0 - t) + x;
    } else {
        acc.1 += (x - t) + acc.0;
    }
    acc.0 = t;
}

impl CompensatedSum {
    pub fn add(&mut self, z: Complex64) {
        neumaier(&mut self.re, z.re);
        neumaier(&mut self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        iter.into_iter().for_each(|z| s.add(z));
        s
    }
}

/// `e(x) = exp(2πix)`.
pub fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * x)
}

const NO_INVERSE: u32 = u32::MAX;

/// Per-modulus tables: unit list, inverses and the characters `e(k/q)`.
///
/// With `fault` set, [`ModContext::kloos_k`] uses `x̄ + 1` in place of the
/// inverse; this exists only to exercise the verification harness.
#[derive(Debug, Clone)]
pub struct ModContext {
    q: u64,
    units: Vec<u32>,
    inv: Vec<u32>,
    chars: Vec<Complex64>,
    fault: bool,
}

impl ModContext {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1 && q < u32::MAX as u64, "modulus out of range");
        let mut inv = vec![NO_INVERSE; q as usize];
        let mut units = Vec::new();
        for x in 0..q {
            if let Some(v) = mod_inv(x as i128, q) {
                inv[x as usize] = v as u32;
                units.push(x as u32);
            }
        }
        let chars = (0..q).map(|k| e(k as f64 / q as f64)).collect();
        ModContext {
            q,
            units,
            inv,
            chars,
            fault: false,
        }
    }

    pub fn with_fault(q: u64) -> Self {
        ModContext {
            fault: true,
            ..Self::new(q)
        }
    }

    pub fn modulus(&self) -> u64 {
        self.q
    }

    pub fn units(&self) -> &[u32] {
        &self.units
    }

    pub fn inverse(&self, x: u64) -> Option<u64> {
        match self.inv[(x % self.q) as usize] {
            NO_INVERSE => None,
            v => Some(v as u64),
        }
    }

    /// `e(k/q)` for any residue `k`.
    pub fn char(&self, k: u64) -> Complex64 {
        self.chars[(k % self.q) as usize]
    }

    fn red(&self, v: i64) -> u64 {
        reduce(v as i128, self.q)
    }

    fn inv_sq(&self, x: u64) -> u64 {
        let i = self.inv[x as usize] as u64;
        mulmod(i, i, self.q)
    }

    pub fn gauss_t(&self, h: i64) -> Complex64 {
        let h = self.red(h);
        self.units
            .iter()
            .map(|&x| self.char(mulmod(h, self.inv_sq(x as u64), self.q)))
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn kloos_k(&self, m: i64, n: i64) -> Complex64 {
        let (m, n, q) = (self.red(m), self.red(n), self.q);
        self.units
            .iter()
            .map(|&x| {
                let x = x as u64;
                let xi = if self.fault {
                    (self.inv[x as usize] as u64 + 1) % q
                } else {
                    self.inv[x as usize] as u64
                };
                let phase = (mulmod(m, x, q) + mulmod(n, mulmod(xi, xi, q), q)) % q;
                self.char(phase)
            })
            .collect::<CompensatedSum>()
            .value()
    }

    pub fn b_sum(&self, m: i64, n: i64, l: i64, u: i64) -> Complex64 {
        let (m, n, l, u, q) = (self.red(m), self.red(n), self.red(l), self.red(u), self.q);
        let mut acc = CompensatedSum::default();
        for a in 0..q {
            let b = (a + u) % q;
            if self.inv[a as usize] == NO_INVERSE || self.inv[b as usize] == NO_INVERSE {
                continue;
            }
            let phase =
                (mulmod(m, self.inv_sq(a), q) + mulmod(n, self.inv_sq(b), q) + mulmod(l, a, q)) % q;
            acc.add(self.char(phase));
        }
        acc.value()
    }

    pub fn rational_exp_sum(&self, lambda: &RationalFunctionPair) -> Complex64 {
        let q = self.q;
        let num = lambda.num.reduce_mod(q);
        let den = lambda.den.reduce_mod(q);
        let horner = |c: &[u64], a: u64| {
            c.iter()
                .rev()
                .fold(0u64, |acc, &k| (mulmod(acc, a, q) + k) % q)
        };
        let mut acc = CompensatedSum::default();
        for a in 0..q {
            let d = horner(&den, a);
            if gcd(d, q) != 1 {
                continue;
            }
            let inv = self.inv[d as usize] as u64;
            acc.add(self.char(mulmod(horner(&num, a), inv, q)));
        }
        acc.value()
    }
}

/// `T(h, q) = Σ*_x e(h x̄² / q)`.
#[allow(non_snake_case)]
pub fn gauss_T(h: i64, q: u64) -> Complex64 {
    ModContext::new(q).gauss_t(h)
}

/// `K(m, n; q) = Σ*_x e((m x + n x̄²) / q)`.
#[allow(non_snake_case)]
pub fn kloos_K(m: i64, n: i64, q: u64) -> Complex64 {
    ModContext::new(q).kloos_k(m, n)
}

/// `𝔅(m, n, ℓ, u; q)`, summed over `a` with `gcd(a(a+u), q) = 1`.
pub fn b_sum(m: i64, n: i64, l: i64, u: i64, q: u64) -> Complex64 {
    ModContext::new(q).b_sum(m, n, l, u)
}

/// `Σ(λ, q)` over `a` with `gcd(λ₂(a), q) = 1`.
pub fn rational_exp_sum(lambda: &RationalFunctionPair, q: u64) -> Complex64 {
    ModContext::new(q).rational_exp_sum(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expsum::poly::{two_pole_lambda, IntPolynomial};
    use proptest::prelude::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() < tol
    }

    #[test]
    fn gauss_examples() {
        assert!(close(gauss_T(0, 9), Complex64::new(6.0, 0.0), 1e-12));
        assert!(close(
            gauss_T(1, 3),
            Complex64::new(-1.0, 1.732_050_807_568_877_2),
            1e-9
        ));
        assert!(close(
            gauss_T(1, 5),
            Complex64::new(1.236_067_977_499_79, 0.0),
            1e-9
        ));
        assert!(close(gauss_T(7, 1), Complex64::new(1.0, 0.0), 1e-15));
    }

    #[test]
    fn kloosterman_examples() {
        assert!(close(kloos_K(3, 4, 1), Complex64::new(1.0, 0.0), 1e-15));
        assert!(close(
            kloos_K(1, 1, 5),
            Complex64::new(-0.309_016_994_374_947_4, 2.126_627_020_162_392),
            1e-9
        ));
        for q in [7u64, 9, 25, 45] {
            for h in -3..6 {
                assert!(close(kloos_K(0, h, q), gauss_T(h, q), 1e-10));
            }
        }
    }

    #[test]
    fn b_sum_examples() {
        assert!(close(b_sum(2, 3, 4, 5, 1), Complex64::new(1.0, 0.0), 1e-15));
        assert!(close(
            b_sum(1, 1, 0, 0, 5),
            Complex64::new(-3.236_067_977_499_79, 0.0),
            1e-9
        ));
        for q in [9u64, 15, 49] {
            assert!(close(b_sum(2, 5, 3, 0, q), kloos_K(3, 7, q), 1e-10));
        }
    }

    #[test]
    fn rational_examples() {
        let x = RationalFunctionPair::polynomial(IntPolynomial::monomial(1));
        assert!(rational_exp_sum(&x, 7).norm() < 1e-12);
        let inv_sq =
            RationalFunctionPair::new(IntPolynomial::one(), IntPolynomial::monomial(2)).unwrap();
        assert!(close(rational_exp_sum(&inv_sq, 5), gauss_T(1, 5), 1e-12));
    }

    #[test]
    fn fault_breaks_the_gauss_identity() {
        let ctx = ModContext::with_fault(25);
        assert!((ctx.kloos_k(0, 1) - ModContext::new(25).gauss_t(1)).norm() > 1e-3);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let mut s = CompensatedSum::default();
        s.add(Complex64::new(1e16, 0.0));
        for _ in 0..10 {
            s.add(Complex64::new(1.0, 0.0));
        }
        s.add(Complex64::new(-1e16, 0.0));
        assert_eq!(s.value().re, 10.0);
    }

    proptest! {
        #[test]
        fn b_sum_matches_rational_sum(
            m in -40i64..40, n in -40i64..40, l in -40i64..40, u in -40i64..40, q in 1u64..200,
        ) {
            let a = b_sum(m, n, l, u, q);
            let b = rational_exp_sum(&two_pole_lambda(m, n, l, u), q);
            prop_assert!((a - b).norm() < 1e-8);
        }
    }
}
