//! Elementary integer arithmetic: gcds, modular inverses, integer square
//! roots, factorization by trial division and a smallest-prime-factor sieve.

use std::sync::{Arc, RwLock};

use num_integer::Integer;

/// Prime factorization as `(prime, exponent)` pairs in increasing order.
pub type Factorization = Vec<(u64, u32)>;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// gcd of a list of signed integers together with a positive modulus `c`.
///
/// Zeros are ignored, so `gcd_with(&[0, 0], c) == c`.
pub fn gcd_with(values: &[i64], c: u64) -> u64 {
    values.iter().fold(c, |g, &v| g.gcd(&v.unsigned_abs()))
}

/// Inverse of `a` modulo `m` (`m >= 1`), if `gcd(a, m) = 1`.
pub fn mod_inv(a: i128, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let m_i = m as i128;
    let a = a.rem_euclid(m_i);
    let (mut old_r, mut r) = (a, m_i);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m_i) as u64)
}

pub fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

pub fn isqrt(n: u64) -> u64 {
    n.isqrt()
}

pub fn isqrt_u128(n: u128) -> u128 {
    n.isqrt()
}

pub fn is_square(n: u64) -> bool {
    let r = n.isqrt();
    r * r == n
}

/// Factorization by trial division with a 2-3-5 wheel.
pub fn factorize(mut n: u64) -> Factorization {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    for p in [2u64, 3, 5] {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    }
    const STEPS: [u64; 8] = [4, 2, 4, 2, 4, 6, 2, 6];
    let mut p = 7u64;
    let mut i = 0;
    while p.saturating_mul(p) <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += STEPS[i];
        i = (i + 1) % 8;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(f: &[(u64, u32)]) -> u64 {
    f.iter().map(|&(p, e)| (p - 1) * p.pow(e - 1)).product()
}

pub fn omega(n: u64) -> u32 {
    factorize(n).len() as u32
}

/// All positive divisors in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let cur = ds.clone();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            ds.extend(cur.iter().map(|d| d * pk));
        }
    }
    ds.sort_unstable();
    ds
}

/// Largest divisor of `m` supported on the primes dividing `n`, i.e. `(m, n^inf)`.
pub fn gcd_infinity(m: u64, n: u64) -> u64 {
    if m == 0 {
        return 0;
    }
    let mut rest = m;
    let mut acc = 1;
    loop {
        let g = gcd(rest, n);
        if g == 1 {
            return acc;
        }
        acc *= g;
        rest /= g;
    }
}

/// Smallest-prime-factor table on `[0, limit]`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: u64) -> Self {
        let n = limit as usize;
        let mut spf = vec![0u32; n + 1];
        if n >= 1 {
            spf[1] = 1;
        }
        let mut i = 2usize;
        while i <= n {
            if spf[i] == 0 {
                spf[i] = i as u32;
                if let Some(start) = i.checked_mul(i) {
                    let mut j = start;
                    while j <= n {
                        if spf[j] == 0 {
                            spf[j] = i as u32;
                        }
                        j += i;
                    }
                }
            }
            i += 1;
        }
        SpfSieve { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    pub fn spf(&self, n: u64) -> u64 {
        self.spf[n as usize] as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        n >= 2 && self.spf(n) == n
    }

    /// Factorization of `n <= limit`, falling back to trial division above it.
    pub fn factorize(&self, mut n: u64) -> Factorization {
        if n > self.limit() {
            return factorize(n);
        }
        let mut out: Factorization = Vec::new();
        while n > 1 {
            let p = self.spf(n);
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        (2..=self.limit()).filter(|&n| self.is_prime(n))
    }
}

static SHARED: RwLock<Option<Arc<SpfSieve>>> = RwLock::new(None);

/// Process-wide sieve covering at least `limit`, rebuilt when a larger one is needed.
pub fn shared_sieve(limit: u64) -> Arc<SpfSieve> {
    if let Some(s) = SHARED.read().unwrap().as_ref() {
        if s.limit() >= limit {
            return Arc::clone(s);
        }
    }
    let mut guard = SHARED.write().unwrap();
    if let Some(s) = guard.as_ref() {
        if s.limit() >= limit {
            return Arc::clone(s);
        }
    }
    let target = limit.max(1 << 16);
    let s = Arc::new(SpfSieve::new(target));
    *guard = Some(Arc::clone(&s));
    s
}

/// Primes up to `limit` by a plain Eratosthenes sieve.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    let n = limit as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gcd_conventions() {
        assert_eq!(gcd_with(&[0, 0], 9), 9);
        assert_eq!(gcd_with(&[3, -6], 15), 3);
        assert_eq!(gcd_with(&[], 7), 7);
    }

    #[test]
    fn inverses() {
        assert_eq!(mod_inv(3, 25), Some(17));
        assert_eq!(mod_inv(-1, 7), Some(6));
        assert_eq!(mod_inv(6, 9), None);
        assert_eq!(mod_inv(5, 1), Some(0));
    }

    #[test]
    fn factor_small() {
        assert_eq!(factorize(720), vec![(2, 4), (3, 2), (5, 1)]);
        assert_eq!(factorize(1), vec![]);
        assert_eq!(factorize(97), vec![(97, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(gcd_infinity(540, 6), 108);
        assert_eq!(gcd_infinity(7, 10), 1);
    }

    #[test]
    fn sieve_matches_trial_division() {
        let s = SpfSieve::new(5000);
        for n in 1..=5000u64 {
            assert_eq!(s.factorize(n), factorize(n), "n = {n}");
        }
        assert_eq!(s.primes().count(), primes_up_to(5000).len());
    }

    proptest! {
        #[test]
        fn factorization_multiplies_back(n in 1u64..10_000_000_000) {
            let f = factorize(n);
            let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(prod, n);
            prop_assert!(f.windows(2).all(|w| w[0].0 < w[1].0));
        }
    }
}
