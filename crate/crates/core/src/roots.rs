//! Square roots of unity modulo `u²` and their correspondence with coprime
//! factorizations `u = u1 u2`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd, mod_inv, mulmod, SpfSieve};
use crate::error::{domain, Error, Result};

/// Largest `u` accepted by [`RootMethod::Brute`].
pub const BRUTE_LIMIT: u64 = 10_000;
/// Largest `k` for which `R(2^k)` is tabulated by search.
const TABULATED_TWO_POWER: u32 = 12;

/// `R(u) = {Ω mod u² : Ω² ≡ 1}`, sorted, with `1 mod 1` stored as `0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSet {
    pub u: u64,
    pub modulus: u64,
    pub roots: Vec<u64>,
}

/// A factorization `u = u1 u2` with `gcd(u1, u2) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Decomposition {
    pub u1: u64,
    pub u2: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootMethod {
    Brute,
    Crt,
}

/// Number of square roots of unity modulo `u²`.
pub fn gamma(u: u64) -> u64 {
    factorize(u)
        .iter()
        .map(|&(p, e)| match (p, e) {
            (2, 1) => 2,
            (2, _) => 4,
            _ => 2,
        })
        .product()
}

pub fn roots(u: u64, method: RootMethod) -> Result<RootSet> {
    if u == 0 {
        return domain("u must be >= 1");
    }
    let modulus = u
        .checked_mul(u)
        .ok_or_else(|| Error::SizeGuard(format!("u^2 overflows for u = {u}")))?;
    let roots = match method {
        RootMethod::Brute => {
            if u > BRUTE_LIMIT {
                return Err(Error::SizeGuard(format!(
                    "brute-force roots limited to u <= {BRUTE_LIMIT}, got {u}"
                )));
            }
            brute_roots(modulus)
        }
        RootMethod::Crt => crt_roots(&factorize(u)),
    };
    Ok(RootSet { u, modulus, roots })
}

/// CRT roots using a shared sieve for the factorization.
pub fn roots_with(u: u64, sieve: &SpfSieve) -> Vec<u64> {
    crt_roots(&sieve.factorize(u))
}

fn brute_roots(m: u64) -> Vec<u64> {
    if m == 1 {
        return vec![0];
    }
    (0..m).filter(|&x| mulmod(x, x, m) == 1).collect()
}

fn two_power_table() -> &'static [Vec<u64>] {
    static TABLE: OnceLock<Vec<Vec<u64>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (0..=TABULATED_TWO_POWER)
            .map(|k| brute_roots(1u64 << (2 * k)))
            .collect()
    })
}

/// `R(2^k)` modulo `4^k`.
fn two_power_roots(k: u32) -> Vec<u64> {
    if k <= TABULATED_TWO_POWER {
        return two_power_table()[k as usize].clone();
    }
    let m = 1u64 << (2 * k);
    let half = m >> 1;
    let mut r = vec![1, half - 1, half + 1, m - 1];
    r.sort_unstable();
    r
}

/// Combine `Ω ≡ a (mod m)` and `Ω ≡ b (mod n)` for coprime `m`, `n`.
fn crt_pair(a: u64, m: u64, b: u64, n: u64) -> u64 {
    if m == 1 {
        return b % n;
    }
    if n == 1 {
        return a % m;
    }
    let inv = mod_inv(m as i128, n).expect("coprime moduli");
    let diff = (b as i128 - a as i128).rem_euclid(n as i128) as u64;
    let k = mulmod(diff, inv, n);
    a + m * k
}

fn crt_roots(f: &[(u64, u32)]) -> Vec<u64> {
    let mut acc: Vec<u64> = vec![0];
    let mut modulus = 1u64;
    for &(p, e) in f {
        let pe2 = p.pow(2 * e);
        let local = if p == 2 {
            two_power_roots(e)
        } else {
            vec![1, pe2 - 1]
        };
        acc = acc
            .iter()
            .flat_map(|&a| local.iter().map(move |&b| crt_pair(a, modulus, b, pe2)))
            .collect();
        modulus *= pe2;
    }
    acc.sort_unstable();
    acc
}

fn check_odd_coprime(dec: Decomposition) -> Result<u64> {
    if dec.u1 == 0 || dec.u2 == 0 {
        return domain("components must be positive");
    }
    if gcd(dec.u1, dec.u2) != 1 {
        return domain(format!("gcd({}, {}) != 1", dec.u1, dec.u2));
    }
    let u = dec
        .u1
        .checked_mul(dec.u2)
        .filter(|u| u.checked_mul(*u).is_some())
        .ok_or_else(|| Error::SizeGuard("u^2 overflows".into()))?;
    if u % 2 == 0 {
        return domain(format!("u = {u} must be odd"));
    }
    Ok(u)
}

/// `Φ(u1, u2)`: the root with `Ω ≡ 1 (mod u1²)` and `Ω ≡ −1 (mod u2²)`.
pub fn phi(dec: Decomposition) -> Result<u64> {
    let u = check_odd_coprime(dec)?;
    let (m1, m2) = (dec.u1 * dec.u1, dec.u2 * dec.u2);
    let omega = crt_pair(1 % m1, m1, (m2 - 1) % m2.max(1), m2);
    Ok(omega % (u * u))
}

/// The closed form `−ū1² u1² + ū2² u2² mod u²`, with `ū1` the inverse of
/// `u1` modulo `u2²` and `ū2` the inverse of `u2` modulo `u1²`.
pub fn phi_formula(dec: Decomposition) -> Result<u64> {
    let u = check_odd_coprime(dec)?;
    let m = u * u;
    let (m1, m2) = (dec.u1 * dec.u1, dec.u2 * dec.u2);
    let inv1 = mod_inv(dec.u1 as i128, m2).expect("coprime");
    let inv2 = mod_inv(dec.u2 as i128, m1).expect("coprime");
    let a = mulmod(mulmod(inv1, inv1, m), m1 % m, m);
    let b = mulmod(mulmod(inv2, inv2, m), m2 % m, m);
    Ok((b + m - a) % m)
}

/// Recover `(u1, u2)` from a root `Ω` modulo `u²`, `u` odd.
pub fn phi_inverse(omega: u64, u: u64) -> Result<Decomposition> {
    if u == 0 || u.is_multiple_of(2) {
        return domain(format!("u = {u} must be odd and positive"));
    }
    let m = u
        .checked_mul(u)
        .ok_or_else(|| Error::SizeGuard("u^2 overflows".into()))?;
    let omega = omega % m;
    if mulmod(omega, omega, m) != 1 % m {
        return Err(Error::NotARoot { omega, u });
    }
    let mut u1 = 1;
    for (p, e) in factorize(u) {
        let pe = p.pow(e);
        if (omega + pe * pe - 1).is_multiple_of(pe * pe) {
            u1 *= pe;
        }
    }
    Ok(Decomposition { u1, u2: u / u1 })
}

/// All coprime decompositions `D(u)`, sorted by `u1`.
pub fn decompositions(u: u64) -> Vec<Decomposition> {
    let powers: Vec<u64> = factorize(u).iter().map(|&(p, e)| p.pow(e)).collect();
    let mut out: Vec<Decomposition> = (0u32..1 << powers.len())
        .map(|mask| {
            let u1: u64 = powers
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p)
                .product();
            Decomposition { u1, u2: u / u1 }
        })
        .collect();
    out.sort();
    out
}
