use serde::Serialize;

use crate::arith::{factorize, Factorization};

/// Multiplicative pieces of a modulus `q`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ModulusParts {
    pub q: u64,
    /// `q♭`: product of primes dividing `q` exactly once.
    pub flat: u64,
    /// `q♯ = q / q♭`.
    pub sharp: u64,
    /// `q‡`: product of primes `p` with `p² ∥ q`.
    pub ddagger: u64,
    /// `Ξ(q)`: product of the prime powers `p^ν ∥ q` with `ν >= 3`.
    pub xi: u64,
    pub omega: u32,
    pub factorization: Factorization,
}

pub fn mod_parts(q: u64) -> ModulusParts {
    let f = factorize(q.max(1));
    let mut parts = ModulusParts {
        q,
        flat: 1,
        sharp: 1,
        ddagger: 1,
        xi: 1,
        omega: f.len() as u32,
        factorization: Vec::new(),
    };
    for &(p, e) in &f {
        match e {
            1 => parts.flat *= p,
            2 => {
                parts.ddagger *= p;
                parts.sharp *= p * p;
            }
            _ => {
                parts.xi *= p.pow(e);
                parts.sharp *= p.pow(e);
            }
        }
    }
    parts.factorization = f;
    parts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tuple(q: u64) -> (u64, u64, u64, u64, u32) {
        let p = mod_parts(q);
        (p.flat, p.sharp, p.ddagger, p.xi, p.omega)
    }

    #[test]
    fn examples() {
        assert_eq!(tuple(12), (3, 4, 2, 1, 2));
        assert_eq!(tuple(720), (5, 144, 3, 16, 3));
        assert_eq!(tuple(1), (1, 1, 1, 1, 0));
    }

    #[test]
    fn structural_identities() {
        for q in 1..=100_000u64 {
            let p = mod_parts(q);
            assert_eq!(p.flat * p.sharp, q);
            assert_eq!(p.ddagger * p.ddagger * p.xi, p.sharp);
        }
    }
}
