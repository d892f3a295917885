//! Fundamental solutions of `t² − d u² = 1` from the continued fraction of `√d`.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::arith::{is_square, isqrt};
use crate::error::{domain, Error, Result};

/// A solution `(t, u)` of `t² − d u² = 1` with `t >= 2`, `u >= 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PellSolution {
    pub d: u64,
    pub t: BigUint,
    pub u: BigUint,
}

impl PellSolution {
    /// Validating constructor.
    pub fn new(d: u64, t: BigUint, u: BigUint) -> Result<Self> {
        let s = PellSolution { d, t, u };
        if s.d < 2 || s.u.is_zero() || !s.satisfies_equation() {
            return domain(format!(
                "({}, {}, {}) does not satisfy t^2 - d u^2 = 1",
                s.d, s.t, s.u
            ));
        }
        Ok(s)
    }

    pub fn satisfies_equation(&self) -> bool {
        &self.t * &self.t == BigUint::from(self.d) * &self.u * &self.u + 1u32
    }

    /// `ln(t + u √d)`, accurate for solutions of any size.
    pub fn ln_value(&self) -> f64 {
        // For a solution, t + u√d = 2t − 1/(t + u√d), so ln(2t) is exact to
        // within 1/(2 t²).
        ln_big(&self.t) + std::f64::consts::LN_2
    }

    /// Small-size view `(t, u)` if both fit in `u128`.
    pub fn as_u128(&self) -> Option<(u128, u128)> {
        Some((self.t.to_u128()?, self.u.to_u128()?))
    }
}

fn ln_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (n >> shift).to_f64().unwrap_or(0.0);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// `ε_d^n` for `n = power_index`, tagged with its index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionRecord {
    pub d: u64,
    pub t: BigUint,
    pub u: BigUint,
    pub power_index: u32,
    pub is_fundamental: bool,
}

impl SolutionRecord {
    pub fn solution(&self) -> PellSolution {
        PellSolution {
            d: self.d,
            t: self.t.clone(),
            u: self.u.clone(),
        }
    }
}

/// Result of a capped fundamental-solution search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Fundamental {
    Found(PellSolution),
    /// `ε_d` exceeds the cap; its size was never materialized.
    CapExceeded,
}

impl Fundamental {
    pub fn found(self) -> Option<PellSolution> {
        match self {
            Fundamental::Found(s) => Some(s),
            Fundamental::CapExceeded => None,
        }
    }
}

fn check_d(d: u64) -> Result<()> {
    if d < 2 {
        return domain(format!("d must be >= 2, got {d}"));
    }
    if is_square(d) {
        return Err(Error::SquareInput(d));
    }
    Ok(())
}

/// Partial quotients of `√d`: `(m, den, a)` state of the periodic expansion.
struct CfState {
    d: u64,
    a0: u64,
    m: u64,
    den: u64,
    a: u64,
}

impl CfState {
    fn new(d: u64) -> Self {
        let a0 = isqrt(d);
        CfState {
            d,
            a0,
            m: 0,
            den: 1,
            a: a0,
        }
    }

    fn advance(&mut self) {
        self.m = self.den * self.a - self.m;
        self.den = (self.d - self.m * self.m) / self.den;
        self.a = (self.a0 + self.m) / self.den;
    }
}

/// Minimal solution of `t² − d u² = 1`.
///
/// With a cap, the search stops at the first convergent whose value
/// `p + q√d` exceeds it and returns [`Fundamental::CapExceeded`].
pub fn fundamental_solution(d: u64, cap: Option<f64>) -> Result<Fundamental> {
    check_d(d)?;
    if let Some(c) = cap {
        if !(c >= 2.0 * (d as f64).sqrt()) {
            return domain(format!("cap must be >= 2 sqrt(d), got {c}"));
        }
        if c <= 1e18 {
            let bound = c.floor() as u128;
            return Ok(match fundamental_capped(d, bound) {
                Some((t, u)) if (t as f64) + (u as f64) * (d as f64).sqrt() <= c => {
                    Fundamental::Found(PellSolution {
                        d,
                        t: t.into(),
                        u: u.into(),
                    })
                }
                _ => Fundamental::CapExceeded,
            });
        }
    }
    let ln_cap = cap.map(f64::ln);
    let mut cf = CfState::new(d);
    let (mut p1, mut p2) = (BigUint::one(), BigUint::zero());
    let (mut q1, mut q2) = (BigUint::zero(), BigUint::one());
    let dd = BigUint::from(d);
    loop {
        let p = &p1 * cf.a + &p2;
        let q = &q1 * cf.a + &q2;
        if &p * &p == &dd * &q * &q + 1u32 {
            let s = PellSolution { d, t: p, u: q };
            if let Some(lc) = ln_cap {
                if s.ln_value() > lc {
                    return Ok(Fundamental::CapExceeded);
                }
            }
            return Ok(Fundamental::Found(s));
        }
        if let Some(lc) = ln_cap {
            if ln_big(&p) > lc {
                return Ok(Fundamental::CapExceeded);
            }
        }
        p2 = std::mem::replace(&mut p1, p);
        q2 = std::mem::replace(&mut q1, q);
        cf.advance();
    }
}

/// Fundamental solution in `u128`, or `None` once a convergent's numerator
/// exceeds `cap_t`. Requires `cap_t <= 10^18` so every square fits.
pub(crate) fn fundamental_capped(d: u64, cap_t: u128) -> Option<(u128, u128)> {
    debug_assert!(cap_t <= 1_000_000_000_000_000_000);
    let mut cf = CfState::new(d);
    let (mut p1, mut p2) = (1u128, 0u128);
    let (mut q1, mut q2) = (0u128, 1u128);
    let d128 = d as u128;
    loop {
        let a = cf.a as u128;
        let p = a.checked_mul(p1)?.checked_add(p2)?;
        if p > cap_t {
            return None;
        }
        let q = a * q1 + q2;
        if p * p == d128 * q * q + 1 {
            return Some((p, q));
        }
        (p2, p1) = (p1, p);
        (q2, q1) = (q1, q);
        cf.advance();
    }
}

/// The first `n` powers `ε^1, …, ε^n` by the exact recurrence
/// `(t, u) ↦ (t t₁ + d u u₁, t u₁ + u t₁)`.
pub fn solution_powers(fundamental: &PellSolution, n: u32) -> Vec<SolutionRecord> {
    let d = BigUint::from(fundamental.d);
    let (t1, u1) = (&fundamental.t, &fundamental.u);
    let mut out = Vec::with_capacity(n as usize);
    let (mut t, mut u) = (t1.clone(), u1.clone());
    for k in 1..=n {
        out.push(SolutionRecord {
            d: fundamental.d,
            t: t.clone(),
            u: u.clone(),
            power_index: k,
            is_fundamental: k == 1,
        });
        let nt = &t * t1 + &d * &u * u1;
        let nu = &t * u1 + &u * t1;
        t = nt;
        u = nu;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tu(d: u64) -> (String, String) {
        let s = fundamental_solution(d, None).unwrap().found().unwrap();
        (s.t.to_string(), s.u.to_string())
    }

    #[test]
    fn known_fundamental_solutions() {
        assert_eq!(tu(2), ("3".into(), "2".into()));
        assert_eq!(tu(13), ("649".into(), "180".into()));
        assert_eq!(tu(61), ("1766319049".into(), "226153980".into()));
        let big = fundamental_solution(1_000_099, None)
            .unwrap()
            .found()
            .unwrap();
        assert!(big.satisfies_equation());
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(fundamental_solution(49, None), Err(Error::SquareInput(49)));
        assert!(fundamental_solution(1, None).is_err());
        assert!(fundamental_solution(13, Some(3.0)).is_err());
    }

    #[test]
    fn cap_aborts_early() {
        assert_eq!(
            fundamental_solution(61, Some(1e6)).unwrap(),
            Fundamental::CapExceeded
        );
        assert_eq!(
            fundamental_solution(13, Some(1297.9)).unwrap(),
            Fundamental::CapExceeded
        );
        assert!(fundamental_solution(13, Some(1298.0))
            .unwrap()
            .found()
            .is_some());
        assert!(fundamental_solution(61, Some(1e40))
            .unwrap()
            .found()
            .is_some());
        assert_eq!(
            fundamental_solution(61, Some(1e35)).map(|f| f.found().is_some()),
            Ok(true)
        );
        let f = fundamental_solution(1_000_099, Some(1e31)).unwrap();
        let full = fundamental_solution(1_000_099, None)
            .unwrap()
            .found()
            .unwrap();
        assert_eq!(f.found().is_some(), full.ln_value() <= 1e31f64.ln());
    }

    #[test]
    fn powers_satisfy_equation() {
        let s = fundamental_solution(7, None).unwrap().found().unwrap();
        let pw = solution_powers(&s, 6);
        assert_eq!(pw[1].t, BigUint::from(127u32));
        assert_eq!(pw[1].u, BigUint::from(48u32));
        for (k, r) in pw.iter().enumerate() {
            assert_eq!(r.power_index as usize, k + 1);
            assert_eq!(r.is_fundamental, k == 0);
            assert!(r.solution().satisfies_equation());
        }
    }

    #[test]
    fn validating_constructor() {
        assert!(PellSolution::new(13, 649u32.into(), 180u32.into()).is_ok());
        assert!(PellSolution::new(13, 649u32.into(), 181u32.into()).is_err());
    }

    fn brute(d: u64, limit: u64) -> Option<(u64, u64)> {
        (1..=limit).find_map(|u| {
            let n = d * u * u + 1;
            is_square(n).then(|| (isqrt(n), u))
        })
    }

    #[test]
    fn matches_brute_force_up_to_2000() {
        const LIMIT: u64 = 200_000;
        for d in 2..=2000u64 {
            if is_square(d) {
                continue;
            }
            let s = fundamental_solution(d, None).unwrap().found().unwrap();
            match brute(d, LIMIT) {
                Some((t, u)) => {
                    assert_eq!(s.t, BigUint::from(t), "d = {d}");
                    assert_eq!(s.u, BigUint::from(u), "d = {d}");
                }
                None => assert!(s.u > BigUint::from(LIMIT), "d = {d}"),
            }
        }
    }

    proptest! {
        #[test]
        fn capped_agrees_with_exact(d in 2u64..100_000) {
            prop_assume!(!is_square(d));
            let full = fundamental_solution(d, None).unwrap().found().unwrap();
            match fundamental_capped(d, 1_000_000_000_000) {
                Some((t, u)) => {
                    prop_assert_eq!(BigUint::from(t), full.t);
                    prop_assert_eq!(BigUint::from(u), full.u);
                }
                None => prop_assert!(full.t > BigUint::from(1_000_000_000_000u64)),
            }
        }
    }
}
