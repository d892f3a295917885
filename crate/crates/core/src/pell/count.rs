//! Counting `S(x, α)` and `S^f(x, α)`.
//!
//! Two independent paths are provided. [`count_both`] walks `D <= x`,
//! finds `ε_D` under the cap `D^(1/2+α)` and steps through its powers.
//! [`count_s_param`] walks `u <= X_α`, the square roots of unity `Ω`
//! modulo `u²` and the progression `t ≡ Ω (mod u²)`, recovering
//! `D = (t² − 1)/u²`.

use num_bigint::BigUint;
use num_traits::{One, Pow};

use super::cache::SolutionCache;
use super::solve::{fundamental_capped, fundamental_solution, PellSolution};
use super::window::{y1_solve, CountWindow};
use crate::arith::{is_square, isqrt_u128, shared_sieve};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::roots::roots_with;

/// Largest exponent denominator handled by the exact comparison.
pub const MAX_EXACT_DENOMINATOR: u64 = 4096;

const D_CHUNK: u64 = 4096;
const U_CHUNK: u64 = 256;
const FILTER_MARGIN: f64 = 1e-9;

/// `S(x, α)` together with `S^f(x, α)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Counts {
    pub s: u64,
    pub sf: u64,
}

impl std::ops::Add for Counts {
    type Output = Counts;
    fn add(self, o: Counts) -> Counts {
        Counts {
            s: self.s + o.s,
            sf: self.sf + o.sf,
        }
    }
}

/// Decide `t + u√d <= d^(p/q)` exactly.
///
/// A float comparison of logarithms settles every case with margin above
/// `1e-9`; the rest are decided by comparing `(t + u√d)^q` with `d^p` in
/// `Z[√d]`.
pub fn eta_within(t: u128, u: u128, d: u64, exponent: (u64, u64)) -> Result<bool> {
    let (p, q) = exponent;
    let lhs = (t as f64 + u as f64 * (d as f64).sqrt()).ln();
    let rhs = p as f64 / q as f64 * (d as f64).ln();
    let gap = lhs - rhs;
    if gap < -FILTER_MARGIN * rhs.abs().max(1.0) {
        return Ok(true);
    }
    if gap > FILTER_MARGIN * rhs.abs().max(1.0) {
        return Ok(false);
    }
    if q > MAX_EXACT_DENOMINATOR {
        return Err(Error::BoundaryAmbiguous { d });
    }
    Ok(eta_within_exact(t, u, d, p, q))
}

fn eta_within_exact(t: u128, u: u128, d: u64, p: u64, q: u64) -> bool {
    let db = BigUint::from(d);
    let (mut rt, mut ru) = (BigUint::one(), BigUint::from(0u32));
    let (mut bt, mut bu) = (BigUint::from(t), BigUint::from(u));
    let mut e = q;
    while e > 0 {
        if e & 1 == 1 {
            let nt = &rt * &bt + &db * &ru * &bu;
            let nu = &rt * &bu + &ru * &bt;
            rt = nt;
            ru = nu;
        }
        e >>= 1;
        if e > 0 {
            let nt = &bt * &bt + &db * &bu * &bu;
            let nu = BigUint::from(2u32) * &bt * &bu;
            bt = nt;
            bu = nu;
        }
    }
    let m: BigUint = Pow::pow(&db, p);
    if rt > m {
        return false;
    }
    let rest = &m - &rt;
    &ru * &ru * &db <= &rest * &rest
}

/// Upper bound for `t` when `t + u√D <= D^(p/q)`, padded against rounding.
fn t_cap(d: u64, exponent: (u64, u64)) -> f64 {
    let (p, q) = exponent;
    (d as f64).powf(p as f64 / q as f64) * (1.0 + 1e-9) + 1.0
}

/// Contribution of a single `D`: `(#powers within the window, fundamental within)`.
fn count_one(
    d: u64,
    exponent: (u64, u64),
    cached: Option<&PellSolution>,
) -> Result<(Counts, Option<PellSolution>)> {
    let cap = t_cap(d, exponent);
    let mut fresh = None;
    let eps = match cached {
        Some(s) => s.as_u128(),
        None if cap <= 1e18 => {
            let found = fundamental_capped(d, cap as u128);
            if let Some((t, u)) = found {
                fresh = Some(PellSolution {
                    d,
                    t: t.into(),
                    u: u.into(),
                });
            }
            found
        }
        None => {
            let s = fundamental_solution(d, Some(cap))?.found();
            let v = s.as_ref().and_then(PellSolution::as_u128);
            fresh = s;
            v
        }
    };
    let Some((t1, u1)) = eps else {
        return Ok((Counts::default(), fresh));
    };
    let mut counts = Counts::default();
    let (mut t, mut u) = (t1, u1);
    let d128 = d as u128;
    loop {
        if !eta_within(t, u, d, exponent)? {
            break;
        }
        counts.s += 1;
        if counts.s == 1 {
            counts.sf = 1;
        }
        let next_t = t
            .checked_mul(t1)
            .and_then(|a| d128.checked_mul(u)?.checked_mul(u1)?.checked_add(a));
        let next_u = t
            .checked_mul(u1)
            .and_then(|a| u.checked_mul(t1)?.checked_add(a));
        match (next_t, next_u) {
            (Some(nt), Some(nu)) if (nt as f64) <= cap => {
                t = nt;
                u = nu;
            }
            _ => break,
        }
    }
    Ok((counts, fresh))
}

/// Count `S(x, α)` and `S^f(x, α)` by enumerating `D`.
pub fn count_both(window: &CountWindow, exec: Exec) -> Result<Counts> {
    count_both_cached(window, exec, None)
}

/// As [`count_both`], reading fundamental solutions from `cache` and
/// inserting any newly found ones after the run.
pub fn count_both_cached(
    window: &CountWindow,
    exec: Exec,
    cache: Option<&SolutionCache>,
) -> Result<Counts> {
    let exponent = window.alpha.exponent();
    let d_max = window.d_max();
    let parts = exec.map_chunks(
        2,
        d_max + 1,
        D_CHUNK,
        |lo, hi| -> Result<(Counts, Vec<PellSolution>)> {
            let mut acc = Counts::default();
            let mut found = Vec::new();
            let mut root = isqrt_u128(lo as u128) as u64;
            for d in lo..hi {
                while (root + 1) * (root + 1) <= d {
                    root += 1;
                }
                if root * root == d {
                    continue;
                }
                let hit = cache.and_then(|c| c.get(d));
                let (c, fresh) = count_one(d, exponent, hit.as_ref())?;
                acc = acc + c;
                found.extend(fresh);
            }
            Ok((acc, found))
        },
    );
    let mut total = Counts::default();
    let mut new_entries = Vec::new();
    for part in parts {
        let (c, found) = part?;
        total = total + c;
        new_entries.extend(found);
    }
    if let Some(cache) = cache {
        cache.extend(new_entries);
    }
    Ok(total)
}

pub fn count_s(window: &CountWindow) -> Result<u64> {
    Ok(count_both(window, Exec::default())?.s)
}

pub fn count_sf(window: &CountWindow) -> Result<u64> {
    Ok(count_both(window, Exec::default())?.sf)
}

pub fn count_s_param(window: &CountWindow) -> Result<u64> {
    count_s_param_with(window, Exec::default())
}

/// Count `S(x, α)` through the `(u, Ω, t)` parametrization.
pub fn count_s_param_with(window: &CountWindow, exec: Exec) -> Result<u64> {
    let exponent = window.alpha.exponent();
    let alpha = window.alpha.value();
    let x = window.x;
    let d_max = window.d_max();
    let u_max = window.x_alpha().floor() as u64 + 1;
    let sieve = shared_sieve(u_max);
    let parts = exec.map_chunks(1, u_max + 1, U_CHUNK, |lo, hi| -> Result<u64> {
        let mut acc = 0u64;
        for u in lo..hi {
            let y1 = y1_solve(u as f64, alpha, x)?;
            if y1 > x * (1.0 + FILTER_MARGIN) + 1.0 {
                continue;
            }
            let d_lo = ((y1 * (1.0 - FILTER_MARGIN)).floor() as u64).max(2);
            if d_lo > d_max {
                continue;
            }
            let sure = y1 * (1.0 + FILTER_MARGIN);
            let uu = u as u128 * u as u128;
            let t_min = isqrt_u128(d_lo as u128 * uu + 1);
            let t_max = isqrt_u128(d_max as u128 * uu + 1);
            for omega in roots_with(u, &sieve) {
                let omega = omega as u128;
                let mut t = t_min + (omega + uu - t_min % uu) % uu;
                while t <= t_max {
                    let d = ((t * t - 1) / uu) as u64;
                    if d >= d_lo && !is_square(d) {
                        let inside = if d as f64 > sure {
                            true
                        } else {
                            eta_within(t, u as u128, d, exponent)?
                        };
                        if inside {
                            acc += 1;
                        }
                    }
                    t += uu;
                }
            }
        }
        Ok(acc)
    });
    parts.into_iter().sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pell::window::Alpha;

    fn w(x: f64, num: i64, den: i64) -> CountWindow {
        CountWindow::new(x, Alpha::new(num, den).unwrap()).unwrap()
    }

    #[test]
    fn small_oracle_values() {
        assert_eq!(count_s(&w(10.0, 1, 1)).unwrap(), 4);
        assert_eq!(count_sf(&w(10.0, 1, 1)).unwrap(), 4);
        assert_eq!(count_s(&w(10.0, 1, 4)).unwrap(), 0);
        assert_eq!(count_sf(&w(10.0, 1, 4)).unwrap(), 0);
        assert_eq!(count_s(&w(3.0, 1, 2)).unwrap(), 0);
        assert_eq!(count_s_param(&w(10.0, 1, 1)).unwrap(), 4);
        assert_eq!(count_s_param(&w(10.0, 1, 4)).unwrap(), 0);
    }

    #[test]
    fn golden_values_at_one_thousand() {
        // (α, S, S^f, S at α/2 − 1/4) from a brute-force oracle.
        let golden = [
            ((3, 5), 191, 191, 0),
            ((3, 4), 308, 293, 15),
            ((9, 10), 370, 344, 26),
            ((1, 1), 420, 377, 43),
        ];
        for ((n, d), s, sf, shifted) in golden {
            let win = w(1000.0, n, d);
            let c = count_both(&win, Exec::Sequential).unwrap();
            assert_eq!((c.s, c.sf), (s, sf), "alpha = {n}/{d}");
            let half = CountWindow {
                x: 1000.0,
                alpha: win.alpha.half_shift().unwrap(),
            };
            let h = count_both(&half, Exec::Sequential).unwrap();
            assert_eq!(h.s, shifted);
            assert_eq!(count_s_param_with(&win, Exec::Sequential).unwrap(), s);
        }
        assert_eq!(count_s(&w(1000.0, 1, 2)).unwrap(), 149);
    }

    #[test]
    fn exact_boundary_hits_count() {
        assert!(eta_within(3, 1, 8, (1, 1)).unwrap());
        assert!(!eta_within(3, 2, 2, (1, 1)).unwrap());
        // Closed inequality: a value sitting exactly on the bound is inside.
        assert!(eta_within(4, 0, 16, (1, 2)).unwrap());
        assert!(!eta_within(5, 0, 16, (1, 2)).unwrap());
        assert!(eta_within_exact(4, 0, 16, 1, 2));
        assert!(eta_within_exact(17, 12, 2, 5, 1) == (17.0 + 12.0 * 2f64.sqrt() <= 32.0));
    }

    #[test]
    fn parallel_matches_sequential() {
        let win = w(20_000.0, 3, 4);
        let a = count_both(&win, Exec::Sequential).unwrap();
        let b = count_both(&win, Exec::Parallel).unwrap();
        assert_eq!(a, b);
        assert_eq!(count_s_param_with(&win, Exec::Parallel).unwrap(), a.s);
    }

    #[test]
    fn cache_does_not_change_counts() {
        let cache = SolutionCache::new();
        let win = w(5000.0, 9, 10);
        let a = count_both_cached(&win, Exec::Parallel, Some(&cache)).unwrap();
        assert!(!cache.is_empty());
        let b = count_both_cached(&win, Exec::Parallel, Some(&cache)).unwrap();
        assert_eq!(a, b);
        assert_eq!(a, count_both(&win, Exec::Sequential).unwrap());
    }
}
