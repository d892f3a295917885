//! Mean values of arithmetic functions and their predicted main terms.

use std::f64::consts::{LN_2, PI};

use serde::Serialize;

use super::dickman::dickman_rho;
use super::sieve::{map_blocks, self_smooth};
use crate::arith::{euler_phi, factorize, gcd, gcd_infinity, shared_sieve};
use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::roots::gamma;

/// Largest `N` for the mean-value suite.
pub const MEAN_LIMIT: u64 = 10_000_000;
/// Largest `N` for [`rankin_sum`].
pub const RANKIN_LIMIT: u64 = 1_000_000;
/// Largest `x` for [`squarefull_avg`].
pub const SQUAREFULL_LIMIT: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanRow {
    pub name: String,
    pub sum: f64,
    pub prediction: f64,
    pub ratio: f64,
}

impl MeanRow {
    fn new(name: impl Into<String>, sum: f64, prediction: f64) -> Self {
        MeanRow {
            name: name.into(),
            sum,
            prediction,
            ratio: sum / prediction,
        }
    }
}

/// `Σ_{0<=n<=N} γ(2^n)/2^n`.
pub fn gamma_two_power_sum(n: u32) -> f64 {
    (0..=n)
        .map(|k| gamma(1u64 << k.min(62)) as f64 / 2f64.powi(k as i32))
        .sum()
}

/// Partial sums over odd `n` in `(a, b]` of `φ(n)/n²` and `φ(n) log n / n²`,
/// optionally restricted to `n^θ`-smooth `n`.
fn odd_phi_sums(a: u64, b: u64, theta: Option<f64>, exec: Exec) -> (f64, f64) {
    let parts = map_blocks(a + 1, b, exec, |blk| {
        let (mut s, mut sl) = (0.0, 0.0);
        for (i, (&phi, &lpf)) in blk.phi.iter().zip(&blk.lpf).enumerate() {
            let n = blk.lo + i as u64;
            if n.is_multiple_of(2) || n == 0 {
                continue;
            }
            if let Some(t) = theta {
                if !self_smooth(n, lpf, t) {
                    continue;
                }
            }
            let nf = n as f64;
            let v = phi as f64 / (nf * nf);
            s += v;
            sl += v * nf.ln();
        }
        (s, sl)
    });
    parts
        .into_iter()
        .fold((0.0, 0.0), |acc, p| (acc.0 + p.0, acc.1 + p.1))
}

/// The mean-value table at `N`, with self-θ-smooth variants when `theta` is given.
pub fn mean_value_suite(n: u64, theta: Option<f64>) -> Result<Vec<MeanRow>> {
    mean_value_suite_with(n, theta, Exec::default())
}

pub fn mean_value_suite_with(n: u64, theta: Option<f64>, exec: Exec) -> Result<Vec<MeanRow>> {
    if n < 2 {
        return domain("N must be >= 2");
    }
    if n > MEAN_LIMIT {
        return Err(Error::Budget(format!(
            "mean values limited to N <= {MEAN_LIMIT}"
        )));
    }
    if let Some(t) = theta {
        if !(t > 0.0 && t < 1.0) {
            return domain(format!("theta must lie in (0, 1), got {t}"));
        }
    }
    let ln_n = (n as f64).ln();
    let c = 4.0 / (PI * PI);
    let mut rows = Vec::new();
    let g = gamma_two_power_sum(n.min(64) as u32);
    rows.push(MeanRow::new("gamma_two_power", g, 4.0));
    for q in [2u64, 30] {
        let phi_q = euler_phi(&factorize(q)) as f64 / q as f64;
        let h: f64 = (1..=n)
            .filter(|&k| gcd(k, q) == 1)
            .map(|k| 1.0 / k as f64)
            .sum();
        rows.push(MeanRow::new(
            format!("coprime_harmonic_q{q}"),
            h,
            phi_q * ln_n,
        ));
    }
    let (s, sl) = odd_phi_sums(0, n, None, exec);
    rows.push(MeanRow::new("odd_phi", s, c * ln_n));
    rows.push(MeanRow::new("odd_phi_log", sl, 0.5 * c * ln_n * ln_n));
    let (inc, _) = odd_phi_sums(n, 2 * n, None, exec);
    rows.push(MeanRow::new("odd_phi_dyadic", inc, c * LN_2));
    if let Some(t) = theta {
        let r = dickman_rho(1.0 / t)?;
        let (s, sl) = odd_phi_sums(0, n, Some(t), exec);
        rows.push(MeanRow::new("smooth_odd_phi", s, c * r * ln_n));
        rows.push(MeanRow::new(
            "smooth_odd_phi_log",
            sl,
            0.5 * c * r * ln_n * ln_n,
        ));
        let (inc, _) = odd_phi_sums(n, 2 * n, Some(t), exec);
        rows.push(MeanRow::new("smooth_odd_phi_dyadic", inc, c * r * LN_2));
    }
    Ok(rows)
}

/// Prefix sums `P[k] = Σ_{mn <= k} (m, n^∞)^{1/2} ((mn)♯)^{1/4}` for `k <= n_max`.
///
/// Terms are grouped by the product `k = mn`, so each prefix is an exact
/// function of `k` independent of scheduling.
pub fn rankin_prefix(n_max: u64, exec: Exec) -> Result<Vec<f64>> {
    if n_max > RANKIN_LIMIT {
        return Err(Error::Budget(format!(
            "rankin_sum limited to N <= {RANKIN_LIMIT}"
        )));
    }
    let sieve = shared_sieve(n_max);
    let per_k: Vec<Vec<f64>> = exec.map_chunks(1, n_max + 1, 1 << 14, |lo, hi| {
        (lo..hi)
            .map(|k| {
                let f = sieve.factorize(k);
                let sharp: u64 = f
                    .iter()
                    .filter(|x| x.1 >= 2)
                    .map(|&(p, e)| p.pow(e))
                    .product();
                let w = (sharp as f64).powf(0.25);
                let mut divs = vec![1u64];
                for &(p, e) in &f {
                    let cur = divs.clone();
                    let mut pk = 1;
                    for _ in 0..e {
                        pk *= p;
                        divs.extend(cur.iter().map(|d| d * pk));
                    }
                }
                divs.sort_unstable();
                divs.iter()
                    .map(|&m| (gcd_infinity(m, k / m) as f64).sqrt() * w)
                    .sum::<f64>()
            })
            .collect()
    });
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for v in per_k.into_iter().flatten() {
        acc += v;
        out.push(acc);
    }
    Ok(out)
}

/// `Σ_{mn <= N} (m, n^∞)^{1/2} ((mn)♯)^{1/4}`.
pub fn rankin_sum(n: u64) -> Result<f64> {
    Ok(*rankin_prefix(n, Exec::default())?.last().unwrap())
}

/// Prefix sums of `(k♯)^{1/4} (k, q)^{1/2}` for `k <= x_max`.
pub fn squarefull_prefix(x_max: u64, q: u64, exec: Exec) -> Result<Vec<f64>> {
    if x_max > SQUAREFULL_LIMIT {
        return Err(Error::Budget(format!(
            "squarefull_avg limited to x <= {SQUAREFULL_LIMIT}"
        )));
    }
    if q == 0 {
        return domain("q must be >= 1");
    }
    let parts = map_blocks(1, x_max, exec, |blk| {
        blk.sharp
            .iter()
            .enumerate()
            .map(|(i, &s)| {
                let k = blk.lo + i as u64;
                (s as f64).powf(0.25) * (gcd(k, q) as f64).sqrt()
            })
            .collect::<Vec<f64>>()
    });
    let mut out = Vec::with_capacity(x_max as usize + 1);
    out.push(0.0);
    let mut acc = 0.0;
    for v in parts.into_iter().flatten() {
        acc += v;
        out.push(acc);
    }
    Ok(out)
}

/// `Σ_{n <= x} (n♯)^{1/4} (n, q)^{1/2}`.
pub fn squarefull_avg(x: u64, q: u64) -> Result<f64> {
    Ok(*squarefull_prefix(x, q, Exec::default())?.last().unwrap())
}

/// `(N, S(2N)/S(N))` for `N = start · 2^k <= last`, from a prefix table.
pub fn dyadic_ratios(prefix: &[f64], start: u64, last: u64) -> Vec<(u64, f64)> {
    let mut out = Vec::new();
    let mut n = start;
    while n <= last && 2 * n < prefix.len() as u64 {
        out.push((n, prefix[2 * n as usize] / prefix[n as usize]));
        n *= 2;
    }
    out
}
