//! Asymptotic lower-bound coefficients for `S(x, α)` and `S^f(x, α)`.
//!
//! Every coefficient `c` stands for the main term `c · √x log²x / π²`;
//! the `o(1)` corrections are omitted throughout.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::pell::{count_both, CountWindow};
use crate::smooth::{dickman_rho, RHO_MAX_U};

fn check_range(alpha: f64, theta: f64) -> Result<()> {
    if !(0.5..=1.0).contains(&alpha) {
        return domain(format!("alpha = {alpha} outside [1/2, 1]"));
    }
    if !(theta > 0.0 && theta < 0.5) {
        return domain(format!("theta = {theta} outside (0, 1/2)"));
    }
    Ok(())
}

/// Breakpoint `6 / (11 + 2θ)` between the two branches of [`F_theta`].
pub fn breakpoint(theta: f64) -> f64 {
    6.0 / (11.0 + 2.0 * theta)
}

#[allow(non_snake_case)]
pub fn F_theta(alpha: f64, theta: f64) -> Result<f64> {
    check_range(alpha, theta)?;
    Ok(f_theta_unchecked(alpha, theta))
}

fn f_theta_unchecked(alpha: f64, theta: f64) -> f64 {
    if alpha <= breakpoint(theta) {
        24.0 * alpha - 4.0 * (5.0 + 2.0 * theta) * alpha * alpha - (7.0 - 2.0 * theta)
    } else {
        864.0 / (11.0 + 2.0 * theta).powi(2) - (7.0 - 2.0 * theta)
    }
}

/// `F(α, θ)` written with `min{α, 6/(11+2θ)}`, without the `ρ` factor.
fn f_min_form(alpha: f64, theta: f64) -> f64 {
    let m = alpha.min(breakpoint(theta));
    4.0 * m - (10.0 + 4.0 * theta) / 3.0 * m * m - (7.0 - 2.0 * theta) / 6.0
}

/// Agreement threshold between the two closed forms of the gain.
pub const GAIN_FORM_TOLERANCE: f64 = 1e-10;

/// `ρ(1/θ) F_θ(α) / 6`, cross-checked against the `min` form.
pub fn gain_term(alpha: f64, theta: f64) -> Result<f64> {
    let (a, b) = gain_forms(alpha, theta)?;
    if (a - b).abs() > GAIN_FORM_TOLERANCE {
        return Err(Error::IdentityViolation(format!(
            "gain forms differ at alpha={alpha}, theta={theta}: {a} vs {b}"
        )));
    }
    Ok(a)
}

/// Both closed forms of the gain, in that order.
pub fn gain_forms(alpha: f64, theta: f64) -> Result<(f64, f64)> {
    check_range(alpha, theta)?;
    let rho = dickman_rho(1.0 / theta)?;
    Ok((
        rho * f_theta_unchecked(alpha, theta) / 6.0,
        rho * f_min_form(alpha, theta),
    ))
}

/// Tolerance on the identity checked by [`optimal_theta`].
pub const COROLLARY_TOLERANCE: f64 = 1e-9;

/// `θ = 3/α − 11/2`, which puts `α` on the breakpoint.
pub fn optimal_theta(alpha: f64) -> Result<f64> {
    if !(alpha > 0.5 && alpha < 6.0 / 11.0) {
        return domain(format!("alpha = {alpha} outside (1/2, 6/11)"));
    }
    let theta = 3.0 / alpha - 5.5;
    let lhs = gain_term(alpha, theta)?;
    let rhs = corollary_gain(alpha)?;
    if (lhs - rhs).abs() > COROLLARY_TOLERANCE {
        return Err(Error::IdentityViolation(format!(
            "corollary gain mismatch at alpha={alpha}: {lhs} vs {rhs}"
        )));
    }
    Ok(theta)
}

/// `ρ(2α/(6−11α)) (4(α−½)³ + 6(α−½)²) / α`.
pub fn corollary_gain(alpha: f64) -> Result<f64> {
    let d = alpha - 0.5;
    Ok(corollary_ratio(alpha)? * (4.0 * d.powi(3) + 6.0 * d * d))
}

/// `ρ(2α/(6−11α)) / α`.
pub fn corollary_ratio(alpha: f64) -> Result<f64> {
    Ok(dickman_rho(2.0 * alpha / (6.0 - 11.0 * alpha))? / alpha)
}

/// Conjectured secondary term `C(α)`.
pub fn conjecture_c(alpha: f64) -> f64 {
    if alpha <= 1.0 {
        0.0
    } else if alpha <= 2.5 {
        (alpha - 1.0).powi(2) / 18.0
    } else {
        (4.0 * alpha - 7.0) / 24.0
    }
}

/// `θ` used when none is supplied: `3/α − 11/2` clamped to `[1/64, 0.499]`.
pub fn auto_theta(alpha: f64) -> f64 {
    (3.0 / alpha - 5.5).clamp(1.0 / RHO_MAX_U, 0.499)
}

/// Column order of the bound families.
pub const FAMILIES: [&str; 11] = [
    "hooley_main",
    "hooley_conjecture",
    "fouvry_Sf",
    "fouvry_S",
    "conditional_Sf",
    "conditional_S",
    "main_Sf",
    "main_S",
    "weak_S",
    "corollary_Sf",
    "corollary_S",
];

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub x: f64,
    pub alpha: f64,
    pub theta: Option<f64>,
    pub vartheta: Option<f64>,
    /// Coefficients in units of `√x log²x / π²`; families outside their
    /// range are absent.
    pub coefficients: BTreeMap<String, f64>,
    pub gain: f64,
}

impl BoundReport {
    pub fn coefficient(&self, family: &str) -> Option<f64> {
        self.coefficients.get(family).copied()
    }

    /// `c · √x log²x / π²`.
    pub fn value(&self, family: &str) -> Option<f64> {
        self.coefficient(family).map(|c| c * scale(self.x))
    }
}

/// `√x log²x / π²`.
pub fn scale(x: f64) -> f64 {
    x.sqrt() * x.ln().powi(2) / (PI * PI)
}

pub fn lower_bounds(
    x: f64,
    alpha: f64,
    theta: Option<f64>,
    vartheta: Option<f64>,
) -> Result<BoundReport> {
    if !(x >= 2.0) {
        return domain(format!("x = {x} must be at least 2"));
    }
    if !(alpha > 0.0) {
        return domain(format!("alpha = {alpha} must be positive"));
    }
    let d = alpha - 0.5;
    let base = 4.0 * alpha - 1.0;
    let mut c = BTreeMap::new();
    let mut put = |k: &str, v: f64| {
        c.insert(k.to_string(), v);
    };
    put("hooley_main", 4.0 * alpha * alpha);
    put("hooley_conjecture", base + conjecture_c(alpha));
    let in_unit = (0.5..=1.0).contains(&alpha);
    let mut gain = 0.0;
    let mut used_theta = None;
    if in_unit {
        put("fouvry_Sf", base - 4.0 * d * d);
        put("fouvry_S", base - 3.0 * d * d);
        let th = theta.unwrap_or_else(|| auto_theta(alpha));
        gain = gain_term(alpha, th)?;
        used_theta = Some(th);
        put("main_Sf", base - 4.0 * d * d + gain);
        put("main_S", base - 3.0 * d * d + gain);
        put(
            "weak_S",
            1.0 + (2.0 * alpha - 1.0) * (3.0 - 2.0 * alpha) + gain,
        );
        put("corollary_Sf", base - 2.2 * d * d + 1.2 * d.powi(3));
        put("corollary_S", base - 1.2 * d * d + 1.2 * d.powi(3));
        if let Some(v) = vartheta {
            if alpha <= 1.0 / (1.0 + v) {
                put("conditional_Sf", base);
                put("conditional_S", base + d * d);
            }
        }
    }
    Ok(BoundReport {
        x,
        alpha,
        theta: used_theta,
        vartheta,
        coefficients: c,
        gain,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareRow {
    pub x: f64,
    pub alpha: f64,
    pub count_s: u64,
    pub count_sf: u64,
    /// `S · π² / (√x log²x)`.
    pub empirical_ratio: f64,
    pub report: BoundReport,
}

/// Empirical counts next to every bound family; no inequality is asserted.
pub fn compare_table(
    x_grid: &[f64],
    alpha_grid: &[f64],
    theta: Option<f64>,
    exec: Exec,
) -> Result<Vec<CompareRow>> {
    let mut rows = Vec::new();
    for &x in x_grid {
        for &alpha in alpha_grid {
            let window = CountWindow::from_f64(x, alpha)?;
            let counts = count_both(&window, exec)?;
            let report = lower_bounds(x, alpha, theta, None)?;
            rows.push(CompareRow {
                x,
                alpha,
                count_s: counts.s,
                count_sf: counts.sf,
                empirical_ratio: counts.s as f64 / scale(x),
                report,
            });
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f_theta_examples() {
        for th in [0.01, 0.1, 0.25, 0.49] {
            assert_eq!(F_theta(0.5, th).unwrap(), 0.0);
            let b = breakpoint(th);
            let left = 24.0 * b - 4.0 * (5.0 + 2.0 * th) * b * b - (7.0 - 2.0 * th);
            let right = 864.0 / (11.0 + 2.0 * th).powi(2) - (7.0 - 2.0 * th);
            assert!((left - right).abs() < 1e-12);
        }
        let v = F_theta(108.0 / 199.0, 1.0 / 36.0).unwrap();
        assert!((v - 0.124_467_956_757_545).abs() < 1e-12, "{v}");
        assert!(F_theta(0.4, 0.1).is_err() && F_theta(0.6, 0.5).is_err());
    }

    #[test]
    fn f_theta_positive_and_monotone() {
        for ti in 1..50 {
            let th = ti as f64 / 100.0;
            let mut prev = 0.0;
            for ai in 501..=1000 {
                let a = ai as f64 / 1000.0;
                let v = F_theta(a, th).unwrap();
                assert!(v > 0.0);
                if a <= breakpoint(th) {
                    assert!(v >= prev);
                }
                prev = v;
            }
        }
    }

    #[test]
    fn gain_examples() {
        assert_eq!(gain_term(0.5, 0.3).unwrap(), 0.0);
        let (a, b) = gain_forms(0.52, 1.0 / 36.0).unwrap();
        assert!((a - b).abs() < 1e-10);
        let g = gain_term(1.0, 0.4).unwrap();
        let want = dickman_rho(2.5).unwrap() * F_theta(1.0, 0.4).unwrap() / 6.0;
        assert!(g > 0.0 && (g - want).abs() < 1e-15);
    }

    #[test]
    fn optimal_theta_examples() {
        assert!(optimal_theta(6.0 / 11.0).is_err());
        assert!(optimal_theta(0.5).is_err());
        assert!((optimal_theta(0.51).unwrap() - 0.382_352_941_176_470_6).abs() < 1e-12);
        assert!((optimal_theta(35.0 / 69.0).unwrap() - (207.0 / 35.0 - 5.5)).abs() < 1e-12);
        for i in 1..40 {
            optimal_theta(0.5 + i as f64 * 1e-3).unwrap();
        }
    }

    #[test]
    fn corollary_premise() {
        for k in 1..=7 {
            let a = 0.5 + k as f64 * 1e-3;
            assert!(corollary_ratio(a).unwrap() > 0.3008, "{a}");
        }
        let end = corollary_ratio(35.0 / 69.0).unwrap();
        assert!((end - 0.300_084_8).abs() < 1e-6, "{end}");
    }

    #[test]
    fn report_examples() {
        let r = lower_bounds(1e6, 0.5, Some(0.3), None).unwrap();
        assert_eq!(r.coefficient("hooley_main"), Some(1.0));
        assert_eq!(r.coefficient("main_Sf"), Some(1.0));
        assert_eq!(r.coefficient("corollary_Sf"), Some(1.0));
        assert_eq!(
            lower_bounds(1e6, 1.2, None, None)
                .unwrap()
                .coefficient("corollary_S"),
            None
        );
        let r = lower_bounds(1e6, 0.51, None, Some(0.9)).unwrap();
        assert!((r.coefficient("corollary_Sf").unwrap() - 1.039_781_2).abs() < 1e-12);
        assert_eq!(r.coefficient("conditional_Sf"), Some(4.0 * 0.51 - 1.0));
        assert!(r.gain > 0.0);
        let r = lower_bounds(1e6, 0.8, None, Some(0.5)).unwrap();
        assert!(r.coefficient("conditional_S").is_none());
        let r = lower_bounds(1e6, 1.5, None, None).unwrap();
        assert!((r.coefficient("hooley_conjecture").unwrap() - (5.0 + 1.0 / 72.0)).abs() < 1e-12);
        assert!((conjecture_c(3.0) - 5.0 / 24.0).abs() < 1e-15);
    }

    #[test]
    fn weak_form_bookkeeping() {
        for i in 1..=500 {
            let a = 0.5 + i as f64 / 1000.0;
            let r = lower_bounds(1e5, a, Some(0.3), None).unwrap();
            let diff = r.coefficient("main_S").unwrap() - r.coefficient("weak_S").unwrap();
            assert!((diff - (a - 0.5).powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn compare_shape() {
        let rows = compare_table(&[1e3], &[0.5, 0.75], Some(0.3), Exec::Sequential).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!((rows[1].count_s, rows[1].count_sf), (308, 293));
        let r = &rows[0].report;
        assert_eq!(r.value("hooley_main"), r.value("main_Sf"));
    }
}
