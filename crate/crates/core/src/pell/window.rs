//! Counting windows: the exponent α, the range `D <= x`, and the
//! `(u, t)` parametrization `Y2(u, α) <= t <= Y3(u)`.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

/// A rational exponent `num/den` in lowest terms with `den > 0`.
///
/// Counting compares `η <= D^(1/2 + α)`; keeping α rational lets that
/// comparison be settled exactly as `η^q <= D^p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Alpha {
    num: i64,
    den: i64,
}

impl Alpha {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return domain("zero denominator");
        }
        let g = num.gcd(&den);
        let s = if den < 0 { -1 } else { 1 };
        Ok(Alpha {
            num: s * num / g,
            den: s * den / g,
        })
    }

    /// Exact rational value of the shortest decimal that round-trips to `v`.
    pub fn from_f64(v: f64) -> Result<Self> {
        if !v.is_finite() {
            return domain(format!("alpha must be finite, got {v}"));
        }
        format!("{v}").parse()
    }

    pub fn num(&self) -> i64 {
        self.num
    }

    pub fn den(&self) -> i64 {
        self.den
    }

    pub fn value(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// `α/2 − 1/4`, the exponent whose windows count squares of fundamental units.
    pub fn half_shift(&self) -> Result<Self> {
        Alpha::new(2 * self.num - self.den, 4 * self.den)
    }

    /// `1/2 + α` as a reduced fraction `(p, q)`.
    pub fn exponent(&self) -> (u64, u64) {
        let p = 2 * self.num + self.den;
        let q = 2 * self.den;
        let g = p.gcd(&q);
        ((p / g) as u64, (q / g) as u64)
    }

    fn is_positive(&self) -> bool {
        self.num > 0
    }
}

impl FromStr for Alpha {
    type Err = Error;

    /// Accepts `p/q`, plain decimals (`0.75`) and scientific notation (`75e-2`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid exponent `{s}`"));
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            return Alpha::new(p, q);
        }
        let (mantissa, exp10) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
            None => (s, 0),
        };
        let negative = mantissa.starts_with('-');
        let mantissa = mantissa.trim_start_matches(['-', '+']);
        let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let mut num: i64 = digits.parse().map_err(|_| bad())?;
        let scale = exp10 - frac_part.len() as i32;
        let mut den: i64 = 1;
        if scale >= 0 {
            num = num
                .checked_mul(10i64.checked_pow(scale as u32).ok_or_else(bad)?)
                .ok_or_else(bad)?;
        } else {
            den = 10i64.checked_pow((-scale) as u32).ok_or_else(bad)?;
        }
        Alpha::new(if negative { -num } else { num }, den)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value())
    }
}

/// The counting window `2 <= D <= x`, `η <= D^(1/2 + α)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountWindow {
    pub x: f64,
    pub alpha: Alpha,
}

impl CountWindow {
    pub fn new(x: f64, alpha: Alpha) -> Result<Self> {
        if !(x >= 2.0) || !x.is_finite() {
            return domain(format!("x must be >= 2, got {x}"));
        }
        if !alpha.is_positive() || alpha.num * 2 > alpha.den * 3 {
            return domain(format!("alpha must lie in (0, 3/2], got {alpha}"));
        }
        Ok(CountWindow { x, alpha })
    }

    /// Convenience constructor from a float exponent (decimal-exact).
    pub fn from_f64(x: f64, alpha: f64) -> Result<Self> {
        CountWindow::new(x, Alpha::from_f64(alpha)?)
    }

    /// Largest admissible `D`.
    pub fn d_max(&self) -> u64 {
        self.x.floor() as u64
    }

    pub fn x_alpha(&self) -> f64 {
        x_alpha_unchecked(self.x, self.alpha.value())
    }
}

fn x_alpha_unchecked(x: f64, alpha: f64) -> f64 {
    0.5 * (x.powf(alpha) - x.powf(-1.0 - alpha))
}

/// `X_α = (x^α − x^(−1−α)) / 2`, the largest `u` with a non-empty window.
pub fn x_alpha(x: f64, alpha: f64) -> Result<f64> {
    if !(x >= 2.0) {
        return domain(format!("x must be >= 2, got {x}"));
    }
    if !(alpha > 0.0) {
        return domain(format!("alpha must be > 0, got {alpha}"));
    }
    Ok(x_alpha_unchecked(x, alpha))
}

/// Maximum number of bisection steps in [`y1_solve`].
pub const BISECTION_STEPS: usize = 200;
/// Relative tolerance of the `Y1` solver.
pub const Y1_TOLERANCE: f64 = 1e-12;

/// Solve `u = (Y^α − Y^(−1−α)) / 2` for `Y >= 1` by bisection.
///
/// The right side is increasing in `Y`; the bracket starts at `[1, hint]`
/// and is doubled until it contains the root.
pub fn y1_solve(u: f64, alpha: f64, hint: f64) -> Result<f64> {
    if !(u > 0.0) || !(alpha > 0.0) {
        return domain(format!(
            "y1_solve needs u > 0 and alpha > 0, got u={u}, alpha={alpha}"
        ));
    }
    let f = |y: f64| x_alpha_unchecked(y, alpha) - u;
    let mut lo = 1.0f64;
    let mut hi = hint.max(2.0);
    let mut steps = 0;
    while f(hi) < 0.0 {
        lo = hi;
        hi *= 2.0;
        steps += 1;
        if steps > BISECTION_STEPS || !hi.is_finite() {
            return Err(Error::NonConvergence { steps, u, alpha });
        }
    }
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= Y1_TOLERANCE * hi {
            return Ok(0.5 * (lo + hi));
        }
    }
    Err(Error::NonConvergence {
        steps: BISECTION_STEPS,
        u,
        alpha,
    })
}

/// The `t`-range attached to one value of `u`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct YWindow {
    /// Smallest admissible `D` (real).
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
    /// Set when `Y1 > x`, i.e. no `D <= x` qualifies.
    pub empty: bool,
}

/// `Y2(u, α) = sqrt(Y1 u² + 1)` and `Y3(u) = sqrt(x u² + 1)`.
pub fn y_window(u: u64, x: f64, alpha: f64) -> Result<YWindow> {
    if u == 0 {
        return domain("u must be >= 1");
    }
    if !(x >= 2.0) || !(alpha > 0.0 && alpha <= 1.5) {
        return domain(format!("invalid window x={x}, alpha={alpha}"));
    }
    let uf = u as f64;
    let y1 = y1_solve(uf, alpha, x)?;
    let y3 = (x * uf * uf + 1.0).sqrt();
    let y2 = (y1 * uf * uf + 1.0).sqrt();
    let empty = y1 > x;
    Ok(YWindow {
        y1,
        y2: if empty { y3 } else { y2 },
        y3,
        empty,
    })
}
