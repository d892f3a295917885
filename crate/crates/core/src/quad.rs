//! One-dimensional quadrature.

/// Adaptive Simpson rule on `[a, b]` with absolute tolerance `tol`.
///
/// Intervals are halved until two successive refinements differ by less
/// than `15 tol` (Richardson criterion), with a depth limit of 50.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(&f, a, b, fa, fm, fb, whole, tol, 50)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || delta.abs() <= 1e-15 * (left + right).abs() {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

const GK_NODES: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const K15_WEIGHTS: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const G7_WEIGHTS: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// One Gauss–Kronrod 7/15 panel: `(K15 estimate, |K15 − G7|)`.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let f0 = f(c);
    let mut k = K15_WEIGHTS[7] * f0;
    let mut g = G7_WEIGHTS[3] * f0;
    for i in 0..7 {
        let x = h * GK_NODES[i];
        let s = f(c - x) + f(c + x);
        k += K15_WEIGHTS[i] * s;
        if i % 2 == 1 {
            g += G7_WEIGHTS[i / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Maximum number of panels used by [`gauss_kronrod`].
pub const GK_MAX_PANELS: usize = 4096;

/// Globally adaptive Gauss–Kronrod quadrature with absolute tolerance `tol`.
///
/// The panel with the largest error estimate is bisected until the summed
/// estimate falls below `tol`, the estimate reaches rounding level, or
/// [`GK_MAX_PANELS`] panels are in use.
pub fn gauss_kronrod<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let (v, e) = gk15(&f, a, b);
    let mut panels = vec![(a, b, v, e)];
    loop {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= tol || err <= 4.0 * f64::EPSILON * total.abs() || panels.len() >= GK_MAX_PANELS {
            return total;
        }
        let (i, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .unwrap();
        let (lo, hi, _, _) = panels.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        for (l, h) in [(lo, mid), (mid, hi)] {
            let (v, e) = gk15(&f, l, h);
            panels.push((l, h, v, e));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simpson_and_kronrod_agree_on_known_integrals() {
        let exact = 2.0;
        assert!(
            (adaptive_simpson(f64::sin, 0.0, std::f64::consts::PI, 1e-12) - exact).abs() < 1e-11
        );
        assert!((gauss_kronrod(f64::sin, 0.0, std::f64::consts::PI, 1e-13) - exact).abs() < 1e-12);
        let ln2 = std::f64::consts::LN_2;
        assert!((gauss_kronrod(|x| 1.0 / x, 1.0, 2.0, 1e-14) - ln2).abs() < 1e-13);
        assert!((adaptive_simpson(|x| 1.0 / x, 1.0, 2.0, 1e-13) - ln2).abs() < 1e-12);
    }

    #[test]
    fn kronrod_handles_flat_bump() {
        let bump = |t: f64| {
            if t.abs() < 1.0 {
                (-1.0 / (1.0 - t * t)).exp()
            } else {
                0.0
            }
        };
        let v = gauss_kronrod(bump, -1.0, 1.0, 1e-14);
        assert!((v - 0.443_993_816_168_079_4).abs() < 1e-12, "{v}");
    }
}
