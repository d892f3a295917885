use pellcount_core::bounds::{auto_theta, lower_bounds, BoundReport};
use pellcount_core::error::{Error, Result};
use pellcount_core::exec::{with_threads, Exec};
use pellcount_core::expsum::{
    bound_b, bound_general, bound_k, two_pole_lambda, vdc_partial_sum, ModContext, VdcPath,
};
use pellcount_core::pell::{
    count_both_cached, count_s_param_with, fundamental_solution, CountWindow, SolutionCache,
};
use pellcount_core::report::{
    bounds_csv, bounds_svg, count_csv, json_envelope, table_csv, CountRow,
};
use pellcount_core::smooth::{dickman_rho, psi_with};
use pellcount_core::verify::{verify_selected, Level, VerifyOptions, SUITES};
use serde_json::json;

use crate::{BoundsArgs, Cli, Command, CountArgs, Format, Method, SmoothKind, SumKind, VerifyArgs};

/// Sum name, argument summary, modulus, value, upper bound.
type SumRow = (String, String, u64, num_complex::Complex64, Option<f64>);

pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Output> {
    let work = || dispatch(cli, Exec::Parallel);
    match cli.threads {
        Some(t) => with_threads(t as usize, work),
        None => work(),
    }
}

fn dispatch(cli: &Cli, exec: Exec) -> Result<Output> {
    let format = cli.format;
    match &cli.command {
        Command::Count(a) => count(a, format.unwrap_or(Format::Csv), exec),
        Command::Solve { d } => solve(*d, format.unwrap_or(Format::Csv)),
        Command::Bounds(a) => bounds(a, format.unwrap_or(Format::Csv)),
        Command::Sums { kind } => sums(kind, format.unwrap_or(Format::Csv)),
        Command::Smooth { kind } => smooth(kind, format.unwrap_or(Format::Csv), exec),
        Command::Verify(a) => verify(a, format.unwrap_or(Format::Json), exec),
    }
}

fn count(a: &CountArgs, format: Format, exec: Exec) -> Result<Output> {
    let cache = match &a.cache {
        Some(p) => Some(SolutionCache::load_or_empty(p)?),
        None => None,
    };
    let mut rows = Vec::new();
    for &x in &a.x {
        for &alpha in &a.alpha {
            let w = CountWindow::from_f64(x, alpha)?;
            let (s, sf) = if a.method != Method::Param {
                let c = count_both_cached(&w, exec, cache.as_ref())?;
                (Some(c.s), Some(c.sf))
            } else {
                (None, None)
            };
            let s_param = if a.method != Method::Dloop {
                Some(count_s_param_with(&w, exec)?)
            } else {
                None
            };
            let agree = s.zip(s_param).map(|(p, q)| p == q);
            rows.push(CountRow {
                x,
                alpha,
                s,
                sf,
                s_param,
                agree,
            });
        }
    }
    if let (Some(c), Some(p)) = (&cache, &a.cache) {
        c.save(p)?;
    }
    let disagreements: Vec<String> = rows
        .iter()
        .filter(|r| r.agree == Some(false))
        .map(|r| format!("x={} alpha={}", r.x, r.alpha))
        .collect();
    let text = match format {
        Format::Csv => count_csv(&rows),
        Format::Json => {
            let params = json!({ "x": a.x, "alpha": a.alpha, "method": format!("{:?}", a.method).to_lowercase() });
            json_envelope("count", params, &rows, &disagreements) + "\n"
        }
    };
    Ok(Output {
        text,
        code: if disagreements.is_empty() { 0 } else { 1 },
    })
}

fn solve(d: u64, format: Format) -> Result<Output> {
    let sol = fundamental_solution(d, None)?
        .found()
        .ok_or_else(|| Error::SizeGuard(format!("no solution found for d = {d}")))?;
    Ok(Output::ok(match format {
        Format::Csv => table_csv(
            &["d", "t", "u"],
            &[vec![d.to_string(), sol.t.to_string(), sol.u.to_string()]],
        ),
        Format::Json => {
            let row = json!({ "d": d, "t": sol.t.to_string(), "u": sol.u.to_string() });
            json_envelope("solve", json!({ "d": d }), &[row], &[]) + "\n"
        }
    }))
}

fn bounds(a: &BoundsArgs, format: Format) -> Result<Output> {
    if a.alpha_step.is_nan() || a.alpha_step <= 0.0 || a.alpha_max < a.alpha_min {
        return Err(Error::Domain(
            "need alpha_step > 0 and alpha_max >= alpha_min".into(),
        ));
    }
    let theta = match a.theta.as_str() {
        "auto" => None,
        t => Some(
            t.parse::<f64>()
                .map_err(|_| Error::Parse(format!("theta `{t}`")))?,
        ),
    };
    let steps = ((a.alpha_max - a.alpha_min) / a.alpha_step + 1e-9).floor() as u64;
    let reports = (0..=steps)
        .map(|i| {
            let alpha = a.alpha_min + i as f64 * a.alpha_step;
            let alpha = (alpha * 1e12).round() / 1e12;
            let th = theta.or_else(|| (0.5..=1.0).contains(&alpha).then(|| auto_theta(alpha)));
            lower_bounds(a.x, alpha, th, a.vartheta)
        })
        .collect::<Result<Vec<BoundReport>>>()?;
    if let Some(p) = &a.svg {
        std::fs::write(p, bounds_svg(&reports))?;
    }
    Ok(Output::ok(match format {
        Format::Csv => bounds_csv(&reports),
        Format::Json => {
            let params = json!({
                "alpha_min": a.alpha_min, "alpha_max": a.alpha_max, "alpha_step": a.alpha_step,
                "theta": a.theta, "vartheta": a.vartheta, "x": a.x,
            });
            json_envelope("bounds", params, &reports, &[]) + "\n"
        }
    }))
}

fn sums(kind: &SumKind, format: Format) -> Result<Output> {
    let need_positive = |q: u64| -> Result<()> {
        if q == 0 {
            return Err(Error::Domain("q must be positive".into()));
        }
        Ok(())
    };
    let mut rows: Vec<SumRow> = Vec::new();
    match *kind {
        SumKind::Gauss { h, q } => {
            need_positive(q)?;
            rows.push((
                "T".into(),
                format!("h={h}"),
                q,
                ModContext::new(q).gauss_t(h),
                None,
            ));
        }
        SumKind::Kloosterman { m, n, q } => {
            need_positive(q)?;
            let b = if q % 2 == 1 {
                Some(bound_k(m, n, q)?)
            } else {
                None
            };
            rows.push((
                "K".into(),
                format!("m={m} n={n}"),
                q,
                ModContext::new(q).kloos_k(m, n),
                b,
            ));
        }
        SumKind::B { m, n, l, u, q } => {
            need_positive(q)?;
            let ctx = ModContext::new(q);
            let args = format!("m={m} n={n} l={l} u={u}");
            let bb = if q % 2 == 1 {
                Some(bound_b(m, n, l, u, q)?)
            } else {
                None
            };
            rows.push(("B".into(), args.clone(), q, ctx.b_sum(m, n, l, u), bb));
            let lam = two_pole_lambda(m, n, l, u);
            let bg = bound_general(&lam, q).ok();
            rows.push(("Sigma".into(), args, q, ctx.rational_exp_sum(&lam), bg));
        }
        SumKind::Vdc { r, u1, u0, h } => {
            let args = format!("R={r} u1={u1} u0={u0} h={h}");
            let q = u1 * u1;
            rows.push((
                "vdc_direct".into(),
                args.clone(),
                q,
                vdc_partial_sum(r, u1, h, VdcPath::Direct)?,
                None,
            ));
            rows.push((
                "vdc_shifted".into(),
                args,
                q,
                vdc_partial_sum(r, u1, h, VdcPath::Shifted { u0 })?,
                None,
            ));
        }
    }
    Ok(Output::ok(match format {
        Format::Csv => {
            let cells: Vec<Vec<String>> = rows
                .iter()
                .map(|(k, a, q, z, b)| {
                    vec![
                        k.clone(),
                        a.clone(),
                        q.to_string(),
                        format!("{:.12}", z.re),
                        format!("{:.12}", z.im),
                        format!("{:.12}", z.norm()),
                        b.map(|b| format!("{b:.12}")).unwrap_or_default(),
                    ]
                })
                .collect();
            table_csv(&["sum", "args", "q", "re", "im", "abs", "bound"], &cells)
        }
        Format::Json => {
            let js: Vec<_> = rows
                .iter()
                .map(|(k, a, q, z, b)| json!({ "sum": k, "args": a, "q": q, "re": z.re, "im": z.im, "abs": z.norm(), "bound": b }))
                .collect();
            json_envelope("sums", json!({}), &js, &[]) + "\n"
        }
    }))
}

fn smooth(kind: &SmoothKind, format: Format, exec: Exec) -> Result<Output> {
    let (header, row, params) = match *kind {
        SmoothKind::Rho { u } => {
            let r = dickman_rho(u)?;
            (
                vec!["u", "rho"],
                vec![u.to_string(), format!("{r:.12e}")],
                json!({ "u": u, "rho": r }),
            )
        }
        SmoothKind::Psi { x, y } => {
            let count = psi_with(x, y, exec)?;
            let pred = x * dickman_rho(x.ln() / y.ln())?;
            (
                vec!["x", "y", "psi", "rho_prediction"],
                vec![
                    x.to_string(),
                    y.to_string(),
                    count.to_string(),
                    format!("{pred:.6}"),
                ],
                json!({ "x": x, "y": y, "psi": count, "rho_prediction": pred }),
            )
        }
    };
    Ok(Output::ok(match format {
        Format::Csv => table_csv(&header, &[row]),
        Format::Json => json_envelope("smooth", json!({}), &[params], &[]) + "\n",
    }))
}

fn verify(a: &VerifyArgs, format: Format, exec: Exec) -> Result<Output> {
    let level: Level = a.level.parse()?;
    let mut opts = VerifyOptions::new(level, a.seed);
    opts.inject_fault = a.inject_fault;
    let names: Vec<String> = if a.suites.is_empty() {
        SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        a.suites.clone()
    };
    let report = verify_selected(&opts, exec, &names)?;
    let text = match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => {
            let opt = |v: Option<f64>| v.map(|v| format!("{v:e}")).unwrap_or_default();
            let cells: Vec<Vec<String>> = report
                .suites
                .iter()
                .map(|s| {
                    vec![
                        s.suite.clone(),
                        s.points.to_string(),
                        opt(s.max_ratio),
                        opt(s.max_deviation),
                        s.failures.len().to_string(),
                        if s.passed() { "PASS" } else { "FAIL" }.to_string(),
                    ]
                })
                .collect();
            table_csv(
                &[
                    "suite",
                    "points",
                    "max_ratio",
                    "max_deviation",
                    "failures",
                    "status",
                ],
                &cells,
            )
        }
    };
    Ok(Output {
        text,
        code: if report.passed() { 0 } else { 1 },
    })
}
