//! Emission of result tables as CSV, a JSON envelope, and a standalone SVG
//! line chart of the bound coefficients against `α`.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::{json, Value};

use crate::bounds::BoundReport;
use crate::verify::REPORT_VERSION;

/// CSV column names paired with the bound family stored under each.
pub const BOUND_COLUMNS: [(&str, &str); 11] = [
    ("hooley_main", "hooley_main"),
    ("conjecture", "hooley_conjecture"),
    ("fouvry_Sf", "fouvry_Sf"),
    ("fouvry_S", "fouvry_S"),
    ("cond_Sf", "conditional_Sf"),
    ("cond_S", "conditional_S"),
    ("main_Sf", "main_Sf"),
    ("main_S", "main_S"),
    ("weak_S", "weak_S"),
    ("corollary_Sf", "corollary_Sf"),
    ("corollary_S", "corollary_S"),
];

fn cell(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.12}")).unwrap_or_default()
}

pub fn bounds_csv(reports: &[BoundReport]) -> String {
    let mut out = String::from("alpha,theta");
    for (col, _) in BOUND_COLUMNS {
        out.push(',');
        out.push_str(col);
    }
    out.push_str(",gain\n");
    for r in reports {
        let _ = write!(out, "{},{}", r.alpha, cell(r.theta));
        for (_, family) in BOUND_COLUMNS {
            let _ = write!(out, ",{}", cell(r.coefficient(family)));
        }
        let _ = writeln!(out, ",{}", cell(Some(r.gain)));
    }
    out
}

/// One line of the `count` table.
#[derive(Debug, Clone, Serialize)]
pub struct CountRow {
    pub x: f64,
    pub alpha: f64,
    #[serde(rename = "S")]
    pub s: Option<u64>,
    #[serde(rename = "Sf")]
    pub sf: Option<u64>,
    #[serde(rename = "S_param")]
    pub s_param: Option<u64>,
    /// Present when both methods ran.
    pub agree: Option<bool>,
}

pub fn count_csv(rows: &[CountRow]) -> String {
    let opt = |v: Option<u64>| v.map(|v| v.to_string()).unwrap_or_default();
    let mut out = String::from("x,alpha,S,Sf,S_param,agree\n");
    for r in rows {
        let agree = r.agree.map(|a| a.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{agree}",
            r.x,
            r.alpha,
            opt(r.s),
            opt(r.sf),
            opt(r.s_param)
        );
    }
    out
}

/// Generic CSV from a header and pre-formatted cells.
pub fn table_csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        out.push_str(&r.join(","));
        out.push('\n');
    }
    out
}

/// `{version, command, params, rows, failures}`.
pub fn json_envelope<R: Serialize>(
    command: &str,
    params: Value,
    rows: &R,
    failures: &[String],
) -> String {
    let v = json!({
        "version": REPORT_VERSION,
        "command": command,
        "params": params,
        "rows": rows,
        "failures": failures,
    });
    serde_json::to_string_pretty(&v).expect("rows serialize")
}

const PALETTE: [&str; 11] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#393b79",
];

/// Line chart of every family present in `reports`, coefficient against `α`.
pub fn bounds_svg(reports: &[BoundReport]) -> String {
    let (w, h, margin) = (760.0, 480.0, 60.0);
    let legend_w = 150.0;
    let plot_w = w - 2.0 * margin - legend_w;
    let plot_h = h - 2.0 * margin;

    let points = |family: &str| -> Vec<(f64, f64)> {
        reports
            .iter()
            .filter_map(|r| r.coefficient(family).map(|c| (r.alpha, c)))
            .collect()
    };
    let series: Vec<(&str, Vec<(f64, f64)>)> = BOUND_COLUMNS
        .iter()
        .map(|&(col, fam)| (col, points(fam)))
        .filter(|(_, p)| !p.is_empty())
        .collect();

    let all = series.iter().flat_map(|(_, p)| p.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if series.is_empty() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 < 1e-12 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 < 1e-12 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| margin + (x - x0) / (x1 - x0) * plot_w;
    let sy = |y: f64| h - margin - (y - y0) / (y1 - y0) * plot_h;

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<rect x="{margin}" y="{margin}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    );
    for i in 0..=4 {
        let t = i as f64 / 4.0;
        let (xv, yv) = (x0 + t * (x1 - x0), y0 + t * (y1 - y0));
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{xv:.3}</text>"#,
            sx(xv),
            h - margin + 18.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{yv:.3}</text>"#,
            margin - 6.0,
            sy(yv) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">alpha</text>"#,
        margin + plot_w / 2.0,
        h - 15.0
    );
    let _ = writeln!(
        s,
        r#"<text x="15" y="{:.1}" transform="rotate(-90 15 {:.1})" text-anchor="middle">coefficient of sqrt(x) log^2 x / pi^2</text>"#,
        h / 2.0,
        h / 2.0
    );
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        let _ = writeln!(
            s,
            r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#,
            path.join(" ")
        );
        let ly = margin + 10.0 + 18.0 * i as f64;
        let lx = w - margin - legend_w + 20.0;
        let _ = writeln!(
            s,
            r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/><text x="{}" y="{}">{name}</text>"#,
            lx + 20.0,
            lx + 26.0,
            ly + 4.0
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::lower_bounds;

    #[test]
    fn bounds_header_and_blanks() {
        let reps = vec![
            lower_bounds(1e6, 0.25, None, None).unwrap(),
            lower_bounds(1e6, 0.75, Some(0.3), Some(0.1)).unwrap(),
        ];
        let csv = bounds_csv(&reps);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "alpha,theta,hooley_main,conjecture,fouvry_Sf,fouvry_S,cond_Sf,cond_S,main_Sf,main_S,weak_S,corollary_Sf,corollary_S,gain"
        );
        let first: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(first.len(), 14);
        assert_eq!(first[0], "0.25");
        assert_eq!(first[1], "");
        assert_eq!(first[2], "0.250000000000");
        assert!(first[4..13].iter().all(|c| c.is_empty()));
        let second: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert!(second.iter().all(|c| !c.is_empty()));
    }

    #[test]
    fn count_table() {
        let rows = [CountRow {
            x: 1e5,
            alpha: 0.6,
            s: Some(6086),
            sf: Some(10),
            s_param: Some(6086),
            agree: Some(true),
        }];
        assert_eq!(
            count_csv(&rows),
            "x,alpha,S,Sf,S_param,agree\n100000,0.6,6086,10,6086,true\n"
        );
        let j: Value =
            serde_json::from_str(&json_envelope("count", json!({"x": 1e5}), &rows, &[])).unwrap();
        assert_eq!(j["rows"][0]["S_param"], 6086);
        assert_eq!(j["command"], "count");
    }

    #[test]
    fn svg_is_well_formed() {
        let reps: Vec<_> = (0..=10)
            .map(|i| lower_bounds(1e6, 0.5 + i as f64 / 20.0, None, None).unwrap())
            .collect();
        let svg = bounds_svg(&reps);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert_eq!(svg.matches("<polyline").count(), 9);
        assert!(bounds_svg(&[]).contains("</svg>"));
    }
}
