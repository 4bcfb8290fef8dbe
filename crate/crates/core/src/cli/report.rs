use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::experiments::{Axis, ConvergenceReport, SpeedupReport};

use super::config::Format;

/// C `%.{digits}g`: shortest of fixed and scientific notation with
/// `digits` significant digits and trailing zeros removed.
pub fn format_g(x: f64, digits: usize) -> String {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { "0".into() } else { format!("{x}") };
    }
    let p = digits.max(1);
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= p as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", strip_zeros(mantissa), exp.abs())
    } else {
        let decimals = (p as i32 - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

/// C `%.{digits-1}e`: `digits` significant digits, exponent of at least two digits.
pub fn format_e(x: f64, digits: usize) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits.max(1) - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    let sign = if exp < 0 { '-' } else { '+' };
    format!("{mantissa}e{sign}{:02}", exp.abs())
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `2^-k` for exact negative powers of two, six significant digits otherwise.
fn step_label(step: f64) -> String {
    let k = -step.log2();
    if k.fract() == 0.0 && 2f64.powi(-(k as i32)) == step && k > 0.0 {
        format!("2^-{}", k as i32)
    } else {
        format_g(step, 6)
    }
}

fn order_cell(order: Option<f64>) -> String {
    order.map_or_else(String::new, |o| format!("{o:.2}"))
}

pub const CSV_HEADER: &str = "level,step,err_l2,order,seconds";

/// CSV body of a convergence report; `seconds` is blank unless `timing`.
pub fn report_csv(report: &ConvergenceReport, timing: bool) -> Result<String> {
    if report.rows.is_empty() {
        return Err(Error::Usage("cannot emit an empty report".into()));
    }
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in &report.rows {
        let seconds = if timing { format_g(r.seconds, 17) } else { String::new() };
        let err = if r.err.is_nan() { String::new() } else { format_g(r.err, 17) };
        let _ = writeln!(s, "{},{},{err},{},{seconds}", r.level, format_g(r.step, 17), order_cell(r.order));
    }
    Ok(s)
}

/// Markdown table `step | Err | Order` under a one-line caption.
pub fn report_markdown(report: &ConvergenceReport, timing: bool) -> Result<String> {
    if report.rows.is_empty() {
        return Err(Error::Usage("cannot emit an empty report".into()));
    }
    let (step, fixed) = match report.axis {
        Axis::Time => ("τ", format!("M = {}", report.fixed)),
        Axis::Space => ("Δx", format!("N = {}", report.fixed)),
    };
    let mut s = format!(
        "**{}, α = {}, {}, {} axis, {fixed}, {}**\n\n",
        report.kind.label(),
        report.order_label,
        report.problem,
        report.axis,
        report.probe
    );
    let _ = writeln!(s, "| {step} | Err | Order |{}", if timing { " CPU (s) |" } else { "" });
    let _ = writeln!(s, "|---|---|---|{}", if timing { "---|" } else { "" });
    for r in &report.rows {
        let order = r.order.map_or_else(|| "-".to_string(), |o| format!("{o:.2}"));
        let err = if r.err.is_nan() { "-".to_string() } else { format_e(r.err, 6) };
        let _ = write!(s, "| {} | {err} | {order} |", step_label(r.step));
        if timing {
            let _ = write!(s, " {} |", format_g(r.seconds, 6));
        }
        s.push('\n');
    }
    Ok(s)
}

pub fn render_report(report: &ConvergenceReport, format: Format, timing: bool) -> Result<String> {
    match format {
        Format::Csv => report_csv(report, timing),
        Format::Markdown => report_markdown(report, timing),
    }
}

/// Timing table of a direct/fast comparison.
pub fn speedup_table(report: &SpeedupReport, format: Format) -> String {
    let header = [
        "levels",
        "direct_seconds",
        "fast_seconds",
        "ratio",
        "direct_history_seconds",
        "fast_history_seconds",
        "esa_terms",
        "max_diff",
    ];
    let rows: Vec<Vec<String>> = report
        .rows
        .iter()
        .map(|r| {
            let digits = if format == Format::Csv { 17 } else { 6 };
            vec![
                r.levels.to_string(),
                format_g(r.direct_seconds, digits),
                format_g(r.fast_seconds, digits),
                format_g(r.ratio, digits),
                format_g(r.direct_history_seconds, digits),
                format_g(r.fast_history_seconds, digits),
                r.esa_terms.to_string(),
                format_g(r.max_diff, digits),
            ]
        })
        .collect();
    table(&header, &rows, format)
}

/// Generic table in either format.
pub fn table(header: &[&str], rows: &[Vec<String>], format: Format) -> String {
    let mut s = String::new();
    match format {
        Format::Csv => {
            s.push_str(&header.join(","));
            s.push('\n');
            for r in rows {
                s.push_str(&r.join(","));
                s.push('\n');
            }
        }
        Format::Markdown => {
            let _ = writeln!(s, "| {} |", header.join(" | "));
            let _ = writeln!(s, "|{}", "---|".repeat(header.len()));
            for r in rows {
                let _ = writeln!(s, "| {} |", r.join(" | "));
            }
        }
    }
    s
}

/// Writes `body` to `path`, or to stdout when `path` is `None`.
pub fn emit(body: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(Error::from),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())?;
            out.flush()?;
            Ok(())
        }
    }
}
