//! Text output: numbers, PGM rasters and CSV verification reports.

use std::fmt::Write as _;

use crate::raster::AttractorRaster;

/// Formats `x` with `digits` significant digits in the style of C's `%g`.
pub fn sig(x: f64, digits: usize) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let digits = digits.max(1);
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// The CLI's standard numeric format (12 significant digits).
pub fn num(x: f64) -> String {
    sig(x, 12)
}

/// ASCII PGM (`P2`, maxval 255): occupied cells black (0), empty white (255).
/// The first emitted row is the top of the box (largest second coordinate);
/// 1D rasters are one row high.
pub fn to_pgm(raster: &AttractorRaster) -> String {
    let (w, h) = (raster.resolution(), raster.height());
    let mut out = String::with_capacity(w * h * 4 + 32);
    let _ = write!(out, "P2\n{w} {h}\n255\n");
    for y in (0..h).rev() {
        let row: Vec<&str> = raster
            .row(y)
            .iter()
            .map(|&b| if b { "0" } else { "255" })
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// One row of a verification report.
#[derive(Debug, Clone, PartialEq)]
pub struct CaseResult {
    pub case: String,
    pub passed: bool,
    pub measured: f64,
    pub bound: f64,
    pub detail: String,
}

impl CaseResult {
    pub fn new(case: impl Into<String>, passed: bool, measured: f64, bound: f64, detail: impl Into<String>) -> Self {
        Self {
            case: case.into(),
            passed,
            measured,
            bound,
            detail: detail.into(),
        }
    }

    pub fn status(&self) -> &'static str {
        if self.passed {
            "pass"
        } else {
            "fail"
        }
    }
}

pub const CSV_HEADER: &str = "case,status,measured,bound,detail";

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// CSV report sorted by case id.
pub fn to_csv(results: &[CaseResult]) -> String {
    let mut rows: Vec<&CaseResult> = results.iter().collect();
    rows.sort_by(|a, b| a.case.cmp(&b.case));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            csv_field(&r.case),
            r.status(),
            num(r.measured),
            num(r.bound),
            csv_field(&r.detail)
        );
    }
    out
}
