//! Plain CSV files for curves and sampled fields.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{DiscreteCurve, Vec3};

/// Formats with 17 significant digits, enough to round-trip any `f64`.
pub fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn curve_to_csv(curve: &DiscreteCurve) -> String {
    let mut out = String::from("x,y,z\n");
    for p in curve.nodes() {
        writeln!(out, "{},{},{}", fmt_f64(p.x), fmt_f64(p.y), fmt_f64(p.z)).unwrap();
    }
    out
}

pub fn write_curve_csv(path: impl AsRef<Path>, curve: &DiscreteCurve) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, curve_to_csv(curve)).map_err(|e| Error::io(path, e))
}

/// Parses `x,y,z` rows (header required). The polygon is closed implicitly.
pub fn parse_curve_csv(text: &str) -> Result<DiscreteCurve> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    match lines.next() {
        Some((_, header)) if header.replace(' ', "") == "x,y,z" => {}
        _ => return Err(Error::InvalidCurve("curve file must start with the header `x,y,z`".into())),
    }
    let mut nodes = Vec::new();
    for (n, line) in lines {
        let vals: Vec<f64> = line
            .split(',')
            .map(|s| s.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidCurve(format!("line {}: {e}", n + 1)))?;
        if vals.len() != 3 {
            return Err(Error::InvalidCurve(format!(
                "line {}: expected 3 columns, got {}",
                n + 1,
                vals.len()
            )));
        }
        nodes.push(Vec3::new(vals[0], vals[1], vals[2]));
    }
    DiscreteCurve::new(nodes)
}

pub fn read_curve_csv(path: impl AsRef<Path>) -> Result<DiscreteCurve> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_curve_csv(&text).map_err(|e| match e {
        Error::InvalidCurve(m) => Error::InvalidCurve(format!("{}: {m}", path.display())),
        other => other,
    })
}
