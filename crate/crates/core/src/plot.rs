//! Minimal SVG scatter plots of eigenvalue index against value.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::toeplitz::parse_f64;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 50.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Writes one marker per `(x, y)` point with axis ranges taken from the data.
pub fn write_scatter_svg<W: Write>(points: &[(f64, f64)], title: &str, mut out: W) -> Result<()> {
    if points.is_empty() {
        return Err(Error::InvalidArgument("nothing to plot".into()));
    }
    let bounds = |sel: fn(&(f64, f64)) -> f64| {
        let lo = points.iter().map(sel).fold(f64::INFINITY, f64::min);
        let hi = points.iter().map(sel).fold(f64::NEG_INFINITY, f64::max);
        if hi > lo {
            (lo, hi)
        } else {
            (lo - 0.5, hi + 0.5)
        }
    };
    let (x0, x1) = bounds(|p| p.0);
    let (y0, y1) = bounds(|p| p.1);
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (WIDTH - 2.0 * MARGIN);
    let sy = |y: f64| HEIGHT - MARGIN - (y - y0) / (y1 - y0) * (HEIGHT - 2.0 * MARGIN);

    writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#)?;
    writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#)?;
    writeln!(out, r#"<text x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#, WIDTH / 2.0, escape(title))?;
    let (left, right, top, bottom) = (MARGIN, WIDTH - MARGIN, MARGIN, HEIGHT - MARGIN);
    writeln!(out, r#"<path d="M{left} {top} L{left} {bottom} L{right} {bottom}" stroke="black" fill="none"/>"#)?;
    for (y, anchor) in [(y0, bottom), (y1, top)] {
        writeln!(out, r#"<text x="{}" y="{}" text-anchor="end" font-size="11">{:.4}</text>"#, left - 4.0, anchor + 4.0, y)?;
    }
    for (x, anchor) in [(x0, left), (x1, right)] {
        writeln!(out, r#"<text x="{anchor}" y="{}" text-anchor="middle" font-size="11">{x}</text>"#, bottom + 16.0)?;
    }
    writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle" font-size="12">index</text>"#, WIDTH / 2.0, HEIGHT - 8.0)?;
    writeln!(out, r#"<g fill="steelblue">"#)?;
    for &(x, y) in points {
        writeln!(out, r#"<circle cx="{:.2}" cy="{:.2}" r="2"/>"#, sx(x), sy(y))?;
    }
    writeln!(out, "</g>\n</svg>")?;
    out.flush()?;
    Ok(())
}

/// Plots an `index,eigenvalue` CSV as written by the spectrum reports.
pub fn svg_from_eigenvalue_csv(csv_path: &Path, svg_path: &Path, title: &str) -> Result<()> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_path(csv_path)?;
    let mut points = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record?;
        if record.len() != 2 {
            return Err(Error::Parse(format!("line {}: expected 2 columns", line + 2)));
        }
        points.push((parse_f64(&record[0], line + 1)?, parse_f64(&record[1], line + 1)?));
    }
    write_scatter_svg(&points, title, BufWriter::new(File::create(svg_path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_marker_per_point() {
        let mut buf = Vec::new();
        write_scatter_svg(&[(0.0, 1.0), (1.0, 0.9), (2.0, 5.0)], "a < b", &mut buf).unwrap();
        let svg = String::from_utf8(buf).unwrap();
        assert_eq!(svg.matches("<circle").count(), 3);
        assert!(svg.contains("a &lt; b"));
        assert!(svg.trim_end().ends_with("</svg>"));
    }

    #[test]
    fn constant_data_still_plots() {
        let mut buf = Vec::new();
        write_scatter_svg(&[(0.0, 1.0), (1.0, 1.0)], "flat", &mut buf).unwrap();
        assert!(!String::from_utf8(buf).unwrap().contains("NaN"));
        assert!(write_scatter_svg(&[], "empty", Vec::new()).is_err());
    }
}
