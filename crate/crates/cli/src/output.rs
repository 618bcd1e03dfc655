//! Deterministic artifact writers. Complex numbers serialize as [re, im]
//! pairs in JSON and as paired `<name>_re`, `<name>_im` columns with 17
//! significant digits in CSV. The SVG writer is a pure emitter of real
//! projections.

use pondar::poly::C64;
use std::io::Write;

pub fn c2(z: C64) -> [f64; 2] {
    [z.re, z.im]
}

pub fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Csv {
    lines: Vec<String>,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Csv { lines: vec![header.join(",")] }
    }

    pub fn row(&mut self, fields: &[String]) {
        self.lines.push(fields.join(","));
    }

    pub fn finish(self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

/// Scatter/polyline SVG of points in the real plane (Re, Im), with a fixed
/// viewport computed from the data.
pub fn svg_scatter(series: &[(&str, Vec<(f64, f64)>)]) -> String {
    let mut min_x = f64::INFINITY;
    let mut max_x = f64::NEG_INFINITY;
    let mut min_y = f64::INFINITY;
    let mut max_y = f64::NEG_INFINITY;
    for (_, pts) in series {
        for &(x, y) in pts {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
    }
    if !min_x.is_finite() {
        min_x = -1.0;
        max_x = 1.0;
        min_y = -1.0;
        max_y = 1.0;
    }
    let pad_x = 0.05 * (max_x - min_x).max(1e-9);
    let pad_y = 0.05 * (max_y - min_y).max(1e-9);
    let (x0, x1) = (min_x - pad_x, max_x + pad_x);
    let (y0, y1) = (min_y - pad_y, max_y + pad_y);
    let w = 640.0;
    let h = 480.0;
    let sx = |x: f64| (x - x0) / (x1 - x0) * w;
    let sy = |y: f64| h - (y - y0) / (y1 - y0) * h;
    let palette = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"];
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    ));
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = palette[i % palette.len()];
        out.push_str(&format!("  <g fill=\"{color}\" data-series=\"{name}\">\n"));
        for &(x, y) in pts {
            out.push_str(&format!(
                "    <circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"2.2\"/>\n",
                sx(x),
                sy(y)
            ));
        }
        out.push_str("  </g>\n");
    }
    out.push_str("</svg>\n");
    out
}

pub fn emit(path: &Option<std::path::PathBuf>, payload: &str) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, payload),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(payload.as_bytes())
        }
    }
}
