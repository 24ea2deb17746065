//! Deterministic SVG scatter plots of 2D embeddings.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::Matrix;

/// Ten-color categorical palette; class `c` uses entry `c % 10`.
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];
pub const MARGIN_FRACTION: f64 = 0.05;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotOptions {
    pub width: u32,
    pub height: u32,
    pub radius: f64,
    pub color_by_label: bool,
    pub title: Option<String>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self {
            width: 600,
            height: 600,
            radius: 2.0,
            color_by_label: true,
            title: None,
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// One `<circle>` per row. Each axis is scaled independently to the canvas
/// with a 5% margin on every side; y grows upward.
pub fn render_svg(points: &Matrix, labels: Option<&[usize]>, opts: &PlotOptions) -> Result<String> {
    if points.cols() != 2 {
        return Err(Error::invalid(format!("scatter plots need 2 columns, got {}", points.cols())));
    }
    if points.rows() == 0 {
        return Err(Error::invalid("nothing to plot: embedding is empty"));
    }
    if !points.is_finite() {
        return Err(Error::invalid("embedding contains non-finite values"));
    }
    if let Some(l) = labels {
        if l.len() != points.rows() {
            return Err(Error::invalid(format!("{} labels for {} points", l.len(), points.rows())));
        }
    }
    if opts.width == 0 || opts.height == 0 || !(opts.radius > 0.0) {
        return Err(Error::invalid("plot size and point radius must be positive"));
    }
    let (w, h) = (f64::from(opts.width), f64::from(opts.height));
    let axis = |j: usize, extent: f64| {
        let col = points.column(j);
        let lo = col.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = col.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let span = if hi > lo { hi - lo } else { 1.0 };
        let inner = extent * (1.0 - 2.0 * MARGIN_FRACTION);
        let mid = if hi > lo { lo } else { lo - 0.5 };
        move |v: f64| extent * MARGIN_FRACTION + (v - mid) / span * inner
    };
    let sx = axis(0, w);
    let sy = axis(1, h);

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        opts.width, opts.height, opts.width, opts.height
    );
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    if let Some(t) = &opts.title {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
            w / 2.0,
            h * MARGIN_FRACTION * 0.7,
            escape(t)
        );
    }
    for (i, row) in points.iter_rows().enumerate() {
        let color = match (labels, opts.color_by_label) {
            (Some(l), true) => PALETTE[l[i] % PALETTE.len()],
            _ => PALETTE[0],
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{:.2}" r="{}" fill="{}"/>"#,
            sx(row[0]),
            h - sy(row[1]),
            opts.radius,
            color
        );
    }
    out.push_str("</svg>\n");
    Ok(out)
}
