//! Self-contained SVG emitter for BER waterfall plots.
//!
//! Log-scale BER against Eb/No in dB, simulated curves with markers plus
//! dashed theory overlays, one legend entry per curve. Zero (or sub-floor)
//! BER points are drawn at the floor of 1e-6, which is stated on the plot.

use super::BerCurve;
use crate::analysis::TheoryCurve;
use crate::error::{Error, Result};
use std::fmt::Write as _;
use std::path::Path;

/// Log-plot floor for zero BER points.
pub const BER_FLOOR: f64 = 1e-6;

const WIDTH: f64 = 880.0;
const HEIGHT: f64 = 600.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 250.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 70.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

struct Axes {
    x_min: f64,
    x_max: f64,
}

impl Axes {
    fn x(&self, v: f64) -> f64 {
        let span = (self.x_max - self.x_min).max(1e-9);
        MARGIN_LEFT + (v - self.x_min) / span * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn y(&self, ber: f64) -> f64 {
        let v = ber.clamp(BER_FLOOR, 1.0).log10(); // [-6, 0]
        let frac = -v / 6.0; // 0 at BER 1, 1 at the floor
        MARGIN_TOP + frac * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the plot as an SVG document string.
pub fn plot_string(curves: &[BerCurve], theory: &[TheoryCurve]) -> String {
    let xs: Vec<f64> = curves
        .iter()
        .flat_map(|c| c.points.iter().map(|p| p.ebno_db))
        .chain(theory.iter().flat_map(|t| t.points.iter().map(|p| p.0)))
        .filter(|v| v.is_finite())
        .collect();
    let x_min = xs.iter().copied().fold(f64::INFINITY, f64::min);
    let x_max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let axes = if x_min.is_finite() && x_max > x_min {
        Axes { x_min, x_max }
    } else {
        let center = if x_min.is_finite() { x_min } else { 0.0 };
        Axes {
            x_min: center - 1.0,
            x_max: center + 1.0,
        }
    };

    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<?xml version="1.0" encoding="UTF-8"?>
<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="28" font-family="sans-serif" font-size="18" text-anchor="middle">Bit error rate vs Eb/No</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0
    );

    // Horizontal decade gridlines and y labels.
    for decade in 0..=6 {
        let ber = 10f64.powi(-decade);
        let y = axes.y(ber);
        let _ = writeln!(
            svg,
            r##"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="#dddddd" stroke-width="1"/>"##,
            axes.x(axes.x_min),
            axes.x(axes.x_max),
        );
        let label = if decade == 0 {
            "1".to_string()
        } else {
            format!("1e-{decade}")
        };
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="end">{label}</text>"#,
            MARGIN_LEFT - 8.0,
            y + 4.0,
        );
    }

    // Vertical gridlines at each distinct finite x.
    let mut ticks: Vec<f64> = xs.clone();
    ticks.sort_by(f64::total_cmp);
    ticks.dedup_by(|a, b| (*a - *b).abs() < 1e-9);
    for &t in &ticks {
        let x = axes.x(t);
        let _ = writeln!(
            svg,
            r##"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#eeeeee" stroke-width="1"/>"##,
            MARGIN_TOP,
            HEIGHT - MARGIN_BOTTOM,
        );
        let _ = writeln!(
            svg,
            r#"<text x="{x:.2}" y="{:.2}" font-family="sans-serif" font-size="12" text-anchor="middle">{t}</text>"#,
            HEIGHT - MARGIN_BOTTOM + 18.0,
        );
    }

    // Frame and axis titles.
    let _ = writeln!(
        svg,
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{:.2}" height="{:.2}" fill="none" stroke="black" stroke-width="1"/>"#,
        WIDTH - MARGIN_LEFT - MARGIN_RIGHT,
        HEIGHT - MARGIN_TOP - MARGIN_BOTTOM,
    );
    let _ = writeln!(
        svg,
        r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle">Eb/No (dB)</text>"#,
        (MARGIN_LEFT + WIDTH - MARGIN_RIGHT) / 2.0,
        HEIGHT - 18.0,
    );
    let _ = writeln!(
        svg,
        r#"<text x="22" y="{:.2}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 22 {:.2})">BER</text>"#,
        HEIGHT / 2.0,
        HEIGHT / 2.0,
    );

    let mut legend: Vec<(String, &str, bool)> = Vec::new();

    // Theory overlays first so simulated curves draw on top.
    for (i, t) in theory.iter().enumerate() {
        let color = PALETTE[(curves.len() + i) % PALETTE.len()];
        let pts: Vec<String> = t
            .points
            .iter()
            .filter(|p| p.0.is_finite())
            .map(|p| format!("{:.2},{:.2}", axes.x(p.0), axes.y(p.1)))
            .collect();
        if !pts.is_empty() {
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="1.5" stroke-dasharray="6 4"/>"#,
                pts.join(" "),
            );
        }
        legend.push((t.label.clone(), color, true));
    }

    for (i, c) in curves.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let finite: Vec<_> = c.points.iter().filter(|p| p.ebno_db.is_finite()).collect();
        let pts: Vec<String> = finite
            .iter()
            .map(|p| format!("{:.2},{:.2}", axes.x(p.ebno_db), axes.y(p.ber)))
            .collect();
        if !pts.is_empty() {
            let _ = writeln!(
                svg,
                r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
                pts.join(" "),
            );
        }
        for p in finite {
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                axes.x(p.ebno_db),
                axes.y(p.ber),
            );
        }
        legend.push((c.label(), color, false));
    }

    // Legend, one entry per curve.
    let lx = WIDTH - MARGIN_RIGHT + 20.0;
    for (i, (label, color, dashed)) in legend.iter().enumerate() {
        let ly = MARGIN_TOP + 14.0 + 22.0 * i as f64;
        let dash = if *dashed {
            r#" stroke-dasharray="6 4""#
        } else {
            ""
        };
        let _ = writeln!(
            svg,
            r#"<line x1="{lx:.2}" y1="{ly:.2}" x2="{:.2}" y2="{ly:.2}" stroke="{color}" stroke-width="2"{dash}/>"#,
            lx + 28.0,
        );
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" font-family="sans-serif" font-size="13">{}</text>"#,
            lx + 36.0,
            ly + 4.0,
            escape(label),
        );
    }

    let _ = writeln!(
        svg,
        r##"<text x="{MARGIN_LEFT}" y="{:.2}" font-family="sans-serif" font-size="11" fill="#555555">BER = 0 points are drawn at the 1e-6 floor.</text>"##,
        HEIGHT - 4.0,
    );
    svg.push_str("</svg>\n");
    svg
}

/// Writes the SVG plot to `path`.
pub fn emit_plot(curves: &[BerCurve], theory: &[TheoryCurve], path: &Path) -> Result<()> {
    std::fs::write(path, plot_string(curves, theory)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
