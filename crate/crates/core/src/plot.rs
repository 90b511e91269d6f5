//! Deterministic SVG rendering of the cumulative difference-plot and the JSON report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::bootstrap::{band_bounds, ConfidenceBand};
use crate::error::{Error, Result};
use crate::measures::DominanceVerdict;
use crate::quantile::{DiffCurve, SignInterval};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSpec {
    pub title: String,
    pub label_a: String,
    pub label_b: String,
    pub width: u32,
    pub height: u32,
    /// Significance level quoted in the band legend.
    pub alpha: Option<f64>,
    pub show_triangle: bool,
    /// Curves with more knots than this are decimated.
    pub max_points: usize,
}

impl Default for PlotSpec {
    fn default() -> Self {
        Self {
            title: "Cumulative difference-plot".into(),
            label_a: "A".into(),
            label_b: "B".into(),
            width: 800,
            height: 500,
            alpha: None,
            show_triangle: true,
            max_points: 5000,
        }
    }
}

const MARGIN_LEFT: f64 = 60.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 70.0;

/// Maps plot coordinates `[0,1] × [−1,1]` to pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub left: f64,
    pub top: f64,
    pub width: f64,
    pub height: f64,
}

impl Viewport {
    pub fn for_spec(spec: &PlotSpec) -> Self {
        Self {
            left: MARGIN_LEFT,
            top: MARGIN_TOP,
            width: spec.width as f64 - MARGIN_LEFT - MARGIN_RIGHT,
            height: spec.height as f64 - MARGIN_TOP - MARGIN_BOTTOM,
        }
    }

    pub fn px(&self, x: f64) -> f64 {
        self.left + x * self.width
    }

    pub fn py(&self, y: f64) -> f64 {
        self.top + (1.0 - y) * 0.5 * self.height
    }

    pub fn inv_x(&self, px: f64) -> f64 {
        (px - self.left) / self.width
    }

    pub fn inv_y(&self, py: f64) -> f64 {
        1.0 - 2.0 * (py - self.top) / self.height
    }
}

/// Knot indices to draw: everything if under the limit, otherwise a uniform
/// stride plus both ends and both knots around every sign change.
pub fn decimate(values: &[f64], max_points: usize) -> Vec<usize> {
    let len = values.len();
    if len <= max_points.max(2) {
        return (0..len).collect();
    }
    let sign = |v: f64| (v > 0.0) as i8 - (v < 0.0) as i8;
    let mut keep = vec![false; len];
    keep[0] = true;
    keep[len - 1] = true;
    for j in 1..len {
        if sign(values[j]) != sign(values[j - 1]) {
            keep[j - 1] = true;
            keep[j] = true;
        }
    }
    let stride = len.div_ceil(max_points.max(2));
    for j in (0..len).step_by(stride) {
        keep[j] = true;
    }
    (0..len).filter(|&j| keep[j]).collect()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn points(vp: &Viewport, pts: impl Iterator<Item = (f64, f64)>) -> String {
    let mut s = String::new();
    for (i, (x, y)) in pts.enumerate() {
        if i > 0 {
            s.push(' ');
        }
        write!(s, "{:.2},{:.2}", vp.px(x), vp.py(y)).expect("writing to a String");
    }
    s
}

/// Renders the difference curve, optional band, feasible region, zero line and
/// quartile gridlines as a standalone SVG 1.1 document.
pub fn render_svg(d: &DiffCurve, band: Option<&ConfidenceBand>, spec: &PlotSpec) -> Result<Vec<u8>> {
    if spec.width < 200 || spec.height < 200 {
        return Err(Error::InvalidArgument("plot width and height must be at least 200".into()));
    }
    if let Some(b) = band {
        if b.len() != d.len() {
            return Err(Error::GridMismatch { curve: d.len(), band: b.len() });
        }
    }
    let vp = Viewport::for_spec(spec);
    let (w, h) = (spec.width, spec.height);
    let keep = decimate(d.values(), spec.max_points);
    let mut s = String::new();
    let mut line = |text: String| {
        s.push_str(&text);
        s.push('\n');
    };

    line(r#"<?xml version="1.0" encoding="UTF-8"?>"#.into());
    line(format!(
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    ));
    line(format!(r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#));
    line(format!(
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        w as f64 / 2.0,
        escape(&spec.title)
    ));
    if spec.show_triangle {
        let diamond = [(0.0, 0.0), (0.5, 1.0), (1.0, 0.0), (0.5, -1.0)];
        line(format!(
            r##"<polygon class="feasible" points="{}" fill="#e8eef7" stroke="none"/>"##,
            points(&vp, diamond.into_iter())
        ));
    }
    for q in [0.25, 0.5, 0.75] {
        line(format!(
            r##"<line class="grid" x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="#bbbbbb" stroke-dasharray="4,4"/>"##,
            vp.py(1.0),
            vp.py(-1.0),
            x = vp.px(q)
        ));
    }
    if let Some(b) = band {
        let upper = keep.iter().map(|&j| (b.knot(j), b.upper()[j]));
        let lower = keep.iter().rev().map(|&j| (b.knot(j), b.lower()[j]));
        line(format!(
            r##"<polygon class="band" points="{}" fill="#4a7bd0" fill-opacity="0.3" stroke="none"/>"##,
            points(&vp, upper.chain(lower))
        ));
    }
    line(format!(
        r#"<line class="zero" x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="black" stroke-width="0.8"/>"#,
        vp.px(0.0),
        vp.px(1.0),
        y = vp.py(0.0)
    ));
    line(format!(
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        vp.left, vp.top, vp.width, vp.height
    ));
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        line(format!(r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{t}</text>"#, vp.px(t), vp.py(-1.0) + 16.0));
    }
    for t in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        line(format!(r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{t}</text>"#, vp.left - 6.0, vp.py(t) + 4.0));
    }
    line(format!(
        r##"<polyline class="curve" points="{}" fill="none" stroke="#c0392b" stroke-width="1.5"/>"##,
        points(&vp, keep.iter().map(|&j| (d.knot(j), d.values()[j])))
    ));
    let (a, b) = (escape(&spec.label_a), escape(&spec.label_b));
    let legend_y = spec.height as f64 - 30.0;
    line(format!(
        r#"<text x="{:.2}" y="{legend_y:.2}">diff(x) = G_YA(x) − G_YB(x); above 0: {a} has lower quantiles, below 0: {b} (minimization)</text>"#,
        vp.left
    ));
    if let (Some(alpha), Some(_)) = (spec.alpha, band) {
        line(format!(
            r#"<text x="{:.2}" y="{:.2}">shaded: {}% confidence band</text>"#,
            vp.left,
            legend_y + 16.0,
            (1.0 - alpha) * 100.0
        ));
    }
    line("</svg>".into());
    Ok(s.into_bytes())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimates {
    pub c_p: f64,
    pub c_d: f64,
    pub n: usize,
}

/// Summary of a comparison run, serialized as the JSON report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub c_p: f64,
    pub c_d: f64,
    pub c_p_interval: Option<[f64; 2]>,
    pub c_d_interval: Option<[f64; 2]>,
    pub n: usize,
    pub alpha: Option<f64>,
    pub resamples: Option<usize>,
    pub seed: Option<u64>,
    pub verdict: DominanceVerdict,
    pub quantile_crossings: Vec<SignInterval>,
    pub outputs: BTreeMap<String, String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Dominance verdict read off the sign of the difference curve.
pub fn curve_verdict(d: &DiffCurve) -> DominanceVerdict {
    let above = d.values().iter().any(|v| *v > 0.0);
    let below = d.values().iter().any(|v| *v < 0.0);
    match (above, below) {
        (true, true) => DominanceVerdict::Cross,
        (true, false) => DominanceVerdict::ADominates,
        (false, true) => DominanceVerdict::BDominates,
        (false, false) => DominanceVerdict::Equal,
    }
}

pub fn export_report(
    estimates: &Estimates,
    curve: &DiffCurve,
    band: Option<&ConfidenceBand>,
    verdict: DominanceVerdict,
    paths: &BTreeMap<String, String>,
) -> Report {
    let bounds = band.map(band_bounds);
    Report {
        c_p: estimates.c_p,
        c_d: estimates.c_d,
        c_p_interval: bounds.map(|b| [b.c_p_low, b.c_p_high]),
        c_d_interval: bounds.map(|b| [b.c_d_low, b.c_d_high]),
        n: estimates.n,
        alpha: band.map(|b| b.alpha),
        resamples: band.map(|b| b.resamples),
        seed: band.map(|b| b.seed),
        verdict,
        quantile_crossings: curve.sign_intervals(),
        outputs: paths.clone(),
    }
}
