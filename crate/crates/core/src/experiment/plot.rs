//! SVG scatter plots in chart coordinates.

use std::fmt::Write as _;
use std::path::Path;

use num_complex::Complex64;

use super::sweep::PairRow;
use crate::error::Result;
use crate::sphere::Contour;

const SIZE: f64 = 640.0;
const PAD: f64 = 40.0;
const ZERO_COLOR: &str = "#1f77b4";
const CRIT_COLOR: &str = "#ff7f0e";
const PINNED_COLOR: &str = "#d62728";

/// Everything drawn for one sample.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlotData {
    pub title: String,
    /// Random zeros.
    pub zeros: Vec<Complex64>,
    pub pinned: Vec<Complex64>,
    pub critical: Vec<Complex64>,
    pub degree_drop: usize,
    pub predictions: Vec<Complex64>,
    pub contours: Vec<Contour>,
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

struct Frame {
    half: f64,
}

impl Frame {
    /// Half-width of the square view: large enough for the pinned zeros,
    /// predictions and contours, and for 95% of the other points.
    fn new(data: &PlotData) -> Frame {
        let mut radii: Vec<f64> = data.zeros.iter().chain(&data.critical).map(|w| w.norm()).collect();
        radii.sort_by(f64::total_cmp);
        let bulk = radii.get((radii.len() * 95).div_ceil(100).saturating_sub(1)).copied().unwrap_or(0.0);
        let must = data
            .pinned
            .iter()
            .chain(&data.predictions)
            .map(|w| w.norm())
            .chain(data.contours.iter().map(|c| c.center.norm() + c.chart_radius))
            .fold(bulk, f64::max);
        Frame {
            half: (1.1 * must).max(1.5),
        }
    }

    fn scale(&self) -> f64 {
        (SIZE - 2.0 * PAD) / (2.0 * self.half)
    }

    fn x(&self, re: f64) -> f64 {
        PAD + (re + self.half) * self.scale()
    }

    fn y(&self, im: f64) -> f64 {
        SIZE - PAD - (im + self.half) * self.scale()
    }

    fn contains(&self, w: Complex64) -> bool {
        w.re.abs() <= self.half && w.im.abs() <= self.half
    }
}

fn header(out: &mut String, title: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text class="title" x="{}" y="20" text-anchor="middle" font-size="14">{}</text>"#,
        SIZE / 2.0,
        escape(title)
    );
}

/// Zeros as squares, critical points as disks, pinned zeros in red,
/// predictions as crosses and contours as circles.
pub fn render_sample_svg(data: &PlotData) -> String {
    let f = Frame::new(data);
    let mut out = String::new();
    header(&mut out, &data.title);

    let _ = writeln!(
        out,
        r##"<g class="axes" stroke="#999" stroke-width="0.5"><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/><line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}"/></g>"##,
        f.x(-f.half),
        f.y(0.0),
        f.x(f.half),
        f.y(0.0),
        f.x(0.0),
        f.y(-f.half),
        f.x(0.0),
        f.y(f.half)
    );
    let _ = writeln!(
        out,
        r#"<text class="axis-label" x="{:.2}" y="{:.2}" font-size="10" text-anchor="end">Re w = {:.3}</text>"#,
        f.x(f.half),
        f.y(0.0) - 4.0,
        f.half
    );
    let _ = writeln!(
        out,
        r#"<text class="axis-label" x="{:.2}" y="{:.2}" font-size="10">Im w = {:.3}</text>"#,
        f.x(0.0) + 4.0,
        f.y(f.half) + 10.0,
        f.half
    );

    for c in &data.contours {
        let _ = writeln!(
            out,
            r#"<circle class="contour" cx="{:.3}" cy="{:.3}" r="{:.3}" fill="none" stroke="{PINNED_COLOR}" stroke-width="0.8"/>"#,
            f.x(c.center.re),
            f.y(c.center.im),
            (c.chart_radius * f.scale()).max(0.5)
        );
    }

    let side = 5.0;
    let mut hidden = 0;
    for (class, color, points) in [("zero", ZERO_COLOR, &data.zeros), ("zero pinned", PINNED_COLOR, &data.pinned)] {
        for w in points.iter() {
            if !f.contains(*w) {
                hidden += 1;
                continue;
            }
            let _ = writeln!(
                out,
                r#"<rect class="{class}" data-re="{}" data-im="{}" x="{:.3}" y="{:.3}" width="{side}" height="{side}" fill="{color}"/>"#,
                w.re,
                w.im,
                f.x(w.re) - side / 2.0,
                f.y(w.im) - side / 2.0
            );
        }
    }
    for w in &data.critical {
        if !f.contains(*w) {
            hidden += 1;
            continue;
        }
        let _ = writeln!(
            out,
            r#"<circle class="critical" data-re="{}" data-im="{}" cx="{:.3}" cy="{:.3}" r="2.5" fill="{CRIT_COLOR}"/>"#,
            w.re,
            w.im,
            f.x(w.re),
            f.y(w.im)
        );
    }
    for w in &data.predictions {
        let (x, y) = (f.x(w.re), f.y(w.im));
        let _ = writeln!(
            out,
            r#"<path class="prediction" data-re="{}" data-im="{}" d="M {:.3} {:.3} L {:.3} {:.3} M {:.3} {:.3} L {:.3} {:.3}" stroke="black" stroke-width="1"/>"#,
            w.re,
            w.im,
            x - 4.0,
            y - 4.0,
            x + 4.0,
            y + 4.0,
            x - 4.0,
            y + 4.0,
            x + 4.0,
            y - 4.0
        );
    }

    let legend = format!(
        "zeros: {} (pinned {}), critical points: {}, degree_drop = {}, outside view: {}",
        data.zeros.len() + data.pinned.len(),
        data.pinned.len(),
        data.critical.len(),
        data.degree_drop,
        hidden
    );
    let _ = writeln!(
        out,
        r#"<text class="legend" x="{PAD}" y="{}" font-size="11">{}</text>"#,
        SIZE - 12.0,
        escape(&legend)
    );
    out.push_str("</svg>\n");
    out
}

/// Failure rate against `N` on log-log axes.
pub fn render_summary_svg(title: &str, rows: &[PairRow]) -> String {
    let mut out = String::new();
    header(&mut out, title);
    let points: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.failure_rate > 0.0)
        .map(|r| ((r.n as f64).log10(), r.failure_rate.log10()))
        .collect();
    if !points.is_empty() {
        let (x0, x1) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.0), a.1.max(p.0)));
        let (y0, y1) = points.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |a, p| (a.0.min(p.1), a.1.max(p.1)));
        let sx = (SIZE - 2.0 * PAD) / (x1 - x0).max(1e-9);
        let sy = (SIZE - 2.0 * PAD) / (y1 - y0).max(1e-9);
        for (r, (x, y)) in rows.iter().filter(|r| r.failure_rate > 0.0).zip(&points) {
            let _ = writeln!(
                out,
                r#"<circle class="rate" data-n="{}" data-rate="{}" cx="{:.3}" cy="{:.3}" r="3" fill="{CRIT_COLOR}"/>"#,
                r.n,
                r.failure_rate,
                PAD + (x - x0) * sx,
                SIZE - PAD - (y - y0) * sy
            );
        }
    }
    let _ = writeln!(
        out,
        r#"<text class="legend" x="{PAD}" y="{}" font-size="11">log10 failure rate against log10 N</text>"#,
        SIZE - 12.0
    );
    out.push_str("</svg>\n");
    out
}

pub fn emit_plot(svg: &str, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    std::fs::write(path, svg)?;
    Ok(())
}
