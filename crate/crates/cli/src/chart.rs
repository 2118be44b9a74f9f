use std::fmt::Write;

use thiserror::Error;

const WIDTH: f64 = 760.0;
const HEIGHT: f64 = 440.0;
const LEFT: f64 = 70.0;
const RIGHT: f64 = 200.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 50.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];
const BAND_PALETTE: [&str; 4] = ["#7f7f7f", "#1f77b4", "#d62728", "#2ca02c"];

#[derive(Debug, Error, PartialEq)]
pub enum ChartError {
    #[error("chart `{0}` has no series")]
    Empty(String),
    #[error("`{label}` has {x} x values and {y} y values")]
    LengthMismatch { label: String, x: usize, y: usize },
    #[error("`{0}` contains non-finite values")]
    NonFinite(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub label: String,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
}

/// Shaded region between two curves on a common x axis.
#[derive(Debug, Clone, PartialEq)]
pub struct Band {
    pub label: String,
    pub x: Vec<f64>,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Chart {
    pub title: String,
    pub x_label: String,
    pub y_label: String,
    pub series: Vec<Series>,
    pub bands: Vec<Band>,
}

impl Chart {
    pub fn new(title: &str, x_label: &str, y_label: &str) -> Self {
        Self {
            title: title.to_string(),
            x_label: x_label.to_string(),
            y_label: y_label.to_string(),
            ..Default::default()
        }
    }

    pub fn line(mut self, label: &str, x: &[f64], y: &[f64]) -> Self {
        self.series.push(Series {
            label: label.to_string(),
            x: x.to_vec(),
            y: y.to_vec(),
        });
        self
    }

    pub fn band(mut self, label: &str, x: &[f64], lower: &[f64], upper: &[f64]) -> Self {
        self.bands.push(Band {
            label: label.to_string(),
            x: x.to_vec(),
            lower: lower.to_vec(),
            upper: upper.to_vec(),
        });
        self
    }

    fn check(&self) -> Result<(), ChartError> {
        if self.series.iter().all(|s| s.x.is_empty()) {
            return Err(ChartError::Empty(self.title.clone()));
        }
        for s in &self.series {
            if s.x.len() != s.y.len() {
                return Err(ChartError::LengthMismatch {
                    label: s.label.clone(),
                    x: s.x.len(),
                    y: s.y.len(),
                });
            }
            if s.x.iter().chain(&s.y).any(|v| !v.is_finite()) {
                return Err(ChartError::NonFinite(s.label.clone()));
            }
        }
        for b in &self.bands {
            if b.lower.len() != b.x.len() || b.upper.len() != b.x.len() {
                return Err(ChartError::LengthMismatch {
                    label: b.label.clone(),
                    x: b.x.len(),
                    y: b.lower.len().min(b.upper.len()),
                });
            }
            if b.x.iter().chain(&b.lower).chain(&b.upper).any(|v| !v.is_finite()) {
                return Err(ChartError::NonFinite(b.label.clone()));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy)]
struct Axis {
    lo: f64,
    hi: f64,
    step: f64,
}

impl Axis {
    fn fit(min: f64, max: f64) -> Self {
        let (min, max) = if max > min {
            (min, max)
        } else {
            let pad = if min == 0.0 { 1.0 } else { 0.1 * min.abs() };
            (min - pad, max + pad)
        };
        let raw = (max - min) / 5.0;
        let mag = 10f64.powf(raw.log10().floor());
        let norm = raw / mag;
        let step = mag
            * if norm < 1.5 {
                1.0
            } else if norm < 3.0 {
                2.0
            } else if norm < 7.0 {
                5.0
            } else {
                10.0
            };
        Self {
            lo: (min / step).floor() * step,
            hi: (max / step).ceil() * step,
            step,
        }
    }

    fn ticks(&self) -> Vec<f64> {
        let n = ((self.hi - self.lo) / self.step).round() as usize;
        (0..=n).map(|k| self.lo + k as f64 * self.step).collect()
    }

    fn label(&self, v: f64) -> String {
        let decimals = (-self.step.log10().floor()).max(0.0) as usize;
        let s = format!("{:.*}", decimals, v);
        if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
            format!("{:.*}", decimals, 0.0)
        } else {
            s
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders a line chart with optional shaded envelopes. Output depends only
/// on the chart contents.
pub fn render_chart(chart: &Chart) -> Result<String, ChartError> {
    chart.check()?;
    let xs = chart.series.iter().flat_map(|s| s.x.iter()).chain(chart.bands.iter().flat_map(|b| b.x.iter()));
    let ys = chart
        .series
        .iter()
        .flat_map(|s| s.y.iter())
        .chain(chart.bands.iter().flat_map(|b| b.lower.iter().chain(&b.upper)));
    let range = |it: &mut dyn Iterator<Item = &f64>| {
        it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(*v), hi.max(*v)))
    };
    let (x0, x1) = range(&mut xs.into_iter());
    let (y0, y1) = range(&mut ys.into_iter());
    let (xa, ya) = (Axis::fit(x0, x1), Axis::fit(y0, y1));
    let pw = WIDTH - LEFT - RIGHT;
    let ph = HEIGHT - TOP - BOTTOM;
    let px = |x: f64| LEFT + (x - xa.lo) / (xa.hi - xa.lo) * pw;
    let py = |y: f64| TOP + ph - (y - ya.lo) / (ya.hi - ya.lo) * ph;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#,
        w = WIDTH,
        h = HEIGHT
    );
    let _ = writeln!(out, r#"<rect width="{}" height="{}" fill="white"/>"#, WIDTH, HEIGHT);
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
        LEFT + pw / 2.0,
        escape(&chart.title)
    );

    out.push_str("<g class=\"grid\" stroke=\"#dddddd\" stroke-width=\"1\">\n");
    for t in xa.ticks() {
        let _ = writeln!(out, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}"/>"#, TOP, TOP + ph, x = px(t));
    }
    for t in ya.ticks() {
        let _ = writeln!(out, r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}"/>"#, LEFT, LEFT + pw, y = py(t));
    }
    out.push_str("</g>\n");

    for (k, b) in chart.bands.iter().enumerate() {
        let points: Vec<String> = b
            .x
            .iter()
            .zip(&b.upper)
            .chain(b.x.iter().zip(&b.lower).rev())
            .map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y)))
            .collect();
        let _ = writeln!(
            out,
            r#"<polygon class="band" points="{}" fill="{}" fill-opacity="0.18" stroke="none"/>"#,
            points.join(" "),
            BAND_PALETTE[k % BAND_PALETTE.len()]
        );
    }
    for (k, s) in chart.series.iter().enumerate() {
        let points: Vec<String> = s.x.iter().zip(&s.y).map(|(x, y)| format!("{:.2},{:.2}", px(*x), py(*y))).collect();
        let _ = writeln!(
            out,
            r#"<polyline class="series" points="{}" fill="none" stroke="{}" stroke-width="1.6"/>"#,
            points.join(" "),
            PALETTE[k % PALETTE.len()]
        );
    }

    let _ = writeln!(
        out,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="none" stroke="black"/>"#,
        LEFT, TOP, pw, ph
    );
    for t in xa.ticks() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
            px(t),
            TOP + ph + 16.0,
            xa.label(t)
        );
    }
    for t in ya.ticks() {
        let _ = writeln!(
            out,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{}</text>"#,
            LEFT - 6.0,
            py(t) + 4.0,
            ya.label(t)
        );
    }
    let _ = writeln!(
        out,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
        LEFT + pw / 2.0,
        HEIGHT - 12.0,
        escape(&chart.x_label)
    );
    let _ = writeln!(
        out,
        r#"<text x="16" y="{y:.2}" text-anchor="middle" transform="rotate(-90 16 {y:.2})">{}</text>"#,
        escape(&chart.y_label),
        y = TOP + ph / 2.0
    );

    let lx = LEFT + pw + 14.0;
    let mut ly = TOP + 8.0;
    for (k, s) in chart.series.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<line x1="{:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{}" stroke-width="2"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx,
            lx + 22.0,
            PALETTE[k % PALETTE.len()],
            lx + 28.0,
            ly + 4.0,
            escape(&s.label),
            y = ly
        );
        ly += 18.0;
    }
    for (k, b) in chart.bands.iter().enumerate() {
        let _ = writeln!(
            out,
            r#"<rect x="{:.2}" y="{:.2}" width="22" height="10" fill="{}" fill-opacity="0.3"/><text x="{:.2}" y="{:.2}">{}</text>"#,
            lx,
            ly - 5.0,
            BAND_PALETTE[k % BAND_PALETTE.len()],
            lx + 28.0,
            ly + 4.0,
            escape(&b.label)
        );
        ly += 18.0;
    }
    out.push_str("</svg>\n");
    Ok(out)
}
