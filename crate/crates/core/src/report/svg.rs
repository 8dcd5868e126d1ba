//! Standalone SVG 1.1 ROC plots. Output depends only on the inputs; all
//! coordinates are printed with two decimals.

use std::fmt::Write;

use crate::metrics::{OperatorPoint, RocCurve};

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
];

#[derive(Debug, Clone)]
pub struct LabeledCurve<'a> {
    pub label: String,
    pub curve: &'a RocCurve,
    /// Explicit colour; otherwise taken from the palette by position.
    pub color: Option<String>,
    pub dashed: bool,
}

impl<'a> LabeledCurve<'a> {
    pub fn new(label: impl Into<String>, curve: &'a RocCurve) -> Self {
        LabeledCurve {
            label: label.into(),
            curve,
            color: None,
            dashed: false,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SvgStyle {
    pub title: Option<String>,
    /// Side of the square plot area, in pixels.
    pub plot_size: f64,
    /// Operator points with this name are drawn larger and in green.
    pub highlight: Option<String>,
}

impl Default for SvgStyle {
    fn default() -> Self {
        SvgStyle {
            title: None,
            plot_size: 400.0,
            highlight: Some("mean".into()),
        }
    }
}

pub fn escape_xml(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for ch in s.chars() {
        match ch {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c => out.push(c),
        }
    }
    out
}

const LEFT: f64 = 60.0;
const TOP: f64 = 40.0;
const LEGEND_W: f64 = 220.0;
const BOTTOM: f64 = 50.0;

struct Frame {
    size: f64,
}

impl Frame {
    fn x(&self, fpr: f64) -> f64 {
        LEFT + fpr * self.size
    }

    fn y(&self, tpr: f64) -> f64 {
        TOP + (1.0 - tpr) * self.size
    }
}

pub fn emit_svg(curves: &[LabeledCurve<'_>], points: &[OperatorPoint], style: &SvgStyle) -> String {
    let f = Frame { size: style.plot_size };
    let width = LEFT + f.size + LEGEND_W;
    let height = TOP + f.size + BOTTOM;
    let mut s = String::new();
    // write! into a String cannot fail
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8" standalone="no"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width:.0}" height="{height:.0}" viewBox="0 0 {width:.0} {height:.0}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{width:.0}" height="{height:.0}" fill="white"/>"#
    );
    if let Some(t) = &style.title {
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="15">{}</text>"#,
            f.x(0.5),
            escape_xml(t)
        );
    }

    // axes and grid
    let _ = writeln!(s, r#"<g id="axes" stroke="black" stroke-width="1" fill="none">"#);
    let _ = writeln!(
        s,
        r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}"/>"#,
        f.x(0.0),
        f.y(1.0),
        f.size,
        f.size
    );
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            f.x(v),
            f.y(0.0),
            f.x(v),
            f.y(1.0)
        );
        let _ = writeln!(
            s,
            r##"<line x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#dddddd"/>"##,
            f.x(0.0),
            f.y(v),
            f.x(1.0),
            f.y(v)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, r#"<g id="ticks" fill="black">"#);
    for i in 0..=5 {
        let v = i as f64 / 5.0;
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{v:.1}</text>"#,
            f.x(v),
            f.y(0.0) + 16.0
        );
        let _ = writeln!(
            s,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{v:.1}</text>"#,
            f.x(0.0) - 6.0,
            f.y(v) + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">False positive rate (1 - specificity)</text>"#,
        f.x(0.5),
        f.y(0.0) + 36.0
    );
    let _ = writeln!(
        s,
        r#"<text x="18" y="{:.2}" text-anchor="middle" transform="rotate(-90 18 {:.2})">True positive rate (sensitivity)</text>"#,
        f.y(0.5),
        f.y(0.5)
    );
    let _ = writeln!(s, "</g>");

    let _ = writeln!(
        s,
        r##"<line id="chance" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="#999999" stroke-dasharray="4 4"/>"##,
        f.x(0.0),
        f.y(0.0),
        f.x(1.0),
        f.y(1.0)
    );

    let mut legend: Vec<(String, String, bool)> = Vec::new();
    for (i, c) in curves.iter().enumerate() {
        let color = c
            .color
            .clone()
            .unwrap_or_else(|| PALETTE[i % PALETTE.len()].to_string());
        let pts: Vec<String> = c
            .curve
            .points()
            .iter()
            .map(|p| format!("{:.2},{:.2}", f.x(p.fpr), f.y(p.tpr)))
            .collect();
        let dash = if c.dashed { r#" stroke-dasharray="6 3""# } else { "" };
        let _ = writeln!(
            s,
            r#"<polyline class="roc" fill="none" stroke="{color}" stroke-width="2"{dash} points="{}"/>"#,
            pts.join(" ")
        );
        legend.push((c.label.clone(), color, false));
    }

    for p in points {
        let emphasized = style.highlight.as_deref() == Some(p.name.as_str());
        let (r, fill) = if emphasized { (7.0, "#2ca02c") } else { (4.0, "#555555") };
        let _ = writeln!(
            s,
            r#"<circle class="operator" cx="{:.2}" cy="{:.2}" r="{r:.1}" fill="{fill}" stroke="black" stroke-width="1"><title>{}</title></circle>"#,
            f.x(p.fpr()),
            f.y(p.sensitivity),
            escape_xml(&p.name)
        );
        if emphasized {
            legend.push((p.name.clone(), fill.to_string(), true));
        }
    }

    if !legend.is_empty() {
        let lx = LEFT + f.size + 16.0;
        let _ = writeln!(s, r#"<g id="legend">"#);
        for (i, (label, color, is_point)) in legend.iter().enumerate() {
            let y = TOP + 10.0 + i as f64 * 18.0;
            if *is_point {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{:.2}" cy="{:.2}" r="6.0" fill="{color}" stroke="black"/>"#,
                    lx + 10.0,
                    y
                );
            } else {
                let _ = writeln!(
                    s,
                    r#"<line x1="{lx:.2}" y1="{y:.2}" x2="{:.2}" y2="{y:.2}" stroke="{color}" stroke-width="3"/>"#,
                    lx + 20.0
                );
            }
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}">{}</text>"#,
                lx + 26.0,
                y + 4.0,
                escape_xml(label)
            );
        }
        let _ = writeln!(s, "</g>");
    }
    s.push_str("</svg>\n");
    s
}
