//! Two-dimensional region plots as standalone SVG 1.1 documents.

use std::fmt::Write as _;

use num::ToPrimitive;

use crate::bounds::BoundKind;
use crate::error::{Error, Result};
use crate::ratpoly::{format_rational, Rational};

/// Largest coordinate shown on either axis by default.
pub const DEFAULT_CLIP_MAX: f64 = 8.0;

const MARGIN: f64 = 60.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LayerKind {
    Exact,
    Bound(BoundKind),
}

impl LayerKind {
    pub fn label(self) -> &'static str {
        match self {
            LayerKind::Exact => "exact region",
            LayerKind::Bound(BoundKind::Tcb) => "total capacity bound",
            LayerKind::Bound(BoundKind::Ddb1) => "first dual distance bound",
            LayerKind::Bound(BoundKind::Ddb2) => "second dual distance bound",
        }
    }

    fn color(self) -> &'static str {
        match self {
            LayerKind::Exact => "#2171b5",
            LayerKind::Bound(BoundKind::Tcb) => "#636363",
            LayerKind::Bound(BoundKind::Ddb1) => "#d62728",
            LayerKind::Bound(BoundKind::Ddb2) => "#2ca02c",
        }
    }

    fn dash(self) -> &'static str {
        match self {
            LayerKind::Bound(BoundKind::Tcb) => " stroke-dasharray=\"6 4\"",
            LayerKind::Bound(BoundKind::Ddb1) => " stroke-dasharray=\"2 3\"",
            _ => "",
        }
    }
}

/// One region to draw, given by its vertices in drawing order.
#[derive(Debug, Clone)]
pub struct Layer {
    pub kind: LayerKind,
    pub vertices: Vec<Vec<Rational>>,
}

#[derive(Debug, Clone)]
pub struct PlotSpec {
    /// Names of the horizontal and vertical coordinates.
    pub axes: [String; 2],
    /// Fixed coordinates, for the caption.
    pub fixes: Vec<(String, Rational)>,
    /// Canvas width and height in pixels.
    pub size: u32,
    /// Upper corner of the plotted box `[0, x] × [0, y]`.
    pub clip: Option<(f64, f64)>,
}

fn f(v: &Rational) -> f64 {
    v.to_f64().unwrap_or(0.0)
}

fn num(v: f64) -> String {
    let s = format!("{v:.2}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

fn default_clip(layers: &[Layer]) -> (f64, f64) {
    let bounds: Vec<&Layer> = layers
        .iter()
        .filter(|l| l.kind != LayerKind::Exact)
        .collect();
    let source: Vec<&Layer> = if bounds.is_empty() {
        layers.iter().collect()
    } else {
        bounds
    };
    let mut max = (0.0f64, 0.0f64);
    for v in source.iter().flat_map(|l| &l.vertices) {
        max.0 = max.0.max(f(&v[0]));
        max.1 = max.1.max(f(&v[1]));
    }
    let pick = |m: f64| {
        let m = (1.2 * m).min(DEFAULT_CLIP_MAX);
        if m > 0.0 {
            m
        } else {
            1.0
        }
    };
    (pick(max.0), pick(max.1))
}

/// Tick values along one axis: integers plus the non-integer vertex
/// coordinates, in increasing order.
fn ticks(layers: &[Layer], axis: usize, max: f64) -> Vec<(f64, String)> {
    let mut out: Vec<(f64, String)> = (0..=max.floor() as i64)
        .map(|i| (i as f64, i.to_string()))
        .collect();
    let mut notable: Vec<Rational> = layers
        .iter()
        .flat_map(|l| l.vertices.iter().map(|v| v[axis].clone()))
        .filter(|r| !r.is_integer() && f(r) <= max)
        .collect();
    notable.sort();
    notable.dedup();
    out.extend(notable.iter().map(|r| (f(r), format_rational(r))));
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

/// Renders the layers; the output depends only on the arguments.
pub fn render(spec: &PlotSpec, layers: &[Layer]) -> Result<String> {
    if spec.size < 4 * MARGIN as u32 {
        return Err(Error::invalid(format!(
            "canvas size {} is below {}",
            spec.size,
            4 * MARGIN as u32
        )));
    }
    if let Some(l) = layers
        .iter()
        .find(|l| l.vertices.iter().any(|v| v.len() != 2))
    {
        return Err(Error::invalid(format!(
            "{} is not two-dimensional",
            l.kind.label()
        )));
    }
    let (xmax, ymax) = spec.clip.unwrap_or_else(|| default_clip(layers));
    if !(xmax > 0.0 && ymax > 0.0) {
        return Err(Error::invalid("clip box must be positive"));
    }
    let size = spec.size as f64;
    let span = size - 2.0 * MARGIN;
    let px = |x: f64| MARGIN + x / xmax * span;
    let py = |y: f64| size - MARGIN - y / ymax * span;
    let pt = |v: &[Rational]| format!("{},{}", num(px(f(&v[0]))), num(py(f(&v[1]))));

    let mut s = String::new();
    let w = spec.size;
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{w}" viewBox="0 0 {w} {w}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        s,
        r#"<defs><clipPath id="plot-area"><rect x="{}" y="{}" width="{}" height="{}"/></clipPath></defs>"#,
        num(MARGIN),
        num(MARGIN),
        num(span),
        num(span)
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);

    // caption
    let mut caption = format!("{} vs {}", spec.axes[0], spec.axes[1]);
    if !spec.fixes.is_empty() {
        let fixes: Vec<String> = spec
            .fixes
            .iter()
            .map(|(n, v)| format!("{n} = {}", format_rational(v)))
            .collect();
        let _ = write!(caption, " ({})", fixes.join(", "));
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" font-size="14">{caption}</text>"#,
        num(size / 2.0),
        num(MARGIN / 2.0)
    );

    // layers
    let _ = writeln!(s, r#"<g clip-path="url(#plot-area)">"#);
    for layer in layers {
        let color = layer.kind.color();
        let points: Vec<String> = layer.vertices.iter().map(|v| pt(v)).collect();
        let (fill, opacity) = match layer.kind {
            LayerKind::Exact => (color, "0.35"),
            _ => ("none", "0"),
        };
        match points.len() {
            0 => {}
            1 => {
                let _ = writeln!(
                    s,
                    r#"<circle cx="{}" cy="{}" r="3" fill="{color}"/>"#,
                    num(px(f(&layer.vertices[0][0]))),
                    num(py(f(&layer.vertices[0][1])))
                );
            }
            2 => {
                let _ = writeln!(
                    s,
                    r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"{}/>"#,
                    points.join(" "),
                    layer.kind.dash()
                );
            }
            _ => {
                let _ = writeln!(
                    s,
                    r#"<polygon points="{}" fill="{fill}" fill-opacity="{opacity}" stroke="{color}" stroke-width="2"{}/>"#,
                    points.join(" "),
                    layer.kind.dash()
                );
            }
        }
    }
    let _ = writeln!(s, "</g>");

    // axes and ticks
    let (x0, y0) = (px(0.0), py(0.0));
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        num(x0),
        num(y0),
        num(px(xmax)),
        num(y0)
    );
    let _ = writeln!(
        s,
        r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="black"/>"#,
        num(x0),
        num(y0),
        num(x0),
        num(py(ymax))
    );
    for (v, label) in ticks(layers, 0, xmax) {
        let x = num(px(v));
        let _ = writeln!(
            s,
            r#"<line x1="{x}" y1="{}" x2="{x}" y2="{}" stroke="black"/><text x="{x}" y="{}" text-anchor="middle">{label}</text>"#,
            num(y0),
            num(y0 + 5.0),
            num(y0 + 18.0)
        );
    }
    for (v, label) in ticks(layers, 1, ymax) {
        let y = num(py(v));
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y}" x2="{}" y2="{y}" stroke="black"/><text x="{}" y="{y}" text-anchor="end" dominant-baseline="middle">{label}</text>"#,
            num(x0 - 5.0),
            num(x0),
            num(x0 - 8.0)
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
        num(px(xmax / 2.0)),
        num(size - MARGIN / 4.0),
        spec.axes[0]
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle" transform="rotate(-90 {} {})">{}</text>"#,
        num(MARGIN / 4.0),
        num(py(ymax / 2.0)),
        num(MARGIN / 4.0),
        num(py(ymax / 2.0)),
        spec.axes[1]
    );

    if layers
        .iter()
        .any(|l| l.kind == LayerKind::Exact && l.vertices.is_empty())
    {
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle" font-size="16">empty region</text>"#,
            num(px(xmax / 2.0)),
            num(py(ymax / 2.0))
        );
    }

    // legend
    for (row, layer) in layers.iter().enumerate() {
        let y = MARGIN + 16.0 + 18.0 * row as f64;
        let x = size - MARGIN - 200.0;
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="{}" stroke-width="3"{}/><text x="{}" y="{}" dominant-baseline="middle">{}</text>"#,
            num(x),
            num(y),
            num(x + 24.0),
            num(y),
            layer.kind.color(),
            layer.kind.dash(),
            num(x + 30.0),
            num(y),
            layer.kind.label()
        );
    }
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
