use std::fmt::Write;

use super::{xml_escape, Layout, DEFAULT_FILL};
use crate::bmgraph::BallMapperGraph;
use crate::coloration::{color_scale_map, ColorGradient, Coloration};

#[derive(Debug, Clone, PartialEq)]
pub struct SvgOptions {
    pub legend: bool,
    /// Ball labels are dropped above this many vertices.
    pub label_max_vertices: usize,
    /// Pixels per layout unit.
    pub scale: f64,
    pub margin: f64,
}

impl Default for SvgOptions {
    fn default() -> Self {
        Self {
            legend: true,
            label_max_vertices: 200,
            scale: 80.0,
            margin: 30.0,
        }
    }
}

const LEGEND_WIDTH: f64 = 110.0;
const LEGEND_TICKS: usize = 5;

pub fn emit_svg(
    graph: &BallMapperGraph,
    layout: &Layout,
    coloration: Option<&Coloration>,
    legend: bool,
) -> String {
    emit_svg_with(
        graph,
        layout,
        coloration,
        &SvgOptions {
            legend,
            ..SvgOptions::default()
        },
    )
}

/// Renders the graph as an SVG 1.1 document: edges, then balls, then labels, then the legend.
///
/// The legend is drawn only when a coloration is given.
pub fn emit_svg_with(
    graph: &BallMapperGraph,
    layout: &Layout,
    coloration: Option<&Coloration>,
    opts: &SvgOptions,
) -> String {
    let n = graph.vertex_count();
    let colors = coloration.map(color_scale_map);
    let mut bbox = [0.0f64, 0.0, 0.0, 0.0];
    if n > 0 {
        bbox = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for (p, r) in layout.positions.iter().zip(&layout.radii) {
            bbox[0] = bbox[0].min(p[0] - r);
            bbox[1] = bbox[1].min(p[1] - r);
            bbox[2] = bbox[2].max(p[0] + r);
            bbox[3] = bbox[3].max(p[1] + r);
        }
    }
    let s = opts.scale;
    let m = opts.margin;
    // y grows downward in SVG
    let px = |p: [f64; 2]| ((p[0] - bbox[0]) * s + m, (bbox[3] - p[1]) * s + m);
    let plot_w = (bbox[2] - bbox[0]) * s + 2.0 * m;
    let plot_h = (bbox[3] - bbox[1]) * s + 2.0 * m;
    let show_legend = opts.legend && colors.is_some();
    let width = plot_w + if show_legend { LEGEND_WIDTH } else { 0.0 };
    let height = plot_h.max(if show_legend { 260.0 } else { 0.0 });

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.2}\" height=\"{height:.2}\" viewBox=\"0 0 {width:.2} {height:.2}\">"
    );
    out.push_str("  <rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n");

    out.push_str("  <g id=\"edges\" stroke=\"#555555\" stroke-width=\"1.5\">\n");
    for &(i, j) in graph.edges() {
        let (x1, y1) = px(layout.positions[i]);
        let (x2, y2) = px(layout.positions[j]);
        let _ = writeln!(
            out,
            "    <line x1=\"{x1:.2}\" y1=\"{y1:.2}\" x2=\"{x2:.2}\" y2=\"{y2:.2}\"/>"
        );
    }
    out.push_str("  </g>\n");

    out.push_str("  <g id=\"balls\" stroke=\"#333333\" stroke-width=\"1\">\n");
    for ball in graph.balls() {
        let (cx, cy) = px(layout.positions[ball.id]);
        let r = layout.radii[ball.id] * s;
        let fill = colors.as_ref().map_or(DEFAULT_FILL, |c| c.colors[ball.id]);
        let _ = writeln!(
            out,
            "    <circle id=\"ball-{}\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"{r:.2}\" fill=\"{}\"/>",
            ball.id,
            fill.hex()
        );
    }
    out.push_str("  </g>\n");

    if n <= opts.label_max_vertices {
        out.push_str(
            "  <g id=\"labels\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\" dominant-baseline=\"central\">\n",
        );
        for ball in graph.balls() {
            let (x, y) = px(layout.positions[ball.id]);
            let _ = writeln!(out, "    <text x=\"{x:.2}\" y=\"{y:.2}\">{}</text>", ball.id);
        }
        out.push_str("  </g>\n");
    }

    if let (true, Some(map), Some(col)) = (show_legend, &colors, coloration) {
        let x0 = plot_w + 10.0;
        let (top, bar_h, bar_w) = (40.0, 180.0, 18.0);
        out.push_str("  <g id=\"legend\" font-family=\"sans-serif\" font-size=\"10\">\n");
        out.push_str("    <defs>\n      <linearGradient id=\"legend-gradient\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n");
        let stops = &ColorGradient::default().stops;
        for (k, stop) in stops.iter().enumerate() {
            let offset = k as f64 / (stops.len() - 1) as f64;
            let _ = writeln!(
                out,
                "        <stop offset=\"{offset:.2}\" stop-color=\"{}\"/>",
                stop.hex()
            );
        }
        out.push_str("      </linearGradient>\n    </defs>\n");
        let _ = writeln!(
            out,
            "    <text x=\"{x0:.2}\" y=\"{:.2}\">{}</text>",
            top - 12.0,
            xml_escape(&col.name)
        );
        let _ = writeln!(
            out,
            "    <rect x=\"{x0:.2}\" y=\"{top:.2}\" width=\"{bar_w:.2}\" height=\"{bar_h:.2}\" fill=\"url(#legend-gradient)\" stroke=\"#333333\"/>"
        );
        for k in 0..LEGEND_TICKS {
            let frac = k as f64 / (LEGEND_TICKS - 1) as f64;
            let value = map.min + (map.max - map.min) * frac;
            let y = top + bar_h * (1.0 - frac);
            let _ = writeln!(
                out,
                "    <text x=\"{:.2}\" y=\"{:.2}\" dominant-baseline=\"central\">{}</text>",
                x0 + bar_w + 6.0,
                y,
                format_tick(value)
            );
        }
        out.push_str("  </g>\n");
    }

    out.push_str("</svg>\n");
    out
}

fn format_tick(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}
