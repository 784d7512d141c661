//! Layout and static output of colored Ball Mapper graphs: SVG figures plus DOT and GraphML for
//! other graph tools. Every emitter writes elements in a fixed order, so equal inputs give
//! byte-identical documents.

mod interchange;
mod layout;
mod svg;

pub use interchange::{emit_dot, emit_graphml, parse_dot, parse_graphml, InterchangeGraph, InterchangeNode};
pub use layout::{layout_force_directed, layout_with, radius_for, Layout, LayoutOptions};
pub use svg::{emit_svg, emit_svg_with, SvgOptions};

use crate::coloration::Rgb;

/// Fill used when a graph is drawn without a coloration.
pub const DEFAULT_FILL: Rgb = Rgb(0xbd, 0xbd, 0xbd);

pub(crate) fn xml_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
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
