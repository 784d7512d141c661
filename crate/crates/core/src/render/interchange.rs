//! DOT and GraphML export, with readers for the documents this module writes.

use std::fmt::Write;

use super::{xml_escape, DEFAULT_FILL};
use crate::bmgraph::BallMapperGraph;
use crate::coloration::{color_scale_map, Coloration};
use crate::error::{Error, Result};

/// The vertex and edge data carried by the interchange formats.
#[derive(Debug, Clone, PartialEq)]
pub struct InterchangeGraph {
    pub nodes: Vec<InterchangeNode>,
    /// `(i, j)` with `i < j`, lexicographic.
    pub edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InterchangeNode {
    pub id: usize,
    pub size: usize,
    pub color: String,
    pub value: Option<f64>,
}

impl InterchangeGraph {
    /// What an export of `graph` with `coloration` should contain.
    pub fn from_graph(graph: &BallMapperGraph, coloration: Option<&Coloration>) -> Self {
        let colors = coloration.map(color_scale_map);
        let nodes = graph
            .balls()
            .iter()
            .map(|b| InterchangeNode {
                id: b.id,
                size: b.size,
                color: colors
                    .as_ref()
                    .map_or(DEFAULT_FILL, |c| c.colors[b.id])
                    .hex(),
                value: coloration.map(|c| c.values[b.id]),
            })
            .collect();
        Self {
            nodes,
            edges: graph.edges().to_vec(),
        }
    }
}

/// Undirected graphviz document: one node statement per ball, one edge statement per edge.
pub fn emit_dot(graph: &BallMapperGraph, coloration: Option<&Coloration>) -> String {
    let data = InterchangeGraph::from_graph(graph, coloration);
    let mut out = String::from("graph ballmapper {\n  node [shape=circle, style=filled];\n");
    for node in &data.nodes {
        let _ = write!(out, "  {} [size={}, fillcolor=\"{}\"", node.id, node.size, node.color);
        if let Some(v) = node.value {
            let _ = write!(out, ", value={v}");
        }
        out.push_str("];\n");
    }
    for (i, j) in &data.edges {
        let _ = writeln!(out, "  {i} -- {j};");
    }
    out.push_str("}\n");
    out
}

/// GraphML document with `size`, `color` and (when colored) `value` node data.
pub fn emit_graphml(graph: &BallMapperGraph, coloration: Option<&Coloration>) -> String {
    let data = InterchangeGraph::from_graph(graph, coloration);
    let mut out = String::from(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n\
         <graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n  \
         <key id=\"size\" for=\"node\" attr.name=\"size\" attr.type=\"int\"/>\n  \
         <key id=\"color\" for=\"node\" attr.name=\"color\" attr.type=\"string\"/>\n  \
         <key id=\"value\" for=\"node\" attr.name=\"value\" attr.type=\"double\"/>\n",
    );
    let _ = writeln!(
        out,
        "  <graph id=\"{}\" edgedefault=\"undirected\">",
        xml_escape(coloration.map_or("ballmapper", |c| c.name.as_str()))
    );
    for node in &data.nodes {
        let _ = writeln!(out, "    <node id=\"{}\">", node.id);
        let _ = writeln!(out, "      <data key=\"size\">{}</data>", node.size);
        let _ = writeln!(out, "      <data key=\"color\">{}</data>", node.color);
        if let Some(v) = node.value {
            let _ = writeln!(out, "      <data key=\"value\">{v}</data>");
        }
        out.push_str("    </node>\n");
    }
    for (k, (i, j)) in data.edges.iter().enumerate() {
        let _ = writeln!(out, "    <edge id=\"e{k}\" source=\"{i}\" target=\"{j}\"/>");
    }
    out.push_str("  </graph>\n</graphml>\n");
    out
}

fn parse_err(format: &'static str, message: impl Into<String>) -> Error {
    Error::Parse {
        format,
        message: message.into(),
    }
}

fn finish(mut nodes: Vec<InterchangeNode>, mut edges: Vec<(usize, usize)>) -> InterchangeGraph {
    nodes.sort_by_key(|n| n.id);
    for e in &mut edges {
        if e.0 > e.1 {
            *e = (e.1, e.0);
        }
    }
    edges.sort_unstable();
    InterchangeGraph { nodes, edges }
}

/// Reads back a document written by [`emit_dot`].
pub fn parse_dot(doc: &str) -> Result<InterchangeGraph> {
    const F: &str = "dot";
    let mut nodes = Vec::new();
    let mut edges = Vec::new();
    for line in doc.lines().map(str::trim) {
        let Some(first) = line.chars().next() else { continue };
        if !first.is_ascii_digit() {
            continue;
        }
        let stmt = line.trim_end_matches(';');
        if let Some((a, b)) = stmt.split_once("--") {
            let a = a.trim().parse().map_err(|_| parse_err(F, line))?;
            let b = b.trim().parse().map_err(|_| parse_err(F, line))?;
            edges.push((a, b));
            continue;
        }
        let (id, attrs) = stmt.split_once('[').ok_or_else(|| parse_err(F, line))?;
        let mut node = InterchangeNode {
            id: id.trim().parse().map_err(|_| parse_err(F, line))?,
            size: 0,
            color: String::new(),
            value: None,
        };
        for attr in attrs.trim_end_matches(']').split(',') {
            let (k, v) = attr.split_once('=').ok_or_else(|| parse_err(F, line))?;
            let v = v.trim().trim_matches('"');
            match k.trim() {
                "size" => node.size = v.parse().map_err(|_| parse_err(F, line))?,
                "fillcolor" => node.color = v.to_string(),
                "value" => node.value = Some(v.parse().map_err(|_| parse_err(F, line))?),
                _ => {}
            }
        }
        nodes.push(node);
    }
    Ok(finish(nodes, edges))
}

fn attr<'a>(line: &'a str, name: &str) -> Option<&'a str> {
    let key = format!("{name}=\"");
    let start = line.find(&key)? + key.len();
    let len = line[start..].find('"')?;
    Some(&line[start..start + len])
}

fn data_text(line: &str) -> Option<(&str, &str)> {
    let key = attr(line, "key")?;
    let start = line.find('>')? + 1;
    let end = line.rfind("</data>")?;
    Some((key, &line[start..end]))
}

/// Reads back a document written by [`emit_graphml`].
pub fn parse_graphml(doc: &str) -> Result<InterchangeGraph> {
    const F: &str = "graphml";
    let mut nodes: Vec<InterchangeNode> = Vec::new();
    let mut edges = Vec::new();
    for line in doc.lines().map(str::trim) {
        if line.starts_with("<node ") {
            let id = attr(line, "id").ok_or_else(|| parse_err(F, line))?;
            nodes.push(InterchangeNode {
                id: id.parse().map_err(|_| parse_err(F, line))?,
                size: 0,
                color: String::new(),
                value: None,
            });
        } else if line.starts_with("<data ") {
            let node = nodes.last_mut().ok_or_else(|| parse_err(F, "data outside node"))?;
            let (key, text) = data_text(line).ok_or_else(|| parse_err(F, line))?;
            match key {
                "size" => node.size = text.parse().map_err(|_| parse_err(F, line))?,
                "color" => node.color = text.to_string(),
                "value" => node.value = Some(text.parse().map_err(|_| parse_err(F, line))?),
                _ => {}
            }
        } else if line.starts_with("<edge ") {
            let s = attr(line, "source").and_then(|v| v.parse().ok());
            let t = attr(line, "target").and_then(|v| v.parse().ok());
            match (s, t) {
                (Some(s), Some(t)) => edges.push((s, t)),
                _ => return Err(parse_err(F, line)),
            }
        }
    }
    Ok(finish(nodes, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bmgraph::{build_graph, Ball, Provenance};
    use crate::cover::{build_epsilon_net, PointOrder};
    use crate::pointcloud::PointCloud;

    fn triangle() -> BallMapperGraph {
        let balls = (0..3)
            .map(|id| Ball {
                id,
                center_index: id,
                members: vec![id],
                size: 1,
            })
            .collect();
        let prov = Provenance {
            epsilon: 1.0,
            order_seed: None,
            cloud_hash: String::new(),
        };
        BallMapperGraph::from_parts(balls, vec![(0, 1), (1, 2), (0, 2)], 3, prov).unwrap()
    }

    #[test]
    fn triangle_dot() {
        let dot = emit_dot(&triangle(), None);
        let node_lines = dot
            .lines()
            .filter(|l| l.trim_start().starts_with(|c: char| c.is_ascii_digit()) && l.contains('['))
            .count();
        assert_eq!(node_lines, 3);
        assert_eq!(dot.lines().filter(|l| l.contains("--")).count(), 3);
    }

    #[test]
    fn edgeless_dot() {
        let c = PointCloud::new(vec![vec![0.0], vec![1.0]], vec!["x".into()]).unwrap();
        let g = build_graph(&build_epsilon_net(&c, 0.3, &PointOrder::natural(2)).unwrap());
        assert!(!emit_dot(&g, None).contains("--"));
    }

    #[test]
    fn round_trips() {
        let g = triangle();
        let col = Coloration::from_stored("v", vec![0.1, -2.5, 1e-7]);
        let expected = InterchangeGraph::from_graph(&g, Some(&col));
        assert_eq!(parse_dot(&emit_dot(&g, Some(&col))).unwrap(), expected);
        assert_eq!(parse_graphml(&emit_graphml(&g, Some(&col))).unwrap(), expected);
        let plain = InterchangeGraph::from_graph(&g, None);
        assert_eq!(parse_dot(&emit_dot(&g, None)).unwrap(), plain);
        assert_eq!(parse_graphml(&emit_graphml(&g, None)).unwrap(), plain);
    }

    #[test]
    fn graphml_has_size_and_color_keys() {
        let xml = emit_graphml(&triangle(), None);
        assert!(xml.contains("attr.name=\"size\""));
        assert!(xml.contains("attr.name=\"color\""));
        assert_eq!(xml.matches("<edge ").count(), 3);
    }

    #[test]
    fn malformed_dot_is_an_error() {
        assert!(parse_dot("graph g {\n  0 [size=x];\n}\n").is_err());
    }
}
