//! Seeded spring-electrical layout (Fruchterman-Reingold) with per-component packing.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bmgraph::{connected_components, BallMapperGraph};

/// Vertex positions and radii in abstract plot units.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    pub positions: Vec<[f64; 2]>,
    pub radii: Vec<f64>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LayoutOptions {
    pub seed: u64,
    pub iterations: usize,
    /// Natural edge length of the spring model.
    pub rest_length: f64,
    pub min_radius: f64,
    pub max_radius: f64,
    /// Empty space kept between packed components.
    pub component_gap: f64,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            iterations: 300,
            rest_length: 1.0,
            min_radius: 0.12,
            max_radius: 0.45,
            component_gap: 0.6,
        }
    }
}

/// `min + (max - min) * sqrt(size / size_max)`: ball area grows with its size.
pub fn radius_for(size: usize, size_max: usize, min_radius: f64, max_radius: f64) -> f64 {
    if size_max == 0 {
        return min_radius;
    }
    min_radius + (max_radius - min_radius) * (size as f64 / size_max as f64).sqrt()
}

/// Lays out `graph` with default options, the given seed and iteration budget.
pub fn layout_force_directed(graph: &BallMapperGraph, seed: u64, iterations: usize) -> Layout {
    layout_with(
        graph,
        &LayoutOptions {
            seed,
            iterations,
            ..LayoutOptions::default()
        },
    )
}

pub fn layout_with(graph: &BallMapperGraph, opts: &LayoutOptions) -> Layout {
    let n = graph.vertex_count();
    let size_max = graph.balls().iter().map(|b| b.size).max().unwrap_or(0);
    let radii: Vec<f64> = graph
        .balls()
        .iter()
        .map(|b| radius_for(b.size, size_max, opts.min_radius, opts.max_radius))
        .collect();
    if n == 0 {
        return Layout {
            positions: Vec::new(),
            radii,
            seed: opts.seed,
        };
    }

    let adjacency = graph.adjacency();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut positions = vec![[0.0; 2]; n];
    let components = connected_components(graph).components;

    // lay out each component around its own origin, then pack
    let mut boxes = Vec::with_capacity(components.len());
    for comp in &components {
        let local = spring_layout(comp, &adjacency, opts, &mut rng);
        let mut bbox = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for (&v, p) in comp.iter().zip(&local) {
            positions[v] = *p;
            let r = radii[v];
            bbox[0] = bbox[0].min(p[0] - r);
            bbox[1] = bbox[1].min(p[1] - r);
            bbox[2] = bbox[2].max(p[0] + r);
            bbox[3] = bbox[3].max(p[1] + r);
        }
        boxes.push(bbox);
    }

    if components.len() > 1 {
        pack_components(&components, &boxes, opts.component_gap, &mut positions);
    }
    separate_duplicates(&mut positions, opts.rest_length);

    Layout {
        positions,
        radii,
        seed: opts.seed,
    }
}

fn spring_layout(
    comp: &[usize],
    adjacency: &[Vec<usize>],
    opts: &LayoutOptions,
    rng: &mut ChaCha8Rng,
) -> Vec<[f64; 2]> {
    let m = comp.len();
    if m == 1 {
        return vec![[0.0, 0.0]];
    }
    let k = opts.rest_length;
    let side = k * (m as f64).sqrt();
    let mut pos: Vec<[f64; 2]> = (0..m)
        .map(|_| [rng.random_range(-0.5..0.5) * side, rng.random_range(-0.5..0.5) * side])
        .collect();

    // local index of each global vertex in this component
    let local: std::collections::HashMap<usize, usize> =
        comp.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let edges: Vec<(usize, usize)> = comp
        .iter()
        .enumerate()
        .flat_map(|(i, &v)| {
            adjacency[v]
                .iter()
                .filter(move |&&w| w > v)
                .map(|w| (i, local[w]))
                .collect::<Vec<_>>()
        })
        .collect();

    let t0 = side / 10.0 + k;
    let min_d = 1e-9 * k;
    let mut disp = vec![[0.0; 2]; m];
    for iter in 0..opts.iterations {
        disp.iter_mut().for_each(|d| *d = [0.0, 0.0]);
        for i in 0..m {
            for j in (i + 1)..m {
                let (dx, dy, d) = delta(pos[i], pos[j], i, j, min_d);
                let f = k * k / d;
                let (fx, fy) = (dx / d * f, dy / d * f);
                disp[i][0] += fx;
                disp[i][1] += fy;
                disp[j][0] -= fx;
                disp[j][1] -= fy;
            }
        }
        for &(i, j) in &edges {
            let (dx, dy, d) = delta(pos[i], pos[j], i, j, min_d);
            let f = d * d / k;
            let (fx, fy) = (dx / d * f, dy / d * f);
            disp[i][0] -= fx;
            disp[i][1] -= fy;
            disp[j][0] += fx;
            disp[j][1] += fy;
        }
        let temperature = t0 * (1.0 - iter as f64 / opts.iterations as f64);
        for (p, d) in pos.iter_mut().zip(&disp) {
            let len = d[0].hypot(d[1]);
            if len > 0.0 {
                let step = len.min(temperature);
                p[0] += d[0] / len * step;
                p[1] += d[1] / len * step;
            }
        }
    }

    let cx = pos.iter().map(|p| p[0]).sum::<f64>() / m as f64;
    let cy = pos.iter().map(|p| p[1]).sum::<f64>() / m as f64;
    pos.iter().map(|p| [p[0] - cx, p[1] - cy]).collect()
}

/// Vector from `b` to `a` and its length, with coincident points pushed apart along a
/// deterministic direction.
fn delta(a: [f64; 2], b: [f64; 2], i: usize, j: usize, min_d: f64) -> (f64, f64, f64) {
    let (dx, dy) = (a[0] - b[0], a[1] - b[1]);
    let d = dx.hypot(dy);
    if d >= min_d {
        (dx, dy, d)
    } else {
        let angle = (i * 31 + j * 17) as f64;
        (angle.cos() * min_d, angle.sin() * min_d, min_d)
    }
}

/// Shelf packing: components left to right in rows, in component order.
fn pack_components(
    components: &[Vec<usize>],
    boxes: &[[f64; 4]],
    gap: f64,
    positions: &mut [[f64; 2]],
) {
    let total_area: f64 = boxes
        .iter()
        .map(|b| (b[2] - b[0] + gap) * (b[3] - b[1] + gap))
        .sum();
    let widest = boxes.iter().map(|b| b[2] - b[0]).fold(0.0, f64::max);
    let row_width = widest.max(total_area.sqrt() * 1.2);

    let (mut x, mut y, mut row_height) = (0.0f64, 0.0f64, 0.0f64);
    for (comp, b) in components.iter().zip(boxes) {
        let (w, h) = (b[2] - b[0], b[3] - b[1]);
        if x > 0.0 && x + w > row_width {
            x = 0.0;
            y -= row_height + gap;
            row_height = 0.0;
        }
        // move the box's top-left corner to (x, y)
        let (ox, oy) = (x - b[0], y - b[3]);
        for &v in comp {
            positions[v][0] += ox;
            positions[v][1] += oy;
        }
        x += w + gap;
        row_height = row_height.max(h);
    }
}

fn separate_duplicates(positions: &mut [[f64; 2]], k: f64) {
    let mut seen = HashSet::new();
    for (i, p) in positions.iter_mut().enumerate() {
        while !seen.insert((p[0].to_bits(), p[1].to_bits())) {
            p[0] += 1e-6 * k * (1 + i % 7) as f64;
        }
    }
}
