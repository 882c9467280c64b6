//! JSON, DOT and SVG output for patterns, graphs and walks.
//!
//! All output is a pure function of its input: fixed canvas, fixed number
//! formatting, nodes and edges in index order.

use std::fmt::Write as _;

use num_rational::Rational64;

use crate::graph::{Family, LatticeGraph};
use crate::lattice::{Point, TileCoord};
use crate::paths::PathObject;
use crate::pattern::FractalPattern;

const CANVAS: f64 = 600.0;
const MARGIN: f64 = 20.0;
const ROW_HEIGHT: f64 = 0.866_025_403_784_438_6; // sqrt(3) / 2

/// Equilateral planar coordinates in fine-tile units, apex at the origin, y down.
pub fn planar(graph: &LatticeGraph, v: u32) -> (f64, f64) {
    let p = graph.position::<Rational64>(v).to_f64();
    (p.x, p.y * ROW_HEIGHT)
}

/// `{ "family", "n", "k", "nodes": [{"id", "x", "y"}], "edges": [[a, b, "tag"]] }`.
pub fn graph_to_json(graph: &LatticeGraph) -> serde_json::Value {
    let nodes: Vec<_> = (0..graph.node_count() as u32)
        .map(|v| {
            let (x, y) = planar(graph, v);
            serde_json::json!({"id": v, "x": round6(x), "y": round6(y)})
        })
        .collect();
    let edges: Vec<_> = graph.edges().iter().map(|e| serde_json::json!([e.a, e.b, e.tag.as_str()])).collect();
    serde_json::json!({
        "family": family_name(graph.family()),
        "n": graph.order(),
        "k": graph.depth(),
        "nodes": nodes,
        "edges": edges,
    })
}

fn family_name(f: Family) -> &'static str {
    match f {
        Family::Overall => "overall",
        Family::Inscribed => "inscribed",
    }
}

fn round6(v: f64) -> f64 {
    (v * 1e6).round() / 1e6
}

/// Graphviz rendering with pinned positions (`neato -n`).
pub fn graph_to_dot(graph: &LatticeGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "graph {}_{}_{} {{", family_name(graph.family()), graph.order(), graph.depth());
    let _ = writeln!(out, "  node [shape=point];");
    for v in 0..graph.node_count() as u32 {
        let (x, y) = planar(graph, v);
        let _ = writeln!(out, "  {v} [pos=\"{:.4},{:.4}!\"];", x, -y);
    }
    for e in graph.edges() {
        let _ = writeln!(out, "  {} -- {} [class={}];", e.a, e.b, e.tag.as_str());
    }
    out.push_str("}\n");
    out
}

struct Canvas {
    scale: f64,
    half: f64,
    body: String,
}

impl Canvas {
    fn new(side: u64) -> Self {
        let scale = (CANVAS - 2.0 * MARGIN) / side.max(1) as f64;
        Canvas { scale, half: side as f64 / 2.0, body: String::new() }
    }

    fn map(&self, x: f64, y: f64) -> (f64, f64) {
        (MARGIN + (x + self.half) * self.scale, MARGIN + y * self.scale)
    }

    fn tiles(&mut self, tiles: impl Iterator<Item = TileCoord>) {
        self.body.push_str("<g class=\"pattern\">\n");
        for t in tiles {
            let pts: Vec<String> = t
                .corners()
                .iter()
                .map(|c| {
                    let p = c.position::<Rational64>().to_f64();
                    let (x, y) = self.map(p.x, p.y * ROW_HEIGHT);
                    format!("{x:.3},{y:.3}")
                })
                .collect();
            let _ = writeln!(self.body, "<polygon class=\"dark\" points=\"{}\"/>", pts.join(" "));
        }
        self.body.push_str("</g>\n");
    }

    fn edges(&mut self, graph: &LatticeGraph) {
        self.body.push_str("<g class=\"edges\">\n");
        for e in graph.edges() {
            let (x1, y1) = self.node(graph, e.a);
            let (x2, y2) = self.node(graph, e.b);
            let _ = writeln!(
                self.body,
                "<line class=\"edge {}\" x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\"/>",
                e.tag.as_str()
            );
        }
        self.body.push_str("</g>\n");
    }

    fn nodes(&mut self, graph: &LatticeGraph) {
        let r = (self.scale * 0.12).clamp(0.8, 4.0);
        self.body.push_str("<g class=\"nodes\">\n");
        for v in 0..graph.node_count() as u32 {
            let (x, y) = self.node(graph, v);
            let _ = writeln!(self.body, "<circle class=\"node\" cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"{r:.3}\"/>");
        }
        self.body.push_str("</g>\n");
    }

    fn node(&self, graph: &LatticeGraph, v: u32) -> (f64, f64) {
        let (x, y) = planar(graph, v);
        self.map(x, y)
    }

    fn finish(self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{CANVAS}\" height=\"{CANVAS}\" viewBox=\"0 0 {CANVAS} {CANVAS}\">"
        );
        out.push_str(
            "<style>.dark{fill:#444;stroke:#222;stroke-width:0.5}.edge{stroke:#999;stroke-width:0.6}\
             .node{fill:#c22}.walk{fill:none;stroke:#1a5fb4;stroke-width:2}.tick{stroke:#e66100;stroke-width:2}</style>\n",
        );
        out.push_str(&self.body);
        out.push_str("</svg>\n");
        out
    }
}

/// Dark tiles of `F_n(k)`.
pub fn pattern_svg(pattern: &FractalPattern) -> String {
    let mut c = Canvas::new(pattern.side());
    c.tiles(pattern.fine_tiles());
    c.finish()
}

/// Graph edges and node dots, over a pale pattern.
pub fn graph_svg(graph: &LatticeGraph, pattern: &FractalPattern) -> String {
    let mut c = Canvas::new(graph.side());
    c.tiles(pattern.fine_tiles());
    c.edges(graph);
    c.nodes(graph);
    c.finish()
}

/// A walk over the pattern. Tiling walks get a tick across the middle of
/// every edge.
pub fn path_svg(graph: &LatticeGraph, pattern: &FractalPattern, path: &PathObject) -> String {
    let mut c = Canvas::new(graph.side());
    c.tiles(pattern.fine_tiles());
    let mut pts: Vec<(f64, f64)> = path.nodes.iter().map(|&v| c.node(graph, v)).collect();
    if path.family.is_cycle() {
        if let Some(&first) = pts.first() {
            pts.push(first);
        }
    }
    let list: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.3},{y:.3}")).collect();
    let _ = writeln!(c.body, "<polyline class=\"walk\" points=\"{}\"/>", list.join(" "));
    if graph.family() == Family::Overall {
        let len = c.scale * 0.15;
        c.body.push_str("<g class=\"ticks\">\n");
        for (a, b) in path.steps() {
            let (x1, y1) = c.node(graph, a);
            let (x2, y2) = c.node(graph, b);
            let (mx, my) = ((x1 + x2) / 2.0, (y1 + y2) / 2.0);
            let norm = ((x2 - x1).powi(2) + (y2 - y1).powi(2)).sqrt().max(f64::EPSILON);
            let (nx, ny) = (-(y2 - y1) / norm * len, (x2 - x1) / norm * len);
            let _ = writeln!(
                c.body,
                "<line class=\"tick\" x1=\"{:.3}\" y1=\"{:.3}\" x2=\"{:.3}\" y2=\"{:.3}\"/>",
                mx - nx,
                my - ny,
                mx + nx,
                my + ny
            );
        }
        c.body.push_str("</g>\n");
    }
    c.finish()
}

/// Planar point of a lattice node as `f64`, for callers that draw themselves.
pub fn node_point(graph: &LatticeGraph, v: u32) -> Point<f64> {
    let (x, y) = planar(graph, v);
    Point { x, y }
}
