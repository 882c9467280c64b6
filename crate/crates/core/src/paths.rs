//! Path and cycle objects of the six covering families, plus an independent
//! validity checker that works from the graph's edge list alone.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::direction::{direction_string, is_wellformed_string, DirectionCode};
use crate::graph::{Family, LatticeGraph};
use crate::lattice::{Corner, TileCoord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathFamily {
    /// Hamiltonian path, leftmost to rightmost node of the inscribed graph.
    #[serde(rename = "hpath")]
    HPath,
    /// H-path whose turns are all well-formed.
    #[serde(rename = "wpath")]
    WPath,
    /// Covering path of the inscribed graph minus one corner.
    #[serde(rename = "zpath")]
    ZPath,
    /// Hamiltonian cycle of the inscribed graph.
    #[serde(rename = "ccycle")]
    CCycle,
    /// Tiling path of the overall graph.
    #[serde(rename = "spath")]
    SPath,
    /// Tiling cycle of the overall graph.
    #[serde(rename = "dcycle")]
    DCycle,
}

impl PathFamily {
    pub const ALL: [PathFamily; 6] = [
        PathFamily::HPath,
        PathFamily::WPath,
        PathFamily::ZPath,
        PathFamily::CCycle,
        PathFamily::SPath,
        PathFamily::DCycle,
    ];

    pub fn graph_family(self) -> Family {
        match self {
            PathFamily::SPath | PathFamily::DCycle => Family::Overall,
            _ => Family::Inscribed,
        }
    }

    pub fn is_cycle(self) -> bool {
        matches!(self, PathFamily::CCycle | PathFamily::DCycle)
    }

    pub fn name(self) -> &'static str {
        match self {
            PathFamily::HPath => "hpath",
            PathFamily::WPath => "wpath",
            PathFamily::ZPath => "zpath",
            PathFamily::CCycle => "ccycle",
            PathFamily::SPath => "spath",
            PathFamily::DCycle => "dcycle",
        }
    }
}

impl fmt::Display for PathFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for PathFamily {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PathFamily::ALL
            .into_iter()
            .find(|f| f.name() == s || f.name()[..1].eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown family '{s}' (expected one of hpath, wpath, zpath, ccycle, spath, dcycle)"))
    }
}

/// An enumerated path or cycle. Cycles list each node once; the closing edge
/// back to the first node is implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PathObject {
    pub family: PathFamily,
    pub n: u64,
    pub k: u32,
    pub nodes: Vec<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<DirectionCode>>,
}

impl PathObject {
    /// Wraps a node sequence, attaching direction codes for inscribed-graph objects.
    pub fn new(family: PathFamily, graph: &LatticeGraph, nodes: Vec<u32>) -> Self {
        let directions = match graph.family() {
            Family::Inscribed => {
                let tiles: Vec<TileCoord> = nodes.iter().map(|&v| graph.tile_of(v).expect("inscribed node")).collect();
                direction_string(&tiles, family.is_cycle()).ok()
            }
            Family::Overall => None,
        };
        PathObject { family, n: graph.order(), k: graph.depth(), nodes, directions }
    }

    /// Edge list in walk order, including the closing edge of a cycle.
    pub fn steps(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self.nodes.windows(2).map(|w| (w[0], w[1])).collect();
        if self.family.is_cycle() && self.nodes.len() > 2 {
            out.push((self.nodes[self.nodes.len() - 1], self.nodes[0]));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("{family} objects live on the {expected} graph, got {actual}")]
    WrongGraph { family: PathFamily, expected: Family, actual: Family },
    #[error("node {0} repeats")]
    Repeated(u32),
    #[error("node {0} does not exist")]
    UnknownNode(u32),
    #[error("{0}-{1} is not an edge")]
    MissingEdge(u32, u32),
    #[error("covers {covered} nodes, expected {expected}")]
    Coverage { covered: usize, expected: usize },
    #[error("runs {from}->{to}, expected {want_from}->{want_to}")]
    Endpoints { from: u32, to: u32, want_from: u32, want_to: u32 },
    #[error("uses dark tile {0} twice")]
    TileReused(u32),
    #[error("has {got} edges, expected {expected}")]
    Length { got: usize, expected: usize },
    #[error("contains a wrong turn")]
    NotWellFormed,
    #[error("visits the removed corner")]
    RemovedCorner,
}

/// Independent check of every invariant of a path object of `family`.
///
/// `removed` names the corner missing from a Z-path's grid.
pub fn check_path(graph: &LatticeGraph, obj: &PathObject, removed: Corner) -> Result<(), PathError> {
    let family = obj.family;
    if graph.family() != family.graph_family() {
        return Err(PathError::WrongGraph { family, expected: family.graph_family(), actual: graph.family() });
    }
    let mut seen = HashSet::new();
    for &v in &obj.nodes {
        if v as usize >= graph.node_count() {
            return Err(PathError::UnknownNode(v));
        }
        if !seen.insert(v) {
            return Err(PathError::Repeated(v));
        }
    }
    let steps = obj.steps();
    for &(a, b) in &steps {
        if graph.edge_between(a, b).is_none() {
            return Err(PathError::MissingEdge(a, b));
        }
    }
    let corners = graph.corners();
    let first = *obj.nodes.first().ok_or(PathError::Coverage { covered: 0, expected: 1 })?;
    let last = *obj.nodes.last().unwrap();
    let expect_ends = |from: u32, to: u32| {
        if (first, last) == (from, to) {
            Ok(())
        } else {
            Err(PathError::Endpoints { from: first, to: last, want_from: from, want_to: to })
        }
    };
    match family {
        PathFamily::HPath | PathFamily::WPath | PathFamily::CCycle => {
            if obj.nodes.len() != graph.node_count() {
                return Err(PathError::Coverage { covered: obj.nodes.len(), expected: graph.node_count() });
            }
            if family != PathFamily::CCycle {
                expect_ends(corners.left, corners.right)?;
            }
            if family == PathFamily::WPath {
                let tiles: Vec<_> = obj.nodes.iter().map(|&v| graph.tile_of(v).unwrap()).collect();
                let dirs = direction_string(&tiles, false).map_err(|_| PathError::NotWellFormed)?;
                if !is_wellformed_string(&dirs, false) {
                    return Err(PathError::NotWellFormed);
                }
            }
        }
        PathFamily::ZPath => {
            if seen.contains(&corners.get(removed)) {
                return Err(PathError::RemovedCorner);
            }
            if obj.nodes.len() + 1 != graph.node_count() {
                return Err(PathError::Coverage { covered: obj.nodes.len(), expected: graph.node_count() - 1 });
            }
            let (from, to) = z_endpoints(removed);
            expect_ends(corners.get(from), corners.get(to))?;
        }
        PathFamily::SPath | PathFamily::DCycle => {
            let tiles = graph.tiles().len();
            if steps.len() != tiles {
                return Err(PathError::Length { got: steps.len(), expected: tiles });
            }
            let mut used = HashSet::new();
            for &(a, b) in &steps {
                let t = graph.edge_between(a, b).and_then(|e| e.tile).expect("overall edges carry a tile");
                if !used.insert(t) {
                    return Err(PathError::TileReused(t));
                }
            }
            if family == PathFamily::SPath {
                expect_ends(corners.left, corners.right)?;
            }
        }
    }
    Ok(())
}

/// Start and end corner of a Z-path whose grid lacks `removed`.
pub fn z_endpoints(removed: Corner) -> (Corner, Corner) {
    match removed {
        Corner::Top => (Corner::Left, Corner::Right),
        Corner::Left => (Corner::Top, Corner::Right),
        Corner::Right => (Corner::Left, Corner::Top),
    }
}

/// True when a Hamiltonian cycle on an inscribed graph has only well-formed turns.
pub fn is_wellformed_cycle(graph: &LatticeGraph, nodes: &[u32]) -> bool {
    let tiles: Vec<_> = nodes.iter().map(|&v| graph.tile_of(v).expect("inscribed node")).collect();
    direction_string(&tiles, true).map(|d| is_wellformed_string(&d, true)).unwrap_or(false)
}

/// True when an open walk on an inscribed graph has only well-formed turns.
pub fn is_wellformed_path(graph: &LatticeGraph, nodes: &[u32]) -> bool {
    let tiles: Vec<_> = nodes.iter().map(|&v| graph.tile_of(v).expect("inscribed node")).collect();
    direction_string(&tiles, false).map(|d| is_wellformed_string(&d, false)).unwrap_or(false)
}
