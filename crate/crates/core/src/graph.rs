//! Explicit construction of the Overall Graph `O_n(k)` and the Inscribed
//! Graph `I_n^k`.
//!
//! Both graphs live on the unit lattice of the order-`n^k` triangle. Overall
//! nodes are the corner points of the dark tiles of `F_n(k)`, merged by exact
//! position; inscribed nodes are the dark tiles themselves (their centroids),
//! indexed by their base-`T_n` address so that inscribed node `i` and overall
//! tile `i` denote the same dark tile.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{shared_vertex, triangular, up_tiles, Corner, GridPoint, LatticeError, Point, TileCoord};
use crate::pattern::{build_pattern, TileAddress};
use crate::scalar::Coord;
use crate::sizes;

pub const DEFAULT_NODE_BUDGET: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("{family} graph for n={n}, k={k} needs {needed} nodes, over the budget of {budget}")]
    OverBudget { family: Family, n: u64, k: u32, needed: u128, budget: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Overall,
    Inscribed,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Overall => "overall",
            Family::Inscribed => "inscribed",
        })
    }
}

/// Edge annotation. `Intra` edges live inside one base-order grid; `Side`
/// and `Inner` edges connect two copies of a smaller approximation, `Inner`
/// when the macro shared vertex is interior.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeTag {
    Intra,
    Side,
    Inner,
}

impl EdgeTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            EdgeTag::Intra => "intra",
            EdgeTag::Side => "side",
            EdgeTag::Inner => "inner",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub a: u32,
    pub b: u32,
    pub tag: EdgeTag,
    /// Owning dark tile (overall family).
    pub tile: Option<u32>,
}

/// What a node stands for, at the finest lattice scale.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeSite {
    Point(GridPoint),
    Tile(TileCoord),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CornerNodes {
    pub left: u32,
    pub right: u32,
    pub top: u32,
}

impl CornerNodes {
    pub fn get(&self, c: Corner) -> u32 {
        match c {
            Corner::Left => self.left,
            Corner::Right => self.right,
            Corner::Top => self.top,
        }
    }
}

/// An inscribed-graph edge joining two copies of `I_n^{level-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectingEdge {
    pub level: u32,
    pub copy_a: TileAddress,
    pub copy_b: TileAddress,
    pub corner_a: Corner,
    pub corner_b: Corner,
    pub node_a: u32,
    pub node_b: u32,
    pub kind: EdgeTag,
    /// For inner edges: the corner node of the third copy around the
    /// interior vertex, which a v-shape may take over.
    pub v_option: Option<u32>,
}

#[derive(Debug, Clone, Copy)]
pub struct BuildOptions {
    pub node_budget: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { node_budget: DEFAULT_NODE_BUDGET }
    }
}

#[derive(Debug, Clone)]
pub struct LatticeGraph {
    family: Family,
    n: u64,
    k: u32,
    sites: Vec<NodeSite>,
    adjacency: Vec<Vec<u32>>,
    edges: Vec<Edge>,
    edge_lookup: HashMap<(u32, u32), usize>,
    corners: CornerNodes,
    tiles: Vec<[u32; 3]>,
    connections: Vec<ConnectingEdge>,
    site_lookup: HashMap<NodeSite, u32>,
}

impl LatticeGraph {
    #[allow(clippy::too_many_arguments)]
    fn assemble(
        family: Family,
        n: u64,
        k: u32,
        sites: Vec<NodeSite>,
        mut edges: Vec<Edge>,
        corners: CornerNodes,
        tiles: Vec<[u32; 3]>,
        connections: Vec<ConnectingEdge>,
    ) -> Self {
        let mut adjacency = vec![Vec::new(); sites.len()];
        let mut edge_lookup = HashMap::with_capacity(edges.len());
        for (idx, e) in edges.iter_mut().enumerate() {
            if e.a > e.b {
                std::mem::swap(&mut e.a, &mut e.b);
            }
            adjacency[e.a as usize].push(e.b);
            adjacency[e.b as usize].push(e.a);
            let dup = edge_lookup.insert((e.a, e.b), idx);
            debug_assert!(dup.is_none(), "duplicate edge {:?}", e);
        }
        for list in &mut adjacency {
            list.sort_unstable();
        }
        let site_lookup = sites.iter().enumerate().map(|(i, s)| (*s, i as u32)).collect();
        LatticeGraph { family, n, k, sites, adjacency, edges, edge_lookup, corners, tiles, connections, site_lookup }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> u64 {
        self.n
    }

    pub fn depth(&self) -> u32 {
        self.k
    }

    /// Side length of the ambient triangle, `n^k`.
    pub fn side(&self) -> u64 {
        self.n.pow(self.k)
    }

    pub fn node_count(&self) -> usize {
        self.sites.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbours(&self, v: u32) -> &[u32] {
        &self.adjacency[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.adjacency[v as usize].len()
    }

    pub fn edge_between(&self, a: u32, b: u32) -> Option<&Edge> {
        let key = if a < b { (a, b) } else { (b, a) };
        self.edge_lookup.get(&key).map(|&i| &self.edges[i])
    }

    pub fn corners(&self) -> CornerNodes {
        self.corners
    }

    pub fn site(&self, v: u32) -> NodeSite {
        self.sites[v as usize]
    }

    /// Fine-scale tile of an inscribed node.
    pub fn tile_of(&self, v: u32) -> Option<TileCoord> {
        match self.sites[v as usize] {
            NodeSite::Tile(t) => Some(t),
            NodeSite::Point(_) => None,
        }
    }

    /// Fine-scale grid point of an overall node.
    pub fn point_of(&self, v: u32) -> Option<GridPoint> {
        match self.sites[v as usize] {
            NodeSite::Point(p) => Some(p),
            NodeSite::Tile(_) => None,
        }
    }

    pub fn node_at_point(&self, p: GridPoint) -> Option<u32> {
        self.site_lookup.get(&NodeSite::Point(p)).copied()
    }

    pub fn node_at_tile(&self, t: TileCoord) -> Option<u32> {
        self.site_lookup.get(&NodeSite::Tile(t)).copied()
    }

    /// Dark tiles of an overall graph as node triples `[top, left, right]`.
    pub fn tiles(&self) -> &[[u32; 3]] {
        &self.tiles
    }

    pub fn connections(&self) -> &[ConnectingEdge] {
        &self.connections
    }

    /// Exact planar position of a node.
    pub fn position<S: Coord>(&self, v: u32) -> Point<S> {
        match self.sites[v as usize] {
            NodeSite::Point(p) => p.position(),
            NodeSite::Tile(t) => t.centroid(),
        }
    }
}

fn check_budget(family: Family, n: u64, k: u32, needed: u128, opts: &BuildOptions) -> Result<(), GraphError> {
    if needed > u128::from(opts.node_budget) {
        return Err(GraphError::OverBudget { family, n, k, needed, budget: opts.node_budget });
    }
    Ok(())
}

fn check_order(n: u64, k: u32) -> Result<(), GraphError> {
    if n < 2 {
        return Err(LatticeError::DegenerateOrder(n as u32).into());
    }
    if k < 1 {
        return Err(LatticeError::DegenerateDepth(k).into());
    }
    Ok(())
}

/// Builds `O_n(k)`: corners of the dark tiles as nodes, their sides as edges.
pub fn build_overall(n: u64, k: u32, opts: &BuildOptions) -> Result<LatticeGraph, GraphError> {
    check_order(n, k)?;
    let needed = sizes::overall_nodes_explicit::<u128>(n, k).unwrap_or(u128::MAX);
    check_budget(Family::Overall, n, k, needed, opts)?;

    let pattern = build_pattern(n, k)?;
    let fine: Vec<TileCoord> = pattern.fine_tiles().collect();
    let mut points: BTreeMap<GridPoint, u32> = BTreeMap::new();
    for t in &fine {
        for p in t.corners() {
            points.insert(p, 0);
        }
    }
    for (i, slot) in points.values_mut().enumerate() {
        *slot = i as u32;
    }
    let sites: Vec<NodeSite> = points.keys().map(|&p| NodeSite::Point(p)).collect();

    let mut tiles = Vec::with_capacity(fine.len());
    let mut edges = Vec::with_capacity(3 * fine.len());
    for (ti, t) in fine.iter().enumerate() {
        let [a, b, c] = t.corners().map(|p| points[&p]);
        tiles.push([a, b, c]);
        for (u, v) in [(a, b), (b, c), (a, c)] {
            edges.push(Edge { a: u, b: v, tag: EdgeTag::Intra, tile: Some(ti as u32) });
        }
    }
    let side = pattern.side();
    let corners = CornerNodes {
        left: points[&Corner::Left.grid_point(side)],
        right: points[&Corner::Right.grid_point(side)],
        top: points[&Corner::Top.grid_point(side)],
    };
    Ok(LatticeGraph::assemble(Family::Overall, n, k, sites, edges, corners, tiles, Vec::new()))
}

/// Generator-level inscribed edges `(a, b)` with `a < b` in up-tile index order.
fn generator_edges(n: u64) -> Vec<(TileCoord, TileCoord)> {
    let tiles: Vec<TileCoord> = up_tiles(n).collect();
    let mut out = Vec::new();
    for (i, &a) in tiles.iter().enumerate() {
        for &b in &tiles[i + 1..] {
            if shared_vertex(a, b).is_some() {
                out.push((a, b));
            }
        }
    }
    out
}

/// Corner roles joined by the connecting edge of macro tiles `a < b`.
fn connecting_roles(a: TileCoord, b: TileCoord) -> (Corner, Corner) {
    if b.row == a.row {
        (Corner::Right, Corner::Left)
    } else if b.col == a.col {
        (Corner::Left, Corner::Top)
    } else {
        (Corner::Right, Corner::Top)
    }
}

/// The up tile around interior vertex `p` that is neither `a` nor `b`, with
/// the role `p` plays for it.
fn third_tile(p: GridPoint, a: TileCoord, b: TileCoord) -> (TileCoord, Corner) {
    let around = [
        (TileCoord::up(p.row, p.pos), Corner::Top),
        (TileCoord::up(p.row - 1, p.pos - 1), Corner::Right),
        (TileCoord::up(p.row - 1, p.pos), Corner::Left),
    ];
    around.into_iter().find(|(t, _)| *t != a && *t != b).expect("three up tiles meet at an interior vertex")
}

/// Builds `I_n^k` by node rewriting: `T_n` copies of `I_n^{k-1}` placed on
/// the generator's dark tiles, joined by one connecting edge per
/// generator-level inscribed edge.
pub fn build_inscribed(n: u64, k: u32, opts: &BuildOptions) -> Result<LatticeGraph, GraphError> {
    check_order(n, k)?;
    let needed = sizes::inscribed_nodes::<u128>(n, k).unwrap_or(u128::MAX);
    check_budget(Family::Inscribed, n, k, needed, opts)?;

    let t_n = triangular(n) as u32;
    let gen_edges = generator_edges(n);
    let idx = |t: TileCoord| t.up_index() as u32;

    let mut edges: Vec<Edge> =
        gen_edges.iter().map(|&(a, b)| Edge { a: idx(a), b: idx(b), tag: EdgeTag::Intra, tile: None }).collect();
    let mut corners = CornerNodes {
        left: idx(Corner::Left.generator_tile(n)),
        right: idx(Corner::Right.generator_tile(n)),
        top: idx(Corner::Top.generator_tile(n)),
    };
    let mut connections: Vec<ConnectingEdge> = Vec::new();
    let mut m: u32 = t_n;

    for level in 2..=k {
        let mut next_edges = Vec::with_capacity(edges.len() * t_n as usize + gen_edges.len());
        let mut next_conn = Vec::with_capacity(connections.len() * t_n as usize + gen_edges.len());
        for d in 0..t_n {
            let off = d * m;
            next_edges.extend(edges.iter().map(|e| Edge { a: e.a + off, b: e.b + off, ..*e }));
            next_conn.extend(connections.iter().map(|c| {
                let prefix = |addr: &TileAddress| {
                    let mut v = Vec::with_capacity(addr.depth() + 1);
                    v.push(d);
                    v.extend_from_slice(&addr.0);
                    TileAddress(v)
                };
                ConnectingEdge {
                    copy_a: prefix(&c.copy_a),
                    copy_b: prefix(&c.copy_b),
                    node_a: c.node_a + off,
                    node_b: c.node_b + off,
                    v_option: c.v_option.map(|v| v + off),
                    ..c.clone()
                }
            }));
        }
        for &(a, b) in &gen_edges {
            let (ra, rb) = connecting_roles(a, b);
            let node_a = idx(a) * m + corners.get(ra);
            let node_b = idx(b) * m + corners.get(rb);
            let p = shared_vertex(a, b).expect("generator edge");
            let (kind, v_option) = if p.is_interior(n) {
                let (third, role) = third_tile(p, a, b);
                (EdgeTag::Inner, Some(idx(third) * m + corners.get(role)))
            } else {
                (EdgeTag::Side, None)
            };
            next_edges.push(Edge { a: node_a, b: node_b, tag: kind, tile: None });
            next_conn.push(ConnectingEdge {
                level,
                copy_a: TileAddress(vec![idx(a)]),
                copy_b: TileAddress(vec![idx(b)]),
                corner_a: ra,
                corner_b: rb,
                node_a,
                node_b,
                kind,
                v_option,
            });
        }
        corners = CornerNodes {
            left: idx(Corner::Left.generator_tile(n)) * m + corners.left,
            right: idx(Corner::Right.generator_tile(n)) * m + corners.right,
            top: idx(Corner::Top.generator_tile(n)) * m + corners.top,
        };
        edges = next_edges;
        connections = next_conn;
        m *= t_n;
    }

    let pattern = build_pattern(n, k)?;
    let sites: Vec<NodeSite> = pattern.fine_tiles().map(NodeSite::Tile).collect();
    debug_assert_eq!(sites.len() as u32, m);
    Ok(LatticeGraph::assemble(Family::Inscribed, n, k, sites, edges, corners, Vec::new(), connections))
}
