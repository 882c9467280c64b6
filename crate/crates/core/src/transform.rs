//! Conversions between well-formed inscribed walks and tiling walks.
//!
//! A well-formed walk through dark tiles `t_1 .. t_m` becomes a tiling walk
//! through the points `v_j = shared_vertex(t_j, t_{j+1})`: the `j`-th tiling
//! edge is the side of `t_j` from `v_{j-1}` to `v_j`. Open walks pin `v_0`
//! and `v_m` to the leftmost and rightmost grid points; closed walks take the
//! shared vertices cyclically. The inverse reads off the owning tile of each
//! tiling edge.

use thiserror::Error;

use crate::graph::{Family, LatticeGraph};
use crate::lattice::{shared_vertex, GridPoint};
use crate::paths::{PathFamily, PathObject};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("expected a {expected} object, got {actual}")]
    WrongFamily { expected: &'static str, actual: PathFamily },
    #[error("inscribed and overall graphs must be built for the same (n, k) and passed in that order")]
    MismatchedGraphs,
    #[error("consecutive tiles at step {0} do not touch")]
    NotAdjacent(usize),
    #[error("turn at step {0} is not well-formed: the tiling edge would collapse to a point")]
    Collapsed(usize),
    #[error("{0}-{1} is not an edge of the graph")]
    NotAnEdge(u32, u32),
    #[error("result repeats grid point {0}")]
    SelfIntersecting(GridPoint),
}

fn check_graphs(inscribed: &LatticeGraph, overall: &LatticeGraph) -> Result<(), TransformError> {
    if inscribed.family() != Family::Inscribed
        || overall.family() != Family::Overall
        || inscribed.order() != overall.order()
        || inscribed.depth() != overall.depth()
    {
        return Err(TransformError::MismatchedGraphs);
    }
    Ok(())
}

/// Rotates a cycle to start at its smallest node, oriented so the second
/// node is smaller than the last.
pub fn canonical_cycle(nodes: &[u32]) -> Vec<u32> {
    let Some((pos, _)) = nodes.iter().enumerate().min_by_key(|(_, v)| **v) else {
        return Vec::new();
    };
    let mut out: Vec<u32> = nodes[pos..].iter().chain(&nodes[..pos]).copied().collect();
    if out.len() > 2 && out[1] > out[out.len() - 1] {
        out[1..].reverse();
    }
    out
}

/// Tiling points of a well-formed tile walk.
fn tick_points(inscribed: &LatticeGraph, nodes: &[u32], closed: bool) -> Result<Vec<GridPoint>, TransformError> {
    let tiles: Vec<_> = nodes.iter().map(|&v| inscribed.tile_of(v).expect("inscribed node")).collect();
    let m = tiles.len();
    let pairs = if closed { m } else { m - 1 };
    let mut shared = Vec::with_capacity(m + 1);
    for j in 0..pairs {
        let p = shared_vertex(tiles[j], tiles[(j + 1) % m]).ok_or(TransformError::NotAdjacent(j))?;
        shared.push(p);
    }
    let points = if closed {
        // edge j runs from shared[j-1] to shared[j]; start the walk at shared[m-1]
        let mut pts = Vec::with_capacity(m);
        pts.push(shared[m - 1]);
        pts.extend_from_slice(&shared[..m - 1]);
        pts
    } else {
        let side = inscribed.side();
        let mut pts = Vec::with_capacity(m + 1);
        pts.push(GridPoint::new(side, 0));
        pts.extend(shared);
        pts.push(GridPoint::new(side, side));
        pts
    };
    let steps = if closed { m } else { points.len() - 1 };
    for j in 0..steps {
        if points[j] == points[(j + 1) % points.len()] {
            return Err(TransformError::Collapsed(j));
        }
    }
    let mut seen = std::collections::HashSet::new();
    for p in &points {
        if !seen.insert(*p) {
            return Err(TransformError::SelfIntersecting(*p));
        }
    }
    Ok(points)
}

fn to_overall_nodes(overall: &LatticeGraph, points: &[GridPoint]) -> Vec<u32> {
    points.iter().map(|&p| overall.node_at_point(p).expect("corner of a dark tile")).collect()
}

/// Maps a W-path on `I_n^k` to the S-path on `O_n(k)` with the same tile order.
pub fn transform_w_to_s(
    w: &PathObject,
    inscribed: &LatticeGraph,
    overall: &LatticeGraph,
) -> Result<PathObject, TransformError> {
    if !matches!(w.family, PathFamily::WPath | PathFamily::HPath) {
        return Err(TransformError::WrongFamily { expected: "wpath", actual: w.family });
    }
    check_graphs(inscribed, overall)?;
    let points = tick_points(inscribed, &w.nodes, false)?;
    Ok(PathObject::new(PathFamily::SPath, overall, to_overall_nodes(overall, &points)))
}

/// Maps a well-formed Hamiltonian cycle on `I_n^k` to a D-cycle on `O_n(k)`.
pub fn transform_c_to_d(
    c: &PathObject,
    inscribed: &LatticeGraph,
    overall: &LatticeGraph,
) -> Result<PathObject, TransformError> {
    if c.family != PathFamily::CCycle {
        return Err(TransformError::WrongFamily { expected: "ccycle", actual: c.family });
    }
    check_graphs(inscribed, overall)?;
    let points = tick_points(inscribed, &c.nodes, true)?;
    let nodes = canonical_cycle(&to_overall_nodes(overall, &points));
    Ok(PathObject::new(PathFamily::DCycle, overall, nodes))
}

fn owning_tiles(overall: &LatticeGraph, obj: &PathObject) -> Result<Vec<u32>, TransformError> {
    obj.steps()
        .into_iter()
        .map(|(a, b)| overall.edge_between(a, b).and_then(|e| e.tile).ok_or(TransformError::NotAnEdge(a, b)))
        .collect()
}

/// Inverse of [`transform_w_to_s`].
pub fn transform_s_to_w(
    s: &PathObject,
    inscribed: &LatticeGraph,
    overall: &LatticeGraph,
) -> Result<PathObject, TransformError> {
    if s.family != PathFamily::SPath {
        return Err(TransformError::WrongFamily { expected: "spath", actual: s.family });
    }
    check_graphs(inscribed, overall)?;
    // overall tile i and inscribed node i are the same dark tile
    let nodes = owning_tiles(overall, s)?;
    Ok(PathObject::new(PathFamily::WPath, inscribed, nodes))
}

/// Inverse of [`transform_c_to_d`].
pub fn transform_d_to_c(
    d: &PathObject,
    inscribed: &LatticeGraph,
    overall: &LatticeGraph,
) -> Result<PathObject, TransformError> {
    if d.family != PathFamily::DCycle {
        return Err(TransformError::WrongFamily { expected: "dcycle", actual: d.family });
    }
    check_graphs(inscribed, overall)?;
    let nodes = canonical_cycle(&owning_tiles(overall, d)?);
    Ok(PathObject::new(PathFamily::CCycle, inscribed, nodes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::{collect_all, EnumOptions};
    use crate::graph::{build_inscribed, build_overall, BuildOptions};
    use crate::lattice::Corner;
    use crate::paths::check_path;

    fn graphs(n: u64, k: u32) -> (LatticeGraph, LatticeGraph) {
        let o = BuildOptions::default();
        (build_inscribed(n, k, &o).unwrap(), build_overall(n, k, &o).unwrap())
    }

    #[test]
    fn unique_w2_maps_to_unique_s2() {
        let (i, o) = graphs(2, 1);
        let w = collect_all(PathFamily::WPath, &i, &EnumOptions::default()).unwrap();
        let s = collect_all(PathFamily::SPath, &o, &EnumOptions::default()).unwrap();
        assert_eq!(w.len(), 1);
        assert_eq!(transform_w_to_s(&w[0], &i, &o).unwrap().nodes, s[0].nodes);
        assert_eq!(transform_s_to_w(&s[0], &i, &o).unwrap().nodes, w[0].nodes);
    }

    #[test]
    fn w4_images_are_distinct_valid_s_paths() {
        let (i, o) = graphs(4, 1);
        let ws = collect_all(PathFamily::WPath, &i, &EnumOptions::default()).unwrap();
        let images: std::collections::BTreeSet<Vec<u32>> = ws
            .iter()
            .map(|w| {
                let s = transform_w_to_s(w, &i, &o).unwrap();
                check_path(&o, &s, Corner::Top).unwrap();
                s.nodes
            })
            .collect();
        assert_eq!(images.len(), 4);
    }

    #[test]
    fn round_trip_on_w5() {
        let (i, o) = graphs(5, 1);
        let ws = collect_all(PathFamily::WPath, &i, &EnumOptions::default()).unwrap();
        assert_eq!(ws.len(), 16);
        for w in &ws {
            let back = transform_s_to_w(&transform_w_to_s(w, &i, &o).unwrap(), &i, &o).unwrap();
            assert_eq!(back.nodes, w.nodes);
        }
    }

    #[test]
    fn d3_maps_to_the_perimeter_cycle() {
        let (i, o) = graphs(3, 1);
        let d = collect_all(PathFamily::DCycle, &o, &EnumOptions::default()).unwrap();
        assert_eq!(d.len(), 1);
        let c = transform_d_to_c(&d[0], &i, &o).unwrap();
        check_path(&i, &c, Corner::Top).unwrap();
        let all_c = collect_all(PathFamily::CCycle, &i, &EnumOptions::default()).unwrap();
        assert_eq!(all_c.len(), 1);
        assert_eq!(c.nodes, all_c[0].nodes);
        assert_eq!(transform_c_to_d(&c, &i, &o).unwrap().nodes, d[0].nodes);
    }

    #[test]
    fn wrong_turns_are_rejected() {
        for n in [4, 5] {
            let (i, o) = graphs(n, 1);
            let hs = collect_all(PathFamily::HPath, &i, &EnumOptions::default()).unwrap();
            let mut bad = 0;
            for h in hs.iter().filter(|h| !crate::paths::is_wellformed_path(&i, &h.nodes)) {
                assert!(matches!(transform_w_to_s(h, &i, &o), Err(TransformError::Collapsed(_))));
                bad += 1;
            }
            assert!(bad > 0);
        }
    }

    #[test]
    fn graph_order_matters() {
        let (i, o) = graphs(3, 1);
        let ws = collect_all(PathFamily::WPath, &i, &EnumOptions::default()).unwrap();
        assert_eq!(transform_w_to_s(&ws[0], &o, &i), Err(TransformError::MismatchedGraphs));
        let (i4, _) = graphs(4, 1);
        assert_eq!(transform_w_to_s(&ws[0], &i4, &o), Err(TransformError::MismatchedGraphs));
    }

    #[test]
    fn canonical_rotation() {
        assert_eq!(canonical_cycle(&[3, 1, 4, 2]), vec![1, 3, 2, 4]);
        assert_eq!(canonical_cycle(&[1, 4, 3, 2]), vec![1, 2, 3, 4]);
        assert_eq!(canonical_cycle(&[]), Vec::<u32>::new());
    }
}
