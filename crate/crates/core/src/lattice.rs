//! Row-major triangular coordinates.
//!
//! The apex of an order-`n` triangle sits at grid point `(0, 0)` and rows grow
//! downward. Row `r` holds `r + 1` grid points and `r + 1` upward tiles
//! (`r` downward tiles). Upward tiles are the dark tiles of the checked
//! pattern; downward tiles are white.
//!
//! ```text
//!            (0,0)
//!           /  U  \
//!       (1,0)-----(1,1)
//!       / U  \ D /  U \
//!   (2,0)----(2,1)----(2,2)
//! ```

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Coord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("order {0} is degenerate (need n >= 2)")]
    DegenerateOrder(u32),
    #[error("depth {0} is degenerate (need k >= 1)")]
    DegenerateDepth(u32),
    #[error("tile {tile} lies outside F_{n}")]
    TileOutOfRange { tile: TileCoord, n: u64 },
    #[error("grid point {point} lies outside the order-{n} triangle")]
    PointOutOfRange { point: GridPoint, n: u64 },
}

/// `n (n + 1) / 2`.
pub const fn triangular(n: u64) -> u64 {
    n * (n + 1) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Up,
    Down,
}

/// A unit triangle of the lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TileCoord {
    pub row: u64,
    pub col: u64,
    pub orientation: Orientation,
}

impl TileCoord {
    pub const fn up(row: u64, col: u64) -> Self {
        TileCoord { row, col, orientation: Orientation::Up }
    }

    pub const fn down(row: u64, col: u64) -> Self {
        TileCoord { row, col, orientation: Orientation::Down }
    }

    pub fn is_up(&self) -> bool {
        self.orientation == Orientation::Up
    }

    pub fn is_valid_in(&self, n: u64) -> bool {
        match self.orientation {
            Orientation::Up => self.row < n && self.col <= self.row,
            Orientation::Down => self.row >= 1 && self.row < n && self.col < self.row,
        }
    }

    /// Up `(r,i)` has corners `[top, bottom-left, bottom-right]` =
    /// `(r,i), (r+1,i), (r+1,i+1)`; down `(r,i)` has `(r,i), (r,i+1), (r+1,i+1)`.
    pub fn corners(&self) -> [GridPoint; 3] {
        let (r, i) = (self.row, self.col);
        match self.orientation {
            Orientation::Up => [GridPoint::new(r, i), GridPoint::new(r + 1, i), GridPoint::new(r + 1, i + 1)],
            Orientation::Down => [GridPoint::new(r, i), GridPoint::new(r, i + 1), GridPoint::new(r + 1, i + 1)],
        }
    }

    /// Row-major index among the up tiles of a triangle (`T_r + i`).
    pub fn up_index(&self) -> u64 {
        debug_assert!(self.is_up());
        triangular(self.row) + self.col
    }

    /// Inverse of [`TileCoord::up_index`].
    pub fn from_up_index(idx: u64) -> Self {
        let mut row = 0;
        while triangular(row + 1) <= idx {
            row += 1;
        }
        TileCoord::up(row, idx - triangular(row))
    }

    /// Centroid in exact planar coordinates, see [`GridPoint::position`].
    pub fn centroid<S: Coord>(&self) -> Point<S> {
        let [a, b, c] = self.corners();
        let sum_x2 = a.x2() + b.x2() + c.x2();
        let sum_y = (a.row + b.row + c.row) as i64;
        Point { x: S::from_ratio(sum_x2, 6), y: S::from_ratio(sum_y, 3) }
    }
}

impl fmt::Display for TileCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let o = match self.orientation {
            Orientation::Up => "up",
            Orientation::Down => "down",
        };
        write!(f, "{o}({},{})", self.row, self.col)
    }
}

/// A lattice vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GridPoint {
    pub row: u64,
    pub pos: u64,
}

impl GridPoint {
    pub const fn new(row: u64, pos: u64) -> Self {
        GridPoint { row, pos }
    }

    pub fn is_valid_in(&self, n: u64) -> bool {
        self.row <= n && self.pos <= self.row
    }

    /// Strictly inside the order-`n` triangle, i.e. on none of its three sides.
    pub fn is_interior(&self, n: u64) -> bool {
        0 < self.pos && self.pos < self.row && self.row < n
    }

    fn x2(&self) -> i64 {
        2 * self.pos as i64 - self.row as i64
    }

    /// Planar position with unit horizontal spacing and unit row height.
    ///
    /// `x = pos - row/2`, `y = row` (pointing down). Multiplying `y` by
    /// `sqrt(3)/2` gives the equilateral embedding.
    pub fn position<S: Coord>(&self) -> Point<S> {
        Point { x: S::from_ratio(self.x2(), 2), y: S::from_ratio(self.row as i64, 1) }
    }
}

impl fmt::Display for GridPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.pos)
    }
}

/// Planar point generic over the coordinate scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point<S> {
    pub x: S,
    pub y: S,
}

impl<S: Coord> Point<S> {
    pub fn to_f64(&self) -> Point<f64> {
        Point { x: self.x.to_f64().unwrap_or(f64::NAN), y: self.y.to_f64().unwrap_or(f64::NAN) }
    }
}

/// Checked version of [`TileCoord::corners`].
pub fn tile_vertices(t: TileCoord, n: u64) -> Result<[GridPoint; 3], LatticeError> {
    if !t.is_valid_in(n) {
        return Err(LatticeError::TileOutOfRange { tile: t, n });
    }
    Ok(t.corners())
}

/// Common corner of two distinct up tiles, if they touch.
///
/// Two up tiles never share a side, so neighbouring up tiles meet in exactly
/// one point.
pub fn shared_vertex(a: TileCoord, b: TileCoord) -> Option<GridPoint> {
    if !a.is_up() || !b.is_up() || a == b {
        return None;
    }
    let (a, b) = if (a.row, a.col) <= (b.row, b.col) { (a, b) } else { (b, a) };
    let (r, i) = (a.row, a.col);
    if b.row == r && b.col == i + 1 {
        Some(GridPoint::new(r + 1, i + 1))
    } else if b.row == r + 1 && b.col == i {
        Some(GridPoint::new(r + 1, i))
    } else if b.row == r + 1 && b.col == i + 1 {
        Some(GridPoint::new(r + 1, i + 1))
    } else {
        None
    }
}

/// Checked interiority test for a point of the order-`n` triangle.
pub fn is_interior(p: GridPoint, n: u64) -> Result<bool, LatticeError> {
    if !p.is_valid_in(n) {
        return Err(LatticeError::PointOutOfRange { point: p, n });
    }
    Ok(p.is_interior(n))
}

/// The corner roles of a triangular (sub)grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Corner {
    Left,
    Right,
    Top,
}

impl Corner {
    pub const ALL: [Corner; 3] = [Corner::Left, Corner::Right, Corner::Top];

    /// The up tile of `F_n` touching this corner of the triangle.
    pub fn generator_tile(self, n: u64) -> TileCoord {
        match self {
            Corner::Left => TileCoord::up(n - 1, 0),
            Corner::Right => TileCoord::up(n - 1, n - 1),
            Corner::Top => TileCoord::up(0, 0),
        }
    }

    /// The corner grid point of the order-`n` triangle.
    pub fn grid_point(self, n: u64) -> GridPoint {
        match self {
            Corner::Left => GridPoint::new(n, 0),
            Corner::Right => GridPoint::new(n, n),
            Corner::Top => GridPoint::new(0, 0),
        }
    }

    /// Which corner of up tile `t` is the point `p`, if any.
    pub fn of_tile_at(t: TileCoord, p: GridPoint) -> Option<Corner> {
        debug_assert!(t.is_up());
        let [top, left, right] = t.corners();
        if p == top {
            Some(Corner::Top)
        } else if p == left {
            Some(Corner::Left)
        } else if p == right {
            Some(Corner::Right)
        } else {
            None
        }
    }
}

impl fmt::Display for Corner {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Corner::Left => "left",
            Corner::Right => "right",
            Corner::Top => "top",
        })
    }
}

/// Up tiles of `F_n` in row-major order.
pub fn up_tiles(n: u64) -> impl Iterator<Item = TileCoord> {
    (0..n).flat_map(|r| (0..=r).map(move |i| TileCoord::up(r, i)))
}

/// Down tiles of `F_n` in row-major order.
pub fn down_tiles(n: u64) -> impl Iterator<Item = TileCoord> {
    (1..n).flat_map(|r| (0..r).map(move |i| TileCoord::down(r, i)))
}

/// Grid points of the order-`n` triangle in row-major order.
pub fn grid_points(n: u64) -> impl Iterator<Item = GridPoint> {
    (0..=n).flat_map(|r| (0..=r).map(move |p| GridPoint::new(r, p)))
}

#[cfg(test)]
mod tests {
    use std::collections::{BTreeSet, HashMap};

    use num_rational::Rational64;

    use super::*;

    #[test]
    fn triangular_numbers() {
        assert_eq!(triangular(4), 10);
        assert_eq!(triangular(0), 0);
        assert_eq!(triangular(9), 45);
    }

    #[test]
    fn tile_vertex_convention() {
        let set = |t: TileCoord, n| tile_vertices(t, n).unwrap().into_iter().collect::<BTreeSet<_>>();
        let pts = |v: &[(u64, u64)]| v.iter().map(|&(r, p)| GridPoint::new(r, p)).collect::<BTreeSet<_>>();
        assert_eq!(set(TileCoord::up(0, 0), 2), pts(&[(0, 0), (1, 0), (1, 1)]));
        assert_eq!(set(TileCoord::down(1, 0), 3), pts(&[(1, 0), (1, 1), (2, 1)]));
        assert_eq!(set(TileCoord::up(2, 1), 3), pts(&[(2, 1), (3, 1), (3, 2)]));
        assert!(tile_vertices(TileCoord::up(3, 0), 3).is_err());
        assert!(tile_vertices(TileCoord::down(0, 0), 3).is_err());
        assert!(tile_vertices(TileCoord::down(2, 2), 3).is_err());
    }

    fn intersect(a: TileCoord, b: TileCoord) -> Vec<GridPoint> {
        let sa: BTreeSet<_> = a.corners().into_iter().collect();
        b.corners().into_iter().filter(|p| sa.contains(p)).collect()
    }

    #[test]
    fn shared_vertex_examples() {
        assert_eq!(shared_vertex(TileCoord::up(1, 0), TileCoord::up(1, 1)), Some(GridPoint::new(2, 1)));
        assert_eq!(shared_vertex(TileCoord::up(0, 0), TileCoord::up(2, 0)), None);
        assert_eq!(shared_vertex(TileCoord::up(1, 0), TileCoord::up(2, 1)), Some(GridPoint::new(2, 1)));
    }

    #[test]
    fn shared_vertex_agrees_with_corner_intersection() {
        let n = 7;
        let tiles: Vec<_> = up_tiles(n).collect();
        for &a in &tiles {
            let mut neighbours = 0;
            for &b in &tiles {
                if a == b {
                    continue;
                }
                let common = intersect(a, b);
                assert!(common.len() <= 1, "up tiles never share a side");
                assert_eq!(shared_vertex(a, b), common.first().copied());
                assert_eq!(shared_vertex(a, b), shared_vertex(b, a));
                neighbours += usize::from(!common.is_empty());
            }
            assert!(neighbours <= 6);
        }
    }

    #[test]
    fn consecutive_triangular_counts() {
        for n in 2..=9 {
            assert_eq!(up_tiles(n).count() as u64, triangular(n));
            assert_eq!(down_tiles(n).count() as u64, triangular(n - 1));
            assert_eq!(grid_points(n).count() as u64, triangular(n + 1));
            assert!(up_tiles(n).chain(down_tiles(n)).all(|t| t.is_valid_in(n)));
        }
    }

    #[test]
    fn every_unit_edge_has_exactly_one_dark_tile() {
        for n in 2..=9 {
            let mut owner: HashMap<(GridPoint, GridPoint), usize> = HashMap::new();
            for t in up_tiles(n).chain(down_tiles(n)) {
                let c = t.corners();
                for (a, b) in [(c[0], c[1]), (c[1], c[2]), (c[0], c[2])] {
                    let key = if a < b { (a, b) } else { (b, a) };
                    if t.is_up() {
                        *owner.entry(key).or_default() += 1;
                    } else {
                        owner.entry(key).or_default();
                    }
                }
            }
            assert!(owner.values().all(|&c| c == 1), "n={n}");
            assert_eq!(owner.len() as u64, 3 * triangular(n));
        }
    }

    #[test]
    fn interior_and_boundary_counts() {
        assert!(is_interior(GridPoint::new(2, 1), 3).unwrap());
        assert!(!is_interior(GridPoint::new(0, 0), 3).unwrap());
        assert!(is_interior(GridPoint::new(4, 0), 3).is_err());
        assert_eq!(grid_points(5).filter(|p| p.is_interior(5)).count(), 6);
        for n in 2..=9u64 {
            let interior = grid_points(n).filter(|p| p.is_interior(n)).count() as u64;
            assert_eq!(interior, triangular(n - 2));
            let corners: BTreeSet<_> = Corner::ALL.iter().map(|c| c.grid_point(n)).collect();
            let side = grid_points(n).filter(|p| !p.is_interior(n) && !corners.contains(p)).count() as u64;
            assert_eq!(side, 3 * (n - 1));
        }
    }

    #[test]
    fn up_index_roundtrip() {
        for (idx, t) in up_tiles(9).enumerate() {
            assert_eq!(t.up_index(), idx as u64);
            assert_eq!(TileCoord::from_up_index(idx as u64), t);
        }
    }

    #[test]
    fn centroid_is_exact() {
        let c: Point<Rational64> = TileCoord::up(0, 0).centroid();
        assert_eq!(c.x, Rational64::new(0, 1));
        assert_eq!(c.y, Rational64::new(2, 3));
        let d: Point<Rational64> = TileCoord::up(1, 1).centroid();
        assert_eq!(d.x, Rational64::new(1, 2));
        let p: Point<Rational64> = GridPoint::new(3, 1).position();
        assert_eq!(p.x, Rational64::new(-1, 2));
    }

    #[test]
    fn corner_roles() {
        let t = TileCoord::up(2, 1);
        assert_eq!(Corner::of_tile_at(t, GridPoint::new(2, 1)), Some(Corner::Top));
        assert_eq!(Corner::of_tile_at(t, GridPoint::new(3, 1)), Some(Corner::Left));
        assert_eq!(Corner::of_tile_at(t, GridPoint::new(3, 2)), Some(Corner::Right));
        assert_eq!(Corner::of_tile_at(t, GridPoint::new(0, 0)), None);
    }
}
