//! Absolute direction codes of inscribed-grid steps and the well-formed turn rule.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::TileCoord;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{from} -> {to} is not a unit step of the inscribed lattice")]
pub struct NonLatticeStep {
    pub from: TileCoord,
    pub to: TileCoord,
}

/// Step direction, counterclockwise from east in 60 degree increments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DirectionCode(u8);

impl DirectionCode {
    pub const EAST: DirectionCode = DirectionCode(0);
    pub const WEST: DirectionCode = DirectionCode(3);

    pub fn new(value: u8) -> Self {
        DirectionCode(value % 6)
    }

    pub fn value(self) -> u8 {
        self.0
    }

    pub fn reversed(self) -> Self {
        DirectionCode((self.0 + 3) % 6)
    }

    pub fn is_even(self) -> bool {
        self.0.is_multiple_of(2)
    }
}

impl fmt::Display for DirectionCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Direction of the step between two neighbouring up tiles (centroids).
pub fn direction_of(from: TileCoord, to: TileCoord) -> Result<DirectionCode, NonLatticeStep> {
    let dr = to.row as i64 - from.row as i64;
    let dc = to.col as i64 - from.col as i64;
    let code = match (dr, dc) {
        (0, 1) => 0,
        (-1, 0) => 1,
        (-1, -1) => 2,
        (0, -1) => 3,
        (1, 0) => 4,
        (1, 1) => 5,
        _ => return Err(NonLatticeStep { from, to }),
    };
    if !from.is_up() || !to.is_up() {
        return Err(NonLatticeStep { from, to });
    }
    Ok(DirectionCode(code))
}

/// A turn `(d1, d2)` is forbidden when it is a 120 degree right turn after an
/// even direction, a 120 degree left turn after an odd one, or a reversal.
pub fn is_wellformed_turn(d1: DirectionCode, d2: DirectionCode) -> bool {
    let sharp = if d1.is_even() { (d1.0 + 4) % 6 } else { (d1.0 + 2) % 6 };
    d2.0 != sharp && d2 != d1.reversed()
}

/// Direction codes of the steps of a node sequence given by tiles; for a
/// closed walk the closing step is appended.
pub fn direction_string(tiles: &[TileCoord], closed: bool) -> Result<Vec<DirectionCode>, NonLatticeStep> {
    let mut out: Vec<DirectionCode> = tiles.windows(2).map(|w| direction_of(w[0], w[1])).collect::<Result<_, _>>()?;
    if closed && tiles.len() > 2 {
        out.push(direction_of(tiles[tiles.len() - 1], tiles[0])?);
    }
    Ok(out)
}

/// True when every consecutive pair of `dirs` is a well-formed turn,
/// including the wrap-around pair for closed walks.
pub fn is_wellformed_string(dirs: &[DirectionCode], closed: bool) -> bool {
    let open_ok = dirs.windows(2).all(|w| is_wellformed_turn(w[0], w[1]));
    if closed && dirs.len() > 1 {
        open_ok && is_wellformed_turn(dirs[dirs.len() - 1], dirs[0])
    } else {
        open_ok
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;

    fn d(v: u8) -> DirectionCode {
        DirectionCode::new(v)
    }

    #[test]
    fn step_codes() {
        assert_eq!(direction_of(TileCoord::up(1, 0), TileCoord::up(1, 1)), Ok(d(0)));
        assert_eq!(direction_of(TileCoord::up(1, 0), TileCoord::up(0, 0)), Ok(d(1)));
        assert_eq!(direction_of(TileCoord::up(0, 0), TileCoord::up(1, 0)), Ok(d(4)));
        assert_eq!(direction_of(TileCoord::up(1, 1), TileCoord::up(0, 0)), Ok(d(2)));
        assert_eq!(direction_of(TileCoord::up(0, 0), TileCoord::up(1, 1)), Ok(d(5)));
        assert!(direction_of(TileCoord::up(0, 0), TileCoord::up(2, 0)).is_err());
        assert!(direction_of(TileCoord::up(1, 0), TileCoord::down(1, 0)).is_err());
    }

    #[test]
    fn codes_follow_planar_angle() {
        use num_rational::Rational64;
        // Angle class from the exact centroid delta (y grows downward here).
        for (to, code) in [((1u64, 2u64), 0u8), ((0, 1), 1), ((0, 0), 2), ((1, 0), 3), ((2, 1), 4), ((2, 2), 5)] {
            let a = TileCoord::up(1, 1);
            let b = TileCoord::up(to.0, to.1);
            let pa = a.centroid::<Rational64>();
            let pb = b.centroid::<Rational64>();
            let (dx, dy) = (pb.x - pa.x, pa.y - pb.y);
            let expect = match (dx > Rational64::from(0), dx < Rational64::from(0), dy > Rational64::from(0)) {
                (true, _, _) if dy == Rational64::from(0) => 0,
                (true, _, true) => 1,
                (_, true, true) => 2,
                (_, true, _) if dy == Rational64::from(0) => 3,
                (_, true, false) => 4,
                _ => 5,
            };
            assert_eq!(expect, code);
            assert_eq!(direction_of(a, b), Ok(d(code)));
        }
    }

    #[test]
    fn forbidden_turns() {
        assert!(!is_wellformed_turn(d(0), d(4)));
        assert!(!is_wellformed_turn(d(1), d(3)));
        assert!(is_wellformed_turn(d(1), d(5)));
        let allowed: Vec<(u8, u8)> =
            (0..6).flat_map(|a| (0..6).map(move |b| (a, b))).filter(|&(a, b)| is_wellformed_turn(d(a), d(b))).collect();
        assert_eq!(allowed.len(), 6 * 4);
    }

    #[test]
    fn wrong_turn_of_z3_example() {
        // Z_3 with the middle edge pair turning sharply:
        // (2,0) -> (2,1) -> (1,0) -> (1,1) -> (2,2).
        let tiles = [(2, 0), (2, 1), (1, 0), (1, 1), (2, 2)].map(|(r, c)| TileCoord::up(r, c));
        let dirs = direction_string(&tiles, false).unwrap();
        assert_eq!(dirs, vec![d(0), d(2), d(0), d(5)]);
        assert!(!is_wellformed_turn(dirs[1], dirs[2]));
        assert!(!is_wellformed_string(&dirs, false));
    }

    proptest! {
        #[test]
        fn wellformedness_is_reversal_invariant(seq in proptest::collection::vec(0u8..6, 0..20), closed: bool) {
            let dirs: Vec<_> = seq.iter().map(|&v| d(v)).collect();
            let rev: Vec<_> = dirs.iter().rev().map(|x| x.reversed()).collect();
            prop_assert_eq!(is_wellformed_string(&dirs, closed), is_wellformed_string(&rev, closed));
        }
    }
}
