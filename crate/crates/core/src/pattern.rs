//! The checked generator pattern `F_n` and its fractal approximations `F_n(k)`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::lattice::{down_tiles, triangular, up_tiles, LatticeError, TileCoord};

/// Position of a dark tile of `F_n(k)`: one generator up-tile index per
/// level, coarsest level first. Read as a base-`T_n` numeral it is the
/// node index of the tile in the inscribed graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct TileAddress(pub Vec<u32>);

impl TileAddress {
    pub fn depth(&self) -> usize {
        self.0.len()
    }

    /// The unit up tile this address denotes in the order-`n^k` triangle.
    pub fn fine_tile(&self, n: u64) -> TileCoord {
        let (mut row, mut col) = (0u64, 0u64);
        for &d in &self.0 {
            let t = TileCoord::from_up_index(u64::from(d));
            row = row * n + t.row;
            col = col * n + t.col;
        }
        TileCoord::up(row, col)
    }

    /// Numeric value in base `T_n`.
    pub fn index(&self, n: u64) -> u64 {
        let base = triangular(n);
        self.0.iter().fold(0, |acc, &d| acc * base + u64::from(d))
    }
}

impl fmt::Display for TileAddress {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u32::to_string).collect();
        write!(f, "[{}]", parts.join("."))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractalPattern {
    n: u64,
    k: u32,
    dark: BTreeSet<TileAddress>,
}

/// Builds the dark-tile set of `F_n(k)`.
pub fn build_pattern(n: u64, k: u32) -> Result<FractalPattern, LatticeError> {
    if n < 2 {
        return Err(LatticeError::DegenerateOrder(n as u32));
    }
    if k < 1 {
        return Err(LatticeError::DegenerateDepth(k));
    }
    let generator: Vec<u32> = (0..triangular(n) as u32).collect();
    let mut dark: BTreeSet<TileAddress> = generator.iter().map(|&d| TileAddress(vec![d])).collect();
    for _ in 1..k {
        dark = dark
            .iter()
            .flat_map(|addr| {
                generator.iter().map(move |&d| {
                    let mut next = addr.0.clone();
                    next.push(d);
                    TileAddress(next)
                })
            })
            .collect();
    }
    Ok(FractalPattern { n, k, dark })
}

impl FractalPattern {
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

    pub fn dark(&self) -> impl Iterator<Item = &TileAddress> {
        self.dark.iter()
    }

    pub fn dark_count(&self) -> usize {
        self.dark.len()
    }

    pub fn contains(&self, addr: &TileAddress) -> bool {
        self.dark.contains(addr)
    }

    /// Unit up tiles of the dark set, in address order.
    pub fn fine_tiles(&self) -> impl Iterator<Item = TileCoord> + '_ {
        self.dark.iter().map(|a| a.fine_tile(self.n))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "k": self.k,
            "dark": self.dark.iter().collect::<Vec<_>>(),
        })
    }
}

/// White (downward) tiles of the generator.
pub fn generator_white_tiles(n: u64) -> Vec<TileCoord> {
    down_tiles(n).collect()
}

/// Dark (upward) tiles of the generator.
pub fn generator_dark_tiles(n: u64) -> Vec<TileCoord> {
    up_tiles(n).collect()
}
