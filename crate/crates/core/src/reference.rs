//! Published expected values, shipped as `data/reference_tables.json`.
//!
//! Each block carries a citation string so a failed comparison can say where
//! the expected value was printed.

use std::sync::OnceLock;

use num_bigint::BigUint;
use serde::Deserialize;

use crate::classify::{ClassGroup, ClassObject};
use crate::formulas::{BaseCounts, Factored, Provenance};
use crate::lattice::triangular;

const RAW: &str = include_str!("../data/reference_tables.json");

#[derive(Debug, Clone, Deserialize)]
pub struct ReferenceTables {
    pub version: u32,
    pub base_counts: Block<BaseRow>,
    pub overall_nodes: Block<NodeRow>,
    pub dcycles: EntryBlock<DcycleEntry>,
    pub wpath_groups: Block<GroupRow>,
    pub dcycle_groups: Block<GroupRow>,
    pub examples: EntryBlock<Example>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct Block<R> {
    pub citation: String,
    #[serde(default)]
    pub note: Option<String>,
    pub rows: Vec<R>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct EntryBlock<E> {
    pub citation: String,
    #[serde(default)]
    pub note: Option<String>,
    pub entries: Vec<E>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct BaseRow {
    pub n: u64,
    pub t: u64,
    pub h: u64,
    pub w: u64,
    pub z: u64,
    pub c: u64,
    pub d: u64,
}

#[derive(Debug, Clone, Deserialize)]
pub struct NodeRow {
    pub n: u64,
    /// `|O_n(k)|` for `k = 1, 2, ...`.
    pub values: Vec<u64>,
}

#[derive(Debug, Clone, Deserialize)]
pub struct DcycleEntry {
    pub n: u64,
    pub k: u32,
    pub scalar: u64,
    pub terms: Vec<(u64, u64)>,
}

impl DcycleEntry {
    pub fn factored(&self) -> Factored {
        Factored {
            scalar: BigUint::from(self.scalar),
            terms: self.terms.iter().map(|&(b, e)| (BigUint::from(b), BigUint::from(e))).collect(),
        }
    }
}

/// `(multiplicity, pure, v)` triples for one order.
#[derive(Debug, Clone, Deserialize)]
pub struct GroupRow {
    pub n: u64,
    pub groups: Vec<(u64, u64, u64)>,
}

impl GroupRow {
    pub fn to_groups(&self, object: ClassObject) -> Vec<ClassGroup> {
        self.groups
            .iter()
            .map(|&(mult, pure, v)| ClassGroup { n: self.n, object, v_count: v, pure_count: pure, multiplicity: mult })
            .collect()
    }

    /// Every row should satisfy `pure + v = T_n`.
    pub fn is_consistent(&self) -> bool {
        self.groups.iter().all(|&(_, pure, v)| pure + v == triangular(self.n))
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct Example {
    pub quantity: String,
    pub n: u64,
    pub k: u32,
    #[serde(default)]
    pub decimal: Option<String>,
    #[serde(default)]
    pub factored: Option<String>,
}

/// The shipped tables, parsed once.
pub fn tables() -> &'static ReferenceTables {
    static T: OnceLock<ReferenceTables> = OnceLock::new();
    T.get_or_init(|| serde_json::from_str(RAW).expect("bundled reference tables parse"))
}

/// Base counts for order `n` from the published enumeration table.
pub fn base_counts(n: u64) -> Option<BaseCounts> {
    let r = tables().base_counts.rows.iter().find(|r| r.n == n)?;
    Some(BaseCounts { n, h: r.h, w: r.w, s: r.w, z: r.z, c: r.c, d: r.d, provenance: Provenance::PublishedTable })
}

pub fn wpath_groups(n: u64) -> Option<Vec<ClassGroup>> {
    tables().wpath_groups.rows.iter().find(|r| r.n == n).map(|r| r.to_groups(ClassObject::Wpath))
}

pub fn dcycle_groups(n: u64) -> Option<Vec<ClassGroup>> {
    tables().dcycle_groups.rows.iter().find(|r| r.n == n).map(|r| r.to_groups(ClassObject::Dcycle))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_tables_load() {
        let t = tables();
        assert_eq!(t.version, 1);
        assert_eq!(t.base_counts.rows.len(), 8);
        assert_eq!(t.overall_nodes.rows.len(), 5);
        assert_eq!(t.dcycles.entries.len(), 12);
        assert!(t.base_counts.citation.contains("table 1"));
    }

    #[test]
    fn group_rows_are_consistent_and_sum_to_base_counts() {
        for row in &tables().wpath_groups.rows {
            assert!(row.is_consistent(), "n={}", row.n);
            let total: u64 = row.groups.iter().map(|g| g.0).sum();
            assert_eq!(total, base_counts(row.n).unwrap().w);
        }
        for row in &tables().dcycle_groups.rows {
            assert!(row.is_consistent(), "n={}", row.n);
            let total: u64 = row.groups.iter().map(|g| g.0).sum();
            assert_eq!(total, base_counts(row.n).unwrap().d);
        }
    }

    #[test]
    fn triangular_column_matches() {
        for r in &tables().base_counts.rows {
            assert_eq!(r.t, triangular(r.n));
        }
    }
}
