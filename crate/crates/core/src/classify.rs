//! Grouping of well-formed paths and cycles by v-shape capacity.
//!
//! When a well-formed walk on `I_n` is used as the connecting layer of
//! `I_n^2`, each of its edges whose shared overall-grid vertex is interior
//! can be replaced by a two-edge detour through the corner of the third copy
//! meeting at that vertex. The number of such edges is the walk's capacity.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::enumerate::{fold_solutions, EnumError, EnumOptions};
use crate::graph::{build_inscribed, BuildOptions, Family, GraphError, LatticeGraph};
use crate::lattice::{shared_vertex, triangular};
use crate::paths::PathFamily;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Enumerate(#[from] EnumError),
    #[error("capacity is defined on the base inscribed grid I_n (k = 1)")]
    NotBaseGrid,
    #[error("nodes {0} and {1} are not neighbours")]
    NotAdjacent(u32, u32),
    #[error("classification was cut short by the step budget")]
    Incomplete,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassObject {
    /// W-paths (the H-path connecting layer).
    Wpath,
    /// Well-formed Hamiltonian cycles, in bijection with D-cycles.
    Dcycle,
}

impl ClassObject {
    pub fn name(self) -> &'static str {
        match self {
            ClassObject::Wpath => "wpath",
            ClassObject::Dcycle => "dcycle",
        }
    }
}

impl fmt::Display for ClassObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassObject {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "wpath" => Ok(ClassObject::Wpath),
            "dcycle" => Ok(ClassObject::Dcycle),
            _ => Err(format!("unknown object '{s}' (expected wpath or dcycle)")),
        }
    }
}

/// Walks sharing one capacity value: `multiplicity` walks with `v_count`
/// v-shape capable edges, leaving `pure_count = T_n - v_count` copies that
/// can only take an H-path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ClassGroup {
    pub n: u64,
    pub object: ClassObject,
    pub v_count: u64,
    pub pure_count: u64,
    pub multiplicity: u64,
}

/// Number of edges of a well-formed walk on `I_n` whose shared vertex is interior.
pub fn vshape_capacity(nodes: &[u32], graph: &LatticeGraph, closed: bool) -> Result<usize, ClassifyError> {
    if graph.family() != Family::Inscribed || graph.depth() != 1 {
        return Err(ClassifyError::NotBaseGrid);
    }
    let n = graph.order();
    let step = |a: u32, b: u32| -> Result<bool, ClassifyError> {
        let p = shared_vertex(graph.tile_of(a).unwrap(), graph.tile_of(b).unwrap())
            .ok_or(ClassifyError::NotAdjacent(a, b))?;
        Ok(p.is_interior(n))
    };
    let mut count = 0;
    for w in nodes.windows(2) {
        count += usize::from(step(w[0], w[1])?);
    }
    if closed && nodes.len() > 2 {
        count += usize::from(step(nodes[nodes.len() - 1], nodes[0])?);
    }
    Ok(count)
}

/// Enumerates every well-formed walk of `object` on `I_n` and groups them
/// by capacity, ascending.
pub fn classify(object: ClassObject, n: u64, opts: &EnumOptions) -> Result<Vec<ClassGroup>, ClassifyError> {
    let graph = build_inscribed(n, 1, &BuildOptions::default())?;
    let (family, opts) = match object {
        ClassObject::Wpath => (PathFamily::WPath, opts.clone()),
        ClassObject::Dcycle => (PathFamily::CCycle, EnumOptions { wellformed_cycles: true, ..opts.clone() }),
    };
    let closed = family.is_cycle();
    let (tally, stats) = fold_solutions(
        family,
        &graph,
        &opts,
        BTreeMap::<u64, u64>::new,
        |acc, path| {
            let c = vshape_capacity(path, &graph, closed).expect("enumerated walks are lattice walks");
            *acc.entry(c as u64).or_default() += 1;
        },
        |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_default() += v;
            }
            a
        },
    )?;
    if !stats.complete {
        return Err(ClassifyError::Incomplete);
    }
    let t_n = triangular(n);
    Ok(tally
        .into_iter()
        .map(|(v, mult)| ClassGroup { n, object, v_count: v, pure_count: t_n - v, multiplicity: mult })
        .collect())
}

/// `{ "object", "n", "groups": [{"v", "pure", "mult"}], "total" }`.
pub fn groups_to_json(object: ClassObject, n: u64, groups: &[ClassGroup]) -> serde_json::Value {
    serde_json::json!({
        "object": object.name(),
        "n": n,
        "groups": groups
            .iter()
            .map(|g| serde_json::json!({"v": g.v_count, "pure": g.pure_count, "mult": g.multiplicity}))
            .collect::<Vec<_>>(),
        "total": groups.iter().map(|g| g.multiplicity).sum::<u64>(),
    })
}
