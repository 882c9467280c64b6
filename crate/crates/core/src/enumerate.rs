//! Exhaustive backtracking enumeration of the six covering families.
//!
//! The search runs on bitmask state (`u128`, so graphs of at most 128 nodes
//! and 128 dark tiles). Every branch is checked against a degree condition:
//! a node that the walk still has to pass through needs two available
//! neighbours, an endpoint needs one; a dark tile that is still unused needs a
//! side whose two ends are both available. The tree is expanded sequentially
//! to a fixed prefix depth and the resulting subtrees are counted in
//! parallel; results are merged in prefix order, so totals and sample lists
//! do not depend on the thread count.

use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::direction::{direction_of, is_wellformed_turn, DirectionCode};
use crate::graph::{Family, LatticeGraph};
use crate::lattice::Corner;
use crate::paths::{is_wellformed_path, z_endpoints, PathFamily, PathObject};

pub const MAX_SEARCH_NODES: usize = 128;
pub const DEFAULT_PREFIX_DEPTH: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumError {
    #[error("{family} needs the {expected} graph, got the {actual} graph")]
    WrongGraph { family: PathFamily, expected: Family, actual: Family },
    #[error("graph has {nodes} nodes / {tiles} tiles; the bitmask search handles at most {MAX_SEARCH_NODES}")]
    TooLarge { nodes: usize, tiles: usize },
    #[error("could not start worker pool: {0}")]
    ThreadPool(String),
}

/// How W-paths are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WRoute {
    /// Reject wrong turns while searching.
    #[default]
    Pruned,
    /// Enumerate all H-paths and keep the well-formed ones.
    FilterHamiltonian,
}

#[derive(Debug, Clone)]
pub struct EnumOptions {
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
    pub prefix_depth: usize,
    /// Abort after this many search-tree nodes; the result is then flagged not final.
    pub step_budget: Option<u64>,
    /// Corner missing from the Z-path grid.
    pub removed_corner: Corner,
    pub w_route: WRoute,
    /// Restrict C-cycles to those with only well-formed turns.
    pub wellformed_cycles: bool,
    /// Number of sample objects to keep.
    pub emit: usize,
}

impl Default for EnumOptions {
    fn default() -> Self {
        EnumOptions {
            threads: None,
            prefix_depth: DEFAULT_PREFIX_DEPTH,
            step_budget: None,
            removed_corner: Corner::Top,
            w_route: WRoute::Pruned,
            wellformed_cycles: false,
            emit: 0,
        }
    }
}

#[derive(Debug, Clone)]
pub struct EnumerationResult {
    pub family: PathFamily,
    pub n: u64,
    pub k: u32,
    pub count: u64,
    pub elapsed: Duration,
    pub samples: Vec<PathObject>,
    /// False when the step budget ran out and `count` is partial.
    pub complete: bool,
}

impl EnumerationResult {
    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({
            "family": self.family.name(),
            "n": self.n,
            "k": self.k,
            "count": self.count.to_string(),
            "elapsed_ms": self.elapsed.as_millis() as u64,
            "final": self.complete,
        });
        if !self.samples.is_empty() {
            v["samples"] = self.samples.iter().map(|s| serde_json::json!(s.nodes)).collect();
        }
        v
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SearchStats {
    pub steps: u64,
    pub complete: bool,
}

fn bit(v: u32) -> u128 {
    1u128 << v
}

fn iter_bits(mut m: u128) -> impl Iterator<Item = u32> {
    std::iter::from_fn(move || {
        if m == 0 {
            return None;
        }
        let v = m.trailing_zeros();
        m &= m - 1;
        Some(v)
    })
}

struct Control {
    budget: Option<u64>,
    steps: AtomicU64,
    abort: AtomicBool,
}

const TICK_BATCH: u64 = 1 << 12;

struct Ctx<'a> {
    ctl: &'a Control,
    local: u64,
}

impl Ctx<'_> {
    #[inline]
    fn tick(&mut self) -> bool {
        self.local += 1;
        if self.local == TICK_BATCH {
            self.flush();
        }
        self.ctl.abort.load(Ordering::Relaxed)
    }

    fn flush(&mut self) {
        let total = self.ctl.steps.fetch_add(self.local, Ordering::Relaxed) + self.local;
        self.local = 0;
        if let Some(b) = self.ctl.budget {
            if total > b {
                self.ctl.abort.store(true, Ordering::Relaxed);
            }
        }
    }
}

impl Drop for Ctx<'_> {
    fn drop(&mut self) {
        self.ctl.steps.fetch_add(self.local, Ordering::Relaxed);
    }
}

/// Partial walk. `used` is the dark-tile mask of tiling walks.
#[derive(Clone)]
struct State {
    path: Vec<u32>,
    dirs: Vec<DirectionCode>,
    visited: u128,
    used: u128,
}

trait Walker: Sync {
    fn roots(&self) -> Vec<State>;
    fn dfs(
        &self,
        st: &mut State,
        cap: Option<usize>,
        ctx: &mut Ctx,
        leaf: &mut dyn FnMut(&[u32]),
        frontier: &mut Vec<State>,
    );
}

/// Covering walks on the inscribed graph (H, W, Z, C).
struct HamWalker {
    adj: Vec<u128>,
    nbrs: Vec<Vec<(u32, DirectionCode)>>,
    allowed: u128,
    total: usize,
    start: u32,
    /// Path end node; `None` for cycles (which close at `start`).
    end: Option<u32>,
    wellformed: bool,
}

impl HamWalker {
    fn dir(&self, a: u32, b: u32) -> DirectionCode {
        self.nbrs[a as usize].iter().find(|(v, _)| *v == b).map(|&(_, d)| d).expect("adjacent")
    }

    fn close_cycle(&self, st: &State) -> bool {
        let h = *st.path.last().unwrap();
        if self.adj[h as usize] & bit(self.start) == 0 {
            return false;
        }
        // count each undirected cycle once
        if st.path[1] > h {
            return false;
        }
        if self.wellformed {
            let closing = self.dir(h, self.start);
            let first = st.dirs[0];
            let last = *st.dirs.last().unwrap();
            return is_wellformed_turn(last, closing) && is_wellformed_turn(closing, first);
        }
        true
    }

    fn still_feasible(&self, h: u32, v: u32, free_after: u128) -> bool {
        let cycle = self.end.is_none();
        let links = free_after | bit(v) | if cycle { bit(self.start) } else { 0 };
        for w in iter_bits(self.adj[h as usize] & free_after) {
            let need = if Some(w) == self.end { 1 } else { 2 };
            if (self.adj[w as usize] & links).count_ones() < need {
                return false;
            }
        }
        if cycle && free_after != 0 && self.adj[self.start as usize] & (free_after | bit(v)) == 0 {
            return false;
        }
        true
    }
}

impl Walker for HamWalker {
    fn roots(&self) -> Vec<State> {
        vec![State { path: vec![self.start], dirs: Vec::new(), visited: bit(self.start), used: 0 }]
    }

    fn dfs(
        &self,
        st: &mut State,
        cap: Option<usize>,
        ctx: &mut Ctx,
        leaf: &mut dyn FnMut(&[u32]),
        frontier: &mut Vec<State>,
    ) {
        if ctx.tick() {
            return;
        }
        let len = st.path.len();
        if len == self.total {
            let done = match self.end {
                Some(e) => *st.path.last().unwrap() == e,
                None => len >= 3 && self.close_cycle(st),
            };
            if done {
                leaf(&st.path);
            }
            return;
        }
        if cap.is_some_and(|c| len >= c) {
            frontier.push(st.clone());
            return;
        }
        let h = *st.path.last().unwrap();
        let free = self.allowed & !st.visited;
        let remaining = free.count_ones();
        for &(v, d) in &self.nbrs[h as usize] {
            let vb = bit(v);
            if free & vb == 0 || (Some(v) == self.end && remaining > 1) {
                continue;
            }
            if self.wellformed && !st.dirs.last().is_none_or(|&prev| is_wellformed_turn(prev, d)) {
                continue;
            }
            let free_after = free & !vb;
            if !self.still_feasible(h, v, free_after) {
                continue;
            }
            st.path.push(v);
            st.dirs.push(d);
            st.visited |= vb;
            self.dfs(st, cap, ctx, leaf, frontier);
            st.visited &= !vb;
            st.dirs.pop();
            st.path.pop();
        }
    }
}

/// Tiling walks on the overall graph (S, D).
struct TileWalker {
    /// `(neighbour, owning tile)` per node.
    nbrs: Vec<Vec<(u32, u32)>>,
    /// `(tile, a, b)` per node: each incident tile and its side opposite the node.
    opposite: Vec<Vec<(u32, u32, u32)>>,
    tiles: usize,
    node_count: u32,
    /// `Some((start, end))` for paths; cycles root at every node.
    ends: Option<(u32, u32)>,
}

impl TileWalker {
    /// `allowed` is derived from the root: cycles only use nodes above their first node.
    fn allowed(&self, st: &State) -> u128 {
        let all = if self.node_count == 128 { u128::MAX } else { bit(self.node_count) - 1 };
        match self.ends {
            Some(_) => all,
            None => all & !(bit(st.path[0]) - 1),
        }
    }

    fn target(&self, st: &State) -> u32 {
        match self.ends {
            Some((_, e)) => e,
            None => st.path[0],
        }
    }
}

impl Walker for TileWalker {
    fn roots(&self) -> Vec<State> {
        let root = |s: u32| State { path: vec![s], dirs: Vec::new(), visited: bit(s), used: 0 };
        match self.ends {
            Some((s, _)) => vec![root(s)],
            None => (0..self.node_count).map(root).collect(),
        }
    }

    fn dfs(
        &self,
        st: &mut State,
        cap: Option<usize>,
        ctx: &mut Ctx,
        leaf: &mut dyn FnMut(&[u32]),
        frontier: &mut Vec<State>,
    ) {
        if ctx.tick() {
            return;
        }
        let len = st.path.len();
        if cap.is_some_and(|c| len >= c) {
            frontier.push(st.clone());
            return;
        }
        let edges = len - 1;
        let h = *st.path.last().unwrap();
        let target = self.target(st);
        let cycle = self.ends.is_none();
        let allowed = self.allowed(st);
        for &(v, t) in &self.nbrs[h as usize] {
            let tb = bit(t);
            if st.used & tb != 0 {
                continue;
            }
            if v == target {
                if edges + 1 == self.tiles && (!cycle || (len >= 3 && st.path[1] < h)) {
                    if cycle {
                        leaf(&st.path);
                    } else {
                        st.path.push(v);
                        leaf(&st.path);
                        st.path.pop();
                    }
                }
                continue;
            }
            let vb = bit(v);
            if st.visited & vb != 0 || allowed & vb == 0 || edges + 1 == self.tiles {
                continue;
            }
            let used_after = st.used | tb;
            let visited_after = st.visited | vb;
            let links = (allowed & !visited_after) | vb | bit(target);
            let dead = self.opposite[h as usize]
                .iter()
                .any(|&(t2, a, b)| used_after & bit(t2) == 0 && (links & bit(a) == 0 || links & bit(b) == 0));
            if dead {
                continue;
            }
            st.path.push(v);
            st.visited = visited_after;
            st.used = used_after;
            self.dfs(st, cap, ctx, leaf, frontier);
            st.used &= !tb;
            st.visited &= !vb;
            st.path.pop();
        }
    }
}

fn ham_walker(graph: &LatticeGraph, family: PathFamily, opts: &EnumOptions) -> HamWalker {
    let n = graph.node_count();
    let adj: Vec<u128> = (0..n as u32).map(|v| graph.neighbours(v).iter().fold(0, |m, &u| m | bit(u))).collect();
    let nbrs = (0..n as u32)
        .map(|v| {
            let tv = graph.tile_of(v).expect("inscribed node");
            graph
                .neighbours(v)
                .iter()
                .map(|&u| (u, direction_of(tv, graph.tile_of(u).unwrap()).expect("inscribed edges are unit steps")))
                .collect()
        })
        .collect();
    let all = if n == 128 { u128::MAX } else { bit(n as u32) - 1 };
    let c = graph.corners();
    let (allowed, total, start, end) = match family {
        PathFamily::ZPath => {
            let (from, to) = z_endpoints(opts.removed_corner);
            (all & !bit(c.get(opts.removed_corner)), n - 1, c.get(from), Some(c.get(to)))
        }
        PathFamily::CCycle => (all, n, 0, None),
        _ => (all, n, c.left, Some(c.right)),
    };
    let wellformed = match family {
        PathFamily::WPath => opts.w_route == WRoute::Pruned,
        PathFamily::CCycle => opts.wellformed_cycles,
        _ => false,
    };
    HamWalker { adj, nbrs, allowed, total, start, end, wellformed }
}

fn tile_walker(graph: &LatticeGraph, family: PathFamily) -> TileWalker {
    let n = graph.node_count() as u32;
    let nbrs = (0..n)
        .map(|v| graph.neighbours(v).iter().map(|&u| (u, graph.edge_between(v, u).unwrap().tile.unwrap())).collect())
        .collect();
    let mut opposite: Vec<Vec<(u32, u32, u32)>> = vec![Vec::new(); n as usize];
    for (t, &[a, b, c]) in graph.tiles().iter().enumerate() {
        let t = t as u32;
        opposite[a as usize].push((t, b, c));
        opposite[b as usize].push((t, a, c));
        opposite[c as usize].push((t, a, b));
    }
    let c = graph.corners();
    let ends = (family == PathFamily::SPath).then_some((c.left, c.right));
    TileWalker { nbrs, opposite, tiles: graph.tiles().len(), node_count: n, ends }
}

/// Folds `visit` over every object of `family` on `graph`.
///
/// `visit` sees the node sequence of each solution (cycles without the
/// repeated first node). Partial accumulators are combined with `merge` in a
/// fixed order.
pub fn fold_solutions<A, I, V, M>(
    family: PathFamily,
    graph: &LatticeGraph,
    opts: &EnumOptions,
    init: I,
    visit: V,
    merge: M,
) -> Result<(A, SearchStats), EnumError>
where
    A: Send,
    I: Fn() -> A + Sync + Send,
    V: Fn(&mut A, &[u32]) + Sync + Send,
    M: Fn(A, A) -> A + Sync + Send,
{
    if graph.family() != family.graph_family() {
        return Err(EnumError::WrongGraph { family, expected: family.graph_family(), actual: graph.family() });
    }
    if graph.node_count() > MAX_SEARCH_NODES || graph.tiles().len() > MAX_SEARCH_NODES {
        return Err(EnumError::TooLarge { nodes: graph.node_count(), tiles: graph.tiles().len() });
    }
    let filter_w = family == PathFamily::WPath && opts.w_route == WRoute::FilterHamiltonian;
    let visit = |acc: &mut A, path: &[u32]| {
        if !filter_w || is_wellformed_path(graph, path) {
            visit(acc, path)
        }
    };
    let control = Control { budget: opts.step_budget, steps: AtomicU64::new(0), abort: AtomicBool::new(false) };
    let run = || match family.graph_family() {
        Family::Inscribed => drive(&ham_walker(graph, family, opts), opts, &control, &init, &visit, &merge),
        Family::Overall => drive(&tile_walker(graph, family), opts, &control, &init, &visit, &merge),
    };
    let acc = match opts.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t.max(1))
            .build()
            .map_err(|e| EnumError::ThreadPool(e.to_string()))?
            .install(run),
        None => run(),
    };
    let stats =
        SearchStats { steps: control.steps.load(Ordering::Relaxed), complete: !control.abort.load(Ordering::Relaxed) };
    Ok((acc, stats))
}

fn drive<W, A, I, V, M>(walker: &W, opts: &EnumOptions, control: &Control, init: &I, visit: &V, merge: &M) -> A
where
    W: Walker,
    A: Send,
    I: Fn() -> A + Sync,
    V: Fn(&mut A, &[u32]) + Sync,
    M: Fn(A, A) -> A + Sync,
{
    let mut head = init();
    let mut frontier = Vec::new();
    {
        let mut ctx = Ctx { ctl: control, local: 0 };
        for mut root in walker.roots() {
            let cap = Some(opts.prefix_depth.max(1));
            walker.dfs(&mut root, cap, &mut ctx, &mut |p| visit(&mut head, p), &mut frontier);
        }
    }
    let tail = frontier
        .into_par_iter()
        .map(|mut st| {
            let mut acc = init();
            let mut ctx = Ctx { ctl: control, local: 0 };
            walker.dfs(&mut st, None, &mut ctx, &mut |p| visit(&mut acc, p), &mut Vec::new());
            acc
        })
        .reduce(init, merge);
    merge(head, tail)
}

/// Counts the objects of `family` on `graph`, keeping `opts.emit` samples.
pub fn enumerate(family: PathFamily, graph: &LatticeGraph, opts: &EnumOptions) -> Result<EnumerationResult, EnumError> {
    let started = Instant::now();
    let keep = opts.emit;
    let ((count, samples), stats) = fold_solutions(
        family,
        graph,
        opts,
        || (0u64, Vec::new()),
        |(c, s): &mut (u64, Vec<Vec<u32>>), p| {
            *c += 1;
            if s.len() < keep {
                s.push(p.to_vec());
            }
        },
        |(c1, mut s1), (c2, s2)| {
            s1.extend(s2.into_iter().take(keep.saturating_sub(s1.len())));
            (c1 + c2, s1)
        },
    )?;
    Ok(EnumerationResult {
        family,
        n: graph.order(),
        k: graph.depth(),
        count,
        elapsed: started.elapsed(),
        samples: samples.into_iter().map(|nodes| PathObject::new(family, graph, nodes)).collect(),
        complete: stats.complete,
    })
}

/// All objects of `family`, in deterministic order. Intended for small graphs.
pub fn collect_all(family: PathFamily, graph: &LatticeGraph, opts: &EnumOptions) -> Result<Vec<PathObject>, EnumError> {
    let (paths, _) = fold_solutions(
        family,
        graph,
        opts,
        Vec::new,
        |acc: &mut Vec<Vec<u32>>, p| acc.push(p.to_vec()),
        |mut a, b| {
            a.extend(b);
            a
        },
    )?;
    Ok(paths.into_iter().map(|nodes| PathObject::new(family, graph, nodes)).collect())
}
