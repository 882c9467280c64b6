use std::io::Write;
use std::path::Path;

use num_bigint::BigUint;
use serde_json::json;
use thiserror::Error;
use trifractal::classify::{classify as classify_walks, groups_to_json, ClassGroup, ClassObject, ClassifyError};
use trifractal::enumerate::{enumerate as run_enumeration, EnumError, EnumOptions, WRoute};
use trifractal::export;
use trifractal::formulas::{
    ccycles_count, dcycles_count, hpaths_closed_n3, hpaths_count, spaths_count, BaseCounts, FormulaError, Provenance,
    Variant,
};
use trifractal::graph::{build_inscribed, build_overall, BuildOptions, GraphError, LatticeGraph};
use trifractal::lattice::{triangular, Corner};
use trifractal::paths::{check_path, PathFamily, PathObject};
use trifractal::pattern::build_pattern;
use trifractal::reference;
use trifractal::sizes;
use trifractal::transform::{transform_c_to_d, transform_d_to_c, transform_s_to_w, transform_w_to_s, TransformError};
use trifractal::verify::{run_suite, VerifyOptions};
use trifractal::BigCount;

use crate::cache::{CacheEntry, CacheError, CacheKey, ResultCache, ENGINE_VERSION, FORMAT_VERSION};
use crate::{
    ClassifyArgs, CornerArg, CountArgs, EnumerateArgs, ExportFormat, GlobalArgs, GraphExportArgs, GraphKind, Mode,
    Quantity, RenderArgs, RenderTarget, TransformArgs, VerifyArgs,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Budget(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failure(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Budget(_) => 3,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::OverBudget { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<EnumError> for CliError {
    fn from(e: EnumError) -> Self {
        match e {
            EnumError::WrongGraph { .. } => CliError::Usage(e.to_string()),
            EnumError::TooLarge { .. } => CliError::Budget(e.to_string()),
            EnumError::ThreadPool(_) => CliError::Failure(e.to_string()),
        }
    }
}

impl From<FormulaError> for CliError {
    fn from(e: FormulaError) -> Self {
        match e {
            FormulaError::OverBudget { .. } | FormulaError::Overflow { .. } => CliError::Budget(e.to_string()),
            FormulaError::Degenerate { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<ClassifyError> for CliError {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::Graph(g) => g.into(),
            ClassifyError::Enumerate(x) => x.into(),
            ClassifyError::Incomplete => CliError::Budget(e.to_string()),
            _ => CliError::Failure(e.to_string()),
        }
    }
}

impl From<CacheError> for CliError {
    fn from(e: CacheError) -> Self {
        CliError::Failure(e.to_string())
    }
}

impl From<TransformError> for CliError {
    fn from(e: TransformError) -> Self {
        CliError::Failure(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn build_opts(g: &GlobalArgs) -> BuildOptions {
    BuildOptions { node_budget: g.budget_nodes }
}

fn enum_opts(g: &GlobalArgs) -> EnumOptions {
    EnumOptions { threads: g.threads, ..EnumOptions::default() }
}

fn graph_for(g: &GlobalArgs, family: PathFamily, n: u64, k: u32) -> Result<LatticeGraph> {
    Ok(match family.graph_family() {
        trifractal::graph::Family::Overall => build_overall(n, k, &build_opts(g))?,
        trifractal::graph::Family::Inscribed => build_inscribed(n, k, &build_opts(g))?,
    })
}

fn corner(c: CornerArg) -> Corner {
    match c {
        CornerArg::Top => Corner::Top,
        CornerArg::Left => Corner::Left,
        CornerArg::Right => Corner::Right,
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Failure(format!("{}: {e}", p.display()))),
        None => std::io::stdout().write_all(text.as_bytes()).map_err(|e| CliError::Failure(e.to_string())),
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json values serialise"));
}

/// Options that change a count, rendered canonically for the cache key.
fn options_key(family: PathFamily, opts: &EnumOptions) -> String {
    match family {
        PathFamily::ZPath => format!("removed={:?}", opts.removed_corner).to_lowercase(),
        PathFamily::CCycle if opts.wellformed_cycles => "wellformed".into(),
        _ => String::new(),
    }
}

struct Counted {
    count: u64,
    elapsed_ms: u64,
    provenance: Provenance,
}

/// Count by cache lookup or enumeration; enumerated counts are written back.
fn cached_count(
    g: &GlobalArgs,
    cache: &mut Option<ResultCache>,
    family: PathFamily,
    n: u64,
    k: u32,
    opts: &EnumOptions,
) -> Result<Counted> {
    let key =
        CacheKey { quantity: "count".into(), family: family.name().into(), n, k, options: options_key(family, opts) };
    if let Some(hit) = cache.as_ref().and_then(|c| c.get(&key)) {
        if let Ok(count) = hit.count.parse() {
            let provenance = if hit.provenance == Provenance::Enumerated { Provenance::Cache } else { hit.provenance };
            return Ok(Counted { count, elapsed_ms: hit.elapsed_ms, provenance });
        }
    }
    let graph = graph_for(g, family, n, k)?;
    let r = run_enumeration(family, &graph, opts)?;
    if !r.complete {
        return Err(CliError::Budget(format!("{family} ({n},{k}) ran out of step budget after {} objects", r.count)));
    }
    let elapsed_ms = r.elapsed.as_millis() as u64;
    if let Some(c) = cache.as_mut() {
        c.insert(CacheEntry {
            format: FORMAT_VERSION,
            key,
            count: r.count.to_string(),
            provenance: Provenance::Enumerated,
            engine: ENGINE_VERSION.into(),
            elapsed_ms,
        })?;
    }
    Ok(Counted { count: r.count, elapsed_ms, provenance: Provenance::Enumerated })
}

fn open_cache(g: &GlobalArgs) -> Result<Option<ResultCache>> {
    Ok(match &g.cache {
        Some(p) => Some(ResultCache::open(p)?),
        None => None,
    })
}

pub fn enumerate(g: &GlobalArgs, a: &EnumerateArgs) -> Result<()> {
    let mut opts = enum_opts(g);
    opts.step_budget = a.budget;
    opts.removed_corner = corner(a.removed_corner);
    opts.wellformed_cycles = a.wellformed;
    opts.emit = a.emit;
    if a.filter_w {
        opts.w_route = WRoute::FilterHamiltonian;
    }
    if a.wellformed && a.family != PathFamily::CCycle {
        return Err(CliError::Usage("--wellformed applies to ccycle only".into()));
    }
    let mut cache = open_cache(g)?;
    let (count, elapsed_ms, complete, samples, provenance) = if a.emit == 0 && a.budget.is_none() {
        let c = cached_count(g, &mut cache, a.family, a.n, a.k, &opts)?;
        // a cached enumeration reports the original run, so warm and cold output agree
        let p = if c.provenance == Provenance::Cache { Provenance::Enumerated } else { c.provenance };
        (c.count, c.elapsed_ms, true, Vec::new(), p)
    } else {
        let graph = graph_for(g, a.family, a.n, a.k)?;
        let r = run_enumeration(a.family, &graph, &opts)?;
        (r.count, r.elapsed.as_millis() as u64, r.complete, r.samples, Provenance::Enumerated)
    };
    let mut v = json!({
        "family": a.family.name(),
        "n": a.n,
        "k": a.k,
        "count": count.to_string(),
        "elapsed_ms": elapsed_ms,
        "final": complete,
        "provenance": provenance.as_str(),
    });
    if !samples.is_empty() {
        v["samples"] = samples.iter().map(|s: &PathObject| json!(s.nodes)).collect();
    }
    if g.json {
        print_json(&v);
    } else {
        let partial = if complete { "" } else { " (partial: step budget exhausted)" };
        println!("{} n={} k={}: {count}{partial} [{provenance}, {elapsed_ms} ms]", a.family, a.n, a.k);
        for s in &samples {
            println!("  {:?}", s.nodes);
        }
    }
    if !complete {
        return Err(CliError::Budget("step budget exhausted; count is a lower bound".into()));
    }
    Ok(())
}

pub fn classify(g: &GlobalArgs, a: &ClassifyArgs) -> Result<()> {
    let groups = classify_walks(a.object, a.n, &enum_opts(g))?;
    if g.json {
        let mut v = groups_to_json(a.object, a.n, &groups);
        v["provenance"] = json!("enumerated");
        print_json(&v);
    } else {
        println!("{} n={} (T_n = {}) [enumerated]", a.object, a.n, triangular(a.n));
        println!("{:>6} {:>6} {:>6}", "mult", "pure", "v");
        for x in &groups {
            println!("{:>6} {:>6} {:>6}", x.multiplicity, x.pure_count, x.v_count);
        }
        println!("total {}", groups.iter().map(|x| x.multiplicity).sum::<u64>());
    }
    Ok(())
}

struct Inputs {
    base: BaseCounts,
    wpath: Option<Vec<ClassGroup>>,
    dcycle: Option<Vec<ClassGroup>>,
    groups_from: Provenance,
}

fn formula_inputs(g: &GlobalArgs, n: u64, trust: bool, need: &[ClassObject]) -> Result<Inputs> {
    if trust {
        let base =
            reference::base_counts(n).ok_or_else(|| CliError::Usage(format!("no published base counts for n={n}")))?;
        let pick = |obj: ClassObject| -> Result<Option<Vec<ClassGroup>>> {
            if !need.contains(&obj) {
                return Ok(None);
            }
            let found = match obj {
                ClassObject::Wpath => reference::wpath_groups(n),
                ClassObject::Dcycle => reference::dcycle_groups(n),
            };
            found.map(Some).ok_or_else(|| CliError::Usage(format!("no published {obj} groups for n={n}")))
        };
        return Ok(Inputs {
            base,
            wpath: pick(ClassObject::Wpath)?,
            dcycle: pick(ClassObject::Dcycle)?,
            groups_from: Provenance::PublishedTable,
        });
    }
    let mut cache = open_cache(g)?;
    let opts = enum_opts(g);
    let mut counts = [0u64; 6];
    let mut from_cache = false;
    for (slot, family) in counts.iter_mut().zip(PathFamily::ALL) {
        let c = cached_count(g, &mut cache, family, n, 1, &opts)?;
        from_cache |= c.provenance == Provenance::Cache;
        *slot = c.count;
    }
    let [h, w, z, c, s, d] = counts;
    let provenance = if from_cache { Provenance::Cache } else { Provenance::Enumerated };
    let base = BaseCounts { n, h, w, s, z, c, d, provenance };
    let run = |obj: ClassObject| -> Result<Option<Vec<ClassGroup>>> {
        Ok(if need.contains(&obj) { Some(classify_walks(obj, n, &opts)?) } else { None })
    };
    Ok(Inputs {
        base,
        wpath: run(ClassObject::Wpath)?,
        dcycle: run(ClassObject::Dcycle)?,
        groups_from: Provenance::Enumerated,
    })
}

fn size_value(q: Quantity, n: u64, k: u32, mode: Mode, digits: u64) -> Result<(BigCount, &'static str)> {
    if n < 2 || k < 1 {
        return Err(CliError::Usage(format!("need n >= 2 and k >= 1, got n={n}, k={k}")));
    }
    let estimate = k as f64 * (triangular(n) as f64).log10();
    if estimate > digits as f64 {
        return Err(CliError::Budget(format!("about {} digits, over the budget of {digits}", estimate as u64)));
    }
    let wrap = |v: Option<BigUint>| BigCount { value: v, factored: None };
    Ok(match q {
        Quantity::Onodes => {
            let r = sizes::overall_nodes_recursive::<BigUint>(n, k);
            let e = sizes::overall_nodes_explicit::<BigUint>(n, k);
            match mode {
                Mode::Recursive => (wrap(r), "onodes recursive"),
                Mode::Explicit => (wrap(e), "onodes explicit"),
                Mode::Both => {
                    if r != e {
                        return Err(CliError::Failure(format!("recursive {r:?} and explicit {e:?} disagree")));
                    }
                    (wrap(r), "onodes recursive = explicit")
                }
            }
        }
        Quantity::Oedges => (wrap(sizes::overall_edges(n, k)), "oedges"),
        Quantity::Inodes => (wrap(sizes::inscribed_nodes(n, k)), "inodes"),
        Quantity::Iedges => (wrap(sizes::inscribed_edges(n, k)), "iedges"),
        _ => unreachable!("size quantities only"),
    })
}

fn with_groups(groups: &Option<Vec<ClassGroup>>) -> &[ClassGroup] {
    groups.as_deref().unwrap_or(&[])
}

pub fn count(g: &GlobalArgs, a: &CountArgs) -> Result<()> {
    let (n, k, digits) = (a.n, a.k, g.budget_digits);
    let name = match a.quantity {
        Quantity::Onodes => "onodes",
        Quantity::Oedges => "oedges",
        Quantity::Inodes => "inodes",
        Quantity::Iedges => "iedges",
        Quantity::Spaths => "spaths",
        Quantity::Dcycles => "dcycles",
        Quantity::Hpaths => "hpaths",
        Quantity::Ccycles => "ccycles",
    };
    let (value, formula, inputs): (BigCount, String, Option<Inputs>) = match a.quantity {
        Quantity::Onodes | Quantity::Oedges | Quantity::Inodes | Quantity::Iedges => {
            let (v, f) = size_value(a.quantity, n, k, a.mode, digits)?;
            (v, f.to_string(), None)
        }
        Quantity::Spaths => {
            let inp = formula_inputs(g, n, a.trust_tables, &[])?;
            (spaths_count(n, k, &inp.base, digits)?, "S_n^((T_n+1)^(k-1))".into(), Some(inp))
        }
        Quantity::Dcycles => {
            let inp = formula_inputs(g, n, a.trust_tables, &[])?;
            let (v, f) = match a.mode {
                Mode::Recursive => {
                    (dcycles_count(n, k, &inp.base, digits, Variant::Recursive)?, "D_n S_{n,k-1}^(T_n^(k-1))")
                }
                Mode::Explicit => (
                    dcycles_count(n, k, &inp.base, digits, Variant::Explicit)?,
                    "D_n (S_n^((T_n+1)^(k-2)))^(T_n^(k-1))",
                ),
                Mode::Both => {
                    let r: BigCount = dcycles_count(n, k, &inp.base, digits, Variant::Recursive)?;
                    let e: BigCount = dcycles_count(n, k, &inp.base, digits, Variant::Explicit)?;
                    if !r.same_number(&e) {
                        return Err(CliError::Failure(format!(
                            "recursive {} and explicit {} disagree",
                            r.display(),
                            e.display()
                        )));
                    }
                    (e, "recursive = explicit")
                }
            };
            (v, f.into(), Some(inp))
        }
        Quantity::Hpaths => {
            let inp = formula_inputs(g, n, a.trust_tables, &[ClassObject::Wpath])?;
            let closed = if n == 3 && k >= 2 { Some(hpaths_closed_n3::<BigUint>(k, digits)?) } else { None };
            let v = match (a.mode, closed) {
                (Mode::Explicit, Some(c)) => (c, "10^a 2^(6^(k-1)-a)".to_string()),
                (Mode::Explicit, None) => {
                    return Err(CliError::Usage("hpaths has an explicit form for n = 3, k >= 2 only".into()));
                }
                (mode, closed) => {
                    let rec = hpaths_count::<BigUint>(n, k, &inp.base, with_groups(&inp.wpath), digits);
                    match (rec, closed) {
                        (Ok(r), Some(c)) => {
                            if r.value != c.value {
                                return Err(CliError::Failure(format!(
                                    "recursion {} and closed form {} disagree",
                                    r.display(),
                                    c.display()
                                )));
                            }
                            let label =
                                if mode == Mode::Both { "recursion = closed form" } else { "grouped recursion" };
                            (BigCount { value: r.value, factored: c.factored }, label.to_string())
                        }
                        (Ok(r), None) => (r, "grouped recursion".to_string()),
                        // the closed form stays factored where the recursion cannot expand
                        (Err(FormulaError::OverBudget { .. }), Some(c)) if mode == Mode::Recursive => {
                            (c, "10^a 2^(6^(k-1)-a)".to_string())
                        }
                        (Err(e), _) => return Err(e.into()),
                    }
                }
            };
            (v.0, v.1, Some(inp))
        }
        Quantity::Ccycles => {
            if a.mode == Mode::Explicit {
                return Err(CliError::Usage("ccycles has no explicit form; use --mode recursive".into()));
            }
            let inp = formula_inputs(g, n, a.trust_tables, &[ClassObject::Wpath, ClassObject::Dcycle])?;
            let v = ccycles_count(n, k, &inp.base, with_groups(&inp.dcycle), with_groups(&inp.wpath), digits)?;
            (v, "grouped recursion".into(), Some(inp))
        }
    };
    let provenance = match &inputs {
        Some(inp) => json!({
            "kind": "formula",
            "formula": formula,
            "base": inp.base.provenance.as_str(),
            "groups": if inp.wpath.is_some() || inp.dcycle.is_some() { Some(inp.groups_from.as_str()) } else { None },
        }),
        None => json!({"kind": "formula", "formula": formula}),
    };
    let mut value = value;
    if a.primes {
        value.factored = value.factored.as_ref().and_then(|f| f.normalized()).or(value.factored);
    }
    if g.json {
        print_json(&value.to_json(name, n, k, provenance));
        return Ok(());
    }
    let shown = match (&value.factored, &value.value) {
        (Some(f), Some(v)) if f.to_string() != v.to_string() => format!("{f} = {v}"),
        (Some(f), None) => format!("{f} (about {:.3e} digits; decimal over budget)", f.digits_estimate()),
        (_, Some(v)) => v.to_string(),
        (None, None) => "overflow".into(),
    };
    let source = match &inputs {
        Some(inp) => format!("formula: {formula}; base counts: {}", inp.base.provenance),
        None => format!("formula: {formula}"),
    };
    println!("{name}({n},{k}) = {shown} [{source}]");
    Ok(())
}

pub fn verify(g: &GlobalArgs, a: &VerifyArgs) -> Result<()> {
    let opts = VerifyOptions {
        enum_opts: enum_opts(g),
        long: g.long,
        n_min: a.n_min,
        n_max: a.n_max,
        digit_budget: g.budget_digits,
    };
    let reports = run_suite(a.suite, &opts);
    if g.json {
        print_json(&serde_json::Value::Array(reports.iter().map(|r| r.to_json()).collect()));
    } else {
        for r in &reports {
            println!("{r}");
        }
    }
    let failed: usize = reports.iter().map(|r| r.failures().count()).sum();
    if failed > 0 {
        return Err(CliError::Failure(format!("{failed} verification case(s) failed")));
    }
    Ok(())
}

fn pattern_budget(g: &GlobalArgs, n: u64, k: u32) -> Result<()> {
    let tiles = (triangular(n) as f64).powi(k as i32);
    if tiles > g.budget_nodes as f64 {
        return Err(CliError::Budget(format!(
            "F_{n}({k}) has {tiles} dark tiles, over the node budget of {}",
            g.budget_nodes
        )));
    }
    Ok(())
}

pub fn render(g: &GlobalArgs, a: &RenderArgs) -> Result<()> {
    pattern_budget(g, a.n, a.k)?;
    let pattern = build_pattern(a.n, a.k).map_err(|e| CliError::Usage(e.to_string()))?;
    let svg = match a.target {
        RenderTarget::Pattern => export::pattern_svg(&pattern),
        RenderTarget::Graph => {
            let graph = match a.graph {
                GraphKind::Overall => build_overall(a.n, a.k, &build_opts(g))?,
                GraphKind::Inscribed => build_inscribed(a.n, a.k, &build_opts(g))?,
            };
            export::graph_svg(&graph, &pattern)
        }
        RenderTarget::PathSample => {
            let family = a.family.ok_or_else(|| CliError::Usage("path-sample needs --family".into()))?;
            let graph = graph_for(g, family, a.n, a.k)?;
            let opts = EnumOptions { emit: a.index + 1, ..enum_opts(g) };
            let r = run_enumeration(family, &graph, &opts)?;
            let path = r
                .samples
                .get(a.index)
                .ok_or_else(|| CliError::Failure(format!("only {} {family} objects exist", r.count)))?;
            export::path_svg(&graph, &pattern, path)
        }
    };
    write_out(a.output.as_deref(), &svg)
}

pub fn graph_export(g: &GlobalArgs, a: &GraphExportArgs) -> Result<()> {
    let graph = match a.graph {
        GraphKind::Overall => build_overall(a.n, a.k, &build_opts(g))?,
        GraphKind::Inscribed => build_inscribed(a.n, a.k, &build_opts(g))?,
    };
    let text = match a.format {
        ExportFormat::Json => {
            let mut s = serde_json::to_string(&export::graph_to_json(&graph)).expect("json values serialise");
            s.push('\n');
            s
        }
        ExportFormat::Dot => export::graph_to_dot(&graph),
    };
    write_out(a.output.as_deref(), &text)
}

pub fn transform(g: &GlobalArgs, a: &TransformArgs) -> Result<()> {
    let inscribed = build_inscribed(a.n, a.k, &build_opts(g))?;
    let overall = build_overall(a.n, a.k, &build_opts(g))?;
    let source_graph = match a.from.graph_family() {
        trifractal::graph::Family::Inscribed => &inscribed,
        trifractal::graph::Family::Overall => &overall,
    };
    let input = match &a.nodes {
        Some(nodes) => PathObject::new(a.from, source_graph, nodes.clone()),
        None => {
            let opts =
                EnumOptions { emit: a.index + 1, wellformed_cycles: a.from == PathFamily::CCycle, ..enum_opts(g) };
            let r = run_enumeration(a.from, source_graph, &opts)?;
            r.samples
                .get(a.index)
                .cloned()
                .ok_or_else(|| CliError::Failure(format!("only {} {} objects exist", r.count, a.from)))?
        }
    };
    check_path(source_graph, &input, Corner::Top)
        .map_err(|e| CliError::Failure(format!("input is not a valid {}: {e}", a.from)))?;
    let output = match a.from {
        PathFamily::WPath => transform_w_to_s(&input, &inscribed, &overall)?,
        PathFamily::SPath => transform_s_to_w(&input, &inscribed, &overall)?,
        PathFamily::CCycle => transform_c_to_d(&input, &inscribed, &overall)?,
        PathFamily::DCycle => transform_d_to_c(&input, &inscribed, &overall)?,
        other => return Err(CliError::Usage(format!("no transform from {other}; use wpath, spath, ccycle or dcycle"))),
    };
    let target_graph = match output.family.graph_family() {
        trifractal::graph::Family::Inscribed => &inscribed,
        trifractal::graph::Family::Overall => &overall,
    };
    check_path(target_graph, &output, Corner::Top)
        .map_err(|e| CliError::Failure(format!("image is not a valid {}: {e}", output.family)))?;
    if g.json {
        print_json(&json!({
            "from": input.family.name(),
            "to": output.family.name(),
            "n": a.n,
            "k": a.k,
            "input": input.nodes,
            "output": output.nodes,
        }));
    } else {
        println!("{} {:?}", input.family, input.nodes);
        println!("{} {:?}", output.family, output.nodes);
    }
    Ok(())
}
