//! Verification suites: reproduce the reference tables from enumeration and
//! formulas, and cross-check formulas against brute force.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use serde::Serialize;

use crate::classify::{classify, ClassObject};
use crate::enumerate::{enumerate, EnumOptions};
use crate::formulas::{
    ccycles_count, dcycles_count, hpaths_closed_n3, hpaths_count, spaths_count, BaseCounts, Factored, Variant,
    DEFAULT_DIGIT_BUDGET,
};
use crate::graph::{build_inscribed, build_overall, BuildOptions, LatticeGraph};
use crate::lattice::triangular;
use crate::paths::{is_wellformed_cycle, PathFamily};
use crate::reference::tables;
use crate::sizes::{inscribed_edges, inscribed_nodes, overall_edges, overall_nodes_explicit, overall_nodes_recursive};
use crate::transform::{transform_s_to_w, transform_w_to_s};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Table1,
    Table2,
    Table3,
    Table4,
    Table5,
    Figures,
    Cross,
    All,
}

impl Suite {
    pub const EACH: [Suite; 7] =
        [Suite::Table1, Suite::Table2, Suite::Table3, Suite::Table4, Suite::Table5, Suite::Figures, Suite::Cross];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Table1 => "table1",
            Suite::Table2 => "table2",
            Suite::Table3 => "table3",
            Suite::Table4 => "table4",
            Suite::Table5 => "table5",
            Suite::Figures => "figures",
            Suite::Cross => "cross",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite '{s}' (expected table1..table5, figures, cross or all)"))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub enum_opts: EnumOptions,
    /// Include the n = 8 rows (minutes) and, if `n_max` allows, n = 9.
    pub long: bool,
    pub n_min: Option<u64>,
    pub n_max: Option<u64>,
    pub digit_budget: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            enum_opts: EnumOptions::default(),
            long: false,
            n_min: None,
            n_max: None,
            digit_budget: DEFAULT_DIGIT_BUDGET,
        }
    }
}

impl VerifyOptions {
    /// Whether order `n` is in range. `heavy_from` is the first order that
    /// needs `--long`; n = 9 additionally needs an explicit `n_max`.
    fn wants(&self, n: u64, heavy_from: u64) -> bool {
        if self.n_min.is_some_and(|m| n < m) || self.n_max.is_some_and(|m| n > m) {
            return false;
        }
        if n >= heavy_from && !self.long {
            return false;
        }
        n < 9 || self.n_max.is_some_and(|m| m >= 9)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseResult {
    pub case: String,
    pub expected: String,
    /// Where the expected value comes from: a citation, or "derived: ...".
    pub source: String,
    pub actual: String,
    pub pass: bool,
    #[serde(serialize_with = "as_millis")]
    pub elapsed: Duration,
}

fn as_millis<S: serde::Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_u64(d.as_millis() as u64)
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub suite: Suite,
    pub cases: Vec<CaseResult>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.cases.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "suite": self.suite.name(),
            "status": if self.passed() { "pass" } else { "fail" },
            "cases": self.cases,
        })
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            let mark = if c.pass { "PASS" } else { "FAIL" };
            write!(f, "{mark} [{}] {}: {}", self.suite, c.case, c.actual)?;
            if !c.pass {
                write!(f, " (expected {} per {})", c.expected, c.source)?;
            }
            writeln!(f, " [{} ms]", c.elapsed.as_millis())?;
        }
        let bad = self.failures().count();
        write!(f, "{}: {} cases, {} failed", self.suite, self.cases.len(), bad)
    }
}

struct Recorder {
    cases: Vec<CaseResult>,
}

impl Recorder {
    /// Runs `f`, which returns `(expected, actual)`; errors count as failures.
    fn case<F>(&mut self, case: impl Into<String>, source: impl Into<String>, f: F)
    where
        F: FnOnce() -> Result<(String, String), String>,
    {
        let start = Instant::now();
        let (expected, actual, pass) = match f() {
            Ok((e, a)) => {
                let pass = e == a;
                (e, a, pass)
            }
            Err(msg) => ("-".into(), format!("error: {msg}"), false),
        };
        self.cases.push(CaseResult {
            case: case.into(),
            expected,
            source: source.into(),
            actual,
            pass,
            elapsed: start.elapsed(),
        });
    }
}

fn graph(family: PathFamily, n: u64, k: u32) -> Result<LatticeGraph, String> {
    let o = BuildOptions::default();
    match family.graph_family() {
        crate::graph::Family::Inscribed => build_inscribed(n, k, &o),
        crate::graph::Family::Overall => build_overall(n, k, &o),
    }
    .map_err(|e| e.to_string())
}

fn count(family: PathFamily, n: u64, k: u32, opts: &EnumOptions) -> Result<u64, String> {
    let g = graph(family, n, k)?;
    let r = enumerate(family, &g, opts).map_err(|e| e.to_string())?;
    if !r.complete {
        return Err("step budget exhausted".into());
    }
    Ok(r.count)
}

fn enumerated_base(n: u64, opts: &EnumOptions) -> Result<BaseCounts, String> {
    BaseCounts::enumerate(n, opts).map_err(|e| e.to_string())
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> Vec<VerificationReport> {
    if suite == Suite::All {
        return Suite::EACH.iter().flat_map(|&s| run_suite(s, opts)).collect();
    }
    let mut rec = Recorder { cases: Vec::new() };
    match suite {
        Suite::Table1 => table1(&mut rec, opts),
        Suite::Table2 => table2(&mut rec, opts),
        Suite::Table3 => table3(&mut rec, opts),
        Suite::Table4 => table4(&mut rec, opts),
        Suite::Table5 => table5(&mut rec, opts),
        Suite::Figures => figures(&mut rec, opts),
        Suite::Cross => cross(&mut rec, opts),
        Suite::All => unreachable!(),
    }
    vec![VerificationReport { suite, cases: rec.cases }]
}

fn table1(rec: &mut Recorder, opts: &VerifyOptions) {
    let block = &tables().base_counts;
    for row in &block.rows {
        if !opts.wants(row.n, 8) {
            continue;
        }
        let expect = [row.h, row.w, row.z, row.c, row.w, row.d];
        for (family, e) in PathFamily::ALL.into_iter().zip(expect) {
            rec.case(format!("{family} n={}", row.n), &block.citation, || {
                Ok((e.to_string(), count(family, row.n, 1, &opts.enum_opts)?.to_string()))
            });
        }
    }
}

fn table2(rec: &mut Recorder, opts: &VerifyOptions) {
    let block = &tables().overall_nodes;
    for row in &block.rows {
        if !opts.wants(row.n, u64::MAX) {
            continue;
        }
        for (i, &e) in row.values.iter().enumerate() {
            let (n, k) = (row.n, i as u32 + 1);
            rec.case(format!("|O_{n}({k})| recursive"), &block.citation, || {
                Ok((e.to_string(), show(overall_nodes_recursive::<BigUint>(n, k))))
            });
            rec.case(format!("|O_{n}({k})| explicit"), &block.citation, || {
                Ok((e.to_string(), show(overall_nodes_explicit::<BigUint>(n, k))))
            });
            if (triangular(n) as f64).powi(k as i32) <= 1e4 {
                rec.case(format!("|O_{n}({k})| constructed"), &block.citation, || {
                    let g = graph(PathFamily::SPath, n, k)?;
                    Ok((e.to_string(), g.node_count().to_string()))
                });
            }
        }
    }
}

fn show<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_else(|| "overflow".into())
}

fn same_factored(expected: &Factored, actual: Option<&Factored>) -> bool {
    match actual {
        Some(a) => a.prime_exponents().is_some() && a.prime_exponents() == expected.prime_exponents(),
        None => false,
    }
}

fn table3(rec: &mut Recorder, opts: &VerifyOptions) {
    let block = &tables().dcycles;
    for entry in &block.entries {
        if !opts.wants(entry.n, u64::MAX) {
            continue;
        }
        let expected = entry.factored();
        for variant in [Variant::Explicit, Variant::Recursive] {
            rec.case(format!("D_{{{},{}}} {variant:?}", entry.n, entry.k), &block.citation, || {
                let base = enumerated_base(entry.n, &opts.enum_opts)?;
                let v = dcycles_count::<BigUint>(entry.n, entry.k, &base, opts.digit_budget, variant)
                    .map_err(|e| e.to_string())?;
                let actual = match &v.factored {
                    Some(f) if same_factored(&expected, Some(f)) => expected.to_string(),
                    _ => v.display(),
                };
                let exact = match (expected.expand::<BigUint>(opts.digit_budget), &v.value) {
                    (Some(e), Some(a)) => e == *a,
                    _ => true,
                };
                Ok((expected.to_string(), if exact { actual } else { format!("{actual} (decimal differs)") }))
            });
        }
    }
}

fn groups_string(groups: &[(u64, u64, u64)]) -> String {
    let parts: Vec<String> = groups.iter().map(|(m, p, v)| format!("({m},{p},{v})")).collect();
    parts.join(" ")
}

fn classify_case(
    rec: &mut Recorder,
    object: ClassObject,
    n: u64,
    expected: &[(u64, u64, u64)],
    source: &str,
    opts: &VerifyOptions,
) {
    rec.case(format!("{object} groups n={n}"), source, || {
        let got = classify(object, n, &opts.enum_opts).map_err(|e| e.to_string())?;
        let got: Vec<_> = got.iter().map(|g| (g.multiplicity, g.pure_count, g.v_count)).collect();
        let mut want = expected.to_vec();
        want.sort_by_key(|g| g.2);
        Ok((groups_string(&want), groups_string(&got)))
    });
}

fn table4(rec: &mut Recorder, opts: &VerifyOptions) {
    let block = &tables().wpath_groups;
    for row in &block.rows {
        if opts.wants(row.n, u64::MAX) {
            classify_case(rec, ClassObject::Wpath, row.n, &row.groups, &block.citation, opts);
        }
    }
}

fn table5(rec: &mut Recorder, opts: &VerifyOptions) {
    let block = &tables().dcycle_groups;
    for row in &block.rows {
        if opts.wants(row.n, 8) {
            classify_case(rec, ClassObject::Dcycle, row.n, &row.groups, &block.citation, opts);
        }
    }
}

fn figures(rec: &mut Recorder, opts: &VerifyOptions) {
    let block = &tables().examples;
    let budget = opts.digit_budget;
    for ex in &block.entries {
        let (n, k) = (ex.n, ex.k);
        let expected = ex.factored.clone().or_else(|| ex.decimal.clone()).unwrap_or_default();
        let want_decimal = ex.decimal.clone();
        let label = format!("{} ({n},{k})", ex.quantity);
        match ex.quantity.as_str() {
            "onodes" => rec.case(label, &block.citation, || {
                let g = graph(PathFamily::SPath, n, k)?;
                let f = show(overall_nodes_explicit::<BigUint>(n, k));
                if f != g.node_count().to_string() {
                    return Err(format!("formula {f} vs constructed {}", g.node_count()));
                }
                Ok((expected.clone(), f))
            }),
            "oedges" => rec.case(label, &block.citation, || {
                let g = graph(PathFamily::SPath, n, k)?;
                let f = show(overall_edges::<BigUint>(n, k));
                if f != g.edge_count().to_string() {
                    return Err(format!("formula {f} vs constructed {}", g.edge_count()));
                }
                Ok((expected.clone(), f))
            }),
            "spaths" => rec.case(label, &block.citation, || {
                let base = enumerated_base(n, &opts.enum_opts)?;
                let v = spaths_count::<BigUint>(n, k, &base, budget).map_err(|e| e.to_string())?;
                decimal_check(&want_decimal, &v.value)?;
                Ok((expected.clone(), v.display()))
            }),
            "hpaths" => rec.case(label, &block.citation, || {
                let base = enumerated_base(n, &opts.enum_opts)?;
                let groups = classify(ClassObject::Wpath, n, &opts.enum_opts).map_err(|e| e.to_string())?;
                let v = hpaths_count::<BigUint>(n, k, &base, &groups, budget).map_err(|e| e.to_string())?;
                if n == 3 {
                    let closed = hpaths_closed_n3::<BigUint>(k, budget).map_err(|e| e.to_string())?;
                    if closed.value != v.value {
                        return Err("closed form and recursion disagree".into());
                    }
                    if ex.factored.is_some() {
                        return Ok((expected.clone(), closed.display()));
                    }
                }
                Ok((expected.clone(), v.display()))
            }),
            other => rec.case(label, &block.citation, || Err(format!("no checker for quantity '{other}'"))),
        }
    }
}

fn decimal_check(want: &Option<String>, got: &Option<BigUint>) -> Result<(), String> {
    match (want, got) {
        (Some(w), Some(g)) if *w != g.to_string() => Err(format!("decimal {g}, expected {w}")),
        (Some(_), None) => Err("decimal over budget".into()),
        _ => Ok(()),
    }
}

/// Formula outputs against brute force, plus the path/tiling bijection.
fn cross(rec: &mut Recorder, opts: &VerifyOptions) {
    let eo = &opts.enum_opts;
    let budget = opts.digit_budget;
    const SRC: &str = "derived: brute-force enumeration on the explicit graph";
    if opts.wants(3, u64::MAX) {
        let formula = |which: PathFamily| -> Result<String, String> {
            let base = enumerated_base(3, eo)?;
            let wg = classify(ClassObject::Wpath, 3, eo).map_err(|e| e.to_string())?;
            let dg = classify(ClassObject::Dcycle, 3, eo).map_err(|e| e.to_string())?;
            let v = match which {
                PathFamily::HPath => hpaths_count::<BigUint>(3, 2, &base, &wg, budget),
                PathFamily::CCycle => ccycles_count::<BigUint>(3, 2, &base, &dg, &wg, budget),
                PathFamily::SPath | PathFamily::WPath => spaths_count::<BigUint>(3, 2, &base, budget),
                _ => dcycles_count::<BigUint>(3, 2, &base, budget, Variant::Explicit),
            }
            .map_err(|e| e.to_string())?;
            Ok(show(v.value))
        };
        for family in [PathFamily::HPath, PathFamily::CCycle, PathFamily::SPath, PathFamily::DCycle, PathFamily::WPath]
        {
            rec.case(format!("{family} (3,2) enumeration = formula"), SRC, || {
                Ok((formula(family)?, count(family, 3, 2, eo)?.to_string()))
            });
        }
        rec.case("well-formed ccycle (3,2) = D_{3,2}", SRC, || {
            let opts = EnumOptions { wellformed_cycles: true, ..eo.clone() };
            Ok((formula(PathFamily::DCycle)?, count(PathFamily::CCycle, 3, 2, &opts)?.to_string()))
        });
    }
    for n in 2..=7 {
        if !opts.wants(n, u64::MAX) {
            continue;
        }
        rec.case(format!("well-formed ccycle n={n} = D_n"), SRC, || {
            let opts = EnumOptions { wellformed_cycles: true, ..eo.clone() };
            Ok((count(PathFamily::DCycle, n, 1, eo)?.to_string(), count(PathFamily::CCycle, n, 1, &opts)?.to_string()))
        });
        rec.case(format!("well-formed filter n={n} = W_n"), SRC, || {
            let i = graph(PathFamily::CCycle, n, 1)?;
            let all = crate::enumerate::collect_all(PathFamily::CCycle, &i, eo).map_err(|e| e.to_string())?;
            let wf = all.iter().filter(|c| is_wellformed_cycle(&i, &c.nodes)).count();
            Ok((count(PathFamily::DCycle, n, 1, eo)?.to_string(), wf.to_string()))
        });
        if n <= 6 {
            rec.case(format!("W->S bijection n={n}"), "derived: transform round trip", || {
                let i = graph(PathFamily::WPath, n, 1)?;
                let o = graph(PathFamily::SPath, n, 1)?;
                let ws = crate::enumerate::collect_all(PathFamily::WPath, &i, eo).map_err(|e| e.to_string())?;
                let ss: BTreeSet<Vec<u32>> = crate::enumerate::collect_all(PathFamily::SPath, &o, eo)
                    .map_err(|e| e.to_string())?
                    .into_iter()
                    .map(|s| s.nodes)
                    .collect();
                let mut images = BTreeSet::new();
                for w in &ws {
                    let s = transform_w_to_s(w, &i, &o).map_err(|e| e.to_string())?;
                    if transform_s_to_w(&s, &i, &o).map_err(|e| e.to_string())?.nodes != w.nodes {
                        return Err("round trip changed a W-path".into());
                    }
                    if !ss.contains(&s.nodes) {
                        return Err("image is not an enumerated S-path".into());
                    }
                    images.insert(s.nodes);
                }
                Ok((
                    format!("{} distinct of {}", ss.len(), ss.len()),
                    format!("{} distinct of {}", images.len(), ws.len()),
                ))
            });
        }
    }
    for (n, k) in [(2u64, 1u32), (2, 2), (2, 3), (3, 1), (3, 2), (4, 1), (4, 2), (5, 1), (5, 2)] {
        if !opts.wants(n, u64::MAX) {
            continue;
        }
        rec.case(format!("sizes ({n},{k}) = constructed"), "derived: explicit graph construction", || {
            let o = graph(PathFamily::SPath, n, k)?;
            let i = graph(PathFamily::HPath, n, k)?;
            let f = [
                overall_nodes_explicit::<u64>(n, k),
                overall_edges(n, k),
                inscribed_nodes(n, k),
                inscribed_edges(n, k),
            ];
            let g = [o.node_count(), o.edge_count(), i.node_count(), i.edge_count()];
            Ok((format!("{f:?}"), format!("{:?}", g.map(|x| Some(x as u64)))))
        });
    }
}
