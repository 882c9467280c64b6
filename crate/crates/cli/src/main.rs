//! `trifractal`: enumerate, classify, count, verify and draw.

mod cache;
mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "trifractal", version, about = "Exact path and cycle counts on triangular fractal graphs")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalArgs {
    /// Worker threads for enumeration (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Largest graph, in nodes, that may be built.
    #[arg(long, global = true, default_value_t = trifractal::graph::DEFAULT_NODE_BUDGET)]
    pub budget_nodes: u64,
    /// Largest decimal expansion, in digits; bigger values print factored only.
    #[arg(long, global = true, default_value_t = trifractal::formulas::DEFAULT_DIGIT_BUDGET)]
    pub budget_digits: u64,
    /// JSON-lines result cache (off unless given).
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,
    /// Include the slow n = 8 (and, with --n-max 9, n = 9) rows.
    #[arg(long, global = true)]
    pub long: bool,
    /// Machine-readable output.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count (and optionally list) paths or cycles by exhaustive search.
    Enumerate(EnumerateArgs),
    /// Group well-formed paths or cycles by v-shape capacity.
    Classify(ClassifyArgs),
    /// Evaluate a counting formula.
    Count(CountArgs),
    /// Reproduce the reference tables.
    Verify(VerifyArgs),
    /// Draw a pattern, a graph or a sample walk as SVG.
    Render(RenderArgs),
    /// Write a graph as JSON or DOT.
    GraphExport(GraphExportArgs),
    /// Map between well-formed inscribed walks and tiling walks.
    Transform(TransformArgs),
}

#[derive(Args, Debug)]
pub struct EnumerateArgs {
    #[arg(long, short = 'f')]
    pub family: trifractal::paths::PathFamily,
    #[arg(short = 'n')]
    pub n: u64,
    #[arg(short = 'k', default_value_t = 1)]
    pub k: u32,
    /// Stop after this many search steps; the count is then partial (exit 3).
    #[arg(long)]
    pub budget: Option<u64>,
    /// Print up to this many sample objects.
    #[arg(long, default_value_t = 0)]
    pub emit: usize,
    /// Corner removed for Z-paths.
    #[arg(long, value_enum, default_value_t = CornerArg::Top)]
    pub removed_corner: CornerArg,
    /// Keep only C-cycles whose turns are all well-formed.
    #[arg(long)]
    pub wellformed: bool,
    /// Produce W-paths by filtering all H-paths instead of pruning.
    #[arg(long)]
    pub filter_w: bool,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum CornerArg {
    Top,
    Left,
    Right,
}

#[derive(Args, Debug)]
pub struct ClassifyArgs {
    #[arg(long, short = 'o')]
    pub object: trifractal::classify::ClassObject,
    #[arg(short = 'n')]
    pub n: u64,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Onodes,
    Oedges,
    Inodes,
    Iedges,
    Spaths,
    Dcycles,
    Hpaths,
    Ccycles,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Recursive,
    Explicit,
    Both,
}

#[derive(Args, Debug)]
pub struct CountArgs {
    #[arg(value_enum)]
    pub quantity: Quantity,
    pub n: u64,
    pub k: u32,
    #[arg(long, value_enum, default_value_t = Mode::Recursive)]
    pub mode: Mode,
    /// Take base counts and groups from the published tables instead of enumerating.
    #[arg(long)]
    pub trust_tables: bool,
    /// Show the factored form over prime bases.
    #[arg(long)]
    pub primes: bool,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub suite: trifractal::verify::Suite,
    #[arg(long)]
    pub n_min: Option<u64>,
    #[arg(long)]
    pub n_max: Option<u64>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderTarget {
    Pattern,
    Graph,
    PathSample,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    Overall,
    Inscribed,
}

#[derive(Args, Debug)]
pub struct RenderArgs {
    #[arg(value_enum)]
    pub target: RenderTarget,
    #[arg(short = 'n')]
    pub n: u64,
    #[arg(short = 'k', default_value_t = 1)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = GraphKind::Overall)]
    pub graph: GraphKind,
    /// Family of the sampled walk.
    #[arg(long, short = 'f')]
    pub family: Option<trifractal::paths::PathFamily>,
    /// Which walk, in enumeration order.
    #[arg(long, default_value_t = 0)]
    pub index: usize,
    #[arg(long, value_enum, default_value_t = RenderFormat::Svg)]
    pub format: RenderFormat,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderFormat {
    Svg,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Dot,
}

#[derive(Args, Debug)]
pub struct GraphExportArgs {
    #[arg(long, value_enum)]
    pub graph: GraphKind,
    #[arg(short = 'n')]
    pub n: u64,
    #[arg(short = 'k', default_value_t = 1)]
    pub k: u32,
    #[arg(long, value_enum, default_value_t = ExportFormat::Json)]
    pub format: ExportFormat,
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    /// Family of the input walk: wpath, spath, ccycle or dcycle.
    #[arg(long)]
    pub from: trifractal::paths::PathFamily,
    #[arg(short = 'n')]
    pub n: u64,
    #[arg(short = 'k', default_value_t = 1)]
    pub k: u32,
    /// Comma-separated node ids; default is the `--index`-th enumerated walk.
    #[arg(long, value_delimiter = ',')]
    pub nodes: Option<Vec<u32>>,
    #[arg(long, default_value_t = 0)]
    pub index: usize,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match cli.command {
        Command::Enumerate(a) => commands::enumerate(&cli.global, &a),
        Command::Classify(a) => commands::classify(&cli.global, &a),
        Command::Count(a) => commands::count(&cli.global, &a),
        Command::Verify(a) => commands::verify(&cli.global, &a),
        Command::Render(a) => commands::render(&cli.global, &a),
        Command::GraphExport(a) => commands::graph_export(&cli.global, &a),
        Command::Transform(a) => commands::transform(&cli.global, &a),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
