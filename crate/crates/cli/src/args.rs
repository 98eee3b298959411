use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use redset_core::DetectionKind;

#[derive(Parser, Debug)]
#[command(name = "redset", version, about = "Redundant detection systems on graphs and the king's grid")]
pub struct Cli {
    /// Machine-readable JSON output.
    #[arg(long, global = true)]
    pub json: bool,
    /// Print rationals as decimals (6 significant digits) in text output.
    #[arg(long, global = true)]
    pub decimal: bool,
    /// Worker threads for enumeration and search.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a detector set or periodic pattern.
    Verify(VerifyArgs),
    /// Find a minimum detector set on a graph.
    Solve(SolveArgs),
    /// Density of a detector set or pattern.
    Density(Subject),
    /// Per-detector shares.
    Share(ShareArgs),
    /// Largest share over all feasible 5x5 patches.
    Bound(BoundArgs),
    /// Periodic patterns of a given period.
    Search(SearchArgs),
    /// List the built-in patterns.
    Builtins,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Kind {
    Open,
    Closed,
}

impl From<Kind> for DetectionKind {
    fn from(k: Kind) -> Self {
        match k {
            Kind::Open => DetectionKind::Open,
            Kind::Closed => DetectionKind::Closed,
        }
    }
}

/// What to inspect: a graph with a detector set, or a periodic pattern.
#[derive(Args, Debug)]
pub struct Subject {
    /// Graph JSON file.
    #[arg(long, requires = "set", conflicts_with_all = ["builtin", "pattern"])]
    pub graph: Option<PathBuf>,
    /// Detector set JSON file.
    #[arg(long)]
    pub set: Option<PathBuf>,
    /// Built-in pattern name.
    #[arg(long, conflicts_with = "pattern")]
    pub builtin: Option<String>,
    /// ASCII pattern file.
    #[arg(long)]
    pub pattern: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub subject: Subject,
    /// Detection kind; defaults to the set file's kind.
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
    #[arg(long, default_value_t = 1)]
    pub redundancy: usize,
    /// Check by deleting every small detector subset instead.
    #[arg(long)]
    pub by_deletion: bool,
}

#[derive(Args, Debug)]
pub struct ShareArgs {
    #[command(flatten)]
    pub subject: Subject,
    #[arg(long, value_enum)]
    pub kind: Option<Kind>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SolveMode {
    Exact,
    All,
    Decision,
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 1)]
    pub redundancy: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub mode: SolveMode,
    /// Set size for decision mode.
    #[arg(long, required_if_eq("mode", "decision"))]
    pub size: Option<usize>,
    /// Use the exhaustive reference solver.
    #[arg(long)]
    pub brute_force: bool,
    /// Write the instance as DIMACS CNF to this file.
    #[arg(long)]
    pub export_cnf: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    #[arg(long, value_enum)]
    pub kind: Kind,
    /// Also classify patches whose share exceeds this value.
    #[arg(long)]
    pub threshold: Option<String>,
    /// Largest share a supporting neighbour may have when classifying.
    #[arg(long, default_value = "13/4")]
    pub class_limit: String,
    /// Fixed cells as `?X?/?X?/???` (3x3 around the centre) or 5x5 rows.
    #[arg(long)]
    pub constraint: Option<String>,
}

#[derive(Args, Debug)]
pub struct SearchArgs {
    #[arg(long)]
    pub rows: usize,
    #[arg(long)]
    pub cols: usize,
    #[arg(long, value_enum)]
    pub kind: Kind,
    #[arg(long, default_value_t = 1)]
    pub redundancy: usize,
    /// Largest number of detector residues.
    #[arg(long)]
    pub max_detectors: Option<usize>,
    /// List every valid pattern within the limit, not only minimum ones.
    #[arg(long)]
    pub all: bool,
    #[arg(long, default_value_t = redset_core::periodic::DEFAULT_AREA_BUDGET)]
    pub area_budget: usize,
}
