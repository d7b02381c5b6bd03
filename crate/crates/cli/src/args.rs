use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bellcomm", version, about = "Local, one-bit and c-bit bounds of bipartite Bell functionals")]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Worker threads for the parallel searches (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Neither read nor write the result cache.
    #[arg(long, global = true)]
    pub no_cache: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Table,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum DirectionArg {
    /// Alice sends.
    Ab,
    /// Bob sends.
    Ba,
    /// Larger of the two directions.
    Bi,
}

impl DirectionArg {
    pub fn label(self) -> &'static str {
        match self {
            DirectionArg::Ab => "ab",
            DirectionArg::Ba => "ba",
            DirectionArg::Bi => "bi",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a registry functional and describe it.
    Build(BuildArgs),
    /// Exact local bound by branch and bound.
    Local(BoundArgs),
    /// Exact one-bit bound by bipartition enumeration.
    Onebit(OnebitArgs),
    /// Exact one-way c-bit bound by partition enumeration.
    Cbit(CbitArgs),
    /// Explicit quantum strategies and their values.
    Quantum(QuantumArgs),
    /// The E7 Platonic correlation functional.
    Plato(PlatoArgs),
    /// Seeded see-saw lower bounds.
    Heuristic(HeuristicArgs),
    /// Recompute a table of reference values and compare.
    Reproduce(ReproduceArgs),
}

#[derive(Args, Debug)]
pub struct BuildArgs {
    /// Registry name, e.g. chsh4, magic2s, cglmp8x2, platoE7.
    #[arg(long)]
    pub functional: String,

    /// Print only the scenario tuple (m_A,m_B,o_A,o_B).
    #[arg(long)]
    pub print_scenario: bool,

    /// Write the functional document (JSON) to this path.
    #[arg(long)]
    pub export: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct BoundArgs {
    /// Registry name of the functional.
    #[arg(long)]
    pub functional: String,

    /// Stop after this many search nodes; the result is then a lower bound.
    #[arg(long)]
    pub node_budget: Option<u64>,
}

#[derive(Args, Debug)]
pub struct OnebitArgs {
    #[command(flatten)]
    pub bound: BoundArgs,

    #[arg(long, value_enum, default_value_t = DirectionArg::Bi)]
    pub direction: DirectionArg,
}

#[derive(Args, Debug)]
pub struct CbitArgs {
    #[command(flatten)]
    pub bound: BoundArgs,

    /// Message length in bits.
    #[arg(long, default_value_t = 1)]
    pub bits: u32,

    #[arg(long, value_enum, default_value_t = DirectionArg::Ab)]
    pub direction: DirectionArg,
}

#[derive(Args, Debug)]
pub struct QuantumArgs {
    #[command(subcommand)]
    pub family: QuantumFamily,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Truncation {
    /// Both parties keep inputs 00, 01, 11 (CGLMP) or 00..20 (Magic).
    S,
    /// Asymmetric truncation.
    A,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CglmpReport {
    /// Single-copy value (and the product value when copies or a truncation are given).
    Value,
    /// Per-copy term matrix t[x][y] for downstream product evaluation.
    TMatrix,
    /// Schmidt coefficients of the state.
    State,
}

#[derive(Subcommand, Debug)]
pub enum QuantumFamily {
    /// Optimal CHSH strategy and its tensor powers.
    Chsh {
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Include the strategy document (state and measurements).
        #[arg(long)]
        emit_strategy: bool,
    },
    /// Observable-grid strategy for the Magic square and its powers or truncations.
    Magic {
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Two-copy truncation (requires --copies 2).
        #[arg(long, value_enum)]
        truncation: Option<Truncation>,
        #[arg(long)]
        emit_strategy: bool,
    },
    /// Fourier-measurement strategy for CGLMP_d with an optimized Schmidt vector.
    Cglmp {
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 1)]
        copies: usize,
        /// Two-copy truncation (requires --copies 2).
        #[arg(long, value_enum)]
        truncation: Option<Truncation>,
        /// Use the uniform (maximally entangled) Schmidt vector instead.
        #[arg(long)]
        uniform: bool,
        #[arg(long, value_enum, default_value_t = CglmpReport::Value)]
        report: CglmpReport,
    },
    /// Library strategy evaluated on any registry functional.
    Functional {
        #[arg(long)]
        functional: String,
    },
}

#[derive(Args, Debug)]
pub struct PlatoArgs {
    #[command(subcommand)]
    pub action: PlatoAction,
}

#[derive(Subcommand, Debug)]
pub enum PlatoAction {
    /// Construct the 63 E7 vectors and check semi-orthogonality.
    E7 {
        /// Include the exact coordinates.
        #[arg(long)]
        emit_vectors: bool,
    },
    /// Exact local bound by sign branch and bound.
    Local {
        #[arg(long)]
        node_budget: Option<u64>,
    },
    /// One-bit lower bound by sign see-saw, optionally with analytic upper bounds.
    Onebit {
        #[arg(long, default_value_t = 1000)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also compute the exact local bound and the upper bound √2·L.
        #[arg(long)]
        with_upper: bool,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum HeuristicKind {
    Local,
    Onebit,
}

#[derive(Args, Debug)]
pub struct HeuristicArgs {
    #[arg(value_enum)]
    pub kind: HeuristicKind,
    #[arg(long)]
    pub functional: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 100)]
    pub restarts: usize,
    #[arg(long, default_value_t = 200)]
    pub max_sweeps: usize,
    /// Sender for the one-bit search.
    #[arg(long, value_enum, default_value_t = DirectionArg::Ab)]
    pub direction: DirectionArg,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum TableName {
    Table1,
    Table2,
    Table3,
    Table4,
    All,
}

#[derive(Args, Debug)]
pub struct ReproduceArgs {
    #[arg(value_enum)]
    pub table: TableName,
    /// Largest row parameter: copies n for table2/table3, dimension d for table4.
    #[arg(long)]
    pub max_n: Option<usize>,
    /// Run only the job with this id.
    #[arg(long)]
    pub job: Option<String>,
    /// List the jobs (the manifest) without running them.
    #[arg(long)]
    pub list: bool,
    /// Also write the result rows as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Node budget for every exact job.
    #[arg(long)]
    pub node_budget: Option<u64>,
}
