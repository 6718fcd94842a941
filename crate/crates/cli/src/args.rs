use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Rainbow Hamiltonicity in graph collections: generators, exact search,
/// structure analysis, certificates and absorption.
///
/// Exit codes: 0 found / true / success, 1 not found / false, 2 usage or
/// input error, 3 budget exceeded.
#[derive(Debug, Parser)]
#[command(name = "transversal", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Wall-clock budget for searches.
    #[arg(long, global = true)]
    pub timeout_ms: Option<u64>,
    /// Cap on worker threads.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a collection file.
    #[command(subcommand)]
    Gen(Gen),
    /// Search for rainbow Hamilton cycles, paths or matchings.
    #[command(subcommand)]
    Solve(Solve),
    /// Niceness, extremality and stability.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Edit distance to the extremal families.
    #[command(subcommand)]
    Dist(Dist),
    /// Find or check non-Hamiltonicity certificates.
    #[command(subcommand)]
    Cert(Cert),
    /// Absorbing paths and cycles.
    #[command(subcommand)]
    Absorb(Absorb),
    /// Re-validate witnesses and run the experiment suites.
    #[command(subcommand)]
    Verify(Verify),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum BSide {
    Empty,
    Complete,
}

#[derive(Debug, Subcommand)]
pub enum Gen {
    /// `a` colours of two cliques and `b` complete bipartite colours on the canonical split.
    Hab {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Independent `A` of size `n/2 + 1` joined completely to `B`.
    HalfSplit {
        #[arg(long)]
        n: usize,
        /// Colour count, default `n`.
        #[arg(long)]
        colors: Option<usize>,
        /// Size of `A`, default `n/2 + 1`.
        #[arg(long)]
        part: Option<usize>,
        #[arg(long, value_enum, default_value_t = BSide::Empty)]
        b_internal: BSide,
        #[command(flatten)]
        out: Output,
    },
    TwoCliques {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    Bipartite {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// `n` copies of the complete graph.
    Complete {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Independent G(n, p) per colour.
    Random {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        colors: Option<usize>,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Random graphs with a minimum degree floor, default `ceil(n/2)`.
    Dirac {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        colors: Option<usize>,
        #[arg(long)]
        min_degree: Option<usize>,
        #[command(flatten)]
        out: Output,
    },
    /// Half the colours bipartite on one equitable split, half on a far one.
    WeakMixture {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        out: Output,
    },
    /// Toggle random vertex pairs in random colours.
    Perturb {
        input: PathBuf,
        #[arg(long)]
        edits: usize,
        #[command(flatten)]
        out: Output,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    pub input: PathBuf,
    #[arg(long)]
    pub node_limit: Option<u64>,
    /// Skip the parity certificate check before searching.
    #[arg(long)]
    pub no_precheck: bool,
    /// Write the witness here.
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Subcommand)]
pub enum Solve {
    /// Rainbow Hamilton cycle on `n` colours.
    Hc(SearchArgs),
    /// Rainbow Hamilton path on `n - 1` colours.
    Hp(SearchArgs),
    /// Largest rainbow matching.
    Matching(SearchArgs),
}

#[derive(Debug, Args)]
pub struct ModeArgs {
    /// Use seeded local search with this many restarts instead of the exact scan.
    #[arg(long)]
    pub heuristic: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Analyze {
    /// Niceness, extremality and characteristic partition of one colour.
    Color {
        input: PathBuf,
        #[arg(long)]
        color: usize,
        #[arg(long)]
        eps: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Strongly stable, weakly stable or neither.
    Stability {
        input: PathBuf,
        #[arg(long, default_value = "1/2")]
        gamma: String,
        #[arg(long, default_value = "1/20")]
        alpha: String,
        #[arg(long, default_value = "1/20")]
        eps: String,
        #[arg(long, default_value = "1/5")]
        delta: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
    /// Edge counts over all half-size sets.
    CollectionNice {
        input: PathBuf,
        #[arg(long)]
        mu: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
}

#[derive(Debug, Args)]
pub struct DistArgs {
    pub input: PathBuf,
    /// Local search with this many restarts instead of the exact scan.
    #[arg(long)]
    pub local_search: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Dist {
    /// Distance to the `H_a^b` family.
    H {
        #[command(flatten)]
        args: DistArgs,
        /// Only members with `b` odd.
        #[arg(long)]
        require_b_odd: bool,
    },
    HalfSplit {
        #[command(flatten)]
        args: DistArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CertKind {
    Parity,
    IndependentSet,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Target {
    Cycle,
    Path,
}

#[derive(Debug, Subcommand)]
pub enum Cert {
    Find {
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: CertKind,
        #[arg(long, value_enum, default_value_t = Target::Cycle)]
        target: Target,
        #[command(flatten)]
        out: Output,
    },
    Check {
        input: PathBuf,
        certificate: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
pub enum Absorb {
    /// Build an absorbing cycle in a strongly stable collection.
    Demo {
        input: PathBuf,
        #[arg(long, default_value = "3/10")]
        lambda: String,
        #[command(flatten)]
        mode: ModeArgs,
        /// Write the cycle here.
        #[command(flatten)]
        out: Output,
    },
    /// List `c`-absorbing paths of `(v, u)`.
    Enumerate {
        input: PathBuf,
        #[arg(long)]
        color: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        u: usize,
        #[arg(long)]
        limit: Option<usize>,
        /// Print only the exact count.
        #[arg(long)]
        count: bool,
    },
    /// Check the absorbing conditions of a cycle over all colours.
    Check {
        input: PathBuf,
        cycle: PathBuf,
        #[arg(long)]
        delta_p: String,
        #[arg(long)]
        eps: String,
        #[arg(long)]
        gamma_p: String,
        #[command(flatten)]
        mode: ModeArgs,
    },
}

#[derive(Debug, Subcommand)]
pub enum Verify {
    /// Re-validate a witness against a collection.
    Witness { input: PathBuf, witness: PathBuf },
    /// Hamiltonicity of every extremal family member for `4 <= n <= n_max`.
    Sweep {
        #[arg(long, default_value_t = 9)]
        n_max: usize,
        /// Directory for the report file.
        #[arg(long)]
        report_dir: Option<PathBuf>,
    },
    /// Seeded minimum-degree collections.
    Dirac {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        report_dir: Option<PathBuf>,
    },
    /// Classification of perturbed extremal collections.
    Boundary {
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "0,1,2,4,8")]
        grid: Vec<usize>,
        #[arg(long)]
        report_dir: Option<PathBuf>,
    },
}
