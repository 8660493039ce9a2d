use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "lipfree",
    version,
    about = "Exact norms and order structure in Lipschitz-free spaces over finite metric spaces"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Arithmetic mode; defaults to $LIPFREE_MODE, then exact.
    #[arg(long, global = true, value_enum)]
    pub mode: Option<ModeArg>,
    /// Relative tolerance for float mode.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tolerance: f64,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutFormat::Json)]
    pub out: OutFormat,
    /// Write the full JSON report here and print a summary instead.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModeArg {
    Exact,
    Float,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutFormat {
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct SpaceArg {
    #[arg(long)]
    pub space: PathBuf,
}

#[derive(Args, Debug, Clone)]
pub struct SpaceVector {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long)]
    pub vector: PathBuf,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightArg {
    H,
    G,
    Lambda,
    Pi,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecomposeArg {
    Molecules,
    Kalton,
    Classes,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentArg {
    Ambrosio,
    Weaver,
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Random rational metric space (shortest-path closure of random weights).
    Space {
        #[arg(long, default_value_t = 5)]
        points: usize,
    },
    /// Random vector on a given space.
    Vector {
        #[arg(long)]
        space: PathBuf,
        #[arg(long)]
        positive: bool,
    },
    /// Truncated Ambrosio net and its vector.
    Ambrosio {
        #[arg(long)]
        n: usize,
    },
    /// Truncated Weaver net, its vector and the weight h.
    Weaver {
        #[arg(long)]
        n: usize,
    },
    /// Gallery spaces; all of them, or one by name.
    Gallery {
        #[arg(long)]
        name: Option<String>,
    },
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check a space file against the metric axioms.
    Validate(SpaceArg),
    /// Norm of a vector with its optimal plan and dual function.
    Norm(SpaceVector),
    /// Pairing <m, f>.
    Pair {
        #[command(flatten)]
        sv: SpaceVector,
        #[arg(long)]
        function: PathBuf,
    },
    /// Support of a vector.
    Support(SpaceVector),
    /// McShane extension of a partial function (must include the base point).
    Extend {
        #[command(flatten)]
        space: SpaceArg,
        #[arg(long)]
        function: PathBuf,
    },
    /// A standard weight, its operator norm and, with --vector, its adjoint action.
    Weights {
        #[arg(long)]
        space: PathBuf,
        #[arg(long, value_enum)]
        kind: WeightArg,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        vector: Option<PathBuf>,
    },
    /// Molecule, Kalton or separation-class decomposition of a vector.
    Decompose {
        #[command(flatten)]
        sv: SpaceVector,
        #[arg(long, value_enum, default_value_t = DecomposeArg::Molecules)]
        kind: DecomposeArg,
    },
    /// Positivity by coefficients and by the LP route.
    Positivity(SpaceVector),
    /// Minimum majorants of m and -m; with --candidate, check a majorant.
    Majorant {
        #[command(flatten)]
        sv: SpaceVector,
        #[arg(long)]
        candidate: Option<PathBuf>,
    },
    /// Variation |m| and the support identities.
    Variation(SpaceVector),
    /// Radial and uniform discreteness constants.
    Radial(SpaceArg),
    /// Generate instances.
    Gen {
        #[command(subcommand)]
        what: GenCommand,
    },
    /// Divergence table for N = 1..n.
    Experiment {
        #[arg(value_enum)]
        which: ExperimentArg,
        #[arg(long)]
        n: usize,
        /// Leave the wall-time column empty so output is reproducible.
        #[arg(long)]
        no_timing: bool,
    },
    /// Run the invariant suite.
    Verify {
        /// `all` or a module name.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Print the invariant manifest instead of running it.
        #[arg(long)]
        manifest: bool,
    },
}
