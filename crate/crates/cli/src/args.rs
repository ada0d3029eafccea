use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use commwb_core::commutators::{DEFAULT_TERM_DEPTH, DEFAULT_WORD_BOUND};

#[derive(Debug, Parser)]
#[command(name = "commwb", version, about = "Commutator workbench for finite pointed algebras")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Inspect and validate algebras.
    #[command(subcommand)]
    Algebra(AlgebraCmd),
    /// Compute commutators.
    #[command(subcommand)]
    Commutator(CommutatorCmd),
    /// Generated subuniverses, congruences and w-normal closures.
    #[command(subcommand)]
    Closure(ClosureCmd),
    /// Check one instance of a condition.
    #[command(subcommand)]
    Check(CheckCmd),
    /// Reproduce the worked examples.
    #[command(subcommand)]
    Examples(ExamplesCmd),
}

/// An algebra given by builtin name or by file.
#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct AlgebraSource {
    /// Builtin algebra name (see `commwb algebra list`).
    #[arg(long)]
    pub algebra: Option<String>,
    /// Algebra JSON file.
    #[arg(long)]
    pub file: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Bounds {
    /// Ternary strategy: group-fast, word-oracle or term-depth. Defaults to
    /// group-fast on groups and term-depth elsewhere.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Maximum word length for the word oracle.
    #[arg(long, env = "COMMWB_WORD_BOUND", default_value_t = DEFAULT_WORD_BOUND)]
    pub word_bound: usize,
    /// Maximum term depth for the bounded term search.
    #[arg(long, default_value_t = DEFAULT_TERM_DEPTH)]
    pub term_depth: usize,
}

#[derive(Debug, Subcommand)]
pub enum AlgebraCmd {
    /// Check an algebra against a variety profile.
    Verify {
        #[command(flatten)]
        source: AlgebraSource,
        /// Builtin profile name; detected from the signature if omitted.
        #[arg(long, conflicts_with = "profile_file")]
        profile: Option<String>,
        /// Profile JSON file.
        #[arg(long)]
        profile_file: Option<PathBuf>,
    },
    /// List builtin algebras.
    List,
}

/// Subuniverse syntax: space-separated generator labels, `*` for the whole
/// algebra, empty for the trivial subuniverse.
#[derive(Debug, Subcommand)]
pub enum CommutatorCmd {
    /// Huq commutation of two subuniverses, via the cooperator.
    Huq {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long = "sub", num_args = 1, required = true)]
        subs: Vec<String>,
    },
    /// Binary Higgins commutator `[K, L]`.
    Higgins {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long = "sub", num_args = 1, required = true)]
        subs: Vec<String>,
    },
    /// Ternary Higgins commutator `[K, L, M]`.
    Ternary {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long = "sub", num_args = 1, required = true)]
        subs: Vec<String>,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Smith commutator of two congruences.
    Smith {
        #[command(flatten)]
        source: AlgebraSource,
        /// Congruence syntax: space-separated `a=b` generating pairs, `*` for
        /// the total relation, empty for the identity.
        #[arg(long = "cong", num_args = 1, required = true)]
        congs: Vec<String>,
    },
    /// Commutation over a weight, from a weighted diagram file.
    Weighted {
        #[arg(long)]
        diagram: PathBuf,
        /// proper-commutators or ssh-kernel.
        #[arg(long, default_value = "proper-commutators")]
        mode: String,
        #[command(flatten)]
        bounds: Bounds,
    },
}

#[derive(Debug, Subcommand)]
pub enum ClosureCmd {
    /// Subuniverse generated by elements.
    Sub {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long, default_value = "")]
        gens: String,
    },
    /// Congruence generated by pairs.
    Cong {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long, default_value = "")]
        pairs: String,
    },
    /// w-normal closure of a subuniverse, where `w` is the inclusion of the
    /// weight subuniverse.
    Wnormal {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long)]
        sub: String,
        #[arg(long)]
        weight: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum CheckCmd {
    /// Smith centralisation from Huq commutation of normalisations.
    Sh {
        #[command(flatten)]
        source: AlgebraSource,
        #[arg(long = "cong", num_args = 1, required = true)]
        congs: Vec<String>,
    },
    /// Admissibility from commutation of kernel images. Takes a diagram file
    /// or a builtin diagram name.
    Ssh {
        #[arg(long)]
        diagram: String,
    },
    /// Ternary triviality from binary triviality, on a weighted diagram.
    W {
        #[arg(long)]
        diagram: PathBuf,
        #[command(flatten)]
        bounds: Bounds,
    },
    /// Reflection along a base change, on a fibred diagram.
    Reflect {
        #[arg(long)]
        diagram: PathBuf,
        #[arg(long, value_enum, default_value_t = ReflectMode::Points)]
        mode: ReflectMode,
        /// Fibre congruences on the total algebra.
        #[arg(long = "cong", num_args = 1, required = true)]
        congs: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReflectMode {
    /// Smith centralisation along the points fibration.
    Points,
    /// Smith centralisation along the basic fibration.
    Basic,
    /// Huq commutation of normal subpoints along the points fibration.
    Normal,
}

#[derive(Debug, Subcommand)]
pub enum ExamplesCmd {
    Run {
        #[arg(value_enum)]
        which: Example,
        #[arg(long, env = "COMMWB_WORD_BOUND", default_value_t = DEFAULT_WORD_BOUND)]
        word_bound: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Example {
    #[value(name = "hslat-ssh")]
    HslatSsh,
    #[value(name = "s3-w")]
    S3W,
    #[value(name = "groups-phi")]
    GroupsPhi,
    All,
}
