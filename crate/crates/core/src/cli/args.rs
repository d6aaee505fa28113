use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::quotient::OverflowPolicy;

#[derive(Debug, Parser)]
#[command(name = "wreathkit", version, about = "Exact graded algebras, truncations and matrix wreath products")]
pub struct Cli {
    /// Seed for every random choice; recorded in output headers.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// What to do when a product leaves the truncation.
    #[arg(long, global = true, value_enum, default_value_t = PolicyArg::Truncate)]
    pub policy: PolicyArg,
    /// Also write the report as JSON.
    #[arg(long, global = true)]
    pub json: Option<PathBuf>,
    /// Field for presentations without a `field` line.
    #[arg(long, global = true, env = "WREATHKIT_FIELD", default_value = "rational")]
    pub field: String,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PolicyArg {
    Reject,
    Truncate,
}

impl From<PolicyArg> for OverflowPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::Reject => OverflowPolicy::Reject,
            PolicyArg::Truncate => OverflowPolicy::TruncateAndFlag,
        }
    }
}

/// A presentation file and its truncation degree.
#[derive(Clone, Debug, Args)]
pub struct AlgebraArgs {
    #[arg(short = 'p', long = "pres")]
    pub pres: PathBuf,
    #[arg(short = 'N', long = "trunc")]
    pub n: usize,
}

/// The two factors of a wreath product and an optional γ-spec.
#[derive(Clone, Debug, Args)]
pub struct WreathArgs {
    #[arg(long = "B")]
    pub b: PathBuf,
    #[arg(long = "A")]
    pub a: PathBuf,
    #[arg(long)]
    pub gamma: Option<PathBuf>,
    /// Truncation degree used for both factors unless overridden.
    #[arg(short = 'N', long = "trunc", default_value_t = 6)]
    pub n: usize,
    #[arg(long = "nb")]
    pub nb: Option<usize>,
    #[arg(long = "na")]
    pub na: Option<usize>,
}

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Graded dimensions of a truncated presentation (`degree,dim,exact`).
    Build {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// g(V, n) for V spanned by the generators (`n,dim,exact`).
    Growth {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Golod–Shafarevich condition 1 − m·t + Σ r_d t^d < 0.
    GsCheck {
        #[arg(short = 'm')]
        m: u64,
        /// Relation counts per degree, e.g. `2:1,3:4`.
        #[arg(long, default_value = "")]
        census: String,
        #[arg(long)]
        t0: Option<String>,
        /// Largest denominator tried by the rational search.
        #[arg(long, default_value_t = 5)]
        denom_bound: u64,
    },
    /// Evaluates an expression over generators, `c_gamma` and `e(i,j,a)`.
    WreathEval {
        #[command(flatten)]
        w: WreathArgs,
        #[arg(long)]
        expr: String,
    },
    /// Smallest k ≤ max-power with e^k = 0.
    NilCheck {
        #[command(flatten)]
        w: WreathArgs,
        #[arg(long)]
        expr: String,
        #[arg(long, default_value_t = 20)]
        max_power: usize,
    },
    /// Randomized associativity and bimodule checks (`check,samples,skipped,passed,exact`).
    AxiomCheck {
        #[command(flatten)]
        w: WreathArgs,
        #[arg(long, default_value_t = 100)]
        samples: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// w_γ(n) for V spanned by the generators of B (`n,dim,exact`).
    Wgamma {
        #[command(flatten)]
        w: WreathArgs,
        #[arg(short = 'n')]
        n_max: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Inclusion U^n ⊆ rhs(n) and the dimension bound, for every n up to the given one.
    Lemma3 {
        #[command(flatten)]
        w: WreathArgs,
        #[arg(short = 'n')]
        n_max: usize,
        /// Add e₁₁(1) to the generators.
        #[arg(long)]
        e11: bool,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// dim V^n (W_n c_γ) V^n against (dim V^n)²·w_γ(n).
    DenseCheck {
        #[command(flatten)]
        w: WreathArgs,
        #[arg(short = 'n')]
        n_max: usize,
    },
    /// Growth exponent estimate over a window of a growth CSV.
    Gk {
        #[arg(long)]
        table: PathBuf,
        /// `lo:hi`.
        #[arg(long)]
        window: String,
        #[arg(long, default_value_t = crate::growth::gk::DEFAULT_RATIO_THRESHOLD)]
        ratio: f64,
    },
    /// b with γ(b_i b) = 0 for i < n and a·γ(b_n b) ≠ 0.
    DensityWitness {
        #[command(flatten)]
        w: WreathArgs,
        /// Elements b_1..b_n of B, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        list: Vec<String>,
        #[arg(long = "elem")]
        a_elem: String,
        #[arg(long)]
        degree_cap: Option<usize>,
    },
    /// b of degree ≥ s with b_1·b, …, b_n·b independent.
    Lemma11 {
        #[command(flatten)]
        alg: AlgebraArgs,
        #[arg(long, value_delimiter = ',', required = true)]
        list: Vec<String>,
        #[arg(short = 's')]
        s: usize,
    },
    /// b·f_a = g_a for every basis element a of A, and (b, 0)³ = 0.
    EmbedCheck {
        #[command(flatten)]
        alg: AlgebraArgs,
    },
    /// Closure of B, e₁₁(1) and c_γ under multiplication against the matrix units.
    GenerationCheck {
        #[command(flatten)]
        w: WreathArgs,
        /// Matrix units e(i,j,a) with 1 ≤ i, j ≤ index-cap are sought.
        #[arg(long, default_value_t = 2)]
        index_cap: usize,
        /// Unipotent elements of B whose inverses join the generators.
        #[arg(long, value_delimiter = ',')]
        unipotent: Vec<String>,
    },
    /// γ with γ(v_k) = a_k on one new word per schedule step; emits a γ-spec.
    ScheduleGamma {
        #[command(flatten)]
        w: WreathArgs,
        #[arg(long)]
        schedule: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Builds the two-family presentation and checks f(n) ≤ g_k(n) ≤ C(k,2)·f(n).
    Sec6 {
        #[arg(long)]
        kmax: usize,
        #[arg(long)]
        schedule: String,
        #[arg(long = "J")]
        j: PathBuf,
        #[arg(short = 'N', long = "trunc")]
        n: usize,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Build { .. } => "build",
            Command::Growth { .. } => "growth",
            Command::GsCheck { .. } => "gs-check",
            Command::WreathEval { .. } => "wreath-eval",
            Command::NilCheck { .. } => "nil-check",
            Command::AxiomCheck { .. } => "axiom-check",
            Command::Wgamma { .. } => "wgamma",
            Command::Lemma3 { .. } => "lemma3",
            Command::DenseCheck { .. } => "dense-check",
            Command::Gk { .. } => "gk",
            Command::DensityWitness { .. } => "density-witness",
            Command::Lemma11 { .. } => "lemma11",
            Command::EmbedCheck { .. } => "embed-check",
            Command::GenerationCheck { .. } => "generation-check",
            Command::ScheduleGamma { .. } => "schedule-gamma",
            Command::Sec6 { .. } => "sec6",
        }
    }

    /// Where the main table goes, if anywhere other than stdout.
    pub fn emit(&self) -> Option<&PathBuf> {
        match self {
            Command::Build { emit, .. }
            | Command::Growth { emit, .. }
            | Command::AxiomCheck { emit, .. }
            | Command::Wgamma { emit, .. }
            | Command::Lemma3 { emit, .. }
            | Command::ScheduleGamma { emit, .. }
            | Command::Sec6 { emit, .. } => emit.as_ref(),
            _ => None,
        }
    }
}
