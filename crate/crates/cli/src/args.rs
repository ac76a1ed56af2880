use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use odplab::frink::DEFAULT_NODE_BUDGET;
use odplab::report::DEFAULT_MAX_ELEMENTS;

#[derive(Debug, Parser)]
#[command(name = "odplab", version, about = "Orthocomplemented difference posets: verify, classify, enumerate")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Node budget for maximal ideal enumeration.
    #[arg(long, global = true, env = "ODPLAB_BUDGET_NODES", default_value_t = DEFAULT_NODE_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub budget_nodes: u64,

    /// Size cap. Above it `verify` samples associativity and the other
    /// analyzers refuse the input.
    #[arg(long, global = true, env = "ODPLAB_MAX_ELEMENTS", default_value_t = DEFAULT_MAX_ELEMENTS,
          value_parser = positive_usize)]
    pub max_elements: usize,

    /// Exception bound B for `epset witness-search`.
    #[arg(long, global = true, env = "ODPLAB_FRAGMENT_BOUND", default_value_t = 30,
          value_parser = clap::value_parser!(u64).range(1..))]
    pub fragment_bound: u64,

    #[arg(long, global = true, env = "ODPLAB_FORMAT", value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Comma-separated `key=value` assertions on the report.
    #[arg(long, global = true, env = "ODPLAB_EXPECT")]
    pub expect: Option<String>,

    /// Seed for sampled checks.
    #[arg(long, global = true, env = "ODPLAB_SEED", default_value_t = 0)]
    pub seed: u64,

    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, env = "ODPLAB_JOBS", value_parser = positive_usize)]
    pub jobs: Option<usize>,

    /// Report every violating tuple instead of the first few per axiom.
    #[arg(long, global = true, env = "ODPLAB_ALL_WITNESSES")]
    pub all_witnesses: bool,
}

fn positive_usize(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    /// JSON with a fixed field order.
    Doc,
    /// Hasse diagram (`verify` only).
    Dot,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the orthoposet axioms and, when a delta table is present, the ODP axioms.
    Verify(InputArg),
    /// Membership in the classes R, S and T plus lattice and Boolean tests.
    Classify(InputArg),
    /// Enumerate maximal Frink ideals, one bitstring per line.
    Ideals(InputArg),
    /// Set representation through the selective maximal ideals.
    Represent(InputArg),
    /// Emit a structure file.
    #[command(subcommand)]
    Generate(Generate),
    /// Eventually periodic sets and the two infinite example families.
    #[command(subcommand)]
    Epset(EpsetCmd),
    /// Run the full property suite over the frozen corpus.
    CorpusCheck,
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// Structure file; `-` or absent reads standard input.
    pub input: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Generate {
    /// All subsets of an n-point set.
    Powerset {
        n: usize,
        #[arg(long)]
        explicit: bool,
    },
    /// Even-size subsets of a 2k-point set.
    Even {
        two_k: usize,
        #[arg(long)]
        explicit: bool,
    },
    /// Coordinatewise product of two structure files.
    Product { left: PathBuf, right: PathBuf },
    /// Closure of the given subsets under symmetric difference and complement.
    DeltaClosure {
        n: usize,
        /// Generators as n-character bitstrings.
        generators: Vec<String>,
        #[arg(long)]
        explicit: bool,
    },
    /// The frozen corpus: names and sizes, or one file per instance with `--out`.
    Corpus {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyName {
    R,
    T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClassName {
    R,
    T,
}

#[derive(Debug, Subcommand)]
pub enum EpsetCmd {
    /// Evaluate an expression to canonical form.
    Eval { expr: String },
    /// Decompose a set as base Δ finite exceptions, if it is a member.
    Member {
        #[arg(value_enum, ignore_case = true)]
        family: FamilyName,
        expr: String,
    },
    /// Whether two members have only ∅ as common lower bound.
    MeetsZero {
        #[arg(value_enum, ignore_case = true)]
        family: FamilyName,
        a: String,
        b: String,
    },
    /// Search members with exceptions below --fragment-bound for a class counterexample.
    WitnessSearch {
        #[arg(value_enum, ignore_case = true)]
        family: FamilyName,
        #[arg(value_enum, ignore_case = true)]
        class: ClassName,
    },
    /// Decide the R condition exactly where possible.
    RCheck {
        #[arg(value_enum, ignore_case = true)]
        family: FamilyName,
    },
}
