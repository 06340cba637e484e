//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::json::ScramblerKind;

#[derive(Debug, Clone, Parser)]
#[command(name = "clonelab", version, about = "Numerical checks for cloning and monogamy games")]
pub struct Cli {
    /// Master seed; trial `i` draws from a SplitMix64 mix of (seed, i).
    #[arg(long, global = true, env = "CLONELAB_SEED", default_value_t = 0)]
    pub seed: u64,
    /// CSV destination; the JSON summary goes to the same path with a
    /// `.summary.json` extension. Without it the CSV goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Override the subcommand's comparison tolerance.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Override the subcommand's number of random trials.
    #[arg(long, global = true)]
    pub trials: Option<usize>,
    /// Run trials on the calling thread only.
    #[arg(long, global = true)]
    pub serial: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// BB84 monogamy constants, plus the overlap floor on random measurement families.
    Bb84(Bb84Args),
    /// Phase twirl against the type-projector sum on random operators.
    TwirlCheck(TwirlArgs),
    /// Operator norm of random block tensors satisfying the contraction preconditions.
    BlocknormCheck,
    /// Subtype enumeration audit and the subtype reduction inequality.
    SubtypeAudit(AuditArgs),
    /// Cloning value against its monogamy rewriting on random strategies.
    EquivCheck(EquivArgs),
    /// Every step of the t-copy bound on random restricted strategies.
    TcopyChain(ChainArgs),
    /// Frame potentials and mixed-moment identities of unitary ensembles.
    DesignCheck(DesignArgs),
    /// Worst-case to average-case transformation against adversarial unitaries.
    Wc2ac(Wc2acArgs),
    /// Black-hole cloning game value and the post-selection chain.
    Blackhole(BlackholeArgs),
    /// Maximum pairwise overlap of salted binary phase bases.
    SaltedOverlap(SaltedArgs),
    /// Deterministic-guess strategy against real basis ensembles.
    Counterexample(CounterexampleArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Bb84(_) => "bb84",
            Command::TwirlCheck(_) => "twirl-check",
            Command::BlocknormCheck => "blocknorm-check",
            Command::SubtypeAudit(_) => "subtype-audit",
            Command::EquivCheck(_) => "equiv-check",
            Command::TcopyChain(_) => "tcopy-chain",
            Command::DesignCheck(_) => "design-check",
            Command::Wc2ac(_) => "wc2ac",
            Command::Blackhole(_) => "blackhole",
            Command::SaltedOverlap(_) => "salted-overlap",
            Command::Counterexample(_) => "counterexample",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Bb84Args {
    /// Parallel repetitions of the BB84 game.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub r: u8,
}

#[derive(Debug, Clone, Args)]
pub struct TwirlArgs {
    /// Bits per index; the alphabet has 2^n symbols and the family all 2^(2^n) functions.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub n: u8,
    /// Tensor positions.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub r: u8,
    /// Dimension of the untouched auxiliary factor.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub aux: u8,
}

#[derive(Debug, Clone, Args)]
pub struct AuditArgs {
    /// Largest alphabet size audited.
    #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u8).range(1..=4))]
    pub max_alphabet: u8,
    /// Largest number of positions audited.
    #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u8).range(1..=5))]
    pub max_r: u8,
}

#[derive(Debug, Clone, Args)]
pub struct EquivArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub n_max: u8,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub t_max: u8,
}

#[derive(Debug, Clone, Args)]
pub struct ChainArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub n_max: u8,
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub t_max: u8,
    /// Largest number of auxiliary qubits per player.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub a_max: u8,
    /// How many trials use the costliest shape (n, t, a) = (2, 2, 1); the rest
    /// cycle through the other shapes.
    #[arg(long, default_value_t = 2)]
    pub heavy: usize,
    /// Only compare the direct and type-decomposed values.
    #[arg(long)]
    pub value_only: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EnsembleKind {
    Clifford,
    Pauli,
    Haar,
    File,
}

#[derive(Debug, Clone, Args)]
pub struct DesignArgs {
    #[arg(long, value_enum, default_value_t = EnsembleKind::Clifford)]
    pub ensemble: EnsembleKind,
    /// Qubits.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub n: u8,
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub t_max: u8,
    /// Haar samples.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Ensemble file for `--ensemble file`.
    #[arg(long, required_if_eq("ensemble", "file"))]
    pub file: Option<PathBuf>,
    /// Design order claimed for a file ensemble.
    #[arg(long)]
    pub order: Option<usize>,
    /// Write the listed ensemble to this JSON file.
    #[arg(long)]
    pub export: Option<PathBuf>,
    /// Check the swap/partial-transpose identity on random ensembles instead.
    #[arg(long)]
    pub mixed: bool,
}

#[derive(Debug, Clone, Args)]
pub struct Wc2acArgs {
    /// Qubits; the twirling ensemble is the Clifford group on n qubits.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub n: u8,
    /// Largest number of auxiliary qubits per player.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(0..=1))]
    pub a_max: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ChannelKind {
    /// Every scrambled qubit leaves as radiation.
    Identity,
    /// Random Kraus channels with random single-query observers.
    Random,
}

#[derive(Debug, Clone, Args)]
pub struct BlackholeArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub n: u8,
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub k: u8,
    #[arg(long, value_enum, default_value_t = ChannelKind::Identity)]
    pub channel: ChannelKind,
    #[arg(long, value_enum, default_value_t = ScramblerKind::Clifford)]
    pub ensemble: ScramblerKind,
    /// Haar samples per instance in Monte-Carlo mode.
    #[arg(long, default_value_t = 2000)]
    pub samples: usize,
    /// Experiment config; replaces the other black-hole flags.
    #[arg(long, conflicts_with_all = ["n", "k", "channel", "ensemble", "samples"])]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SaltedArgs {
    /// Salt bits.
    #[arg(long, default_value_t = 4)]
    pub m: usize,
    /// Input bits.
    #[arg(long, default_value_t = 10)]
    pub n: usize,
    /// Fraction of trials that must stay at or under the bound.
    #[arg(long, default_value_t = 0.9)]
    pub fraction: f64,
}

#[derive(Debug, Clone, Args)]
pub struct CounterexampleArgs {
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=2))]
    pub n_max: u8,
    /// Copies.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(1..=3))]
    pub t: u8,
}
