mod run;

use clap::{Args, Parser, Subcommand, ValueEnum};
use epsilogic::rat::{fmt_rational, in_unit_interval, parse_rational, Rational};
use std::path::PathBuf;
use std::process::ExitCode;

/// Threshold-measure logics over finite probability models.
///
/// Exit codes: 0 true/satisfiable/valid, 1 false/unsatisfiable/invalid,
/// 2 budget exhausted, 64 usage or input error.
#[derive(Debug, Parser)]
#[command(name = "epsilogic", version)]
pub struct Cli {
    /// Human-readable text or line-parseable machine output.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Machine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Semantics {
    #[value(name = "E", alias = "e")]
    E,
    #[value(name = "F", alias = "f")]
    F,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Problem {
    #[value(name = "0f-valid")]
    FValid,
    #[value(name = "0e-sat")]
    ESat,
    #[value(name = "0f-valid-countable")]
    FValidCountable,
    #[value(name = "0e-sat-countable")]
    ESatCountable,
}

#[derive(Debug, Args)]
pub struct SentenceArgs {
    /// Signature file (`pred P 1`, `const c`, `equality` lines).
    #[arg(long)]
    pub sig: PathBuf,
    /// File holding one s-expression formula or q-sentence.
    #[arg(long)]
    pub formula: PathBuf,
}

#[derive(Debug, Args)]
pub struct Reading {
    /// Which logic reads a plain formula; without it a prenex formula is a
    /// q-sentence with classical quantifiers. Not allowed with q-sentences.
    #[arg(long, value_enum)]
    pub semantics: Option<Semantics>,
    /// Threshold ε as `p/q`; required with `--semantics`.
    #[arg(long, value_name = "P/Q", value_parser = unit_rational)]
    pub epsilon: Option<Rational>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluates a sentence on a model file.
    Check {
        #[command(flatten)]
        input: SentenceArgs,
        /// Model file.
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        reading: Reading,
        /// Writes a satisfying q-tree when the sentence holds.
        #[arg(long, value_name = "PATH")]
        witness: Option<PathBuf>,
    },
    /// Decides satisfiability over a monadic relational signature.
    DecideMonadic {
        #[command(flatten)]
        input: SentenceArgs,
        #[command(flatten)]
        reading: Reading,
        /// Writes the witness model when satisfiable.
        #[arg(long, value_name = "PATH")]
        witness: Option<PathBuf>,
        /// Writes the q-tree certificate when satisfiable.
        #[arg(long, value_name = "PATH")]
        tree: Option<PathBuf>,
    },
    /// Decides ε = 0 validity or satisfiability of an equality-free sentence.
    DecideZero {
        #[command(flatten)]
        input: SentenceArgs,
        #[arg(long, value_enum)]
        problem: Problem,
        /// Writes the witness (satisfiable) or countermodel (invalid).
        #[arg(long, value_name = "PATH")]
        witness: Option<PathBuf>,
    },
    /// Searches finite models up to a weight budget.
    EnumSat {
        #[command(flatten)]
        input: SentenceArgs,
        #[arg(long, value_enum)]
        semantics: Semantics,
        #[arg(long, value_name = "P/Q", value_parser = unit_rational)]
        epsilon: Rational,
        /// Largest weight total.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        budget: u64,
        /// Largest universe; defaults to the budget (at least 3).
        #[arg(long)]
        max_size: Option<usize>,
        /// Worker threads.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        jobs: u64,
        /// Writes the witness model when found.
        #[arg(long, value_name = "PATH")]
        witness: Option<PathBuf>,
    },
    /// Builds the halting encoding of a Turing machine.
    EncodeTm {
        /// Machine file (`states:`, `init:`, `accept:`, `reject:`, transitions).
        #[arg(long)]
        tm: PathBuf,
        /// Simulation bound.
        #[arg(long, default_value_t = 100)]
        max_steps: usize,
        /// Checks every part on the witness model of a halting run.
        #[arg(long)]
        verify: bool,
        /// Adds the irreflexivity axiom for `lt`.
        #[arg(long)]
        strict_order: bool,
        /// Writes the witness model of a halting run.
        #[arg(long, value_name = "PATH")]
        witness: Option<PathBuf>,
        /// Writes the signature to `DIR/encoding.sig` and each part to
        /// `DIR/part-NN.sx`.
        #[arg(long, value_name = "DIR")]
        emit: Option<PathBuf>,
    },
    /// Collapses a monadic model to one element per occupied cell.
    Quotient {
        #[arg(long)]
        sig: PathBuf,
        #[arg(long)]
        model: PathBuf,
        /// Writes the quotient here instead of standard output.
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Application sentence families.
    Corpus {
        #[command(subcommand)]
        action: CorpusAction,
    },
}

#[derive(Debug, Subcommand)]
pub enum CorpusAction {
    /// Lists entry names.
    List,
    /// Writes `NAME.sig`, `NAME.sx` (the conjunction) and `NAME-K.sx` (sentence K).
    Emit {
        name: String,
        /// Number of attribute predicates for the PAC entries.
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=16))]
        s: u64,
        /// Last time step for the network entry.
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..=64))]
        tmax: u64,
        /// Output directory; standard output when absent.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

fn unit_rational(s: &str) -> Result<Rational, String> {
    let r = parse_rational(s).map_err(|e| e.to_string())?;
    if !in_unit_interval(&r) {
        return Err(format!("{} is outside [0,1]", fmt_rational(&r)));
    }
    Ok(r)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(run::USAGE),
            };
        }
    };
    match run::run(&cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(run::USAGE)
        }
    }
}
