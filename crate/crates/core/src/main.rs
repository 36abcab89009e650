use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use meshalkin::cli::{self, Construction, SearchOptions};
use meshalkin::oracle::SearchLimits;

#[derive(Parser)]
#[command(name = "meshalkin")]
#[command(
    about = "Bounds, verification and exhaustive search for componentwise r-chain-free composition families"
)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, ValueEnum)]
enum ConstructionArg {
    /// All compositions of the balanced shape (r = 1 extremal)
    Balanced,
    /// A set and its complement for every set in the r largest levels (p = 2)
    Erdos,
}

#[derive(Subcommand)]
enum Command {
    /// Sum of the r^(p-1) largest p-multinomial coefficients for n
    Bound {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        r: u64,
        /// List the coefficients used and the zero padding
        #[arg(long)]
        list: bool,
    },

    /// Check a family file against the hypothesis, the LYM sum and the bound
    Verify {
        /// Family document, or - for standard input
        file: PathBuf,
        #[arg(long)]
        r: u64,
        /// Also constrain the last component
        #[arg(long)]
        strict: bool,
    },

    /// Emit an extremal construction as a family document
    Extremal {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 1)]
        r: u64,
        #[arg(long, value_enum)]
        construction: ConstructionArg,
        /// Write to this file instead of standard output
        #[arg(long)]
        output: Option<PathBuf>,
    },

    /// Find the largest valid family by exhaustive search
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        r: u64,
        /// Worker threads
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Stop after this many seconds and report a lower bound
        #[arg(long)]
        time_limit: Option<f64>,
        /// Stop after this many search nodes and report a lower bound
        #[arg(long)]
        node_limit: Option<u64>,
        /// Do not prune with the LYM budget or the cardinality bound
        #[arg(long)]
        no_bound_pruning: bool,
        /// Also constrain the last component
        #[arg(long)]
        strict: bool,
        /// Print the witness family document after the report
        #[arg(long)]
        witness: bool,
        /// Write the witness family document to this file
        #[arg(long)]
        witness_output: Option<PathBuf>,
    },

    /// Run the built-in identity suite
    Selfcheck,
}

fn main() -> ExitCode {
    let args = Cli::parse();
    let mut out = io::stdout().lock();
    let mut err = io::stderr().lock();
    let code = match args.command {
        Command::Bound { n, p, r, list } => cli::cmd_bound(n, p, r, list, &mut out, &mut err),
        Command::Verify { file, r, strict } => {
            cli::cmd_verify(&file, r, strict, &mut out, &mut err)
        }
        Command::Extremal {
            n,
            p,
            r,
            construction,
            output,
        } => {
            let construction = match construction {
                ConstructionArg::Balanced => Construction::Balanced,
                ConstructionArg::Erdos => Construction::Erdos,
            };
            cli::cmd_extremal(n, p, r, construction, output.as_deref(), &mut out, &mut err)
        }
        Command::Search {
            n,
            p,
            r,
            threads,
            time_limit,
            node_limit,
            no_bound_pruning,
            strict,
            witness,
            witness_output,
        } => {
            let time_cap = match time_limit.map(cli::seconds) {
                Some(None) => {
                    eprintln!("error: --time-limit must be a nonnegative number of seconds");
                    return ExitCode::from(cli::EXIT_USAGE);
                }
                Some(cap) => cap,
                None => None,
            };
            let options = SearchOptions {
                limits: SearchLimits {
                    node_cap: node_limit,
                    time_cap,
                    threads,
                    bound_pruning: !no_bound_pruning,
                },
                strict,
                print_witness: witness,
                witness_output,
            };
            cli::cmd_search(n, p, r, &options, &mut out, &mut err)
        }
        Command::Selfcheck => cli::cmd_selfcheck(&mut out),
    };
    ExitCode::from(code)
}
