mod commands;
mod report;
mod wittexpr;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Symbol-length decompositions over rational function fields, with
/// independently checkable certificates.
#[derive(Parser)]
#[command(name = "symlen", version)]
struct Cli {
    /// Allow parameters above the desk caps (p ≤ 5, m ≤ 4, n ≤ 3, r ≤ 4, k ≤ 3).
    #[arg(long, global = true)]
    no_caps: bool,
    /// Run sequentially.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate a Witt vector expression: + - int* frob() shift(,l) trunc(,l).
    Wittcalc(WittcalcArgs),
    /// Test elements for p-independence.
    Pdep(PdepArgs),
    /// Generate instances with planted witnesses.
    Gen(GenArgs),
    /// Decompose an instance and write the outputs and certificate.
    Decompose(DecomposeArgs),
    /// Check a certificate.
    Verify(VerifyArgs),
    /// Bounded search for an Artin–Schreier witness.
    Search(SearchArgs),
}

#[derive(Args)]
pub struct WittcalcArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long)]
    pub m: usize,
    /// Comma-separated variable names.
    #[arg(long, default_value = "t")]
    pub vars: String,
    pub expr: String,
}

#[derive(Args)]
pub struct PdepArgs {
    /// Field header, e.g. "field p=2 vars=x,y".
    #[arg(long)]
    pub field: String,
    /// Comma-separated elements.
    #[arg(long)]
    pub elems: String,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Provider {
    /// Witnesses from the witness file only.
    File,
    /// Bounded search where the witness file has none.
    Search,
}

#[derive(Args)]
pub struct GenArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(3..=5))]
    pub theorem: u8,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    #[arg(long, default_value_t = 2)]
    pub m: usize,
    /// Number of slots (theorems 3 and 5).
    #[arg(long)]
    pub n: Option<usize>,
    /// Number of symbols (theorem 4).
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of variables.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub deg: u32,
    /// Generate seeds seed, seed+1, … seed+N-1.
    #[arg(long)]
    pub batch: Option<u64>,
    /// With `--theorem 4`: write only the top level's witness.
    #[arg(long)]
    pub top_only: bool,
    /// Output prefix; writes <prefix>.instance and <prefix>.witness
    /// (<prefix>-<seed>.* in batch mode).
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Args)]
pub struct DecomposeArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(3..=5))]
    pub theorem: u8,
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub cert: PathBuf,
    #[arg(long, value_enum, default_value_t = Provider::File)]
    pub provider: Provider,
    /// Search bound: total degree.
    #[arg(long, default_value_t = 1)]
    pub deg: u32,
    /// Search bound: monomial support.
    #[arg(long, default_value_t = 3)]
    pub support: usize,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub cert: PathBuf,
}

#[derive(Args)]
pub struct SearchArgs {
    /// Field header, e.g. "field p=2 vars=x,y".
    #[arg(long)]
    pub field: String,
    #[arg(long)]
    pub alpha: String,
    /// Comma-separated slots.
    #[arg(long)]
    pub betas: String,
    #[arg(long, default_value_t = 1)]
    pub deg: u32,
    #[arg(long, default_value_t = 3)]
    pub support: usize,
    /// Also write the witness to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.sequential {
        symlen::par::set_enabled(false);
    }
    let caps = !cli.no_caps;
    let result = match &cli.cmd {
        Cmd::Wittcalc(a) => commands::wittcalc(a, caps),
        Cmd::Pdep(a) => commands::pdep(a, caps),
        Cmd::Gen(a) => commands::gen(a, caps),
        Cmd::Decompose(a) => commands::decompose(a, caps),
        Cmd::Verify(a) => commands::verify(a),
        Cmd::Search(a) => commands::search(a, caps),
    };
    match result {
        Ok(report) => {
            print!("{report}");
            ExitCode::SUCCESS
        }
        Err((report, fail)) => {
            print!("{report}");
            println!("{fail}");
            fail.exit()
        }
    }
}
