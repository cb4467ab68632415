use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use regmod::verify::Fault;
use regmod::BasisStrategy;
use regmod_cli::commands::{cmd_basis, cmd_gen, cmd_iso, cmd_member, cmd_passport, cmd_verify};

/// Classify finitely generated modules over K^atoms by their passport.
#[derive(Parser)]
#[command(name = "regmod", version)]
struct Cli {
    /// Emit structured output as JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Strategy {
    First,
    Last,
}

#[derive(Subcommand)]
enum Command {
    /// Print the passport of a module file.
    Passport { file: PathBuf },
    /// Decide whether two modules are isomorphic (exit 0 yes, 1 no).
    Iso {
        a: PathBuf,
        b: PathBuf,
        /// Also print an explicit isomorphism.
        #[arg(long)]
        emit_map: bool,
    },
    /// Extract a basis on a constant-rank piece, e.g. `--piece q1,q3`.
    Basis {
        file: PathBuf,
        #[arg(long)]
        piece: String,
        #[arg(long, value_enum, default_value = "first")]
        strategy: Strategy,
    },
    /// Test whether a vector lies in the module (exit 0 yes, 1 no).
    Member {
        file: PathBuf,
        #[arg(long)]
        vector: PathBuf,
        /// Restrict the test to a piece.
        #[arg(long)]
        piece: Option<String>,
    },
    /// Run the randomized property suite.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: usize,
        /// Corrupt the engine on purpose to check the suite catches it.
        #[arg(long, hide = true)]
        fault: Option<Fault>,
    },
    /// Print a pseudorandom module file.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        atoms: usize,
        #[arg(long)]
        ambient: usize,
        #[arg(long)]
        gens: usize,
        /// `fp:<p>` or `rational`.
        #[arg(long)]
        field: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = match &cli.command {
        Command::Passport { file } => cmd_passport(file, cli.json),
        Command::Iso { a, b, emit_map } => cmd_iso(a, b, *emit_map, cli.json),
        Command::Basis {
            file,
            piece,
            strategy,
        } => {
            let strategy = match strategy {
                Strategy::First => BasisStrategy::FirstFit,
                Strategy::Last => BasisStrategy::LastFit,
            };
            cmd_basis(file, piece, strategy, cli.json)
        }
        Command::Member {
            file,
            vector,
            piece,
        } => cmd_member(file, vector, piece.as_deref(), cli.json),
        Command::Verify { seed, cases, fault } => cmd_verify(*seed, *cases, *fault, cli.json),
        Command::Gen {
            seed,
            atoms,
            ambient,
            gens,
            field,
        } => cmd_gen(*seed, *atoms, *ambient, *gens, field),
    };
    // a closed pipe is not worth a panic
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
