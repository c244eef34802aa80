use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use diffcheb::diffpoly::{parse_poly, DifferencePolynomial};
use diffcheb::diffvar::{Base, DiffSystem};
use diffcheb::ideals::{perfect_membership_bounded, IdealBounds};
use diffcheb_cli::{exit, precision_bits_from_env, run, validate, write_artifacts, CliError, ExperimentConfig, RunOptions};

#[derive(Parser, Debug)]
#[command(name = "diffcheb", version, about = "Twisted Chebotarev experiments on difference schemes")]
struct Cli {
    /// Override the config seed
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 1 runs sequentially
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Enumeration budget in points
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Directory for relative output paths
    #[arg(long, global = true)]
    out_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run the experiment described by a config file
    Run { config: PathBuf },
    /// Parse a config, build its cover and list the conjugacy domains
    Validate { config: PathBuf },
    /// Bounded perfect-closure membership of one polynomial
    IdealMember {
        #[arg(long)]
        p: u64,
        /// size of the constant field; defaults to p
        #[arg(long)]
        q: Option<u64>,
        #[arg(long, default_value_t = 1)]
        q0: u64,
        /// comma-separated variable names
        #[arg(long)]
        vars: String,
        /// a generator; repeat for several
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
        /// candidate member
        #[arg(long)]
        f: String,
        #[arg(long, default_value_t = 2)]
        k: u32,
        #[arg(long, default_value_t = 2)]
        l: u32,
        #[arg(long, default_value_t = 2)]
        m: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    let ro = RunOptions {
        seed: cli.seed,
        threads: cli.threads,
        budget: cli.budget,
        out_dir: cli.out_dir,
        precision_bits: precision_bits_from_env()?,
    };
    match cli.command {
        Command::Run { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            let outcome = run(&cfg, &ro)?;
            for line in &outcome.summary {
                println!("{line}");
            }
            for path in write_artifacts(&cfg, &outcome, &ro)? {
                println!("wrote {}", path.display());
            }
            Ok(if outcome.pass { exit::PASS } else { exit::FAIL })
        }
        Command::Validate { config } => {
            let cfg = ExperimentConfig::load(&config)?;
            for line in validate(&cfg, &ro)? {
                println!("{line}");
            }
            Ok(exit::PASS)
        }
        Command::IdealMember {
            p,
            q,
            q0,
            vars,
            gens,
            f,
            k,
            l,
            m,
        } => {
            let base = Base::new(p, q.unwrap_or(p), q0)?;
            let vars: Vec<String> = vars.split(',').map(|v| v.trim().to_string()).collect();
            let sys = DiffSystem::parse(base, &vars, &gens, &[], None)?;
            let f: DifferencePolynomial = parse_poly(sys.ring(), &f)?;
            match perfect_membership_bounded(&f, sys.equations(), &IdealBounds::new(k, l, m), base.b())?.witness() {
                Some(nu) => println!("yes: ν = {nu}"),
                None => println!("no within bounds (k = {k}, L = {l}, M = {m})"),
            }
            Ok(exit::PASS)
        }
    }
}
