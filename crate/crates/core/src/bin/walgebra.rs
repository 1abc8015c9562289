use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use walgebra::cli::{
    cmd_affine_bracket, cmd_finite_bracket, cmd_hierarchy, cmd_info, cmd_verify, exit_code, AlgebraSpec, Format, Job,
    JobConfig, Lagrangian, Outcome, SSpec,
};
use walgebra::{Error, Result};

/// Exact classical W-algebras and Drinfeld-Sokolov hierarchies.
#[derive(Parser, Debug)]
#[command(name = "walgebra", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Dimensions, grading, g^f / g^e bases and the isotropic choice.
    Info(JobArgs),
    /// The finite W-algebra bracket table on S(g^f).
    FiniteBracket(JobArgs),
    /// The affine lambda-bracket table, split into z^0 and z^1 parts.
    AffineBracket(JobArgs),
    /// Conserved densities and flows of the hierarchy.
    Hierarchy(JobArgs),
    /// Axiom suite and formula-versus-reduction checks.
    Verify(JobArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Latex,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LagrangianArg {
    Greedy,
    Reversed,
}

#[derive(Args, Debug)]
struct JobArgs {
    /// JSON job file; flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Built-in algebra, e.g. `sl:3`.
    #[arg(long, conflicts_with = "algebra_file")]
    algebra: Option<String>,
    /// Structure-constants JSON file.
    #[arg(long)]
    algebra_file: Option<PathBuf>,
    /// Jordan block sizes, e.g. `2,1`.
    #[arg(long, value_delimiter = ',')]
    partition: Option<Vec<usize>>,
    /// `default` or comma-separated coordinates.
    #[arg(long)]
    s: Option<String>,
    #[arg(long, value_enum)]
    lagrangian: Option<LagrangianArg>,
    /// Number of conserved densities.
    #[arg(long)]
    depth: Option<usize>,
    /// Degree of random samples for `verify`.
    #[arg(long)]
    degree: Option<u32>,
    /// Number of random samples for `verify`.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Compare the output with this file instead of printing it.
    #[arg(long)]
    golden: Option<PathBuf>,
}

impl JobArgs {
    fn config(&self) -> Result<JobConfig> {
        let mut cfg = match &self.config {
            Some(p) => JobConfig::load(p)?,
            None => JobConfig::default(),
        };
        if let Some(a) = &self.algebra {
            cfg.algebra = Some(AlgebraSpec::parse(a)?);
        }
        if let Some(p) = &self.algebra_file {
            cfg.algebra = Some(AlgebraSpec::File(p.clone()));
        }
        if let Some(p) = &self.partition {
            cfg.partition = Some(p.clone());
            cfg.triple = None;
        }
        if let Some(s) = &self.s {
            cfg.s = SSpec::parse(s)?;
        }
        if let Some(l) = self.lagrangian {
            cfg.lagrangian = match l {
                LagrangianArg::Greedy => Lagrangian::Greedy,
                LagrangianArg::Reversed => Lagrangian::Reversed,
            };
        }
        cfg.depth = self.depth.unwrap_or(cfg.depth);
        cfg.degree = self.degree.unwrap_or(cfg.degree);
        cfg.samples = self.samples.unwrap_or(cfg.samples);
        cfg.seed = self.seed.unwrap_or(cfg.seed);
        if let Some(f) = self.format {
            cfg.format = match f {
                FormatArg::Json => Format::Json,
                FormatArg::Latex => Format::Latex,
            };
        }
        Ok(cfg)
    }
}

fn run(cmd: fn(&Job) -> Result<Outcome>, args: &JobArgs) -> ExitCode {
    let outcome = args.config().and_then(Job::new).and_then(|job| cmd(&job));
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e) as u8);
        }
    };
    match &args.golden {
        Some(path) => match std::fs::read_to_string(path) {
            Ok(expected) if expected == outcome.text => {}
            Ok(_) => {
                eprintln!("output differs from {}", path.display());
                return ExitCode::from(1);
            }
            Err(e) => {
                eprintln!("error: {}", Error::from(e));
                return ExitCode::from(2);
            }
        },
        None => print!("{}", outcome.text),
    }
    if outcome.verified {
        ExitCode::SUCCESS
    } else {
        eprintln!("verification failed");
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match &cli.command {
        Command::Info(a) => run(cmd_info, a),
        Command::FiniteBracket(a) => run(cmd_finite_bracket, a),
        Command::AffineBracket(a) => run(cmd_affine_bracket, a),
        Command::Hierarchy(a) => run(cmd_hierarchy, a),
        Command::Verify(a) => run(cmd_verify, a),
    }
}
