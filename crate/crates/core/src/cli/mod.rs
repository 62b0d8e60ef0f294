//! Command-line campaign runner.

pub mod bodyfile;
pub mod campaign;
pub mod report;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::error::Result;
use crate::par::with_workers;

pub use bodyfile::{emit_bodies, parse_body_file, parse_body_str};
pub use campaign::{run_campaign, BodySource, CampaignConfig, Suite, SuiteOutcome};
pub use report::{Format, Record};

pub const SEED_ENV: &str = "CURVEDKIN_SEED";
pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "curvedkin", version, about = "Verify kinematic and Bonnesen-type inequalities on constant-curvature surfaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Area, perimeter and radii of every body.
    Metrics(CommonArgs),
    /// Monte Carlo kinematic integrals against the closed form.
    VerifyKinematic(CommonArgs),
    /// Containment witnesses and perimeter monotonicity.
    VerifyContainment(CommonArgs),
    /// Isoperimetric deficits, Bonnesen-type bounds and root witnesses.
    VerifyBonnesen(CommonArgs),
    /// Bounds as κ → 0 against the Euclidean Bonnesen term.
    SweepKappa(CommonArgs),
    /// Every suite.
    All(CommonArgs),
}

impl Command {
    pub fn parts(&self) -> (&CommonArgs, Vec<Suite>) {
        match self {
            Command::Metrics(a) => (a, vec![Suite::Metrics]),
            Command::VerifyKinematic(a) => (a, vec![Suite::Kinematic]),
            Command::VerifyContainment(a) => (a, vec![Suite::Containment]),
            Command::VerifyBonnesen(a) => (a, vec![Suite::Bonnesen]),
            Command::SweepKappa(a) => (a, vec![Suite::Sweep]),
            Command::All(a) => (a, Suite::ALL.to_vec()),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Campaign seed; falls back to $CURVEDKIN_SEED, then 42.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Curvature to test; repeat for several.
    #[arg(long = "kappa", allow_negative_numbers = true, default_values_t = [-1.0, 0.0, 1.0])]
    pub kappas: Vec<f64>,
    /// Monte Carlo samples per kinematic integral.
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,
    /// Random bodies per curvature.
    #[arg(long, default_value_t = 20)]
    pub count: usize,
    #[arg(long, default_value_t = 12)]
    pub max_vertices: usize,
    /// Read bodies from a file instead of generating them.
    #[arg(long, conflicts_with = "disc_radius")]
    pub body_file: Option<PathBuf>,
    /// Use one regular polygon of this circumradius per curvature.
    #[arg(long)]
    pub disc_radius: Option<f64>,
    #[arg(long, default_value_t = 64)]
    pub disc_sides: usize,
    /// Score evaluations allowed per containment search.
    #[arg(long, default_value_t = 100_000)]
    pub budget: u64,
    /// Report directory.
    #[arg(long, default_value = "reports")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
}

fn env_seed() -> Result<Option<u64>> {
    match std::env::var(SEED_ENV) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| crate::Error::Config(format!("{SEED_ENV}: not an unsigned integer: '{s}'"))),
        Err(_) => Ok(None),
    }
}

impl CommonArgs {
    pub fn config(&self, suites: Vec<Suite>) -> Result<CampaignConfig> {
        let seed = match self.seed {
            Some(s) => s,
            None => env_seed()?.unwrap_or(DEFAULT_SEED),
        };
        let bodies = if let Some(path) = &self.body_file {
            BodySource::FromFile(path.clone())
        } else if let Some(radius) = self.disc_radius {
            BodySource::DiscNgon {
                radius,
                sides: self.disc_sides,
            }
        } else {
            BodySource::Random {
                count: self.count,
                max_vertices: self.max_vertices,
            }
        };
        let cfg = CampaignConfig {
            seed,
            kappas: self.kappas.clone(),
            bodies,
            mc_samples: self.samples,
            containment_budget: self.budget,
            output: self.out.clone(),
            format: self.format,
            suites,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Runs a parsed command. Returns whether every checked row passed.
pub fn run(cli: &Cli) -> Result<bool> {
    let (args, suites) = cli.command.parts();
    let cfg = args.config(suites)?;
    let outcomes = with_workers(args.workers, || run_campaign(&cfg))?;
    let mut ok = true;
    for o in &outcomes {
        println!(
            "{:<12} rows {:>5}  checked {:>5}  failed {:>3}  -> {}",
            o.suite.name(),
            o.records.len(),
            o.checked(),
            o.failed(),
            o.path.display()
        );
        ok &= o.failed() == 0;
    }
    Ok(ok)
}
