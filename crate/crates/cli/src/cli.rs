use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "deadend",
    version,
    about = "Word metrics, dead-end depth and deep generating sets",
    args_override_self = true
)]
pub struct Cli {
    /// Flat `key = value` file supplying defaults for any flag
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,

    /// Log more (repeat for debug output)
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a generating set with a deep dead end and verify it
    Construct(ConstructArgs),
    /// Re-run the verification, optionally at a smaller radius or against a saved report
    Verify(VerifyArgs),
    /// Factorize one element over the constructed generating set
    Certify(CertifyArgs),
    /// Depth of a single element
    Depth(DepthArgs),
    /// Depth of every element of a ball
    Profile(ProfileArgs),
    /// Enumerate a ball and its sphere sizes
    Ball(BallArgs),
    /// Diameter of a finite group
    Diameter(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Group: zz, zz^r, grid:r, cyclic:m, dihedral:m, lamplighter or table:FILE
    #[arg(long)]
    pub group: Option<String>,

    /// Generators, inline (`1,2`) or `@FILE` with a JSON list; defaults to the standard ones
    #[arg(long)]
    pub gens: Option<String>,

    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,

    /// Directory for cached balls
    #[arg(long, value_name = "DIR")]
    pub cache_dir: Option<PathBuf>,

    #[arg(long, default_value_t = 10_000_000)]
    pub budget_elements: usize,

    #[arg(long, default_value_t = 10_000)]
    pub budget_radius: u32,

    #[arg(long, default_value_t = 600)]
    pub budget_seconds: u64,
}

#[derive(Args, Debug, Clone)]
pub struct ConstructionArgs {
    /// cyclic:M, cyclic-family[:MAX], dihedral:M or table:FILE
    #[arg(long)]
    pub quotient: Option<String>,

    /// How to search a quotient family: paper-safe or greedy
    #[arg(long, default_value = "greedy")]
    pub quotient_mode: String,

    /// Depth the construction must certify (at least 2)
    #[arg(long)]
    pub target_depth: Option<u32>,

    /// Ball radius bound: paper or tight
    #[arg(long, default_value = "paper")]
    pub bound_mode: String,
}

#[derive(Args, Debug, Clone)]
pub struct ConstructArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub construction: ConstructionArgs,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub construction: ConstructionArgs,

    /// Check the neighbourhood of this radius instead of d
    #[arg(long)]
    pub radius: Option<u32>,

    /// Re-check a report written by `construct` or `verify`
    #[arg(long, value_name = "PATH")]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub construction: ConstructionArgs,

    #[arg(long)]
    pub element: String,
}

#[derive(Args, Debug, Clone)]
pub struct DepthArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    #[arg(long)]
    pub element: String,

    /// Radius of the ball to search in; at least the element's norm
    #[arg(long)]
    pub radius: u32,

    /// Search cap; defaults to 2 * radius + 1
    #[arg(long)]
    pub cap: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    #[arg(long)]
    pub radius: u32,

    /// Search cap; defaults to 2 * radius + 1
    #[arg(long)]
    pub cap: Option<u32>,

    /// Also write (element, norm, depth) rows here
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BallArgs {
    #[command(flatten)]
    pub common: CommonArgs,

    #[arg(long)]
    pub radius: u32,

    /// Also write (element, norm) rows here
    #[arg(long, value_name = "PATH")]
    pub csv: Option<PathBuf>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Construct(_) => "construct",
            Command::Verify(_) => "verify",
            Command::Certify(_) => "certify",
            Command::Depth(_) => "depth",
            Command::Profile(_) => "profile",
            Command::Ball(_) => "ball",
            Command::Diameter(_) => "diameter",
        }
    }

    pub fn common(&self) -> &CommonArgs {
        match self {
            Command::Construct(a) => &a.common,
            Command::Verify(a) => &a.common,
            Command::Certify(a) => &a.common,
            Command::Depth(a) => &a.common,
            Command::Profile(a) => &a.common,
            Command::Ball(a) => &a.common,
            Command::Diameter(a) => a,
        }
    }
}
